//! Second-quantized quantum cellular automata on small lattices.

pub mod fock;
pub mod free;
pub mod gauge;

pub use fock::{Budget, FockSpace, ManyBodyOperator};
pub use free::{build_free_step, FreeQca};
pub use gauge::{build_interacting_step, GaugeLatticeSpace, InteractingQca, LinkEdge};
