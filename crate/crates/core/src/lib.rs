pub mod error;
pub mod lattice;
pub mod optim;
pub mod qca;
pub mod scan;
pub mod spin;
pub mod walk1d;
pub mod walk3d;
