//! Weyl and Dirac walks in three spatial dimensions.
//!
//! Each axis gets its own one-dimensional factor
//! `K_j(p) = e^{−ipσ^j_θ/2} e^{−ipσ^j_{−θ}/2}` built from the axis-cycled
//! rotated Paulis. The two Weyl walks are the ordered products
//! `K⁺ = K_z K_y K_x` and `K⁻ = K_z† K_y† K_x†`, and the Dirac walk is
//! `U = e^{−imβ} (K⁺ ⊕ K⁻)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::ops::{Add, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{
    exp_neg_i, exp_neg_i_involution, pauli, rotated_pauli_3d, wrap_phase, Axis, SpinMatrix, C64,
};
use crate::walk1d::{check_mass, check_theta};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Walk3DParams {
    theta: f64,
    mass_dt: f64,
    extended_theta: bool,
}

impl Walk3DParams {
    /// `θ ∈ (−π/2, π/2)`, `mass_dt ∈ [0, π)`.
    pub fn new(theta: f64, mass_dt: f64) -> Result<Self> {
        check_theta(theta, false)?;
        check_mass(mass_dt)?;
        Ok(Walk3DParams {
            theta,
            mass_dt,
            extended_theta: false,
        })
    }

    /// Accepts `θ ∈ (−π, π)`.
    pub fn extended(theta: f64, mass_dt: f64) -> Result<Self> {
        check_theta(theta, true)?;
        check_mass(mass_dt)?;
        Ok(Walk3DParams {
            theta,
            mass_dt,
            extended_theta: true,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mass_dt(&self) -> f64 {
        self.mass_dt
    }

    pub fn is_extended(&self) -> bool {
        self.extended_theta
    }

    pub fn bound_applies(&self) -> bool {
        (0.0..FRAC_PI_2).contains(&self.theta)
    }

    /// `3(π − 2θ) + mc²δt`.
    pub fn energy_bound(&self) -> f64 {
        3.0 * (PI - 2.0 * self.theta) + self.mass_dt
    }

    /// Per-axis bound `π − 2θ` on the eigenphases of each `K_j`.
    pub fn axis_bound(&self) -> f64 {
        PI - 2.0 * self.theta
    }
}

/// Lattice momentum `p·δx`, one component per axis, each in `(−π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumVec(pub [f64; 3]);

impl MomentumVec {
    pub const ZERO: MomentumVec = MomentumVec([0.0; 3]);

    /// Validating constructor.
    pub fn new(p: [f64; 3]) -> Result<Self> {
        for &c in &p {
            if !c.is_finite() || c <= -PI || c > PI {
                return Err(Error::InvalidParameter(format!(
                    "momentum component {c} outside (-pi, pi]"
                )));
            }
        }
        Ok(MomentumVec(p))
    }

    /// Maps every component into `(−π, π]`.
    pub fn wrapped(p: [f64; 3]) -> Self {
        MomentumVec(p.map(wrap_phase))
    }

    pub fn diagonal(p: f64) -> Self {
        MomentumVec::wrapped([p; 3])
    }

    pub fn get(&self, axis: Axis) -> f64 {
        self.0[axis.index()]
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Euclidean distance on the torus.
    pub fn torus_dist(&self, other: &MomentumVec) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| wrap_phase(a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

impl Add for MomentumVec {
    type Output = MomentumVec;
    fn add(self, rhs: MomentumVec) -> MomentumVec {
        MomentumVec::wrapped([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Neg for MomentumVec {
    type Output = MomentumVec;
    fn neg(self) -> MomentumVec {
        MomentumVec::wrapped(self.0.map(|c| -c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeylSign {
    Plus,
    Minus,
}

impl WeylSign {
    pub fn as_f64(self) -> f64 {
        match self {
            WeylSign::Plus => 1.0,
            WeylSign::Minus => -1.0,
        }
    }
}

pub fn kj_op(params: &Walk3DParams, axis: Axis, p_dx: f64) -> SpinMatrix {
    kj_for_theta(params.theta, axis, p_dx)
}

pub(crate) fn kj_for_theta(theta: f64, axis: Axis, p_dx: f64) -> SpinMatrix {
    exp_neg_i_involution(&rotated_pauli_3d(axis, theta), p_dx / 2.0)
        * exp_neg_i_involution(&rotated_pauli_3d(axis, -theta), p_dx / 2.0)
}

pub fn weyl_op(params: &Walk3DParams, sign: WeylSign, p: &MomentumVec) -> SpinMatrix {
    weyl_for_theta(params.theta, sign, p)
}

pub(crate) fn weyl_for_theta(theta: f64, sign: WeylSign, p: &MomentumVec) -> SpinMatrix {
    let kx = kj_for_theta(theta, Axis::X, p.0[0]);
    let ky = kj_for_theta(theta, Axis::Y, p.0[1]);
    let kz = kj_for_theta(theta, Axis::Z, p.0[2]);
    match sign {
        WeylSign::Plus => kz * ky * kx,
        WeylSign::Minus => kz.adjoint() * ky.adjoint() * kx.adjoint(),
    }
}

/// `β = [[0, I], [I, 0]]`.
pub fn beta() -> SpinMatrix {
    let z = SpinMatrix::zeros(2);
    let id = SpinMatrix::identity(2);
    SpinMatrix::from_blocks(&z, &id, &id, &z)
}

/// `e^{−i mc²δt β}`.
pub fn mass_unitary_3d(params: &Walk3DParams) -> SpinMatrix {
    exp_neg_i_involution(&beta(), params.mass_dt)
}

pub fn dirac_op(params: &Walk3DParams, p: &MomentumVec) -> SpinMatrix {
    let plus = weyl_op(params, WeylSign::Plus, p);
    let minus = weyl_op(params, WeylSign::Minus, p);
    mass_unitary_3d(params) * SpinMatrix::block_diag(&plus, &minus)
}

/// Continuum Hamiltonian `cos θ (p·σ) ⊕ −cos θ (p·σ) + mc²δt β` at momentum `p`.
pub fn effective_hamiltonian_3d(params: &Walk3DParams, p: &MomentumVec) -> SpinMatrix {
    let weyl =
        p.0.iter()
            .zip(Axis::ALL)
            .fold(SpinMatrix::zeros(2), |acc, (&c, axis)| {
                acc + pauli(axis).scale_re(c * params.theta.cos())
            });
    SpinMatrix::block_diag(&weyl, &(-weyl)) + beta().scale_re(params.mass_dt)
}

/// `‖U(p) − e^{−iH_eff(p)}‖_F` for the Dirac walk.
pub fn continuum_remainder_3d(params: &Walk3DParams, p: &MomentumVec) -> f64 {
    dirac_op(params, p).dist(&exp_neg_i(&effective_hamiltonian_3d(params, p), 1.0))
}

/// Solution of `tan(q/2) = 1/(cos θ + sin θ)` in `(−π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DoublerPoint {
    pub q_dx: f64,
    /// Set when `cos θ + sin θ` vanishes and `q = π` is the limiting value.
    pub singular: bool,
}

pub fn doubler_point(theta: f64) -> Result<DoublerPoint> {
    check_theta(theta, false)?;
    let denom = theta.cos() + theta.sin();
    if denom.abs() < 1e-12 || (theta + FRAC_PI_4).abs() < 1e-12 {
        return Ok(DoublerPoint {
            q_dx: PI,
            singular: true,
        });
    }
    Ok(DoublerPoint {
        q_dx: 2.0 * (1.0 / denom).atan(),
        singular: false,
    })
}

/// Momentum where the Weyl walk of the given handedness equals `I` away
/// from the origin.
///
/// `K⁺` has it at `q(θ)(1,1,1)`. Since `K⁻_θ(p) = K⁺_{−θ}(−p)`, the `K⁻`
/// point is `−q(−θ)(1,1,1)`; the two only mirror each other at `θ = 0`.
pub fn weyl_doubler(params: &Walk3DParams, sign: WeylSign) -> Result<MomentumVec> {
    Ok(match sign {
        WeylSign::Plus => MomentumVec::diagonal(doubler_point(params.theta)?.q_dx),
        WeylSign::Minus => MomentumVec::diagonal(-doubler_point(-params.theta)?.q_dx),
    })
}

fn closed_form_parts(theta: f64) -> Result<(f64, f64, f64, f64)> {
    check_theta(theta, false)?;
    let (s, c) = theta.sin_cos();
    if (theta + FRAC_PI_4).abs() < 1e-12 {
        return Err(Error::InvalidParameter(
            "closed form is singular at theta = -pi/4".into(),
        ));
    }
    let norm = 1.0 / (1.0 + c * s);
    Ok((norm * s * (s + c), norm * c * (s + c), norm * s * c, c))
}

/// Closed form of `K_j` at the doubler momentum `q(θ)`:
/// `(s(s+c) − i c(s+c) σ_a + i sc σ_b) / (1 + cs)` with `(a, b)` equal to
/// `(z, x)`, `(y, z)` and `(x, y)` for `j = z, y, x`.
pub fn kj_at_q_closed_form(theta: f64, axis: Axis) -> Result<SpinMatrix> {
    let (a0, az, ax, _) = closed_form_parts(theta)?;
    let (main, side) = match axis {
        Axis::Z => (Axis::Z, Axis::X),
        Axis::Y => (Axis::Y, Axis::Z),
        Axis::X => (Axis::X, Axis::Y),
    };
    Ok(
        SpinMatrix::identity(2).scale_re(a0) - pauli(main).scale(C64::new(0.0, az))
            + pauli(side).scale(C64::new(0.0, ax)),
    )
}

/// `K_z(q(θ))`.
pub fn kz_at_q_closed_form(theta: f64) -> Result<SpinMatrix> {
    kj_at_q_closed_form(theta, Axis::Z)
}

/// First-order generators of `K⁺` around `q(θ)(1,1,1)`, before dividing by
/// `cos θ`: `K⁺(q + η) ≈ I − (i/2) Σ_j η_j A_j`.
pub fn doubler_generators(theta: f64) -> Result<[SpinMatrix; 3]> {
    let q = doubler_point(theta)?.q_dx;
    let kx = kj_for_theta(theta, Axis::X, q);
    let kz = kj_for_theta(theta, Axis::Z, q);
    let plus = |a| rotated_pauli_3d(a, theta);
    let minus = |a| rotated_pauli_3d(a, -theta);
    Ok([
        kx.adjoint() * plus(Axis::X) * kx + minus(Axis::X),
        kz * plus(Axis::Y) * kz.adjoint() + kx.adjoint() * minus(Axis::Y) * kx,
        plus(Axis::Z) + kz * minus(Axis::Z) * kz.adjoint(),
    ])
}

/// Pauli-like operators `σ′_j = A_j / (2 cos θ)` so that
/// `K⁺(q + η) ≈ I − i cos θ η·σ′`.
///
/// With this normalisation `(σ′_j)² = I`. Dividing by `cos θ` alone gives
/// operators that square to `4I`.
pub fn sigma_prime(theta: f64) -> Result<[SpinMatrix; 3]> {
    let c = theta.cos();
    if c.abs() < 1e-12 {
        return Err(Error::InvalidParameter("cos(theta) = 0".into()));
    }
    Ok(doubler_generators(theta)?.map(|a| a.scale_re(0.5 / c)))
}

/// Measured `f` in `[σ′_x, σ′_y] = i f σ′_z`, together with the residual of
/// the best fit over all three cyclic pairs.
pub fn sigma_prime_structure_constant(theta: f64) -> Result<(f64, f64)> {
    let s = sigma_prime(theta)?;
    let pairs = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
    let mut num = 0.0;
    let mut den = 0.0;
    for &(i, j, k) in &pairs {
        let comm = s[i].commutator(&s[j]);
        let basis = s[k].scale(crate::spin::I);
        // least squares of comm ≈ f·(i σ′_k)
        num += inner_re(&basis, &comm);
        den += inner_re(&basis, &basis);
    }
    let f = num / den;
    let residual = pairs
        .iter()
        .map(|&(i, j, k)| {
            let comm = s[i].commutator(&s[j]);
            comm.dist(&s[k].scale(C64::new(0.0, f)))
        })
        .fold(0.0, f64::max);
    Ok((f, residual))
}

fn inner_re(a: &SpinMatrix, b: &SpinMatrix) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

/// `‖K^±(±q̃ + η) − (I ∓ i cos θ η·σ′)‖` at the Weyl doubler of the given
/// handedness; `q̃` and `σ′` are evaluated at `θ` for `K⁺` and at `−θ` for
/// `K⁻`.
pub fn doubler_expansion_check(
    params: &Walk3DParams,
    sign: WeylSign,
    eta: &MomentumVec,
) -> Result<f64> {
    if eta.norm() > 0.05 + 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "|eta| = {} exceeds 0.05",
            eta.norm()
        )));
    }
    let theta = params.theta;
    let basis_theta = match sign {
        WeylSign::Plus => theta,
        WeylSign::Minus => -theta,
    };
    let centre = weyl_doubler(params, sign)?;
    let sp = sigma_prime(basis_theta)?;
    let eta_sigma = sp
        .iter()
        .zip(eta.0)
        .fold(SpinMatrix::zeros(2), |acc, (s, e)| acc + s.scale_re(e));
    let approx =
        SpinMatrix::identity(2) - eta_sigma.scale(C64::new(0.0, sign.as_f64() * theta.cos()));
    let exact = weyl_op(params, sign, &(centre + *eta));
    Ok(exact.dist(&approx))
}

/// Classification of a special momentum of the conventional walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialKind {
    Doubler,
    PseudoDoubler,
    OppositeChiralityDoubler,
    OppositeChiralityPseudoDoubler,
    NoContinuumLimit,
}

impl SpecialKind {
    /// `+1` for doubler-type points, `−1` for pseudo-doublers, `0` when there
    /// is no continuum relation.
    pub fn sign_relation(self) -> i8 {
        match self {
            SpecialKind::Doubler | SpecialKind::OppositeChiralityDoubler => 1,
            SpecialKind::PseudoDoubler | SpecialKind::OppositeChiralityPseudoDoubler => -1,
            SpecialKind::NoContinuumLimit => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialPoint {
    pub momentum: MomentumVec,
    pub kind: SpecialKind,
    pub sign_relation: i8,
}

impl SpecialPoint {
    pub fn new(momentum: MomentumVec, kind: SpecialKind) -> Self {
        SpecialPoint {
            momentum,
            kind,
            sign_relation: kind.sign_relation(),
        }
    }
}

/// The `±π/2` momenta of the conventional walk, with the sign `s` of
/// `K(P) = s I`. For the `K_z K_y K_x` ordering `s` is the product of the
/// component signs.
pub fn half_pi_points() -> Vec<(MomentumVec, i8)> {
    let mut out = Vec::with_capacity(8);
    for bits in 0..8u8 {
        let signs = [0, 1, 2].map(|k| if bits >> k & 1 == 1 { -1.0 } else { 1.0 });
        let product = signs.iter().product::<f64>();
        out.push((
            MomentumVec(signs.map(|s| s * FRAC_PI_2)),
            if product > 0.0 { 1 } else { -1 },
        ));
    }
    out
}

/// `σ″ = (−σ_x, σ_y, −σ_z)`, the generators around the `±π/2` points:
/// `K(P + η) ≈ s (I + i η·σ″)`.
pub fn sigma_double_prime() -> [SpinMatrix; 3] {
    [-pauli(Axis::X), pauli(Axis::Y), -pauli(Axis::Z)]
}

/// `‖K(P + η) − s (I + i η·σ″)‖` for the conventional `K⁺` at a `±π/2` point.
pub fn half_pi_expansion_defect(point: &MomentumVec, sign: i8, eta: &MomentumVec) -> f64 {
    let sdp = sigma_double_prime();
    let gen = sdp
        .iter()
        .zip(eta.0)
        .fold(SpinMatrix::zeros(2), |acc, (s, e)| acc + s.scale_re(e));
    let approx = (SpinMatrix::identity(2) + gen.scale(crate::spin::I)).scale_re(sign as f64);
    weyl_for_theta(0.0, WeylSign::Plus, &(*point + *eta)).dist(&approx)
}

/// Catalogue of the special momenta of the conventional (`θ = 0`) walks.
///
/// The Weyl entries cover every `π`-type point and the eight `±π/2` points
/// (classified by the computed sign of `K(P)`). The same eight `±π/2`
/// points are appended once more as [`SpecialKind::NoContinuumLimit`]: for
/// the massive Dirac walk the two Weyl blocks sit at opposite energies there.
pub fn conventional_special_points() -> Vec<SpecialPoint> {
    let mut out = Vec::new();
    for axis in 0..3 {
        let mut p = [PI; 3];
        p[axis] = 0.0;
        out.push(SpecialPoint::new(MomentumVec(p), SpecialKind::Doubler));
    }
    out.push(SpecialPoint::new(
        MomentumVec([PI; 3]),
        SpecialKind::PseudoDoubler,
    ));
    for axis in 0..3 {
        let mut p = [0.0; 3];
        p[axis] = PI;
        out.push(SpecialPoint::new(
            MomentumVec(p),
            SpecialKind::PseudoDoubler,
        ));
    }
    for (p, s) in half_pi_points() {
        let kind = if s > 0 {
            SpecialKind::OppositeChiralityDoubler
        } else {
            SpecialKind::OppositeChiralityPseudoDoubler
        };
        out.push(SpecialPoint::new(p, kind));
    }
    for (p, _) in half_pi_points() {
        out.push(SpecialPoint::new(p, SpecialKind::NoContinuumLimit));
    }
    out
}
