//! The θ-parametrised Dirac walk on a line, in momentum space.
//!
//! One step is `U = W T` with `T = γ₊S + γ₀ + γ₋S†` and `W = e^{−iM}`. The
//! γ's come from two rank-one projectors `Π_a = |↑_θ⟩⟨↑_θ|`,
//! `Π_b = |↑_{−θ}⟩⟨↑_{−θ}|`:
//!
//! ```text
//! γ₊ = Π_a Π_b,   γ₋ = Π̄_a Π̄_b,   γ₀ = Π_a Π̄_b + Π̄_a Π_b
//! ```
//!
//! At `θ = 0` this is the conventional walk `T = |↑⟩⟨↑|S + |↓⟩⟨↓|S†`.
//! All quantities are dimensionless: momenta are `p·δx`, energies `E·δt`,
//! masses `mc²δt`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::optim::golden_section;
use crate::spin::{
    exp_neg_i, exp_neg_i_involution, pauli, projector_up, rotated_pauli_1d, Axis, SpinMatrix, C64,
};

/// Mass term of the walk. `Dirac(m)` is `M = m σ_x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MassTerm {
    Dirac(f64),
    /// Arbitrary Hermitian generator (already multiplied by `δt`).
    Custom(SpinMatrix),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Walk1DParams {
    theta: f64,
    mass: MassTerm,
    extended_theta: bool,
}

pub(crate) fn check_theta(theta: f64, extended: bool) -> Result<()> {
    let limit = if extended { PI } else { FRAC_PI_2 };
    if !theta.is_finite() || theta <= -limit || theta >= limit {
        return Err(Error::InvalidParameter(format!(
            "theta = {theta} outside (-{limit}, {limit})"
        )));
    }
    Ok(())
}

pub(crate) fn check_mass(mass_dt: f64) -> Result<()> {
    if !mass_dt.is_finite() || !(0.0..PI).contains(&mass_dt) {
        return Err(Error::InvalidParameter(format!(
            "mass_dt = {mass_dt} outside [0, pi)"
        )));
    }
    Ok(())
}

impl Walk1DParams {
    /// `θ ∈ (−π/2, π/2)`, `mass_dt ∈ [0, π)`.
    pub fn new(theta: f64, mass_dt: f64) -> Result<Self> {
        check_theta(theta, false)?;
        check_mass(mass_dt)?;
        Ok(Walk1DParams {
            theta,
            mass: MassTerm::Dirac(mass_dt),
            extended_theta: false,
        })
    }

    /// Accepts `θ ∈ (−π, π)`, e.g. for the `θ = 3π/4` figure parameters.
    pub fn extended(theta: f64, mass_dt: f64) -> Result<Self> {
        check_theta(theta, true)?;
        check_mass(mass_dt)?;
        Ok(Walk1DParams {
            theta,
            mass: MassTerm::Dirac(mass_dt),
            extended_theta: true,
        })
    }

    /// Walk with an arbitrary Hermitian mass generator `M δt`.
    pub fn with_mass_generator(theta: f64, generator: SpinMatrix) -> Result<Self> {
        check_theta(theta, false)?;
        if generator.dim() != 2 {
            return Err(Error::InvalidParameter("mass generator must be 2x2".into()));
        }
        let defect = generator.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Walk1DParams {
            theta,
            mass: MassTerm::Custom(generator),
            extended_theta: false,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mass(&self) -> MassTerm {
        self.mass
    }

    pub fn is_extended(&self) -> bool {
        self.extended_theta
    }

    /// `mc²δt` for the Dirac mass term, or the spectral radius of a custom generator.
    pub fn mass_dt(&self) -> f64 {
        match self.mass {
            MassTerm::Dirac(m) => m,
            MassTerm::Custom(h) => crate::spin::hermitian_eigen(&h)
                .0
                .iter()
                .fold(0.0, |a: f64, v| a.max(v.abs())),
        }
    }

    pub fn mass_generator(&self) -> SpinMatrix {
        match self.mass {
            MassTerm::Dirac(m) => pauli(Axis::X).scale_re(m),
            MassTerm::Custom(h) => h,
        }
    }

    /// Whether the energy bound `(π − 2θ) + mc²δt` applies: `θ ∈ [0, π/2)`
    /// with the standard Dirac mass.
    pub fn bound_applies(&self) -> bool {
        matches!(self.mass, MassTerm::Dirac(_)) && (0.0..FRAC_PI_2).contains(&self.theta)
    }

    /// `(π − 2θ) + mc²δt`.
    pub fn energy_bound(&self) -> f64 {
        (PI - 2.0 * self.theta) + self.mass_dt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaTriple {
    pub plus: SpinMatrix,
    pub zero: SpinMatrix,
    pub minus: SpinMatrix,
}

impl GammaTriple {
    /// `γ₊ e^{−ip} + γ₀ + γ₋ e^{ip}`.
    pub fn transfer(&self, p_dx: f64) -> SpinMatrix {
        self.plus.scale(C64::from_polar(1.0, -p_dx))
            + self.zero
            + self.minus.scale(C64::from_polar(1.0, p_dx))
    }

    /// `Γ = γ₊ − γ₋`, the coefficient of `P v` in the effective Hamiltonian.
    pub fn gamma_operator(&self) -> SpinMatrix {
        self.plus - self.minus
    }
}

/// The projectors `(Π_a, Π_b)` onto `|↑_θ⟩` and `|↑_{−θ}⟩`.
pub fn projectors(theta: f64) -> (SpinMatrix, SpinMatrix) {
    let a = projector_up(&rotated_pauli_1d(theta)).expect("σ_θ has spectrum ±1");
    let b = projector_up(&rotated_pauli_1d(-theta)).expect("σ_θ has spectrum ±1");
    (a, b)
}

pub fn gamma_coeffs(params: &Walk1DParams) -> GammaTriple {
    gamma_coeffs_for_theta(params.theta)
}

pub(crate) fn gamma_from_projectors(pa: SpinMatrix, pb: SpinMatrix) -> GammaTriple {
    let id = SpinMatrix::identity(2);
    let plus = pa * pb;
    let minus = (id - pa) * (id - pb);
    let zero = id - plus - minus;
    GammaTriple { plus, zero, minus }
}

pub fn gamma_coeffs_for_theta(theta: f64) -> GammaTriple {
    let (pa, pb) = projectors(theta);
    gamma_from_projectors(pa, pb)
}

/// `T(p) = e^{−ipσ_θ/2} e^{−ipσ_{−θ}/2}`.
pub fn transfer_op(params: &Walk1DParams, p_dx: f64) -> SpinMatrix {
    transfer_for_theta(params.theta, p_dx)
}

pub(crate) fn transfer_for_theta(theta: f64, p_dx: f64) -> SpinMatrix {
    exp_neg_i_involution(&rotated_pauli_1d(theta), p_dx / 2.0)
        * exp_neg_i_involution(&rotated_pauli_1d(-theta), p_dx / 2.0)
}

/// `cos²(p/2) − i sin p cos θ σ_z − e^{−2iθσ_x} sin²(p/2)`.
pub fn transfer_closed_form(params: &Walk1DParams, p_dx: f64) -> SpinMatrix {
    let theta = params.theta;
    let half = 0.5 * p_dx;
    let id = SpinMatrix::identity(2);
    let rot = exp_neg_i_involution(&pauli(Axis::X), 2.0 * theta);
    id.scale_re(half.cos().powi(2))
        - pauli(Axis::Z).scale(C64::new(0.0, p_dx.sin() * theta.cos()))
        - rot.scale_re(half.sin().powi(2))
}

/// `W = e^{−iM δt}`.
pub fn mass_unitary(params: &Walk1DParams) -> SpinMatrix {
    match params.mass {
        MassTerm::Dirac(m) => exp_neg_i_involution(&pauli(Axis::X), m),
        MassTerm::Custom(h) => exp_neg_i(&h, 1.0),
    }
}

/// `U(p) = T(p) W`, the momentum-space walk whose eigenvalues define `E_p`.
pub fn walk_op(params: &Walk1DParams, p_dx: f64) -> SpinMatrix {
    transfer_op(params, p_dx) * mass_unitary(params)
}

/// Fourier symbol of the lattice step `W T` (mass applied after transport).
///
/// Unitarily equivalent to [`walk_op`] (`W T(p) = W (T(p) W) W†`), so it has
/// the same eigenphases.
pub fn lattice_symbol(params: &Walk1DParams, p_dx: f64) -> SpinMatrix {
    mass_unitary(params) * transfer_op(params, p_dx)
}

/// Continuum-limit Hamiltonian `E δt = cos θ (p δx) σ_z + M δt`, returned as
/// the pair (coefficient of `p δx`, constant part).
pub fn effective_hamiltonian_1d(params: &Walk1DParams) -> (SpinMatrix, SpinMatrix) {
    (
        pauli(Axis::Z).scale_re(params.theta.cos()),
        params.mass_generator(),
    )
}

/// `‖U(p) − e^{−i H_eff(p)}‖_F`, the remainder of the continuum expansion.
pub fn continuum_remainder(params: &Walk1DParams, p_dx: f64) -> f64 {
    let (slope, constant) = effective_hamiltonian_1d(params);
    let h = slope.scale_re(p_dx) + constant;
    walk_op(params, p_dx).dist(&exp_neg_i(&h, 1.0))
}

fn continuum_objective(params: &Walk1DParams, p_dx: f64) -> f64 {
    let t = transfer_op(params, p_dx);
    let id = SpinMatrix::identity(2);
    t.dist(&id).min(t.dist(&(-id)))
}

/// Momenta where `T(p) = ±I`, i.e. where the massless walk has a good
/// continuum limit.
///
/// The grid `p = −π + 2πk/n` is scanned for local minima of
/// `min(‖T − I‖, ‖T + I‖)`; each minimum is refined by golden-section search
/// to `1e−10` and kept if the refined value is below `tol`. Results are in
/// `(−π, π]`, ascending.
pub fn continuum_points(params: &Walk1DParams, grid_size: usize, tol: f64) -> Result<Vec<f64>> {
    if grid_size < 16 {
        return Err(Error::InvalidParameter(format!(
            "grid_size = {grid_size} < 16"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be > 0")));
    }
    let h = 2.0 * PI / grid_size as f64;
    let grid: Vec<f64> = (0..grid_size).map(|k| -PI + h * k as f64).collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&p| continuum_objective(params, p))
        .collect();

    let mut found: Vec<f64> = Vec::new();
    for k in 0..grid_size {
        let prev = values[(k + grid_size - 1) % grid_size];
        let next = values[(k + 1) % grid_size];
        if values[k] > prev || values[k] > next {
            continue;
        }
        let (p, fp) = golden_section(
            |x| continuum_objective(params, x),
            grid[k] - h,
            grid[k] + h,
            1e-10,
        );
        if fp >= tol {
            continue;
        }
        let p = crate::spin::wrap_phase(p);
        let dup = found
            .iter()
            .any(|&q| crate::spin::wrap_phase(q - p).abs() < 1e-6);
        if !dup {
            found.push(p);
        }
    }
    found.sort_by(|a, b| a.total_cmp(b));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{eigenphases, ONE, ZERO};

    fn params(theta: f64, m: f64) -> Walk1DParams {
        Walk1DParams::new(theta, m).unwrap()
    }

    #[test]
    fn param_ranges() {
        assert!(Walk1DParams::new(FRAC_PI_2, 0.0).is_err());
        assert!(Walk1DParams::new(0.3, -0.1).is_err());
        assert!(Walk1DParams::new(0.3, PI).is_err());
        assert!(Walk1DParams::extended(3.0 * PI / 4.0, 0.02).is_ok());
        assert!(Walk1DParams::extended(PI, 0.02).is_err());
        assert!(Walk1DParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn gamma_at_theta_zero_is_conventional() {
        let g = gamma_coeffs(&params(0.0, 0.0));
        assert_eq!(g.plus, SpinMatrix::diagonal(&[ONE, ZERO]));
        assert_eq!(g.minus, SpinMatrix::diagonal(&[ZERO, ONE]));
        assert_eq!(g.zero, SpinMatrix::zeros(2));
    }

    #[test]
    fn gamma_invariants() {
        for k in 0..25 {
            let t = -1.5 + 0.12 * k as f64;
            let g = gamma_coeffs(&params(t, 0.0));
            let id = SpinMatrix::identity(2);
            assert!((g.plus + g.zero + g.minus).dist(&id) < 1e-12);
            assert!((g.plus.adjoint() * g.minus).frobenius_norm() < 1e-12);
            assert!((g.minus.adjoint() * g.plus).frobenius_norm() < 1e-12);
            let s =
                g.plus.adjoint() * g.plus + g.zero.adjoint() * g.zero + g.minus.adjoint() * g.minus;
            assert!(s.dist(&id) < 1e-12);
            let cross = g.plus.adjoint() * g.zero + g.zero.adjoint() * g.minus;
            assert!(cross.frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn gamma_zero_nonvanishing_for_nonzero_theta() {
        let p = params(PI / 4.0, 0.0);
        let g = gamma_coeffs(&p);
        assert!(g.zero.frobenius_norm() > 0.5);
        for k in 0..64 {
            let pd = -PI + 2.0 * PI * k as f64 / 64.0;
            assert!(g.transfer(pd).unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn transfer_examples() {
        for &t in &[0.0, 0.4, -1.2] {
            assert!(transfer_op(&params(t, 0.0), 0.0).dist(&SpinMatrix::identity(2)) < 1e-15);
        }
        for k in 0..20 {
            let p = -3.0 + 0.3 * k as f64;
            let conv = exp_neg_i(&pauli(Axis::Z), p);
            assert!(transfer_op(&params(0.0, 0.0), p).dist(&conv) < 1e-14);
        }
        let minus = SpinMatrix::identity(2).scale_re(-1.0);
        assert!(transfer_op(&params(0.0, 0.0), PI).dist(&minus) < 1e-15);
    }

    #[test]
    fn three_routes_to_transfer_agree() {
        for k in 0..40 {
            let t = -1.5 + 0.075 * k as f64;
            let p = params(t, 0.0);
            let g = gamma_coeffs(&p);
            for j in 0..40 {
                let pd = -PI + 0.157 * j as f64;
                let prod = transfer_op(&p, pd);
                assert!(prod.dist(&g.transfer(pd)) < 1e-12);
                assert!(prod.dist(&transfer_closed_form(&p, pd)) < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_at_quarter_turn() {
        let p = params(0.0, 0.0);
        let expect = pauli(Axis::Z).scale(C64::new(0.0, -1.0));
        assert!(transfer_closed_form(&p, PI / 2.0).dist(&expect) < 1e-15);
        assert!(transfer_op(&p, PI / 2.0).dist(&expect) < 1e-15);
    }

    #[test]
    fn walk_op_examples() {
        let m = 0.3;
        let p = params(0.7, m);
        let ph = eigenphases(&walk_op(&p, 0.0)).unwrap();
        assert!((ph.as_slice()[0] + m).abs() < 1e-14 && (ph.as_slice()[1] - m).abs() < 1e-14);

        let p0 = params(0.0, m);
        let u = walk_op(&p0, PI);
        assert!(u.dist(&(-mass_unitary(&p0))) < 1e-14);
        let ph = eigenphases(&u).unwrap();
        for e in ph.as_slice() {
            assert!((e.abs() - (PI - m)).abs() < 1e-13);
        }
    }

    #[test]
    fn band_shape_at_large_theta() {
        let p = params(3.0 * PI / 8.0, 0.02);
        let n = 512;
        let upper: Vec<f64> = (0..n)
            .map(|k| {
                let pd = -PI + 2.0 * PI * k as f64 / n as f64;
                eigenphases(&walk_op(&p, pd)).unwrap().as_slice()[1]
            })
            .collect();
        let max = upper.iter().cloned().fold(0.0, f64::max);
        assert!(max < PI / 2.0);
        // rises from p = 0 to a single maximum, then falls towards p = π
        let half = &upper[n / 2..];
        let peak = half
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(half[..=peak].windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(half[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn effective_hamiltonian_and_gamma() {
        let (a, b) = effective_hamiltonian_1d(&params(0.0, 0.1));
        assert!(a.dist(&pauli(Axis::Z)) < 1e-15);
        assert!(b.dist(&pauli(Axis::X).scale_re(0.1)) < 1e-15);
        let (a, _) = effective_hamiltonian_1d(&params(PI / 3.0, 0.1));
        assert!(a.dist(&pauli(Axis::Z).scale_re(0.5)) < 1e-15);
        for k in 0..20 {
            let t = -1.4 + 0.14 * k as f64;
            let (pa, pb) = projectors(t);
            let g = gamma_coeffs_for_theta(t);
            let id = SpinMatrix::identity(2);
            let expect = pauli(Axis::Z).scale_re(t.cos());
            assert!((pa + pb - id).dist(&expect) < 1e-14);
            assert!(g.gamma_operator().dist(&expect) < 1e-14);
        }
    }

    #[test]
    fn pseudo_doubler_identity_theta_zero() {
        let p = params(0.0, 0.05);
        for k in 0..21 {
            let eta = -0.1 + 0.01 * k as f64;
            let shifted = crate::spin::wrap_phase(PI + eta);
            let lhs = transfer_op(&p, shifted);
            assert!(lhs.dist(&(-transfer_op(&p, eta))) < 1e-12);
            let lhs = walk_op(&p, shifted);
            assert!(lhs.dist(&(-walk_op(&p, eta))) < 1e-12);
        }
    }

    #[test]
    fn continuum_points_examples() {
        let pts = continuum_points(&params(0.0, 0.0), 1024, 1e-6).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts[0].abs() < 1e-9);
        assert!((pts[1] - PI).abs() < 1e-9);

        let pts = continuum_points(&params(PI / 4.0, 0.0), 1024, 1e-6).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].abs() < 1e-9);

        let coarse = continuum_points(&params(0.1, 0.0), 32, 1e-6).unwrap();
        assert_eq!(coarse.len(), 1);
        assert!(coarse[0].abs() < 1e-9);
    }

    #[test]
    fn continuum_points_rejects_bad_input() {
        assert!(continuum_points(&params(0.0, 0.0), 8, 1e-6).is_err());
        assert!(continuum_points(&params(0.0, 0.0), 64, 0.0).is_err());
    }

    #[test]
    fn custom_mass_generator() {
        let h = pauli(Axis::Y).scale_re(0.2);
        let p = Walk1DParams::with_mass_generator(0.3, h).unwrap();
        assert!(!p.bound_applies());
        assert!((p.mass_dt() - 0.2).abs() < 1e-14);
        assert!(walk_op(&p, 1.0).unitarity_defect() < 1e-12);
        assert!(Walk1DParams::with_mass_generator(
            0.3,
            SpinMatrix::from_rows(&[ONE, ONE, ZERO, ONE]).unwrap()
        )
        .is_err());
    }
}
