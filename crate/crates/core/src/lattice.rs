//! Spinor wavefunctions on finite periodic lattices.
//!
//! Position-space steps apply the local `γ` form of the walk site by site;
//! momentum-space steps go through the discrete Fourier transform and apply
//! the `2x2` (or `4x4`) symbol pointwise. The two must agree to rounding.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spin::{hermitian_eigen, pauli, Axis, SpinMatrix, C64, ONE, ZERO};
use crate::walk1d::{self, GammaTriple, Walk1DParams};
use crate::walk3d::{self, MomentumVec, Walk3DParams};

/// Largest 1-D lattice.
pub const MAX_SITES_1D: usize = 4096;
/// Largest 3-D lattice per axis.
pub const MAX_SITES_3D: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LatticeWalk {
    Line(Walk1DParams),
    /// The 4-component Dirac walk `e^{−imβ}(K⁺ ⊕ K⁻)`.
    Dirac3(Walk3DParams),
}

impl LatticeWalk {
    pub fn dim(&self) -> usize {
        match self {
            LatticeWalk::Line(_) => 1,
            LatticeWalk::Dirac3(_) => 3,
        }
    }

    pub fn spinor(&self) -> usize {
        match self {
            LatticeWalk::Line(_) => 2,
            LatticeWalk::Dirac3(_) => 4,
        }
    }

    /// Fourier symbol of one position-space step at momentum `p`.
    pub fn symbol(&self, p: &[f64; 3]) -> SpinMatrix {
        match self {
            LatticeWalk::Line(params) => walk1d::lattice_symbol(params, p[0]),
            LatticeWalk::Dirac3(params) => walk3d::dirac_op(params, &MomentumVec(*p)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    dim: usize,
    sites: usize,
    spinor: usize,
    amps: Vec<C64>,
}

impl LatticeState {
    pub fn zeros(dim: usize, sites: usize, spinor: usize) -> Result<Self> {
        if dim != 1 && dim != 3 {
            return Err(Error::InvalidParameter(format!("lattice dimension {dim}")));
        }
        if sites < 4 {
            return Err(Error::InvalidParameter(format!("{sites} sites < 4")));
        }
        let limit = if dim == 1 { MAX_SITES_1D } else { MAX_SITES_3D };
        if sites > limit {
            return Err(Error::ResourceLimit {
                states: sites.pow(dim as u32),
                budget: limit.pow(dim as u32),
            });
        }
        if spinor != 2 && spinor != 4 {
            return Err(Error::InvalidParameter(format!("spinor size {spinor}")));
        }
        Ok(LatticeState {
            dim,
            sites,
            spinor,
            amps: vec![ZERO; sites.pow(dim as u32) * spinor],
        })
    }

    pub fn for_walk(walk: &LatticeWalk, sites: usize) -> Result<Self> {
        Self::zeros(walk.dim(), sites, walk.spinor())
    }

    /// Unit-norm state localised on one site.
    pub fn localized(
        walk: &LatticeWalk,
        sites: usize,
        site: usize,
        spinor: &[C64],
    ) -> Result<Self> {
        let mut s = Self::for_walk(walk, sites)?;
        if spinor.len() != s.spinor {
            return Err(Error::DimensionMismatch {
                expected: s.spinor,
                got: spinor.len(),
            });
        }
        if site >= s.num_sites() {
            return Err(Error::InvalidParameter(format!("site {site} out of range")));
        }
        let off = site * s.spinor;
        s.amps[off..off + s.spinor].copy_from_slice(spinor);
        s.normalize()?;
        Ok(s)
    }

    pub fn from_amplitudes(
        dim: usize,
        sites: usize,
        spinor: usize,
        amps: Vec<C64>,
    ) -> Result<Self> {
        let mut s = Self::zeros(dim, sites, spinor)?;
        if amps.len() != s.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: s.amps.len(),
                got: amps.len(),
            });
        }
        s.amps = amps;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sites per axis.
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn num_sites(&self) -> usize {
        self.sites.pow(self.dim as u32)
    }

    pub fn spinor(&self) -> usize {
        self.spinor
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn site(&self, index: usize) -> &[C64] {
        &self.amps[index * self.spinor..(index + 1) * self.spinor]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParameter("state has zero norm".into()));
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(())
    }

    /// Probability on each site.
    pub fn density(&self) -> Vec<f64> {
        self.amps
            .chunks(self.spinor)
            .map(|c| c.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    /// Largest amplitude difference.
    pub fn max_deviation(&self, other: &LatticeState) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Site coordinates of a flat site index (`x` slowest).
    pub fn coords(&self, index: usize) -> [usize; 3] {
        match self.dim {
            1 => [index, 0, 0],
            _ => {
                let n = self.sites;
                [index / (n * n), (index / n) % n, index % n]
            }
        }
    }

    fn check_walk(&self, walk: &LatticeWalk) -> Result<()> {
        if walk.dim() != self.dim || walk.spinor() != self.spinor {
            return Err(Error::DimensionMismatch {
                expected: walk.spinor(),
                got: self.spinor,
            });
        }
        Ok(())
    }
}

fn shifted(n: usize, i: usize, delta: isize) -> usize {
    (i as isize + delta).rem_euclid(n as isize) as usize
}

/// `(Kψ)(n) = γ₊ψ(n−1) + γ₀ψ(n) + γ₋ψ(n+1)` along one axis for two-component
/// slices `comp..comp+2` of each site.
fn transport_axis(
    state: &LatticeState,
    out: &mut [C64],
    gammas: &GammaTriple,
    axis: usize,
    comp: usize,
    adjoint: bool,
) {
    let n = state.sites;
    let s = state.spinor;
    let stride = match (state.dim, axis) {
        (1, _) => 1,
        (_, 0) => n * n,
        (_, 1) => n,
        _ => 1,
    };
    let (plus, zero, minus, back, fwd) = if adjoint {
        // K† = γ₊†S† + γ₀† + γ₋†S
        (
            gammas.plus.adjoint(),
            gammas.zero.adjoint(),
            gammas.minus.adjoint(),
            1isize,
            -1isize,
        )
    } else {
        (gammas.plus, gammas.zero, gammas.minus, -1, 1)
    };
    for site in 0..state.num_sites() {
        let c = state.coords(site);
        let along = if state.dim == 1 { site } else { c[axis] };
        let from = |delta: isize| {
            let j = shifted(n, along, delta);
            (site as isize + (j as isize - along as isize) * stride as isize) as usize
        };
        let src_plus = from(back);
        let src_minus = from(fwd);
        let pick = |idx: usize| [state.amps[idx * s + comp], state.amps[idx * s + comp + 1]];
        let a = plus.apply(&pick(src_plus));
        let b = zero.apply(&pick(site));
        let d = minus.apply(&pick(src_minus));
        out[site * s + comp] = a[0] + b[0] + d[0];
        out[site * s + comp + 1] = a[1] + b[1] + d[1];
    }
}

fn apply_local(state: &mut LatticeState, m: &SpinMatrix) {
    let s = state.spinor;
    for chunk in state.amps.chunks_mut(s) {
        let v = m.apply(chunk);
        chunk.copy_from_slice(&v[..s]);
    }
}

/// `γ` triples of the per-axis factors `K_j` of the 3-D walk.
pub fn axis_gammas(theta: f64, axis: Axis) -> GammaTriple {
    let a = crate::spin::projector_up(&crate::spin::rotated_pauli_3d(axis, theta))
        .expect("rotated Pauli has spectrum ±1");
    let b = crate::spin::projector_up(&crate::spin::rotated_pauli_3d(axis, -theta))
        .expect("rotated Pauli has spectrum ±1");
    walk1d::gamma_from_projectors(a, b)
}

/// One step `W T` applied site by site with periodic wraparound.
pub fn step_position(walk: &LatticeWalk, state: &LatticeState) -> Result<LatticeState> {
    state.check_walk(walk)?;
    let mut next = state.clone();
    match walk {
        LatticeWalk::Line(params) => {
            let g = walk1d::gamma_coeffs(params);
            transport_axis(state, &mut next.amps, &g, 0, 0, false);
            apply_local(&mut next, &walk1d::mass_unitary(params));
        }
        LatticeWalk::Dirac3(params) => {
            let mut cur = state.clone();
            for (k, axis) in Axis::ALL.iter().enumerate() {
                let g = axis_gammas(params.theta(), *axis);
                transport_axis(&cur, &mut next.amps, &g, k, 0, false);
                transport_axis(&cur, &mut next.amps, &g, k, 2, true);
                cur.amps.copy_from_slice(&next.amps);
            }
            apply_local(&mut next, &walk3d::mass_unitary_3d(params));
        }
    }
    Ok(next)
}

/// FFT plans for one lattice size, reusable across steps.
pub struct MomentumStepper {
    walk: LatticeWalk,
    sites: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    symbols: Vec<SpinMatrix>,
}

impl MomentumStepper {
    pub fn new(walk: LatticeWalk, sites: usize) -> Result<Self> {
        // validates the size
        LatticeState::for_walk(&walk, sites)?;
        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(sites);
        let inverse = planner.plan_fft_inverse(sites);
        let p = |k: usize| 2.0 * PI * k as f64 / sites as f64;
        let symbols = match walk.dim() {
            1 => (0..sites).map(|k| walk.symbol(&[p(k), 0.0, 0.0])).collect(),
            _ => {
                let mut v = Vec::with_capacity(sites.pow(3));
                for a in 0..sites {
                    for b in 0..sites {
                        for c in 0..sites {
                            v.push(walk.symbol(&[p(a), p(b), p(c)]));
                        }
                    }
                }
                v
            }
        };
        Ok(MomentumStepper {
            walk,
            sites,
            forward,
            inverse,
            symbols,
        })
    }

    fn transform(&self, state: &mut LatticeState, inverse: bool) {
        let n = self.sites;
        let s = state.spinor;
        let plan = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        let mut line = vec![ZERO; n];
        let strides: Vec<usize> = if state.dim == 1 {
            vec![1]
        } else {
            vec![n * n, n, 1]
        };
        for &stride in &strides {
            for start in 0..state.num_sites() {
                // visit each line once, from its first element
                if (start / stride) % n != 0 {
                    continue;
                }
                for comp in 0..s {
                    for (k, slot) in line.iter_mut().enumerate() {
                        *slot = state.amps[(start + k * stride) * s + comp];
                    }
                    plan.process(&mut line);
                    for (k, v) in line.iter().enumerate() {
                        state.amps[(start + k * stride) * s + comp] = *v;
                    }
                }
            }
        }
        if inverse {
            let scale = 1.0 / state.num_sites() as f64;
            for a in &mut state.amps {
                *a *= scale;
            }
        }
    }

    pub fn step(&self, state: &LatticeState) -> Result<LatticeState> {
        self.steps(state, 1)
    }

    /// `t` steps: one forward transform, `t` symbol multiplications, one inverse.
    pub fn steps(&self, state: &LatticeState, t: usize) -> Result<LatticeState> {
        state.check_walk(&self.walk)?;
        if state.sites != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                got: state.sites,
            });
        }
        let mut work = state.clone();
        self.transform(&mut work, false);
        let s = work.spinor;
        for (chunk, sym) in work.amps.chunks_mut(s).zip(&self.symbols) {
            for _ in 0..t {
                let v = sym.apply(chunk);
                chunk.copy_from_slice(&v[..s]);
            }
        }
        self.transform(&mut work, true);
        Ok(work)
    }
}

/// Single momentum-space step through the DFT at `p_k = 2πk/N`.
pub fn step_momentum(walk: &LatticeWalk, state: &LatticeState) -> Result<LatticeState> {
    MomentumStepper::new(*walk, state.sites)?.step(state)
}

fn dense_from_columns(dim: usize, column: impl Fn(usize) -> Vec<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for j in 0..dim {
        for (i, v) in column(j).into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    m
}

fn basis_state(walk: &LatticeWalk, sites: usize, j: usize) -> Result<LatticeState> {
    let mut s = LatticeState::for_walk(walk, sites)?;
    s.amps[j] = ONE;
    Ok(s)
}

/// Full step matrix from [`step_position`], columns indexed by
/// `site·spinor + component`.
pub fn position_step_matrix(walk: &LatticeWalk, sites: usize) -> Result<DMatrix<C64>> {
    let dim = LatticeState::for_walk(walk, sites)?.amps.len();
    if dim > 4096 {
        return Err(Error::ResourceLimit {
            states: dim,
            budget: 4096,
        });
    }
    let cols: Vec<Vec<C64>> = (0..dim)
        .map(|j| step_position(walk, &basis_state(walk, sites, j)?).map(|s| s.amps))
        .collect::<Result<_>>()?;
    Ok(dense_from_columns(dim, |j| cols[j].clone()))
}

/// Full step matrix from [`step_momentum`].
pub fn momentum_step_matrix(walk: &LatticeWalk, sites: usize) -> Result<DMatrix<C64>> {
    let stepper = MomentumStepper::new(*walk, sites)?;
    let dim = LatticeState::for_walk(walk, sites)?.amps.len();
    if dim > 4096 {
        return Err(Error::ResourceLimit {
            states: dim,
            budget: 4096,
        });
    }
    let cols: Vec<Vec<C64>> = (0..dim)
        .map(|j| stepper.step(&basis_state(walk, sites, j)?).map(|s| s.amps))
        .collect::<Result<_>>()?;
    Ok(dense_from_columns(dim, |j| cols[j].clone()))
}

pub fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn kron_identity(sites: usize, local: &SpinMatrix) -> DMatrix<C64> {
    let s = local.dim();
    let mut m = DMatrix::<C64>::zeros(sites * s, sites * s);
    for n in 0..sites {
        for r in 0..s {
            for c in 0..s {
                m[(n * s + r, n * s + c)] = local.get(r, c);
            }
        }
    }
    m
}

/// Symmetry diagnostics of the 1-D step on an `N`-site ring.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SymmetryReport {
    pub theta: f64,
    pub mass_dt: f64,
    pub sites: usize,
    /// `‖[S, U]‖_F` with `S` the one-site translation.
    pub translation_defect: f64,
    /// `‖σ_y U σ_y† − U†‖_F`.
    pub adjoint_defect: f64,
    /// `‖σ_y U σ_y† − W† U† W‖_F`: the adjoint relation for the step `U = W T`,
    /// where `σ_y` maps `T → T†` and `W → W†`.
    pub adjoint_equivalence_defect: f64,
    /// Largest `|⟨m|U|n⟩|` with periodic distance `|m − n| > 1`.
    pub locality_violation: f64,
    /// Largest mismatch between an eigenphase of `U(p)` and minus another.
    pub pm_pair_defect: f64,
}

pub fn symmetry_checks(params: &Walk1DParams, sites: usize) -> Result<SymmetryReport> {
    let walk = LatticeWalk::Line(*params);
    let u = position_step_matrix(&walk, sites)?;
    let dim = u.nrows();
    let mut shift = DMatrix::<C64>::zeros(dim, dim);
    for n in 0..sites {
        for a in 0..2 {
            shift[(((n + 1) % sites) * 2 + a, n * 2 + a)] = ONE;
        }
    }
    let translation_defect = frobenius(&(&shift * &u - &u * &shift));
    let sy = kron_identity(sites, &pauli(Axis::Y));
    let conj = &sy * &u * sy.adjoint();
    let adjoint_defect = frobenius(&(&conj - u.adjoint()));
    let w = kron_identity(sites, &walk1d::mass_unitary(params));
    let adjoint_equivalence_defect = frobenius(&(&conj - w.adjoint() * u.adjoint() * &w));
    let mut locality_violation: f64 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            let d = (r / 2) as isize - (c / 2) as isize;
            let d = d
                .rem_euclid(sites as isize)
                .min((-d).rem_euclid(sites as isize));
            if d > 1 {
                locality_violation = locality_violation.max(u[(r, c)].norm());
            }
        }
    }
    let mut pm_pair_defect: f64 = 0.0;
    for k in 0..sites {
        let p = -PI + 2.0 * PI * k as f64 / sites as f64;
        let ph = crate::spin::eigenphases_unchecked(&walk1d::walk_op(params, p));
        let e = ph.as_slice();
        let sum = crate::spin::wrap_phase(e[0] + e[1]).abs();
        pm_pair_defect = pm_pair_defect.max(sum);
    }
    Ok(SymmetryReport {
        theta: params.theta(),
        mass_dt: params.mass_dt(),
        sites,
        translation_defect,
        adjoint_defect,
        adjoint_equivalence_defect,
        locality_violation,
        pm_pair_defect,
    })
}

/// Eigenvector of the upper band of the 1-D lattice symbol at `p`.
pub fn upper_band_spinor(params: &Walk1DParams, p: f64) -> [C64; 2] {
    let u = walk1d::lattice_symbol(params, p);
    // i(U − U†)/2 has eigenvalues sin E, ascending
    let h = (u - u.adjoint()).scale(C64::new(0.0, 0.5));
    let (_, vecs) = hermitian_eigen(&h);
    [vecs.get(0, 1), vecs.get(1, 1)]
}

/// Gaussian packet `e^{−(n−c)²/(4w²)} e^{ip₀n} χ` on an `N`-site ring with the
/// upper-band spinor `χ` at `p₀`.
pub fn gaussian_packet(
    params: &Walk1DParams,
    sites: usize,
    center: f64,
    width: f64,
    p0: f64,
) -> Result<LatticeState> {
    if !(width > 0.0) {
        return Err(Error::InvalidParameter(format!("width = {width}")));
    }
    let walk = LatticeWalk::Line(*params);
    let mut s = LatticeState::for_walk(&walk, sites)?;
    let chi = upper_band_spinor(params, p0);
    for n in 0..sites {
        let mut d = n as f64 - center;
        d -= (d / sites as f64).round() * sites as f64;
        let env = (-d * d / (4.0 * width * width)).exp();
        let phase = C64::from_polar(env, p0 * n as f64);
        s.amps[2 * n] = chi[0] * phase;
        s.amps[2 * n + 1] = chi[1] * phase;
    }
    s.normalize()?;
    Ok(s)
}

/// Mean position on the ring relative to `reference`, using the nearest image.
pub fn centroid(state: &LatticeState, reference: f64) -> f64 {
    let n = state.sites as f64;
    state
        .density()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut d = i as f64 - reference;
            d -= (d / n).round() * n;
            p * (reference + d)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(theta: f64, m: f64) -> LatticeWalk {
        LatticeWalk::Line(Walk1DParams::new(theta, m).unwrap())
    }

    fn dmax(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn conventional_walk_moves_spins_apart() {
        let w = line(0.0, 0.0);
        let up = LatticeState::localized(&w, 8, 7, &[ONE, ZERO]).unwrap();
        let next = step_position(&w, &up).unwrap();
        assert_eq!(next.site(0), &[ONE, ZERO]);
        let down = LatticeState::localized(&w, 8, 0, &[ZERO, ONE]).unwrap();
        let next = step_position(&w, &down).unwrap();
        assert_eq!(next.site(7), &[ZERO, ONE]);
    }

    #[test]
    fn norm_is_preserved() {
        let w = line(0.7, 0.3);
        let mut s = LatticeState::localized(&w, 32, 5, &[ONE, C64::new(0.0, 1.0)]).unwrap();
        for _ in 0..50 {
            s = step_position(&w, &s).unwrap();
        }
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn momentum_matches_position_small_ring() {
        for &(t, m) in &[(0.0, 0.0), (0.4, 0.1), (-1.0, 0.02)] {
            let w = line(t, m);
            let a = position_step_matrix(&w, 4).unwrap();
            let b = momentum_step_matrix(&w, 4).unwrap();
            assert!(dmax(&a, &b) < 1e-12);
        }
        let w3 = LatticeWalk::Dirac3(Walk3DParams::new(0.5, 0.1).unwrap());
        let a = position_step_matrix(&w3, 4).unwrap();
        let b = momentum_step_matrix(&w3, 4).unwrap();
        assert!(dmax(&a, &b) < 1e-12);
        assert!(frobenius(&(a.adjoint() * &a - DMatrix::identity(256, 256))) < 1e-10);
    }

    #[test]
    fn plane_wave_picks_up_band_phase() {
        let params = Walk1DParams::new(0.4, 0.1).unwrap();
        let w = LatticeWalk::Line(params);
        let n = 16;
        let k = 3;
        let p = 2.0 * PI * k as f64 / n as f64;
        let sym = walk1d::lattice_symbol(&params, p);
        let chi = upper_band_spinor(&params, p);
        let lambda = sym.apply(&chi)[0] / chi[0];
        let mut s = LatticeState::for_walk(&w, n).unwrap();
        for site in 0..n {
            let ph = C64::from_polar(1.0, p * site as f64);
            s.amps[2 * site] = chi[0] * ph;
            s.amps[2 * site + 1] = chi[1] * ph;
        }
        s.normalize().unwrap();
        let next = step_position(&w, &s).unwrap();
        for (a, b) in next.amps.iter().zip(&s.amps) {
            assert!((a - b * lambda).norm() < 1e-12);
        }
        // upper band: E > 0
        assert!(-lambda.arg() > 0.0);
    }

    #[test]
    fn symmetry_report_conventional() {
        let r = symmetry_checks(&Walk1DParams::new(0.0, 0.1).unwrap(), 8).unwrap();
        assert!(r.translation_defect < 1e-12);
        assert!(r.adjoint_equivalence_defect < 1e-12);
        assert_eq!(r.locality_violation, 0.0);
        // σ_y U σ_y = W†T†, which differs from U† = T†W† when the mass is on
        assert!(r.adjoint_defect > 1e-3);
        let r = symmetry_checks(&Walk1DParams::new(0.0, 0.0).unwrap(), 8).unwrap();
        assert!(r.adjoint_defect < 1e-12);
        let r = symmetry_checks(&Walk1DParams::new(0.3, 0.1).unwrap(), 8).unwrap();
        assert!(r.translation_defect < 1e-12);
        assert!(r.pm_pair_defect < 1e-10);
        assert!(r.adjoint_defect.is_finite());
    }

    #[test]
    fn rejects_bad_sizes() {
        let w = line(0.0, 0.0);
        assert!(LatticeState::for_walk(&w, 3).is_err());
        assert!(matches!(
            LatticeState::for_walk(&w, 5000),
            Err(Error::ResourceLimit { .. })
        ));
        let w3 = LatticeWalk::Dirac3(Walk3DParams::new(0.0, 0.0).unwrap());
        assert!(LatticeState::for_walk(&w3, 17).is_err());
        let s = LatticeState::for_walk(&w, 8).unwrap();
        assert!(step_position(&w3, &s).is_err());
    }

    #[test]
    fn packet_is_normalised() {
        let p = Walk1DParams::new(0.3, 0.05).unwrap();
        let s = gaussian_packet(&p, 128, 40.0, 6.0, 0.2).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!((centroid(&s, 40.0) - 40.0).abs() < 1e-9);
    }
}
