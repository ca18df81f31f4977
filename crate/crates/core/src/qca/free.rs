//! Free second-quantized 1+1-D QCA on a periodic ring.
//!
//! The step is `Γ(W) Γ(T_A) Γ(T_B)` where each factor is the exponential of a
//! quadratic generator `Σ h_ij c_i† c_j`: `h_A = P̂ ⊗ σ_θ/2`,
//! `h_B = P̂ ⊗ σ_{−θ}/2` with `P̂` the lattice momentum (eigenvalues
//! `2πk/N` taken in `(−π, π]`), and `h_W` the on-site mass generator.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qca::fock::{
    annihilation, csr_apply, exp_hermitian, expmv, quadratic_operator, random_state, vec_dist, Csr,
    FockSpace, GaussianUnitary, ManyBodyOperator,
};
use crate::spin::{rotated_pauli_1d, wrap_phase, SpinMatrix, C64, ONE, ZERO};
use crate::walk1d::{gamma_coeffs_for_theta, GammaTriple, Walk1DParams};

/// `P̂[n, m] = (1/N) Σ_k p_k e^{i p_k (n − m)}`.
pub fn lattice_momentum(sites: usize) -> DMatrix<C64> {
    let n = sites as f64;
    let ps: Vec<f64> = (0..sites)
        .map(|k| wrap_phase(2.0 * PI * k as f64 / n))
        .collect();
    DMatrix::from_fn(sites, sites, |r, c| {
        ps.iter()
            .map(|&p| C64::from_polar(p / n, p * (r as f64 - c as f64)))
            .sum()
    })
}

/// `A ⊗ s`, with site index slow and spinor index fast.
pub fn site_kron(a: &DMatrix<C64>, s: &SpinMatrix) -> DMatrix<C64> {
    let n = a.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| a[(r / 2, c / 2)] * s.get(r % 2, c % 2))
}

/// Single-particle generators `(h_W, h_A, h_B)`.
pub fn single_particle_generators(params: &Walk1DParams, sites: usize) -> [DMatrix<C64>; 3] {
    let p = lattice_momentum(sites);
    let theta = params.theta();
    let half = C64::new(0.5, 0.0);
    [
        site_kron(&DMatrix::identity(sites, sites), &params.mass_generator()),
        site_kron(&p, &rotated_pauli_1d(theta)) * half,
        site_kron(&p, &rotated_pauli_1d(-theta)) * half,
    ]
}

/// Sum of absolute eigenvalues: bounds the many-body lift on every sector.
fn lifted_norm_bound(h: &DMatrix<C64>) -> f64 {
    nalgebra::SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum()
}

/// `γ`-form transport on a ring: block `(n, n−1)` is `γ₊`, `(n, n)` is `γ₀`,
/// `(n, n+1)` is `γ₋`.
pub fn gamma_transport_matrix(gammas: &GammaTriple, sites: usize) -> DMatrix<C64> {
    let mut t = DMatrix::<C64>::zeros(2 * sites, 2 * sites);
    for n in 0..sites {
        let prev = (n + sites - 1) % sites;
        let next = (n + 1) % sites;
        for (col_site, g) in [
            (prev, &gammas.plus),
            (n, &gammas.zero),
            (next, &gammas.minus),
        ] {
            for a in 0..2 {
                for b in 0..2 {
                    t[(2 * n + a, 2 * col_site + b)] += g.get(a, b);
                }
            }
        }
    }
    t
}

pub struct FreeQca {
    params: Walk1DParams,
    space: FockSpace,
    generators: [DMatrix<C64>; 3],
    transport: DMatrix<C64>,
    single_particle: DMatrix<C64>,
    step: ManyBodyOperator,
}

/// Free QCA step on an `N`-site ring, `2 ≤ N ≤ 8`.
pub fn build_free_step(params: &Walk1DParams, sites: usize) -> Result<FreeQca> {
    let space = FockSpace::new(sites)?;
    let generators = single_particle_generators(params, sites);
    let [hw, ha, hb] = &generators;
    let transport = exp_hermitian(ha, 1.0) * exp_hermitian(hb, 1.0);
    let single_particle = exp_hermitian(hw, 1.0) * &transport;
    let step = ManyBodyOperator::Gaussian(GaussianUnitary::new(&single_particle)?);
    Ok(FreeQca {
        params: *params,
        space,
        generators,
        transport,
        single_particle,
        step,
    })
}

/// Many-body generators kept as sparse matrices and exponentiated by Taylor
/// series; independent of the rotation decomposition used by [`FreeQca::step`].
pub struct DirectFreeStep {
    generators: [Csr; 3],
    bounds: [f64; 3],
}

impl DirectFreeStep {
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        // W acts last
        (0..3).rev().fold(v.to_vec(), |acc, k| {
            expmv(&self.generators[k], &acc, 1.0, self.bounds[k])
        })
    }

    pub fn generator(&self, k: usize) -> &Csr {
        &self.generators[k]
    }
}

/// Conjugation of the fields by the transport, `T Ψ_n T†`, compared with two
/// neighbour forms.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ConjugationReport {
    /// Against `γ₊†Ψ_{n+1} + γ₀†Ψ_n + γ₋†Ψ_{n−1}`.
    pub adjoint_gamma_defect: f64,
    /// Against `γ₊Ψ_{n+1} + γ₀Ψ_n + γ₋Ψ_{n−1}`.
    pub gamma_defect: f64,
}

impl FreeQca {
    pub fn params(&self) -> &Walk1DParams {
        &self.params
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn step(&self) -> &ManyBodyOperator {
        &self.step
    }

    pub fn single_particle(&self) -> &DMatrix<C64> {
        &self.single_particle
    }

    pub fn generators(&self) -> &[DMatrix<C64>; 3] {
        &self.generators
    }

    /// One-particle block of the many-body step.
    pub fn one_particle_sector(&self) -> DMatrix<C64> {
        self.step.one_particle_block(self.space.modes(), 0)
    }

    /// Sparse many-body generators; `N ≤ 6`.
    pub fn direct_step(&self) -> Result<DirectFreeStep> {
        if self.space.sites() > 6 {
            return Err(Error::ResourceLimit {
                states: self.space.dim(),
                budget: 1 << 12,
            });
        }
        let build = |h: &DMatrix<C64>| quadratic_operator(h, 1, |o, _, _| Some((o, 1.0)));
        let [hw, ha, hb] = &self.generators;
        Ok(DirectFreeStep {
            generators: [build(hw), build(ha), build(hb)],
            bounds: [
                lifted_norm_bound(hw),
                lifted_norm_bound(ha),
                lifted_norm_bound(hb),
            ],
        })
    }

    /// Checks `T Ψ_n T†` on `samples` random many-body states; `N ≤ 6`.
    pub fn conjugation_report(&self, samples: usize, seed: u64) -> Result<ConjugationReport> {
        let sites = self.space.sites();
        if !(3..=6).contains(&sites) {
            return Err(Error::InvalidParameter(format!(
                "conjugation check needs 3 ≤ N ≤ 6, got {sites}"
            )));
        }
        let modes = self.space.modes();
        let transport = GaussianUnitary::new(&self.transport)?;
        let g = gamma_coeffs_for_theta(self.params.theta());
        let adjoint_form = gamma_transport_matrix(&g, sites).adjoint();
        let literal = neighbour_form(&g, sites);
        let fields: Vec<Csr> = (0..modes).map(|i| annihilation(modes, i, 1)).collect();
        let mut report = ConjugationReport {
            adjoint_gamma_defect: 0.0,
            gamma_defect: 0.0,
        };
        for s in 0..samples {
            let v = random_state(self.space.dim(), seed.wrapping_add(s as u64));
            let field_v: Vec<Vec<C64>> = fields.iter().map(|f| csr_apply(f, &v)).collect();
            for j in 0..modes {
                let lhs = transport.apply(&csr_apply(&fields[j], &transport.apply_adjoint(&v)));
                let combine = |m: &DMatrix<C64>| {
                    let mut out = vec![ZERO; v.len()];
                    for i in 0..modes {
                        let c = m[(j, i)];
                        if c != ZERO {
                            for (o, x) in out.iter_mut().zip(&field_v[i]) {
                                *o += c * x;
                            }
                        }
                    }
                    out
                };
                report.adjoint_gamma_defect = report
                    .adjoint_gamma_defect
                    .max(vec_dist(&lhs, &combine(&adjoint_form)));
                report.gamma_defect = report.gamma_defect.max(vec_dist(&lhs, &combine(&literal)));
            }
        }
        Ok(report)
    }
}

/// Block `(n, n+1)` is `γ₊`, `(n, n)` is `γ₀`, `(n, n−1)` is `γ₋`.
fn neighbour_form(g: &GammaTriple, sites: usize) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(2 * sites, 2 * sites);
    for n in 0..sites {
        let next = (n + 1) % sites;
        let prev = (n + sites - 1) % sites;
        for (col_site, c) in [(next, &g.plus), (n, &g.zero), (prev, &g.minus)] {
            for a in 0..2 {
                for b in 0..2 {
                    m[(2 * n + a, 2 * col_site + b)] += c.get(a, b);
                }
            }
        }
    }
    m
}

/// Fock basis state with the listed modes occupied.
pub fn occupation_state(space: &FockSpace, modes: &[usize]) -> Result<Vec<C64>> {
    let mut bits = 0usize;
    for &m in modes {
        if m >= space.modes() || bits & (1 << m) != 0 {
            return Err(Error::InvalidParameter(format!("bad occupied mode {m}")));
        }
        bits |= 1 << m;
    }
    let mut v = vec![ZERO; space.dim()];
    v[bits] = ONE;
    Ok(v)
}

/// `⟨n_i⟩` for every mode.
pub fn mode_occupations(modes: usize, v: &[C64]) -> Vec<f64> {
    let fdim = 1usize << modes;
    let mut occ = vec![0.0; modes];
    for (idx, z) in v.iter().enumerate() {
        let bits = idx % fdim;
        let p = z.norm_sqr();
        for (i, o) in occ.iter_mut().enumerate() {
            if bits & (1 << i) != 0 {
                *o += p;
            }
        }
    }
    occ
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FreeTrajectoryRow {
    pub step: usize,
    pub norm: f64,
    pub number: f64,
    /// `⟨ψ_n†ψ_n⟩` per site.
    pub site_occupations: Vec<f64>,
}

fn free_row(step: usize, modes: usize, v: &[C64]) -> FreeTrajectoryRow {
    let occ = mode_occupations(modes, v);
    FreeTrajectoryRow {
        step,
        norm: v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        number: occ.iter().sum(),
        site_occupations: occ.chunks(2).map(|c| c[0] + c[1]).collect(),
    }
}

pub fn run_free(qca: &FreeQca, initial: &[C64], steps: usize) -> Result<Vec<FreeTrajectoryRow>> {
    if initial.len() != qca.space.dim() {
        return Err(Error::DimensionMismatch {
            expected: qca.space.dim(),
            got: initial.len(),
        });
    }
    let modes = qca.space.modes();
    let mut v = initial.to_vec();
    let mut rows = vec![free_row(0, modes, &v)];
    for t in 1..=steps {
        v = qca.step.apply(&v);
        rows.push(free_row(t, modes, &v));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{position_step_matrix, LatticeWalk};

    #[test]
    fn momentum_operator_is_hermitian_with_plane_wave_spectrum() {
        let p = lattice_momentum(6);
        assert!((&p - p.adjoint()).norm() < 1e-14);
        let v = DMatrix::from_fn(6, 1, |n, _| C64::from_polar(1.0, 2.0 * PI * n as f64 / 6.0));
        assert!((&p * &v - &v * C64::new(2.0 * PI / 6.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn one_particle_sector_matches_walk() {
        for &(t, m) in &[(0.0, 0.0), (0.4, 0.1), (1.0, 0.0)] {
            let params = Walk1DParams::new(t, m).unwrap();
            let qca = build_free_step(&params, 4).unwrap();
            let walk = position_step_matrix(&LatticeWalk::Line(params), 4).unwrap();
            assert!((qca.one_particle_sector() - &walk).norm() < 1e-10);
        }
    }

    #[test]
    fn direct_route_matches_rotations() {
        let params = Walk1DParams::new(0.4, 0.1).unwrap();
        let qca = build_free_step(&params, 3).unwrap();
        let direct = qca.direct_step().unwrap();
        let v = random_state(qca.space().dim(), 2);
        assert!(vec_dist(&direct.apply(&v), &qca.step().apply(&v)) < 1e-10);
    }

    #[test]
    fn conventional_vacuum_and_number() {
        let params = Walk1DParams::new(0.0, 0.0).unwrap();
        let qca = build_free_step(&params, 4).unwrap();
        let vac = occupation_state(qca.space(), &[]).unwrap();
        let out = qca.step().apply(&vac);
        assert!((out[0].norm() - 1.0).abs() < 1e-12);
        let start = occupation_state(qca.space(), &[0, 3, 5]).unwrap();
        let rows = run_free(&qca, &start, 5).unwrap();
        for r in &rows {
            assert!((r.number - 3.0).abs() < 1e-10);
            assert!((r.norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn conjugation_forms() {
        let qca = build_free_step(&Walk1DParams::new(0.0, 0.0).unwrap(), 3).unwrap();
        let r = qca.conjugation_report(2, 0).unwrap();
        assert!(r.adjoint_gamma_defect < 1e-10);
        assert!(r.gamma_defect < 1e-10);
        let qca = build_free_step(&Walk1DParams::new(0.6, 0.0).unwrap(), 3).unwrap();
        let r = qca.conjugation_report(2, 0).unwrap();
        assert!(r.adjoint_gamma_defect < 1e-10);
        assert!(r.gamma_defect > 1e-3);
    }
}
