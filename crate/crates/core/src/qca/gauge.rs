//! Gauge-invariant Schwinger QCA on an open chain with truncated links.
//!
//! Link `l` sits to the right of site `l`. Links `0..N−1` join neighbouring
//! sites; link `N−1` is a boundary link past the last site, with the gauge
//! phase outside the chain fixed to zero. The boundary link lets the barred
//! fields `ψ_n ∏_{m≥n} V_m` be exactly gauge invariant on a finite chain.
//!
//! A hop of a fermion from site `j` to site `i > j` carries `V` on every link
//! in between; `V|l⟩ = |l−1⟩`, which keeps `J_n = E_n − E_{n−1} − N_n`
//! unchanged. Hops to the left carry `V†`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::error::{Error, Result};
use crate::qca::fock::{
    annihilation, block_product, expectation_diag, quadratic_operator, BlockOperator, Budget, Csr,
    FockSpace, ManyBodyOperator, StepFactor,
};
use crate::qca::free::{mode_occupations, single_particle_generators};
use crate::spin::{C64, ONE, ZERO};
use crate::walk1d::Walk1DParams;

pub const MAX_GAUGE_SITES: usize = 5;
pub const MAX_TRUNCATION: i32 = 2;

/// What `V` does to the lowest link state `|−L⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkEdge {
    /// Annihilated; the only choice that keeps `[V, E] = V` and gauge invariance.
    #[default]
    Clipped,
    /// Wraps to `|L⟩`; breaks gauge invariance at the wrap.
    Cyclic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeLatticeSpace {
    fermions: FockSpace,
    truncation: i32,
    edge: LinkEdge,
}

impl GaugeLatticeSpace {
    pub fn new(sites: usize, truncation: i32, edge: LinkEdge) -> Result<Self> {
        if !(2..=MAX_GAUGE_SITES).contains(&sites) {
            return Err(Error::InvalidParameter(format!(
                "{sites} sites outside 2..={MAX_GAUGE_SITES}"
            )));
        }
        if !(1..=MAX_TRUNCATION).contains(&truncation) {
            return Err(Error::InvalidParameter(format!(
                "truncation {truncation} outside 1..={MAX_TRUNCATION}"
            )));
        }
        Ok(GaugeLatticeSpace {
            fermions: FockSpace::new(sites)?,
            truncation,
            edge,
        })
    }

    pub fn sites(&self) -> usize {
        self.fermions.sites()
    }

    pub fn modes(&self) -> usize {
        self.fermions.modes()
    }

    pub fn links(&self) -> usize {
        self.sites()
    }

    pub fn truncation(&self) -> i32 {
        self.truncation
    }

    pub fn edge(&self) -> LinkEdge {
        self.edge
    }

    fn base(&self) -> usize {
        (2 * self.truncation + 1) as usize
    }

    pub fn link_states(&self) -> usize {
        self.base().pow(self.links() as u32)
    }

    pub fn fermion_dim(&self) -> usize {
        self.fermions.dim()
    }

    pub fn dim(&self) -> usize {
        self.fermion_dim() * self.link_states()
    }

    pub fn link_value(&self, outer: usize, link: usize) -> i32 {
        ((outer / self.base().pow(link as u32)) % self.base()) as i32 - self.truncation
    }

    pub fn link_values(&self, outer: usize) -> Vec<i32> {
        (0..self.links())
            .map(|l| self.link_value(outer, l))
            .collect()
    }

    pub fn outer_index(&self, values: &[i32]) -> Result<usize> {
        if values.len() != self.links() {
            return Err(Error::DimensionMismatch {
                expected: self.links(),
                got: values.len(),
            });
        }
        let mut idx = 0;
        for &v in values.iter().rev() {
            if v.abs() > self.truncation {
                return Err(Error::InvalidParameter(format!(
                    "link value {v} beyond truncation {}",
                    self.truncation
                )));
            }
            idx = idx * self.base() + (v + self.truncation) as usize;
        }
        Ok(idx)
    }

    pub fn split(&self, index: usize) -> (usize, usize) {
        (index % self.fermion_dim(), index / self.fermion_dim())
    }

    /// Outer index after adding `delta = ±1` to one link.
    pub fn shift_link(&self, outer: usize, link: usize, delta: i32) -> Option<usize> {
        let v = self.link_value(outer, link);
        let mut w = v + delta;
        if w.abs() > self.truncation {
            match self.edge {
                LinkEdge::Clipped => return None,
                LinkEdge::Cyclic => w = -w.signum() * self.truncation,
            }
        }
        let stride = self.base().pow(link as u32) as isize;
        Some((outer as isize + (w - v) as isize * stride) as usize)
    }

    /// Link dressing of a hop from mode `from` to mode `to`.
    pub fn hop_links(&self, outer: usize, from: usize, to: usize) -> Option<usize> {
        let (s_from, s_to) = (from / 2, to / 2);
        let mut o = outer;
        if s_to > s_from {
            for l in s_from..s_to {
                o = self.shift_link(o, l, -1)?;
            }
        } else {
            for l in s_to..s_from {
                o = self.shift_link(o, l, 1)?;
            }
        }
        Some(o)
    }

    /// `ψ_n^a` on the full space.
    pub fn field(&self, mode: usize) -> Csr {
        annihilation(self.modes(), mode, self.link_states())
    }

    /// `V_l`.
    pub fn link_lowering(&self, link: usize) -> Csr {
        let dim = self.dim();
        let fdim = self.fermion_dim();
        let mut coo = CooMatrix::new(dim, dim);
        for outer in 0..self.link_states() {
            if let Some(o2) = self.shift_link(outer, link, -1) {
                for bits in 0..fdim {
                    coo.push(bits + fdim * o2, bits + fdim * outer, ONE);
                }
            }
        }
        CsrMatrix::from(&coo)
    }

    fn diag_from(&self, f: impl Fn(usize, usize) -> f64) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let (bits, outer) = self.split(i);
                f(bits, outer)
            })
            .collect()
    }

    /// Diagonal of `E_l`.
    pub fn electric_field(&self, link: usize) -> Vec<f64> {
        self.diag_from(|_, o| self.link_value(o, link) as f64)
    }

    /// Diagonal of `N_n = Σ_a ψ_n^a†ψ_n^a`.
    pub fn site_number(&self, site: usize) -> Vec<f64> {
        self.diag_from(|bits, _| ((bits >> (2 * site)) & 3).count_ones() as f64)
    }

    /// Diagonal of `J_n = E_n − E_{n−1} − N_n`.
    pub fn gauss_charge(&self, site: usize) -> Result<Vec<f64>> {
        if site >= self.sites() {
            return Err(Error::InvalidParameter(format!("site {site} out of range")));
        }
        Ok(self.diag_from(|bits, o| {
            let right = self.link_value(o, site) as f64;
            let left = if site == 0 {
                0.0
            } else {
                self.link_value(o, site - 1) as f64
            };
            right - left - ((bits >> (2 * site)) & 3).count_ones() as f64
        }))
    }

    /// Diagonal of `G_α`: `G_α†ψ_nG_α = e^{iα_n}ψ_n` and
    /// `G_α|l⟩_m = e^{il(α_{m+1} − α_m)}|l⟩_m`, with `α_N = 0`.
    pub fn gauge_transform(&self, alpha: &[f64]) -> Result<Vec<C64>> {
        if alpha.len() != self.sites() {
            return Err(Error::DimensionMismatch {
                expected: self.sites(),
                got: alpha.len(),
            });
        }
        let a = |n: usize| if n < self.sites() { alpha[n] } else { 0.0 };
        Ok((0..self.dim())
            .map(|i| {
                let (bits, o) = self.split(i);
                let mut phase = 0.0;
                for n in 0..self.sites() {
                    phase += a(n) * ((bits >> (2 * n)) & 3).count_ones() as f64;
                    phase += self.link_value(o, n) as f64 * (a(n + 1) - a(n));
                }
                C64::from_polar(1.0, phase)
            })
            .collect())
    }

    /// `ψ̄_n^a = ψ_n^a ∏_{l ≥ n} V_l`.
    pub fn barred_field(&self, mode: usize) -> Csr {
        let site = mode / 2;
        (site..self.links()).fold(self.field(mode), |acc, l| &acc * &self.link_lowering(l))
    }

    /// Basis state with the listed modes occupied and links fixed by
    /// `J_n = 0`, i.e. `E_n = E_{n−1} + N_n` from `E_{−1} = 0`.
    pub fn physical_state(&self, modes: &[usize]) -> Result<Vec<C64>> {
        let bits = occupied_bits(self.modes(), modes)?;
        let mut e = 0;
        let mut values = Vec::with_capacity(self.links());
        for n in 0..self.sites() {
            e += ((bits >> (2 * n)) & 3).count_ones() as i32;
            values.push(e);
        }
        self.basis_state(bits, &values)
    }

    pub fn basis_state(&self, bits: usize, links: &[i32]) -> Result<Vec<C64>> {
        let outer = self.outer_index(links)?;
        let mut v = vec![ZERO; self.dim()];
        v[bits + self.fermion_dim() * outer] = ONE;
        Ok(v)
    }
}

fn occupied_bits(modes: usize, occupied: &[usize]) -> Result<usize> {
    let mut bits = 0usize;
    for &m in occupied {
        if m >= modes || bits & (1 << m) != 0 {
            return Err(Error::InvalidParameter(format!("bad occupied mode {m}")));
        }
        bits |= 1 << m;
    }
    Ok(bits)
}

/// `max |(G†MG)_rc − φ M_rc|` for diagonal `G`.
pub fn diagonal_conjugation_defect(m: &Csr, g: &[C64], phase: C64) -> f64 {
    m.triplet_iter()
        .map(|(r, c, v)| (g[r].conj() * v * g[c] - phase * v).norm())
        .fold(0.0, f64::max)
}

pub struct InteractingQca {
    params: Walk1DParams,
    space: GaugeLatticeSpace,
    coupling_dt: f64,
    step: BlockOperator,
}

/// `D = W T̃_A T̃_B D_E` with `D_E = exp(−i coupling_dt Σ_l E_l²)`.
pub fn build_interacting_step(
    params: &Walk1DParams,
    space: &GaugeLatticeSpace,
    coupling_dt: f64,
    budget: &Budget,
) -> Result<InteractingQca> {
    if !coupling_dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "coupling_dt = {coupling_dt}"
        )));
    }
    budget.check_states(space.dim())?;
    let [hw, ha, hb] = single_particle_generators(params, space.sites());
    let outer = space.link_states();
    let dressed = |h: &DMatrix<C64>| {
        quadratic_operator(h, outer, |o, from, to| {
            space.hop_links(o, from, to).map(|o2| (o2, 1.0))
        })
    };
    let gw = quadratic_operator(&hw, outer, |o, _, _| Some((o, 1.0)));
    let ga = dressed(&ha);
    let gb = dressed(&hb);
    let electric: Vec<C64> = (0..space.dim())
        .map(|i| {
            let (_, o) = space.split(i);
            let e2: i32 = space.link_values(o).iter().map(|v| v * v).sum();
            C64::from_polar(1.0, -coupling_dt * e2 as f64)
        })
        .collect();
    let step = block_product(
        space.dim(),
        &[
            StepFactor::Exp(&gw),
            StepFactor::Exp(&ga),
            StepFactor::Exp(&gb),
            StepFactor::Phase(&electric),
        ],
        budget,
    )?;
    Ok(InteractingQca {
        params: *params,
        space: *space,
        coupling_dt,
        step,
    })
}

impl InteractingQca {
    pub fn params(&self) -> &Walk1DParams {
        &self.params
    }

    pub fn space(&self) -> &GaugeLatticeSpace {
        &self.space
    }

    pub fn coupling_dt(&self) -> f64 {
        self.coupling_dt
    }

    pub fn blocks(&self) -> &BlockOperator {
        &self.step
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        ManyBodyOperator::Blocks(self.step.clone()).apply(v)
    }

    pub fn into_operator(self) -> ManyBodyOperator {
        ManyBodyOperator::Blocks(self.step)
    }

    /// `‖[D, G_α]‖_F`.
    pub fn gauge_commutator_defect(&self, alpha: &[f64]) -> Result<f64> {
        Ok(self
            .step
            .diagonal_commutator_defect(&self.space.gauge_transform(alpha)?))
    }

    /// `‖[D, J_n]‖_F`.
    pub fn gauss_commutator_defect(&self, site: usize) -> Result<f64> {
        let j: Vec<C64> = self
            .space
            .gauss_charge(site)?
            .into_iter()
            .map(|x| C64::new(x, 0.0))
            .collect();
        Ok(self.step.diagonal_commutator_defect(&j))
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.step.unitarity_defect()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct GaugeTrajectoryRow {
    pub step: usize,
    pub norm: f64,
    pub site_occupations: Vec<f64>,
    pub link_fields: Vec<f64>,
    pub gauss: Vec<f64>,
    /// `max_n |⟨J_n⟩_t − ⟨J_n⟩_0|`.
    pub gauss_drift: f64,
    /// `max_n |⟨J_n²⟩_t − ⟨J_n²⟩_0|`.
    pub gauss_sq_drift: f64,
    /// Norm of the component with some `|E_l| = L`.
    pub edge_leakage: f64,
}

pub fn run_interacting(
    qca: &InteractingQca,
    initial: &[C64],
    steps: usize,
) -> Result<Vec<GaugeTrajectoryRow>> {
    let space = qca.space;
    if initial.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: initial.len(),
        });
    }
    let charges: Vec<Vec<f64>> = (0..space.sites())
        .map(|n| space.gauss_charge(n))
        .collect::<Result<_>>()?;
    let fields: Vec<Vec<f64>> = (0..space.links())
        .map(|l| space.electric_field(l))
        .collect();
    let edge: Vec<bool> = (0..space.dim())
        .map(|i| {
            let (_, o) = space.split(i);
            space
                .link_values(o)
                .iter()
                .any(|v| v.abs() == space.truncation())
        })
        .collect();
    let op = ManyBodyOperator::Blocks(qca.step.clone());
    let measure = |t: usize, v: &[C64], base: Option<&(Vec<f64>, Vec<f64>)>| {
        let gauss: Vec<f64> = charges.iter().map(|j| expectation_diag(j, v)).collect();
        let gauss_sq: Vec<f64> = charges
            .iter()
            .map(|j| {
                let sq: Vec<f64> = j.iter().map(|x| x * x).collect();
                expectation_diag(&sq, v)
            })
            .collect();
        let drift = |now: &[f64], then: &[f64]| {
            now.iter()
                .zip(then)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        let (gauss_drift, gauss_sq_drift) = match base {
            Some((g0, s0)) => (drift(&gauss, g0), drift(&gauss_sq, s0)),
            None => (0.0, 0.0),
        };
        let occ = mode_occupations(space.modes(), v);
        let row = GaugeTrajectoryRow {
            step: t,
            norm: v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            site_occupations: occ.chunks(2).map(|c| c[0] + c[1]).collect(),
            link_fields: fields.iter().map(|e| expectation_diag(e, v)).collect(),
            gauss: gauss.clone(),
            gauss_drift,
            gauss_sq_drift,
            edge_leakage: v
                .iter()
                .zip(&edge)
                .filter(|(_, e)| **e)
                .map(|(z, _)| z.norm_sqr())
                .sum::<f64>()
                .sqrt(),
        };
        (row, gauss, gauss_sq)
    };
    let mut v = initial.to_vec();
    let (row0, g0, s0) = measure(0, &v, None);
    let base = (g0, s0);
    let mut rows = vec![row0];
    for t in 1..=steps {
        v = op.apply(&v);
        rows.push(measure(t, &v, Some(&base)).0);
    }
    Ok(rows)
}

/// `draws` vectors of gauge angles, uniform in `[0, 2π)`, from a seeded stream.
pub fn random_alphas(sites: usize, draws: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..draws)
        .map(|_| (0..sites).map(|_| rng.random_range(0.0..TAU)).collect())
        .collect()
}

/// `‖G_α† ψ G_α − e^{iα_n} ψ‖` over all modes, entrywise maximum.
pub fn field_covariance_defect(space: &GaugeLatticeSpace, alpha: &[f64]) -> Result<f64> {
    let g = space.gauge_transform(alpha)?;
    Ok((0..space.modes())
        .map(|m| {
            diagonal_conjugation_defect(&space.field(m), &g, C64::from_polar(1.0, alpha[m / 2]))
        })
        .fold(0.0, f64::max))
}

/// Largest entrywise change of any barred field under `G_α`.
pub fn barred_field_defect(space: &GaugeLatticeSpace, alpha: &[f64]) -> Result<f64> {
    let g = space.gauge_transform(alpha)?;
    Ok((0..space.modes())
        .map(|m| diagonal_conjugation_defect(&space.barred_field(m), &g, ONE))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qca::fock::random_state;
    use crate::qca::free::build_free_step;

    fn space(n: usize, l: i32) -> GaugeLatticeSpace {
        GaugeLatticeSpace::new(n, l, LinkEdge::Clipped).unwrap()
    }

    #[test]
    fn link_operators() {
        let s = space(2, 1);
        for l in 0..2 {
            let v = s.link_lowering(l);
            let e = s.electric_field(l);
            // [V, E] = V entrywise: V_rc (E_c − E_r) = V_rc
            for (r, c, val) in v.triplet_iter() {
                assert_eq!(*val * (e[c] - e[r]), *val);
            }
        }
        let o = s.outer_index(&[1, -1]).unwrap();
        assert_eq!(s.link_values(o), vec![1, -1]);
        assert_eq!(s.shift_link(o, 1, -1), None);
        let cyc = GaugeLatticeSpace::new(2, 1, LinkEdge::Cyclic).unwrap();
        assert_eq!(
            cyc.link_values(cyc.shift_link(o, 1, -1).unwrap()),
            vec![1, 1]
        );
    }

    #[test]
    fn gauss_charge_examples() {
        let s = space(3, 1);
        let vac = s.basis_state(0, &[0, 0, 0]).unwrap();
        for n in 0..3 {
            assert_eq!(expectation_diag(&s.gauss_charge(n).unwrap(), &vac), 0.0);
        }
        let one = s.physical_state(&[2]).unwrap();
        for n in 0..3 {
            assert_eq!(expectation_diag(&s.gauss_charge(n).unwrap(), &one), 0.0);
        }
    }

    #[test]
    fn gauge_transform_is_exp_of_gauss_charges() {
        let s = space(3, 1);
        let alpha = [0.3, 1.7, 4.0];
        let g = s.gauge_transform(&alpha).unwrap();
        let charges: Vec<Vec<f64>> = (0..3).map(|n| s.gauss_charge(n).unwrap()).collect();
        for i in 0..s.dim() {
            let phase: f64 = (0..3).map(|n| -alpha[n] * charges[n][i]).sum();
            assert!((g[i] - C64::from_polar(1.0, phase)).norm() < 1e-12);
        }
        let ones = s.gauge_transform(&[0.0; 3]).unwrap();
        assert!(ones.iter().all(|z| *z == ONE));
        assert!(field_covariance_defect(&s, &alpha).unwrap() < 1e-12);
        assert!(barred_field_defect(&s, &alpha).unwrap() < 1e-12);
        // plain fields are not invariant
        let f = s.field(0);
        assert!(diagonal_conjugation_defect(&f, &g, ONE) > 0.1);
    }

    #[test]
    fn interacting_step_invariances() {
        let params = Walk1DParams::new(0.4, 0.1).unwrap();
        let s = space(3, 1);
        let qca = build_interacting_step(&params, &s, 0.3, &Budget::default()).unwrap();
        assert!(qca.unitarity_defect() < 1e-10);
        for n in 0..3 {
            assert!(qca.gauss_commutator_defect(n).unwrap() < 1e-10);
        }
        assert!(qca.gauge_commutator_defect(&[0.1, 2.0, 5.5]).unwrap() < 1e-10);
        let start = random_state(s.dim(), 4);
        let rows = run_interacting(&qca, &start, 10).unwrap();
        for r in &rows {
            assert!(r.gauss_drift < 1e-9 && r.gauss_sq_drift < 1e-9);
            assert!((r.norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cyclic_links_break_gauss_law() {
        let params = Walk1DParams::new(0.4, 0.1).unwrap();
        let s = GaugeLatticeSpace::new(3, 1, LinkEdge::Cyclic).unwrap();
        let qca = build_interacting_step(&params, &s, 0.3, &Budget::default()).unwrap();
        assert!(qca.unitarity_defect() < 1e-10);
        let worst = (0..3)
            .map(|n| qca.gauss_commutator_defect(n).unwrap())
            .fold(0.0, f64::max);
        assert!(worst > 1e-3);
    }

    /// Links set by the path from `n0` to `m`: lowered going right, raised going left.
    fn bookkeeping(s: &GaugeLatticeSpace, n0: usize, m: usize) -> usize {
        let mut values = vec![0; s.links()];
        if m > n0 {
            for v in &mut values[n0..m] {
                *v = -1;
            }
        } else {
            for v in &mut values[m..n0] {
                *v = 1;
            }
        }
        s.outer_index(&values).unwrap()
    }

    #[test]
    fn zero_coupling_single_particle_matches_free_walk() {
        for &theta in &[0.0, 0.4] {
            let params = Walk1DParams::new(theta, 0.1).unwrap();
            let s = space(4, 1);
            let qca = build_interacting_step(&params, &s, 0.0, &Budget::default()).unwrap();
            let free = build_free_step(&params, 4).unwrap();
            let u = free.single_particle();
            let n0 = 1;
            let a0 = 0;
            let mut v = s.basis_state(1 << (2 * n0 + a0), &[0; 4]).unwrap();
            let mut ut = DMatrix::<C64>::identity(8, 8);
            for _ in 0..4 {
                v = qca.apply(&v);
                ut = u * ut;
                for m in 0..4 {
                    for a in 0..2 {
                        let idx = (1 << (2 * m + a)) + s.fermion_dim() * bookkeeping(&s, n0, m);
                        assert!((v[idx] - ut[(2 * m + a, 2 * n0 + a0)]).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn budget_and_ranges() {
        assert!(GaugeLatticeSpace::new(6, 1, LinkEdge::Clipped).is_err());
        assert!(GaugeLatticeSpace::new(3, 3, LinkEdge::Clipped).is_err());
        let s = space(5, 2);
        let params = Walk1DParams::new(0.0, 0.0).unwrap();
        assert!(matches!(
            build_interacting_step(&params, &s, 0.1, &Budget::default()),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
