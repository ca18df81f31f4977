//! Fermionic Fock space over `2N` modes with Jordan–Wigner signs, and the
//! many-body operator representations used by the QCA engines.
//!
//! Mode `i = 2n + a` carries spinor component `a` of site `n`. Basis index
//! bit `i` is the occupation of mode `i`; a basis state is
//! `c†_{i₁} c†_{i₂} ⋯ |0⟩` with `i₁ < i₂ < ⋯`. Gauge-link degrees of freedom
//! are appended as an outer factor: `index = bits + 2^{2N} · outer`.

use nalgebra::{DMatrix, SymmetricEigen};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use petgraph::unionfind::UnionFind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::spin::{C64, ONE, ZERO};

pub type Csr = CsrMatrix<C64>;

/// Largest mode count (`N ≤ 8` sites).
pub const MAX_MODES: usize = 16;

/// Limits on the state space and on dense blocks.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Budget {
    pub max_states: usize,
    pub max_block: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_states: 1 << 21,
            max_block: 1024,
        }
    }
}

impl Budget {
    pub fn check_states(&self, states: usize) -> Result<()> {
        if states > self.max_states {
            return Err(Error::ResourceLimit {
                states,
                budget: self.max_states,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    sites: usize,
}

impl FockSpace {
    pub fn new(sites: usize) -> Result<Self> {
        if !(2..=MAX_MODES / 2).contains(&sites) {
            return Err(Error::InvalidParameter(format!(
                "{sites} sites outside 2..={}",
                MAX_MODES / 2
            )));
        }
        Ok(FockSpace { sites })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn modes(&self) -> usize {
        2 * self.sites
    }

    pub fn dim(&self) -> usize {
        1 << self.modes()
    }
}

pub fn mode(site: usize, comp: usize) -> usize {
    2 * site + comp
}

/// `(−1)^{number of occupied modes below i}`.
pub fn jw_sign(bits: usize, i: usize) -> f64 {
    if (bits & ((1 << i) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `c_i` on a space of `2^modes · outer` states.
pub fn annihilation(modes: usize, i: usize, outer: usize) -> Csr {
    let fdim = 1usize << modes;
    let dim = fdim * outer;
    let mut coo = CooMatrix::new(dim, dim);
    for o in 0..outer {
        for bits in 0..fdim {
            if bits & (1 << i) != 0 {
                let from = bits + fdim * o;
                let to = (bits ^ (1 << i)) + fdim * o;
                coo.push(to, from, C64::new(jw_sign(bits, i), 0.0));
            }
        }
    }
    CsrMatrix::from(&coo)
}

/// Mode annihilators `ψ_n^a` in mode order.
pub fn build_fields(space: &FockSpace) -> Vec<Csr> {
    (0..space.modes())
        .map(|i| annihilation(space.modes(), i, 1))
        .collect()
}

pub fn adjoint(m: &Csr) -> Csr {
    let mut t = m.transpose();
    for v in t.values_mut() {
        *v = v.conj();
    }
    t
}

pub fn csr_apply(m: &Csr, v: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; m.nrows()];
    for (r, row) in m.row_iter().enumerate() {
        let mut acc = ZERO;
        for (&c, val) in row.col_indices().iter().zip(row.values()) {
            acc += val * v[c];
        }
        out[r] = acc;
    }
    out
}

pub fn csr_frobenius(m: &Csr) -> f64 {
    m.values().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖{A, B} − δ·I‖_F` over the whole space.
pub fn anticommutator_defect(a: &Csr, b: &Csr, delta: bool) -> f64 {
    let mut s = &(a * b) + &(b * a);
    if delta {
        let id = CsrMatrix::identity(a.nrows());
        s = &s - &id;
    }
    csr_frobenius(&s)
}

/// `Σ_ij h_ij c_i† [link factor] c_j`.
///
/// `link_move(outer, from_mode, to_mode)` returns the outer index after the
/// gauge dressing of a hop, or `None` when the dressing annihilates it.
pub fn quadratic_operator(
    h: &DMatrix<C64>,
    outer: usize,
    link_move: impl Fn(usize, usize, usize) -> Option<(usize, f64)>,
) -> Csr {
    let modes = h.nrows();
    let fdim = 1usize << modes;
    let dim = fdim * outer;
    let mut coo = CooMatrix::new(dim, dim);
    for o in 0..outer {
        for bits in 0..fdim {
            let from = bits + fdim * o;
            for j in 0..modes {
                if bits & (1 << j) == 0 {
                    continue;
                }
                let s1 = jw_sign(bits, j);
                let mid = bits ^ (1 << j);
                for i in 0..modes {
                    let hij = h[(i, j)];
                    if hij == ZERO || mid & (1 << i) != 0 {
                        continue;
                    }
                    let s2 = jw_sign(mid, i);
                    let Some((o2, weight)) = link_move(o, j, i) else {
                        continue;
                    };
                    let to = (mid | (1 << i)) + fdim * o2;
                    coo.push(to, from, hij * (s1 * s2 * weight));
                }
            }
        }
    }
    CsrMatrix::from(&coo)
}

/// Exact `e^{−iHt}` of a Hermitian matrix through its eigendecomposition.
pub fn exp_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let e = SymmetricEigen::new(h.clone());
    let phases = DMatrix::from_diagonal(&e.eigenvalues.map(|l| C64::from_polar(1.0, -l * t)));
    &e.eigenvectors * phases * e.eigenvectors.adjoint()
}

/// Dense unitary on one connected set of basis states.
#[derive(Clone, Debug)]
pub struct Block {
    pub indices: Vec<usize>,
    pub matrix: DMatrix<C64>,
}

/// Operator that is block diagonal after a permutation of the basis.
#[derive(Clone, Debug)]
pub struct BlockOperator {
    dim: usize,
    blocks: Vec<Block>,
}

impl BlockOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn largest_block(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.indices.len())
            .max()
            .unwrap_or(0)
    }

    fn apply(&self, v: &[C64], adjoint: bool) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for b in &self.blocks {
            let k = b.indices.len();
            for r in 0..k {
                let mut acc = ZERO;
                for c in 0..k {
                    let m = if adjoint {
                        b.matrix[(c, r)].conj()
                    } else {
                        b.matrix[(r, c)]
                    };
                    acc += m * v[b.indices[c]];
                }
                out[b.indices[r]] = acc;
            }
        }
        out
    }

    /// `‖[U, diag(g)]‖_F`, evaluated entrywise.
    pub fn diagonal_commutator_defect(&self, g: &[C64]) -> f64 {
        let mut sum = 0.0;
        for b in &self.blocks {
            for (r, &ir) in b.indices.iter().enumerate() {
                for (c, &ic) in b.indices.iter().enumerate() {
                    sum += (b.matrix[(r, c)] * (g[ic] - g[ir])).norm_sqr();
                }
            }
        }
        sum.sqrt()
    }

    /// `max_b ‖U_b†U_b − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let k = b.indices.len();
                (b.matrix.adjoint() * &b.matrix - DMatrix::identity(k, k))
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Connected components of the union of the nonzero patterns.
pub fn components(dim: usize, generators: &[&Csr]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::<usize>::new(dim);
    for g in generators {
        for (r, c, v) in g.triplet_iter() {
            if *v != ZERO {
                uf.union(r, c);
            }
        }
    }
    let labels = uf.into_labeling();
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, root) in labels.into_iter().enumerate() {
        by_root.entry(root).or_default().push(i);
    }
    by_root.into_values().collect()
}

fn dense_restriction(m: &Csr, indices: &[usize], position: &[usize]) -> DMatrix<C64> {
    let k = indices.len();
    let mut d = DMatrix::<C64>::zeros(k, k);
    for &r in indices {
        let row = m.row(r);
        for (&col, val) in row.col_indices().iter().zip(row.values()) {
            d[(position[r], position[col])] = *val;
        }
    }
    d
}

/// One factor of a step: `e^{−iH}` for a Hermitian generator, or a diagonal phase.
pub enum StepFactor<'a> {
    Exp(&'a Csr),
    Phase(&'a [C64]),
}

/// Product `F₁ F₂ ⋯` of factors, each exponentiated exactly on the connected
/// components of the combined generator graph.
pub fn block_product(
    dim: usize,
    factors: &[StepFactor<'_>],
    budget: &Budget,
) -> Result<BlockOperator> {
    budget.check_states(dim)?;
    let gens: Vec<&Csr> = factors
        .iter()
        .filter_map(|f| match f {
            StepFactor::Exp(h) => Some(*h),
            StepFactor::Phase(_) => None,
        })
        .collect();
    for g in &gens {
        if g.nrows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.nrows(),
            });
        }
        let defect = csr_frobenius(&(*g - &adjoint(g)));
        if defect > 1e-12 {
            return Err(Error::NotHermitian(defect));
        }
    }
    let comps = components(dim, &gens);
    let largest = comps.iter().map(Vec::len).max().unwrap_or(0);
    if largest > budget.max_block {
        return Err(Error::ResourceLimit {
            states: largest,
            budget: budget.max_block,
        });
    }
    let mut position = vec![0usize; dim];
    for c in &comps {
        for (k, &i) in c.iter().enumerate() {
            position[i] = k;
        }
    }
    let blocks = crate::scan::par_map(comps.len(), |ci| {
        let idx = &comps[ci];
        let k = idx.len();
        let mut acc = DMatrix::<C64>::identity(k, k);
        for f in factors {
            let m = match f {
                StepFactor::Exp(h) => exp_hermitian(&dense_restriction(h, idx, &position), 1.0),
                StepFactor::Phase(p) => DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    k,
                    idx.iter().map(|&i| p[i]),
                )),
            };
            acc *= m;
        }
        Block {
            indices: idx.clone(),
            matrix: acc,
        }
    });
    Ok(BlockOperator { dim, blocks })
}

/// Single-particle unitary lifted to Fock space, stored as nearest-mode
/// rotations followed by mode phases.
#[derive(Clone, Debug)]
pub struct GaussianUnitary {
    modes: usize,
    single_particle: DMatrix<C64>,
    phases: Vec<C64>,
    /// Applied in order after the phases: `(i, g)` acts on modes `i, i+1`.
    rotations: Vec<(usize, [C64; 4])>,
}

impl GaussianUnitary {
    /// Decomposes `u` as `g₁† ⋯ g_K† D` with `g_k` rotations of neighbouring modes.
    pub fn new(u: &DMatrix<C64>) -> Result<Self> {
        let m = u.nrows();
        if u.ncols() != m || m > MAX_MODES {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: u.ncols(),
            });
        }
        let defect = (u.adjoint() * u - DMatrix::identity(m, m)).norm();
        if defect > 1e-10 {
            return Err(Error::NotUnitary(defect));
        }
        let mut r = u.clone();
        let mut left = Vec::new();
        for col in 0..m {
            for row in (col + 1..m).rev() {
                let a = r[(row - 1, col)];
                let b = r[(row, col)];
                if b.norm() < 1e-300 {
                    continue;
                }
                let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
                // g = [[ā, b̄], [−b, a]]/n sends (a, b) to (n, 0)
                let g = [a.conj() / n, b.conj() / n, -b / n, a / n];
                for c in 0..m {
                    let x = r[(row - 1, c)];
                    let y = r[(row, c)];
                    r[(row - 1, c)] = g[0] * x + g[1] * y;
                    r[(row, c)] = g[2] * x + g[3] * y;
                }
                left.push((row - 1, g));
            }
        }
        let phases = (0..m).map(|i| r[(i, i)]).collect();
        // u = g₁†g₂†⋯g_K† D, so after D apply g_K† first and g₁† last
        let rotations = left
            .into_iter()
            .rev()
            .map(|(i, g)| (i, [g[0].conj(), g[2].conj(), g[1].conj(), g[3].conj()]))
            .collect();
        Ok(GaussianUnitary {
            modes: m,
            single_particle: u.clone(),
            phases,
            rotations,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn single_particle(&self) -> &DMatrix<C64> {
        &self.single_particle
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    fn apply_rotation(v: &mut [C64], i: usize, g: &[C64; 4]) {
        let lo = 1usize << i;
        let hi = 1usize << (i + 1);
        let det = g[0] * g[3] - g[1] * g[2];
        for bits in 0..v.len() {
            match (bits & lo != 0, bits & hi != 0) {
                (true, false) => {
                    let other = bits ^ lo ^ hi;
                    let x = v[bits];
                    let y = v[other];
                    v[bits] = g[0] * x + g[1] * y;
                    v[other] = g[2] * x + g[3] * y;
                }
                (true, true) => v[bits] *= det,
                _ => {}
            }
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out: Vec<C64> = v
            .iter()
            .enumerate()
            .map(|(bits, a)| {
                (0..self.modes)
                    .filter(|i| bits & (1 << i) != 0)
                    .fold(*a, |acc, i| acc * self.phases[i])
            })
            .collect();
        for (i, g) in &self.rotations {
            Self::apply_rotation(&mut out, *i, g);
        }
        out
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let mut out = v.to_vec();
        for (i, g) in self.rotations.iter().rev() {
            let gd = [g[0].conj(), g[2].conj(), g[1].conj(), g[3].conj()];
            Self::apply_rotation(&mut out, *i, &gd);
        }
        for (bits, a) in out.iter_mut().enumerate() {
            for i in 0..self.modes {
                if bits & (1 << i) != 0 {
                    *a *= self.phases[i].conj();
                }
            }
        }
        out
    }
}

/// Many-body operator in whichever representation is cheapest to build.
#[derive(Clone, Debug)]
pub enum ManyBodyOperator {
    Diagonal(Vec<C64>),
    Sparse(Csr),
    Blocks(BlockOperator),
    Gaussian(GaussianUnitary),
    /// `A₁ A₂ ⋯ A_k`, so `A_k` acts first.
    Product(Vec<ManyBodyOperator>),
}

impl ManyBodyOperator {
    pub fn dim(&self) -> usize {
        match self {
            ManyBodyOperator::Diagonal(d) => d.len(),
            ManyBodyOperator::Sparse(m) => m.nrows(),
            ManyBodyOperator::Blocks(b) => b.dim(),
            ManyBodyOperator::Gaussian(g) => g.dim(),
            ManyBodyOperator::Product(f) => f.first().map_or(0, |a| a.dim()),
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        match self {
            ManyBodyOperator::Diagonal(d) => d.iter().zip(v).map(|(a, b)| a * b).collect(),
            ManyBodyOperator::Sparse(m) => csr_apply(m, v),
            ManyBodyOperator::Blocks(b) => b.apply(v, false),
            ManyBodyOperator::Gaussian(g) => g.apply(v),
            ManyBodyOperator::Product(f) => f.iter().rev().fold(v.to_vec(), |acc, a| a.apply(&acc)),
        }
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        match self {
            ManyBodyOperator::Diagonal(d) => d.iter().zip(v).map(|(a, b)| a.conj() * b).collect(),
            ManyBodyOperator::Sparse(m) => csr_apply(&adjoint(m), v),
            ManyBodyOperator::Blocks(b) => b.apply(v, true),
            ManyBodyOperator::Gaussian(g) => g.apply_adjoint(v),
            ManyBodyOperator::Product(f) => {
                f.iter().fold(v.to_vec(), |acc, a| a.apply_adjoint(&acc))
            }
        }
    }

    /// Dense matrix, for spaces of at most 4096 states.
    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        let dim = self.dim();
        if dim > 4096 {
            return Err(Error::ResourceLimit {
                states: dim,
                budget: 4096,
            });
        }
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        let mut e = vec![ZERO; dim];
        for j in 0..dim {
            e[j] = ONE;
            for (i, z) in self.apply(&e).into_iter().enumerate() {
                m[(i, j)] = z;
            }
            e[j] = ZERO;
        }
        Ok(m)
    }

    /// Matrix of the operator on the one-particle states `c_i†|0⟩ ⊗ |outer⟩`.
    pub fn one_particle_block(&self, modes: usize, outer: usize) -> DMatrix<C64> {
        let fdim = 1usize << modes;
        let mut m = DMatrix::<C64>::zeros(modes, modes);
        let mut e = vec![ZERO; self.dim()];
        for j in 0..modes {
            e[(1 << j) + fdim * outer] = ONE;
            let out = self.apply(&e);
            for i in 0..modes {
                m[(i, j)] = out[(1 << i) + fdim * outer];
            }
            e[(1 << j) + fdim * outer] = ZERO;
        }
        m
    }
}

/// `e^{−iHt} v` by Taylor series with `‖H‖ ≤ norm_bound`, substepping so each
/// step has `|t|·bound/s ≤ 1`.
pub fn expmv(h: &Csr, v: &[C64], t: f64, norm_bound: f64) -> Vec<C64> {
    let steps = (t.abs() * norm_bound).ceil().max(1.0) as usize;
    let tau = t / steps as f64;
    let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut cur = v.to_vec();
    for _ in 0..steps {
        let mut term = cur.clone();
        let mut sum = cur.clone();
        for k in 1..80 {
            let hv = csr_apply(h, &term);
            let coef = C64::new(0.0, -tau / k as f64);
            term = hv.into_iter().map(|z| z * coef).collect();
            for (s, z) in sum.iter_mut().zip(&term) {
                *s += z;
            }
            let tn = term.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if tn <= 1e-18 * vnorm.max(1e-300) {
                break;
            }
        }
        cur = sum;
    }
    cur
}

/// Normalised complex Gaussian random vector.
pub fn random_state(dim: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<C64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= n;
    }
    v
}

pub fn vec_dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn expectation_diag(diag: &[f64], v: &[C64]) -> f64 {
    diag.iter().zip(v).map(|(d, z)| d * z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(m: &Csr) -> DMatrix<C64> {
        let mut d = DMatrix::zeros(m.nrows(), m.ncols());
        for (r, c, v) in m.triplet_iter() {
            d[(r, c)] = *v;
        }
        d
    }

    #[test]
    fn canonical_anticommutation() {
        let space = FockSpace::new(3).unwrap();
        let f = build_fields(&space);
        for i in 0..6 {
            assert_eq!(csr_frobenius(&(&f[i] * &f[i])), 0.0);
            for j in 0..6 {
                let fj_dag = adjoint(&f[j]);
                assert!(anticommutator_defect(&f[i], &fj_dag, i == j) < 1e-12);
                assert!(anticommutator_defect(&f[i], &f[j], false) < 1e-12);
            }
        }
    }

    #[test]
    fn quadratic_operator_matches_field_products() {
        let space = FockSpace::new(2).unwrap();
        let f = build_fields(&space);
        let mut h = DMatrix::<C64>::zeros(4, 4);
        h[(0, 3)] = C64::new(0.3, 0.2);
        h[(3, 0)] = C64::new(0.3, -0.2);
        h[(1, 1)] = C64::new(0.7, 0.0);
        let q = quadratic_operator(&h, 1, |o, _, _| Some((o, 1.0)));
        let mut expect = DMatrix::<C64>::zeros(16, 16);
        for i in 0..4 {
            for j in 0..4 {
                expect += dense(&(&adjoint(&f[i]) * &f[j])) * h[(i, j)];
            }
        }
        assert!((dense(&q) - expect).norm() < 1e-14);
    }

    fn random_unitary(m: usize, seed: u64) -> DMatrix<C64> {
        let v = random_state(m * m, seed);
        let a = DMatrix::from_fn(m, m, |r, c| v[r * m + c]);
        let h = (&a + a.adjoint()) * C64::new(3.0, 0.0);
        exp_hermitian(&h, 1.0)
    }

    #[test]
    fn gaussian_lift_matches_generator_exponential() {
        let m = 6;
        let a = random_state(m * m, 5);
        let a = DMatrix::from_fn(m, m, |r, c| a[r * m + c]);
        let h = (&a + a.adjoint()) * C64::new(2.0, 0.0);
        let u = exp_hermitian(&h, 1.0);
        let g = GaussianUnitary::new(&u).unwrap();
        let hq = quadratic_operator(&h, 1, |o, _, _| Some((o, 1.0)));
        let bound = h.norm() * m as f64;
        let v = random_state(1 << m, 9);
        assert!(vec_dist(&g.apply(&v), &expmv(&hq, &v, 1.0, bound)) < 1e-10);
        let blocks = block_product(1 << m, &[StepFactor::Exp(&hq)], &Budget::default()).unwrap();
        assert!(vec_dist(&blocks.apply(&v, false), &g.apply(&v)) < 1e-10);
        assert!(blocks.unitarity_defect() < 1e-12);
        assert!(vec_dist(&g.apply_adjoint(&g.apply(&v)), &v) < 1e-12);
    }

    #[test]
    fn gaussian_one_particle_block_is_u() {
        let u = random_unitary(8, 3);
        let g = ManyBodyOperator::Gaussian(GaussianUnitary::new(&u).unwrap());
        assert!((g.one_particle_block(8, 0) - &u).norm() < 1e-12);
        // vacuum untouched
        let mut vac = vec![ZERO; 256];
        vac[0] = ONE;
        assert!(vec_dist(&g.apply(&vac), &vac) < 1e-14);
    }

    #[test]
    fn components_split_by_number() {
        let space = FockSpace::new(2).unwrap();
        let h = DMatrix::from_fn(4, 4, |_, _| C64::new(1.0, 0.0));
        let q = quadratic_operator(&h, 1, |o, _, _| Some((o, 1.0)));
        let sizes: Vec<usize> = components(space.dim(), &[&q])
            .iter()
            .map(Vec::len)
            .collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 4, 4, 6]);
    }

    #[test]
    fn budget_rejects_large_blocks() {
        let h = DMatrix::from_fn(8, 8, |_, _| C64::new(1.0, 0.0));
        let q = quadratic_operator(&h, 1, |o, _, _| Some((o, 1.0)));
        let budget = Budget {
            max_states: 1 << 20,
            max_block: 50,
        };
        assert!(matches!(
            block_product(256, &[StepFactor::Exp(&q)], &budget),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
