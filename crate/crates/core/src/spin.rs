//! Small dense complex matrices acting on the internal (coin) space.
//!
//! Everything here is dimension 2 (Weyl spinor) or 4 (Dirac spinor). The
//! matrices are stored inline so that Brillouin-zone scans never touch the
//! heap for the matrix algebra itself.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix2, Matrix4, Schur, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance used when checking that an input really is unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// A phase within this distance of `-π` is reported as `+π`.
const BRANCH_EDGE_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Square complex matrix of dimension 2 or 4, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct SpinMatrix {
    dim: usize,
    data: [C64; 16],
}

impl fmt::Debug for SpinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SpinMatrix({}x{})[", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl SpinMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "spin matrices have dimension 2 or 4");
        SpinMatrix {
            dim,
            data: [ZERO; 16],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.set(k, k, ONE);
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless `entries.len()` is 4 or 16.
    pub fn from_rows(entries: &[C64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => {
                return Err(Error::InvalidParameter(format!(
                    "spin matrix needs 4 or 16 entries, got {n}"
                )))
            }
        };
        let mut m = Self::zeros(dim);
        m.data[..entries.len()].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (k, &z) in entries.iter().enumerate() {
            m.set(k, k, z);
        }
        m
    }

    /// 4x4 matrix `[[a, b], [c, d]]` assembled from 2x2 blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert!(a.dim == 2 && b.dim == 2 && c.dim == 2 && d.dim == 2);
        Self::from_fn(4, |r, col| {
            let blk = match (r / 2, col / 2) {
                (0, 0) => a,
                (0, 1) => b,
                (1, 0) => c,
                _ => d,
            };
            blk.get(r % 2, col % 2)
        })
    }

    pub fn block_diag(a: &Self, d: &Self) -> Self {
        let z = Self::zeros(2);
        Self::from_blocks(a, &z, &z, d)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, z: C64) {
        self.data[r * self.dim + c] = z;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for z in m.data[..self.dim * self.dim].iter_mut() {
            *z *= s;
        }
        m
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius distance `‖self − other‖_F`.
    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).dist(&Self::identity(self.dim))
    }

    /// `‖H − H†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.dist(&self.adjoint())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Vector product `M v`.
    pub fn apply(&self, v: &[C64]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for (r, o) in out.iter_mut().enumerate().take(self.dim) {
            let row = &self.data[r * self.dim..(r + 1) * self.dim];
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    fn to_na2(self) -> Matrix2<C64> {
        Matrix2::from_fn(|r, c| self.get(r, c))
    }

    fn to_na4(self) -> Matrix4<C64> {
        Matrix4::from_fn(|r, c| self.get(r, c))
    }
}

impl Mul for SpinMatrix {
    type Output = SpinMatrix;

    fn mul(self, rhs: SpinMatrix) -> SpinMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = SpinMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.data[r * n + k] * rhs.data[k * n + c];
                }
                out.data[r * n + c] = acc;
            }
        }
        out
    }
}

impl Add for SpinMatrix {
    type Output = SpinMatrix;

    fn add(mut self, rhs: SpinMatrix) -> SpinMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        self
    }
}

impl Sub for SpinMatrix {
    type Output = SpinMatrix;

    fn sub(mut self, rhs: SpinMatrix) -> SpinMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        self
    }
}

impl Neg for SpinMatrix {
    type Output = SpinMatrix;

    fn neg(self) -> SpinMatrix {
        self.scale_re(-1.0)
    }
}

/// Eigenphases `E·δt` of a unitary, one per eigenvalue `e^{−iEδt}`.
///
/// Phases lie in `(−π, π]` and are sorted ascending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSpectrum {
    len: usize,
    phases: [f64; 4],
}

impl PhaseSpectrum {
    pub fn from_phases(values: &[f64]) -> Self {
        let mut phases = [0.0; 4];
        for (slot, &v) in phases.iter_mut().zip(values) {
            *slot = wrap_phase(v);
        }
        let len = values.len();
        phases[..len].sort_by(|a, b| a.total_cmp(b));
        PhaseSpectrum { len, phases }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.phases[..self.len]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Largest `|E δt|`.
    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, p| m.max(p.abs()))
    }

    /// Smallest `|E δt|`: distance of the band set from zero energy.
    pub fn min_abs(&self) -> f64 {
        self.as_slice()
            .iter()
            .fold(f64::INFINITY, |m, p| m.min(p.abs()))
    }

    /// Smallest `π − |E δt|`: distance of the band set from the branch edge.
    pub fn min_edge_gap(&self) -> f64 {
        self.as_slice()
            .iter()
            .fold(f64::INFINITY, |m, p| m.min(PI - p.abs()))
    }
}

/// Maps any real phase into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    if y <= -PI + BRANCH_EDGE_TOL {
        y = PI;
    }
    y
}

pub fn pauli(axis: Axis) -> SpinMatrix {
    let z = ZERO;
    let o = ONE;
    let entries = match axis {
        Axis::X => [z, o, o, z],
        Axis::Y => [z, -I, I, z],
        Axis::Z => [o, z, z, -o],
    };
    SpinMatrix::from_rows(&entries).expect("four entries")
}

/// `cos θ σ_z − sin θ σ_y`, the image of `σ_z` under `e^{−iθσ_x/2}`.
pub fn rotated_pauli_1d(theta: f64) -> SpinMatrix {
    pauli(Axis::Z).scale_re(theta.cos()) - pauli(Axis::Y).scale_re(theta.sin())
}

/// Axis-cycled rotated Paulis used by the three-dimensional family:
/// `σ^x_θ = cos θ σ_x − sin θ σ_z`, `σ^y_θ = cos θ σ_y − sin θ σ_x`,
/// `σ^z_θ = cos θ σ_z − sin θ σ_y`.
pub fn rotated_pauli_3d(axis: Axis, theta: f64) -> SpinMatrix {
    let partner = match axis {
        Axis::X => Axis::Z,
        Axis::Y => Axis::X,
        Axis::Z => Axis::Y,
    };
    pauli(axis).scale_re(theta.cos()) - pauli(partner).scale_re(theta.sin())
}

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues and
/// the matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(h: &SpinMatrix) -> (Vec<f64>, SpinMatrix) {
    let (vals, vecs): (Vec<f64>, SpinMatrix) = match h.dim() {
        2 => {
            let e = SymmetricEigen::new(h.to_na2());
            (
                e.eigenvalues.iter().copied().collect(),
                SpinMatrix::from_fn(2, |r, c| e.eigenvectors[(r, c)]),
            )
        }
        _ => {
            let e = SymmetricEigen::new(h.to_na4());
            (
                e.eigenvalues.iter().copied().collect(),
                SpinMatrix::from_fn(4, |r, c| e.eigenvectors[(r, c)]),
            )
        }
    };
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let sorted_vals = order.iter().map(|&k| vals[k]).collect();
    let sorted_vecs = SpinMatrix::from_fn(h.dim(), |r, c| vecs.get(r, order[c]));
    (sorted_vals, sorted_vecs)
}

/// Rank-one projector onto the `+1` eigenspace of a 2x2 Hermitian operator
/// whose spectrum is `{+1, −1}`.
pub fn projector_up(op: &SpinMatrix) -> Result<SpinMatrix> {
    if op.dim() != 2 {
        return Err(Error::InvalidParameter(
            "projector_up expects a 2x2 operator".into(),
        ));
    }
    if op.hermiticity_defect() > UNITARY_TOL {
        return Err(Error::NotHermitian(op.hermiticity_defect()));
    }
    let (vals, _) = hermitian_eigen(op);
    if (vals[0] + 1.0).abs() > 1e-10 || (vals[1] - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "operator spectrum {vals:?} is not {{-1, +1}}"
        )));
    }
    Ok((SpinMatrix::identity(2) + *op).scale_re(0.5))
}

/// `e^{−i·scale·h}` for Hermitian `h`, by exact eigen-decomposition.
pub fn exp_neg_i(h: &SpinMatrix, scale: f64) -> SpinMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let phases: Vec<C64> = vals
        .iter()
        .map(|&v| C64::from_polar(1.0, -scale * v))
        .collect();
    vecs * SpinMatrix::diagonal(&phases) * vecs.adjoint()
}

/// `cos t·I − i sin t·σ` for an operator with `σ² = I`; cheaper than the
/// general exponential and exact for Pauli-type generators.
#[inline]
pub fn exp_neg_i_involution(sigma: &SpinMatrix, t: f64) -> SpinMatrix {
    let (s, c) = t.sin_cos();
    SpinMatrix::identity(sigma.dim()).scale_re(c) - sigma.scale(C64::new(0.0, s))
}

/// Eigenvalues of a unitary (any order), without the unitarity check.
pub fn unitary_eigenvalues(u: &SpinMatrix) -> Vec<C64> {
    let vals = match u.dim() {
        2 => Schur::new(u.to_na2())
            .eigenvalues()
            .map(|v| v.iter().copied().collect::<Vec<_>>()),
        _ => Schur::new(u.to_na4())
            .eigenvalues()
            .map(|v| v.iter().copied().collect::<Vec<_>>()),
    };
    // The complex Schur form is always triangular.
    vals.expect("complex Schur decomposition is triangular")
}

/// Phases `E·δt ∈ (−π, π]` of the eigenvalues `e^{−iEδt}` of a unitary.
pub fn eigenphases(u: &SpinMatrix) -> Result<PhaseSpectrum> {
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary(defect));
    }
    Ok(eigenphases_unchecked(u))
}

/// Same as [`eigenphases`] for inputs already known to be unitary.
pub fn eigenphases_unchecked(u: &SpinMatrix) -> PhaseSpectrum {
    let vals = unitary_eigenvalues(u);
    let phases: Vec<f64> = vals.iter().map(|z| -z.arg()).collect();
    PhaseSpectrum::from_phases(&phases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_definitions() {
        let z = pauli(Axis::Z);
        assert_eq!(z.get(0, 0), ONE);
        assert_eq!(z.get(1, 1), -ONE);
        let x = pauli(Axis::X);
        assert_eq!(x.get(0, 1), ONE);
        assert_eq!(x.get(1, 0), ONE);
        let y = pauli(Axis::Y);
        assert_eq!(y.get(0, 1), c(0.0, -1.0));
        assert_eq!(y.get(1, 0), c(0.0, 1.0));
        // σ_x σ_y = i σ_z
        assert!((x * y).dist(&z.scale(I)) < 1e-15);
    }

    #[test]
    fn rotated_pauli_special_angles() {
        assert!(rotated_pauli_1d(0.0).dist(&pauli(Axis::Z)) < 1e-15);
        assert!(rotated_pauli_1d(PI / 2.0).dist(&(-pauli(Axis::Y))) < 1e-15);
        assert!(rotated_pauli_3d(Axis::Z, 0.0).dist(&pauli(Axis::Z)) < 1e-15);
        assert!(rotated_pauli_3d(Axis::Y, 0.0).dist(&pauli(Axis::Y)) < 1e-15);
        for k in 0..20 {
            let t = -3.0 + 0.3 * k as f64;
            assert!(rotated_pauli_3d(Axis::X, t).trace().norm() < 1e-15);
            let (vals, _) = hermitian_eigen(&rotated_pauli_1d(t));
            assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rotated_pauli_is_conjugated_sigma_z() {
        let t = 0.77;
        let r = exp_neg_i(&pauli(Axis::X), t / 2.0);
        let conj = r * pauli(Axis::Z) * r.adjoint();
        assert!(conj.dist(&rotated_pauli_1d(t)) < 1e-14);
    }

    #[test]
    fn projector_examples() {
        let p = projector_up(&pauli(Axis::Z)).unwrap();
        assert!(p.dist(&SpinMatrix::diagonal(&[ONE, ZERO])) < 1e-15);
        let p0 = projector_up(&rotated_pauli_1d(0.0)).unwrap();
        assert!(p0.dist(&SpinMatrix::diagonal(&[ONE, ZERO])) < 1e-15);
        let s = rotated_pauli_1d(1.1);
        let p = projector_up(&s).unwrap();
        assert!((p * p).dist(&p) < 1e-14);
        assert!(p.hermiticity_defect() < 1e-15);
        // Explicit matrix ½(1+cos θ, i sin θ; −i sin θ, 1−cos θ).
        let t: f64 = 1.1;
        let expect = SpinMatrix::from_rows(&[
            c(0.5 * (1.0 + t.cos()), 0.0),
            c(0.0, 0.5 * t.sin()),
            c(0.0, -0.5 * t.sin()),
            c(0.5 * (1.0 - t.cos()), 0.0),
        ])
        .unwrap();
        assert!(p.dist(&expect) < 1e-15);
    }

    #[test]
    fn projector_rejects_bad_spectrum() {
        let h = pauli(Axis::Z).scale_re(2.0);
        assert!(projector_up(&h).is_err());
        let nh = SpinMatrix::from_rows(&[ONE, ONE, ZERO, -ONE]).unwrap();
        assert!(matches!(projector_up(&nh), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn exp_examples() {
        let x = pauli(Axis::X);
        assert!(exp_neg_i(&x, 0.0).dist(&SpinMatrix::identity(2)) < 1e-15);
        let e = exp_neg_i(&pauli(Axis::Z), PI);
        assert!(e.dist(&SpinMatrix::identity(2).scale_re(-1.0)) < 1e-14);
        for k in 0..10 {
            let t = -2.0 + 0.45 * k as f64;
            // two-term spectral formula: projectors ½(I ± σ_x)
            let plus = (SpinMatrix::identity(2) + x).scale_re(0.5);
            let minus = (SpinMatrix::identity(2) - x).scale_re(0.5);
            let oracle =
                plus.scale(C64::from_polar(1.0, -t)) + minus.scale(C64::from_polar(1.0, t));
            assert!(exp_neg_i(&x, t).dist(&oracle) < 1e-14);
            assert!(exp_neg_i_involution(&x, t).dist(&oracle) < 1e-14);
        }
    }

    #[test]
    fn eigenphase_examples() {
        let id = SpinMatrix::identity(2);
        assert_eq!(eigenphases(&id).unwrap().as_slice(), &[0.0, 0.0]);
        let minus = id.scale_re(-1.0);
        assert_eq!(eigenphases(&minus).unwrap().as_slice(), &[PI, PI]);
        let u = exp_neg_i(&pauli(Axis::Z), 0.3);
        let ph = eigenphases(&u).unwrap();
        assert!((ph.as_slice()[0] + 0.3).abs() < 1e-15);
        assert!((ph.as_slice()[1] - 0.3).abs() < 1e-15);
        let not_unitary = id.scale_re(1.1);
        assert!(matches!(
            eigenphases(&not_unitary),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn four_dim_degenerate_phases() {
        let beta = SpinMatrix::from_blocks(
            &SpinMatrix::zeros(2),
            &SpinMatrix::identity(2),
            &SpinMatrix::identity(2),
            &SpinMatrix::zeros(2),
        );
        let w = exp_neg_i(&beta, 0.2);
        let ph = eigenphases(&w).unwrap();
        let expect = [-0.2, -0.2, 0.2, 0.2];
        for (a, b) in ph.as_slice().iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{ph:?}");
        }
    }

    #[test]
    fn wrap_phase_branch() {
        assert_eq!(wrap_phase(-PI), PI);
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_phase(-0.1) + 0.1).abs() < 1e-15);
    }
}
