//! Brillouin-zone scans, special-point search and spectral bound checks.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optim::{golden_section, nelder_mead};
use crate::spin::{eigenphases_unchecked, exp_neg_i, PhaseSpectrum, SpinMatrix, C64};
use crate::walk1d::{self, Walk1DParams};
use crate::walk3d::{self, MomentumVec, Walk3DParams, WeylSign};

/// Which walk a scan evaluates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WalkSpec {
    Line(Walk1DParams),
    Weyl(Walk3DParams, WeylSign),
    Dirac(Walk3DParams),
}

impl WalkSpec {
    pub fn dim(&self) -> usize {
        match self {
            WalkSpec::Line(_) => 1,
            _ => 3,
        }
    }

    /// Spinor dimension.
    pub fn spinor_dim(&self) -> usize {
        match self {
            WalkSpec::Dirac(_) => 4,
            _ => 2,
        }
    }

    pub fn theta(&self) -> f64 {
        match self {
            WalkSpec::Line(p) => p.theta(),
            WalkSpec::Weyl(p, _) | WalkSpec::Dirac(p) => p.theta(),
        }
    }

    pub fn mass_dt(&self) -> f64 {
        match self {
            WalkSpec::Line(p) => p.mass_dt(),
            WalkSpec::Weyl(_, _) => 0.0,
            WalkSpec::Dirac(p) => p.mass_dt(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            WalkSpec::Line(_) => "dirac-1d",
            WalkSpec::Weyl(_, WeylSign::Plus) => "weyl-plus",
            WalkSpec::Weyl(_, WeylSign::Minus) => "weyl-minus",
            WalkSpec::Dirac(_) => "dirac-3d",
        }
    }

    /// The momentum-space step at `p`; only the first component is used in 1-D.
    pub fn operator(&self, p: &[f64; 3]) -> SpinMatrix {
        match self {
            WalkSpec::Line(params) => walk1d::walk_op(params, p[0]),
            WalkSpec::Weyl(params, sign) => walk3d::weyl_op(params, *sign, &MomentumVec(*p)),
            WalkSpec::Dirac(params) => walk3d::dirac_op(params, &MomentumVec(*p)),
        }
    }

    pub fn energies(&self, p: &[f64; 3]) -> PhaseSpectrum {
        eigenphases_unchecked(&self.operator(p))
    }

    /// Upper bound on `max |E δt|`, when one is known for these parameters.
    pub fn bound_rhs(&self) -> Option<f64> {
        match self {
            WalkSpec::Line(p) => p.bound_applies().then(|| p.energy_bound()),
            WalkSpec::Weyl(p, _) => p.bound_applies().then(|| 3.0 * (PI - 2.0 * p.theta())),
            WalkSpec::Dirac(p) => p.bound_applies().then(|| p.energy_bound()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridOffset {
    /// `p = −π + 2πk/n`.
    Aligned,
    /// `p = −π + 2π(k + ½)/n`.
    Midpoint,
}

impl GridOffset {
    pub fn point(self, k: usize, n: usize) -> f64 {
        let shift = match self {
            GridOffset::Aligned => 0.0,
            GridOffset::Midpoint => 0.5,
        };
        crate::spin::wrap_phase(-PI + 2.0 * PI * (k as f64 + shift) / n as f64)
    }
}

/// One momentum and its sorted quasi-energies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DispersionRecord {
    dim: usize,
    momentum: [f64; 3],
    pub energies: PhaseSpectrum,
}

impl DispersionRecord {
    pub fn momentum(&self) -> &[f64] {
        &self.momentum[..self.dim]
    }

    pub fn momentum3(&self) -> [f64; 3] {
        self.momentum
    }
}

/// Layout of the sampled momenta.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridShape {
    Line,
    Cube,
    Diagonal,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub walk: WalkSpec,
    pub shape: GridShape,
    pub grid_n: usize,
    pub offset: GridOffset,
    pub records: Vec<DispersionRecord>,
    pub max_abs_energy: f64,
    pub argmax: Vec<f64>,
    /// `None` when no bound applies (θ outside `[0, π/2)` or a custom mass).
    pub bound_rhs: Option<f64>,
    /// Grid local minima of `min |E δt|` below `candidate_threshold`.
    pub low_points: Vec<usize>,
    /// Grid local minima of `π − max |E δt|` below `candidate_threshold`.
    pub high_points: Vec<usize>,
    pub candidate_threshold: f64,
}

impl ScanReport {
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.grid_n as f64
    }

    /// Momentum dimension of the sampled grid (the diagonal slice counts as 1).
    pub fn grid_dim(&self) -> usize {
        match self.shape {
            GridShape::Cube => 3,
            _ => 1,
        }
    }

    pub fn bound_holds(&self) -> Option<bool> {
        self.bound_rhs.map(|rhs| self.max_abs_energy <= rhs + 1e-10)
    }
}

pub const DEFAULT_EPS_E: f64 = 1e-3;
pub const DEFAULT_EXCLUDE_RADIUS: f64 = 0.2;

pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

fn candidate_threshold(eps_e: f64, grid_dim: usize, n: usize) -> f64 {
    // |∂E/∂p_j| ≤ 1, so a zero lies within d·h/2 of the nearest grid value; doubled.
    eps_e + grid_dim as f64 * 2.0 * PI / n as f64
}

fn build_report(
    walk: WalkSpec,
    shape: GridShape,
    n: usize,
    offset: GridOffset,
    momenta: Vec<[f64; 3]>,
) -> ScanReport {
    let dim = walk.dim();
    let records: Vec<DispersionRecord> = par_map(momenta.len(), |i| DispersionRecord {
        dim,
        momentum: momenta[i],
        energies: walk.energies(&momenta[i]),
    });
    let (mut max_abs, mut arg) = (0.0, 0);
    for (i, r) in records.iter().enumerate() {
        let m = r.energies.max_abs();
        if m > max_abs {
            max_abs = m;
            arg = i;
        }
    }
    let grid_dim = if shape == GridShape::Cube { 3 } else { 1 };
    let threshold = candidate_threshold(DEFAULT_EPS_E, grid_dim, n);
    let low: Vec<f64> = records.iter().map(|r| r.energies.min_abs()).collect();
    let high: Vec<f64> = records.iter().map(|r| r.energies.min_edge_gap()).collect();
    ScanReport {
        walk,
        shape,
        grid_n: n,
        offset,
        argmax: records
            .get(arg)
            .map(|r| r.momentum().to_vec())
            .unwrap_or_default(),
        max_abs_energy: max_abs,
        bound_rhs: walk.bound_rhs(),
        low_points: local_minima(&low, grid_dim, n, threshold),
        high_points: local_minima(&high, grid_dim, n, threshold),
        candidate_threshold: threshold,
        records,
    }
}

/// Indices of cyclic local minima (`≤` all neighbours) with value below `threshold`.
fn local_minima(values: &[f64], grid_dim: usize, n: usize, threshold: f64) -> Vec<usize> {
    let mut out = Vec::new();
    for (idx, &v) in values.iter().enumerate() {
        if v >= threshold {
            continue;
        }
        let is_min = match grid_dim {
            1 => v <= values[(idx + n - 1) % n] && v <= values[(idx + 1) % n],
            _ => {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                let mut ok = true;
                'outer: for di in [n - 1, 0, 1] {
                    for dj in [n - 1, 0, 1] {
                        for dk in [n - 1, 0, 1] {
                            if di == 0 && dj == 0 && dk == 0 {
                                continue;
                            }
                            let nb = ((i + di) % n) * n * n + ((j + dj) % n) * n + (k + dk) % n;
                            if values[nb] < v {
                                ok = false;
                                break 'outer;
                            }
                        }
                    }
                }
                ok
            }
        };
        if is_min {
            out.push(idx);
        }
    }
    out
}

/// Largest number of points on a one-dimensional grid.
pub const MAX_LINE_POINTS: usize = 1 << 22;

fn check_grid(n: usize) -> Result<()> {
    if n < 16 {
        return Err(Error::InvalidParameter(format!("grid size {n} < 16")));
    }
    if n > MAX_LINE_POINTS {
        return Err(Error::ResourceLimit {
            states: n,
            budget: MAX_LINE_POINTS,
        });
    }
    Ok(())
}

/// Dispersion of the 1-D walk at `p = −π + 2πk/n`.
pub fn scan_1d(params: &Walk1DParams, n: usize) -> Result<ScanReport> {
    check_grid(n)?;
    let momenta = (0..n)
        .map(|k| [GridOffset::Aligned.point(k, n), 0.0, 0.0])
        .collect();
    Ok(build_report(
        WalkSpec::Line(*params),
        GridShape::Line,
        n,
        GridOffset::Aligned,
        momenta,
    ))
}

/// Dispersion of a three-dimensional walk on an `n³` grid, `p_x` slowest.
pub fn scan_3d(walk: WalkSpec, n: usize, offset: GridOffset) -> Result<ScanReport> {
    check_grid(n)?;
    if walk.dim() != 3 {
        return Err(Error::InvalidParameter("scan_3d needs a 3-D walk".into()));
    }
    if n > 256 {
        return Err(Error::ResourceLimit {
            states: n * n * n,
            budget: 256 * 256 * 256,
        });
    }
    let axis: Vec<f64> = (0..n).map(|k| offset.point(k, n)).collect();
    let mut momenta = Vec::with_capacity(n * n * n);
    for &px in &axis {
        for &py in &axis {
            for &pz in &axis {
                momenta.push([px, py, pz]);
            }
        }
    }
    Ok(build_report(walk, GridShape::Cube, n, offset, momenta))
}

/// Dispersion along the body diagonal `p_x = p_y = p_z = p`, aligned grid.
pub fn scan_3d_diagonal(walk: WalkSpec, n: usize) -> Result<ScanReport> {
    check_grid(n)?;
    if walk.dim() != 3 {
        return Err(Error::InvalidParameter(
            "diagonal slice needs a 3-D walk".into(),
        ));
    }
    let momenta = (0..n)
        .map(|k| [GridOffset::Aligned.point(k, n); 3])
        .collect();
    Ok(build_report(
        walk,
        GridShape::Diagonal,
        n,
        GridOffset::Aligned,
        momenta,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FoundKind {
    Doubler,
    PseudoDoubler,
}

/// A refined special momentum found by [`find_special_points`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoundPoint {
    pub kind: FoundKind,
    pub momentum: Vec<f64>,
    /// `min |E δt|` for doublers, `π − max |E δt|` for pseudo-doublers.
    pub residual: f64,
    pub energies: Vec<f64>,
}

fn diag_or_full(report: &ScanReport, x: &[f64]) -> [f64; 3] {
    match report.shape {
        GridShape::Line => [x[0], 0.0, 0.0],
        GridShape::Diagonal => [x[0]; 3],
        GridShape::Cube => [x[0], x[1], x[2]],
    }
}

fn refine(
    report: &ScanReport,
    start: &[f64; 3],
    objective: impl Fn(&PhaseSpectrum) -> f64,
) -> ([f64; 3], f64) {
    let walk = report.walk;
    let h = report.spacing();
    let eval = |x: &[f64]| objective(&walk.energies(&diag_or_full(report, x)));
    match report.grid_dim() {
        1 => {
            let (x, fx) = golden_section(|x| eval(&[x]), start[0] - h, start[0] + h, 1e-10);
            (diag_or_full(report, &[crate::spin::wrap_phase(x)]), fx)
        }
        _ => {
            let (x, fx) = nelder_mead(|x: &[f64; 3]| eval(x), *start, 0.5 * h, 1e-10, 4000);
            (MomentumVec::wrapped(x).0, fx)
        }
    }
}

fn momentum_dist(report: &ScanReport, a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d = MomentumVec(*a).torus_dist(&MomentumVec(*b));
    match report.shape {
        GridShape::Line => crate::spin::wrap_phase(a[0] - b[0]).abs(),
        _ => d,
    }
}

/// Refines the grid candidates of a scan into doublers and pseudo-doublers.
///
/// Doublers are local minima of `min |E δt|` outside the ball of radius
/// `exclude_radius` around `p = 0`; pseudo-doublers are local minima of
/// `π − max |E δt|`. Every candidate is polished by golden-section search
/// (one momentum) or Nelder–Mead (three momenta) and kept when the refined
/// value is below `eps_e`.
pub fn find_special_points(
    report: &ScanReport,
    eps_e: f64,
    exclude_radius: f64,
) -> Result<(Vec<FoundPoint>, Vec<FoundPoint>)> {
    if !(eps_e > 0.0) || !(exclude_radius >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps_E = {eps_e}, exclude_radius = {exclude_radius}"
        )));
    }
    let threshold = candidate_threshold(eps_e, report.grid_dim(), report.grid_n);
    let grid_dim = report.grid_dim();
    let low: Vec<f64> = report
        .records
        .iter()
        .map(|r| r.energies.min_abs())
        .collect();
    let high: Vec<f64> = report
        .records
        .iter()
        .map(|r| r.energies.min_edge_gap())
        .collect();

    let origin = [0.0; 3];
    let collect = |values: &[f64], kind: FoundKind| -> Vec<FoundPoint> {
        let candidates = local_minima(values, grid_dim, report.grid_n, threshold);
        let refined: Vec<Option<([f64; 3], f64)>> = par_map(candidates.len(), |c| {
            let start = report.records[candidates[c]].momentum3();
            if kind == FoundKind::Doubler && momentum_dist(report, &start, &origin) < exclude_radius
            {
                return None;
            }
            let (x, fx) = match kind {
                FoundKind::Doubler => refine(report, &start, |s| s.min_abs()),
                FoundKind::PseudoDoubler => refine(report, &start, |s| s.min_edge_gap()),
            };
            (fx < eps_e).then_some((x, fx))
        });
        let mut out: Vec<FoundPoint> = Vec::new();
        for (x, fx) in refined.into_iter().flatten() {
            if kind == FoundKind::Doubler && momentum_dist(report, &x, &origin) < exclude_radius {
                continue;
            }
            if out.iter().any(|f| {
                let y = diag_or_full(report, &f.momentum);
                momentum_dist(report, &x, &y) < 1e-4
            }) {
                continue;
            }
            let m = match report.shape {
                GridShape::Cube => x.to_vec(),
                _ => vec![x[0]],
            };
            out.push(FoundPoint {
                kind,
                momentum: m,
                residual: fx,
                energies: report.walk.energies(&x).as_slice().to_vec(),
            });
        }
        out.sort_by(|a, b| {
            a.momentum
                .iter()
                .zip(&b.momentum)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        out
    };
    Ok((
        collect(&low, FoundKind::Doubler),
        collect(&high, FoundKind::PseudoDoubler),
    ))
}

/// Outcome of the randomized product-of-unitaries phase bound test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseBoundReport {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// `min over trials of (λ + η − max |γ_k|)`.
    pub worst_margin: f64,
}

fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> SpinMatrix {
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix the phase freedom of QR so that the distribution is Haar
    SpinMatrix::from_fn(dim, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        q[(i, j)] * phase
    })
}

/// Hermitian generator with eigenvalues uniform in `[−radius, radius]`, one
/// of them pinned to `±radius`, and Haar-random eigenvectors.
fn random_generator(dim: usize, radius: f64, rng: &mut ChaCha8Rng) -> SpinMatrix {
    let v = haar_unitary(dim, rng);
    let mut eig: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.random_range(-radius..=radius), 0.0))
        .collect();
    eig[0] = C64::new(
        if rng.random_bool(0.5) {
            radius
        } else {
            -radius
        },
        0.0,
    );
    v * SpinMatrix::diagonal(&eig) * v.adjoint()
}

/// Draws `U = e^{iH}`, `V = e^{iG}` with eigenphase radii `λ`, `η`
/// (`λ + η ≤ π`) and checks that every eigenphase of `UV` lies within
/// `λ + η`.
pub fn product_phase_bound_test(dim: usize, trials: usize, seed: u64) -> Result<PhaseBoundReport> {
    if dim != 2 && dim != 4 {
        return Err(Error::InvalidParameter(format!("dim = {dim} (2 or 4)")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let (lambda, eta) = loop {
            let l: f64 = rng.random_range(0.0..=PI);
            let e: f64 = rng.random_range(0.0..=PI);
            if l + e <= PI {
                break (l, e);
            }
        };
        let h = random_generator(dim, lambda, &mut rng);
        let g = random_generator(dim, eta, &mut rng);
        let u = exp_neg_i(&h, -1.0);
        let v = exp_neg_i(&g, -1.0);
        let phases = eigenphases_unchecked(&(u * v));
        worst = worst.min(lambda + eta - phases.max_abs());
    }
    Ok(PhaseBoundReport {
        dim,
        trials,
        seed,
        worst_margin: worst,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub holds: bool,
    pub max_energy: f64,
    pub rhs: f64,
    pub argmax: Vec<f64>,
    /// Largest eigenphase magnitude of each `K_j` (x, y, z) over the axis grid
    /// (one entry for the 1-D walk).
    pub axis_max: Vec<f64>,
    pub axis_rhs: f64,
    pub axis_holds: bool,
}

fn axis_max_phase(n: usize, f: impl Fn(f64) -> SpinMatrix) -> f64 {
    (0..n)
        .map(|k| eigenphases_unchecked(&f(GridOffset::Aligned.point(k, n))).max_abs())
        .fold(0.0, f64::max)
}

fn require_bound_theta(theta: f64) -> Result<()> {
    if !(0.0..PI / 2.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "energy bounds need theta in [0, pi/2), got {theta}"
        )));
    }
    Ok(())
}

/// Checks `max |E δt| ≤ (π − 2θ) + mc²δt` on an `n`-point grid, together
/// with the massless bound `π − 2θ` on `T(p)` alone.
pub fn bound_certificate_1d(params: &Walk1DParams, n: usize) -> Result<BoundCertificate> {
    require_bound_theta(params.theta())?;
    if !params.bound_applies() {
        return Err(Error::InvalidParameter(
            "bound needs the Dirac mass term".into(),
        ));
    }
    let report = scan_1d(params, n)?;
    let rhs = params.energy_bound();
    let axis_rhs = PI - 2.0 * params.theta();
    let axis = axis_max_phase(n, |p| walk1d::transfer_op(params, p));
    Ok(BoundCertificate {
        holds: report.max_abs_energy <= rhs + 1e-10,
        max_energy: report.max_abs_energy,
        rhs,
        argmax: report.argmax,
        axis_max: vec![axis],
        axis_rhs,
        axis_holds: axis <= axis_rhs + 1e-10,
    })
}

/// Checks `max |E δt| ≤ 3(π − 2θ) + mc²δt` for the Dirac walk on an `n³`
/// grid and the per-axis bound `π − 2θ` on every `K_j`.
pub fn bound_certificate_3d(
    params: &Walk3DParams,
    n: usize,
    offset: GridOffset,
) -> Result<BoundCertificate> {
    require_bound_theta(params.theta())?;
    let report = scan_3d(WalkSpec::Dirac(*params), n, offset)?;
    let rhs = params.energy_bound();
    let axis_rhs = params.axis_bound();
    let axis_max: Vec<f64> = crate::spin::Axis::ALL
        .iter()
        .map(|&a| axis_max_phase(n, |p| walk3d::kj_op(params, a, p)))
        .collect();
    Ok(BoundCertificate {
        holds: report.max_abs_energy <= rhs + 1e-10,
        max_energy: report.max_abs_energy,
        rhs,
        argmax: report.argmax,
        axis_holds: axis_max.iter().all(|&m| m <= axis_rhs + 1e-10),
        axis_max,
        axis_rhs,
    })
}

/// How the mass term moves along a continuum-order sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MassScaling {
    /// `mc²δt` held at its configured value for every momentum.
    Fixed,
    /// `mc²δt` shrinks with `p δx` (both are proportional to `δt`); the
    /// configured value is reached at the largest sampled momentum.
    Joint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderFit {
    pub momenta: Vec<f64>,
    pub remainders: Vec<f64>,
    /// Least-squares slope of `log D` against `log p`; `None` when the
    /// remainder vanishes to rounding at every sample.
    pub slope: Option<f64>,
}

impl OrderFit {
    /// Slope within `tol` of `order`, or an identically vanishing remainder.
    pub fn at_least(&self, order: f64, tol: f64) -> bool {
        match self.slope {
            Some(s) => (s - order).abs() <= tol,
            None => true,
        }
    }
}

const ORDER_SAMPLES: usize = 9;
const ORDER_P_MIN: f64 = 1e-4;
const ORDER_P_MAX: f64 = 1e-2;

fn fit_order(remainder: impl Fn(f64, f64) -> f64, mass_dt: f64, scaling: MassScaling) -> OrderFit {
    let momenta: Vec<f64> = (0..ORDER_SAMPLES)
        .map(|k| {
            let t = k as f64 / (ORDER_SAMPLES - 1) as f64;
            ORDER_P_MIN * (ORDER_P_MAX / ORDER_P_MIN).powf(t)
        })
        .collect();
    let remainders: Vec<f64> = momenta
        .iter()
        .map(|&p| {
            let m = match scaling {
                MassScaling::Fixed => mass_dt,
                MassScaling::Joint => mass_dt * p / ORDER_P_MAX,
            };
            remainder(p, m)
        })
        .collect();
    // rounding floor of a unit-norm 2x2 or 4x4 product
    let slope = if remainders.iter().all(|&d| d < 1e-13) {
        None
    } else {
        let xs: Vec<f64> = momenta.iter().map(|p| p.ln()).collect();
        let ys: Vec<f64> = remainders.iter().map(|d| d.max(1e-300).ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        Some(sxy / sxx)
    };
    OrderFit {
        momenta,
        remainders,
        slope,
    }
}

/// Order of the 1-D continuum remainder `‖U(p) − e^{−i(cos θ p σ_z + m σ_x)}‖`
/// over `p ∈ [1e−4, 1e−2]`.
pub fn continuum_order_1d(theta: f64, mass_dt: f64, scaling: MassScaling) -> Result<OrderFit> {
    Walk1DParams::new(theta, mass_dt)?;
    Ok(fit_order(
        |p, m| {
            let params = Walk1DParams::new(theta, m).expect("validated above");
            walk1d::continuum_remainder(&params, p)
        },
        mass_dt,
        scaling,
    ))
}

/// Direction of the 3-D continuum sweep.
pub const ORDER_DIRECTION: [f64; 3] = [0.2672612419124244, 0.5345224838248488, 0.8017837257372732];

/// Same as [`continuum_order_1d`] for the 4x4 Dirac walk along
/// [`ORDER_DIRECTION`].
pub fn continuum_order_3d(theta: f64, mass_dt: f64, scaling: MassScaling) -> Result<OrderFit> {
    Walk3DParams::new(theta, mass_dt)?;
    Ok(fit_order(
        |p, m| {
            let params = Walk3DParams::new(theta, m).expect("validated above");
            let k = MomentumVec(ORDER_DIRECTION.map(|d| d * p));
            walk3d::continuum_remainder_3d(&params, &k)
        },
        mass_dt,
        scaling,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk3d::half_pi_points;

    fn line(theta: f64, m: f64) -> Walk1DParams {
        Walk1DParams::new(theta, m).unwrap()
    }

    #[test]
    fn scan_1d_massless_conventional() {
        let r = scan_1d(&line(0.0, 0.0), 64).unwrap();
        assert_eq!(r.records.len(), 64);
        for rec in &r.records {
            let p = rec.momentum()[0];
            let e = rec.energies.as_slice();
            if (p.abs() - PI).abs() < 1e-12 {
                assert!((e[0] - PI).abs() < 1e-12 && (e[1] - PI).abs() < 1e-12);
                continue;
            }
            assert!((e[0] + p.abs()).abs() < 1e-12 && (e[1] - p.abs()).abs() < 1e-12);
        }
        assert_eq!(r.records[0].momentum()[0], PI);
    }

    #[test]
    fn scan_1d_massive_endpoints() {
        let r = scan_1d(&line(0.0, 0.02), 64).unwrap();
        let zero = &r.records[32];
        assert_eq!(zero.momentum()[0], 0.0);
        assert!((zero.energies.as_slice()[0] + 0.02).abs() < 1e-14);
        assert!((zero.energies.as_slice()[1] - 0.02).abs() < 1e-14);
        let edge = &r.records[0];
        for e in edge.energies.as_slice() {
            assert!((e.abs() - (PI - 0.02)).abs() < 1e-13);
        }
        assert!(scan_1d(&line(0.0, 0.0), 8).is_err());
    }

    #[test]
    fn scan_1d_bound_inside_family() {
        for &t in &[0.2, 0.7, 1.3] {
            let r = scan_1d(&line(t, 0.02), 512).unwrap();
            assert!(r.bound_holds().unwrap());
        }
    }

    #[test]
    fn scan_is_deterministic() {
        let w = WalkSpec::Dirac(Walk3DParams::new(0.4, 0.05).unwrap());
        let a = scan_3d(w, 16, GridOffset::Midpoint).unwrap();
        let b = scan_3d(w, 16, GridOffset::Midpoint).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            for (u, v) in x.energies.as_slice().iter().zip(y.energies.as_slice()) {
                assert_eq!(u.to_bits(), v.to_bits());
            }
        }
        assert_eq!(a.max_abs_energy.to_bits(), b.max_abs_energy.to_bits());
    }

    #[test]
    fn conventional_weyl_special_points_recovered() {
        let w = WalkSpec::Weyl(Walk3DParams::new(0.0, 0.0).unwrap(), WeylSign::Plus);
        let r = scan_3d(w, 32, GridOffset::Midpoint).unwrap();
        let (d, pd) = find_special_points(&r, DEFAULT_EPS_E, DEFAULT_EXCLUDE_RADIUS).unwrap();
        let mut expect_d = vec![[PI, PI, 0.0], [PI, 0.0, PI], [0.0, PI, PI]];
        let mut expect_p = vec![[PI; 3], [PI, 0.0, 0.0], [0.0, PI, 0.0], [0.0, 0.0, PI]];
        for (p, s) in half_pi_points() {
            if s > 0 {
                expect_d.push(p.0)
            } else {
                expect_p.push(p.0)
            }
        }
        let matches = |found: &[FoundPoint], expect: &[[f64; 3]]| {
            found.len() == expect.len()
                && expect.iter().all(|e| {
                    found.iter().any(|f| {
                        MomentumVec([f.momentum[0], f.momentum[1], f.momentum[2]])
                            .torus_dist(&MomentumVec(*e))
                            < 1e-6
                    })
                })
        };
        assert!(matches(&d, &expect_d), "{d:?}");
        assert!(matches(&pd, &expect_p), "{pd:?}");
        for f in d.iter().chain(&pd) {
            let e = w.energies(&[f.momentum[0], f.momentum[1], f.momentum[2]]);
            let again = match f.kind {
                FoundKind::Doubler => e.min_abs(),
                FoundKind::PseudoDoubler => e.min_edge_gap(),
            };
            assert!((again - f.residual).abs() < 1e-8);
        }
    }

    #[test]
    fn special_points_1d() {
        let r = scan_1d(&line(0.0, 0.0), 256).unwrap();
        let (d, p) = find_special_points(&r, DEFAULT_EPS_E, DEFAULT_EXCLUDE_RADIUS).unwrap();
        assert!(d.is_empty());
        assert_eq!(p.len(), 1);
        assert!((p[0].momentum[0].abs() - PI).abs() < 1e-8);
        assert!(find_special_points(&r, 0.0, 0.2).is_err());
    }

    #[test]
    fn diagonal_slices_split_at_large_theta() {
        let params = Walk3DParams::extended(2.0 * PI / 3.0, 0.0).unwrap();
        let mut minima = Vec::new();
        for sign in [WeylSign::Plus, WeylSign::Minus] {
            let r = scan_3d_diagonal(WalkSpec::Weyl(params, sign), 512).unwrap();
            let (d, _) = find_special_points(&r, DEFAULT_EPS_E, DEFAULT_EXCLUDE_RADIUS).unwrap();
            assert_eq!(d.len(), 1, "{sign:?}: {d:?}");
            minima.push(d[0].momentum[0]);
        }
        assert!((minima[0] - minima[1]).abs() > 0.5, "{minima:?}");
    }

    #[test]
    fn phase_bound_trivial_cases() {
        let id = SpinMatrix::identity(2);
        assert_eq!(eigenphases_unchecked(&(id * id)).max_abs(), 0.0);
        let u = exp_neg_i(&crate::spin::pauli(crate::spin::Axis::Y), 0.8);
        assert!(eigenphases_unchecked(&(u * u.adjoint())).max_abs() < 1e-15);
        let r = product_phase_bound_test(2, 200, 7).unwrap();
        assert!(r.worst_margin >= -1e-10);
        let again = product_phase_bound_test(2, 200, 7).unwrap();
        assert_eq!(r.worst_margin.to_bits(), again.worst_margin.to_bits());
        assert!(product_phase_bound_test(3, 10, 0).is_err());
        assert!(product_phase_bound_test(2, 0, 0).is_err());
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in [2, 4] {
            let v = haar_unitary(dim, &mut rng);
            assert!(v.unitarity_defect() < 1e-12);
            let h = random_generator(dim, 0.7, &mut rng);
            let (vals, _) = crate::spin::hermitian_eigen(&h);
            assert!(vals.iter().all(|v| v.abs() <= 0.7 + 1e-12));
            assert!(vals.iter().any(|v| (v.abs() - 0.7).abs() < 1e-12));
        }
    }

    #[test]
    fn certificates() {
        let c = bound_certificate_1d(&line(0.0, 0.0), 64).unwrap();
        assert!((c.axis_max[0] - PI).abs() < 1e-12);
        let c = bound_certificate_3d(
            &Walk3DParams::new(PI / 3.0, 0.05).unwrap(),
            16,
            GridOffset::Aligned,
        )
        .unwrap();
        assert!(c.holds && c.axis_holds);
        for m in &c.axis_max {
            assert!(*m <= PI / 3.0 + 1e-10);
        }
        assert!(bound_certificate_1d(&line(-0.2, 0.0), 64).is_err());
    }

    #[test]
    fn order_fit_detects_exact_walk() {
        // conventional massless walk is an exact exponential
        let f = continuum_order_1d(0.0, 0.0, MassScaling::Fixed).unwrap();
        assert!(f.slope.is_none());
        let f = continuum_order_1d(0.4, 0.0, MassScaling::Fixed).unwrap();
        assert!((f.slope.unwrap() - 2.0).abs() < 0.1);
        // a fixed mass leaves a first-order cross term
        let f = continuum_order_1d(0.4, 0.02, MassScaling::Fixed).unwrap();
        assert!((f.slope.unwrap() - 1.0).abs() < 0.2, "{:?}", f.slope);
        let f = continuum_order_1d(0.4, 0.02, MassScaling::Joint).unwrap();
        assert!((f.slope.unwrap() - 2.0).abs() < 0.1);
    }
}
