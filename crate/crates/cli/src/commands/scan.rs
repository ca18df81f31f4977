use serde::Serialize;

use qwalk::scan::{
    bound_certificate_1d, bound_certificate_3d, find_special_points, scan_1d, scan_3d,
    scan_3d_diagonal, BoundCertificate, FoundPoint, GridOffset, GridShape, ScanReport, WalkSpec,
    DEFAULT_EPS_E, DEFAULT_EXCLUDE_RADIUS,
};
use qwalk::walk3d::{conventional_special_points, weyl_doubler, SpecialPoint, WeylSign};

use super::{positive, print_report, resolve_walk, OutTarget, WalkSummary};
use crate::config::Settings;
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::{BoundArgs, DispersionArgs, DoublersArgs, OffsetArg, ShapeArg};

fn offset(o: OffsetArg) -> GridOffset {
    match o {
        OffsetArg::Aligned => GridOffset::Aligned,
        OffsetArg::Midpoint => GridOffset::Midpoint,
    }
}

/// Runs the scan selected by dimension, shape and offset.
fn run_scan(
    spec: WalkSpec,
    n: usize,
    shape: Option<ShapeArg>,
    off: OffsetArg,
) -> Result<ScanReport, CliError> {
    match (spec, shape.unwrap_or(ShapeArg::Cube)) {
        (WalkSpec::Line(p), _) => {
            if shape.is_some() {
                return Err(CliError::Config("--shape applies to --dim 3 only".into()));
            }
            if off != OffsetArg::Aligned {
                return Err(CliError::Config("the 1-D grid is always aligned".into()));
            }
            Ok(scan_1d(&p, n)?)
        }
        (_, ShapeArg::Cube) => Ok(scan_3d(spec, n, offset(off))?),
        (_, ShapeArg::Diagonal) => {
            if off != OffsetArg::Aligned {
                return Err(CliError::Config(
                    "the diagonal slice is always aligned".into(),
                ));
            }
            Ok(scan_3d_diagonal(spec, n)?)
        }
    }
}

fn momentum_header(shape: GridShape) -> Vec<String> {
    match shape {
        GridShape::Cube => vec!["px".into(), "py".into(), "pz".into()],
        _ => vec!["p".into()],
    }
}

fn grid_meta(table: Table, w: &WalkSummary, report: &ScanReport) -> Table {
    table
        .meta("walk", w.walk)
        .meta("theta", crate::output::fmt_f64(w.theta))
        .meta("mass_dt", crate::output::fmt_f64(w.mass_dt))
        .meta("shape", shape_name(report.shape))
        .meta("grid_n", report.grid_n)
}

fn shape_name(s: GridShape) -> &'static str {
    match s {
        GridShape::Line => "line",
        GridShape::Cube => "cube",
        GridShape::Diagonal => "diagonal",
    }
}

#[derive(Serialize)]
struct DispersionReport {
    command: &'static str,
    #[serde(flatten)]
    walk: WalkSummary,
    shape: GridShape,
    offset: GridOffset,
    grid_n: usize,
    points: usize,
    max_abs_energy: f64,
    argmax: Vec<f64>,
    bound_rhs: Option<f64>,
    bound_holds: Option<bool>,
}

#[derive(Serialize)]
struct DispersionPoint<'a> {
    momentum: &'a [f64],
    energies: &'a [f64],
}

#[derive(Serialize)]
struct DispersionFile<'a> {
    #[serde(flatten)]
    report: &'a DispersionReport,
    records: Vec<DispersionPoint<'a>>,
}

fn record_momentum(report: &ScanReport, i: usize) -> &[f64] {
    let m = report.records[i].momentum();
    match report.shape {
        GridShape::Diagonal => &m[..1],
        _ => m,
    }
}

pub fn dispersion(settings: &Settings, a: &DispersionArgs) -> Result<(), CliError> {
    let (spec, walk) = resolve_walk(settings, &a.walk)?;
    let n = positive(
        "n",
        settings.get("n", a.n, if walk.dim == 1 { 512 } else { 32 })?,
    )?;
    let shape = settings.get_opt("shape", a.shape)?;
    let off = settings.get("offset", a.offset, OffsetArg::Aligned)?;
    let out = OutTarget::resolve(settings, &a.out)?;
    settings.finish()?;

    let report = run_scan(spec, n, shape, off)?;
    let summary = DispersionReport {
        command: "dispersion",
        walk,
        shape: report.shape,
        offset: report.offset,
        grid_n: report.grid_n,
        points: report.records.len(),
        max_abs_energy: report.max_abs_energy,
        argmax: report.argmax.clone(),
        bound_rhs: report.bound_rhs,
        bound_holds: report.bound_holds(),
    };
    let bands = spec.spinor_dim();
    out.write(
        || {
            let mut header = momentum_header(report.shape);
            header.extend((0..bands).map(|b| format!("e{b}")));
            let mut t = grid_meta(Table::new(header), &walk, &report);
            for (i, r) in report.records.iter().enumerate() {
                let mut row: Vec<Cell> = record_momentum(&report, i)
                    .iter()
                    .map(|&x| Cell::F(x))
                    .collect();
                row.extend(r.energies.as_slice().iter().map(|&e| Cell::F(e)));
                t.push(row);
            }
            t
        },
        &DispersionFile {
            report: &summary,
            records: (0..report.records.len())
                .map(|i| DispersionPoint {
                    momentum: record_momentum(&report, i),
                    energies: report.records[i].energies.as_slice(),
                })
                .collect(),
        },
    )?;
    print_report(&summary);
    Ok(())
}

#[derive(Serialize)]
struct FamilyDoubler {
    sign: WeylSign,
    momentum: [f64; 3],
    singular: bool,
}

#[derive(Serialize)]
struct DoublersReport {
    command: &'static str,
    #[serde(flatten)]
    walk: WalkSummary,
    shape: GridShape,
    offset: GridOffset,
    grid_n: usize,
    eps_e: f64,
    exclude_radius: f64,
    doublers: Vec<FoundPoint>,
    pseudo_doublers: Vec<FoundPoint>,
    /// Closed-form `θ`-family doublers of `K^±`; 3-D only.
    family_doublers: Option<Vec<FamilyDoubler>>,
    /// Special momenta of the conventional walk; 3-D at `θ = 0` only.
    conventional_points: Option<Vec<SpecialPoint>>,
}

pub fn doublers(settings: &Settings, a: &DoublersArgs) -> Result<(), CliError> {
    let (spec, walk) = resolve_walk(settings, &a.walk)?;
    let n = positive(
        "n",
        settings.get("n", a.n, if walk.dim == 1 { 4096 } else { 32 })?,
    )?;
    let shape = settings.get_opt("shape", a.shape)?;
    let default_offset = if walk.dim == 1 || shape == Some(ShapeArg::Diagonal) {
        OffsetArg::Aligned
    } else {
        OffsetArg::Midpoint
    };
    let off = settings.get("offset", a.offset, default_offset)?;
    let eps_e = settings.get("eps-e", a.eps_e, DEFAULT_EPS_E)?;
    let exclude_radius =
        settings.get("exclude-radius", a.exclude_radius, DEFAULT_EXCLUDE_RADIUS)?;
    let out = OutTarget::resolve(settings, &a.out)?;
    settings.finish()?;

    let report = run_scan(spec, n, shape, off)?;
    let (doublers, pseudo) = find_special_points(&report, eps_e, exclude_radius)?;
    let (family, conventional) = match spec {
        WalkSpec::Line(_) => (None, None),
        WalkSpec::Weyl(p, _) | WalkSpec::Dirac(p) => {
            let family = [WeylSign::Plus, WeylSign::Minus]
                .into_iter()
                .map(|sign| {
                    let theta = match sign {
                        WeylSign::Plus => p.theta(),
                        WeylSign::Minus => -p.theta(),
                    };
                    Ok(FamilyDoubler {
                        sign,
                        momentum: weyl_doubler(&p, sign)?.0,
                        singular: qwalk::walk3d::doubler_point(theta)?.singular,
                    })
                })
                .collect::<Result<Vec<_>, qwalk::error::Error>>()?;
            let conventional = (p.theta() == 0.0).then(conventional_special_points);
            (Some(family), conventional)
        }
    };
    let summary = DoublersReport {
        command: "doublers",
        walk,
        shape: report.shape,
        offset: report.offset,
        grid_n: report.grid_n,
        eps_e,
        exclude_radius,
        doublers,
        pseudo_doublers: pseudo,
        family_doublers: family,
        conventional_points: conventional,
    };
    out.write(
        || {
            let mut header = vec!["kind".to_string()];
            header.extend(momentum_header(report.shape));
            header.push("residual".into());
            let mut t = grid_meta(Table::new(header), &walk, &report);
            for f in summary.doublers.iter().chain(&summary.pseudo_doublers) {
                let kind = match f.kind {
                    qwalk::scan::FoundKind::Doubler => "doubler",
                    qwalk::scan::FoundKind::PseudoDoubler => "pseudo-doubler",
                };
                let mut row = vec![Cell::S(kind.into())];
                row.extend(f.momentum.iter().map(|&x| Cell::F(x)));
                row.push(Cell::F(f.residual));
                t.push(row);
            }
            t
        },
        &summary,
    )?;
    print_report(&summary);
    Ok(())
}

#[derive(Serialize)]
struct BoundReport {
    command: &'static str,
    #[serde(flatten)]
    walk: WalkSummary,
    grid_n: usize,
    offset: GridOffset,
    #[serde(flatten)]
    certificate: BoundCertificate,
}

pub fn bound_check(settings: &Settings, a: &BoundArgs) -> Result<(), CliError> {
    let (spec, walk) = resolve_walk(settings, &a.walk)?;
    let n = positive(
        "n",
        settings.get("n", a.n, if walk.dim == 1 { 512 } else { 64 })?,
    )?;
    let off = settings.get("offset", a.offset, OffsetArg::Aligned)?;
    let out = OutTarget::resolve(settings, &a.out)?;
    settings.finish()?;

    let certificate = match spec {
        WalkSpec::Line(p) => {
            if off != OffsetArg::Aligned {
                return Err(CliError::Config("the 1-D grid is always aligned".into()));
            }
            bound_certificate_1d(&p, n)?
        }
        WalkSpec::Dirac(p) => bound_certificate_3d(&p, n, offset(off))?,
        WalkSpec::Weyl(..) => {
            return Err(CliError::Config("bound-check needs the Dirac walk".into()));
        }
    };
    let summary = BoundReport {
        command: "bound-check",
        walk,
        grid_n: n,
        offset: offset(off),
        certificate,
    };
    out.write(
        || {
            let mut t = Table::new([
                "holds",
                "max_energy",
                "rhs",
                "axis_holds",
                "axis_max",
                "axis_rhs",
            ])
            .meta("walk", walk.walk)
            .meta("theta", crate::output::fmt_f64(walk.theta))
            .meta("mass_dt", crate::output::fmt_f64(walk.mass_dt))
            .meta("grid_n", n);
            let c = &summary.certificate;
            t.push(vec![
                Cell::S(c.holds.to_string()),
                Cell::F(c.max_energy),
                Cell::F(c.rhs),
                Cell::S(c.axis_holds.to_string()),
                Cell::F(c.axis_max.iter().copied().fold(0.0, f64::max)),
                Cell::F(c.axis_rhs),
            ]);
            t
        },
        &summary,
    )?;
    print_report(&summary);
    Ok(())
}
