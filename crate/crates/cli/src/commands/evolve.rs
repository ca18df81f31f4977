use std::path::PathBuf;

use serde::Serialize;

use qwalk::lattice::{
    centroid, gaussian_packet, step_position, LatticeState, LatticeWalk, MomentumStepper,
};
use qwalk::scan::WalkSpec;
use qwalk::spin::C64;
use qwalk::walk1d::Walk1DParams;

use super::{positive, print_report, resolve_walk, OutTarget, WalkSummary};
use crate::config::Settings;
use crate::error::CliError;
use crate::output::{fmt_f64, write_table, Cell, Table};
use crate::{EvolveArgs, Method};

/// Longest run accepted.
const MAX_STEPS: usize = 1_000_000;

/// Quasi-energy of the band whose eigenvector has the larger `sin E`.
fn upper_band_energy(params: &Walk1DParams, p: f64) -> f64 {
    WalkSpec::Line(*params)
        .energies(&[p, 0.0, 0.0])
        .as_slice()
        .iter()
        .copied()
        .max_by(|a, b| a.sin().total_cmp(&b.sin()))
        .expect("two bands")
}

/// `dE/dp` of the upper band by central difference.
fn group_velocity(params: &Walk1DParams, p: f64) -> f64 {
    let h = 1e-5;
    let mut d = upper_band_energy(params, p + h) - upper_band_energy(params, p - h);
    d -= (d / (2.0 * std::f64::consts::PI)).round() * 2.0 * std::f64::consts::PI;
    d / (2.0 * h)
}

/// Nearest-image mean position along each axis relative to `reference`.
fn centroid3(state: &LatticeState, reference: [f64; 3]) -> [f64; 3] {
    let n = state.sites() as f64;
    let mut c = [0.0; 3];
    for (i, p) in state.density().iter().enumerate() {
        let x = state.coords(i);
        for a in 0..3 {
            let mut d = x[a] as f64 - reference[a];
            d -= (d / n).round() * n;
            c[a] += p * (reference[a] + d);
        }
    }
    c
}

#[derive(Serialize)]
struct EvolveReport {
    command: &'static str,
    #[serde(flatten)]
    walk: WalkSummary,
    sites: usize,
    steps: usize,
    method: &'static str,
    p0: Option<f64>,
    width: Option<f64>,
    center: f64,
    final_norm: f64,
    max_norm_drift: f64,
    initial_centroid: Vec<f64>,
    final_centroid: Vec<f64>,
    /// Centroid displacement per step along x.
    measured_velocity: f64,
    /// Group velocity of the upper band at `p₀` (1-D only).
    predicted_velocity: Option<f64>,
}

#[derive(Serialize)]
struct TrajectoryRow {
    step: usize,
    norm: f64,
    centroid: Vec<f64>,
}

#[derive(Serialize)]
struct EvolveFile<'a> {
    #[serde(flatten)]
    report: &'a EvolveReport,
    trajectory: &'a [TrajectoryRow],
}

pub fn evolve(settings: &Settings, a: &EvolveArgs) -> Result<(), CliError> {
    let (spec, walk) = resolve_walk(settings, &a.walk)?;
    let one_d = walk.dim == 1;
    let sites = settings.get("n", a.n, if one_d { 256 } else { 8 })?;
    let steps = settings.get("steps", a.steps, 100usize)?;
    let p0 = settings.get_opt("p0", a.p0)?;
    let width = settings.get_opt("width", a.width)?;
    let center = settings.get(
        "center",
        a.center,
        if one_d {
            sites as f64 / 4.0
        } else {
            (sites / 2) as f64
        },
    )?;
    let method = settings.get("method", a.method, Method::Position)?;
    let density_path: Option<PathBuf> = settings.get_opt("density", a.density.clone())?;
    let snapshot_path: Option<PathBuf> = settings.get_opt("snapshot", a.snapshot.clone())?;
    let out = OutTarget::resolve(settings, &a.out)?;
    settings.finish()?;
    positive("n", sites)?;
    if steps > MAX_STEPS {
        return Err(qwalk::error::Error::ResourceLimit {
            states: steps,
            budget: MAX_STEPS,
        }
        .into());
    }

    let (lattice, initial, p0, width) = match spec {
        WalkSpec::Line(params) => {
            let p0 = p0.unwrap_or(0.3);
            let width = width.unwrap_or(8.0);
            let state = gaussian_packet(&params, sites, center, width, p0)?;
            (LatticeWalk::Line(params), state, Some(p0), Some(width))
        }
        WalkSpec::Dirac(params) => {
            if p0.is_some() || width.is_some() {
                return Err(CliError::Config(
                    "--p0 and --width apply to --dim 1 only".into(),
                ));
            }
            let c = center.round();
            if !(c >= 0.0 && c < sites as f64) {
                return Err(CliError::Config(format!(
                    "--center {center} is off the lattice"
                )));
            }
            let c = c as usize;
            let lattice = LatticeWalk::Dirac3(params);
            let site = (c * sites + c) * sites + c;
            let spinor = [
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ];
            let state = LatticeState::localized(&lattice, sites, site, &spinor)?;
            (lattice, state, None, None)
        }
        WalkSpec::Weyl(..) => {
            return Err(CliError::Config(
                "evolve supports the Dirac walk only".into(),
            ));
        }
    };

    let stepper = match method {
        Method::Momentum => Some(MomentumStepper::new(lattice, sites)?),
        Method::Position => None,
    };
    let measure = |s: &LatticeState, reference: &[f64]| -> Vec<f64> {
        if one_d {
            vec![centroid(s, reference[0])]
        } else {
            centroid3(s, [reference[0], reference[1], reference[2]]).to_vec()
        }
    };
    let start: Vec<f64> = vec![center; walk.dim];
    let mut state = initial;
    let mut c = measure(&state, &start);
    let mut rows = vec![TrajectoryRow {
        step: 0,
        norm: state.norm(),
        centroid: c.clone(),
    }];
    let mut density_rows: Vec<(usize, Vec<f64>)> = Vec::new();
    if density_path.is_some() {
        density_rows.push((0, state.density()));
    }
    for t in 1..=steps {
        state = match &stepper {
            Some(s) => s.step(&state)?,
            None => step_position(&lattice, &state)?,
        };
        // track the previous centroid so the position unwraps across the ring
        c = measure(&state, &c);
        rows.push(TrajectoryRow {
            step: t,
            norm: state.norm(),
            centroid: c.clone(),
        });
        if density_path.is_some() {
            density_rows.push((t, state.density()));
        }
    }

    let first = rows[0].centroid.clone();
    let last = rows[rows.len() - 1].centroid.clone();
    let summary = EvolveReport {
        command: "evolve",
        walk,
        sites,
        steps,
        method: match method {
            Method::Position => "position",
            Method::Momentum => "momentum",
        },
        p0,
        width,
        center,
        final_norm: state.norm(),
        max_norm_drift: rows
            .iter()
            .map(|r| (r.norm - 1.0).abs())
            .fold(0.0, f64::max),
        measured_velocity: if steps > 0 {
            (last[0] - first[0]) / steps as f64
        } else {
            0.0
        },
        initial_centroid: first,
        final_centroid: last,
        predicted_velocity: match spec {
            WalkSpec::Line(params) => p0.map(|p| group_velocity(&params, p)),
            _ => None,
        },
    };

    let axes: &[&str] = if one_d { &["x"] } else { &["x", "y", "z"] };
    let with_meta = |t: Table| {
        t.meta("walk", walk.walk)
            .meta("theta", fmt_f64(walk.theta))
            .meta("mass_dt", fmt_f64(walk.mass_dt))
            .meta("sites", sites)
    };
    if let Some(path) = &density_path {
        let mut header = vec!["step".to_string()];
        header.extend(axes.iter().map(|s| s.to_string()));
        header.push("density".into());
        let mut t = with_meta(Table::new(header));
        for (step, dens) in &density_rows {
            for (i, &p) in dens.iter().enumerate() {
                let mut row = vec![Cell::U(*step)];
                row.extend(state.coords(i)[..walk.dim].iter().map(|&x| Cell::U(x)));
                row.push(Cell::F(p));
                t.push(row);
            }
        }
        write_table(path, &t)?;
    }
    if let Some(path) = &snapshot_path {
        let mut header: Vec<String> = axes.iter().map(|s| s.to_string()).collect();
        header.extend(["component", "re", "im"].map(String::from));
        let mut t = with_meta(Table::new(header)).meta("step", steps);
        let spinor = state.spinor();
        for (k, z) in state.amplitudes().iter().enumerate() {
            let mut row: Vec<Cell> = state.coords(k / spinor)[..walk.dim]
                .iter()
                .map(|&x| Cell::U(x))
                .collect();
            row.extend([Cell::U(k % spinor), Cell::F(z.re), Cell::F(z.im)]);
            t.push(row);
        }
        write_table(path, &t)?;
    }
    out.write(
        || {
            let mut header = vec!["step".to_string(), "norm".to_string()];
            header.extend(axes.iter().map(|s| format!("c{s}")));
            let mut t = with_meta(Table::new(header)).meta("method", summary.method);
            for r in &rows {
                let mut row = vec![Cell::U(r.step), Cell::F(r.norm)];
                row.extend(r.centroid.iter().map(|&x| Cell::F(x)));
                t.push(row);
            }
            t
        },
        &EvolveFile {
            report: &summary,
            trajectory: &rows,
        },
    )?;
    print_report(&summary);
    Ok(())
}
