use serde::Serialize;

use qwalk::lattice::{position_step_matrix, LatticeWalk};
use qwalk::qca::fock::{random_state, vec_dist, Budget};
use qwalk::qca::free::{occupation_state, run_free, ConjugationReport, FreeTrajectoryRow};
use qwalk::qca::gauge::{random_alphas, run_interacting, GaugeTrajectoryRow};
use qwalk::qca::{build_free_step, build_interacting_step, GaugeLatticeSpace, LinkEdge};
use qwalk::walk1d::Walk1DParams;

use super::{print_report, OutTarget};
use crate::config::{List, Settings};
use crate::error::CliError;
use crate::output::{fmt_f64, Cell, Table};
use crate::{EdgeArg, QcaFreeArgs, SchwingerArgs};

/// Longest QCA run accepted.
const MAX_QCA_STEPS: usize = 100_000;

fn check_steps(steps: usize) -> Result<(), CliError> {
    if steps > MAX_QCA_STEPS {
        return Err(qwalk::error::Error::ResourceLimit {
            states: steps,
            budget: MAX_QCA_STEPS,
        }
        .into());
    }
    Ok(())
}

#[derive(Serialize)]
struct QcaFreeReport {
    command: &'static str,
    theta: f64,
    mass_dt: f64,
    sites: usize,
    dim: usize,
    steps: usize,
    occupied: Vec<usize>,
    /// `‖one-particle block − walk step‖_F`; `N ≥ 4`.
    sector_defect: Option<f64>,
    /// Distance between the rotation-decomposed and the directly
    /// exponentiated step on a random state; `N ≤ 6`.
    direct_step_defect: Option<f64>,
    /// Field conjugation check; `3 ≤ N ≤ 6`.
    conjugation: Option<ConjugationReport>,
    final_norm: f64,
    max_number_drift: f64,
}

#[derive(Serialize)]
struct QcaFreeFile<'a> {
    #[serde(flatten)]
    report: &'a QcaFreeReport,
    trajectory: &'a [FreeTrajectoryRow],
}

pub fn qca_free(settings: &Settings, a: &QcaFreeArgs) -> Result<(), CliError> {
    let theta = settings.get("theta", a.theta, 0.0)?;
    let mass_dt = settings.get("mass-dt", a.mass_dt, 0.0)?;
    let sites = settings.get("n", a.n, 4usize)?;
    let steps = settings.get("steps", a.steps, 10usize)?;
    let occupied = settings
        .get("occupied", a.occupied.clone(), List(vec![0]))?
        .0;
    let seed = 0;
    let out = OutTarget::resolve(settings, &a.out)?;
    settings.finish()?;
    check_steps(steps)?;

    let params = Walk1DParams::new(theta, mass_dt)?;
    let qca = build_free_step(&params, sites)?;
    let sector_defect = if sites >= 4 {
        let walk = position_step_matrix(&LatticeWalk::Line(params), sites)?;
        Some((qca.one_particle_sector() - walk).norm())
    } else {
        None
    };
    let direct_step_defect = if sites <= 6 {
        let direct = qca.direct_step()?;
        let v = random_state(qca.space().dim(), seed);
        Some(vec_dist(&direct.apply(&v), &qca.step().apply(&v)))
    } else {
        None
    };
    let conjugation = if (3..=6).contains(&sites) {
        Some(qca.conjugation_report(4, seed)?)
    } else {
        None
    };
    let initial = occupation_state(qca.space(), &occupied)?;
    let rows = run_free(&qca, &initial, steps)?;
    let n0 = occupied.len() as f64;
    let summary = QcaFreeReport {
        command: "qca-free",
        theta,
        mass_dt,
        sites,
        dim: qca.space().dim(),
        steps,
        occupied,
        sector_defect,
        direct_step_defect,
        conjugation,
        final_norm: rows[rows.len() - 1].norm,
        max_number_drift: rows
            .iter()
            .map(|r| (r.number - n0).abs())
            .fold(0.0, f64::max),
    };
    out.write(
        || {
            let mut header = vec!["step".to_string(), "norm".into(), "number".into()];
            header.extend((0..sites).map(|n| format!("n{n}")));
            let mut t = Table::new(header)
                .meta("theta", fmt_f64(theta))
                .meta("mass_dt", fmt_f64(mass_dt))
                .meta("sites", sites);
            for r in &rows {
                let mut row = vec![Cell::U(r.step), Cell::F(r.norm), Cell::F(r.number)];
                row.extend(r.site_occupations.iter().map(|&x| Cell::F(x)));
                t.push(row);
            }
            t
        },
        &QcaFreeFile {
            report: &summary,
            trajectory: &rows,
        },
    )?;
    print_report(&summary);
    Ok(())
}

#[derive(Serialize)]
struct SchwingerReport {
    command: &'static str,
    theta: f64,
    mass_dt: f64,
    sites: usize,
    truncation: i32,
    link_edge: &'static str,
    coupling_dt: f64,
    dim: usize,
    blocks: usize,
    largest_block: usize,
    steps: usize,
    occupied: Vec<usize>,
    seed: u64,
    alpha_draws: usize,
    /// `max_α ‖[D, G_α]‖_F` over the random draws.
    gauge_defect: f64,
    /// `max_n ‖[D, J_n]‖_F`.
    gauss_defect: f64,
    unitarity_defect: f64,
    /// `max_{t,n} |⟨J_n⟩(t) − ⟨J_n⟩(0)|`.
    max_gauss_drift: f64,
    max_gauss_sq_drift: f64,
    max_edge_leakage: f64,
    final_norm: f64,
}

#[derive(Serialize)]
struct SchwingerFile<'a> {
    #[serde(flatten)]
    report: &'a SchwingerReport,
    trajectory: &'a [GaugeTrajectoryRow],
}

pub fn qca_schwinger(settings: &Settings, a: &SchwingerArgs) -> Result<(), CliError> {
    let theta = settings.get("theta", a.theta, 0.0)?;
    let mass_dt = settings.get("mass-dt", a.mass_dt, 0.0)?;
    let sites = settings.get("n", a.n, 4usize)?;
    let truncation = settings.get("truncation", a.truncation, 1i32)?;
    let coupling_dt = settings.get("coupling-dt", a.coupling_dt, 0.1)?;
    let steps = settings.get("steps", a.steps, 20usize)?;
    let occupied = settings
        .get("occupied", a.occupied.clone(), List(vec![2 * (sites / 2)]))?
        .0;
    let edge = settings.get("link-edge", a.link_edge, EdgeArg::Clipped)?;
    let alpha_draws = settings.get("alpha-draws", a.alpha_draws, 20usize)?;
    let seed = settings.get("seed", a.seed, 0u64)?;
    let defaults = Budget::default();
    let budget = Budget {
        max_states: settings.get("max-states", a.max_states, defaults.max_states)?,
        max_block: settings.get("max-block", a.max_block, defaults.max_block)?,
    };
    let out = OutTarget::resolve(settings, &a.out)?;
    settings.finish()?;
    check_steps(steps)?;
    if !coupling_dt.is_finite() {
        return Err(CliError::Config(format!(
            "--coupling-dt {coupling_dt} is not finite"
        )));
    }

    let params = Walk1DParams::new(theta, mass_dt)?;
    let link_edge = match edge {
        EdgeArg::Clipped => LinkEdge::Clipped,
        EdgeArg::Cyclic => LinkEdge::Cyclic,
    };
    let space = GaugeLatticeSpace::new(sites, truncation, link_edge)?;
    budget.check_states(space.dim())?;
    let qca = build_interacting_step(&params, &space, coupling_dt, &budget)?;

    let mut gauge_defect: f64 = 0.0;
    for alpha in random_alphas(sites, alpha_draws, seed) {
        gauge_defect = gauge_defect.max(qca.gauge_commutator_defect(&alpha)?);
    }
    let mut gauss_defect: f64 = 0.0;
    for n in 0..sites {
        gauss_defect = gauss_defect.max(qca.gauss_commutator_defect(n)?);
    }
    let initial = space.physical_state(&occupied)?;
    let rows = run_interacting(&qca, &initial, steps)?;
    let fold = |f: fn(&GaugeTrajectoryRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let summary = SchwingerReport {
        command: "qca-schwinger",
        theta,
        mass_dt,
        sites,
        truncation,
        link_edge: match edge {
            EdgeArg::Clipped => "clipped",
            EdgeArg::Cyclic => "cyclic",
        },
        coupling_dt,
        dim: space.dim(),
        blocks: qca.blocks().blocks().len(),
        largest_block: qca.blocks().largest_block(),
        steps,
        occupied,
        seed,
        alpha_draws,
        gauge_defect,
        gauss_defect,
        unitarity_defect: qca.unitarity_defect(),
        max_gauss_drift: fold(|r| r.gauss_drift),
        max_gauss_sq_drift: fold(|r| r.gauss_sq_drift),
        max_edge_leakage: fold(|r| r.edge_leakage),
        final_norm: rows[rows.len() - 1].norm,
    };
    out.write(
        || {
            let mut header = vec!["step".to_string(), "norm".into()];
            header.extend((0..sites).map(|n| format!("n{n}")));
            header.extend((0..space.links()).map(|l| format!("e{l}")));
            header.extend((0..sites).map(|n| format!("j{n}")));
            header.extend(["gauss_drift", "gauss_sq_drift", "edge_leakage"].map(String::from));
            let mut t = Table::new(header)
                .meta("theta", fmt_f64(theta))
                .meta("mass_dt", fmt_f64(mass_dt))
                .meta("sites", sites)
                .meta("truncation", truncation)
                .meta("coupling_dt", fmt_f64(coupling_dt));
            for r in &rows {
                let mut row = vec![Cell::U(r.step), Cell::F(r.norm)];
                row.extend(r.site_occupations.iter().map(|&x| Cell::F(x)));
                row.extend(r.link_fields.iter().map(|&x| Cell::F(x)));
                row.extend(r.gauss.iter().map(|&x| Cell::F(x)));
                row.extend([
                    Cell::F(r.gauss_drift),
                    Cell::F(r.gauss_sq_drift),
                    Cell::F(r.edge_leakage),
                ]);
                t.push(row);
            }
            t
        },
        &SchwingerFile {
            report: &summary,
            trajectory: &rows,
        },
    )?;
    print_report(&summary);
    Ok(())
}
