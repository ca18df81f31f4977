use serde::Serialize;

use qwalk::scan::{product_phase_bound_test, PhaseBoundReport};

use super::{positive, print_report, OutTarget};
use crate::config::Settings;
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::PhaseArgs;

/// Pairs allowed in one run.
const MAX_TRIALS: usize = 10_000_000;

#[derive(Serialize)]
struct PhaseReport {
    command: &'static str,
    #[serde(flatten)]
    result: PhaseBoundReport,
    holds: bool,
}

pub fn phase_bound_test(settings: &Settings, a: &PhaseArgs) -> Result<(), CliError> {
    let dim = settings.get("dim", a.dim, 2usize)?;
    let trials = positive("trials", settings.get("trials", a.trials, 10_000)?)?;
    let seed = settings.get("seed", a.seed, 0u64)?;
    let out = OutTarget::resolve(settings, &a.out)?;
    settings.finish()?;
    if trials > MAX_TRIALS {
        return Err(qwalk::error::Error::ResourceLimit {
            states: trials,
            budget: MAX_TRIALS,
        }
        .into());
    }

    let result = product_phase_bound_test(dim, trials, seed)?;
    let summary = PhaseReport {
        command: "phase-bound-test",
        holds: result.worst_margin >= -1e-10,
        result,
    };
    out.write(
        || {
            let mut t = Table::new(["dim", "trials", "seed", "worst_margin"]);
            t.push(vec![
                Cell::U(dim),
                Cell::U(trials),
                Cell::S(seed.to_string()),
                Cell::F(summary.result.worst_margin),
            ]);
            t
        },
        &summary,
    )?;
    print_report(&summary);
    Ok(())
}
