pub mod evolve;
pub mod phase;
pub mod qca;
pub mod scan;

use std::path::PathBuf;

use serde::Serialize;

use qwalk::scan::WalkSpec;
use qwalk::walk1d::Walk1DParams;
use qwalk::walk3d::{Walk3DParams, WeylSign};

use crate::config::Settings;
use crate::error::CliError;
use crate::output::{to_json, write_json, write_table, Table};
use crate::{Format, OutOpts, WalkKind, WalkOpts};

/// Where the data file goes, if anywhere.
pub struct OutTarget {
    path: Option<PathBuf>,
    format: Format,
}

impl OutTarget {
    pub fn resolve(settings: &Settings, o: &OutOpts) -> Result<Self, CliError> {
        let path: Option<PathBuf> = settings.get_opt("out", o.out.clone())?;
        let guess = match &path {
            Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
            _ => Format::Csv,
        };
        let format = settings.get("format", o.format, guess)?;
        Ok(OutTarget { path, format })
    }

    /// Writes the table or the JSON document, depending on the format.
    pub fn write(
        &self,
        table: impl FnOnce() -> Table,
        json: &impl Serialize,
    ) -> Result<(), CliError> {
        match (&self.path, self.format) {
            (None, _) => Ok(()),
            (Some(p), Format::Csv) => write_table(p, &table()),
            (Some(p), Format::Json) => write_json(p, json),
        }
    }
}

pub fn print_report(report: &impl Serialize) {
    println!("{}", to_json(report));
}

/// Walk parameters shared by the scan and evolution commands.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct WalkSummary {
    pub walk: &'static str,
    pub dim: usize,
    pub theta: f64,
    pub mass_dt: f64,
    pub extended: bool,
}

pub fn resolve_walk(
    settings: &Settings,
    o: &WalkOpts,
) -> Result<(WalkSpec, WalkSummary), CliError> {
    let dim = settings.get("dim", o.dim, 1usize)?;
    let theta = settings.get("theta", o.theta, 0.0)?;
    let mass_dt = settings.get("mass-dt", o.mass_dt, 0.0)?;
    let extended = settings.get("extended", o.extended, false)?;
    let kind = settings.get("walk", o.walk, WalkKind::Dirac)?;
    let spec = match dim {
        1 => {
            if kind != WalkKind::Dirac {
                return Err(CliError::Config("Weyl walks need --dim 3".into()));
            }
            let p = if extended {
                Walk1DParams::extended(theta, mass_dt)?
            } else {
                Walk1DParams::new(theta, mass_dt)?
            };
            WalkSpec::Line(p)
        }
        3 => {
            let p = if extended {
                Walk3DParams::extended(theta, mass_dt)?
            } else {
                Walk3DParams::new(theta, mass_dt)?
            };
            match kind {
                WalkKind::Dirac => WalkSpec::Dirac(p),
                WalkKind::WeylPlus => WalkSpec::Weyl(p, WeylSign::Plus),
                WalkKind::WeylMinus => WalkSpec::Weyl(p, WeylSign::Minus),
            }
        }
        d => return Err(CliError::Config(format!("--dim must be 1 or 3, got {d}"))),
    };
    let summary = WalkSummary {
        walk: spec.label(),
        dim,
        theta,
        mass_dt,
        extended,
    };
    Ok((spec, summary))
}

pub fn positive(name: &str, value: usize) -> Result<usize, CliError> {
    if value == 0 {
        return Err(CliError::Config(format!("--{name} must be positive")));
    }
    Ok(value)
}
