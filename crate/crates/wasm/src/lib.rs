//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array`; the row layout is given on
//! each function.

use qwalk::error::Result;
use qwalk::lattice::{centroid, gaussian_packet, LatticeWalk, MomentumStepper};
use qwalk::scan::{scan_1d, scan_3d_diagonal, ScanReport, WalkSpec};
use qwalk::walk1d::Walk1DParams;
use qwalk::walk3d::Walk3DParams;
use wasm_bindgen::prelude::*;

/// Longest evolution the page may request.
pub const MAX_STEPS: usize = 10_000;

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

fn rows(report: &ScanReport) -> Vec<f64> {
    let mut out = Vec::new();
    for r in &report.records {
        out.push(r.momentum()[0]);
        out.extend_from_slice(r.energies.as_slice());
    }
    out
}

pub fn line_dispersion(theta: f64, mass_dt: f64, n: usize) -> Result<Vec<f64>> {
    Ok(rows(&scan_1d(&Walk1DParams::new(theta, mass_dt)?, n)?))
}

pub fn diagonal_dispersion(theta: f64, mass_dt: f64, n: usize) -> Result<Vec<f64>> {
    let walk = WalkSpec::Dirac(Walk3DParams::new(theta, mass_dt)?);
    Ok(rows(&scan_3d_diagonal(walk, n)?))
}

pub fn bound(walk: WalkSpec) -> f64 {
    walk.bound_rhs().unwrap_or(f64::NAN)
}

pub fn packet_evolution(
    theta: f64,
    mass_dt: f64,
    n: usize,
    p0: f64,
    width: f64,
    steps: usize,
) -> Result<Vec<f64>> {
    if steps > MAX_STEPS {
        return Err(qwalk::error::Error::ResourceLimit {
            states: steps,
            budget: MAX_STEPS,
        });
    }
    let params = Walk1DParams::new(theta, mass_dt)?;
    let center = n as f64 / 4.0;
    let mut state = gaussian_packet(&params, n, center, width, p0)?;
    let stepper = MomentumStepper::new(LatticeWalk::Line(params), n)?;
    let mut out = Vec::with_capacity((steps + 1) * (n + 1));
    let mut c = centroid(&state, center);
    for t in 0..=steps {
        if t > 0 {
            state = stepper.step(&state)?;
            c = centroid(&state, c);
        }
        out.push(c);
        out.extend(state.density());
    }
    Ok(out)
}

/// 1-D Dirac walk dispersion on `n` aligned momenta. Rows of `[p, E0, E1]`.
#[wasm_bindgen]
pub fn dispersion_1d(theta: f64, mass_dt: f64, n: usize) -> std::result::Result<Vec<f64>, JsError> {
    js(line_dispersion(theta, mass_dt, n))
}

/// 3-D Dirac walk along `p_x = p_y = p_z = p`. Rows of `[p, E0, E1, E2, E3]`.
#[wasm_bindgen]
pub fn diagonal_3d(theta: f64, mass_dt: f64, n: usize) -> std::result::Result<Vec<f64>, JsError> {
    js(diagonal_dispersion(theta, mass_dt, n))
}

/// `(π − 2θ) + mc²δt`, or `NaN` when the bound does not apply.
#[wasm_bindgen]
pub fn energy_bound_1d(theta: f64, mass_dt: f64) -> std::result::Result<f64, JsError> {
    Ok(bound(WalkSpec::Line(js(Walk1DParams::new(
        theta, mass_dt,
    ))?)))
}

/// `3(π − 2θ) + mc²δt`, or `NaN` when the bound does not apply.
#[wasm_bindgen]
pub fn energy_bound_3d(theta: f64, mass_dt: f64) -> std::result::Result<f64, JsError> {
    Ok(bound(WalkSpec::Dirac(js(Walk3DParams::new(
        theta, mass_dt,
    ))?)))
}

/// Gaussian packet on an `n`-site ring, centred at `n/4`, evolved `steps`
/// times. Rows of `n + 1` values: the centroid, then the site densities.
#[wasm_bindgen]
pub fn evolve_1d(
    theta: f64,
    mass_dt: f64,
    n: usize,
    p0: f64,
    width: f64,
    steps: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    js(packet_evolution(theta, mass_dt, n, p0, width, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts() {
        assert_eq!(line_dispersion(0.3, 0.05, 16).unwrap().len(), 16 * 3);
        assert_eq!(diagonal_dispersion(0.3, 0.05, 16).unwrap().len(), 16 * 5);
        let e = packet_evolution(0.3, 0.05, 32, 0.3, 3.0, 4).unwrap();
        assert_eq!(e.len(), 5 * 33);
        let total: f64 = e[34..66].iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let rhs = bound(WalkSpec::Line(Walk1DParams::new(0.3, 0.05).unwrap()));
        assert!((rhs - (std::f64::consts::PI - 0.6 + 0.05)).abs() < 1e-15);
    }

    #[test]
    fn packet_moves_with_the_group_velocity_sign() {
        let e = packet_evolution(0.3, 0.0, 128, 0.5, 6.0, 40).unwrap();
        let first = e[0];
        let last = e[40 * 129];
        assert!(last > first + 5.0);
        assert!(packet_evolution(0.3, 0.0, 64, 0.5, 6.0, MAX_STEPS + 1).is_err());
    }
}
