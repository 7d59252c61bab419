//! Browser bindings for the interactive demo in `www/`. Every function takes
//! and returns JSON text so the page needs no generated glue beyond
//! wasm-bindgen's.

use dotcavity::correlations::{evaluate_trajectory_with, MeasurementSearch};
use dotcavity::dynamics::{integrate, observables, pump_profile};
use dotcavity::model::{linear_ghz, spectrum_sweep};
use dotcavity::{InitialState, IntegrateOptions, PulseParams, SystemParams};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

#[derive(Deserialize)]
struct TrajectoryRequest {
    params: SystemParams,
    initial_state: InitialState,
    t_end: f64,
    sample_dt: f64,
}

#[derive(Serialize, Default)]
struct TrajectoryResponse {
    t: Vec<f64>,
    cc: Vec<f64>,
    eof: Vec<f64>,
    discord: Vec<f64>,
    classical: Vec<f64>,
    n_photon: Vec<f64>,
    pop_x1: Vec<f64>,
    pop_x2: Vec<f64>,
    pump: Vec<f64>,
}

#[derive(Serialize)]
struct SpectrumResponse {
    delta: Vec<f64>,
    /// `levels[k][i]`: k-th dressed energy (GHz) at `delta[i]`.
    levels: Vec<Vec<f64>>,
}

fn to_js<E: std::fmt::Display>(e: E) -> JsError {
    JsError::new(&e.to_string())
}

/// Default parameters and the preset list, for populating the form.
#[wasm_bindgen]
pub fn defaults() -> String {
    serde_json::json!({
        "params": SystemParams::default(),
        "initial_states": InitialState::TAGS,
    })
    .to_string()
}

/// Integrates one trajectory and evaluates the correlation measures.
#[wasm_bindgen]
pub fn simulate(request: &str) -> Result<String, JsError> {
    let req: TrajectoryRequest = serde_json::from_str(request).map_err(to_js)?;
    let space = req.params.space().map_err(to_js)?;
    let rho0 = req.initial_state.density(&space);
    let traj = integrate(&space, &req.params, &rho0, (0.0, req.t_end), req.sample_dt, &IntegrateOptions::default()).map_err(to_js)?;
    let search = MeasurementSearch { theta_points: 32, phi_points: 64, ..MeasurementSearch::default() };
    let records = evaluate_trajectory_with(&space, &traj, &search).map_err(to_js)?;

    let mut out = TrajectoryResponse::default();
    for ((r, o), px) in records.iter().zip(observables(&space, &traj)).zip(&traj.pump_values) {
        out.t.push(r.t);
        out.cc.push(r.cc);
        out.eof.push(r.eof);
        out.discord.push(r.discord);
        out.classical.push(r.classical);
        out.n_photon.push(o.n_photon);
        out.pop_x1.push(o.pop_x1);
        out.pop_x2.push(o.pop_x2);
        out.pump.push(linear_ghz(*px));
    }
    serde_json::to_string(&out).map_err(to_js)
}

/// Dressed-state energies of manifold `n` against detuning.
#[wasm_bindgen]
pub fn spectrum(params: &str, manifold: usize, delta_min: f64, delta_max: f64, steps: usize) -> Result<String, JsError> {
    let params: SystemParams = serde_json::from_str(params).map_err(to_js)?;
    if steps < 2 {
        return Err(JsError::new("need at least two detuning steps"));
    }
    let delta: Vec<f64> = (0..steps).map(|k| delta_min + (delta_max - delta_min) * k as f64 / (steps - 1) as f64).collect();
    let rows = spectrum_sweep(&params, manifold, &delta).map_err(to_js)?;
    let k = rows.first().map_or(0, |r| r.eigenvalues.len());
    let levels = (0..k).map(|i| rows.iter().map(|r| linear_ghz(r.eigenvalues[i])).collect()).collect();
    serde_json::to_string(&SpectrumResponse { delta, levels }).map_err(to_js)
}

/// Exciton pump `P_x(t)/2π` in GHz on an even grid, plus the pulse FWHM.
#[wasm_bindgen]
pub fn pulse(p0_over_2pi: f64, tau_p: f64, t_end: f64, points: usize) -> Result<String, JsError> {
    let pulse = PulseParams { p0_over_2pi, tau_p, t0: None };
    pulse.validate().map_err(to_js)?;
    let n = points.max(2);
    let t: Vec<f64> = (0..n).map(|k| t_end * k as f64 / (n - 1) as f64).collect();
    let p: Vec<f64> = t.iter().map(|&t| linear_ghz(pump_profile(&pulse, t))).collect();
    Ok(serde_json::json!({ "t": t, "p": p, "fwhm": pulse.fwhm(), "t0": pulse.center() }).to_string())
}
