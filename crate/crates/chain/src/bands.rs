use std::f64::consts::TAU;

use crate::{ChainError, ChainParams, Result};

/// Upper and lower Bloch bands E₀ ± √(Δ²|1 + e^{2πiλk}|² + M²).
pub fn bloch_dispersion(params: &ChainParams, k: f64) -> (f64, f64) {
    let phase = TAU * params.period * k;
    let form_factor = 2.0 + 2.0 * phase.cos();
    let root = (params.delta * params.delta * form_factor + params.mass_split().powi(2)).sqrt();
    (params.offset() + root, params.offset() - root)
}

/// Momenta allowed on a ring of `params.cells` cells.
pub fn bloch_momenta(params: &ChainParams) -> Vec<f64> {
    let length = params.cells as f64 * params.period;
    (0..params.cells).map(|j| j as f64 / length).collect()
}

/// Δ e^{−d/Λ}.
pub fn coupling_from_distance(delta: f64, decay_length: f64, distance: f64) -> Result<f64> {
    if !(distance >= 0.0) {
        return Err(ChainError::NegativeDistance(distance));
    }
    if !(delta > 0.0 && decay_length > 0.0) {
        return Err(ChainError::InvalidParams(format!(
            "need Δ, Λ > 0, got {delta}, {decay_length}"
        )));
    }
    Ok(delta * (-distance / decay_length).exp())
}

/// Inverse of [`coupling_from_distance`].
pub fn distance_from_coupling(delta: f64, decay_length: f64, coupling: f64) -> Result<f64> {
    if !(coupling > 0.0 && coupling <= delta) {
        return Err(ChainError::CouplingOutOfRange(coupling));
    }
    Ok(-decay_length * (coupling / delta).ln())
}
