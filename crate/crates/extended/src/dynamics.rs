//! Unitary evolution of χ_n ⊗ χ and the purity of the oscillator subsystem.

use dmolab_opkit::evolve::ensure_normalized;
use dmolab_opkit::par::{self, Execution};
use dmolab_opkit::{c64, eigh_complex, BasisSpec, FactorState, Mat, OpkitError, Propagator, Spin};

use crate::model::{ExtendedSystem, ISOSPIN};
use crate::{ExtendedDim, ExtendedError, ExtendedParams, Result};

/// Which tensor factor is traced out; purity and entropy are those of the
/// remaining subsystem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsystemPartition {
    pub traced_factor: usize,
}

impl Default for SubsystemPartition {
    fn default() -> Self {
        SubsystemPartition {
            traced_factor: ISOSPIN,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Positive,
    Negative,
}

/// χ_n of the free oscillator on (|+, n⟩, |−, n+1⟩) times the normalized
/// isospin state cos θ|+⟩ + sin θ|−⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialState {
    pub n: usize,
    pub branch: Branch,
    pub theta: f64,
}

impl InitialState {
    /// Components (|+,n⟩, |−,n+1⟩) of χ_n: eigenvector of
    /// [[m, √(n+1)], [√(n+1), −m]] on the chosen branch.
    pub fn oscillator_amplitudes(&self, mass: f64) -> [f64; 2] {
        let c = ((self.n + 1) as f64).sqrt();
        let e = (mass * mass + c * c).sqrt();
        let energy = match self.branch {
            Branch::Positive => e,
            Branch::Negative => -e,
        };
        // (m − E) u + c v = 0
        let (u, v) = (c, energy - mass);
        let norm = (u * u + v * v).sqrt();
        [u / norm, v / norm]
    }

    pub fn vector(&self, system: &ExtendedSystem) -> Result<Vec<c64>> {
        if system.params().dimension != ExtendedDim::One {
            return Err(ExtendedError::InvalidParams("dynamics is defined for the 1D model".into()));
        }
        let basis = system.basis();
        let [upper, lower] = self.oscillator_amplitudes(system.params().mass);
        let iso = [(Spin::Up, self.theta.cos()), (Spin::Down, self.theta.sin())];
        let mut psi = vec![c64::new(0.0, 0.0); basis.total_dim()];
        for (iso_spin, iso_amp) in iso {
            for (star, fock, amp) in [(Spin::Up, self.n, upper), (Spin::Down, self.n + 1, lower)] {
                let k = basis.index_of(&[
                    FactorState::Spin(star),
                    FactorState::Spin(iso_spin),
                    FactorState::Fock(vec![fock]),
                ])?;
                psi[k] += c64::new(amp * iso_amp, 0.0);
            }
        }
        Ok(psi)
    }
}

/// Reduced density matrix of one factor: ρ[a,b] = Σ_rest ψ[a,rest] ψ*[b,rest].
pub fn reduced_density(psi: &[c64], basis: &BasisSpec, factor: usize) -> Result<Mat<c64>> {
    if psi.len() != basis.total_dim() {
        return Err(OpkitError::DimensionMismatch {
            left: basis.total_dim(),
            right: psi.len(),
        }
        .into());
    }
    if factor >= basis.factors().len() {
        return Err(OpkitError::FactorOutOfRange {
            factor,
            available: basis.factors().len(),
        }
        .into());
    }
    let d = basis.factor_dim(factor);
    let mut rho = Mat::<c64>::zeros(d, d);
    // each index with the factor at 0 labels one configuration of the rest
    for k in (0..psi.len()).filter(|&k| basis.component(k, factor) == 0) {
        let column: Vec<c64> = (0..d).map(|a| psi[basis.with_component(k, factor, a)]).collect();
        for a in 0..d {
            for b in 0..d {
                rho[(a, b)] += column[a] * column[b].conj();
            }
        }
    }
    Ok(rho)
}

/// Purity P = Tr ρ_red² and von Neumann entropy S = −Tr ρ_red ln ρ_red of the
/// subsystem left after tracing out `partition.traced_factor`.
pub fn purity_entropy(
    psi: &[c64],
    basis: &BasisSpec,
    partition: SubsystemPartition,
) -> Result<(f64, f64)> {
    ensure_normalized(psi)?;
    // for a pure state both sides of a cut share their nonzero spectrum
    let rho = reduced_density(psi, basis, partition.traced_factor)?;
    let (weights, _) = eigh_complex(&rho, false)?;
    let purity = weights.iter().map(|w| w * w).sum::<f64>();
    let entropy = weights
        .iter()
        .filter(|w| **w > 1e-300)
        .map(|w| -w * w.ln())
        .sum::<f64>()
        .max(0.0);
    Ok((purity.min(1.0), entropy))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub purity: f64,
    pub entropy: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub samples: Vec<Sample>,
}

impl TimeSeries {
    pub fn mean_purity(&self) -> f64 {
        self.samples.iter().map(|s| s.purity).sum::<f64>() / self.samples.len() as f64
    }

    pub fn min_purity(&self) -> f64 {
        self.samples.iter().map(|s| s.purity).fold(f64::INFINITY, f64::min)
    }
}

pub fn minimum_dynamics_cutoff(initial: &InitialState, buffer: usize) -> usize {
    initial.n + buffer + 4
}

/// Exact evolution from χ_n ⊗ χ, sampled on `times`.
pub fn dynamics_run(
    params: &ExtendedParams,
    initial: &InitialState,
    times: &[f64],
    cutoff: usize,
    buffer: usize,
) -> Result<TimeSeries> {
    let minimum = minimum_dynamics_cutoff(initial, buffer);
    if cutoff < minimum {
        return Err(ExtendedError::CutoffTooSmall { cutoff, minimum });
    }
    let system = ExtendedSystem::build(*params, cutoff)?;
    let psi0 = initial.vector(&system)?;
    ensure_normalized(&psi0)?;
    let propagator = Propagator::new(system.hamiltonian())?;
    let overlaps = propagator.project(&psi0)?;
    let partition = SubsystemPartition::default();
    let samples = times
        .iter()
        .map(|&t| {
            let psi = propagator.state_at(&overlaps, t);
            let (purity, entropy) = purity_entropy(&psi, system.basis(), partition)?;
            Ok(Sample { t, purity, entropy })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries { samples })
}

/// Uniform grid of `samples` points on [0, horizon].
pub fn time_grid(horizon: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|k| horizon * k as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub gamma: f64,
    pub mean_purity: f64,
    pub min_purity: f64,
}

/// Time-averaged and minimal purity over [0, horizon] for each γ, sorted by γ.
pub fn resonance_scan(
    base: &ExtendedParams,
    initial: &InitialState,
    gammas: &[f64],
    horizon: f64,
    samples: usize,
    cutoff: usize,
) -> Result<Vec<ScanPoint>> {
    let mode = if par::is_parallel() {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    resonance_scan_with(mode, base, initial, gammas, horizon, samples, cutoff)
}

pub fn resonance_scan_with(
    mode: Execution,
    base: &ExtendedParams,
    initial: &InitialState,
    gammas: &[f64],
    horizon: f64,
    samples: usize,
    cutoff: usize,
) -> Result<Vec<ScanPoint>> {
    if gammas.is_empty() || gammas.iter().any(|g| !g.is_finite()) {
        return Err(ExtendedError::InvalidParams("γ grid must be non-empty and finite".into()));
    }
    if samples == 0 || !(horizon >= 0.0) {
        return Err(ExtendedError::InvalidParams(format!(
            "need samples > 0 and horizon >= 0, got {samples} and {horizon}"
        )));
    }
    let times = time_grid(horizon, samples);
    let buffer = cutoff.saturating_sub(initial.n + 4);
    let runs = par::map_with(mode, gammas, |&gamma| {
        dynamics_run(&base.with_gamma(gamma), initial, &times, cutoff, buffer).map(|series| ScanPoint {
            gamma,
            mean_purity: series.mean_purity(),
            min_purity: series.min_purity(),
        })
    });
    let mut points = runs.into_iter().collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    Ok(points)
}
