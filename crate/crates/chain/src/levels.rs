use dmolab_opkit::par::{self, Execution};
use dmolab_opkit::{c64, eigh_real, LatticeGeometry, Mat, SpectrumResult};

use crate::geometry::deform_chain;
use crate::{ChainParams, Result};

/// Full spectrum of the real symmetric tight-binding matrix.
pub fn diagonalize_chain(
    geometry: &LatticeGeometry,
    alpha: f64,
    beta: f64,
    want_vectors: bool,
) -> Result<SpectrumResult> {
    geometry.validate()?;
    let (eigenvalues, vectors) = eigh_real(&geometry.hamiltonian(alpha, beta), want_vectors)?;
    let eigenvectors = vectors.map(|v| Mat::from_fn(v.nrows(), v.ncols(), |i, k| c64::new(v[(i, k)], 0.0)));
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        labels: None,
    })
}

/// Site amplitudes of one eigenvector, indexed by site id.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub energy: f64,
    pub amplitudes: Vec<f64>,
}

impl Envelope {
    pub fn peak(&self) -> usize {
        let mut best = 0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.abs() > self.amplitudes[best].abs() {
                best = i;
            }
        }
        best
    }
}

/// Eigenvector of the lowest oscillator level, the one nearest E₀ + |M|,
/// with its largest entry made positive.
pub fn ground_state_envelope(geometry: &LatticeGeometry, alpha: f64, beta: f64) -> Result<Envelope> {
    let spectrum = diagonalize_chain(geometry, alpha, beta, true)?;
    let target = 0.5 * (alpha + beta) + 0.5 * (alpha - beta).abs();
    let k = (0..spectrum.len())
        .min_by(|&a, &b| {
            let da = (spectrum.eigenvalues[a] - target).abs();
            let db = (spectrum.eigenvalues[b] - target).abs();
            da.total_cmp(&db)
        })
        .unwrap_or(0);
    let amplitudes = spectrum
        .eigenvector(k)
        .unwrap_or_default()
        .iter()
        .map(|z| z.re)
        .collect();
    let mut envelope = Envelope {
        energy: spectrum.eigenvalues[k],
        amplitudes,
    };
    if envelope.amplitudes[envelope.peak()] < 0.0 {
        envelope.amplitudes.iter_mut().for_each(|a| *a = -*a);
    }
    Ok(envelope)
}

/// Low-lying positive levels of a deformed chain against E₀ + √(ωn + M²).
#[derive(Clone, Debug, PartialEq)]
pub struct LevelLawReport {
    pub omega: f64,
    pub mass_split: f64,
    /// Levels n = 1, 2, … above the n = 0 pair.
    pub levels: Vec<f64>,
    pub predicted: Vec<f64>,
    /// max |E − E_pred| / (E_pred − E₀).
    pub max_relative_error: f64,
    /// Separation of the n = 1 levels on either side of E₀.
    pub gap: f64,
}

/// Deforms `params`, diagonalizes and compares the first `count` excited
/// levels. States within √(M² + ω/2) of E₀ belong to n = 0 and are skipped.
pub fn level_law(params: &ChainParams, count: usize) -> Result<LevelLawReport> {
    let geometry = deform_chain(params)?;
    let spectrum = diagonalize_chain(&geometry, params.alpha, params.beta, false)?;
    let e0 = params.offset();
    let m = params.mass_split();
    let threshold = (m * m + 0.5 * params.omega).sqrt();
    let above: Vec<f64> = spectrum.eigenvalues.iter().copied().filter(|e| e - e0 > threshold).collect();
    let below = spectrum
        .eigenvalues
        .iter()
        .copied()
        .filter(|e| e0 - e > threshold)
        .fold(f64::NEG_INFINITY, f64::max);
    let levels: Vec<f64> = above.iter().copied().take(count).collect();
    let predicted: Vec<f64> = (1..=levels.len())
        .map(|n| e0 + (params.omega * n as f64 + m * m).sqrt())
        .collect();
    let max_relative_error = levels
        .iter()
        .zip(&predicted)
        .map(|(e, p)| (e - p).abs() / (p - e0))
        .fold(0.0, f64::max);
    let gap = above.first().copied().unwrap_or(f64::NAN) - below;
    Ok(LevelLawReport {
        omega: params.omega,
        mass_split: m,
        levels,
        predicted,
        max_relative_error,
        gap,
    })
}

/// [`level_law`] over (ω, M) points, with E₀ and the other parameters from `base`.
pub fn level_law_sweep(base: &ChainParams, points: &[(f64, f64)], count: usize) -> Result<Vec<LevelLawReport>> {
    let mode = if par::is_parallel() {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    level_law_sweep_with(mode, base, points, count)
}

pub fn level_law_sweep_with(
    mode: Execution,
    base: &ChainParams,
    points: &[(f64, f64)],
    count: usize,
) -> Result<Vec<LevelLawReport>> {
    let e0 = base.offset();
    par::map_with(mode, points, |&(omega, m)| {
        let p = ChainParams {
            alpha: e0 + m,
            beta: e0 - m,
            omega,
            ..*base
        }
        .validated()?;
        level_law(&p, count)
    })
    .into_iter()
    .collect()
}
