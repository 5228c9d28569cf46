use dmolab_opkit::{c64, eigh_real, LatticeGeometry, Mat, SpectrumResult};

use crate::{HexError, HexLattice, HexParams, Result};

/// Largest matrix handed to the dense eigensolver.
pub const MAX_DENSE_SITES: usize = 10_000;

fn check_size(dim: usize) -> Result<()> {
    if dim > MAX_DENSE_SITES {
        return Err(HexError::TooLarge {
            sites: dim,
            limit: MAX_DENSE_SITES,
        });
    }
    Ok(())
}

/// Full spectrum. Eigenvalues of a bipartite geometry come from the smaller
/// of ΠΠ† and Π†Π; vectors always use the dense hamiltonian.
pub fn diagonalize_hex(
    geometry: &LatticeGeometry,
    alpha: f64,
    beta: f64,
    want_vectors: bool,
) -> Result<SpectrumResult> {
    geometry.validate()?;
    let blocks = if want_vectors {
        None
    } else {
        geometry.bipartite_blocks().ok()
    };
    let Some(blocks) = blocks else {
        check_size(geometry.n_sites())?;
        let (eigenvalues, vectors) = eigh_real(&geometry.hamiltonian(alpha, beta), want_vectors)?;
        let eigenvectors = vectors.map(|v| Mat::from_fn(v.nrows(), v.ncols(), |i, k| c64::new(v[(i, k)], 0.0)));
        return Ok(SpectrumResult {
            eigenvalues,
            eigenvectors,
            labels: None,
        });
    };
    let pi = &blocks.pi;
    let (gram, extra, extra_energy) = if pi.nrows() <= pi.ncols() {
        (pi * pi.transpose(), pi.ncols() - pi.nrows(), beta)
    } else {
        (pi.transpose() * pi, pi.nrows() - pi.ncols(), alpha)
    };
    check_size(gram.nrows())?;
    let (squares, _) = eigh_real(&gram, false)?;
    let (e0, m) = (0.5 * (alpha + beta), 0.5 * (alpha - beta));
    let mut eigenvalues = Vec::with_capacity(geometry.n_sites());
    for s in squares {
        let root = (m * m + s.max(0.0)).sqrt();
        eigenvalues.extend([e0 - root, e0 + root]);
    }
    eigenvalues.extend(std::iter::repeat_n(extra_energy, extra));
    eigenvalues.sort_by(f64::total_cmp);
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors: None,
        labels: None,
    })
}

/// Smeared, core-weighted density of ΠΠ† levels in units of √ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeakProtocol {
    /// Core = A sites within this fraction of the radius (hex distance).
    pub core_fraction: f64,
    pub smearing: f64,
    pub grid_start: f64,
    pub grid_end: f64,
    pub grid_step: f64,
    /// Number of tallest peaks kept.
    pub count: usize,
}

impl Default for PeakProtocol {
    fn default() -> Self {
        PeakProtocol {
            core_fraction: 0.4,
            smearing: 0.01,
            grid_start: 0.5,
            grid_end: 3.0,
            grid_step: 0.001,
            count: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelPeaks {
    /// Peak energies above E₀, ascending.
    pub levels: Vec<f64>,
    /// E₀ + √(ω(N + 1) + M²) for N = 0, 1, …
    pub predicted: Vec<f64>,
    /// max |E − E_pred| / (E_pred − E₀).
    pub max_relative_error: f64,
    /// Twice the distance from E₀ to the lowest peak.
    pub gap: f64,
    /// Twice the smallest non-zero |E − E₀| of the whole flake, edge states included.
    pub edge_gap: f64,
}

/// Landau-like levels of a deformed flake read off the core density of
/// states, so that edge states do not enter.
pub fn level_peaks(lattice: &HexLattice, params: &HexParams, protocol: &PeakProtocol) -> Result<LevelPeaks> {
    if !(params.omega > 0.0) {
        return Err(HexError::InvalidParams("level peaks need ω > 0".into()));
    }
    if !(protocol.smearing > 0.0 && protocol.grid_step > 0.0 && protocol.grid_end > protocol.grid_start) {
        return Err(HexError::InvalidParams(format!("bad peak protocol {protocol:?}")));
    }
    let blocks = lattice.geometry.bipartite_blocks()?;
    check_size(blocks.a_sites.len())?;
    let gram = &blocks.pi * blocks.pi.transpose();
    let (squares, vectors) = eigh_real(&gram, true)?;
    let vectors = vectors.unwrap_or_else(|| Mat::zeros(0, 0));
    let (e0, m, omega) = (params.offset, params.mass_split, params.omega);

    let core_radius = (protocol.core_fraction * lattice.radius as f64).floor() as i32;
    let core: Vec<usize> = blocks
        .a_sites
        .iter()
        .enumerate()
        .filter(|(_, &site)| lattice.labels[site].hex_norm() <= core_radius)
        .map(|(row, _)| row)
        .collect();
    let scaled: Vec<f64> = squares.iter().map(|s| (s.max(0.0) / omega).sqrt()).collect();
    let weights: Vec<f64> = (0..squares.len())
        .map(|k| core.iter().map(|&r| vectors[(r, k)].powi(2)).sum())
        .collect();

    let steps = ((protocol.grid_end - protocol.grid_start) / protocol.grid_step).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|s| protocol.grid_start + s as f64 * protocol.grid_step).collect();
    let reach = 8.0 * protocol.smearing;
    let density: Vec<f64> = grid
        .iter()
        .map(|&g| {
            scaled
                .iter()
                .zip(&weights)
                .filter(|(x, _)| (**x - g).abs() < reach)
                .map(|(x, w)| w * (-0.5 * ((g - x) / protocol.smearing).powi(2)).exp())
                .sum()
        })
        .collect();
    let mut peaks: Vec<usize> = (1..grid.len() - 1)
        .filter(|&p| density[p] > density[p - 1] && density[p] >= density[p + 1])
        .collect();
    peaks.sort_by(|&a, &b| density[b].total_cmp(&density[a]).then(a.cmp(&b)));
    peaks.truncate(protocol.count);
    peaks.sort_unstable();

    let levels: Vec<f64> = peaks
        .iter()
        .map(|&p| e0 + (m * m + omega * grid[p] * grid[p]).sqrt())
        .collect();
    let predicted: Vec<f64> = (0..levels.len())
        .map(|n| e0 + (omega * (n + 1) as f64 + m * m).sqrt())
        .collect();
    let max_relative_error = levels
        .iter()
        .zip(&predicted)
        .map(|(e, p)| (e - p).abs() / (p - e0))
        .fold(0.0, f64::max);
    let gap = 2.0 * (levels.first().copied().unwrap_or(f64::NAN) - e0);
    let edge_gap = 2.0
        * squares
            .iter()
            .filter(|s| **s > 1e-12 * omega)
            .map(|s| (m * m + s).sqrt())
            .fold(f64::INFINITY, f64::min);
    Ok(LevelPeaks {
        levels,
        predicted,
        max_relative_error,
        gap,
        edge_gap,
    })
}
