//! Tight-binding chain of two resonator types: H = E₀ + σ₃M + σ₊Π + σ₋Π†.
//!
//! The periodic chain has Bloch bands; letting inter-cell couplings fall off
//! as Δ_n² = Δ² − (n − origin)ω turns Π into a ladder with [Π, Π†] = ω in the
//! bulk, so the levels become E₀ ± √(ωn + M²).

mod bands;
mod geometry;
mod levels;

pub use bands::{bloch_dispersion, bloch_momenta, coupling_from_distance, distance_from_coupling};
pub use geometry::{deform_chain, periodic_chain, Boundary, CELL_SPACING};
pub use levels::{
    diagonalize_chain, ground_state_envelope, level_law, level_law_sweep, level_law_sweep_with,
    Envelope, LevelLawReport,
};

use dmolab_opkit::lattice::GeometryError;
use dmolab_opkit::OpkitError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("distance must be non-negative, got {0}")]
    NegativeDistance(f64),
    #[error("coupling must be in (0, Δ], got {0}")]
    CouplingOutOfRange(f64),
    #[error("{cells} cells from origin {origin} exceed n_max = {n_max}")]
    TooManyCells { cells: usize, origin: usize, n_max: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Operator(#[from] OpkitError),
}

pub type Result<T> = std::result::Result<T, ChainError>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainParams {
    /// On-site energy of the A resonators.
    pub alpha: f64,
    /// On-site energy of the B resonators.
    pub beta: f64,
    /// Nearest-neighbour coupling at zero extra distance.
    pub delta: f64,
    /// Decay length of the coupling with distance.
    pub decay_length: f64,
    /// Lattice period.
    pub period: f64,
    /// Number of A–B cells.
    pub cells: usize,
    /// Commutator constant of the deformation; 0 is the periodic chain.
    pub omega: f64,
    /// Inter-cell bond whose coupling stays Δ.
    pub origin: usize,
}

impl ChainParams {
    pub fn new(alpha: f64, beta: f64, delta: f64, cells: usize, omega: f64) -> Result<Self> {
        ChainParams {
            alpha,
            beta,
            delta,
            decay_length: 1.0,
            period: 1.0,
            cells,
            omega,
            origin: 0,
        }
        .validated()
    }

    /// Site energies E₀ ± M.
    pub fn from_mass_split(offset: f64, mass_split: f64, delta: f64, cells: usize, omega: f64) -> Result<Self> {
        Self::new(offset + mass_split, offset - mass_split, delta, cells, omega)
    }

    pub fn validated(self) -> Result<Self> {
        let finite = [self.alpha, self.beta, self.delta, self.decay_length, self.period, self.omega]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(ChainError::InvalidParams("all parameters must be finite".into()));
        }
        if !(self.delta > 0.0 && self.decay_length > 0.0 && self.period > 0.0) {
            return Err(ChainError::InvalidParams(format!(
                "need Δ, Λ, λ > 0, got {}, {}, {}",
                self.delta, self.decay_length, self.period
            )));
        }
        if self.omega < 0.0 {
            return Err(ChainError::InvalidParams(format!("ω must be >= 0, got {}", self.omega)));
        }
        if self.cells == 0 {
            return Err(ChainError::InvalidParams("need at least one cell".into()));
        }
        Ok(self)
    }

    pub fn with_origin(self, origin: usize) -> Self {
        ChainParams { origin, ..self }
    }

    /// Origin at the middle inter-cell bond.
    pub fn centered(self) -> Self {
        self.with_origin(self.cells / 2)
    }

    pub fn with_omega(self, omega: f64) -> Self {
        ChainParams { omega, ..self }
    }

    pub fn mass_split(&self) -> f64 {
        0.5 * (self.alpha - self.beta)
    }

    pub fn offset(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }

    /// ⌊Δ²/ω⌋, the number of bonds before the coupling vanishes; None when ω = 0.
    pub fn n_max(&self) -> Option<usize> {
        (self.omega > 0.0).then(|| (self.delta * self.delta / self.omega).floor() as usize)
    }
}
