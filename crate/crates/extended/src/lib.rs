//! The oscillator coupled to an isospin doublet through
//! (A + σ₃B)(T₊a + T₋a† + γT₃), in one and three dimensions.

pub mod blocks;
pub mod dynamics;
pub mod model;

use dmolab_opkit::OpkitError;
use thiserror::Error;

pub use blocks::{block_4x4_1d, block_4x4_3d, block_basis_1d, BlockState, SectorBlock};
pub use dynamics::{
    dynamics_run, purity_entropy, reduced_density, resonance_scan, resonance_scan_with, Branch,
    InitialState, Sample, ScanPoint, SubsystemPartition, TimeSeries,
};
pub use model::{ExtendedSystem, SectorKey};

#[derive(Debug, Error)]
pub enum ExtendedError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid quantum numbers: {0}")]
    Label(String),
    #[error("cutoff {cutoff} is below the minimum {minimum}")]
    CutoffTooSmall { cutoff: usize, minimum: usize },
    #[error(transparent)]
    Operator(#[from] OpkitError),
}

pub type Result<T> = std::result::Result<T, ExtendedError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedDim {
    One,
    Three,
}

impl ExtendedDim {
    pub fn from_number(d: usize) -> Result<Self> {
        match d {
            1 => Ok(ExtendedDim::One),
            3 => Ok(ExtendedDim::Three),
            other => Err(ExtendedError::InvalidParams(format!(
                "the isospin extension is built in 1 or 3 dimensions, not {other}"
            ))),
        }
    }
}

/// Couplings of the extension. `scalar` multiplies the identity and
/// `weighted` multiplies σ₃ in front of the isospin field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedParams {
    pub mass: f64,
    pub gamma: f64,
    pub scalar: f64,
    pub weighted: f64,
    pub dimension: ExtendedDim,
}

impl ExtendedParams {
    pub fn new(mass: f64, gamma: f64, scalar: f64, weighted: f64, dimension: ExtendedDim) -> Result<Self> {
        for (name, v) in [("mass", mass), ("gamma", gamma), ("A", scalar), ("B", weighted)] {
            if !v.is_finite() {
                return Err(ExtendedError::InvalidParams(format!("{name} = {v} is not finite")));
            }
        }
        Ok(ExtendedParams {
            mass,
            gamma,
            scalar,
            weighted,
            dimension,
        })
    }

    /// (A, B) = (1, 0): two two-level systems sharing one mode.
    pub fn double_jaynes_cummings(mass: f64, gamma: f64) -> Result<Self> {
        Self::new(mass, gamma, 1.0, 0.0, ExtendedDim::One)
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        ExtendedParams { gamma, ..self }
    }

    pub fn is_coupled(&self) -> bool {
        self.scalar != 0.0 || self.weighted != 0.0
    }
}
