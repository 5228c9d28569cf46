//! The free Dirac–Moshinsky oscillator.
//!
//! Conventions: ħ = c = 1; the *-spin factor has |+⟩ (upper component) at
//! local index 0; every hamiltonian has the form Σ₊X + Σ₋X† + mΣ₃ where X
//! lowers the oscillator quanta by one.

pub mod analytic;
pub mod checks;
pub mod halfint;
pub mod numeric;
pub mod two_particle;

use std::fmt;

use dmolab_opkit::OpkitError;
use thiserror::Error;

pub use analytic::{analytic_spectrum, block_matrix_3d, Level, LevelLabel};
pub use checks::{
    fw_equivalence_check, fw_free_check, nonrelativistic_limit_check, susy_anticommutator_check,
    SusyReport,
};
pub use halfint::HalfInt;
pub use numeric::{numeric_spectrum, DmoSystem};
pub use two_particle::{two_particle_spectrum, ParityClass};

#[derive(Debug, Error)]
pub enum DmoError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("inconsistent labels: {0}")]
    Label(String),
    #[error("cutoff {cutoff} too small, need at least {minimum}")]
    CutoffTooSmall { cutoff: usize, minimum: usize },
    #[error(transparent)]
    Operator(#[from] OpkitError),
}

pub type Result<T> = std::result::Result<T, DmoError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    One,
    Two,
    Three,
}

impl Dimension {
    pub fn from_number(d: usize) -> Result<Self> {
        match d {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(DmoError::InvalidParams(format!("dimension {d} not in 1..=3"))),
        }
    }

    pub fn number(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Mass and frequency of one oscillator. In 2D the chiral coupling is g = √ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DmoParams {
    mass: f64,
    omega: f64,
    dimension: Dimension,
}

impl DmoParams {
    pub fn new(mass: f64, omega: f64, dimension: Dimension) -> Result<Self> {
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(DmoError::InvalidParams(format!("mass must be >= 0, got {mass}")));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(DmoError::InvalidParams(format!("omega must be > 0, got {omega}")));
        }
        Ok(DmoParams {
            mass,
            omega,
            dimension,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn coupling_2d(&self) -> f64 {
        self.omega.sqrt()
    }
}
