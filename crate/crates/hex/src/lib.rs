//! Honeycomb lattice of two resonator types.
//!
//! A sites sit at λ(i a₁ + j a₂) and B sites at A + λb₁. Bloch bands carry
//! the phase sum Σ e^{iλk·bᵢ}; a deformation of the b₂ and b₃ bonds makes the
//! A→B hopping a ladder with [Π, Π†] = ω, so levels follow E₀ ± √(ω(N+1) + M²).

mod bands;
mod lattice;
mod levels;

pub use bands::{
    conic_analysis, dirac_points, dispersion_surface, dispersion_surface_with, hex_dispersion,
    ideal_dirac_points, locate_degeneracy, phase_sum, second_neighbor_dispersion, second_neighbor_form,
    ConicSection, SurfacePoint,
};
pub use lattice::{
    build_hex_lattice, build_hex_torus, deform_hex_lattice, ladder_commutator, max_feasible_radius,
    BondKind, CommutatorReport, HexLattice, Label,
};
pub use levels::{diagonalize_hex, level_peaks, LevelPeaks, PeakProtocol, MAX_DENSE_SITES};

use dmolab_opkit::lattice::GeometryError;
use dmolab_opkit::OpkitError;
use thiserror::Error;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Nearest-neighbour bond vectors b₁, b₂, b₃ (unit length).
pub const BOND_VECTORS: [[f64; 2]; 3] = [[0.0, 1.0], [-SQRT3 / 2.0, -0.5], [SQRT3 / 2.0, -0.5]];

/// Second-neighbour vectors a₁, a₂, a₃; a₁ and a₂ span the lattice.
pub const LATTICE_VECTORS: [[f64; 2]; 3] = [[SQRT3, 0.0], [-SQRT3 / 2.0, 1.5], [-SQRT3 / 2.0, -1.5]];

#[derive(Debug, Error)]
pub enum HexError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("coupling squared turns non-positive at radius {radius}; largest feasible radius is {max_radius}")]
    RadiusTooLarge { radius: usize, max_radius: usize },
    #[error("degeneracy search from ({0}, {1}) did not converge")]
    NoDegeneracy(f64, f64),
    #[error("site count {sites} exceeds the limit {limit}")]
    TooLarge { sites: usize, limit: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Operator(#[from] OpkitError),
}

pub type Result<T> = std::result::Result<T, HexError>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HexParams {
    pub delta: f64,
    /// Second-neighbour coupling Δ′.
    pub delta_prime: f64,
    pub decay_length: f64,
    /// Length scale λ of the phases and positions.
    pub period: f64,
    pub mass_split: f64,
    pub offset: f64,
    pub omega: f64,
    /// Flake radius in hexagonal cells.
    pub radius: usize,
    /// Share of the ω increment carried by the b₂ bonds; b₃ takes the rest.
    pub angle_split: f64,
}

impl Default for HexParams {
    fn default() -> Self {
        HexParams {
            delta: 1.0,
            delta_prime: 0.0,
            decay_length: 1.0,
            period: 1.0,
            mass_split: 0.0,
            offset: 0.0,
            omega: 0.0,
            radius: 1,
            angle_split: 0.5,
        }
    }
}

impl HexParams {
    pub fn validated(self) -> Result<Self> {
        let values = [
            self.delta,
            self.delta_prime,
            self.decay_length,
            self.period,
            self.mass_split,
            self.offset,
            self.omega,
            self.angle_split,
        ];
        if !values.iter().all(|x| x.is_finite()) {
            return Err(HexError::InvalidParams("all parameters must be finite".into()));
        }
        if !(self.delta > 0.0 && self.decay_length > 0.0 && self.period > 0.0) {
            return Err(HexError::InvalidParams(format!(
                "need Δ, Λ, λ > 0, got {}, {}, {}",
                self.delta, self.decay_length, self.period
            )));
        }
        if self.delta_prime < 0.0 || self.omega < 0.0 {
            return Err(HexError::InvalidParams(format!(
                "need Δ′ >= 0 and ω >= 0, got {} and {}",
                self.delta_prime, self.omega
            )));
        }
        if !(0.0..=1.0).contains(&self.angle_split) {
            return Err(HexError::InvalidParams(format!(
                "angle split must lie in [0, 1], got {}",
                self.angle_split
            )));
        }
        if self.radius == 0 {
            return Err(HexError::InvalidParams("radius must be at least 1".into()));
        }
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.offset + self.mass_split
    }

    pub fn beta(&self) -> f64 {
        self.offset - self.mass_split
    }
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}
