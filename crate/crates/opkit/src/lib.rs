//! Operator kernel: truncated Fock and spin factors, dense Hermitian
//! eigensolves, exact propagation, and tight-binding geometries.

pub mod basis;
pub mod error;
pub mod evolve;
pub mod lattice;
pub mod operator;
pub mod par;
pub mod spectrum;

pub use basis::{BasisSpec, Factor, FactorState, Spin};
pub use error::{OpkitError, Result};
pub use evolve::{evolve, inner, norm, Propagator};
pub use faer::{c64, Mat};
pub use lattice::{Coupling, LatticeGeometry, Site, Sublattice};
pub use operator::{
    embed_spin, make_chiral_pair, make_ladder, make_number, total_quanta_operator, OperatorMatrix,
    Pauli,
};
pub use spectrum::{diagonalize, eigh_complex, eigh_real, SpectrumResult};

/// Default number of quanta kept between the safe zone and the cutoff.
pub const DEFAULT_BUFFER: usize = 2;

/// Fixed-width real formatting used by every CSV artifact: 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}
