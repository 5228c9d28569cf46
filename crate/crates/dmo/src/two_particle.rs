use crate::{DmoError, Result};

/// Parity of a two-particle state relative to (−)^j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParityClass {
    /// P = (−)^j
    Natural,
    /// P = −(−)^j
    Unnatural,
}

/// Levels {−E, 0, +E} of the interacting two-particle oscillator with unit
/// masses, for total quanta N and total spin s.
pub fn two_particle_spectrum(
    omega: f64,
    quanta: usize,
    spin: u8,
    parity: ParityClass,
) -> Result<[f64; 3]> {
    let shift = match (spin, parity) {
        (0, ParityClass::Natural) => 0,
        (1, ParityClass::Natural) => 2,
        (1, ParityClass::Unnatural) => 1,
        _ => {
            return Err(DmoError::Label(format!(
                "no two-particle level with s = {spin} and parity {parity:?}"
            )))
        }
    };
    let e = 2.0 * (1.0 + omega * (quanta + shift) as f64).sqrt();
    Ok([-e, 0.0, e])
}
