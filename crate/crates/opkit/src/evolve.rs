use faer::c64;

use crate::error::{OpkitError, Result};
use crate::operator::OperatorMatrix;
use crate::spectrum::{diagonalize, SpectrumResult};

pub const NORM_TOL: f64 = 1e-10;

pub fn norm(psi: &[c64]) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(phi: &[c64], psi: &[c64]) -> c64 {
    phi.iter().zip(psi).map(|(a, b)| a.conj() * b).sum()
}

pub fn ensure_normalized(psi: &[c64]) -> Result<()> {
    let n = norm(psi);
    if (n - 1.0).abs() > NORM_TOL {
        Err(OpkitError::Unnormalized(n))
    } else {
        Ok(())
    }
}

/// Spectral propagator ψ(t) = Σ_k e^{−iE_k t} ⟨v_k|ψ0⟩ v_k.
#[derive(Clone, Debug)]
pub struct Propagator {
    spectrum: SpectrumResult,
}

impl Propagator {
    pub fn new(h: &OperatorMatrix) -> Result<Self> {
        Ok(Propagator {
            spectrum: diagonalize(h, true)?,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    /// Overlaps ⟨v_k|ψ0⟩.
    pub fn project(&self, psi0: &[c64]) -> Result<Vec<c64>> {
        let v = self.vectors();
        if psi0.len() != v.nrows() {
            return Err(OpkitError::DimensionMismatch {
                left: v.nrows(),
                right: psi0.len(),
            });
        }
        Ok((0..v.ncols())
            .map(|k| (0..v.nrows()).map(|i| v[(i, k)].conj() * psi0[i]).sum())
            .collect())
    }

    pub fn state_at(&self, overlaps: &[c64], t: f64) -> Vec<c64> {
        let v = self.vectors();
        let phased: Vec<c64> = overlaps
            .iter()
            .zip(&self.spectrum.eigenvalues)
            .map(|(c, &e)| c * c64::cis(-e * t))
            .collect();
        (0..v.nrows())
            .map(|i| (0..v.ncols()).map(|k| v[(i, k)] * phased[k]).sum())
            .collect()
    }

    fn vectors(&self) -> &faer::Mat<c64> {
        self.spectrum
            .eigenvectors
            .as_ref()
            .expect("propagator always stores eigenvectors")
    }
}

/// Exact evolution of a normalized state over a time grid.
pub fn evolve(h: &OperatorMatrix, psi0: &[c64], times: &[f64]) -> Result<Vec<Vec<c64>>> {
    ensure_normalized(psi0)?;
    let propagator = Propagator::new(h)?;
    let overlaps = propagator.project(psi0)?;
    Ok(times
        .iter()
        .map(|&t| propagator.state_at(&overlaps, t))
        .collect())
}
