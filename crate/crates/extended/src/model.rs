//! Truncated-basis hamiltonian and its conserved sectors.

use std::collections::BTreeMap;

use dmolab_opkit::{
    diagonalize, embed_spin, make_ladder, BasisSpec, Factor, OperatorMatrix, Pauli,
};

use crate::{ExtendedDim, ExtendedError, ExtendedParams, Result};

/// *-spin factor (Σ in 3D, σ in 1D).
pub const STAR: usize = 0;
pub const ISOSPIN: usize = 1;
/// Pauli spin factor, present in 3D only.
pub const SPIN: usize = 2;

/// 3D oscillator modes in the circular basis: a₊ and a₋ carry L_z = ±1.
pub const MODE_PLUS: usize = 0;
pub const MODE_MINUS: usize = 1;
pub const MODE_Z: usize = 2;

/// Labels of a block of H: 2I and, in 3D, 2J_z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorKey {
    pub twice_invariant: i64,
    pub twice_jz: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct ExtendedSystem {
    params: ExtendedParams,
    cutoff: usize,
    basis: BasisSpec,
    coupling: OperatorMatrix,
    hamiltonian: OperatorMatrix,
}

impl ExtendedSystem {
    /// Basis [σ, τ, Fock] in 1D and [Σ, τ, σ, Fock(3 modes)] in 3D.
    pub fn build(params: ExtendedParams, cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(ExtendedError::CutoffTooSmall { cutoff, minimum: 1 });
        }
        let basis = match params.dimension {
            ExtendedDim::One => BasisSpec::new(vec![
                Factor::Spin,
                Factor::Spin,
                Factor::Fock { cutoff, modes: 1 },
            ])?,
            ExtendedDim::Three => BasisSpec::new(vec![
                Factor::Spin,
                Factor::Spin,
                Factor::Spin,
                Factor::Fock { cutoff, modes: 3 },
            ])?,
        };
        let coupling = match params.dimension {
            ExtendedDim::One => make_ladder(&basis, 0)?,
            ExtendedDim::Three => circular_sigma_dot_ladder(&basis)?,
        };
        let dim = basis.total_dim();
        let star_raise = embed_spin(&basis, STAR, Pauli::Raise)?;
        let star_z = embed_spin(&basis, STAR, Pauli::Z)?;
        let iso_raise = embed_spin(&basis, ISOSPIN, Pauli::Raise)?;
        let iso_z = embed_spin(&basis, ISOSPIN, Pauli::Z)?;

        let kinetic = &star_raise * &coupling;
        let free = &(&kinetic + &kinetic.adjoint()) + &star_z.scale_real(params.mass);
        let iso_hop = &iso_raise * &coupling;
        let field = &(&iso_hop + &iso_hop.adjoint()) + &iso_z.scale_real(params.gamma);
        let prefactor = &OperatorMatrix::identity(dim).scale_real(params.scalar)
            + &star_z.scale_real(params.weighted);
        let hamiltonian = &free + &(&prefactor * &field);
        Ok(ExtendedSystem {
            params,
            cutoff,
            basis,
            coupling,
            hamiltonian,
        })
    }

    pub fn params(&self) -> &ExtendedParams {
        &self.params
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &OperatorMatrix {
        &self.hamiltonian
    }

    /// a in 1D, σ·a in 3D.
    pub fn coupling(&self) -> &OperatorMatrix {
        &self.coupling
    }

    /// 2I for I = a†·a + Σ₃/2 + T₃/2.
    pub fn twice_invariant_of(&self, index: usize) -> i64 {
        let star = self.basis.spin(index, STAR).sign() as i64;
        let iso = self.basis.spin(index, ISOSPIN).sign() as i64;
        2 * self.basis.total_quanta(index) as i64 + star + iso
    }

    /// 2J_z = 2(n₊ − n₋) + σ₃ in 3D.
    pub fn twice_jz_of(&self, index: usize) -> Option<i64> {
        match self.params.dimension {
            ExtendedDim::One => None,
            ExtendedDim::Three => {
                let plus = self.basis.occupation(index, MODE_PLUS) as i64;
                let minus = self.basis.occupation(index, MODE_MINUS) as i64;
                let spin = self.basis.spin(index, SPIN).sign() as i64;
                Some(2 * (plus - minus) + spin)
            }
        }
    }

    pub fn sector_of(&self, index: usize) -> SectorKey {
        SectorKey {
            twice_invariant: self.twice_invariant_of(index),
            twice_jz: self.twice_jz_of(index),
        }
    }

    pub fn invariant(&self) -> OperatorMatrix {
        let values: Vec<f64> = (0..self.basis.total_dim())
            .map(|k| 0.5 * self.twice_invariant_of(k) as f64)
            .collect();
        OperatorMatrix::diagonal(&values)
    }

    /// J_z as a diagonal operator (3D only).
    pub fn jz(&self) -> Result<OperatorMatrix> {
        let values = (0..self.basis.total_dim())
            .map(|k| self.twice_jz_of(k).map(|v| 0.5 * v as f64))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| ExtendedError::InvalidParams("J_z is defined in 3D".into()))?;
        Ok(OperatorMatrix::diagonal(&values))
    }

    /// Largest Fock occupation reached inside the sector of `index`; the
    /// Σ = τ = − member carries I + 1 quanta.
    fn sector_top(&self, index: usize) -> i64 {
        self.twice_invariant_of(index) / 2 + 1
    }

    /// The sector of `index` is complete (no member cut away) when its top
    /// state fits under the cutoff.
    pub fn is_exact(&self, index: usize) -> bool {
        self.sector_top(index) <= self.cutoff as i64
    }

    /// Indices of complete sectors at least `buffer` quanta below the cutoff.
    pub fn safe_indices(&self, buffer: usize) -> Vec<usize> {
        let limit = self.cutoff as i64 - buffer as i64;
        self.basis.select(|k| self.sector_top(k) <= limit)
    }

    /// Index sets of all sectors, keyed and ordered by their labels.
    pub fn sectors(&self) -> BTreeMap<SectorKey, Vec<usize>> {
        let mut out: BTreeMap<SectorKey, Vec<usize>> = BTreeMap::new();
        for k in 0..self.basis.total_dim() {
            out.entry(self.sector_of(k)).or_default().push(k);
        }
        out
    }

    /// Members of one sector.
    pub fn sector_indices(&self, key: SectorKey) -> Vec<usize> {
        self.basis.select(|k| self.sector_of(k) == key)
    }

    /// Eigenvalues of H restricted to a sector, ascending.
    pub fn sector_spectrum(&self, indices: &[usize]) -> Result<Vec<f64>> {
        Ok(diagonalize(&self.hamiltonian.restrict(indices), false)?.eigenvalues)
    }

    /// Spectrum of H on the safe subspace, sector by sector.
    pub fn safe_spectrum(&self, buffer: usize) -> Result<Vec<f64>> {
        let safe = self.safe_indices(buffer);
        let mut all = Vec::with_capacity(safe.len());
        for (_, indices) in self.sectors() {
            if indices.iter().all(|k| safe.binary_search(k).is_ok()) {
                all.extend(self.sector_spectrum(&indices)?);
            }
        }
        all.sort_by(f64::total_cmp);
        Ok(all)
    }

    /// Complete, safe sectors with fewer than four states, with their spectra.
    /// In 1D these are the bottom of the ladder that no quadruplet covers.
    pub fn exceptional_sectors(&self, buffer: usize) -> Result<Vec<(SectorKey, Vec<f64>)>> {
        let safe = self.safe_indices(buffer);
        let mut out = Vec::new();
        for (key, indices) in self.sectors() {
            if indices.len() < 4 && indices.iter().all(|k| safe.binary_search(k).is_ok()) {
                out.push((key, self.sector_spectrum(&indices)?));
            }
        }
        Ok(out)
    }
}

/// σ·a = σ₃a_z + √2(σ₊a₊ + σ₋a₋) with a₊ = (a_x − i a_y)/√2 and
/// a₋ = (a_x + i a_y)/√2, a real operator in this basis.
fn circular_sigma_dot_ladder(basis: &BasisSpec) -> Result<OperatorMatrix> {
    let root2 = std::f64::consts::SQRT_2;
    let z = &embed_spin(basis, SPIN, Pauli::Z)? * &make_ladder(basis, MODE_Z)?;
    let up = &embed_spin(basis, SPIN, Pauli::Raise)? * &make_ladder(basis, MODE_PLUS)?;
    let down = &embed_spin(basis, SPIN, Pauli::Lower)? * &make_ladder(basis, MODE_MINUS)?;
    Ok(&z + &(&up + &down).scale_real(root2))
}
