//! Truncated-basis construction of the oscillator hamiltonians.
//!
//! Basis layout: *-spin first, then (3D only) the Pauli spin, then one Fock
//! factor holding d Cartesian modes with total quanta ≤ cutoff.

use dmolab_opkit::{
    c64, diagonalize, embed_spin, make_chiral_pair, make_ladder, total_quanta_operator, BasisSpec,
    Factor, OperatorMatrix, Pauli, Spin, SpectrumResult,
};

use crate::{Dimension, DmoError, DmoParams, Result};

pub const STAR: usize = 0;
pub const SPIN: usize = 1;

/// Safe sectors needed before a cutoff is accepted.
pub const MIN_SAFE_SECTORS: usize = 5;

#[derive(Clone, Debug)]
pub struct DmoSystem {
    params: DmoParams,
    cutoff: usize,
    basis: BasisSpec,
    coupling: OperatorMatrix,
    hamiltonian: OperatorMatrix,
}

impl DmoSystem {
    pub fn build(params: DmoParams, cutoff: usize) -> Result<Self> {
        let dim = params.dimension().number();
        let mut factors = vec![Factor::Spin];
        if params.dimension() == Dimension::Three {
            factors.push(Factor::Spin);
        }
        factors.push(Factor::Fock { cutoff, modes: dim });
        let basis = BasisSpec::new(factors)?;
        let root_w = params.omega().sqrt();
        let coupling = match params.dimension() {
            Dimension::One => make_ladder(&basis, 0)?.scale_real(root_w),
            Dimension::Two => {
                let (right, _) = make_chiral_pair(&basis, 0, 1, std::f64::consts::FRAC_1_SQRT_2)?;
                right.scale_real(params.coupling_2d())
            }
            Dimension::Three => sigma_dot_ladder(&basis)?.scale_real(root_w),
        };
        let raise = embed_spin(&basis, STAR, Pauli::Raise)?;
        let kinetic = &raise * &coupling;
        let mass = embed_spin(&basis, STAR, Pauli::Z)?.scale_real(params.mass());
        let hamiltonian = &(&kinetic + &kinetic.adjoint()) + &mass;
        Ok(DmoSystem {
            params,
            cutoff,
            basis,
            coupling,
            hamiltonian,
        })
    }

    pub fn params(&self) -> &DmoParams {
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

    /// The operator X in H = Σ₊X + Σ₋X† + mΣ₃.
    pub fn coupling(&self) -> &OperatorMatrix {
        &self.coupling
    }

    pub fn star(&self, which: Pauli) -> OperatorMatrix {
        embed_spin(&self.basis, STAR, which).expect("*-spin factor is always present")
    }

    /// Quanta of the lower-component member of the sector holding `index`.
    /// H conserves N + Σ₃/2, so this labels its invariant blocks.
    pub fn sector_quanta(&self, index: usize) -> usize {
        let n = self.basis.total_quanta(index);
        match self.basis.spin(index, STAR) {
            Spin::Up => n + 1,
            Spin::Down => n,
        }
    }

    /// Indices of complete sectors whose quanta stay ≤ cutoff − buffer.
    pub fn safe_indices(&self, buffer: usize) -> Vec<usize> {
        let limit = self.cutoff.saturating_sub(buffer);
        if buffer > self.cutoff {
            return Vec::new();
        }
        self.basis.select(|i| self.sector_quanta(i) <= limit)
    }

    /// I = N + Σ₃/2, diagonal in the basis.
    pub fn invariant(&self) -> OperatorMatrix {
        &total_quanta_operator(&self.basis) + &self.star(Pauli::Z).scale_real(0.5)
    }

    /// Right and left unit-normalized chiral operators (2D only).
    pub fn chiral_pair(&self) -> Result<(OperatorMatrix, OperatorMatrix)> {
        self.require(Dimension::Two)?;
        Ok(make_chiral_pair(
            &self.basis,
            0,
            1,
            std::f64::consts::FRAC_1_SQRT_2,
        )?)
    }

    /// I⁽²⁾ = b_r b_r† + σ₃/2.
    pub fn invariant_2d(&self) -> Result<OperatorMatrix> {
        let (right, _) = self.chiral_pair()?;
        Ok(&(&right * &right.adjoint()) + &self.star(Pauli::Z).scale_real(0.5))
    }

    /// J₃ = b_r b_r† − b_l b_l† + σ₃/2.
    pub fn angular_momentum_2d(&self) -> Result<OperatorMatrix> {
        let (right, left) = self.chiral_pair()?;
        let chiral = &(&right * &right.adjoint()) - &(&left * &left.adjoint());
        Ok(&chiral + &self.star(Pauli::Z).scale_real(0.5))
    }

    /// Cartesian components of L = −i a† × a (3D only).
    pub fn orbital_angular_momentum(&self) -> Result<[OperatorMatrix; 3]> {
        self.require(Dimension::Three)?;
        let a: Vec<OperatorMatrix> = (0..3)
            .map(|k| make_ladder(&self.basis, k))
            .collect::<std::result::Result<_, _>>()?;
        let component = |i: usize, j: usize| {
            let t = &(&a[i].adjoint() * &a[j]) - &(&a[j].adjoint() * &a[i]);
            t.scale(c64::new(0.0, -1.0))
        };
        Ok([component(1, 2), component(2, 0), component(0, 1)])
    }

    /// σ·L with σ acting on the Pauli spin factor.
    pub fn spin_orbit(&self) -> Result<OperatorMatrix> {
        let l = self.orbital_angular_momentum()?;
        let mut total = OperatorMatrix::zeros(self.basis.total_dim());
        for (which, lk) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().zip(&l) {
            total = &total + &(&embed_spin(&self.basis, SPIN, which)? * lk);
        }
        Ok(total)
    }

    /// K = Σ₃(σ·L + 1), the conserved spin-orbit operator of the 3D oscillator.
    pub fn spin_orbit_invariant(&self) -> Result<OperatorMatrix> {
        let k = &self.spin_orbit()? + &OperatorMatrix::identity(self.basis.total_dim());
        Ok(&self.star(Pauli::Z) * &k)
    }

    /// (σ·a)†(σ·a) + Σ₃/2 taken literally; not conserved (see tests).
    pub fn literal_primed_invariant(&self) -> Result<OperatorMatrix> {
        self.require(Dimension::Three)?;
        let x = sigma_dot_ladder(&self.basis)?;
        Ok(&(&x.adjoint() * &x) + &self.star(Pauli::Z).scale_real(0.5))
    }

    /// Σ₊Σ₋XX† + Σ₋Σ₊X†X, equal to H² − m² on untruncated states.
    pub fn squared_kinetic(&self) -> OperatorMatrix {
        let up = &self.star(Pauli::Raise) * &self.star(Pauli::Lower);
        let down = &self.star(Pauli::Lower) * &self.star(Pauli::Raise);
        let x = &self.coupling;
        &(&up * &(x * &x.adjoint())) + &(&down * &(&x.adjoint() * x))
    }

    fn require(&self, d: Dimension) -> Result<()> {
        if self.params.dimension() == d {
            Ok(())
        } else {
            Err(DmoError::InvalidParams(format!(
                "operation needs dimension {d}, system has {}",
                self.params.dimension()
            )))
        }
    }
}

/// σ·a on a basis whose factor `SPIN` is the Pauli spin and whose first
/// three modes are Cartesian.
pub fn sigma_dot_ladder(basis: &BasisSpec) -> Result<OperatorMatrix> {
    let mut total = OperatorMatrix::zeros(basis.total_dim());
    for (k, which) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
        total = &total + &(&embed_spin(basis, SPIN, which)? * &make_ladder(basis, k)?);
    }
    Ok(total)
}

/// Smallest cutoff accepted by `numeric_spectrum` at the given buffer.
pub fn minimum_cutoff(buffer: usize) -> usize {
    MIN_SAFE_SECTORS + buffer
}

/// Sorted eigenvalues of H restricted to its safe sectors.
pub fn numeric_spectrum(params: &DmoParams, cutoff: usize, buffer: usize) -> Result<SpectrumResult> {
    let minimum = minimum_cutoff(buffer);
    if cutoff < minimum {
        return Err(DmoError::CutoffTooSmall { cutoff, minimum });
    }
    let system = DmoSystem::build(*params, cutoff)?;
    let safe = system.safe_indices(buffer);
    Ok(diagonalize(&system.hamiltonian().restrict(&safe), false)?)
}
