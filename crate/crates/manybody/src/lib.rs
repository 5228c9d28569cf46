//! n Dirac oscillators in one dimension coupled through their relative
//! coordinates: H = √ω[(1 + B) Σᵢ σ₁ⁱ a′ᵢ + h.c.] + m Σᵢ σ₃ⁱ.

use dmolab_opkit::{
    c64, diagonalize, embed_spin, make_ladder, make_number, norm, BasisSpec, Factor, FactorState,
    OpkitError, OperatorMatrix, Pauli, Spin,
};
use thiserror::Error;

/// Largest basis handed to the dense eigensolver.
pub const MAX_DIMENSION: usize = 20_000;

#[derive(Debug, Error)]
pub enum ManyBodyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("basis of dimension {required} exceeds the limit {limit}")]
    TooLarge { required: usize, limit: usize },
    #[error(transparent)]
    Operator(#[from] OpkitError),
}

pub type Result<T> = std::result::Result<T, ManyBodyError>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManyBodyParams {
    pub n_particles: usize,
    pub mass: f64,
    pub omega: f64,
    /// Fock cutoff of every particle mode.
    pub cutoff: usize,
}

impl ManyBodyParams {
    pub fn new(n_particles: usize, mass: f64, omega: f64, cutoff: usize) -> Result<Self> {
        if n_particles < 2 {
            return Err(ManyBodyError::InvalidParams(format!(
                "need at least two particles, got {n_particles}"
            )));
        }
        if !(mass.is_finite() && omega.is_finite() && omega >= 0.0) {
            return Err(ManyBodyError::InvalidParams(format!(
                "mass {mass} and omega {omega} must be finite with omega >= 0"
            )));
        }
        Ok(ManyBodyParams {
            n_particles,
            mass,
            omega,
            cutoff,
        })
    }

    /// 2ⁿ (cutoff + 1)ⁿ, or None on overflow.
    pub fn dimension(&self) -> Option<usize> {
        let per = 2usize.checked_mul(self.cutoff.checked_add(1)?)?;
        per.checked_pow(self.n_particles as u32)
    }
}

/// Matrix in front of the kinetic term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Interaction {
    /// 1 + σ₃¹ ⊗ … ⊗ σ₃ⁿ
    #[default]
    ProductBeta,
    /// plain 1
    Free,
}

#[derive(Clone, Debug)]
pub struct ManyBodySystem {
    params: ManyBodyParams,
    basis: BasisSpec,
    ladders: Vec<OperatorMatrix>,
    kinetic: OperatorMatrix,
    hamiltonian: OperatorMatrix,
}

impl ManyBodySystem {
    /// Spin factors 0..n, then one single-mode Fock factor per particle.
    pub fn build(params: ManyBodyParams, interaction: Interaction) -> Result<Self> {
        let required = params.dimension().unwrap_or(usize::MAX);
        if required > MAX_DIMENSION {
            return Err(ManyBodyError::TooLarge {
                required,
                limit: MAX_DIMENSION,
            });
        }
        let n = params.n_particles;
        let mut factors = vec![Factor::Spin; n];
        factors.extend((0..n).map(|_| Factor::Fock {
            cutoff: params.cutoff,
            modes: 1,
        }));
        let basis = BasisSpec::new(factors)?;
        let dim = basis.total_dim();
        let ladders = (0..n)
            .map(|i| make_ladder(&basis, i))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let relative = relative_modes(&ladders);

        let mut hop = OperatorMatrix::zeros(dim);
        let mut mass = OperatorMatrix::zeros(dim);
        let mut product = OperatorMatrix::identity(dim);
        for i in 0..n {
            let x = embed_spin(&basis, i, Pauli::X)?;
            let z = embed_spin(&basis, i, Pauli::Z)?;
            hop = &hop + &(&x * &relative[i]);
            mass = &mass + &z;
            product = &product * &z;
        }
        let prefactor = match interaction {
            Interaction::ProductBeta => &OperatorMatrix::identity(dim) + &product,
            Interaction::Free => OperatorMatrix::identity(dim),
        };
        let half = &prefactor * &hop;
        let kinetic = (&half + &half.adjoint()).scale_real(params.omega.sqrt());
        let hamiltonian = &kinetic + &mass.scale_real(params.mass);
        Ok(ManyBodySystem {
            params,
            basis,
            ladders,
            kinetic,
            hamiltonian,
        })
    }

    pub fn params(&self) -> &ManyBodyParams {
        &self.params
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn ladders(&self) -> &[OperatorMatrix] {
        &self.ladders
    }

    pub fn relative_modes(&self) -> Vec<OperatorMatrix> {
        relative_modes(&self.ladders)
    }

    pub fn kinetic(&self) -> &OperatorMatrix {
        &self.kinetic
    }

    pub fn hamiltonian(&self) -> &OperatorMatrix {
        &self.hamiltonian
    }

    /// a_cm = Σⱼ aⱼ / √n.
    pub fn center_of_mass(&self) -> OperatorMatrix {
        let n = self.params.n_particles as f64;
        sum(&self.ladders).scale_real(1.0 / n.sqrt())
    }

    /// Jacobi modes b_k = (a₀ + … + a_{k−1} − k a_k)/√(k(k+1)), k = 1..n−1,
    /// orthonormal and orthogonal to the center of mass.
    pub fn jacobi_modes(&self) -> Vec<OperatorMatrix> {
        (1..self.params.n_particles)
            .map(|k| {
                let kf = k as f64;
                let head = sum(&self.ladders[..k]);
                (&head - &self.ladders[k].scale_real(kf)).scale_real(1.0 / (kf * (kf + 1.0)).sqrt())
            })
            .collect()
    }

    /// (−1)^N σ₃¹ ⋯ σ₃ⁿ, conserved by every term of H.
    pub fn parity(&self) -> OperatorMatrix {
        let n = self.params.n_particles;
        let values: Vec<f64> = (0..self.basis.total_dim())
            .map(|k| {
                let spins: f64 = (0..n).map(|i| self.basis.spin(k, i).sign()).product();
                let quanta = self.basis.total_quanta(k);
                if quanta % 2 == 0 {
                    spins
                } else {
                    -spins
                }
            })
            .collect();
        OperatorMatrix::diagonal(&values)
    }

    /// Indices whose every particle mode sits at least `buffer` below the cutoff.
    pub fn safe_indices(&self, buffer: usize) -> Vec<usize> {
        let n = self.params.n_particles;
        let limit = self.params.cutoff.saturating_sub(buffer);
        self.basis
            .select(|k| (0..n).all(|i| self.basis.occupation(k, i) <= limit))
    }

    pub fn center_of_mass_number(&self) -> OperatorMatrix {
        let a = self.center_of_mass();
        &a.adjoint() * &a
    }

    pub fn number(&self, particle: usize) -> Result<OperatorMatrix> {
        Ok(make_number(&self.basis, particle)?)
    }

    /// Product of σ₁ eigenstates with common eigenvalue `sign`, times the
    /// Fock vacuum.
    pub fn aligned_vacuum(&self, sign: Spin) -> Result<Vec<c64>> {
        let n = self.params.n_particles;
        let mut psi = vec![c64::new(0.0, 0.0); self.basis.total_dim()];
        let amplitude = (0.5f64).powf(n as f64 / 2.0);
        for config in 0..(1usize << n) {
            let mut state = Vec::with_capacity(2 * n);
            let mut phase = 1.0;
            for i in 0..n {
                let down = config >> i & 1 == 1;
                state.push(FactorState::Spin(if down { Spin::Down } else { Spin::Up }));
                if down {
                    phase *= sign.sign();
                }
            }
            state.extend((0..n).map(|_| FactorState::Fock(vec![0])));
            psi[self.basis.index_of(&state)?] = c64::new(phase * amplitude, 0.0);
        }
        Ok(psi)
    }

    /// The nest construction: both aligned σ₁ configurations times every
    /// Jacobi Fock state with at most `cutoff` relative quanta and the center
    /// of mass in its ground state.
    pub fn nest_states(&self) -> Result<Vec<Vec<c64>>> {
        let creators: Vec<OperatorMatrix> = self.jacobi_modes().iter().map(|b| b.adjoint()).collect();
        let mut out = Vec::new();
        for sign in [Spin::Up, Spin::Down] {
            let vacuum = self.aligned_vacuum(sign)?;
            for quanta in compositions_up_to(creators.len(), self.params.cutoff) {
                let mut psi = vacuum.clone();
                for (creator, &q) in creators.iter().zip(&quanta) {
                    for _ in 0..q {
                        psi = creator.apply(&psi)?;
                    }
                }
                let nrm = norm(&psi);
                psi.iter_mut().for_each(|x| *x /= nrm);
                out.push(psi);
            }
        }
        Ok(out)
    }
}

/// a′ᵢ = aᵢ − (1/n) Σⱼ aⱼ.
pub fn relative_modes(ladders: &[OperatorMatrix]) -> Vec<OperatorMatrix> {
    let mean = sum(ladders).scale_real(1.0 / ladders.len() as f64);
    ladders.iter().map(|a| a - &mean).collect()
}

fn sum(ops: &[OperatorMatrix]) -> OperatorMatrix {
    ops.iter()
        .skip(1)
        .fold(ops[0].clone(), |acc, op| &acc + op)
}

/// All (q₁, …, q_k) with Σq ≤ total, in lexicographic order.
pub fn compositions_up_to(parts: usize, total: usize) -> Vec<Vec<usize>> {
    fn fill(parts: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == parts {
            out.push(prefix.clone());
            return;
        }
        for q in 0..=left {
            prefix.push(q);
            fill(parts, left - q, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(parts, total, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// 2 × Σ_{Q ≤ cutoff} (compositions of Q into n − 1 relative modes).
pub fn predicted_lower_bound(n_particles: usize, cutoff: usize) -> usize {
    let parts = n_particles - 1;
    2 * (0..=cutoff).map(|q| binomial(q + parts - 1, parts - 1)).sum::<usize>()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NestReport {
    pub cutoff: usize,
    pub n_particles: usize,
    pub omega: f64,
    /// Constructed states with ‖Kψ‖ below the tolerance.
    pub nest_count: usize,
    pub predicted_lower_bound: usize,
    pub max_residual: f64,
}

/// Applies the kinetic operator to every nest state and counts those it
/// annihilates to within `tolerance`.
pub fn cockroach_nest_count(params: &ManyBodyParams, tolerance: f64) -> Result<NestReport> {
    // K scales with √ω, so test on ω = 1 where ω = 0 would pass trivially
    let unit = ManyBodySystem::build(ManyBodyParams { omega: 1.0, ..*params }, Interaction::ProductBeta)?;
    let residuals = unit
        .nest_states()?
        .iter()
        .map(|psi| Ok(norm(&unit.kinetic().apply(psi)?)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(NestReport {
        cutoff: params.cutoff,
        n_particles: params.n_particles,
        omega: params.omega,
        nest_count: residuals.iter().filter(|r| **r < tolerance).count(),
        predicted_lower_bound: predicted_lower_bound(params.n_particles, params.cutoff),
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
    })
}

/// Number of kinetic-operator eigenvalues with |λ| < window on the whole
/// truncated basis.
pub fn kinetic_kernel_dimension(params: &ManyBodyParams, window: f64) -> Result<usize> {
    let system = ManyBodySystem::build(*params, Interaction::ProductBeta)?;
    let e = diagonalize(system.kinetic(), false)?.eigenvalues;
    Ok(e.iter().filter(|x| x.abs() < window).count())
}

/// E(p) − E(−p) for the free two-branch pair; zero for every p.
pub fn opposite_branch_sum(momentum: f64, mass: f64) -> f64 {
    (momentum * momentum + mass * mass).sqrt() - ((-momentum) * (-momentum) + mass * mass).sqrt()
}
