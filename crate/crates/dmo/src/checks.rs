//! Algebraic and spectral consistency checks on the 3D oscillator.

use dmolab_opkit::spectrum::multiset_distance;
use dmolab_opkit::{c64, diagonalize, make_ladder, OperatorMatrix, Pauli};

use crate::numeric::DmoSystem;
use crate::{Dimension, DmoError, DmoParams, HalfInt, Result};

/// Rest energy removed from E and from the oscillator with spin-orbit term,
/// in the convention E² = m² + mω·k with k = 2(N−j)+1 (l = j−½) or
/// 2(N+j)+3 (l = j+½). Returns (relativistic ε, oscillator ε).
pub fn nonrelativistic_limit_check(
    params: &DmoParams,
    j: HalfInt,
    l: usize,
    quanta: usize,
) -> Result<(f64, f64)> {
    if !j.is_half_odd() || j.twice() < 1 {
        return Err(DmoError::Label(format!("j = {j} is not a positive half-odd integer")));
    }
    let twice_l = 2 * l as i64;
    let aligned = match j.twice() - twice_l {
        1 => true,
        -1 => false,
        _ => return Err(DmoError::Label(format!("l = {l} cannot couple to j = {j}"))),
    };
    if quanta < l || (quanta - l) % 2 != 0 {
        return Err(DmoError::Label(format!("N = {quanta} is not reachable with l = {l}")));
    }
    let (m, w) = (params.mass(), params.omega());
    let n = quanta as f64;
    let k = if aligned {
        2.0 * (n - j.value()) + 1.0
    } else {
        2.0 * (n + j.value()) + 3.0
    };
    let gap = m * w * k;
    // E − m = (E² − m²)/(E + m), stable for m ≫ ω
    let relativistic = gap / ((m * m + gap).sqrt() + m);
    let l_dot_s = if aligned {
        0.5 * l as f64
    } else {
        -0.5 * (l as f64 + 1.0)
    };
    let oscillator = w * (n + 1.5) - 1.5 * w - 2.0 * w * l_dot_s;
    Ok((relativistic, oscillator))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SusyReport {
    /// max |{Q_a,Q_b} − δ_ab(H² − m²)| over the safe subspace.
    pub safe_residual: f64,
    /// The same quantity over the whole truncated basis.
    pub full_residual: f64,
}

/// Supercharges Q₁ = (Σ₊X + Σ₋X†)/√2 and Q₂ = −i(Σ₊X − Σ₋X†)/√2 at m = ω = 1.
pub fn susy_anticommutator_check(cutoff: usize, buffer: usize) -> Result<SusyReport> {
    if cutoff < 4 {
        return Err(DmoError::CutoffTooSmall { cutoff, minimum: 4 });
    }
    let params = DmoParams::new(1.0, 1.0, Dimension::Three)?;
    let system = DmoSystem::build(params, cutoff)?;
    let raising = &system.star(Pauli::Raise) * system.coupling();
    let lowering = raising.adjoint();
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    let q1 = (&raising + &lowering).scale_real(norm);
    let q2 = (&raising - &lowering).scale(c64::new(0.0, -norm));
    let h = system.hamiltonian();
    let dim = system.basis().total_dim();
    let target = &(h * h) - &OperatorMatrix::identity(dim).scale_real(params.mass().powi(2));
    let safe = system.safe_indices(buffer);
    let mut report = SusyReport {
        safe_residual: 0.0,
        full_residual: 0.0,
    };
    let charges = [&q1, &q2];
    for (a, qa) in charges.iter().enumerate() {
        for (b, qb) in charges.iter().enumerate() {
            let mut residual = qa.anticommutator(qb)?;
            if a == b {
                residual = &residual - &target;
            }
            report.safe_residual = report.safe_residual.max(residual.max_abs_within(&safe));
            report.full_residual = report.full_residual.max(residual.max_abs());
        }
    }
    Ok(report)
}

/// Maximal gap between the safe-zone spectra of H² and of
/// m² + (ω/2)(p² + r² + (3 + 2σ·L)β), built independently from r, p and L.
pub fn fw_equivalence_check(params: &DmoParams, cutoff: usize, buffer: usize) -> Result<f64> {
    if params.dimension() != Dimension::Three {
        return Err(DmoError::InvalidParams("equivalence check is defined in 3D".into()));
    }
    let system = DmoSystem::build(*params, cutoff)?;
    let basis = system.basis();
    let dim = basis.total_dim();
    let h = system.hamiltonian();
    let squared = h * h;
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    let mut radial = OperatorMatrix::zeros(dim);
    for k in 0..3 {
        let a = make_ladder(basis, k)?;
        let r = (&a + &a.adjoint()).scale_real(norm);
        let p = (&a - &a.adjoint()).scale(c64::new(0.0, -norm));
        radial = &radial + &(&(&p * &p) + &(&r * &r));
    }
    let spin_orbit = system.spin_orbit()?;
    let beta = system.star(Pauli::Z);
    let id = OperatorMatrix::identity(dim);
    let spin_term = &(&id.scale_real(3.0) + &spin_orbit.scale_real(2.0)) * &beta;
    let operand = &(&radial + &spin_term).scale_real(0.5 * params.omega())
        + &id.scale_real(params.mass().powi(2));
    let safe = system.safe_indices(buffer);
    let lhs = diagonalize(&squared.restrict(&safe), false)?.eigenvalues;
    let rhs = diagonalize(&operand.restrict(&safe), false)?.eigenvalues;
    Ok(multiset_distance(&lhs, &rhs).expect("both spectra live on the same index set"))
}

/// 4×4 free Dirac hamiltonian α·p + βm in the representation with
/// γ⁰ = diag(1, −1) and γʲ = [[0, iσⱼ], [iσⱼ, 0]].
pub fn free_dirac_hamiltonian(momentum: [f64; 3], mass: f64) -> OperatorMatrix {
    let i = c64::new(0.0, 1.0);
    let one = c64::new(1.0, 0.0);
    let zero = c64::new(0.0, 0.0);
    let sigma = [
        [[zero, one], [one, zero]],
        [[zero, -i], [i, zero]],
        [[one, zero], [zero, -one]],
    ];
    let mut triplets = Vec::new();
    for (k, s) in sigma.iter().enumerate() {
        // α = βγ = [[0, iσ], [−iσ, 0]]
        for r in 0..2 {
            for c in 0..2 {
                let v = s[r][c] * momentum[k];
                triplets.push((r, c + 2, i * v));
                triplets.push((r + 2, c, -i * v));
            }
        }
    }
    for (d, sign) in [(0, 1.0), (1, 1.0), (2, -1.0), (3, -1.0)] {
        triplets.push((d, d, c64::new(sign * mass, 0.0)));
    }
    OperatorMatrix::from_triplets(4, triplets).expect("indices below 4")
}

/// max over momenta of the gap between the spectrum of α·p + βm and ±√(p² + m²).
pub fn fw_free_check(mass: f64, momenta: &[[f64; 3]]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &p in momenta {
        let e = (p.iter().map(|x| x * x).sum::<f64>() + mass * mass).sqrt();
        let spectrum = diagonalize(&free_dirac_hamiltonian(p, mass), false)?.eigenvalues;
        let expected = [-e, -e, e, e];
        worst = worst.max(multiset_distance(&spectrum, &expected).expect("four levels"));
    }
    Ok(worst)
}
