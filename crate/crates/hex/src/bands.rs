use std::f64::consts::PI;

use dmolab_opkit::c64;
use dmolab_opkit::par::{self, Execution};

use crate::{dot, HexError, HexParams, Result, BOND_VECTORS, LATTICE_VECTORS, SQRT3};

/// Σᵢ e^{iλk·bᵢ}.
pub fn phase_sum(params: &HexParams, k: [f64; 2]) -> c64 {
    BOND_VECTORS
        .iter()
        .map(|b| c64::cis(params.period * dot(k, *b)))
        .sum()
}

/// E₀ ± √(Δ²|Σ e^{iλk·bᵢ}|² + M²).
pub fn hex_dispersion(params: &HexParams, k: [f64; 2]) -> (f64, f64) {
    let root = (params.delta.powi(2) * phase_sum(params, k).norm_sqr() + params.mass_split.powi(2)).sqrt();
    (params.offset + root, params.offset - root)
}

/// Σᵢ 2 cos(λk·aᵢ).
pub fn second_neighbor_form(params: &HexParams, k: [f64; 2]) -> f64 {
    LATTICE_VECTORS
        .iter()
        .map(|a| 2.0 * (params.period * dot(k, *a)).cos())
        .sum()
}

fn amplitude(params: &HexParams, k: [f64; 2]) -> c64 {
    phase_sum(params, k) * params.delta + params.delta_prime * second_neighbor_form(params, k)
}

/// |Δ Σ e^{iλk·bᵢ} + Δ′ Σ 2cos(λk·aᵢ)|, massless.
pub fn second_neighbor_dispersion(params: &HexParams, k: [f64; 2]) -> f64 {
    amplitude(params, k).norm()
}

/// K = ±(4π/(3√3λ), 0), the zeros of the first-neighbour phase sum.
pub fn ideal_dirac_points(params: &HexParams) -> [[f64; 2]; 2] {
    let kx = 4.0 * PI / (3.0 * SQRT3 * params.period);
    [[kx, 0.0], [-kx, 0.0]]
}

/// Newton search for a zero of the complex amplitude Δ f(k) + Δ′ g(k).
pub fn locate_degeneracy(params: &HexParams, guess: [f64; 2]) -> Result<[f64; 2]> {
    let lam = params.period;
    let mut k = guess;
    for _ in 0..100 {
        let f = amplitude(params, k);
        if f.norm() < 1e-14 * params.delta.max(1.0) {
            return Ok(k);
        }
        // ∂/∂k of the amplitude, real and imaginary parts
        let mut grad = [c64::new(0.0, 0.0); 2];
        for b in BOND_VECTORS {
            let w = c64::new(0.0, lam * params.delta) * c64::cis(lam * dot(k, b));
            grad[0] += w * b[0];
            grad[1] += w * b[1];
        }
        for a in LATTICE_VECTORS {
            let w = -2.0 * lam * params.delta_prime * (lam * dot(k, a)).sin();
            grad[0] += w * a[0];
            grad[1] += w * a[1];
        }
        let (j11, j12, j21, j22) = (grad[0].re, grad[1].re, grad[0].im, grad[1].im);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            break;
        }
        let dk0 = (j22 * f.re - j12 * f.im) / det;
        let dk1 = (-j21 * f.re + j11 * f.im) / det;
        k = [k[0] - dk0, k[1] - dk1];
    }
    Err(HexError::NoDegeneracy(guess[0], guess[1]))
}

/// Both degeneracy points, located from the ideal K guesses.
pub fn dirac_points(params: &HexParams) -> Result<[[f64; 2]; 2]> {
    let [a, b] = ideal_dirac_points(params);
    Ok([locate_degeneracy(params, a)?, locate_degeneracy(params, b)?])
}

/// Near a degeneracy point E ≈ √((κ·u)² + (κ·v)²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConicSection {
    pub u: [f64; 2],
    pub v: [f64; 2],
    /// Eigenvalues of u uᵀ + v vᵀ, ascending.
    pub principal_axes: [f64; 2],
    pub k0: [f64; 2],
}

impl ConicSection {
    /// Ratio of the principal cone slopes, √(λ_max/λ_min); 1 for a circular cone.
    pub fn axis_ratio(&self) -> f64 {
        (self.principal_axes[1] / self.principal_axes[0]).sqrt()
    }

    /// The quadratic form u uᵀ + v vᵀ.
    pub fn form(&self) -> [[f64; 2]; 2] {
        let [u, v] = [self.u, self.v];
        [
            [u[0] * u[0] + v[0] * v[0], u[0] * u[1] + v[0] * v[1]],
            [u[1] * u[0] + v[1] * v[0], u[1] * u[1] + v[1] * v[1]],
        ]
    }
}

/// u = λΔ Σ cos(λk₀·bᵢ) bᵢ, v = λΔ Σ sin(λk₀·bᵢ) bᵢ + 2λΔ′ Σ sin(λk₀·aᵢ) aᵢ.
pub fn conic_analysis(params: &HexParams, k0: [f64; 2]) -> ConicSection {
    let lam = params.period;
    let mut u = [0.0; 2];
    let mut v = [0.0; 2];
    for b in BOND_VECTORS {
        let phase = lam * dot(k0, b);
        for c in 0..2 {
            u[c] += lam * params.delta * phase.cos() * b[c];
            v[c] += lam * params.delta * phase.sin() * b[c];
        }
    }
    for a in LATTICE_VECTORS {
        let s = (lam * dot(k0, a)).sin();
        for c in 0..2 {
            v[c] += 2.0 * lam * params.delta_prime * s * a[c];
        }
    }
    let mut conic = ConicSection {
        u,
        v,
        principal_axes: [0.0; 2],
        k0,
    };
    let [[p, q], [_, r]] = conic.form();
    let mean = 0.5 * (p + r);
    let spread = (0.25 * (p - r).powi(2) + q * q).sqrt();
    conic.principal_axes = [(mean - spread).max(0.0), mean + spread];
    conic
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub kx: f64,
    pub ky: f64,
    pub upper: f64,
    pub lower: f64,
}

/// Both bands on a `points × points` grid over [−extent, extent]².
pub fn dispersion_surface(params: &HexParams, extent: f64, points: usize) -> Vec<SurfacePoint> {
    let mode = if par::is_parallel() {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    dispersion_surface_with(mode, params, extent, points)
}

pub fn dispersion_surface_with(mode: Execution, params: &HexParams, extent: f64, points: usize) -> Vec<SurfacePoint> {
    let axis: Vec<f64> = match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|s| -extent + 2.0 * extent * s as f64 / (n - 1) as f64).collect(),
    };
    let rows = par::map_with(mode, &axis, |&ky| {
        axis.iter()
            .map(|&kx| {
                let (upper, lower) = hex_dispersion(params, [kx, ky]);
                SurfacePoint { kx, ky, upper, lower }
            })
            .collect::<Vec<_>>()
    });
    rows.into_iter().flatten().collect()
}
