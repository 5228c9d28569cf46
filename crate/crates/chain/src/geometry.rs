//! Cell n holds B_n (site 2n) and A_n (site 2n + 1) in that order along the
//! line. A_n couples to B_n with Δ and to B_{n+1} with the inter-cell coupling,
//! so Π is upper bidiagonal in the (A, B) ordering.

use dmolab_opkit::{Coupling, LatticeGeometry, Site, Sublattice};

use crate::{ChainError, ChainParams, Result};

/// Rest separation of neighbouring resonators, in units of the period.
pub const CELL_SPACING: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

fn b_site(n: usize) -> usize {
    2 * n
}

fn a_site(n: usize) -> usize {
    2 * n + 1
}

fn assemble(params: &ChainParams, inter: &[f64], extra: &[f64]) -> LatticeGeometry {
    let rest = CELL_SPACING * params.period;
    let mut sites = Vec::with_capacity(2 * params.cells);
    let mut couplings = Vec::with_capacity(2 * params.cells);
    let mut x = 0.0;
    for n in 0..params.cells {
        if n > 0 {
            x += rest + extra[n - 1];
        }
        sites.push(Site { id: b_site(n), sublattice: Sublattice::B, x, y: None });
        x += rest;
        sites.push(Site { id: a_site(n), sublattice: Sublattice::A, x, y: None });
        couplings.push(Coupling { i: a_site(n), j: b_site(n), delta: params.delta });
    }
    for (n, &delta) in inter.iter().enumerate() {
        couplings.push(Coupling { i: a_site(n), j: b_site((n + 1) % params.cells), delta });
    }
    LatticeGeometry { sites, couplings }
}

/// Every bond equal to Δ.
pub fn periodic_chain(params: &ChainParams, boundary: Boundary) -> Result<LatticeGeometry> {
    let params = params.validated()?;
    let bonds = match boundary {
        Boundary::Open => params.cells - 1,
        Boundary::Periodic if params.cells < 2 => {
            return Err(ChainError::InvalidParams("a periodic chain needs at least two cells".into()));
        }
        Boundary::Periodic => params.cells,
    };
    let inter = vec![params.delta; bonds];
    let extra = vec![0.0; params.cells.saturating_sub(1)];
    Ok(assemble(&params, &inter, &extra))
}

/// Open chain with inter-cell couplings Δ_n = √(Δ² − (n − origin)ω), so that
/// Δ_{n+1}² − Δ_n² = −ω. Each bond is stretched by d_n = −Λ log(Δ_n/Δ), which
/// is negative on the side of the origin where the coupling exceeds Δ.
pub fn deform_chain(params: &ChainParams) -> Result<LatticeGeometry> {
    let params = params.validated()?;
    let Some(n_max) = params.n_max() else {
        return Err(ChainError::InvalidParams("deformation needs ω > 0".into()));
    };
    let beyond = params.cells.saturating_sub(params.origin);
    if beyond > n_max {
        return Err(ChainError::TooManyCells {
            cells: params.cells,
            origin: params.origin,
            n_max,
        });
    }
    let d2 = params.delta * params.delta;
    let inter: Vec<f64> = (0..params.cells - 1)
        .map(|n| (d2 - (n as f64 - params.origin as f64) * params.omega).sqrt())
        .collect();
    let extra: Vec<f64> = inter
        .iter()
        .map(|c| -params.decay_length * (c / params.delta).ln())
        .collect();
    Ok(assemble(&params, &inter, &extra))
}
