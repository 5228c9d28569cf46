//! Closed 4×4 blocks of the extended hamiltonian.

use dmolab_dmo::HalfInt;
use dmolab_opkit::{eigh_real, FactorState, Mat, Spin};

use crate::model::ExtendedSystem;
use crate::{ExtendedDim, ExtendedError, ExtendedParams, Result};

/// A real symmetric block on the first `active` states of a quadruplet.
/// The 3D block at n = 0 has three states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorBlock {
    pub entries: [[f64; 4]; 4],
    pub active: usize,
}

impl SectorBlock {
    pub fn eigenvalues(&self) -> Vec<f64> {
        let k = self.active;
        let m = Mat::<f64>::from_fn(k, k, |i, j| self.entries[i][j]);
        eigh_real(&m, false)
            .expect("a small symmetric block always diagonalizes")
            .0
    }
}

/// Shared shape of both blocks, on the order (−−, −+, +−, ++) of (*-spin,
/// isospin): `outer` couples −− to the two middle states, `inner` couples
/// the middle states to ++.
fn shaped(params: &ExtendedParams, outer: f64, inner: f64) -> [[f64; 4]; 4] {
    let m = params.mass;
    let g = params.gamma;
    let minus = params.scalar - params.weighted;
    let plus = params.scalar + params.weighted;
    [
        [-m - minus * g, minus * outer, outer, 0.0],
        [minus * outer, -m + minus * g, 0.0, inner],
        [outer, 0.0, m - plus * g, plus * inner],
        [0.0, inner, plus * inner, m + plus * g],
    ]
}

/// 1D block on |n+2⟩|−−⟩, |n+1⟩|−+⟩, |n+1⟩|+−⟩, |n⟩|++⟩ (I = n + 1).
pub fn block_4x4_1d(params: &ExtendedParams, n: usize) -> SectorBlock {
    let outer = ((n + 2) as f64).sqrt();
    let inner = ((n + 1) as f64).sqrt();
    SectorBlock {
        entries: shaped(params, outer, inner),
        active: 4,
    }
}

/// 3D block at radial number n and total angular momentum j, on the states
/// sharing I = 2n + j − ½: Σ = τ = − with l = j + ½ and n radial quanta,
/// then −+ (l = j − ½, n) and +− (l = j − ½, n), then ++ (l = j + ½, n − 1).
pub fn block_4x4_3d(params: &ExtendedParams, n: usize, j: HalfInt) -> Result<SectorBlock> {
    if !j.is_half_odd() || j.twice() < 1 {
        return Err(ExtendedError::Label(format!("j = {j} is not a positive half-odd integer")));
    }
    let outer = (2.0 * (n as f64 + j.value() + 1.0)).sqrt();
    let inner = (2.0 * n as f64).sqrt();
    Ok(SectorBlock {
        entries: shaped(params, outer, inner),
        active: if n == 0 { 3 } else { 4 },
    })
}

/// 2I of the 3D block at (n, j).
pub fn block_twice_invariant_3d(n: usize, j: HalfInt) -> i64 {
    4 * n as i64 + j.twice() - 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockState {
    pub fock: usize,
    pub star: Spin,
    pub isospin: Spin,
}

impl BlockState {
    pub fn index_in(&self, system: &ExtendedSystem) -> Result<usize> {
        if system.params().dimension != ExtendedDim::One {
            return Err(ExtendedError::InvalidParams("quadruplet states live in the 1D basis".into()));
        }
        Ok(system.basis().index_of(&[
            FactorState::Spin(self.star),
            FactorState::Spin(self.isospin),
            FactorState::Fock(vec![self.fock]),
        ])?)
    }
}

/// The four 1D states sharing I = n + 1, in block order.
pub fn block_basis_1d(n: usize) -> [BlockState; 4] {
    use Spin::{Down, Up};
    let state = |fock, star, isospin| BlockState { fock, star, isospin };
    [
        state(n + 2, Down, Down),
        state(n + 1, Down, Up),
        state(n + 1, Up, Down),
        state(n, Up, Up),
    ]
}
