//! Operators on a truncated basis.
//!
//! Storage is row-compressed because every hamiltonian in the lab has a
//! handful of entries per row; `to_dense` produces the faer matrix handed to
//! the eigensolver.

use std::ops::{Add, Mul, Neg, Sub};

use faer::{c64, Mat};

use crate::basis::{BasisSpec, Factor, Spin};
use crate::error::{OpkitError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    // per row: (column, value), sorted by column, no stored zeros
    rows: Vec<Vec<(usize, c64)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    Raise,
    Lower,
}

fn compress(mut row: Vec<(usize, c64)>) -> Vec<(usize, c64)> {
    row.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, c64)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| e.1 != c64::new(0.0, 0.0));
    out
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal((0..dim).map(|_| 1.0).collect::<Vec<_>>().as_slice())
    }

    pub fn diagonal(values: &[f64]) -> Self {
        OperatorMatrix {
            dim: values.len(),
            rows: values
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    if v == 0.0 {
                        Vec::new()
                    } else {
                        vec![(i, c64::new(v, 0.0))]
                    }
                })
                .collect(),
        }
    }

    /// Build from (row, column, value) triplets; duplicates are summed.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, c64)>,
    ) -> Result<Self> {
        let mut rows = vec![Vec::new(); dim];
        for (i, j, v) in triplets {
            if i >= dim || j >= dim {
                return Err(OpkitError::IndexOutOfRange {
                    index: i.max(j),
                    dim,
                });
            }
            rows[i].push((j, v));
        }
        Ok(OperatorMatrix {
            dim,
            rows: rows.into_iter().map(compress).collect(),
        })
    }

    pub fn from_dense(m: &Mat<c64>) -> Self {
        let dim = m.nrows();
        let rows = (0..dim)
            .map(|i| {
                (0..m.ncols())
                    .filter_map(|j| {
                        let v = m[(i, j)];
                        (v != c64::new(0.0, 0.0)).then_some((j, v))
                    })
                    .collect()
            })
            .collect();
        OperatorMatrix { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> c64 {
        self.rows[i]
            .binary_search_by_key(&j, |e| e.0)
            .map(|k| self.rows[i][k].1)
            .unwrap_or(c64::new(0.0, 0.0))
    }

    pub fn row(&self, i: usize) -> &[(usize, c64)] {
        &self.rows[i]
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(OpkitError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.combine(other, 1.0))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.combine(other, -1.0))
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut row = a.clone();
                row.extend(b.iter().map(|&(c, v)| (c, v * sign)));
                compress(row)
            })
            .collect();
        OperatorMatrix {
            dim: self.dim,
            rows,
        }
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut acc = vec![c64::new(0.0, 0.0); self.dim];
        let mut touched = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &(k, a) in row {
                    for &(j, b) in &other.rows[k] {
                        if acc[j] == c64::new(0.0, 0.0) {
                            touched.push(j);
                        }
                        acc[j] += a * b;
                    }
                }
                let mut out: Vec<(usize, c64)> = touched
                    .drain(..)
                    .map(|j| (j, std::mem::replace(&mut acc[j], c64::new(0.0, 0.0))))
                    .collect();
                // a column may have been pushed twice if it cancelled to zero midway
                out = compress(out);
                out
            })
            .collect();
        Ok(OperatorMatrix {
            dim: self.dim,
            rows,
        })
    }

    pub fn scale(&self, factor: c64) -> Self {
        OperatorMatrix {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| compress(r.iter().map(|&(c, v)| (c, v * factor)).collect()))
                .collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c64::new(factor, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let mut rows = vec![Vec::new(); self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                rows[j].push((i, v.conj()));
            }
        }
        OperatorMatrix {
            dim: self.dim,
            rows: rows.into_iter().map(compress).collect(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_matmul(other)?.try_sub(&other.try_matmul(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.try_matmul(other)?.try_add(&other.try_matmul(self)?)
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|e| e.1.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude with both row and column in `indices`.
    pub fn max_abs_within(&self, indices: &[usize]) -> f64 {
        let mut member = vec![false; self.dim];
        for &i in indices {
            member[i] = true;
        }
        indices
            .iter()
            .flat_map(|&i| self.rows[i].iter())
            .filter(|e| member[e.0])
            .map(|e| e.1.norm())
            .fold(0.0, f64::max)
    }

    /// max |H − H†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                worst = worst.max((v - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_real(&self) -> bool {
        self.rows.iter().flatten().all(|e| e.1.im == 0.0)
    }

    pub fn apply(&self, psi: &[c64]) -> Result<Vec<c64>> {
        if psi.len() != self.dim {
            return Err(OpkitError::DimensionMismatch {
                left: self.dim,
                right: psi.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(j, v)| v * psi[j]).sum())
            .collect())
    }

    /// ⟨φ|O|ψ⟩.
    pub fn matrix_element(&self, phi: &[c64], psi: &[c64]) -> Result<c64> {
        let o_psi = self.apply(psi)?;
        Ok(phi.iter().zip(&o_psi).map(|(a, b)| a.conj() * b).sum())
    }

    /// Principal submatrix on `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let mut position = vec![usize::MAX; self.dim];
        for (k, &i) in indices.iter().enumerate() {
            position[i] = k;
        }
        OperatorMatrix {
            dim: indices.len(),
            rows: indices
                .iter()
                .map(|&i| {
                    compress(
                        self.rows[i]
                            .iter()
                            .filter(|e| position[e.0] != usize::MAX)
                            .map(|&(j, v)| (position[j], v))
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Mat<c64> {
        let mut m = Mat::<c64>::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn to_dense_real(&self) -> Mat<f64> {
        let mut m = Mat::<f64>::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v.re;
            }
        }
        m
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&OperatorMatrix> for &OperatorMatrix {
            type Output = OperatorMatrix;
            fn $method(self, rhs: &OperatorMatrix) -> OperatorMatrix {
                self.$inner(rhs).expect("operator dimensions differ")
            }
        }
        impl $tr<OperatorMatrix> for OperatorMatrix {
            type Output = OperatorMatrix;
            fn $method(self, rhs: OperatorMatrix) -> OperatorMatrix {
                (&self).$inner(&rhs).expect("operator dimensions differ")
            }
        }
        impl $tr<&OperatorMatrix> for OperatorMatrix {
            type Output = OperatorMatrix;
            fn $method(self, rhs: &OperatorMatrix) -> OperatorMatrix {
                (&self).$inner(rhs).expect("operator dimensions differ")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_matmul);

impl Mul<&OperatorMatrix> for f64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scale_real(self)
    }
}

impl Mul<OperatorMatrix> for f64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: OperatorMatrix) -> OperatorMatrix {
        rhs.scale_real(self)
    }
}

impl Mul<&OperatorMatrix> for c64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scale(self)
    }
}

impl Mul<OperatorMatrix> for c64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: OperatorMatrix) -> OperatorMatrix {
        rhs.scale(self)
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale_real(-1.0)
    }
}

impl Neg for OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale_real(-1.0)
    }
}

/// Annihilation operator of a global mode: a|n⟩ = √n|n−1⟩.
pub fn make_ladder(basis: &BasisSpec, mode: usize) -> Result<OperatorMatrix> {
    let (factor, local_mode) = basis.mode_location(mode)?;
    let triplets = (0..basis.total_dim()).filter_map(|index| {
        let occ = basis.occupations(index, factor);
        let n = occ[local_mode];
        if n == 0 {
            return None;
        }
        let mut lowered = occ.to_vec();
        lowered[local_mode] -= 1;
        let local = basis
            .fock_local_index(factor, &lowered)
            .expect("lowered occupation stays inside the truncation");
        let target = basis.with_component(index, factor, local);
        Some((target, index, c64::new((n as f64).sqrt(), 0.0)))
    });
    OperatorMatrix::from_triplets(basis.total_dim(), triplets)
}

/// Number operator of a global mode (exact, unaffected by truncation).
pub fn make_number(basis: &BasisSpec, mode: usize) -> Result<OperatorMatrix> {
    basis.mode_location(mode)?;
    let diag: Vec<f64> = (0..basis.total_dim())
        .map(|i| basis.occupation(i, mode) as f64)
        .collect();
    Ok(OperatorMatrix::diagonal(&diag))
}

/// Chiral combinations `normalization·(a_x ± i a_y)`, returned as (right, left).
pub fn make_chiral_pair(
    basis: &BasisSpec,
    mode_x: usize,
    mode_y: usize,
    normalization: f64,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let cx = basis.mode_cutoff(mode_x)?;
    let cy = basis.mode_cutoff(mode_y)?;
    if cx != cy {
        return Err(OpkitError::UnequalCutoffs {
            first: mode_x,
            second: mode_y,
            first_cutoff: cx,
            second_cutoff: cy,
        });
    }
    let ax = make_ladder(basis, mode_x)?;
    let ay = make_ladder(basis, mode_y)?;
    let i_ay = ay.scale(c64::new(0.0, 1.0));
    let right = (&ax + &i_ay).scale_real(normalization);
    let left = (&ax - &i_ay).scale_real(normalization);
    Ok((right, left))
}

/// Pauli-type operator on one spin factor, identity elsewhere.
/// Local index 0 is |+⟩, so σ₊ = |+⟩⟨−|.
pub fn embed_spin(basis: &BasisSpec, factor: usize, which: Pauli) -> Result<OperatorMatrix> {
    basis.ensure_spin_factor(factor)?;
    let one = c64::new(1.0, 0.0);
    let triplets = (0..basis.total_dim()).filter_map(|index| {
        let spin = basis.spin(index, factor);
        let flipped = basis.with_component(index, factor, spin.flipped().local_index());
        match (which, spin) {
            (Pauli::X, _) => Some((flipped, index, one)),
            // σ₂|−⟩ = −i|+⟩, σ₂|+⟩ = i|−⟩
            (Pauli::Y, Spin::Down) => Some((flipped, index, c64::new(0.0, -1.0))),
            (Pauli::Y, Spin::Up) => Some((flipped, index, c64::new(0.0, 1.0))),
            (Pauli::Z, s) => Some((index, index, c64::new(s.sign(), 0.0))),
            (Pauli::Raise, Spin::Down) => Some((flipped, index, one)),
            (Pauli::Lower, Spin::Up) => Some((flipped, index, one)),
            _ => None,
        }
    });
    OperatorMatrix::from_triplets(basis.total_dim(), triplets)
}

/// Diagonal operator of total Fock quanta.
pub fn total_quanta_operator(basis: &BasisSpec) -> OperatorMatrix {
    let diag: Vec<f64> = (0..basis.total_dim())
        .map(|i| basis.total_quanta(i) as f64)
        .collect();
    OperatorMatrix::diagonal(&diag)
}

/// Fock cutoff shared by every Fock factor, if they agree.
pub fn common_cutoff(basis: &BasisSpec) -> Option<usize> {
    let mut cutoffs = basis.factors().iter().filter_map(|f| match f {
        Factor::Fock { cutoff, .. } => Some(*cutoff),
        Factor::Spin => None,
    });
    let first = cutoffs.next()?;
    cutoffs.all(|c| c == first).then_some(first)
}
