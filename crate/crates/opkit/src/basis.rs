//! Truncated tensor-product bases.
//!
//! Factors are laid out row-major in declaration order: the last factor has
//! stride 1. Declaring spin factors before Fock factors therefore makes the
//! Fock index the fastest-running one.

use std::collections::HashMap;

use crate::error::{OpkitError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn local_index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn from_local_index(local: usize) -> Spin {
        if local == 0 {
            Spin::Up
        } else {
            Spin::Down
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

/// A Fock factor holds `modes` bosonic modes with total quanta at most `cutoff`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Fock { cutoff: usize, modes: usize },
    Spin,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FactorState {
    Fock(Vec<usize>),
    Spin(Spin),
}

#[derive(Clone, Debug)]
struct FockTable {
    states: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl FockTable {
    fn new(cutoff: usize, modes: usize) -> Self {
        let mut states = Vec::new();
        let mut current = vec![0; modes];
        enumerate_occupations(&mut current, 0, cutoff, &mut states);
        let lookup = states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();
        FockTable { states, lookup }
    }
}

fn enumerate_occupations(
    current: &mut Vec<usize>,
    position: usize,
    remaining: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if position == current.len() {
        out.push(current.clone());
        return;
    }
    for n in 0..=remaining {
        current[position] = n;
        enumerate_occupations(current, position + 1, remaining - n, out);
    }
    current[position] = 0;
}

#[derive(Clone, Debug)]
pub struct BasisSpec {
    factors: Vec<Factor>,
    tables: Vec<Option<FockTable>>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    total_dim: usize,
    // global mode -> (factor, mode within factor)
    modes: Vec<(usize, usize)>,
}

impl BasisSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        let mut tables = Vec::with_capacity(factors.len());
        let mut dims = Vec::with_capacity(factors.len());
        let mut modes = Vec::new();
        for (f, factor) in factors.iter().enumerate() {
            match *factor {
                Factor::Fock { cutoff, modes: count } => {
                    if count == 0 {
                        return Err(OpkitError::EmptyFockFactor);
                    }
                    let table = FockTable::new(cutoff, count);
                    dims.push(table.states.len());
                    tables.push(Some(table));
                    modes.extend((0..count).map(|m| (f, m)));
                }
                Factor::Spin => {
                    dims.push(2);
                    tables.push(None);
                }
            }
        }
        let mut strides = vec![1; factors.len()];
        for f in (0..factors.len().saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * dims[f + 1];
        }
        let total_dim = dims.iter().product();
        Ok(BasisSpec {
            factors,
            tables,
            dims,
            strides,
            total_dim,
            modes,
        })
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor_dim(&self, factor: usize) -> usize {
        self.dims[factor]
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// The (factor, local mode) pair backing a global mode index.
    pub fn mode_location(&self, mode: usize) -> Result<(usize, usize)> {
        self.modes
            .get(mode)
            .copied()
            .ok_or(OpkitError::ModeOutOfRange {
                mode,
                available: self.modes.len(),
            })
    }

    pub fn mode_cutoff(&self, mode: usize) -> Result<usize> {
        let (f, _) = self.mode_location(mode)?;
        match self.factors[f] {
            Factor::Fock { cutoff, .. } => Ok(cutoff),
            Factor::Spin => unreachable!("modes only live in Fock factors"),
        }
    }

    pub fn spin_factors(&self) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| matches!(f, Factor::Spin))
            .map(|(k, _)| k)
            .collect()
    }

    pub fn ensure_spin_factor(&self, factor: usize) -> Result<()> {
        match self.factors.get(factor) {
            None => Err(OpkitError::FactorOutOfRange {
                factor,
                available: self.factors.len(),
            }),
            Some(Factor::Spin) => Ok(()),
            Some(_) => Err(OpkitError::NotSpinFactor(factor)),
        }
    }

    /// Local index of `factor` inside the composite `index`.
    pub fn component(&self, index: usize, factor: usize) -> usize {
        (index / self.strides[factor]) % self.dims[factor]
    }

    /// Composite index with the component of `factor` replaced by `local`.
    pub fn with_component(&self, index: usize, factor: usize, local: usize) -> usize {
        let old = self.component(index, factor);
        index - old * self.strides[factor] + local * self.strides[factor]
    }

    pub fn spin(&self, index: usize, factor: usize) -> Spin {
        Spin::from_local_index(self.component(index, factor))
    }

    pub fn occupations(&self, index: usize, factor: usize) -> &[usize] {
        let table = self.tables[factor]
            .as_ref()
            .expect("occupations requested on a spin factor");
        &table.states[self.component(index, factor)]
    }

    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        let (f, m) = self.modes[mode];
        self.occupations(index, f)[m]
    }

    /// Sum of all Fock occupations of a basis state.
    pub fn total_quanta(&self, index: usize) -> usize {
        self.tables
            .iter()
            .enumerate()
            .filter_map(|(f, t)| t.as_ref().map(|t| (f, t)))
            .map(|(f, t)| t.states[self.component(index, f)].iter().sum::<usize>())
            .sum()
    }

    /// Local index of an occupation tuple inside a Fock factor.
    pub fn fock_local_index(&self, factor: usize, occupations: &[usize]) -> Option<usize> {
        self.tables
            .get(factor)?
            .as_ref()?
            .lookup
            .get(occupations)
            .copied()
    }

    pub fn index_of(&self, state: &[FactorState]) -> Result<usize> {
        if state.len() != self.factors.len() {
            return Err(OpkitError::InvalidQuantumNumbers(format!(
                "expected {} factors, got {}",
                self.factors.len(),
                state.len()
            )));
        }
        let mut index = 0;
        for (f, (factor, s)) in self.factors.iter().zip(state).enumerate() {
            let local = match (factor, s) {
                (Factor::Spin, FactorState::Spin(spin)) => spin.local_index(),
                (Factor::Fock { .. }, FactorState::Fock(occ)) => {
                    self.fock_local_index(f, occ).ok_or_else(|| {
                        OpkitError::InvalidQuantumNumbers(format!(
                            "occupations {occ:?} not in factor {f}"
                        ))
                    })?
                }
                _ => {
                    return Err(OpkitError::InvalidQuantumNumbers(format!(
                        "factor {f} kind mismatch"
                    )))
                }
            };
            index += local * self.strides[f];
        }
        Ok(index)
    }

    pub fn quantum_numbers_of(&self, index: usize) -> Result<Vec<FactorState>> {
        if index >= self.total_dim {
            return Err(OpkitError::IndexOutOfRange {
                index,
                dim: self.total_dim,
            });
        }
        Ok((0..self.factors.len())
            .map(|f| match &self.tables[f] {
                Some(t) => FactorState::Fock(t.states[self.component(index, f)].clone()),
                None => FactorState::Spin(self.spin(index, f)),
            })
            .collect())
    }

    /// Indices whose state satisfies `keep`, ascending.
    pub fn select(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.total_dim).filter(|&i| keep(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_dimension() {
        let b = BasisSpec::new(vec![
            Factor::Spin,
            Factor::Spin,
            Factor::Fock { cutoff: 10, modes: 3 },
        ])
        .unwrap();
        assert_eq!(b.total_dim(), 1144);
        assert_eq!(b.factor_dim(2), 286);
    }

    #[test]
    fn fock_index_fastest() {
        let b = BasisSpec::new(vec![Factor::Spin, Factor::Fock { cutoff: 3, modes: 1 }]).unwrap();
        assert_eq!(b.occupation(1, 0), 1);
        assert_eq!(b.spin(0, 0), Spin::Up);
        assert_eq!(b.spin(4, 0), Spin::Down);
    }

    #[test]
    fn empty_fock_rejected() {
        assert_eq!(
            BasisSpec::new(vec![Factor::Fock { cutoff: 2, modes: 0 }]).unwrap_err(),
            OpkitError::EmptyFockFactor
        );
    }
}
