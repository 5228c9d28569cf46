//! Closed-form levels of the free oscillator.

use dmolab_opkit::SpectrumResult;

use crate::{Dimension, DmoError, DmoParams, HalfInt, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShellBranch {
    /// − component with l = j − ½; energies independent of j.
    Infinite,
    /// − component with l = j + ½.
    Finite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LevelLabel {
    /// 1D pair on (|n,+⟩, |n+1,−⟩).
    Line { n: usize },
    /// 2D pair with n right-chiral quanta on the upper component.
    Plane { n: usize },
    /// The σ₃ = −1 remnant with no partner, E = −m.
    Unpaired,
    /// 3D pair labelled by radial number, total angular momentum and branch.
    Shell { n: usize, j: HalfInt, branch: ShellBranch },
}

impl LevelLabel {
    pub fn branch_name(&self) -> &'static str {
        match self {
            LevelLabel::Line { .. } | LevelLabel::Plane { .. } => "ladder",
            LevelLabel::Unpaired => "unpaired",
            LevelLabel::Shell { branch: ShellBranch::Infinite, .. } => "infinite",
            LevelLabel::Shell { branch: ShellBranch::Finite, .. } => "finite",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            LevelLabel::Line { n } | LevelLabel::Plane { n } | LevelLabel::Shell { n, .. } => n,
            LevelLabel::Unpaired => 0,
        }
    }

    pub fn j(&self) -> Option<HalfInt> {
        match *self {
            LevelLabel::Shell { j, .. } => Some(j),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub label: LevelLabel,
    pub degeneracy: usize,
}

/// Every level whose states carry at most `max_quanta` oscillator quanta.
///
/// 3D finite-branch levels use n = r + 1 ≥ 1 for radial number r of the
/// lower component, so that E² = m² + 2ω(n + j).
pub fn analytic_spectrum(params: &DmoParams, max_quanta: usize) -> SpectrumResult<Level> {
    let m = params.mass();
    let w = params.omega();
    let mut levels = Vec::new();
    let pair = |e: f64, label: LevelLabel, degeneracy: usize, levels: &mut Vec<Level>| {
        for energy in [-e, e] {
            levels.push(Level {
                energy,
                label,
                degeneracy,
            });
        }
    };
    match params.dimension() {
        Dimension::One => {
            levels.push(Level {
                energy: -m,
                label: LevelLabel::Unpaired,
                degeneracy: 1,
            });
            for n in 0..max_quanta {
                let e = (m * m + w * (n + 1) as f64).sqrt();
                pair(e, LevelLabel::Line { n }, 1, &mut levels);
            }
        }
        Dimension::Two => {
            levels.push(Level {
                energy: -m,
                label: LevelLabel::Unpaired,
                degeneracy: max_quanta + 1,
            });
            for n in 0..max_quanta {
                let e = (m * m + w * (n + 1) as f64).sqrt();
                pair(e, LevelLabel::Plane { n }, max_quanta - n, &mut levels);
            }
        }
        Dimension::Three => {
            for l in 0..=max_quanta {
                let j = HalfInt::from_twice(2 * l as i64 + 1);
                levels.push(Level {
                    energy: -m,
                    label: LevelLabel::Shell {
                        n: 0,
                        j,
                        branch: ShellBranch::Infinite,
                    },
                    degeneracy: j.multiplicity(),
                });
                for n in (1..).take_while(|n| 2 * n + l <= max_quanta) {
                    let e = (m * m + 2.0 * w * n as f64).sqrt();
                    let label = LevelLabel::Shell {
                        n,
                        j,
                        branch: ShellBranch::Infinite,
                    };
                    pair(e, label, j.multiplicity(), &mut levels);
                }
            }
            for l in 1..=max_quanta {
                let j = HalfInt::from_twice(2 * l as i64 - 1);
                for r in (0..).take_while(|r| 2 * r + l <= max_quanta) {
                    let n = r + 1;
                    let e = (m * m + 2.0 * w * (n as f64 + j.value())).sqrt();
                    let label = LevelLabel::Shell {
                        n,
                        j,
                        branch: ShellBranch::Finite,
                    };
                    pair(e, label, j.multiplicity(), &mut levels);
                }
            }
        }
    }
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.label.cmp(&b.label)));
    SpectrumResult {
        eigenvalues: levels.iter().map(|l| l.energy).collect(),
        eigenvectors: None,
        labels: Some(levels),
    }
}

/// Levels repeated by degeneracy, ascending.
pub fn expand_levels(levels: &[Level]) -> Vec<f64> {
    let mut out: Vec<f64> = levels
        .iter()
        .flat_map(|l| std::iter::repeat_n(l.energy, l.degeneracy))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Eigenvalue of I = a†·a + Σ₃/2 shared by the two states of a 3D block.
pub fn block_invariant(n: usize, j: HalfInt, branch: ShellBranch) -> HalfInt {
    let n2 = HalfInt::from_int(n as i64);
    match branch {
        ShellBranch::Infinite => n2 + n2 + j - HalfInt::from_int(1),
        ShellBranch::Finite => n2 + n2 + j - HalfInt::from_int(2),
    }
}

/// 2×2 block of the 3D hamiltonian on the pair sharing (j, I), in the order
/// (lower component, upper component).
pub fn block_matrix_3d(
    params: &DmoParams,
    j: HalfInt,
    invariant: HalfInt,
    branch: ShellBranch,
) -> Result<[[f64; 2]; 2]> {
    if !j.is_half_odd() || j.twice() < 1 {
        return Err(DmoError::Label(format!("j = {j} is not a positive half-odd integer")));
    }
    let shift = match branch {
        ShellBranch::Infinite => 1,
        ShellBranch::Finite => 2,
    };
    // I − j + shift = 2n
    let n = (invariant - j + HalfInt::from_int(shift))
        .as_int()
        .filter(|k| k % 2 == 0 && *k >= 0)
        .map(|k| k / 2)
        .ok_or_else(|| {
            DmoError::Label(format!(
                "I = {invariant} is not reachable with j = {j} on the {branch:?} branch"
            ))
        })?;
    let (m, w) = (params.mass(), params.omega());
    let off = match branch {
        ShellBranch::Infinite => (2.0 * w * n as f64).sqrt(),
        ShellBranch::Finite => {
            if n < 1 {
                return Err(DmoError::Label(format!(
                    "finite branch needs n >= 1, I = {invariant} and j = {j} give n = {n}"
                )));
            }
            (2.0 * w * (n as f64 + j.value())).sqrt()
        }
    };
    Ok([[-m, off], [off, m]])
}

/// Eigenvalues of a symmetric 2×2 block, ascending.
pub fn block_eigenvalues(block: &[[f64; 2]; 2]) -> [f64; 2] {
    let mean = 0.5 * (block[0][0] + block[1][1]);
    let half = 0.5 * (block[0][0] - block[1][1]);
    let radius = (half * half + block[0][1] * block[1][0]).sqrt();
    [mean - radius, mean + radius]
}
