//! Tight-binding geometries shared by the chain and honeycomb builders.

use std::collections::{HashMap, HashSet};

use faer::Mat;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub id: usize,
    pub sublattice: Sublattice,
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub delta: f64,
}

/// Sites plus undirected couplings; each bond is stored once.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LatticeGeometry {
    pub sites: Vec<Site>,
    pub couplings: Vec<Coupling>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("site ids must be 0..n in order, found id {found} at position {position}")]
    SiteIds { position: usize, found: usize },
    #[error("coupling references missing site {0}")]
    MissingSite(usize),
    #[error("self coupling on site {0}")]
    SelfCoupling(usize),
    #[error("coupling {i}-{j} has non-positive strength {delta}")]
    NonPositive { i: usize, j: usize, delta: f64 },
    #[error("bond {i}-{j} listed twice")]
    Duplicate { i: usize, j: usize },
    #[error("coupling {i}-{j} joins two sites of the same sublattice")]
    NotBipartite { i: usize, j: usize },
}

/// Sublattice blocks of a bipartite hamiltonian: H = [[α, Π], [Π†, β]].
#[derive(Clone, Debug)]
pub struct BipartiteBlocks {
    pub a_sites: Vec<usize>,
    pub b_sites: Vec<usize>,
    /// Rows follow `a_sites`, columns follow `b_sites`.
    pub pi: Mat<f64>,
}

impl LatticeGeometry {
    pub fn validate(&self) -> Result<(), GeometryError> {
        for (position, s) in self.sites.iter().enumerate() {
            if s.id != position {
                return Err(GeometryError::SiteIds {
                    position,
                    found: s.id,
                });
            }
        }
        let mut seen = HashSet::new();
        for c in &self.couplings {
            for s in [c.i, c.j] {
                if s >= self.sites.len() {
                    return Err(GeometryError::MissingSite(s));
                }
            }
            if c.i == c.j {
                return Err(GeometryError::SelfCoupling(c.i));
            }
            if !(c.delta > 0.0) {
                return Err(GeometryError::NonPositive {
                    i: c.i,
                    j: c.j,
                    delta: c.delta,
                });
            }
            if !seen.insert((c.i.min(c.j), c.i.max(c.j))) {
                return Err(GeometryError::Duplicate { i: c.i, j: c.j });
            }
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn count(&self, sublattice: Sublattice) -> usize {
        self.sites.iter().filter(|s| s.sublattice == sublattice).count()
    }

    /// Neighbour lists with coupling strengths.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.sites.len()];
        for c in &self.couplings {
            adj[c.i].push((c.j, c.delta));
            adj[c.j].push((c.i, c.delta));
        }
        adj
    }

    pub fn coupling_lookup(&self) -> HashMap<(usize, usize), f64> {
        self.couplings
            .iter()
            .flat_map(|c| [((c.i, c.j), c.delta), ((c.j, c.i), c.delta)])
            .collect()
    }

    /// Real symmetric tight-binding matrix with on-site energies α (A) and β (B).
    pub fn hamiltonian(&self, alpha: f64, beta: f64) -> Mat<f64> {
        let n = self.sites.len();
        let mut h = Mat::<f64>::zeros(n, n);
        for s in &self.sites {
            h[(s.id, s.id)] = match s.sublattice {
                Sublattice::A => alpha,
                Sublattice::B => beta,
            };
        }
        for c in &self.couplings {
            h[(c.i, c.j)] += c.delta;
            h[(c.j, c.i)] += c.delta;
        }
        h
    }

    /// Π block of a bipartite geometry, sites ordered by id within each sublattice.
    pub fn bipartite_blocks(&self) -> Result<BipartiteBlocks, GeometryError> {
        let mut position = vec![0usize; self.sites.len()];
        let mut a_sites = Vec::new();
        let mut b_sites = Vec::new();
        for s in &self.sites {
            match s.sublattice {
                Sublattice::A => {
                    position[s.id] = a_sites.len();
                    a_sites.push(s.id);
                }
                Sublattice::B => {
                    position[s.id] = b_sites.len();
                    b_sites.push(s.id);
                }
            }
        }
        let mut pi = Mat::<f64>::zeros(a_sites.len(), b_sites.len());
        for c in &self.couplings {
            let (si, sj) = (self.sites[c.i].sublattice, self.sites[c.j].sublattice);
            let (a, b) = match (si, sj) {
                (Sublattice::A, Sublattice::B) => (c.i, c.j),
                (Sublattice::B, Sublattice::A) => (c.j, c.i),
                _ => return Err(GeometryError::NotBipartite { i: c.i, j: c.j }),
            };
            pi[(position[a], position[b])] += c.delta;
        }
        Ok(BipartiteBlocks {
            a_sites,
            b_sites,
            pi,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dimer(delta: f64) -> LatticeGeometry {
        LatticeGeometry {
            sites: vec![
                Site { id: 0, sublattice: Sublattice::A, x: 0.0, y: None },
                Site { id: 1, sublattice: Sublattice::B, x: 1.0, y: None },
            ],
            couplings: vec![Coupling { i: 0, j: 1, delta }],
        }
    }

    #[test]
    fn json_shape() {
        let text = serde_json::to_string(&dimer(0.5)).unwrap();
        assert_eq!(
            text,
            r#"{"sites":[{"id":0,"sublattice":"A","x":0.0},{"id":1,"sublattice":"B","x":1.0}],"couplings":[{"i":0,"j":1,"delta":0.5}]}"#
        );
        let back: LatticeGeometry = serde_json::from_str(&text).unwrap();
        assert_eq!(back, dimer(0.5));
    }

    #[test]
    fn rejects_bad_strength() {
        assert!(matches!(
            dimer(0.0).validate(),
            Err(GeometryError::NonPositive { .. })
        ));
    }
}
