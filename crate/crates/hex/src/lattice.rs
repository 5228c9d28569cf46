//! Flakes are unions of hexagonal plaquettes. Plaquette (i, j) has A corners
//! (i, j), (i, j+1), (i−1, j) and B corners (i, j), (i−1, j), (i−1, j−1);
//! a radius-R flake takes every plaquette within hex distance R − 1 of the
//! seed (0, 0) and holds 3R² sites per sublattice.

use std::collections::{BTreeSet, HashMap, VecDeque};

use dmolab_opkit::{Coupling, LatticeGeometry, Site, Sublattice};

use crate::{HexError, HexParams, Result, BOND_VECTORS, LATTICE_VECTORS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub i: i32,
    pub j: i32,
}

impl Label {
    pub const fn new(i: i32, j: i32) -> Self {
        Label { i, j }
    }

    /// Hexagonal distance from the origin label.
    pub fn hex_norm(self) -> i32 {
        self.i.abs().max(self.j.abs()).max((self.i - self.j).abs())
    }

    fn shifted(self, di: i32, dj: i32) -> Self {
        Label::new(self.i + di, self.j + dj)
    }

    fn wrapped(self, cells: i32) -> Self {
        Label::new(self.i.rem_euclid(cells), self.j.rem_euclid(cells))
    }

    /// λ(i a₁ + j a₂).
    fn position(self, period: f64) -> [f64; 2] {
        let [a1, a2] = [LATTICE_VECTORS[0], LATTICE_VECTORS[1]];
        [
            period * (self.i as f64 * a1[0] + self.j as f64 * a2[0]),
            period * (self.i as f64 * a1[1] + self.j as f64 * a2[1]),
        ]
    }
}

/// The three bonds leaving an A site, named by their direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BondKind {
    /// Along b₁, to B with the same label.
    Vertical,
    /// Along b₂, to B(i−1, j−1).
    Left,
    /// Along b₃, to B(i, j−1).
    Right,
}

impl BondKind {
    pub const ALL: [BondKind; 3] = [BondKind::Vertical, BondKind::Left, BondKind::Right];

    pub fn partner(self, a: Label) -> Label {
        match self {
            BondKind::Vertical => a,
            BondKind::Left => a.shifted(-1, -1),
            BondKind::Right => a.shifted(0, -1),
        }
    }

    pub fn vector(self) -> [f64; 2] {
        match self {
            BondKind::Vertical => BOND_VECTORS[0],
            BondKind::Left => BOND_VECTORS[1],
            BondKind::Right => BOND_VECTORS[2],
        }
    }
}

#[derive(Clone, Debug)]
pub struct HexLattice {
    pub geometry: LatticeGeometry,
    /// Label of each site, indexed by site id.
    pub labels: Vec<Label>,
    /// (A label, kind) of each first-neighbour coupling; None for Δ′ bonds.
    pub bonds: Vec<Option<(Label, BondKind)>>,
    pub radius: usize,
}

impl HexLattice {
    pub fn site_of(&self, sublattice: Sublattice, label: Label) -> Option<usize> {
        self.geometry
            .sites
            .iter()
            .position(|s| s.sublattice == sublattice && self.labels[s.id] == label)
    }

    fn index(&self) -> HashMap<(Sublattice, Label), usize> {
        self.geometry
            .sites
            .iter()
            .map(|s| ((s.sublattice, self.labels[s.id]), s.id))
            .collect()
    }

    /// Coupling of the first-neighbour bond (a, kind), if present.
    pub fn coupling(&self, a: Label, kind: BondKind) -> Option<f64> {
        self.bonds
            .iter()
            .position(|b| *b == Some((a, kind)))
            .map(|k| self.geometry.couplings[k].delta)
    }
}

fn flake_labels(radius: usize) -> (BTreeSet<Label>, BTreeSet<Label>) {
    let r = radius as i32;
    let mut a = BTreeSet::new();
    let mut b = BTreeSet::new();
    for i in -r..=r {
        for j in -r..=r {
            let p = Label::new(i, j);
            if p.hex_norm() <= r - 1 {
                a.extend([p, p.shifted(0, 1), p.shifted(-1, 0)]);
                b.extend([p, p.shifted(-1, 0), p.shifted(-1, -1)]);
            }
        }
    }
    (a, b)
}

struct Layout {
    sites: Vec<Site>,
    labels: Vec<Label>,
}

fn layout(a: &BTreeSet<Label>, b: &BTreeSet<Label>, period: f64) -> Layout {
    let mut sites = Vec::with_capacity(a.len() + b.len());
    let mut labels = Vec::with_capacity(a.len() + b.len());
    for (sublattice, set) in [(Sublattice::A, a), (Sublattice::B, b)] {
        for &l in set {
            let [mut x, mut y] = l.position(period);
            if sublattice == Sublattice::B {
                x += period * BOND_VECTORS[0][0];
                y += period * BOND_VECTORS[0][1];
            }
            sites.push(Site { id: sites.len(), sublattice, x, y: Some(y) });
            labels.push(l);
        }
    }
    Layout { sites, labels }
}

/// First-neighbour bonds between present sites, A-site order then kind order.
fn first_neighbour_bonds(
    a: &BTreeSet<Label>,
    index: &HashMap<(Sublattice, Label), usize>,
    wrap: Option<i32>,
) -> Vec<(Label, BondKind, usize, usize)> {
    let mut out = Vec::new();
    for &l in a {
        for kind in BondKind::ALL {
            let mut partner = kind.partner(l);
            if let Some(cells) = wrap {
                partner = partner.wrapped(cells);
            }
            if let Some(&bj) = index.get(&(Sublattice::B, partner)) {
                out.push((l, kind, index[&(Sublattice::A, l)], bj));
            }
        }
    }
    out
}

fn second_neighbour_couplings(
    layout: &Layout,
    index: &HashMap<(Sublattice, Label), usize>,
    delta_prime: f64,
    wrap: Option<i32>,
) -> Vec<Coupling> {
    let mut out = Vec::new();
    if delta_prime == 0.0 {
        return out;
    }
    // a₁, a₂, a₃ in label steps; ±aₖ pairs each site with six others
    let steps = [(1, 0), (0, 1), (-1, -1)];
    for s in &layout.sites {
        for (di, dj) in steps {
            let mut other = layout.labels[s.id].shifted(di, dj);
            if let Some(cells) = wrap {
                other = other.wrapped(cells);
            }
            if let Some(&t) = index.get(&(s.sublattice, other)) {
                out.push(Coupling { i: s.id, j: t, delta: delta_prime });
            }
        }
    }
    out
}

fn site_index(layout: &Layout) -> HashMap<(Sublattice, Label), usize> {
    layout
        .sites
        .iter()
        .map(|s| ((s.sublattice, layout.labels[s.id]), s.id))
        .collect()
}

fn assemble(
    params: &HexParams,
    layout: Layout,
    a: &BTreeSet<Label>,
    wrap: Option<i32>,
    coupling: impl Fn(Label, BondKind) -> f64,
    radius: usize,
) -> HexLattice {
    let index = site_index(&layout);
    let mut couplings = Vec::new();
    let mut bonds = Vec::new();
    for (l, kind, i, j) in first_neighbour_bonds(a, &index, wrap) {
        couplings.push(Coupling { i, j, delta: coupling(l, kind) });
        bonds.push(Some((l, kind)));
    }
    for c in second_neighbour_couplings(&layout, &index, params.delta_prime, wrap) {
        couplings.push(c);
        bonds.push(None);
    }
    HexLattice {
        geometry: LatticeGeometry {
            sites: layout.sites,
            couplings,
        },
        labels: layout.labels,
        bonds,
        radius,
    }
}

/// Regular flake; every first-neighbour coupling is Δ, plus Δ′ between
/// same-sublattice neighbours when Δ′ > 0.
pub fn build_hex_lattice(params: &HexParams) -> Result<HexLattice> {
    let params = params.validated()?;
    let (a, b) = flake_labels(params.radius);
    let layout = layout(&a, &b, params.period);
    Ok(assemble(&params, layout, &a, None, |_, _| params.delta, params.radius))
}

/// Periodic `cells × cells` patch, labels taken modulo `cells`.
pub fn build_hex_torus(params: &HexParams, cells: usize) -> Result<HexLattice> {
    let params = params.validated()?;
    if cells < 3 {
        return Err(HexError::InvalidParams(format!("a torus needs at least 3 cells per side, got {cells}")));
    }
    let n = cells as i32;
    let labels: BTreeSet<Label> = (0..n).flat_map(|i| (0..n).map(move |j| Label::new(i, j))).collect();
    let layout = layout(&labels, &labels, params.period);
    Ok(assemble(&params, layout, &labels, Some(n), |_, _| params.delta, cells))
}

/// Largest radius whose b₂ and b₃ couplings all stay positive; None for ω = 0.
///
/// Inside a radius-R flake the b₂ bonds reach i = R − 1 and the b₃ bonds
/// u = i − j = −R, so both squared couplings bottom out at
/// Δ² − s ω (R − 1) with s the larger share of the split.
pub fn max_feasible_radius(params: &HexParams) -> Option<usize> {
    if params.omega <= 0.0 {
        return None;
    }
    let share = params.angle_split.max(1.0 - params.angle_split);
    Some((params.delta.powi(2) / (share * params.omega)).ceil() as usize)
}

/// Squared b₂ and b₃ couplings solved outward from the seed plaquette:
/// vertical bonds stay Δ, opposite sides of each hexagon are equal, so the
/// b₂ coupling depends on i only and the b₃ coupling on u = i − j only, and
/// one step across a row changes the squares by ∓tω and ±(1 − t)ω.
struct Recurrence {
    left: HashMap<i32, f64>,
    right: HashMap<i32, f64>,
}

impl Recurrence {
    fn solve(params: &HexParams, i_range: (i32, i32), u_range: (i32, i32)) -> Self {
        let d2 = params.delta * params.delta;
        let left_step = params.angle_split * params.omega;
        let right_step = (1.0 - params.angle_split) * params.omega;
        // seed plaquette: b₂ bonds at i = 0, b₃ bonds at u = −1
        let left = walk(0, d2, -left_step, i_range);
        let right = walk(-1, d2, right_step, u_range);
        Recurrence { left, right }
    }

    fn squared(&self, a: Label, kind: BondKind, d2: f64) -> f64 {
        match kind {
            BondKind::Vertical => d2,
            BondKind::Left => self.left[&a.i],
            BondKind::Right => self.right[&(a.i - a.j)],
        }
    }
}

fn walk(seed: i32, start: f64, step: f64, (lo, hi): (i32, i32)) -> HashMap<i32, f64> {
    let mut table = HashMap::new();
    table.insert(seed, start);
    let mut value = start;
    for key in seed + 1..=hi {
        value += step;
        table.insert(key, value);
    }
    value = start;
    for key in (lo..seed).rev() {
        value -= step;
        table.insert(key, value);
    }
    table
}

/// Flake whose b₂ and b₃ couplings realize [Π, Π†] = ω on interior labels.
/// Positions place each bond along its undeformed direction with length
/// λ + d, d = −Λ log(Δ_bond/Δ).
pub fn deform_hex_lattice(params: &HexParams) -> Result<HexLattice> {
    let params = params.validated()?;
    let (a, b) = flake_labels(params.radius);
    let i_range = a.iter().fold((0, 0), |(lo, hi), l| (lo.min(l.i), hi.max(l.i)));
    let u_range = a.iter().fold((-1, -1), |(lo, hi), l| (lo.min(l.i - l.j), hi.max(l.i - l.j)));
    let rec = Recurrence::solve(&params, i_range, u_range);
    let d2 = params.delta * params.delta;
    let layout = layout(&a, &b, params.period);
    let index = site_index(&layout);
    for (l, kind, _, _) in first_neighbour_bonds(&a, &index, None) {
        if rec.squared(l, kind, d2) <= 0.0 {
            return Err(HexError::RadiusTooLarge {
                radius: params.radius,
                max_radius: max_feasible_radius(&params).unwrap_or(params.radius),
            });
        }
    }
    let plain = HexParams {
        delta_prime: 0.0,
        ..params
    };
    let mut lattice = assemble(
        &plain,
        layout,
        &a,
        None,
        |l, kind| rec.squared(l, kind, d2).sqrt(),
        params.radius,
    );
    embed(&mut lattice, &params);
    Ok(lattice)
}

/// Breadth-first placement from the seed A site.
fn embed(lattice: &mut HexLattice, params: &HexParams) {
    let adjacency = lattice.geometry.adjacency();
    let index = lattice.index();
    let Some(&start) = index.get(&(Sublattice::A, Label::new(0, 0))) else {
        return;
    };
    let mut placed = vec![false; lattice.geometry.n_sites()];
    let mut queue = VecDeque::from([start]);
    placed[start] = true;
    while let Some(s) = queue.pop_front() {
        let from = &lattice.geometry.sites[s];
        let (x, y, sub) = (from.x, from.y.unwrap_or(0.0), from.sublattice);
        for &(t, delta) in &adjacency[s] {
            if placed[t] {
                continue;
            }
            let (a_label, b_label) = match sub {
                Sublattice::A => (lattice.labels[s], lattice.labels[t]),
                Sublattice::B => (lattice.labels[t], lattice.labels[s]),
            };
            let kind = BondKind::ALL
                .into_iter()
                .find(|k| k.partner(a_label) == b_label)
                .unwrap_or(BondKind::Vertical);
            let length = params.period - params.decay_length * (delta / params.delta).ln();
            let sign = if sub == Sublattice::A { 1.0 } else { -1.0 };
            let dir = kind.vector();
            let site = &mut lattice.geometry.sites[t];
            site.x = x + sign * length * dir[0];
            site.y = Some(y + sign * length * dir[1]);
            placed[t] = true;
            queue.push_back(t);
        }
    }
}

/// Deviation of [Π, Π†] from ω on labels deep inside the flake, with A and B
/// sites identified by label.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorReport {
    pub interior_labels: usize,
    pub max_deviation: f64,
}

/// Rows of ΠΠ† − Π†Π over first-neighbour bonds for labels with hex distance ≤ radius − 3, against ω·Id.
pub fn ladder_commutator(lattice: &HexLattice, omega: f64) -> Result<CommutatorReport> {
    lattice.geometry.validate()?;
    let index = lattice.index();
    let adjacency = lattice.geometry.adjacency();
    let limit = lattice.radius as i32 - 3;
    let mut interior = 0;
    let mut max_deviation: f64 = 0.0;
    for (&(sub, label), &site) in &index {
        if sub != Sublattice::A || label.hex_norm() > limit {
            continue;
        }
        let Some(&b_site) = index.get(&(Sublattice::B, label)) else {
            continue;
        };
        interior += 1;
        let mut row: HashMap<Label, f64> = HashMap::new();
        // (ΠΠ†)[X, Y] = Σ_b Π[X, b] Π[Y, b]
        let across = |s: usize, t: usize| lattice.geometry.sites[s].sublattice != lattice.geometry.sites[t].sublattice;
        for &(b, c) in adjacency[site].iter().filter(|e| across(site, e.0)) {
            for &(y, c2) in adjacency[b].iter().filter(|e| across(b, e.0)) {
                *row.entry(lattice.labels[y]).or_default() += c * c2;
            }
        }
        // (Π†Π)[X, Z] = Σ_a Π[a, X] Π[a, Z]
        for &(a, c) in adjacency[b_site].iter().filter(|e| across(b_site, e.0)) {
            for &(z, c2) in adjacency[a].iter().filter(|e| across(a, e.0)) {
                *row.entry(lattice.labels[z]).or_default() -= c * c2;
            }
        }
        for (other, value) in row {
            let target = if other == label { omega } else { 0.0 };
            max_deviation = max_deviation.max((value - target).abs());
        }
    }
    Ok(CommutatorReport {
        interior_labels: interior,
        max_deviation,
    })
}
