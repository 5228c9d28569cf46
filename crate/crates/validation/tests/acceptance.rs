//! The ten acceptance criteria, run in order with one PASS/FAIL line each.
//! Exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::panic;
use std::process::ExitCode;
use std::time::Duration;

use dmolab_chain::{level_law, ChainParams};
use dmolab_dmo::analytic::expand_levels;
use dmolab_dmo::{
    analytic_spectrum, numeric_spectrum, susy_anticommutator_check, two_particle_spectrum, Dimension, DmoParams,
    HalfInt, ParityClass,
};
use dmolab_extended::blocks::block_twice_invariant_3d;
use dmolab_extended::dynamics::time_grid;
use dmolab_extended::{
    block_4x4_1d, block_4x4_3d, block_basis_1d, dynamics_run, resonance_scan, Branch, ExtendedDim, ExtendedParams,
    ExtendedSystem, InitialState, SectorKey,
};
use dmolab_hex::{
    build_hex_lattice, conic_analysis, deform_hex_lattice, dirac_points, hex_dispersion, ladder_commutator,
    level_peaks, phase_sum, second_neighbor_dispersion, BondKind, HexLattice, HexParams, Label, PeakProtocol,
    MAX_DENSE_SITES,
};
use dmolab_manybody::{cockroach_nest_count, ManyBodyParams};
use dmolab_opkit::spectrum::multiset_distance;
use dmolab_opkit::DEFAULT_BUFFER;
use dmolab_validation::Verdict;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_d3c0;

/// Closed-form levels shared by every dimension: E = −m or E² = m² + ωq, q ≥ 1.
fn nearest_closed_form(e: f64, mass: f64, omega: f64) -> f64 {
    let q = ((e * e - mass * mass) / omega).round().max(1.0);
    let on_ladder = (e.abs() - (mass * mass + omega * q).sqrt()).abs();
    on_ladder.min((e + mass).abs())
}

fn criterion_1(v: &mut Verdict) {
    for (dim, cutoff) in [(Dimension::One, 60), (Dimension::Two, 40), (Dimension::Three, 10)] {
        for mass in [0.0, 1.0] {
            let p = DmoParams::new(mass, 1.0, dim).unwrap();
            let numeric = numeric_spectrum(&p, cutoff, DEFAULT_BUFFER).unwrap().eigenvalues;
            let levels = analytic_spectrum(&p, cutoff - DEFAULT_BUFFER).labels.unwrap();
            let analytic = expand_levels(&levels);
            let gap = multiset_distance(&numeric, &analytic).unwrap_or(f64::INFINITY);
            let worst = numeric
                .iter()
                .map(|&e| nearest_closed_form(e, mass, 1.0))
                .fold(0.0, f64::max);
            v.check(
                format!(
                    "d={} cutoff {cutoff} m={mass}: {} safe levels, labelled gap {gap:.1e}, closed-form gap {worst:.1e} <= 1e-10",
                    dim.number(),
                    numeric.len()
                ),
                gap <= 1e-10 && worst <= 1e-10,
            );
        }
    }
    v.within(Duration::from_secs(30));
}

fn criterion_2(v: &mut Verdict) {
    let report = susy_anticommutator_check(8, DEFAULT_BUFFER).unwrap();
    v.check(
        format!(
            "cutoff 8 safe residual {:.1e} < 1e-10 (full basis {:.1e})",
            report.safe_residual, report.full_residual
        ),
        report.safe_residual < 1e-10,
    );
}

fn is_subset(small: &[f64], large: &[f64], tol: f64) -> bool {
    let mut pool = large.to_vec();
    small.iter().all(|e| {
        match pool.iter().position(|x| (x - e).abs() <= tol) {
            Some(k) => {
                pool.swap_remove(k);
                true
            }
            None => false,
        }
    })
}

fn all_distinct(values: &[f64], tol: f64) -> bool {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).all(|w| w[1] - w[0] > tol)
}

fn criterion_3(v: &mut Verdict) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut checked, mut embedded, mut lifted, mut four_state) = (0, 0, 0, 0);
    for _ in 0..20 {
        let scalar = rng.random_range(-1.5..1.5);
        let weighted = rng.random_range(-1.5..1.5);
        let gamma = rng.random_range(0.1..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let mass = rng.random_range(0.0..2.0);
        let coupled = scalar * scalar + weighted * weighted > 0.0 && gamma != 0.0;

        // 3D: sector (I, J_z = 1/2) holds the (n, j) block; the top state has I + 1 = 16 quanta
        let p3 = ExtendedParams::new(mass, gamma, scalar, weighted, ExtendedDim::Three).unwrap();
        let s3 = ExtendedSystem::build(p3, 16).unwrap();
        for n in 0..=6usize {
            for twice_j in [1, 3, 5, 7] {
                let j = HalfInt::from_twice(twice_j);
                let key = SectorKey {
                    twice_invariant: block_twice_invariant_3d(n, j),
                    twice_jz: Some(1),
                };
                let indices = s3.sector_indices(key);
                let sector = s3.sector_spectrum(&indices).unwrap();
                let block = block_4x4_3d(&p3, n, j).unwrap();
                let e = block.eigenvalues();
                checked += 1;
                embedded += usize::from(indices.iter().all(|&k| s3.is_exact(k)) && is_subset(&e, &sector, 1e-9));
                if coupled && block.active == 4 {
                    four_state += 1;
                    lifted += usize::from(all_distinct(&e, 1e-8));
                }
            }
        }

        let p1 = ExtendedParams::new(mass, gamma, scalar, weighted, ExtendedDim::One).unwrap();
        let s1 = ExtendedSystem::build(p1, 12).unwrap();
        for n in 0..=6usize {
            let key = s1.sector_of(block_basis_1d(n)[0].index_in(&s1).unwrap());
            let sector = s1.sector_spectrum(&s1.sector_indices(key)).unwrap();
            let e = block_4x4_1d(&p1, n).eigenvalues();
            checked += 1;
            embedded += usize::from(is_subset(&e, &sector, 1e-9));
            if coupled {
                four_state += 1;
                lifted += usize::from(all_distinct(&e, 1e-8));
            }
        }
    }
    v.check(
        format!("{embedded}/{checked} blocks (20 draws, 1D and 3D, n <= 6, j <= 7/2) inside the numeric sector within 1e-9"),
        embedded == checked,
    );
    v.check(
        format!("{lifted}/{four_state} coupled four-state blocks have 4 distinct eigenvalues"),
        lifted == four_state && four_state > 0,
    );
}

fn criterion_4(v: &mut Verdict) {
    let base = ExtendedParams::double_jaynes_cummings(1.0, 1.0).unwrap();
    let gammas: Vec<f64> = (0..41).map(|k| 2.0 * k as f64 / 40.0).collect();
    let step = gammas[1] - gammas[0];
    let (horizon, samples, cutoff) = (200.0, 2001, 16);
    let times = time_grid(horizon, samples);
    for theta in [0.0, PI / 4.0] {
        let initial = InitialState {
            n: 0,
            branch: Branch::Positive,
            theta,
        };
        let scan = resonance_scan(&base, &initial, &gammas, horizon, samples, cutoff).unwrap();
        let best = scan
            .iter()
            .min_by(|a, b| a.mean_purity.total_cmp(&b.mean_purity))
            .unwrap();
        v.check(
            format!(
                "theta={theta:.4}: arg-min mean purity at gamma={:.2} (mean {:.4}), needs |gamma - 1| <= {step:.2}",
                best.gamma, best.mean_purity
            ),
            (best.gamma - 1.0).abs() <= step + 1e-12,
        );

        let (mut p0, mut lo, mut hi, mut s_lo, mut s_hi) = (0.0f64, f64::INFINITY, 0.0f64, f64::INFINITY, 0.0f64);
        for &gamma in &gammas {
            let series = dynamics_run(&base.with_gamma(gamma), &initial, &times, cutoff, cutoff - 4).unwrap();
            p0 = p0.max((series.samples[0].purity - 1.0).abs());
            for s in &series.samples {
                lo = lo.min(s.purity);
                hi = hi.max(s.purity);
                s_lo = s_lo.min(s.entropy);
                s_hi = s_hi.max(s.entropy);
            }
        }
        v.check(format!("theta={theta:.4}: max |P(0) - 1| = {p0:.1e} <= 1e-10"), p0 <= 1e-10);
        let tol = 1e-12;
        v.check(
            format!("theta={theta:.4}: P in [{lo:.6}, {hi:.6}] within [1/2, 1], S in [{s_lo:.6}, {s_hi:.6}] within [0, log 2]"),
            lo >= 0.5 - tol && hi <= 1.0 + tol && s_lo >= -tol && s_hi <= LN_2 + tol,
        );
    }
    v.within(Duration::from_secs(120));
}

fn criterion_5(v: &mut Verdict) {
    let cases = [
        (0u8, ParityClass::Natural, 0usize),
        (1, ParityClass::Natural, 2),
        (1, ParityClass::Unnatural, 1),
    ];
    let omegas = [0.1, 0.25, 1.0, 3.7, 0.013];
    let mut exact = 0;
    let mut total = 0;
    for k in 0..30usize {
        let (spin, parity, shift) = cases[k % 3];
        let quanta = k / 3;
        let omega = omegas[k % omegas.len()];
        let e = 2.0 * (1.0 + omega * (quanta + shift) as f64).sqrt();
        let got = two_particle_spectrum(omega, quanta, spin, parity).unwrap();
        total += 1;
        exact += usize::from(got == [-e, 0.0, e]);
    }
    v.check(format!("{exact}/{total} (N, s, parity, omega) tuples bit-identical to the closed form"), exact == total);
    v.check(
        "s = 0 with unnatural parity is rejected",
        two_particle_spectrum(1.0, 0, 0, ParityClass::Unnatural).is_err(),
    );
}

fn criterion_6(v: &mut Verdict) {
    let mut counts = Vec::new();
    for cutoff in [4usize, 6, 8] {
        let p = ManyBodyParams::new(2, 1.0, 1.0, cutoff).unwrap();
        let report = cockroach_nest_count(&p, 1e-10).unwrap();
        if cutoff == 6 {
            v.check(
                format!(
                    "cutoff 6: {} of 2x7 aligned states annihilated, max |K psi| = {:.1e} < 1e-10",
                    report.nest_count, report.max_residual
                ),
                report.nest_count == 14 && report.max_residual < 1e-10,
            );
        }
        counts.push(report.nest_count);
    }
    let linear = counts[1] > counts[0] && counts[2] - counts[1] == counts[1] - counts[0];
    v.check(format!("counts {counts:?} over cutoffs [4, 6, 8] grow linearly"), linear);
}

fn criterion_7(v: &mut Verdict) {
    let omega = 0.004;
    for mass_split in [0.0, 0.2] {
        let p = ChainParams::from_mass_split(0.0, mass_split, 1.0, 400, omega).unwrap().centered();
        let report = level_law(&p, 8).unwrap();
        v.check(
            format!(
                "M={mass_split}: {} levels n=1..8, max relative error {:.1e} < 1e-2",
                report.levels.len(),
                report.max_relative_error
            ),
            report.levels.len() == 8 && report.max_relative_error < 0.01,
        );
        if mass_split == 0.0 {
            let ratio = report.gap / (2.0 * omega.sqrt());
            v.check(format!("M=0 gap / 2 sqrt(omega) = {ratio:.4}, within 20%"), (ratio - 1.0).abs() < 0.2);
        }
    }
    v.within(Duration::from_secs(60));
}

/// Central differences of E² at k₀, halved to match u uᵀ + v vᵀ.
fn half_hessian_eigenvalues(p: &HexParams, k0: [f64; 2]) -> [f64; 2] {
    let h = 1e-4;
    let e2 = |dx: f64, dy: f64| second_neighbor_dispersion(p, [k0[0] + dx, k0[1] + dy]).powi(2);
    let xx = 0.5 * (e2(h, 0.0) - 2.0 * e2(0.0, 0.0) + e2(-h, 0.0)) / (h * h);
    let yy = 0.5 * (e2(0.0, h) - 2.0 * e2(0.0, 0.0) + e2(0.0, -h)) / (h * h);
    let xy = 0.5 * (e2(h, h) - e2(h, -h) - e2(-h, h) + e2(-h, -h)) / (4.0 * h * h);
    let mean = 0.5 * (xx + yy);
    let spread = (0.25 * (xx - yy).powi(2) + xy * xy).sqrt();
    [mean - spread, mean + spread]
}

fn criterion_8(v: &mut Verdict) {
    let p = HexParams::default();
    let points = dirac_points(&p).unwrap();
    let phase = points.iter().map(|&k| phase_sum(&p, k).norm()).fold(0.0, f64::max);
    v.check(format!("|phase sum| at located K = {phase:.1e} < 1e-12"), phase < 1e-12);

    let k0 = points[0];
    let scale = p.delta * p.period;
    let mut worst = 0.0f64;
    let mut mean = 0.0;
    let mut count = 0;
    for lk in [1e-4, 1e-3, 5e-3, 9e-3] {
        for n in 0..16 {
            let angle = 2.0 * PI * n as f64 / 16.0;
            let kappa = lk / p.period;
            let k = [k0[0] + kappa * angle.cos(), k0[1] + kappa * angle.sin()];
            let ratio = hex_dispersion(&p, k).0 / (scale * kappa);
            worst = worst.max((ratio - 1.0).abs());
            mean += ratio;
            count += 1;
        }
    }
    mean /= count as f64;
    v.check(
        format!("cone slope / (Delta lambda) = {mean:.6} for lambda|kappa| < 0.01, max deviation {worst:.3} (needs < 0.01)"),
        worst < 0.01,
    );

    let isotropic = conic_analysis(&p, k0).axis_ratio();
    v.check(format!("Delta'=0 axis ratio {isotropic:.9} = 1 +- 1e-6"), (isotropic - 1.0).abs() <= 1e-6);

    let p2 = HexParams {
        delta_prime: 0.1 * p.delta,
        ..p
    };
    let k2 = dirac_points(&p2).unwrap()[0];
    let conic = conic_analysis(&p2, k2);
    let oracle = half_hessian_eigenvalues(&p2, k2);
    let axes_gap = conic
        .principal_axes
        .iter()
        .zip(oracle)
        .map(|(a, b)| (a / b - 1.0).abs())
        .fold(0.0, f64::max);
    let hessian_ratio = (oracle[1] / oracle[0]).sqrt();
    let ratio_gap = (conic.axis_ratio() / hessian_ratio - 1.0).abs();
    v.check(
        format!("Delta'=0.1 Delta axis ratio {:.4} > 1.02", conic.axis_ratio()),
        conic.axis_ratio() > 1.02,
    );
    v.check(
        format!("Delta'=0.1 Delta Hessian ratio {hessian_ratio:.4}, axes off by {axes_gap:.1e}, ratio off by {ratio_gap:.1e} < 5%"),
        axes_gap < 0.05 && ratio_gap < 0.05,
    );
}

fn bond_map(lattice: &HexLattice) -> HashMap<(Label, BondKind), f64> {
    lattice
        .bonds
        .iter()
        .zip(&lattice.geometry.couplings)
        .filter_map(|(b, c)| b.map(|key| (key, c.delta)))
        .collect()
}

fn criterion_9(v: &mut Verdict) {
    let p = HexParams {
        radius: 15,
        omega: 0.01,
        ..HexParams::default()
    };
    let lattice = deform_hex_lattice(&p).unwrap();
    let report = ladder_commutator(&lattice, p.omega).unwrap();
    v.check(
        format!(
            "[a, a+] - omega Id on {} interior sites: {:.1e} < 1e-12",
            report.interior_labels, report.max_deviation
        ),
        report.max_deviation < 1e-12 && report.interior_labels > 0,
    );

    let bonds = bond_map(&lattice);
    let r = p.radius as i32;
    let (mut pairs, mut equal) = (0, 0);
    for i in -r..=r {
        for j in -r..=r {
            let c = Label::new(i, j);
            if c.hex_norm() > r - 1 {
                continue;
            }
            let up = Label::new(i, j + 1);
            let left = Label::new(i - 1, j);
            let opposite = [
                [(c, BondKind::Vertical), (left, BondKind::Vertical)],
                [(c, BondKind::Left), (up, BondKind::Left)],
                [(up, BondKind::Right), (left, BondKind::Right)],
            ];
            for [x, y] in opposite {
                if let (Some(a), Some(b)) = (bonds.get(&x), bonds.get(&y)) {
                    pairs += 1;
                    equal += usize::from(a == b);
                }
            }
        }
    }
    v.check(format!("opposite sides bit-identical on {equal}/{pairs} plaquette pairs"), equal == pairs && pairs > 0);

    let regular = build_hex_lattice(&HexParams { omega: 0.0, ..p }).unwrap();
    let mut gap = 0.0f64;
    let mut same_bonds = true;
    for omega in [0.0, 1e-14] {
        let limit = deform_hex_lattice(&HexParams { omega, ..p }).unwrap();
        same_bonds &= limit.geometry.couplings.len() == regular.geometry.couplings.len();
        for (a, b) in limit.geometry.couplings.iter().zip(&regular.geometry.couplings) {
            same_bonds &= (a.i, a.j) == (b.i, b.j);
            gap = gap.max((a.delta - b.delta).abs());
        }
    }
    v.check(format!("omega -> 0 couplings match the regular lattice to {gap:.1e} <= 1e-12"), same_bonds && gap <= 1e-12);
}

fn criterion_10(v: &mut Verdict) {
    let p = HexParams {
        radius: 40,
        omega: 0.04,
        ..HexParams::default()
    };
    let lattice = deform_hex_lattice(&p).unwrap();
    let sites = lattice.geometry.n_sites();
    v.check(format!("{sites} sites <= 10000"), sites <= 10_000 && sites <= MAX_DENSE_SITES);
    let peaks = level_peaks(&lattice, &p, &PeakProtocol::default()).unwrap();
    let root = p.omega.sqrt();
    let scaled: Vec<String> = peaks.levels.iter().map(|e| format!("{:.3}", (e - p.offset) / root)).collect();
    v.check(
        format!(
            "{} levels above E0 [{}] sqrt(omega), max relative error {:.1e} < 5e-2",
            peaks.levels.len(),
            scaled.join(", "),
            peaks.max_relative_error
        ),
        peaks.levels.len() == 6 && peaks.max_relative_error < 0.05,
    );
    let gap = peaks.gap / root;
    v.check(format!("gap at E0 = {gap:.4} sqrt(omega) in [1.6, 2.4]"), (1.6..=2.4).contains(&gap));
    v.within(Duration::from_secs(300));
}

type Criterion = (u32, &'static str, fn(&mut Verdict));

const CRITERIA: [Criterion; 10] = [
    (1, "free oscillator: numeric vs closed form", criterion_1),
    (2, "supercharge algebra on the safe subspace", criterion_2),
    (3, "extended-model blocks in the full spectrum", criterion_3),
    (4, "entanglement resonance at gamma = m", criterion_4),
    (5, "two-particle closed form", criterion_5),
    (6, "aligned-spin kernel states", criterion_6),
    (7, "deformed chain square-root levels", criterion_7),
    (8, "honeycomb dispersion identities", criterion_8),
    (9, "honeycomb ladder commutator", criterion_9),
    (10, "deformed honeycomb levels", criterion_10),
];

fn main() -> ExitCode {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for (id, title, run) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let mut verdict = Verdict::new(id, title);
        let outcome = panic::catch_unwind(panic::AssertUnwindSafe(|| {
            let mut inner = Verdict::new(id, title);
            run(&mut inner);
            inner.checks
        }));
        match outcome {
            Ok(checks) => verdict.checks = checks,
            Err(_) => {
                verdict.check("aborted with a panic", false);
            }
        }
        print!("{}", verdict.finish());
        ran += 1;
        if !verdict.passed() {
            failed.push(id);
        }
    }
    println!("acceptance: {}/{ran} criteria passed", ran - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
