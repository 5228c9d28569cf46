use dmolab_extended::dynamics::time_grid;
use dmolab_extended::{
    dynamics_run, purity_entropy, reduced_density, resonance_scan, Branch, ExtendedDim, ExtendedError,
    ExtendedParams, ExtendedSystem, InitialState, SubsystemPartition,
};
use dmolab_opkit::{c64, norm, BasisSpec, Factor, Mat, OpkitError, Propagator};
use proptest::prelude::*;

const LN2: f64 = std::f64::consts::LN_2;

fn basis_1d(cutoff: usize) -> BasisSpec {
    BasisSpec::new(vec![Factor::Spin, Factor::Spin, Factor::Fock { cutoff, modes: 1 }]).unwrap()
}

fn normalized(mut v: Vec<c64>) -> Vec<c64> {
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

#[test]
fn product_state_is_pure() {
    let s = ExtendedSystem::build(ExtendedParams::double_jaynes_cummings(1.0, 1.0).unwrap(), 6).unwrap();
    let initial = InitialState {
        n: 1,
        branch: Branch::Positive,
        theta: 0.3,
    };
    let psi = initial.vector(&s).unwrap();
    assert!((norm(&psi) - 1.0).abs() < 1e-14);
    let (p, e) = purity_entropy(&psi, s.basis(), SubsystemPartition::default()).unwrap();
    assert!((p - 1.0).abs() < 1e-12 && e.abs() < 1e-9);
}

#[test]
fn bell_state_is_maximally_mixed() {
    let basis = basis_1d(3);
    let mut psi = vec![c64::new(0.0, 0.0); basis.total_dim()];
    // (|+,+,0⟩ + |−,−,1⟩)/√2
    psi[basis.with_component(basis.with_component(0, 0, 0), 1, 0)] = c64::new(1.0, 0.0);
    let k = basis.with_component(basis.with_component(1, 0, 1), 1, 1);
    psi[k] = c64::new(0.0, 1.0);
    let psi = normalized(psi);
    let (p, e) = purity_entropy(&psi, &basis, SubsystemPartition::default()).unwrap();
    assert!((p - 0.5).abs() < 1e-12);
    assert!((e - LN2).abs() < 1e-12);
}

#[test]
fn unnormalized_state_rejected() {
    let basis = basis_1d(2);
    let psi = vec![c64::new(1.0, 0.0); basis.total_dim()];
    assert!(matches!(
        purity_entropy(&psi, &basis, SubsystemPartition::default()),
        Err(ExtendedError::Operator(OpkitError::Unnormalized(_)))
    ));
}

/// Purity of the oscillator-and-*-spin side, from the large reduced matrix.
fn complement_purity(psi: &[c64], basis: &BasisSpec) -> f64 {
    let rest: Vec<usize> = (0..psi.len()).filter(|&k| basis.component(k, 1) == 0).collect();
    let d = rest.len();
    let mut rho = Mat::<c64>::zeros(d, d);
    for t in 0..2 {
        for (a, &ka) in rest.iter().enumerate() {
            for (b, &kb) in rest.iter().enumerate() {
                rho[(a, b)] += psi[basis.with_component(ka, 1, t)] * psi[basis.with_component(kb, 1, t)].conj();
            }
        }
    }
    let mut tr = 0.0;
    for a in 0..d {
        for b in 0..d {
            tr += (rho[(a, b)] * rho[(b, a)]).re;
        }
    }
    tr
}

fn splitmix(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64 - 0.5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn purity_and_entropy_bounds(seed in any::<u64>()) {
        let basis = basis_1d(4);
        let mut s = seed;
        let psi = normalized((0..basis.total_dim()).map(|_| c64::new(splitmix(&mut s), splitmix(&mut s))).collect());
        let (p, e) = purity_entropy(&psi, &basis, SubsystemPartition::default()).unwrap();
        prop_assert!((0.5 - 1e-12..=1.0).contains(&p));
        prop_assert!((-1e-15..=LN2 + 1e-12).contains(&e));
        prop_assert!((complement_purity(&psi, &basis) - p).abs() < 1e-10);
        let star = reduced_density(&psi, &basis, 0).unwrap();
        prop_assert!(((star[(0, 0)] + star[(1, 1)]).re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn decoupled_isospin_stays_pure() {
    let p = ExtendedParams::new(1.0, 0.7, 0.0, 0.0, ExtendedDim::One).unwrap();
    let initial = InitialState {
        n: 2,
        branch: Branch::Negative,
        theta: 0.4,
    };
    let series = dynamics_run(&p, &initial, &time_grid(50.0, 201), 10, 2).unwrap();
    for s in &series.samples {
        assert!((s.purity - 1.0).abs() < 1e-10 && s.entropy < 1e-8, "{s:?}");
    }
}

/// Fourth-order Runge–Kutta on i dψ/dt = Hψ, as an independent propagator.
fn stepped_purities(p: &ExtendedParams, initial: &InitialState, cutoff: usize, horizon: f64, steps: usize) -> Vec<f64> {
    let s = ExtendedSystem::build(*p, cutoff).unwrap();
    let h = s.hamiltonian();
    let dt = horizon / steps as f64;
    let rhs = |v: &[c64]| -> Vec<c64> { h.apply(v).unwrap().into_iter().map(|x| x * c64::new(0.0, -1.0)).collect() };
    let axpy = |v: &[c64], k: &[c64], a: f64| -> Vec<c64> { v.iter().zip(k).map(|(x, y)| x + y * a).collect() };
    let mut psi = initial.vector(&s).unwrap();
    let mut out = vec![];
    for _ in 0..=steps {
        // RK4 drifts the norm slightly
        out.push(purity_entropy(&normalized(psi.clone()), s.basis(), SubsystemPartition::default()).unwrap().0);
        let k1 = rhs(&psi);
        let k2 = rhs(&axpy(&psi, &k1, 0.5 * dt));
        let k3 = rhs(&axpy(&psi, &k2, 0.5 * dt));
        let k4 = rhs(&axpy(&psi, &k3, dt));
        for i in 0..psi.len() {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    out
}

#[test]
fn resonant_dip_matches_independent_propagator() {
    let p = ExtendedParams::double_jaynes_cummings(1.0, 1.0).unwrap();
    let initial = InitialState {
        n: 0,
        branch: Branch::Positive,
        theta: std::f64::consts::FRAC_PI_4,
    };
    let horizon = 20.0;
    let steps = 4000;
    let series = dynamics_run(&p, &initial, &time_grid(horizon, steps + 1), 40, 2).unwrap();
    let stepped = stepped_purities(&p, &initial, 40, horizon, steps);
    for (s, q) in series.samples.iter().zip(&stepped) {
        assert!((s.purity - q).abs() < 1e-4, "t={} {} vs {q}", s.t, s.purity);
    }
    let dip = series.min_purity();
    println!("resonant purity dip over t <= {horizon}: {dip:.6}");
    assert!(dip < 0.9, "dip {dip}");
    assert!((series.samples[0].purity - 1.0).abs() < 1e-10);
}

#[test]
fn evolution_is_unitary() {
    let p = ExtendedParams::double_jaynes_cummings(1.0, 0.6).unwrap();
    let s = ExtendedSystem::build(p, 12).unwrap();
    let initial = InitialState {
        n: 1,
        branch: Branch::Positive,
        theta: 0.9,
    };
    let prop = Propagator::new(s.hamiltonian()).unwrap();
    let overlaps = prop.project(&initial.vector(&s).unwrap()).unwrap();
    for t in time_grid(100.0, 51) {
        assert!((norm(&prop.state_at(&overlaps, t)) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn cutoff_precondition() {
    let p = ExtendedParams::double_jaynes_cummings(1.0, 1.0).unwrap();
    let initial = InitialState {
        n: 3,
        branch: Branch::Positive,
        theta: 0.0,
    };
    match dynamics_run(&p, &initial, &[0.0], 8, 2) {
        Err(ExtendedError::CutoffTooSmall { cutoff: 8, minimum: 9 }) => {}
        other => panic!("unexpected {other:?}"),
    }
    let three = ExtendedParams::new(1.0, 1.0, 1.0, 0.0, ExtendedDim::Three).unwrap();
    assert!(dynamics_run(&three, &initial, &[0.0], 9, 2).is_err());
}

#[test]
fn scan_is_deterministic_and_off_resonance_is_purer() {
    let base = ExtendedParams::double_jaynes_cummings(1.0, 0.0).unwrap();
    let initial = InitialState {
        n: 0,
        branch: Branch::Positive,
        theta: 0.0,
    };
    let gammas = [1.0, 10.0, 0.5];
    let a = resonance_scan(&base, &initial, &gammas, 100.0, 501, 8).unwrap();
    let b = resonance_scan(&base, &initial, &gammas, 100.0, 501, 8).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.iter().map(|p| p.gamma).collect::<Vec<_>>(), vec![0.5, 1.0, 10.0]);
    assert!(a[2].mean_purity > a[1].mean_purity);
    assert!(a.iter().all(|p| p.min_purity <= p.mean_purity));
}
