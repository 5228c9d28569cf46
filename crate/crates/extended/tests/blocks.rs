use dmolab_dmo::HalfInt;
use dmolab_extended::blocks::block_twice_invariant_3d;
use dmolab_extended::{
    block_4x4_1d, block_4x4_3d, block_basis_1d, ExtendedDim, ExtendedParams, ExtendedSystem, SectorKey,
};
use dmolab_opkit::spectrum::multiset_distance;
use dmolab_opkit::{
    c64, diagonalize, embed_spin, make_ladder, BasisSpec, Factor, OperatorMatrix, Pauli, DEFAULT_BUFFER,
};
use proptest::prelude::*;

fn params(m: f64, gamma: f64, a: f64, b: f64, d: ExtendedDim) -> ExtendedParams {
    ExtendedParams::new(m, gamma, a, b, d).unwrap()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Greedy multiset inclusion within `tol`.
fn is_subset(part: &[f64], whole: &[f64], tol: f64) -> bool {
    let mut used = vec![false; whole.len()];
    part.iter().all(|x| {
        match (0..whole.len()).find(|&k| !used[k] && (whole[k] - x).abs() <= tol) {
            Some(k) => {
                used[k] = true;
                true
            }
            None => false,
        }
    })
}

#[test]
fn hamiltonian_hermitian_and_conserves_invariant() {
    let s = ExtendedSystem::build(params(0.7, 0.4, 0.9, -0.3, ExtendedDim::One), 20).unwrap();
    assert!(s.hamiltonian().hermiticity_defect() < 1e-12);
    assert!(s.hamiltonian().commutator(&s.invariant()).unwrap().max_abs() < 1e-11);

    let s = ExtendedSystem::build(params(0.7, 0.4, 0.9, -0.3, ExtendedDim::Three), 5).unwrap();
    let h = s.hamiltonian();
    assert!(h.hermiticity_defect() < 1e-12);
    assert!(h.is_real());
    assert!(h.commutator(&s.invariant()).unwrap().max_abs() < 1e-11);
    assert!(h.commutator(&s.jz().unwrap()).unwrap().max_abs() < 1e-11);
}

/// The same 3D model written with Cartesian modes and complex σ_y.
fn cartesian_3d(p: &ExtendedParams, cutoff: usize) -> OperatorMatrix {
    let basis = BasisSpec::new(vec![
        Factor::Spin,
        Factor::Spin,
        Factor::Spin,
        Factor::Fock { cutoff, modes: 3 },
    ])
    .unwrap();
    let dim = basis.total_dim();
    let mut x = OperatorMatrix::zeros(dim);
    for (k, which) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
        x = &x + &(&embed_spin(&basis, 2, which).unwrap() * &make_ladder(&basis, k).unwrap());
    }
    let star_up = embed_spin(&basis, 0, Pauli::Raise).unwrap();
    let star_z = embed_spin(&basis, 0, Pauli::Z).unwrap();
    let iso_up = embed_spin(&basis, 1, Pauli::Raise).unwrap();
    let iso_z = embed_spin(&basis, 1, Pauli::Z).unwrap();
    let kin = &star_up * &x;
    let hop = &iso_up * &x;
    let h0 = &(&kin + &kin.adjoint()) + &star_z.scale_real(p.mass);
    let field = &(&hop + &hop.adjoint()) + &iso_z.scale_real(p.gamma);
    let pre = &OperatorMatrix::identity(dim).scale(c64::new(p.scalar, 0.0)) + &star_z.scale_real(p.weighted);
    &h0 + &(&pre * &field)
}

#[test]
fn circular_basis_matches_cartesian_model() {
    let p = params(0.8, 0.6, 0.4, 0.2, ExtendedDim::Three);
    let circular = ExtendedSystem::build(p, 4).unwrap();
    let a = diagonalize(circular.hamiltonian(), false).unwrap().eigenvalues;
    let b = diagonalize(&cartesian_3d(&p, 4), false).unwrap().eigenvalues;
    assert!(multiset_distance(&a, &b).unwrap() < 1e-10);
}

#[test]
fn uncoupled_blocks_split_into_free_pairs() {
    let m = 0.6;
    let p1 = params(m, 0.9, 0.0, 0.0, ExtendedDim::One);
    let p3 = params(m, 0.9, 0.0, 0.0, ExtendedDim::Three);
    for n in 0..5usize {
        let nf = n as f64;
        let e = block_4x4_1d(&p1, n).eigenvalues();
        let expected = sorted(vec![
            -(m * m + nf + 1.0).sqrt(),
            (m * m + nf + 1.0).sqrt(),
            -(m * m + nf + 2.0).sqrt(),
            (m * m + nf + 2.0).sqrt(),
        ]);
        assert!(multiset_distance(&e, &expected).unwrap() < 1e-12);
        for twice_j in [1, 3, 5] {
            let j = HalfInt::from_twice(twice_j);
            let e = block_4x4_3d(&p3, n, j).unwrap().eigenvalues();
            let wide = (m * m + 2.0 * (nf + j.value() + 1.0)).sqrt();
            let narrow = (m * m + 2.0 * nf).sqrt();
            // at n = 0 the ++ partner is missing and −+ stays at −m
            let expected = if n == 0 {
                vec![-wide, wide, -m]
            } else {
                vec![-wide, wide, -narrow, narrow]
            };
            assert!(multiset_distance(&e, &sorted(expected)).unwrap() < 1e-12, "n={n} j={j}");
        }
    }
}

#[test]
fn free_limit_doubles_the_oscillator() {
    let m = 1.0;
    let s = ExtendedSystem::build(params(m, 0.0, 0.0, 0.0, ExtendedDim::One), 16).unwrap();
    let safe = s.safe_spectrum(DEFAULT_BUFFER).unwrap();
    for n in 0..6usize {
        let e = (m * m + (n + 1) as f64).sqrt();
        assert_eq!(safe.iter().filter(|x| (**x - e).abs() < 1e-10).count(), 2, "level {n}");
    }
}

/// Elementary symmetric polynomials of the roots from the Faddeev–LeVerrier
/// coefficients of the characteristic polynomial.
fn characteristic_coefficients(a: &[[f64; 4]; 4]) -> [f64; 4] {
    let mul = |x: &[[f64; 4]; 4], y: &[[f64; 4]; 4]| {
        let mut z = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                z[i][j] = (0..4).map(|k| x[i][k] * y[k][j]).sum();
            }
        }
        z
    };
    let trace = |x: &[[f64; 4]; 4]| (0..4).map(|i| x[i][i]).sum::<f64>();
    let mut m = [[0.0; 4]; 4];
    let mut c = [0.0; 5];
    c[0] = 1.0;
    for k in 1..=4 {
        let mut next = mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[k - 1];
        }
        m = next;
        c[k] = -trace(&mul(a, &m)) / k as f64;
    }
    // λ⁴ + c1 λ³ + c2 λ² + c3 λ + c4: e1 = −c1, e2 = c2, e3 = −c3, e4 = c4
    [-c[1], c[2], -c[3], c[4]]
}

#[test]
fn degeneracy_lifted_at_generic_couplings() {
    let p = params(1.0, 0.5, 0.3, 0.1, ExtendedDim::Three);
    let block = block_4x4_3d(&p, 1, HalfInt::HALF).unwrap();
    let e = block.eigenvalues();
    assert!(e.windows(2).all(|w| w[1] - w[0] > 1e-6), "{e:?}");
    let sym = characteristic_coefficients(&block.entries);
    let e1: f64 = e.iter().sum();
    let e2: f64 = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| e[i] * e[j]).sum();
    let e3: f64 = (0..4)
        .flat_map(|i| (i + 1..4).flat_map(move |j| (j + 1..4).map(move |k| (i, j, k))))
        .map(|(i, j, k)| e[i] * e[j] * e[k])
        .sum();
    let e4: f64 = e.iter().product();
    for (x, y) in [e1, e2, e3, e4].into_iter().zip(sym) {
        assert!((x - y).abs() < 1e-10, "{x} vs {y}");
    }
}

#[test]
fn block_entries_at_reference_point() {
    let p = params(1.0, 1.0, 1.0, 0.0, ExtendedDim::Three);
    let b = block_4x4_3d(&p, 2, HalfInt::from_twice(3)).unwrap();
    let expected = [
        [-2.0, 3.0, 3.0, 0.0],
        [3.0, 0.0, 0.0, 2.0],
        [3.0, 0.0, 0.0, 2.0],
        [0.0, 2.0, 2.0, 2.0],
    ];
    for i in 0..4 {
        for j in 0..4 {
            assert!((b.entries[i][j] - expected[i][j]).abs() < 1e-15);
        }
    }
    assert_eq!(b.active, 4);
    assert!(block_4x4_3d(&p, 0, HalfInt::from_twice(2)).is_err());
}

#[test]
fn blocks_3d_sit_inside_numeric_sectors() {
    let p = params(0.9, 0.7, 0.5, -0.2, ExtendedDim::Three);
    let cutoff = 9;
    let s = ExtendedSystem::build(p, cutoff).unwrap();
    for n in 0..=3usize {
        for twice_j in [1, 3, 5] {
            let j = HalfInt::from_twice(twice_j);
            let key = SectorKey {
                twice_invariant: block_twice_invariant_3d(n, j),
                twice_jz: Some(1),
            };
            let indices = s.sector_indices(key);
            assert!(s.is_exact(indices[0]));
            let sector = s.sector_spectrum(&indices).unwrap();
            let block = block_4x4_3d(&p, n, j).unwrap().eigenvalues();
            assert!(is_subset(&block, &sector, 1e-9), "n={n} j={j}: {block:?} in {sector:?}");
        }
    }
}

#[test]
fn quadruplet_states() {
    let s = ExtendedSystem::build(params(0.8, 1.1, 1.0, 0.3, ExtendedDim::One), 10).unwrap();
    let invariant = s.invariant();
    for n in 0..5usize {
        let idx: Vec<usize> = block_basis_1d(n).iter().map(|b| b.index_in(&s).unwrap()).collect();
        let mut distinct = idx.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 4);
        for &k in &idx {
            assert_eq!(invariant.entry(k, k).re, (n + 1) as f64);
        }
        let block = block_4x4_1d(s.params(), n);
        for (a, &ka) in idx.iter().enumerate() {
            for (b, &kb) in idx.iter().enumerate() {
                let h = s.hamiltonian().entry(ka, kb);
                assert!((h.re - block.entries[a][b]).abs() < 1e-14 && h.im == 0.0);
            }
        }
    }
}

#[test]
fn blocks_and_exceptional_states_exhaust_safe_spectrum() {
    let p = params(1.2, 0.8, 0.7, 0.4, ExtendedDim::One);
    let cutoff = 14;
    let s = ExtendedSystem::build(p, cutoff).unwrap();
    let safe = s.safe_spectrum(DEFAULT_BUFFER).unwrap();
    let mut union = Vec::new();
    let exceptional = s.exceptional_sectors(DEFAULT_BUFFER).unwrap();
    assert_eq!(exceptional.len(), 2);
    for (_, e) in &exceptional {
        union.extend_from_slice(e);
    }
    for n in 0..=(cutoff - DEFAULT_BUFFER - 2) {
        union.extend(block_4x4_1d(&p, n).eigenvalues());
    }
    let union = sorted(union);
    assert!(multiset_distance(&safe, &union).unwrap() < 1e-9);
}

#[test]
fn gamma_reversal_mirrors_the_spectrum() {
    for d in [ExtendedDim::One, ExtendedDim::Three] {
        let cutoff = if d == ExtendedDim::One { 12 } else { 4 };
        let e = diagonalize(
            ExtendedSystem::build(params(0.7, 0.5, 0.3, 0.1, d), cutoff).unwrap().hamiltonian(),
            false,
        )
        .unwrap()
        .eigenvalues;
        let f = diagonalize(
            ExtendedSystem::build(params(-0.7, -0.5, 0.3, 0.1, d), cutoff).unwrap().hamiltonian(),
            false,
        )
        .unwrap()
        .eigenvalues;
        let mirrored = sorted(f.iter().map(|x| -x).collect());
        assert!(multiset_distance(&e, &mirrored).unwrap() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn invariant_conserved_for_random_couplings(
        m in -2.0f64..2.0, g in -2.0f64..2.0, a in -2.0f64..2.0, b in -2.0f64..2.0
    ) {
        let s = ExtendedSystem::build(params(m, g, a, b, ExtendedDim::One), 12).unwrap();
        prop_assert!(s.hamiltonian().commutator(&s.invariant()).unwrap().max_abs() < 1e-11);
    }

    #[test]
    fn one_dimensional_blocks_match_sectors(
        m in 0.0f64..2.0, g in -2.0f64..2.0, a in -1.5f64..1.5, b in -1.5f64..1.5, n in 0usize..6
    ) {
        let p = params(m, g, a, b, ExtendedDim::One);
        let s = ExtendedSystem::build(p, 10).unwrap();
        let key = SectorKey { twice_invariant: 2 * (n as i64 + 1), twice_jz: None };
        let sector = s.sector_spectrum(&s.sector_indices(key)).unwrap();
        prop_assert!(multiset_distance(&sector, &block_4x4_1d(&p, n).eigenvalues()).unwrap() < 1e-10);
    }
}
