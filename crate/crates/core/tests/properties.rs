use entprod::{
    embed_local, entanglement_production, evolutional_measure, evolve_operator, ising2_hamiltonian,
    kron, nonentangling_counterpart, partial_trace_keep, random_operator, thermal_measure_direct,
    thermal_measure_partition, Complex64, ComplexMatrix, Ising2Params, LogBase, OperatorOnSpace,
    RandomKind, SchattenIndex, SpaceStructure,
};
use proptest::prelude::*;

fn structures() -> impl Strategy<Value = SpaceStructure> {
    prop_oneof![
        Just(vec![2, 2]),
        Just(vec![2, 3]),
        Just(vec![3, 2]),
        Just(vec![2, 2, 2]),
    ]
    .prop_map(|d| SpaceStructure::new(d).unwrap())
}

fn local_unitary(dims: &[usize], seed: u64) -> ComplexMatrix {
    dims.iter()
        .enumerate()
        .map(|(i, &d)| {
            let s = SpaceStructure::new(vec![d]).unwrap();
            random_operator(
                &s,
                RandomKind::Unitary,
                seed.wrapping_mul(31).wrapping_add(i as u64),
            )
            .into_matrix()
        })
        .reduce(|acc, m| kron(&acc, &m))
        .unwrap()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn schatten_norms_are_unitarily_invariant(structure in structures(), seed in any::<u64>()) {
        let a = random_operator(&structure, RandomKind::Generic, seed).into_matrix();
        let u1 = random_operator(&structure, RandomKind::Unitary, seed ^ 1).into_matrix();
        let u2 = random_operator(&structure, RandomKind::Unitary, seed ^ 2).into_matrix();
        let rotated = &(&u1 * &a) * &u2;
        for p in [SchattenIndex::ONE, SchattenIndex::TWO, SchattenIndex::Finite(3.0), SchattenIndex::Infinity] {
            let n = a.schatten_norm(p).unwrap();
            let m = rotated.schatten_norm(p).unwrap();
            prop_assert!((n - m).abs() < 1e-9 * n, "p = {p}: {n} vs {m}");
        }
    }

    #[test]
    fn hilbert_schmidt_norm_from_columns(structure in structures(), seed in any::<u64>()) {
        let a = random_operator(&structure, RandomKind::Generic, seed).into_matrix();
        let dim = a.dim();
        // Σ_α ‖A e_α‖² over the standard basis
        let by_columns: f64 = (0..dim)
            .map(|alpha| {
                let mut e = vec![Complex64::new(0.0, 0.0); dim];
                e[alpha] = Complex64::new(1.0, 0.0);
                a.apply(&e).unwrap().iter().map(|z| z.norm_sqr()).sum::<f64>()
            })
            .sum();
        let by_trace = (&a.adjoint() * &a).trace().re;
        prop_assert!(rel_close(by_columns, by_trace, 1e-10));
        let sv = a.schatten_norm(SchattenIndex::TWO).unwrap();
        prop_assert!(rel_close(sv * sv, by_trace, 1e-10));
    }

    #[test]
    fn kron_is_bilinear(seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let s2 = SpaceStructure::new(vec![2]).unwrap();
        let s3 = SpaceStructure::new(vec![3]).unwrap();
        let a = random_operator(&s2, RandomKind::Generic, seed).into_matrix();
        let b = random_operator(&s3, RandomKind::Generic, seed ^ 7).into_matrix();
        let alpha = Complex64::new(re, im);
        let lhs = kron(&a.scale(alpha), &b);
        let rhs = kron(&a, &b).scale(alpha);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14 * (1.0 + alpha.norm()) * 10.0);
    }

    #[test]
    fn partial_trace_preserves_trace(structure in structures(), seed in any::<u64>()) {
        let a = random_operator(&structure, RandomKind::Generic, seed);
        let tr = a.trace();
        for site in 0..structure.sites() {
            let reduced = partial_trace_keep(&a, site).unwrap();
            prop_assert!((reduced.trace() - tr).norm() <= 1e-12 * tr.norm().max(1.0));
        }
    }

    #[test]
    fn partial_trace_is_linear(structure in structures(), seed in any::<u64>(), alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
        let a = random_operator(&structure, RandomKind::Generic, seed);
        let b = random_operator(&structure, RandomKind::Hermitian, seed ^ 3);
        let combo = &a.matrix().scale_real(alpha) + &b.matrix().scale_real(beta);
        let combo = a.with_matrix(combo).unwrap();
        for site in 0..structure.sites() {
            let lhs = partial_trace_keep(&combo, site).unwrap();
            let rhs = &partial_trace_keep(&a, site).unwrap().scale_real(alpha)
                + &partial_trace_keep(&b, site).unwrap().scale_real(beta);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_triple_product(seed in any::<u64>()) {
        let s = SpaceStructure::new(vec![2]).unwrap();
        let factors: Vec<ComplexMatrix> = (0..3)
            .map(|k| random_operator(&s, RandomKind::Generic, seed.wrapping_add(k)).into_matrix())
            .collect();
        let a = OperatorOnSpace::product(&factors).unwrap();
        let reduced = partial_trace_keep(&a, 1).unwrap();
        let expected = factors[1].scale(factors[0].trace() * factors[2].trace());
        prop_assert!(reduced.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn embedded_operators_commute(structure in structures(), seed in any::<u64>()) {
        let dims = structure.local_dims().to_vec();
        for i in 0..dims.len() {
            for j in 0..dims.len() {
                if i == j { continue; }
                let si = SpaceStructure::new(vec![dims[i]]).unwrap();
                let sj = SpaceStructure::new(vec![dims[j]]).unwrap();
                let x = random_operator(&si, RandomKind::Generic, seed ^ i as u64).into_matrix();
                let y = random_operator(&sj, RandomKind::Generic, seed ^ (j as u64 + 100)).into_matrix();
                let ex = embed_local(&x, i, &structure).unwrap().into_matrix();
                let ey = embed_local(&y, j, &structure).unwrap().into_matrix();
                prop_assert!((&ex * &ey).max_abs_diff(&(&ey * &ex)) < 1e-12);
            }
        }
    }

    #[test]
    fn counterpart_preserves_trace(structure in structures(), seed in any::<u64>()) {
        let a = random_operator(&structure, RandomKind::Generic, seed);
        let c = nonentangling_counterpart(&a).unwrap();
        prop_assert!((c.trace() - a.trace()).norm() < 1e-10 * a.trace().norm());
    }

    #[test]
    fn positive_operators_have_nonnegative_measure(
        structure in structures(),
        seed in any::<u64>(),
        thermal in any::<bool>(),
    ) {
        let kind = if thermal { RandomKind::ThermalState } else { RandomKind::PositiveExponential };
        let a = random_operator(&structure, kind, seed);
        let m = entanglement_production(&a, SchattenIndex::TWO, LogBase::Natural).unwrap();
        prop_assert!(m.epsilon >= -1e-10);
        prop_assert!(m.norm_denominator <= m.norm_numerator * (1.0 + 1e-10));
    }

    #[test]
    fn measure_is_invariant_under_local_unitary_conjugation(structure in structures(), seed in any::<u64>()) {
        let a = random_operator(&structure, RandomKind::Generic, seed);
        let v = local_unitary(structure.local_dims(), seed ^ 11);
        let conj = a.with_matrix(&(&v * a.matrix()) * &v.adjoint()).unwrap();
        let m0 = entanglement_production(&a, SchattenIndex::TWO, LogBase::Natural).unwrap();
        let m1 = entanglement_production(&conj, SchattenIndex::TWO, LogBase::Natural).unwrap();
        prop_assert!((m0.epsilon - m1.epsilon).abs() < 1e-9);
    }

    #[test]
    fn evolutional_route_matches_generic_route(structure in structures(), seed in any::<u64>(), t in -3.0f64..3.0) {
        let h = random_operator(&structure, RandomKind::Hermitian, seed);
        let u = h.with_matrix(evolve_operator(h.matrix(), t).unwrap()).unwrap();
        let generic = entanglement_production(&u, SchattenIndex::TWO, LogBase::Natural);
        let fast = evolutional_measure(&h, t);
        match (generic, fast) {
            (Ok(g), Ok(f)) => prop_assert!((g.epsilon - f.epsilon).abs() < 1e-11 * g.epsilon.abs().max(1.0)),
            (Err(g), Err(f)) => prop_assert!(g.is_traceless() && f.is_traceless()),
            (g, f) => prop_assert!(false, "routes disagree on validity: {g:?} vs {f:?}"),
        }
    }

    #[test]
    fn ising_measure_is_even_and_sign_invariant(h in -4.0f64..4.0, j in -4.0f64..4.0, t in 0.0f64..10.0) {
        let p = Ising2Params::new(h, j).unwrap();
        let forward = evolutional_measure(&ising2_hamiltonian(p), t);
        let backward = evolutional_measure(&ising2_hamiltonian(p), -t);
        let inverted = evolutional_measure(&ising2_hamiltonian(p.inverted()), t);
        if let (Ok(f), Ok(b), Ok(i)) = (forward, backward, inverted) {
            prop_assert!((f.epsilon - b.epsilon).abs() < 1e-10);
            prop_assert!((f.epsilon - i.epsilon).abs() < 1e-10);
        }
    }

    #[test]
    fn thermal_routes_agree(structure in structures(), seed in any::<u64>(), beta in 0.0f64..5.0) {
        let h = random_operator(&structure, RandomKind::Hermitian, seed);
        let d = thermal_measure_direct(&h, beta).unwrap();
        let p = thermal_measure_partition(&h, beta).unwrap();
        prop_assert!((d.epsilon - p.epsilon).abs() < 1e-10);
        prop_assert!(rel_close(d.partition_function, p.partition_function, 1e-12));
        prop_assert!(d.epsilon >= -1e-10);
    }
}

#[test]
fn parallel_evaluation_is_bitwise_identical() {
    let h = ising2_hamiltonian(Ising2Params::new(0.7, 1.3).unwrap());
    let times: Vec<f64> = (0..64).map(|k| 0.1 * k as f64).collect();
    let sequential: Vec<f64> = times
        .iter()
        .map(|&t| evolutional_measure(&h, t).unwrap().epsilon)
        .collect();
    let parallel: Vec<f64> = std::thread::scope(|scope| {
        let handles: Vec<_> = times
            .chunks(16)
            .map(|chunk| {
                let h = &h;
                scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|&t| evolutional_measure(h, t).unwrap().epsilon)
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap())
            .collect()
    });
    assert_eq!(
        sequential.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
        parallel.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
    );
}
