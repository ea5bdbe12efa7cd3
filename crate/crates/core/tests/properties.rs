use maxent_core::certify::{certify, certify_adjoint, check_certificate, gram_deviation, FeasibilityOptions, Status};
use maxent_core::decompose::{BipartiteGate, PauliDecomposition, SCHMIDT_RANK_TOL};
use maxent_core::hamiltonian2q::{self, TwoQubitAlphas};
use maxent_core::linalg::{
    c64, expm_minus_i, identity, max_abs_diff, partial_trace, psd_sqrt, tensor_product, trace,
    unitarity_deviation, von_neumann_entropy, ComplexMatrix,
};
use maxent_core::synthesize::{
    cnot_gate, first_columns_gate, haar_random_gate, haar_unitary, identity_gate, SynthesisSeed,
};
use maxent_core::verify::{apply_gate, entanglement_across_cut, optimal_input, simulate, StateVector};
use maxent_core::PauliGroup;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn gaussian(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn hermitian(d: usize, seed: u64) -> ComplexMatrix {
    let g = gaussian(d, d, seed);
    (&g + g.adjoint()).scale(0.5)
}

fn density(d: usize, rank: usize, seed: u64) -> ComplexMatrix {
    let g = gaussian(d, rank, seed);
    let rho = &g * g.adjoint();
    let tr = trace(&rho).re;
    rho.unscale(tr)
}

fn unitary(d: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tensor_product_is_associative(da in 1usize..4, db in 1usize..4, dc in 1usize..4, seed in any::<u64>()) {
        let (a, b, c) = (gaussian(da, da, seed), gaussian(db, db, seed ^ 1), gaussian(dc, dc, seed ^ 2));
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert!(max_abs_diff(&left, &right) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product(da in 1usize..5, db in 1usize..5, seed in any::<u64>()) {
        let (a, b) = (gaussian(da, da, seed), gaussian(db, db, seed ^ 7));
        let ab = tensor_product(&a, &b);
        let tr_b = partial_trace(&ab, &[da, db], 1).unwrap();
        let tr_a = partial_trace(&ab, &[da, db], 0).unwrap();
        prop_assert!(max_abs_diff(&tr_b, &(&a * trace(&b))) < 1e-10);
        prop_assert!(max_abs_diff(&tr_a, &(&b * trace(&a))) < 1e-10);
    }

    #[test]
    fn exponential_inverts(d in 1usize..17, seed in any::<u64>()) {
        let h = hermitian(d, seed);
        let u = expm_minus_i(&h).unwrap();
        let v = expm_minus_i(&(-&h)).unwrap();
        prop_assert!(max_abs_diff(&(&u * &v), &identity(d)) < 1e-10);
        prop_assert!(unitarity_deviation(&u) < 1e-10);
    }

    #[test]
    fn psd_sqrt_squares_back(d in 1usize..9, rank in 1usize..9, seed in any::<u64>()) {
        let rho = density(d, rank.min(d), seed);
        let m = psd_sqrt(&rho).unwrap();
        prop_assert!(max_abs_diff(&(&m * &m), &rho) < 1e-10);
    }

    #[test]
    fn entropy_is_unitarily_invariant(d in 2usize..9, rank in 1usize..9, seed in any::<u64>()) {
        let rho = density(d, rank.min(d), seed);
        let u = unitary(d, seed ^ 3);
        let s0 = von_neumann_entropy(&rho).unwrap();
        let s1 = von_neumann_entropy(&(&u * &rho * u.adjoint())).unwrap();
        prop_assert!((s0 - s1).abs() < 1e-9);
        prop_assert!((-1e-12..=(d as f64).log2() + 1e-12).contains(&s0));
    }

    #[test]
    fn decomposition_round_trip(pair in prop::sample::select(vec![(2usize, 2usize), (2, 3), (2, 4), (3, 3), (3, 5), (3, 9)]), seed in any::<u64>()) {
        let (da, db) = pair;
        let gate = haar_random_gate(da, db, seed).unwrap();
        let dec = PauliDecomposition::extract(&gate).unwrap();
        prop_assert!(max_abs_diff(dec.reconstruct().unwrap().matrix(), gate.matrix()) < 1e-12);
        prop_assert!((dec.frobenius_mass() - db as f64).abs() < 1e-9);
        prop_assert!(dec.completeness_deviation() < 1e-10);
    }

    #[test]
    fn hamiltonian_verdicts_agree(k in prop::array::uniform3(0usize..32)) {
        let a = k.map(|v| v as f64 * std::f64::consts::PI / 32.0);
        let alphas = TwoQubitAlphas::new(a[0], a[1], a[2]);
        let gate = hamiltonian2q::gate(alphas).unwrap();
        let eqs = hamiltonian2q::check_normalizations(alphas, 1e-9);
        let closed = hamiltonian2q::closed_form_maximal(alphas, 1e-9);
        let cert = certify(&gate, &FeasibilityOptions::default()).unwrap();
        prop_assert_eq!(eqs, closed);
        prop_assert_eq!(closed, cert.is_certified());
        let adj = certify_adjoint(&gate, &FeasibilityOptions::default()).unwrap();
        prop_assert_eq!(adj.status, cert.status);
        let coeffs = hamiltonian2q::gate_from_coefficients(&hamiltonian2q::coefficients(alphas));
        prop_assert!(max_abs_diff(&coeffs, gate.matrix()) < 1e-12);
    }

    #[test]
    fn cut_entropy_ignores_local_unitaries(seed in any::<u64>()) {
        let gate = haar_random_gate(2, 3, seed).unwrap();
        let psi = apply_gate(&gate, &optimal_input(&density(3, 3, seed ^ 5), 2, 3).unwrap()).unwrap();
        let e0 = entanglement_across_cut(&psi).unwrap();
        // Rotate the aA side and the Bb side independently.
        let m = ComplexMatrix::from_row_slice(4, 9, psi.amplitudes.as_slice());
        let rotated = unitary(4, seed ^ 11) * m * unitary(9, seed ^ 13).transpose();
        let amplitudes = nalgebra::DVector::from_iterator(36, rotated.transpose().iter().copied());
        let moved = StateVector { dims: psi.dims, amplitudes };
        prop_assert!((entanglement_across_cut(&moved).unwrap() - e0).abs() < 1e-9);
    }

    #[test]
    fn non_maximal_gates_stay_below_ceiling(rank in 1usize..3, seed in any::<u64>()) {
        let rho = density(2, rank, seed);
        for gate in [cnot_gate(), identity_gate(2, 2).unwrap()] {
            let r = simulate(&gate, &rho).unwrap();
            prop_assert!(r.delta < r.ceiling - 0.1, "delta {} ceiling {}", r.delta, r.ceiling);
        }
    }

    #[test]
    fn certificates_pass_their_own_check(seed in 0u64..200) {
        let gate = first_columns_gate(SynthesisSeed { rng_seed: seed, da: 2, db: 4 }).unwrap();
        let opts = FeasibilityOptions::default();
        let cert = certify(&gate, &opts).unwrap();
        prop_assert_eq!(cert.status, Status::Certified);
        let dec = PauliDecomposition::extract(&gate).unwrap();
        check_certificate(&dec, &cert, &opts).unwrap();
        prop_assert_eq!(dec.operator_schmidt_rank(SCHMIDT_RANK_TOL), 4);
    }
}

#[test]
fn schur_completeness() {
    for d in 2..=5 {
        let group = PauliGroup::new(d).unwrap();
        let mats = group.matrices();
        for (j, k, jp, kp) in index_quads(d) {
            let sum: maxent_core::C64 = mats.iter().map(|g| g[(jp, kp)].conj() * g[(j, k)]).sum();
            let want = if (j, k) == (jp, kp) { d as f64 } else { 0.0 };
            assert!((sum - c64(want, 0.0)).norm() < 1e-10, "d={d} ({j},{k}) ({jp},{kp})");
        }
    }
}

fn index_quads(d: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..d * d * d * d).map(move |i| (i / (d * d * d), (i / (d * d)) % d, (i / d) % d, i % d))
}

#[test]
fn rank_one_boundary_certificate_is_found() {
    // Dykstra stalls near the rank-1 solution here; the rank sweep recovers it.
    let gate = first_columns_gate(SynthesisSeed { rng_seed: 26, da: 2, db: 4 }).unwrap();
    let cert = certify(&gate, &FeasibilityOptions::default()).unwrap();
    assert_eq!(cert.status, Status::Certified);
    assert!(cert.gram_deviation < 1e-12);
}

#[test]
fn restarts_are_reproducible() {
    let gate = first_columns_gate(SynthesisSeed { rng_seed: 3, da: 2, db: 5 }).unwrap();
    let opts = FeasibilityOptions { rng_seed: 42, ..FeasibilityOptions::default() };
    assert_eq!(certify(&gate, &opts).unwrap(), certify(&gate, &opts).unwrap());
}

#[test]
fn equal_dimension_verdict_is_the_maximally_mixed_check() {
    for seed in 0..10 {
        let gate = BipartiteGate::new(2, 2, unitary(4, seed)).unwrap();
        let dec = PauliDecomposition::extract(&gate).unwrap();
        let mixed = gram_deviation(&dec, &identity(2).scale(0.5));
        let status = certify(&gate, &FeasibilityOptions::default()).unwrap().status;
        assert_eq!(status == Status::Certified, mixed <= 1e-9);
    }
}
