use affinity_discord::correlation::{closed_form_2xn, gell_mann_correlation, lower_bound};
use affinity_discord::linalg::{self, hermitian_eig, kron, partial_trace, ComplexMatrix, Subsystem};
use affinity_discord::measures::{affinity_discord_at, hs_discord_at, remedied_discord_at, MeasurementBasis};
use affinity_discord::states::{self, schmidt_spectrum};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_is_associative(seed in any::<u64>(), (a, b) in shape(), c in 1usize..=2) {
        let x = states::random_unitary_seeded(a, seed);
        let y = states::random_unitary_seeded(b, seed ^ 1);
        let z = states::random_unitary_seeded(c, seed ^ 2);
        let left = kron(&kron(&x, &y), &z);
        let right = kron(&x, &kron(&y, &z));
        prop_assert!(left.max_abs_diff(&right) < 1e-14);
    }

    #[test]
    fn eigenvalues_sum_to_trace_and_reconstruct(seed in any::<u64>(), (a, b) in shape()) {
        let rho = states::random_state(a, b, a * b, seed).unwrap();
        let eig = hermitian_eig(rho.matrix()).unwrap();
        let sum: f64 = eig.eigenvalues.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(eig.reconstruct().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn partial_traces_of_products(seed in any::<u64>(), (a, b) in shape()) {
        let ra = states::random_state(1, a, a, seed).unwrap().into_matrix();
        let rb = states::random_state(1, b, b, seed ^ 9).unwrap().into_matrix();
        let prod = kron(&ra, &rb);
        prop_assert!(partial_trace(&prod, a, b, Subsystem::A).unwrap().max_abs_diff(&ra) < 1e-14);
        prop_assert!(partial_trace(&prod, a, b, Subsystem::B).unwrap().max_abs_diff(&rb) < 1e-14);
    }

    #[test]
    fn schmidt_spectrum_is_local_unitary_invariant(seed in any::<u64>(), (a, b) in shape()) {
        let psi = states::random_pure_state(a, b, seed);
        let u = states::random_unitary_seeded(a, seed ^ 3);
        let v = states::random_unitary_seeded(b, seed ^ 4);
        let s1 = schmidt_spectrum(&psi).0;
        let s2 = schmidt_spectrum(&psi.apply_local_unitaries(&u, &v)).0;
        prop_assert!((s1.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (x, y) in s1.iter().zip(&s2) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn purity_is_multiplicative(seed in any::<u64>(), (a, b) in shape()) {
        let ra = states::random_state(1, a, 1 + seed as usize % a, seed).unwrap();
        let rb = states::random_state(1, b, b, seed ^ 5).unwrap();
        let prod = states::product_state(ra.matrix(), rb.matrix()).unwrap();
        prop_assert!((prod.purity() - ra.purity() * rb.purity()).abs() < 1e-13);
    }

    #[test]
    fn sqrt_squares_back(seed in any::<u64>(), (a, b) in shape(), rank in 1usize..=9) {
        let rho = states::random_state(a, b, rank.min(a * b), seed).unwrap();
        let root = rho.sqrt().unwrap();
        prop_assert!(root.matmul(&root).max_abs_diff(rho.matrix()) < 1e-12);
        prop_assert!(root.is_hermitian(1e-12));
    }

    #[test]
    fn parseval_and_bound_range(seed in any::<u64>(), a in 2usize..=3, b in 2usize..=3) {
        let rho = states::random_state(a, b, a * b, seed).unwrap();
        let gamma = gell_mann_correlation(&rho).unwrap();
        prop_assert!((gamma.sum_of_squares() - 1.0).abs() < 1e-12);
        let bound = lower_bound(&rho).unwrap().value;
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&bound));
    }

    #[test]
    fn any_basis_upper_bounds_the_closed_form(seed in any::<u64>(), b in 2usize..=3, rank in 1usize..=6) {
        let rho = states::random_state(2, b, rank.min(2 * b), seed).unwrap();
        let closed = closed_form_2xn(&rho).unwrap().value;
        let basis = MeasurementBasis::from_unitary(&states::random_unitary_seeded(2, seed ^ 6));
        let at = affinity_discord_at(&rho, &basis).unwrap();
        prop_assert!(at >= closed - 1e-12);
        prop_assert!((remedied_discord_at(&rho, &basis).unwrap() - at).abs() < 1e-12);
        prop_assert!(hs_discord_at(&rho, &basis).unwrap() >= -1e-12);
    }

    #[test]
    fn unitary_exp_is_unitary(seed in any::<u64>(), d in 1usize..=4) {
        let g = states::random_state(1, d, d, seed).unwrap().into_matrix();
        let u = linalg::unitary_exp(&g.scale_real(3.0)).unwrap();
        let id = ComplexMatrix::identity(d);
        prop_assert!(u.matmul(&u.adjoint()).max_abs_diff(&id) < 1e-12);
    }
}
