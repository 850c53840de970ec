//! Property tests for the structural invariants that hold on every valid
//! input, not just hand-picked examples.

use nalgebra::DVector;
use permcd::instances::{self, SignPattern};
use permcd::linalg;
use permcd::operators;
use permcd::runners;
use proptest::prelude::*;

fn sign_vec(n: usize) -> impl Strategy<Value = Vec<i8>> {
    proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Conjugating by a sign pattern never moves an eigenvalue.
    #[test]
    fn sign_flip_preserves_spectrum(
        n in 2usize..=8,
        sigma in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let inst = instances::random_unit_diag(n, sigma, seed).unwrap();
        let signs = {
            let mut r = permcd::rng::rng_from(seed ^ 0xf1f1);
            SignPattern::random(n, &mut r)
        };
        let flipped = instances::apply_sign_flip(&inst, &signs).unwrap();
        let ev_base = linalg::sym_eigenvalues(&inst.hessian);
        let ev_flip = linalg::sym_eigenvalues(&flipped.hessian);
        for (a, b) in ev_base.iter().zip(ev_flip.iter()) {
            prop_assert!((a - b).abs() < 1e-10, "eigenvalue moved: {a} vs {b}");
        }
    }

    /// Rescale to unit diagonal, then undo the scaling: identity within 1e-12.
    #[test]
    fn rescale_round_trip(
        n in 2usize..=8,
        scale_seed in any::<u64>(),
    ) {
        let base = instances::random_unit_diag(n, 0.3, scale_seed).unwrap();
        let mut r = permcd::rng::rng_from(scale_seed ^ 0xd1a6);
        let scales: Vec<f64> = (0..n).map(|_| {
            use rand::Rng as _;
            r.gen_range(0.25f64..4.0)
        }).collect();
        let mut scaled = base.hessian.clone();
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= scales[i] * scales[j];
            }
        }
        let (unit, f) = instances::rescale_to_unit_diag(&scaled).unwrap();
        let mut back = unit.hessian.clone();
        for i in 0..n {
            for j in 0..n {
                back[(i, j)] *= f[i] * f[j];
            }
        }
        prop_assert!(linalg::frob_distance(&back, &scaled) < 1e-12);
    }

    /// Instance files survive a JSON round trip bit-exactly.
    #[test]
    fn instance_json_round_trip_bit_exact(
        n in 2usize..=10,
        sigma in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let inst = instances::random_unit_diag(n, sigma, seed).unwrap();
        let parsed = permcd::QuadraticInstance::from_json(&inst.to_json("random", Some(seed))).unwrap();
        prop_assert_eq!(&parsed.hessian, &inst.hessian);
        prop_assert!(parsed.sigma == inst.sigma);
    }

    /// One epoch computed coordinate-by-coordinate equals the iteration
    /// matrix applied to the iterate.
    #[test]
    fn epoch_sequential_matches_matrix_route(
        n in 2usize..=8,
        sigma in 0.05f64..0.95,
        seed in any::<u64>(),
        perm_seed in any::<u64>(),
    ) {
        let inst = instances::random_unit_diag(n, sigma, seed).unwrap();
        let mut r = permcd::rng::rng_from(perm_seed);
        let mut p: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(&mut p[..], &mut r);
        let x = DVector::from_fn(n, |_, _| {
            use rand::Rng as _;
            r.sample::<f64, _>(rand_distr::StandardNormal)
        });
        let seq = runners::rpcd_epoch(&inst, &x, &p).unwrap();
        let t = operators::rpcd_iteration_matrix(&inst, &p).unwrap();
        prop_assert!((seq - t * x).norm() < 1e-10);
    }

    /// Applying a sign pattern twice is the identity (the flip is an involution).
    #[test]
    fn sign_flip_is_an_involution(
        n in 2usize..=8,
        signs in (2usize..=8).prop_flat_map(sign_vec),
    ) {
        prop_assume!(signs.len() >= n);
        let v = SignPattern::new(signs[..n].to_vec()).unwrap();
        let inst = instances::make_pi(n, 0.4).unwrap();
        let once = instances::apply_sign_flip(&inst, &v).unwrap();
        let twice = instances::apply_sign_flip(&once, &v).unwrap();
        prop_assert_eq!(&twice.hessian, &inst.hessian);
    }
}
