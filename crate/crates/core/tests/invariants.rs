use num_complex::Complex64;
use orfkit_core::grid::circle_points;
use orfkit_core::orf::{determinant_residual, extract_parameters, para_pair, para_zeros};
use orfkit_core::transforms::{arf_explicit, arf_recurrence, relation_residuals};
use orfkit_core::RandomConfig;
use proptest::prelude::*;

const N_MAX: usize = 4;

fn config() -> impl Strategy<Value = RandomConfig> {
    (any::<u64>(), 0.1..0.7f64, 0.05..0.6f64).prop_map(|(seed, b, l)| RandomConfig::generate(seed, N_MAX, b, l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn determinant_identity_holds_with_d_equal_two(rc in config()) {
        let sys = rc.synthesize().unwrap();
        let pts = circle_points(1.0, 128, 0.3);
        for n in 0..=N_MAX {
            let r = determinant_residual(&sys, n, &pts).unwrap();
            prop_assert!(r.residual < 1e-10, "n = {n}: {}", r.residual);
            prop_assert!((r.d - 2.0).abs() < 1e-10, "n = {n}: d = {}", r.d);
        }
    }

    #[test]
    fn parameters_are_recovered_from_consecutive_levels(rc in config()) {
        let sys = rc.synthesize().unwrap();
        for n in 1..=N_MAX {
            let fit = extract_parameters(sys.poles(), sys.level(n - 1).unwrap(), &sys.level(n).unwrap().phi).unwrap();
            prop_assert!((fit.lambda - rc.lambdas[n - 1]).norm() < 1e-10);
        }
    }

    #[test]
    fn para_orthogonal_zeros_are_unimodular(rc in config(), angle in 0.0..std::f64::consts::TAU) {
        let sys = rc.synthesize().unwrap();
        let tau = Complex64::from_polar(1.0, angle);
        for n in 1..=N_MAX {
            let zeros = para_zeros(&para_pair(&sys, n, tau).unwrap()).unwrap();
            prop_assert_eq!(zeros.len(), n);
            for z in zeros {
                prop_assert!((z.norm() - 1.0).abs() < 1e-9, "|z| = {}", z.norm());
            }
        }
    }

    #[test]
    fn associated_functions_agree_and_satisfy_the_relations(rc in config(), k in 0..=2usize) {
        let sys = rc.synthesize().unwrap();
        let rec = arf_recurrence(&sys, k, N_MAX).unwrap();
        let pts = circle_points(1.0, 64, 0.1);
        for n in k..=N_MAX {
            let pair = arf_explicit(&sys, k, n).unwrap();
            let level = rec.level(n).unwrap();
            prop_assert!(pair.phi.grid_distance(&level.phi, &pts).unwrap() < 1e-8);
            prop_assert!(pair.psi.grid_distance(&level.psi, &pts).unwrap() < 1e-8);
            for j in 0..=k {
                prop_assert!(relation_residuals(&sys, j, k, n).unwrap().max() < 1e-9);
            }
        }
    }
}
