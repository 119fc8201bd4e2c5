use fermicap::capacity::{gaussian_capacity, smin_even, smin_gaussian};
use fermicap::channel::{Channel, ChannelSpec, DensityOperator, FermionicProductChannel};
use fermicap::gaussian::{channel_on_covariance, gaussian_entropy};
use fermicap::sampling;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coefficients() -> impl Strategy<Value = Vec<f64>> {
    (1usize..=3).prop_flat_map(|n| prop::collection::vec(0.0f64..=1.0, 2 * n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_multiplies_coefficients(b1 in coefficients(), seed in any::<u64>()) {
        let n = b1.len() / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b2 = sampling::random_coefficients(n, &mut rng);
        let prod: Vec<f64> = b1.iter().zip(&b2).map(|(x, y)| x * y).collect();
        let (c1, c2) = (FermionicProductChannel::new(n, b1)?, FermionicProductChannel::new(n, b2)?);
        let c12 = FermionicProductChannel::new(n, prod)?;
        let rho = sampling::random_density(1 << n, &mut rng);
        let lhs = c1.apply(&c2.apply(rho.matrix())?)?;
        prop_assert!(lhs.max_abs_diff(&c12.apply(rho.matrix())?) < 1e-12);
    }

    #[test]
    fn outputs_are_states(b in coefficients(), seed in any::<u64>()) {
        let n = b.len() / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = FermionicProductChannel::new(n, b)?;
        let rho = sampling::random_density(1 << n, &mut rng);
        prop_assert!(DensityOperator::new(ch.apply(rho.matrix())?).is_ok());
        let total: f64 = ch.kraus_distribution().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_are_ordered(b in coefficients()) {
        let n = (b.len() / 2) as f64;
        let g = smin_gaussian(&b)?;
        let e = smin_even(&b)?;
        prop_assert!(g <= e + 1e-12);
        prop_assert!(e <= n + 1e-12);
        prop_assert!(g >= -1e-12);
        let report = gaussian_capacity(&b)?;
        prop_assert!((report.c1_gaussian - (n - g)).abs() < 1e-12);
        prop_assert!(report.b_sorted.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn closed_forms_ignore_order(mut b in coefficients(), rot in 0usize..6) {
        let g = smin_gaussian(&b)?;
        let len = b.len();
        b.rotate_left(rot % len);
        prop_assert!((smin_gaussian(&b)? - g).abs() < 1e-12);
    }

    #[test]
    fn gaussian_outputs_respect_even_bound(b in coefficients(), seed in any::<u64>()) {
        let n = b.len() / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = FermionicProductChannel::new(n, b)?;
        let m = sampling::random_pure_covariance(n, &mut rng);
        let s = gaussian_entropy(&channel_on_covariance(&ch, &m)?)?;
        prop_assert!(s >= smin_gaussian(ch.coefficients())? - 1e-9);
    }

    #[test]
    fn channel_spec_json_round_trip(b in coefficients()) {
        let n = b.len() / 2;
        let spec = ChannelSpec { n, b };
        let text = serde_json::to_string(&spec).unwrap();
        let ch = FermionicProductChannel::from_json(&text)?;
        prop_assert_eq!(ch.spec(), spec);
    }
}
