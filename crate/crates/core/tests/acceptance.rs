//! Acceptance gate. Runs without the libtest harness so that one PASS/FAIL
//! line per criterion is always printed; exits non-zero if any fails.

use fermicap::capacity::{binary_entropy, holevo_quantity, optimal_ensemble_for, smin_gaussian};
use fermicap::channel::{
    embed_mode, embed_mode_operator, Channel, DensityOperator, FermionicProductChannel,
    GeneralKraussChannel,
};
use fermicap::clifford::MonomialBasis;
use fermicap::gaussian::{
    channel_on_covariance, covariance_from_density, density_from_covariance, gaussian_entropy,
};
use fermicap::majorization::{check_product_majorization, spectrum_majorization_check};
use fermicap::minimizer::{minimize, MinimizerConfig, WITNESS_TOL};
use fermicap::numerics::ComplexMatrix;
use fermicap::sampling;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 4·H(1 − 2p) for p = 0.05, 0.10, 0.15, 0.20, from a 30-digit reference evaluation.
const DEPOLARIZING_FOURFOLD: [(f64, f64); 4] = [
    (0.05, 1.875_982_374_357_125),
    (0.10, 2.887_712_379_549_449_4),
    (0.15, 3.525_163_596_922_770_5),
    (0.20, 3.883_802_377_818_674_6),
];

fn verdict(id: u32, name: &str, ok: bool, detail: String) {
    println!(
        "{} criterion {id:>2} {name}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn grid(lo: f64, hi: f64) -> Vec<f64> {
    (1..=20)
        .map(|k| k as f64 * 0.05)
        .filter(|b| *b >= lo - 1e-12 && *b <= hi + 1e-12)
        .collect()
}

/// Runs the minimizer over a family grid; returns (worst |dev|, most negative dev, worst witness defect).
fn family_sweep(n: usize, family: &str, bs: &[f64], cfg: &MinimizerConfig) -> (f64, f64, f64) {
    let (mut worst, mut lowest, mut defect) = (0.0f64, 0.0f64, 0.0f64);
    for &b in bs {
        let ch = match family {
            "plus" => FermionicProductChannel::plus(n, b),
            _ => FermionicProductChannel::times(n, b),
        }
        .unwrap();
        let run = minimize(&ch, cfg).unwrap();
        let dev = run.best_entropy - smin_gaussian(ch.coefficients()).unwrap();
        println!("    n={n} {family} b={b:.2} deviation={dev:.3e}");
        worst = worst.max(dev.abs());
        lowest = lowest.min(dev);
        defect = defect.max(run.gaussian_witness.map_or(f64::INFINITY, |w| w.defect));
    }
    (worst, lowest, defect)
}

fn c01_product_form_matches_kraus_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let ch = sampling::random_channel(n, &mut rng);
        let rho = sampling::random_density(1 << n, &mut rng);
        let diff = ch
            .apply_product(rho.matrix())
            .unwrap()
            .max_abs_diff(&ch.apply_kraus(rho.matrix()).unwrap());
        worst = worst.max(diff);
    }
    verdict(
        1,
        "representation equivalence",
        worst <= 1e-12,
        format!("worst entry diff {worst:.3e} (tol 1e-12)"),
    );
}

fn c02_covariance_commutes_with_channel() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let rho = sampling::random_even_gaussian(n, &mut rng);
        let ch = sampling::random_channel(n, &mut rng);
        let m = covariance_from_density(&rho).unwrap();
        let out = DensityOperator::new(ch.apply(rho.matrix()).unwrap()).unwrap();
        let lhs = covariance_from_density(&out).unwrap();
        let rhs = channel_on_covariance(&ch, &m).unwrap();
        worst = worst.max(lhs.matrix().max_abs_diff(rhs.matrix()));
    }
    verdict(
        2,
        "gaussian closure",
        worst <= 1e-10,
        format!("worst entry diff {worst:.3e} (tol 1e-10)"),
    );
}

fn c03_covariance_entropy_matches_dense_entropy() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let m = sampling::random_admissible_covariance(n, &mut rng);
        let dense = density_from_covariance(&m).unwrap().entropy().unwrap();
        worst = worst.max((gaussian_entropy(&m).unwrap() - dense).abs());
    }
    verdict(
        3,
        "entropy formula",
        worst <= 1e-10,
        format!("worst diff {worst:.3e} bits (tol 1e-10)"),
    );
}

fn c04_small_registers_reach_gaussian_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = rng.random_range(1..=2);
        let ch = sampling::random_channel(n, &mut rng);
        let cfg = MinimizerConfig {
            iterations: 200,
            restarts: 64,
            seed: 1000 + i,
            ..Default::default()
        };
        let run = minimize(&ch, &cfg).unwrap();
        worst = worst.max((run.best_entropy - smin_gaussian(ch.coefficients()).unwrap()).abs());
    }
    verdict(
        4,
        "small-register minimum",
        worst <= 1e-6,
        format!("worst |deviation| {worst:.3e} (tol 1e-6)"),
    );
}

fn c05_three_mode_families() {
    let cfg = MinimizerConfig {
        seed: 1,
        ..Default::default()
    };
    let bs = grid(0.05, 0.70);
    let (wp, lp, _) = family_sweep(3, "plus", &bs, &cfg);
    let (wt, lt, _) = family_sweep(3, "times", &bs, &cfg);
    let worst = wp.max(wt);
    let lowest = lp.min(lt);
    verdict(
        5,
        "three-mode sweep",
        worst <= 1e-7 && lowest >= -1e-7,
        format!("worst |deviation| {worst:.3e}, lowest {lowest:.3e} (tol 1e-7)"),
    );
}

fn c06_four_mode_families() {
    let cfg = MinimizerConfig {
        seed: 1,
        ..Default::default()
    };
    let (wp, lp, _) = family_sweep(4, "plus", &grid(0.05, 0.90), &cfg);
    let (wt, lt, _) = family_sweep(4, "times", &grid(0.05, 0.55), &cfg);
    let worst = wp.max(wt);
    let lowest = lp.min(lt);
    verdict(
        6,
        "four-mode sweep",
        worst <= 1e-7 && lowest >= -1e-7,
        format!("worst |deviation| {worst:.3e}, lowest {lowest:.3e} (tol 1e-7)"),
    );
}

fn c07_fourfold_depolarizing() {
    let cfg = MinimizerConfig {
        seed: 7,
        ..Default::default()
    };
    let mut worst = 0.0f64;
    for (p, expected) in DEPOLARIZING_FOURFOLD {
        assert!((4.0 * binary_entropy(1.0 - 2.0 * p).unwrap() - expected).abs() < 1e-13);
        let ch = GeneralKraussChannel::depolarizing(p)
            .unwrap()
            .tensor_power(4)
            .unwrap();
        let run = minimize(&ch, &cfg).unwrap();
        println!(
            "    p={p:.2} best={:.12} expected={expected:.12}",
            run.best_entropy
        );
        worst = worst.max((run.best_entropy - expected).abs());
    }
    verdict(
        7,
        "depolarizing benchmark",
        worst <= 1e-6,
        format!("worst |diff| {worst:.3e} (tol 1e-6)"),
    );
}

fn c08_gaussian_outputs_majorized_by_optimal_output() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.random_range(1..=4);
        let ch = sampling::random_channel(n, &mut rng);
        let rho = sampling::random_pure_gaussian(n, &mut rng);
        let report = spectrum_majorization_check(&ch, &rho).unwrap();
        worst_margin = worst_margin.min(report.worst_margin);
        if !report.holds {
            failures += 1;
        }
    }
    verdict(
        8,
        "gaussian output majorization",
        failures == 0,
        format!("{failures} failures of 1000, worst prefix margin {worst_margin:.3e} (tol 1e-9)"),
    );
}

fn c09_product_distribution_majorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=6);
        let (alpha, beta) = sampling::random_dominated_pair(n, &mut rng);
        if !check_product_majorization(&alpha, &beta).unwrap() {
            failures += 1;
        }
    }
    verdict(
        9,
        "product distribution majorization",
        failures == 0,
        format!("{failures} failures of 10000"),
    );
}

fn c10_structural_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut entropy_gap, mut intertwine, mut holevo, mut twirl) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = rng.random_range(1..=3);
        let rho = sampling::random_density(1 << n, &mut rng);
        let ch = sampling::random_channel(n, &mut rng);
        entropy_gap = entropy_gap.max(
            (embed_mode(&rho).unwrap().entropy().unwrap() - rho.entropy().unwrap() - 1.0).abs(),
        );
        let lhs = embed_mode_operator(&ch.apply(rho.matrix()).unwrap()).unwrap();
        let rhs = ch
            .embed_hat()
            .unwrap()
            .apply(&embed_mode_operator(rho.matrix()).unwrap())
            .unwrap();
        intertwine = intertwine.max(lhs.max_abs_diff(&rhs));
    }
    for _ in 0..20 {
        let n = rng.random_range(1..=4);
        let ch = sampling::random_channel(n, &mut rng);
        let target = n as f64 - smin_gaussian(ch.coefficients()).unwrap();
        holevo = holevo.max(
            (holevo_quantity(&optimal_ensemble_for(&ch).unwrap(), &ch).unwrap() - target).abs(),
        );
    }
    for n in 1..=3 {
        let basis = MonomialBasis::new(n).unwrap();
        let d = basis.dim();
        for _ in 0..5 {
            let a = sampling::random_matrix(d, &mut rng);
            let mut out = ComplexMatrix::zeros(d);
            for x in 0..basis.len() as u32 {
                basis.accumulate_conjugation(x, 1.0 / basis.len() as f64, &a, &mut out);
            }
            twirl = twirl
                .max(out.max_abs_diff(&ComplexMatrix::identity(d).scale(a.trace() / d as f64)));
        }
    }
    let ok = entropy_gap <= 1e-10 && intertwine <= 1e-12 && holevo <= 1e-9 && twirl <= 1e-14;
    verdict(
        10,
        "structural identities",
        ok,
        format!(
            "embedding entropy {entropy_gap:.3e} (1e-10), intertwining {intertwine:.3e} (1e-12), \
             holevo {holevo:.3e} (1e-9), randomizing {twirl:.3e} (1e-14)"
        ),
    );
}

fn c11_minimizers_are_gaussian() {
    let cfg = MinimizerConfig {
        seed: 11,
        ..Default::default()
    };
    let bs = grid(0.05, 0.70);
    let (_, _, dp) = family_sweep(3, "plus", &bs, &cfg);
    let (_, _, dt) = family_sweep(3, "times", &bs, &cfg);
    let (_, _, d4) = family_sweep(4, "plus", &[0.3, 0.6, 0.9], &cfg);
    let defect = dp.max(dt).max(d4);
    verdict(
        11,
        "gaussian witness of argmin",
        defect <= WITNESS_TOL,
        format!("worst singular-value defect {defect:.3e} (tol {WITNESS_TOL:e})"),
    );
}

fn main() {
    let criteria: [(&str, fn()); 11] = [
        (
            "c01_product_form_matches_kraus_form",
            c01_product_form_matches_kraus_form,
        ),
        (
            "c02_covariance_commutes_with_channel",
            c02_covariance_commutes_with_channel,
        ),
        (
            "c03_covariance_entropy_matches_dense_entropy",
            c03_covariance_entropy_matches_dense_entropy,
        ),
        (
            "c04_small_registers_reach_gaussian_minimum",
            c04_small_registers_reach_gaussian_minimum,
        ),
        ("c05_three_mode_families", c05_three_mode_families),
        ("c06_four_mode_families", c06_four_mode_families),
        ("c07_fourfold_depolarizing", c07_fourfold_depolarizing),
        (
            "c08_gaussian_outputs_majorized_by_optimal_output",
            c08_gaussian_outputs_majorized_by_optimal_output,
        ),
        (
            "c09_product_distribution_majorization",
            c09_product_distribution_majorization,
        ),
        ("c10_structural_identities", c10_structural_identities),
        ("c11_minimizers_are_gaussian", c11_minimizers_are_gaussian),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = std::time::Instant::now();
        if std::panic::catch_unwind(run).is_err() {
            failed += 1;
        }
        println!("    ({name}: {:.1} s)", start.elapsed().as_secs_f64());
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
