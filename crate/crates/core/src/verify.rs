//! Seeded property suites behind `fermicap verify`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::capacity::{holevo_quantity, optimal_ensemble_for, smin_even, smin_gaussian};
use crate::channel::{
    embed_mode, embed_mode_operator, Channel, DensityOperator, GeneralKraussChannel,
};
use crate::clifford::{monomial_product, MajoranaMonomial, MonomialBasis};
use crate::error::{Error, Result};
use crate::gaussian::{
    channel_on_covariance, covariance_from_density, density_from_covariance, gaussian_entropy,
    wick_moment,
};
use crate::majorization::{
    check_product_majorization, majorizes, spectrum_majorization_check, t_transform,
};
use crate::minimizer::{minimize, MinimizerConfig};
use crate::numerics::ComplexMatrix;
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Gaussian,
    Majorization,
    Capacity,
    Minimizer,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "algebra" => Self::Algebra,
            "gaussian" => Self::Gaussian,
            "majorization" => Self::Majorization,
            "capacity" => Self::Capacity,
            "minimizer" => Self::Minimizer,
            "all" => Self::All,
            other => return Err(Error::InvalidConfig(format!("unknown suite `{other}`"))),
        })
    }
}

/// Outcome of one property: margin = tolerance − observed error, so a
/// negative worst margin marks a failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub worst_margin: f64,
}

impl PropertyResult {
    fn new(suite: &'static str, name: &'static str) -> Self {
        Self {
            suite,
            name,
            checks: 0,
            failures: 0,
            worst_margin: f64::INFINITY,
        }
    }

    fn record(&mut self, error: f64, tol: f64) {
        let margin = tol - error;
        self.checks += 1;
        // NaN errors count as failures.
        if !(margin >= 0.0) {
            self.failures += 1;
        }
        self.worst_margin = if margin.is_nan() {
            f64::NEG_INFINITY
        } else {
            self.worst_margin.min(margin)
        };
    }

    fn record_bool(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { 1.0 }, 0.0);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{}: checks={} failures={} worst_margin={:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.checks,
            self.failures,
            self.worst_margin
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }
}

type SuiteFn = fn(&mut ChaCha8Rng) -> Result<Vec<PropertyResult>>;

pub fn run_suite(suite: Suite, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut properties = Vec::new();
    let run: &[(Suite, SuiteFn)] = &[
        (Suite::Algebra, algebra),
        (Suite::Gaussian, gaussian),
        (Suite::Majorization, majorization),
        (Suite::Capacity, capacity),
        (Suite::Minimizer, minimizer),
    ];
    for (s, f) in run {
        if suite == Suite::All || suite == *s {
            properties.extend(f(&mut rng)?);
        }
    }
    Ok(VerifyReport { seed, properties })
}

fn algebra(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyResult>> {
    const S: &str = "algebra";
    let mut anti = PropertyResult::new(S, "anticommutation");
    let mut product = PropertyResult::new(S, "symbolic_product");
    let mut roundtrip = PropertyResult::new(S, "pauli_round_trip");
    let mut randomizing = PropertyResult::new(S, "randomizing_set");
    let mut kraus = PropertyResult::new(S, "product_vs_kraus");
    for n in 1..=4 {
        let gens: Vec<ComplexMatrix> = (1..=2 * n)
            .map(|p| MajoranaMonomial::generator(p, n).map(|g| g.matrix()))
            .collect::<Result<_>>()?;
        for (p, a) in gens.iter().enumerate() {
            for (q, b) in gens.iter().enumerate() {
                let expected = if p == q {
                    ComplexMatrix::identity(1 << n).scale_real(2.0)
                } else {
                    ComplexMatrix::zeros(1 << n)
                };
                anti.record((&(a * b) + &(b * a)).max_abs_diff(&expected), 0.0);
            }
        }
    }
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let a =
            MajoranaMonomial::new(n, rng.random_range(0..1 << (2 * n)), rng.random_range(0..4))?;
        let b =
            MajoranaMonomial::new(n, rng.random_range(0..1 << (2 * n)), rng.random_range(0..4))?;
        let sym = monomial_product(&a, &b)?.matrix();
        product.record(sym.max_abs_diff(&(&a.matrix() * &b.matrix())), 1e-14);
        roundtrip.record_bool(MajoranaMonomial::from_pauli(&a.to_pauli()) == a);
    }
    for n in 1..=3 {
        let basis = MonomialBasis::new(n)?;
        let d = basis.dim();
        let a = sampling::random_matrix(d, rng);
        let mut twirl = ComplexMatrix::zeros(d);
        for x in 0..basis.len() as u32 {
            basis.accumulate_conjugation(x, 1.0 / basis.len() as f64, &a, &mut twirl);
        }
        let expected = ComplexMatrix::identity(d).scale(a.trace() / d as f64);
        randomizing.record(twirl.max_abs_diff(&expected), 1e-14);
    }
    for _ in 0..50 {
        let n = rng.random_range(1..=3);
        let ch = sampling::random_channel(n, rng);
        let rho = sampling::random_density(1 << n, rng);
        kraus.record(
            ch.apply_product(rho.matrix())?
                .max_abs_diff(&ch.apply_kraus(rho.matrix())?),
            1e-12,
        );
    }
    Ok(vec![anti, product, roundtrip, randomizing, kraus])
}

fn gaussian(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyResult>> {
    const S: &str = "gaussian";
    let mut roundtrip = PropertyResult::new(S, "covariance_round_trip");
    let mut wick = PropertyResult::new(S, "wick_moments");
    let mut entropy = PropertyResult::new(S, "entropy_formula");
    let mut diagram = PropertyResult::new(S, "channel_on_covariance");
    let mut embed_entropy = PropertyResult::new(S, "embedding_adds_one_bit");
    let mut intertwine = PropertyResult::new(S, "embedding_intertwines");
    for _ in 0..50 {
        let n = rng.random_range(1..=3);
        let m = sampling::random_admissible_covariance(n, rng);
        let rho = density_from_covariance(&m)?;
        roundtrip.record(
            covariance_from_density(&rho)?
                .matrix()
                .max_abs_diff(m.matrix()),
            1e-10,
        );
        entropy.record((gaussian_entropy(&m)? - rho.entropy()?).abs(), 1e-10);
        let basis = MonomialBasis::new(n)?;
        let x = loop {
            let x = rng.random_range(0..basis.len() as u32);
            if x.count_ones() % 2 == 0 {
                break x;
            }
        };
        wick.record(
            (wick_moment(&m, x)? - basis.expectation(x, rho.matrix())).norm(),
            1e-10,
        );
        let ch = sampling::random_channel(n, rng);
        let out = DensityOperator::new(ch.apply(rho.matrix())?)?;
        let lhs = covariance_from_density(&out)?;
        diagram.record(
            lhs.matrix()
                .max_abs_diff(channel_on_covariance(&ch, &m)?.matrix()),
            1e-10,
        );
        let any = sampling::random_density(1 << n, rng);
        embed_entropy.record(
            (embed_mode(&any)?.entropy()? - any.entropy()? - 1.0).abs(),
            1e-10,
        );
        let lhs = embed_mode_operator(&ch.apply(any.matrix())?)?;
        let rhs = ch.embed_hat()?.apply(&embed_mode_operator(any.matrix())?)?;
        intertwine.record(lhs.max_abs_diff(&rhs), 1e-12);
    }
    Ok(vec![
        roundtrip,
        wick,
        entropy,
        diagram,
        embed_entropy,
        intertwine,
    ])
}

fn majorization(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyResult>> {
    const S: &str = "majorization";
    let mut products = PropertyResult::new(S, "product_distributions");
    let mut outputs = PropertyResult::new(S, "gaussian_outputs");
    let mut chains = PropertyResult::new(S, "t_transform_chains");
    for _ in 0..10_000 {
        let n = rng.random_range(1..=6);
        let (alpha, beta) = sampling::random_dominated_pair(n, rng);
        products.record_bool(check_product_majorization(&alpha, &beta)?);
    }
    for _ in 0..200 {
        let n = rng.random_range(1..=4);
        let ch = sampling::random_channel(n, rng);
        let rho = sampling::random_pure_gaussian(n, rng);
        let report = spectrum_majorization_check(&ch, &rho)?;
        outputs.record((-report.worst_margin).max(report.total_gap), 1e-9);
    }
    for _ in 0..500 {
        let len = rng.random_range(2..=8);
        let z: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..1.0)).collect();
        let mut y = z.clone();
        for _ in 0..rng.random_range(1..10) {
            let a = rng.random_range(0..len - 1);
            let b = rng.random_range(a + 1..len);
            y = t_transform(&y, a, b, rng.random_range(0.0..=1.0))?;
        }
        chains.record_bool(majorizes(&z, &y)?);
    }
    Ok(vec![products, outputs, chains])
}

fn capacity(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyResult>> {
    const S: &str = "capacity";
    let mut brute = PropertyResult::new(S, "small_register_minimum");
    let mut holevo = PropertyResult::new(S, "optimal_ensemble_holevo");
    let mut embedding = PropertyResult::new(S, "embedding_identity");
    let mut lower = PropertyResult::new(S, "gaussian_lower_bound");
    for _ in 0..6 {
        let n = rng.random_range(1..=2);
        let ch = sampling::random_channel(n, rng);
        let cfg = MinimizerConfig {
            iterations: 200,
            restarts: 16,
            seed: rng.random(),
            ..Default::default()
        };
        let run = minimize(&ch, &cfg)?;
        brute.record(
            (run.best_entropy - smin_gaussian(ch.coefficients())?).abs(),
            1e-6,
        );
    }
    for _ in 0..20 {
        let n = rng.random_range(1..=4);
        let ch = sampling::random_channel(n, rng);
        let target = n as f64 - smin_gaussian(ch.coefficients())?;
        holevo.record(
            (holevo_quantity(&optimal_ensemble_for(&ch)?, &ch)? - target).abs(),
            1e-9,
        );
        let lhs = smin_gaussian(ch.coefficients())?;
        embedding.record(
            (lhs - (smin_even(ch.embed_hat()?.coefficients())? - 1.0)).abs(),
            1e-12,
        );
    }
    for _ in 0..1000 {
        let n = rng.random_range(1..=4);
        let ch = sampling::random_channel(n, rng);
        let m = sampling::random_pure_covariance(n, rng);
        let s = gaussian_entropy(&channel_on_covariance(&ch, &m)?)?;
        lower.record(smin_even(ch.coefficients())? - s, 1e-9);
    }
    Ok(vec![brute, holevo, embedding, lower])
}

fn minimizer(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyResult>> {
    const S: &str = "minimizer";
    let mut monotone = PropertyResult::new(S, "monotone_traces");
    let mut determinism = PropertyResult::new(S, "seed_determinism");
    let mut identity = PropertyResult::new(S, "identity_channel");
    let mut depolarizing = PropertyResult::new(S, "depolarizing_qubit");
    for _ in 0..4 {
        let n = rng.random_range(1..=3);
        let ch = sampling::random_channel(n, rng);
        let cfg = MinimizerConfig {
            restarts: 4,
            seed: rng.random(),
            ..Default::default()
        };
        let a = minimize(&ch, &cfg)?;
        for r in &a.restarts {
            for w in r.trace.windows(2) {
                monotone.record(w[1] - w[0], 1e-9);
            }
        }
        let b = minimize(&ch, &cfg)?;
        determinism.record((a.best_entropy - b.best_entropy).abs(), 1e-12);
    }
    let cfg = MinimizerConfig {
        restarts: 2,
        seed: rng.random(),
        ..Default::default()
    };
    identity.record(
        minimize(&GeneralKraussChannel::identity(4), &cfg)?
            .best_entropy
            .abs(),
        1e-9,
    );
    let p = rng.random_range(0.05..0.3);
    let run = minimize(&GeneralKraussChannel::depolarizing(p)?, &cfg)?;
    depolarizing.record(
        (run.best_entropy - crate::capacity::binary_entropy(1.0 - 2.0 * p)?).abs(),
        1e-9,
    );
    Ok(vec![monotone, determinism, identity, depolarizing])
}
