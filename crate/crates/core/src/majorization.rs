//! Majorization of real vectors and spectra.

use serde::Serialize;

use crate::capacity::optimal_input_state_for;
use crate::channel::{Channel, DensityOperator, FermionicProductChannel};
use crate::error::{Error, Result};

/// Default tolerance on prefix sums and on equality of totals.
pub const MAJORIZATION_TOL: f64 = 1e-10;
/// Prefix tolerance for comparing dense output spectra.
pub const SPECTRUM_TOL: f64 = 1e-9;

/// Result of comparing y against z, with margins for near-boundary diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub holds: bool,
    /// min_k (Σ_{j≤k} z↓_j − Σ_{j≤k} y↓_j); negative means a violated prefix.
    pub worst_margin: f64,
    /// |Σ z − Σ y|.
    pub total_gap: f64,
}

fn descending(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Checks y ≺ z with the given tolerance.
pub fn majorization_report(z: &[f64], y: &[f64], tol: f64) -> Result<MajorizationReport> {
    if z.len() != y.len() {
        return Err(Error::LengthMismatch(z.len(), y.len()));
    }
    let (zs, ys) = (descending(z), descending(y));
    let (mut sz, mut sy) = (0.0, 0.0);
    let mut worst = f64::INFINITY;
    for (a, b) in zs.iter().zip(&ys) {
        sz += a;
        sy += b;
        worst = worst.min(sz - sy);
    }
    let total_gap = (sz - sy).abs();
    let holds = worst >= -tol && total_gap <= tol;
    Ok(MajorizationReport {
        holds,
        worst_margin: if z.is_empty() { 0.0 } else { worst },
        total_gap,
    })
}

/// True iff y ≺ z (z majorizes y) within [`MAJORIZATION_TOL`].
pub fn majorizes(z: &[f64], y: &[f64]) -> Result<bool> {
    Ok(majorization_report(z, y, MAJORIZATION_TOL)?.holds)
}

/// y_a = λ z_a + (1−λ) z_b, y_b = (1−λ) z_a + λ z_b, with 0-based indices a < b.
pub fn t_transform(z: &[f64], a: usize, b: usize, lambda: f64) -> Result<Vec<f64>> {
    if b >= z.len() {
        return Err(Error::IndexOutOfRange {
            index: b,
            max: z.len().saturating_sub(1),
        });
    }
    if a >= b {
        return Err(Error::IndexOutOfRange {
            index: a,
            max: b.saturating_sub(1),
        });
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange(lambda));
    }
    let mut y = z.to_vec();
    y[a] = lambda * z[a] + (1.0 - lambda) * z[b];
    y[b] = (1.0 - lambda) * z[a] + lambda * z[b];
    Ok(y)
}

/// P(x) = 2^{−n} Π_j (1 + (−1)^{x_j} α_j), indexed by x with x_j at bit j−1.
pub fn product_binary_distribution(alpha: &[f64]) -> Result<Vec<f64>> {
    if let Some(&a) = alpha.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(Error::OutOfRange(a));
    }
    let n = alpha.len();
    Ok((0..1usize << n)
        .map(|x| {
            alpha
                .iter()
                .enumerate()
                .map(|(j, a)| 0.5 * if x >> j & 1 == 0 { 1.0 + a } else { 1.0 - a })
                .product()
        })
        .collect())
}

/// Compares the product distributions P (from α) and Q (from β), returning
/// whether P ≺ Q. The hypothesis (both descending in [0, 1], prefix products
/// of α bounded by those of β, equal full products) is validated first.
pub fn check_product_majorization(alpha: &[f64], beta: &[f64]) -> Result<bool> {
    if alpha.len() != beta.len() {
        return Err(Error::LengthMismatch(alpha.len(), beta.len()));
    }
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if let Some(&a) = v.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::OutOfRange(a));
        }
        if let Some(k) = v.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::HypothesisViolated {
                k: k + 2,
                detail: format!("{name} is not descending"),
            });
        }
    }
    let (mut pa, mut pb) = (1.0, 1.0);
    for (k, (a, b)) in alpha.iter().zip(beta).enumerate() {
        pa *= a;
        pb *= b;
        if pa > pb + MAJORIZATION_TOL {
            return Err(Error::HypothesisViolated {
                k: k + 1,
                detail: format!("prefix product of alpha {pa} exceeds that of beta {pb}"),
            });
        }
    }
    if (pa - pb).abs() > MAJORIZATION_TOL {
        return Err(Error::HypothesisViolated {
            k: alpha.len(),
            detail: format!("full products differ: {pa} vs {pb}"),
        });
    }
    majorizes(
        &product_binary_distribution(beta)?,
        &product_binary_distribution(alpha)?,
    )
}

/// Compares Spec(Φ(ρ)) against Spec(Φ(ρ_*)) at prefix tolerance [`SPECTRUM_TOL`].
/// The caller is responsible for ρ being Gaussian.
pub fn spectrum_majorization_check(
    ch: &FermionicProductChannel,
    rho: &DensityOperator,
) -> Result<MajorizationReport> {
    let (star, _) = optimal_input_state_for(ch)?;
    let out = DensityOperator::from_trusted(ch.apply(rho.matrix())?).spectrum()?;
    let best = DensityOperator::from_trusted(ch.apply(star.matrix())?).spectrum()?;
    majorization_report(&best, &out, SPECTRUM_TOL)
}

/// Rényi entropy in bits; `alpha` may be 0, 1, or infinite.
pub fn renyi_entropy(p: &[f64], alpha: f64) -> f64 {
    let support = p.iter().copied().filter(|&x| x > 0.0);
    if alpha == 0.0 {
        (support.count() as f64).log2()
    } else if alpha == 1.0 {
        -support.map(|x| x * x.log2()).sum::<f64>()
    } else if alpha.is_infinite() {
        -support.fold(0.0, f64::max).log2()
    } else {
        support.map(|x| x.powf(alpha)).sum::<f64>().log2() / (1.0 - alpha)
    }
}
