//! Closed-form minimum output entropies and Gaussian capacity, the optimal
//! Gaussian input and signalling ensemble, and the Holevo quantity.

use serde::Serialize;

use crate::channel::{Channel, DensityOperator, FermionicProductChannel};
use crate::clifford::{self, generator_matrix};
use crate::error::{Error, Result};
use crate::gaussian::binary_entropy_clamped;
use crate::numerics::{ComplexMatrix, RealAntisymmetricMatrix, RealMatrix, I};

/// Tolerance on ensemble probabilities summing to one.
pub const PROBABILITY_TOL: f64 = 1e-12;

/// Shannon binary entropy in bits, with H(0) = H(1) = 0.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(x));
    }
    Ok(binary_entropy_clamped(x))
}

fn validate(b: &[f64]) -> Result<()> {
    if b.is_empty() || !b.len().is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!(
            "field `b`: expected an even, nonzero number of coefficients, got {}",
            b.len()
        )));
    }
    if let Some((index, &value)) = b
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(Error::InvalidCoefficient { index, value });
    }
    Ok(())
}

/// Coefficients in descending order (stable for ties).
pub fn sorted_descending(b: &[f64]) -> Vec<f64> {
    let mut s = b.to_vec();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Indices 0..2n ordered by descending coefficient (stable for ties).
fn descending_order(b: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..b.len()).collect();
    idx.sort_by(|&i, &j| b[j].total_cmp(&b[i]));
    idx
}

/// Minimum output entropy over even Gaussian inputs: Σ_j H((1 + b↓_{2j−1} b↓_{2j})/2).
pub fn smin_even(b: &[f64]) -> Result<f64> {
    validate(b)?;
    let s = sorted_descending(b);
    Ok(s.chunks(2)
        .map(|p| binary_entropy_clamped((1.0 + p[0] * p[1]) / 2.0))
        .sum())
}

/// Minimum output entropy over all Gaussian inputs:
/// H((1 + b↓_1)/2) + Σ_{j=1}^{n−1} H((1 + b↓_{2j} b↓_{2j+1})/2).
pub fn smin_gaussian(b: &[f64]) -> Result<f64> {
    validate(b)?;
    let s = sorted_descending(b);
    let n = s.len() / 2;
    let head = binary_entropy_clamped((1.0 + s[0]) / 2.0);
    Ok(head
        + (1..n)
            .map(|j| binary_entropy_clamped((1.0 + s[2 * j - 1] * s[2 * j]) / 2.0))
            .sum::<f64>())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub n: usize,
    pub b_sorted: Vec<f64>,
    pub smin_even: f64,
    pub smin_gaussian: f64,
    pub c1_gaussian: f64,
}

pub fn gaussian_capacity(b: &[f64]) -> Result<CapacityReport> {
    let smin_gaussian = smin_gaussian(b)?;
    let n = b.len() / 2;
    Ok(CapacityReport {
        n,
        b_sorted: sorted_descending(b),
        smin_even: smin_even(b)?,
        smin_gaussian,
        c1_gaussian: n as f64 - smin_gaussian,
    })
}

/// First and second moments of a Gaussian state that need not be even:
/// d_p = Tr(ρ ĉ_p) and the covariance matrix M.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMoments {
    pub first: Vec<f64>,
    pub covariance: RealAntisymmetricMatrix,
}

/// Generator pairing (1), (2,3), …, (2n−2, 2n−1) applied to the given
/// ordering of 0-based generator indices; the last index stays unpaired.
fn pairing_state(
    n: usize,
    order: &[usize],
    signs: &[bool],
) -> Result<(DensityOperator, GaussianMoments)> {
    clifford::check_modes(n)?;
    let d = 1usize << n;
    let id = ComplexMatrix::identity(d);
    let g = |k: usize| generator_matrix(order[k] + 1, n).expect("generator index in range");
    let sign = |j: usize| if signs[j] { -1.0 } else { 1.0 };

    let mut rho = &id + &g(0).scale_real(sign(0));
    let mut first = vec![0.0; 2 * n];
    first[order[0]] = sign(0);
    let mut cov = RealMatrix::zeros(2 * n);
    for j in 1..n {
        let (p, q) = (order[2 * j - 1], order[2 * j]);
        // (I − i s ĉ_p ĉ_q): M_pq = s.
        let factor = &id - &(&g(2 * j - 1) * &g(2 * j)).scale(I * sign(j));
        rho = &rho * &factor;
        cov[(p, q)] = sign(j);
        cov[(q, p)] = -sign(j);
    }
    let rho = DensityOperator::from_trusted(rho.scale_real(1.0 / d as f64));
    let covariance = RealAntisymmetricMatrix::new(cov).expect("antisymmetric by construction");
    Ok((rho, GaussianMoments { first, covariance }))
}

/// ρ_* = 2^{−n} (I + ĉ_1)(I − iĉ_2ĉ_3)···(I − iĉ_{2n−2}ĉ_{2n−1}).
pub fn optimal_input_state(n: usize) -> Result<(DensityOperator, GaussianMoments)> {
    let order: Vec<usize> = (0..2 * n).collect();
    pairing_state(n, &order, &vec![false; n])
}

/// ρ_* with generators relabelled so that ĉ_1 is the least attenuated mode,
/// (ĉ_2, ĉ_3) the next pair, and so on.
pub fn optimal_input_state_for(
    ch: &FermionicProductChannel,
) -> Result<(DensityOperator, GaussianMoments)> {
    let order = descending_order(ch.coefficients());
    pairing_state(ch.n(), &order, &vec![false; ch.n()])
}

/// A finite ensemble {(p_a, ρ_a)}.
#[derive(Debug, Clone)]
pub struct SignalEnsemble {
    members: Vec<(f64, DensityOperator)>,
}

impl SignalEnsemble {
    pub fn new(members: Vec<(f64, DensityOperator)>) -> Result<Self> {
        let dim = members
            .first()
            .map(|(_, r)| r.dim())
            .ok_or_else(|| Error::InvalidConfig("an ensemble needs at least one state".into()))?;
        if let Some((_, r)) = members.iter().find(|(_, r)| r.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: r.dim(),
            });
        }
        if let Some(&(p, _)) = members.iter().find(|(p, _)| !(*p >= 0.0)) {
            return Err(Error::OutOfRange(p));
        }
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidConfig(format!(
                "ensemble probabilities sum to {total}"
            )));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, DensityOperator)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].1.dim()
    }

    pub fn average(&self) -> ComplexMatrix {
        let mut avg = ComplexMatrix::zeros(self.dim());
        for (p, r) in &self.members {
            avg = &avg + &r.matrix().scale_real(*p);
        }
        avg
    }
}

fn ensemble_with_order(n: usize, order: &[usize]) -> Result<SignalEnsemble> {
    let weight = 1.0 / (1usize << n) as f64;
    let members = (0..1usize << n)
        .map(|s| {
            let signs: Vec<bool> = (0..n).map(|j| s >> j & 1 == 1).collect();
            Ok((weight, pairing_state(n, order, &signs)?.0))
        })
        .collect::<Result<_>>()?;
    SignalEnsemble::new(members)
}

/// The 2^n equiprobable states 2^{−n}(I ± ĉ_1)(I ± iĉ_2ĉ_3)···.
pub fn optimal_ensemble(n: usize) -> Result<SignalEnsemble> {
    ensemble_with_order(n, &(0..2 * n).collect::<Vec<_>>())
}

pub fn optimal_ensemble_for(ch: &FermionicProductChannel) -> Result<SignalEnsemble> {
    ensemble_with_order(ch.n(), &descending_order(ch.coefficients()))
}

/// χ = S(Φ(ρ̄)) − Σ_a p_a S(Φ(ρ_a)) in bits.
pub fn holevo_quantity(ens: &SignalEnsemble, ch: &dyn Channel) -> Result<f64> {
    if ens.dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            got: ens.dim(),
        });
    }
    let avg = DensityOperator::from_trusted(ch.apply(&ens.average())?).entropy()?;
    let mut mean = 0.0;
    for (p, r) in ens.members() {
        mean += p * DensityOperator::from_trusted(ch.apply(r.matrix())?).entropy()?;
    }
    Ok(avg - mean)
}
