//! Seeded random instances: states, channels, orthogonal rotations and
//! covariance matrices.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{DensityOperator, FermionicProductChannel};
use crate::gaussian::{self, CovarianceMatrix};
use crate::numerics::{ComplexMatrix, RealAntisymmetricMatrix, RealMatrix};

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector: normalized complex Gaussian entries.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Unit vector in the span of the given orthonormal vectors.
pub fn random_unit_in_span<R: Rng + ?Sized>(
    basis: &[Vec<Complex64>],
    rng: &mut R,
) -> Vec<Complex64> {
    let coeffs = random_unit_vector(basis.len(), rng);
    let dim = basis[0].len();
    (0..dim)
        .map(|i| basis.iter().zip(&coeffs).map(|(v, c)| v[i] * c).sum())
        .collect()
}

pub fn random_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(dim, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Full-rank state G G† / Tr(G G†) with G Ginibre.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    let g = random_matrix(dim, rng);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityOperator::from_trusted(gg.scale_real(1.0 / tr))
}

pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    DensityOperator::from_trusted(ComplexMatrix::outer(&random_unit_vector(dim, rng)))
}

/// Pure state supported on even-parity computational basis states.
pub fn random_even_pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    let dim = 1usize << n;
    let mut v = random_unit_vector(dim, rng);
    for (k, z) in v.iter_mut().enumerate() {
        if k.count_ones() % 2 == 1 {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    DensityOperator::from_trusted(ComplexMatrix::outer(
        &v.iter().map(|z| z / norm).collect::<Vec<_>>(),
    ))
}

pub fn random_coefficients<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..2 * n).map(|_| rng.random_range(0.0..=1.0)).collect()
}

pub fn random_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> FermionicProductChannel {
    FermionicProductChannel::new(n, random_coefficients(n, rng))
        .expect("coefficients lie in [0, 1]")
}

/// Random rotation in SO(dim) as a product of 3·dim² Givens rotations.
pub fn random_rotation<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> RealMatrix {
    let mut r = RealMatrix::identity(dim);
    if dim < 2 {
        return r;
    }
    for _ in 0..3 * dim * dim {
        let p = rng.random_range(0..dim);
        let q = (p + rng.random_range(1..dim)) % dim;
        r.rotate_rows(p, q, rng.random_range(0.0..std::f64::consts::TAU));
    }
    r
}

/// R·(⊕ λ_j ω)·Rᵀ with λ_j uniform in [0, 1].
pub fn random_admissible_covariance<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CovarianceMatrix {
    let lambdas: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
    let m = RealAntisymmetricMatrix::canonical(&lambdas).congruence(&random_rotation(2 * n, rng));
    CovarianceMatrix::new(m).expect("rotated canonical form is admissible")
}

/// Rotated vacuum covariance: the covariance matrix of a random even pure Gaussian state.
pub fn random_pure_covariance<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CovarianceMatrix {
    let m =
        RealAntisymmetricMatrix::canonical(&vec![1.0; n]).congruence(&random_rotation(2 * n, rng));
    CovarianceMatrix::new(m).expect("rotated vacuum is admissible")
}

pub fn random_even_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    gaussian::density_from_covariance(&random_admissible_covariance(n, rng)).expect("admissible")
}

pub fn random_pure_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    gaussian::density_from_covariance(&random_pure_covariance(n, rng)).expect("admissible")
}

/// A pair (α, β) of descending vectors in (0, 1] whose prefix products satisfy
/// Π_{j≤k} α_j ≤ Π_{j≤k} β_j with equality at k = n. Built by averaging
/// ln β with random T-transforms, which keeps ln α majorized by ln β.
pub fn random_dominated_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let mut beta: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..=1.0)).collect();
    beta.sort_by(|a, b| b.total_cmp(a));
    let mut logs: Vec<f64> = beta.iter().map(|b| b.ln()).collect();
    if n > 1 {
        for _ in 0..rng.random_range(0..3 * n) {
            let a = rng.random_range(0..n - 1);
            let b = rng.random_range(a + 1..n);
            let l: f64 = rng.random_range(0.0..=1.0);
            let (za, zb) = (logs[a], logs[b]);
            logs[a] = l * za + (1.0 - l) * zb;
            logs[b] = (1.0 - l) * za + l * zb;
        }
    }
    let mut alpha: Vec<f64> = logs.into_iter().map(|x| x.exp().min(1.0)).collect();
    alpha.sort_by(|a, b| b.total_cmp(a));
    (alpha, beta)
}
