//! Covariance-matrix description of fermionic Gaussian states.

use num_complex::Complex64;
use serde::Serialize;

use crate::channel::{embed_mode, DensityOperator, FermionicProductChannel};
use crate::clifford::{self, phase_value, MajoranaMonomial, MonomialBasis};
use crate::error::{Error, Result};
use crate::numerics::{
    antisymmetric_singular_values, entropy_bits, hermitian_eig, pfaffian_dense,
    RealAntisymmetricMatrix, RealMatrix, ZERO,
};

/// Ingest tolerance on λ_j ≤ 1.
pub const ADMISSIBILITY_TOL: f64 = 1e-8;
/// Largest tolerated imaginary residue of a covariance entry.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;
/// Tolerance on R Rᵀ = I.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Covariance matrix M_pq = −(i/2) Tr[ρ(ĉ_p ĉ_q − ĉ_q ĉ_p)] of an admissible
/// state, i.e. with all canonical singular values λ_j ≤ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    m: RealAntisymmetricMatrix,
}

impl CovarianceMatrix {
    pub fn new(m: RealAntisymmetricMatrix) -> Result<Self> {
        clifford::check_modes(m.modes())?;
        let top = antisymmetric_singular_values(&m)?
            .first()
            .copied()
            .unwrap_or(0.0);
        if top > 1.0 + ADMISSIBILITY_TOL {
            return Err(Error::Inadmissible(top));
        }
        Ok(Self { m })
    }

    /// Blocks [[0, 1], [−1, 0]]: the covariance of |0…0⟩.
    pub fn vacuum(n: usize) -> Self {
        Self {
            m: RealAntisymmetricMatrix::canonical(&vec![1.0; n]),
        }
    }

    pub fn modes(&self) -> usize {
        self.m.modes()
    }

    pub fn matrix(&self) -> &RealAntisymmetricMatrix {
        &self.m
    }

    /// λ_1 ≥ … ≥ λ_n.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        antisymmetric_singular_values(&self.m)
    }

    pub fn is_pure(&self, tol: f64) -> Result<bool> {
        Ok(self
            .singular_values()?
            .iter()
            .all(|l| (l - 1.0).abs() <= tol))
    }
}

fn qubit_count(rho: &DensityOperator) -> Result<usize> {
    let n = rho.qubits().ok_or_else(|| {
        Error::InvalidState(format!("dimension {} is not a qubit register", rho.dim()))
    })?;
    clifford::check_modes(n)?;
    Ok(n)
}

pub fn covariance_from_density(rho: &DensityOperator) -> Result<CovarianceMatrix> {
    let n = qubit_count(rho)?;
    let mut worst_imag = 0.0f64;
    let m = RealAntisymmetricMatrix::from_upper(2 * n, |p, q| {
        let pauli = MajoranaMonomial::from_indices(n, &[p + 1, q + 1], 0)
            .expect("indices in range")
            .to_pauli();
        let v = -Complex64::i() * pauli.expectation(rho.matrix());
        worst_imag = worst_imag.max(v.im.abs());
        v.re
    });
    if worst_imag > IMAGINARY_RESIDUE_TOL {
        return Err(Error::InvalidState(format!(
            "covariance entries have imaginary part {worst_imag:.3e}"
        )));
    }
    Ok(CovarianceMatrix { m })
}

/// Tr(ρ ĉ(x)) = i^{|x|/2} Pf(M[x]) for an even Gaussian state.
pub fn wick_moment(m: &CovarianceMatrix, x: u32) -> Result<Complex64> {
    let w = x.count_ones();
    if w % 2 == 1 {
        return Err(Error::OddWeight(w));
    }
    if x >> m.matrix().dim() != 0 {
        return Err(Error::IndexOutOfRange {
            index: 32 - x.leading_zeros() as usize,
            max: m.matrix().dim(),
        });
    }
    let idx: Vec<usize> = (0..m.matrix().dim()).filter(|p| x >> p & 1 == 1).collect();
    let pf = pfaffian_dense(&m.matrix().submatrix(&idx))?;
    Ok(phase_value((w / 2 % 4) as u8) * pf)
}

/// ρ = 2^{-n} Σ_{even x} Tr(ĉ(x)†ρ) ĉ(x), with Tr(ĉ(x)†ρ) = (−1)^{|x|(|x|−1)/2} Tr(ρ ĉ(x)).
pub fn density_from_covariance(m: &CovarianceMatrix) -> Result<DensityOperator> {
    let n = m.modes();
    let basis = MonomialBasis::new(n)?;
    let inv = 1.0 / basis.dim() as f64;
    let coeffs: Vec<Complex64> = (0..basis.len() as u32)
        .map(|x| {
            let w = x.count_ones();
            if w % 2 == 1 {
                return Ok(ZERO);
            }
            let reversal = if (w * w.saturating_sub(1) / 2) % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            Ok(wick_moment(m, x)? * reversal * inv)
        })
        .collect::<Result<_>>()?;
    Ok(DensityOperator::from_trusted(basis.assemble(&coeffs)))
}

/// Binary entropy in bits, clamping the argument into [0, 1].
pub(crate) fn binary_entropy_clamped(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    entropy_bits(&[x, 1.0 - x])
}

/// S(ρ) = Σ_j H((1 + λ_j)/2) in bits.
pub fn gaussian_entropy(m: &CovarianceMatrix) -> Result<f64> {
    let lambdas = m.singular_values()?;
    if let Some(&top) = lambdas.first() {
        if top > 1.0 + ADMISSIBILITY_TOL {
            return Err(Error::Inadmissible(top));
        }
    }
    Ok(lambdas
        .iter()
        .map(|l| binary_entropy_clamped((1.0 + l) / 2.0))
        .sum())
}

/// Φ(M) = B M Bᵀ with B = diag(b).
pub fn channel_on_covariance(
    ch: &FermionicProductChannel,
    m: &CovarianceMatrix,
) -> Result<CovarianceMatrix> {
    if ch.n() != m.modes() {
        return Err(Error::DimensionMismatch {
            expected: 2 * ch.n(),
            got: m.matrix().dim(),
        });
    }
    Ok(CovarianceMatrix {
        m: m.matrix().scale_diagonal(ch.coefficients()),
    })
}

/// R M Rᵀ for orthogonal R.
pub fn rotate_covariance(r: &RealMatrix, m: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if r.dim() != m.matrix().dim() {
        return Err(Error::DimensionMismatch {
            expected: m.matrix().dim(),
            got: r.dim(),
        });
    }
    let defect = r.orthogonality_defect();
    if !(defect <= ORTHOGONALITY_TOL) {
        return Err(Error::NotOrthogonal(defect));
    }
    Ok(CovarianceMatrix {
        m: m.matrix().congruence(r),
    })
}

/// Outcome of [`is_gaussian_pure`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianWitness {
    pub gaussian: bool,
    /// True when the test ran on the state embedded into one extra mode.
    pub embedded: bool,
    /// Canonical singular values of the tested covariance matrix, descending.
    pub singular_values: Vec<f64>,
    /// Largest distance of the singular values from the pure-Gaussian pattern.
    pub defect: f64,
}

/// Purity-of-covariance test for a pure state.
///
/// Parity-definite states are tested directly (all λ_j = 1). Other pure
/// states are first passed through the one-mode embedding, after which a
/// Gaussian input shows the pattern (1, …, 1, 0).
pub fn is_gaussian_pure(rho: &DensityOperator, tol: f64) -> Result<GaussianWitness> {
    let n = qubit_count(rho)?;
    let eig = hermitian_eig(rho.matrix())?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    if top < 1.0 - tol {
        return Err(Error::NotPure(top));
    }
    let (parity, _) = clifford::parity_operator(n)?;
    let parity_mean = rho.matrix().trace_product(&parity).re;
    let (embedded, singular_values, defect) = if parity_mean.abs() >= 1.0 - tol {
        let sv = covariance_from_density(rho)?.singular_values()?;
        let defect = sv.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max);
        (false, sv, defect)
    } else {
        let sv = covariance_from_density(&embed_mode(rho)?)?.singular_values()?;
        let defect = sv
            .iter()
            .enumerate()
            .map(|(j, l)| if j < n { (l - 1.0).abs() } else { l.abs() })
            .fold(0.0, f64::max);
        (true, sv, defect)
    };
    Ok(GaussianWitness {
        gaussian: defect <= tol,
        embedded,
        singular_values,
        defect,
    })
}
