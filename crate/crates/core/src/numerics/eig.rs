//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! spectral functions built on top of it.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, RealAntisymmetricMatrix};
use crate::error::{Error, Result};

/// Largest tolerated entrywise |A - A†| on input.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues below this are a PSD violation rather than rounding noise.
pub const PSD_TOL: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 100;
/// Default floor applied to eigenvalues before taking logarithms.
pub const DEFAULT_LOG_FLOOR: f64 = 1e-300;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.vectors.column(j)
    }

    /// V·diag(f(λ))·V†.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in i..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += v[(i, k)] * fv[k] * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }
}

pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = a.hermiticity_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.dim();
    let mut w = a.clone();
    w.hermitize();
    let mut v = ComplexMatrix::identity(n);
    let norm = w.frobenius_norm();

    let mut converged = norm == 0.0 || n < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut w, &mut v, p, q, norm);
            }
        }
        converged = off_diagonal_norm(&w) <= 1e-14 * norm;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].re.total_cmp(&w[(j, j)].re));
    let values = order.iter().map(|&i| w[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating a[p][q]. The rotation is
/// G = D·R with D = diag(1, e^{-iφ}) on (p, q) making the pivot real, and R
/// the real symmetric Jacobi rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, norm: f64) {
    let apq = a[(p, q)];
    let h = apq.norm();
    if h <= 1e-300 || h <= 1e-18 * norm {
        return;
    }
    let phase = apq.conj() / h;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * h);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// V·diag(ln max(λ_j, floor))·V† for a Hermitian PSD matrix.
pub fn matrix_log_psd(a: &ComplexMatrix, floor: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    matrix_log_from_eigen(&eig, floor)
}

pub fn matrix_log_from_eigen(eig: &HermitianEigen, floor: f64) -> Result<ComplexMatrix> {
    if let Some(&min) = eig.values.first() {
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(eig.map_spectrum(|l| l.max(floor).ln()))
}

/// Singular values of a general square matrix, descending, via the
/// eigenvalues of A†A.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut gram = &a.adjoint() * a;
    gram.hermitize();
    let eig = hermitian_eig(&gram)?;
    Ok(eig
        .values
        .iter()
        .rev()
        .map(|&l| l.max(0.0).sqrt())
        .collect())
}

/// The λ_j ≥ 0 with eigenvalues ±iλ_j of a real antisymmetric 2n×2n matrix,
/// sorted descending.
pub fn antisymmetric_singular_values(m: &RealAntisymmetricMatrix) -> Result<Vec<f64>> {
    // iM is Hermitian with spectrum ±λ_j.
    let d = m.dim();
    let herm = ComplexMatrix::from_fn(d, |i, j| Complex64::new(0.0, m.get(i, j)));
    let eig = hermitian_eig(&herm)?;
    Ok(eig
        .values
        .iter()
        .rev()
        .take(m.modes())
        .map(|&l| l.max(0.0))
        .collect())
}

/// Von Neumann entropy in bits of a spectrum; tiny negative eigenvalues are
/// treated as zero.
pub fn entropy_bits(spectrum: &[f64]) -> f64 {
    -spectrum
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// Von Neumann entropy in bits of a Hermitian PSD matrix.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eig(rho)?;
    Ok(entropy_bits(&eig.values))
}
