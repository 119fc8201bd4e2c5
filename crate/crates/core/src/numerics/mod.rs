//! Dense linear-algebra kernels: Hermitian eigendecomposition, PSD matrix
//! logarithm, Pfaffians and the canonical spectrum of antisymmetric matrices.

mod eig;
mod matrix;
mod pfaffian;

pub use eig::{
    antisymmetric_singular_values, entropy_bits, hermitian_eig, matrix_log_from_eigen,
    matrix_log_psd, singular_values, von_neumann_entropy, HermitianEigen, DEFAULT_LOG_FLOOR,
    HERMITIAN_TOL, MAX_SWEEPS, PSD_TOL,
};
pub use matrix::{
    ComplexMatrix, RealAntisymmetricMatrix, RealMatrix, ANTISYMMETRY_TOL, I, ONE, ZERO,
};
pub use pfaffian::{pfaffian, pfaffian_dense};

pub use num_complex::Complex64;
