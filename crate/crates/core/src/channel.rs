//! Fermionic product channels and generic Kraus channels acting on dense
//! density operators.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{self, MajoranaMonomial, MonomialBasis};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, von_neumann_entropy, ComplexMatrix, I, ONE, ZERO};

/// Tolerance for Hermiticity, unit trace and PSD checks on density operators.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on Σ K†K = I.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-10;

/// A dense density operator: Hermitian, unit trace, PSD (all within 1e-10).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if !(defect <= STATE_TOL) {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {defect:.3e})"
            )));
        }
        let tr = matrix.trace();
        if !((tr.re - 1.0).abs() <= STATE_TOL && tr.im.abs() <= STATE_TOL) {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix the caller has already established as a state.
    pub(crate) fn from_trusted(mut matrix: ComplexMatrix) -> Self {
        matrix.hermitize();
        Self { matrix }
    }

    /// |ψ⟩⟨ψ| for a unit vector ψ.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= STATE_TOL) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self::from_trusted(ComplexMatrix::outer(psi)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Computational basis projector |k⟩⟨k|.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        m[(k, k)] = ONE;
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Number of qubits if the dimension is a power of two.
    pub fn qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigenvalues, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eig(&self.matrix)?.values)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        von_neumann_entropy(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }
}

/// A linear map on operators with its trace-inner-product adjoint.
pub trait Channel: Send + Sync {
    /// Hilbert-space dimension the channel acts on.
    fn dim(&self) -> usize;

    /// Φ(A) for an arbitrary operator A.
    fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix>;

    /// Φ*(A), defined by Tr(Φ(ρ)A) = Tr(ρΦ*(A)).
    fn adjoint_apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix>;

    /// Applies the channel to a state and validates the output.
    fn apply_state(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new(self.apply(rho.matrix())?)
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// JSON description of a fermionic product channel: `{"n": 2, "b": [..4 values..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub n: usize,
    pub b: Vec<f64>,
}

/// The channel scaling each monomial ĉ(x) by Π_{p: x_p = 1} b_p.
#[derive(Debug, Clone)]
pub struct FermionicProductChannel {
    b: Vec<f64>,
    basis: MonomialBasis,
    /// Π_{p ∈ x} b_p for every monomial x.
    weights: Vec<f64>,
}

impl FermionicProductChannel {
    /// Rejects coefficients outside [0, 1]; a negative b_p gives a unitarily
    /// equivalent channel and must be reduced by the caller.
    pub fn new(n: usize, b: Vec<f64>) -> Result<Self> {
        clifford::check_modes(n)?;
        if b.len() != 2 * n {
            return Err(Error::InvalidConfig(format!(
                "field `b`: expected 2n = {} coefficients, got {}",
                2 * n,
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
        let basis = MonomialBasis::new(n)?;
        let weights = (0..basis.len() as u32)
            .map(|x| {
                b.iter()
                    .enumerate()
                    .filter(|(p, _)| x >> p & 1 == 1)
                    .map(|(_, v)| v)
                    .product()
            })
            .collect();
        Ok(Self { b, basis, weights })
    }

    pub fn from_spec(spec: &ChannelSpec) -> Result<Self> {
        Self::new(spec.n, spec.b.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ChannelSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("channel JSON: {e}")))?;
        Self::from_spec(&spec)
    }

    pub fn spec(&self) -> ChannelSpec {
        ChannelSpec {
            n: self.n(),
            b: self.b.clone(),
        }
    }

    /// Symmetric family: b_p = b for all p.
    pub fn plus(n: usize, b: f64) -> Result<Self> {
        Self::new(n, vec![b; 2 * n])
    }

    /// Graded family: b_p = b^{p/n}.
    pub fn times(n: usize, b: f64) -> Result<Self> {
        Self::new(
            n,
            (1..=2 * n).map(|p| b.powf(p as f64 / n as f64)).collect(),
        )
    }

    pub fn ideal(n: usize) -> Result<Self> {
        Self::new(n, vec![1.0; 2 * n])
    }

    /// The one-mode channel Φ_p: b_q = 1 for q ≠ p.
    pub fn single_mode(n: usize, p: usize, b: f64) -> Result<Self> {
        if p == 0 || p > 2 * n {
            return Err(Error::IndexOutOfRange {
                index: p,
                max: 2 * n,
            });
        }
        let mut coeffs = vec![1.0; 2 * n];
        coeffs[p - 1] = b;
        Self::new(n, coeffs)
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.b
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// p(x) = 4^{-n} Π_q (1 + (-1)^{|x| + x_q} b_q), indexed by the bit string x.
    pub fn kraus_distribution(&self) -> Vec<f64> {
        let norm = 1.0 / self.basis.len() as f64;
        (0..self.basis.len() as u32)
            .map(|x| {
                let w = x.count_ones();
                norm * self
                    .b
                    .iter()
                    .enumerate()
                    .map(|(q, &bq)| {
                        if (w + (x >> q & 1)) % 2 == 0 {
                            1.0 + bq
                        } else {
                            1.0 - bq
                        }
                    })
                    .product::<f64>()
            })
            .collect()
    }

    /// Φ via the monomial expansion: scales each coefficient of ρ = 2^{-n} Σ Tr(ĉ(x)†ρ) ĉ(x).
    pub fn apply_product(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.basis.dim(), a.dim())?;
        let coeffs: Vec<Complex64> = self
            .basis
            .decompose(a)
            .into_iter()
            .zip(&self.weights)
            .map(|(c, &w)| c * w)
            .collect();
        Ok(self.basis.assemble(&coeffs))
    }

    /// Φ via the Kraus sum Σ_x p(x) ĉ(x) ρ ĉ(x)†.
    pub fn apply_kraus(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.basis.dim(), a.dim())?;
        let mut out = ComplexMatrix::zeros(a.dim());
        for (x, p) in self.kraus_distribution().into_iter().enumerate() {
            if p > 0.0 {
                self.basis.accumulate_conjugation(x as u32, p, a, &mut out);
            }
        }
        Ok(out)
    }

    /// Explicit Kraus operators √p(x)·ĉ(x).
    pub fn to_kraus_channel(&self) -> Result<GeneralKraussChannel> {
        let ops = self
            .kraus_distribution()
            .into_iter()
            .enumerate()
            .filter(|(_, p)| *p > 0.0)
            .map(|(x, p)| self.basis.op(x as u32).to_matrix().scale_real(p.sqrt()))
            .collect();
        GeneralKraussChannel::new(ops)
    }

    /// The (n+1)-mode channel with coefficients (b_1, …, b_2n, 1, 0).
    pub fn embed_hat(&self) -> Result<Self> {
        let mut b = self.b.clone();
        b.extend([1.0, 0.0]);
        Self::new(self.n() + 1, b)
    }
}

impl Channel for FermionicProductChannel {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.apply_product(a)
    }

    /// Each Kraus operator is ±ĉ(x)†, so the map is self-adjoint.
    fn adjoint_apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.apply_product(a)
    }
}

#[derive(Debug, Clone)]
enum KrausOp {
    Sparse(Vec<(usize, usize, Complex64)>),
    Dense(ComplexMatrix),
}

/// A channel given by an explicit Kraus set, Φ(ρ) = Σ_k K_k ρ K_k†.
#[derive(Debug, Clone)]
pub struct GeneralKraussChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
    prepared: Vec<KrausOp>,
}

impl GeneralKraussChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = ops.first().map(ComplexMatrix::dim).ok_or_else(|| {
            Error::InvalidConfig("a Kraus channel needs at least one operator".into())
        })?;
        let mut sum = ComplexMatrix::zeros(dim);
        for k in &ops {
            check_dim(dim, k.dim())?;
            sum = &sum + &(&k.adjoint() * k);
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if !(defect <= TRACE_PRESERVATION_TOL) {
            return Err(Error::NotTracePreserving(defect));
        }
        let prepared = ops
            .iter()
            .map(|k| {
                let nz: Vec<_> = (0..dim)
                    .flat_map(|i| (0..dim).map(move |j| (i, j)))
                    .filter(|&(i, j)| k[(i, j)] != ZERO)
                    .map(|(i, j)| (i, j, k[(i, j)]))
                    .collect();
                if nz.len() <= 2 * dim {
                    KrausOp::Sparse(nz)
                } else {
                    KrausOp::Dense(k.clone())
                }
            })
            .collect();
        Ok(Self { dim, ops, prepared })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(dim)]).expect("identity is trace preserving")
    }

    /// One-qubit Pauli depolarizing channel: σ^x, σ^y, σ^z each with probability p.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0 / 3.0).contains(&p) {
            return Err(Error::OutOfRange(p));
        }
        let mut ops = vec![ComplexMatrix::identity(2).scale_real((1.0 - 3.0 * p).sqrt())];
        for letter in ["X", "Y", "Z"] {
            let s = clifford::PauliString::from_letters(letter, 0)?;
            ops.push(s.to_matrix().scale_real(p.sqrt()));
        }
        Self::new(ops)
    }

    /// Φ^{⊗k}, with the first copy on the most significant factor.
    pub fn tensor_power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig(
                "tensor power must be at least 1".into(),
            ));
        }
        let mut ops = self.ops.clone();
        for _ in 1..k {
            ops = ops
                .iter()
                .flat_map(|a| self.ops.iter().map(move |b| a.kron(b)))
                .collect();
        }
        Self::new(ops)
    }

    pub fn kraus_operators(&self) -> &[ComplexMatrix] {
        &self.ops
    }
}

impl Channel for GeneralKraussChannel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.dim, a.dim())?;
        let mut out = ComplexMatrix::zeros(self.dim);
        for op in &self.prepared {
            match op {
                KrausOp::Sparse(nz) => {
                    for &(r1, c1, k1) in nz {
                        for &(r2, c2, k2) in nz {
                            out[(r1, r2)] += k1 * a[(c1, c2)] * k2.conj();
                        }
                    }
                }
                KrausOp::Dense(k) => out = &out + &(&(k * a) * &k.adjoint()),
            }
        }
        Ok(out)
    }

    fn adjoint_apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.dim, a.dim())?;
        let mut out = ComplexMatrix::zeros(self.dim);
        for op in &self.prepared {
            match op {
                KrausOp::Sparse(nz) => {
                    for &(r1, c1, k1) in nz {
                        for &(r2, c2, k2) in nz {
                            out[(c1, c2)] += k1.conj() * a[(r1, r2)] * k2;
                        }
                    }
                }
                KrausOp::Dense(k) => out = &out + &(&(&k.adjoint() * a) * k),
            }
        }
        Ok(out)
    }
}

/// E(A) = V (A ⊗ I/2) V† with V = exp(iπ/4 ĉ_{2n+1}) = (I + iĉ_{2n+1})/√2,
/// the new qubit being the least significant factor.
pub fn embed_mode_operator(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = a.dim();
    if !d.is_power_of_two() || d < 2 {
        return Err(Error::InvalidState(format!(
            "dimension {d} is not a qubit register"
        )));
    }
    let n = d.trailing_zeros() as usize;
    let extended = a.kron(&ComplexMatrix::identity(2).scale_real(0.5));
    let c = MajoranaMonomial::generator(2 * n + 1, n + 1)?
        .to_pauli()
        .to_matrix();
    let v =
        (&ComplexMatrix::identity(2 * d) + &c.scale(I)).scale_real(std::f64::consts::FRAC_1_SQRT_2);
    Ok(&(&v * &extended) * &v.adjoint())
}

pub fn embed_mode(rho: &DensityOperator) -> Result<DensityOperator> {
    Ok(DensityOperator::from_trusted(embed_mode_operator(
        rho.matrix(),
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kraus_distribution_examples() {
        let ideal = FermionicProductChannel::ideal(1)
            .unwrap()
            .kraus_distribution();
        assert_eq!(ideal, vec![1.0, 0.0, 0.0, 0.0]);

        let b = 0.37;
        let p = FermionicProductChannel::plus(1, b)
            .unwrap()
            .kraus_distribution();
        let expected = [
            (1.0 + b) * (1.0 + b) / 4.0,
            (1.0 - b * b) / 4.0,
            (1.0 - b * b) / 4.0,
            (1.0 - b) * (1.0 - b) / 4.0,
        ];
        for (x, y) in p.iter().zip(expected) {
            assert!((x - y).abs() < 1e-15);
        }

        let p = FermionicProductChannel::plus(1, 0.0)
            .unwrap()
            .kraus_distribution();
        assert_eq!(p, vec![0.25; 4]);
    }

    #[test]
    fn kraus_distribution_is_a_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..=4 {
            let ch = sampling::random_channel(n, &mut rng);
            let p = ch.kraus_distribution();
            assert!(p.iter().all(|&v| v >= 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extreme_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=3 {
            let rho = sampling::random_density(1 << n, &mut rng);
            let out = FermionicProductChannel::ideal(n)
                .unwrap()
                .apply_product(rho.matrix())
                .unwrap();
            assert!(out.max_abs_diff(rho.matrix()) < 1e-14);
            let out = FermionicProductChannel::plus(n, 0.0)
                .unwrap()
                .apply_product(rho.matrix())
                .unwrap();
            assert!(out.max_abs_diff(DensityOperator::maximally_mixed(1 << n).matrix()) < 1e-14);
        }
    }

    #[test]
    fn product_and_kraus_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in 1..=3 {
            for _ in 0..10 {
                let ch = sampling::random_channel(n, &mut rng);
                let rho = sampling::random_density(1 << n, &mut rng);
                let a = ch.apply_product(rho.matrix()).unwrap();
                let b = ch.apply_kraus(rho.matrix()).unwrap();
                let c = ch.to_kraus_channel().unwrap().apply(rho.matrix()).unwrap();
                assert!(a.max_abs_diff(&b) < 1e-12);
                assert!(a.max_abs_diff(&c) < 1e-12);
            }
        }
    }

    #[test]
    fn outputs_are_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..=4 {
            for _ in 0..5 {
                let ch = sampling::random_channel(n, &mut rng);
                let rho = sampling::random_density(1 << n, &mut rng);
                let out = ch.apply_state(&rho).unwrap();
                assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_kraus_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let rho = sampling::random_density(4, &mut rng);
        let out = GeneralKraussChannel::identity(4)
            .apply(rho.matrix())
            .unwrap();
        assert!(out.max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn depolarizing_on_ground_state() {
        let p = 0.1;
        let ch = GeneralKraussChannel::depolarizing(p).unwrap();
        let out = ch
            .apply(DensityOperator::basis_state(2, 0).matrix())
            .unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::from_diag(&[1.0 - 2.0 * p, 2.0 * p])) < 1e-15);
        let z = clifford::PauliString::from_letters("Z", 0)
            .unwrap()
            .to_matrix();
        let adj = ch.adjoint_apply(&z).unwrap();
        assert!(adj.max_abs_diff(&z.scale_real(1.0 - 4.0 * p)) < 1e-15);
        assert!(GeneralKraussChannel::depolarizing(0.4).is_err());
    }

    #[test]
    fn adjoint_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let dep = GeneralKraussChannel::depolarizing(0.07)
            .unwrap()
            .tensor_power(2)
            .unwrap();
        assert!(
            dep.adjoint_apply(&ComplexMatrix::identity(4))
                .unwrap()
                .max_abs_diff(&ComplexMatrix::identity(4))
                < 1e-14
        );
        for n in 1..=3 {
            let d = 1 << n;
            let ch = sampling::random_channel(n, &mut rng);
            let kraus = ch.to_kraus_channel().unwrap();
            let a = sampling::random_hermitian(d, &mut rng);
            let rho = sampling::random_density(d, &mut rng);
            // Self-adjointness of the product channel against the explicit Kraus adjoint.
            assert!(
                ch.adjoint_apply(&a)
                    .unwrap()
                    .max_abs_diff(&kraus.adjoint_apply(&a).unwrap())
                    < 1e-12
            );
            let lhs = ch.apply(rho.matrix()).unwrap().trace_product(&a);
            let rhs = rho
                .matrix()
                .trace_product(&kraus.adjoint_apply(&a).unwrap());
            assert!((lhs - rhs).norm() < 1e-10);
            assert!(
                kraus
                    .adjoint_apply(&ComplexMatrix::identity(d))
                    .unwrap()
                    .max_abs_diff(&ComplexMatrix::identity(d))
                    < 1e-12
            );
        }
        let rho = sampling::random_density(4, &mut rng);
        let a = sampling::random_hermitian(4, &mut rng);
        let lhs = dep.apply(rho.matrix()).unwrap().trace_product(&a);
        let rhs = rho.matrix().trace_product(&dep.adjoint_apply(&a).unwrap());
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn covariance_under_monomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for n in 1..=3 {
            let ch = sampling::random_channel(n, &mut rng);
            let a = sampling::random_matrix(1 << n, &mut rng);
            let fa = ch.apply(&a).unwrap();
            for x in 0..ch.basis().len() as u32 {
                let c = ch.basis().op(x).to_matrix();
                let lhs = ch.apply(&(&(&c * &a) * &c.adjoint())).unwrap();
                let rhs = &(&c * &fa) * &c.adjoint();
                assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn one_mode_factors_commute_and_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for n in 1..=3 {
            let rho = sampling::random_density(1 << n, &mut rng);
            let b: Vec<f64> = (0..2 * n).map(|_| rng.random()).collect();
            let factors: Vec<_> = (1..=2 * n)
                .map(|p| FermionicProductChannel::single_mode(n, p, b[p - 1]).unwrap())
                .collect();
            let p = rng.random_range(0..2 * n);
            let q = rng.random_range(0..2 * n);
            let pq = factors[p]
                .apply(&factors[q].apply(rho.matrix()).unwrap())
                .unwrap();
            let qp = factors[q]
                .apply(&factors[p].apply(rho.matrix()).unwrap())
                .unwrap();
            assert!(pq.max_abs_diff(&qp) < 1e-12);
            let mut composed = rho.matrix().clone();
            for f in &factors {
                composed = f.apply(&composed).unwrap();
            }
            let full = FermionicProductChannel::new(n, b)
                .unwrap()
                .apply(rho.matrix())
                .unwrap();
            assert!(composed.max_abs_diff(&full) < 1e-12);
        }
    }

    #[test]
    fn moments_scale_by_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=3 {
            let ch = sampling::random_channel(n, &mut rng);
            let rho = sampling::random_density(1 << n, &mut rng);
            let out = ch.apply(rho.matrix()).unwrap();
            for x in 0..ch.basis().len() as u32 {
                let w: f64 = (0..2 * n)
                    .filter(|p| x >> p & 1 == 1)
                    .map(|p| ch.coefficients()[p])
                    .product();
                let lhs = ch.basis().expectation(x, &out);
                let rhs = ch.basis().expectation(x, rho.matrix()) * w;
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn embed_hat_coefficients() {
        let ch = FermionicProductChannel::new(1, vec![0.5, 0.3])
            .unwrap()
            .embed_hat()
            .unwrap();
        assert_eq!(ch.coefficients(), &[0.5, 0.3, 1.0, 0.0]);
        let ch = FermionicProductChannel::ideal(2)
            .unwrap()
            .embed_hat()
            .unwrap();
        assert_eq!(ch.coefficients(), &[1.0, 1.0, 1.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn embedding_intertwines_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for n in 1..=3 {
            let ch = sampling::random_channel(n, &mut rng);
            let hat = ch.embed_hat().unwrap();
            let rho = sampling::random_density(1 << n, &mut rng);
            let lhs = embed_mode_operator(&ch.apply(rho.matrix()).unwrap()).unwrap();
            let rhs = hat
                .apply(&embed_mode_operator(rho.matrix()).unwrap())
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn embedding_adds_one_bit() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for n in 1..=4 {
            let rho = sampling::random_density(1 << n, &mut rng);
            let e = embed_mode(&rho).unwrap();
            assert!((e.entropy().unwrap() - rho.entropy().unwrap() - 1.0).abs() < 1e-10);
            let mixed = embed_mode(&DensityOperator::maximally_mixed(1 << n)).unwrap();
            assert!(
                mixed
                    .matrix()
                    .max_abs_diff(DensityOperator::maximally_mixed(2 << n).matrix())
                    < 1e-15
            );
        }
    }

    #[test]
    fn ingest_validation() {
        assert!(matches!(
            FermionicProductChannel::new(1, vec![0.5, -0.1]),
            Err(Error::InvalidCoefficient { index: 1, .. })
        ));
        assert!(matches!(
            FermionicProductChannel::new(1, vec![0.5, 1.5]),
            Err(Error::InvalidCoefficient { .. })
        ));
        assert!(matches!(
            FermionicProductChannel::new(1, vec![f64::NAN, 0.5]),
            Err(Error::InvalidCoefficient { .. })
        ));
        assert!(FermionicProductChannel::new(2, vec![0.5; 3]).is_err());
        assert!(FermionicProductChannel::from_json(r#"{"n":1,"b":[0.5,0.5],"x":1}"#).is_err());
        let err = FermionicProductChannel::from_json(r#"{"n":1}"#).unwrap_err();
        assert!(err.to_string().contains("`b`"), "{err}");
        let ch = FermionicProductChannel::from_json(r#"{"n":1,"b":[0.9,0.5]}"#).unwrap();
        assert_eq!(ch.coefficients(), &[0.9, 0.5]);
        let rho = DensityOperator::maximally_mixed(4);
        assert!(matches!(
            ch.apply(rho.matrix()),
            Err(Error::DimensionMismatch { .. })
        ));
        let bad = ComplexMatrix::from_diag(&[0.5, 0.6]);
        assert!(DensityOperator::new(bad).is_err());
        assert!(
            GeneralKraussChannel::new(vec![ComplexMatrix::identity(2).scale_real(0.9)]).is_err()
        );
    }

    #[test]
    fn family_constructors() {
        let ch = FermionicProductChannel::times(3, 0.5).unwrap();
        for (p, &bp) in ch.coefficients().iter().enumerate() {
            assert!((bp - 0.5f64.powf((p + 1) as f64 / 3.0)).abs() < 1e-15);
        }
        assert_eq!(
            FermionicProductChannel::plus(2, 0.4)
                .unwrap()
                .coefficients(),
            &[0.4; 4]
        );
    }
}
