//! Jordan-Wigner realization of the Majorana generators ĉ_1..ĉ_2n on n qubits,
//! monomials ĉ(x) = ĉ_1^{x_1}···ĉ_2n^{x_2n} and their Pauli-string form.
//!
//! Conventions: qubit 1 is the most significant tensor factor, so qubit `j`
//! (1-based) lives at bit `n - j` of a basis index. Generator `p` (1-based)
//! lives at bit `p - 1` of a monomial bit string.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, I, ONE, ZERO};
use crate::MAX_MODES;

/// i^k for k mod 4.
pub fn phase_value(k: u8) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

pub(crate) fn check_modes(n: usize) -> Result<()> {
    if n == 0 || n > MAX_MODES {
        return Err(Error::UnsupportedModes(n));
    }
    Ok(())
}

/// A Pauli string i^phase · σ_1 ⊗ ··· ⊗ σ_n stored in symplectic form:
/// per qubit (x, z) = (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u32,
    z: u32,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    /// Parses letters such as `"ZZXI"` (qubit 1 first).
    pub fn from_letters(letters: &str, phase: u8) -> Result<Self> {
        let n = letters.chars().count();
        check_modes(n)?;
        let mut s = Self::identity(n);
        s.phase = phase % 4;
        for (j, ch) in letters.chars().enumerate() {
            let bit = 1u32 << (n - 1 - j);
            match ch {
                'I' => {}
                'X' => s.x |= bit,
                'Y' => {
                    s.x |= bit;
                    s.z |= bit
                }
                'Z' => s.z |= bit,
                _ => return Err(Error::InvalidConfig(format!("unknown Pauli letter {ch:?}"))),
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_mask(&self) -> u32 {
        self.x
    }

    pub fn z_mask(&self) -> u32 {
        self.z
    }

    pub fn letters(&self) -> String {
        (0..self.n)
            .map(|j| {
                let bit = 1u32 << (self.n - 1 - j);
                match (self.x & bit != 0, self.z & bit != 0) {
                    (false, false) => 'I',
                    (true, false) => 'X',
                    (true, true) => 'Y',
                    (false, true) => 'Z',
                }
            })
            .collect()
    }

    /// Nonzero entry of column `col`: returns (row, value).
    ///
    /// Each letter is i^{xz} X^x Z^z, and X^x Z^z |b⟩ = (-1)^{zb} |b ⊕ x⟩.
    #[inline]
    pub fn entry(&self, col: usize) -> (usize, Complex64) {
        let c = col as u32;
        let y_count = (self.x & self.z).count_ones() as u8;
        let sign = ((self.z & c).count_ones() % 2) as u8 * 2;
        (
            (c ^ self.x) as usize,
            phase_value(self.phase + y_count + sign),
        )
    }

    /// Tr(ρ·S).
    pub fn expectation(&self, rho: &ComplexMatrix) -> Complex64 {
        (0..1usize << self.n)
            .map(|col| {
                let (row, v) = self.entry(col);
                rho[(col, row)] * v
            })
            .sum()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let d = 1usize << self.n;
        let mut m = ComplexMatrix::zeros(d);
        for col in 0..d {
            let (row, v) = self.entry(col);
            m[(row, col)] = v;
        }
        m
    }

    /// Operator product self · other.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        // Move to X^x Z^z form: self = i^a X^x1 Z^z1, other = i^b X^x2 Z^z2.
        let a = self.phase + (self.x & self.z).count_ones() as u8;
        let b = other.phase + (other.x & other.z).count_ones() as u8;
        let swap = 2 * ((self.z & other.x).count_ones() % 2) as u8;
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let y = (x & z).count_ones() as u8;
        let phase = ((a + b + swap) % 4 + 4 - y % 4) % 4;
        Self {
            n: self.n,
            x,
            z,
            phase,
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{p}{}", self.letters())
    }
}

/// phase · ĉ_1^{x_1} ··· ĉ_2n^{x_2n} with phase a fourth root of unity (i^phase).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MajoranaMonomial {
    n: usize,
    bits: u32,
    phase: u8,
}

impl MajoranaMonomial {
    pub fn new(n: usize, bits: u32, phase: u8) -> Result<Self> {
        check_modes(n)?;
        if bits >> (2 * n) != 0 {
            return Err(Error::IndexOutOfRange {
                index: 32 - bits.leading_zeros() as usize,
                max: 2 * n,
            });
        }
        Ok(Self {
            n,
            bits,
            phase: phase % 4,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            bits: 0,
            phase: 0,
        }
    }

    /// ĉ_p for 1 ≤ p ≤ 2n.
    pub fn generator(p: usize, n: usize) -> Result<Self> {
        check_modes(n)?;
        if p == 0 || p > 2 * n {
            return Err(Error::IndexOutOfRange {
                index: p,
                max: 2 * n,
            });
        }
        Ok(Self {
            n,
            bits: 1 << (p - 1),
            phase: 0,
        })
    }

    /// Monomial with bits set for the listed (1-based) generator indices.
    pub fn from_indices(n: usize, indices: &[usize], phase: u8) -> Result<Self> {
        let mut bits = 0;
        for &p in indices {
            if p == 0 || p > 2 * n {
                return Err(Error::IndexOutOfRange {
                    index: p,
                    max: 2 * n,
                });
            }
            bits |= 1 << (p - 1);
        }
        Self::new(n, bits, phase)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Hamming weight |x|.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn has(&self, p: usize) -> bool {
        self.bits >> (p - 1) & 1 == 1
    }

    pub fn with_phase(self, phase: u8) -> Self {
        Self {
            phase: phase % 4,
            ..self
        }
    }

    /// Dense matrix: the ordered product of generator matrices times the phase.
    pub fn matrix(&self) -> ComplexMatrix {
        monomial_matrix(self)
    }

    /// Pauli-string form obtained by multiplying generator strings in order.
    pub fn to_pauli(&self) -> PauliString {
        let mut acc = PauliString::identity(self.n);
        acc.phase = self.phase;
        for p in 1..=2 * self.n {
            if self.has(p) {
                acc = acc.mul(&generator_pauli(p, self.n));
            }
        }
        acc
    }

    /// Inverse of [`to_pauli`](Self::to_pauli).
    pub fn from_pauli(s: &PauliString) -> Self {
        let n = s.n();
        // Qubit j carries X-part x_{2j-1} ⊕ x_{2j} and Z-part x_{2j} ⊕ (parity of
        // the X-parts of all later qubits), from the σ^z strings.
        let mut bits = 0u32;
        let mut later_parity = 0u32;
        for j in (1..=n).rev() {
            let qbit = 1u32 << (n - j);
            let xj = u32::from(s.x_mask() & qbit != 0);
            let zj = u32::from(s.z_mask() & qbit != 0);
            let even = zj ^ later_parity;
            let odd = xj ^ even;
            bits |= odd << (2 * j - 2);
            bits |= even << (2 * j - 1);
            later_parity ^= xj;
        }
        let bare = Self { n, bits, phase: 0 }.to_pauli();
        let phase = (s.phase() + 4 - bare.phase()) % 4;
        Self { n, bits, phase }
    }

    /// ĉ(x)† = (-1)^{|x|(|x|-1)/2} · conj(phase) · ĉ(x).
    pub fn adjoint(&self) -> Self {
        let w = self.weight();
        let reversal = if (w * w.saturating_sub(1) / 2) % 2 == 1 {
            2
        } else {
            0
        };
        let conj = (4 - self.phase) % 4;
        Self {
            phase: (conj + reversal) % 4,
            ..*self
        }
    }
}

impl fmt::Display for MajoranaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = ["+", "+i", "-", "-i"][self.phase as usize];
        let bits: String = (1..=2 * self.n)
            .map(|q| if self.has(q) { '1' } else { '0' })
            .collect();
        write!(f, "{p}c({bits})")
    }
}

fn generator_pauli(p: usize, n: usize) -> PauliString {
    let j = p.div_ceil(2);
    let mut s = PauliString::identity(n);
    for k in 1..j {
        s.z |= 1 << (n - k);
    }
    let bit = 1 << (n - j);
    s.x |= bit;
    if p.is_multiple_of(2) {
        s.z |= bit;
    }
    s
}

fn pauli_2x2(letter: char) -> ComplexMatrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let entries = match letter {
        'I' => [c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)],
        'X' => [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
        'Y' => [c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
        'Z' => [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
        _ => unreachable!(),
    };
    ComplexMatrix::from_row_major(2, entries.to_vec()).expect("2x2")
}

/// Dense matrix of ĉ_p: σ^z ⊗ ··· ⊗ σ^z ⊗ (σ^x or σ^y) ⊗ I ⊗ ··· ⊗ I.
pub fn generator_matrix(p: usize, n: usize) -> Result<ComplexMatrix> {
    check_modes(n)?;
    if p == 0 || p > 2 * n {
        return Err(Error::IndexOutOfRange {
            index: p,
            max: 2 * n,
        });
    }
    let j = p.div_ceil(2);
    let mut m = ComplexMatrix::identity(1);
    for k in 1..=n {
        let letter = match k.cmp(&j) {
            std::cmp::Ordering::Less => 'Z',
            std::cmp::Ordering::Equal if p % 2 == 1 => 'X',
            std::cmp::Ordering::Equal => 'Y',
            std::cmp::Ordering::Greater => 'I',
        };
        m = m.kron(&pauli_2x2(letter));
    }
    Ok(m)
}

pub fn monomial_matrix(m: &MajoranaMonomial) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(1 << m.n);
    for p in 1..=2 * m.n {
        if m.has(p) {
            acc = &acc * &generator_matrix(p, m.n).expect("index checked at construction");
        }
    }
    acc.scale(phase_value(m.phase))
}

/// Symbolic product a·b. Moving each generator of `b` left past the larger
/// generators of `a` costs one sign per transposition; equal generators then
/// cancel since ĉ_p² = I.
pub fn monomial_product(a: &MajoranaMonomial, b: &MajoranaMonomial) -> Result<MajoranaMonomial> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            got: b.n,
        });
    }
    let mut swaps = 0u32;
    let mut rest = b.bits;
    while rest != 0 {
        let q = rest.trailing_zeros();
        swaps += (a.bits >> (q + 1)).count_ones();
        rest &= rest - 1;
    }
    let sign = if swaps % 2 == 1 { 2 } else { 0 };
    Ok(MajoranaMonomial {
        n: a.n,
        bits: a.bits ^ b.bits,
        phase: (a.phase + b.phase + sign) % 4,
    })
}

/// The parity generator P = (-i)^n ĉ_1···ĉ_2n = σ^z ⊗ ··· ⊗ σ^z.
pub fn parity_operator(n: usize) -> Result<(ComplexMatrix, MajoranaMonomial)> {
    check_modes(n)?;
    let bits = if 2 * n == 32 {
        u32::MAX
    } else {
        (1u32 << (2 * n)) - 1
    };
    let phase = ((3 * n) % 4) as u8;
    let mono = MajoranaMonomial { n, bits, phase };
    Ok((monomial_matrix(&mono), mono))
}

/// Sparse forms of all 4^n unit-phase monomials ĉ(x), indexed by x.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    n: usize,
    ops: Vec<PauliString>,
}

impl MonomialBasis {
    pub fn new(n: usize) -> Result<Self> {
        check_modes(n)?;
        let ops = (0..1u32 << (2 * n))
            .map(|bits| MajoranaMonomial { n, bits, phase: 0 }.to_pauli())
            .collect();
        Ok(Self { n, ops })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn op(&self, x: u32) -> &PauliString {
        &self.ops[x as usize]
    }

    /// Tr(ρ·ĉ(x)).
    pub fn expectation(&self, x: u32, rho: &ComplexMatrix) -> Complex64 {
        self.ops[x as usize].expectation(rho)
    }

    /// Tr(ĉ(x)†·ρ).
    pub fn overlap(&self, x: u32, rho: &ComplexMatrix) -> Complex64 {
        let op = &self.ops[x as usize];
        (0..self.dim())
            .map(|col| {
                let (row, v) = op.entry(col);
                v.conj() * rho[(row, col)]
            })
            .sum()
    }

    /// out += coeff · ĉ(x).
    pub fn accumulate(&self, x: u32, coeff: Complex64, out: &mut ComplexMatrix) {
        let op = &self.ops[x as usize];
        for col in 0..self.dim() {
            let (row, v) = op.entry(col);
            out[(row, col)] += coeff * v;
        }
    }

    /// out += w · ĉ(x)·ρ·ĉ(x)†.
    pub fn accumulate_conjugation(
        &self,
        x: u32,
        w: f64,
        rho: &ComplexMatrix,
        out: &mut ComplexMatrix,
    ) {
        let op = &self.ops[x as usize];
        let d = self.dim();
        for j in 0..d {
            let (rj, vj) = op.entry(j);
            let vj = vj.conj() * w;
            for i in 0..d {
                let (ri, vi) = op.entry(i);
                out[(ri, rj)] += vi * rho[(i, j)] * vj;
            }
        }
    }

    /// Expansion coefficients a_x with ρ = Σ_x a_x ĉ(x): a_x = 2^{-n} Tr(ĉ(x)†ρ).
    pub fn decompose(&self, rho: &ComplexMatrix) -> Vec<Complex64> {
        let inv = 1.0 / self.dim() as f64;
        (0..self.ops.len() as u32)
            .map(|x| self.overlap(x, rho) * inv)
            .collect()
    }

    pub fn assemble(&self, coeffs: &[Complex64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for (x, &c) in coeffs.iter().enumerate() {
            if c != ZERO {
                self.accumulate(x as u32, c, &mut out);
            }
        }
        out
    }
}
