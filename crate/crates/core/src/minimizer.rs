//! Iterative minimization of the output entropy over pure inputs.
//!
//! Each step replaces ψ by the top eigenvector of Φ*(log Φ(|ψ⟩⟨ψ|)), which
//! minimizes h(ρ, η) = −Tr[Φ(ρ) log Φ(η)] over ρ with η = |ψ⟩⟨ψ| held fixed.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{Channel, DensityOperator};
use crate::error::{Error, Result};
use crate::gaussian::{is_gaussian_pure, GaussianWitness};
use crate::numerics::{
    entropy_bits, hermitian_eig, matrix_log_from_eigen, ComplexMatrix, HermitianEigen,
    DEFAULT_LOG_FLOOR,
};
use crate::sampling::{random_unit_in_span, random_unit_vector};

/// Tolerance used when reporting the Gaussian witness of the best state.
pub const WITNESS_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizerConfig {
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Stop a restart once |S_k − S_{k+1}| falls below this (bits).
    pub convergence_tol: f64,
    /// Eigenvalues within this fraction of the spectral range of the top one
    /// count as degenerate with it.
    pub degeneracy_tol: f64,
    pub log_floor: f64,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        Self {
            iterations: 64,
            restarts: 16,
            seed: 0,
            convergence_tol: 1e-12,
            degeneracy_tol: 1e-10,
            log_floor: DEFAULT_LOG_FLOOR,
        }
    }
}

impl MinimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        for (name, v) in [
            ("convergence_tol", self.convergence_tol),
            ("degeneracy_tol", self.degeneracy_tol),
            ("log_floor", self.log_floor),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: Vec<Complex64>,
    /// Some eigenvalue of Φ(|ψ⟩⟨ψ|) fell below the log floor.
    pub floor_active: bool,
    /// The top eigenvalue of Φ*(log Φ(|ψ⟩⟨ψ|)) was degenerate.
    pub degenerate: bool,
}

/// Output entropy S(Φ(|ψ⟩⟨ψ|)) in bits, with negative eigenvalue dust clamped
/// to zero and the spectrum renormalized.
pub fn output_entropy(ch: &dyn Channel, psi: &[Complex64]) -> Result<f64> {
    let out = ch.apply(&ComplexMatrix::outer(psi))?;
    let mut spectrum: Vec<f64> = hermitian_eig(&out)?
        .values
        .into_iter()
        .map(|v| v.max(0.0))
        .collect();
    let total: f64 = spectrum.iter().sum();
    spectrum.iter_mut().for_each(|v| *v /= total);
    Ok(entropy_bits(&spectrum))
}

fn check_unit(psi: &[Complex64]) -> Result<()> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= 1e-10) {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

pub fn iterate_step(
    ch: &dyn Channel,
    psi: &[Complex64],
    cfg: &MinimizerConfig,
    rng: &mut ChaCha8Rng,
) -> Result<StepOutcome> {
    check_unit(psi)?;
    if psi.len() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            got: psi.len(),
        });
    }
    let out = ch.apply(&ComplexMatrix::outer(psi))?;
    let out_eig = hermitian_eig(&out)?;
    let floor_active = out_eig.values.first().is_some_and(|&v| v < cfg.log_floor);
    let clamped = HermitianEigen {
        values: out_eig.values.iter().map(|v| v.max(0.0)).collect(),
        vectors: out_eig.vectors,
    };
    let log = matrix_log_from_eigen(&clamped, cfg.log_floor)?;
    let eig = hermitian_eig(&ch.adjoint_apply(&log)?)?;
    let d = eig.values.len();
    let top = eig.values[d - 1];
    let range = top - eig.values[0];
    let top_space: Vec<usize> = (0..d)
        .filter(|&k| top - eig.values[k] <= cfg.degeneracy_tol * range)
        .collect();
    let degenerate = top_space.len() > 1;
    let state = if degenerate {
        let basis: Vec<Vec<Complex64>> = top_space.iter().map(|&k| eig.vector(k)).collect();
        random_unit_in_span(&basis, rng)
    } else {
        eig.vector(d - 1)
    };
    Ok(StepOutcome {
        state,
        floor_active,
        degenerate,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RestartOutcome {
    pub seed: u64,
    /// S_0, S_1, … in bits.
    pub trace: Vec<f64>,
    #[serde(skip)]
    pub state: Vec<Complex64>,
    /// Minimum of the trace.
    pub best_entropy: f64,
    pub floor_active: bool,
    pub degenerate_steps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizerRun {
    pub config: MinimizerConfig,
    pub restarts: Vec<RestartOutcome>,
    pub best_entropy: f64,
    pub best_restart: usize,
    #[serde(skip)]
    pub best_state: Vec<Complex64>,
    /// Covariance singular values of the best state; `None` when the register
    /// is too large to embed.
    pub gaussian_witness: Option<GaussianWitness>,
}

impl MinimizerRun {
    /// Number of restarts whose best entropy lies within `tol` of the overall best.
    pub fn restarts_agreeing(&self, tol: f64) -> usize {
        self.restarts
            .iter()
            .filter(|r| r.best_entropy - self.best_entropy <= tol)
            .count()
    }

    pub fn floor_active(&self) -> bool {
        self.restarts.iter().any(|r| r.floor_active)
    }

    /// Largest minus smallest per-restart best entropy.
    pub fn dispersion(&self) -> f64 {
        let worst = self
            .restarts
            .iter()
            .map(|r| r.best_entropy)
            .fold(f64::NEG_INFINITY, f64::max);
        worst - self.best_entropy
    }
}

fn run_restart(ch: &dyn Channel, cfg: &MinimizerConfig, index: usize) -> Result<RestartOutcome> {
    let seed = cfg.seed.wrapping_add(index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut psi = random_unit_vector(ch.dim(), &mut rng);
    let mut s = output_entropy(ch, &psi)?;
    let mut trace = vec![s];
    let (mut best_state, mut best_entropy) = (psi.clone(), s);
    let (mut floor_active, mut degenerate_steps) = (false, 0);
    for _ in 0..cfg.iterations {
        let step = iterate_step(ch, &psi, cfg, &mut rng)?;
        floor_active |= step.floor_active;
        degenerate_steps += usize::from(step.degenerate);
        psi = step.state;
        let next = output_entropy(ch, &psi)?;
        trace.push(next);
        if next < best_entropy {
            best_entropy = next;
            best_state = psi.clone();
        }
        let delta = (s - next).abs();
        s = next;
        if delta < cfg.convergence_tol {
            break;
        }
    }
    Ok(RestartOutcome {
        seed,
        trace,
        state: best_state,
        best_entropy,
        floor_active,
        degenerate_steps,
    })
}

/// Runs `cfg.restarts` independent restarts (in parallel) and keeps the best.
pub fn minimize(ch: &dyn Channel, cfg: &MinimizerConfig) -> Result<MinimizerRun> {
    cfg.validate()?;
    let restarts: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(ch, cfg, r))
        .collect::<Result<_>>()?;
    let best_restart = restarts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.best_entropy.total_cmp(&b.1.best_entropy))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let best_state = restarts[best_restart].state.clone();
    let gaussian_witness = DensityOperator::pure(&best_state)
        .ok()
        .and_then(|rho| is_gaussian_pure(&rho, WITNESS_TOL).ok());
    Ok(MinimizerRun {
        config: *cfg,
        best_entropy: restarts[best_restart].best_entropy,
        best_restart,
        best_state,
        restarts,
        gaussian_witness,
    })
}

/// h(ρ, η) = −Tr[Φ(ρ) log Φ(η)] in bits, with the log floored at `log_floor`.
pub fn h_functional(
    ch: &dyn Channel,
    rho: &DensityOperator,
    eta: &DensityOperator,
    log_floor: f64,
) -> Result<f64> {
    let out_rho = ch.apply(rho.matrix())?;
    let eig = hermitian_eig(&ch.apply(eta.matrix())?)?;
    let clamped = HermitianEigen {
        values: eig.values.iter().map(|v| v.max(0.0)).collect(),
        vectors: eig.vectors,
    };
    let log = matrix_log_from_eigen(&clamped, log_floor)?;
    Ok(-out_rho.trace_product(&log).re / LN_2)
}
