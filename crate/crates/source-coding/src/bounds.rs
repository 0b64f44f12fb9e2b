//! Theorem-side guarantees: rate and fidelity bounds for the constructed
//! schemes, and the strong-converse dimension bound for arbitrary codes.

use entropy_calc::entropy_of_probs;
use quantum_objects::DensityOperator;
use typicality::{grid_minimize, Direction, GridObjective, K_TYPICAL};

use crate::{bad_argument, Error};

/// Eigenvalues below which a deviation `√(q(1−q))` counts as zero.
const DEVIATION_FLOOR: f64 = 1e-12;

fn clamped_eigenvalues(rho: &DensityOperator) -> Vec<f64> {
    rho.eig()
        .eigenvalues()
        .iter()
        .map(|&q| q.clamp(0.0, 1.0))
        .collect()
}

/// The deviation profile `(μ, N)` of a distribution: `μ` is the smallest
/// nonzero `√(q_j(1−q_j))` and `N` counts the nonzero ones.  A
/// deterministic distribution has `N = 0` (and `μ` reported as 0).
pub fn deviation_profile(probs: &[f64]) -> (f64, usize) {
    let mut mu = f64::INFINITY;
    let mut count = 0usize;
    for &q in probs {
        let p = q.clamp(0.0, 1.0);
        let s = (p * (1.0 - p)).sqrt();
        if s > DEVIATION_FLOOR {
            count += 1;
            mu = mu.min(s);
        }
    }
    if count == 0 {
        (0.0, 0)
    } else {
        (mu, count)
    }
}

/// Entanglement-fidelity guarantee of the variance-typical subspace scheme:
/// `F_e ≥ 1 − 4N(ρ)·e^{−2μ(ρ)²α²}` (a pure source gives exactly 1).
pub fn noiseless_fidelity_bound(rho: &DensityOperator, alpha: f64) -> f64 {
    let (mu, n_dev) = deviation_profile(&clamped_eigenvalues(rho));
    1.0 - 4.0 * n_dev as f64 * (-2.0 * mu * mu * alpha * alpha).exp()
}

/// Rate guarantee of the variance-typical subspace scheme:
/// `rate ≤ H(ρ) + K·d·α/√n` qubits per letter.
pub fn noiseless_rate_bound(rho: &DensityOperator, n: usize, alpha: f64) -> f64 {
    entropy_of_probs(&clamped_eigenvalues(rho))
        + K_TYPICAL * rho.dim() as f64 * alpha / (n as f64).sqrt()
}

/// Entanglement-fidelity guarantee of the fixed-rate universal scheme on a
/// source diagonal in the scheme basis with eigenvalue distribution
/// `source_probs`:
///
/// `F_e ≥ 1 − 2(n+1)^d·2^{−n·min{D(ν‖source) : H(ν) ≥ R}}`.
///
/// The divergence minimum comes from the simplex-grid oracle, whose
/// resolution error callers should fold into their tolerances.  A rate
/// above `log2 d` leaves the constraint set empty and the bound is exactly
/// 1 (the scheme retains everything).
pub fn universal_fidelity_bound(source_probs: &[f64], n: usize, r: f64) -> Result<f64, Error> {
    let min_div = grid_minimize(source_probs, Direction::AtLeast, r, GridObjective::Divergence)?;
    let d = source_probs.len() as f64;
    let poly = d * ((n + 1) as f64).log2();
    Ok(1.0 - (1.0 + poly - n as f64 * min_div).exp2())
}

fn check_converse_arguments(lambda: f64, alpha: f64) -> Result<(), Error> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(bad_argument(format!(
            "fidelity defect must lie in (0,1), got {lambda}"
        )));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(bad_argument(format!(
            "converse constant must be finite and > 0, got {alpha}"
        )));
    }
    Ok(())
}

fn converse_parts(rho: &DensityOperator, n: usize, lambda: f64, alpha: f64) -> (f64, f64) {
    let probs = clamped_eigenvalues(rho);
    let (mu, n_dev) = deviation_profile(&probs);
    let prefactor = 1.0 - lambda - 4.0 * (n_dev as f64).sqrt() * (-mu * mu * alpha * alpha).exp2();
    let exponent = n as f64 * entropy_of_probs(&probs)
        - K_TYPICAL * rho.dim() as f64 * alpha * (n as f64).sqrt();
    (prefactor, exponent)
}

/// Strong-converse dimension bound: every n-block code (arbitrary
/// encoding) whose average fidelity on the source reaches `1 − λ` uses a
/// code space of dimension at least
///
/// `(1 − λ − 4√N·2^{−μ²α²})·2^{nH − Kdα√n}`  for every `α > 0`.
///
/// The returned value may be ≤ 1 (or negative), in which case this choice
/// of `α` certifies nothing.
pub fn strong_converse_dim_bound(
    rho: &DensityOperator,
    n: usize,
    lambda: f64,
    alpha: f64,
) -> Result<f64, Error> {
    check_converse_arguments(lambda, alpha)?;
    let (prefactor, exponent) = converse_parts(rho, n, lambda, alpha);
    Ok(prefactor * exponent.exp2())
}

/// `log2` of the strong-converse dimension bound, or `None` when the
/// prefactor is non-positive (vacuous).  Safe at block lengths where the
/// plain value would overflow.
pub fn strong_converse_log2_dim_bound(
    rho: &DensityOperator,
    n: usize,
    lambda: f64,
    alpha: f64,
) -> Result<Option<f64>, Error> {
    check_converse_arguments(lambda, alpha)?;
    let (prefactor, exponent) = converse_parts(rho, n, lambda, alpha);
    if prefactor <= 0.0 {
        Ok(None)
    } else {
        Ok(Some(prefactor.log2() + exponent))
    }
}

/// The strong-converse bound maximized over a grid of `α` values
/// (0.05 to 20 in steps of 0.05); returns the best `(α, bound)` pair.
/// The trade-off is real: larger `α` shrinks the Hoeffding defect but pays
/// `2^{−Kdα√n}` in the exponent.
pub fn max_strong_converse_dim_bound(
    rho: &DensityOperator,
    n: usize,
    lambda: f64,
) -> Result<(f64, f64), Error> {
    let mut best = (0.05, f64::NEG_INFINITY);
    for k in 1..=400 {
        let alpha = k as f64 * 0.05;
        let value = strong_converse_dim_bound(rho, n, lambda, alpha)?;
        if value > best.1 {
            best = (alpha, value);
        }
    }
    Ok(best)
}
