//! Fidelity evaluation for compression schemes: average fidelity, average
//! distortion, and entanglement fidelity.
//!
//! Two evaluation paths share the same formulas.  When every ensemble
//! letter is an eigenvector of the scheme basis, the block ensemble is a
//! classical i.i.d. sequence source and everything reduces to the retained
//! probability mass `m`: `F̄ = m`, `D̄ = 1 − m`, `F_e = m²` — computed
//! symbolically at any block length.  Otherwise the block space is
//! materialized densely (small blocks only) and the channel output is
//! evaluated state by state; the entanglement fidelity then picks up a
//! cross term from the erasure branch,
//!
//! `F_e = (Tr ρⁿΠ)² + (1/K)·Σ_{m∉S, l∈S} |⟨u_m|ρⁿ|u_l⟩|²`,
//!
//! obtained by expanding the composite channel's Kraus operators in the
//! scheme eigenbasis (`S` the retained index set).  The dense path
//! cross-checks the symbolic one in the test suite.

use num_complex::Complex64;
use qla_core::{kron_vec, vdot, CMatrix, HermitianMatrix};
use quantum_objects::{trace_distance, DensityOperator, Ensemble};

use crate::scheme::CompressionScheme;
use crate::{bad_argument, too_large, Error};

/// Overlap above which an ensemble state counts as a basis eigenvector.
const DIAGONAL_TOL: f64 = 1e-10;

/// Reconstruction residual below which a source counts as co-diagonal with
/// the scheme basis.
const CODIAGONAL_TOL: f64 = 1e-8;

/// Cap on the number of input sequences the dense path enumerates.
const MAX_SEQUENCE_ENUM: u128 = 4096;

/// Cap on (sequence count)·(ambient dim)³ in the dense distortion loop.
const MAX_DENSE_WORK: u128 = 1 << 31;

/// The three quality measures of a block code on a given source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    /// `F̄`: input-weighted fidelity between each block state and its
    /// round trip.
    pub average_fidelity: f64,
    /// `D̄`: input-weighted trace distance between each block state and its
    /// round trip.
    pub average_distortion: f64,
    /// `F_e`: overlap of the round trip (tensored with identity) on the
    /// purification of the average block state.
    pub entanglement_fidelity: f64,
}

impl FidelityReport {
    /// `(F̄, D̄, F_e)`.
    pub fn as_tuple(&self) -> (f64, f64, f64) {
        (
            self.average_fidelity,
            self.average_distortion,
            self.entanglement_fidelity,
        )
    }
}

fn classical_report(retained_mass: f64) -> FidelityReport {
    let m = retained_mass.clamp(0.0, 1.0);
    FidelityReport {
        average_fidelity: m,
        average_distortion: 1.0 - m,
        entanglement_fidelity: m * m,
    }
}

/// Probability that the scheme retains a block drawn with the given
/// per-position eigenindex distributions (the fallback scheme retains
/// exactly its one code sequence).
fn retained_mass(
    scheme: &CompressionScheme,
    per_position: &[Vec<f64>],
) -> Result<f64, Error> {
    if scheme.is_fallback() {
        Ok(per_position.iter().map(|r| r[0]).product())
    } else {
        scheme
            .projector()
            .mass_per_position(per_position)
            .map_err(Error::from)
    }
}

/// Fidelities of the scheme on the i.i.d. source that emits eigenvectors of
/// the scheme basis with the given letter distribution.  Purely symbolic:
/// block lengths in the thousands are fine.
pub fn eigenbasis_source_fidelities(
    scheme: &CompressionScheme,
    letter_probs: &[f64],
) -> Result<FidelityReport, Error> {
    entropy_calc::check_distribution(letter_probs)?;
    if letter_probs.len() != scheme.dim() {
        return Err(bad_argument(format!(
            "letter distribution has {} entries for dimension {}",
            letter_probs.len(),
            scheme.dim()
        )));
    }
    let per_position = vec![letter_probs.to_vec(); scheme.n()];
    Ok(classical_report(retained_mass(scheme, &per_position)?))
}

/// Entanglement fidelity of the scheme on the memoryless source `ρ^⊗n`,
/// by the closed form `F_e = m²` with `m = Tr(ρ^⊗n Π)`.  Requires the
/// source to be co-diagonal with the scheme basis (the cross term of the
/// general formula vanishes there); rejects others.
pub fn entanglement_fidelity_for(
    scheme: &CompressionScheme,
    rho: &DensityOperator,
) -> Result<f64, Error> {
    if rho.dim() != scheme.dim() {
        return Err(bad_argument(format!(
            "source dimension {} does not match the scheme's {}",
            rho.dim(),
            scheme.dim()
        )));
    }
    let mut per_position = vec![Vec::new(); scheme.n()];
    for group in scheme.projector().groups() {
        let spectrum = group.spectrum();
        let probs: Vec<f64> = (0..scheme.dim())
            .map(|j| {
                rho.expectation(&HermitianMatrix::from_outer(&spectrum.eigenvector(j)))
                    .clamp(0.0, 1.0)
            })
            .collect();
        let residual = spectrum.recombine(&probs).max_abs_diff(rho.matrix());
        if residual > CODIAGONAL_TOL {
            return Err(bad_argument(format!(
                "source is not co-diagonal with the scheme basis (residual {residual:.2e})"
            )));
        }
        for &position in group.positions() {
            per_position[position] = probs.clone();
        }
    }
    let m = retained_mass(scheme, &per_position)?.clamp(0.0, 1.0);
    Ok(m * m)
}

/// Per-group eigenindex distributions of the ensemble, or `None` if some
/// ensemble state with positive weight is not a basis eigenvector.
fn diagonal_letter_probs(
    scheme: &CompressionScheme,
    ensemble: &Ensemble,
) -> Option<Vec<Vec<f64>>> {
    let dim = scheme.dim();
    let mut per_position = vec![Vec::new(); scheme.n()];
    for group in scheme.projector().groups() {
        let spectrum = group.spectrum();
        let mut probs = vec![0.0; dim];
        for (state, &p) in ensemble.states().iter().zip(ensemble.probs()) {
            if p <= 0.0 {
                continue;
            }
            let overlaps: Vec<f64> = (0..dim)
                .map(|j| {
                    state
                        .expectation(&HermitianMatrix::from_outer(&spectrum.eigenvector(j)))
                        .clamp(0.0, 1.0)
                })
                .collect();
            if !overlaps.iter().any(|&o| o >= 1.0 - DIAGONAL_TOL) {
                return None;
            }
            for (r, o) in probs.iter_mut().zip(&overlaps) {
                *r += p * o;
            }
        }
        let total: f64 = probs.iter().sum();
        for r in probs.iter_mut() {
            *r = (*r / total).clamp(0.0, 1.0);
        }
        for &position in group.positions() {
            per_position[position] = probs.clone();
        }
    }
    Some(per_position)
}

/// Fidelities `(F̄, D̄, F_e)` of the scheme on the memoryless source that
/// emits the given pure-state letter ensemble i.i.d. across the block.
///
/// Ensembles diagonal in the scheme basis are evaluated symbolically at any
/// block length; general ensembles are evaluated densely for small blocks
/// and rejected beyond the budget.
pub fn scheme_fidelities(
    scheme: &CompressionScheme,
    ensemble: &Ensemble,
    n: usize,
) -> Result<FidelityReport, Error> {
    if n != scheme.n() {
        return Err(bad_argument(format!(
            "block length {n} does not match the scheme's {}",
            scheme.n()
        )));
    }
    if ensemble.dim() != scheme.dim() {
        return Err(bad_argument(format!(
            "ensemble letters have dimension {}, scheme expects {}",
            ensemble.dim(),
            scheme.dim()
        )));
    }
    if !ensemble.is_pure_source() {
        return Err(bad_argument("ensemble must consist of pure letter states"));
    }
    if let Some(per_position) = diagonal_letter_probs(scheme, ensemble) {
        return Ok(classical_report(retained_mass(scheme, &per_position)?));
    }
    dense_fidelities(scheme, ensemble)
}

fn flat_index(seq: &[usize], dim: usize) -> usize {
    seq.iter().fold(0, |acc, &j| acc * dim + j)
}

fn dense_fidelities(
    scheme: &CompressionScheme,
    ensemble: &Ensemble,
) -> Result<FidelityReport, Error> {
    let n = scheme.n();
    let dim = scheme.dim();
    let letters = ensemble.len();
    let (retained, rejected) = scheme.split_sequences()?;
    let ambient: u128 = (dim as u128).pow(n as u32);
    let sequences = (letters as u128).pow(n as u32);
    if sequences > MAX_SEQUENCE_ENUM
        || sequences.saturating_mul(ambient.pow(3)) > MAX_DENSE_WORK
    {
        return Err(too_large(
            "ensemble is not diagonal in the scheme basis and the dense path \
             exceeds its work budget",
        ));
    }
    let pi_dense = scheme.dense_projector()?;
    let code_dim = scheme.code_dim();
    let kappa = scheme.sequence_vector(&scheme.fallback_sequence());
    let letter_vectors: Vec<Vec<Complex64>> = ensemble
        .states()
        .iter()
        .map(|s| s.eig().eigenvector(0))
        .collect();
    let factor_dims = vec![dim; n];

    let mut average_fidelity = 0.0;
    let mut average_distortion = 0.0;
    let mut seq = vec![0usize; n];
    'outer: loop {
        let p: f64 = seq.iter().map(|&x| ensemble.prob(x)).product();
        if p > 0.0 {
            let views: Vec<&[Complex64]> =
                seq.iter().map(|&x| letter_vectors[x].as_slice()).collect();
            let psi = kron_vec(&views);
            let output = if scheme.is_fallback() {
                HermitianMatrix::from_outer(&kappa)
            } else {
                let projected = pi_dense.matrix().matvec(&psi);
                let t = vdot(&psi, &projected).re.clamp(0.0, 1.0);
                &HermitianMatrix::from_outer(&projected) + &pi_dense.scaled((1.0 - t) / code_dim)
            };
            let input = DensityOperator::from_valid(
                HermitianMatrix::from_outer(&psi),
                factor_dims.clone(),
            );
            let output = DensityOperator::from_valid(output, factor_dims.clone());
            average_fidelity += p * input.expectation(output.matrix());
            average_distortion += p * trace_distance(&input, &output)?;
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            seq[pos] += 1;
            if seq[pos] < letters {
                break;
            }
            seq[pos] = 0;
        }
    }

    // Entanglement fidelity via the scheme eigenbasis: transform the block
    // average once, then read off the typical-mass and cross terms.
    let mut basis = CMatrix::identity(1);
    for position in 0..n {
        basis = basis.kron(scheme.position_spectrum(position).eigenvectors());
    }
    let block_average = ensemble.average_state().power(n);
    let in_basis = basis
        .adjoint()
        .matmul(block_average.matrix().matrix())
        .matmul(&basis);
    let entanglement_fidelity = if scheme.is_fallback() {
        let kappa_flat = flat_index(&scheme.fallback_sequence(), dim);
        (0..in_basis.rows())
            .map(|m| in_basis.get(m, kappa_flat).norm_sqr())
            .sum()
    } else {
        let retained_flat: Vec<usize> = retained.iter().map(|s| flat_index(s, dim)).collect();
        let typical_mass: f64 = retained_flat.iter().map(|&l| in_basis.get(l, l).re).sum();
        let cross: f64 = rejected
            .iter()
            .map(|s| flat_index(s, dim))
            .map(|m| {
                retained_flat
                    .iter()
                    .map(|&l| in_basis.get(m, l).norm_sqr())
                    .sum::<f64>()
            })
            .sum();
        typical_mass * typical_mass + cross / code_dim
    };

    Ok(FidelityReport {
        average_fidelity: average_fidelity.clamp(0.0, 1.0),
        average_distortion: average_distortion.clamp(0.0, 1.0),
        entanglement_fidelity: entanglement_fidelity.clamp(0.0, 1.0),
    })
}
