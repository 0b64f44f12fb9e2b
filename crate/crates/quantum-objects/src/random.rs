//! Seeded random instances: states, channels, POVMs.
//!
//! All samplers take an explicit u64 seed and are deterministic per seed
//! (ChaCha12 stream); there is no ambient RNG anywhere in the workspace.

use crate::channel::KrausChannel;
use crate::density::DensityOperator;
use crate::povm::Povm;
use crate::Error;
use num_complex::Complex64;
use qla_core::{orthonormalize_columns, spectral_function, CMatrix, HermitianMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

/// Random density operator of the exact given rank: ρ = AA†/Tr(AA†) with A
/// a dim×rank complex Gaussian (the partial-trace/Wishart construction, so
/// the support is a Haar-like random subspace).
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator, Error> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::bad_shape(format!(
            "random_density needs 1 ≤ rank ≤ dim, got rank {rank}, dim {dim}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = gaussian_matrix(dim, rank, &mut rng);
    let wishart = HermitianMatrix::from_symmetrized(a.matmul(&a.adjoint()));
    let trace = wishart.trace();
    Ok(DensityOperator::from_valid(
        wishart.scaled(1.0 / trace),
        vec![dim],
    ))
}

/// Random channel: a Gaussian (dim_out·kraus_count)×dim_in matrix is
/// column-orthonormalized into a Stinespring isometry and sliced into
/// kraus_count blocks of dim_out rows.
pub fn random_channel(
    dim_in: usize,
    dim_out: usize,
    kraus_count: usize,
    seed: u64,
) -> Result<KrausChannel, Error> {
    if dim_in == 0 || dim_out == 0 || kraus_count == 0 || dim_out * kraus_count < dim_in {
        return Err(Error::bad_shape(format!(
            "random_channel needs dim_out·kraus_count ≥ dim_in ≥ 1, got {dim_in}→{dim_out} with {kraus_count} operators"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let g = gaussian_matrix(dim_out * kraus_count, dim_in, &mut rng);
    let v = orthonormalize_columns(&g, 1e-9);
    if v.cols() != dim_in {
        return Err(Error::bad_shape(
            "Gaussian isometry draw was rank-deficient (retry with another seed)",
        ));
    }
    let ops = (0..kraus_count)
        .map(|i| CMatrix::from_fn(dim_out, dim_in, |r, c| v.get(i * dim_out + r, c)))
        .collect();
    Ok(KrausChannel::new(ops)?)
}

/// Random POVM with the given number of outcomes: Gᵢ = AᵢAᵢ† from Gaussian
/// Aᵢ, normalized by S = ΣGᵢ as Eᵢ = S^{-1/2} Gᵢ S^{-1/2}.
pub fn random_povm(dim: usize, outcomes: usize, seed: u64) -> Result<Povm, Error> {
    if dim == 0 || outcomes == 0 {
        return Err(Error::bad_shape(format!(
            "random_povm needs dim ≥ 1 and outcomes ≥ 1, got dim {dim}, outcomes {outcomes}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let gs: Vec<HermitianMatrix> = (0..outcomes)
        .map(|_| {
            let a = gaussian_matrix(dim, dim, &mut rng);
            HermitianMatrix::from_symmetrized(a.matmul(&a.adjoint()))
        })
        .collect();
    let mut s = HermitianMatrix::zeros(dim);
    for g in &gs {
        s = &s + g;
    }
    let s_inv_root = spectral_function(&s, |x| x.powf(-0.5))?;
    let elements = gs
        .iter()
        .map(|g| g.sandwich(s_inv_root.matrix()))
        .collect();
    Ok(Povm::new(elements)?)
}
