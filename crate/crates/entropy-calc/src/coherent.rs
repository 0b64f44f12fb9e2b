//! Entropy exchange and coherent information of a channel acting on a
//! state, evaluated through the canonical purification.

use quantum_objects::{apply_channel, purify, KrausChannel};
use quantum_objects::DensityOperator;

use crate::entropy::von_neumann_entropy;
use crate::Error;

fn check_endo(rho: &DensityOperator, ch: &KrausChannel) -> Result<(), Error> {
    if ch.dim_in() != ch.dim_out() || ch.dim_in() != rho.dim() {
        return Err(Error::dim_mismatch(format!(
            "entropy exchange needs an endo-channel on dim {}, got {}→{}",
            rho.dim(),
            ch.dim_in(),
            ch.dim_out()
        )));
    }
    Ok(())
}

/// Entropy exchange S_e(ρ;φ) = H((φ⊗id)Ψ_ρ), where Ψ_ρ is a purification
/// of ρ with the channel acting on the system factor.  The value does not
/// depend on the purification chosen.
pub fn entropy_exchange(rho: &DensityOperator, ch: &KrausChannel) -> Result<f64, Error> {
    check_endo(rho, ch)?;
    let psi = purify(rho);
    let extended = ch.tensor(&KrausChannel::identity(rho.dim()));
    let joint = apply_channel(&extended, &psi)?;
    Ok(von_neumann_entropy(&joint))
}

/// Coherent information I_e(ρ;φ) = H(φρ) − S_e(ρ;φ); never exceeds the
/// output entropy.
pub fn coherent_information(rho: &DensityOperator, ch: &KrausChannel) -> Result<f64, Error> {
    check_endo(rho, ch)?;
    let output_entropy = von_neumann_entropy(&apply_channel(ch, rho)?);
    Ok(output_entropy - entropy_exchange(rho, ch)?)
}
