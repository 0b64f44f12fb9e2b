//! Quantum channels in Kraus form, their application to states, and the
//! Stinespring dilation isometry.

use crate::density::DensityOperator;
use crate::Error;
use num_complex::Complex64;
use qla_core::{partial_trace, CMatrix, HermitianMatrix, COMPLETENESS_TOL};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A CPTP map given by Kraus operators {Kᵢ: dim_in → dim_out} with
/// Σᵢ Kᵢ†Kᵢ = 𝟙 (within 1e-8). Complete positivity is automatic from the
/// Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kraus_ops: Vec<CMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl KrausChannel {
    /// Validate shapes and the completeness sum Σ Kᵢ†Kᵢ = 𝟙.
    pub fn new(kraus_ops: Vec<CMatrix>) -> Result<Self, Error> {
        let first = kraus_ops
            .first()
            .ok_or_else(|| Error::bad_shape("channel needs at least one Kraus operator"))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if kraus_ops
            .iter()
            .any(|k| k.rows() != dim_out || k.cols() != dim_in)
        {
            return Err(Error::dim_mismatch(
                "all Kraus operators must share the same shape",
            ));
        }
        let mut completeness = CMatrix::zeros(dim_in, dim_in);
        for k in &kraus_ops {
            completeness = &completeness + &k.adjoint().matmul(k);
        }
        let residual = completeness.max_abs_diff(&CMatrix::identity(dim_in));
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(KrausChannel {
            kraus_ops,
            dim_in,
            dim_out,
        })
    }

    /// The identity channel on `dim`.
    pub fn identity(dim: usize) -> Self {
        KrausChannel {
            kraus_ops: vec![CMatrix::identity(dim)],
            dim_in: dim,
            dim_out: dim,
        }
    }

    /// Conjugation by a unitary (single Kraus operator).
    pub fn from_unitary(u: CMatrix) -> Result<Self, Error> {
        if !u.is_square() {
            return Err(Error::bad_shape("unitary channel needs a square matrix"));
        }
        KrausChannel::new(vec![u])
    }

    /// The fully depolarizing channel ρ ↦ 𝟙/d, with Kraus family
    /// {Eᵢⱼ/√d} over all matrix units.
    pub fn depolarizing(dim: usize) -> Self {
        let scale = 1.0 / (dim as f64).sqrt();
        let mut ops = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut k = CMatrix::zeros(dim, dim);
                k.set(i, j, Complex64::new(scale, 0.0));
                ops.push(k);
            }
        }
        KrausChannel {
            kraus_ops: ops,
            dim_in: dim,
            dim_out: dim,
        }
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus_ops
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus_ops.len()
    }

    /// Apply to a state: ρ ↦ Σᵢ KᵢρKᵢ†.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator, Error> {
        if rho.dim() != self.dim_in {
            return Err(Error::dim_mismatch(format!(
                "channel input dim {} vs state dim {}",
                self.dim_in,
                rho.dim()
            )));
        }
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus_ops {
            let t = k.matmul(rho.matrix().matrix());
            out = &out + &t.matmul(&k.adjoint());
        }
        Ok(DensityOperator::from_valid(
            HermitianMatrix::from_symmetrized(out),
            vec![self.dim_out],
        ))
    }

    /// Tensor product φ⊗ψ of two channels (Kraus family {Kᵢ⊗Lⱼ}).
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let mut ops = Vec::with_capacity(self.kraus_count() * other.kraus_count());
        for k in &self.kraus_ops {
            for l in &other.kraus_ops {
                ops.push(k.kron(l));
            }
        }
        KrausChannel {
            kraus_ops: ops,
            dim_in: self.dim_in * other.dim_in,
            dim_out: self.dim_out * other.dim_out,
        }
    }
}

/// Free-function form of [`KrausChannel::apply`].
pub fn apply_channel(ch: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator, Error> {
    ch.apply(rho)
}

/// The Stinespring isometry V: H_in → H_env ⊗ H_out built by stacking the
/// Kraus blocks, with the environment as the *first* tensor factor: row
/// block i of V is Kᵢ, so V†V = Σ Kᵢ†Kᵢ = 𝟙 and
/// Tr_env(VρV†) = Σ KᵢρKᵢ† recovers the channel.
pub fn stinespring_isometry(ch: &KrausChannel) -> CMatrix {
    let k = ch.kraus_count();
    let (d_out, d_in) = (ch.dim_out(), ch.dim_in());
    let mut v = CMatrix::zeros(k * d_out, d_in);
    for (i, op) in ch.kraus_ops().iter().enumerate() {
        for r in 0..d_out {
            for c in 0..d_in {
                v.set(i * d_out + r, c, op.get(r, c));
            }
        }
    }
    v
}

/// Environment state of the dilation: Tr_out(VρV†), a k×k state on the
/// Kraus index. Its entropy is the entropy exchange.
pub fn environment_state(
    ch: &KrausChannel,
    rho: &DensityOperator,
) -> Result<DensityOperator, Error> {
    if rho.dim() != ch.dim_in() {
        return Err(Error::dim_mismatch(format!(
            "channel input dim {} vs state dim {}",
            ch.dim_in(),
            rho.dim()
        )));
    }
    let v = stinespring_isometry(ch);
    let joint = rho.matrix().sandwich(&v);
    let env = partial_trace(&joint, &[ch.kraus_count(), ch.dim_out()], &[0])?;
    Ok(DensityOperator::from_valid(
        env,
        vec![ch.kraus_count()],
    ))
}

#[derive(Serialize, Deserialize)]
struct KrausRepr {
    kraus: Vec<CMatrix>,
}

impl Serialize for KrausChannel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        KrausRepr {
            kraus: self.kraus_ops.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KrausChannel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = KrausRepr::deserialize(deserializer)?;
        KrausChannel::new(repr.kraus).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit_state(p: f64) -> DensityOperator {
        DensityOperator::from_classical(&[p, 1.0 - p]).unwrap()
    }

    #[test]
    fn identity_channel_fixes_states() {
        let rho = qubit_state(0.3);
        let out = apply_channel(&KrausChannel::identity(2), &rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) <= 1e-15);
    }

    #[test]
    fn depolarizing_channel_outputs_maximally_mixed() {
        for dim in [2usize, 3] {
            let ch = KrausChannel::depolarizing(dim);
            let rho = qubit_state(0.25);
            let rho = if dim == 2 {
                rho
            } else {
                DensityOperator::from_classical(&[0.5, 0.25, 0.25]).unwrap()
            };
            let out = ch.apply(&rho).unwrap();
            assert!(
                out.matrix()
                    .max_abs_diff(DensityOperator::maximally_mixed(dim).matrix())
                    <= 1e-12
            );
        }
    }

    #[test]
    fn incomplete_kraus_family_is_rejected() {
        let half = CMatrix::identity(2).scaled_re(0.5);
        match KrausChannel::new(vec![half]) {
            Err(Error::NotTracePreserving { residual }) => assert!(residual > 0.7),
            other => panic!("expected NotTracePreserving, got {other:?}"),
        }
    }

    #[test]
    fn stinespring_of_identity_and_unitary() {
        let id = KrausChannel::identity(3);
        assert_eq!(stinespring_isometry(&id), CMatrix::identity(3));

        // A hand-rolled unitary: the qubit swap-phase [[0,1],[i,0]] — columns orthonormal.
        let mut u = CMatrix::zeros(2, 2);
        u.set(0, 1, Complex64::new(1.0, 0.0));
        u.set(1, 0, Complex64::new(0.0, 1.0));
        let ch = KrausChannel::from_unitary(u.clone()).unwrap();
        assert_eq!(stinespring_isometry(&ch), u);
    }

    #[test]
    fn channel_json_schema_round_trips() {
        let ch = KrausChannel::depolarizing(2);
        let text = serde_json::to_string(&ch).unwrap();
        assert!(text.starts_with("{\"kraus\":[["));
        let back: KrausChannel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ch);
    }
}
