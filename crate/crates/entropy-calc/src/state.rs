//! Multipartite states with declared tensor factors and classical flags,
//! and classical→quantum channels (finite input alphabet, density-operator
//! outputs).

use qla_core::{CMatrix, HermitianMatrix};
use quantum_objects::DensityOperator;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Largest admissible off-diagonal magnitude along a classical factor.
const CLASSICAL_TOL: f64 = 1e-9;

/// A density operator together with named tensor factors, where individual
/// factors may be flagged classical (diagonal in the computational basis of
/// that factor).
#[derive(Clone, Debug)]
pub struct MultipartiteState {
    state: DensityOperator,
    labels: Vec<String>,
    classical_flags: Vec<bool>,
}

/// Largest off-diagonal magnitude of `m` along factor `factor`, i.e. over
/// entry pairs whose multi-indices differ in that tensor position.
fn off_diagonal_residual(m: &CMatrix, factor_dims: &[usize], factor: usize) -> f64 {
    let stride: usize = factor_dims[factor + 1..].iter().product();
    let d = factor_dims[factor];
    let dim = m.rows();
    let mut residual = 0.0_f64;
    for r in 0..dim {
        let digit_r = (r / stride) % d;
        for c in 0..dim {
            let digit_c = (c / stride) % d;
            if digit_r != digit_c {
                residual = residual.max(m.get(r, c).norm());
            }
        }
    }
    residual
}

impl MultipartiteState {
    /// Wraps a density operator whose factor dimensions are already
    /// declared, validating label/flag bookkeeping and every classical
    /// flag.
    pub fn new(
        state: DensityOperator,
        labels: Vec<String>,
        classical_flags: Vec<bool>,
    ) -> Result<Self, Error> {
        let s = state.factor_dims().len();
        if labels.len() != s || classical_flags.len() != s {
            return Err(Error::size_mismatch(format!(
                "{s} factors but {} labels and {} flags",
                labels.len(),
                classical_flags.len()
            )));
        }
        for (j, &flag) in classical_flags.iter().enumerate() {
            if !flag {
                continue;
            }
            let residual =
                off_diagonal_residual(state.matrix().matrix(), state.factor_dims(), j);
            if residual > CLASSICAL_TOL {
                return Err(Error::NotClassical {
                    factor: j,
                    residual,
                });
            }
        }
        Ok(MultipartiteState {
            state,
            labels,
            classical_flags,
        })
    }

    /// Wraps a fully quantum state (no classical flags), generating labels
    /// `F0`, `F1`, ...
    pub fn quantum(state: DensityOperator) -> Self {
        let s = state.factor_dims().len();
        MultipartiteState {
            state,
            labels: (0..s).map(|j| format!("F{j}")).collect(),
            classical_flags: vec![false; s],
        }
    }

    pub fn state(&self) -> &DensityOperator {
        &self.state
    }

    pub fn factor_dims(&self) -> &[usize] {
        self.state.factor_dims()
    }

    pub fn num_factors(&self) -> usize {
        self.state.factor_dims().len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn classical_flags(&self) -> &[bool] {
        &self.classical_flags
    }

    /// True when every factor in `set` carries the classical flag.
    pub fn all_classical(&self, set: &[usize]) -> bool {
        set.iter().all(|&j| self.classical_flags[j])
    }

    /// Partial trace onto the factors in `keep` (any order; result factors
    /// are in ascending index order).
    pub fn reduce(&self, keep: &[usize]) -> Result<MultipartiteState, Error> {
        let mut order: Vec<usize> = keep.to_vec();
        order.sort_unstable();
        let reduced = qla_core::partial_trace(self.state.matrix(), self.factor_dims(), &order)?;
        let dims: Vec<usize> = order.iter().map(|&j| self.factor_dims()[j]).collect();
        let state = DensityOperator::from_valid(reduced, dims);
        Ok(MultipartiteState {
            state,
            labels: order.iter().map(|&j| self.labels[j].clone()).collect(),
            classical_flags: order.iter().map(|&j| self.classical_flags[j]).collect(),
        })
    }
}

/// A channel from a finite classical alphabet to density operators on a
/// common output space.
#[derive(Clone, Debug)]
pub struct CqChannel {
    alphabet: Vec<String>,
    outputs: Vec<DensityOperator>,
}

impl CqChannel {
    pub fn new(alphabet: Vec<String>, outputs: Vec<DensityOperator>) -> Result<Self, Error> {
        if alphabet.is_empty() || alphabet.len() != outputs.len() {
            return Err(Error::size_mismatch(format!(
                "{} alphabet letters vs {} outputs",
                alphabet.len(),
                outputs.len()
            )));
        }
        let dim = outputs[0].dim();
        if outputs.iter().any(|w| w.dim() != dim) {
            return Err(Error::dim_mismatch(
                "channel outputs live on different spaces",
            ));
        }
        Ok(CqChannel { alphabet, outputs })
    }

    /// Builds a channel labeling letters `0`, `1`, ... in order.
    pub fn from_outputs(outputs: Vec<DensityOperator>) -> Result<Self, Error> {
        let alphabet = (0..outputs.len()).map(|x| x.to_string()).collect();
        CqChannel::new(alphabet, outputs)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// Number of input letters.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn output_dim(&self) -> usize {
        self.outputs[0].dim()
    }

    pub fn outputs(&self) -> &[DensityOperator] {
        &self.outputs
    }

    pub fn output(&self, x: usize) -> &DensityOperator {
        &self.outputs[x]
    }

    /// The averaged output Σₓ P(x)·W_x.
    pub fn average_output(&self, p: &[f64]) -> Result<DensityOperator, Error> {
        crate::check_distribution(p)?;
        if p.len() != self.alphabet.len() {
            return Err(Error::size_mismatch(format!(
                "{} probabilities vs {} letters",
                p.len(),
                self.alphabet.len()
            )));
        }
        let dim = self.output_dim();
        let mut acc = HermitianMatrix::zeros(dim);
        for (w, &px) in self.outputs.iter().zip(p) {
            acc = &acc + &w.matrix().scaled(px.max(0.0));
        }
        Ok(DensityOperator::from_valid(acc, vec![dim]))
    }
}

#[derive(Serialize, Deserialize)]
struct CqChannelRepr {
    alphabet: Vec<String>,
    outputs: Vec<HermitianMatrix>,
}

impl Serialize for CqChannel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = CqChannelRepr {
            alphabet: self.alphabet.clone(),
            outputs: self
                .outputs
                .iter()
                .map(|w| w.matrix().clone())
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CqChannel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CqChannelRepr::deserialize(deserializer)?;
        let outputs = repr
            .outputs
            .into_iter()
            .map(|m| DensityOperator::new(m).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        CqChannel::new(repr.alphabet, outputs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn plus_state() -> DensityOperator {
        DensityOperator::from_pure(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn classical_flag_rejects_coherent_factors() {
        let rho = plus_state();
        let err = MultipartiteState::new(rho, vec!["X".into()], vec![true]).unwrap_err();
        assert!(matches!(err, Error::NotClassical { factor: 0, .. }));
    }

    #[test]
    fn classical_flag_accepts_diagonal_factors() {
        let rho = DensityOperator::from_classical(&[0.3, 0.7]).unwrap();
        assert!(MultipartiteState::new(rho, vec!["X".into()], vec![true]).is_ok());
    }

    #[test]
    fn flag_validation_sees_individual_factors() {
        // Classical ⊗ coherent: flagging only the first factor is fine,
        // flagging the second is rejected.
        let joint = DensityOperator::product(&[
            &DensityOperator::from_classical(&[0.5, 0.5]).unwrap(),
            &plus_state(),
        ]);
        assert!(MultipartiteState::new(
            joint.clone(),
            vec!["X".into(), "Q".into()],
            vec![true, false]
        )
        .is_ok());
        let err =
            MultipartiteState::new(joint, vec!["X".into(), "Q".into()], vec![true, true])
                .unwrap_err();
        assert!(matches!(err, Error::NotClassical { factor: 1, .. }));
    }

    #[test]
    fn bookkeeping_lengths_are_enforced() {
        let rho = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            MultipartiteState::new(rho, vec![], vec![]),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn reduce_keeps_labels_and_flags() {
        let joint = DensityOperator::product(&[
            &DensityOperator::from_classical(&[0.5, 0.5]).unwrap(),
            &DensityOperator::maximally_mixed(3),
        ]);
        let m =
            MultipartiteState::new(joint, vec!["X".into(), "Y".into()], vec![true, false])
                .unwrap();
        let reduced = m.reduce(&[1]).unwrap();
        assert_eq!(reduced.labels(), ["Y".to_string()]);
        assert_eq!(reduced.classical_flags(), [false]);
        assert_eq!(reduced.factor_dims(), [3]);
        assert!((reduced.state().trace() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn channel_requires_common_output_dim() {
        let w0 = DensityOperator::maximally_mixed(2);
        let w1 = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            CqChannel::from_outputs(vec![w0, w1]),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn average_output_matches_hand_sum() {
        let w = CqChannel::from_outputs(vec![
            DensityOperator::from_classical(&[1.0, 0.0]).unwrap(),
            DensityOperator::from_classical(&[0.0, 1.0]).unwrap(),
        ])
        .unwrap();
        let avg = w.average_output(&[0.25, 0.75]).unwrap();
        assert!((avg.matrix().get(0, 0).re - 0.25).abs() <= 1e-15);
        assert!((avg.matrix().get(1, 1).re - 0.75).abs() <= 1e-15);
    }

    #[test]
    fn channel_json_round_trips_and_validates() {
        let w = CqChannel::from_outputs(vec![
            DensityOperator::from_classical(&[0.9, 0.1]).unwrap(),
            DensityOperator::from_classical(&[0.1, 0.9]).unwrap(),
        ])
        .unwrap();
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.starts_with("{\"alphabet\":[\"0\",\"1\"],\"outputs\":["));
        let back: CqChannel = serde_json::from_str(&text).unwrap();
        assert_eq!(back.alphabet_size(), 2);
        assert!(back
            .output(0)
            .matrix()
            .max_abs_diff(w.output(0).matrix())
            <= 1e-15);

        // A non-density output must be rejected on the way in.
        let bad = r#"{"alphabet":["0"],"outputs":[[[[2.0,0.0]]]]}"#;
        assert!(serde_json::from_str::<CqChannel>(bad).is_err());
    }
}
