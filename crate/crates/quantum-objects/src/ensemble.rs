//! Ensembles: finitely many states with a probability distribution.

use crate::density::DensityOperator;
use crate::Error;
use qla_core::{CMatrix, HermitianMatrix, HERM_TOL};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A pair (states, probs): the source emits state i with probability
/// probs[i]. The average state Σᵢ pᵢρᵢ is derived on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    states: Vec<DensityOperator>,
    probs: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<DensityOperator>, probs: Vec<f64>) -> Result<Self, Error> {
        if states.is_empty() || states.len() != probs.len() {
            return Err(Error::InvalidEnsemble {
                reason: format!(
                    "{} states vs {} probabilities",
                    states.len(),
                    probs.len()
                ),
            });
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::InvalidEnsemble {
                reason: "states must share one dimension".into(),
            });
        }
        if probs.iter().any(|&p| p < -1e-12) {
            return Err(Error::InvalidEnsemble {
                reason: "negative probability".into(),
            });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > HERM_TOL {
            return Err(Error::InvalidEnsemble {
                reason: format!("probabilities sum to {total:.12}"),
            });
        }
        Ok(Ensemble { states, probs })
    }

    /// Uniform distribution over the given states.
    pub fn uniform(states: Vec<DensityOperator>) -> Result<Self, Error> {
        let n = states.len().max(1);
        let probs = vec![1.0 / n as f64; states.len()];
        Ensemble::new(states, probs)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn state(&self, i: usize) -> &DensityOperator {
        &self.states[i]
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Whether every state is rank 1 (the q-DMS contract).
    pub fn is_pure_source(&self) -> bool {
        self.states.iter().all(|s| s.is_pure())
    }

    /// Average state Σᵢ pᵢ ρᵢ.
    pub fn average_state(&self) -> DensityOperator {
        let dim = self.dim();
        let mut avg = HermitianMatrix::zeros(dim);
        for (s, &p) in self.states.iter().zip(&self.probs) {
            avg = &avg + &s.matrix().scaled(p);
        }
        DensityOperator::from_valid(avg, vec![dim])
    }
}

#[derive(Serialize, Deserialize)]
struct EnsembleRepr {
    dims: Vec<usize>,
    probs: Vec<f64>,
    states: Vec<CMatrix>,
}

impl Serialize for Ensemble {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        EnsembleRepr {
            dims: self.states[0].factor_dims().to_vec(),
            probs: self.probs.clone(),
            states: self
                .states
                .iter()
                .map(|s| s.matrix().matrix().clone())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ensemble {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = EnsembleRepr::deserialize(deserializer)?;
        let mut states = Vec::with_capacity(repr.states.len());
        for m in repr.states {
            let h = HermitianMatrix::new(m).map_err(D::Error::custom)?;
            let s = DensityOperator::new(h)
                .and_then(|s| s.with_factor_dims(&repr.dims))
                .map_err(D::Error::custom)?;
            states.push(s);
        }
        Ensemble::new(states, repr.probs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn average_state_mixes_correctly() {
        let zero = DensityOperator::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let one = DensityOperator::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let ens = Ensemble::new(vec![zero, one], vec![0.25, 0.75]).unwrap();
        assert!(ens.is_pure_source());
        let avg = ens.average_state();
        let expected = DensityOperator::from_classical(&[0.25, 0.75]).unwrap();
        assert!(avg.matrix().max_abs_diff(expected.matrix()) <= 1e-12);
    }

    #[test]
    fn bad_probabilities_are_rejected() {
        let zero = DensityOperator::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(
            Ensemble::new(vec![zero.clone()], vec![0.5]),
            Err(Error::InvalidEnsemble { .. })
        ));
        assert!(matches!(
            Ensemble::new(vec![zero.clone(), zero], vec![1.5, -0.5]),
            Err(Error::InvalidEnsemble { .. })
        ));
    }

    #[test]
    fn json_schema_shape_and_round_trip() {
        let zero = DensityOperator::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let plus = DensityOperator::from_pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let ens = Ensemble::uniform(vec![zero, plus]).unwrap();
        let text = serde_json::to_string(&ens).unwrap();
        assert!(text.starts_with("{\"dims\":[2],\"probs\":[0.5,0.5],\"states\":["));
        let back: Ensemble = serde_json::from_str(&text).unwrap();
        assert_eq!(back.probs(), ens.probs());
        assert!(back.state(1).matrix().max_abs_diff(ens.state(1).matrix()) <= 1e-12);
    }

    #[test]
    fn non_density_json_is_rejected() {
        let text = r#"{"dims":[2],"probs":[1.0],"states":[[[[2.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]]]}"#;
        assert!(serde_json::from_str::<Ensemble>(text).is_err());
    }
}
