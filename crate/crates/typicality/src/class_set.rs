//! Classical sequence sets stored as unions of type classes.

use serde::Serialize;

use crate::types::{enumerate_types, TypeVector};
use crate::{bad_argument, Error};

/// A set of classical length-`n` sequences that is a union of type classes,
/// described by the retained types.  Membership, cardinality, and i.i.d.
/// probability mass are all computed from the type list — no sequence is
/// ever enumerated.
#[derive(Debug, Clone, Serialize)]
pub struct TypeClassSet {
    probs: Vec<f64>,
    n: usize,
    types: Vec<TypeVector>,
}

impl TypeClassSet {
    pub(crate) fn new(probs: Vec<f64>, n: usize, types: Vec<TypeVector>) -> Self {
        Self { probs, n, types }
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Alphabet size.
    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    /// The reference distribution the set was built from.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// The retained types.
    pub fn types(&self) -> &[TypeVector] {
        &self.types
    }

    /// Whether the set retains no sequences at all.
    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Membership test: a sequence belongs iff its type was retained.
    pub fn contains(&self, seq: &[usize]) -> bool {
        if seq.len() != self.n || seq.iter().any(|&x| x >= self.probs.len()) {
            return false;
        }
        let t = TypeVector::of_sequence(seq, self.probs.len());
        self.types.contains(&t)
    }

    /// `log2` of the number of sequences in the set (`−∞` when empty).
    pub fn log2_cardinality(&self) -> f64 {
        log_sum_exp(self.types.iter().map(|t| t.log2_class_size()))
    }

    /// Number of sequences in the set as a float (may round for huge sets).
    pub fn cardinality(&self) -> f64 {
        self.log2_cardinality().exp2()
    }

    /// Exact cardinality when it fits in `u128`.
    pub fn cardinality_exact(&self) -> Option<u128> {
        let mut total: u128 = 0;
        for t in &self.types {
            total = total.checked_add(t.class_size_exact()?)?;
        }
        Some(total)
    }

    /// Probability of the set under the `n`-fold product of the reference
    /// distribution.
    pub fn mass(&self) -> f64 {
        log_sum_exp(self.types.iter().map(|t| t.log2_mass(&self.probs))).exp2()
    }
}

/// `log2 Σ 2^x` with an empty-iterator value of `−∞`.
pub(crate) fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = terms.filter(|x| *x > f64::NEG_INFINITY).collect();
    let Some(max) = xs.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + xs.iter().map(|x| (x - max).exp2()).sum::<f64>().log2()
}

/// The variance-typical sequences of a distribution `p` with constant `α`:
/// all `xⁿ` with `|N(x|xⁿ) − n·p(x)| ≤ α·√(p(x)(1−p(x)))·√n` for every
/// letter `x`.  Their `p^{⊗n}`-mass is at least `1 − a/α²`.
pub fn variance_typical_set(p: &[f64], n: usize, alpha: f64) -> Result<TypeClassSet, Error> {
    entropy_calc::check_distribution(p)?;
    if n == 0 {
        return Err(bad_argument("variance-typical set needs block length ≥ 1"));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(bad_argument(format!(
            "variance-typical constant must be finite and ≥ 0, got {alpha}"
        )));
    }
    let sqrt_n = (n as f64).sqrt();
    let types = enumerate_types(p.len(), n)?
        .into_iter()
        .filter(|t| {
            t.counts().iter().zip(p).all(|(&c, &px)| {
                let px = px.clamp(0.0, 1.0);
                (c as f64 - n as f64 * px).abs() <= alpha * (px * (1.0 - px)).sqrt() * sqrt_n
            })
        })
        .collect();
    Ok(TypeClassSet::new(p.to_vec(), n, types))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fair_coin_window_retains_fourteen_of_sixteen() {
        // |N(0) − 2| ≤ 1 keeps counts 1, 2, 3: 4 + 6 + 4 = 14 sequences.
        let set = variance_typical_set(&[0.5, 0.5], 4, 1.0).unwrap();
        assert_eq!(set.cardinality_exact(), Some(14));
        assert!((set.cardinality() - 14.0).abs() < 1e-9);

        // Brute-force cross-check over all 16 binary sequences.
        let mut hits = 0;
        for bits in 0..16u32 {
            let seq: Vec<usize> = (0..4).map(|i| ((bits >> i) & 1) as usize).collect();
            if set.contains(&seq) {
                hits += 1;
            }
        }
        assert_eq!(hits, 14);
    }

    #[test]
    fn zero_constant_keeps_exact_type_sequences_only() {
        let set = variance_typical_set(&[0.5, 0.5], 4, 0.0).unwrap();
        assert_eq!(set.types().len(), 1);
        assert_eq!(set.types()[0].counts(), &[2, 2]);
        assert_eq!(set.cardinality_exact(), Some(6));
    }

    #[test]
    fn mass_respects_the_chebyshev_guarantee() {
        let (n, alpha) = (100, 3.0);
        let set = variance_typical_set(&[0.9, 0.1], n, alpha).unwrap();
        let mass = set.mass();
        let bound = 1.0 - 2.0 / (alpha * alpha);
        assert!(
            mass >= bound - 1e-9,
            "mass {mass} below guarantee {bound}"
        );
        assert!(mass <= 1.0 + 1e-9);
    }

    #[test]
    fn membership_rejects_malformed_sequences() {
        let set = variance_typical_set(&[0.5, 0.5], 4, 1.0).unwrap();
        assert!(!set.contains(&[0, 1, 2, 0])); // letter out of range
        assert!(!set.contains(&[0, 1, 0])); // wrong length
    }

    #[test]
    fn degenerate_distribution_pins_every_letter() {
        let set = variance_typical_set(&[1.0, 0.0], 6, 2.0).unwrap();
        assert_eq!(set.cardinality_exact(), Some(1));
        assert!(set.contains(&[0; 6]));
        assert!((set.mass() - 1.0).abs() < 1e-12);
    }
}
