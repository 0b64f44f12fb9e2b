//! Empirical types (letter-count vectors) and multinomial log arithmetic.

use serde::Serialize;

use crate::{too_large, Error};

/// Largest number of types a single enumeration may produce.
const MAX_TYPE_ENUM: u128 = 5_000_000;

/// The empirical type of a length-`n` sequence over the alphabet
/// `{0, …, a−1}`: `counts[j]` is the number of positions carrying letter `j`,
/// and `Σ_j counts[j] = n` by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TypeVector {
    counts: Vec<usize>,
    n: usize,
}

impl TypeVector {
    /// Wraps a count vector; the block length is the sum of the counts.
    pub fn new(counts: Vec<usize>) -> Self {
        let n = counts.iter().sum();
        Self { counts, n }
    }

    /// Reads off the type of an explicit sequence over `{0, …, a−1}`.
    pub fn of_sequence(seq: &[usize], alphabet: usize) -> Self {
        let mut counts = vec![0usize; alphabet];
        for &x in seq {
            counts[x] += 1;
        }
        Self {
            counts,
            n: seq.len(),
        }
    }

    /// Alphabet size (length of the count vector).
    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    /// Block length `n = Σ counts`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The raw counts.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Count of a single letter.
    pub fn count(&self, j: usize) -> usize {
        self.counts[j]
    }

    /// The empirical distribution `counts / n`.
    pub fn probs(&self) -> Vec<f64> {
        let n = self.n.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Entropy of the empirical distribution, in bits.
    pub fn entropy(&self) -> f64 {
        entropy_calc::entropy_of_probs(&self.probs())
    }

    /// `log2` of the number of sequences with this type,
    /// `log2( n! / Π_j counts[j]! )`.
    pub fn log2_class_size(&self) -> f64 {
        let table = ln_factorials(self.n);
        let mut ln = table[self.n];
        for &c in &self.counts {
            ln -= table[c];
        }
        ln * std::f64::consts::LOG2_E
    }

    /// Exact number of sequences with this type, if it fits in `u128`.
    pub fn class_size_exact(&self) -> Option<u128> {
        let mut remaining = self.n;
        let mut size: u128 = 1;
        for &c in &self.counts {
            size = size.checked_mul(binomial_u128(remaining, c)?)?;
            remaining -= c;
        }
        Some(size)
    }

    /// `log2 Π_j q_j^{counts[j]}`: the log-weight of any single sequence of
    /// this type under an i.i.d. distribution `q`.  `−∞` when the type puts
    /// mass on a letter with `q_j = 0`.
    pub fn sequence_log2_weight(&self, q: &[f64]) -> f64 {
        debug_assert_eq!(q.len(), self.counts.len());
        let mut log = 0.0;
        for (&c, &p) in self.counts.iter().zip(q) {
            if c == 0 {
                continue;
            }
            if p <= 0.0 {
                return f64::NEG_INFINITY;
            }
            log += c as f64 * p.log2();
        }
        log
    }

    /// `log2` of the total `q^{⊗n}`-probability of the class:
    /// class size times per-sequence weight.
    pub fn log2_mass(&self, q: &[f64]) -> f64 {
        let w = self.sequence_log2_weight(q);
        if w == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.log2_class_size() + w
    }

    /// Divergence `D(type ‖ q)` in bits; `+∞` when the type puts mass
    /// outside the support of `q`.
    pub fn divergence_to(&self, q: &[f64]) -> f64 {
        debug_assert_eq!(q.len(), self.counts.len());
        let n = self.n.max(1) as f64;
        let mut div = 0.0;
        for (&c, &p) in self.counts.iter().zip(q) {
            if c == 0 {
                continue;
            }
            if p <= 0.0 {
                return f64::INFINITY;
            }
            let t = c as f64 / n;
            div += t * (t / p).log2();
        }
        div.max(0.0)
    }
}

/// `ln(k!)` for `k = 0, …, n` by prefix summation.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = vec![0.0; n + 1];
    let mut acc = 0.0;
    for (k, slot) in table.iter_mut().enumerate().skip(2) {
        acc += (k as f64).ln();
        *slot = acc;
    }
    table
}

/// Exact binomial coefficient, or `None` on overflow.
pub(crate) fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut res: u128 = 1;
    for i in 1..=k {
        // The running product of i consecutive integers is divisible by i!.
        res = res.checked_mul((n - k + i) as u128)? / i as u128;
    }
    Some(res)
}

/// Number of types of length-`n` sequences over `a` letters,
/// `C(n + a − 1, a − 1)`, when it fits in `u128`.
pub fn count_types(alphabet: usize, n: usize) -> Option<u128> {
    if alphabet == 0 {
        return Some(if n == 0 { 1 } else { 0 });
    }
    binomial_u128(n + alphabet - 1, alphabet - 1)
}

/// All types of length-`n` sequences over `a` letters, in lexicographic
/// order of the count vector.  Fails when the enumeration would exceed the
/// budget of five million types.
pub fn enumerate_types(alphabet: usize, n: usize) -> Result<Vec<TypeVector>, Error> {
    let total = count_types(alphabet, n)
        .filter(|&c| c <= MAX_TYPE_ENUM)
        .ok_or_else(|| {
            too_large(format!(
                "enumerating types of {n}-blocks over {alphabet} letters"
            ))
        })?;
    let mut out = Vec::with_capacity(total as usize);
    let mut counts = vec![0usize; alphabet];
    fill_types(&mut counts, 0, n, &mut out);
    Ok(out)
}

fn fill_types(counts: &mut Vec<usize>, letter: usize, remaining: usize, out: &mut Vec<TypeVector>) {
    if letter + 1 == counts.len() {
        counts[letter] = remaining;
        out.push(TypeVector::new(counts.clone()));
        counts[letter] = 0;
        return;
    }
    for c in 0..=remaining {
        counts[letter] = c;
        fill_types(counts, letter + 1, remaining - c, out);
    }
    counts[letter] = 0;
}
