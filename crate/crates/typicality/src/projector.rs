//! Symbolic typical projectors: product eigenbases plus retained type classes.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use serde::Serialize;

use entropy_calc::CqChannel;
use qla_core::{kron_vec, CMatrix, HermitianMatrix, Spectrum};
use quantum_objects::DensityOperator;

use crate::class_set::log_sum_exp;
use crate::types::{enumerate_types, TypeVector};
use crate::{bad_argument, too_large, Direction, Error};

/// Upper bound on the number of composite classes a constructor may retain.
const MAX_CLASSES: u128 = 2_000_000;

/// Largest ambient dimension `d^n` for which dense materialization is
/// attempted.
const MAX_DENSE_DIM: usize = 1024;

/// An eigenvalue of a type-realizability check: how far `n·λ_j` may sit from
/// the nearest integer for the type to count as realizable.
const REALIZABLE_TOL: f64 = 1e-9;

/// A maximal set of tensor positions sharing one eigenbasis.
#[derive(Debug, Clone)]
pub struct GroupSpectrum {
    positions: Vec<usize>,
    spectrum: Spectrum,
}

impl GroupSpectrum {
    /// The (sorted) tensor positions this group occupies.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// The shared eigenbasis and eigenvalue list.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Number of positions in the group.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Whether the group is empty (never true for constructed projectors).
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Eigenvalues clamped into `[0, 1]` (eigensolver dust removed).
    fn probs(&self) -> Vec<f64> {
        self.spectrum
            .eigenvalues()
            .iter()
            .map(|&q| q.clamp(0.0, 1.0))
            .collect()
    }
}

/// A projector `Π = Σ_{jⁿ ∈ S} π_{j₁} ⊗ … ⊗ π_{j_n}` whose index set `S` is
/// a union of *composite type classes*: positions are partitioned into
/// groups sharing an eigenbasis, and `S` collects every sequence whose
/// per-group letter counts match one of the retained class descriptors.
///
/// The representation is exact — traces, per-sequence ("pinched") weights,
/// and probability masses are integer/multinomial quantities evaluated in
/// log2 space — and supports block lengths far beyond anything dense.
#[derive(Debug, Clone)]
pub struct TypicalProjector {
    dim: usize,
    n: usize,
    groups: Vec<GroupSpectrum>,
    classes: Vec<Vec<TypeVector>>,
}

impl TypicalProjector {
    fn from_parts(
        dim: usize,
        n: usize,
        groups: Vec<GroupSpectrum>,
        classes: Vec<Vec<TypeVector>>,
    ) -> Result<Self, Error> {
        let mut seen = vec![false; n];
        for g in &groups {
            if g.spectrum.dim() != dim {
                return Err(bad_argument("group eigenbasis dimension mismatch"));
            }
            for &p in &g.positions {
                if p >= n || seen[p] {
                    return Err(bad_argument("group positions must partition the block"));
                }
                seen[p] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(bad_argument("group positions must cover the block"));
        }
        for class in &classes {
            if class.len() != groups.len() {
                return Err(bad_argument("class arity must match the group count"));
            }
            for (t, g) in class.iter().zip(&groups) {
                if t.n() != g.len() || t.alphabet_size() != dim {
                    return Err(bad_argument("class type does not fit its group"));
                }
            }
        }
        Ok(Self {
            dim,
            n,
            groups,
            classes,
        })
    }

    /// Per-position Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The position groups and their eigenbases.
    pub fn groups(&self) -> &[GroupSpectrum] {
        &self.groups
    }

    /// The retained composite classes (one type per group each).
    pub fn classes(&self) -> &[Vec<TypeVector>] {
        &self.classes
    }

    /// Whether the projector is zero.
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `log2 Tr Π`: log-number of retained sequences (`−∞` when empty).
    pub fn log2_trace(&self) -> f64 {
        log_sum_exp(self.classes.iter().map(|class| {
            class
                .iter()
                .map(|t| t.log2_class_size())
                .sum::<f64>()
        }))
    }

    /// `Tr Π` as a float (0 when empty; may round for huge projectors).
    pub fn trace(&self) -> f64 {
        let log = self.log2_trace();
        if log == f64::NEG_INFINITY {
            0.0
        } else {
            log.exp2()
        }
    }

    /// Exact `Tr Π` when it fits in `u128`.
    pub fn trace_exact(&self) -> Option<u128> {
        let mut total: u128 = 0;
        for class in &self.classes {
            let mut prod: u128 = 1;
            for t in class {
                prod = prod.checked_mul(t.class_size_exact()?)?;
            }
            total = total.checked_add(prod)?;
        }
        Some(total)
    }

    /// `log2` of the pinched weight of every sequence in class `idx`: the
    /// eigenvalue of `⊗ ρ_g^{⊗group}` on that eigenindex sequence.
    pub fn class_log2_weight(&self, idx: usize) -> f64 {
        let class = &self.classes[idx];
        let mut log = 0.0;
        for (t, g) in class.iter().zip(&self.groups) {
            let w = t.sequence_log2_weight(&g.probs());
            if w == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            log += w;
        }
        log
    }

    /// Largest pinched log2-weight over retained classes (`None` when empty).
    pub fn max_class_log2_weight(&self) -> Option<f64> {
        (0..self.classes.len())
            .map(|i| self.class_log2_weight(i))
            .reduce(f64::max)
    }

    /// Smallest pinched log2-weight over retained classes (`None` when empty).
    pub fn min_class_log2_weight(&self) -> Option<f64> {
        (0..self.classes.len())
            .map(|i| self.class_log2_weight(i))
            .reduce(f64::min)
    }

    /// `Tr((⊗_g ρ_g^{⊗group}) · Π)`: the probability mass the projector
    /// captures from the very states whose eigenbases define it.
    pub fn mass(&self) -> f64 {
        let log = log_sum_exp((0..self.classes.len()).map(|i| {
            let w = self.class_log2_weight(i);
            if w == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            let size: f64 = self.classes[i]
                .iter()
                .map(|t| t.log2_class_size())
                .sum();
            w + size
        }));
        if log == f64::NEG_INFINITY {
            0.0
        } else {
            log.exp2()
        }
    }

    /// `Tr((ρ₁ ⊗ … ⊗ ρ_n) · Π)` for arbitrary per-position states given by
    /// their diagonal `probs[i][j] = ⟨e_j|ρ_i|e_j⟩` in position `i`'s group
    /// eigenbasis.  Off-diagonal parts never contribute because `Π` is
    /// diagonal in the product eigenbasis.
    pub fn mass_per_position(&self, probs: &[Vec<f64>]) -> Result<f64, Error> {
        if probs.len() != self.n {
            return Err(bad_argument(format!(
                "need one diagonal per position: got {}, block length {}",
                probs.len(),
                self.n
            )));
        }
        if probs.iter().any(|p| p.len() != self.dim) {
            return Err(bad_argument("per-position diagonals must have length d"));
        }
        // Distribution of the letter-count vector within each group,
        // built position by position.
        let mut group_tables: Vec<HashMap<Vec<u16>, f64>> = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let mut table: HashMap<Vec<u16>, f64> = HashMap::new();
            table.insert(vec![0u16; self.dim], 1.0);
            for &pos in &g.positions {
                let t = &probs[pos];
                let mut next: HashMap<Vec<u16>, f64> =
                    HashMap::with_capacity(table.len() * self.dim);
                for (counts, p) in &table {
                    for (j, &tj) in t.iter().enumerate() {
                        if tj == 0.0 {
                            continue;
                        }
                        let mut c = counts.clone();
                        c[j] += 1;
                        *next.entry(c).or_insert(0.0) += p * tj;
                    }
                }
                table = next;
            }
            group_tables.push(table);
        }
        let mut mass = 0.0;
        for class in &self.classes {
            let mut prod = 1.0;
            for (t, table) in class.iter().zip(&group_tables) {
                let key: Vec<u16> = t.counts().iter().map(|&c| c as u16).collect();
                prod *= table.get(&key).copied().unwrap_or(0.0);
                if prod == 0.0 {
                    break;
                }
            }
            mass += prod;
        }
        Ok(mass)
    }

    /// Whether the eigenindex sequence `seq` (length `n`, letters `< d`)
    /// lies in the retained index set.
    pub fn contains(&self, seq: &[usize]) -> bool {
        if seq.len() != self.n || seq.iter().any(|&j| j >= self.dim) {
            return false;
        }
        let key = self.sequence_key(seq);
        self.classes.iter().any(|class| {
            class
                .iter()
                .zip(&key)
                .all(|(t, counts)| t.counts() == counts.as_slice())
        })
    }

    fn sequence_key(&self, seq: &[usize]) -> Vec<Vec<usize>> {
        self.groups
            .iter()
            .map(|g| {
                let mut counts = vec![0usize; self.dim];
                for &pos in &g.positions {
                    counts[seq[pos]] += 1;
                }
                counts
            })
            .collect()
    }

    /// Dense form `Σ_{jⁿ ∈ S} ⊗_i π_{j_i}` for small systems
    /// (ambient dimension `d^n ≤ 1024`).
    pub fn materialize(&self) -> Result<HermitianMatrix, Error> {
        let total = checked_power(self.dim, self.n).filter(|&t| t <= MAX_DENSE_DIM).ok_or_else(
            || {
                too_large(format!(
                    "dense materialization of a {}^{}-dimensional projector",
                    self.dim, self.n
                ))
            },
        )?;
        // Flattened per-group count keys for O(1) membership.
        let retained: HashSet<Vec<u16>> = self
            .classes
            .iter()
            .map(|class| {
                class
                    .iter()
                    .flat_map(|t| t.counts().iter().map(|&c| c as u16))
                    .collect()
            })
            .collect();
        let mut pos2group = vec![0usize; self.n];
        for (gi, g) in self.groups.iter().enumerate() {
            for &pos in &g.positions {
                pos2group[pos] = gi;
            }
        }
        let mut columns: Vec<Vec<Complex64>> = Vec::new();
        let mut seq = vec![0usize; self.n];
        for raw in 0..total {
            let mut rest = raw;
            for i in (0..self.n).rev() {
                seq[i] = rest % self.dim;
                rest /= self.dim;
            }
            let key: Vec<u16> = self
                .sequence_key(&seq)
                .into_iter()
                .flat_map(|counts| counts.into_iter().map(|c| c as u16))
                .collect();
            if !retained.contains(&key) {
                continue;
            }
            let factors: Vec<Vec<Complex64>> = seq
                .iter()
                .enumerate()
                .map(|(i, &j)| self.groups[pos2group[i]].spectrum.eigenvector(j))
                .collect();
            let refs: Vec<&[Complex64]> = factors.iter().map(|v| v.as_slice()).collect();
            columns.push(kron_vec(&refs));
        }
        if columns.is_empty() {
            return Ok(HermitianMatrix::zeros(total));
        }
        let v = CMatrix::from_columns(&columns);
        Ok(HermitianMatrix::from_symmetrized(v.matmul(&v.adjoint())))
    }

    /// JSON export: per-group positions, eigenvalues, and basis columns,
    /// plus the list of retained class descriptors.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct GroupRepr<'a> {
            positions: &'a [usize],
            eigenvalues: &'a [f64],
            basis: Vec<Vec<[f64; 2]>>,
        }
        #[derive(Serialize)]
        struct ProjectorRepr<'a> {
            dim: usize,
            n: usize,
            groups: Vec<GroupRepr<'a>>,
            classes: &'a [Vec<TypeVector>],
        }
        let repr = ProjectorRepr {
            dim: self.dim,
            n: self.n,
            groups: self
                .groups
                .iter()
                .map(|g| GroupRepr {
                    positions: &g.positions,
                    eigenvalues: g.spectrum.eigenvalues(),
                    basis: (0..self.dim)
                        .map(|k| {
                            g.spectrum
                                .eigenvector(k)
                                .iter()
                                .map(|z| [z.re, z.im])
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
            classes: &self.classes,
        };
        serde_json::to_string(&repr).expect("projector serialization cannot fail")
    }
}

fn checked_power(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn check_block_length(n: usize) -> Result<(), Error> {
    if n == 0 {
        Err(bad_argument("block length must be ≥ 1"))
    } else {
        Ok(())
    }
}

fn check_nonnegative(value: f64, name: &str) -> Result<(), Error> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(bad_argument(format!(
            "{name} must be finite and ≥ 0, got {value}"
        )))
    }
}

fn whole_block_group(spectrum: Spectrum, n: usize) -> Vec<GroupSpectrum> {
    vec![GroupSpectrum {
        positions: (0..n).collect(),
        spectrum,
    }]
}

/// Retains the types inside the variance window
/// `|c_j − n·q_j| ≤ α·√(q_j(1−q_j))·√n`.
fn variance_window(q: &[f64], n: usize, alpha: f64) -> Result<Vec<TypeVector>, Error> {
    let sqrt_n = (n as f64).sqrt();
    Ok(enumerate_types(q.len(), n)?
        .into_iter()
        .filter(|t| {
            t.counts().iter().zip(q).all(|(&c, &qj)| {
                (c as f64 - n as f64 * qj).abs() <= alpha * (qj * (1.0 - qj)).sqrt() * sqrt_n
            })
        })
        .collect())
}

/// The variance-typical projector of `ρ^{⊗n}` with constant `α`: retains the
/// eigenindex sequences whose per-letter counts are within
/// `α·√(q_j(1−q_j))·√n` of `n·q_j`.  Captures mass ≥ `1 − d/α²`, and every
/// retained sequence has pinched log2-weight within `K·d·α·√n` of `−n·H(ρ)`.
pub fn variance_typical_projector(
    rho: &DensityOperator,
    n: usize,
    alpha: f64,
) -> Result<TypicalProjector, Error> {
    check_block_length(n)?;
    check_nonnegative(alpha, "variance-typical constant")?;
    let spectrum = rho.eig();
    let q: Vec<f64> = spectrum
        .eigenvalues()
        .iter()
        .map(|&x| x.clamp(0.0, 1.0))
        .collect();
    let types = variance_window(&q, n, alpha)?;
    let classes = types.into_iter().map(|t| vec![t]).collect();
    TypicalProjector::from_parts(rho.dim(), n, whole_block_group(spectrum, n), classes)
}

/// The entropy-typical projector of a heterogeneous state list: retains
/// eigenindex sequences with `|Σ_i −log2 q_{i,j_i} − Σ_i H(ρ_i)| ≤ δ·√n`.
/// Positions with bitwise-identical state matrices share a group; the
/// number of distinct states must stay small enough that the composite
/// class enumeration fits the budget.
pub fn entropy_typical_projector(
    rhos: &[DensityOperator],
    delta: f64,
) -> Result<TypicalProjector, Error> {
    check_block_length(rhos.len())?;
    check_nonnegative(delta, "entropy-typical constant")?;
    let dim = rhos[0].dim();
    if rhos.iter().any(|r| r.dim() != dim) {
        return Err(bad_argument("all states must share one dimension"));
    }
    let n = rhos.len();

    // Group positions by exact matrix equality.
    let mut keys: HashMap<Vec<(u64, u64)>, usize> = HashMap::new();
    let mut groups: Vec<(Vec<usize>, &DensityOperator)> = Vec::new();
    for (i, rho) in rhos.iter().enumerate() {
        let key: Vec<(u64, u64)> = rho
            .matrix()
            .matrix()
            .data()
            .iter()
            .map(|z| (z.re.to_bits(), z.im.to_bits()))
            .collect();
        match keys.get(&key) {
            Some(&gi) => groups[gi].0.push(i),
            None => {
                keys.insert(key, groups.len());
                groups.push((vec![i], rho));
            }
        }
    }

    let spectra: Vec<GroupSpectrum> = groups
        .iter()
        .map(|(positions, rho)| GroupSpectrum {
            positions: positions.clone(),
            spectrum: rho.eig(),
        })
        .collect();
    let per_group_types: Vec<Vec<TypeVector>> = spectra
        .iter()
        .map(|g| enumerate_types(dim, g.len()))
        .collect::<Result<_, _>>()?;
    per_group_types
        .iter()
        .try_fold(1u128, |acc, ts| acc.checked_mul(ts.len() as u128))
        .filter(|&c| c <= MAX_CLASSES)
        .ok_or_else(|| {
            too_large(format!(
                "entropy-typical class enumeration over {} distinct states",
                spectra.len()
            ))
        })?;

    // −log2 of each eigenvalue, per group, and the total entropy target.
    let weights: Vec<Vec<f64>> = spectra
        .iter()
        .map(|g| {
            g.probs()
                .iter()
                .map(|&q| if q > 0.0 { -q.log2() } else { f64::INFINITY })
                .collect()
        })
        .collect();
    let h_total: f64 = spectra
        .iter()
        .map(|g| g.len() as f64 * entropy_calc::entropy_of_probs(&g.probs()))
        .sum();
    let window = delta * (n as f64).sqrt();

    let mut classes: Vec<Vec<TypeVector>> = Vec::new();
    let mut current: Vec<TypeVector> = Vec::with_capacity(spectra.len());
    fill_classes(
        &per_group_types,
        &weights,
        0,
        0.0,
        h_total,
        window,
        &mut current,
        &mut classes,
    );
    TypicalProjector::from_parts(dim, n, spectra, classes)
}

#[allow(clippy::too_many_arguments)]
fn fill_classes(
    per_group_types: &[Vec<TypeVector>],
    weights: &[Vec<f64>],
    group: usize,
    acc: f64,
    h_total: f64,
    window: f64,
    current: &mut Vec<TypeVector>,
    out: &mut Vec<Vec<TypeVector>>,
) {
    if group == per_group_types.len() {
        if (acc - h_total).abs() <= window {
            out.push(current.clone());
        }
        return;
    }
    for t in &per_group_types[group] {
        let mut contribution = 0.0;
        for (j, &c) in t.counts().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let w = weights[group][j];
            if w.is_infinite() {
                contribution = f64::INFINITY;
                break;
            }
            contribution += c as f64 * w;
        }
        if contribution.is_infinite() {
            continue;
        }
        current.push(t.clone());
        fill_classes(
            per_group_types,
            weights,
            group + 1,
            acc + contribution,
            h_total,
            window,
            current,
            out,
        );
        current.pop();
    }
}

/// The constant-typical projector of `ρ^{⊗n}` with constant `δ`: retains the
/// eigenindex sequences with `|c_j − n·q_j| ≤ δ·√n` for every letter.
pub fn constant_typical_projector(
    rho: &DensityOperator,
    n: usize,
    delta: f64,
) -> Result<TypicalProjector, Error> {
    check_block_length(n)?;
    check_nonnegative(delta, "constant-typical constant")?;
    let spectrum = rho.eig();
    let q: Vec<f64> = spectrum
        .eigenvalues()
        .iter()
        .map(|&x| x.clamp(0.0, 1.0))
        .collect();
    let window = delta * (n as f64).sqrt();
    let types = enumerate_types(rho.dim(), n)?
        .into_iter()
        .filter(|t| {
            t.counts()
                .iter()
                .zip(&q)
                .all(|(&c, &qj)| (c as f64 - n as f64 * qj).abs() <= window)
        })
        .map(|t| vec![t])
        .collect();
    TypicalProjector::from_parts(rho.dim(), n, whole_block_group(spectrum, n), types)
}

/// Rounds `n·λ` to a count vector; `None` when the spectrum is not a type
/// with denominator `n`.
fn realizable_counts(eigs: &[f64], n: usize) -> Option<Vec<usize>> {
    let counts: Vec<usize> = eigs
        .iter()
        .map(|&lambda| (lambda.clamp(0.0, 1.0) * n as f64).round() as usize)
        .collect();
    let total: usize = counts.iter().sum();
    if total != n {
        return None;
    }
    let ok = eigs
        .iter()
        .zip(&counts)
        .all(|(&lambda, &c)| (lambda.clamp(0.0, 1.0) - c as f64 / n as f64).abs() <= REALIZABLE_TOL);
    ok.then_some(counts)
}

/// The exact-type projector `Π_ν` at block length `n`: retains exactly the
/// sequences whose empirical type equals `ν`'s eigenvalue list.  When
/// `n·ν` is not integral the type is unrealizable and the projector is
/// empty (zero mass and trace — never an error).
pub fn exact_type_projector(nu: &DensityOperator, n: usize) -> Result<TypicalProjector, Error> {
    check_block_length(n)?;
    let spectrum = nu.eig();
    let classes = match realizable_counts(spectrum.eigenvalues(), n) {
        Some(counts) => vec![vec![TypeVector::new(counts)]],
        None => Vec::new(),
    };
    TypicalProjector::from_parts(nu.dim(), n, whole_block_group(spectrum, n), classes)
}

/// The conditional exact-type projector `Π_V(xⁿ)`: for each letter `x`, the
/// positions `I_x = {i : x_i = x}` carry the exact type of `V_x`'s spectrum
/// over block `|I_x|`.  Empty when any required per-letter type is not
/// realizable.
pub fn exact_cond_type_projector(
    v: &[DensityOperator],
    xn: &[usize],
) -> Result<TypicalProjector, Error> {
    check_block_length(xn.len())?;
    if v.is_empty() {
        return Err(bad_argument("need at least one conditional state"));
    }
    let dim = v[0].dim();
    if v.iter().any(|s| s.dim() != dim) {
        return Err(bad_argument("conditional states must share one dimension"));
    }
    if xn.iter().any(|&x| x >= v.len()) {
        return Err(bad_argument("sequence letter outside the channel alphabet"));
    }
    let mut groups: Vec<GroupSpectrum> = Vec::new();
    let mut class: Vec<TypeVector> = Vec::new();
    let mut realizable = true;
    for (x, state) in v.iter().enumerate() {
        let positions: Vec<usize> = xn
            .iter()
            .enumerate()
            .filter_map(|(i, &xi)| (xi == x).then_some(i))
            .collect();
        if positions.is_empty() {
            continue;
        }
        let block = positions.len();
        let spectrum = state.eig();
        match realizable_counts(spectrum.eigenvalues(), block) {
            Some(counts) => class.push(TypeVector::new(counts)),
            None => realizable = false,
        }
        groups.push(GroupSpectrum {
            positions,
            spectrum,
        });
    }
    let classes = if realizable && class.len() == groups.len() {
        vec![class]
    } else {
        Vec::new()
    };
    TypicalProjector::from_parts(dim, xn.len(), groups, classes)
}

/// The union of exact-type projectors of `ρ^{⊗n}` whose type entropy lies on
/// the chosen side of `L` (in bits): `Π_{ρ,H(·)≤L}` or `Π_{ρ,H(·)≥L}`.
pub fn bounded_entropy_projector(
    rho: &DensityOperator,
    n: usize,
    l: f64,
    side: Direction,
) -> Result<TypicalProjector, Error> {
    check_block_length(n)?;
    check_nonnegative(l, "entropy threshold")?;
    let spectrum = rho.eig();
    let types = enumerate_types(rho.dim(), n)?
        .into_iter()
        .filter(|t| match side {
            Direction::AtMost => t.entropy() <= l,
            Direction::AtLeast => t.entropy() >= l,
        })
        .map(|t| vec![t])
        .collect();
    TypicalProjector::from_parts(rho.dim(), n, whole_block_group(spectrum, n), types)
}

/// The fixed-rate union `Π_{H(·)≤R}` restricted to a declared eigenbasis:
/// retains every basis-diagonal type with entropy at most `R` bits.  It
/// compresses all sources diagonal in that basis with entropy below `R`.
pub fn jhhh_projector(basis: &Spectrum, n: usize, r: f64) -> Result<TypicalProjector, Error> {
    check_block_length(n)?;
    check_nonnegative(r, "rate")?;
    let dim = basis.dim();
    let types = enumerate_types(dim, n)?
        .into_iter()
        .filter(|t| t.entropy() <= r)
        .map(|t| vec![t])
        .collect();
    TypicalProjector::from_parts(dim, n, whole_block_group(basis.clone(), n), types)
}

/// The projector onto the highest-probability type classes of `ρ^⊗n`:
/// classes are ranked by per-sequence weight (descending, counts as a
/// deterministic tie-break) and included whole while the accumulated
/// dimension stays within `2^log2_dim_budget`.  This is the rank-limited
/// truncation code at type-class granularity; its trace never exceeds the
/// budget but may undershoot it by up to one class.
pub fn truncated_weight_projector(
    rho: &DensityOperator,
    n: usize,
    log2_dim_budget: f64,
) -> Result<TypicalProjector, Error> {
    check_block_length(n)?;
    check_nonnegative(log2_dim_budget, "dimension budget")?;
    let spectrum = rho.eig();
    let q: Vec<f64> = spectrum
        .eigenvalues()
        .iter()
        .map(|&v| v.clamp(0.0, 1.0))
        .collect();
    let mut types = enumerate_types(rho.dim(), n)?;
    types.sort_by(|s, t| {
        t.sequence_log2_weight(&q)
            .total_cmp(&s.sequence_log2_weight(&q))
            .then_with(|| t.counts().cmp(s.counts()))
    });
    let mut kept: Vec<Vec<TypeVector>> = Vec::new();
    let mut log2_total = f64::NEG_INFINITY;
    for t in types {
        let with_next = log_sum_exp([log2_total, t.log2_class_size()].into_iter());
        if with_next > log2_dim_budget + 1e-12 {
            break;
        }
        log2_total = with_next;
        kept.push(vec![t]);
    }
    TypicalProjector::from_parts(rho.dim(), n, whole_block_group(spectrum, n), kept)
}

/// The conditional variance-typical projector `Π_{V,W,δ}(xⁿ) =
/// ⊗_x Π^{I_x}_{V,W_x,δ}`: each letter's position block carries the
/// variance-typical projector of its output state with constant `δ`.
/// Captures mass ≥ `1 − a·d/δ²` from `W_{xⁿ}`.
pub fn conditional_variance_typical_projector(
    w: &CqChannel,
    xn: &[usize],
    delta: f64,
) -> Result<TypicalProjector, Error> {
    check_block_length(xn.len())?;
    check_nonnegative(delta, "variance-typical constant")?;
    if xn.iter().any(|&x| x >= w.alphabet_size()) {
        return Err(bad_argument("sequence letter outside the channel alphabet"));
    }
    let dim = w.output_dim();
    let mut groups: Vec<GroupSpectrum> = Vec::new();
    let mut per_group_types: Vec<Vec<TypeVector>> = Vec::new();
    for x in 0..w.alphabet_size() {
        let positions: Vec<usize> = xn
            .iter()
            .enumerate()
            .filter_map(|(i, &xi)| (xi == x).then_some(i))
            .collect();
        if positions.is_empty() {
            continue;
        }
        let block = positions.len();
        let spectrum = w.output(x).eig();
        let q: Vec<f64> = spectrum
            .eigenvalues()
            .iter()
            .map(|&v| v.clamp(0.0, 1.0))
            .collect();
        per_group_types.push(variance_window(&q, block, delta)?);
        groups.push(GroupSpectrum {
            positions,
            spectrum,
        });
    }
    per_group_types
        .iter()
        .try_fold(1u128, |acc, ts| acc.checked_mul(ts.len() as u128))
        .filter(|&c| c <= MAX_CLASSES)
        .ok_or_else(|| too_large("conditional variance-typical class enumeration"))?;
    let mut classes: Vec<Vec<TypeVector>> = vec![Vec::new()];
    for types in &per_group_types {
        let mut next = Vec::with_capacity(classes.len() * types.len());
        for class in &classes {
            for t in types {
                let mut extended = class.clone();
                extended.push(t.clone());
                next.push(extended);
            }
        }
        classes = next;
    }
    TypicalProjector::from_parts(dim, xn.len(), groups, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use quantum_objects::DensityOperator;

    fn diag(probs: &[f64]) -> DensityOperator {
        DensityOperator::from_classical(probs).unwrap()
    }

    #[test]
    fn variance_projector_trace_matches_the_class_set() {
        let rho = diag(&[0.5, 0.5]);
        let pi = variance_typical_projector(&rho, 4, 1.0).unwrap();
        assert_eq!(pi.trace_exact(), Some(14));
        let dense = pi.materialize().unwrap();
        assert!((dense.trace() - 14.0).abs() < 1e-9);
    }

    #[test]
    fn dense_materialization_is_idempotent_and_hermitian() {
        let rho = diag(&[0.7, 0.3]);
        let pi = variance_typical_projector(&rho, 3, 1.2).unwrap();
        let dense = pi.materialize().unwrap();
        let product =
            HermitianMatrix::from_symmetrized(dense.matrix().matmul(dense.matrix()));
        assert!(product.max_abs_diff(&dense) < 1e-9);
        assert!(dense.matrix().hermiticity_residual() < 1e-12);
    }

    #[test]
    fn exact_type_projector_handles_unrealizable_types() {
        // Eigenvalues (2/3, 1/3) are not a type with denominator 4.
        let nu = diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let pi = exact_type_projector(&nu, 4).unwrap();
        assert!(pi.is_empty());
        assert_eq!(pi.trace(), 0.0);
        assert_eq!(pi.mass(), 0.0);
        // With denominator 3 the type is realizable: 3!/(2!·1!) = 3 sequences.
        let pi3 = exact_type_projector(&nu, 3).unwrap();
        assert_eq!(pi3.trace_exact(), Some(3));
    }

    #[test]
    fn maximally_mixed_exact_type_on_two_qubits() {
        let nu = diag(&[0.5, 0.5]);
        let pi = exact_type_projector(&nu, 2).unwrap();
        assert_eq!(pi.trace_exact(), Some(2));
        let dense = pi.materialize().unwrap();
        assert!((dense.trace() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bounded_entropy_projector_splits_the_whole_space() {
        let rho = diag(&[0.8, 0.2]);
        let n = 6;
        let low = bounded_entropy_projector(&rho, n, 0.5, Direction::AtMost).unwrap();
        let high = bounded_entropy_projector(&rho, n, 0.5, Direction::AtLeast).unwrap();
        // No type of denominator 6 has entropy exactly 0.5, so the two
        // halves partition all 2^6 sequences.
        let total = low.trace_exact().unwrap() + high.trace_exact().unwrap();
        assert_eq!(total, 64);
        // Threshold at log2(d) keeps everything on the ≤ side.
        let all = bounded_entropy_projector(&rho, n, 1.0, Direction::AtMost).unwrap();
        assert_eq!(all.trace_exact(), Some(64));
    }

    #[test]
    fn jhhh_zero_rate_keeps_only_constant_sequences() {
        let rho = diag(&[0.6, 0.4]);
        let pi = jhhh_projector(&rho.eig(), 5, 0.0).unwrap();
        assert_eq!(pi.trace_exact(), Some(2));
        assert!(pi.contains(&[0, 0, 0, 0, 0]));
        assert!(pi.contains(&[1, 1, 1, 1, 1]));
        assert!(!pi.contains(&[0, 1, 0, 0, 0]));
    }

    #[test]
    fn entropy_typical_projector_on_identical_pure_states_keeps_one_sequence() {
        let pure = DensityOperator::from_pure(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let rhos = vec![pure; 5];
        let pi = entropy_typical_projector(&rhos, 0.5).unwrap();
        assert_eq!(pi.trace_exact(), Some(1));
        assert!((pi.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_typical_projector_groups_equal_states() {
        let a = diag(&[0.7, 0.3]);
        let b = diag(&[0.5, 0.5]);
        let rhos = vec![a.clone(), b.clone(), a.clone(), b.clone(), a];
        let pi = entropy_typical_projector(&rhos, 1.5).unwrap();
        assert_eq!(pi.groups().len(), 2);
        let sizes: Vec<usize> = pi.groups().iter().map(|g| g.len()).collect();
        assert!(sizes.contains(&3) && sizes.contains(&2));
        // Mass under the constructing states obeys Chebyshev with
        // K = max{(log2 3)², (log2 d)²}.
        let bound = 1.0 - crate::entropy_window_variance_bound(2) / (1.5 * 1.5);
        assert!(pi.mass() >= bound - 1e-9);
    }

    #[test]
    fn conditional_exact_type_projector_requires_per_letter_realizability() {
        let v0 = diag(&[0.5, 0.5]);
        let v1 = diag(&[1.0, 0.0]);
        // Letter 0 occupies two positions (type (1,1) realizable); letter 1
        // occupies three (type (3,0) realizable).
        let pi = exact_cond_type_projector(&[v0.clone(), v1.clone()], &[0, 1, 1, 0, 1]).unwrap();
        assert_eq!(pi.trace_exact(), Some(2));
        // Letter 0 on three positions needs 3·(1/2) counts — unrealizable.
        let empty = exact_cond_type_projector(&[v0, v1], &[0, 0, 0, 1, 1]).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn per_position_mass_agrees_with_the_homogeneous_formula() {
        let rho = diag(&[0.6, 0.4]);
        let pi = variance_typical_projector(&rho, 6, 1.0).unwrap();
        let per_position = vec![vec![0.6, 0.4]; 6];
        let het = pi.mass_per_position(&per_position).unwrap();
        assert!((het - pi.mass()).abs() < 1e-12);
    }

    #[test]
    fn json_export_round_trips_through_a_parser() {
        let rho = diag(&[0.5, 0.5]);
        let pi = exact_type_projector(&rho, 2).unwrap();
        let json = pi.to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["dim"], 2);
        assert_eq!(value["n"], 2);
        assert_eq!(value["classes"][0][0]["counts"][0], 1);
    }

    #[test]
    fn materialization_budget_is_enforced() {
        let rho = diag(&[0.5, 0.5]);
        let pi = variance_typical_projector(&rho, 20, 1.0).unwrap();
        assert!(matches!(pi.materialize(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn truncated_weight_projector_keeps_the_heaviest_classes() {
        // q = (0.8, 0.2), n = 4: per-sequence weights order classes by the
        // count of the light letter: k=0 (1 seq), k=1 (4), k=2 (6), ...
        let rho = diag(&[0.8, 0.2]);
        let pi = truncated_weight_projector(&rho, 4, 5.0f64.log2()).unwrap();
        // Budget 5 admits k=0 and k=1 (1 + 4 = 5); k=2 would add 6 more.
        assert_eq!(pi.trace_exact(), Some(5));
        for seq in [[0, 0, 0, 0], [0, 1, 0, 0], [1, 0, 0, 0]] {
            assert!(pi.contains(&seq));
        }
        assert!(!pi.contains(&[1, 1, 0, 0]));
        // Mass is the binomial head P(k ≤ 1).
        let expect = 0.8f64.powi(4) + 4.0 * 0.8f64.powi(3) * 0.2;
        assert!((pi.mass() - expect).abs() < 1e-12);
        // A zero budget keeps nothing: even the heaviest class has size 1,
        // and log2(1) = 0 fits, so exactly the all-heavy sequence remains.
        let tiny = truncated_weight_projector(&rho, 4, 0.0).unwrap();
        assert_eq!(tiny.trace_exact(), Some(1));
        assert!(tiny.contains(&[0, 0, 0, 0]));
    }
}
