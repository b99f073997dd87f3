//! D numbers: mass assignments over frames whose elements need not be
//! mutually exclusive, with an explicit incompleteness symbol `X`.
//!
//! A focal set is a subset of `Θ ∪ {X}`. Non-exclusivity between frame
//! elements is described by a symmetric matrix over the singletons of
//! `Θ ∪ {X}` and extended to arbitrary sets by taking the maximum over
//! element pairs. Two D numbers are combined with the exclusive conflict
//! redistribution (ECR) rule: the product of two disjoint focal sets is
//! split between their union (in proportion to how non-exclusive they
//! are) and the conflict that gets normalized away. Several D numbers
//! about the same event are fused by weighted averaging followed by
//! repeated self-combination (WAC).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::dst::{self, prune_and_normalize, same_frame, sorted_sum, sum_buckets, Bpa};
use crate::error::{Error, Result};
use crate::fuzzy::{non_exclusive_degree, TriangularFuzzyNumber};

/// Label reserved for the incompleteness symbol.
pub const X_LABEL: &str = "X";

/// Largest number of frame labels (power-set tables reach 2^17 with `X`).
pub const MAX_THETA: usize = 16;

const X_BIT: u32 = 1 << MAX_THETA;

/// Mass tolerance for completeness checks.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Conflicts this close to one make ECR undefined.
pub const CONFLICT_LIMIT: f64 = 1.0 - 1e-12;

/// Frame `Θ` of possibly non-exclusive labels, plus the implicit `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DFrame {
    theta: Vec<String>,
}

impl DFrame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let theta: Vec<String> = labels.into_iter().map(Into::into).collect();
        if theta.is_empty() {
            return Err(Error::InvalidFrame("frame is empty".into()));
        }
        if theta.len() > MAX_THETA {
            return Err(Error::InvalidFrame(format!(
                "{} labels exceed the maximum of {MAX_THETA}",
                theta.len()
            )));
        }
        for (i, l) in theta.iter().enumerate() {
            if l == X_LABEL {
                return Err(Error::InvalidFrame(format!("`{X_LABEL}` is reserved")));
            }
            if theta[..i].contains(l) {
                return Err(Error::InvalidFrame(format!("duplicate label `{l}`")));
            }
        }
        Ok(Self { theta })
    }

    pub fn labels(&self) -> &[String] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.theta.iter().position(|l| l == label)
    }

    /// `Θ` without `X`.
    pub fn theta(&self) -> DFocalSet {
        DFocalSet((1 << self.len()) - 1)
    }

    /// `Θ ∪ {X}`.
    pub fn everything(&self) -> DFocalSet {
        DFocalSet(self.theta().0 | X_BIT)
    }

    pub fn singleton(&self, index: usize) -> DFocalSet {
        debug_assert!(index < self.len());
        DFocalSet(1 << index)
    }

    /// Parses a set of labels; `"X"` denotes the incompleteness symbol.
    pub fn focal<S: AsRef<str>>(&self, labels: &[S]) -> Result<DFocalSet> {
        let mut bits = 0;
        for l in labels {
            let l = l.as_ref();
            if l == X_LABEL {
                bits |= X_BIT;
            } else {
                let i = self.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
                bits |= 1 << i;
            }
        }
        Ok(DFocalSet(bits))
    }

    pub fn contains(&self, s: DFocalSet) -> bool {
        s.0 & !self.everything().0 == 0
    }

    /// Labels of `s` in frame order with `X` last.
    pub fn focal_labels(&self, s: DFocalSet) -> Vec<&str> {
        let mut out: Vec<&str> = s.theta_indices().map(|i| self.theta[i].as_str()).collect();
        if s.contains_x() {
            out.push(X_LABEL);
        }
        out
    }

    pub fn render(&self, s: DFocalSet) -> String {
        format!("{{{}}}", self.focal_labels(s).join(","))
    }
}

/// A subset of `Θ ∪ {X}` as a bitset: bit `i` for the i-th label, one
/// fixed high bit for `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DFocalSet(u32);

impl DFocalSet {
    pub const EMPTY: DFocalSet = DFocalSet(0);
    pub const X: DFocalSet = DFocalSet(X_BIT);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains_x(self) -> bool {
        self.0 & X_BIT != 0
    }

    /// The part of the set inside `Θ`.
    pub fn theta_part(self) -> DFocalSet {
        DFocalSet(self.0 & !X_BIT)
    }

    /// Number of `Θ` labels in the set (`X` not counted).
    pub fn theta_len(self) -> usize {
        self.theta_part().0.count_ones() as usize
    }

    pub fn union(self, other: DFocalSet) -> DFocalSet {
        DFocalSet(self.0 | other.0)
    }

    pub fn intersection(self, other: DFocalSet) -> DFocalSet {
        DFocalSet(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: DFocalSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn theta_indices(self) -> impl Iterator<Item = usize> {
        (0..MAX_THETA).filter(move |i| self.0 >> i & 1 == 1)
    }
}

/// Symmetric non-exclusive degrees between the singletons of `Θ ∪ {X}`.
///
/// Row/column `n` (one past the last label) belongs to `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonExclusivityMatrix {
    frame: Arc<DFrame>,
    base: Vec<f64>,
}

impl NonExclusivityMatrix {
    /// Builds a matrix from `(n+1) × (n+1)` rows ordered as the frame
    /// labels followed by `X`.
    pub fn new(frame: Arc<DFrame>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = frame.len() + 1;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidMatrix(format!("expected a {dim}×{dim} matrix")));
        }
        for i in 0..dim {
            if rows[i][i] != 1.0 {
                return Err(Error::InvalidMatrix(format!("diagonal entry {i} is not 1")));
            }
            for j in 0..dim {
                let v = rows[i][j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidMatrix(format!("entry ({i},{j}) = {v} outside [0,1]")));
                }
                if v != rows[j][i] {
                    return Err(Error::InvalidMatrix(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(Self {
            frame,
            base: rows.into_iter().flatten().collect(),
        })
    }

    /// Fully exclusive frame: identity matrix. D numbers then behave as
    /// classical BPAs.
    pub fn exclusive(frame: Arc<DFrame>) -> Self {
        let dim = frame.len() + 1;
        let base = (0..dim * dim).map(|k| if k / dim == k % dim { 1.0 } else { 0.0 }).collect();
        Self { frame, base }
    }

    pub fn frame(&self) -> &Arc<DFrame> {
        &self.frame
    }

    fn dim(&self) -> usize {
        self.frame.len() + 1
    }

    /// Degree between singletons by index; index `len()` is `X`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.base[i * self.dim() + j]
    }

    /// Exclusive degree `1 − u`.
    pub fn exclusive_degree(&self, i: usize, j: usize) -> f64 {
        1.0 - self.get(i, j)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.base.chunks(self.dim()).map(<[f64]>::to_vec).collect()
    }

    fn indices(&self, s: DFocalSet) -> impl Iterator<Item = usize> {
        let x = s.contains_x().then_some(self.frame.len());
        s.theta_indices().chain(x)
    }

    /// Non-exclusive degree between two focal sets: 1 if they meet,
    /// otherwise the largest degree over their element pairs.
    pub fn degree(&self, b: DFocalSet, c: DFocalSet) -> Result<f64> {
        if !self.frame.contains(b) || !self.frame.contains(c) {
            return Err(Error::FrameMismatch);
        }
        Ok(self.degree_unchecked(b, c))
    }

    fn degree_unchecked(&self, b: DFocalSet, c: DFocalSet) -> f64 {
        if !b.intersection(c).is_empty() {
            return 1.0;
        }
        let mut best = 0.0_f64;
        for i in self.indices(b) {
            for j in self.indices(c) {
                best = best.max(self.get(i, j));
            }
        }
        best
    }

    pub fn to_document(&self) -> MatrixDocument {
        let mut labels: Vec<String> = self.frame.labels().to_vec();
        labels.push(X_LABEL.to_string());
        MatrixDocument {
            labels,
            rows: self.rows(),
        }
    }

    /// Reads a matrix document. `X` may appear at any position in the label
    /// list; if it is absent, `X` is taken to be exclusive of everything.
    pub fn from_document(doc: &MatrixDocument) -> Result<Self> {
        let n = doc.labels.len();
        if doc.rows.len() != n || doc.rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "{n} labels need a {n}×{n} matrix"
            )));
        }
        let x_pos = doc.labels.iter().position(|l| l == X_LABEL);
        let theta: Vec<&String> = doc.labels.iter().filter(|l| *l != X_LABEL).collect();
        if theta.len() + usize::from(x_pos.is_some()) != n {
            return Err(Error::InvalidMatrix(format!("`{X_LABEL}` listed more than once")));
        }
        let frame = Arc::new(DFrame::new(theta.iter().map(|s| s.as_str()))?);
        // Position in the document for each frame index, X last.
        let order: Vec<Option<usize>> = doc
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| *l != X_LABEL)
            .map(|(k, _)| Some(k))
            .chain(std::iter::once(x_pos))
            .collect();
        let rows = order
            .iter()
            .map(|ri| {
                order
                    .iter()
                    .map(|ci| match (ri, ci) {
                        (Some(r), Some(c)) => doc.rows[*r][*c],
                        (None, None) => 1.0,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect();
        Self::new(frame, rows)
    }
}

/// Serialized non-exclusivity matrix: label list plus dense rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Non-exclusive degree between two focal sets under `m`.
pub fn extend_nonexcl(m: &NonExclusivityMatrix, b: DFocalSet, c: DFocalSet) -> Result<f64> {
    m.degree(b, c)
}

/// Matrix of area-ratio degrees between the fuzzy numbers of a linguistic
/// scale. `X` is taken as exclusive of every label.
pub fn build_nonexcl_from_scale(
    scale: &IndexMap<String, TriangularFuzzyNumber>,
) -> Result<NonExclusivityMatrix> {
    let frame = Arc::new(DFrame::new(scale.keys().cloned())?);
    let tfns: Vec<&TriangularFuzzyNumber> = scale.values().collect();
    let n = tfns.len();
    let mut rows = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..=n {
        rows[i][i] = 1.0;
    }
    for i in 0..n {
        for j in i + 1..n {
            let u = non_exclusive_degree(tfns[i], tfns[j])?;
            rows[i][j] = u;
            rows[j][i] = u;
        }
    }
    NonExclusivityMatrix::new(frame, rows)
}

/// A D number after `X` augmentation: masses over nonempty subsets of
/// `Θ ∪ {X}` summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DNumber {
    frame: Arc<DFrame>,
    masses: BTreeMap<DFocalSet, f64>,
}

fn collect_masses<I>(frame: &DFrame, masses: I) -> Result<BTreeMap<DFocalSet, f64>>
where
    I: IntoIterator<Item = (DFocalSet, f64)>,
{
    let mut out = BTreeMap::new();
    for (s, m) in masses {
        if !frame.contains(s) {
            return Err(Error::FrameMismatch);
        }
        if !m.is_finite() || m < 0.0 {
            return Err(Error::NegativeMass {
                focal: frame.render(s),
                mass: m,
            });
        }
        if m == 0.0 {
            continue;
        }
        if s.is_empty() {
            return Err(Error::EmptyFocal);
        }
        *out.entry(s).or_insert(0.0) += m;
    }
    Ok(out)
}

impl DNumber {
    /// Builds a D number whose masses, `X`-sets included, already sum to 1.
    pub fn new<I>(frame: Arc<DFrame>, masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DFocalSet, f64)>,
    {
        let masses = collect_masses(&frame, masses)?;
        let total: f64 = masses.values().sum();
        if total > 1.0 + MASS_TOLERANCE {
            return Err(Error::MassOverflow { total });
        }
        if total < 1.0 - MASS_TOLERANCE {
            return Err(Error::InvalidMass(format!(
                "masses sum to {total}; use augment_with_x for incomplete information"
            )));
        }
        Ok(Self { frame, masses })
    }

    /// Completes a partial assignment over subsets of `Θ` by giving the
    /// missing mass to `{X}`.
    pub fn augment_with_x<I>(frame: Arc<DFrame>, partial: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DFocalSet, f64)>,
    {
        let mut masses = collect_masses(&frame, partial)?;
        if let Some(s) = masses.keys().find(|s| s.contains_x()) {
            return Err(Error::InvalidMass(format!(
                "{} already contains {X_LABEL}",
                frame.render(*s)
            )));
        }
        let total: f64 = masses.values().sum();
        if total > 1.0 + MASS_TOLERANCE {
            return Err(Error::MassOverflow { total });
        }
        let deficit = 1.0 - total;
        if deficit > MASS_TOLERANCE {
            masses.insert(DFocalSet::X, deficit);
        }
        Ok(Self { frame, masses })
    }

    /// The classical BPA `m` seen as an information-complete D number.
    pub fn from_bpa(m: &Bpa) -> Result<Self> {
        let frame = Arc::new(DFrame::new(m.frame().labels().iter().cloned())?);
        let masses = m
            .focal_sets()
            .map(|(s, v)| (DFocalSet(s.0 as u32), v))
            .collect::<Vec<_>>();
        Self::new(frame, masses)
    }

    pub fn frame(&self) -> &Arc<DFrame> {
        &self.frame
    }

    pub fn mass(&self, s: DFocalSet) -> f64 {
        self.masses.get(&s).copied().unwrap_or(0.0)
    }

    pub fn focal_sets(&self) -> impl Iterator<Item = (DFocalSet, f64)> + '_ {
        self.masses.iter().map(|(s, m)| (*s, *m))
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.values().sum()
    }

    /// Mass committed to subsets of `Θ` (sets without `X`).
    pub fn q(&self) -> f64 {
        self.focal_sets()
            .filter(|(s, _)| !s.contains_x())
            .map(|(_, m)| m)
            .sum()
    }

    pub fn is_information_complete(&self) -> bool {
        (self.q() - 1.0).abs() <= MASS_TOLERANCE
    }

    /// Belief: total mass of focal sets contained in `a`.
    pub fn bel(&self, a: DFocalSet) -> Result<f64> {
        if !self.frame.contains(a) {
            return Err(Error::FrameMismatch);
        }
        Ok(self
            .focal_sets()
            .filter(|(b, _)| b.is_subset_of(a))
            .map(|(_, m)| m)
            .sum())
    }

    /// Plausibility: every focal set contributes its mass scaled by its
    /// non-exclusive degree with `a`.
    pub fn pl(&self, m: &NonExclusivityMatrix, a: DFocalSet) -> Result<f64> {
        if !same_frame(&self.frame, &m.frame) {
            return Err(Error::FrameMismatch);
        }
        let mut total = 0.0;
        for (b, v) in self.focal_sets() {
            total += m.degree(b, a)? * v;
        }
        Ok(total)
    }

    /// Pignistic probabilities over `Θ`.
    ///
    /// Each focal mass is split evenly over its `Θ` labels. Focal sets that
    /// contain `X` carry no betting commitment and are left out; the rest
    /// is renormalized by `Q(D)`.
    pub fn ppt(&self) -> Result<IndexMap<String, f64>> {
        let q = self.q();
        if q <= dst::PRUNE_THRESHOLD {
            return Err(Error::NoInformation);
        }
        let mut probs = vec![0.0; self.frame.len()];
        for (s, m) in self.focal_sets().filter(|(s, _)| !s.contains_x()) {
            let share = m / s.theta_len() as f64;
            for i in s.theta_indices() {
                probs[i] += share;
            }
        }
        Ok(self
            .frame
            .labels()
            .iter()
            .cloned()
            .zip(probs.into_iter().map(|p| p / q))
            .collect())
    }

    pub fn to_records(&self) -> Vec<FocalMass> {
        self.focal_sets()
            .map(|(s, m)| FocalMass {
                focal: self.frame.focal_labels(s).into_iter().map(String::from).collect(),
                mass: m,
            })
            .collect()
    }

    /// Reads records. Without any `X` set the records are treated as a
    /// partial assignment and completed with `{X}`.
    pub fn from_records(frame: Arc<DFrame>, records: &[FocalMass]) -> Result<Self> {
        let pairs = records
            .iter()
            .map(|r| Ok((frame.focal(&r.focal)?, r.mass)))
            .collect::<Result<Vec<_>>>()?;
        if pairs.iter().any(|(s, _)| s.contains_x()) {
            Self::new(frame, pairs)
        } else {
            Self::augment_with_x(frame, pairs)
        }
    }

    /// Focal sets sorted by descending mass, ties in set order.
    pub fn sorted_by_mass(&self) -> Vec<(DFocalSet, f64)> {
        let mut v: Vec<_> = self.focal_sets().collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }
}

impl fmt::Display for DNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .focal_sets()
            .map(|(s, m)| format!("{}: {m:.4}", self.frame.render(s)))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Serialized focal element: `{ "focal": [labels], "mass": m }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocalMass {
    pub focal: Vec<String>,
    pub mass: f64,
}

/// One cell of the intersection/union table of an ECR combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductCell {
    pub left: DFocalSet,
    pub right: DFocalSet,
    /// Set receiving `routed`: the intersection, or the union for disjoint
    /// operands.
    pub target: DFocalSet,
    /// Mass sent to `target`.
    pub routed: f64,
    /// Mass sent to the conflict; zero unless the operands are disjoint.
    pub conflict: f64,
}

impl ProductCell {
    pub fn is_union(&self) -> bool {
        self.left.intersection(self.right).is_empty()
    }
}

/// Every pairwise product of two D numbers, routed as the ECR rule
/// prescribes. Rows follow `d1`'s focal order and columns `d2`'s.
pub fn ecr_product_table(
    d1: &DNumber,
    d2: &DNumber,
    m: &NonExclusivityMatrix,
) -> Result<Vec<ProductCell>> {
    if !same_frame(&d1.frame, &d2.frame) || !same_frame(&d1.frame, &m.frame) {
        return Err(Error::FrameMismatch);
    }
    let mut cells = Vec::with_capacity(d1.len() * d2.len());
    for (b, x) in d1.focal_sets() {
        for (c, y) in d2.focal_sets() {
            let p = x * y;
            let meet = b.intersection(c);
            let cell = if meet.is_empty() {
                let u = m.degree_unchecked(b, c);
                ProductCell {
                    left: b,
                    right: c,
                    target: b.union(c),
                    routed: u * p,
                    conflict: (1.0 - u) * p,
                }
            } else {
                ProductCell {
                    left: b,
                    right: c,
                    target: meet,
                    routed: p,
                    conflict: 0.0,
                }
            };
            cells.push(cell);
        }
    }
    Ok(cells)
}

/// Result of one ECR combination together with its conflict coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct EcrOutcome {
    pub combined: DNumber,
    pub conflict: f64,
}

/// ECR combination returning the conflict coefficient `K_D` as well.
pub fn ecr_combine_with_conflict(
    d1: &DNumber,
    d2: &DNumber,
    m: &NonExclusivityMatrix,
) -> Result<EcrOutcome> {
    let cells = ecr_product_table(d1, d2, m)?;
    let mut buckets: BTreeMap<DFocalSet, Vec<f64>> = BTreeMap::new();
    let mut conflicts = Vec::new();
    for cell in cells {
        buckets.entry(cell.target).or_default().push(cell.routed);
        if cell.conflict != 0.0 {
            conflicts.push(cell.conflict);
        }
    }
    let k = sorted_sum(conflicts);
    if k >= CONFLICT_LIMIT {
        return Err(Error::TotalExclusiveConflict { conflict: k });
    }
    let mut masses = sum_buckets(buckets);
    for v in masses.values_mut() {
        *v /= 1.0 - k;
    }
    prune_and_normalize(&mut masses);
    Ok(EcrOutcome {
        combined: DNumber {
            frame: Arc::clone(&d1.frame),
            masses,
        },
        conflict: k,
    })
}

/// Combines two D numbers with the ECR rule. Commutative, not associative.
pub fn ecr_combine(d1: &DNumber, d2: &DNumber, m: &NonExclusivityMatrix) -> Result<DNumber> {
    ecr_combine_with_conflict(d1, d2, m).map(|o| o.combined)
}

/// Weighted average `Σ wᵢ Dᵢ(B)` of D numbers on one frame.
pub fn weighted_average(ds: &[DNumber], ws: &[f64]) -> Result<DNumber> {
    let first = ds.first().ok_or(Error::EmptyInput)?;
    if ds.len() != ws.len() {
        return Err(Error::LengthMismatch {
            left: ds.len(),
            right: ws.len(),
        });
    }
    if ws.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
    }
    let sum: f64 = ws.iter().sum();
    if (sum - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::WeightSumInvalid { sum });
    }
    if ds.iter().any(|d| !same_frame(&d.frame, &first.frame)) {
        return Err(Error::FrameMismatch);
    }
    let mut masses: BTreeMap<DFocalSet, f64> = BTreeMap::new();
    for (d, w) in ds.iter().zip(ws) {
        for (s, v) in d.focal_sets() {
            *masses.entry(s).or_insert(0.0) += w * v;
        }
    }
    masses.retain(|_, v| *v > 0.0);
    Ok(DNumber {
        frame: Arc::clone(&first.frame),
        masses,
    })
}

/// Left-folds `n` copies of `d` with the ECR rule: `((d ⊙ d) ⊙ d) ⋯`.
pub fn self_combine(d: &DNumber, n: usize, m: &NonExclusivityMatrix) -> Result<DNumber> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut acc = d.clone();
    for _ in 1..n {
        acc = ecr_combine(&acc, d, m)?;
    }
    Ok(acc)
}

/// Weighted average combination of `n` D numbers: average them, then
/// ECR-combine `n` copies of the average.
pub fn wac_combine(ds: &[DNumber], ws: &[f64], m: &NonExclusivityMatrix) -> Result<DNumber> {
    let avg = weighted_average(ds, ws)?;
    if !same_frame(&avg.frame, &m.frame) {
        return Err(Error::FrameMismatch);
    }
    self_combine(&avg, ds.len(), m)
}

/// Relative frequencies of equally important linguistic votes as
/// singleton masses.
pub fn from_linguistic_votes<S: AsRef<str>>(votes: &[S], frame: &Arc<DFrame>) -> Result<DNumber> {
    if votes.is_empty() {
        return Err(Error::EmptyVotes);
    }
    let mut counts: BTreeMap<DFocalSet, usize> = BTreeMap::new();
    for v in votes {
        let v = v.as_ref();
        let i = frame.index_of(v).ok_or_else(|| Error::UnknownLabel(v.to_string()))?;
        *counts.entry(frame.singleton(i)).or_insert(0) += 1;
    }
    let n = votes.len() as f64;
    Ok(DNumber {
        frame: Arc::clone(frame),
        masses: counts.into_iter().map(|(s, c)| (s, c as f64 / n)).collect(),
    })
}

/// Like [`from_linguistic_votes`] with one importance weight per voter.
pub fn from_weighted_votes<S: AsRef<str>>(
    votes: &[S],
    weights: &[f64],
    frame: &Arc<DFrame>,
) -> Result<DNumber> {
    if votes.is_empty() {
        return Err(Error::EmptyVotes);
    }
    if votes.len() != weights.len() {
        return Err(Error::LengthMismatch {
            left: votes.len(),
            right: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights("voter weights must be finite and non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidWeights("voter weights sum to zero".into()));
    }
    let mut masses: BTreeMap<DFocalSet, f64> = BTreeMap::new();
    for (v, w) in votes.iter().zip(weights) {
        let v = v.as_ref();
        let i = frame.index_of(v).ok_or_else(|| Error::UnknownLabel(v.to_string()))?;
        *masses.entry(frame.singleton(i)).or_insert(0.0) += w / total;
    }
    masses.retain(|_, m| *m > 0.0);
    Ok(DNumber {
        frame: Arc::clone(frame),
        masses,
    })
}
