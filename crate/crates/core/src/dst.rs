//! Classical Dempster–Shafer theory over exclusive frames.
//!
//! Besides being usable on its own, this module is the reference that the
//! D numbers machinery must collapse to when every frame element is fully
//! exclusive and no mass is missing.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest frame a [`Subset`] bitset can address.
pub const MAX_FRAME_SIZE: usize = 64;

/// Masses below this are dropped after combination.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

pub(crate) const MASS_TOLERANCE: f64 = 1e-9;

/// Ordered set of mutually exclusive hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Vec<String>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidFrame("frame is empty".into()));
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::InvalidFrame(format!(
                "{} labels exceed the maximum of {MAX_FRAME_SIZE}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidFrame(format!("duplicate label `{l}`")));
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Ω itself.
    pub fn full(&self) -> Subset {
        Subset(mask(self.len()))
    }

    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        let mut bits = 0u64;
        for l in labels {
            let l = l.as_ref();
            let i = self.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            bits |= 1 << i;
        }
        Ok(Subset(bits))
    }

    pub fn singleton(&self, index: usize) -> Subset {
        debug_assert!(index < self.len());
        Subset(1 << index)
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.0 & !mask(self.len()) == 0
    }

    pub fn complement(&self, s: Subset) -> Subset {
        Subset(!s.0 & mask(self.len()))
    }

    pub fn subset_labels(&self, s: Subset) -> Vec<&str> {
        s.indices().map(|i| self.labels[i].as_str()).collect()
    }

    pub fn render(&self, s: Subset) -> String {
        format!("{{{}}}", self.subset_labels(s).join(","))
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of a [`Frame`], as a bitset over its element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn contains_index(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains_index(*i))
    }
}

/// A basic probability assignment: focal sets with positive mass summing
/// to one, never on the empty set.
#[derive(Debug, Clone, PartialEq)]
pub struct Bpa {
    frame: Arc<Frame>,
    masses: BTreeMap<Subset, f64>,
}

impl Bpa {
    /// Validates and builds a BPA. Zero masses are dropped and repeated
    /// subsets are merged.
    pub fn new<I>(frame: Arc<Frame>, masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        let mut out: BTreeMap<Subset, f64> = BTreeMap::new();
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
        let total: f64 = out.values().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMass(format!("masses sum to {total}, expected 1")));
        }
        if let Some((s, m)) = out.iter().find(|(_, m)| **m > 1.0 + MASS_TOLERANCE) {
            return Err(Error::InvalidMass(format!("mass {m} on {} exceeds 1", frame.render(*s))));
        }
        Ok(Self { frame, masses: out })
    }

    /// Ω with mass 1.
    pub fn vacuous(frame: Arc<Frame>) -> Self {
        let full = frame.full();
        Self {
            frame,
            masses: BTreeMap::from([(full, 1.0)]),
        }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn mass(&self, s: Subset) -> f64 {
        self.masses.get(&s).copied().unwrap_or(0.0)
    }

    pub fn focal_sets(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.masses.iter().map(|(s, m)| (*s, *m))
    }

    fn check_subset(&self, a: Subset) -> Result<()> {
        if self.frame.contains(a) {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    /// Belief: total mass of focal sets contained in `a`.
    pub fn bel(&self, a: Subset) -> Result<f64> {
        self.check_subset(a)?;
        Ok(self
            .focal_sets()
            .filter(|(b, _)| b.is_subset_of(a))
            .map(|(_, m)| m)
            .sum())
    }

    /// Plausibility: total mass of focal sets meeting `a`.
    pub fn pl(&self, a: Subset) -> Result<f64> {
        self.check_subset(a)?;
        Ok(self
            .focal_sets()
            .filter(|(b, _)| !b.intersection(a).is_empty())
            .map(|(_, m)| m)
            .sum())
    }

    /// Pignistic probability: each focal mass split evenly over its
    /// elements.
    pub fn ppt(&self) -> IndexMap<String, f64> {
        let mut probs = vec![0.0; self.frame.len()];
        for (s, m) in self.focal_sets() {
            let share = m / s.len() as f64;
            for i in s.indices() {
                probs[i] += share;
            }
        }
        self.frame.labels().iter().cloned().zip(probs).collect()
    }

    pub fn to_records(&self) -> Vec<SubsetMass> {
        self.focal_sets()
            .map(|(s, m)| SubsetMass {
                subset: self.frame.subset_labels(s).into_iter().map(String::from).collect(),
                mass: m,
            })
            .collect()
    }

    pub fn from_records(frame: Arc<Frame>, records: &[SubsetMass]) -> Result<Self> {
        let pairs = records
            .iter()
            .map(|r| Ok((frame.subset(&r.subset)?, r.mass)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, pairs)
    }
}

impl fmt::Display for Bpa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .focal_sets()
            .map(|(s, m)| format!("{}: {m:.4}", self.frame.render(s)))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Serialized focal element: `{ "subset": [labels], "mass": m }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetMass {
    pub subset: Vec<String>,
    pub mass: f64,
}

pub(crate) fn same_frame<T: PartialEq>(a: &Arc<T>, b: &Arc<T>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Sums each bucket of contributions in ascending order, so the result
/// depends only on the multiset of terms and not on the order they were
/// produced in.
pub(crate) fn sum_buckets<K: Ord>(buckets: BTreeMap<K, Vec<f64>>) -> BTreeMap<K, f64> {
    buckets
        .into_iter()
        .map(|(k, mut v)| {
            v.sort_by(f64::total_cmp);
            (k, v.into_iter().sum())
        })
        .collect()
}

pub(crate) fn sorted_sum(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v.into_iter().sum()
}

/// Drops masses under [`PRUNE_THRESHOLD`] and rescales the rest to sum
/// to one.
pub(crate) fn prune_and_normalize<K: Ord + Copy>(masses: &mut BTreeMap<K, f64>) {
    masses.retain(|_, m| *m >= PRUNE_THRESHOLD);
    let total = sorted_sum(masses.values().copied().collect());
    if total > 0.0 {
        for m in masses.values_mut() {
            *m /= total;
        }
    }
}

/// Dempster's rule of combination.
pub fn dempster_combine(m1: &Bpa, m2: &Bpa) -> Result<Bpa> {
    if !same_frame(&m1.frame, &m2.frame) {
        return Err(Error::FrameMismatch);
    }
    let mut buckets: BTreeMap<Subset, Vec<f64>> = BTreeMap::new();
    let mut conflict = Vec::new();
    for (b, x) in m1.focal_sets() {
        for (c, y) in m2.focal_sets() {
            let a = b.intersection(c);
            let p = x * y;
            if a.is_empty() {
                conflict.push(p);
            } else {
                buckets.entry(a).or_default().push(p);
            }
        }
    }
    let k = sorted_sum(conflict);
    if k >= 1.0 - PRUNE_THRESHOLD {
        return Err(Error::TotalConflict { conflict: k });
    }
    let mut masses = sum_buckets(buckets);
    for m in masses.values_mut() {
        *m /= 1.0 - k;
    }
    prune_and_normalize(&mut masses);
    Ok(Bpa {
        frame: Arc::clone(&m1.frame),
        masses,
    })
}

/// Conflict coefficient `K` of two BPAs.
pub fn conflict(m1: &Bpa, m2: &Bpa) -> Result<f64> {
    if !same_frame(&m1.frame, &m2.frame) {
        return Err(Error::FrameMismatch);
    }
    let terms = m1
        .focal_sets()
        .flat_map(|(b, x)| {
            m2.focal_sets()
                .filter(move |(c, _)| b.intersection(*c).is_empty())
                .map(move |(_, y)| x * y)
        })
        .collect();
    Ok(sorted_sum(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn abc() -> Arc<Frame> {
        Arc::new(Frame::new(["a", "b", "c"]).unwrap())
    }

    fn bpa(frame: &Arc<Frame>, items: &[(&[&str], f64)]) -> Bpa {
        Bpa::new(
            Arc::clone(frame),
            items.iter().map(|(s, m)| (frame.subset(s).unwrap(), *m)),
        )
        .unwrap()
    }

    #[test]
    fn frame_validation() {
        assert!(Frame::new(Vec::<String>::new()).is_err());
        assert!(Frame::new(["a", "a"]).is_err());
        assert!(Frame::new((0..65).map(|i| i.to_string())).is_err());
        let f = abc();
        assert_eq!(f.subset(&["d"]), Err(Error::UnknownLabel("d".into())));
    }

    #[test]
    fn bpa_validation() {
        let f = abc();
        let a = f.subset(&["a"]).unwrap();
        assert!(Bpa::new(Arc::clone(&f), [(a, 0.5)]).is_err());
        assert_eq!(
            Bpa::new(Arc::clone(&f), [(Subset::EMPTY, 0.5), (a, 0.5)]),
            Err(Error::EmptyFocal)
        );
        assert!(matches!(
            Bpa::new(Arc::clone(&f), [(a, -0.1), (f.full(), 1.1)]),
            Err(Error::NegativeMass { .. })
        ));
        assert_eq!(Bpa::new(Arc::clone(&f), [(Subset(1 << 5), 1.0)]), Err(Error::FrameMismatch));
        // Zero entries are dropped, duplicates merged.
        let m = Bpa::new(Arc::clone(&f), [(a, 0.5), (a, 0.5), (f.full(), 0.0)]).unwrap();
        assert_eq!(m.focal_sets().count(), 1);
        assert_eq!(m.mass(a), 1.0);
    }

    #[test]
    fn bel_and_pl() {
        let f = abc();
        let m = bpa(&f, &[(&["a"], 0.5), (&["a", "b"], 0.5)]);
        assert_eq!(m.bel(f.full()).unwrap(), 1.0);
        assert_eq!(m.bel(Subset::EMPTY).unwrap(), 0.0);
        assert_eq!(m.bel(f.subset(&["a", "b"]).unwrap()).unwrap(), 1.0);
        assert_eq!(m.pl(f.full()).unwrap(), 1.0);
        assert_eq!(m.pl(f.subset(&["b"]).unwrap()).unwrap(), 0.5);
        assert_eq!(m.pl(Subset::EMPTY).unwrap(), 0.0);
        assert_eq!(m.bel(Subset(1 << 7)), Err(Error::FrameMismatch));
    }

    #[test]
    fn dempster_examples() {
        let f = Arc::new(Frame::new(["a", "b"]).unwrap());
        let m1 = bpa(&f, &[(&["a"], 0.6), (&["a", "b"], 0.4)]);
        let m2 = bpa(&f, &[(&["b"], 0.5), (&["a", "b"], 0.5)]);
        assert_abs_diff_eq!(conflict(&m1, &m2).unwrap(), 0.3, epsilon = 1e-15);
        let m = dempster_combine(&m1, &m2).unwrap();
        // 0.3 / 0.7, 0.2 / 0.7, 0.2 / 0.7
        assert_abs_diff_eq!(m.mass(f.subset(&["a"]).unwrap()), 3.0 / 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.mass(f.subset(&["b"]).unwrap()), 2.0 / 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.mass(f.full()), 2.0 / 7.0, epsilon = 1e-12);

        let vac = Bpa::vacuous(Arc::clone(&f));
        let same = dempster_combine(&m1, &vac).unwrap();
        for (s, x) in m1.focal_sets() {
            assert_abs_diff_eq!(same.mass(s), x, epsilon = 1e-15);
        }

        let a = bpa(&f, &[(&["a"], 1.0)]);
        let b = bpa(&f, &[(&["b"], 1.0)]);
        assert!(matches!(dempster_combine(&a, &b), Err(Error::TotalConflict { .. })));
    }

    #[test]
    fn dempster_rejects_foreign_frame() {
        let f = abc();
        let g = Arc::new(Frame::new(["x", "y"]).unwrap());
        assert_eq!(
            dempster_combine(&Bpa::vacuous(f), &Bpa::vacuous(g)),
            Err(Error::FrameMismatch)
        );
    }

    #[test]
    fn ppt_examples() {
        let f = abc();
        let u = Bpa::vacuous(Arc::clone(&f)).ppt();
        assert!(u.values().all(|p| (p - 1.0 / 3.0).abs() < 1e-15));
        let m = bpa(&f, &[(&["a"], 0.5), (&["a", "b"], 0.5)]);
        let p = m.ppt();
        assert_eq!(p["a"], 0.75);
        assert_eq!(p["b"], 0.25);
        assert_eq!(p["c"], 0.0);
        assert_eq!(bpa(&f, &[(&["a"], 1.0)]).ppt()["a"], 1.0);
    }

    #[test]
    fn records_round_trip() {
        let f = abc();
        let m = bpa(&f, &[(&["a"], 0.25), (&["b", "c"], 0.75)]);
        let json = serde_json::to_string(&m.to_records()).unwrap();
        let back: Vec<SubsetMass> = serde_json::from_str(&json).unwrap();
        assert_eq!(Bpa::from_records(Arc::clone(&f), &back).unwrap(), m);
    }

    fn arb_bpa(n: usize) -> impl Strategy<Value = Vec<(u64, f64)>> {
        prop::collection::vec((1u64..(1 << n), 0.01f64..1.0), 1..6)
    }

    fn build(f: &Arc<Frame>, raw: &[(u64, f64)]) -> Bpa {
        let total: f64 = raw.iter().map(|(_, m)| m).sum();
        Bpa::new(Arc::clone(f), raw.iter().map(|(s, m)| (Subset(*s), m / total))).unwrap()
    }

    proptest! {
        #[test]
        fn bel_le_betp_le_pl(raw in arb_bpa(4), a in 0u64..16) {
            let f = Arc::new(Frame::new(["a", "b", "c", "d"]).unwrap());
            let m = build(&f, &raw);
            let p = m.ppt();
            let a = Subset(a);
            let betp: f64 = a.indices().map(|i| p[i]).sum();
            prop_assert!(m.bel(a).unwrap() <= betp + 1e-12);
            prop_assert!(betp <= m.pl(a).unwrap() + 1e-12);
            prop_assert!((p.values().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(p.values().all(|x| *x >= 0.0));
            prop_assert!((m.pl(a).unwrap() - (1.0 - m.bel(f.complement(a)).unwrap())).abs() < 1e-12);
        }

        #[test]
        fn dempster_commutes_and_associates(
            r1 in arb_bpa(3), r2 in arb_bpa(3), r3 in arb_bpa(3)
        ) {
            let f = Arc::new(Frame::new(["a", "b", "c"]).unwrap());
            let (m1, m2, m3) = (build(&f, &r1), build(&f, &r2), build(&f, &r3));
            if let (Ok(x), Ok(y)) = (dempster_combine(&m1, &m2), dempster_combine(&m2, &m1)) {
                for s in (1..8).map(Subset) {
                    prop_assert!((x.mass(s) - y.mass(s)).abs() < 1e-9);
                }
                let left = dempster_combine(&x, &m3);
                let right = dempster_combine(&m2, &m3).and_then(|yz| dempster_combine(&m1, &yz));
                if let (Ok(l), Ok(r)) = (left, right) {
                    for s in (1..8).map(Subset) {
                        prop_assert!((l.mass(s) - r.mass(s)).abs() < 1e-9);
                    }
                }
            }
        }
    }
}
