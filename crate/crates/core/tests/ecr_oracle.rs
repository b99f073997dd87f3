//! ECR combination against a literal enumeration of the power set.

#![allow(clippy::needless_range_loop)]

use std::sync::Arc;

use dnt_game::dnumbers::{
    ecr_combine, ecr_combine_with_conflict, extend_nonexcl, self_combine, wac_combine, weighted_average,
    DFocalSet, DFrame, DNumber, NonExclusivityMatrix,
};
use dnt_game::Error;
use proptest::prelude::*;

/// Bits `0..n` are labels, bit `n` is `X`.
fn focal_of(frame: &DFrame, bits: u32) -> DFocalSet {
    let n = frame.len();
    let mut s = DFocalSet::EMPTY;
    for i in 0..n {
        if bits & (1 << i) != 0 {
            s = s.union(frame.singleton(i));
        }
    }
    if bits & (1 << n) != 0 {
        s = s.union(DFocalSet::X);
    }
    s
}

/// Power-set degree straight from the definition: 1 for overlapping sets,
/// otherwise the largest base entry over element pairs.
fn degree(base: &[Vec<f64>], b: u32, c: u32) -> f64 {
    if b & c != 0 {
        return 1.0;
    }
    let mut best: f64 = 0.0;
    for i in 0..base.len() {
        for j in 0..base.len() {
            if b & (1 << i) != 0 && c & (1 << j) != 0 {
                best = best.max(base[i][j]);
            }
        }
    }
    best
}

/// Enumerates every pair of non-empty subsets of `Θ ∪ {X}`, including
/// those without mass, and routes their product by hand.
fn oracle(n: usize, base: &[Vec<f64>], m1: &[f64], m2: &[f64]) -> Option<(Vec<f64>, f64)> {
    let size = 1usize << (n + 1);
    let mut out = vec![0.0; size];
    let mut k = 0.0;
    for b in 1..size {
        for c in 1..size {
            let p = m1[b] * m2[c];
            if b & c != 0 {
                out[b & c] += p;
            } else {
                let u = degree(base, b as u32, c as u32);
                out[b | c] += u * p;
                k += (1.0 - u) * p;
            }
        }
    }
    if k >= 1.0 - 1e-12 {
        return None;
    }
    out.iter_mut().for_each(|v| *v /= 1.0 - k);
    Some((out, k))
}

fn dense(frame: &DFrame, d: &DNumber, n: usize) -> Vec<f64> {
    (0..1u32 << (n + 1)).map(|b| if b == 0 { 0.0 } else { d.mass(focal_of(frame, b)) }).collect()
}

fn arb_case() -> impl Strategy<Value = (usize, Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
    (1usize..=3).prop_flat_map(|n| {
        let size = 1usize << (n + 1);
        let dim = n + 1;
        (
            Just(n),
            prop::collection::vec(0.0f64..1.0, dim * dim),
            prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], size - 1),
            prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], size - 1),
        )
            .prop_filter("both need mass", |(_, _, a, b)| {
                a.iter().sum::<f64>() > 1e-3 && b.iter().sum::<f64>() > 1e-3
            })
            .prop_map(move |(n, raw, a, b)| {
                let mut base = vec![vec![0.0; dim]; dim];
                for i in 0..dim {
                    base[i][i] = 1.0;
                    for j in 0..i {
                        base[i][j] = raw[i * dim + j];
                        base[j][i] = raw[i * dim + j];
                    }
                }
                let norm = |v: Vec<f64>| {
                    let s: f64 = v.iter().sum();
                    std::iter::once(0.0).chain(v.into_iter().map(|x| x / s)).collect::<Vec<_>>()
                };
                (n, base, norm(a), norm(b))
            })
    })
}

fn build(n: usize, masses: &[f64]) -> (Arc<DFrame>, DNumber) {
    let frame = Arc::new(DFrame::new((0..n).map(|i| format!("t{i}"))).unwrap());
    let d = DNumber::new(
        Arc::clone(&frame),
        masses.iter().enumerate().skip(1).map(|(b, m)| (focal_of(&frame, b as u32), *m)),
    )
    .unwrap();
    (frame, d)
}

proptest! {
    #[test]
    fn ecr_matches_power_set_enumeration((n, base, a, b) in arb_case()) {
        let (frame, d1) = build(n, &a);
        let d2 = DNumber::new(
            Arc::clone(&frame),
            b.iter().enumerate().skip(1).map(|(s, m)| (focal_of(&frame, s as u32), *m)),
        ).unwrap();
        let m = NonExclusivityMatrix::new(Arc::clone(&frame), base.clone()).unwrap();
        match (oracle(n, &base, &a, &b), ecr_combine_with_conflict(&d1, &d2, &m)) {
            (Some((expected, k)), Ok(out)) => {
                prop_assert!((out.conflict - k).abs() < 1e-12);
                let got = dense(&frame, &out.combined, n);
                for (s, (e, g)) in expected.iter().zip(&got).enumerate() {
                    // Pruned terms are below 1e-12 before renormalization.
                    prop_assert!((e - g).abs() < 1e-9, "set {s:b}: {e} vs {g}");
                }
            }
            (None, Err(Error::TotalExclusiveConflict { .. })) => {}
            (e, r) => prop_assert!(false, "oracle {e:?} vs {r:?}"),
        }
    }

    #[test]
    fn extension_matches_definition((n, base, _a, _b) in arb_case()) {
        let frame = Arc::new(DFrame::new((0..n).map(|i| format!("t{i}"))).unwrap());
        let m = NonExclusivityMatrix::new(Arc::clone(&frame), base.clone()).unwrap();
        for b in 1..1u32 << (n + 1) {
            for c in 1..1u32 << (n + 1) {
                let got = extend_nonexcl(&m, focal_of(&frame, b), focal_of(&frame, c)).unwrap();
                prop_assert_eq!(got, degree(&base, b, c));
            }
        }
    }
}

fn ab_frame(u: f64) -> (Arc<DFrame>, NonExclusivityMatrix) {
    let frame = Arc::new(DFrame::new(["a", "b"]).unwrap());
    let m = NonExclusivityMatrix::new(
        Arc::clone(&frame),
        vec![vec![1.0, u, 0.0], vec![u, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
    )
    .unwrap();
    (frame, m)
}

fn crisp(frame: &Arc<DFrame>, labels: &[&str]) -> DNumber {
    DNumber::new(Arc::clone(frame), [(frame.focal(labels).unwrap(), 1.0)]).unwrap()
}

#[test]
fn ecr_is_not_associative() {
    let (frame, m) = ab_frame(0.5);
    let (a, b) = (crisp(&frame, &["a"]), crisp(&frame, &["b"]));
    let left = ecr_combine(&ecr_combine(&a, &a, &m).unwrap(), &b, &m).unwrap();
    let right = ecr_combine(&a, &ecr_combine(&a, &b, &m).unwrap(), &m).unwrap();
    assert_eq!(left, crisp(&frame, &["a", "b"]));
    assert_eq!(right, crisp(&frame, &["a"]));
}

#[test]
fn self_combination_is_a_left_fold() {
    let (frame, m) = ab_frame(0.3);
    let d = DNumber::new(
        Arc::clone(&frame),
        [
            (frame.focal(&["a"]).unwrap(), 0.5),
            (frame.focal(&["b"]).unwrap(), 0.3),
            (DFocalSet::X, 0.2),
        ],
    )
    .unwrap();
    assert_eq!(self_combine(&d, 1, &m).unwrap(), d);
    let two = ecr_combine(&d, &d, &m).unwrap();
    let three = ecr_combine(&two, &d, &m).unwrap();
    assert_eq!(self_combine(&d, 3, &m).unwrap(), three);
    assert_eq!(self_combine(&d, 0, &m), Err(Error::EmptyInput));
}

#[test]
fn wac_of_identical_operands_averages_to_the_operand() {
    let (frame, m) = ab_frame(0.2);
    let d = DNumber::new(
        Arc::clone(&frame),
        [(frame.focal(&["a"]).unwrap(), 0.6), (frame.focal(&["a", "b"]).unwrap(), 0.4)],
    )
    .unwrap();
    let ds = vec![d.clone(), d.clone(), d.clone()];
    let avg = weighted_average(&ds, &[0.2, 0.3, 0.5]).unwrap();
    for (s, v) in d.focal_sets() {
        assert!((avg.mass(s) - v).abs() < 1e-15);
    }
    let fused = wac_combine(&ds, &[0.2, 0.3, 0.5], &m).unwrap();
    assert_eq!(fused, self_combine(&avg, 3, &m).unwrap());
    assert_eq!(wac_combine(&ds[..1], &[1.0], &m).unwrap(), d);
}

#[test]
fn exclusive_matrix_with_disjoint_crisp_sources_is_total_conflict() {
    let (frame, _) = ab_frame(0.0);
    let m = NonExclusivityMatrix::exclusive(Arc::clone(&frame));
    let r = ecr_combine(&crisp(&frame, &["a"]), &crisp(&frame, &["b"]), &m);
    assert!(matches!(r, Err(Error::TotalExclusiveConflict { .. })));
}
