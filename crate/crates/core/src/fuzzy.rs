//! Triangular fuzzy numbers and the exact geometry needed to compare them.
//!
//! Membership functions are piecewise linear, so every area used here
//! (intersection and union envelopes, the triangle itself) is computed
//! exactly by splitting the real line at all leg endpoints and leg
//! crossings and summing trapezoids. Nothing is sampled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A triangular fuzzy number `(a1, a2, a3)` with `a1 <= a2 <= a3`.
///
/// Equal endpoints are admitted: `(0, 0, 0.25)` has a vertical left leg and
/// membership 1 at `x = 0`. Serializes as a 3-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct TriangularFuzzyNumber {
    a1: f64,
    a2: f64,
    a3: f64,
}

impl TriangularFuzzyNumber {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let finite = a1.is_finite() && a2.is_finite() && a3.is_finite();
        if !finite || a1 > a2 || a2 > a3 {
            return Err(Error::InvalidTfn { a1, a2, a3 });
        }
        Ok(Self { a1, a2, a3 })
    }

    /// The crisp number `c` as the degenerate triangle `(c, c, c)`.
    pub fn crisp(c: f64) -> Result<Self> {
        Self::new(c, c, c)
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn a3(&self) -> f64 {
        self.a3
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn is_crisp(&self) -> bool {
        self.a1 == self.a3
    }

    /// Membership degree of `x`. A vertical leg is a jump: the peak keeps
    /// membership 1 even when it coincides with a support bound.
    pub fn membership(&self, x: f64) -> f64 {
        let Self { a1, a2, a3 } = *self;
        if x < a1 || x > a3 {
            0.0
        } else if x == a2 {
            1.0
        } else if x < a2 {
            (x - a1) / (a2 - a1)
        } else {
            (a3 - x) / (a3 - a2)
        }
    }

    /// Area under the membership function.
    pub fn area(&self) -> f64 {
        0.5 * (self.a3 - self.a1)
    }

    /// Graded mean integration representation `(a1 + 4 a2 + a3) / 6`.
    pub fn graded_mean(&self) -> f64 {
        (self.a1 + 4.0 * self.a2 + self.a3) / 6.0
    }

    /// Centre of mass of the membership function.
    ///
    /// For a triangle this is `(a1 + a2 + a3) / 3`. A crisp number has no
    /// area and defuzzifies to itself.
    pub fn centroid_defuzzify(&self) -> f64 {
        if self.is_crisp() {
            return self.a1;
        }
        (self.a1 + self.a2 + self.a3) / 3.0
    }

    /// Coefficients `(slope, intercept)` of the membership function on an
    /// open interval that contains `x` and none of `a1`, `a2`, `a3`.
    fn linear_piece(&self, x: f64) -> (f64, f64) {
        let Self { a1, a2, a3 } = *self;
        if x <= a1 || x >= a3 {
            (0.0, 0.0)
        } else if x < a2 {
            let s = 1.0 / (a2 - a1);
            (s, -a1 * s)
        } else {
            let s = -1.0 / (a3 - a2);
            (s, -a3 * s)
        }
    }
}

impl TryFrom<[f64; 3]> for TriangularFuzzyNumber {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<TriangularFuzzyNumber> for [f64; 3] {
    fn from(f: TriangularFuzzyNumber) -> Self {
        f.as_array()
    }
}

impl std::fmt::Display for TriangularFuzzyNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:.3}, {:.3}, {:.3})", self.a1, self.a2, self.a3)
    }
}

/// A piecewise-linear curve given by its breakpoints, zero outside them.
///
/// `x` is non-decreasing. Two consecutive breakpoints with the same `x`
/// encode a jump (left limit, then right limit); this is how vertical
/// legs of degenerate triangles survive into min/max envelopes.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearCurve {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinearCurve {
    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Exact area under the curve.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }

    /// Value at `x`; at a jump the larger one-sided value is returned.
    pub fn value_at(&self, x: f64) -> f64 {
        let mut best: Option<f64> = None;
        for w in self.points.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x < x0 || x > x1 {
                continue;
            }
            let y = if x1 == x0 {
                y0.max(y1)
            } else {
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            };
            best = Some(best.map_or(y, |b: f64| b.max(y)));
        }
        best.unwrap_or(0.0)
    }

    /// Pointwise minimum of two membership functions.
    pub fn min_envelope(a: &TriangularFuzzyNumber, b: &TriangularFuzzyNumber) -> Self {
        Self::envelope(a, b, f64::min)
    }

    /// Pointwise maximum of two membership functions.
    pub fn max_envelope(a: &TriangularFuzzyNumber, b: &TriangularFuzzyNumber) -> Self {
        Self::envelope(a, b, f64::max)
    }

    fn envelope(
        a: &TriangularFuzzyNumber,
        b: &TriangularFuzzyNumber,
        pick: fn(f64, f64) -> f64,
    ) -> Self {
        let mut xs: Vec<f64> = a.as_array().into_iter().chain(b.as_array()).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();

        let mut points: Vec<(f64, f64)> = Vec::new();
        let mut push = |p: (f64, f64)| {
            if points.last() != Some(&p) {
                points.push(p);
            }
        };

        for w in xs.windows(2) {
            let (l, r) = (w[0], w[1]);
            let mid = 0.5 * (l + r);
            let (sa, ia) = a.linear_piece(mid);
            let (sb, ib) = b.linear_piece(mid);
            let fa = |x: f64| sa * x + ia;
            let fb = |x: f64| sb * x + ib;

            push((l, 0.0_f64.max(pick(fa(l), fb(l))).min(1.0)));
            let dl = fa(l) - fb(l);
            let dr = fa(r) - fb(r);
            if dl * dr < 0.0 {
                let xc = l + (r - l) * dl / (dl - dr);
                push((xc, fa(xc)));
            }
            push((r, 0.0_f64.max(pick(fa(r), fb(r))).min(1.0)));
        }

        // Jumps at the outer ends of the support.
        if let Some(&(x0, y0)) = points.first() {
            if y0 != 0.0 {
                points.insert(0, (x0, 0.0));
            }
        }
        if let Some(&(xn, yn)) = points.last() {
            if yn != 0.0 {
                points.push((xn, 0.0));
            }
        }
        Self { points }
    }
}

/// Area of the fuzzy intersection (pointwise min).
pub fn intersection_area(a: &TriangularFuzzyNumber, b: &TriangularFuzzyNumber) -> f64 {
    PiecewiseLinearCurve::min_envelope(a, b).area()
}

/// Area of the fuzzy union (pointwise max).
pub fn union_area(a: &TriangularFuzzyNumber, b: &TriangularFuzzyNumber) -> Result<f64> {
    if a.is_crisp() && b.is_crisp() {
        return Err(Error::ZeroArea);
    }
    Ok(PiecewiseLinearCurve::max_envelope(a, b).area())
}

/// Non-exclusive degree of two fuzzy numbers: intersection area over
/// union area.
pub fn non_exclusive_degree(a: &TriangularFuzzyNumber, b: &TriangularFuzzyNumber) -> Result<f64> {
    let union = union_area(a, b)?;
    if union <= 0.0 {
        return Err(Error::ZeroArea);
    }
    Ok((intersection_area(a, b) / union).clamp(0.0, 1.0))
}

/// Component-wise weighted sum `(Σ w a1, Σ w a2, Σ w a3)`.
pub fn weighted_sum(fs: &[TriangularFuzzyNumber], ws: &[f64]) -> Result<TriangularFuzzyNumber> {
    if fs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if fs.len() != ws.len() {
        return Err(Error::LengthMismatch {
            left: fs.len(),
            right: ws.len(),
        });
    }
    if ws.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
    }
    if !ws.iter().any(|w| *w > 0.0) {
        return Err(Error::InvalidWeights("at least one weight must be positive".into()));
    }
    let mut acc = [0.0; 3];
    for (f, w) in fs.iter().zip(ws) {
        for (a, v) in acc.iter_mut().zip(f.as_array()) {
            *a += w * v;
        }
    }
    TriangularFuzzyNumber::new(acc[0], acc[1], acc[2])
}
