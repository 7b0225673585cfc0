//! Break sequences and extended (open) knot vectors.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Highest supported spline degree; Gram matrices lose double-precision
/// usefulness beyond it.
pub const MAX_DEGREE: usize = 12;

/// Strictly increasing break points `a = τ_0 < τ_1 < … < τ_{N+1} = b`.
///
/// Serializes as a plain JSON array of numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BreakSequence {
    points: Vec<f64>,
}

impl TryFrom<Vec<f64>> for BreakSequence {
    type Error = Error;
    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<BreakSequence> for Vec<f64> {
    fn from(b: BreakSequence) -> Self {
        b.points
    }
}

/// How to generate a break sequence on `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BreakKind {
    Uniform { intervals: usize },
    Explicit { points: Vec<f64> },
    /// Uniform interior points shifted by independent uniform offsets in
    /// `[-amplitude, amplitude]` (domain units).
    RandomPerturbed { intervals: usize, amplitude: f64, seed: u64 },
}

impl BreakSequence {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidBreaks(format!("need at least 2 points, got {}", points.len())));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidBreaks("non-finite break point".into()));
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidBreaks(format!(
                "points must be strictly increasing: points[{}] = {} >= points[{}] = {}",
                i,
                points[i],
                i + 1,
                points[i + 1]
            )));
        }
        Ok(Self { points })
    }

    pub fn uniform(intervals: usize, a: f64, b: f64) -> Result<Self> {
        if intervals == 0 {
            return Err(Error::InvalidBreaks("number of intervals must be at least 1".into()));
        }
        let h = (b - a) / intervals as f64;
        let mut pts: Vec<f64> = (0..=intervals).map(|i| a + i as f64 * h).collect();
        pts[intervals] = b;
        Self::new(pts)
    }

    pub fn random_perturbed(intervals: usize, amplitude: f64, seed: u64, a: f64, b: f64) -> Result<Self> {
        if intervals == 0 {
            return Err(Error::InvalidBreaks("number of intervals must be at least 1".into()));
        }
        let h = (b - a) / intervals as f64;
        if !(amplitude >= 0.0) || amplitude >= 0.5 * h {
            return Err(Error::InvalidBreaks(format!(
                "perturbation amplitude {amplitude} must be below half the uniform spacing {}",
                0.5 * h
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::with_capacity(intervals + 1);
        pts.push(a);
        for i in 1..intervals {
            let shift = if amplitude > 0.0 { rng.gen_range(-amplitude..=amplitude) } else { 0.0 };
            pts.push(a + i as f64 * h + shift);
        }
        pts.push(b);
        Self::new(pts)
    }

    pub fn make(kind: &BreakKind, a: f64, b: f64) -> Result<Self> {
        match kind {
            BreakKind::Uniform { intervals } => Self::uniform(*intervals, a, b),
            BreakKind::Explicit { points } => {
                let s = Self::new(points.clone())?;
                if s.a() != a || s.b() != b {
                    return Err(Error::InvalidBreaks(format!(
                        "explicit points span [{}, {}], expected [{a}, {b}]",
                        s.a(),
                        s.b()
                    )));
                }
                Ok(s)
            }
            BreakKind::RandomPerturbed { intervals, amplitude, seed } => {
                Self::random_perturbed(*intervals, *amplitude, *seed, a, b)
            }
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn a(&self) -> f64 {
        self.points[0]
    }

    pub fn b(&self) -> f64 {
        *self.points.last().unwrap()
    }

    pub fn length(&self) -> f64 {
        self.b() - self.a()
    }

    /// `N + 1`, the number of break intervals.
    pub fn num_intervals(&self) -> usize {
        self.points.len() - 1
    }

    pub fn interval_lengths(&self) -> Vec<f64> {
        self.points.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Maximum interval length.
    pub fn h(&self) -> f64 {
        self.interval_lengths().into_iter().fold(0.0, f64::max)
    }

    pub fn h_min(&self) -> f64 {
        self.interval_lengths().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `max{2h_0, h_1, …, h_{N-1}, 2h_N}`; boundary intervals count double.
    pub fn h_hat(&self) -> f64 {
        let hs = self.interval_lengths();
        let last = hs.len() - 1;
        hs.iter()
            .enumerate()
            .map(|(j, &hj)| if j == 0 || j == last { 2.0 * hj } else { hj })
            .fold(0.0, f64::max)
    }

    /// Index of the interval containing `x`; the last interval is closed.
    pub fn locate(&self, x: f64) -> Result<usize> {
        if x < self.a() || x > self.b() || x.is_nan() {
            return Err(Error::OutOfDomain { x, a: self.a(), b: self.b() });
        }
        let n = self.num_intervals();
        let idx = self.points.partition_point(|&t| t <= x);
        Ok(idx.saturating_sub(1).min(n - 1))
    }

    /// Each interval split into `parts` equal pieces.
    pub fn refine(&self, parts: usize) -> Self {
        let parts = parts.max(1);
        let mut pts = Vec::with_capacity(self.num_intervals() * parts + 1);
        for w in self.points.windows(2) {
            for s in 0..parts {
                pts.push(w[0] + (w[1] - w[0]) * s as f64 / parts as f64);
            }
        }
        pts.push(self.b());
        Self { points: pts }
    }
}

/// Break sequences `τ_{p,i}` on (0,1) for which the subspace family `i`
/// (0: even derivatives vanish, 1: odd vanish, 2: mixed) has dimension `n`.
pub fn make_special_breaks(p: usize, i: usize, n: usize) -> Result<BreakSequence> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidBreaks(format!("special breaks need n >= 1 and p >= 1 (got n={n}, p={p})")));
    }
    let nf = n as f64;
    let odd = p % 2 == 1;
    let interior: Vec<f64> = match (i, odd) {
        (0, true) => (1..=n).map(|j| j as f64 / (nf + 1.0)).collect(),
        (0, false) => (0..=n).map(|j| (j as f64 + 0.5) / (nf + 1.0)).collect(),
        (1, true) => (0..n).map(|j| (j as f64 + 0.5) / nf).collect(),
        (1, false) => (1..n).map(|j| j as f64 / nf).collect(),
        (2, false) => (0..n).map(|j| (2 * j + 1) as f64 / (2.0 * nf + 1.0)).collect(),
        (2, true) => (1..=n).map(|j| (2 * j) as f64 / (2.0 * nf + 1.0)).collect(),
        _ => return Err(Error::InvalidBreaks(format!("special family index must be 0, 1 or 2, got {i}"))),
    };
    let mut pts = Vec::with_capacity(interior.len() + 2);
    pts.push(0.0);
    pts.extend(interior);
    pts.push(1.0);
    BreakSequence::new(pts)
}

/// Open knot vector: boundary multiplicity `p + 1`, interior multiplicity `p - k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedKnotVector {
    breaks: BreakSequence,
    degree: usize,
    smoothness: i32,
    knots: Vec<f64>,
    /// `spans[e]`: index of the last knot equal to the left end of interval `e`.
    spans: Vec<usize>,
}

impl ExtendedKnotVector {
    pub fn new(breaks: &BreakSequence, degree: usize, smoothness: i32) -> Result<Self> {
        if degree > MAX_DEGREE + 1 {
            return Err(Error::InvalidSpace(format!("degree {degree} exceeds the supported maximum {MAX_DEGREE}")));
        }
        if smoothness < -1 || smoothness > degree as i32 - 1 {
            return Err(Error::InvalidSpace(format!(
                "smoothness k={smoothness} must satisfy -1 <= k <= p-1 = {}",
                degree as i32 - 1
            )));
        }
        let pts = breaks.points();
        let interior_mult = (degree as i32 - smoothness) as usize;
        let mut knots = Vec::new();
        let mut spans = Vec::with_capacity(breaks.num_intervals());
        knots.extend(std::iter::repeat(pts[0]).take(degree + 1));
        spans.push(degree);
        for &t in &pts[1..pts.len() - 1] {
            knots.extend(std::iter::repeat(t).take(interior_mult));
            spans.push(knots.len() - 1);
        }
        knots.extend(std::iter::repeat(*pts.last().unwrap()).take(degree + 1));
        Ok(Self { breaks: breaks.clone(), degree, smoothness, knots, spans })
    }

    /// Maximal smoothness `k = p - 1`.
    pub fn maximal(breaks: &BreakSequence, degree: usize) -> Result<Self> {
        Self::new(breaks, degree, degree as i32 - 1)
    }

    pub fn breaks(&self) -> &BreakSequence {
        &self.breaks
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn smoothness(&self) -> i32 {
        self.smoothness
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of B-splines, `(N+1)(p-k) + k + 1`.
    pub fn dim(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    /// Knot span index for interval `e`.
    pub fn span(&self, e: usize) -> usize {
        self.spans[e]
    }

    /// Same breaks, one degree higher, one order smoother.
    pub fn integrated(&self) -> Result<Self> {
        Self::new(&self.breaks, self.degree + 1, self.smoothness + 1)
    }

    pub fn differentiated(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::InvalidSpace("cannot differentiate a degree-0 knot vector".into()));
        }
        Self::new(&self.breaks, self.degree - 1, self.smoothness - 1)
    }
}
