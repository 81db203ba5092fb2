//! L-convex sets given by difference bounds, windowed checks of L-convexity and
//! L-log-concavity, point counts of projections, and the four functions inequality.
//!
//! Window checks only certify instances whose points all lie in the window; instances that
//! reach outside are counted as skipped.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ceil_avg, floor_avg, join, meet, pi_decompose};
use crate::vector::IntVec;

/// Exact nonnegative function values.
pub type Weight = Ratio<i128>;

/// `{x ∈ Z^n : x_i - x_j ≤ c_ij}` with `c_ij ∈ Z ∪ {∞}` (`None` is `∞`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffConstraints {
    n: usize,
    bound: Vec<Option<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closure {
    Closed(DiffConstraints),
    Empty,
}

impl DiffConstraints {
    /// All of `Z^n`.
    pub fn unbounded(n: usize) -> Self {
        DiffConstraints {
            n,
            bound: vec![None; n * n],
        }
    }

    /// The bounds `max(x_i - x_j, y_i - y_j)` cutting out `Π(x,y)`.
    pub fn from_pi(x: &[i64], y: &[i64]) -> Result<Self> {
        crate::error::same_len(x, y)?;
        let mut dc = DiffConstraints::unbounded(x.len());
        for i in 0..x.len() {
            for j in 0..x.len() {
                if i != j {
                    dc.tighten(i, j, (x[i] - x[j]).max(y[i] - y[j]));
                }
            }
        }
        Ok(dc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self, i: usize, j: usize) -> Option<i64> {
        self.bound[i * self.n + j]
    }

    /// Replaces the bound on `x_i - x_j`.
    pub fn set(&mut self, i: usize, j: usize, c: Option<i64>) {
        assert!(i != j && i < self.n && j < self.n);
        self.bound[i * self.n + j] = c;
    }

    /// Lowers the bound on `x_i - x_j` to at most `c`.
    pub fn tighten(&mut self, i: usize, j: usize, c: i64) {
        let cur = self.bound(i, j);
        self.set(i, j, Some(cur.map_or(c, |b| b.min(c))));
    }

    /// Floyd-Warshall on the constraint graph; `Empty` iff there is a negative cycle.
    pub fn closure(&self) -> Closure {
        let n = self.n;
        let mut d = self.bound.clone();
        for k in 0..n {
            d[k * n + k] = Some(0);
        }
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = d[i * n + k] else { continue };
                for j in 0..n {
                    if let Some(kj) = d[k * n + j] {
                        let via = ik + kj;
                        let slot = &mut d[i * n + j];
                        if slot.is_none_or(|c| via < c) {
                            *slot = Some(via);
                        }
                    }
                }
            }
        }
        if (0..n).any(|k| d[k * n + k].is_some_and(|c| c < 0)) {
            return Closure::Empty;
        }
        for k in 0..n {
            d[k * n + k] = None;
        }
        Closure::Closed(DiffConstraints { n, bound: d })
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.n,
            });
        }
        Ok(self.satisfied_by(x))
    }

    fn satisfied_by(&self, x: &[i64]) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| i == j || self.bound(i, j).is_none_or(|c| x[i] - x[j] <= c)))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoundRepr {
    Finite(i64),
    Infinite(String),
}

#[derive(Serialize, Deserialize)]
struct BoundEntry {
    i: usize,
    j: usize,
    c: BoundRepr,
}

#[derive(Serialize, Deserialize)]
struct DiffConstraintsRepr {
    n: usize,
    bounds: Vec<BoundEntry>,
}

impl Serialize for DiffConstraints {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut bounds = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if let Some(c) = self.bound(i, j).filter(|_| i != j) {
                    bounds.push(BoundEntry {
                        i,
                        j,
                        c: BoundRepr::Finite(c),
                    });
                }
            }
        }
        DiffConstraintsRepr { n: self.n, bounds }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffConstraints {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = DiffConstraintsRepr::deserialize(d)?;
        let mut dc = DiffConstraints::unbounded(repr.n);
        for e in repr.bounds {
            if e.i >= repr.n || e.j >= repr.n || e.i == e.j {
                return Err(D::Error::custom(format!(
                    "bad index pair ({}, {})",
                    e.i, e.j
                )));
            }
            match e.c {
                BoundRepr::Finite(c) => dc.tighten(e.i, e.j, c),
                BoundRepr::Infinite(s) if s == "inf" => {}
                BoundRepr::Infinite(s) => return Err(D::Error::custom(format!("bad bound {s:?}"))),
            }
        }
        Ok(dc)
    }
}

/// A finite box `lo ≤ x ≤ hi` in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: IntVec,
    pub hi: IntVec,
}

impl Window {
    pub fn new(lo: impl Into<IntVec>, hi: impl Into<IntVec>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        crate::error::same_len(&lo, &hi)?;
        if lo.iter().zip(hi.iter()).any(|(a, b)| a > b) {
            return Err(Error::Malformed(format!("empty window {lo}..{hi}")));
        }
        Ok(Window { lo, hi })
    }

    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        Window {
            lo: IntVec(vec![lo; n]),
            hi: IntVec(vec![hi; n]),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.lo
            .iter()
            .zip(self.hi.iter())
            .map(|(a, b)| (b - a + 1) as usize)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(self.hi.iter()))
                .all(|(v, (a, b))| a <= v && v <= b)
    }

    fn index(&self, x: &[i64]) -> usize {
        let mut idx = 0;
        for ((&xk, &lo), &hi) in x.iter().zip(self.lo.iter()).zip(self.hi.iter()) {
            idx = idx * (hi - lo + 1) as usize + (xk - lo) as usize;
        }
        idx
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> Vec<IntVec> {
        let n = self.dim();
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.lo.clone();
        loop {
            out.push(cur.clone());
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < self.hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = self.lo[k];
            }
        }
    }
}

/// Values of a nonnegative function on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowFunc {
    window: Window,
    values: Vec<Weight>,
}

impl WindowFunc {
    pub fn from_fn(window: Window, mut f: impl FnMut(&[i64]) -> Weight) -> Result<Self> {
        let points = window.points();
        let mut values = Vec::with_capacity(points.len());
        for x in &points {
            let v = f(x);
            if v < Weight::from(0) {
                return Err(Error::NegativeValue(format!("{v} at {x}")));
            }
            values.push(v);
        }
        Ok(WindowFunc { window, values })
    }

    /// Like `from_fn` for fallible integer-valued functions.
    pub fn try_from_counts(
        window: Window,
        f: impl Fn(&[i64]) -> Result<u64> + Sync,
    ) -> Result<Self> {
        let points = window.points();
        let values = points
            .par_iter()
            .map(|x| f(x).map(|c| Weight::from(c as i128)))
            .collect::<Result<Vec<_>>>()?;
        Ok(WindowFunc { window, values })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn get(&self, x: &[i64]) -> Option<Weight> {
        self.window
            .contains(x)
            .then(|| self.values[self.window.index(x)])
    }

    fn at(&self, x: &[i64]) -> Weight {
        self.values[self.window.index(x)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetMode {
    Pairs,
    MeetJoin,
    Midpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FuncMode {
    Pairs,
    MeetJoin,
    Midpoint,
    Parallelogram,
}

/// A failed exchange: `f(x)·f(y) > f(x2)·f(y2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeViolation {
    pub x: IntVec,
    pub y: IntVec,
    pub x2: IntVec,
    pub y2: IntVec,
    pub product: String,
    pub exchanged: String,
}

impl fmt::Display for ExchangeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "f{}·f{} = {} > {} = f{}·f{}",
            self.x, self.y, self.product, self.exchanged, self.x2, self.y2
        )
    }
}

/// `x, y ∈ K` but `missing ∉ K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetViolation {
    pub x: IntVec,
    pub y: IntVec,
    pub missing: IntVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowReport<V> {
    pub checked: u64,
    pub skipped: u64,
    pub violation: Option<V>,
}

impl<V> WindowReport<V> {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exchange partners of `(x, y)` inside the window, and how many candidates fell outside it.
pub(crate) fn partners(
    x: &[i64],
    y: &[i64],
    mode: SetMode,
    window: &Window,
) -> (Vec<(IntVec, IntVec)>, u64) {
    let mut out = Vec::new();
    let mut skipped = 0;
    let mut push = |a: IntVec, b: IntVec| {
        if window.contains(&a) && window.contains(&b) {
            out.push((a, b));
        } else {
            skipped += 1;
        }
    };
    match mode {
        SetMode::MeetJoin => push(meet(x, y).unwrap(), join(x, y).unwrap()),
        SetMode::Midpoint => push(floor_avg(x, y).unwrap(), ceil_avg(x, y).unwrap()),
        SetMode::Pairs => {
            let sum: IntVec = x.iter().zip(y).map(|(a, b)| a + b).collect();
            for r in pi_decompose(x, y).unwrap().representatives() {
                // shifts t with r + t·1 and sum - r - t·1 both in the window
                let mut lo = i64::MIN;
                let mut hi = i64::MAX;
                for k in 0..r.len() {
                    lo = lo
                        .max(window.lo[k] - r[k])
                        .max(sum[k] - r[k] - window.hi[k]);
                    hi = hi
                        .min(window.hi[k] - r[k])
                        .min(sum[k] - r[k] - window.lo[k]);
                }
                if lo > hi {
                    skipped += 1;
                }
                for t in lo..=hi {
                    let a = r.shift(t);
                    let b: IntVec = sum.iter().zip(a.iter()).map(|(s, v)| s - v).collect();
                    out.push((a, b));
                }
            }
        }
    }
    (out, skipped)
}

/// Unordered pairs `(points[a], points[b])` with `a ≤ b`, visited in parallel by `a`; the
/// violation reported is the first in `(a, b)` order.
fn scan_pairs<V: Send>(
    points: &[IntVec],
    visit: impl Fn(&IntVec, &IntVec, &mut u64, &mut u64) -> Option<V> + Sync,
) -> WindowReport<V> {
    let results: Vec<(u64, u64, Option<V>)> = (0..points.len())
        .into_par_iter()
        .map(|a| {
            let (mut checked, mut skipped) = (0, 0);
            for b in a..points.len() {
                if let Some(v) = visit(&points[a], &points[b], &mut checked, &mut skipped) {
                    return (checked, skipped, Some(v));
                }
            }
            (checked, skipped, None)
        })
        .collect();
    let mut report = WindowReport {
        checked: 0,
        skipped: 0,
        violation: None,
    };
    for (c, s, v) in results {
        report.checked += c;
        report.skipped += s;
        if report.violation.is_none() {
            report.violation = v;
        }
    }
    report
}

/// Checks one closure condition of L-convexity for `{x : member(x)}` on the window.
pub fn check_lconvex_set_window(
    member: impl Fn(&[i64]) -> bool + Sync,
    window: &Window,
    mode: SetMode,
) -> WindowReport<SetViolation> {
    let inside: Vec<IntVec> = window.points().into_iter().filter(|x| member(x)).collect();
    scan_pairs(&inside, |x, y, checked, skipped| {
        let (pairs, s) = partners(x, y, mode, window);
        *skipped += s;
        for (a, b) in pairs {
            *checked += 1;
            for z in [a, b] {
                if !member(&z) {
                    return Some(SetViolation {
                        x: x.clone(),
                        y: y.clone(),
                        missing: z,
                    });
                }
            }
        }
        None
    })
}

fn exchange(
    f: &WindowFunc,
    x: &IntVec,
    y: &IntVec,
    x2: IntVec,
    y2: IntVec,
) -> Option<ExchangeViolation> {
    let product = f.at(x) * f.at(y);
    let exchanged = f.at(&x2) * f.at(&y2);
    (product > exchanged).then(|| ExchangeViolation {
        x: x.clone(),
        y: y.clone(),
        x2,
        y2,
        product: product.to_string(),
        exchanged: exchanged.to_string(),
    })
}

/// Checks one form of L-log-concavity, `f(x')f(y') ≥ f(x)f(y)`, by exact products.
///
/// `Parallelogram` also requires the support to be closed under meet and join.
pub fn check_llog_concave_window(
    f: &WindowFunc,
    mode: FuncMode,
) -> WindowReport<ExchangeViolation> {
    let window = f.window();
    let support: Vec<IntVec> = window
        .points()
        .into_iter()
        .filter(|x| f.at(x) != Weight::from(0))
        .collect();
    let set_mode = match mode {
        FuncMode::Pairs => SetMode::Pairs,
        FuncMode::MeetJoin | FuncMode::Parallelogram => SetMode::MeetJoin,
        FuncMode::Midpoint => SetMode::Midpoint,
    };
    // pairs with a zero factor hold trivially, so only support pairs are scanned
    let mut report = scan_pairs(&support, |x, y, checked, skipped| {
        let (pairs, s) = partners(x, y, set_mode, window);
        *skipped += s;
        for (a, b) in pairs {
            *checked += 1;
            if let Some(v) = exchange(f, x, y, a, b) {
                return Some(v);
            }
        }
        None
    });
    if mode != FuncMode::Parallelogram || report.violation.is_some() {
        return report;
    }
    let n = window.dim();
    let subsets: Vec<u32> = (0..1u32 << n).collect();
    let points = window.points();
    let results: Vec<(u64, u64, Option<ExchangeViolation>)> = points
        .par_iter()
        .map(|x| {
            let (mut checked, mut skipped) = (0u64, 0u64);
            for &j in &subsets {
                for &i in &subsets {
                    if i & j != i {
                        continue;
                    }
                    let step = |set: u32| -> IntVec {
                        x.iter()
                            .enumerate()
                            .map(|(k, &v)| v + i64::from(set >> k & 1))
                            .collect()
                    };
                    let xi = step(i);
                    let xj = step(j);
                    let top = xi.add(&xj).unwrap().sub(x).unwrap();
                    if !window.contains(&top) {
                        skipped += 1;
                        continue;
                    }
                    checked += 1;
                    if let Some(v) = exchange(f, x, &top, xi, xj) {
                        return (checked, skipped, Some(v));
                    }
                }
            }
            (checked, skipped, None)
        })
        .collect();
    for (c, s, v) in results {
        report.checked += c;
        report.skipped += s;
        if report.violation.is_none() {
            report.violation = v;
        }
    }
    report
}

/// `x ↦ #{y : (x, y) ∈ K}` for `K` given by difference bounds on `M + N` coordinates.
#[derive(Clone, Debug)]
pub struct MarginalCounter {
    m: usize,
    closed: Option<DiffConstraints>,
}

impl MarginalCounter {
    /// Fails with `InfiniteFiber` when some `y` coordinate is not bounded both ways relative to
    /// the `x` block.
    pub fn new(dc: &DiffConstraints, m: usize) -> Result<Self> {
        assert!(m <= dc.n());
        let closed = match dc.closure() {
            Closure::Empty => return Ok(MarginalCounter { m, closed: None }),
            Closure::Closed(c) => c,
        };
        for k in m..closed.n() {
            let upper = (0..m).any(|a| closed.bound(k, a).is_some());
            let lower = (0..m).any(|a| closed.bound(a, k).is_some());
            if !(upper && lower) {
                return Err(Error::InfiniteFiber);
            }
        }
        Ok(MarginalCounter {
            m,
            closed: Some(closed),
        })
    }

    pub fn count(&self, x: &[i64]) -> Result<u64> {
        if x.len() != self.m {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.m,
            });
        }
        let Some(dc) = &self.closed else {
            return Ok(0);
        };
        let m = self.m;
        for a in 0..m {
            for b in 0..m {
                if a != b && dc.bound(a, b).is_some_and(|c| x[a] - x[b] > c) {
                    return Ok(0);
                }
            }
        }
        let n = dc.n() - m;
        let mut ranges = Vec::with_capacity(n);
        for k in m..dc.n() {
            let hi = (0..m)
                .filter_map(|a| dc.bound(k, a).map(|c| x[a] + c))
                .min()
                .unwrap();
            let lo = (0..m)
                .filter_map(|a| dc.bound(a, k).map(|c| x[a] - c))
                .max()
                .unwrap();
            ranges.push((lo, hi));
        }
        let mut y = vec![0i64; n];
        Ok(count_fiber(dc, m, &ranges, &mut y, 0))
    }
}

fn count_fiber(
    dc: &DiffConstraints,
    m: usize,
    ranges: &[(i64, i64)],
    y: &mut [i64],
    k: usize,
) -> u64 {
    if k == y.len() {
        return 1;
    }
    let (mut lo, mut hi) = ranges[k];
    for (l, &yl) in y[..k].iter().enumerate() {
        if let Some(c) = dc.bound(m + k, m + l) {
            hi = hi.min(yl + c);
        }
        if let Some(c) = dc.bound(m + l, m + k) {
            lo = lo.max(yl - c);
        }
    }
    let mut total = 0;
    for v in lo..=hi {
        y[k] = v;
        total += count_fiber(dc, m, ranges, y, k + 1);
    }
    total
}

pub fn marginal_count(dc: &DiffConstraints, x: &[i64]) -> Result<u64> {
    MarginalCounter::new(dc, x.len())?.count(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdReport {
    /// Pairs `(u, v)` with `f1(u)·f2(v) > f3(u∧v)·f4(u∨v)`.
    pub hypothesis_violations: Vec<(IntVec, IntVec)>,
    /// `(Σ_U f1)(Σ_V f2)` and `(Σ_{U∧V} f3)(Σ_{U∨V} f4)`.
    pub lhs: String,
    pub rhs: String,
    /// `None` when the hypothesis fails and the conclusion is not asserted.
    pub conclusion_holds: Option<bool>,
}

/// Checks the four functions inequality on finite sets `U`, `V`.
pub fn ad_check(
    f1: impl Fn(&[i64]) -> Weight,
    f2: impl Fn(&[i64]) -> Weight,
    f3: impl Fn(&[i64]) -> Weight,
    f4: impl Fn(&[i64]) -> Weight,
    u: &[IntVec],
    v: &[IntVec],
) -> AdReport {
    let mut hypothesis_violations = Vec::new();
    let mut meets = BTreeSet::new();
    let mut joins = BTreeSet::new();
    for a in u {
        for b in v {
            let lo = meet(a, b).unwrap();
            let hi = join(a, b).unwrap();
            if f1(a) * f2(b) > f3(&lo) * f4(&hi) {
                hypothesis_violations.push((a.clone(), b.clone()));
            }
            meets.insert(lo);
            joins.insert(hi);
        }
    }
    let sum = |f: &dyn Fn(&[i64]) -> Weight, s: &mut dyn Iterator<Item = &IntVec>| {
        s.fold(Weight::from(0), |acc, x| acc + f(x))
    };
    let uniq_u: BTreeSet<&IntVec> = u.iter().collect();
    let uniq_v: BTreeSet<&IntVec> = v.iter().collect();
    let lhs = sum(&f1, &mut uniq_u.into_iter()) * sum(&f2, &mut uniq_v.into_iter());
    let rhs = sum(&f3, &mut meets.iter()) * sum(&f4, &mut joins.iter());
    AdReport {
        conclusion_holds: hypothesis_violations.is_empty().then_some(lhs <= rhs),
        hypothesis_violations,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}
