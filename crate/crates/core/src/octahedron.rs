//! The octahedron recurrence on the tetrahedron `T_n = {(i,j,t) : |t| ≤ n-i-j, t ≡ i+j+n mod 2}`.
//!
//! A function on `T_n` obeying the recurrence is determined by its values on any of four key
//! slices: the bottom and top hive faces `t = ∓(n-i-j)` and the two middle skep slices
//! `t = ∓ε(i,j)`. Restricting to one slice after propagating from another gives the bijections
//! between hives and skeps and the flips exchanging `λ` and `μ`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{offset, parity_unchecked, points, triangle_size, TriGrid};
use crate::hive::{is_hive, Hive};
use crate::skep::{is_skep, Skep};

/// A point `(i, j, t)` of `T_n`.
pub type TetraPoint = (usize, usize, i64);

fn height_range(n: usize, i: usize, j: usize) -> i64 {
    (n - i - j) as i64
}

/// Whether `(i, j, t)` lies in `T_n`; coordinates may be negative.
pub fn in_tetra(n: usize, i: i64, j: i64, t: i64) -> bool {
    let m = n as i64 - i - j;
    i >= 0 && j >= 0 && m >= 0 && t.abs() <= m && (t + m).rem_euclid(2) == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceKind {
    HiveTop,
    HiveBottom,
    SkepTop,
    SkepBottom,
}

impl SliceKind {
    pub const ALL: [SliceKind; 4] = [
        SliceKind::HiveTop,
        SliceKind::HiveBottom,
        SliceKind::SkepTop,
        SliceKind::SkepBottom,
    ];

    /// The height of the slice above `(i, j)`.
    pub fn height(self, n: usize, i: usize, j: usize) -> i64 {
        let m = height_range(n, i, j);
        let eps = parity_unchecked(i, j, n).epsilon();
        match self {
            SliceKind::HiveTop => m,
            SliceKind::HiveBottom => -m,
            SliceKind::SkepTop => eps,
            SliceKind::SkepBottom => -eps,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SliceKind::HiveTop => "hive_top",
            SliceKind::HiveBottom => "hive_bottom",
            SliceKind::SkepTop => "skep_top",
            SliceKind::SkepBottom => "skep_bottom",
        }
    }

    fn is_valid(self, g: &TriGrid) -> bool {
        match self {
            SliceKind::HiveTop | SliceKind::HiveBottom => is_hive(g),
            SliceKind::SkepTop | SliceKind::SkepBottom => is_skep(g),
        }
    }
}

impl fmt::Display for SliceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SliceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SliceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown slice {s:?}")))
    }
}

/// An integer function on `T_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TetraFunc {
    n: usize,
    // start of the column above each point of Δ_n, in raster order
    start: Vec<usize>,
    values: Vec<i64>,
}

fn column_starts(n: usize) -> (Vec<usize>, usize) {
    let mut start = Vec::with_capacity(triangle_size(n));
    let mut total = 0;
    for (i, j) in points(n) {
        start.push(total);
        total += n - i - j + 1;
    }
    (start, total)
}

impl TetraFunc {
    pub fn constant(n: usize, v: i64) -> Self {
        let (start, total) = column_starts(n);
        TetraFunc {
            n,
            start,
            values: vec![v; total],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn index(&self, i: usize, j: usize, t: i64) -> usize {
        let m = height_range(self.n, i, j);
        self.start[offset(self.n, i, j)] + ((t + m) / 2) as usize
    }

    pub fn get(&self, i: i64, j: i64, t: i64) -> Option<i64> {
        in_tetra(self.n, i, j, t).then(|| self.values[self.index(i as usize, j as usize, t)])
    }

    /// Panics outside `T_n`.
    pub fn at(&self, i: usize, j: usize, t: i64) -> i64 {
        self.get(i as i64, j as i64, t)
            .unwrap_or_else(|| panic!("({i},{j},{t}) is outside T_{}", self.n))
    }

    pub fn set(&mut self, i: usize, j: usize, t: i64, v: i64) {
        assert!(
            in_tetra(self.n, i as i64, j as i64, t),
            "({i},{j},{t}) is outside T_{}",
            self.n
        );
        let k = self.index(i, j, t);
        self.values[k] = v;
    }

    /// Points in order of increasing `t`, then raster order.
    pub fn points(&self) -> Vec<TetraPoint> {
        let n = self.n as i64;
        let mut out = Vec::with_capacity(self.values.len());
        for t in -n..=n {
            for (i, j) in points(self.n) {
                if in_tetra(self.n, i as i64, j as i64, t) {
                    out.push((i, j, t));
                }
            }
        }
        out
    }

    /// Values of the horizontal slice at height `t`, one row per `j`, each by increasing `i`.
    pub fn slice_rows(&self, t: i64) -> Vec<Vec<i64>> {
        (0..=self.n)
            .map(|j| {
                (0..=self.n - j)
                    .filter(|&i| in_tetra(self.n, i as i64, j as i64, t))
                    .map(|i| self.at(i, j, t))
                    .collect::<Vec<_>>()
            })
            .filter(|row| !row.is_empty())
            .collect()
    }

    pub fn restrict(&self, kind: SliceKind) -> TriGrid {
        TriGrid::from_fn(self.n, |i, j| self.at(i, j, kind.height(self.n, i, j)))
    }

    /// The first point `(i, j, t)` where the recurrence fails, if any.
    pub fn recurrence_violation(&self) -> Option<TetraPoint> {
        self.points().into_iter().find(|&(i, j, t)| {
            in_tetra(self.n, i as i64, j as i64, t - 2)
                && Some(self.at(i, j, t) + self.at(i, j, t - 2))
                    != recurrence_rhs(i, j, t - 1, |a, b, s| self.get(a, b, s))
        })
    }
}

/// The right side of the recurrence at `(i, j, s + 1)`, reading neighbours at height `s`.
fn recurrence_rhs(
    i: usize,
    j: usize,
    s: i64,
    get: impl Fn(i64, i64, i64) -> Option<i64>,
) -> Option<i64> {
    let (i, j) = (i as i64, j as i64);
    let pair = |a: (i64, i64), b: (i64, i64)| Some(get(a.0, a.1, s)? + get(b.0, b.1, s)?);
    match (i >= 1, j >= 1) {
        (true, true) => Some(pair((i - 1, j), (i + 1, j))?.max(pair((i, j - 1), (i, j + 1))?)),
        (true, false) => pair((i - 1, 0), (i + 1, 0)),
        (false, true) => pair((0, j - 1), (0, j + 1)),
        (false, false) => pair((1, 0), (0, 1)),
    }
}

/// The unique function obeying the recurrence that agrees with `init` on the slice.
pub fn propagate(init: &TriGrid, from: SliceKind) -> TetraFunc {
    let n = init.n();
    let (start, total) = column_starts(n);
    let mut known: Vec<Option<i64>> = vec![None; total];
    let index = |i: usize, j: usize, t: i64| {
        start[offset(n, i, j)] + ((t + height_range(n, i, j)) / 2) as usize
    };
    for (i, j) in points(n) {
        known[index(i, j, from.height(n, i, j))] = Some(init.at(i, j));
    }
    let nn = n as i64;
    // upward pass solves for the top of each recurrence instance, downward for the bottom
    for (heights, step) in [
        ((-nn..=nn).collect::<Vec<_>>(), -2i64),
        ((-nn..=nn).rev().collect(), 2),
    ] {
        for t in heights {
            for (i, j) in points(n) {
                let (ii, jj) = (i as i64, j as i64);
                if !in_tetra(n, ii, jj, t)
                    || known[index(i, j, t)].is_some()
                    || !in_tetra(n, ii, jj, t + step)
                {
                    continue;
                }
                let Some(other) = known[index(i, j, t + step)] else {
                    continue;
                };
                let get = |a: i64, b: i64, s: i64| {
                    in_tetra(n, a, b, s)
                        .then(|| known[index(a as usize, b as usize, s)])
                        .flatten()
                };
                if let Some(rhs) = recurrence_rhs(i, j, t + step / 2, get) {
                    known[index(i, j, t)] = Some(rhs - other);
                }
            }
        }
    }
    let values = known
        .into_iter()
        .map(|v| v.expect("every point is reached from a key slice"))
        .collect();
    TetraFunc { n, start, values }
}

pub fn restrict(h: &TetraFunc, to: SliceKind) -> TriGrid {
    h.restrict(to)
}

pub fn hive_to_skep(h: &Hive) -> Result<Skep> {
    Skep::new(propagate(h.grid(), SliceKind::HiveBottom).restrict(SliceKind::SkepBottom))
}

pub fn skep_to_hive(g: &Skep) -> Result<Hive> {
    Hive::new(propagate(g.grid(), SliceKind::SkepBottom).restrict(SliceKind::HiveBottom))
}

/// The hive with `λ` and `μ` exchanged, read off the top face.
pub fn hive_flip(h: &Hive) -> Result<Hive> {
    Hive::new(propagate(h.grid(), SliceKind::HiveBottom).restrict(SliceKind::HiveTop))
}

/// The skep with the same plus values and `∂1`, `∂2` exchanged.
pub fn skep_flip(g: &Skep) -> Result<Skep> {
    Skep::new(propagate(g.grid(), SliceKind::SkepBottom).restrict(SliceKind::SkepTop))
}

/// Two unit triangles sharing the edge `short`; `long` joins their far vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rhombus {
    pub long: [TetraPoint; 2],
    pub short: [TetraPoint; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhombusViolation {
    pub rhombus: Rhombus,
    /// `h(short) - h(long)`, negative on failure.
    pub slack: i64,
}

impl fmt::Display for RhombusViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.rhombus.long;
        let [c, d] = self.rhombus.short;
        write!(
            f,
            "rhombus with long diagonal {a:?}-{b:?} and short diagonal {c:?}-{d:?} fails by {}",
            self.slack
        )
    }
}

/// Every unit rhombus of `T_n`, sorted.
pub fn unit_rhombi(n: usize) -> Vec<Rhombus> {
    let nn = n as i64;
    let inside = |p: [i64; 3]| in_tetra(n, p[0], p[1], p[2]);
    let to_point = |p: [i64; 3]| (p[0] as usize, p[1] as usize, p[2]);
    let sorted = |a: [i64; 3], b: [i64; 3]| {
        let (a, b) = (to_point(a), to_point(b));
        if a <= b {
            [a, b]
        } else {
            [b, a]
        }
    };
    let mut out = BTreeSet::new();
    for i in -1..=nn + 1 {
        for j in -1..=nn + 1 {
            for t in -nn - 1..=nn + 1 {
                if (i + j + t - nn - 1).rem_euclid(2) != 0 {
                    continue;
                }
                for signs in 0..8 {
                    let s = |k: i64| if signs >> k & 1 == 0 { 1 } else { -1 };
                    let tri = [[i + s(0), j, t], [i, j + s(1), t], [i, j, t + s(2)]];
                    if !tri.iter().all(|&p| inside(p)) {
                        continue;
                    }
                    for far in 0..3 {
                        let (a, b, c) = (tri[(far + 1) % 3], tri[(far + 2) % 3], tri[far]);
                        let across = [a[0] + b[0] - c[0], a[1] + b[1] - c[1], a[2] + b[2] - c[2]];
                        if inside(across) {
                            out.insert(Rhombus {
                                long: sorted(c, across),
                                short: sorted(a, b),
                            });
                        }
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Checks `h(x) + h(y) ≤ h(x') + h(y')` for every unit rhombus, reporting the first failure in
/// sorted rhombus order.
pub fn check_rhombus_all(h: &TetraFunc) -> Option<RhombusViolation> {
    let value = |p: TetraPoint| h.at(p.0, p.1, p.2);
    unit_rhombi(h.n()).into_par_iter().find_map_first(|r| {
        let slack = value(r.short[0]) + value(r.short[1]) - value(r.long[0]) - value(r.long[1]);
        (slack < 0).then_some(RhombusViolation { rhombus: r, slack })
    })
}

/// Validity of the four key slices and of all rhombus inequalities, in that order.
pub fn five_conditions(h: &TetraFunc) -> [bool; 5] {
    let [a, b, c, d] = SliceKind::ALL.map(|k| k.is_valid(&h.restrict(k)));
    [a, b, c, d, check_rhombus_all(h).is_none()]
}

/// The wall values `d(k, t)`: `h(k, 0, t)` for `k ≥ 0` and `h(0, -k, t)` for `k ≤ 0`.
pub fn wall_value(h: &TetraFunc, k: i64, t: i64) -> Option<i64> {
    if k >= 0 {
        h.get(k, 0, t)
    } else {
        h.get(0, -k, t)
    }
}

#[derive(Serialize, Deserialize)]
struct PointValue {
    i: usize,
    j: usize,
    t: i64,
    v: i64,
}

#[derive(Serialize, Deserialize)]
struct TetraRepr {
    n: usize,
    values: Vec<PointValue>,
}

impl Serialize for TetraFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let values = self
            .points()
            .into_iter()
            .map(|(i, j, t)| PointValue {
                i,
                j,
                t,
                v: self.at(i, j, t),
            })
            .collect();
        TetraRepr { n: self.n, values }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TetraFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TetraRepr::deserialize(d)?;
        let mut h = TetraFunc::constant(repr.n, 0);
        let mut seen = vec![false; h.values.len()];
        for p in repr.values {
            if !in_tetra(repr.n, p.i as i64, p.j as i64, p.t) {
                return Err(D::Error::custom(format!(
                    "({},{},{}) is outside T_{}",
                    p.i, p.j, p.t, repr.n
                )));
            }
            let k = h.index(p.i, p.j, p.t);
            if std::mem::replace(&mut seen[k], true) {
                return Err(D::Error::custom(format!(
                    "duplicate point ({},{},{})",
                    p.i, p.j, p.t
                )));
            }
            h.values[k] = p.v;
        }
        if seen.contains(&false) {
            return Err(D::Error::custom("missing points"));
        }
        Ok(h)
    }
}

impl fmt::Debug for TetraFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n as i64;
        writeln!(f, "TetraFunc(n={})", self.n)?;
        for t in -n..=n {
            writeln!(f, "  t={t}: {:?}", self.slice_rows(t))?;
        }
        Ok(())
    }
}
