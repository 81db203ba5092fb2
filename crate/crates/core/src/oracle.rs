//! Independent ground truth: Littlewood-Richardson coefficients counted by ballot tableaux, and
//! arithmetic on Schur expansions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::normalize_class;
use crate::lconvex::{partners, SetMode, Window, WindowReport};
use crate::vector::{partitions_of, IntVec, Partition};

fn strip(p: &[i64]) -> Vec<i64> {
    let mut v = p.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Counts semistandard fillings of `ν/λ` with content `μ` whose reverse reading word is a
/// ballot sequence.
pub fn lr_tableaux(lam: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    let (lam, mu, nu) = (strip(lam), strip(mu), strip(nu));
    if lam.len() > nu.len() || lam.iter().zip(&nu).any(|(a, b)| a > b) {
        return 0;
    }
    if nu.iter().sum::<i64>() != lam.iter().sum::<i64>() + mu.iter().sum::<i64>() {
        return 0;
    }
    let inner = |r: usize| lam.get(r).copied().unwrap_or(0) as usize;
    // cells in reading order: rows top to bottom, each right to left
    let cells: Vec<(usize, usize)> = (0..nu.len())
        .flat_map(|r| (inner(r)..nu[r] as usize).rev().map(move |c| (r, c)))
        .collect();
    let mut filling: HashMap<(usize, usize), usize> = HashMap::with_capacity(cells.len());
    let mut used = vec![0i64; mu.len() + 1];
    fill(&cells, 0, &mu, &mut used, &mut filling, &inner)
}

fn fill(
    cells: &[(usize, usize)],
    k: usize,
    mu: &[i64],
    used: &mut [i64],
    filling: &mut HashMap<(usize, usize), usize>,
    inner: &impl Fn(usize) -> usize,
) -> u64 {
    let Some(&(r, c)) = cells.get(k) else {
        return 1;
    };
    // row weakly increasing: at most the entry to the right
    let hi = filling.get(&(r, c + 1)).copied().unwrap_or(mu.len());
    // column strict: above the entry over this cell, when that cell is part of the skew shape
    let lo = if r > 0 && c >= inner(r - 1) {
        filling[&(r - 1, c)] + 1
    } else {
        1
    };
    let mut total = 0;
    for v in lo..=hi {
        if used[v] >= mu[v - 1] || (v > 1 && used[v] >= used[v - 1]) {
            continue;
        }
        used[v] += 1;
        filling.insert((r, c), v);
        total += fill(cells, k + 1, mu, used, filling, inner);
        filling.remove(&(r, c));
        used[v] -= 1;
    }
    total
}

/// A finite integer combination of Schur functions, keyed by partitions without trailing zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SchurExpansion(BTreeMap<Partition, i64>);

impl SchurExpansion {
    pub fn zero() -> Self {
        SchurExpansion::default()
    }

    pub fn one() -> Self {
        SchurExpansion::term(&Partition::empty(), 1)
    }

    pub fn term(p: &Partition, coeff: i64) -> Self {
        let mut e = SchurExpansion::zero();
        e.add_term(p, coeff);
        e
    }

    pub fn from_terms<'a>(
        terms: impl IntoIterator<Item = (&'a [i64], i64)>,
    ) -> crate::Result<Self> {
        let mut e = SchurExpansion::zero();
        for (p, c) in terms {
            e.add_term(&Partition::new(p.to_vec())?, c);
        }
        Ok(e)
    }

    pub fn add_term(&mut self, p: &Partition, coeff: i64) {
        let key = p.canonical();
        let slot = self.0.entry(key.clone()).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.0.remove(&key);
        }
    }

    pub fn coeff(&self, p: &Partition) -> i64 {
        self.0.get(&p.canonical()).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, i64)> {
        self.0.iter().map(|(p, &c)| (p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.values().all(|&c| c >= 0)
    }

    /// Terms with negative coefficients.
    pub fn negative_part(&self) -> SchurExpansion {
        SchurExpansion(
            self.0
                .iter()
                .filter(|(_, &c)| c < 0)
                .map(|(p, &c)| (p.clone(), c))
                .collect(),
        )
    }
}

impl Add for &SchurExpansion {
    type Output = SchurExpansion;

    fn add(self, rhs: &SchurExpansion) -> SchurExpansion {
        let mut out = self.clone();
        for (p, c) in rhs.terms() {
            out.add_term(p, c);
        }
        out
    }
}

impl Neg for &SchurExpansion {
    type Output = SchurExpansion;

    fn neg(self) -> SchurExpansion {
        SchurExpansion(self.0.iter().map(|(p, &c)| (p.clone(), -c)).collect())
    }
}

impl Sub for &SchurExpansion {
    type Output = SchurExpansion;

    fn sub(self, rhs: &SchurExpansion) -> SchurExpansion {
        self + &(-rhs)
    }
}

impl Mul for &SchurExpansion {
    type Output = SchurExpansion;

    fn mul(self, rhs: &SchurExpansion) -> SchurExpansion {
        let mut out = SchurExpansion::zero();
        for (p, a) in self.terms() {
            for (q, b) in rhs.terms() {
                for (r, c) in schur_product(p, q).terms() {
                    out.add_term(r, a * b * c);
                }
            }
        }
        out
    }
}

impl fmt::Display for SchurExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (p, c)) in self.terms().enumerate() {
            match (k, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            let sep = if parts.iter().all(|s| s.len() == 1) {
                ""
            } else {
                ","
            };
            write!(f, "s[{}]", parts.join(sep))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SchurExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    partition: Partition,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct ExpansionRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for SchurExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms()
            .map(|(p, c)| TermRepr {
                partition: p.clone(),
                coeff: c,
            })
            .collect();
        ExpansionRepr { terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SchurExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ExpansionRepr::deserialize(d)?;
        let mut e = SchurExpansion::zero();
        for t in repr.terms {
            e.add_term(&t.partition, t.coeff);
        }
        Ok(e)
    }
}

/// `s_λ · s_μ` expanded with [`lr_tableaux`].
pub fn schur_product(lam: &Partition, mu: &Partition) -> SchurExpansion {
    let (l, m) = (lam.canonical(), mu.canonical());
    let len = l.length() + m.length();
    let widest = l.first().copied().unwrap_or(0) + m.first().copied().unwrap_or(0);
    let coeffs: Vec<(Partition, u64)> = partitions_of(l.size() + m.size(), len, widest)
        .into_par_iter()
        .map(|nu| {
            let c = lr_tableaux(&l, &m, &nu);
            (nu, c)
        })
        .collect();
    let mut out = SchurExpansion::zero();
    for (nu, c) in coeffs {
        if c > 0 {
            out.add_term(&nu, c as i64);
        }
    }
    out
}

/// A function `Z^n → Λ` invariant under `x ↦ x + 1_n`, stored on representatives with first
/// coordinate zero; unlisted classes map to zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurFunc {
    pub values: BTreeMap<IntVec, SchurExpansion>,
}

impl SchurFunc {
    pub fn insert(&mut self, x: &[i64], value: SchurExpansion) {
        if !value.is_zero() {
            self.values.insert(normalize_class(x), value);
        }
    }

    pub fn get(&self, x: &[i64]) -> Option<&SchurExpansion> {
        self.values.get(&normalize_class(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchurMode {
    #[serde(rename = "1S")]
    Pairs,
    #[serde(rename = "2S")]
    MeetJoin,
    #[serde(rename = "3S")]
    Midpoint,
    #[serde(rename = "4S")]
    Parallelogram,
}

impl SchurMode {
    pub const ALL: [SchurMode; 4] = [
        SchurMode::Pairs,
        SchurMode::MeetJoin,
        SchurMode::Midpoint,
        SchurMode::Parallelogram,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SchurMode::Pairs => "1S",
            SchurMode::MeetJoin => "2S",
            SchurMode::Midpoint => "3S",
            SchurMode::Parallelogram => "4S",
        }
    }
}

impl std::str::FromStr for SchurMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        SchurMode::ALL
            .into_iter()
            .find(|m| m.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::Error::Malformed(format!("unknown mode {s:?}")))
    }
}

/// `f(x2)·f(y2) - f(x)·f(y)` is not Schur nonnegative; `deficit` is its negative part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurViolation {
    pub x: IntVec,
    pub y: IntVec,
    pub x2: IntVec,
    pub y2: IntVec,
    pub deficit: SchurExpansion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurReport {
    pub mode: SchurMode,
    pub checked: u64,
    pub skipped: u64,
    /// Every failing instance, in scan order.
    pub violations: Vec<SchurViolation>,
}

impl SchurReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl From<SchurReport> for WindowReport<SchurViolation> {
    fn from(r: SchurReport) -> Self {
        WindowReport {
            checked: r.checked,
            skipped: r.skipped,
            violation: r.violations.into_iter().next(),
        }
    }
}

struct Products<'a> {
    f: &'a SchurFunc,
    cache: HashMap<(IntVec, IntVec), SchurExpansion>,
}

impl Products<'_> {
    fn get(&mut self, x: &[i64], y: &[i64]) -> SchurExpansion {
        let (mut a, mut b) = (normalize_class(x), normalize_class(y));
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if let Some(p) = self.cache.get(&(a.clone(), b.clone())) {
            return p.clone();
        }
        let p = match (self.f.values.get(&a), self.f.values.get(&b)) {
            (Some(u), Some(v)) => u * v,
            _ => SchurExpansion::zero(),
        };
        self.cache.insert((a, b), p.clone());
        p
    }
}

/// Checks a Schur analogue of L-log-concavity, `f(x)f(y) ⪯ f(x')f(y')`, on the window.
///
/// `Parallelogram` also checks meet and join closure of the support.
pub fn schur_llc_check(f: &SchurFunc, window: &Window, mode: SchurMode) -> SchurReport {
    let mut products = Products {
        f,
        cache: HashMap::new(),
    };
    let mut report = SchurReport {
        mode,
        checked: 0,
        skipped: 0,
        violations: Vec::new(),
    };
    let mut exchange =
        |x: &IntVec, y: &IntVec, x2: IntVec, y2: IntVec, report: &mut SchurReport| {
            report.checked += 1;
            let diff = &products.get(&x2, &y2) - &products.get(x, y);
            if !diff.is_nonnegative() {
                report.violations.push(SchurViolation {
                    x: x.clone(),
                    y: y.clone(),
                    x2,
                    y2,
                    deficit: diff.negative_part(),
                });
            }
        };
    let support: Vec<IntVec> = window
        .points()
        .into_iter()
        .filter(|x| f.get(x).is_some())
        .collect();
    let set_mode = match mode {
        SchurMode::Pairs => SetMode::Pairs,
        SchurMode::MeetJoin | SchurMode::Parallelogram => SetMode::MeetJoin,
        SchurMode::Midpoint => SetMode::Midpoint,
    };
    for (a, x) in support.iter().enumerate() {
        for y in &support[a..] {
            let (pairs, skipped) = partners(x, y, set_mode, window);
            report.skipped += skipped;
            for (x2, y2) in pairs {
                exchange(x, y, x2, y2, &mut report);
            }
        }
    }
    if mode == SchurMode::Parallelogram {
        let n = window.dim();
        for x in window.points() {
            for j in 0..1u32 << n {
                for i in (0..1u32 << n).filter(|i| i & j == *i) {
                    let step = |set: u32| -> IntVec {
                        x.iter()
                            .enumerate()
                            .map(|(k, &v)| v + i64::from(set >> k & 1))
                            .collect()
                    };
                    let (xi, xj) = (step(i), step(j));
                    let top = xi.add(&xj).unwrap().sub(&x).unwrap();
                    if window.contains(&top) {
                        exchange(&x, &top, xi, xj, &mut report);
                    } else {
                        report.skipped += 1;
                    }
                }
            }
        }
    }
    report
}

/// A `1_4`-invariant function on `Z^4` failing the pairs condition at `0000, 0235` exchanged for
/// `0011, 0224`: `s_21` at `0000`, `0235`; `2s_3 + 2s_111` at `0011`, `0224`;
/// `2s_3 + 4s_21 + 2s_111` on the other fourteen classes of `Π(0000, 0235)`; zero elsewhere.
pub fn schur_counterexample() -> SchurFunc {
    let s = |p: &[i64], c: i64| SchurExpansion::term(&Partition::new(p.to_vec()).unwrap(), c);
    let a = s(&[2, 1], 1);
    let b = &s(&[3], 2) + &s(&[1, 1, 1], 2);
    let c = &b + &s(&[2, 1], 4);
    let mut f = SchurFunc::default();
    for x in [[0, 0, 0, 0], [0, 2, 3, 5]] {
        f.insert(&x, a.clone());
    }
    for x in [[0, 0, 1, 1], [0, 2, 2, 4]] {
        f.insert(&x, b.clone());
    }
    for x in [
        [0, 0, 0, 1],
        [0, 0, 1, 2],
        [0, 1, 1, 2],
        [0, 1, 2, 3],
        [0, 2, 2, 3],
        [0, 1, 1, 1],
        [0, 1, 2, 2],
        [0, 2, 2, 2],
        [0, 2, 3, 3],
        [0, 2, 3, 4],
        [0, 0, 0, 2],
        [0, 0, 1, 3],
        [0, 1, 1, 3],
        [0, 1, 2, 4],
    ] {
        f.insert(&x, c.clone());
    }
    f
}

/// A window in `Z^4` holding every meet, join and exchange of the counterexample's support.
pub fn schur_counterexample_window() -> Window {
    Window::new([-1, -1, -1, -1], [1, 3, 4, 6]).unwrap()
}
