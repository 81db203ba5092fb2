//! Integer vectors and partitions.

use std::fmt;
use std::ops::{Deref, DerefMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{same_len, Error, Result};

/// A fixed-length vector in `Z^n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVec(pub Vec<i64>);

impl IntVec {
    pub fn zeros(n: usize) -> Self {
        IntVec(vec![0; n])
    }

    /// The all-ones vector `1_n`.
    pub fn ones(n: usize) -> Self {
        IntVec(vec![1; n])
    }

    /// Indicator vector `e_S` of a set of zero-based coordinates.
    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut v = vec![0; n];
        for &i in set {
            v[i] = 1;
        }
        IntVec(v)
    }

    pub fn add(&self, other: &[i64]) -> Result<IntVec> {
        same_len(self, other)?;
        Ok(self.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &[i64]) -> Result<IntVec> {
        same_len(self, other)?;
        Ok(self.iter().zip(other).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> IntVec {
        self.iter().map(|a| a * k).collect()
    }

    pub fn shift(&self, k: i64) -> IntVec {
        self.iter().map(|a| a + k).collect()
    }

    pub fn total(&self) -> i64 {
        self.iter().sum()
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

impl Deref for IntVec {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl DerefMut for IntVec {
    fn deref_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }
}

impl From<Vec<i64>> for IntVec {
    fn from(v: Vec<i64>) -> Self {
        IntVec(v)
    }
}

impl From<&[i64]> for IntVec {
    fn from(v: &[i64]) -> Self {
        IntVec(v.to_vec())
    }
}

impl<const N: usize> From<[i64; N]> for IntVec {
    fn from(v: [i64; N]) -> Self {
        IntVec(v.to_vec())
    }
}

impl FromIterator<i64> for IntVec {
    fn from_iter<T: IntoIterator<Item = i64>>(iter: T) -> Self {
        IntVec(iter.into_iter().collect())
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Comma-separated integers, e.g. `4,2,1,0`. The empty string is the empty vector.
impl FromStr for IntVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(IntVec::default());
        }
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Malformed(format!("{p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(IntVec)
    }
}

pub fn is_partition(v: &[i64]) -> bool {
    v.iter().all(|&x| x >= 0) && v.windows(2).all(|w| w[0] >= w[1])
}

/// Appends `k` zeros.
pub fn pad(v: &[i64], k: usize) -> IntVec {
    let mut out = v.to_vec();
    out.resize(v.len() + k, 0);
    IntVec(out)
}

/// A weakly decreasing vector of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition(IntVec);

impl Partition {
    pub fn new(v: impl Into<IntVec>) -> Result<Self> {
        let v = v.into();
        if is_partition(&v) {
            Ok(Partition(v))
        } else {
            Err(Error::NotPartition(v.0))
        }
    }

    pub fn empty() -> Self {
        Partition(IntVec::default())
    }

    /// Trailing zeros stripped.
    pub fn canonical(&self) -> Partition {
        let mut v = self.0 .0.clone();
        while v.last() == Some(&0) {
            v.pop();
        }
        Partition(IntVec(v))
    }

    /// Padded (or truncated, if only zeros are dropped) to exactly `n` parts.
    pub fn with_len(&self, n: usize) -> Result<Partition> {
        let c = self.canonical();
        if c.len() > n {
            return Err(Error::LengthMismatch {
                left: c.len(),
                right: n,
            });
        }
        Ok(Partition(pad(&c, n - c.len())))
    }

    pub fn size(&self) -> i64 {
        self.0.total()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.iter().take_while(|&&x| x > 0).count()
    }

    pub fn as_intvec(&self) -> &IntVec {
        &self.0
    }

    pub fn into_intvec(self) -> IntVec {
        self.0
    }
}

impl Deref for Partition {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Partition::new(s.parse::<IntVec>()?)
    }
}

impl TryFrom<Vec<i64>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Partition::new(v)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        Partition::new(v).map_err(serde::de::Error::custom)
    }
}

/// All partitions with exactly `n` parts (zeros allowed) and largest part at most `max_part`.
pub fn partitions_in_box(n: usize, max_part: i64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Partition>) {
        if cur.len() == n {
            out.push(Partition(IntVec(cur.clone())));
            return;
        }
        for x in 0..=cap {
            cur.push(x);
            rec(n, x, cur, out);
            cur.pop();
        }
    }
    rec(n, max_part, &mut cur, &mut out);
    out
}

/// All partitions of `total` with exactly `n` parts (zeros allowed) and largest part at most
/// `max_part`, in decreasing lexicographic order.
pub fn partitions_of(total: i64, n: usize, max_part: i64) -> Vec<Partition> {
    let mut out = Vec::new();
    if total < 0 {
        return out;
    }
    let mut cur = Vec::with_capacity(n);
    fn rec(rest: i64, n: usize, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Partition>) {
        let slots = (n - cur.len()) as i64;
        if slots == 0 {
            if rest == 0 {
                out.push(Partition(IntVec(cur.clone())));
            }
            return;
        }
        if rest > cap * slots {
            return;
        }
        for x in (0..=cap.min(rest)).rev() {
            cur.push(x);
            rec(rest - x, n, x, cur, out);
            cur.pop();
        }
    }
    rec(total, n, max_part, &mut cur, &mut out);
    out
}
