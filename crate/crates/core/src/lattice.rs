//! Order and geometry on `Z^n` modulo `Z·1_n`: the parallelepipeds `Π(x,y)`, meets, joins and
//! rounded averages, L-distance, the zig/zag operators and the contraction preorder on pairs.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{same_len, Error, Result};
use crate::vector::IntVec;

fn zip_with(x: &[i64], y: &[i64], f: impl Fn(i64, i64) -> i64) -> Result<IntVec> {
    same_len(x, y)?;
    Ok(x.iter().zip(y).map(|(&a, &b)| f(a, b)).collect())
}

pub fn meet(x: &[i64], y: &[i64]) -> Result<IntVec> {
    zip_with(x, y, i64::min)
}

pub fn join(x: &[i64], y: &[i64]) -> Result<IntVec> {
    zip_with(x, y, i64::max)
}

pub fn floor_avg(x: &[i64], y: &[i64]) -> Result<IntVec> {
    zip_with(x, y, |a, b| (a + b).div_euclid(2))
}

pub fn ceil_avg(x: &[i64], y: &[i64]) -> Result<IntVec> {
    zip_with(x, y, |a, b| -(-(a + b)).div_euclid(2))
}

/// `max_i (x_i - y_i) - min_j (x_j - y_j)`.
pub fn l_distance(x: &[i64], y: &[i64]) -> Result<i64> {
    let d = zip_with(x, y, |a, b| a - b)?;
    Ok(match (d.iter().max(), d.iter().min()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => 0,
    })
}

/// Whether `min(x_i-x_j, y_i-y_j) ≤ z_i-z_j ≤ max(x_i-x_j, y_i-y_j)` for all `i < j`.
pub fn pi_contains(x: &[i64], y: &[i64], z: &[i64]) -> Result<bool> {
    same_len(x, y)?;
    same_len(x, z)?;
    let n = x.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b, c) = (x[i] - x[j], y[i] - y[j], z[i] - z[j]);
            if c < a.min(b) || c > a.max(b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Π(x,y)` written as `y = x + Σ ℓ_k e_{I_k} + c·1_n` with `I_1 ⊋ I_2 ⊋ ⋯` proper and nonempty.
/// Index sets are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parallelepiped {
    pub base: IntVec,
    pub directions: Vec<Vec<usize>>,
    pub distances: Vec<i64>,
    pub shift: i64,
}

impl Parallelepiped {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// `L(x,y) = Σ ℓ_k`.
    pub fn l_length(&self) -> i64 {
        self.distances.iter().sum()
    }

    /// Number of classes in `Π(x,y)/Z·1_n`.
    pub fn class_count(&self) -> u64 {
        self.distances.iter().map(|&l| (l + 1) as u64).product()
    }

    /// `x + Σ a_k e_{I_k}`.
    pub fn point(&self, coeffs: &[i64]) -> IntVec {
        let mut z = self.base.clone();
        for (set, &a) in self.directions.iter().zip(coeffs) {
            for &i in set {
                z[i] += a;
            }
        }
        z
    }

    /// The second endpoint `y`.
    pub fn far_end(&self) -> IntVec {
        self.point(&self.distances).shift(self.shift)
    }

    /// One representative `x + Σ a_k e_{I_k}`, `0 ≤ a_k ≤ ℓ_k`, per class, with the coefficient
    /// vectors in lexicographic order.
    pub fn representatives(&self) -> Vec<IntVec> {
        let mut out = Vec::with_capacity(self.class_count() as usize);
        let mut coeffs = vec![0i64; self.dim()];
        loop {
            out.push(self.point(&coeffs));
            let mut k = self.dim();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if coeffs[k] < self.distances[k] {
                    coeffs[k] += 1;
                    coeffs[k + 1..].iter_mut().for_each(|a| *a = 0);
                    break;
                }
            }
        }
    }
}

pub fn pi_decompose(x: &[i64], y: &[i64]) -> Result<Parallelepiped> {
    let d = zip_with(y, x, |a, b| a - b)?;
    let levels: Vec<i64> = d
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let shift = levels.first().copied().unwrap_or(0);
    let directions = levels[1.min(levels.len())..]
        .iter()
        .map(|&h| (0..d.len()).filter(|&i| d[i] >= h).collect())
        .collect();
    let distances = levels.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(Parallelepiped {
        base: x.into(),
        directions,
        distances,
        shift,
    })
}

pub fn pi_enumerate(x: &[i64], y: &[i64]) -> Result<Vec<IntVec>> {
    Ok(pi_decompose(x, y)?.representatives())
}

/// Shifted by a multiple of `1_n` so the first entry is zero.
pub fn normalize_class(z: &[i64]) -> IntVec {
    let base = z.first().copied().unwrap_or(0);
    z.iter().map(|&a| a - base).collect()
}

/// An endpoint of a cut interval for zig/zag. Infinite endpoints are accepted only for the
/// degenerate cuts `(0, +∞)` and `(-∞, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cut {
    NegInf,
    Finite(i64),
    PosInf,
}

fn check_cut(b: Cut, c: Cut) -> Result<()> {
    match (b, c) {
        (Cut::Finite(b), Cut::Finite(c)) if b < c => Ok(()),
        (Cut::Finite(0), Cut::PosInf) | (Cut::NegInf, Cut::Finite(0)) => Ok(()),
        _ => Err(Error::BadCut),
    }
}

/// Which of the three clamp cases `y - x` falls in.
fn region(x: i64, y: i64, b: Cut, c: Cut) -> std::cmp::Ordering {
    let d = Cut::Finite(y - x);
    if d <= b {
        std::cmp::Ordering::Less
    } else if d >= c {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Equal
    }
}

fn finite(c: Cut) -> i64 {
    match c {
        Cut::Finite(v) => v,
        _ => unreachable!("infinite cut reached a finite branch"),
    }
}

fn zig_scalar(x: i64, y: i64, b: Cut, c: Cut) -> i64 {
    match region(x, y, b, c) {
        std::cmp::Ordering::Less => x + finite(b),
        std::cmp::Ordering::Equal => y,
        std::cmp::Ordering::Greater => x + finite(c),
    }
}

fn zag_scalar(x: i64, y: i64, b: Cut, c: Cut) -> i64 {
    match region(x, y, b, c) {
        std::cmp::Ordering::Less => y - finite(b),
        std::cmp::Ordering::Equal => x,
        std::cmp::Ordering::Greater => y - finite(c),
    }
}

pub fn zig_cut(x: &[i64], y: &[i64], b: Cut, c: Cut) -> Result<IntVec> {
    check_cut(b, c)?;
    zip_with(x, y, |p, q| zig_scalar(p, q, b, c))
}

pub fn zag_cut(x: &[i64], y: &[i64], b: Cut, c: Cut) -> Result<IntVec> {
    check_cut(b, c)?;
    zip_with(x, y, |p, q| zag_scalar(p, q, b, c))
}

/// `x ⋎_{bc} y`: coordinatewise `x + clamp(y - x, b, c)`.
pub fn zig(x: &[i64], y: &[i64], b: i64, c: i64) -> Result<IntVec> {
    zig_cut(x, y, Cut::Finite(b), Cut::Finite(c))
}

/// `x ⋏_{bc} y = x + y - (x ⋎_{bc} y)`.
pub fn zag(x: &[i64], y: &[i64], b: i64, c: i64) -> Result<IntVec> {
    zag_cut(x, y, Cut::Finite(b), Cut::Finite(c))
}

/// `μ - λ`.
pub fn delta_coords(lam: &[i64], mu: &[i64]) -> Result<IntVec> {
    zip_with(mu, lam, |a, b| a - b)
}

/// `((π - δ)/2, (π + δ)/2)`.
pub fn pair_from_delta(pi: &[i64], delta: &[i64]) -> Result<(IntVec, IntVec)> {
    same_len(pi, delta)?;
    if pi
        .iter()
        .zip(delta)
        .any(|(p, d)| (p - d).rem_euclid(2) != 0)
    {
        return Err(Error::ParityViolation {
            pi: pi.to_vec(),
            delta: delta.to_vec(),
        });
    }
    Ok((
        zip_with(pi, delta, |p, d| (p - d) / 2)?,
        zip_with(pi, delta, |p, d| (p + d) / 2)?,
    ))
}

/// `d1 ⪯ d2`: `|d1_i - d1_j| ≤ |d2_i - d2_j|` for all `i < j`.
pub fn preorder_leq(d1: &[i64], d2: &[i64]) -> Result<bool> {
    same_len(d1, d2)?;
    let n = d1.len();
    Ok((0..n).all(|i| (i + 1..n).all(|j| (d1[i] - d1[j]).abs() <= (d2[i] - d2[j]).abs())))
}

/// `d1 ⪯ d2` and not `d2 ⪯ d1`.
pub fn preorder_lt(d1: &[i64], d2: &[i64]) -> Result<bool> {
    Ok(preorder_leq(d1, d2)? && !preorder_leq(d2, d1)?)
}

/// `(λ', μ') ⊑ (λ, μ)` computed through `δ = μ - λ`. Both pairs must have the same sum.
pub fn pair_leq(lower: (&[i64], &[i64]), upper: (&[i64], &[i64])) -> Result<bool> {
    preorder_leq(
        &delta_coords(lower.0, lower.1)?,
        &delta_coords(upper.0, upper.1)?,
    )
}

/// `(λ', μ') ⊑ (λ, μ)` computed as `Π(λ', μ') ⊆ Π(λ, μ)`, which holds iff both endpoints lie
/// in `Π(λ, μ)`.
pub fn pair_leq_by_containment(lower: (&[i64], &[i64]), upper: (&[i64], &[i64])) -> Result<bool> {
    Ok(pi_contains(upper.0, upper.1, lower.0)? && pi_contains(upper.0, upper.1, lower.1)?)
}

/// A piecewise-linear map `R → R`, constant outside its breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseContraction {
    /// `(x, φ(x))` with strictly increasing `x`.
    pub knots: Vec<(i64, i64)>,
}

impl PiecewiseContraction {
    pub fn slopes(&self) -> Vec<Ratio<i64>> {
        self.knots
            .windows(2)
            .map(|w| Ratio::new(w[1].1 - w[0].1, w[1].0 - w[0].0))
            .collect()
    }

    pub fn is_contraction(&self) -> bool {
        self.slopes().iter().all(|s| s.numer().abs() <= *s.denom())
    }

    pub fn apply(&self, x: Ratio<i64>) -> Ratio<i64> {
        let Some(&(x0, y0)) = self.knots.first() else {
            return x;
        };
        if x <= Ratio::from(x0) {
            return Ratio::from(y0);
        }
        for w in self.knots.windows(2) {
            let ((a, fa), (b, fb)) = (w[0], w[1]);
            if x <= Ratio::from(b) {
                return Ratio::from(fa) + (x - a) * Ratio::new(fb - fa, b - a);
            }
        }
        Ratio::from(self.knots.last().unwrap().1)
    }
}

/// A contraction `φ` with `φ(d_i) = d2_i` for all `i`, interpolating linearly between the
/// distinct values of `d`; `None` unless `d2 ⪯ d`.
pub fn build_contraction(d: &[i64], d2: &[i64]) -> Option<PiecewiseContraction> {
    if d.len() != d2.len() {
        return None;
    }
    let mut knots: Vec<(i64, i64)> = d.iter().copied().zip(d2.iter().copied()).collect();
    knots.sort_unstable();
    knots.dedup();
    if knots.windows(2).any(|w| w[0].0 == w[1].0) {
        return None;
    }
    let phi = PiecewiseContraction { knots };
    phi.is_contraction().then_some(phi)
}

/// `φ_{bc}(z)`: `z - 2b` below `b`, `-z` between, `z - 2c` above `c`.
pub fn phi_bc(z: i64, b: i64, c: i64) -> Result<i64> {
    if b >= c {
        return Err(Error::BadCut);
    }
    Ok(if z <= b {
        z - 2 * b
    } else if z <= c {
        -z
    } else {
        z - 2 * c
    })
}

/// Candidate cut pairs `(δ_p, δ_p + 1)` and `(δ_p, δ_q)` with `δ_p < δ_q`.
pub fn cover_cuts(delta: &[i64]) -> Vec<(i64, i64)> {
    let values: Vec<i64> = delta
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut cuts = BTreeSet::new();
    for (p, &b) in values.iter().enumerate() {
        cuts.insert((b, b + 1));
        for &c in &values[p + 1..] {
            cuts.insert((b, c));
        }
    }
    cuts.into_iter().collect()
}

/// The pairs `(λ ⋎_{bc} μ, λ ⋏_{bc} μ)` over [`cover_cuts`] that lie strictly below `(λ, μ)`,
/// deduplicated and sorted.
pub fn covers(lam: &[i64], mu: &[i64]) -> Result<Vec<(IntVec, IntVec)>> {
    let delta = delta_coords(lam, mu)?;
    let mut out = BTreeSet::new();
    for (b, c) in cover_cuts(&delta) {
        let z1 = zig(lam, mu, b, c)?;
        let z2 = zag(lam, mu, b, c)?;
        if preorder_lt(&delta_coords(&z1, &z2)?, &delta)? {
            out.insert((z1, z2));
        }
    }
    Ok(out.into_iter().collect())
}

/// Every `(λ'', μ'')` strictly below `(λ, μ)` on the same sum line, up to the symmetries that
/// preserve `⊑` classes: `δ''` is normalized to agree with `δ` in the first coordinate.
pub fn pairs_strictly_below(lam: &[i64], mu: &[i64]) -> Result<Vec<(IntVec, IntVec)>> {
    let delta = delta_coords(lam, mu)?;
    let pi = zip_with(lam, mu, |a, b| a + b)?;
    let n = delta.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let spread = delta.iter().max().unwrap() - delta.iter().min().unwrap();
    let first = delta[0];
    let mut out = Vec::new();
    let mut cur = vec![first; n];
    fn rec(
        k: usize,
        cur: &mut Vec<i64>,
        delta: &[i64],
        first: i64,
        spread: i64,
        out: &mut Vec<IntVec>,
    ) {
        if k == cur.len() {
            out.push(IntVec(cur.clone()));
            return;
        }
        let mut v = first - spread;
        while v <= first + spread {
            if (v - delta[k]).rem_euclid(2) == 0 {
                cur[k] = v;
                // prune on pairs already fixed
                if (0..k).all(|i| (cur[i] - v).abs() <= (delta[i] - delta[k]).abs()) {
                    rec(k + 1, cur, delta, first, spread, out);
                }
            }
            v += 1;
        }
    }
    let mut deltas = Vec::new();
    rec(1, &mut cur, &delta, first, spread, &mut deltas);
    for d in deltas {
        if !preorder_leq(&delta, &d)? {
            out.push(pair_from_delta(&pi, &d)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: &[i64]) -> IntVec {
        IntVec::from(x)
    }

    #[test]
    fn meet_join_examples() {
        assert_eq!(meet(&[1, 3], &[2, 0]).unwrap(), v(&[1, 0]));
        assert_eq!(join(&[1, 3], &[2, 0]).unwrap(), v(&[2, 3]));
        assert_eq!(meet(&[4, 5], &[4, 5]).unwrap(), v(&[4, 5]));
        assert_eq!(meet(&[2, 0], &[1, 1]).unwrap(), v(&[1, 0]));
        assert_eq!(join(&[2, 0], &[1, 1]).unwrap(), v(&[2, 1]));
        assert!(meet(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn averages() {
        assert_eq!(
            floor_avg(&[0, 0, 0, 0], &[0, 2, 3, 5]).unwrap(),
            v(&[0, 1, 1, 2])
        );
        assert_eq!(
            ceil_avg(&[0, 0, 0, 0], &[0, 2, 3, 5]).unwrap(),
            v(&[0, 1, 2, 3])
        );
        assert_eq!(floor_avg(&[0], &[3]).unwrap(), v(&[1]));
        assert_eq!(ceil_avg(&[0], &[3]).unwrap(), v(&[2]));
        assert_eq!(floor_avg(&[-3], &[0]).unwrap(), v(&[-2]));
        assert_eq!(ceil_avg(&[-3], &[0]).unwrap(), v(&[-1]));
        assert_eq!(floor_avg(&[7, -1], &[7, -1]).unwrap(), v(&[7, -1]));
    }

    #[test]
    fn l_distance_examples() {
        assert_eq!(l_distance(&[0, 0, 0, 0], &[0, 3, 5, 8]).unwrap(), 8);
        assert_eq!(l_distance(&[1, 2, 3], &[4, 5, 6]).unwrap(), 0);
        assert_eq!(l_distance(&[], &[]).unwrap(), 0);
    }

    #[test]
    fn decompositions() {
        let p = pi_decompose(&[0, 0, 0, 0], &[0, 2, 3, 5]).unwrap();
        assert_eq!(p.directions, vec![vec![1, 2, 3], vec![2, 3], vec![3]]);
        assert_eq!(p.distances, vec![2, 1, 2]);
        assert_eq!(p.shift, 0);
        let p = pi_decompose(&[0, 0, 0, 0], &[0, 3, 5, 8]).unwrap();
        assert_eq!(p.directions, vec![vec![1, 2, 3], vec![2, 3], vec![3]]);
        assert_eq!(p.distances, vec![3, 2, 3]);
        assert_eq!(p.l_length(), 8);
        let p = pi_decompose(&[2, 7], &[2, 7]).unwrap();
        assert!(p.directions.is_empty());
        assert_eq!(p.shift, 0);
        assert_eq!(p.representatives(), vec![v(&[2, 7])]);
    }

    #[test]
    fn containment_examples() {
        assert!(pi_contains(&[0, 0, 0, 0], &[0, 3, 5, 8], &[0, 0, 2, 2]).unwrap());
        assert!(!pi_contains(&[0, 0], &[0, 2], &[2, 0]).unwrap());
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(
            pi_enumerate(&[0, 0, 0, 0], &[0, 3, 5, 8]).unwrap().len(),
            48
        );
        assert_eq!(
            pi_enumerate(&[0, 0, 0, 0], &[0, 2, 3, 5]).unwrap().len(),
            18
        );
        assert_eq!(pi_enumerate(&[3, 1], &[3, 1]).unwrap(), vec![v(&[3, 1])]);
    }

    #[test]
    fn zig_zag_examples() {
        assert_eq!(
            zig(&[1, 1, 1, 1], &[1, 2, 3, 4], 1, 2).unwrap(),
            v(&[2, 2, 3, 3])
        );
        assert_eq!(
            zag(&[1, 1, 1, 1], &[1, 2, 3, 4], 1, 2).unwrap(),
            v(&[0, 1, 1, 2])
        );
        let (x, y) = ([0, 0, 0, 0], [0, 3, 5, 8]);
        let z1 = zig(&x, &y, 3, 5).unwrap();
        let z2 = zag(&x, &y, 3, 5).unwrap();
        assert_eq!(z1, v(&[3, 3, 5, 5]));
        assert_eq!(z2, v(&[-3, 0, 0, 3]));
        assert_eq!(normalize_class(&z1), v(&[0, 0, 2, 2]));
        assert_eq!(z2.shift(3), v(&[0, 3, 3, 6]));
        assert!(zig(&x, &y, 2, 2).is_err());
    }

    #[test]
    fn infinite_cuts_give_meet_and_join() {
        let (x, y) = ([1, 5, -2], [3, 0, -2]);
        let up = zig_cut(&x, &y, Cut::Finite(0), Cut::PosInf).unwrap();
        let down = zag_cut(&x, &y, Cut::Finite(0), Cut::PosInf).unwrap();
        assert_eq!(up, join(&x, &y).unwrap());
        assert_eq!(down, meet(&x, &y).unwrap());
        assert_eq!(
            zig_cut(&x, &y, Cut::NegInf, Cut::Finite(0)).unwrap(),
            meet(&x, &y).unwrap()
        );
        assert_eq!(
            zag_cut(&x, &y, Cut::NegInf, Cut::Finite(0)).unwrap(),
            join(&x, &y).unwrap()
        );
        assert!(zig_cut(&x, &y, Cut::Finite(1), Cut::PosInf).is_err());
    }

    #[test]
    fn delta_coordinates() {
        assert_eq!(
            delta_coords(&[1, 1, 1, 1], &[1, 2, 3, 4]).unwrap(),
            v(&[0, 1, 2, 3])
        );
        let (l, m) = pair_from_delta(&[2, 3, 4, 5], &[0, 1, 2, 3]).unwrap();
        assert_eq!((l, m), (v(&[1, 1, 1, 1]), v(&[1, 2, 3, 4])));
        assert!(matches!(
            pair_from_delta(&[0, 0], &[1, 0]),
            Err(Error::ParityViolation { .. })
        ));
    }

    #[test]
    fn preorder_examples() {
        assert!(preorder_leq(&[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap());
        let d = delta_coords(&[1, 1, 1, 2], &[1, 2, 3, 3]).unwrap();
        assert_eq!(d, v(&[0, 1, 2, 1]));
        assert!(preorder_lt(&d, &[0, 1, 2, 3]).unwrap());
        assert!(!preorder_leq(&[0, 4], &[0, 2]).unwrap());
    }

    #[test]
    fn contraction_examples() {
        let phi = build_contraction(&[0, 1, 2, 3], &[0, 1, 0, 1]).unwrap();
        assert_eq!(
            phi.slopes(),
            vec![Ratio::from(1), Ratio::from(-1), Ratio::from(1)]
        );
        let id = build_contraction(&[0, 2, 5], &[0, 2, 5]).unwrap();
        assert!(id.slopes().iter().all(|s| *s == Ratio::from(1)));
        assert_eq!(id.apply(Ratio::new(7, 2)), Ratio::new(7, 2));
        assert!(build_contraction(&[0, 2], &[0, 4]).is_none());
        assert!(build_contraction(&[1, 1], &[0, 2]).is_none());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_bc(0, 1, 2).unwrap(), -2);
        assert_eq!(phi_bc(1, 1, 2).unwrap(), -1);
        assert_eq!(phi_bc(8, 3, 5).unwrap(), -2);
        assert!(phi_bc(0, 2, 2).is_err());
    }

    #[test]
    fn covers_contain_worked_examples() {
        let list = covers(&[1, 1, 1, 1], &[1, 2, 3, 4]).unwrap();
        assert!(list.contains(&(v(&[2, 2, 3, 3]), v(&[0, 1, 1, 2]))));
        let list = covers(&[0, 0, 0, 0], &[0, 3, 5, 8]).unwrap();
        assert!(list
            .iter()
            .any(|(a, b)| normalize_class(a) == v(&[0, 0, 2, 2])
                && normalize_class(b) == v(&[0, 3, 3, 6])));
        assert!(covers(&[2, 1, 0], &[4, 3, 2]).unwrap().is_empty());
    }

    #[test]
    fn the_zig_one_two_cover_is_redundant() {
        let (l, m) = (v(&[1, 1, 1, 1]), v(&[1, 2, 3, 4]));
        let (l1, m1) = (v(&[1, 1, 1, 2]), v(&[1, 2, 3, 3]));
        let (l2, m2) = (v(&[2, 2, 3, 3]), v(&[0, 1, 1, 2]));
        let d = delta_coords(&l, &m).unwrap();
        let d1 = delta_coords(&l1, &m1).unwrap();
        let d2 = delta_coords(&l2, &m2).unwrap();
        assert!(preorder_lt(&d1, &d).unwrap());
        assert!(preorder_lt(&d2, &d1).unwrap());
    }

    #[test]
    fn preorder_matches_containment_exhaustively() {
        let vals: Vec<IntVec> = (0..64).map(|k| v(&[k % 4, (k / 4) % 4, k / 16])).collect();
        for l in &vals {
            for m in &vals {
                let pi = l.add(m).unwrap();
                for l2 in &vals {
                    let m2 = pi.sub(l2).unwrap();
                    assert_eq!(
                        pair_leq((l2, &m2), (l, m)).unwrap(),
                        pair_leq_by_containment((l2, &m2), (l, m)).unwrap(),
                        "{l2} {m2} vs {l} {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn half_distance_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.gen_range(1..=6);
            let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-10..=10)).collect();
            let y: Vec<i64> = (0..n).map(|_| rng.gen_range(-10..=10)).collect();
            let l = l_distance(&x, &y).unwrap();
            let h = l_distance(&x, &floor_avg(&x, &y).unwrap()).unwrap();
            assert!(h == l / 2 || h == (l + 1) / 2, "{x:?} {y:?}");
            for z in [
                meet(&x, &y),
                join(&x, &y),
                floor_avg(&x, &y),
                ceil_avg(&x, &y),
            ] {
                assert!(pi_contains(&x, &y, &z.unwrap()).unwrap());
            }
            assert!(pi_contains(&x, &y, &x).unwrap() && pi_contains(&x, &y, &y).unwrap());
        }
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
        (1usize..=5).prop_flat_map(|n| {
            (
                prop::collection::vec(-6i64..=6, n),
                prop::collection::vec(-6i64..=6, n),
            )
        })
    }

    proptest! {
        #[test]
        fn zig_plus_zag_is_sum((x, y) in arb_pair(), b in -8i64..8, w in 1i64..8) {
            let c = b + w;
            let s = zig(&x, &y, b, c).unwrap().add(&zag(&x, &y, b, c).unwrap()).unwrap();
            prop_assert_eq!(s, IntVec::from(&x[..]).add(&y).unwrap());
        }

        #[test]
        fn zig_zag_act_on_delta_by_phi((x, y) in arb_pair(), b in -8i64..8, w in 1i64..8) {
            let c = b + w;
            let d = delta_coords(&x, &y).unwrap();
            let d2 = delta_coords(&zig(&x, &y, b, c).unwrap(), &zag(&x, &y, b, c).unwrap()).unwrap();
            let expected: IntVec = d.iter().map(|&z| phi_bc(z, b, c).unwrap()).collect();
            prop_assert_eq!(&d2, &expected);
            // the new pair lies in the old parallelepiped
            prop_assert!(preorder_leq(&d2, &d).unwrap());
        }

        #[test]
        fn enumeration_is_consistent((x, y) in arb_pair()) {
            let p = pi_decompose(&x, &y).unwrap();
            prop_assert_eq!(p.far_end(), IntVec::from(&y[..]));
            for w in p.directions.windows(2) {
                prop_assert!(w[0].len() > w[1].len() && w[1].iter().all(|i| w[0].contains(i)));
            }
            prop_assert!(p.distances.iter().all(|&l| l >= 1));
            let reps = pi_enumerate(&x, &y).unwrap();
            prop_assert_eq!(reps.len() as u64, p.class_count());
            let classes: BTreeSet<IntVec> = reps.iter().map(|z| normalize_class(z)).collect();
            prop_assert_eq!(classes.len(), reps.len());
            let sum = IntVec::from(&x[..]).add(&y).unwrap();
            for z in &reps {
                prop_assert!(pi_contains(&x, &y, z).unwrap());
                prop_assert!(classes.contains(&normalize_class(&sum.sub(z).unwrap())));
            }
        }

        #[test]
        fn contraction_iff_preorder((d, d2) in arb_pair()) {
            let phi = build_contraction(&d, &d2);
            prop_assert_eq!(phi.is_some(), preorder_leq(&d2, &d).unwrap());
            if let Some(phi) = phi {
                for (a, b) in d.iter().zip(&d2) {
                    prop_assert_eq!(phi.apply(Ratio::from(*a)), Ratio::from(*b));
                }
            }
        }

        #[test]
        fn l_distance_is_a_pseudometric((x, y) in arb_pair(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let z: Vec<i64> = (0..x.len()).map(|_| rng.gen_range(-6..=6)).collect();
            let d = |a: &[i64], b: &[i64]| l_distance(a, b).unwrap();
            prop_assert_eq!(d(&x, &y), d(&y, &x));
            prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
            let shifted = IntVec::from(&x[..]).shift(5);
            prop_assert_eq!(d(&x, &shifted), 0);
        }
    }
}
