//! Integer functions on the triangle `Δ_n = {(i,j) : i,j ≥ 0, i+j ≤ n}` and on its two parity
//! classes.
//!
//! Coordinates are Cartesian: `(0,0)` is the lower-left corner, `(n,0)` the lower-right and
//! `(0,n)` the upper-left. The serialized form lists rows bottom-up: `rows[j]` holds
//! `g(0,j), g(1,j), …, g(n-j,j)`.

use std::fmt;
use std::marker::PhantomData;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::IntVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    /// `0` on `Δ⁺`, `1` on `Δ⁻`.
    pub fn epsilon(self) -> i64 {
        match self {
            Parity::Plus => 0,
            Parity::Minus => 1,
        }
    }
}

pub fn parity(i: usize, j: usize, n: usize) -> Result<Parity> {
    if i + j > n {
        return Err(Error::OutsideDomain { i, j, n });
    }
    Ok(parity_unchecked(i, j, n))
}

#[inline]
pub(crate) fn parity_unchecked(i: usize, j: usize, n: usize) -> Parity {
    if (i + j) % 2 == n % 2 {
        Parity::Plus
    } else {
        Parity::Minus
    }
}

/// Number of points of `Δ_n`.
pub fn triangle_size(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

#[inline]
pub(crate) fn offset(n: usize, i: usize, j: usize) -> usize {
    // rows 0..j have lengths n+1, n, ..., n-j+2
    j * (n + 1) - j * (j.saturating_sub(1)) / 2 + i
}

/// Points of `Δ_n` in raster order: increasing `j`, then increasing `i`.
pub fn points(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(move |j| (0..=n - j).map(move |i| (i, j)))
}

/// The corner path `p_0 = (n,0), p_1 = (n-1,0), …, p_n = (0,0), p_{n+1} = (0,1), …, p_{2n} = (0,n)`.
pub fn corner_path(n: usize) -> Vec<(usize, usize)> {
    let mut path: Vec<(usize, usize)> = (0..=n).rev().map(|i| (i, 0)).collect();
    path.extend((1..=n).map(|j| (0, j)));
    path
}

/// A total function `Δ_n → Z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TriGrid {
    n: usize,
    values: Vec<i64>,
}

impl TriGrid {
    pub fn zeros(n: usize) -> Self {
        TriGrid {
            n,
            values: vec![0; triangle_size(n)],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let values = points(n).map(|(i, j)| f(i, j)).collect();
        TriGrid { n, values }
    }

    /// Rows listed bottom-up (`rows[j]` has length `n - j + 1`).
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Malformed("a grid needs at least one row".into()));
        }
        let n = rows.len() - 1;
        for (j, row) in rows.iter().enumerate() {
            if row.len() != n - j + 1 {
                return Err(Error::Malformed(format!(
                    "row {j} has length {}, expected {}",
                    row.len(),
                    n - j + 1
                )));
            }
        }
        Ok(TriGrid {
            n,
            values: rows.into_iter().flatten().collect(),
        })
    }

    /// Rows listed top-down, the way triangular arrays are usually printed
    /// (first row is `g(0,n)`, last row is `g(0,0) … g(n,0)`).
    pub fn from_printed(rows: &[&[i64]]) -> Result<Self> {
        TriGrid::from_rows(rows.iter().rev().map(|r| r.to_vec()).collect())
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..=self.n)
            .map(|j| (0..=self.n - j).map(|i| self.at(i, j)).collect())
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        (i + j <= self.n).then(|| self.values[offset(self.n, i, j)])
    }

    /// Panics outside `Δ_n`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i + j <= self.n);
        self.values[offset(self.n, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        assert!(i + j <= self.n, "({i},{j}) outside Δ_{}", self.n);
        self.values[offset(self.n, i, j)] = v;
    }

    pub fn map(&self, f: impl Fn(i64) -> i64) -> TriGrid {
        TriGrid {
            n: self.n,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Shifted so that `g(n,0) = 0`.
    pub fn normalized(&self) -> TriGrid {
        let base = self.at(self.n, 0);
        self.map(|v| v - base)
    }

    /// `(g|Δ⁺, g|Δ⁻)`.
    pub fn split(&self) -> (PlusGrid, MinusGrid) {
        (HalfGrid::restrict(self), HalfGrid::restrict(self))
    }

    /// The unique grid restricting to `plus` and `minus`.
    pub fn interweave(plus: &PlusGrid, minus: &MinusGrid) -> Result<TriGrid> {
        if plus.n != minus.n {
            return Err(Error::SideMismatch {
                left: plus.n,
                right: minus.n,
            });
        }
        let n = plus.n;
        Ok(TriGrid::from_fn(n, |i, j| {
            match parity_unchecked(i, j, n) {
                Parity::Plus => plus.values[offset(n, i, j)],
                Parity::Minus => minus.values[offset(n, i, j)],
            }
        }))
    }

    /// `(g(p_1)-g(p_0), …, g(p_{2n})-g(p_{2n-1}))` along the corner path.
    pub fn boundary_corner(&self) -> IntVec {
        corner_path(self.n)
            .windows(2)
            .map(|w| self.at(w[1].0, w[1].1) - self.at(w[0].0, w[0].1))
            .collect()
    }

    /// `(g((n-1),1)-g(n,0), …, g(0,n)-g(1,(n-1)))`.
    pub fn boundary_diag(&self) -> IntVec {
        diag_of(self.n, |i, j| self.at(i, j))
    }

    /// First half of the corner boundary: the bottom edge read right to left.
    pub fn boundary_left(&self) -> IntVec {
        self.boundary_corner()[..self.n].into()
    }

    /// Second half of the corner boundary: the left edge read bottom to top.
    pub fn boundary_up(&self) -> IntVec {
        self.boundary_corner()[self.n..].into()
    }

    /// Odd-indexed entries `(z_1, z_3, …)` of the corner boundary.
    pub fn boundary_1(&self) -> IntVec {
        self.boundary_corner().iter().step_by(2).copied().collect()
    }

    /// Even-indexed entries `(z_2, z_4, …)` of the corner boundary.
    pub fn boundary_2(&self) -> IntVec {
        self.boundary_corner()
            .iter()
            .skip(1)
            .step_by(2)
            .copied()
            .collect()
    }

    /// `∂1 + ∂2`; depends only on the plus half.
    pub fn boundary_plus(&self) -> IntVec {
        plus_of(self.n, |i, j| self.at(i, j))
    }
}

fn diag_of(n: usize, g: impl Fn(usize, usize) -> i64) -> IntVec {
    (1..=n).map(|k| g(n - k, k) - g(n - k + 1, k - 1)).collect()
}

fn plus_of(n: usize, g: impl Fn(usize, usize) -> i64) -> IntVec {
    let path = corner_path(n);
    (1..=n)
        .map(|k| {
            let (a, b) = (path[2 * k], path[2 * k - 2]);
            g(a.0, a.1) - g(b.0, b.1)
        })
        .collect()
}

impl fmt::Debug for TriGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TriGrid{:?}", self.rows())
    }
}

/// Printed top-down, one row per line.
impl fmt::Display for TriGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (0..=self.n).rev() {
            let row: Vec<String> = (0..=self.n - j)
                .map(|i| self.at(i, j).to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TriGridRepr {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl Serialize for TriGrid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TriGridRepr {
            n: self.n,
            rows: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TriGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TriGridRepr::deserialize(d)?;
        if repr.rows.len() != repr.n + 1 {
            return Err(serde::de::Error::custom(format!(
                "expected {} rows for n = {}, found {}",
                repr.n + 1,
                repr.n,
                repr.rows.len()
            )));
        }
        TriGrid::from_rows(repr.rows).map_err(serde::de::Error::custom)
    }
}

pub fn grid_to_json(g: &TriGrid) -> String {
    serde_json::to_string(g).expect("grid serialization is infallible")
}

pub fn grid_from_json(text: &str) -> Result<TriGrid> {
    Ok(serde_json::from_str(text)?)
}

/// A linear inequality `Σ coeff·g(point) ≥ 0` anchored at a grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    /// One-based index of the inequality family.
    pub family: u8,
    pub anchor: (usize, usize),
    pub terms: Vec<((usize, usize), i64)>,
}

impl Template {
    pub fn slack(&self, g: &TriGrid) -> i64 {
        self.terms.iter().map(|&((i, j), c)| c * g.at(i, j)).sum()
    }

    pub fn violation(&self, g: &TriGrid) -> Option<Violation> {
        let slack = self.slack(g);
        (slack < 0).then_some(Violation {
            family: self.family,
            anchor: self.anchor,
            slack,
        })
    }
}

/// A failed instance of a [`Template`]; `slack` is negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub family: u8,
    pub anchor: (usize, usize),
    pub slack: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "inequality {} at ({},{}) fails by {}",
            self.family, self.anchor.0, self.anchor.1, -self.slack
        )
    }
}

/// First violated template in list order.
pub fn first_violation(templates: &[Template], g: &TriGrid) -> Option<Violation> {
    templates.iter().find_map(|t| t.violation(g))
}

/// Marker for the parity class a [`HalfGrid`] lives on.
pub trait HalfKind: Copy + Default + Eq + fmt::Debug + Send + Sync + 'static {
    const PARITY: Parity;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PlusKind;
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MinusKind;

impl HalfKind for PlusKind {
    const PARITY: Parity = Parity::Plus;
}
impl HalfKind for MinusKind {
    const PARITY: Parity = Parity::Minus;
}

/// A total function on one parity class `Δ_n^±`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HalfGrid<K: HalfKind> {
    n: usize,
    // laid out like a TriGrid; entries of the other parity are always zero
    values: Vec<i64>,
    _kind: PhantomData<K>,
}

pub type PlusGrid = HalfGrid<PlusKind>;
pub type MinusGrid = HalfGrid<MinusKind>;

impl<K: HalfKind> HalfGrid<K> {
    pub fn zeros(n: usize) -> Self {
        HalfGrid {
            n,
            values: vec![0; triangle_size(n)],
            _kind: PhantomData,
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut h = Self::zeros(n);
        for (i, j) in Self::domain(n) {
            h.values[offset(n, i, j)] = f(i, j);
        }
        h
    }

    fn restrict(g: &TriGrid) -> Self {
        Self::from_fn(g.n, |i, j| g.at(i, j))
    }

    /// The points of this parity class in raster order.
    pub fn domain(n: usize) -> impl Iterator<Item = (usize, usize)> {
        points(n).filter(move |&(i, j)| parity_unchecked(i, j, n) == K::PARITY)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        (i + j <= self.n && parity_unchecked(i, j, self.n) == K::PARITY)
            .then(|| self.values[offset(self.n, i, j)])
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i + j <= self.n && parity_unchecked(i, j, self.n) == K::PARITY);
        self.values[offset(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) -> Result<()> {
        if i + j > self.n {
            return Err(Error::OutsideDomain { i, j, n: self.n });
        }
        if parity_unchecked(i, j, self.n) != K::PARITY {
            return Err(Error::WrongParity { i, j });
        }
        self.values[offset(self.n, i, j)] = v;
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        Self::domain(self.n).map(move |(i, j)| (i, j, self.at(i, j)))
    }

    pub fn map(&self, f: impl Fn(i64) -> i64) -> Self {
        Self::from_fn(self.n, |i, j| f(self.at(i, j)))
    }
}

impl PlusGrid {
    pub fn boundary_diag(&self) -> IntVec {
        diag_of(self.n, |i, j| self.at(i, j))
    }

    /// The outer boundary: telescoped even steps of the corner path.
    pub fn boundary_plus(&self) -> IntVec {
        plus_of(self.n, |i, j| self.at(i, j))
    }

    /// Shifted so that `g⁺(n,0) = 0`.
    pub fn normalized(&self) -> PlusGrid {
        let base = self.at(self.n, 0);
        self.map(|v| v - base)
    }
}

impl<K: HalfKind> fmt::Debug for HalfGrid<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<_> = self.entries().collect();
        write!(f, "HalfGrid<{:?}>{{n: {}, {:?}}}", K::PARITY, self.n, pts)
    }
}

#[derive(Serialize, Deserialize)]
struct PointValue {
    i: usize,
    j: usize,
    v: i64,
}

#[derive(Serialize, Deserialize)]
struct HalfGridRepr {
    n: usize,
    points: Vec<PointValue>,
}

impl<K: HalfKind> Serialize for HalfGrid<K> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HalfGridRepr {
            n: self.n,
            points: self
                .entries()
                .map(|(i, j, v)| PointValue { i, j, v })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, K: HalfKind> Deserialize<'de> for HalfGrid<K> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = HalfGridRepr::deserialize(d)?;
        let mut h = HalfGrid::zeros(repr.n);
        let mut seen = vec![false; triangle_size(repr.n)];
        for p in repr.points {
            h.set(p.i, p.j, p.v).map_err(D::Error::custom)?;
            let o = offset(repr.n, p.i, p.j);
            if std::mem::replace(&mut seen[o], true) {
                return Err(D::Error::custom(format!(
                    "duplicate point ({},{})",
                    p.i, p.j
                )));
            }
        }
        if let Some((i, j)) = Self::domain(repr.n).find(|&(i, j)| !seen[offset(repr.n, i, j)]) {
            return Err(D::Error::custom(format!("missing point ({i},{j})")));
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example() -> TriGrid {
        TriGrid::from_printed(&[
            &[11],
            &[11, 10],
            &[11, 10, 8],
            &[11, 9, 8, 5],
            &[10, 9, 7, 4, 0],
        ])
        .unwrap()
    }

    #[test]
    fn coordinates_follow_cartesian_convention() {
        let g = example();
        assert_eq!(g.at(0, 0), 10);
        assert_eq!(g.at(4, 0), 0);
        assert_eq!(g.at(0, 4), 11);
        assert_eq!(g.at(3, 1), 5);
        assert_eq!(g.get(3, 2), None);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(4, 0, 4).unwrap(), Parity::Plus);
        assert_eq!(parity(0, 0, 1).unwrap(), Parity::Minus);
        assert_eq!(parity(1, 1, 4).unwrap(), Parity::Plus);
        assert_eq!(Parity::Minus.epsilon(), 1);
        assert!(matches!(parity(3, 2, 4), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn parity_classes_partition_the_triangle() {
        for n in 0..=8 {
            let plus = PlusGrid::domain(n).count();
            let minus = MinusGrid::domain(n).count();
            assert_eq!(plus + minus, triangle_size(n));
            assert!(PlusGrid::domain(n).all(|p| !MinusGrid::domain(n).any(|q| q == p)));
        }
    }

    #[test]
    fn split_matches_printed_halves() {
        let (plus, minus) = example().split();
        let plus_vals: Vec<i64> = plus.entries().map(|e| e.2).collect();
        let minus_vals: Vec<i64> = minus.entries().map(|e| e.2).collect();
        // raster order: bottom row first
        assert_eq!(plus_vals, vec![10, 7, 0, 9, 5, 11, 8, 10, 11]);
        assert_eq!(minus_vals, vec![9, 4, 11, 8, 10, 11]);
        assert_eq!(plus.get(1, 0), None);
        assert_eq!(TriGrid::interweave(&plus, &minus).unwrap(), example());
    }

    #[test]
    fn split_of_zero() {
        let (p, m) = TriGrid::zeros(3).split();
        assert_eq!(p, PlusGrid::zeros(3));
        assert_eq!(m, MinusGrid::zeros(3));
        assert_eq!(TriGrid::interweave(&p, &m).unwrap(), TriGrid::zeros(3));
    }

    #[test]
    fn interweave_rejects_mismatched_sides() {
        assert!(TriGrid::interweave(&PlusGrid::zeros(2), &MinusGrid::zeros(3)).is_err());
    }

    #[test]
    fn half_grid_set_checks_parity() {
        let mut p = PlusGrid::zeros(4);
        assert!(p.set(1, 1, 3).is_ok());
        assert!(matches!(p.set(1, 0, 3), Err(Error::WrongParity { .. })));
        assert!(matches!(p.set(5, 0, 3), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn boundaries_of_example() {
        let g = example();
        assert_eq!(&*g.boundary_diag(), &[5, 3, 2, 1]);
        assert_eq!(&*g.boundary_corner(), &[4, 3, 2, 1, 1, 0, 0, 0]);
        assert_eq!(&*g.boundary_1(), &[4, 2, 1, 0]);
        assert_eq!(&*g.boundary_2(), &[3, 1, 0, 0]);
        assert_eq!(&*g.boundary_plus(), &[7, 3, 1, 0]);
        assert_eq!(&*g.boundary_left(), &[4, 3, 2, 1]);
        assert_eq!(&*g.boundary_up(), &[1, 0, 0, 0]);
        let (plus, _) = g.split();
        assert_eq!(plus.boundary_diag(), g.boundary_diag());
        assert_eq!(plus.boundary_plus(), g.boundary_plus());
    }

    #[test]
    fn zero_grid_boundaries() {
        let g = TriGrid::zeros(3);
        assert!(g.boundary_corner().iter().all(|&z| z == 0));
        assert!(g.boundary_diag().iter().all(|&z| z == 0));
    }

    #[test]
    fn json_fixture_format() {
        let g = example();
        let text = grid_to_json(&g);
        assert_eq!(
            text,
            r#"{"n":4,"rows":[[10,9,7,4,0],[11,9,8,5],[11,10,8],[11,10],[11]]}"#
        );
        assert_eq!(grid_from_json(&text).unwrap(), g);
        let one = TriGrid::zeros(1);
        assert_eq!(grid_from_json(&grid_to_json(&one)).unwrap(), one);
    }

    #[test]
    fn json_errors() {
        assert!(grid_from_json(r#"{"n":2,"rows":[[1,2,3],[4,5]"#).is_err());
        assert!(grid_from_json(r#"{"n":2,"rows":[[1,2,3],[4],[5]]}"#).is_err());
        assert!(grid_from_json(r#"{"n":2,"rows":[[1,2,3],[4,5]]}"#).is_err());
    }

    #[test]
    fn half_grid_json() {
        let (plus, minus) = example().split();
        let text = serde_json::to_string(&minus).unwrap();
        assert!(text.starts_with(r#"{"n":4,"points":[{"i":1,"j":0,"v":9}"#));
        let back: MinusGrid = serde_json::from_str(&text).unwrap();
        assert_eq!(back, minus);
        // wrong parity and missing points are rejected
        assert!(serde_json::from_str::<PlusGrid>(&text).is_err());
        assert!(
            serde_json::from_str::<PlusGrid>(r#"{"n":1,"points":[{"i":1,"j":0,"v":0}]}"#).is_err()
        );
        let ptext = serde_json::to_string(&plus).unwrap();
        assert_eq!(serde_json::from_str::<PlusGrid>(&ptext).unwrap(), plus);
    }

    fn arb_grid() -> impl Strategy<Value = TriGrid> {
        (0usize..=5).prop_flat_map(|n| {
            prop::collection::vec(-20i64..20, triangle_size(n))
                .prop_map(move |v| TriGrid::from_fn(n, |i, j| v[offset(n, i, j)]))
        })
    }

    proptest! {
        #[test]
        fn split_interweave_roundtrip(g in arb_grid()) {
            let (p, m) = g.split();
            let back = TriGrid::interweave(&p, &m).unwrap();
            prop_assert_eq!(back.split(), (p, m));
            prop_assert_eq!(back, g);
        }

        #[test]
        fn json_roundtrip(g in arb_grid()) {
            prop_assert_eq!(grid_from_json(&grid_to_json(&g)).unwrap(), g);
        }

        #[test]
        fn telescoping_identities(g in arb_grid()) {
            let n = g.n();
            let top = g.at(0, n) - g.at(n, 0);
            prop_assert_eq!(g.boundary_corner().total(), top);
            prop_assert_eq!(g.boundary_diag().total(), top);
            prop_assert_eq!(
                g.boundary_diag().total(),
                g.boundary_left().total() + g.boundary_up().total()
            );
            let (plus, _) = g.split();
            prop_assert_eq!(plus.boundary_plus(), g.boundary_1().add(&g.boundary_2()).unwrap());
        }
    }
}
