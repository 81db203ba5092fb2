//! Backtracking enumeration of integer points of a polytope given by linear inequalities.
//!
//! Variables are assigned in index order. Each inequality is attached to the last variable it
//! mentions, so when that variable is reached every other term is already known and the
//! inequality becomes a one-sided interval bound.

use std::ops::ControlFlow;

use crate::error::{Error, Result};

/// `constant + Σ coeff·x_var ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub terms: Vec<(usize, i64)>,
    pub constant: i64,
}

#[derive(Clone, Copy, Debug)]
struct Bound {
    coeff: i64,
    start: usize,
    len: usize,
    constant: i64,
}

#[derive(Clone, Debug)]
pub struct Backtracker {
    nvars: usize,
    infeasible: bool,
    // bounds[var] applies to var once all earlier variables are fixed
    bounds: Vec<Vec<Bound>>,
    // flattened (var, coeff) of the already-fixed terms of each bound
    terms: Vec<(usize, i64)>,
}

impl Backtracker {
    /// Fails with `Unbounded` if some variable has no lower or no upper bound at the time it is
    /// assigned. `names` labels variables in that error.
    pub fn new(
        nvars: usize,
        inequalities: &[Inequality],
        names: impl Fn(usize) -> String,
    ) -> Result<Self> {
        let mut bounds: Vec<Vec<Bound>> = vec![Vec::new(); nvars];
        let mut terms = Vec::new();
        let mut infeasible = false;
        for ineq in inequalities {
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(ineq.terms.len());
            for &(v, c) in &ineq.terms {
                assert!(v < nvars, "variable {v} out of range");
                match merged.iter_mut().find(|t| t.0 == v) {
                    Some(t) => t.1 += c,
                    None => merged.push((v, c)),
                }
            }
            merged.retain(|t| t.1 != 0);
            let Some(&(last, coeff)) = merged.iter().max_by_key(|t| t.0) else {
                infeasible |= ineq.constant < 0;
                continue;
            };
            let start = terms.len();
            terms.extend(merged.iter().filter(|t| t.0 != last));
            bounds[last].push(Bound {
                coeff,
                start,
                len: terms.len() - start,
                constant: ineq.constant,
            });
        }
        for (v, bs) in bounds.iter().enumerate() {
            let lower = bs.iter().any(|b| b.coeff > 0);
            let upper = bs.iter().any(|b| b.coeff < 0);
            if !(lower && upper) {
                return Err(Error::Unbounded(names(v)));
            }
        }
        Ok(Backtracker {
            nvars,
            infeasible,
            bounds,
            terms,
        })
    }

    fn interval(&self, var: usize, values: &[i64]) -> (i64, i64) {
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        for b in &self.bounds[var] {
            let rest = b.constant
                + self.terms[b.start..b.start + b.len]
                    .iter()
                    .map(|&(v, c)| c * values[v])
                    .sum::<i64>();
            // coeff * x + rest >= 0
            if b.coeff > 0 {
                lo = lo.max(div_ceil(-rest, b.coeff));
            } else {
                hi = hi.min(div_floor(rest, -b.coeff));
            }
        }
        (lo, hi)
    }

    /// Calls `visit` on every solution in lexicographic order until it breaks.
    pub fn for_each<B>(&self, mut visit: impl FnMut(&[i64]) -> ControlFlow<B>) -> Option<B> {
        if self.infeasible {
            return None;
        }
        let mut values = vec![0i64; self.nvars];
        if self.nvars == 0 {
            return visit(&values).break_value();
        }
        let mut his = vec![0i64; self.nvars];
        let mut var = 0usize;
        let (lo, hi) = self.interval(0, &values);
        values[0] = lo;
        his[0] = hi;
        loop {
            if values[var] > his[var] {
                if var == 0 {
                    return None;
                }
                var -= 1;
                values[var] += 1;
                continue;
            }
            if var + 1 == self.nvars {
                if let ControlFlow::Break(b) = visit(&values) {
                    return Some(b);
                }
                values[var] += 1;
                continue;
            }
            var += 1;
            let (lo, hi) = self.interval(var, &values);
            values[var] = lo;
            his[var] = hi;
        }
    }

    pub fn count(&self) -> u64 {
        let mut n = 0u64;
        self.for_each::<()>(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }

    #[cfg(test)]
    pub fn solutions(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        self.for_each::<()>(|v| {
            out.push(v.to_vec());
            ControlFlow::Continue(())
        });
        out
    }
}

fn raster(n: usize, i: usize, j: usize) -> usize {
    j * (n + 1) - j * j.saturating_sub(1) / 2 + i
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Builds a [`Backtracker`] over the free points of a triangular grid.
///
/// Pinned points of each template become constants.
pub(crate) struct GridSystem {
    pub n: usize,
    pub pinned: crate::grid::TriGrid,
    pub is_free: Vec<bool>,
    pub free_points: Vec<(usize, usize)>,
    var_of: Vec<usize>,
}

impl GridSystem {
    /// `free` lists free points; they are ordered in raster order regardless of input order.
    pub fn new(pinned: crate::grid::TriGrid, free: &[(usize, usize)]) -> Self {
        let n = pinned.n();
        let size = crate::grid::triangle_size(n);
        let mut is_free = vec![false; size];
        for &(i, j) in free {
            is_free[raster(n, i, j)] = true;
        }
        let mut free_points = Vec::new();
        let mut var_of = vec![usize::MAX; size];
        for (k, p) in crate::grid::points(n).enumerate() {
            if is_free[k] {
                var_of[k] = free_points.len();
                free_points.push(p);
            }
        }
        GridSystem {
            n,
            pinned,
            is_free,
            free_points,
            var_of,
        }
    }

    pub fn inequality(&self, template: &[((usize, usize), i64)]) -> Inequality {
        let mut terms = Vec::new();
        let mut constant = 0;
        for &((i, j), c) in template {
            let k = raster(self.n, i, j);
            if self.is_free[k] {
                terms.push((self.var_of[k], c));
            } else {
                constant += c * self.pinned.at(i, j);
            }
        }
        Inequality { terms, constant }
    }

    pub fn backtracker(&self, templates: &[crate::grid::Template]) -> Result<Backtracker> {
        let ineqs: Vec<Inequality> = templates
            .iter()
            .map(|t| self.inequality(&t.terms))
            .collect();
        Backtracker::new(self.free_points.len(), &ineqs, |v| {
            let (i, j) = self.free_points[v];
            format!("g({i},{j})")
        })
    }

    /// The pinned grid with free points replaced by `values`.
    pub fn fill(&self, values: &[i64]) -> crate::grid::TriGrid {
        let mut g = self.pinned.clone();
        for (&(i, j), &v) in self.free_points.iter().zip(values) {
            g.set(i, j, v);
        }
        g
    }
}
