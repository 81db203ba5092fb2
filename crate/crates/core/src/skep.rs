//! Skeps: triangular arrays obeying five inequality families, whose corner boundary interleaves
//! two partitions. Also the extension count `SkepExt(g⁺, λ)` and the decomposition of an LR
//! coefficient as a sum of such counts over plus halves.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::error::{same_len, Error, Result};
use crate::grid::{
    corner_path, first_violation, parity_unchecked, MinusGrid, Parity, PlusGrid, Template, TriGrid,
    Violation,
};
use crate::search::GridSystem;
use crate::vector::{IntVec, Partition};

/// Every skep inequality instance that fits inside `Δ_n`, written as `rhs - lhs ≥ 0`.
pub fn skep_templates(n: usize) -> Vec<Template> {
    let mut out = Vec::new();
    for (i, j) in crate::grid::points(n) {
        if i + j + 3 <= n {
            out.push(Template {
                family: 1,
                anchor: (i, j),
                terms: vec![
                    ((i + 1, j), 1),
                    ((i + 2, j + 1), -1),
                    ((i, j), -1),
                    ((i + 1, j + 1), 1),
                ],
            });
            out.push(Template {
                family: 2,
                anchor: (i, j),
                terms: vec![
                    ((i, j + 1), 1),
                    ((i + 1, j + 2), -1),
                    ((i, j), -1),
                    ((i + 1, j + 1), 1),
                ],
            });
        }
        if j >= 2 {
            out.push(Template {
                family: 3,
                anchor: (i, j),
                terms: vec![
                    ((i, j - 1), 1),
                    ((i + 1, j - 2), -1),
                    ((i, j), -1),
                    ((i + 1, j - 1), 1),
                ],
            });
        }
        if j >= 1 && i + j < n {
            out.push(Template {
                family: 4,
                anchor: (i, j),
                terms: vec![
                    ((i + 1, j), 1),
                    ((i + 2, j - 1), -1),
                    ((i, j), -1),
                    ((i + 1, j - 1), 1),
                ],
            });
        }
    }
    if n >= 2 {
        out.push(Template {
            family: 5,
            anchor: (0, 0),
            terms: vec![((0, 0), 1), ((1, 1), -1)],
        });
    }
    out
}

pub fn skep_violation(g: &TriGrid) -> Option<Violation> {
    first_violation(&skep_templates(g.n()), g)
}

pub fn is_skep(g: &TriGrid) -> bool {
    skep_violation(g).is_none()
}

/// A grid known to satisfy the skep inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Skep(TriGrid);

impl Skep {
    pub fn new(g: TriGrid) -> Result<Skep> {
        match skep_violation(&g) {
            None => Ok(Skep(g)),
            Some(v) => Err(Error::InvalidSkep(v.to_string())),
        }
    }

    pub fn grid(&self) -> &TriGrid {
        &self.0
    }

    pub fn into_grid(self) -> TriGrid {
        self.0
    }

    pub fn plus(&self) -> PlusGrid {
        self.0.split().0
    }

    pub fn minus(&self) -> MinusGrid {
        self.0.split().1
    }
}

/// `g(i,j) - g(i+1,j+1)` for `i + j + 2 ≤ n`, indexed as a grid on `Δ_{n-2}`.
pub fn ne_differences(g: &TriGrid) -> Option<TriGrid> {
    let n = g.n();
    (n >= 2).then(|| TriGrid::from_fn(n - 2, |i, j| g.at(i, j) - g.at(i + 1, j + 1)))
}

/// Rows of `g(i-1,j+1) - g(i,j)` along the antidiagonals `i + j = s` for `s = 1..=n`, each
/// listed by increasing `i`.
pub fn nw_rows(g: &TriGrid) -> Vec<Vec<i64>> {
    (1..=g.n())
        .map(|s| {
            (1..=s)
                .map(|i| g.at(i - 1, s - i + 1) - g.at(i, s - i))
                .collect()
        })
        .collect()
}

/// Whether consecutive rows of [`nw_rows`] interlace: `b_i ≤ a_i ≤ b_{i+1}` for row `a` above
/// row `b`.
pub fn is_gt_pattern(rows: &[Vec<i64>]) -> bool {
    rows.windows(2).all(|w| {
        let (a, b) = (&w[0], &w[1]);
        a.iter()
            .enumerate()
            .all(|(i, &x)| b[i] <= x && x <= b[i + 1])
    })
}

fn partial_sums(v: &[i64]) -> Vec<i64> {
    let mut acc = 0;
    v.iter()
        .map(|&x| {
            acc += x;
            acc
        })
        .collect()
}

fn interleave(lam: &[i64], mu: &[i64]) -> Vec<i64> {
    lam.iter().zip(mu).flat_map(|(&a, &b)| [a, b]).collect()
}

/// Corner-path values pinned from `(λ_1, μ_1, λ_2, μ_2, …)` with `g(n,0) = 0`.
fn corner_pinned(lam: &[i64], mu: &[i64]) -> TriGrid {
    let n = lam.len();
    let mut g = TriGrid::zeros(n);
    let path = corner_path(n);
    for (k, s) in partial_sums(&interleave(lam, mu)).into_iter().enumerate() {
        let (i, j) = path[k + 1];
        g.set(i, j, s);
    }
    g
}

fn check_lengths(lam: &[i64], mu: &[i64], nu: &[i64]) -> Result<()> {
    same_len(lam, mu)?;
    same_len(lam, nu)
}

fn skep_system(lam: &[i64], mu: &[i64], nu: &[i64]) -> Option<GridSystem> {
    let n = lam.len();
    let mut g = corner_pinned(lam, mu);
    let diag = partial_sums(nu);
    if diag.last().copied().unwrap_or(0) != g.at(0, n) {
        return None;
    }
    for k in 1..=n {
        g.set(n - k, k, diag[k - 1]);
    }
    let interior: Vec<(usize, usize)> = crate::grid::points(n)
        .filter(|&(i, j)| i >= 1 && j >= 1 && i + j < n)
        .collect();
    Some(GridSystem::new(g, &interior))
}

/// Calls `visit` on every skep with `g(n,0) = 0`, `∂↖ = ν`, `∂1 = λ`, `∂2 = μ`.
pub fn for_each_skep(
    lam: &Partition,
    mu: &Partition,
    nu: &Partition,
    mut visit: impl FnMut(&TriGrid),
) -> Result<()> {
    check_lengths(lam, mu, nu)?;
    let Some(system) = skep_system(lam, mu, nu) else {
        return Ok(());
    };
    system
        .backtracker(&skep_templates(lam.len()))?
        .for_each::<()>(|vals| {
            visit(&system.fill(vals));
            ControlFlow::Continue(())
        });
    Ok(())
}

pub fn enumerate_skeps(lam: &Partition, mu: &Partition, nu: &Partition) -> Result<Vec<Skep>> {
    let mut out = Vec::new();
    for_each_skep(lam, mu, nu, |g| out.push(Skep(g.clone())))?;
    Ok(out)
}

pub fn lr_via_skeps(lam: &Partition, mu: &Partition, nu: &Partition) -> Result<u64> {
    check_lengths(lam, mu, nu)?;
    let Some(system) = skep_system(lam, mu, nu) else {
        return Ok(0);
    };
    Ok(system.backtracker(&skep_templates(lam.len()))?.count())
}

/// All nonzero `c_{λμ}^ν` for `ν` with at most `n = len(λ)` parts, obtained from a single
/// enumeration of skeps whose diagonal is left free. Keys are `ν` as length-`n` vectors.
pub fn lr_expansion_via_skeps(lam: &Partition, mu: &Partition) -> Result<BTreeMap<IntVec, u64>> {
    same_len(lam, mu)?;
    let n = lam.len();
    let pinned = corner_pinned(lam, mu);
    let on_path: Vec<(usize, usize)> = corner_path(n);
    let free: Vec<(usize, usize)> = crate::grid::points(n)
        .filter(|p| !on_path.contains(p))
        .collect();
    let system = GridSystem::new(pinned, &free);
    let mut out = BTreeMap::new();
    system
        .backtracker(&skep_templates(n))?
        .for_each::<()>(|vals| {
            let g = system.fill(vals);
            *out.entry(g.boundary_diag()).or_insert(0) += 1;
            ControlFlow::Continue(())
        });
    Ok(out)
}

/// The grid with `g⁺` in place and the odd corner-path points fixed by `∂1 = λ`; the other
/// minus points are the free variables.
fn extension_system(gp: &PlusGrid, lam: &[i64]) -> Result<GridSystem> {
    let n = gp.n();
    if lam.len() != n {
        return Err(Error::LengthMismatch {
            left: lam.len(),
            right: n,
        });
    }
    let mut minus = MinusGrid::zeros(n);
    let path = corner_path(n);
    let mut pinned_points = Vec::with_capacity(n);
    for k in 1..=n {
        let (pi, pj) = path[2 * k - 2];
        let (qi, qj) = path[2 * k - 1];
        minus.set(qi, qj, lam[k - 1] + gp.at(pi, pj))?;
        pinned_points.push((qi, qj));
    }
    let g = TriGrid::interweave(gp, &minus)?;
    let free: Vec<(usize, usize)> = MinusGrid::domain(n)
        .filter(|p| !pinned_points.contains(p))
        .collect();
    Ok(GridSystem::new(g, &free))
}

/// `SkepExt(g⁺, λ)`: the number of `g⁻` making `(g⁺, g⁻)` a skep with `∂1 = λ`.
pub fn skep_ext(gp: &PlusGrid, lam: &[i64]) -> Result<u64> {
    let system = extension_system(gp, lam)?;
    Ok(system.backtracker(&skep_templates(gp.n()))?.count())
}

pub fn skep_ext_list(gp: &PlusGrid, lam: &[i64]) -> Result<Vec<MinusGrid>> {
    let system = extension_system(gp, lam)?;
    let mut out = Vec::new();
    system
        .backtracker(&skep_templates(gp.n()))?
        .for_each::<()>(|vals| {
            out.push(system.fill(vals).split().1);
            ControlFlow::Continue(())
        });
    Ok(out)
}

/// Candidate plus halves with `g⁺(n,0) = 0`, `∂↖ = ν`, `∂⁺ = π`.
///
/// Interior plus values range over everything allowed by weak decrease along northeast chains;
/// this is a superset of the plus halves of skeps with those boundaries.
pub fn enumerate_gplus(nu: &Partition, pi: &Partition) -> Result<Vec<PlusGrid>> {
    same_len(nu, pi)?;
    let n = nu.len();
    if nu.size() != pi.size() {
        return Ok(Vec::new());
    }
    let mut g = TriGrid::zeros(n);
    let path = corner_path(n);
    let (sp, sn) = (partial_sums(pi), partial_sums(nu));
    for k in 1..=n {
        let (i, j) = path[2 * k];
        g.set(i, j, sp[k - 1]);
        g.set(n - k, k, sn[k - 1]);
    }
    let is_plus = |i: usize, j: usize| parity_unchecked(i, j, n) == Parity::Plus;
    let free: Vec<(usize, usize)> = crate::grid::points(n)
        .filter(|&(i, j)| i >= 1 && j >= 1 && i + j < n && is_plus(i, j))
        .collect();
    let mut templates = Vec::new();
    for &(i, j) in &free {
        // the chain through (i,j) runs from an edge point to a diagonal point
        let m = i.min(j);
        let k = (n - i - j) / 2;
        templates.push(Template {
            family: 0,
            anchor: (i, j),
            terms: vec![((i - m, j - m), 1), ((i, j), -1)],
        });
        templates.push(Template {
            family: 0,
            anchor: (i, j),
            terms: vec![((i, j), 1), ((i + k, j + k), -1)],
        });
        templates.push(Template {
            family: 0,
            anchor: (i, j),
            terms: vec![((i - 1, j - 1), 1), ((i, j), -1)],
        });
        templates.push(Template {
            family: 0,
            anchor: (i, j),
            terms: vec![((i, j), 1), ((i + 1, j + 1), -1)],
        });
    }
    let system = GridSystem::new(g, &free);
    let mut out = Vec::new();
    system.backtracker(&templates)?.for_each::<()>(|vals| {
        out.push(system.fill(vals).split().0);
        ControlFlow::Continue(())
    });
    // boundary chains also have to be monotone
    out.retain(|gp| {
        crate::grid::points(n)
            .filter(|&(i, j)| i + j + 2 <= n && is_plus(i, j))
            .all(|(i, j)| gp.at(i, j) >= gp.at(i + 1, j + 1))
    });
    Ok(out)
}

/// `Σ_{g⁺} SkepExt(g⁺, λ)` over [`enumerate_gplus`]`(ν, λ + μ)`.
pub fn lr_via_sum(lam: &Partition, mu: &Partition, nu: &Partition) -> Result<u64> {
    check_lengths(lam, mu, nu)?;
    let pi = Partition::new(lam.as_intvec().add(mu)?)?;
    let mut total = 0;
    for gp in enumerate_gplus(nu, &pi)? {
        total += skep_ext(&gp, lam)?;
    }
    Ok(total)
}
