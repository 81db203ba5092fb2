//! Hives: triangular arrays obeying the three rhombus inequality families.

use std::ops::ControlFlow;

use crate::error::{same_len, Error, Result};
use crate::grid::{first_violation, Template, TriGrid, Violation};
use crate::search::GridSystem;
use crate::vector::{IntVec, Partition};

/// Every rhombus inequality instance that fits inside `Δ_n`.
pub fn hive_templates(n: usize) -> Vec<Template> {
    let mut out = Vec::new();
    for (i, j) in crate::grid::points(n) {
        if i + j + 2 <= n {
            out.push(Template {
                family: 1,
                anchor: (i, j),
                terms: vec![
                    ((i + 1, j), 1),
                    ((i, j + 1), 1),
                    ((i, j), -1),
                    ((i + 1, j + 1), -1),
                ],
            });
        }
        if i >= 1 && i + j < n {
            out.push(Template {
                family: 2,
                anchor: (i, j),
                terms: vec![
                    ((i, j + 1), 1),
                    ((i, j), 1),
                    ((i - 1, j + 1), -1),
                    ((i + 1, j), -1),
                ],
            });
        }
        if j >= 1 && i + j < n {
            out.push(Template {
                family: 3,
                anchor: (i, j),
                terms: vec![
                    ((i + 1, j), 1),
                    ((i, j), 1),
                    ((i + 1, j - 1), -1),
                    ((i, j + 1), -1),
                ],
            });
        }
    }
    out
}

pub fn hive_violation(g: &TriGrid) -> Option<Violation> {
    first_violation(&hive_templates(g.n()), g)
}

pub fn is_hive(g: &TriGrid) -> bool {
    hive_violation(g).is_none()
}

/// A grid known to satisfy the rhombus inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hive(TriGrid);

impl Hive {
    pub fn new(g: TriGrid) -> Result<Hive> {
        match hive_violation(&g) {
            None => Ok(Hive(g)),
            Some(v) => Err(Error::InvalidHive(v.to_string())),
        }
    }

    pub fn grid(&self) -> &TriGrid {
        &self.0
    }

    pub fn into_grid(self) -> TriGrid {
        self.0
    }

    pub fn boundary_left(&self) -> IntVec {
        self.0.boundary_left()
    }

    pub fn boundary_up(&self) -> IntVec {
        self.0.boundary_up()
    }

    pub fn boundary_diag(&self) -> IntVec {
        self.0.boundary_diag()
    }
}

fn partial_sums(v: &[i64]) -> Vec<i64> {
    v.iter()
        .scan(0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Boundary values pinned, interior left at zero. `None` when the sums disagree.
fn hive_boundary(lam: &[i64], mu: &[i64], nu: &[i64]) -> Option<GridSystem> {
    let n = lam.len();
    let (sl, sm, sn) = (partial_sums(lam), partial_sums(mu), partial_sums(nu));
    let total_lam = sl.last().copied().unwrap_or(0);
    let total_mu = sm.last().copied().unwrap_or(0);
    let total_nu = sn.last().copied().unwrap_or(0);
    if total_nu != total_lam + total_mu {
        return None;
    }
    let mut g = TriGrid::zeros(n);
    for k in 1..=n {
        g.set(n - k, 0, sl[k - 1]);
        g.set(0, k, total_lam + sm[k - 1]);
        g.set(n - k, k, sn[k - 1]);
    }
    let interior: Vec<(usize, usize)> = crate::grid::points(n)
        .filter(|&(i, j)| i >= 1 && j >= 1 && i + j < n)
        .collect();
    Some(GridSystem::new(g, &interior))
}

fn check_lengths(lam: &[i64], mu: &[i64], nu: &[i64]) -> Result<()> {
    same_len(lam, mu)?;
    same_len(lam, nu)
}

/// Calls `visit` on each hive with `h(n,0) = 0`, `∂← = λ`, `∂↑ = μ`, `∂↖ = ν`.
pub fn for_each_hive(
    lam: &Partition,
    mu: &Partition,
    nu: &Partition,
    mut visit: impl FnMut(&TriGrid),
) -> Result<()> {
    check_lengths(lam, mu, nu)?;
    let Some(system) = hive_boundary(lam, mu, nu) else {
        return Ok(());
    };
    let bt = system.backtracker(&hive_templates(lam.len()))?;
    bt.for_each::<()>(|vals| {
        visit(&system.fill(vals));
        ControlFlow::Continue(())
    });
    Ok(())
}

pub fn enumerate_hives(lam: &Partition, mu: &Partition, nu: &Partition) -> Result<Vec<Hive>> {
    let mut out = Vec::new();
    for_each_hive(lam, mu, nu, |g| out.push(Hive(g.clone())))?;
    Ok(out)
}

pub fn lr_via_hives(lam: &Partition, mu: &Partition, nu: &Partition) -> Result<u64> {
    check_lengths(lam, mu, nu)?;
    let Some(system) = hive_boundary(lam, mu, nu) else {
        return Ok(0);
    };
    Ok(system.backtracker(&hive_templates(lam.len()))?.count())
}
