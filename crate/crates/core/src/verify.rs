//! Verification campaigns tying the models together. Each returns a [`VerifyReport`]; failures
//! carry a witness that reproduces when the named instance is re-run.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{same_len, Error, Result};
use crate::grid::{PlusGrid, TriGrid};
use crate::hive::lr_via_hives;
use crate::lattice::{covers, pair_leq, pairs_strictly_below, pi_contains, pi_enumerate};
use crate::lconvex::{check_llog_concave_window, FuncMode, Window, WindowFunc};
use crate::octahedron::skep_flip;
use crate::oracle::{
    lr_tableaux, schur_counterexample, schur_counterexample_window, schur_llc_check, SchurMode,
};
use crate::skep::{
    lr_expansion_via_skeps, lr_via_skeps, lr_via_sum, skep_ext, skep_ext_list, Skep,
};
use crate::vector::{is_partition, pad, partitions_in_box, partitions_of, IntVec, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub campaign: String,
    pub instance: String,
    pub status: Status,
    pub checked: u64,
    pub failures: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerifyReport {
    fn new(campaign: &str, instance: String) -> Self {
        VerifyReport {
            campaign: campaign.to_string(),
            instance,
            status: Status::Pass,
            checked: 0,
            failures: 0,
            witness: None,
            note: None,
        }
    }

    fn fail(&mut self, witness: Value) {
        self.failures += 1;
        self.status = Status::Fail;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    /// Folds sub-reports in order; the first failing one supplies the witness.
    fn absorb(&mut self, other: VerifyReport) {
        self.checked += other.checked;
        self.failures += other.failures;
        if other.status == Status::Fail {
            self.status = Status::Fail;
            if self.witness.is_none() {
                self.witness =
                    Some(json!({ "instance": other.instance, "witness": other.witness }));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// One line of JSON, no trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        write!(
            f,
            "{:<22} {:<7} checked={:<8} failures={:<4} {}",
            self.campaign, status, self.checked, self.failures, self.instance
        )?;
        if let Some(w) = &self.witness {
            write!(f, " witness={w}")?;
        }
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

fn csv(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Skep expansion of `s_λ s_μ` with both padded to length `2n`, which sees every `ν`.
fn padded_expansion(lam: &[i64], mu: &[i64]) -> Result<BTreeMap<IntVec, u64>> {
    let k = lam.len();
    lr_expansion_via_skeps(&Partition::new(pad(lam, k))?, &Partition::new(pad(mu, k))?)
}

fn check_lpp_pair(lam: &[i64], mu: &[i64], lam2: &[i64], mu2: &[i64]) -> Result<()> {
    same_len(lam, mu)?;
    same_len(lam, lam2)?;
    same_len(lam, mu2)?;
    let sum_ok = (0..lam.len()).all(|i| lam[i] + mu[i] == lam2[i] + mu2[i]);
    if !sum_ok || !pi_contains(lam, mu, lam2)? {
        return Err(Error::Incomparable(lam2.to_vec()));
    }
    Ok(())
}

/// Whether `λ'` stays in `Π` after padding, i.e. lies between `λ` and `μ` entrywise. Only then
/// does the inequality hold for symmetric functions rather than for polynomials in `n` variables.
fn in_padded_pi(lam: &[i64], mu: &[i64], lam2: &[i64]) -> bool {
    (0..lam.len()).all(|i| lam[i].min(mu[i]) <= lam2[i] && lam2[i] <= lam[i].max(mu[i]))
}

/// Compares coefficients over the union of supports. Unless `all_parts`, only `ν` with at most
/// `n` nonzero parts take part, which is the comparison in `n` variables.
fn compare_expansions(
    report: &mut VerifyReport,
    n: usize,
    base: &BTreeMap<IntVec, u64>,
    other: &BTreeMap<IntVec, u64>,
    all_parts: bool,
) {
    let keys: BTreeSet<&IntVec> = base.keys().chain(other.keys()).collect();
    for nu in keys {
        if !all_parts && nu[n..].iter().any(|&x| x != 0) {
            continue;
        }
        report.checked += 1;
        let (c, c2) = (
            base.get(nu).copied().unwrap_or(0),
            other.get(nu).copied().unwrap_or(0),
        );
        if c > c2 {
            report.fail(json!({ "nu": nu.0, "c": c, "c_prime": c2, "all_parts": all_parts }));
        }
    }
}

fn compare_instance(
    report: &mut VerifyReport,
    (lam, mu, lam2): (&[i64], &[i64], &[i64]),
    base: &BTreeMap<IntVec, u64>,
    other: &BTreeMap<IntVec, u64>,
) {
    compare_expansions(report, lam.len(), base, other, in_padded_pi(lam, mu, lam2));
}

fn oracle_agrees(
    report: &mut VerifyReport,
    lam: &[i64],
    mu: &[i64],
    expansion: &BTreeMap<IntVec, u64>,
) -> Result<()> {
    let k = lam.len();
    let (l, m) = (Partition::new(pad(lam, k))?, Partition::new(pad(mu, k))?);
    for (nu, &c) in expansion {
        let truth = lr_tableaux(&l, &m, &Partition::new(nu.clone())?);
        if truth != c {
            report.fail(json!({ "oracle_mismatch": { "lam": lam, "mu": mu, "nu": nu.0, "skeps": c, "tableaux": truth } }));
        }
    }
    Ok(())
}

/// Checks `c_{λμ}^ν ≤ c_{λ'μ'}^ν`, given `λ' ∈ Π(λ,μ)` and `λ' + μ' = λ + μ`.
///
/// Every `ν` with at most `n` parts is compared. When `λ'` lies entrywise between `λ` and `μ`,
/// `ν` with up to `2n` parts are compared as well. With `oracle`, both expansions are also
/// checked against the tableau count.
pub fn verify_lpp(
    lam: &Partition,
    mu: &Partition,
    lam2: &Partition,
    mu2: &Partition,
    oracle: bool,
) -> Result<VerifyReport> {
    check_lpp_pair(lam, mu, lam2, mu2)?;
    let instance = format!(
        "lam={} mu={} lam2={} mu2={}",
        csv(lam),
        csv(mu),
        csv(lam2),
        csv(mu2)
    );
    let mut report = VerifyReport::new("lpp", instance);
    let base = padded_expansion(lam, mu)?;
    let other = padded_expansion(lam2, mu2)?;
    compare_instance(&mut report, (lam, mu, lam2), &base, &other);
    if oracle {
        oracle_agrees(&mut report, lam, mu, &base)?;
        oracle_agrees(&mut report, lam2, mu2, &other)?;
    }
    Ok(report)
}

/// Every `(λ', μ')` with `λ' ∈ Π(λ,μ)`, `λ' + μ' = λ + μ` and both nonnegative partitions.
pub fn lpp_partners(lam: &[i64], mu: &[i64]) -> Result<Vec<(IntVec, IntVec)>> {
    let n = lam.len();
    let pi: Vec<i64> = lam.iter().zip(mu).map(|(a, b)| a + b).collect();
    let mut out = Vec::new();
    if n == 0 {
        out.push((IntVec::zeros(0), IntVec::zeros(0)));
        return Ok(out);
    }
    for r in pi_enumerate(lam, mu)? {
        for t in -r[n - 1]..=pi[n - 1] - r[n - 1] {
            let l2 = r.shift(t);
            let m2: IntVec = pi.iter().zip(l2.iter()).map(|(p, a)| p - a).collect();
            if is_partition(&l2) && is_partition(&m2) {
                out.push((l2, m2));
            }
        }
    }
    Ok(out)
}

/// [`verify_lpp`] over all partitions `λ, μ` with `n` parts at most `max_entry` and every
/// partner pair from [`lpp_partners`].
pub fn sweep_lpp(n: usize, max_entry: i64) -> Result<VerifyReport> {
    let parts = partitions_in_box(n, max_entry);
    let mut instances = Vec::new();
    for lam in &parts {
        for mu in &parts {
            for (l2, m2) in lpp_partners(lam, mu)? {
                instances.push((lam.as_intvec().clone(), mu.as_intvec().clone(), l2, m2));
            }
        }
    }
    let mut pairs: BTreeSet<(IntVec, IntVec)> = BTreeSet::new();
    for (l, m, l2, m2) in &instances {
        pairs.insert((l.clone(), m.clone()));
        pairs.insert((l2.clone(), m2.clone()));
    }
    let expansions: HashMap<(IntVec, IntVec), BTreeMap<IntVec, u64>> = pairs
        .into_par_iter()
        .map(|(l, m)| padded_expansion(&l, &m).map(|e| ((l, m), e)))
        .collect::<Result<_>>()?;
    let mut report = VerifyReport::new("sweep-lpp", format!("n={n} max_entry={max_entry}"));
    for (l, m, l2, m2) in instances {
        let mut sub = VerifyReport::new(
            "lpp",
            format!(
                "lam={} mu={} lam2={} mu2={}",
                csv(&l),
                csv(&m),
                csv(&l2),
                csv(&m2)
            ),
        );
        let (base, other) = (
            &expansions[&(l.clone(), m.clone())],
            &expansions[&(l2.clone(), m2)],
        );
        compare_instance(&mut sub, (&l, &m, &l2), base, other);
        report.absorb(sub);
    }
    Ok(report)
}

/// Checks `SkepExt(g⁺, λ) ≤ SkepExt(g⁺, λ')` for `λ' ∈ Π(λ, ∂⁺g⁺ - λ)`.
pub fn verify_better_lpp(gp: &PlusGrid, lam: &[i64], lam2: &[i64]) -> Result<VerifyReport> {
    let pi = gp.boundary_plus();
    same_len(&pi, lam)?;
    let mu = pi.sub(lam)?;
    same_len(lam, lam2)?;
    if !pi_contains(lam, &mu, lam2)? {
        return Err(Error::Incomparable(lam2.to_vec()));
    }
    let mut report = VerifyReport::new(
        "better-lpp",
        format!(
            "gplus={} lam={} lam2={}",
            gplus_label(gp),
            csv(lam),
            csv(lam2)
        ),
    );
    let (a, b) = (skep_ext(gp, lam)?, skep_ext(gp, lam2)?);
    report.checked = 1;
    if a > b {
        report.fail(json!({ "skep_ext_lam": a, "skep_ext_lam2": b }));
    }
    Ok(report)
}

fn gplus_label(gp: &PlusGrid) -> String {
    serde_json::to_string(&gp.entries().map(|(_, _, v)| v).collect::<Vec<_>>()).expect("serializes")
}

/// For each `λ` in the window, checks `SkepExt(g⁺, λ) = SkepExt(g⁺, μ)` with `μ = ∂⁺g⁺ - λ`, and
/// that flipping each extension lands injectively in the extensions at `μ`.
pub fn verify_skep_commutative(gp: &PlusGrid, window: &Window) -> Result<VerifyReport> {
    let pi = gp.boundary_plus();
    same_len(&pi, &window.lo)?;
    let mut report = VerifyReport::new(
        "commutative",
        format!(
            "gplus={} window={}..{}",
            gplus_label(gp),
            window.lo,
            window.hi
        ),
    );
    let results: Vec<VerifyReport> = window
        .points()
        .into_par_iter()
        .map(|lam| commutative_at(gp, &pi, &lam))
        .collect::<Result<_>>()?;
    for r in results {
        report.absorb(r);
    }
    Ok(report)
}

fn commutative_at(gp: &PlusGrid, pi: &IntVec, lam: &IntVec) -> Result<VerifyReport> {
    let mu = pi.sub(lam)?;
    let mut report = VerifyReport::new("commutative", format!("lam={}", csv(lam)));
    report.checked = 1;
    let exts = skep_ext_list(gp, lam)?;
    let count_mu = skep_ext(gp, &mu)?;
    if exts.len() as u64 != count_mu {
        report.fail(json!({ "lam": lam.0, "mu": mu.0, "skep_ext_lam": exts.len(), "skep_ext_mu": count_mu }));
        return Ok(report);
    }
    let mut images = BTreeSet::new();
    for minus in exts {
        let g = Skep::new(TriGrid::interweave(gp, &minus)?)?;
        let flipped = skep_flip(&g)?;
        if &flipped.plus() != gp
            || flipped.grid().boundary_1() != mu
            || g.grid().boundary_1() != *lam
        {
            report.fail(json!({ "lam": lam.0, "bad_flip": flipped.grid().rows() }));
            return Ok(report);
        }
        images.insert(flipped.grid().rows());
    }
    if images.len() as u64 != count_mu {
        report.fail(json!({ "lam": lam.0, "flip_not_injective": images.len() }));
    }
    Ok(report)
}

/// Windowed L-log-concavity of `λ ↦ SkepExt(g⁺, λ)` in pairs and parallelogram modes.
pub fn verify_skepext_llc(gp: &PlusGrid, window: &Window) -> Result<VerifyReport> {
    let f = WindowFunc::try_from_counts(window.clone(), |lam| skep_ext(gp, lam))?;
    let instance = format!(
        "gplus={} window={}..{}",
        gplus_label(gp),
        window.lo,
        window.hi
    );
    Ok(llc_report("skepext-llc", instance, &f))
}

fn llc_report(campaign: &str, instance: String, f: &WindowFunc) -> VerifyReport {
    let mut report = VerifyReport::new(campaign, instance);
    for mode in [FuncMode::Pairs, FuncMode::Parallelogram] {
        let r = check_llog_concave_window(f, mode);
        report.checked += r.checked;
        if let Some(v) = r.violation {
            report.fail(json!({ "mode": mode, "violation": v }));
        }
    }
    report
}

/// Confirms every pair strictly below `(λ, μ)` lies below one of the generated covers.
pub fn verify_covers(lam: &[i64], mu: &[i64]) -> Result<VerifyReport> {
    let list = covers(lam, mu)?;
    let mut report = VerifyReport::new("covers", format!("lam={} mu={}", csv(lam), csv(mu)));
    for (l2, m2) in pairs_strictly_below(lam, mu)? {
        report.checked += 1;
        let mut dominated = false;
        for (c1, c2) in &list {
            if pair_leq((&l2, &m2), (c1, c2))? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            report.fail(json!({ "uncovered": [l2.0, m2.0] }));
        }
    }
    Ok(report)
}

/// Evaluates `λ ↦ c_{λ(π-λ)}^ν` on the window (zero where `λ` or `π - λ` is not a partition)
/// and reports whether the windowed L-log-concavity checks hold. The answer is a finding, not a
/// regression signal.
pub fn probe_question(pi: &Partition, nu: &Partition, window: &Window) -> Result<VerifyReport> {
    same_len(pi, nu)?;
    same_len(pi, &window.lo)?;
    let f = WindowFunc::try_from_counts(window.clone(), |lam| {
        let mu = pi.as_intvec().sub(lam)?;
        if !is_partition(lam) || !is_partition(&mu) {
            return Ok(0);
        }
        lr_via_skeps(&Partition::new(lam.to_vec())?, &Partition::new(mu)?, nu)
    })?;
    let instance = format!(
        "pi={} nu={} window={}..{}",
        csv(pi),
        csv(nu),
        window.lo,
        window.hi
    );
    let mut report = llc_report("probe-question", instance, &f);
    report.note = Some(if report.passed() {
        "no counterexample in window".into()
    } else {
        "finding: conditions fail in window".into()
    });
    Ok(report)
}

/// Runs one Schur-valued condition on the built-in example whose meet/join and pairs behaviour
/// differ. Every violation counts as a failure; the first one is the witness.
pub fn schur_example(mode: SchurMode) -> VerifyReport {
    let r = schur_llc_check(
        &schur_counterexample(),
        &schur_counterexample_window(),
        mode,
    );
    let mut report = VerifyReport::new("schur-example", format!("mode={}", mode.label()));
    report.checked = r.checked;
    for v in r.violations {
        report.fail(json!({
            "x": v.x.0, "y": v.y.0, "x2": v.x2.0, "y2": v.y2.0, "deficit": v.deficit.to_string()
        }));
    }
    report
}

/// Hive, skep, summed-extension and tableau counts agree on the whole sweep.
pub fn cross_check_counts(n: usize, max_entry: i64) -> Result<VerifyReport> {
    let parts = partitions_in_box(n, max_entry);
    let pairs: Vec<(&Partition, &Partition)> = parts
        .iter()
        .flat_map(|l| parts.iter().map(move |m| (l, m)))
        .collect();
    let results: Vec<VerifyReport> = pairs
        .into_par_iter()
        .map(|(lam, mu)| {
            let mut sub = VerifyReport::new("counts", format!("lam={} mu={}", csv(lam), csv(mu)));
            for nu in partitions_of(lam.size() + mu.size(), n, 2 * max_entry) {
                sub.checked += 1;
                let counts = [
                    lr_via_hives(lam, mu, &nu)?,
                    lr_via_skeps(lam, mu, &nu)?,
                    lr_via_sum(lam, mu, &nu)?,
                    lr_tableaux(lam, mu, &nu),
                ];
                if counts.iter().any(|&c| c != counts[0]) {
                    sub.fail(json!({ "nu": nu.as_intvec().0, "hive": counts[0], "skep": counts[1], "sum": counts[2], "tableaux": counts[3] }));
                }
            }
            Ok(sub)
        })
        .collect::<Result<_>>()?;
    let mut report = VerifyReport::new("counts", format!("n={n} max_entry={max_entry}"));
    for r in results {
        report.absorb(r);
    }
    Ok(report)
}
