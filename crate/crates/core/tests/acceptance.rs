//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use skeps::grid::points;
use skeps::hive::{enumerate_hives, is_hive};
use skeps::lattice::{covers, normalize_class, pi_decompose, pi_enumerate};
use skeps::lconvex::{
    check_llog_concave_window, DiffConstraints, FuncMode, MarginalCounter, Window, WindowFunc,
};
use skeps::octahedron::{five_conditions, propagate, SliceKind, TetraFunc};
use skeps::oracle::{
    schur_counterexample, schur_counterexample_window, schur_llc_check, SchurMode,
};
use skeps::skep::{enumerate_gplus, enumerate_skeps, is_skep, skep_ext};
use skeps::vector::{partitions_in_box, partitions_of};
use skeps::verify::{cross_check_counts, sweep_lpp, verify_covers, verify_skepext_llc};
use skeps::{IntVec, Partition, PlusGrid, Skep, TriGrid};

struct Outcome {
    passed: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: true,
        detail: detail.into(),
    }
}

fn bad(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: false,
        detail: detail.into(),
    }
}

fn v(x: &[i64]) -> IntVec {
    IntVec::from(x)
}

fn p(x: &[i64]) -> Partition {
    Partition::new(x.to_vec()).unwrap()
}

fn skep_example() -> TriGrid {
    TriGrid::from_rows(vec![
        vec![10, 9, 7, 4, 0],
        vec![11, 9, 8, 5],
        vec![11, 10, 8],
        vec![11, 10],
        vec![11],
    ])
    .unwrap()
}

fn hive_example() -> TriGrid {
    TriGrid::from_printed(&[
        &[11],
        &[11, 10],
        &[11, 10, 8],
        &[10, 10, 8, 5],
        &[7, 7, 6, 4, 0],
    ])
    .unwrap()
}

fn flipped_hive_example() -> TriGrid {
    TriGrid::from_printed(&[
        &[11],
        &[11, 10],
        &[10, 9, 8],
        &[8, 8, 7, 5],
        &[4, 4, 4, 3, 0],
    ])
    .unwrap()
}

fn fixture_exactness() -> Outcome {
    let g = skep_example();
    let h = hive_example();
    let mut problems = Vec::new();
    if !is_skep(&g) {
        problems.push("skep example rejected".to_string());
    }
    if g.boundary_diag() != v(&[5, 3, 2, 1]) {
        problems.push(format!("skep diagonal {}", g.boundary_diag()));
    }
    if g.boundary_corner() != v(&[4, 3, 2, 1, 1, 0, 0, 0]) {
        problems.push(format!("skep corner boundary {}", g.boundary_corner()));
    }
    if !is_hive(&h) {
        problems.push("hive example rejected".to_string());
    }
    let bounds = (h.boundary_left(), h.boundary_up(), h.boundary_diag());
    if bounds != (v(&[4, 2, 1, 0]), v(&[3, 1, 0, 0]), v(&[5, 3, 2, 1])) {
        problems.push(format!("hive boundaries {bounds:?}"));
    }
    if problems.is_empty() {
        ok("skep and hive examples accepted with the stated boundaries")
    } else {
        bad(problems.join("; "))
    }
}

/// The nine horizontal slices, rows by `j` ascending and entries by `i` ascending.
fn expected_slices() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![7]],
        vec![vec![7], vec![10]],
        vec![vec![10, 6], vec![10], vec![11]],
        vec![vec![9, 4], vec![11, 8], vec![10], vec![11]],
        vec![vec![10, 7, 0], vec![9, 5], vec![11, 8], vec![10], vec![11]],
        vec![vec![8, 3], vec![10, 7], vec![9], vec![11]],
        vec![vec![8, 4], vec![8], vec![10]],
        vec![vec![4], vec![8]],
        vec![vec![4]],
    ]
}

fn octahedron_golden() -> Outcome {
    let h = propagate(&hive_example(), SliceKind::HiveBottom);
    for (k, rows) in expected_slices().into_iter().enumerate() {
        let t = k as i64 - 4;
        if h.slice_rows(t) != rows {
            return bad(format!(
                "slice t={t}: got {:?}, expected {rows:?}",
                h.slice_rows(t)
            ));
        }
    }
    let top = h.restrict(SliceKind::HiveTop);
    if top != flipped_hive_example() {
        return bad(format!("top slice {:?}", top.rows()));
    }
    let bounds = (top.boundary_left(), top.boundary_up(), top.boundary_diag());
    if bounds != (v(&[3, 1, 0, 0]), v(&[4, 2, 1, 0]), v(&[5, 3, 2, 1])) {
        return bad(format!("top slice boundaries {bounds:?}"));
    }
    let bottom = h.restrict(SliceKind::SkepBottom);
    if bottom != skep_example() {
        return bad(format!("skep slice {:?}", bottom.rows()));
    }
    if h.restrict(SliceKind::SkepTop).split().0 != bottom.split().0 {
        return bad("the two skep slices disagree on the plus half");
    }
    ok("nine slices, flipped hive and interwoven skep halves reproduced")
}

fn cross_model_equality() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    match pool.install(|| cross_check_counts(3, 3)) {
        Ok(r) if r.passed() => ok(format!(
            "{} triples, hive = skep = sum = tableaux",
            r.checked
        )),
        Ok(r) => bad(format!(
            "{} mismatches, witness {:?}",
            r.failures, r.witness
        )),
        Err(e) => bad(e.to_string()),
    }
}

fn coefficient_sweep() -> Outcome {
    match sweep_lpp(3, 3) {
        Ok(r) if r.passed() => ok(format!(
            "{} coefficient comparisons, none decrease",
            r.checked
        )),
        Ok(r) => bad(format!(
            "{} violations, witness {:?}",
            r.failures, r.witness
        )),
        Err(e) => bad(e.to_string()),
    }
}

/// Classes of `Π(x,y)` modulo `1_n` counted straight from the difference inequalities.
fn brute_class_count(x: &[i64], y: &[i64]) -> usize {
    let n = x.len();
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let (a, b) = (x[i] - x[0], y[i] - y[0]);
            (a.min(b), a.max(b))
        })
        .collect();
    let mut count = 0;
    let mut z = vec![0i64; n];
    fn rec(
        k: usize,
        z: &mut Vec<i64>,
        ranges: &[(i64, i64)],
        x: &[i64],
        y: &[i64],
        count: &mut usize,
    ) {
        let n = z.len();
        if k == n {
            let inside = (0..n).all(|i| {
                (i + 1..n).all(|j| {
                    let (a, b) = (x[i] - x[j], y[i] - y[j]);
                    (a.min(b)..=a.max(b)).contains(&(z[i] - z[j]))
                })
            });
            *count += inside as usize;
            return;
        }
        for val in ranges[k].0..=ranges[k].1 {
            z[k] = val;
            rec(k + 1, z, ranges, x, y, count);
        }
    }
    rec(1, &mut z, &ranges, x, y, &mut count);
    count
}

fn pi_geometry() -> Outcome {
    let a = pi_enumerate(&[0, 0, 0, 0], &[0, 3, 5, 8]).unwrap().len();
    let b = pi_enumerate(&[0, 0, 0, 0], &[0, 2, 3, 5]).unwrap().len();
    if (a, b) != (48, 18) {
        return bad(format!("sizes {a} and {b}, expected 48 and 18"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.gen_range(1..=5);
        let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let y: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let product: i64 = pi_decompose(&x, &y)
            .unwrap()
            .distances
            .iter()
            .map(|l| l + 1)
            .product();
        let listed = pi_enumerate(&x, &y).unwrap().len();
        let brute = brute_class_count(&x, &y);
        if listed as i64 != product || listed != brute {
            return bad(format!(
                "x={x:?} y={y:?}: listed {listed}, product {product}, brute {brute}"
            ));
        }
    }
    ok("48 and 18 classes; 300 random pairs match the product formula and brute force")
}

/// Every `g⁺` reachable from the `n = 3`, entries `≤ 3` sweep, keyed by `(ν, π)`.
fn gplus_sweep() -> BTreeMap<(Partition, Partition), Vec<PlusGrid>> {
    let parts = partitions_in_box(3, 3);
    let mut keys = Vec::new();
    for lam in &parts {
        for mu in &parts {
            let pi = p(&lam.as_intvec().add(mu.as_intvec()).unwrap());
            for nu in partitions_of(pi.size(), 3, 6) {
                keys.push((nu, pi.clone()));
            }
        }
    }
    keys.sort();
    keys.dedup();
    keys.into_par_iter()
        .map(|(nu, pi)| {
            let list = enumerate_gplus(&nu, &pi).unwrap();
            ((nu, pi), list)
        })
        .filter(|(_, list)| !list.is_empty())
        .collect()
}

fn commutative_and_better(sweep: &BTreeMap<(Partition, Partition), Vec<PlusGrid>>) -> Outcome {
    let parts = partitions_in_box(3, 3);
    let pairs: Vec<(&Partition, &Partition)> = parts
        .iter()
        .flat_map(|l| parts.iter().map(move |m| (l, m)))
        .collect();
    let results: Vec<(u64, Option<String>)> = pairs
        .par_iter()
        .map(|&(lam, mu)| {
            let pi = p(&lam.as_intvec().add(mu.as_intvec()).unwrap());
            let reps = pi_enumerate(lam, mu).unwrap();
            let mut checked = 0u64;
            for ((_, key_pi), gps) in sweep.iter() {
                if *key_pi != pi {
                    continue;
                }
                for gp in gps {
                    let at_lam = skep_ext(gp, lam).unwrap();
                    let at_mu = skep_ext(gp, mu).unwrap();
                    checked += 1;
                    if at_lam != at_mu {
                        return (
                            checked,
                            Some(format!("lam={lam:?} mu={mu:?}: {at_lam} != {at_mu}")),
                        );
                    }
                    for r in &reps {
                        for t in -1..=1 {
                            let lam2 = r.shift(t);
                            checked += 1;
                            let other = skep_ext(gp, &lam2).unwrap();
                            if at_lam > other {
                                return (
                                    checked,
                                    Some(format!("lam={lam:?} lam2={lam2}: {at_lam} > {other}")),
                                );
                            }
                        }
                    }
                }
            }
            (checked, None)
        })
        .collect();
    let checked: u64 = results.iter().map(|r| r.0).sum();
    match results.into_iter().find_map(|r| r.1) {
        None => ok(format!(
            "{} plus halves, {checked} comparisons",
            sweep.values().map(Vec::len).sum::<usize>()
        )),
        Some(w) => bad(w),
    }
}

fn skepext_llc(sweep: &BTreeMap<(Partition, Partition), Vec<PlusGrid>>) -> Outcome {
    let all: Vec<&PlusGrid> = sweep.values().flatten().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sample: Vec<&PlusGrid> = all.choose_multiple(&mut rng, 50).copied().collect();
    if sample.len() < 50 {
        return bad(format!("only {} plus halves available", sample.len()));
    }
    let window = Window::cube(3, 0, 4);
    let mut checked = 0;
    for gp in sample {
        let r = verify_skepext_llc(gp, &window).unwrap();
        checked += r.checked;
        if !r.passed() {
            return bad(format!("{}: {:?}", r.instance, r.witness));
        }
    }
    ok(format!(
        "50 sampled plus halves, {checked} instances in pairs and parallelogram modes"
    ))
}

/// Bounds in `[-3, 3] ∪ {∞}` that all hold at a hidden point, so the system is feasible.
fn random_dc(rng: &mut ChaCha8Rng, n: usize) -> DiffConstraints {
    let hidden: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
    let mut dc = DiffConstraints::unbounded(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(0.7) {
                let bound = hidden[i] - hidden[j] + rng.gen_range(0..=2);
                dc.set(i, j, Some(bound.min(3)));
            }
        }
    }
    dc
}

fn point_count_llc() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let window = Window::cube(2, -4, 4);
    let (mut instances, mut checked) = (0, 0);
    while instances < 100 {
        let dc = random_dc(&mut rng, 4);
        let Ok(counter) = MarginalCounter::new(&dc, 2) else {
            continue;
        };
        instances += 1;
        let f = WindowFunc::try_from_counts(window.clone(), |x| counter.count(x)).unwrap();
        if !window
            .points()
            .iter()
            .any(|x| counter.count(x).unwrap() > 0)
        {
            return bad(format!("{dc:?} has no support in the window"));
        }
        for mode in [FuncMode::Pairs, FuncMode::Parallelogram] {
            let r = check_llog_concave_window(&f, mode);
            checked += r.checked;
            if let Some(viol) = r.violation {
                return bad(format!("{dc:?} {mode:?}: {viol:?}"));
            }
        }
    }
    ok(format!(
        "100 finite-fiber instances, all with support in the window, {checked} checks"
    ))
}

fn grid_pool(n: usize, max_part: i64, skeps: bool) -> Vec<TriGrid> {
    let mut out = Vec::new();
    for lam in partitions_in_box(n, max_part) {
        for mu in partitions_in_box(n, max_part) {
            for nu in partitions_of(lam.size() + mu.size(), n, 2 * max_part) {
                if skeps {
                    out.extend(
                        enumerate_skeps(&lam, &mu, &nu)
                            .unwrap()
                            .into_iter()
                            .map(Skep::into_grid),
                    );
                } else {
                    out.extend(
                        enumerate_hives(&lam, &mu, &nu)
                            .unwrap()
                            .into_iter()
                            .map(|h| h.into_grid()),
                    );
                }
            }
        }
    }
    out
}

fn dictionary_holds(h: &TetraFunc) -> bool {
    let [top, bottom, stop, sbot] = SliceKind::ALL.map(|k| h.restrict(k));
    [&top, &stop, &sbot]
        .iter()
        .all(|g| g.boundary_diag() == bottom.boundary_diag())
        && top.boundary_left() == stop.boundary_1()
        && top.boundary_left() == sbot.boundary_2()
        && top.boundary_left() == bottom.boundary_up()
        && top.boundary_up() == stop.boundary_2()
        && top.boundary_up() == sbot.boundary_1()
        && top.boundary_up() == bottom.boundary_left()
}

fn octahedron_equivalence() -> Outcome {
    let hives: Vec<Vec<TriGrid>> = (1..=4).map(|n| grid_pool(n, 2, false)).collect();
    let skeps: Vec<Vec<TriGrid>> = (1..=4).map(|n| grid_pool(n, 2, true)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut valid, mut invalid) = (0, 0);
    for round in 0..200 {
        let kind = SliceKind::ALL[round % 4];
        let pools = if matches!(kind, SliceKind::HiveTop | SliceKind::HiveBottom) {
            &hives
        } else {
            &skeps
        };
        let pool = &pools[rng.gen_range(0..pools.len())];
        let shift = rng.gen_range(-5..=5);
        let mut g = pool.choose(&mut rng).unwrap().map(|x| x + shift);
        if rng.gen_bool(0.5) {
            let pts: Vec<(usize, usize)> = points(g.n()).collect();
            let &(i, j) = pts.choose(&mut rng).unwrap();
            g.set(i, j, g.at(i, j) + rng.gen_range(-3..=3));
        }
        let h = propagate(&g, kind);
        let c = five_conditions(&h);
        if c.iter().any(|&x| x != c[0]) {
            return bad(format!("{kind} seed {:?}: conditions {c:?}", g.rows()));
        }
        if c[0] {
            valid += 1;
            if !dictionary_holds(&h) {
                return bad(format!(
                    "boundary dictionary fails for {kind} seed {:?}",
                    g.rows()
                ));
            }
        } else {
            invalid += 1;
        }
    }
    ok(format!(
        "200 tetrahedral functions ({valid} valid, {invalid} invalid), predicates agree"
    ))
}

fn covers_sandwich() -> Outcome {
    let mut checked = 0;
    for base in [[0, 0, 0], [2, 1, 0]] {
        for d in Window::cube(3, 0, 4).points() {
            let lam = v(&base);
            let mu = lam.add(&d).unwrap();
            let r = verify_covers(&lam, &mu).unwrap();
            checked += r.checked;
            if !r.passed() {
                return bad(format!("{}: {:?}", r.instance, r.witness));
            }
        }
    }
    let first = covers(&[1, 1, 1, 1], &[1, 2, 3, 4]).unwrap();
    if !first.contains(&(v(&[2, 2, 3, 3]), v(&[0, 1, 1, 2]))) {
        return bad("cover (2233, 0112) of (1111, 1234) missing");
    }
    let second = covers(&[0, 0, 0, 0], &[0, 3, 5, 8]).unwrap();
    let found = second.iter().any(|(a, b)| {
        normalize_class(a) == v(&[0, 0, 2, 2]) && normalize_class(b) == v(&[0, 3, 3, 6])
    });
    if !found {
        return bad("cover classes (0022, 0336) of (0000, 0358) missing");
    }
    ok(format!(
        "{checked} strictly lower pairs dominated; worked covers present"
    ))
}

fn schur_example() -> Outcome {
    let f = schur_counterexample();
    let window = schur_counterexample_window();
    let pairs = schur_llc_check(&f, &window, SchurMode::Pairs);
    let meet_join = schur_llc_check(&f, &window, SchurMode::MeetJoin);
    let s321 = p(&[3, 2, 1]);
    let quadruple = pairs.violations.iter().find(|w| {
        (w.x.clone(), w.y.clone(), w.x2.clone(), w.y2.clone())
            == (
                v(&[0, 0, 0, 0]),
                v(&[0, 2, 3, 5]),
                v(&[0, 0, 1, 1]),
                v(&[0, 2, 2, 4]),
            )
    });
    let pairs_ok = quadruple.is_some_and(|w| w.deficit.coeff(&s321) < 0);
    let detail_1s = match quadruple {
        Some(w) => format!("1S fails at (0000,0235,0011,0224), deficit {}", w.deficit),
        None => format!(
            "1S quadruple not reported ({} violations)",
            pairs.violations.len()
        ),
    };
    if meet_join.passed() && pairs_ok {
        return ok(format!("2S passes; {detail_1s}"));
    }
    let detail_2s = match meet_join.violations.first() {
        Some(w) => format!(
            "2S fails with {} violations, first x={} y={} (meet {}, join {}), deficit {}",
            meet_join.violations.len(),
            w.x,
            w.y,
            w.x2,
            w.y2,
            w.deficit
        ),
        None => "2S passes".to_string(),
    };
    bad(format!("{detail_2s}; {detail_1s}"))
}

fn main() -> ExitCode {
    let mut all_passed = true;
    let mut report = |id: u32,
                      name: &str,
                      tolerance: &str,
                      limit: Option<Duration>,
                      run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let passed = outcome.passed && in_time;
        all_passed &= passed;
        let limit_text = limit.map_or(String::new(), |l| format!(" (limit {l:?})"));
        println!(
            "{} [{id:>2}] {name}: tolerance {tolerance}; {:.3?}{limit_text}; {}{}",
            if passed { "PASS" } else { "FAIL" },
            elapsed,
            outcome.detail,
            if in_time { "" } else { "; over time limit" }
        );
    };
    report(
        1,
        "fixture exactness",
        "exact",
        Some(Duration::from_millis(1)),
        &mut fixture_exactness,
    );
    report(
        2,
        "octahedron golden slices",
        "exact",
        Some(Duration::from_millis(10)),
        &mut octahedron_golden,
    );
    report(
        3,
        "cross-model counts n=3 entries<=3",
        "exact",
        Some(Duration::from_secs(60)),
        &mut cross_model_equality,
    );
    report(
        4,
        "coefficient monotonicity sweep n=3 entries<=3",
        "exact",
        Some(Duration::from_secs(300)),
        &mut coefficient_sweep,
    );
    report(
        5,
        "parallelepiped geometry",
        "exact",
        None,
        &mut pi_geometry,
    );
    let start = Instant::now();
    let sweep = gplus_sweep();
    println!(
        "     plus-half sweep built: {} (nu, pi) keys in {:.3?}",
        sweep.len(),
        start.elapsed()
    );
    report(
        6,
        "extension symmetry and monotonicity",
        "exact",
        None,
        &mut || commutative_and_better(&sweep),
    );
    report(
        7,
        "extension count L-log-concavity",
        "exact",
        None,
        &mut || skepext_llc(&sweep),
    );
    report(
        8,
        "marginal point count L-log-concavity",
        "exact",
        None,
        &mut point_count_llc,
    );
    report(
        9,
        "octahedron five-way equivalence",
        "exact",
        None,
        &mut octahedron_equivalence,
    );
    report(
        10,
        "cover sandwich property",
        "exact",
        None,
        &mut covers_sandwich,
    );
    report(
        11,
        "Schur meet/join without pairs property",
        "exact",
        None,
        &mut schur_example,
    );
    if all_passed {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: at least one criterion failed");
        ExitCode::FAILURE
    }
}
