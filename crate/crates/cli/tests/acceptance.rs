//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Every comparison is exact; the only tolerance is
//! the wall-clock budget per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use nms::census::{audit, census, count_classes, generate, CensusWindow, Countability};
use nms::homology::{h1_match_report, h1_of_descriptor, surgery_presentation};
use nms::invariant::orbit_members;
use nms::manifold::{
    ambient_manifold, identify, lens_homeomorphic, lens_normal_form, seifert_isomorphic, seifert_to_lens, Branch,
    LensSpace, SeifertFibration,
};
use nms::{canonical_form, consistent, smith_normal_form, FlowInvariant, IntMatrix, ManifoldDescriptor};
use nms_oracle as oracle;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

/// Numeric comparisons are exact: zero slack on every count and order.
const TOLERANCE: u128 = 0;
/// Each criterion must finish inside this budget.
const TIME_BUDGET: Duration = Duration::from_secs(60);
const GRID_BOUND: i64 = 5;
const LENS_BOUND: i64 = 12;
const SEIFERT_ALPHA_MAX: i64 = 7;
const SNF_SAMPLES: usize = 1000;
const SNF_SEED: u64 = 0x0005_eed0_f5af;
const CATALOG_BOUND: &str = "4";
const AUDIT_GOLDEN_BOUND: &str = "3";

const VIOLATIONS_GOLDEN: &str = include_str!("golden/violations_b5.txt");
const AUDIT_GOLDEN: &str = include_str!("golden/audit_b3.txt");

/// Failures collected by one criterion, plus a short summary.
#[derive(Default)]
struct Log {
    failures: Vec<String>,
    summary: Vec<String>,
}

impl Log {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }
}

fn inv(t: &oracle::Tuple) -> FlowInvariant {
    FlowInvariant::from(*t)
}

fn groups() -> BTreeMap<(i64, i64), Vec<oracle::Tuple>> {
    let mut g: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for t in oracle::grid(GRID_BOUND) {
        g.entry((t[0], t[2])).or_default().push(t);
    }
    g
}

fn bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nms")).args(args).output().expect("run nms");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn bin_json(log: &mut Log, args: &[&str]) -> Value {
    let (code, out) = bin(args);
    log.check(code == 0, || format!("{args:?} exited {code}"));
    log.check(out.lines().count() == 1, || format!("{args:?}: not a single JSON document"));
    serde_json::from_str(&out).unwrap_or_else(|e| {
        log.failures.push(format!("{args:?}: {e}"));
        Value::Null
    })
}

// Criterion 1

fn equivalence_relation(log: &mut Log) {
    let grid = oracle::grid(GRID_BOUND);
    log.check(grid.len() == 6560, || format!("grid has {} tuples", grid.len()));
    let mut pairs = 0usize;
    for members in groups().values() {
        let n = members.len();
        let mut adj = vec![0u128; n];
        for (i, a) in members.iter().enumerate() {
            for (j, b) in members.iter().enumerate() {
                let got = consistent(&inv(a), &inv(b)).unwrap().map(|w| w.delta);
                log.check(got == oracle::consistent(a, b), || format!("definition differs on {a:?} {b:?}"));
                if got.is_some() {
                    adj[i] |= 1 << j;
                }
                pairs += 1;
            }
        }
        for i in 0..n {
            log.check(adj[i] >> i & 1 == 1, || format!("not reflexive at {:?}", members[i]));
            for j in 0..n {
                if adj[i] >> j & 1 == 1 {
                    log.check(adj[j] >> i & 1 == 1, || format!("not symmetric {:?} {:?}", members[i], members[j]));
                    // a~b and b~c for every c in N(b): N(b) must lie in N(a).
                    log.check(adj[j] & !adj[i] == 0, || format!("not transitive through {:?}", members[j]));
                }
            }
        }
    }
    // Different longitudes are never consistent, in either order.
    for a in &grid {
        for b in &grid {
            if (a[0], a[2]) != (b[0], b[2]) && consistent(&inv(a), &inv(b)).unwrap().is_some() {
                log.failures.push(format!("{a:?} ~ {b:?} across longitudes"));
            }
        }
    }
    log.note(format!("{} tuples, {pairs} same-longitude pairs, all triples via neighbour sets", grid.len()));
}

// Criterion 2

fn orbit_soundness(log: &mut Log) {
    let shifts = -2 * GRID_BOUND - 2..=2 * GRID_BOUND + 2;
    let mut checked = 0;
    for members in groups().values() {
        let in_grid: BTreeSet<FlowInvariant> = members.iter().map(inv).collect();
        let canon: Vec<FlowInvariant> = members.iter().map(|t| canonical_form(&inv(t)).unwrap()).collect();
        for (i, a) in members.iter().enumerate() {
            let brute: BTreeSet<_> = members.iter().filter(|b| oracle::consistent(a, b).is_some()).map(inv).collect();
            let orbit: BTreeSet<_> =
                orbit_members(&inv(a), shifts.clone()).unwrap().into_iter().filter(|c| in_grid.contains(c)).collect();
            log.check(brute == orbit, || format!("orbit of {a:?} differs from brute-force neighbours"));
            let c = canon[i];
            log.check((c.l1, c.l2) == (a[0], a[2]), || format!("canonical form of {a:?} moved the longitudes"));
            for (j, b) in members.iter().enumerate() {
                let same = canon[i] == canon[j];
                log.check(same == oracle::consistent(a, b).is_some(), || format!("canonical agreement wrong on {a:?} {b:?}"));
            }
            checked += 1;
        }
    }
    log.note(format!("{checked} tuples, orbit shifts {shifts:?}"));
}

// Criterion 3

fn identification_fixtures(log: &mut Log) {
    let parse = |s: &str| s.parse::<ManifoldDescriptor>().unwrap();
    let cases: [([i64; 4], &str, bool); 4] = [
        ([1, 0, 3, 1], "L(1,0)", true),
        ([0, 2, 3, 1], "L(3,1)+RP3", false),
        ([3, 1, 5, 2], "SFS((2,1),(3,1),(5,2))", true),
        ([0, 1, 1, 0], "L(2,1)", false),
    ];
    for (t, want, normalize) in cases {
        let m = ambient_manifold(&inv(&t)).unwrap();
        let got = if normalize { m.normal_form().unwrap() } else { m.clone() };
        log.check(got == parse(want), || format!("{t:?} -> {got}, expected {want}"));
        log.note(format!("{} -> {got}", inv(&t)));
    }
}

// Criterion 4

fn class_invariance_audit(log: &mut Log) {
    let report = audit(GRID_BOUND, &CensusWindow::default()).unwrap();
    let lens = |b: Branch| matches!(b, Branch::LensFromSecond | Branch::LensFromFirst);
    let outside = report.violations.iter().filter(|v| !lens(v.branches.0) || !lens(v.branches.1)).count();
    log.check(outside == 0, || format!("{outside} violations outside branches 1ii/1iii"));
    log.check(!report.violations.is_empty(), || "no branch-1ii/1iii violations".into());
    let rendered: String = report.violations.iter().map(|v| format!("{v}\n")).collect();
    log.check(rendered == VIOLATIONS_GOLDEN, || {
        let first = rendered.lines().zip(VIOLATIONS_GOLDEN.lines()).position(|(a, b)| a != b);
        format!("violation list differs from golden (first differing line {first:?})")
    });
    let mut by_branch = BTreeMap::new();
    for v in &report.violations {
        *by_branch.entry(v.branches.0.tag()).or_insert(0) += 1;
    }
    log.note(format!("{} violations {by_branch:?}, {outside} elsewhere, golden byte-identical", report.violations.len()));
}

// Criterion 5

#[allow(clippy::absurd_extreme_comparisons)]
fn surgery_order(log: &mut Log) {
    let mut checked = 0;
    for t in oracle::grid(GRID_BOUND) {
        let c = inv(&t);
        if c.is_disk_case() {
            log.check(surgery_presentation(&c, 1).is_err(), || format!("{t:?} has no surgery model"));
            continue;
        }
        let [l1, b1, l2, b2] = t.map(|x| x as i128);
        for sign in [1i128, -1] {
            let g = surgery_presentation(&c, sign as i64).unwrap().group();
            if l1 * l2 != 0 {
                let want = (2 * l2 * b1 + 2 * l1 * b2 + sign * l1 * l2).unsigned_abs();
                let got = g.order().map(|o| u128::try_from(o).unwrap());
                let ok = match got {
                    Some(o) => o.abs_diff(want) <= TOLERANCE,
                    None => want == 0,
                };
                log.check(ok, || format!("{t:?} sign {sign}: order {got:?}, closed form {want}"));
                checked += 1;
            }
        }
    }
    log.note(format!("{checked} (tuple, sign) pairs with l1*l2 != 0"));
}

fn expected_signs(b: Branch) -> &'static [i64] {
    match b {
        Branch::Seifert => &[1],
        Branch::LensFromSecond | Branch::LensFromFirst => &[-1],
        Branch::ProjectiveSpace | Branch::SumFromSecond | Branch::SumFromFirst => &[1, -1],
    }
}

fn homology_calibration(log: &mut Log) {
    let mut unmatched: BTreeMap<&str, usize> = BTreeMap::new();
    let mut total = 0;
    for t in oracle::grid(GRID_BOUND) {
        let c = inv(&t);
        if c.is_disk_case() {
            continue;
        }
        total += 1;
        let r = h1_match_report(&c).unwrap();
        if !expected_signs(r.branch).iter().all(|s| r.matching_signs.contains(s)) {
            *unmatched.entry(r.branch.tag()).or_default() += 1;
            if unmatched.values().sum::<usize>() <= 3 {
                log.failures.push(format!(
                    "{c} branch {} {} H1 {}: matching signs {:?}",
                    r.branch, r.manifold, r.descriptor_h1, r.matching_signs
                ));
            }
        }
    }
    let n: usize = unmatched.values().sum();
    if n > 3 {
        log.failures.push(format!("... {} more", n - 3));
    }
    log.note(format!("{total} tuples, unmatched by branch {unmatched:?}"));
}

// Criterion 6

fn lens_classification(log: &mut Log) {
    let mut grid = Vec::new();
    for p in -LENS_BOUND..=LENS_BOUND {
        for q in -LENS_BOUND..=LENS_BOUND {
            if oracle::gcd(p, q) == 1 {
                grid.push(LensSpace::new(p, q).unwrap());
            }
        }
    }
    let forms: Vec<LensSpace> = grid.iter().map(|l| lens_normal_form(l).unwrap()).collect();
    let n = grid.len();
    let rel: Vec<Vec<bool>> =
        grid.iter().map(|a| grid.iter().map(|b| lens_homeomorphic(a, b)).collect()).collect();
    for i in 0..n {
        log.check(rel[i][i], || format!("{} not reflexive", grid[i]));
        for j in 0..n {
            let (a, b) = (&grid[i], &grid[j]);
            log.check(rel[i][j] == oracle::lens_homeomorphic(a.p, a.q, b.p, b.q), || format!("{a} vs {b} differs from criterion"));
            log.check(rel[i][j] == rel[j][i], || format!("{a} {b} not symmetric"));
            log.check((forms[i] == forms[j]) == rel[i][j], || format!("normal forms of {a} {b} disagree with the relation"));
            if rel[i][j] {
                for k in 0..n {
                    if rel[j][k] && !rel[i][k] {
                        log.failures.push(format!("{a} {b} {} not transitive", grid[k]));
                    }
                }
            }
        }
    }
    let l = |p, q| LensSpace::new(p, q).unwrap();
    log.check(lens_homeomorphic(&l(7, 2), &l(7, 3)), || "L(7,2) !~ L(7,3)".into());
    log.check(!lens_homeomorphic(&l(5, 1), &l(5, 2)), || "L(5,1) ~ L(5,2)".into());
    let classes: BTreeSet<_> = forms.iter().collect();
    log.note(format!("{n} lens spaces, {} classes; L(7,2)~L(7,3), L(5,1)!~L(5,2)", classes.len()));
}

// Criterion 7

fn seifert_classification(log: &mut Log) {
    let s = |v: &[(i64, i64)]| SeifertFibration::new(v.iter().copied()).unwrap();
    let base = s(&[(3, 1), (3, 1), (2, 1)]);
    let shift = seifert_isomorphic(&base, &s(&[(3, 4), (3, -2), (2, 1)])).unwrap();
    log.check(shift.as_ref().map(|w| w.delta) == Some(1), || format!("shift example: {shift:?}"));
    let reversal = seifert_isomorphic(&base, &s(&[(3, -1), (3, -1), (2, -1)])).unwrap();
    log.check(reversal.as_ref().map(|w| w.delta) == Some(-1), || format!("reversal example: {reversal:?}"));

    let other = s(&[(3, -2), (3, 1), (2, 1)]);
    log.check(seifert_isomorphic(&base, &other).unwrap().is_none(), || "Euler obstruction not applied".into());
    let (ea, eb) = (base.euler_sum().unwrap().to_string(), other.euler_sum().unwrap().to_string());
    log.check((ea.as_str(), eb.as_str()) == ("7/6", "1/6"), || format!("Euler sums {ea} and {eb}"));
    // The residues agree, so the Euler sum alone separates them.
    let residues = |f: &SeifertFibration| {
        let mut v: Vec<_> = f.pairs.iter().map(|p| (p.alpha, p.beta.rem_euclid(p.alpha))).collect();
        v.sort();
        v
    };
    log.check(residues(&base) == residues(&other), || "fixture residues differ".into());

    let mut pairs = Vec::new();
    for a in 1..=SEIFERT_ALPHA_MAX {
        for b in -SEIFERT_ALPHA_MAX..=SEIFERT_ALPHA_MAX {
            if oracle::gcd(a, b) == 1 {
                pairs.push((a, b));
            }
        }
    }
    let mut checked = 0;
    for &x in &pairs {
        for &y in &pairs {
            let f = SeifertFibration::new([x, y]).unwrap();
            let lens = seifert_to_lens(&f).unwrap();
            let h1 = h1_of_descriptor(&ManifoldDescriptor::Seifert(f)).unwrap();
            let (num, _) = oracle::euler(&[x, y]);
            log.check(num.unsigned_abs() == lens.p.unsigned_abs() as u128, || format!("{x:?} {y:?} -> {lens}"));
            let ok = match lens.p {
                0 => h1.rank == 1 && h1.torsion.is_empty(),
                p => h1.order() == Some(p.unsigned_abs().into()),
            };
            log.check(ok, || format!("{x:?} {y:?}: {lens} but H1 = {h1}"));
            checked += 1;
        }
    }
    log.note(format!("fixtures, Euler {ea} vs {eb}, {checked} two-fiber descriptors with alpha <= {SEIFERT_ALPHA_MAX}"));
}

// Criterion 8

fn census_checks(log: &mut Log) {
    let t = |s: &str| s.parse::<ManifoldDescriptor>().unwrap();
    for (target, want) in [("L(2,1)", 6), ("SFS((3,1),(5,2),(2,1))", 2), ("SFS((3,1),(3,1),(2,1))", 1)] {
        let got = count_classes(&t(target)).unwrap();
        log.check(got == Countability::Finite(want), || format!("{target}: {got:?}, expected Finite({want})"));
    }

    let window = CensusWindow::square(-2, 2).unwrap();
    let reps = generate(&t("L(5,2)"), &window).unwrap();
    let mut templates: BTreeMap<usize, Vec<FlowInvariant>> = BTreeMap::new();
    for r in &reps {
        templates.entry(r.template).or_default().push(r.invariant);
    }
    // The first template, (±1, n, p̄+2(q̄+kp̄), q̄+kp̄), written out here.
    let literal: Vec<FlowInvariant> = (-2..=2)
        .flat_map(|n| (-2..=2).map(move |k| FlowInvariant::new(1, n, 5 + 2 * (2 + 5 * k), 2 + 5 * k)))
        .collect();
    log.check(templates.get(&0) == Some(&literal), || "first L(5,2) template is not the generic one".into());
    for (j, a) in literal.iter().enumerate() {
        for b in &literal[j + 1..] {
            if oracle::consistent(&(*a).into(), &(*b).into()).is_some() {
                log.failures.push(format!("L(5,2) generic template: {a} ~ {b}"));
            }
        }
    }
    // Other templates may reach |l2| = 1, where members collide; every such
    // pair must be reported as a duplicate.
    let all: Vec<FlowInvariant> = reps.iter().map(|r| r.invariant).collect();
    let mut collisions = Vec::new();
    for (j, a) in all.iter().enumerate() {
        for b in &all[j + 1..] {
            if oracle::consistent(&(*a).into(), &(*b).into()).is_some() {
                collisions.push((*a, *b));
            }
        }
    }
    let reported = census(&t("L(5,2)"), &window).unwrap().duplicates;
    log.check(reported == collisions, || format!("L(5,2): {} duplicates reported, {} exist", reported.len(), collisions.len()));

    let sphere = census(&t("L(1,0)"), &CensusWindow::new((-1, 0), (0, 0)).unwrap()).unwrap();
    let (x, y) = (FlowInvariant::new(1, 0, 1, 0), FlowInvariant::new(1, -1, 1, 0));
    log.check(sphere.duplicates.iter().any(|&d| d == (x, y) || d == (y, x)), || "1d duplicate pair not reported".into());

    let (code, text) = bin(&["audit", "--bound", AUDIT_GOLDEN_BOUND]);
    log.check(code == 0, || format!("audit exited {code}"));
    log.check(text == AUDIT_GOLDEN, || "audit report differs from golden".into());
    log.note(format!(
        "RP3 6, SFS 2/1, L(5,2) (family {}) generic template independent, {} duplicates over {} templates reported, \
         1d pair reported, audit --bound {AUDIT_GOLDEN_BOUND} golden ({} bytes)",
        reps[0].family,
        collisions.len(),
        templates.len(),
        text.len()
    ));
}

// Criterion 9

fn snf_rows(m: &IntMatrix) -> Vec<Vec<i128>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| i128::try_from(&m[(i, j)]).unwrap()).collect()).collect()
}

fn is_invariant(v: &Value) -> bool {
    v.as_array().is_some_and(|a| a.len() == 4 && a.iter().all(Value::is_i64))
}

fn is_manifold(v: &Value) -> bool {
    v.as_str().is_some_and(|s| s.parse::<ManifoldDescriptor>().is_ok())
}

fn is_branch(v: &Value) -> bool {
    v.as_str().is_some_and(|s| ["1i", "1ii", "1iii", "2i", "2ii", "3"].contains(&s))
}

fn is_group(v: &Value) -> bool {
    let Some(o) = v.as_object() else { return false };
    let rank = o.get("rank").is_some_and(Value::is_u64);
    let torsion = o.get("torsion").and_then(Value::as_array).map(|t| t.iter().map(Value::as_u64).collect::<Option<Vec<_>>>());
    let chain = torsion.flatten().is_some_and(|t| t.iter().all(|&d| d >= 2) && t.windows(2).all(|w| w[1] % w[0] == 0));
    o.len() == 2 && rank && chain
}

fn is_census_report(v: &Value) -> bool {
    let Some(o) = v.as_object() else { return false };
    let list = |k: &str, f: fn(&Value) -> bool| o.get(k).and_then(Value::as_array).is_some_and(|a| a.iter().all(f));
    let pair = |p: &Value| p.as_array().is_some_and(|p| p.len() == 2 && p.iter().all(is_invariant));
    let count = o.get("count").is_some_and(|c| match c["kind"].as_str() {
        Some("finite") => c["value"].is_u64(),
        Some("countable") => c.get("value").is_none(),
        _ => false,
    });
    o.get("target").is_some_and(is_manifold)
        && list("representatives", is_invariant)
        && list("duplicates", pair)
        && list("mismatches", is_invariant)
        && count
}

fn is_catalog_row(v: &Value) -> bool {
    let Some(o) = v.as_object() else { return false };
    o.len() == 5
        && o.get("invariant").is_some_and(is_invariant)
        && o.get("canonical").is_some_and(is_invariant)
        && o.get("manifold").is_some_and(is_manifold)
        && o.get("h1").is_some_and(is_group)
        && o.get("branch").is_some_and(is_branch)
}

fn snf_and_determinism(log: &mut Log) {
    let mut rng = StdRng::seed_from_u64(SNF_SEED);
    for _ in 0..SNF_SAMPLES {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a = IntMatrix::new(r, c, (0..r * c).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect()).unwrap();
        let (d, u, v) = smith_normal_form(&a);
        log.check(u.mul(&a).and_then(|ua| ua.mul(&v)).as_ref() == Some(&d), || format!("U·A·V != D for {a}"));
        let unimodular = |m: &IntMatrix| m.det().is_some_and(|x| x == BigInt::from(1) || x == BigInt::from(-1));
        log.check(unimodular(&u) && unimodular(&v), || format!("U or V not unimodular for {a}"));
        let diag: Vec<i128> = d.diagonal().iter().map(|x| i128::try_from(x).unwrap()).collect();
        let nz: Vec<i128> = diag.iter().copied().take_while(|&x| x != 0).collect();
        let chain = d.is_diagonal()
            && diag.iter().all(|&x| x >= 0)
            && diag[nz.len()..].iter().all(|&x| x == 0)
            && nz.windows(2).all(|w| w[1] % w[0] == 0);
        log.check(chain, || format!("not a divisor chain: {d}"));
        log.check(nz == oracle::invariant_factors(&snf_rows(&a)), || format!("invariant factors of {a}"));
    }

    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.jsonl"), dir.path().join("b.jsonl")];
    for p in &paths {
        let (code, _) = bin(&["catalog", "--bound", CATALOG_BOUND, "-o", p.to_str().unwrap()]);
        log.check(code == 0, || format!("catalog exited {code}"));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    log.check(a == std::fs::read(&paths[1]).unwrap(), || "catalog runs differ".into());
    let rows: Vec<Value> = String::from_utf8(a.clone()).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    log.check(rows.iter().all(is_catalog_row), || "catalog row fails its schema".into());
    let keys: Vec<Vec<i64>> = rows.iter().map(|r| r["invariant"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()).collect();
    log.check(keys.windows(2).all(|w| w[0] < w[1]), || "catalog not sorted by invariant".into());
    for r in &rows {
        let c: FlowInvariant = serde_json::from_value(r["invariant"].clone()).unwrap();
        let canon: FlowInvariant = serde_json::from_value(r["canonical"].clone()).unwrap();
        let (branch, m) = identify(&c).unwrap();
        let ok = canon == canonical_form(&c).unwrap() && r["manifold"] == m.to_string() && r["branch"] == branch.tag();
        log.check(ok, || format!("catalog row {c} inconsistent"));
    }

    let mut docs = 0;
    let mut doc = |log: &mut Log, args: &[&str], valid: &dyn Fn(&Value) -> bool| {
        let v = bin_json(log, args);
        log.check(valid(&v), || format!("{args:?}: schema violation in {v}"));
        docs += 1;
    };
    doc(log, &["equiv", "3,1,5,2", "3,4,5,-3", "--json"], &|v| {
        v["consistent"] == true && v["delta"] == 1 && v.as_object().unwrap().len() == 2
    });
    doc(log, &["equiv", "3,1,5,2", "3,1,5,3", "--json"], &|v| v["consistent"] == false && v["delta"].is_null());
    doc(log, &["admissible", "0,3,1,0", "--json"], &|v| {
        is_invariant(&v["invariant"]) && v["admissible"] == false && v["reason"].is_string()
    });
    doc(log, &["canon", "0,2,3,4", "--json"], &|v| is_invariant(&v["invariant"]) && is_invariant(&v["canonical"]));
    doc(log, &["manifold", "0,2,3,1", "--json"], &|v| {
        v["manifold"] == "L(3,1)+RP3" && v["branch"] == "2i" && v["h1"] == serde_json::json!({"rank": 0, "torsion": [6]})
            && is_manifold(&v["normal_form"])
    });
    for c in ["3,1,5,2", "1,0,3,1", "0,2,1,0", "4,1,0,1"] {
        doc(log, &["homology", c, "--json"], &|v| {
            is_branch(&v["branch"])
                && is_manifold(&v["manifold"])
                && is_group(&v["descriptor_h1"])
                && v["surgery"].as_array().is_some_and(|s| s.iter().all(|s| is_group(&s["h1"]) && s["matches"].is_boolean()))
        });
    }
    doc(log, &["homology", "3,1,5,2", "--saddle-sign", "-1", "--json"], &|v| {
        is_group(&v["h1"]) && v["closed_form_order"].is_u64()
    });
    doc(log, &["lens-homeo", "7", "2", "7", "3", "--json"], &|v| {
        v["homeomorphic"] == true && v["normal_forms"].as_array().is_some_and(|a| a.iter().all(is_manifold))
    });
    doc(log, &["seifert-iso", "SFS((3,1),(3,1),(2,1))", "SFS((3,-2),(3,1),(2,1))", "--json"], &|v| {
        v["isomorphic"] == false && v["euler"] == serde_json::json!(["7/6", "1/6"])
    });
    for (target, n, k) in [("L(7,2)", "-1..1", "-1..1"), ("L(2,1)", "0..0", "0..0"), ("L(1,0)", "-1..0", "0..0"),
                           ("L(0,1)+RP3", "0..0", "0..0"), ("SFS((3,1),(5,2),(2,1))", "0..0", "0..0")] {
        doc(log, &["census", target, "--n", n, "--k", k, "--json"], &is_census_report);
    }
    doc(log, &["audit", "--bound", "2", "--json"], &|v| {
        v["violations"].is_array() && v["censuses"].as_array().is_some_and(|c| c.iter().all(is_census_report))
    });
    log.note(format!("{SNF_SAMPLES} matrices, catalog {} rows twice identical, {docs} JSON documents", rows.len()));
}

type Criterion = (&'static str, &'static str, fn(&mut Log));

fn main() {
    let criteria: [Criterion; 10] = [
        ("1", "equivalence relation on the |entry| <= 5 grid", equivalence_relation),
        ("2", "orbit and canonical-form soundness", orbit_soundness),
        ("3", "manifold identification fixtures", identification_fixtures),
        ("4", "class-invariance audit against golden", class_invariance_audit),
        ("5a", "surgery torsion order = closed form", surgery_order),
        ("5b", "H1 sign calibration by branch", homology_calibration),
        ("6", "lens classification, |p|,|q| <= 12", lens_classification),
        ("7", "Seifert classification", seifert_classification),
        ("8", "census counts, independence, duplicates, audit golden", census_checks),
        ("9", "SNF postconditions, catalog determinism, JSON schemas", snf_and_determinism),
    ];
    let mut failed = Vec::new();
    for (id, title, run) in criteria {
        let mut log = Log::default();
        let start = Instant::now();
        run(&mut log);
        let elapsed = start.elapsed();
        if elapsed > TIME_BUDGET {
            log.failures.push(format!("took {elapsed:?}, budget {TIME_BUDGET:?}"));
        }
        let verdict = if log.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {id:<3} {verdict}  {title}: {} [{:.2}s]", log.summary.join("; "), elapsed.as_secs_f64());
        for f in log.failures.iter().take(5) {
            println!("    {f}");
        }
        if log.failures.len() > 5 {
            println!("    ... {} more", log.failures.len() - 5);
        }
        if !log.failures.is_empty() {
            failed.push(id);
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
