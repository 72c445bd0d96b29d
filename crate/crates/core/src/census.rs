//! Representative families of the equivalence classes over each ambient
//! manifold, class counts, and the bounded-grid audit that checks the
//! families and the manifold map against the consistency relation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_rational::BigRational;

use crate::intlat::{bar_q, congruent_wide, least_residue, tilde_q};
use crate::invariant::{canonical_unchecked, consistent_unchecked, FlowInvariant, InvariantError};
use crate::manifold::{identify, manifold_homeomorphic, Branch, FiberPair, ManifoldDescriptor, ManifoldError};

/// Largest grid bound `audit` accepts.
pub const AUDIT_BOUND_LIMIT: i64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("unsupported census target {target}: {reason}")]
    Unsupported { target: String, reason: &'static str },
    #[error("empty window range {0}..{1}")]
    EmptyRange(i64, i64),
    #[error("audit bound must be in 1..={AUDIT_BOUND_LIMIT}, got {0}")]
    Bound(i64),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// Ranges of the free parameters `n` and `k`, both inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CensusWindow {
    pub n_min: i64,
    pub n_max: i64,
    pub k_min: i64,
    pub k_max: i64,
}

impl CensusWindow {
    pub fn new(n: (i64, i64), k: (i64, i64)) -> Result<Self, CensusError> {
        for (lo, hi) in [n, k] {
            if lo > hi {
                return Err(CensusError::EmptyRange(lo, hi));
            }
        }
        Ok(Self { n_min: n.0, n_max: n.1, k_min: k.0, k_max: k.1 })
    }

    pub fn square(lo: i64, hi: i64) -> Result<Self, CensusError> {
        Self::new((lo, hi), (lo, hi))
    }

    pub fn enlarged(&self, n_by: i64, k_by: i64) -> Self {
        Self { n_min: self.n_min - n_by, n_max: self.n_max + n_by, k_min: self.k_min - k_by, k_max: self.k_max + k_by }
    }

    fn ns(&self) -> impl Iterator<Item = i64> + Clone {
        self.n_min..=self.n_max
    }

    fn ks(&self) -> impl Iterator<Item = i64> + Clone {
        self.k_min..=self.k_max
    }
}


impl fmt::Display for CensusWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}..{} k={}..{}", self.n_min, self.n_max, self.k_min, self.k_max)
    }
}

/// Inclusive integer range written `a..b`.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a range 'a..b', got '{s}'"))?;
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("bad range bound '{t}': {e}"));
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "1a")]
    LensGeneric,
    #[serde(rename = "1b")]
    LensAmphicheiral,
    #[serde(rename = "1c")]
    SphereTimesCircle,
    #[serde(rename = "1d")]
    Sphere,
    #[serde(rename = "1e")]
    ProjectiveSpace,
    #[serde(rename = "2a")]
    SumGeneric,
    #[serde(rename = "2b")]
    SumAmphicheiral,
    #[serde(rename = "2c")]
    SumSphereTimesCircle,
    #[serde(rename = "2d")]
    SumProjectiveSpace,
    #[serde(rename = "3a")]
    SeifertEqual,
    #[serde(rename = "3b")]
    SeifertUnequal,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::LensGeneric => "1a",
            Self::LensAmphicheiral => "1b",
            Self::SphereTimesCircle => "1c",
            Self::Sphere => "1d",
            Self::ProjectiveSpace => "1e",
            Self::SumGeneric => "2a",
            Self::SumAmphicheiral => "2b",
            Self::SumSphereTimesCircle => "2c",
            Self::SumProjectiveSpace => "2d",
            Self::SeifertEqual => "3a",
            Self::SeifertUnequal => "3b",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One emitted tuple, with the template (within its family) it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Representative {
    pub invariant: FlowInvariant,
    pub family: Family,
    pub template: usize,
}

struct Emitter {
    family: Family,
    out: Vec<Representative>,
    template: usize,
}

impl Emitter {
    fn new(family: Family) -> Self {
        Self { family, out: Vec::new(), template: 0 }
    }

    /// Emit every tuple of one template, then advance to the next.
    fn template(&mut self, tuples: impl IntoIterator<Item = [i64; 4]>) {
        for t in tuples {
            self.out.push(Representative { invariant: t.into(), family: self.family, template: self.template });
        }
        self.template += 1;
    }

    fn fixed(&mut self, tuples: &[[i64; 4]]) {
        for t in tuples {
            self.template([*t]);
        }
    }
}

/// The two lens-type families with free `n`, `k`: for each shift class `Q`
/// the pair `(sp + 2(Q + k p̄), Q + k p̄)` sits next to `(±1, n)` on either
/// side.
fn lens_family(e: &mut Emitter, pbar: i64, qs: &[i64], w: &CensusWindow) {
    for second in [false, true] {
        for &q in qs {
            for sp in [pbar, -pbar] {
                for sign in [1, -1] {
                    let tuples = w.ns().flat_map(|n| {
                        w.ks().map(move |k| {
                            let b = q + k * pbar;
                            let l = sp + 2 * b;
                            if second { [l, b, sign, n] } else { [sign, n, l, b] }
                        })
                    });
                    e.template(tuples.collect::<Vec<_>>());
                }
            }
        }
    }
}

fn sum_family(e: &mut Emitter, pbar: i64, qs: &[i64]) {
    for cs in [[2, -2], [1, -1]] {
        for &q in qs {
            for c in cs {
                for sp in [pbar, -pbar] {
                    e.template([[0, c, sp, q], [0, c, sp, -q]]);
                }
            }
        }
    }
    for &q in qs {
        for d in [1, -1] {
            for sp in [pbar, -pbar] {
                e.template([[sp, q, 0, d], [sp, -q, 0, d]]);
            }
        }
    }
}

fn amphicheiral(p: i64, q: i64) -> bool {
    let (p, q) = (p as i128, q as i128);
    congruent_wide(q * q, 1, p) || congruent_wide(q * q, -1, p)
}

fn unsupported(target: &ManifoldDescriptor, reason: &'static str) -> CensusError {
    CensusError::Unsupported { target: target.to_string(), reason }
}

/// The two fibers other than the exceptional `(2,1)` one.
fn seifert_core(target: &ManifoldDescriptor, pairs: &[FiberPair]) -> Result<(FiberPair, FiberPair), CensusError> {
    if pairs.len() != 3 {
        return Err(unsupported(target, "needs exactly three fibers"));
    }
    let Some(at) = pairs.iter().rposition(|p| *p == FiberPair::new(2, 1)) else {
        return Err(unsupported(target, "no (2,1) fiber"));
    };
    let rest: Vec<_> = pairs.iter().enumerate().filter(|&(i, _)| i != at).map(|(_, p)| *p).collect();
    if rest.iter().any(|p| p.alpha.abs() < 2) {
        return Err(unsupported(target, "remaining fibers need |alpha| >= 2"));
    }
    Ok((rest[0], rest[1]))
}

/// All tuples the families prescribe for `target`, labeled by family and
/// template, in the order the families list them.
pub fn generate(target: &ManifoldDescriptor, window: &CensusWindow) -> Result<Vec<Representative>, CensusError> {
    target.validate()?;
    let e = match target {
        ManifoldDescriptor::Lens(l) => {
            let pbar = l.p.abs();
            match pbar {
                0 => {
                    let mut e = Emitter::new(Family::SphereTimesCircle);
                    for second in [false, true] {
                        for (a, b) in [(2, 1), (-2, -1)] {
                            for sign in [1, -1] {
                                e.template(window.ns().map(|n| if second { [a, b, sign, n] } else { [sign, n, a, b] }));
                            }
                        }
                    }
                    e
                }
                1 => {
                    let mut e = Emitter::new(Family::Sphere);
                    for second in [false, true] {
                        for sign in [1, -1] {
                            let tuples = window.ns().flat_map(|n| {
                                window.ks().map(move |k| if second { [1 + 2 * k, k, sign, n] } else { [sign, n, 1 + 2 * k, k] })
                            });
                            e.template(tuples.collect::<Vec<_>>());
                        }
                    }
                    e
                }
                2 => {
                    let mut e = Emitter::new(Family::ProjectiveSpace);
                    e.fixed(&[[1, 0, 0, 1], [-1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [0, 2, 1, 0], [0, 2, -1, 0]]);
                    e
                }
                _ => {
                    let (qb, qt) = (bar_q(l.p, l.q).map_err(ManifoldError::from)?, tilde_q(l.p, l.q).map_err(ManifoldError::from)?);
                    if amphicheiral(l.p, l.q) {
                        let mut e = Emitter::new(Family::LensAmphicheiral);
                        lens_family(&mut e, pbar, &[qb, -qb], window);
                        e
                    } else {
                        let mut e = Emitter::new(Family::LensGeneric);
                        lens_family(&mut e, pbar, &[qb, -qb, qt, -qt], window);
                        e
                    }
                }
            }
        }
        ManifoldDescriptor::LensSumRP3(l) => match l.p.abs() {
            0 => {
                let mut e = Emitter::new(Family::SumSphereTimesCircle);
                e.fixed(&[[0, 2, 0, 1], [0, 2, 0, -1], [0, 1, 0, 1], [0, 1, 0, -1]]);
                e
            }
            1 => return Err(unsupported(target, "L(±1,q)+RP3 is RP3, use L(2,1)")),
            2 => {
                let mut e = Emitter::new(Family::SumProjectiveSpace);
                e.fixed(&[
                    [0, 2, 2, 1], [0, 2, 2, -1], [0, 2, -2, 1], [0, 2, -2, -1],
                    [0, 1, 2, 1], [0, 1, 2, -1], [0, 1, -2, 1], [0, 1, -2, -1],
                    [2, 1, 0, 1], [2, -1, 0, 1], [-2, 1, 0, 1], [-2, -1, 0, 1],
                ]);
                e
            }
            pbar => {
                let (qb, qt) = (bar_q(l.p, l.q).map_err(ManifoldError::from)?, tilde_q(l.p, l.q).map_err(ManifoldError::from)?);
                if amphicheiral(l.p, l.q) {
                    let mut e = Emitter::new(Family::SumAmphicheiral);
                    sum_family(&mut e, pbar, &[qb]);
                    e
                } else {
                    let mut e = Emitter::new(Family::SumGeneric);
                    sum_family(&mut e, pbar, &[qb, qt]);
                    e
                }
            }
        },
        ManifoldDescriptor::Seifert(s) => {
            let (x, y) = seifert_core(target, &s.pairs)?;
            if x == y {
                let mut e = Emitter::new(Family::SeifertEqual);
                e.fixed(&[[x.alpha, x.beta, x.alpha, x.beta]]);
                e
            } else {
                let mut e = Emitter::new(Family::SeifertUnequal);
                e.fixed(&[[x.alpha, x.beta, y.alpha, y.beta], [y.alpha, y.beta, x.alpha, x.beta]]);
                e
            }
        }
    };
    for r in &e.out {
        r.invariant.require_admissible()?;
    }
    Ok(e.out)
}

pub fn representatives(target: &ManifoldDescriptor, window: &CensusWindow) -> Result<Vec<FlowInvariant>, CensusError> {
    Ok(generate(target, window)?.into_iter().map(|r| r.invariant).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Countability {
    Finite(usize),
    #[serde(rename = "countable")]
    CountablyInfinite,
}

impl fmt::Display for Countability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(n) => write!(f, "finite({n})"),
            Self::CountablyInfinite => write!(f, "countably infinite"),
        }
    }
}

/// Lens spaces other than `RP3` carry infinitely many classes; every other
/// supported target carries as many as its (finite) list has distinct
/// consistency classes.
pub fn count_classes(target: &ManifoldDescriptor) -> Result<Countability, CensusError> {
    let reps = representatives(target, &CensusWindow::default())?;
    if let ManifoldDescriptor::Lens(l) = target {
        if l.p.abs() != 2 {
            return Ok(Countability::CountablyInfinite);
        }
    }
    let classes: BTreeSet<_> = reps.iter().map(canonical_unchecked).collect::<Result<_, _>>()?;
    Ok(Countability::Finite(classes.len()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub target: ManifoldDescriptor,
    pub representatives: Vec<FlowInvariant>,
    /// Consistent pairs `(earlier, later)` in emission order.
    pub duplicates: Vec<(FlowInvariant, FlowInvariant)>,
    /// Representatives whose ambient manifold is not the target.
    pub mismatches: Vec<FlowInvariant>,
    pub count: Countability,
}

pub fn census(target: &ManifoldDescriptor, window: &CensusWindow) -> Result<CensusReport, CensusError> {
    let reps = representatives(target, window)?;
    let mut duplicates = Vec::new();
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if consistent_unchecked(a, b).is_some() {
                duplicates.push((*a, *b));
            }
        }
    }
    let mut mismatches = Vec::new();
    for r in &reps {
        let (_, m) = identify(r)?;
        if !manifold_homeomorphic(&m, target)? {
            mismatches.push(*r);
        }
    }
    Ok(CensusReport { target: target.clone(), representatives: reps, duplicates, mismatches, count: count_classes(target)? })
}

impl CensusReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "census {} count={} representatives={} duplicates={} mismatches={}",
            self.target,
            self.count,
            self.representatives.len(),
            self.duplicates.len(),
            self.mismatches.len()
        )
        .unwrap();
        for r in &self.representatives {
            writeln!(s, "  rep {r}").unwrap();
        }
        for (a, b) in &self.duplicates {
            writeln!(s, "  duplicate {a} {b}").unwrap();
        }
        for m in &self.mismatches {
            writeln!(s, "  mismatch {m}").unwrap();
        }
        s
    }
}

/// Two consistent tuples whose ambient manifolds differ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub a: FlowInvariant,
    pub b: FlowInvariant,
    pub branches: (Branch, Branch),
    pub manifolds: (ManifoldDescriptor, ManifoldDescriptor),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}/{} {} {}",
            self.a, self.b, self.branches.0, self.branches.1, self.manifolds.0, self.manifolds.1
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub target: ManifoldDescriptor,
    /// Classes with a member over this target.
    pub classes: usize,
    /// Canonical forms of those classes no representative is consistent with.
    pub uncovered: Vec<FlowInvariant>,
    /// Set when the target has no family.
    pub unsupported: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub bound: i64,
    pub window: CensusWindow,
    pub admissible: usize,
    pub classes: usize,
    pub violations: Vec<Violation>,
    pub coverage: Vec<Coverage>,
    pub censuses: Vec<CensusReport>,
}

/// Admissible tuples with every entry in `[-bound, bound]`, in
/// lexicographic order.
pub fn admissible_grid(bound: i64) -> Vec<FlowInvariant> {
    let r = -bound..=bound;
    let mut out = Vec::new();
    for l1 in r.clone() {
        for b1 in r.clone() {
            for l2 in r.clone() {
                for b2 in r.clone() {
                    let c = FlowInvariant::new(l1, b1, l2, b2);
                    if c.is_admissible() {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

/// Complete homeomorphism invariant of a normal form: lens normal forms
/// are already canonical; a Seifert fibration is keyed by the least, over
/// both orientations, of its sorted `(α, δβ mod α)` multiset and `δ·e`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum TypeKey {
    Prime(ManifoldDescriptor),
    Seifert(Vec<(i64, i64)>, BigRational),
}

fn type_key(normal: &ManifoldDescriptor) -> Result<TypeKey, ManifoldError> {
    let ManifoldDescriptor::Seifert(s) = normal else {
        return Ok(TypeKey::Prime(normal.clone()));
    };
    let e = s.euler_sum()?;
    let key = |delta: i64| {
        let mut v: Vec<_> = s.pairs.iter().map(|p| (p.alpha, least_residue(delta * p.beta, p.alpha))).collect();
        v.sort();
        (v, if delta == 1 { e.clone() } else { -e.clone() })
    };
    let (v, e) = key(1).min(key(-1));
    Ok(TypeKey::Seifert(v, e))
}

/// Sweep the admissible grid `|l_i|, |b_i| <= bound`: class invariance of
/// the manifold map, coverage of every class by the families of its
/// manifold (searched in a widened `window`), and the census of
/// each manifold over `window`.
pub fn audit(bound: i64, window: &CensusWindow) -> Result<AuditReport, CensusError> {
    if !(1..=AUDIT_BOUND_LIMIT).contains(&bound) {
        return Err(CensusError::Bound(bound));
    }
    let grid = admissible_grid(bound);
    let mut classes: BTreeMap<FlowInvariant, Vec<(FlowInvariant, Branch, ManifoldDescriptor)>> = BTreeMap::new();
    for c in &grid {
        let (branch, m) = identify(c)?;
        classes.entry(canonical_unchecked(c)?).or_default().push((*c, branch, m));
    }

    let mut violations = Vec::new();
    for members in classes.values() {
        for (i, (a, ba, ma)) in members.iter().enumerate() {
            for (b, bb, mb) in &members[i + 1..] {
                if !manifold_homeomorphic(ma, mb)? {
                    violations.push(Violation { a: *a, b: *b, branches: (*ba, *bb), manifolds: (ma.clone(), mb.clone()) });
                }
            }
        }
    }
    violations.sort();

    let mut forms = BTreeMap::new();
    for members in classes.values() {
        for (_, _, m) in members {
            if !forms.contains_key(m) {
                forms.insert(m.clone(), m.normal_form()?);
            }
        }
    }
    // Each type is represented by its least normal form.
    let mut types: BTreeMap<TypeKey, ManifoldDescriptor> = BTreeMap::new();
    let mut keys = BTreeMap::new();
    for (m, normal) in &forms {
        let key = type_key(normal)?;
        let slot = types.entry(key.clone()).or_insert_with(|| normal.clone());
        if normal < slot {
            *slot = normal.clone();
        }
        keys.insert(m.clone(), key);
    }
    let mut by_target: BTreeMap<&TypeKey, BTreeSet<FlowInvariant>> = BTreeMap::new();
    for (canon, members) in &classes {
        for (_, _, m) in members {
            by_target.entry(&keys[m]).or_default().insert(*canon);
        }
    }

    // Solving the consistency condition for the free slot of a `(±1, n)`
    // representative gives |n| <= 3·bound; k is pinned by the l-entry.
    let wide = window.enlarged(4 * bound, bound);
    let mut coverage = Vec::new();
    let mut censuses = Vec::new();
    for (key, class_set) in &by_target {
        let target = &types[*key];
        match generate(target, &wide) {
            Ok(reps) => {
                let reached: BTreeSet<_> =
                    reps.iter().map(|r| canonical_unchecked(&r.invariant)).collect::<Result<_, _>>()?;
                let uncovered = class_set.iter().filter(|c| !reached.contains(c)).copied().collect();
                coverage.push(Coverage { target: target.clone(), classes: class_set.len(), uncovered, unsupported: None });
                censuses.push(census(target, window)?);
            }
            Err(CensusError::Unsupported { reason, .. }) => coverage.push(Coverage {
                target: target.clone(),
                classes: class_set.len(),
                uncovered: class_set.iter().copied().collect(),
                unsupported: Some(reason.to_string()),
            }),
            Err(e) => return Err(e),
        }
    }
    coverage.sort_by_key(|c| c.target.to_string());
    censuses.sort_by_key(|c| c.target.to_string());

    Ok(AuditReport { bound, window: *window, admissible: grid.len(), classes: classes.len(), violations, coverage, censuses })
}

impl AuditReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "audit bound={} window {}", self.bound, self.window).unwrap();
        writeln!(s, "admissible {}", self.admissible).unwrap();
        writeln!(s, "classes {}", self.classes).unwrap();
        writeln!(s, "violations {}", self.violations.len()).unwrap();
        for v in &self.violations {
            writeln!(s, "  {v}").unwrap();
        }
        let uncovered: usize = self.coverage.iter().map(|c| c.uncovered.len()).sum();
        writeln!(s, "coverage targets={} uncovered={}", self.coverage.len(), uncovered).unwrap();
        for c in &self.coverage {
            write!(s, "  {} classes={} uncovered={}", c.target, c.classes, c.uncovered.len()).unwrap();
            if let Some(r) = &c.unsupported {
                write!(s, " unsupported: {r}").unwrap();
            }
            writeln!(s).unwrap();
            for u in &c.uncovered {
                writeln!(s, "    uncovered {u}").unwrap();
            }
        }
        for c in &self.censuses {
            s.push_str(&c.render_text());
        }
        s
    }
}

impl FromStr for CensusWindow {
    type Err = String;

    /// `n=a..b,k=c..d`.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut n = None;
        let mut k = None;
        for part in s.split(',') {
            match part.trim().split_once('=') {
                Some(("n", r)) => n = Some(parse_range(r)?),
                Some(("k", r)) => k = Some(parse_range(r)?),
                _ => return Err(format!("expected 'n=a..b' or 'k=a..b', got '{part}'")),
            }
        }
        CensusWindow::new(n.unwrap_or((0, 0)), k.unwrap_or((0, 0))).map_err(|e| e.to_string())
    }
}
