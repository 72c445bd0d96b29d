//! Lens spaces, lens-space sums with `RP3`, small Seifert fibrations over
//! the sphere, their homeomorphism/isomorphism criteria and the map from a
//! flow invariant to its ambient manifold.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::intlat::{bar_q, congruent, congruent_wide, ext_gcd, gcd, least_residue, tilde_q, LatticeError};
use crate::invariant::{FlowInvariant, InvariantError};
use crate::text::{ParseError, Scanner};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("gcd({0}, {1}) = {2}, expected coprime pair")]
    NotCoprime(i64, i64, i64),
    #[error("fiber multiplicity must be nonzero")]
    ZeroMultiplicity,
    #[error("{0} special fibers remain after normalization, a lens space needs at most 2")]
    TooManyFibers(usize),
    #[error("arithmetic overflow")]
    Overflow,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

fn coprime(a: i64, b: i64) -> Result<(), ManifoldError> {
    match gcd(a, b) {
        1 => Ok(()),
        g => Err(ManifoldError::NotCoprime(a, b, g)),
    }
}

/// `L(p, q)`: two solid tori glued so the meridian goes to `<p, q>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LensSpace {
    pub p: i64,
    pub q: i64,
}

impl LensSpace {
    pub fn new(p: i64, q: i64) -> Result<Self, ManifoldError> {
        coprime(p, q)?;
        Ok(Self { p, q })
    }

    pub fn is_valid(&self) -> bool {
        gcd(self.p, self.q) == 1
    }
}

/// `L(p, q) # RP3`. Only the lens summand is stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LensSumRP3 {
    pub p: i64,
    pub q: i64,
}

impl LensSumRP3 {
    pub fn new(p: i64, q: i64) -> Result<Self, ManifoldError> {
        coprime(p, q)?;
        Ok(Self { p, q })
    }

    pub fn summand(&self) -> LensSpace {
        LensSpace { p: self.p, q: self.q }
    }
}

/// Unnormalized Seifert invariant `(α, β)` of one fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiberPair {
    pub alpha: i64,
    pub beta: i64,
}

impl FiberPair {
    pub const fn new(alpha: i64, beta: i64) -> Self {
        Self { alpha, beta }
    }

    fn validate(&self) -> Result<(), ManifoldError> {
        if self.alpha == 0 {
            return Err(ManifoldError::ZeroMultiplicity);
        }
        coprime(self.alpha, self.beta)
    }
}

/// `M(S², (α1, β1), ..., (αr, βr))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeifertFibration {
    pub pairs: Vec<FiberPair>,
}

impl SeifertFibration {
    pub fn new(pairs: impl IntoIterator<Item = (i64, i64)>) -> Result<Self, ManifoldError> {
        let s = Self::from_pairs(pairs);
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_pairs(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        Self { pairs: pairs.into_iter().map(|(a, b)| FiberPair::new(a, b)).collect() }
    }

    pub fn validate(&self) -> Result<(), ManifoldError> {
        self.pairs.iter().try_for_each(FiberPair::validate)
    }

    /// `Σ β_i / α_i`, exactly.
    pub fn euler_sum(&self) -> Result<BigRational, ManifoldError> {
        self.validate()?;
        Ok(self.pairs.iter().fold(BigRational::zero(), |acc, p| {
            acc + BigRational::new(BigInt::from(p.beta), BigInt::from(p.alpha))
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ManifoldDescriptor {
    Lens(LensSpace),
    LensSumRP3(LensSumRP3),
    Seifert(SeifertFibration),
}

impl From<LensSpace> for ManifoldDescriptor {
    fn from(l: LensSpace) -> Self {
        Self::Lens(l)
    }
}

impl From<LensSumRP3> for ManifoldDescriptor {
    fn from(l: LensSumRP3) -> Self {
        Self::LensSumRP3(l)
    }
}

impl From<SeifertFibration> for ManifoldDescriptor {
    fn from(s: SeifertFibration) -> Self {
        Self::Seifert(s)
    }
}

impl ManifoldDescriptor {
    pub fn validate(&self) -> Result<(), ManifoldError> {
        match self {
            Self::Lens(l) => coprime(l.p, l.q),
            Self::LensSumRP3(l) => coprime(l.p, l.q),
            Self::Seifert(s) => s.validate(),
        }
    }

    /// A deterministic representative of the homeomorphism type: lens
    /// normal forms for lenses and sum summands, Seifert fibrations with at
    /// most two special fibers converted to lenses, others normalized.
    pub fn normal_form(&self) -> Result<ManifoldDescriptor, ManifoldError> {
        Ok(match self.reduce()? {
            Self::Lens(l) => Self::Lens(lens_normal_form(&l)?),
            Self::LensSumRP3(l) => {
                let n = lens_normal_form(&l.summand())?;
                Self::LensSumRP3(LensSumRP3 { p: n.p, q: n.q })
            }
            seifert => seifert,
        })
    }

    /// Seifert descriptors with at most two fibers become lens spaces.
    fn reduce(&self) -> Result<ManifoldDescriptor, ManifoldError> {
        self.validate()?;
        Ok(match self {
            Self::Seifert(s) => {
                let n = seifert_normalize(s)?;
                if n.pairs.len() <= 2 {
                    Self::Lens(seifert_to_lens(&n)?)
                } else {
                    Self::Seifert(n)
                }
            }
            other => other.clone(),
        })
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

impl fmt::Display for ManifoldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lens(l) => write!(f, "{l}"),
            Self::LensSumRP3(l) => write!(f, "L({},{})+RP3", l.p, l.q),
            Self::Seifert(s) => {
                write!(f, "SFS(")?;
                for (i, p) in s.pairs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({},{})", p.alpha, p.beta)?;
                }
                write!(f, ")")
            }
        }
    }
}

fn parse_pair(sc: &mut Scanner<'_>) -> Result<(i64, i64), ParseError> {
    sc.expect('(')?;
    let a = sc.integer()?;
    sc.expect(',')?;
    let b = sc.integer()?;
    sc.expect(')')?;
    Ok((a, b))
}

impl FromStr for ManifoldDescriptor {
    type Err = ParseError;

    /// `L(p,q)`, `L(p,q)+RP3` or `SFS((a1,b1),...,(ar,br))`; whitespace is
    /// ignored. Coprimality is not checked here.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut sc = Scanner::new(s);
        let out = if sc.eat_keyword("SFS") {
            sc.expect('(')?;
            let mut pairs = Vec::new();
            if !sc.eat(')') {
                loop {
                    pairs.push(parse_pair(&mut sc)?);
                    if sc.eat(')') {
                        break;
                    }
                    sc.expect(',')?;
                }
            }
            Self::Seifert(SeifertFibration::from_pairs(pairs))
        } else if sc.eat_keyword("L") {
            let (p, q) = parse_pair(&mut sc)?;
            if sc.eat('+') {
                if !sc.eat_keyword("RP3") {
                    return Err(sc.error("expected 'RP3' after '+'"));
                }
                Self::LensSumRP3(LensSumRP3 { p, q })
            } else {
                Self::Lens(LensSpace { p, q })
            }
        } else {
            return Err(sc.error("expected 'L(' or 'SFS('"));
        };
        sc.finish()?;
        Ok(out)
    }
}

impl Serialize for ManifoldDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ManifoldDescriptor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `|p| = |p'|` and `q = ±q'` or `q q' = ±1` modulo `p`.
pub fn lens_homeomorphic(a: &LensSpace, b: &LensSpace) -> bool {
    if a.p.abs() != b.p.abs() {
        return false;
    }
    let (p, q, q2) = (a.p as i128, a.q as i128, b.q as i128);
    congruent_wide(q, q2, p)
        || congruent_wide(q, -q2, p)
        || congruent_wide(q * q2, 1, p)
        || congruent_wide(q * q2, -1, p)
}

/// Canonical member of the homeomorphism class: `(|p|, min(q̄, q̃))`, with
/// `L(0,1)`, `L(1,0)` and `L(2,1)` for `|p| <= 2`.
pub fn lens_normal_form(l: &LensSpace) -> Result<LensSpace, ManifoldError> {
    coprime(l.p, l.q)?;
    Ok(match l.p.abs() {
        0 => LensSpace { p: 0, q: 1 },
        1 => LensSpace { p: 1, q: 0 },
        2 => LensSpace { p: 2, q: 1 },
        p => LensSpace { p, q: bar_q(l.p, l.q)?.min(tilde_q(l.p, l.q)?) },
    })
}

/// Orientation sign and fiber permutation realizing a Seifert isomorphism:
/// pair `i` of the first fibration matches pair `permutation[i]` of the
/// second.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertWitness {
    pub delta: i64,
    pub permutation: Vec<usize>,
}

fn match_fibers(a: &[FiberPair], b: &[FiberPair], delta: i64) -> Option<Vec<usize>> {
    // (α, β) and (−α, −β) describe the same fiber.
    let pos = |p: &FiberPair| if p.alpha < 0 { FiberPair::new(-p.alpha, -p.beta) } else { *p };
    let a: Vec<_> = a.iter().map(pos).collect();
    let b: Vec<_> = b.iter().map(pos).collect();
    let mut used = vec![false; b.len()];
    let mut perm = Vec::with_capacity(a.len());
    for x in &a {
        // Matching is an equivalence on (α, β mod α), so greedy is exact.
        let j = (0..b.len()).find(|&j| {
            !used[j] && b[j].alpha == x.alpha && congruent(x.beta, delta * b[j].beta, x.alpha)
        })?;
        used[j] = true;
        perm.push(j);
    }
    Some(perm)
}

/// Isomorphism of Seifert fibrations over the sphere: same number of
/// fibers, and for some `δ = ±1` and permutation `σ`, `α_i = α'_σ(i)`,
/// `β_i = δ β'_σ(i) (mod α_i)` and `Σ β/α = δ Σ β'/α'`.
pub fn seifert_isomorphic(
    a: &SeifertFibration,
    b: &SeifertFibration,
) -> Result<Option<SeifertWitness>, ManifoldError> {
    a.validate()?;
    b.validate()?;
    if a.pairs.len() != b.pairs.len() {
        return Ok(None);
    }
    let (ea, eb) = (a.euler_sum()?, b.euler_sum()?);
    for delta in [1i64, -1] {
        let rhs = if delta == 1 { eb.clone() } else { -eb.clone() };
        if ea != rhs {
            continue;
        }
        if let Some(permutation) = match_fibers(&a.pairs, &b.pairs, delta) {
            return Ok(Some(SeifertWitness { delta, permutation }));
        }
    }
    Ok(None)
}

/// Make every `α` positive, fold `α = 1` fibers into the first remaining
/// fiber and sort by `(α, β mod α, β)`.
///
/// If only `α = 1` fibers are present their total `e` survives as the
/// single pair `(1, e)`, or vanishes when `e = 0`.
pub fn seifert_normalize(s: &SeifertFibration) -> Result<SeifertFibration, ManifoldError> {
    s.validate()?;
    let flipped = s.pairs.iter().map(|p| {
        if p.alpha < 0 { FiberPair::new(-p.alpha, -p.beta) } else { *p }
    });
    let (ones, mut rest): (Vec<_>, Vec<_>) = flipped.partition(|p| p.alpha == 1);
    let extra: i128 = ones.iter().map(|p| p.beta as i128).sum();
    match rest.first_mut() {
        Some(first) => {
            first.beta = i64::try_from(first.beta as i128 + extra * first.alpha as i128)
                .map_err(|_| ManifoldError::Overflow)?;
        }
        None if extra != 0 => {
            rest.push(FiberPair::new(1, i64::try_from(extra).map_err(|_| ManifoldError::Overflow)?))
        }
        None => {}
    }
    rest.sort_by_key(|p| (p.alpha, least_residue(p.beta, p.alpha), p.beta));
    Ok(SeifertFibration { pairs: rest })
}

/// Lens space carrying a Seifert fibration with at most two special fibers.
///
/// No fibers gives `L(0,1)`, one fiber `(α, β)` gives `L(β, α)`, and two
/// fibers give `p = β1 α2 + α1 β2`, `q = β1 ν2 + α1 ξ2` with
/// `α2 ξ2 - ν2 β2 = 1`, returned in lens normal form.
pub fn seifert_to_lens(s: &SeifertFibration) -> Result<LensSpace, ManifoldError> {
    let n = seifert_normalize(s)?;
    match n.pairs.as_slice() {
        [] => Ok(LensSpace { p: 0, q: 1 }),
        [x] => LensSpace::new(x.beta, x.alpha),
        [x, y] => {
            let (_, xi, minus_nu) = ext_gcd(y.alpha, y.beta);
            let nu = -(minus_nu as i128);
            let p = x.beta as i128 * y.alpha as i128 + x.alpha as i128 * y.beta as i128;
            let q = x.beta as i128 * nu + x.alpha as i128 * xi as i128;
            // p = 0 forces |q| = 1; both signs give S²×S¹.
            let q = if p == 0 { 1 } else { q.rem_euclid(p.abs()) };
            let p = i64::try_from(p).map_err(|_| ManifoldError::Overflow)?;
            lens_normal_form(&LensSpace::new(p, q as i64)?)
        }
        more => Err(ManifoldError::TooManyFibers(more.len())),
    }
}

/// Which case of the manifold identification a tuple falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `|l_i| = 1` for some `i` and `l1 l2 = 0`: `RP3`.
    ProjectiveSpace,
    /// `|l1| = 1`, `l2 != 0`.
    LensFromSecond,
    /// `|l2| = 1`, `l1 != 0`, `|l1| != 1`.
    LensFromFirst,
    /// `l1 = 0`, sum from the second pair.
    SumFromSecond,
    /// `l2 = 0`, sum from the first pair.
    SumFromFirst,
    /// `|l1|, |l2| > 1`.
    Seifert,
}

impl Branch {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::ProjectiveSpace => "1i",
            Self::LensFromSecond => "1ii",
            Self::LensFromFirst => "1iii",
            Self::SumFromSecond => "2i",
            Self::SumFromFirst => "2ii",
            Self::Seifert => "3",
        }
    }

    pub fn of(c: &FlowInvariant) -> Branch {
        let (l1, l2) = (c.l1.abs(), c.l2.abs());
        if l1 == 1 || l2 == 1 {
            if l1 == 0 || l2 == 0 {
                Self::ProjectiveSpace
            } else if l1 == 1 {
                Self::LensFromSecond
            } else {
                Self::LensFromFirst
            }
        } else if l1 == 0 {
            Self::SumFromSecond
        } else if l2 == 0 {
            Self::SumFromFirst
        } else {
            Self::Seifert
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "1i" => Self::ProjectiveSpace,
            "1ii" => Self::LensFromSecond,
            "1iii" => Self::LensFromFirst,
            "2i" => Self::SumFromSecond,
            "2ii" => Self::SumFromFirst,
            "3" => Self::Seifert,
            other => return Err(format!("unknown branch tag '{other}'")),
        })
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for Branch {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The ambient manifold of a flow with invariant `c`, applied to `c` as
/// written (no canonicalization), together with the branch taken.
pub fn identify(c: &FlowInvariant) -> Result<(Branch, ManifoldDescriptor), ManifoldError> {
    c.require_admissible()?;
    let branch = Branch::of(c);
    let m = match branch {
        Branch::ProjectiveSpace => LensSpace { p: 2, q: 1 }.into(),
        Branch::LensFromSecond => LensSpace::new(c.l2 - 2 * c.b2, c.b2)?.into(),
        Branch::LensFromFirst => LensSpace::new(c.l1 - 2 * c.b1, c.b1)?.into(),
        Branch::SumFromSecond => LensSumRP3::new(c.l2, c.b2)?.into(),
        Branch::SumFromFirst => LensSumRP3::new(c.l1, c.b1)?.into(),
        Branch::Seifert => {
            let s = SeifertFibration::new([(c.l1, c.b1), (c.l2, c.b2), (2, 1)])?;
            seifert_normalize(&s)?.into()
        }
    };
    Ok((branch, m))
}

pub fn ambient_manifold(c: &FlowInvariant) -> Result<ManifoldDescriptor, ManifoldError> {
    identify(c).map(|(_, m)| m)
}

/// Homeomorphism of descriptors. Seifert fibrations with three or more
/// special fibers are compared by fibration isomorphism; with fewer they are
/// first converted to lens spaces. Connected sums are never homeomorphic to
/// prime descriptors.
pub fn manifold_homeomorphic(a: &ManifoldDescriptor, b: &ManifoldDescriptor) -> Result<bool, ManifoldError> {
    use ManifoldDescriptor::*;
    Ok(match (a.reduce()?, b.reduce()?) {
        (Lens(x), Lens(y)) => lens_homeomorphic(&x, &y),
        (LensSumRP3(x), LensSumRP3(y)) => lens_homeomorphic(&x.summand(), &y.summand()),
        (Seifert(x), Seifert(y)) => seifert_isomorphic(&x, &y)?.is_some(),
        _ => false,
    })
}
