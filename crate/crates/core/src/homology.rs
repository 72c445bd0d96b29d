//! First homology: Smith normal form over arbitrary-precision integers,
//! the surgery presentation of a flow's realization and presentations of
//! the manifold descriptors.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::invariant::{FlowInvariant, InvariantError};
use crate::manifold::{identify, Branch, ManifoldDescriptor, ManifoldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("matrix {rows}x{cols} needs {} entries, got {len}", rows * cols)]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("saddle sign must be +1 or -1, got {0}")]
    BadSaddleSign(i64),
    #[error("{0} has l1 = 0, b1 = ±2: its construction is not a fiber surgery")]
    NoSurgeryModel(FlowInvariant),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, HomologyError> {
        if entries.len() != rows * cols {
            return Err(HomologyError::Shape { rows, cols, len: entries.len() });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Result<Self, HomologyError> {
        let entries: Vec<BigInt> = rows.iter().flat_map(|r| r.as_ref().iter().map(|&x| BigInt::from(x))).collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Some(out)
    }

    /// Fraction-free (Bareiss) determinant; `None` for non-square input.
    pub fn det(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                    return Some(BigInt::zero());
                };
                m.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        Some(sign * &m[(n - 1, n - 1)])
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `(D, U, V)` with `U·A·V = D`, `U` and `V` unimodular and `D` diagonal
/// with nonnegative entries `d1 | d2 | ...`.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // Pivot: smallest nonzero |entry| in the trailing block.
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[(i, j)].is_zero())
                .min_by(|&x, &y| d[x].abs().cmp(&d[y].abs()));
            let Some((pi, pj)) = pivot else {
                return (d, u, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => {
                    d.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (d, u, v)
}

/// Finitely generated abelian group `Z^rank ⊕ Z/d1 ⊕ ... ⊕ Z/dt`, with
/// `d1 | d2 | ... | dt` and every `di >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigUint>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self { rank: 0, torsion: Vec::new() }
    }

    /// Direct sum of cyclic groups `Z/n` (`n = 0` meaning `Z`).
    pub fn cyclic_sum(orders: &[i64]) -> Self {
        let k = orders.len();
        let mut m = IntMatrix::zeros(k, k);
        for (i, &o) in orders.iter().enumerate() {
            m[(i, i)] = BigInt::from(o);
        }
        group_from_presentation(&m)
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// `|G|` for finite groups.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn is_chain(&self) -> bool {
        self.torsion.iter().all(|d| *d >= BigUint::from(2u8))
            && self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Divisor {
    Small(u64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    rank: usize,
    torsion: Vec<Divisor>,
}

impl Serialize for AbelianGroup {
    /// Divisors that fit in 64 bits are JSON numbers, larger ones decimal
    /// strings.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let torsion = self
            .torsion
            .iter()
            .map(|d| d.to_u64().map(Divisor::Small).unwrap_or_else(|| Divisor::Big(d.to_string())))
            .collect();
        GroupRepr { rank: self.rank, torsion }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = GroupRepr::deserialize(deserializer)?;
        let torsion = r
            .torsion
            .into_iter()
            .map(|d| match d {
                Divisor::Small(x) => Ok(BigUint::from(x)),
                Divisor::Big(s) => s.parse().map_err(serde::de::Error::custom),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let g = AbelianGroup { rank: r.rank, torsion };
        if !g.is_chain() {
            return Err(serde::de::Error::custom("torsion is not a divisor chain of entries >= 2"));
        }
        Ok(g)
    }
}

/// Cokernel of `A` acting on row vectors: one relation per row, one
/// generator per column.
pub fn group_from_presentation(a: &IntMatrix) -> AbelianGroup {
    let (d, _, _) = smith_normal_form(a);
    let diag = d.diagonal();
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    let torsion = diag
        .iter()
        .filter(|x| **x > BigInt::one())
        .map(|x| x.to_biguint().expect("SNF diagonal is nonnegative"))
        .collect();
    AbelianGroup { rank: a.cols - nonzero, torsion }
}

/// Relations over generators `(h, μA, μS, μR)`: the pants relation
/// `μA + μS + μR = 0` and one Dehn filling per link component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryPresentation {
    pub invariant: FlowInvariant,
    pub saddle_sign: i64,
    pub relations: IntMatrix,
}

impl SurgeryPresentation {
    pub fn group(&self) -> AbelianGroup {
        group_from_presentation(&self.relations)
    }
}

pub fn surgery_presentation(c: &FlowInvariant, saddle_sign: i64) -> Result<SurgeryPresentation, HomologyError> {
    if saddle_sign.abs() != 1 {
        return Err(HomologyError::BadSaddleSign(saddle_sign));
    }
    c.require_admissible()?;
    if c.is_disk_case() {
        return Err(HomologyError::NoSurgeryModel(*c));
    }
    let relations = IntMatrix::from_rows(
        4,
        &[[0, 1, 1, 1], [-c.b2, c.l2, 0, 0], [-saddle_sign, 0, 2, 0], [-c.b1, 0, 0, c.l1]],
    )?;
    Ok(SurgeryPresentation { invariant: *c, saddle_sign, relations })
}

/// `H1` of a lens space, a sum with `RP3`, or a Seifert fibration over the
/// sphere.
pub fn h1_of_descriptor(m: &ManifoldDescriptor) -> Result<AbelianGroup, HomologyError> {
    m.validate()?;
    Ok(match m {
        ManifoldDescriptor::Lens(l) => AbelianGroup::cyclic_sum(&[l.p]),
        ManifoldDescriptor::LensSumRP3(l) => AbelianGroup::cyclic_sum(&[l.p, 2]),
        ManifoldDescriptor::Seifert(s) => {
            let r = s.pairs.len();
            let mut a = IntMatrix::zeros(r + 1, r + 1);
            for (i, p) in s.pairs.iter().enumerate() {
                a[(i, i)] = BigInt::from(p.alpha);
                a[(i, r)] = BigInt::from(p.beta);
            }
            for j in 0..r {
                a[(r, j)] = BigInt::one();
            }
            group_from_presentation(&a)
        }
    })
}

/// `|2 l2 b1 + 2 l1 b2 + σ l1 l2|`.
pub fn closed_form_order(c: &FlowInvariant, saddle_sign: i64) -> BigUint {
    let v = 2 * c.l2 as i128 * c.b1 as i128
        + 2 * c.l1 as i128 * c.b2 as i128
        + saddle_sign as i128 * c.l1 as i128 * c.l2 as i128;
    BigInt::from(v).magnitude().clone()
}

/// Signs the surgery model is expected to match, by branch.
pub fn calibrated_signs(branch: Branch) -> &'static [i64] {
    match branch {
        Branch::Seifert => &[1],
        Branch::LensFromSecond | Branch::LensFromFirst => &[-1],
        Branch::ProjectiveSpace | Branch::SumFromSecond | Branch::SumFromFirst => &[1, -1],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedGroup {
    pub saddle_sign: i64,
    pub h1: AbelianGroup,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormOrders {
    pub plus: u128,
    pub minus: u128,
}

/// Descriptor `H1` against the surgery model at both saddle signs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1MatchReport {
    pub invariant: FlowInvariant,
    pub branch: Branch,
    pub manifold: ManifoldDescriptor,
    pub descriptor_h1: AbelianGroup,
    /// Empty when the tuple has no surgery model.
    pub surgery: Vec<SignedGroup>,
    pub matching_signs: Vec<i64>,
    pub closed_form_orders: ClosedFormOrders,
}

impl H1MatchReport {
    /// Every sign the branch calibration predicts matches; a coincidental
    /// match at the other sign is allowed.
    pub fn is_calibrated(&self) -> bool {
        !self.surgery.is_empty() && calibrated_signs(self.branch).iter().all(|s| self.matching_signs.contains(s))
    }
}

pub fn h1_match_report(c: &FlowInvariant) -> Result<H1MatchReport, HomologyError> {
    let (branch, manifold) = identify(c)?;
    let descriptor_h1 = h1_of_descriptor(&manifold)?;
    let mut surgery = Vec::new();
    if !c.is_disk_case() {
        for sign in [1, -1] {
            let h1 = surgery_presentation(c, sign)?.group();
            let matches = h1 == descriptor_h1;
            surgery.push(SignedGroup { saddle_sign: sign, h1, matches });
        }
    }
    let matching_signs = surgery.iter().filter(|s| s.matches).map(|s| s.saddle_sign).collect();
    let order = |s| closed_form_order(c, s).to_u128().expect("fits");
    Ok(H1MatchReport {
        invariant: *c,
        branch,
        manifold,
        descriptor_h1,
        surgery,
        matching_signs,
        closed_form_orders: ClosedFormOrders { plus: order(1), minus: order(-1) },
    })
}
