//! The flow invariant `(l1, b1, l2, b2)`, its admissibility, the
//! consistency relation and canonical class representatives.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{congruent_wide, gcd, least_residue};
use crate::text::{ParseError, Scanner};

/// Integer invariant of a flow: the longitude coefficients `l1`, `l2` and
/// dual-curve coefficients `b1`, `b2` of the repelling and attracting orbits.
///
/// Orders lexicographically on `(l1, b1, l2, b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 4]", into = "[i64; 4]")]
pub struct FlowInvariant {
    pub l1: i64,
    pub b1: i64,
    pub l2: i64,
    pub b2: i64,
}

impl From<[i64; 4]> for FlowInvariant {
    fn from([l1, b1, l2, b2]: [i64; 4]) -> Self {
        Self { l1, b1, l2, b2 }
    }
}

impl From<FlowInvariant> for [i64; 4] {
    fn from(c: FlowInvariant) -> Self {
        [c.l1, c.b1, c.l2, c.b2]
    }
}

impl fmt::Display for FlowInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.l1, self.b1, self.l2, self.b2)
    }
}

impl FromStr for FlowInvariant {
    type Err = ParseError;

    /// `l1,b1,l2,b2`, whitespace allowed around every token.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut sc = Scanner::new(s);
        let mut v = [0i64; 4];
        for (i, slot) in v.iter_mut().enumerate() {
            if i > 0 {
                sc.expect(',')?;
            }
            *slot = sc.integer()?;
        }
        sc.finish()?;
        Ok(v.into())
    }
}

/// Why a tuple fails admissibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityFailure {
    FirstPair { gcd: i64 },
    SecondPair { gcd: i64 },
}

impl fmt::Display for AdmissibilityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FirstPair { gcd } => write!(f, "gcd(l1,b1)={gcd}"),
            Self::SecondPair { gcd } => write!(f, "gcd(l2,b2)={gcd}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("inadmissible invariant ({0}): {1}")]
    Inadmissible(FlowInvariant, AdmissibilityFailure),
    #[error("orbit member of ({0}) overflows 64-bit integers")]
    Overflow(FlowInvariant),
}

impl FlowInvariant {
    pub const fn new(l1: i64, b1: i64, l2: i64, b2: i64) -> Self {
        Self { l1, b1, l2, b2 }
    }

    pub fn admissibility(&self) -> Result<(), AdmissibilityFailure> {
        let first_special = self.l1 == 0 && (self.b1 == 2 || self.b1 == -2);
        if !first_special {
            let g = gcd(self.l1, self.b1);
            if g != 1 {
                return Err(AdmissibilityFailure::FirstPair { gcd: g });
            }
        }
        match gcd(self.l2, self.b2) {
            1 => Ok(()),
            g => Err(AdmissibilityFailure::SecondPair { gcd: g }),
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility().is_ok()
    }

    pub fn require_admissible(&self) -> Result<(), InvariantError> {
        self.admissibility().map_err(|e| InvariantError::Inadmissible(*self, e))
    }

    /// `(l1, b1) = (0, ±2)`: the repelling node bounds a disk.
    pub fn is_disk_case(&self) -> bool {
        self.l1 == 0 && self.b1.abs() == 2
    }
}

pub fn is_admissible(c: &FlowInvariant) -> bool {
    c.is_admissible()
}

/// Records how `C'` arises from `C`: the sign `delta` and the integer
/// `shift` selecting the orbit member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConsistencyWitness {
    pub delta: i64,
    pub shift: i64,
}

impl ConsistencyWitness {
    /// Rebuild the consistent partner from `c`.
    ///
    /// With `l1*l2 != 0`: `δ=+1` gives `(b1 + k l1, b2 - k l2)` and `δ=-1`
    /// gives `(-b1 + s l1, -b2 - (s+1) l2)`. Otherwise the single nonzero
    /// longitude (if any) carries the shift on top of `δ b_i`.
    pub fn replay(&self, c: &FlowInvariant) -> Result<FlowInvariant, InvariantError> {
        orbit_member(c, self.delta, self.shift)
    }
}

fn narrow(c: &FlowInvariant, v: i128) -> Result<i64, InvariantError> {
    i64::try_from(v).map_err(|_| InvariantError::Overflow(*c))
}

fn orbit_member(c: &FlowInvariant, delta: i64, shift: i64) -> Result<FlowInvariant, InvariantError> {
    let (l1, b1, l2, b2) = (c.l1 as i128, c.b1 as i128, c.l2 as i128, c.b2 as i128);
    let (d, t) = (delta as i128, shift as i128);
    let (nb1, nb2) = if l1 * l2 != 0 {
        if delta == 1 {
            (b1 + t * l1, b2 - t * l2)
        } else {
            (-b1 + t * l1, -b2 - (t + 1) * l2)
        }
    } else {
        (d * b1 + t * l1, d * b2 + t * l2)
    };
    Ok(FlowInvariant::new(c.l1, narrow(c, nb1)?, c.l2, narrow(c, nb2)?))
}

fn satisfies(c: &FlowInvariant, other: &FlowInvariant, delta: i128) -> bool {
    let (l1, b1, l2, b2) = (c.l1 as i128, c.b1 as i128, c.l2 as i128, c.b2 as i128);
    let (e1, e2) = (other.b1 as i128, other.b2 as i128);
    congruent_wide(b1, delta * e1, l1)
        && congruent_wide(b2, delta * e2, l2)
        && {
            let inner = 2 * l2 * (b1 - delta * e1) + 2 * l1 * (b2 - delta * e2) + l1 * l2 * (1 - delta);
            l1 * l2 == 0 || inner == 0
        }
}

fn recover_shift(c: &FlowInvariant, other: &FlowInvariant, delta: i64) -> i64 {
    let d = delta as i128;
    let (l1, b1, l2, b2) = (c.l1 as i128, c.b1 as i128, c.l2 as i128, c.b2 as i128);
    let (e1, e2) = (other.b1 as i128, other.b2 as i128);
    let k = if l1 * l2 != 0 {
        if delta == 1 { (e1 - b1) / l1 } else { (e1 + b1) / l1 }
    } else if l1 != 0 {
        (e1 - d * b1) / l1
    } else if l2 != 0 {
        (e2 - d * b2) / l2
    } else {
        0
    };
    k as i64
}

/// Decide `C ~ C'`. Returns the witness (preferring `δ = +1`) when
/// consistent, `None` otherwise.
pub fn consistent(
    c: &FlowInvariant,
    other: &FlowInvariant,
) -> Result<Option<ConsistencyWitness>, InvariantError> {
    c.require_admissible()?;
    other.require_admissible()?;
    Ok(consistent_unchecked(c, other))
}

pub(crate) fn consistent_unchecked(c: &FlowInvariant, other: &FlowInvariant) -> Option<ConsistencyWitness> {
    if c.l1 != other.l1 || c.l2 != other.l2 {
        return None;
    }
    [1i64, -1].into_iter().find_map(|delta| {
        satisfies(c, other, delta as i128).then(|| ConsistencyWitness {
            delta,
            shift: recover_shift(c, other, delta),
        })
    })
}

/// Members of the consistency class of `c` with orbit parameter in
/// `shifts`, for both signs. Sorted, without repeats.
pub fn orbit_members(
    c: &FlowInvariant,
    shifts: RangeInclusive<i64>,
) -> Result<Vec<FlowInvariant>, InvariantError> {
    c.require_admissible()?;
    let mut out = BTreeSet::new();
    for delta in [1, -1] {
        if c.l1 == 0 && c.l2 == 0 {
            out.insert(orbit_member(c, delta, 0)?);
            continue;
        }
        for t in shifts.clone() {
            out.insert(orbit_member(c, delta, t)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Lexicographically least member among the per-sign reduced
/// representatives. Constant on consistency classes.
pub fn canonical_form(c: &FlowInvariant) -> Result<FlowInvariant, InvariantError> {
    c.require_admissible()?;
    canonical_unchecked(c)
}

pub(crate) fn canonical_unchecked(c: &FlowInvariant) -> Result<FlowInvariant, InvariantError> {
    let candidate = |delta: i64| -> Result<FlowInvariant, InvariantError> {
        if c.l1 != 0 && c.l2 != 0 {
            let target = least_residue(delta * c.b1, c.l1) as i128;
            let b1 = c.b1 as i128;
            let shift = if delta == 1 { (target - b1) / c.l1 as i128 } else { (target + b1) / c.l1 as i128 };
            orbit_member(c, delta, narrow(c, shift)?)
        } else {
            Ok(FlowInvariant::new(
                c.l1,
                least_residue(delta * c.b1, c.l1),
                c.l2,
                least_residue(delta * c.b2, c.l2),
            ))
        }
    };
    Ok(candidate(1)?.min(candidate(-1)?))
}
