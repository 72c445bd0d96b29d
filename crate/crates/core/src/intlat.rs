//! Integer, residue and torus-curve lattice utilities.
//!
//! Congruence modulo zero is equality throughout this crate, and
//! `least_residue(a, 0) == a`. Every other module relies on that convention
//! when a longitude coefficient vanishes.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gcd({0}, {1}) = {2}, expected coprime arguments")]
    NotCoprime(i64, i64, i64),
    #[error("{0} has no inverse modulo 0")]
    NoInverseModZero(i64),
    #[error("equipment coefficient must be nonzero")]
    ZeroEquipment,
    #[error("matrix determinant is {0}, expected +1 or -1")]
    NotUnimodular(i64),
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i64),
}

/// Extended Euclid. Returns `(g, x, y)` with `g = gcd(|a|, |b|) >= 0` and
/// `a*x + b*y = g`; `gcd(0, 0) = 0` with zero coefficients.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if a == 0 && b == 0 {
        return (0, 0, 0);
    }
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

/// `m | (a - b)`, with `m = 0` meaning `a == b`.
pub fn congruent(a: i64, b: i64, m: i64) -> bool {
    congruent_wide(a as i128, b as i128, m as i128)
}

pub(crate) fn congruent_wide(a: i128, b: i128, m: i128) -> bool {
    if m == 0 {
        a == b
    } else {
        (a - b).rem_euclid(m.abs()) == 0
    }
}

/// The residue of `a` in `[0, |m|)`; the identity when `m = 0`.
pub fn least_residue(a: i64, m: i64) -> i64 {
    if m == 0 {
        a
    } else {
        (a as i128).rem_euclid((m as i128).abs()) as i64
    }
}

/// Inverse of `a` modulo `|m|`, as a least residue. `|m| = 1` gives 0.
pub fn mod_inverse(a: i64, m: i64) -> Result<i64, LatticeError> {
    if m == 0 {
        return Err(LatticeError::NoInverseModZero(a));
    }
    let (g, x, _) = ext_gcd(a, m);
    if g != 1 {
        return Err(LatticeError::NotCoprime(a, m, g));
    }
    Ok(least_residue(x, m))
}

fn require_coprime(p: i64, q: i64) -> Result<(), LatticeError> {
    match gcd(p, q) {
        1 => Ok(()),
        g => Err(LatticeError::NotCoprime(p, q, g)),
    }
}

/// Smallest `q' >= 0` with `q = ±q' (mod p)`. For `p = 0` this is `|q|`.
pub fn bar_q(p: i64, q: i64) -> Result<i64, LatticeError> {
    require_coprime(p, q)?;
    if p == 0 {
        return Ok(q.abs());
    }
    let r = least_residue(q, p);
    Ok(r.min(p.abs() - r))
}

/// Smallest `q' >= 0` with `q*q' = ±1 (mod p)`.
///
/// `|p| = 1` gives 0. For `p = 0` a solution exists only when `|q| = 1`,
/// and then it is 1.
pub fn tilde_q(p: i64, q: i64) -> Result<i64, LatticeError> {
    require_coprime(p, q)?;
    match p.abs() {
        0 => Ok(1),
        1 => Ok(0),
        n => {
            let inv = mod_inverse(q, n)?;
            Ok(inv.min(n - inv))
        }
    }
}

/// Homotopy class `<l, m>` of a curve on a torus, in the (longitude,
/// meridian) basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass {
    pub l: i64,
    pub m: i64,
}

impl CurveClass {
    pub const fn new(l: i64, m: i64) -> Self {
        Self { l, m }
    }

    pub fn is_essential_capable(&self) -> bool {
        (self.l, self.m) != (0, 0)
    }

    pub fn is_primitive(&self) -> bool {
        gcd(self.l, self.m) == 1
    }

    /// The base dual `<b, c>` with `l*c - m*b = 1`.
    ///
    /// Representative: `b` reduced to its least residue modulo `l` when
    /// `l != 0`, otherwise `c` reduced modulo `m`.
    pub fn base_dual(&self) -> Result<CurveClass, LatticeError> {
        let (g, x, y) = ext_gcd(self.l, self.m);
        if g != 1 {
            return Err(LatticeError::NotCoprime(self.l, self.m, g));
        }
        // l*x + m*y = 1, so c = x, b = -y.
        let (b, c) = (-(y as i128), x as i128);
        let (l, m) = (self.l as i128, self.m as i128);
        let t = if l != 0 {
            (b.rem_euclid(l.abs()) - b) / l
        } else {
            (c.rem_euclid(m.abs()) - c) / m
        };
        Ok(CurveClass::new((b + t * l) as i64, (c + t * m) as i64))
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.l, self.m)
    }
}

/// Algebraic intersection number `l_γ m_σ - m_γ l_σ`.
pub fn intersection_index(gamma: CurveClass, sigma: CurveClass) -> i64 {
    (gamma.l as i128 * sigma.m as i128 - gamma.m as i128 * sigma.l as i128) as i64
}

fn check_sign(sign: i64) -> Result<i64, LatticeError> {
    match sign {
        1 | -1 => Ok(sign),
        s => Err(LatticeError::BadSign(s)),
    }
}

/// The `n`-th class `<sign*b + n*l, sign*c + n*m>` meeting `gamma` with
/// intersection index `sign`, where `<b, c>` is [`CurveClass::base_dual`].
pub fn dual_family(gamma: CurveClass, n: i64, sign: i64) -> Result<CurveClass, LatticeError> {
    let sign = check_sign(sign)?;
    let base = gamma.base_dual()?;
    Ok(CurveClass::new(
        sign * base.l + n * gamma.l,
        sign * base.m + n * gamma.m,
    ))
}

/// Equipment of the inverse surgery: for a knot with equipment `(β, α)`
/// returns `(-β, ξ)` where `α ξ = 1 (mod β)`, `ξ` a least residue.
pub fn inverse_equipment(beta: i64, alpha: i64) -> Result<(i64, i64), LatticeError> {
    if beta == 0 {
        return Err(LatticeError::ZeroEquipment);
    }
    let xi = mod_inverse(alpha, beta)?;
    Ok((-beta, xi))
}

/// A 2×2 integer matrix acting on row vectors `(l, m)` from the right, as
/// torus homeomorphisms act on homotopy classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GluingMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, LatticeError> {
        let m = Self { a, b, c, d };
        match m.det() {
            1 | -1 => Ok(m),
            det => Err(LatticeError::NotUnimodular(det)),
        }
    }

    /// `(1 k; 0 δ)`: the torus maps that extend to a self-equivalence of an
    /// attracting or repelling canonical neighbourhood.
    pub fn extension(k: i64, delta: i64) -> Result<Self, LatticeError> {
        check_sign(delta)?;
        Self::new(1, k, 0, delta)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// Whether the matrix has the `(1 k; 0 δ)` shape.
    pub fn is_extension(&self) -> bool {
        self.a == 1 && self.c == 0 && (self.d == 1 || self.d == -1)
    }

    pub fn apply(&self, x: CurveClass) -> CurveClass {
        CurveClass::new(x.l * self.a + x.m * self.c, x.l * self.b + x.m * self.d)
    }

    /// Matrix product `self · then`: apply `self` first, then `then`.
    pub fn compose(&self, then: &GluingMatrix) -> GluingMatrix {
        GluingMatrix {
            a: self.a * then.a + self.b * then.c,
            b: self.a * then.b + self.b * then.d,
            c: self.c * then.a + self.d * then.c,
            d: self.c * then.b + self.d * then.d,
        }
    }
}
