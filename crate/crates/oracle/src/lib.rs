//! Slow, literal reference implementations. Everything here is written
//! directly from the definitions with plain machine integers and exhaustive
//! search, independent of the `nms` library.

pub type Tuple = [i64; 4];

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `a ≡ b (mod m)`, with modulus 0 meaning equality.
pub fn congruent(a: i128, b: i128, m: i128) -> bool {
    if m == 0 { a == b } else { (a - b) % m == 0 }
}

pub fn admissible(t: &Tuple) -> bool {
    let [l1, b1, l2, b2] = *t;
    (l1 == 0 && b1.abs() == 2 || gcd(l1, b1) == 1) && gcd(l2, b2) == 1
}

/// Every admissible tuple with entries in `[-bound, bound]`.
pub fn grid(bound: i64) -> Vec<Tuple> {
    let mut out = Vec::new();
    for l1 in -bound..=bound {
        for b1 in -bound..=bound {
            for l2 in -bound..=bound {
                for b2 in -bound..=bound {
                    let t = [l1, b1, l2, b2];
                    if admissible(&t) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// The consistency definition verbatim; the sign `δ` that works, `+1`
/// preferred.
pub fn consistent(a: &Tuple, b: &Tuple) -> Option<i64> {
    let [l1, b1, l2, b2] = a.map(|x| x as i128);
    let [m1, e1, m2, e2] = b.map(|x| x as i128);
    if l1 != m1 || l2 != m2 {
        return None;
    }
    for d in [1i128, -1] {
        let linear = l1 * l2 * (2 * l2 * (b1 - d * e1) + 2 * l1 * (b2 - d * e2) + l1 * l2 * (1 - d));
        if congruent(b1, d * e1, l1) && congruent(b2, d * e2, l2) && linear == 0 {
            return Some(d as i64);
        }
    }
    None
}

/// `L(p,q) ≅ L(p',q')` by searching residues: some `r ≡ q` with
/// `r ≡ ±q'` or `r q' ≡ ±1`.
pub fn lens_homeomorphic(p: i64, q: i64, p2: i64, q2: i64) -> bool {
    if p.abs() != p2.abs() {
        return false;
    }
    let m = p.abs() as i128;
    if m == 0 {
        return q.abs() == 1 && q2.abs() == 1;
    }
    (0..m).any(|r| {
        congruent(r, q as i128, m)
            && [r - q2 as i128, r + q2 as i128, r * q2 as i128 - 1, r * q2 as i128 + 1].iter().any(|x| x % m == 0)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Manifold {
    Lens(i64, i64),
    Sum(i64, i64),
    Seifert(Vec<(i64, i64)>),
}

impl std::fmt::Display for Manifold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Manifold::Lens(p, q) => write!(f, "L({p},{q})"),
            Manifold::Sum(p, q) => write!(f, "L({p},{q})+RP3"),
            Manifold::Seifert(v) => {
                let parts: Vec<String> = v.iter().map(|(a, b)| format!("({a},{b})")).collect();
                write!(f, "SFS({})", parts.join(","))
            }
        }
    }
}

/// The manifold identification rules read literally, first matching case wins;
/// Seifert pairs are left unnormalized.
pub fn literal_manifold(t: &Tuple) -> (&'static str, Manifold) {
    let [l1, b1, l2, b2] = *t;
    if l1.abs() == 1 || l2.abs() == 1 {
        if l1 * l2 == 0 {
            ("1i", Manifold::Lens(2, 1))
        } else if l1.abs() == 1 {
            ("1ii", Manifold::Lens(l2 - 2 * b2, b2))
        } else {
            ("1iii", Manifold::Lens(l1 - 2 * b1, b1))
        }
    } else if l1 == 0 {
        ("2i", Manifold::Sum(l2, b2))
    } else if l2 == 0 {
        ("2ii", Manifold::Sum(l1, b1))
    } else {
        ("3", Manifold::Seifert(vec![(l1, b1), (l2, b2), (2, 1)]))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// `Σ β/α` as an unreduced fraction.
pub fn euler(pairs: &[(i64, i64)]) -> (i128, i128) {
    pairs.iter().fold((0i128, 1i128), |(n, d), &(a, b)| (n * a as i128 + b as i128 * d, d * a as i128))
}

/// Literal Seifert criterion over every permutation and sign.
pub fn seifert_isomorphic(x: &[(i64, i64)], y: &[(i64, i64)]) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let flip = |v: &[(i64, i64)]| -> Vec<(i64, i64)> {
        v.iter().map(|&(a, b)| if a < 0 { (-a, -b) } else { (a, b) }).collect()
    };
    let (x, y) = (flip(x), flip(y));
    let (nx, dx) = euler(&x);
    let (ny, dy) = euler(&y);
    for d in [1i128, -1] {
        if nx * dy != d * ny * dx {
            continue;
        }
        for s in permutations(x.len()) {
            let ok = x.iter().enumerate().all(|(i, &(a, b))| {
                let (a2, b2) = y[s[i]];
                a == a2 && congruent(b as i128, d * b2 as i128, a as i128)
            });
            if ok {
                return true;
            }
        }
    }
    false
}

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det(&minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Invariant factors `d_k = D_k / D_(k-1)`, `D_k` the gcd of all `k×k`
/// minors, for every `k` with `D_k != 0`.
pub fn invariant_factors(m: &[Vec<i128>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd128(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}
