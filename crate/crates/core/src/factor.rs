//! Complete factorization over `F_h[X]`: squarefree decomposition,
//! distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting.
//!
//! The equal-degree step is randomized. Draws come from a ChaCha stream keyed
//! by the caller's seed, and the output is sorted canonically, so the result
//! does not depend on the seed.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::ModPoly;

/// One irreducible factor with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub poly: ModPoly,
    pub mult: usize,
}

/// Canonical order on monic polynomials: degree, then coefficients from the
/// constant term upwards.
pub fn canonical_cmp(a: &ModPoly, b: &ModPoly) -> Ordering {
    a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs()))
}

/// Multiset of monic irreducible factors, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorList {
    modulus: u64,
    factors: Vec<Factor>,
}

impl FactorList {
    /// Builds a list from arbitrary `(poly, mult)` pairs: polys are made
    /// monic, equal ones merged and the result sorted.
    pub fn from_factors(modulus: u64, factors: impl IntoIterator<Item = (ModPoly, usize)>) -> Result<Self> {
        let mut out: Vec<Factor> = Vec::new();
        for (poly, mult) in factors {
            if poly.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus, poly.modulus()));
            }
            if poly.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            let poly = poly.monic();
            match out.iter_mut().find(|f| f.poly == poly) {
                Some(f) => f.mult += mult,
                None => out.push(Factor { poly, mult }),
            }
        }
        out.sort_by(|a, b| canonical_cmp(&a.poly, &b.poly));
        Ok(Self { modulus, factors: out })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of `deg * mult`.
    pub fn total_degree(&self) -> usize {
        self.factors.iter().map(|f| f.poly.deg() * f.mult).sum()
    }

    /// Product of `poly^mult`.
    pub fn product(&self) -> ModPoly {
        let mut acc = ModPoly::one(self.modulus);
        for f in &self.factors {
            for _ in 0..f.mult {
                acc = &acc * &f.poly;
            }
        }
        acc
    }

    /// `(X+1)^1;(X^2+10X+6)^1`
    pub fn to_csv_field(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("({})^{}", f.poly.to_compact(), f.mult))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Inverse of [`FactorList::to_csv_field`]; the order of the input does
    /// not matter.
    pub fn parse_csv_field(field: &str, modulus: u64) -> Result<Self> {
        let err = |msg: String| Error::Parse { line: 0, msg };
        let mut factors = Vec::new();
        for part in field.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let inner = part.strip_prefix('(').ok_or_else(|| err(format!("expected `(` in `{part}`")))?;
            let close = inner.rfind(')').ok_or_else(|| err(format!("missing `)` in `{part}`")))?;
            let mult = match inner[close + 1..].trim() {
                "" => 1,
                tail => tail
                    .strip_prefix('^')
                    .and_then(|m| m.trim().parse().ok())
                    .ok_or_else(|| err(format!("bad multiplicity in `{part}`")))?,
            };
            factors.push((ModPoly::parse(&inner[..close], modulus)?, mult));
        }
        Self::from_factors(modulus, factors)
    }

    pub fn to_json(&self) -> Vec<FactorJson> {
        self.factors
            .iter()
            .map(|f| FactorJson { coeffs: f.poly.coeffs().to_vec(), mult: f.mult })
            .collect()
    }
}

/// Display form: a lone simple factor is printed bare, otherwise each factor
/// is parenthesized, e.g. `(X + 1)^2(X^4 + 2X^3 + X^2 + 2X + 1)`.
impl fmt::Display for FactorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factors.as_slice() {
            [] => f.write_str("1"),
            [one] if one.mult == 1 => write!(f, "{}", one.poly),
            many => {
                for fac in many {
                    write!(f, "({})", fac.poly)?;
                    if fac.mult > 1 {
                        write!(f, "^{}", fac.mult)?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// JSON shape of one factor: ascending coefficients plus multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub coeffs: Vec<u64>,
    pub mult: usize,
}

/// Factors a nonzero polynomial into monic irreducibles. The leading
/// coefficient is dropped.
pub fn factor_mod(a: &ModPoly, seed: u64) -> Result<FactorList> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = a.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (sqf, mult) in squarefree(&a.monic()) {
        for (block, d) in distinct_degree(&sqf) {
            let mut pieces = Vec::new();
            equal_degree(&block, d, &mut rng, &mut pieces);
            out.extend(pieces.into_iter().map(|f| (f, mult)));
        }
    }
    FactorList::from_factors(q, out)
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, i)` with `g`
/// squarefree, pairwise coprime and `a = prod g^i`.
pub fn squarefree(a: &ModPoly) -> Vec<(ModPoly, usize)> {
    let q = a.modulus();
    let mut out = Vec::new();
    if a.deg() == 0 {
        return out;
    }
    let d = a.derivative();
    let mut c = a.gcd(&d).expect("same field");
    let mut w = a.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("same field");
        let fac = w.div_rem(&y).0;
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if !c.is_one() {
        // c is a polynomial in X^q: take the q-th root coefficient-wise
        // (the Frobenius is the identity on F_q).
        let root = ModPoly::new(q, c.coeffs().iter().step_by(q as usize).copied().collect()).expect("valid modulus");
        for (g, j) in squarefree(&root) {
            out.push((g, j * q as usize));
        }
    }
    out
}

/// Distinct-degree split of a squarefree monic polynomial: pairs `(g, d)`
/// where `g` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree(a: &ModPoly) -> Vec<(ModPoly, usize)> {
    let q = a.modulus();
    let mut out = Vec::new();
    let mut rest = a.clone();
    let x = ModPoly::x(q);
    let mut frob = x.clone();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        frob = frob.pow_mod(q, &rest);
        let g = rest.gcd(&(&frob - &x)).expect("same field");
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            frob = frob.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let deg = rest.deg();
        out.push((rest, deg));
    }
    out
}

/// Cantor-Zassenhaus split of a squarefree monic product of degree-`d`
/// irreducibles (odd characteristic).
fn equal_degree(a: &ModPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<ModPoly>) {
    let n = a.deg();
    if n == d {
        out.push(a.clone());
        return;
    }
    let q = a.modulus();
    if q == 2 {
        return equal_degree_char2(a, d, rng, out);
    }
    loop {
        let r = random_below(a, rng);
        if r.deg() == 0 {
            continue;
        }
        // r^((q^d - 1)/2) = N(r)^((q-1)/2) with N(r) = r^(1 + q + ... + q^(d-1)).
        let mut norm = r.clone();
        let mut frob = r.clone();
        for _ in 1..d {
            frob = frob.pow_mod(q, a);
            norm = (&norm * &frob).rem(a);
        }
        let b = norm.pow_mod((q - 1) / 2, a);
        let g = a.gcd(&(&b - &ModPoly::one(q))).expect("same field");
        if g.deg() > 0 && g.deg() < n {
            let h = a.div_rem(&g).0;
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

fn equal_degree_char2(a: &ModPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<ModPoly>) {
    let n = a.deg();
    if n == d {
        out.push(a.clone());
        return;
    }
    loop {
        let r = random_below(a, rng);
        // trace map r + r^2 + ... + r^(2^(d-1))
        let mut t = r.clone();
        let mut acc = r.clone();
        for _ in 1..d {
            t = (&t * &t).rem(a);
            acc = &acc + &t;
        }
        let g = a.gcd(&acc).expect("same field");
        if g.deg() > 0 && g.deg() < n {
            let h = a.div_rem(&g).0;
            equal_degree_char2(&g, d, rng, out);
            equal_degree_char2(&h, d, rng, out);
            return;
        }
    }
}

fn random_below(a: &ModPoly, rng: &mut ChaCha8Rng) -> ModPoly {
    let q = a.modulus();
    ModPoly::new(q, (0..a.deg()).map(|_| rng.gen_range(0..q)).collect()).expect("valid modulus")
}

/// Rabin irreducibility test.
pub fn is_irreducible(a: &ModPoly) -> bool {
    let n = match a.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let q = a.modulus();
    let a = a.monic();
    let x = ModPoly::x(q);
    // X^(q^k) mod a for k = 1..n
    let mut frobs = Vec::with_capacity(n);
    let mut f = x.clone();
    for _ in 0..n {
        f = f.pow_mod(q, &a);
        frobs.push(f.clone());
    }
    if !(&frobs[n - 1] - &x).rem(&a).is_zero() {
        return false;
    }
    let mut m = n;
    let mut prime_divs = Vec::new();
    let mut r = 2;
    while r * r <= m {
        if m % r == 0 {
            prime_divs.push(r);
            while m % r == 0 {
                m /= r;
            }
        }
        r += 1;
    }
    if m > 1 {
        prime_divs.push(m);
    }
    prime_divs.into_iter().all(|r| a.gcd(&(&frobs[n / r - 1] - &x)).expect("same field").is_one())
}
