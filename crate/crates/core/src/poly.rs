//! Dense univariate polynomials over the integers and over a prime field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{inv_mod_prime, mul_mod, rem_euclid};
use crate::error::{Error, Result};

/// Integer polynomial, `coeffs[i]` is the coefficient of `X^i`. Trailing
/// zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `c * X^k`
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exact value at `x`; panics on `i128` overflow.
    pub fn eval(&self, x: i64) -> i128 {
        self.coeffs.iter().rev().fold(0i128, |acc, &c| {
            acc.checked_mul(x as i128)
                .and_then(|t| t.checked_add(c as i128))
                .expect("IntPoly::eval overflow")
        })
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Remainder modulo `X^d - 1`: exponents folded modulo `d`.
    pub fn rem_xd_minus_one(&self, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::OutOfRange { value: 0, lo: 1, hi: i64::MAX });
        }
        let mut out = vec![0i64; d.min(self.coeffs.len())];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i % d] += c;
        }
        Ok(Self::new(out))
    }

    /// Remainder modulo `X^n + 1`: `X^(i+n)` folds onto `-X^i`.
    pub fn rem_xn_plus_one(&self, n: usize) -> Self {
        assert!(n > 0);
        let mut out = vec![0i64; n.min(self.coeffs.len())];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if (i / n) % 2 == 0 {
                out[i % n] += c;
            } else {
                out[i % n] -= c;
            }
        }
        Self::new(out)
    }

    /// Reduces every coefficient into `[0, h)`.
    pub fn reduce_mod(&self, h: u64) -> Result<ModPoly> {
        ModPoly::from_signed(h, &self.coeffs)
    }

    /// Horner evaluation at `x`, reduced modulo `m`.
    pub fn eval_mod(&self, x: i64, m: u64) -> Result<u64> {
        if m < 2 {
            return Err(Error::BadModulus(m));
        }
        let x = rem_euclid(x, m);
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (mul_mod(acc, x, m) as u128 + rem_euclid(c, m) as u128) as u64 % m))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        self.scale(-1)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sep = match (first, c < 0) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sep)?;
            write_term(f, c.unsigned_abs(), i)?;
            first = false;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, c: u64, deg: usize) -> fmt::Result {
    match deg {
        0 => write!(f, "{c}"),
        _ => {
            if c != 1 {
                write!(f, "{c}")?;
            }
            if deg == 1 {
                f.write_str("X")
            } else {
                write!(f, "X^{deg}")
            }
        }
    }
}

/// Polynomial over `F_h`. Coefficients live in `[0, h)` and the leading one is
/// nonzero. The modulus must be below `2^32` so products fit in a `u64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    fn check_modulus(h: u64) -> Result<()> {
        if h < 2 || h >= 1 << 32 {
            Err(Error::BadModulus(h))
        } else {
            Ok(())
        }
    }

    fn from_raw(modulus: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { modulus, coeffs }
    }

    pub fn new(modulus: u64, coeffs: Vec<u64>) -> Result<Self> {
        Self::check_modulus(modulus)?;
        Ok(Self::from_raw(modulus, coeffs.into_iter().map(|c| c % modulus).collect()))
    }

    pub fn from_signed(modulus: u64, coeffs: &[i64]) -> Result<Self> {
        Self::check_modulus(modulus)?;
        Ok(Self::from_raw(modulus, coeffs.iter().map(|&c| rem_euclid(c, modulus)).collect()))
    }

    pub fn zero(modulus: u64) -> Self {
        Self { modulus, coeffs: Vec::new() }
    }

    pub fn one(modulus: u64) -> Self {
        Self::from_raw(modulus, vec![1 % modulus])
    }

    /// The polynomial `X`.
    pub fn x(modulus: u64) -> Self {
        Self::from_raw(modulus, vec![0, 1])
    }

    /// `X^n + c`
    pub fn binomial(modulus: u64, n: usize, c: u64) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        coeffs[0] = (coeffs[0] + c) % modulus;
        Self::from_raw(modulus, coeffs)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = inv_mod_prime(self.lead(), self.modulus);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> Self {
        let m = self.modulus;
        Self::from_raw(m, self.coeffs.iter().map(|&c| c * (k % m) % m).collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        let x = x % m;
        self.coeffs.iter().rev().fold(0, |acc, &c| (acc * x + c) % m)
    }

    pub fn derivative(&self) -> Self {
        let m = self.modulus;
        Self::from_raw(
            m,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (i as u64 % m) * c % m)
                .collect(),
        )
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.modulus, other.modulus))
        }
    }

    /// Quotient and remainder; panics if `divisor` is zero or moduli differ.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert_eq!(self.modulus, divisor.modulus, "modulus mismatch");
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let m = self.modulus;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(m), self.clone());
        }
        let inv = inv_mod_prime(divisor.lead(), m);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] * inv % m;
            quot[k] = c;
            if c == 0 {
                continue;
            }
            let neg = m - c;
            for (j, &b) in divisor.coeffs[..dd].iter().enumerate() {
                if b != 0 {
                    rem[k + j] = (rem[k + j] + neg * b) % m;
                }
            }
            rem[k + dd] = 0;
        }
        rem.truncate(dd);
        (Self::from_raw(m, quot), Self::from_raw(m, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, mut exp: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.modulus).rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = (&acc * &base).rem(modulus);
            }
            exp >>= 1;
            if exp > 0 {
                base = (&base * &base).rem(modulus);
            }
        }
        acc
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Rendering without spaces, e.g. `X^2+10X+6`.
    pub fn to_compact(&self) -> String {
        self.to_string().replace(' ', "")
    }

    /// Parses `X^3 + 2X^2 + 1` style text; whitespace and `*` are ignored and
    /// coefficients are reduced modulo `modulus`.
    pub fn parse(text: &str, modulus: u64) -> Result<Self> {
        let err = |msg: String| Error::Parse { line: 0, msg };
        let s: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if s.is_empty() {
            return Err(err("empty polynomial".into()));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let (c, deg) = parse_term(term).ok_or_else(|| err(format!("bad term `{term}` in `{text}`")))?;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0);
            }
            coeffs[deg] += sign * c;
        }
        ModPoly::from_signed(modulus, &coeffs)
    }
}

fn parse_term(term: &str) -> Option<(i64, usize)> {
    match term.find(['X', 'x']) {
        None => term.parse().ok().map(|c| (c, 0)),
        Some(pos) => {
            let c = if pos == 0 { 1 } else { term[..pos].parse().ok()? };
            let tail = &term[pos + 1..];
            let deg = if tail.is_empty() { 1 } else { tail.strip_prefix('^')?.parse().ok()? };
            Some((c, deg))
        }
    }
}

impl Add for &ModPoly {
    type Output = ModPoly;

    fn add(self, rhs: &ModPoly) -> ModPoly {
        assert_eq!(self.modulus, rhs.modulus, "modulus mismatch");
        let m = self.modulus;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ModPoly::from_raw(m, (0..n).map(|i| (self.coeff(i) + rhs.coeff(i)) % m).collect())
    }
}

impl Sub for &ModPoly {
    type Output = ModPoly;

    fn sub(self, rhs: &ModPoly) -> ModPoly {
        assert_eq!(self.modulus, rhs.modulus, "modulus mismatch");
        let m = self.modulus;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ModPoly::from_raw(m, (0..n).map(|i| (self.coeff(i) + m - rhs.coeff(i)) % m).collect())
    }
}

impl Mul for &ModPoly {
    type Output = ModPoly;

    fn mul(self, rhs: &ModPoly) -> ModPoly {
        assert_eq!(self.modulus, rhs.modulus, "modulus mismatch");
        let m = self.modulus;
        if self.is_zero() || rhs.is_zero() {
            return ModPoly::zero(m);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % m;
            }
        }
        ModPoly::from_raw(m, out)
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            write_term(f, c, i)?;
            first = false;
        }
        Ok(())
    }
}

/// Monic gcd of two polynomials over the same field.
pub fn poly_gcd(a: &ModPoly, b: &ModPoly) -> Result<ModPoly> {
    a.gcd(b)
}
