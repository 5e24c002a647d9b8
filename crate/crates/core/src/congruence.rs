//! Congruences satisfied by the index table `v_n`, each paired with an
//! independent oracle where one exists.
//!
//! Check names follow the statement they test, not a numbering:
//! `alternating-sum`, `alternating-half-sum`, `parity-sum`, `index-set`,
//! `forms-oracle`, `biquad-sum`, `psquare`, `principality`.

use serde::Serialize;

use crate::arith::{gcd, mul_mod, order_mod, pow_mod, rem_euclid, CycloParams};
use crate::error::{Error, Result};
use crate::stickelberger::{build_pair, index_set, inertial_poly};

/// Whether a failing check is a proved statement, an observation that is
/// expected to hold over the tested range, or a value recorded for reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Theorem,
    Observation,
    Record,
}

/// One evaluated statement for one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub theorem: &'static str,
    pub kind: CheckKind,
    pub p: u64,
    pub holds: bool,
    pub detail: String,
}

impl Check {
    pub fn new(theorem: &'static str, kind: CheckKind, p: u64, holds: bool, detail: impl Into<String>) -> Self {
        Self { theorem, kind, p, holds, detail: detail.into() }
    }

    /// Records never fail.
    pub fn is_failure(&self) -> bool {
        !self.holds && self.kind != CheckKind::Record
    }

    pub fn to_text_line(&self) -> String {
        let status = match (self.holds, self.kind) {
            (true, _) => "PASS",
            (false, CheckKind::Record) => "NOTE",
            (false, _) => "FAIL",
        };
        format!("{status} [{}] p={} {}", self.theorem, self.p, self.detail)
    }
}

/// Number of reduced primitive forms `(a, b, c)` with `b^2 - 4ac = D`.
pub fn reduced_forms_count(d: i64) -> Result<u64> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::BadDiscriminant(d));
    }
    let n = -d;
    let mut count = 0;
    let mut a = 1i64;
    // reduced forms have 3a^2 <= |D|
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if gcd(gcd(a as u64, b.unsigned_abs()), c as u64) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    Ok(count)
}

/// `sum_{i in I_d} (-1)^i` for one `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSum {
    pub d: u64,
    pub size: usize,
    pub signed_sum: i64,
}

/// Alternating sums for `p = 3 mod 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadReport {
    pub p: u64,
    pub v: u64,
    /// `A = sum (-1)^i v_{-i}`
    pub alt_sum: i64,
    /// `-A / p`
    pub class_number: i64,
    /// `B = 2 sum_{i <= (p-3)/2} (-1)^i v_{-i} - p`
    pub half_sum: i64,
    /// `sum_{v_{-i} even} (-1)^i`
    pub parity_sum: i64,
    pub oracle_count: u64,
    pub index_sums: Vec<IndexSum>,
}

fn alternating(values: impl Iterator<Item = u64>) -> i64 {
    values.enumerate().map(|(i, x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

/// `sum (-1)^i v_{-i}` over `i in [0, p-2]`; zero for `p = 1 mod 4`.
pub fn alternating_sum(params: &CycloParams) -> i64 {
    alternating((0..params.vpow().len()).map(|i| params.v_neg(i)))
}

pub fn quad_report(params: &CycloParams) -> Result<QuadReport> {
    let p = params.p();
    if p % 4 != 3 || p == 3 {
        return Err(Error::WrongResidueClass { p, class: "3 mod 4, p > 3" });
    }
    let alt_sum = alternating_sum(params);
    if alt_sum % p as i64 != 0 {
        return Err(Error::InexactDivision { what: "alternating sum", value: alt_sum, divisor: p as i64 });
    }
    let half_sum = 2 * alternating((0..=params.half() - 1).map(|i| params.v_neg(i))) - p as i64;
    let parity_sum = (0..params.vpow().len())
        .filter(|&i| params.v_neg(i) % 2 == 0)
        .map(|i| if i % 2 == 0 { 1 } else { -1 })
        .sum();
    let index_sums = (1..=p - 2)
        .map(|d| {
            let set = index_set(params, d)?;
            Ok(IndexSum { d, size: set.indices.len(), signed_sum: set.signed_sum() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadReport {
        p,
        v: params.v(),
        alt_sum,
        class_number: -alt_sum / p as i64,
        half_sum,
        parity_sum,
        oracle_count: reduced_forms_count(-(p as i64))?,
        index_sums,
    })
}

impl QuadReport {
    pub fn checks(&self) -> Vec<Check> {
        use CheckKind::*;
        let p = self.p;
        let h = self.oracle_count as i64;
        let mut out = vec![
            Check::new(
                "forms-oracle",
                Theorem,
                p,
                self.class_number >= 1 && self.class_number == h,
                format!("A={} -A/p={} reduced_forms(-p)={}", self.alt_sum, self.class_number, h),
            ),
            Check::new(
                "alternating-sum",
                Theorem,
                p,
                self.alt_sum % h == 0,
                format!("A={} mod {h} = {}", self.alt_sum, self.alt_sum.rem_euclid(h)),
            ),
            Check::new(
                "alternating-half-sum",
                Theorem,
                p,
                self.half_sum % h == 0,
                format!("B={} mod {h} = {}", self.half_sum, self.half_sum.rem_euclid(h)),
            ),
            Check::new(
                "parity-sum",
                Theorem,
                p,
                self.parity_sum != 0,
                format!("parity_sum={} nonzero", self.parity_sum),
            ),
            Check::new(
                "parity-sum",
                Observation,
                p,
                self.parity_sum % h == 0,
                format!("parity_sum={} mod {h} = {}", self.parity_sum, self.parity_sum.rem_euclid(h)),
            ),
        ];
        let bad: Vec<&IndexSum> = self
            .index_sums
            .iter()
            .filter(|s| s.signed_sum == 0 || s.signed_sum % h != 0 || s.size % 2 == 0)
            .collect();
        let detail = match bad.first() {
            None => format!("{} sets I_d: |I_d| odd, signed sums nonzero and = 0 mod {h}", self.index_sums.len()),
            Some(s) => format!("{} bad sets, first d={} |I_d|={} sum={}", bad.len(), s.d, s.size, s.signed_sum),
        };
        out.push(Check::new("index-set", Theorem, p, bad.is_empty(), detail));
        out
    }
}

/// The sum of squares `S` for `p = 5 mod 8`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BiquadReport {
    pub p: u64,
    pub v: u64,
    /// `sum_{i <= (p-3)/2} (-1)^i v_{2i}`
    pub s_even: i64,
    /// `sum_{i <= (p-3)/2} (-1)^i v_{2i+1}`
    pub s_odd: i64,
    #[serde(rename = "S")]
    pub s: i64,
    #[serde(rename = "S_div_p2")]
    pub s_div_p2: Option<i64>,
}

pub fn biquad_report(params: &CycloParams) -> Result<BiquadReport> {
    let p = params.p();
    if p % 8 != 5 {
        return Err(Error::WrongResidueClass { p, class: "5 mod 8" });
    }
    let n = params.half() as i64;
    let s_even = alternating((0..n).map(|i| params.v_at(2 * i)));
    let s_odd = alternating((0..n).map(|i| params.v_at(2 * i + 1)));
    let s = s_even * s_even + s_odd * s_odd;
    let p2 = (p * p) as i64;
    Ok(BiquadReport { p, v: params.v(), s_even, s_odd, s, s_div_p2: (s % p2 == 0).then(|| s / p2) })
}

impl BiquadReport {
    /// An observation for `p >= 13`, a record below.
    pub fn check(&self) -> Check {
        let kind = if self.p >= 13 { CheckKind::Observation } else { CheckKind::Record };
        let detail = match self.s_div_p2 {
            Some(k) => format!("S={} = {k}*p^2", self.s),
            None => format!("S={} mod p^2 = {}", self.s, self.s.rem_euclid((self.p * self.p) as i64)),
        };
        Check::new("biquad-sum", kind, self.p, self.s > 0 && self.s_div_p2.is_some(), detail)
    }
}

/// One `mu = v_{2m+1}` tested against both congruences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PSquareCandidate {
    pub m: u64,
    pub mu: u64,
    pub passes_mod_p: bool,
    /// Only evaluated when `passes_mod_p`.
    pub passes_mod_p2: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PSquareReport {
    pub p: u64,
    pub v: u64,
    pub candidates: Vec<PSquareCandidate>,
}

impl PSquareReport {
    pub fn roots_mod_p(&self) -> impl Iterator<Item = &PSquareCandidate> {
        self.candidates.iter().filter(|c| c.passes_mod_p)
    }

    pub fn roots_mod_p2(&self) -> impl Iterator<Item = &PSquareCandidate> {
        self.candidates.iter().filter(|c| c.passes_mod_p2 == Some(true))
    }

    /// At least one root mod `p` and none mod `p^2`.
    pub fn check(&self) -> Check {
        let r1: Vec<u64> = self.roots_mod_p().map(|c| c.mu).collect();
        let r2: Vec<u64> = self.roots_mod_p2().map(|c| c.mu).collect();
        Check::new(
            "psquare",
            CheckKind::Theorem,
            self.p,
            !r1.is_empty() && r2.is_empty(),
            format!("mu mod p: {r1:?}, mu mod p^2: {r2:?}"),
        )
    }
}

/// Tests each `mu = v_{2m+1}`, `1 <= m <= (p-3)/2`, for `Q(mu) = 0 mod p` and
/// then for the second congruence mod `p^2`.
pub fn psquare_report(params: &CycloParams) -> Result<PSquareReport> {
    let pair = build_pair(params)?;
    let p = params.p();
    let p2 = p * p;
    let delta: Vec<u64> = pair.delta().iter().map(|&d| rem_euclid(d, p2)).collect();
    let last = delta.len();
    let mut candidates = Vec::new();
    for m in 1..=(p - 3) / 2 {
        let mu = params.v_at(2 * m as i64 + 1);
        let q_at = delta.iter().rev().fold(0, |acc, &d| (mul_mod(acc, mu, p) + d) % p);
        let passes_mod_p = q_at == 0;
        let passes_mod_p2 = passes_mod_p.then(|| {
            // sum_{i=0}^{p-2} mu^{p-2+i} delta_i
            let first = mul_mod(pow_mod(mu, p - 2, p2), delta.iter().rev().fold(0, |acc, &d| (mul_mod(acc, mu, p2) + d) % p2), p2);
            // sum_{i=1}^{p-2} i mu^{i-1} delta_i = Q'(mu)
            let deriv = (1..last).rev().fold(0, |acc, i| (mul_mod(acc, mu, p2) + mul_mod(i as u64, delta[i], p2)) % p2);
            let factor = (pow_mod(mu, p - 1, p2) + p2 - 1) % p2;
            (first + mul_mod(factor, deriv, p2)) % p2 == 0
        });
        candidates.push(PSquareCandidate { m, mu, passes_mod_p, passes_mod_p2 });
    }
    Ok(PSquareReport { p, v: params.v(), candidates })
}

/// Outcome of the principality criterion for a prime `q` of inertial degree
/// `f > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipalityReport {
    pub p: u64,
    pub q: u64,
    pub f: u64,
    pub m: u64,
    /// Coefficients of `P_1`.
    pub coeffs: Vec<i64>,
    /// `(l, sum_i c_i v^{l f i} mod p)` for `l in [1, m-1]`.
    pub sums: Vec<(u64, u64)>,
    /// `sum_i sum_j v_{-(i+jm)}`, always `p(p-1)/2`.
    pub full_sum: u64,
    pub principal: bool,
}

/// Evaluates `P_1(v^{lf}) mod p` for `l in [1, m-1]`; `q` is `p`-principal
/// when none vanish. Any prime `q != p` is accepted, `q = 2` included. Fails
/// when `q` has inertial degree 1.
pub fn principality_test(params: &CycloParams, q: u64) -> Result<PrincipalityReport> {
    let p = params.p();
    if !crate::arith::is_prime(q) {
        return Err(Error::NotOddPrime(q));
    }
    let f = order_mod(q as i64, p)?;
    if f == 1 {
        return Err(Error::InertialDegreeOne { q, p });
    }
    let m = (p - 1) / f;
    let poly = inertial_poly(params, f)?;
    let coeffs: Vec<i64> = (0..m as usize).map(|i| poly.coeff(i)).collect();
    let sums: Vec<(u64, u64)> = (1..m)
        .map(|l| {
            let x = pow_mod(params.v(), l * f, p);
            let val = coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + rem_euclid(c, p)) % p);
            (l, val)
        })
        .collect();
    let full_sum = coeffs.iter().sum::<i64>() as u64 * p;
    debug_assert_eq!(full_sum, p * (p - 1) / 2);
    let principal = sums.iter().all(|&(_, s)| s != 0);
    Ok(PrincipalityReport { p, q, f, m, coeffs, sums, full_sum, principal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn params(p: u64) -> CycloParams {
        CycloParams::new(p).unwrap()
    }

    // Reduced forms with a scanned all the way to |D|, no 3a^2 <= |D| cutoff.
    fn brute_forms(d: i64) -> u64 {
        let n = -d;
        let mut count = 0;
        for a in 1..=n {
            for b in -a..=a {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                let reduced = b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0);
                if reduced && gcd(gcd(a as u64, b.unsigned_abs()), c as u64) == 1 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn forms_examples() {
        assert_eq!(reduced_forms_count(-3).unwrap(), 1);
        assert_eq!(reduced_forms_count(-4).unwrap(), 1);
        assert_eq!(reduced_forms_count(-23).unwrap(), 3);
        assert_eq!(reduced_forms_count(-47).unwrap(), 5);
        assert_eq!(reduced_forms_count(-20).unwrap(), 2);
        assert!(reduced_forms_count(-5).is_err());
        assert!(reduced_forms_count(5).is_err());
        for d in (3..400).map(|n: i64| -n).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            assert_eq!(reduced_forms_count(d).unwrap(), brute_forms(d), "D={d}");
        }
    }

    #[test]
    fn quad_examples() {
        let r = quad_report(&params(7)).unwrap();
        assert_eq!((r.alt_sum, r.class_number, r.parity_sum), (-7, 1, 1));
        let r = quad_report(&params(23)).unwrap();
        assert_eq!((r.class_number, r.oracle_count), (3, 3));
        assert!(r.checks().iter().all(|c| c.holds));
        assert!(quad_report(&params(13)).is_err());
        assert!(quad_report(&params(3)).is_err());
    }

    #[test]
    fn alternating_sum_vanishes_for_one_mod_four() {
        for p in primes_up_to(500).into_iter().filter(|p| p % 4 == 1) {
            assert_eq!(alternating_sum(&params(p)), 0, "p={p}");
        }
    }

    #[test]
    fn biquad_examples() {
        let r = biquad_report(&params(13)).unwrap();
        assert_eq!((r.s_even, r.s_odd, r.s, r.s_div_p2), (-13, -13, 338, Some(2)));
        let r = biquad_report(&params(5)).unwrap();
        assert_eq!((r.s_even, r.s_odd, r.s, r.s_div_p2), (-3, -1, 10, None));
        assert_eq!(r.check().kind, CheckKind::Record);
        assert!(!r.check().is_failure());
        assert!(biquad_report(&params(29)).unwrap().s_div_p2.is_some());
        assert!(biquad_report(&params(17)).is_err());
    }

    #[test]
    fn biquad_sum_is_root_invariant() {
        for p in [13u64, 29, 37, 53, 61] {
            let s = biquad_report(&params(p)).unwrap().s;
            for w in 2..p {
                if let Ok(pr) = CycloParams::with_root(p, w) {
                    assert_eq!(biquad_report(&pr).unwrap().s, s, "p={p} v={w}");
                }
            }
        }
    }

    #[test]
    fn psquare_examples() {
        let r = psquare_report(&params(7)).unwrap();
        assert_eq!(r.roots_mod_p().count(), 0);
        assert!(r.candidates.iter().all(|c| c.passes_mod_p2.is_none()));
        let r = psquare_report(&params(157)).unwrap();
        let mus: Vec<u64> = r.roots_mod_p().map(|c| c.mu).collect();
        assert_eq!(mus, vec![62, 66]);
        assert_eq!(r.roots_mod_p2().count(), 0);
        assert!(r.check().holds);
        assert_eq!(psquare_report(&params(491)).unwrap().roots_mod_p().count(), 3);
    }

    // Direct evaluation with i128 and no incremental reduction.
    #[test]
    fn psquare_matches_direct_evaluation() {
        for p in [37u64, 59, 67, 101, 103] {
            let pr = params(p);
            let delta = build_pair(&pr).unwrap().delta().to_vec();
            let p2 = (p * p) as i128;
            for c in psquare_report(&pr).unwrap().candidates {
                let mu = c.mu as i128;
                let pw = |e: usize| (0..e).fold(1i128, |a, _| a * mu % p2);
                let q: i128 = delta.iter().enumerate().map(|(i, &d)| pw(i) * d as i128).sum();
                assert_eq!(c.passes_mod_p, q.rem_euclid(p as i128) == 0);
                if c.passes_mod_p {
                    let n = p as usize;
                    let a: i128 = delta.iter().enumerate().map(|(i, &d)| pw(n - 2 + i) * d as i128 % p2).sum();
                    let b: i128 = (1..n - 1).map(|i| i as i128 * pw(i - 1) % p2 * delta[i] as i128 % p2).sum();
                    let total = a + (pw(n - 1) - 1) * (b % p2);
                    assert_eq!(c.passes_mod_p2, Some(total.rem_euclid(p2) == 0), "p={p} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn principality_examples() {
        let r = principality_test(&params(7), 2).unwrap();
        assert_eq!((r.f, r.m, r.sums.clone(), r.principal), (3, 2, vec![(1, 6)], true));
        let r = principality_test(&params(7), 13).unwrap();
        assert_eq!((r.f, r.m), (2, 3));
        assert_eq!(r.coeffs, vec![1, 1, 1]);
        assert_eq!(r.sums, vec![(1, 0), (2, 0)]);
        assert!(!r.principal);
        let r = principality_test(&params(37), 2).unwrap();
        assert_eq!((r.f, r.m, r.principal), (36, 1, true));
        assert!(r.sums.is_empty());
        assert!(matches!(principality_test(&params(7), 29), Err(Error::InertialDegreeOne { .. })));
        assert!(principality_test(&params(7), 7).is_err());
        assert!(matches!(principality_test(&params(7), 9), Err(Error::NotOddPrime(9))));
    }

    #[test]
    fn principality_full_sum() {
        for p in primes_up_to(200).into_iter().skip(1) {
            let pr = params(p);
            for q in [3u64, 5, 11, 17] {
                if let Ok(r) = principality_test(&pr, q) {
                    assert_eq!(r.full_sum, p * (p - 1) / 2);
                }
            }
        }
    }
}
