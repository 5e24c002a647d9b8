//! Structure scan of the relative class group.
//!
//! For a prime `p` and every odd prime `h <= p^2`, the scan computes
//! `GCD(X) = gcd(P(X), X^{(p-1)/2} + 1)` over `F_h` (with `Q` in place of `P`
//! when `h = p`), factors it and records `rho = deg GCD`.
//!
//! Running the gcd for all ~22000 primes `h` at `p = 499` is the dominant
//! cost, so [`scan_prime`] first computes the integer resultant
//! `R = Res(X^n + 1, P mod (X^n + 1))` by CRT over word-size primes. Since
//! `X^n + 1` is monic, the gcd mod `h` is nontrivial exactly when `h | R`, and
//! only those `h` (plus `h = p`) go through the gcd. [`scan_prime_exhaustive`]
//! keeps the plain loop over all `h` for cross-checking.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, inv_mod_prime, is_prime, pow_mod, primes_up_to, CycloParams};
use crate::error::{Error, Result};
use crate::factor::{factor_mod, FactorJson, FactorList};
use crate::poly::{IntPoly, ModPoly};
use crate::stickelberger::build_pair;

/// One row of the structure table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructureRecord {
    pub p: u64,
    pub h: u64,
    pub rho: usize,
    pub v: u64,
    pub factors: FactorList,
}

impl StructureRecord {
    pub fn key(&self) -> (u64, u64) {
        (self.p, self.h)
    }

    /// `p,h,rho,v,factors`
    pub fn to_csv_line(&self) -> String {
        format!("{},{},{},{},{}", self.p, self.h, self.rho, self.v, self.factors.to_csv_field())
    }

    pub fn to_json(&self) -> RecordJson {
        RecordJson { p: self.p, h: self.h, rho: self.rho, v: self.v, factors: self.factors.to_json() }
    }

    pub fn from_json(rec: &RecordJson) -> Result<Self> {
        let factors = rec
            .factors
            .iter()
            .map(|f| Ok((ModPoly::new(rec.h, f.coeffs.clone())?, f.mult)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { p: rec.p, h: rec.h, rho: rec.rho, v: rec.v, factors: FactorList::from_factors(rec.h, factors)? })
    }

    /// `p=41 h=11 rho=2 v=6 GCD(X)=X^2 + 10X + 6`
    pub fn to_text_line(&self) -> String {
        format!("p={} h={} rho={} v={} GCD(X)={}", self.p, self.h, self.rho, self.v, self.factors)
    }
}

/// JSON-lines shape of a record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub p: u64,
    pub h: u64,
    pub rho: usize,
    pub v: u64,
    pub factors: Vec<FactorJson>,
}

pub const CSV_HEADER: &str = "p,h,rho,v,factors";

pub fn records_to_csv(records: &[StructureRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

/// Parses the CSV dialect written by [`records_to_csv`]. Errors carry
/// 1-based line numbers.
pub fn parse_records_csv(text: &str) -> Result<Vec<StructureRecord>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') || (line == 1 && row == CSV_HEADER) {
            continue;
        }
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        let bad = |msg: String| Error::Parse { line, msg };
        if fields.len() != 5 {
            return Err(bad(format!("expected 5 fields, found {}", fields.len())));
        }
        let num = |i: usize, name: &str| -> Result<u64> {
            fields[i].parse().map_err(|_| bad(format!("bad {name} `{}`", fields[i])))
        };
        let (p, h, rho, v) = (num(0, "p")?, num(1, "h")?, num(2, "rho")? as usize, num(3, "v")?);
        if h < 2 || h >= 1 << 32 {
            return Err(bad(format!("bad modulus h = {h}")));
        }
        let factors = FactorList::parse_csv_field(fields[4], h).map_err(|e| match e {
            Error::Parse { msg, .. } => bad(msg),
            other => bad(other.to_string()),
        })?;
        out.push(StructureRecord { p, h, rho, v, factors });
    }
    Ok(out)
}

const REFERENCE_CSV: &str = include_str!("../data/reference_table.csv");

/// Raw text of the shipped reference table for `p < 500`.
pub fn reference_csv() -> &'static str {
    REFERENCE_CSV
}

/// The shipped reference table, parsed.
pub fn reference_table() -> Vec<StructureRecord> {
    parse_records_csv(REFERENCE_CSV).expect("embedded reference table parses")
}

/// Per-`p` data shared by every `h`.
struct ScanContext {
    params: CycloParams,
    half: usize,
    // P and Q reduced modulo X^n + 1, integer coefficients.
    p_folded: IntPoly,
    q_folded: IntPoly,
}

impl ScanContext {
    fn new(params: &CycloParams) -> Result<Self> {
        let pair = build_pair(params)?;
        let half = params.half();
        Ok(Self {
            params: params.clone(),
            half,
            p_folded: pair.p_poly().rem_xn_plus_one(half),
            q_folded: pair.q_poly().rem_xn_plus_one(half),
        })
    }

    fn gcd(&self, h: u64) -> ModPoly {
        let src = if h == self.params.p() { &self.q_folded } else { &self.p_folded };
        let target = ModPoly::binomial(h, self.half, 1);
        src.reduce_mod(h).expect("h < 2^32").gcd(&target).expect("same field")
    }

    fn record(&self, h: u64, seed: u64) -> Result<Option<StructureRecord>> {
        let g = self.gcd(h);
        if g.deg() == 0 {
            return Ok(None);
        }
        let factors = factor_mod(&g, seed)?;
        Ok(Some(StructureRecord {
            p: self.params.p(),
            h,
            rho: factors.total_degree(),
            v: self.params.v(),
            factors,
        }))
    }
}

fn check_h(h: u64) -> Result<()> {
    if h % 2 == 1 && is_prime(h) && h < 1 << 32 {
        Ok(())
    } else {
        Err(Error::NotOddPrime(h))
    }
}

/// Monic `gcd(P, X^{(p-1)/2} + 1)` over `F_h`, or with `Q` when `h = p`.
/// A constant result means `h` does not occur for this `p`.
pub fn relative_gcd(params: &CycloParams, h: u64) -> Result<ModPoly> {
    check_h(h)?;
    Ok(ScanContext::new(params)?.gcd(h))
}

/// `Res(X^n + 1, b)` over `F_l` for `deg b < n`, as `prod_{a^n = -1} b(a)`.
fn resultant_xn_plus_one(b: &ModPoly, n: usize) -> u64 {
    let l = b.modulus();
    let mut a = ModPoly::binomial(l, n, 1);
    let mut b = b.clone();
    let mut acc = 1u64;
    loop {
        if b.is_zero() {
            return 0;
        }
        let (da, db) = (a.deg(), b.deg());
        if db == 0 {
            return acc * pow_mod(b.lead(), da as u64, l) % l;
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return 0;
        }
        // Res(a, b) = (-1)^{da db} lc(b)^{da - deg r} Res(b, r)
        acc = acc * pow_mod(b.lead(), (da - r.deg()) as u64, l) % l;
        if da % 2 == 1 && db % 2 == 1 {
            acc = (l - acc) % l;
        }
        a = b;
        b = r;
    }
}

/// `|Res(X^n + 1, f)|` for an integer polynomial `f` with `deg f < n`.
fn integer_resultant_abs(f: &IntPoly, n: usize) -> BigUint {
    // |prod f(a)| <= (sum |f_i|)^n over the n roots a on the unit circle.
    let l1: u64 = f.coeffs().iter().map(|c| c.unsigned_abs()).sum::<u64>().max(1);
    let bound_bits = (n as f64) * (l1 as f64).log2() + 2.0;
    let mut modulus = BigUint::from(1u32);
    let mut value = BigUint::from(0u32);
    let mut l = 1u64 << 31;
    while (modulus.bits() as f64) < bound_bits + 1.0 {
        l -= 1;
        while !is_prime(l) {
            l -= 1;
        }
        let r = resultant_xn_plus_one(&f.reduce_mod(l).expect("l < 2^32"), n);
        // incremental CRT: value += modulus * ((r - value) / modulus mod l)
        let cur = residue(&value, l);
        let m_mod = residue(&modulus, l);
        let t = (r + l - cur) % l * inv_mod_prime(m_mod, l) % l;
        value += &modulus * t;
        modulus *= l;
    }
    let half = &modulus >> 1u32;
    if value > half {
        modulus - value
    } else {
        value
    }
}

fn residue(x: &BigUint, m: u64) -> u64 {
    x.to_u32_digits().iter().rev().fold(0u64, |acc, &d| ((acc << 32) | d as u64) % m)
}

/// All records for one `p`, sorted by `h`.
pub fn scan_prime(params: &CycloParams, seed: u64) -> Result<Vec<StructureRecord>> {
    let p = params.p();
    let primes = primes_up_to(p * p);
    scan_prime_with(&ScanContext::new(params)?, &primes, seed)
}

fn scan_prime_with(ctx: &ScanContext, primes: &[u64], seed: u64) -> Result<Vec<StructureRecord>> {
    let p = ctx.params.p();
    let limit = p * p;
    let res = integer_resultant_abs(&ctx.p_folded, ctx.half);
    let zero = res.bits() == 0;
    let mut out = Vec::new();
    for &h in primes.iter().take_while(|&&h| h <= limit).filter(|&&h| h >= 3) {
        if h == p || zero || residue(&res, h) == 0 {
            out.extend(ctx.record(h, seed)?);
        }
    }
    Ok(out)
}

/// Same output as [`scan_prime`], computing the gcd for every odd prime
/// `h <= p^2`.
pub fn scan_prime_exhaustive(params: &CycloParams, seed: u64) -> Result<Vec<StructureRecord>> {
    let p = params.p();
    let ctx = ScanContext::new(params)?;
    let mut out = Vec::new();
    for h in primes_up_to(p * p).into_iter().filter(|&h| h >= 3) {
        out.extend(ctx.record(h, seed)?);
    }
    Ok(out)
}

/// Difference between a scan and a reference table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    Missing(StructureRecord),
    Unexpected(StructureRecord),
    Differs { expected: StructureRecord, actual: StructureRecord },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Missing(r) => write!(f, "missing  {}", r.to_csv_line()),
            Mismatch::Unexpected(r) => write!(f, "extra    {}", r.to_csv_line()),
            Mismatch::Differs { expected, actual } => {
                write!(f, "differs  expected {} got {}", expected.to_csv_line(), actual.to_csv_line())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub records: Vec<StructureRecord>,
    pub p_range: (u64, u64),
    pub elapsed: Duration,
    pub mismatches: Vec<Mismatch>,
}

impl ScanReport {
    pub fn to_csv(&self) -> String {
        records_to_csv(&self.records)
    }
}

/// Scans every odd prime `p` in `[lo, hi]` on `parallelism` worker threads.
/// The output does not depend on `seed` or `parallelism`.
pub fn scan_range(lo: u64, hi: u64, seed: u64, parallelism: usize) -> Result<ScanReport> {
    let start = Instant::now();
    let lo = lo.max(3);
    let ps: Vec<u64> = primes_up_to(hi).into_iter().filter(|&p| p >= lo).collect();
    let primes = primes_up_to(hi.saturating_mul(hi));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .expect("thread pool");
    // Largest p first: the work per p grows like p^2.
    let mut chunks: Vec<Vec<StructureRecord>> = pool.install(|| {
        ps.par_iter()
            .rev()
            .map(|&p| {
                let params = CycloParams::new(p)?;
                scan_prime_with(&ScanContext::new(&params)?, &primes, seed)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    chunks.reverse();
    let mut records: Vec<StructureRecord> = chunks.into_iter().flatten().collect();
    records.sort_by_key(StructureRecord::key);
    Ok(ScanReport { records, p_range: (lo, hi), elapsed: start.elapsed(), mismatches: Vec::new() })
}

/// Compares a scan with reference rows whose `p` lies in the scan's range.
/// Empty iff the `(p, h)` sets agree and each pair has the same `rho`, `v`
/// and factor multiset.
pub fn verify_against_reference(report: &ScanReport, reference: &[StructureRecord]) -> Vec<Mismatch> {
    let (lo, hi) = report.p_range;
    let mut expected: Vec<&StructureRecord> = reference.iter().filter(|r| r.p >= lo && r.p <= hi).collect();
    expected.sort_by_key(|r| r.key());
    let mut actual: Vec<&StructureRecord> = report.records.iter().collect();
    actual.sort_by_key(|r| r.key());
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < expected.len() || j < actual.len() {
        match (expected.get(i), actual.get(j)) {
            (Some(e), Some(a)) if e.key() == a.key() => {
                if e != a {
                    out.push(Mismatch::Differs { expected: (*e).clone(), actual: (*a).clone() });
                }
                i += 1;
                j += 1;
            }
            (Some(e), Some(a)) if e.key() < a.key() => {
                out.push(Mismatch::Missing((*e).clone()));
                i += 1;
            }
            (Some(e), None) => {
                out.push(Mismatch::Missing((*e).clone()));
                i += 1;
            }
            (_, Some(a)) => {
                out.push(Mismatch::Unexpected((*a).clone()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Every linear factor `X + c` has root `-c` of order dividing
/// `gcd(h - 1, p - 1)` in `F_h^*`.
pub fn root_order_check(record: &StructureRecord) -> bool {
    let h = record.h;
    let d = gcd(h - 1, record.p - 1);
    record
        .factors
        .factors()
        .iter()
        .filter(|f| f.poly.deg() == 1)
        .all(|f| {
            let root = (h - f.poly.coeff(0)) % h;
            root != 0 && pow_mod(root, d, h) == 1
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64) -> CycloParams {
        CycloParams::new(p).unwrap()
    }

    fn rec(line: &str) -> StructureRecord {
        parse_records_csv(line).unwrap().remove(0)
    }

    #[test]
    fn relative_gcd_examples() {
        assert_eq!(relative_gcd(&params(23), 3).unwrap().to_string(), "X + 1");
        assert_eq!(relative_gcd(&params(37), 37).unwrap().to_string(), "X + 5");
        assert_eq!(relative_gcd(&params(41), 11).unwrap().to_string(), "X^2 + 10X + 6");
        assert!(relative_gcd(&params(7), 3).unwrap().is_one());
        assert!(matches!(relative_gcd(&params(7), 9), Err(Error::NotOddPrime(9))));
        assert!(relative_gcd(&params(7), 2).is_err());
    }

    #[test]
    fn resultant_mod_small_prime_matches_root_product() {
        // Over F_17, X^4 + 1 splits: roots are the elements of order 8.
        let l = 17;
        let b = ModPoly::new(l, vec![3, 5, 0, 2]).unwrap();
        let roots: Vec<u64> = (1..l).filter(|&a| pow_mod(a, 4, l) == l - 1).collect();
        assert_eq!(roots.len(), 4);
        let direct = roots.iter().fold(1, |acc, &a| acc * b.eval(a) % l);
        assert_eq!(resultant_xn_plus_one(&b, 4), direct);
        // degree drop after reduction must not change the value
        let c = ModPoly::new(l, vec![3, 5]).unwrap();
        let direct = roots.iter().fold(1, |acc, &a| acc * c.eval(a) % l);
        assert_eq!(resultant_xn_plus_one(&c, 4), direct);
    }

    #[test]
    fn integer_resultant_small() {
        // Res(X^2 + 1, 2X + 3) = (2i + 3)(-2i + 3) = 13
        let f = IntPoly::new(vec![3, 2]);
        assert_eq!(integer_resultant_abs(&f, 2), BigUint::from(13u32));
        // Res(X + 1, -5) = -5
        assert_eq!(integer_resultant_abs(&IntPoly::new(vec![-5]), 1), BigUint::from(5u32));
    }

    #[test]
    fn scan_examples() {
        assert!(scan_prime(&params(3), 0).unwrap().is_empty());
        let recs = scan_prime(&params(23), 0).unwrap();
        assert_eq!(recs, vec![rec("23,3,1,5,(X+1)^1")]);
        let recs = scan_prime(&params(131), 0).unwrap();
        assert_eq!(recs[0], rec("131,3,3,2,(X^3+2X^2+1)^1"));
    }

    #[test]
    fn prefilter_agrees_with_exhaustive_loop() {
        for p in primes_up_to(110).into_iter().skip(1) {
            let pr = params(p);
            assert_eq!(scan_prime(&pr, 0).unwrap(), scan_prime_exhaustive(&pr, 0).unwrap(), "p={p}");
        }
    }

    #[test]
    fn small_range_is_empty() {
        let report = scan_range(3, 19, 0, 2).unwrap();
        assert!(report.records.is_empty());
        assert_eq!(report.p_range, (3, 19));
    }

    #[test]
    fn verify_reports() {
        let reference = reference_table();
        let mut report = scan_range(23, 47, 1, 1).unwrap();
        assert!(verify_against_reference(&report, &reference).is_empty());
        report.records[0].rho += 1;
        let mm = verify_against_reference(&report, &reference);
        assert_eq!(mm.len(), 1);
        assert!(matches!(mm[0], Mismatch::Differs { .. }));
        let empty = ScanReport { records: vec![], p_range: (3, 499), elapsed: Duration::ZERO, mismatches: vec![] };
        let mm = verify_against_reference(&empty, &reference);
        assert_eq!(mm.len(), reference.len());
        assert!(mm.iter().all(|m| matches!(m, Mismatch::Missing(_))));
    }

    #[test]
    fn csv_and_json_shapes() {
        let r = rec("41,11,2,6,(X^2+10X+6)^1");
        assert_eq!(r.to_csv_line(), "41,11,2,6,(X^2+10X+6)^1");
        assert_eq!(r.to_text_line(), "p=41 h=11 rho=2 v=6 GCD(X)=X^2 + 10X + 6");
        let js = serde_json::to_string(&r.to_json()).unwrap();
        assert_eq!(js, r#"{"p":41,"h":11,"rho":2,"v":6,"factors":[{"coeffs":[6,10,1],"mult":1}]}"#);
        let back: RecordJson = serde_json::from_str(&js).unwrap();
        assert_eq!(StructureRecord::from_json(&back).unwrap(), r);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "p,h,rho,v,factors\n23,3,1,5,(X+1)^1\n31,3,1\n";
        assert_eq!(parse_records_csv(text).unwrap_err(), Error::Parse { line: 3, msg: "expected 5 fields, found 3".into() });
        let text = "p,h,rho,v,factors\n23,3,1,5,(X+1)^1\n31,3,x,3,(X+1)^1\n";
        assert!(matches!(parse_records_csv(text), Err(Error::Parse { line: 3, .. })));
        let text = "23,3,1,5,X+1)^1\n";
        assert!(matches!(parse_records_csv(text), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn root_order_examples() {
        assert!(root_order_check(&rec("23,3,1,5,(X+1)^1")));
        assert!(root_order_check(&rec("43,211,1,3,(X+73)^1")));
        assert!(root_order_check(&rec("149,3,2,2,(X^2+1)^1")));
        // root 2 mod 7 has order 3, which does not divide gcd(6, 22) = 2
        assert!(!root_order_check(&rec("23,7,1,5,(X+5)^1")));
    }

    #[test]
    fn reference_table_is_canonical() {
        assert_eq!(records_to_csv(&reference_table()), reference_csv());
        assert_eq!(reference_table().len(), 264);
    }
}
