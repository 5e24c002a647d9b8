//! Full verification run: the `p < 500` scan against the reference table plus
//! every congruence check over its range.

use rayon::prelude::*;

use crate::arith::{primes_up_to, CycloParams};
use crate::congruence::{biquad_report, psquare_report, quad_report, Check, CheckKind};
use crate::error::Result;
use crate::scan::{reference_table, root_order_check, scan_range, verify_against_reference, ScanReport};
use crate::stickelberger::{build_pair, identity_residual, p_gcd_check, pi_gcd_check};

/// Primes below 500 with a class of order `p` but, by the second congruence,
/// none of order `p^2`.
pub const PSQUARE_PRIMES: [u64; 5] = [157, 353, 379, 467, 491];

/// `P(X)(X - v) - pQ(X) - v(X^{p-1} - 1) = 0` and the bounds on `delta_i`.
pub fn identity_check(params: &CycloParams) -> Result<Check> {
    let pair = build_pair(params)?;
    let p = params.p() as i64;
    let v = params.v() as i64;
    let residual = identity_residual(&pair);
    let delta = pair.delta();
    let bad = delta.iter().enumerate().find(|&(i, &d)| {
        let floor = (params.v_neg(i) as i64 * v) / p;
        !(-p < d && d <= 0 && d == -floor)
    });
    let holds = residual.is_zero() && delta[0] == 0 && bad.is_none();
    let detail = match bad {
        None if holds => format!("residual 0, {} deltas in (-p, 0]", delta.len()),
        None => format!("residual {residual}, delta_0 = {}", delta[0]),
        Some((i, d)) => format!("delta_{i} = {d}"),
    };
    Ok(Check::new("stickelberger-identity", CheckKind::Theorem, params.p(), holds, detail))
}

/// Every coefficient of `P mod (X^d - 1)` is divisible by `p`, for each
/// proper divisor `d` of `p - 1`. At `d = p - 1` the fold is `P` itself.
pub fn subfield_check(params: &CycloParams) -> Result<Check> {
    let pair = build_pair(params)?;
    let p = params.p();
    let mut bad = Vec::new();
    for d in (1..p - 1).filter(|d| (p - 1) % d == 0) {
        let folded = pair.p_poly().rem_xd_minus_one(d as usize)?;
        if folded.coeffs().iter().any(|&c| c % p as i64 != 0) {
            bad.push(d);
        }
    }
    let detail = if bad.is_empty() { "all proper divisors d of p-1".to_string() } else { format!("fails for d in {bad:?}") };
    Ok(Check::new("subfield-divisibility", CheckKind::Theorem, p, bad.is_empty(), detail))
}

pub fn pi_gcd_observation(params: &CycloParams) -> Check {
    let c = pi_gcd_check(params);
    Check::new(
        "pi-gcd",
        CheckKind::Observation,
        c.p,
        c.holds(),
        format!("gcd(Pi, X^n+1) = {}, expected {}", c.gcd, c.expected),
    )
}

pub fn p_gcd_theorem(params: &CycloParams) -> Check {
    let c = p_gcd_check(params);
    Check::new(
        "p-gcd",
        CheckKind::Theorem,
        c.p,
        c.holds(),
        format!("gcd(P, X^n+1) = {}, expected {}", c.gcd, c.expected),
    )
}

/// Everything `verify` runs.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub scan: ScanReport,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.is_failure())
    }

    pub fn ok(&self) -> bool {
        self.scan.mismatches.is_empty() && self.failures().next().is_none()
    }
}

fn per_prime(p: u64) -> Result<Vec<Check>> {
    let params = CycloParams::new(p)?;
    let mut out = Vec::new();
    if p < 500 {
        out.push(identity_check(&params)?);
        out.push(subfield_check(&params)?);
        out.push(pi_gcd_observation(&params));
        out.push(p_gcd_theorem(&params));
        if p % 8 == 5 {
            out.push(biquad_report(&params)?.check());
        }
        if PSQUARE_PRIMES.contains(&p) {
            out.push(psquare_report(&params)?.check());
        }
    }
    if p % 4 == 3 && p >= 7 {
        out.extend(quad_report(&params)?.checks());
    }
    Ok(out)
}

/// Scans `p < 500` and checks every statement; quadratic checks run up to
/// `p < 1000`. Output order is deterministic.
pub fn run_suite(seed: u64, jobs: usize) -> Result<SuiteReport> {
    let mut scan = scan_range(3, 499, seed, jobs)?;
    scan.mismatches = verify_against_reference(&scan, &reference_table());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let primes: Vec<u64> = primes_up_to(999).into_iter().skip(1).collect();
    let per: Vec<Vec<Check>> = pool.install(|| primes.par_iter().map(|&p| per_prime(p)).collect::<Result<_>>())?;
    let mut checks: Vec<Check> = per.into_iter().flatten().collect();
    for r in &scan.records {
        let holds = root_order_check(r);
        checks.push(Check::new("root-order", CheckKind::Theorem, r.p, holds, format!("h={} {}", r.h, r.factors)));
    }
    Ok(SuiteReport { scan, checks })
}
