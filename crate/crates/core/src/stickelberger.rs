//! Annihilator polynomials built from the index table `v_n`.
//!
//! * `P(X) = sum v_{-i} X^i`, the Stickelberger element written in `sigma`.
//! * `Q(X) = sum delta_i X^i` with `P(X)(X - v) = p Q(X) + v(X^{p-1} - 1)`.
//! * `Pi(X) = sum_{v_{-i} even} X^i` and `S_2 = P + p Pi` (conductor `2p`).
//! * `Q_d(X) = sum_{i in I_d} X^i` from Jacobi-sum index sets.
//! * `P_1(X)` for primes of inertial degree `f > 1`.

use serde::Serialize;

use crate::arith::CycloParams;
use crate::error::{Error, Result};
use crate::poly::{IntPoly, ModPoly};

/// `P`, `Q` and the `delta_i` for one choice of `(p, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StickelbergerPair {
    params: CycloParams,
    p_poly: IntPoly,
    q_poly: IntPoly,
    delta: Vec<i64>,
}

impl StickelbergerPair {
    pub fn params(&self) -> &CycloParams {
        &self.params
    }

    /// `P(X)`, coefficient `v_{-i}` at `X^i`.
    pub fn p_poly(&self) -> &IntPoly {
        &self.p_poly
    }

    /// `Q(X)` with its true, nonpositive integer coefficients.
    pub fn q_poly(&self) -> &IntPoly {
        &self.q_poly
    }

    /// `delta_0 .. delta_{p-2}`; `delta_0 = 0`.
    pub fn delta(&self) -> &[i64] {
        &self.delta
    }
}

/// Builds `P` and `Q` and checks the defining identity exactly.
pub fn build_pair(params: &CycloParams) -> Result<StickelbergerPair> {
    let p = params.p() as i64;
    let v = params.v() as i64;
    let len = params.vpow().len();
    let p_coeffs: Vec<i64> = (0..len).map(|i| params.v_neg(i) as i64).collect();
    let mut delta = Vec::with_capacity(len);
    for i in 0..len {
        let num = params.v_at(1 - i as i64) as i64 - v * p_coeffs[i];
        if num % p != 0 {
            return Err(Error::InexactDivision { what: "delta_i", value: num, divisor: p });
        }
        delta.push(num / p);
    }
    let pair = StickelbergerPair {
        params: params.clone(),
        p_poly: IntPoly::new(p_coeffs),
        q_poly: IntPoly::new(delta.clone()),
        delta,
    };
    if !identity_residual(&pair).is_zero() {
        return Err(Error::InexactDivision { what: "P(X)(X-v) = pQ(X) + v(X^(p-1)-1)", value: 0, divisor: p });
    }
    Ok(pair)
}

/// `P(X)(X - v) - p Q(X) - v(X^{p-1} - 1)`, which must vanish.
pub fn identity_residual(pair: &StickelbergerPair) -> IntPoly {
    let p = pair.params.p() as i64;
    let v = pair.params.v() as i64;
    let lhs = pair.p_poly() * &IntPoly::new(vec![-v, 1]);
    let tail = &IntPoly::monomial(v, (p - 1) as usize) - &IntPoly::new(vec![v]);
    &(&lhs - &pair.q_poly().scale(p)) - &tail
}

/// `Pi(X)`: coefficient 1 at `X^i` iff `v_{-i}` is even.
pub fn pi_polynomial(params: &CycloParams) -> IntPoly {
    IntPoly::new(
        (0..params.vpow().len())
            .map(|i| i64::from(params.v_neg(i) % 2 == 0))
            .collect(),
    )
}

/// `S_2 = P + p Pi`.
pub fn s2_polynomial(params: &CycloParams) -> IntPoly {
    let p_poly = IntPoly::new((0..params.vpow().len()).map(|i| params.v_neg(i) as i64).collect());
    &p_poly + &pi_polynomial(params).scale(params.p() as i64)
}

/// The set `I_d` together with `Q_d(X) = sum_{i in I_d} X^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSet {
    pub d: u64,
    pub indices: Vec<usize>,
    #[serde(skip)]
    pub poly: IntPoly,
}

impl IndexSet {
    /// `sum_{i in I_d} (-1)^i`
    pub fn signed_sum(&self) -> i64 {
        self.indices.iter().map(|&i| if i % 2 == 0 { 1 } else { -1 }).sum()
    }
}

/// `I_d = { i in [0, p-2] : v_{(p-1)/2 - i} + v_{(p-1)/2 - i + ind_v(d)} > p }`.
pub fn index_set(params: &CycloParams, d: u64) -> Result<IndexSet> {
    let p = params.p();
    if d == 0 || d + 2 > p {
        return Err(Error::OutOfRange { value: d as i64, lo: 1, hi: p as i64 - 2 });
    }
    let shift = params.ind_v(d)? as i64;
    let half = params.half() as i64;
    let indices: Vec<usize> = (0..params.vpow().len())
        .filter(|&i| {
            let k = half - i as i64;
            params.v_at(k) + params.v_at(k + shift) > p
        })
        .collect();
    let mut coeffs = vec![0i64; params.vpow().len()];
    for &i in &indices {
        coeffs[i] = 1;
    }
    Ok(IndexSet { d, indices, poly: IntPoly::new(coeffs) })
}

/// `P_1(X) = sum_{i<m} (sum_{j<f} v_{-(i+jm)} / p) X^i` with `m = (p-1)/f`.
///
/// For `f = 2` every coefficient is 1, constant term included.
pub fn inertial_poly(params: &CycloParams, f: u64) -> Result<IntPoly> {
    let p = params.p();
    if f <= 1 || (p - 1) % f != 0 {
        return Err(Error::BadInertialDegree(f));
    }
    let m = (p - 1) / f;
    let mut coeffs = Vec::with_capacity(m as usize);
    for i in 0..m {
        let s: u64 = (0..f).map(|j| params.v_neg((i + j * m) as usize)).sum();
        if s % p != 0 {
            return Err(Error::InexactDivision { what: "P_1 coefficient", value: s as i64, divisor: p as i64 });
        }
        coeffs.push((s / p) as i64);
    }
    Ok(IntPoly::new(coeffs))
}

/// Outcome of comparing `gcd(Pi, X^{(p-1)/2} + 1)` in `F_p[X]` with
/// `(X^{(p-1)/2} + 1) / (X - v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiGcdCheck {
    pub p: u64,
    pub gcd: ModPoly,
    pub expected: ModPoly,
}

impl PiGcdCheck {
    pub fn holds(&self) -> bool {
        self.gcd == self.expected
    }
}

fn pi_gcd_target(params: &CycloParams) -> (ModPoly, ModPoly) {
    let p = params.p();
    let target = ModPoly::binomial(p, params.half(), 1);
    let linear = ModPoly::new(p, vec![p - params.v(), 1]).expect("p < 2^32");
    let (expected, rem) = target.div_rem(&linear);
    debug_assert!(rem.is_zero());
    (target, expected)
}

pub fn pi_gcd_check(params: &CycloParams) -> PiGcdCheck {
    let p = params.p();
    let (target, expected) = pi_gcd_target(params);
    let pi = pi_polynomial(params).reduce_mod(p).expect("p >= 3");
    let gcd = pi.gcd(&target).expect("same field");
    PiGcdCheck { p, gcd, expected }
}

/// Same comparison with `P` in place of `Pi`.
pub fn p_gcd_check(params: &CycloParams) -> PiGcdCheck {
    let p = params.p();
    let (target, expected) = pi_gcd_target(params);
    let pp = IntPoly::new((0..params.vpow().len()).map(|i| params.v_neg(i) as i64).collect());
    let gcd = pp.reduce_mod(p).expect("p >= 3").gcd(&target).expect("same field");
    PiGcdCheck { p, gcd, expected }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn params(p: u64) -> CycloParams {
        CycloParams::new(p).unwrap()
    }

    fn odd_primes_below(n: u64) -> impl Iterator<Item = u64> {
        primes_up_to(n - 1).into_iter().skip(1)
    }

    // S_2 read straight off its conductor-2p definition: every odd t in
    // [1, 2p-1] other than p lands on the exponent i with v_{-i} = t mod p.
    fn s2_from_conductor_2p(pr: &CycloParams) -> IntPoly {
        let p = pr.p();
        let mut coeffs = vec![0i64; (p - 1) as usize];
        for t in (1..2 * p).step_by(2).filter(|&t| t != p) {
            let i = (0..(p - 1) as usize).find(|&i| pr.v_neg(i) == t % p).unwrap();
            coeffs[i] += t as i64;
        }
        IntPoly::new(coeffs)
    }

    #[test]
    fn pair_p7() {
        let pair = build_pair(&params(7)).unwrap();
        assert_eq!(pair.p_poly().coeffs(), &[1, 5, 4, 6, 2, 3]);
        assert_eq!(pair.delta(), &[0, -2, -1, -2, 0, -1]);
        assert_eq!(pair.q_poly().eval(1), -6);
        assert_eq!(pair.p_poly().eval(1), 21);
    }

    #[test]
    fn pair_identities_below_500() {
        for p in odd_primes_below(500) {
            let pr = params(p);
            let pair = build_pair(&pr).unwrap();
            assert!(identity_residual(&pair).is_zero(), "p={p}");
            assert_eq!(pair.delta()[0], 0);
            let v = pr.v() as i64;
            for (i, &d) in pair.delta().iter().enumerate() {
                assert!(-(p as i64) < d && d <= 0, "p={p} i={i}");
                assert_eq!(d, -(pr.v_neg(i) as i64 * v).div_euclid(p as i64));
            }
            assert_eq!(pair.p_poly().eval(1), (p * (p - 1) / 2) as i128);
        }
    }

    #[test]
    fn pi_examples() {
        assert_eq!(pi_polynomial(&params(7)).coeffs(), &[0, 0, 1, 1, 1]);
        assert_eq!(pi_polynomial(&params(5)).coeffs(), &[0, 0, 1, 1]);
        for p in odd_primes_below(200) {
            assert_eq!(pi_polynomial(&params(p)).eval(1), ((p - 1) / 2) as i128);
        }
    }

    #[test]
    fn s2_examples_and_oracle() {
        let s2 = s2_polynomial(&params(7));
        assert_eq!(s2.coeff(2), 11);
        assert_eq!(s2.coeff(0), 1);
        for p in odd_primes_below(500) {
            let pr = params(p);
            let s2 = s2_polynomial(&pr);
            assert_eq!(s2, s2_from_conductor_2p(&pr), "p={p}");
            assert_eq!(s2.eval(1), (p * (p - 1)) as i128);
        }
    }

    fn brute_index_set(pr: &CycloParams, d: u64) -> Vec<usize> {
        let p = pr.p() as i64;
        let s = (0..p - 1).find(|&s| pr.v_at(s) == d).unwrap();
        (0..(p - 1) as usize)
            .filter(|&i| {
                let a = ((p - 1) / 2 - i as i64).rem_euclid(p - 1);
                pr.vpow()[a as usize] + pr.vpow()[((a + s) % (p - 1)) as usize] > p as u64
            })
            .collect()
    }

    #[test]
    fn index_sets() {
        let pr = params(7);
        // ind(1) = 0: I_1 = {i : 2 v_{3-i} > 7}, v_{3-i} for i = 0..5 is 6,2,3,1,5,4
        let i1 = index_set(&pr, 1).unwrap();
        assert_eq!(i1.indices, vec![0, 4, 5]);
        assert_eq!(i1.poly.coeffs(), &[1, 0, 0, 0, 1, 1]);
        assert_eq!(i1.signed_sum(), 1);
        assert_eq!(index_set(&pr, 2).unwrap().indices, brute_index_set(&pr, 2));
        assert!(index_set(&pr, 0).is_err());
        assert!(index_set(&pr, 6).is_err());
        let pr = params(23);
        for d in 1..=21 {
            let set = index_set(&pr, d).unwrap();
            assert_eq!(set.indices.len() % 2, 1, "d={d}");
            assert_eq!(set.indices, brute_index_set(&pr, d));
        }
    }

    #[test]
    fn inertial_examples() {
        let pr = params(7);
        assert_eq!(inertial_poly(&pr, 3).unwrap().coeffs(), &[1, 2]);
        assert_eq!(inertial_poly(&pr, 2).unwrap().coeffs(), &[1, 1, 1]);
        assert_eq!(inertial_poly(&pr, 6).unwrap().coeffs(), &[3]);
        assert!(matches!(inertial_poly(&pr, 1), Err(Error::BadInertialDegree(1))));
        assert!(inertial_poly(&pr, 4).is_err());
        for p in odd_primes_below(500) {
            let pr = params(p);
            for f in (2..p).filter(|f| (p - 1) % f == 0) {
                let p1 = inertial_poly(&pr, f).unwrap();
                assert_eq!(p1.eval(1), ((p - 1) / 2) as i128, "p={p} f={f}");
            }
        }
    }

    #[test]
    fn p_gcd_variant_holds() {
        // gcd(P mod p, X^{(p-1)/2}+1) = (X^{(p-1)/2}+1)/(X-v), since
        // P(v^k) = sum v^{(k-1)i} vanishes mod p unless k = 1.
        for p in odd_primes_below(500) {
            assert!(p_gcd_check(&params(p)).holds(), "p={p}");
        }
    }

    #[test]
    fn pi_gcd_small_cases() {
        assert!(pi_gcd_check(&params(3)).holds());
        let c = pi_gcd_check(&params(5));
        assert!(c.gcd.is_one());
        assert_eq!(c.expected.to_string(), "X + 2");
    }
}
