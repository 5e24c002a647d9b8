//! Modular arithmetic, primality, multiplicative orders and primitive roots.
//!
//! The index convention used throughout the crate: for a prime `p` and a
//! primitive root `v`, `v_n` is `v^n mod p` taken in `[1, p-1]`, defined for
//! every integer `n` by reducing `n` modulo `p-1`.

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn rem_euclid(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo a prime `m` (Fermat).
pub fn inv_mod_prime(a: u64, m: u64) -> u64 {
    debug_assert!(a % m != 0);
    pow_mod(a, m - 2, m)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// These bases are a deterministic witness set for every n < 3.3e24.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes; returns all primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Distinct prime factors by trial division. Only used on `p - 1`.
fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// Multiplicative order of `a` modulo the odd prime `p`.
pub fn order_mod(a: i64, p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let a = rem_euclid(a, p);
    if a == 0 {
        return Err(Error::NotInvertible { a: a as i64, p });
    }
    let mut order = p - 1;
    for q in distinct_prime_factors(p - 1) {
        while order % q == 0 && pow_mod(a, order / q, p) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Least `v >= 2` generating `(Z/p)^*`.
pub fn smallest_primitive_root(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let factors = distinct_prime_factors(p - 1);
    (2..p)
        .find(|&v| factors.iter().all(|&q| pow_mod(v, (p - 1) / q, p) != 1))
        .ok_or(Error::NotOddPrime(p))
}

/// A prime `p`, a primitive root `v` and the table `vpow[n] = v^n mod p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloParams {
    p: u64,
    v: u64,
    vpow: Vec<u64>,
    // index[d] = ind_v(d) for d in 1..p; index[0] unused.
    index: Vec<u32>,
}

impl CycloParams {
    /// Parameters for `p` with the smallest primitive root.
    pub fn new(p: u64) -> Result<Self> {
        let v = smallest_primitive_root(p)?;
        Self::with_root(p, v)
    }

    /// Parameters for `p` with an explicitly chosen primitive root.
    pub fn with_root(p: u64, v: u64) -> Result<Self> {
        check_odd_prime(p)?;
        if v % p == 0 || order_mod(v as i64, p)? != p - 1 {
            return Err(Error::NotPrimitiveRoot { v, p });
        }
        let v = v % p;
        let n = (p - 1) as usize;
        let mut vpow = Vec::with_capacity(n);
        let mut index = vec![0u32; p as usize];
        let mut x = 1u64;
        for k in 0..n {
            vpow.push(x);
            index[x as usize] = k as u32;
            x = x * v % p;
        }
        Ok(Self { p, v, vpow, index })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    /// `(p - 1) / 2`
    pub fn half(&self) -> usize {
        ((self.p - 1) / 2) as usize
    }

    pub fn vpow(&self) -> &[u64] {
        &self.vpow
    }

    /// `v_n` for any integer `n`.
    #[inline]
    pub fn v_at(&self, n: i64) -> u64 {
        self.vpow[n.rem_euclid(self.p as i64 - 1) as usize]
    }

    /// `v_{-i}`, the coefficient of `X^i` in the Stickelberger polynomial.
    #[inline]
    pub fn v_neg(&self, i: usize) -> u64 {
        self.v_at(-(i as i64))
    }

    /// Least `s >= 0` with `v_s = d`.
    pub fn ind_v(&self, d: u64) -> Result<usize> {
        if d == 0 || d >= self.p {
            return Err(Error::OutOfRange { value: d as i64, lo: 1, hi: self.p as i64 - 1 });
        }
        Ok(self.index[d as usize] as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(a: u64, p: u64) -> u64 {
        let mut x = a % p;
        let mut k = 1;
        while x != 1 {
            x = x * a % p;
            k += 1;
        }
        k
    }

    #[test]
    fn primality_small_and_table() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(168449));
        assert!(!is_prime(3215031751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(is_prime(18446744073709551557)); // largest u64 prime
        let sieve = primes_up_to(10_000);
        let mr: Vec<u64> = (0..=10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, mr);
    }

    #[test]
    fn orders() {
        assert_eq!(order_mod(1, 7).unwrap(), 1);
        assert_eq!(order_mod(2, 7).unwrap(), 3);
        assert_eq!(order_mod(2, 37).unwrap(), 36);
        assert_eq!(order_mod(-1, 7).unwrap(), 2);
        assert!(matches!(order_mod(14, 7), Err(Error::NotInvertible { .. })));
        assert!(order_mod(2, 9).is_err());
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in 1..p {
                assert_eq!(order_mod(a as i64, p).unwrap(), brute_order(a, p));
            }
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(smallest_primitive_root(23).unwrap(), 5);
        assert_eq!(smallest_primitive_root(41).unwrap(), 6);
        assert_eq!(smallest_primitive_root(3).unwrap(), 2);
        assert_eq!(smallest_primitive_root(191).unwrap(), 19);
        assert_eq!(smallest_primitive_root(409).unwrap(), 21);
        for p in primes_up_to(500).into_iter().skip(1) {
            let v = smallest_primitive_root(p).unwrap();
            assert_eq!(brute_order(v, p), p - 1);
            assert!((2..v).all(|w| brute_order(w, p) != p - 1));
        }
    }

    #[test]
    fn params_tables() {
        let pr = CycloParams::new(7).unwrap();
        assert_eq!(pr.v(), 3);
        assert_eq!(pr.vpow(), &[1, 3, 2, 6, 4, 5]);
        assert_eq!(CycloParams::new(5).unwrap().vpow(), &[1, 2, 4, 3]);
        assert_eq!(pr.v_at(-1), 5);
        assert_eq!(pr.v_at(6), 1);
        assert_eq!(pr.v_at(-13), pr.v_at(5));
        assert_eq!(pr.ind_v(1).unwrap(), 0);
        assert_eq!(pr.ind_v(3).unwrap(), 1);
        assert_eq!(pr.ind_v(6).unwrap(), 3);
        assert!(pr.ind_v(0).is_err());
        assert!(pr.ind_v(7).is_err());
        assert!(CycloParams::new(2).is_err());
        assert!(CycloParams::new(15).is_err());
        assert!(CycloParams::with_root(7, 2).is_err());
        assert_eq!(CycloParams::with_root(7, 5).unwrap().vpow(), &[1, 5, 4, 6, 2, 3]);
    }

    #[test]
    fn vpow_is_a_permutation_below_500() {
        for p in primes_up_to(500).into_iter().skip(1) {
            let pr = CycloParams::new(p).unwrap();
            let mut sorted = pr.vpow().to_vec();
            assert_eq!(sorted.iter().sum::<u64>(), p * (p - 1) / 2);
            sorted.sort_unstable();
            assert!(sorted.iter().copied().eq(1..p));
            for n in 0..(p - 1) as usize {
                assert_eq!(pr.ind_v(pr.vpow()[n]).unwrap(), n);
            }
        }
    }
}
