//! Word-sized prime-field arithmetic and Chinese remaindering.
//!
//! Used as a fast exact backend: results are reconstructed from enough
//! residues to exceed a proven coefficient bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Montgomery arithmetic modulo an odd prime below 2^63.
#[derive(Debug, Clone, Copy)]
pub struct MontField {
    p: u64,
    /// -p^{-1} mod 2^64
    neg_inv: u64,
    /// 2^128 mod p
    r2: u64,
}

impl MontField {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < (1 << 63));
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        MontField { p, neg_inv: inv.wrapping_neg(), r2 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        self.to_mont(r.to_u64().expect("reduced residue fits"))
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero Montgomery-form element.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending sequence of primes just below 2^62.
pub struct LargePrimes {
    next: u64,
}

impl LargePrimes {
    pub fn new() -> Self {
        LargePrimes { next: (1u64 << 62) - 1 }
    }
}

impl Default for LargePrimes {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for LargePrimes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Incremental Chinese remaindering of a vector of residues.
pub struct CrtVec {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl CrtVec {
    pub fn new(len: usize) -> Self {
        CrtVec { modulus: BigInt::one(), values: vec![BigInt::zero(); len] }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Adds one residue vector (plain representatives in `[0, p)`).
    pub fn absorb(&mut self, p: u64, residues: &[u64]) {
        assert_eq!(residues.len(), self.values.len());
        let pb = BigInt::from(p);
        let m_mod_p = self.modulus.mod_floor(&pb).to_u64().unwrap();
        let m_inv = powmod(m_mod_p, p - 2, p);
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let cur = v.mod_floor(&pb).to_u64().unwrap();
            let diff = (r + p - cur) % p;
            let t = mulmod(diff, m_inv, p);
            *v += &self.modulus * BigInt::from(t);
        }
        self.modulus *= pb;
    }

    /// Values lifted to the symmetric range `(-M/2, M/2]`.
    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.values
            .iter()
            .map(|v| if v > &half { v - &self.modulus } else { v.clone() })
            .collect()
    }
}

/// Returns true when `bound` is strictly less than half the modulus, i.e. the
/// symmetric lift of every value with absolute value at most `bound` is exact.
pub fn covers(modulus: &BigInt, bound: &BigInt) -> bool {
    let twice: BigInt = bound.abs() * 2;
    &twice < modulus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn montgomery_roundtrip_and_inverse() {
        let f = MontField::new(1_000_000_007);
        let a = f.to_mont(123_456_789);
        let b = f.to_mont(987_654_321);
        let prod = f.from_mont(f.mul(a, b));
        assert_eq!(prod as u128, (123_456_789u128 * 987_654_321u128) % 1_000_000_007);
        assert_eq!(f.from_mont(f.mul(a, f.inv(a))), 1);
        assert_eq!(f.from_bigint(&BigInt::from(-1)), f.to_mont(1_000_000_006));
    }

    #[test]
    fn large_primes_are_prime() {
        let ps: Vec<u64> = LargePrimes::new().take(3).collect();
        assert!(ps.iter().all(|&p| is_prime_u64(p) && p > (1 << 61)));
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn crt_reconstructs_signed_values() {
        let vals = [BigInt::from(-123_456_789_012_345i64), BigInt::from(42)];
        let mut crt = CrtVec::new(2);
        for p in [1_000_000_007u64, 998_244_353] {
            let pb = BigInt::from(p);
            let res: Vec<u64> = vals.iter().map(|v| v.mod_floor(&pb).to_u64().unwrap()).collect();
            crt.absorb(p, &res);
        }
        assert_eq!(crt.symmetric(), vals.to_vec());
    }
}
