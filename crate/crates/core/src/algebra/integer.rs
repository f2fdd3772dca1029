//! Integer factorization and values kept in factored form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modular::is_prime_u64;
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 100_000;

/// Miller-Rabin primality test. Deterministic below 3.3 * 10^24; above that
/// the 24 fixed prime bases give a probable-prime answer.
pub fn is_prime(n: &BigInt) -> bool {
    if n <= &BigInt::one() {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    const BASES: [u32; 24] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89,
    ];
    for b in BASES {
        if (n % b).is_zero() {
            return false;
        }
    }
    let n_minus_1: BigInt = n - 1;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for b in BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigInt) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    for c in 1u32..64 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..(r - k).min(128) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
            if r > 1 << 22 {
                break;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization of a nonzero integer's absolute value.
pub fn factor_integer(n: &BigInt) -> Result<BTreeMap<BigInt, u64>> {
    if n.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut out = BTreeMap::new();
    let mut rest = n.abs();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.insert(pb, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let small_enough = BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT);
        if m < small_enough {
            // trial division exhausted every factor below the limit
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_brent(&m)
            .ok_or_else(|| Error::FactorLimit(format!("could not split {m}")))?;
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    Ok(out)
}

/// A nonzero rational number stored as `sign * prod p^e` with arbitrary
/// (possibly negative) big-integer exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FactoredRational {
    negative: bool,
    exponents: BTreeMap<BigInt, BigInt>,
}

impl FactoredRational {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_integer(n: &BigInt) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    pub fn from_rational(q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out = FactoredRational { negative: q.is_negative(), exponents: BTreeMap::new() };
        for (p, e) in factor_integer(q.numer())? {
            out.add_exponent(p, BigInt::from(e));
        }
        for (p, e) in factor_integer(q.denom())? {
            out.add_exponent(p, -BigInt::from(e));
        }
        Ok(out)
    }

    /// Builds from explicit `(prime, exponent)` pairs; primes are checked.
    pub fn from_prime_powers<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigInt, BigInt)>,
    {
        let mut out = FactoredRational::one();
        for (p, e) in pairs {
            if !is_prime(&p) {
                return Err(Error::Invariant(format!("{p} is not prime")));
            }
            out.add_exponent(p, e);
        }
        Ok(out)
    }

    fn add_exponent(&mut self, p: BigInt, e: BigInt) {
        if e.is_zero() {
            return;
        }
        let entry = self.exponents.entry(p.clone()).or_insert_with(BigInt::zero);
        *entry += e;
        if entry.is_zero() {
            self.exponents.remove(&p);
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn exponents(&self) -> &BTreeMap<BigInt, BigInt> {
        &self.exponents
    }

    pub fn exponent_of(&self, p: &BigInt) -> BigInt {
        self.exponents.get(p).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn mul(&self, other: &FactoredRational) -> FactoredRational {
        let mut out = self.clone();
        out.negative ^= other.negative;
        for (p, e) in &other.exponents {
            out.add_exponent(p.clone(), e.clone());
        }
        out
    }

    pub fn recip(&self) -> FactoredRational {
        FactoredRational {
            negative: self.negative,
            exponents: self.exponents.iter().map(|(p, e)| (p.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, e: &BigInt) -> FactoredRational {
        if e.is_zero() {
            return FactoredRational::one();
        }
        FactoredRational {
            negative: self.negative && e.is_odd(),
            exponents: self.exponents.iter().map(|(p, x)| (p.clone(), x * e)).collect(),
        }
    }

    pub fn abs(&self) -> FactoredRational {
        FactoredRational { negative: false, exponents: self.exponents.clone() }
    }

    pub fn is_integer(&self) -> bool {
        self.exponents.values().all(|e| e.is_positive())
    }

    /// Natural logarithm of the absolute value.
    pub fn ln_abs(&self) -> f64 {
        self.exponents
            .iter()
            .map(|(p, e)| super::poly::rat_to_f64(&BigRational::from_integer(e.clone())) * ln_big(p))
            .sum()
    }

    /// Exact value; `None` if the total bit length would exceed `max_bits`.
    pub fn to_rational(&self, max_bits: u64) -> Option<BigRational> {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let mut bits = 0f64;
        for (p, e) in &self.exponents {
            let ee = e.abs().to_u64()?;
            bits += ee as f64 * (p.bits() as f64);
            if bits > max_bits as f64 + 64.0 {
                return None;
            }
            let pw = num_traits::pow(p.clone(), ee as usize);
            if e.is_positive() {
                num *= pw;
            } else {
                den *= pw;
            }
        }
        if self.negative {
            num = -num;
        }
        Some(BigRational::new(num, den))
    }

    /// Converts to a factored integer; fails if any exponent is negative.
    pub fn to_integer(&self) -> Result<FactoredInteger> {
        if !self.is_integer() {
            let bad: Vec<String> = self
                .exponents
                .iter()
                .filter(|(_, e)| e.is_negative())
                .map(|(p, e)| format!("{p}^{e}"))
                .collect();
            return Err(Error::Invariant(format!("value is not integral: {}", bad.join(", "))));
        }
        Ok(FactoredInteger { negative: self.negative, exponents: self.exponents.clone() })
    }
}

pub fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// An integer `sign * prod p^e` with all exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FactoredInteger {
    negative: bool,
    exponents: BTreeMap<BigInt, BigInt>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_integer(n: &BigInt) -> Result<Self> {
        FactoredRational::from_integer(n)?.to_integer()
    }

    pub fn exponents(&self) -> &BTreeMap<BigInt, BigInt> {
        &self.exponents
    }

    pub fn exponent_of(&self, p: &BigInt) -> BigInt {
        self.exponents.get(p).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn as_rational(&self) -> FactoredRational {
        FactoredRational { negative: self.negative, exponents: self.exponents.clone() }
    }

    pub fn ln_abs(&self) -> f64 {
        self.as_rational().ln_abs()
    }

    pub fn log10_abs(&self) -> f64 {
        self.ln_abs() / std::f64::consts::LN_10
    }

    /// Exact value when its bit length stays under `max_bits`.
    pub fn to_bigint(&self, max_bits: u64) -> Option<BigInt> {
        self.as_rational().to_rational(max_bits).map(|q| q.numer().clone())
    }

    /// Number of decimal digits of `|value|`, exact when the value can be
    /// expanded under `max_bits`, otherwise from the logarithm.
    pub fn decimal_digits(&self, max_bits: u64) -> u64 {
        match self.to_bigint(max_bits) {
            Some(v) => v.magnitude().to_str_radix(10).len() as u64,
            None => self.log10_abs().floor() as u64 + 1,
        }
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.exponents.iter().map(|(p, e)| format!("{p}^{e}")).collect();
        write!(f, "{}", parts.join(" · "))
    }
}

impl fmt::Debug for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactoredRational({self})")
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_rational().fmt(f)
    }
}

impl fmt::Debug for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactoredInteger({self})")
    }
}

impl From<FactoredInteger> for FactoredRational {
    fn from(v: FactoredInteger) -> Self {
        v.as_rational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    #[test]
    fn factors_small_and_medium_integers() {
        let n = BigInt::from(2916); // 2^2 3^6
        let f = factor_integer(&n).unwrap();
        assert_eq!(f.get(&BigInt::from(2)), Some(&2));
        assert_eq!(f.get(&BigInt::from(3)), Some(&6));
        // product of two primes above the trial-division limit
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(1_000_033u64);
        let f = factor_integer(&(&p * &q)).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.contains_key(&p) && f.contains_key(&q));
    }

    #[test]
    fn primality() {
        assert!(is_prime(&BigInt::from(2)));
        assert!(!is_prime(&BigInt::from(1)));
        let m61: BigInt = (BigInt::one() << 61) - 1;
        assert!(is_prime(&m61));
        let m127: BigInt = (BigInt::one() << 127) - 1;
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m61 * &m61)));
    }

    #[test]
    fn factored_rational_arithmetic() {
        let a = FactoredRational::from_rational(&rat(15, 48)).unwrap(); // 5/16
        assert_eq!(a.exponent_of(&BigInt::from(2)), BigInt::from(-4));
        assert_eq!(a.exponent_of(&BigInt::from(5)), BigInt::from(1));
        let b = a.pow(&BigInt::from(3)).mul(&a.recip());
        assert_eq!(b.to_rational(100).unwrap(), rat(25, 256));
        assert!(!b.is_integer());
        let c = FactoredRational::from_rational(&rat(-4, 3)).unwrap();
        assert!(c.is_negative());
        assert!(c.to_integer().is_err());
        let d = c.pow(&BigInt::from(2)).mul(&FactoredRational::from_integer(&BigInt::from(9)).unwrap());
        assert_eq!(d.to_integer().unwrap().to_bigint(64), Some(BigInt::from(16)));
    }

    #[test]
    fn digits_and_logs() {
        let v = FactoredInteger::from_integer(&BigInt::from(524_880)).unwrap();
        assert_eq!(v.decimal_digits(1000), 6);
        assert!((v.ln_abs() - 524_880f64.ln()).abs() < 1e-9);
    }
}
