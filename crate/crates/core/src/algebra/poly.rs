//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A polynomial with rational coefficients, stored in ascending degree order.
///
/// Trailing zero coefficients are always trimmed, so two polynomials are equal
/// exactly when their coefficient vectors are equal. The zero polynomial has
/// an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        UniPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| int_rat(c)).collect())
    }

    pub fn from_big_ints(coeffs: &[BigInt]) -> Self {
        UniPoly::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// `x - root`.
    pub fn linear_root(root: BigRational) -> Self {
        UniPoly::new(vec![-root, BigRational::one()])
    }

    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut v = vec![BigRational::zero(); degree + 1];
        v[degree] = c;
        UniPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial reported as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Scales so that the leading coefficient is one. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    /// Splits `self` as `content * primitive` where `primitive` has coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn content_and_primitive(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let den_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
        (BigRational::new(g, den_lcm), prim)
    }

    /// Primitive integer form with a positive leading coefficient, as a
    /// rational polynomial.
    pub fn primitive(&self) -> Self {
        UniPoly::from_big_ints(&self.content_and_primitive().1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = UniPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Composition `self(inner(x))`.
    pub fn compose(&self, inner: &UniPoly) -> Self {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let lead_inv = divisor.leading().recip();
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Invariant(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        match other.div_rem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (mut a, mut b) = (int_poly(self), int_poly(other));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = primitive_int(r);
        }
        UniPoly::from_big_ints(&a).monic()
    }

    /// Multiplicity of `factor` as a divisor of `self`.
    pub fn multiplicity_of(&self, factor: &UniPoly) -> usize {
        if self.is_zero() || factor.is_constant() {
            return 0;
        }
        let mut count = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(factor).expect("nonzero factor");
            if !r.is_zero() {
                return count;
            }
            count += 1;
            cur = q;
        }
    }

    /// Product of the roots counted with multiplicity,
    /// `(-1)^deg * c_0 / c_deg`.
    pub fn root_product(&self) -> BigRational {
        let d = self.deg();
        let v = self.constant_term() / self.leading();
        if d % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// Sum of the roots counted with multiplicity.
    pub fn root_sum(&self) -> BigRational {
        let d = self.deg();
        if d == 0 {
            return BigRational::zero();
        }
        -(self.coeff(d - 1) / self.leading())
    }

    /// Squarefree part, made monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return UniPoly::one();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Number of distinct real roots in the closed interval `[lo, hi]`,
    /// computed with a Sturm sequence.
    pub fn count_real_roots_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if self.is_constant() {
            return 0;
        }
        let sf = self.squarefree_part();
        let mut seq = vec![sf.clone(), sf.derivative()];
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]).expect("nonzero");
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        let changes = |x: &BigRational| {
            let mut last = 0i8;
            let mut count = 0;
            for p in &seq {
                let v = p.eval(x);
                let s = if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                };
                if s != 0 {
                    if last != 0 && s != last {
                        count += 1;
                    }
                    last = s;
                }
            }
            count
        };
        // V(lo) - V(hi) counts roots in (lo, hi]
        let at_lo_root = sf.eval(lo).is_zero();
        changes(lo) - changes(hi) + usize::from(at_lo_root)
    }

    /// True when every complex root of `self` is real and lies in `[lo, hi]`.
    pub fn all_roots_in(&self, lo: &BigRational, hi: &BigRational) -> bool {
        let sf = self.squarefree_part();
        sf.count_real_roots_in(lo, hi) == sf.deg()
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // fall back to shifting for huge values
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n - d - 60).max(0) as usize;
        let scaled = BigRational::new(r.numer() >> shift, r.denom().clone());
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

fn int_poly(p: &UniPoly) -> Vec<BigInt> {
    p.content_and_primitive().1
}

fn primitive_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let g = if v.last().unwrap().is_negative() { -g } else { g };
    v.iter().map(|c| c / &g).collect()
}

/// Pseudo-remainder of integer polynomials `a` by `b` (both nonzero,
/// deg a >= deg b not required).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $f(self, rhs: UniPoly) -> UniPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({}/{})", mag.numer(), mag.denom())?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_compares_syntactically() {
        let p = UniPoly::new(vec![rat(1, 2), rat(0, 1), rat(0, 3)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p, UniPoly::constant(rat(2, 4)));
        assert!(UniPoly::new(vec![rat(0, 1)]).is_zero());
    }

    #[test]
    fn primitive_form_has_positive_leading_integer() {
        // -x^2/2 + 3x/4 - 1/6
        let p = UniPoly::new(vec![rat(-1, 6), rat(3, 4), rat(-1, 2)]);
        let (c, prim) = p.content_and_primitive();
        assert_eq!(prim, vec![BigInt::from(2), BigInt::from(-9), BigInt::from(6)]);
        assert_eq!(c, rat(-1, 12));
        assert_eq!(UniPoly::from_big_ints(&prim).scale(&c), p);
    }

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let b = UniPoly::from_ints(&[1, 1]); // x + 1
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, UniPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let c = UniPoly::from_ints(&[-1, 0, 0, 1]); // x^3 - 1
        assert_eq!(a.gcd(&c), UniPoly::from_ints(&[-1, 1]));
        assert!(UniPoly::zero().div_rem(&UniPoly::zero()).is_err());
    }

    #[test]
    fn derivative_and_compose() {
        // z(5 - 4z) = 5z - 4z^2
        let r = UniPoly::from_ints(&[0, 5, -4]);
        assert_eq!(r.derivative(), UniPoly::from_ints(&[5, -8]));
        assert_eq!(r.compose(&r).degree(), Some(4));
        assert_eq!(r.eval(&rat(3, 4)), rat(3, 2));
    }

    #[test]
    fn root_product_and_sum() {
        // (x - 1/4)(x - 3/4)
        let p = &UniPoly::linear_root(rat(1, 4)) * &UniPoly::linear_root(rat(3, 4));
        assert_eq!(p.root_product(), rat(3, 16));
        assert_eq!(p.root_sum(), rat(1, 1));
    }

    #[test]
    fn sturm_counts_roots_in_interval() {
        // roots 0, 3/4, 5/4, 3
        let p = [rat(0, 1), rat(3, 4), rat(5, 4), rat(3, 1)]
            .into_iter()
            .fold(UniPoly::one(), |acc, r| &acc * &UniPoly::linear_root(r));
        assert_eq!(p.count_real_roots_in(&rat(0, 1), &rat(2, 1)), 3);
        assert_eq!(p.count_real_roots_in(&rat(1, 2), &rat(5, 4)), 2);
        assert!(!p.all_roots_in(&rat(0, 1), &rat(2, 1)));
        // x^2 + 1 has no real roots
        let q = UniPoly::from_ints(&[1, 0, 1]);
        assert_eq!(q.count_real_roots_in(&rat(-10, 1), &rat(10, 1)), 0);
    }

    #[test]
    fn display_is_readable() {
        let p = UniPoly::new(vec![rat(7, 16), rat(-3, 2), rat(1, 1)]);
        assert_eq!(p.to_string(), "x^2 - (3/2)x + (7/16)");
    }
}
