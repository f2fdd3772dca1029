//! Univariate rational functions over the rationals and dense matrices of them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::UniPoly;
use crate::error::{Error, Result};

/// A reduced fraction `num / den` of polynomials.
///
/// The numerator and denominator are coprime and the denominator is a
/// primitive integer polynomial with positive leading coefficient, so equal
/// functions have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: UniPoly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let (c, prim) = den.content_and_primitive();
        RatFunc { num: num.scale(&c.recip()), den: UniPoly::from_big_ints(&prim) }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RatFunc { num: p, den: UniPoly::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(UniPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(UniPoly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(UniPoly::x())
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::canonical(self.num.scale(c), self.den.clone())
    }

    /// Evaluates at a rational point that is not a pole.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::canonical(n, &self.den * &self.den)
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &RatFunc) -> Result<Self> {
        let (u, v) = (&inner.num, &inner.den);
        let (n, m) = (self.num.deg(), self.den.deg());
        let mut top = homogenize(&self.num, u, v, n);
        let mut bot = homogenize(&self.den, u, v, m);
        if m > n {
            top = &top * &v.pow((m - n) as u64);
        } else if n > m {
            bot = &bot * &v.pow((n - m) as u64);
        }
        RatFunc::new(top, bot)
    }

    /// `self` composed with itself `k` times (`k = 0` gives the identity).
    pub fn iterate(&self, k: usize) -> Result<Self> {
        let mut acc = RatFunc::x();
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }
}

/// `sum_i p_i u^i v^(deg - i)`, i.e. `v^deg * p(u / v)`.
pub fn homogenize(p: &UniPoly, u: &UniPoly, v: &UniPoly, deg: usize) -> UniPoly {
    let mut acc = UniPoly::zero();
    let mut upow = UniPoly::one();
    let vpows: Vec<UniPoly> = {
        let mut out = vec![UniPoly::one()];
        for i in 1..=deg {
            out.push(&out[i - 1] * v);
        }
        out
    };
    for i in 0..=deg {
        let c = p.coeff(i);
        if !c.is_zero() {
            acc = &acc + &(&upow * &vpows[deg - i]).scale(&c);
        }
        upow = &upow * u;
    }
    acc
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::canonical(n, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.leading().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Dense row-major matrix over the field of rational functions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFuncMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl RatFuncMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatFunc) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatFuncMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &RatFuncMatrix) -> Result<RatFuncMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(RatFuncMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(RatFunc::zero(), |acc, k| &acc + &(self.get(i, k) * rhs.get(k, j)))
        }))
    }

    pub fn sub(&self, rhs: &RatFuncMatrix) -> Result<RatFuncMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Dimension("shape mismatch in subtraction".into()));
        }
        Ok(RatFuncMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j)))
    }
}

/// Solves `m * X = b` over the rational function field by Gauss-Jordan
/// elimination, pivoting on the entry of lowest total degree.
pub fn solve_linear_ratfunc(m: &RatFuncMatrix, b: &RatFuncMatrix) -> Result<RatFuncMatrix> {
    let n = m.rows;
    if m.cols != n {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    if b.rows != n {
        return Err(Error::Dimension(format!("right-hand side has {} rows, expected {n}", b.rows)));
    }
    let w = n + b.cols;
    let mut a: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| m.get(i, j).clone())
                .chain((0..b.cols).map(|j| b.get(i, j).clone()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].num().deg() + a[r][col].den().deg())
            .ok_or(Error::Singular)?;
        a.swap(col, pivot);
        let inv = a[col][col].inv()?;
        for j in col..w {
            a[col][j] = &a[col][j] * &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in col..w {
                if a[col][j].is_zero() {
                    continue;
                }
                let t = &factor * &a[col][j];
                a[r][j] = &a[r][j] - &t;
            }
        }
    }
    Ok(RatFuncMatrix::from_fn(n, b.cols, |i, j| a[i][n + j].clone()))
}
