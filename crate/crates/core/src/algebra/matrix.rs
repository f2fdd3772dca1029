//! Dense rational matrices, fraction-free determinants and exact
//! characteristic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modular::{covers, CrtVec, LargePrimes, MontField};
use super::poly::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigRational::one() } else { BigRational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| BigRational::from_integer(BigInt::from(rows[i][j])))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> RatMatrix {
        Self::from_fn(idx.len(), idx.len(), |i, j| self.get(idx[i], idx[j]).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(BigRational::zero(), |acc, k| acc + self.get(i, k) * rhs.get(k, j))
        }))
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    /// Integer matrix `scale * self`, where `scale` is the least common
    /// multiple of all denominators.
    pub fn integer_lift(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let l = self.data.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let rows = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let v = self.get(i, j);
                        v.numer() * (&l / v.denom())
                    })
                    .collect()
            })
            .collect();
        (l, rows)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact determinant by fraction-free elimination.
///
/// Each row is scaled to integers by the lcm of its denominators, the integer
/// determinant is computed with [`det_integer`], and the scaling is divided
/// out at the end.
pub fn det_fraction_free(m: &RatMatrix) -> Result<BigRational> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(BigRational::one());
    }
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let l = (0..n).fold(BigInt::one(), |acc, j| acc.lcm(m.get(i, j).denom()));
        rows.push((0..n).map(|j| m.get(i, j).numer() * (&l / m.get(i, j).denom())).collect());
        scale *= l;
    }
    Ok(BigRational::new(det_integer(rows)?, scale))
}

/// Bareiss determinant of a square integer matrix.
///
/// Rows whose entry in the pivot column is zero are not touched at that step;
/// they carry a stamp recording the last step at which they were brought up to
/// date, and are rescaled by `p_k / p_stamp` only when next needed. All
/// intermediate values remain exact integers (Sylvester's identity).
pub fn det_integer(mut a: Vec<Vec<BigInt>>) -> Result<BigInt> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: a.first().map_or(0, Vec::len) });
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    // pivots[s + 1] is the pivot used at step s; pivots[0] = 1.
    let mut pivots: Vec<BigInt> = Vec::with_capacity(n + 1);
    pivots.push(BigInt::one());
    // stamp[i] = number of completed steps reflected in row i's storage
    let mut stamp = vec![0usize; n];
    let mut negate = false;

    fn catch_up(row: &mut [BigInt], from_col: usize, stamp: &mut usize, target: usize, pivots: &[BigInt]) {
        if *stamp == target {
            return;
        }
        let num = &pivots[target];
        let den = &pivots[*stamp];
        for v in row[from_col..].iter_mut() {
            if !v.is_zero() {
                *v = &*v * num / den;
            }
        }
        *stamp = target;
    }

    for k in 0..n {
        // find a pivot row (nonzero entry in column k at or below row k)
        let Some(pr) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if pr != k {
            a.swap(pr, k);
            stamp.swap(pr, k);
            negate = !negate;
        }
        {
            let (row, st) = (&mut a[k], &mut stamp[k]);
            catch_up(row, k, st, k, &pivots);
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pk = pivot_row[k].clone();
        let prev = pivots[k].clone();
        for (off, row) in tail.iter_mut().enumerate() {
            let i = k + 1 + off;
            if row[k].is_zero() {
                continue;
            }
            catch_up(row, k, &mut stamp[i], k, &pivots);
            let aik = std::mem::take(&mut row[k]);
            for j in (k + 1)..n {
                let akj = &pivot_row[j];
                let aij = &row[j];
                if aij.is_zero() && akj.is_zero() {
                    continue;
                }
                let mut v = &pk * aij;
                if !akj.is_zero() {
                    v -= &aik * akj;
                }
                row[j] = v / &prev;
            }
            stamp[i] = k + 1;
        }
        pivots.push(pk);
    }
    let det = pivots[n].clone();
    Ok(if negate { -det } else { det })
}

/// Gershgorin bound on eigenvalue magnitude of an integer matrix.
fn gershgorin(rows: &[Vec<BigInt>]) -> BigInt {
    rows.iter()
        .map(|r| r.iter().fold(BigInt::zero(), |acc, v| acc + v.abs()))
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Characteristic polynomial `det(m - xI)`, computed exactly.
///
/// The matrix is scaled to an integer matrix `M = L m`; `det(M - xI)` is
/// computed modulo word-sized primes by Hessenberg reduction and recovered by
/// Chinese remaindering once the product of primes exceeds twice the bound
/// `(1 + rho)^n` on every coefficient, where `rho` is the Gershgorin radius.
pub fn char_poly(m: &RatMatrix) -> Result<UniPoly> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(UniPoly::one());
    }
    let (l, ints) = m.integer_lift();
    let rho = gershgorin(&ints);
    let bound = num_traits::pow(BigInt::one() + rho, n);
    let mut crt = CrtVec::new(n + 1);
    for p in LargePrimes::new() {
        let field = MontField::new(p);
        let coeffs = charpoly_mod(&ints, &field);
        crt.absorb(p, &coeffs);
        if covers(crt.modulus(), &bound) {
            break;
        }
    }
    let c_m = crt.symmetric();
    // det(m - xI) = L^{-n} det(M - L x I): coefficient i scales by L^{i-n}
    let mut l_pows = vec![BigInt::one(); n + 1];
    for i in 1..=n {
        l_pows[i] = &l_pows[i - 1] * &l;
    }
    let coeffs = (0..=n)
        .map(|i| BigRational::new(c_m[i].clone(), l_pows[n - i].clone()))
        .collect();
    Ok(UniPoly::new(coeffs))
}

/// Coefficients (ascending, plain residues) of `det(M - xI) mod p`.
fn charpoly_mod(ints: &[Vec<BigInt>], f: &MontField) -> Vec<u64> {
    let n = ints.len();
    let mut h: Vec<Vec<u64>> = ints.iter().map(|r| r.iter().map(|v| f.from_bigint(v)).collect()).collect();
    // similarity reduction to upper Hessenberg form
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = f.inv(h[j + 1][j]);
        for k in (j + 2)..n {
            if h[k][j] == 0 {
                continue;
            }
            let u = f.mul(h[k][j], inv);
            // row_k -= u * row_{j+1}
            let (upper, lower) = h.split_at_mut(k);
            let src = &upper[j + 1];
            let dst = &mut lower[0];
            for c in j..n {
                if src[c] != 0 {
                    dst[c] = f.sub(dst[c], f.mul(u, src[c]));
                }
            }
            // col_{j+1} += u * col_k
            for row in h.iter_mut() {
                if row[k] != 0 {
                    row[j + 1] = f.add(row[j + 1], f.mul(u, row[k]));
                }
            }
        }
    }
    // p_{k+1}(x) = (x - h_kk) p_k(x) - sum_{i<k} h_ik (prod_{m=i+1}^{k} h_{m,m-1}) p_i(x)
    let one = f.one();
    let mut polys: Vec<Vec<u64>> = vec![vec![one]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = f.add(next[d + 1], c);
            next[d] = f.sub(next[d], f.mul(h[k][k], c));
        }
        let mut sub_prod = one;
        for i in (0..k).rev() {
            sub_prod = f.mul(sub_prod, h[i + 1][i]);
            if sub_prod == 0 {
                break;
            }
            let coef = f.mul(h[i][k], sub_prod);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = f.sub(next[d], f.mul(coef, c));
            }
        }
        polys.push(next);
    }
    // polys[n] = det(xI - H); det(H - xI) = (-1)^n det(xI - H)
    let sign_flip = n % 2 == 1;
    polys[n]
        .iter()
        .map(|&c| {
            let c = if sign_flip { f.neg(c) } else { c };
            f.from_mont(c)
        })
        .collect()
}

/// Determinant by cofactor expansion; exponential, for cross-checks on tiny
/// matrices only.
pub fn det_cofactor_expansion(m: &RatMatrix) -> Result<BigRational> {
    let n = m.require_square()?;
    fn rec(m: &RatMatrix, rows: &[usize], cols: &[usize]) -> BigRational {
        if rows.is_empty() {
            return BigRational::one();
        }
        let r = rows[0];
        let mut acc = BigRational::zero();
        for (ci, &c) in cols.iter().enumerate() {
            let v = m.get(r, c);
            if v.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = rec(m, &rows[1..], &sub_cols);
            if ci % 2 == 0 {
                acc += v * minor;
            } else {
                acc -= v * minor;
            }
        }
        acc
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(rec(m, &idx, &idx))
}

/// Approximate magnitude helper for diagnostics.
pub fn approx_bits(v: &BigInt) -> u64 {
    v.bits() + u64::from(v.is_negative())
}
