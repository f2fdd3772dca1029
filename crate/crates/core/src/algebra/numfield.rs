//! Arithmetic in `Q[y]/(f)` for an irreducible `f`, enough to push a
//! conjugate class of algebraic numbers through a rational function.

use super::matrix::{char_poly, RatMatrix};
use super::poly::UniPoly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Inverse of `a` modulo `f`, for `a` coprime to `f`.
pub fn inv_mod(a: &UniPoly, f: &UniPoly) -> Result<UniPoly> {
    let (mut r0, mut r1) = (f.clone(), a.div_rem(f)?.1);
    let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let t2 = &t0 - &(&q * &t1);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    if !r0.is_constant() {
        return Err(Error::DivisionByZero);
    }
    Ok(t0.scale(&r0.leading().recip()).div_rem(f)?.1)
}

/// The element `r(theta)` of `Q[y]/(f)` written as a polynomial of degree
/// below `deg f`.
pub fn element_of(r: &RatFunc, f: &UniPoly) -> Result<UniPoly> {
    let den = r.den().div_rem(f)?.1;
    if den.is_zero() {
        return Err(Error::Pole);
    }
    let num = r.num().div_rem(f)?.1;
    Ok((&num * &inv_mod(&den, f)?).div_rem(f)?.1)
}

/// Matrix of multiplication by `a` on the power basis of `Q[y]/(f)`.
pub fn mult_matrix(a: &UniPoly, f: &UniPoly) -> Result<RatMatrix> {
    let g = f.deg();
    let mut m = RatMatrix::zeros(g, g);
    let mut col = a.div_rem(f)?.1;
    for j in 0..g {
        for i in 0..g {
            m.set(i, j, col.coeff(i));
        }
        col = (&col * &UniPoly::x()).div_rem(f)?.1;
    }
    Ok(m)
}

/// Monic minimal polynomial of `r(theta)` where `theta` is any root of the
/// irreducible `f`. Fails with `Pole` when `f` divides the denominator.
pub fn image_minpoly(f: &UniPoly, r: &RatFunc) -> Result<UniPoly> {
    let a = element_of(r, f)?;
    if a.is_constant() {
        return Ok(UniPoly::linear_root(a.constant_term()));
    }
    let cp = char_poly(&mult_matrix(&a, f)?)?;
    // the characteristic polynomial of an element of a field extension is
    // a power of its minimal polynomial
    Ok(cp.squarefree_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    #[test]
    fn image_of_rational_class() {
        let r = RatFunc::from_poly(UniPoly::from_ints(&[0, 5, -4]));
        let f = UniPoly::from_ints(&[-3, 4]);
        assert_eq!(image_minpoly(&f, &r).unwrap(), UniPoly::linear_root(rat(3, 2)));
    }

    #[test]
    fn image_of_quadratic_class() {
        // theta = sqrt 2, r(y) = y^2 + y maps theta to 2 + sqrt 2, minpoly y^2 - 4y + 2
        let f = UniPoly::from_ints(&[-2, 0, 1]);
        let r = RatFunc::from_poly(UniPoly::from_ints(&[0, 1, 1]));
        assert_eq!(image_minpoly(&f, &r).unwrap(), UniPoly::from_ints(&[2, -4, 1]));
        // r(y) = y^2 collapses the class to the rational 2
        let sq = RatFunc::from_poly(UniPoly::from_ints(&[0, 0, 1]));
        assert_eq!(image_minpoly(&f, &sq).unwrap(), UniPoly::linear_root(rat(2, 1)));
    }

    #[test]
    fn inverse_and_pole() {
        let f = UniPoly::from_ints(&[-2, 0, 1]);
        let a = UniPoly::from_ints(&[1, 1]);
        let inv = inv_mod(&a, &f).unwrap();
        assert_eq!((&a * &inv).div_rem(&f).unwrap().1, UniPoly::one());
        let r = RatFunc::new(UniPoly::one(), f.clone()).unwrap();
        assert_eq!(image_minpoly(&f, &r), Err(Error::Pole));
    }
}
