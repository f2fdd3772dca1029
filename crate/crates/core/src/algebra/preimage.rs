//! Preimage polynomials of conjugate classes under a rational map.

use super::factor::is_irreducible;
use super::poly::UniPoly;
use super::ratfunc::{homogenize, RatFunc};
use crate::error::{Error, Result};

/// Monic polynomial whose roots are all solutions `x` of `h(r(x)) = 0`,
/// with multiplicity. Requires `deg num(r) > deg den(r)`.
pub fn pullback(h: &UniPoly, r: &RatFunc) -> Result<UniPoly> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if r.num().deg() <= r.den().deg() {
        return Err(Error::BadMap(format!("numerator degree must exceed denominator degree in {r}")));
    }
    Ok(homogenize(h, r.num(), r.den(), h.deg()).monic())
}

/// Monic polynomial of degree `g * d^k` whose roots are the depth-`k`
/// preiterates under `r` of the roots of the irreducible `beta_class`.
pub fn preimage_poly(r: &RatFunc, beta_class: &UniPoly, k: usize) -> Result<UniPoly> {
    if r.is_constant() {
        return Err(Error::BadMap("constant map has no preimages".into()));
    }
    if !is_irreducible(beta_class)? {
        return Err(Error::Reducible(beta_class.to_string()));
    }
    let mut h = beta_class.monic();
    for _ in 0..k {
        h = pullback(&h, r)?;
    }
    Ok(h)
}
