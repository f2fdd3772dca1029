//! Exceptional eigenvalue classes and the case split that governs their
//! multiplicities.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::schur::DecimationData;
use crate::algebra::factor::factor_rational;
use crate::algebra::poly::UniPoly;
use crate::error::{Error, Result};

/// Which multiplicity rule applies to an exceptional class.
///
/// `Regular` is the generic rule `mult_n(z) = mult_{n-1}(R(z))`; the other
/// variants are numbered as in the standard statement of the decimation
/// theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Item {
    Regular,
    Two,
    Three,
    Four,
    Five,
    Six,
    Seven,
    Eight,
}

impl Item {
    pub fn number(self) -> u8 {
        match self {
            Item::Regular => 1,
            Item::Two => 2,
            Item::Three => 3,
            Item::Four => 4,
            Item::Five => 5,
            Item::Six => 6,
            Item::Seven => 7,
            Item::Eight => 8,
        }
    }

    /// Values whose own preimages never reach the spectrum.
    pub fn is_terminal(self) -> bool {
        matches!(self, Item::Two | Item::Eight)
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.number())
    }
}

/// A conjugate class of the exceptional set, i.e. an irreducible factor of
/// `charpoly(D) * num(phi)`, together with its divisibility predicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalClass {
    /// Monic irreducible minimal polynomial.
    pub minpoly: UniPoly,
    pub item: Item,
    pub mult_d: usize,
    pub in_sigma_d: bool,
    pub phi_zero: bool,
    pub phi_pole: bool,
    pub phi_r_pole: bool,
    /// Divides both numerator and denominator of `R` before cancellation.
    pub r_removable: bool,
    /// Divides the denominator of `R` after cancellation.
    pub r_pole: bool,
    pub r_prime_nonzero: bool,
}

impl ExceptionalClass {
    /// Multiplicity at level `n >= 1` from the item formula.
    ///
    /// `scale` is `num_cells^(n-1)`, `prev_size` is `|V_{n-1}|` and
    /// `prev_image` is `mult_{n-1}(R(z))`, zero when `R(z)` is not an
    /// eigenvalue of the previous level.
    pub fn multiplicity(&self, scale: &BigInt, prev_size: &BigInt, prev_image: &BigInt) -> BigInt {
        let md = scale * BigInt::from(self.mult_d);
        match self.item {
            Item::Regular => prev_image.clone(),
            Item::Two => prev_size.clone(),
            Item::Three => md - prev_size + prev_image,
            Item::Four => md + prev_image,
            Item::Five => md + prev_size + prev_image,
            Item::Six => md - prev_size + prev_image * 2,
            Item::Seven => BigInt::zero(),
            Item::Eight => md,
        }
    }
}

fn divides(f: &UniPoly, g: &UniPoly) -> bool {
    !g.is_zero() && f.divides(g)
}

/// Assigns one item to every irreducible factor of `charpoly(D) * num(phi)`.
pub fn classify_exceptional(dd: &DecimationData) -> Result<Vec<ExceptionalClass>> {
    let product = &dd.char_d * dd.phi.num();
    if product.is_constant() {
        return Ok(Vec::new());
    }
    let phi_r = &dd.phi * &dd.r;
    // R = 1 - S00 / phi before any cancellation: (phi - S00) / phi over a
    // common denominator
    let s00 = dd.schur.get(0, 0);
    let raw_num = &(dd.phi.num() * s00.den()) - &(s00.num() * dd.phi.den());
    let raw_den = dd.phi.num() * s00.den();
    let r_prime = dd.r.derivative();

    let mut out = Vec::new();
    for (f, _) in factor_rational(&product)?.factors {
        let f = f.monic();
        let in_sigma_d = divides(&f, &dd.char_d);
        let mult_d = if in_sigma_d { dd.char_d.multiplicity_of(&f) } else { 0 };
        let phi_zero = divides(&f, dd.phi.num());
        let phi_pole = divides(&f, dd.phi.den());
        let phi_r_pole = divides(&f, phi_r.den());
        let r_removable = divides(&f, &raw_num) && divides(&f, &raw_den);
        let r_pole = divides(&f, dd.r.den());
        let r_prime_nonzero = !divides(&f, r_prime.num());
        // S = phi P_0 - phi R I is singular at z exactly when phi or phi R
        // is; a pole of phi cancelled in phi R by a zero of R still counts
        let s_pole = phi_pole || phi_r_pole;
        let item = match (in_sigma_d, phi_zero, s_pole, r_pole) {
            (false, true, _, false) => Item::Two,
            (false, true, _, true) => Item::Seven,
            (true, _, true, false) if r_prime_nonzero => Item::Three,
            (true, _, true, false) => Item::Six,
            (true, false, false, _) => Item::Four,
            (true, true, false, false) => Item::Five,
            (true, true, false, true) => Item::Eight,
            _ => {
                return Err(Error::DecimationInapplicable(format!(
                    "class {f} fits no multiplicity rule (in sigma(D): {in_sigma_d}, phi zero: {phi_zero}, \
                     phi pole: {phi_pole}, phi R pole: {phi_r_pole}, R pole: {r_pole})"
                )))
            }
        };
        out.push(ExceptionalClass {
            minpoly: f,
            item,
            mult_d,
            in_sigma_d,
            phi_zero,
            phi_pole,
            phi_r_pole,
            r_removable,
            r_pole,
            r_prime_nonzero,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;
    use crate::decimation::schur::schur_extract;
    use crate::fractal::schema::{diamond, hexagasket, sierpinski};

    fn items(dd: &DecimationData) -> Vec<(UniPoly, Item)> {
        dd.exceptional.iter().map(|c| (c.minpoly.clone(), c.item)).collect()
    }

    #[test]
    fn sierpinski_items() {
        let dd = schur_extract(&sierpinski()).unwrap();
        let got = items(&dd);
        assert!(got.contains(&(UniPoly::linear_root(rat(3, 2)), Item::Two)));
        assert!(got.contains(&(UniPoly::linear_root(rat(5, 4)), Item::Three)));
        assert!(got.contains(&(UniPoly::linear_root(rat(1, 2)), Item::Three)));
        let c = dd.exceptional_class(&UniPoly::linear_root(rat(5, 4))).unwrap();
        assert_eq!(c.mult_d, 2);
        assert!(c.in_sigma_d && c.phi_pole && !c.r_pole && c.r_prime_nonzero);
    }

    #[test]
    fn diamond_critical_value() {
        let dd = schur_extract(&diamond()).unwrap();
        assert_eq!(items(&dd), vec![(UniPoly::linear_root(rat(1, 1)), Item::Six)]);
    }

    #[test]
    fn hexagasket_pole_class() {
        let dd = schur_extract(&hexagasket()).unwrap();
        let c = dd.exceptional_class(&UniPoly::linear_root(rat(1, 2))).unwrap();
        assert_eq!(c.item, Item::Seven);
        let scale = BigInt::from(7);
        assert!(c.multiplicity(&scale, &BigInt::from(3), &BigInt::from(1)).is_zero());
    }

    #[test]
    fn item_formulas() {
        let mut c = schur_extract(&sierpinski()).unwrap().exceptional[0].clone();
        c.mult_d = 2;
        let (scale, size, img) = (BigInt::from(9), BigInt::from(15), BigInt::from(4));
        let want = [(Item::Two, 15), (Item::Three, 7), (Item::Four, 22), (Item::Five, 37), (Item::Six, 11), (Item::Eight, 18)];
        for (item, v) in want {
            c.item = item;
            assert_eq!(c.multiplicity(&scale, &size, &img), BigInt::from(v), "{item}");
        }
    }
}
