//! The Schur complement of the first-level probabilistic Laplacian and the
//! scalar functions `phi` and `R` it factors through.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::classify::{classify_exceptional, ExceptionalClass};
use crate::algebra::factor::{factor_rational, Factorization};
use crate::algebra::matrix::{char_poly, RatMatrix};
use crate::algebra::poly::UniPoly;
use crate::algebra::ratfunc::{solve_linear_ratfunc, RatFunc, RatFuncMatrix};
use crate::error::{Error, Result};
use crate::fractal::schema::{validate_schema, SubstitutionSchema};
use crate::matrix_tree::laplacians;

/// Everything spectral decimation needs from the first-level graph.
#[derive(Debug, Clone)]
pub struct DecimationData {
    pub boundary_size: usize,
    pub num_cells: usize,
    /// `S(z)`, boundary rows and columns only.
    pub schur: RatFuncMatrix,
    pub phi: RatFunc,
    pub r: RatFunc,
    /// Degree of the numerator of `R`.
    pub degree: usize,
    /// Leading coefficient of the numerator of `R`.
    pub p_lead: BigRational,
    /// Constant term of the (primitive, positive-leading) denominator of `R`.
    pub q0: BigRational,
    /// `det(D - zI)` for the interior block `D`.
    pub char_d: UniPoly,
    pub sigma_d: Factorization,
    pub exceptional: Vec<ExceptionalClass>,
}

impl DecimationData {
    /// `-Q(0) / P_d`, the per-preimage scaling of root products.
    pub fn preimage_ratio(&self) -> BigRational {
        -&self.q0 / &self.p_lead
    }

    pub fn exceptional_class(&self, monic: &UniPoly) -> Option<&ExceptionalClass> {
        self.exceptional.iter().find(|c| &c.minpoly == monic)
    }
}

/// Computes `S(z) = (A - zI) - B (D - zI)^{-1} C` for the boundary-first
/// block split of `P_1`, extracts `phi` and `R`, checks
/// `S = phi (P_0 - R I)` entry by entry, and classifies the exceptional set.
pub fn schur_extract(s: &SubstitutionSchema) -> Result<DecimationData> {
    let report = validate_schema(s);
    if !report.decimation_eligible() {
        return Err(Error::DecimationInapplicable(format!(
            "schema '{}' is not eligible: {}",
            s.name(),
            report.messages.join("; ")
        )));
    }
    let n0 = s.boundary_size();
    let lp = laplacians(s.v1())?;
    let size = s.v1().vertex_count();
    let interior = size - n0;
    let entry = |i: usize, j: usize| RatFunc::constant(lp.p.get(i, j).clone());
    let shifted = |i: usize, j: usize| {
        let c = entry(i, j);
        if i == j {
            &c - &RatFunc::x()
        } else {
            c
        }
    };

    let d_shift = RatFuncMatrix::from_fn(interior, interior, |i, j| shifted(n0 + i, n0 + j));
    let c_block = RatFuncMatrix::from_fn(interior, n0, |i, j| entry(n0 + i, j));
    let b_block = RatFuncMatrix::from_fn(n0, interior, |i, j| entry(i, n0 + j));
    let a_shift = RatFuncMatrix::from_fn(n0, n0, shifted);
    let schur = if interior == 0 {
        a_shift
    } else {
        let x = solve_linear_ratfunc(&d_shift, &c_block)?;
        a_shift.sub(&b_block.mul(&x)?)?
    };

    let n0_minus_1 = BigRational::from_integer(BigInt::from(n0 - 1));
    let phi = schur.get(0, 1).scale(&-n0_minus_1.clone());
    if phi.is_zero() {
        return Err(Error::DecimationInapplicable("phi vanishes identically".into()));
    }
    let r = &RatFunc::one() - &schur.get(0, 0).div(&phi)?;

    // S must equal phi * (P_0 - R I) on every entry
    let diag = &phi * &(&RatFunc::one() - &r);
    let off = phi.scale(&-n0_minus_1.recip());
    for i in 0..n0 {
        for j in 0..n0 {
            let want = if i == j { &diag } else { &off };
            if schur.get(i, j) != want {
                return Err(Error::DecimationInapplicable(format!(
                    "Schur complement entry ({i}, {j}) is {} but phi (P_0 - R) gives {want}",
                    schur.get(i, j)
                )));
            }
        }
    }

    if !r.eval(&BigRational::zero()).is_ok_and(|v| v.is_zero()) {
        return Err(Error::DecimationInapplicable(format!("R(0) != 0 for R = {r}")));
    }
    let degree = r.num().deg();
    if r.num().is_zero() || degree <= r.den().deg() {
        return Err(Error::DecimationInapplicable(format!(
            "R = {r} needs a numerator of higher degree than its denominator"
        )));
    }
    let p_lead = r.num().leading();
    let q0 = r.den().constant_term();

    let char_d = if interior == 0 {
        UniPoly::one()
    } else {
        let d = RatMatrix::from_fn(interior, interior, |i, j| lp.p.get(n0 + i, n0 + j).clone());
        char_poly(&d)?
    };
    let sigma_d = if char_d.is_constant() {
        Factorization { content: char_d.leading(), factors: vec![] }
    } else {
        factor_rational(&char_d)?
    };

    let mut data = DecimationData {
        boundary_size: n0,
        num_cells: s.num_cells(),
        schur,
        phi,
        r,
        degree,
        p_lead,
        q0,
        char_d,
        sigma_d,
        exceptional: Vec::new(),
    };
    data.exceptional = classify_exceptional(&data)?;
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;
    use crate::fractal::graph::Multigraph;
    use crate::fractal::schema::{diamond, hexagasket, nonpcf, sierpinski};

    fn ratfunc(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(UniPoly::from_ints(num), UniPoly::from_ints(den)).unwrap()
    }

    #[test]
    fn extracted_maps() {
        let sg = schur_extract(&sierpinski()).unwrap();
        assert_eq!(sg.r, ratfunc(&[0, 5, -4], &[1]));
        assert_eq!((sg.degree, sg.q0.clone(), sg.p_lead.clone()), (2, rat(1, 1), rat(-4, 1)));

        let np = schur_extract(&nonpcf()).unwrap();
        // -24 z (z - 1)(2z - 3) / (14 z - 15)
        assert_eq!(np.r, ratfunc(&[0, -72, 120, -48], &[-15, 14]));
        assert_eq!((np.degree, np.q0.clone(), np.p_lead.clone()), (3, rat(-15, 1), rat(-48, 1)));

        let dm = schur_extract(&diamond()).unwrap();
        assert_eq!(dm.r, ratfunc(&[0, 4, -2], &[1]));
        assert_eq!((dm.q0.clone(), dm.p_lead.clone()), (rat(1, 1), rat(-2, 1)));

        let hx = schur_extract(&hexagasket()).unwrap();
        // 2 z (z - 1)(16 z^2 - 24 z + 7) / (2 z - 1)
        assert_eq!(hx.r, ratfunc(&[0, -14, 62, -80, 32], &[-1, 2]));
        assert_eq!((hx.degree, hx.q0.clone(), hx.p_lead.clone()), (4, rat(-1, 1), rat(32, 1)));
    }

    #[test]
    fn asymmetric_schema_is_refused() {
        // a path 0 - 2 - 1 with an extra pendant cell at boundary 0
        let mut v1 = Multigraph::new(4, vec![0, 1]).unwrap();
        v1.add_edge(0, 2, 1).unwrap();
        v1.add_edge(2, 1, 1).unwrap();
        v1.add_edge(0, 3, 1).unwrap();
        let s = SubstitutionSchema::new("lopsided", 3, 2, v1, vec![vec![0, 2], vec![2, 1], vec![0, 3]]);
        assert!(matches!(schur_extract(&s.unwrap()), Err(Error::DecimationInapplicable(_))));
    }
}
