//! Exact arithmetic: integers, rationals, polynomials, rational functions,
//! factorization and fraction-free linear algebra.

pub mod factor;
pub mod integer;
pub mod matrix;
pub mod modular;
pub mod numfield;
pub mod poly;
pub mod preimage;
pub mod ratfunc;

pub use factor::{factor_rational, is_irreducible, Factorization};
pub use integer::{FactoredInteger, FactoredRational};
pub use matrix::{char_poly, det_fraction_free, RatMatrix};
pub use poly::UniPoly;
pub use preimage::preimage_poly;
pub use ratfunc::{solve_linear_ratfunc, RatFunc, RatFuncMatrix};
