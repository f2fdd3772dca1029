//! Spanning-tree counts assembled from the decimation spectrum, oracle
//! cross-checks, bounds and asymptotic constants.

mod bounds;
mod constant;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

pub use bounds::{bounds_check, BoundsReport};
pub use constant::{complexity_constant, complexity_constant_with, rationalize, ComplexityEstimate, ConstantOptions};

use crate::algebra::integer::{FactoredInteger, FactoredRational};
use crate::algebra::poly::UniPoly;
use crate::algebra::ratfunc::RatFunc;
use crate::decimation::SpectrumEngine;
use crate::error::{Error, Result};
use crate::fractal::build::{build_graph_capped, degree_ratio, degree_stats, DEFAULT_VERTEX_CAP};
use crate::fractal::schema::SubstitutionSchema;
use crate::matrix_tree::{tau_cofactor_flagged, tau_probabilistic_capped, DEFAULT_PROBABILISTIC_CAP};

/// Counts with more decimal digits than this are kept in factored form only.
pub const DEFAULT_DIGIT_CAP: u64 = 1_000_000;

fn digit_cap_bits(digits: u64) -> u64 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Decimation,
    Cofactor,
    Probabilistic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Decimation => "decimation",
            Method::Cofactor => "cofactor",
            Method::Probabilistic => "probabilistic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decimation" => Ok(Method::Decimation),
            "cofactor" => Ok(Method::Cofactor),
            "probabilistic" => Ok(Method::Probabilistic),
            other => Err(Error::Parse(format!("unknown method '{other}'"))),
        }
    }
}

/// Number of spanning trees of `V_n`, kept as a prime factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeCount {
    pub factored: FactoredInteger,
    pub level: usize,
    /// Natural logarithm, for display.
    pub log_value: f64,
    /// Whether the integer is small enough to expand under the digit cap.
    pub exact_available: bool,
}

impl TreeCount {
    pub fn from_factored(level: usize, factored: FactoredInteger) -> Self {
        let log_value = factored.ln_abs();
        let exact_available = log_value / std::f64::consts::LN_10 < DEFAULT_DIGIT_CAP as f64;
        TreeCount { factored, level, log_value, exact_available }
    }

    pub fn from_integer(level: usize, n: &BigInt) -> Result<Self> {
        if !n.is_positive() {
            return Err(Error::Invariant(format!("tree count {n} is not positive")));
        }
        Ok(Self::from_factored(level, FactoredInteger::from_integer(n)?))
    }

    /// The integer itself, when it fits under the digit cap.
    pub fn exact(&self) -> Option<BigInt> {
        if !self.exact_available {
            return None;
        }
        self.factored.to_bigint(digit_cap_bits(DEFAULT_DIGIT_CAP))
    }

    pub fn digits(&self) -> u64 {
        self.factored.decimal_digits(digit_cap_bits(DEFAULT_DIGIT_CAP))
    }

    pub fn exponent_of(&self, p: u64) -> BigInt {
        self.factored.exponent_of(&BigInt::from(p))
    }

    pub fn to_json(&self, schema: &str, method: Method, with_exact: bool) -> CountJson {
        CountJson {
            schema: schema.to_string(),
            level: self.level,
            method: method.as_str().to_string(),
            factored: PrimeExponents(
                self.factored.exponents().iter().map(|(p, e)| (p.to_string(), e.to_string())).collect(),
            ),
            log10: self.log_value / std::f64::consts::LN_10,
            digits: self.digits(),
            exact: if with_exact { self.exact().map(|v| v.to_string()) } else { None },
        }
    }
}

/// Count output record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountJson {
    pub schema: String,
    pub level: usize,
    pub method: String,
    pub factored: PrimeExponents,
    pub log10: f64,
    pub digits: u64,
    pub exact: Option<String>,
}

/// Prime to exponent map, serialized as a JSON object in increasing prime
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeExponents(pub Vec<(String, String)>);

impl Serialize for PrimeExponents {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (p, e) in &self.0 {
            map.serialize_entry(p, e)?;
        }
        map.end()
    }
}

fn check_map(r: &RatFunc) -> Result<(usize, BigRational)> {
    if r.num().is_zero() || r.num().deg() <= r.den().deg() {
        return Err(Error::BadMap(format!("{r} needs a numerator of higher degree than its denominator")));
    }
    if !r.num().constant_term().is_zero() {
        return Err(Error::BadMap(format!("{r} does not fix 0")));
    }
    let d = r.num().deg();
    Ok((d, -r.den().constant_term() / r.num().leading()))
}

/// `(d^k - 1) / (d - 1)`, i.e. `1 + d + ... + d^(k-1)`.
pub fn geometric_sum(d: usize, k: usize) -> BigInt {
    let mut acc = BigInt::zero();
    let mut pw = BigInt::one();
    for _ in 0..k {
        acc += &pw;
        pw *= d;
    }
    acc
}

/// Product over the depth-`k` preiterates of a class:
/// `N(class) * (-Q(0)/P_d)^(g (d^k - 1)/(d - 1))`, in factored form.
pub fn preiterate_product_factored(r: &RatFunc, alpha_class: &UniPoly, k: usize) -> Result<FactoredRational> {
    let (d, ratio) = check_map(r)?;
    let norm = alpha_class.monic().root_product();
    let g = BigInt::from(alpha_class.deg());
    Ok(FactoredRational::from_rational(&norm)?.mul(&FactoredRational::from_rational(&ratio)?.pow(&(g * geometric_sum(d, k)))))
}

/// Exact value of [`preiterate_product_factored`].
pub fn preiterate_product(r: &RatFunc, alpha_class: &UniPoly, k: usize) -> Result<BigRational> {
    let (d, ratio) = check_map(r)?;
    let norm = alpha_class.monic().root_product();
    let e = (BigInt::from(alpha_class.deg()) * geometric_sum(d, k))
        .to_usize()
        .filter(|&e| e <= 1 << 20)
        .ok_or_else(|| Error::CapExceeded(format!("depth {k} product is too large to expand")))?;
    Ok(norm * num_traits::pow(ratio, e))
}

/// Tree count of `V_n` by spectral decimation.
pub fn tau_decimation(s: &SubstitutionSchema, n: usize) -> Result<TreeCount> {
    let engine = SpectrumEngine::shared(s)?;
    tau_decimation_with(&engine, n)
}

pub fn tau_decimation_with(engine: &SpectrumEngine, n: usize) -> Result<TreeCount> {
    let ratio = degree_ratio(engine.schema(), n)?;
    let value = ratio.mul(&engine.eigenvalue_product(n)?);
    if value.is_negative() {
        return Err(Error::Invariant(format!("level {n}: assembled tree count {value} is negative")));
    }
    Ok(TreeCount::from_factored(n, value.to_integer()?))
}

/// Tree count from one of the oracles on the explicitly built graph.
pub fn tau_oracle(s: &SubstitutionSchema, n: usize, method: Method) -> Result<TreeCount> {
    let g = build_graph_capped(s, n, crate::fractal::build::cap_from_env(DEFAULT_VERTEX_CAP))?;
    let value = match method {
        Method::Cofactor => tau_cofactor_flagged(&g).0,
        Method::Probabilistic => tau_probabilistic_capped(&g, DEFAULT_PROBABILISTIC_CAP)?,
        Method::Decimation => return tau_decimation(s, n),
    };
    TreeCount::from_integer(n, &value)
}

pub fn tau(s: &SubstitutionSchema, n: usize, method: Method) -> Result<TreeCount> {
    match method {
        Method::Decimation => tau_decimation(s, n),
        _ => tau_oracle(s, n, method),
    }
}

/// Outcome of running every counting method on one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema: String,
    pub level: usize,
    pub decimation: String,
    pub cofactor: String,
    /// Absent when the graph is above the characteristic-polynomial cap.
    pub probabilistic: Option<String>,
    pub agree: bool,
}

/// Compares decimation with both oracles. A disagreement is an error whose
/// message carries the three values, the degree census and the spectrum.
pub fn verify(s: &SubstitutionSchema, n: usize) -> Result<VerifyReport> {
    let g = build_graph_capped(s, n, crate::fractal::build::cap_from_env(DEFAULT_VERTEX_CAP))?;
    let dec = tau_decimation(s, n)?
        .exact()
        .ok_or_else(|| Error::CapExceeded("decimation count too large to expand".into()))?;
    let cof = tau_cofactor_flagged(&g).0;
    let prob = if g.vertex_count() <= DEFAULT_PROBABILISTIC_CAP {
        Some(tau_probabilistic_capped(&g, DEFAULT_PROBABILISTIC_CAP)?)
    } else {
        None
    };
    let agree = dec == cof && prob.as_ref().is_none_or(|p| *p == cof);
    let report = VerifyReport {
        schema: s.name().to_string(),
        level: n,
        decimation: dec.to_string(),
        cofactor: cof.to_string(),
        probabilistic: prob.map(|p| p.to_string()),
        agree,
    };
    if !agree {
        let stats = degree_stats(s, n)?;
        let census: Vec<String> = stats.histogram.iter().map(|(d, c)| format!("{c}x deg {d}")).collect();
        let spectrum = SpectrumEngine::shared(s)?.spectrum(n)?;
        let classes: Vec<String> =
            spectrum.entries.iter().map(|(c, m)| format!("[{}]^{} depth {}", c.base, m, c.depth)).collect();
        return Err(Error::Mismatch(format!(
            "{} level {n}: decimation {}, cofactor {}, probabilistic {}; degrees {}; spectrum {}",
            s.name(),
            report.decimation,
            report.cofactor,
            report.probabilistic.as_deref().unwrap_or("skipped"),
            census.join(", "),
            classes.join(", ")
        )));
    }
    Ok(report)
}

/// Exponent of every prime in `tau(V_n)` for levels `0..=n_max`, as exact
/// integers.
pub fn exponent_table(engine: &SpectrumEngine, n_max: usize) -> Result<Vec<BTreeMap<BigInt, BigInt>>> {
    (0..=n_max).map(|n| Ok(tau_decimation_with(engine, n)?.factored.exponents().clone())).collect()
}
