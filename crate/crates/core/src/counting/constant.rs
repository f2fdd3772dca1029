//! The limit of `ln tau(V_n) / |V_n|`, estimated per prime from the exact
//! exponent sequences.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::tau_decimation_with;
use crate::algebra::integer::ln_big;
use crate::algebra::poly::rat_to_f64;
use crate::decimation::SpectrumEngine;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantOptions {
    pub n_max: usize,
    /// Consecutive estimates must agree this closely to be rationalized.
    pub tolerance: f64,
    pub max_denominator: u64,
}

impl Default for ConstantOptions {
    fn default() -> Self {
        ConstantOptions { n_max: 30, tolerance: 1e-12, max_denominator: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityEstimate {
    pub numeric: f64,
    /// Limit of `exponent_p(n) / |V_n|` for each prime, when every prime's
    /// limit was rationalized.
    pub per_prime_coefficients: Option<BTreeMap<BigInt, BigRational>>,
    pub n_used: usize,
    pub residual: f64,
    /// `ln tau(V_n) / |V_n|` for `n = 0..=n_used`.
    pub sequence: Vec<f64>,
}

impl ComplexityEstimate {
    pub fn rationalized(&self) -> bool {
        self.per_prime_coefficients.is_some()
    }
}

/// Aitken's delta-squared transform; entries with a vanishing second
/// difference are passed through.
fn aitken(xs: &[BigRational]) -> Vec<BigRational> {
    xs.windows(3)
        .map(|w| {
            let d1 = &w[2] - &w[1];
            let d2 = &d1 - (&w[1] - &w[0]);
            if d2.is_zero() {
                w[2].clone()
            } else {
                &w[2] - &d1 * &d1 / d2
            }
        })
        .collect()
}

/// Last continued-fraction convergent of `x` with denominator at most
/// `max_den`.
pub fn rationalize(x: &BigRational, max_den: u64) -> BigRational {
    let bound = BigInt::from(max_den);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > bound {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    if k1.is_zero() {
        return x.round();
    }
    BigRational::new(h1, k1)
}

struct PrimeLimit {
    estimate: BigRational,
    spread: f64,
    exact: Option<BigRational>,
}

fn prime_limit(ratios: &[BigRational], opts: &ConstantOptions) -> PrimeLimit {
    let mut level = ratios.to_vec();
    let mut best: Option<PrimeLimit> = None;
    for _ in 0..3 {
        if level.len() < 2 {
            break;
        }
        let (a, b) = (&level[level.len() - 2], &level[level.len() - 1]);
        let spread = rat_to_f64(&(b - a)).abs();
        let qa = rationalize(a, opts.max_denominator);
        let qb = rationalize(b, opts.max_denominator);
        let exact = (spread < opts.tolerance && qa == qb && rat_to_f64(&(b - &qb)).abs() < opts.tolerance).then_some(qb);
        let candidate = PrimeLimit { estimate: b.clone(), spread, exact };
        if candidate.exact.is_some() {
            return candidate;
        }
        if best.as_ref().is_none_or(|p| candidate.spread < p.spread) {
            best = Some(candidate);
        }
        level = aitken(&level);
    }
    best.unwrap_or(PrimeLimit { estimate: BigRational::zero(), spread: f64::INFINITY, exact: None })
}

/// Estimates the asymptotic complexity constant with the default options.
pub fn complexity_constant(s: &crate::fractal::schema::SubstitutionSchema, n_max: usize) -> Result<ComplexityEstimate> {
    let opts = ConstantOptions { n_max, ..ConstantOptions::default() };
    let engine = SpectrumEngine::shared(s)?;
    complexity_constant_with(&engine, &opts)
}

pub fn complexity_constant_with(engine: &SpectrumEngine, opts: &ConstantOptions) -> Result<ComplexityEstimate> {
    let mut exps = Vec::with_capacity(opts.n_max + 1);
    let mut sizes = Vec::with_capacity(opts.n_max + 1);
    let mut sequence = Vec::with_capacity(opts.n_max + 1);
    for n in 0..=opts.n_max {
        let t = tau_decimation_with(engine, n)?;
        let size = engine.vertex_count(n)?;
        sequence.push(t.log_value / size.to_f64().unwrap_or(f64::INFINITY));
        exps.push(t.factored.exponents().clone());
        sizes.push(size);
    }
    let primes: Vec<BigInt> = {
        let mut ps: Vec<BigInt> = exps.iter().flat_map(|e| e.keys().cloned()).collect();
        ps.sort();
        ps.dedup();
        ps
    };

    let mut coefficients = BTreeMap::new();
    let mut all_exact = true;
    let mut numeric = 0.0;
    let mut residual = 0.0;
    for p in &primes {
        let ratios: Vec<BigRational> = exps
            .iter()
            .zip(&sizes)
            .map(|(e, v)| BigRational::new(e.get(p).cloned().unwrap_or_default(), v.clone()))
            .collect();
        let lim = prime_limit(&ratios, opts);
        let lp = ln_big(p);
        residual += lim.spread * lp;
        match lim.exact {
            Some(q) => {
                numeric += rat_to_f64(&q) * lp;
                residual += rat_to_f64(&(&q - &lim.estimate)).abs() * lp;
                coefficients.insert(p.clone(), q);
            }
            None => {
                all_exact = false;
                numeric += rat_to_f64(&lim.estimate) * lp;
            }
        }
    }
    Ok(ComplexityEstimate {
        numeric,
        per_prime_coefficients: all_exact.then_some(coefficients),
        n_used: opts.n_max,
        residual,
        sequence,
    })
}
