use num_traits::ToPrimitive;
use serde::Serialize;

use super::TreeCount;
use crate::algebra::integer::ln_big;
use crate::error::{Error, Result};
use crate::fractal::build::vertex_count;
use crate::fractal::schema::SubstitutionSchema;

/// Both sides of `num_cells^n (N0 - 2) ln N0 <= ln tau(V_n) <= (|V_n| - 2) ln |V_n|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub level: usize,
    pub lower: f64,
    pub log_tau: f64,
    pub upper: f64,
    /// `V_1` is itself a tree, so every `V_n` is and `tau = 1`.
    pub tree: bool,
}

/// Checks the growth bounds for one level; a violation is an error.
pub fn bounds_check(s: &SubstitutionSchema, n: usize, tau: &TreeCount) -> Result<BoundsReport> {
    let v1 = s.v1();
    let tree = v1.edge_count() + 1 == v1.vertex_count() as u64;
    let log_tau = tau.log_value;
    if tree {
        if log_tau != 0.0 {
            return Err(Error::Invariant(format!("level {n}: tree-like schema has log tau = {log_tau}")));
        }
        return Ok(BoundsReport { level: n, lower: 0.0, log_tau, upper: 0.0, tree });
    }
    let n0 = s.boundary_size() as f64;
    let cells = (s.num_cells() as f64).powi(n as i32);
    let lower = cells * (n0 - 2.0) * n0.ln();
    let size = vertex_count(s, n);
    let upper = (size.to_f64().unwrap_or(f64::INFINITY) - 2.0) * ln_big(&size);
    let slack = 1e-12 * lower.abs().max(upper.abs()).max(1.0);
    if log_tau + slack < lower || log_tau > upper + slack {
        return Err(Error::Invariant(format!(
            "level {n}: log tau = {log_tau} outside [{lower}, {upper}]"
        )));
    }
    Ok(BoundsReport { level: n, lower, log_tau, upper, tree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::tau_decimation;
    use crate::fractal::schema::{diamond, sierpinski};

    #[test]
    fn sierpinski_level_three() {
        let t = tau_decimation(&sierpinski(), 3).unwrap();
        let r = bounds_check(&sierpinski(), 3, &t).unwrap();
        assert!((r.lower - 27.0 * 3f64.ln()).abs() < 1e-9);
        assert!((r.upper - 40.0 * 42f64.ln()).abs() < 1e-9);
        assert!(r.lower <= r.log_tau && r.log_tau <= r.upper);
    }

    #[test]
    fn base_level_is_tight() {
        let t = tau_decimation(&sierpinski(), 0).unwrap();
        let r = bounds_check(&sierpinski(), 0, &t).unwrap();
        assert!((r.lower - r.log_tau).abs() < 1e-12);
    }

    #[test]
    fn diamond_level_two() {
        let t = tau_decimation(&diamond(), 2).unwrap();
        let r = bounds_check(&diamond(), 2, &t).unwrap();
        assert!((r.log_tau - 10.0 * 2f64.ln()).abs() < 1e-9);
        assert!((r.upper - 10.0 * 12f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn violation_is_reported() {
        let mut t = tau_decimation(&sierpinski(), 3).unwrap();
        t.log_value = 1e6;
        assert!(bounds_check(&sierpinski(), 3, &t).is_err());
    }
}
