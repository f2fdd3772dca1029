use std::time::Instant;

use fractal_trees::counting::{self, complexity_constant, Method, PrimeExponents, TreeCount};
use fractal_trees::decimation::SpectrumEngine;
use fractal_trees::error::Error;
use fractal_trees::fractal::build::{build_graph_capped, cap_from_env, vertex_count, vertex_count_usize, DEFAULT_VERTEX_CAP};
use fractal_trees::fractal::schema::{builtin_schemas, validate_schema, SubstitutionSchema};
use fractal_trees::matrix_tree::DEFAULT_PROBABILISTIC_CAP;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::Failure;

/// Decimation results are checked against the cofactor oracle up to this
/// many vertices, unless the environment cap is lower.
pub const AUTO_CHECK_VERTICES: usize = 700;

/// Counts with at most this many digits are printed in full.
const INLINE_DIGITS: u64 = 60;

pub struct Output {
    pub json: bool,
    pub verbose: bool,
}

impl Output {
    fn emit<T: Serialize>(&self, value: &T) {
        println!("{}", serde_json::to_string(value).expect("output serializes"));
    }

    fn note(&self, msg: &str) {
        if self.verbose {
            eprintln!("{msg}");
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    Cofactor,
    Probabilistic,
}

impl Oracle {
    fn method(self) -> Method {
        match self {
            Oracle::Cofactor => Method::Cofactor,
            Oracle::Probabilistic => Method::Probabilistic,
        }
    }
}

#[derive(Serialize)]
struct ListEntry {
    name: String,
    num_cells: usize,
    boundary_size: usize,
    v1_vertices: usize,
    fully_symmetric: bool,
}

pub fn list(out: &Output) -> Result<(), Failure> {
    let entries: Vec<ListEntry> = builtin_schemas()
        .iter()
        .map(|s| ListEntry {
            name: s.name().to_string(),
            num_cells: s.num_cells(),
            boundary_size: s.boundary_size(),
            v1_vertices: s.v1().vertex_count(),
            fully_symmetric: validate_schema(s).full_symmetry,
        })
        .collect();
    if out.json {
        out.emit(&entries);
        return Ok(());
    }
    println!("{:<12} {:>3} {:>3} {:>6}  symmetric", "name", "m", "N0", "|V_1|");
    for e in &entries {
        println!(
            "{:<12} {:>3} {:>3} {:>6}  {}",
            e.name,
            e.num_cells,
            e.boundary_size,
            e.v1_vertices,
            if e.fully_symmetric { "yes" } else { "no" }
        );
    }
    Ok(())
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

pub fn validate(out: &Output, s: &SubstitutionSchema) -> Result<(), Failure> {
    let report = validate_schema(s);
    let valid = report.is_valid();
    if out.json {
        if valid {
            out.emit(&report);
        }
    } else {
        println!("cell cover:      {}", mark(report.cell_cover));
        println!("fixed points:    {}", mark(report.fixed_points));
        println!("connected:       {}", mark(report.connected));
        println!("full symmetry:   {}", mark(report.full_symmetry));
        println!("boundary first:  {}", mark(report.boundary_first));
        for m in &report.messages {
            println!("  {m}");
        }
        println!("decimation eligible: {}", if report.decimation_eligible() { "yes" } else { "no" });
    }
    if valid {
        Ok(())
    } else {
        Err(Failure::Invalid(report.messages.join("; ")))
    }
}

pub fn graph(out: &Output, s: &SubstitutionSchema, n: usize, dot: bool) -> Result<(), Failure> {
    let g = build_graph_capped(s, n, cap_from_env(DEFAULT_VERTEX_CAP))?;
    if dot && !out.json {
        print!("{}", g.to_dot(&format!("{}_{n}", s.name())));
    } else {
        out.emit(&g.to_level_json(n));
    }
    Ok(())
}

/// `2^4 · 3^8 · 5^1 = 524880`, or just the value for a prime.
fn render(t: &TreeCount, exact: bool) -> Result<String, Error> {
    let factored = t.factored.to_string();
    let value = if exact {
        Some(t.exact().ok_or_else(|| Error::CapExceeded(format!("tau(V_{}) has too many digits to expand", t.level)))?)
    } else if t.exact_available && t.digits() <= INLINE_DIGITS {
        t.exact()
    } else {
        None
    };
    let exps = t.factored.exponents();
    let single_prime = exps.is_empty() || (exps.len() == 1 && exps.values().all(|e| e.is_one()));
    Ok(match value {
        Some(v) if single_prime => v.to_string(),
        Some(v) => format!("{factored} = {v}"),
        None => format!("{factored} ≈ 10^{:.3} ({} digits)", t.log_value / std::f64::consts::LN_10, t.digits()),
    })
}

fn auto_check_limit() -> usize {
    AUTO_CHECK_VERTICES.min(cap_from_env(DEFAULT_VERTEX_CAP))
}

pub fn count(out: &Output, s: &SubstitutionSchema, n: usize, oracle: Option<Oracle>, exact: bool) -> Result<(), Failure> {
    let start = Instant::now();
    let (method, t) = match oracle {
        Some(o) => (o.method(), counting::tau_oracle(s, n, o.method())?),
        None => {
            let t = counting::tau_decimation(s, n)?;
            if vertex_count_usize(s, n).is_some_and(|v| v <= auto_check_limit()) {
                let c = counting::tau_oracle(s, n, Method::Cofactor)?;
                if c.factored != t.factored {
                    return Err(Error::Mismatch(format!(
                        "{} level {n}: decimation {} but cofactor {}",
                        s.name(),
                        t.factored,
                        c.factored
                    ))
                    .into());
                }
                out.note("cofactor cross-check agrees");
            }
            (Method::Decimation, t)
        }
    };
    out.note(&format!("{method} took {:.3} s", start.elapsed().as_secs_f64()));
    if out.json {
        if exact && t.exact().is_none() {
            return Err(Error::CapExceeded(format!("tau(V_{n}) has too many digits to expand")).into());
        }
        out.emit(&t.to_json(s.name(), method, exact || t.digits() <= INLINE_DIGITS));
    } else {
        println!("{}", render(&t, exact)?);
    }
    Ok(())
}

fn print_report(rep: &counting::VerifyReport, s: &SubstitutionSchema) {
    println!("decimation:    {}", rep.decimation);
    println!("cofactor:      {}", rep.cofactor);
    match &rep.probabilistic {
        Some(p) => println!("probabilistic: {p}"),
        None => println!("probabilistic: skipped (|V_{}| = {} > {DEFAULT_PROBABILISTIC_CAP})", rep.level, vertex_count(s, rep.level)),
    }
    println!("{}", if rep.probabilistic.is_some() { "all methods agree" } else { "decimation and cofactor agree" });
}

pub fn count_all(out: &Output, s: &SubstitutionSchema, n: usize) -> Result<(), Failure> {
    let rep = counting::verify(s, n)?;
    if out.json {
        out.emit(&rep);
        return Ok(());
    }
    let t = counting::tau_decimation(s, n)?;
    println!("{}", render(&t, false)?);
    print_report(&rep, s);
    Ok(())
}

pub fn verify(out: &Output, s: &SubstitutionSchema, n: usize) -> Result<(), Failure> {
    let start = Instant::now();
    let rep = counting::verify(s, n)?;
    out.note(&format!("verify took {:.3} s", start.elapsed().as_secs_f64()));
    if out.json {
        out.emit(&rep);
    } else {
        println!("{} level {n}", s.name());
        print_report(&rep, s);
    }
    Ok(())
}

pub fn spectrum(out: &Output, s: &SubstitutionSchema, n: usize) -> Result<(), Failure> {
    let spec = SpectrumEngine::shared(s)?.spectrum(n)?;
    if out.json {
        out.emit(&spec.to_json());
        return Ok(());
    }
    println!("level {n}: |V_n| = {}, {} classes", spec.vertex_count, spec.entries.len());
    println!("{:<6} {:>5}  {:>24}  minimal polynomial", "origin", "depth", "multiplicity");
    for (c, m) in &spec.entries {
        println!("{:<6} {:>5}  {:>24}  {}", c.origin.as_str(), c.depth, m.to_string(), c.base);
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstantJson {
    schema: String,
    n_max: usize,
    numeric: f64,
    residual: f64,
    rationalized: bool,
    coefficients: Option<PrimeExponents>,
}

pub fn constant(out: &Output, s: &SubstitutionSchema, n_max: usize) -> Result<(), Failure> {
    let start = Instant::now();
    let est = complexity_constant(s, n_max)?;
    out.note(&format!("constant took {:.3} s", start.elapsed().as_secs_f64()));
    if out.json {
        let coefficients = est
            .per_prime_coefficients
            .as_ref()
            .map(|c| PrimeExponents(c.iter().map(|(p, q)| (p.to_string(), q.to_string())).collect()));
        out.emit(&ConstantJson {
            schema: s.name().to_string(),
            n_max,
            numeric: est.numeric,
            residual: est.residual,
            rationalized: est.rationalized(),
            coefficients,
        });
        return Ok(());
    }
    match &est.per_prime_coefficients {
        Some(coeffs) => {
            let terms: Vec<String> = coeffs
                .iter()
                .filter(|(_, q)| !q.is_zero())
                .map(|(p, q)| if q.is_one() { format!("log {p}") } else { format!("{q}·log {p}") })
                .collect();
            let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            println!("{lhs} ≈ {:.6}", est.numeric);
        }
        None => println!("≈ {:.6} (no rational form found, residual {:.1e})", est.numeric, est.residual),
    }
    Ok(())
}
