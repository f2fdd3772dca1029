//! One line per acceptance criterion. Lines are written straight to the
//! process stdout so they show up without `--nocapture`.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use fractal_trees::algebra::poly::{rat, UniPoly};
use fractal_trees::algebra::ratfunc::RatFunc;
use fractal_trees::counting::{
    bounds_check, complexity_constant, tau_decimation_with, tau_oracle, verify, Method,
};
use fractal_trees::decimation::{charpoly_check_with, schur_extract, Origin, SpectrumEngine};
use fractal_trees::fractal::build::{degree_stats, vertex_count};
use fractal_trees::fractal::schema::{builtin, builtin_schemas};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

struct Outcome {
    pass: bool,
    detail: String,
    /// Failing only on a published value that the oracles contradict, with
    /// the independently confirmed value checked in its place.
    explained: bool,
}

impl Outcome {
    fn from(r: Result<String, String>) -> Self {
        match r {
            Ok(detail) => Outcome { pass: true, detail, explained: false },
            Err(detail) => Outcome { pass: false, detail, explained: false },
        }
    }
}

fn line(id: u32, title: &str, elapsed: Duration, o: &Outcome) {
    let status = if o.pass { "PASS" } else { "FAIL" };
    let text = format!("criterion {id}: {status}  {title} [{:.2} s]  {}\n", elapsed.as_secs_f64(), o.detail);
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn within(elapsed: Duration, limit: Duration, r: Result<String, String>) -> Result<String, String> {
    let detail = r?;
    if elapsed > limit {
        return Err(format!("{detail}; took {:.2} s, limit {:.0} s", elapsed.as_secs_f64(), limit.as_secs_f64()));
    }
    Ok(detail)
}

fn fail<E: std::fmt::Display>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> String {
    move |e| format!("{ctx}: {e}")
}

fn published_counts() -> Result<String, String> {
    let want = [
        ("sierpinski", 0, 3),
        ("sierpinski", 1, 54),
        ("nonpcf", 0, 3),
        ("nonpcf", 1, 2700),
        ("diamond", 1, 4),
        ("diamond", 2, 1024),
        ("hexagasket", 0, 3),
        ("hexagasket", 1, 2916),
    ];
    for (name, n, value) in want {
        let s = builtin(name).map_err(fail(name))?;
        let rep = verify(&s, n).map_err(fail(format!("{name} n={n}")))?;
        let value = value.to_string();
        if rep.decimation != value || rep.cofactor != value || rep.probabilistic.as_deref() != Some(value.as_str()) {
            return Err(format!("{name} n={n}: {rep:?}, expected {value}"));
        }
    }
    Ok("8 values, three methods each".into())
}

/// Every published exponent except the hexagasket's exponent of 2, which
/// is checked against the oracle-confirmed form instead.
fn closed_forms() -> (Result<String, String>, Vec<String>) {
    let mut deviations = Vec::new();
    for s in builtin_schemas() {
        let engine = match SpectrumEngine::new(&s) {
            Ok(e) => e,
            Err(e) => return (Err(format!("{}: {e}", s.name())), deviations),
        };
        for n in 0..=12 {
            let t = match tau_decimation_with(&engine, n) {
                Ok(t) => t,
                Err(e) => return (Err(format!("{} n={n}: {e}", s.name())), deviations),
            };
            for (p, want) in common::published_exponents(s.name(), n) {
                let got = t.exponent_of(p);
                if got == want {
                    continue;
                }
                if s.name() == "hexagasket" && p == 2 && got == common::hexagasket_two_exponent(n) {
                    deviations.push(format!("n={n}: {got} vs published {want}"));
                    continue;
                }
                return (Err(format!("{} n={n} p={p}: {got} vs published {want}", s.name())), deviations);
            }
        }
    }
    (Ok("52 exponent vectors".into()), deviations)
}

/// The oracles fix the hexagasket's exponent of 2 independently of the
/// decimation pipeline.
fn hexagasket_oracle_exponents() -> Result<(), String> {
    let s = builtin("hexagasket").map_err(fail("hexagasket"))?;
    for n in 2..=3 {
        for method in [Method::Cofactor, Method::Probabilistic] {
            let t = tau_oracle(&s, n, method).map_err(fail(format!("{method} n={n}")))?;
            if t.exponent_of(2) != common::hexagasket_two_exponent(n) {
                return Err(format!("{method} n={n}: exponent of 2 is {}", t.exponent_of(2)));
            }
        }
    }
    Ok(())
}

fn oracle_scale() -> Result<String, String> {
    let mut checked = 0;
    for (name, n_max) in [("sierpinski", 4), ("diamond", 5), ("hexagasket", 3), ("nonpcf", 3)] {
        let s = builtin(name).map_err(fail(name))?;
        for n in 0..=n_max {
            let rep = verify(&s, n).map_err(fail(format!("{name} n={n}")))?;
            if rep.decimation != rep.cofactor {
                return Err(format!("{name} n={n}: decimation and cofactor differ"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} levels, largest |V_5| = 684"))
}

fn published_constant(name: &str) -> Vec<(u64, BigRational)> {
    match name {
        "sierpinski" => vec![(2, rat(1, 3)), (3, rat(1, 2)), (5, rat(1, 6))],
        "nonpcf" => vec![(2, rat(11, 10)), (3, rat(1, 2)), (5, rat(1, 5))],
        "diamond" => vec![(2, rat(1, 1))],
        "hexagasket" => vec![(2, rat(2, 5)), (3, rat(8, 15)), (7, rat(1, 45))],
        _ => unreachable!(),
    }
}

fn value_of(coeffs: &[(u64, BigRational)]) -> f64 {
    use num_traits::ToPrimitive;
    coeffs.iter().map(|(p, q)| q.to_f64().unwrap() * (*p as f64).ln()).sum()
}

fn constants() -> (Result<String, String>, Vec<String>) {
    let mut deviations = Vec::new();
    for s in builtin_schemas() {
        let est = match complexity_constant(&s, 30) {
            Ok(e) => e,
            Err(e) => return (Err(format!("{}: {e}", s.name())), deviations),
        };
        let Some(coeffs) = est.per_prime_coefficients.clone() else {
            return (Err(format!("{}: not rationalized (residual {:.1e})", s.name(), est.residual)), deviations);
        };
        let got: Vec<(u64, BigRational)> =
            coeffs.iter().map(|(p, q)| (u64::try_from(p).unwrap(), q.clone())).collect();
        let want = published_constant(s.name());
        if (est.numeric - value_of(&got)).abs() > 1e-9 {
            return (Err(format!("{}: numeric {} disagrees with its rational form", s.name(), est.numeric)), deviations);
        }
        if got == want {
            continue;
        }
        let corrected: Vec<(u64, BigRational)> =
            want.iter().map(|(p, q)| if *p == 2 { (2, rat(2, 9)) } else { (*p, q.clone()) }).collect();
        if s.name() == "hexagasket" && got == corrected {
            deviations.push(format!(
                "log 2 coefficient 2/9 vs published 2/5 (c = {:.9} vs {:.9})",
                est.numeric,
                value_of(&want)
            ));
            continue;
        }
        return (Err(format!("{}: {got:?} vs published {want:?}", s.name())), deviations);
    }
    (Ok("4 constants rationalized".into()), deviations)
}

fn ratfunc(num: &[i64], den: &[i64]) -> RatFunc {
    RatFunc::new(UniPoly::from_ints(num), UniPoly::from_ints(den)).unwrap()
}

fn roots(qs: &[(i64, i64)]) -> Vec<UniPoly> {
    qs.iter().map(|&(a, b)| UniPoly::linear_root(rat(a, b))).collect()
}

fn extraction() -> Result<String, String> {
    let hex_quadratic = UniPoly::new(vec![rat(7, 16), rat(-3, 2), rat(1, 1)]);
    let cases: Vec<(&str, RatFunc, Vec<UniPoly>, Vec<UniPoly>)> = vec![
        ("sierpinski", ratfunc(&[0, 5, -4], &[1]), roots(&[(3, 2)]), roots(&[(3, 4), (5, 4)])),
        (
            "nonpcf",
            ratfunc(&[0, -72, 120, -48], &[-15, 14]),
            roots(&[(3, 2)]),
            roots(&[(3, 4), (5, 4), (1, 2), (1, 1)]),
        ),
        ("diamond", ratfunc(&[0, 4, -2], &[1]), roots(&[(2, 1)]), roots(&[(1, 1)])),
        ("hexagasket", ratfunc(&[0, -14, 62, -80, 32], &[-1, 2]), roots(&[(3, 2)]), {
            let mut b = roots(&[(1, 1), (1, 4), (3, 4)]);
            b.push(hex_quadratic);
            b
        }),
    ];
    for (name, r, a, b) in cases {
        let s = builtin(name).map_err(fail(name))?;
        // schur_extract itself refuses unless S = phi (P_0 - R I) entrywise
        let dd = schur_extract(&s).map_err(fail(name))?;
        if dd.r != r {
            return Err(format!("{name}: R = {} vs {r}", dd.r));
        }
        let n0 = dd.boundary_size;
        let off = RatFunc::constant(-BigRational::one() / BigRational::from_integer(BigInt::from(n0 - 1)));
        for i in 0..n0 {
            for j in 0..n0 {
                let p0 = if i == j { RatFunc::one() } else { off.clone() };
                let want = if i == j { &dd.phi * &(&p0 - &dd.r) } else { &dd.phi * &p0 };
                if dd.schur.get(i, j) != &want {
                    return Err(format!("{name}: S[{i}][{j}] differs from phi (P_0 - R I)"));
                }
            }
        }
        let labels = SpectrumEngine::new(&s).and_then(|e| e.labelled_classes()).map_err(fail(name))?;
        let set = |o: Origin| {
            let mut v: Vec<UniPoly> = labels.iter().filter(|(_, l)| *l == o).map(|(f, _)| f.clone()).collect();
            v.sort_by_key(|f| f.to_string());
            v
        };
        let sorted = |mut v: Vec<UniPoly>| {
            v.sort_by_key(|f| f.to_string());
            v
        };
        if set(Origin::A) != sorted(a) || set(Origin::B) != sorted(b) {
            return Err(format!("{name}: A = {:?}, B = {:?}", set(Origin::A), set(Origin::B)));
        }
    }
    Ok("4 maps, A/B sets and the entrywise identity".into())
}

fn properties() -> Result<String, String> {
    common::cofactor_matches_probabilistic(100).map_err(fail("cofactor vs probabilistic"))?;
    common::wedge_is_multiplicative(50).map_err(fail("wedge"))?;
    common::deletion_contraction_holds(50).map_err(fail("deletion-contraction"))?;
    common::cayley_holds(8).map_err(fail("Cayley"))?;
    let pairs = common::preiterate_products_hold(3).map_err(fail("preiterate products"))?;
    Ok(format!("100 + 50 + 50 random cases, K_1..K_8, {pairs} (class, depth) products"))
}

fn invariants() -> Result<String, String> {
    let mut slowest = 0.0f64;
    for s in builtin_schemas() {
        let start = Instant::now();
        let engine = SpectrumEngine::new(&s).map_err(fail(s.name()))?;
        for n in 0..=40 {
            let sp = engine.spectrum(n).map_err(fail(format!("{} n={n}", s.name())))?;
            let size = vertex_count(&s, n);
            // P_n has unit diagonal, so its trace is |V_n|
            if sp.total_degree() != size
                || sp.trace() != BigRational::from_integer(size.clone())
                || !sp.zero_multiplicity().is_one()
            {
                return Err(format!("{} n={n}: invariant fails", s.name()));
            }
        }
        for n in 0..=3 {
            if !charpoly_check_with(&engine, n).map_err(fail(format!("{} n={n}", s.name())))? {
                return Err(format!("{} n={n}: characteristic polynomial differs", s.name()));
            }
        }
        let t = start.elapsed().as_secs_f64();
        if t > 30.0 {
            return Err(format!("{} took {t:.1} s", s.name()));
        }
        slowest = slowest.max(t);
    }
    Ok(format!("n <= 40 and charpoly n <= 3, slowest schema {slowest:.2} s"))
}

fn bounds() -> Result<String, String> {
    let mut checked = 0;
    for s in builtin_schemas() {
        let engine = SpectrumEngine::new(&s).map_err(fail(s.name()))?;
        for n in 0..=30 {
            let t = tau_decimation_with(&engine, n).map_err(fail(format!("{} n={n}", s.name())))?;
            bounds_check(&s, n, &t).map_err(fail(format!("{} n={n}", s.name())))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (schema, level) pairs, n <= 30"))
}

fn performance() -> Result<String, String> {
    let mut worst = (0.0f64, 0.0f64);
    for s in builtin_schemas() {
        let start = Instant::now();
        let engine = SpectrumEngine::new(&s).map_err(fail(s.name()))?;
        tau_decimation_with(&engine, 30).map_err(fail(s.name()))?;
        let count = start.elapsed().as_secs_f64();
        let start = Instant::now();
        degree_stats(&s, 40).map_err(fail(s.name()))?;
        let census = start.elapsed().as_secs_f64();
        if count >= 1.0 || census >= 1.0 {
            return Err(format!("{}: count {count:.3} s, census {census:.3} s", s.name()));
        }
        worst = (worst.0.max(count), worst.1.max(census));
    }
    Ok(format!("slowest n=30 count {:.3} s, slowest n=40 census {:.3} s", worst.0, worst.1))
}

#[test]
fn acceptance() {
    let _ = std::io::stdout().lock().write_all(b"\n");
    let mut outcomes = Vec::new();
    let mut run = |id: u32, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        line(id, title, start.elapsed(), &o);
        outcomes.push((id, o));
    };

    run(1, "published tree counts", &mut || {
        let start = Instant::now();
        let r = published_counts();
        Outcome::from(within(start.elapsed(), Duration::from_secs(60), r))
    });
    run(2, "closed-form exponents, n <= 12", &mut || {
        let start = Instant::now();
        let (r, deviations) = closed_forms();
        let r = within(start.elapsed(), Duration::from_secs(60), r);
        match (r, deviations.is_empty()) {
            (Err(e), _) => Outcome::from(Err(e)),
            (Ok(d), true) => Outcome::from(Ok(d)),
            (Ok(_), false) => {
                let confirmed = hexagasket_oracle_exponents();
                Outcome {
                    pass: false,
                    explained: confirmed.is_ok(),
                    detail: format!(
                        "hexagasket exponent of 2 disagrees with the published formula at {} levels ({}); \
                         cofactor and probabilistic give 2(6^n - 1)/5 at n = 2, 3{}; every other exponent matches",
                        deviations.len(),
                        deviations.iter().take(2).cloned().collect::<Vec<_>>().join(", "),
                        confirmed.err().map(|e| format!(" [oracle check failed: {e}]")).unwrap_or_default()
                    ),
                }
            }
        }
    });
    run(3, "decimation = cofactor at scale", &mut || {
        let start = Instant::now();
        let r = oracle_scale();
        Outcome::from(within(start.elapsed(), Duration::from_secs(300), r))
    });
    run(4, "complexity constants, n_max = 30, tol 1e-9", &mut || {
        let start = Instant::now();
        let (r, deviations) = constants();
        let r = within(start.elapsed(), Duration::from_secs(10), r);
        match (r, deviations.is_empty()) {
            (Err(e), _) => Outcome::from(Err(e)),
            (Ok(d), true) => Outcome::from(Ok(d)),
            (Ok(_), false) => Outcome {
                pass: false,
                explained: hexagasket_oracle_exponents().is_ok(),
                detail: format!(
                    "hexagasket {}; follows from the exponent of 2 in criterion 2; the other three constants match",
                    deviations.join(", ")
                ),
            },
        }
    });
    run(5, "R extraction and A/B sets", &mut || Outcome::from(extraction()));
    run(6, "property suites", &mut || Outcome::from(properties()));
    run(7, "spectral invariants", &mut || Outcome::from(invariants()));
    run(8, "tree count bounds", &mut || Outcome::from(bounds()));
    run(9, "performance", &mut || Outcome::from(performance()));

    let unexplained: Vec<String> = outcomes
        .iter()
        .filter(|(_, o)| !o.pass && !o.explained)
        .map(|(id, o)| format!("criterion {id}: {}", o.detail))
        .collect();
    assert!(unexplained.is_empty(), "{}", unexplained.join("\n"));
}
