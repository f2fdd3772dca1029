//! Reference formulas and randomized graph suites shared by the integration
//! tests and the acceptance harness.
#![allow(dead_code)]

use fractal_trees::algebra::poly::{rat, UniPoly};
use fractal_trees::counting::preiterate_product;
use fractal_trees::decimation::{SpectralMultiset, SpectrumEngine};
use fractal_trees::fractal::graph::Multigraph;
use fractal_trees::fractal::schema::builtin_schemas;
use fractal_trees::matrix_tree::{cayley, tau_cofactor, tau_deletion_contraction, tau_probabilistic};
use fractal_trees::algebra::preimage_poly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_2024;

fn pw(b: i64, e: i64) -> BigInt {
    if e < 0 {
        return BigInt::zero();
    }
    num_traits::pow(BigInt::from(b), e as usize)
}

fn exact_div(num: BigInt, den: i64) -> BigInt {
    let d = BigInt::from(den);
    assert!((&num % &d).is_zero(), "{num} not divisible by {den}");
    num / d
}

/// Exponent vectors `(prime, exponent)` of the published closed forms.
pub fn published_exponents(name: &str, n: usize) -> Vec<(u64, BigInt)> {
    let k = n as i64;
    match name {
        "sierpinski" => vec![
            (2, exact_div(pw(3, k) - 1, 2)),
            (3, exact_div(pw(3, k + 1) + 2 * k + 1, 4)),
            (5, exact_div(pw(3, k) - 2 * k - 1, 4)),
        ],
        "nonpcf" => vec![
            (2, exact_div((pw(6, k) * 11 - 30 * k - 11) * 2, 25)),
            (3, exact_div(pw(6, k) * 2 + 3, 5)),
            (5, exact_div(pw(6, k) * 4 + 30 * k - 4, 25)),
        ],
        "diamond" => vec![(2, exact_div((pw(4, k) - 1) * 2, 3))],
        "hexagasket" => vec![
            (2, exact_div(pw(6, k + 1) * 27 - pw(4, k) * 100 - 60 * k - 62, 225)),
            (3, exact_div(pw(6, k + 1) * 4 + 5 * k + 1, 25)),
            (7, exact_div(pw(6, k) - 5 * k - 1, 25)),
        ],
        other => panic!("no closed form for {other}"),
    }
}

/// Exponent of 2 in the hexagasket count, as established by both oracles.
pub fn hexagasket_two_exponent(n: usize) -> BigInt {
    exact_div((pw(6, n as i64) - 1) * 2, 5)
}

/// A class given by a rational root or by a monic quadratic.
pub fn class(coeffs: &[(i64, i64)]) -> UniPoly {
    if coeffs.len() == 1 {
        UniPoly::linear_root(rat(coeffs[0].0, coeffs[0].1))
    } else {
        UniPoly::new(coeffs.iter().map(|&(a, b)| rat(a, b)).collect())
    }
}

pub type Family = (UniPoly, fn(usize, usize) -> BigInt);

/// Published multiplicity of the depth-`k` preiterates of a class at level
/// `n` (`k = 0` is the class itself), for `n >= 2`.
pub fn published_families(name: &str) -> Vec<Family> {
    fn j(n: usize, k: usize) -> i64 {
        n as i64 - k as i64
    }
    match name {
        "sierpinski" => vec![
            (class(&[(3, 2)]), |n, k| if k == 0 { exact_div(pw(3, n as i64) + 3, 2) } else { BigInt::zero() }),
            (class(&[(3, 4)]), |n, k| if k < n { exact_div(pw(3, j(n, k) - 1) + 3, 2) } else { BigInt::zero() }),
            (class(&[(5, 4)]), |n, k| if k + 1 < n { exact_div(pw(3, j(n, k) - 1) - 1, 2) } else { BigInt::zero() }),
        ],
        "nonpcf" => {
            fn edge(n: usize, k: usize) -> BigInt {
                match j(n, k) {
                    0 => BigInt::zero(),
                    1 => BigInt::from(2),
                    m => pw(6, m - 2) + 1,
                }
            }
            vec![
                (class(&[(3, 2)]), |n, k| if k == 0 { pw(6, n as i64 - 1) + 1 } else { BigInt::zero() }),
                (class(&[(3, 4)]), edge),
                (class(&[(5, 4)]), edge),
                (class(&[(1, 2)]), |n, k| {
                    if k + 1 < n { exact_div(pw(6, j(n, k) - 2) * 11 - 6, 5) } else { BigInt::zero() }
                }),
                (class(&[(1, 1)]), |n, k| if k + 1 < n { exact_div(pw(6, j(n, k)) - 6, 5) } else { BigInt::zero() }),
            ]
        }
        "diamond" => vec![
            (class(&[(2, 1)]), |_, k| if k == 0 { BigInt::one() } else { BigInt::zero() }),
            (class(&[(1, 1)]), |n, k| if k < n { exact_div(pw(4, j(n, k)) + 2, 3) } else { BigInt::zero() }),
        ],
        "hexagasket" => {
            fn quarter(n: usize, k: usize) -> BigInt {
                if k < n { exact_div(pw(6, j(n, k) - 1) * 4 + 6, 5) } else { BigInt::zero() }
            }
            fn irrational(n: usize, k: usize) -> BigInt {
                if k + 1 < n { exact_div(pw(6, j(n, k) - 1) - 1, 5) } else { BigInt::zero() }
            }
            vec![
                (class(&[(3, 2)]), |n, k| if k == 0 { exact_div(pw(6, n as i64) * 4 + 6, 5) } else { BigInt::zero() }),
                (class(&[(1, 1)]), |n, k| if k < n { BigInt::one() } else { BigInt::zero() }),
                (class(&[(1, 4)]), quarter),
                (class(&[(3, 4)]), quarter),
                (class(&[(7, 16), (-3, 2), (1, 1)]), irrational),
            ]
        }
        other => panic!("no families for {other}"),
    }
}

/// Multiplicity of the depth-`k` block over `base` in a spectrum.
pub fn block_multiplicity(spec: &SpectralMultiset, base: &UniPoly, k: usize) -> BigInt {
    spec.entries.iter().filter(|(c, _)| &c.base == base && c.depth == k).map(|(_, m)| m.clone()).sum()
}

/// First disagreement with the published families at levels `2..=n_max`.
pub fn check_families(name: &str, engine: &SpectrumEngine, n_max: usize) -> Result<(), String> {
    for n in 2..=n_max {
        let spec = engine.spectrum(n).map_err(|e| e.to_string())?;
        for (base, f) in published_families(name) {
            for k in 0..=n {
                let (got, want) = (block_multiplicity(&spec, &base, k), f(n, k));
                if got != want {
                    return Err(format!("{name} n={n} [{base}] depth {k}: {got} != {want}"));
                }
            }
        }
    }
    Ok(())
}

/// A connected multigraph on `2..=max_n` vertices: a random spanning tree
/// plus random extra edges, multiplicities up to 3.
pub fn random_connected(rng: &mut ChaCha8Rng, max_n: usize) -> Multigraph {
    let n = rng.random_range(2..=max_n);
    let mut g = Multigraph::new(n, vec![]).unwrap();
    for v in 1..n {
        let u = rng.random_range(0..v);
        g.add_edge(u, v, rng.random_range(1..=3)).unwrap();
    }
    let extra = rng.random_range(0..=n * (n - 1) / 2);
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            g.add_edge(u, v, rng.random_range(1..=2)).unwrap();
        }
    }
    g
}

pub fn cofactor_matches_probabilistic(cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..cases {
        let g = random_connected(&mut rng, 12);
        let (a, b) = (tau_cofactor(&g), tau_probabilistic(&g).map_err(|e| e.to_string())?);
        if a != b || !a.is_positive() {
            return Err(format!("case {i}: cofactor {a}, probabilistic {b}"));
        }
    }
    Ok(())
}

pub fn wedge_is_multiplicative(cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for i in 0..cases {
        let g = random_connected(&mut rng, 7);
        let h = random_connected(&mut rng, 7);
        let (a, b) = (rng.random_range(0..g.vertex_count()), rng.random_range(0..h.vertex_count()));
        let w = g.wedge(&h, a, b).map_err(|e| e.to_string())?;
        if tau_cofactor(&w) != tau_cofactor(&g) * tau_cofactor(&h) {
            return Err(format!("case {i}: wedge count is not the product"));
        }
    }
    Ok(())
}

pub fn deletion_contraction_holds(cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for i in 0..cases {
        let g = random_connected(&mut rng, 10);
        let edges: Vec<(usize, usize, u64)> = g.edges().collect();
        let (u, v, _) = edges[rng.random_range(0..edges.len())];
        let dc = tau_deletion_contraction(&g, u, v).map_err(|e| e.to_string())?;
        if dc != tau_cofactor(&g) {
            return Err(format!("case {i}: edge ({u}, {v}) gives {dc}"));
        }
    }
    Ok(())
}

pub fn cayley_holds(max_n: usize) -> Result<(), String> {
    for n in 1..=max_n {
        let g = Multigraph::complete(n);
        let p = tau_probabilistic(&g).map_err(|e| e.to_string())?;
        if tau_cofactor(&g) != cayley(n) || p != cayley(n) {
            return Err(format!("K_{n}"));
        }
    }
    Ok(())
}

/// The closed-form root product of the depth-`k` preiterates against the
/// constant term of the preimage polynomial, for every labelled class of
/// every built-in. Agreement is up to sign.
pub fn preiterate_products_hold(max_k: usize) -> Result<usize, String> {
    let mut checked = 0;
    for s in builtin_schemas() {
        let engine = SpectrumEngine::new(&s).map_err(|e| e.to_string())?;
        let r = &engine.data().r;
        for (class, _) in engine.labelled_classes().map_err(|e| e.to_string())? {
            for k in 0..=max_k {
                let p = preimage_poly(r, &class, k).map_err(|e| e.to_string())?;
                let product = p.root_product();
                let formula = preiterate_product(r, &class, k).map_err(|e| e.to_string())?;
                if product.abs() != formula.abs() {
                    return Err(format!("{} [{class}] k={k}: {product} vs {formula}", s.name()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}
