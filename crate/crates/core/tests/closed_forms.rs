mod common;

use fractal_trees::counting::{tau_decimation_with, tau_oracle, Method};
use fractal_trees::decimation::SpectrumEngine;
use fractal_trees::fractal::build::vertex_count;
use fractal_trees::fractal::schema::{builtin, builtin_schemas, hexagasket};
use num_bigint::BigInt;

#[test]
fn exponent_vectors_to_level_twelve() {
    for s in builtin_schemas() {
        let engine = SpectrumEngine::new(&s).unwrap();
        for n in 0..=12 {
            let t = tau_decimation_with(&engine, n).unwrap();
            let published = common::published_exponents(s.name(), n);
            let primes: Vec<u64> = published.iter().map(|(p, _)| *p).collect();
            for (p, want) in published {
                let want = if s.name() == "hexagasket" && p == 2 { common::hexagasket_two_exponent(n) } else { want };
                assert_eq!(t.exponent_of(p), want, "{} n={n} p={p}", s.name());
            }
            let extra: Vec<&BigInt> = t.factored.exponents().keys().filter(|p| !primes.iter().any(|q| BigInt::from(*q) == **p)).collect();
            assert!(extra.is_empty(), "{} n={n}: unexpected primes {extra:?}", s.name());
        }
    }
}

#[test]
fn published_hexagasket_two_exponent_is_contradicted_by_the_oracles() {
    let s = hexagasket();
    for n in 0..=1 {
        assert_eq!(common::published_exponents("hexagasket", n)[0].1, common::hexagasket_two_exponent(n));
    }
    for (n, published) in [(2, 18), (3, 126)] {
        assert_eq!(common::published_exponents("hexagasket", n)[0].1, BigInt::from(published));
        for method in [Method::Cofactor, Method::Probabilistic] {
            let t = tau_oracle(&s, n, method).unwrap();
            assert_eq!(t.exponent_of(2), common::hexagasket_two_exponent(n), "{method} n={n}");
        }
    }
}

#[test]
fn multiplicity_families_to_level_twelve() {
    for name in ["sierpinski", "nonpcf", "diamond", "hexagasket"] {
        let engine = SpectrumEngine::new(&builtin(name).unwrap()).unwrap();
        common::check_families(name, &engine, 12).unwrap();
    }
}

#[test]
fn vertex_counts() {
    type Count = fn(u32) -> BigInt;
    let want: [(&str, Count); 4] = [
        ("sierpinski", |n| (BigInt::from(3).pow(n + 1) + 3) / 2),
        ("nonpcf", |n| (BigInt::from(6).pow(n) * 4 + 11) / 5),
        ("diamond", |n| (BigInt::from(4).pow(n) * 2 + 4) / 3),
        ("hexagasket", |n| (BigInt::from(6).pow(n) * 9 + 6) / 5),
    ];
    for (name, f) in want {
        let s = builtin(name).unwrap();
        for n in 0..=20u32 {
            assert_eq!(vertex_count(&s, n as usize), f(n), "{name} n={n}");
        }
    }
}
