mod common;

use fractal_trees::counting::{bounds_check, tau_decimation_with, verify};
use fractal_trees::decimation::{charpoly_check_with, SpectrumEngine};
use fractal_trees::fractal::schema::{builtin, builtin_schemas};

#[test]
fn first_levels_match_published_counts() {
    let want = [
        ("sierpinski", 0, "3"),
        ("sierpinski", 1, "54"),
        ("nonpcf", 0, "3"),
        ("nonpcf", 1, "2700"),
        ("diamond", 1, "4"),
        ("diamond", 2, "1024"),
        ("hexagasket", 0, "3"),
        ("hexagasket", 1, "2916"),
    ];
    for (name, n, value) in want {
        let rep = verify(&builtin(name).unwrap(), n).unwrap();
        assert_eq!(rep.decimation, value);
        assert_eq!(rep.probabilistic.as_deref(), Some(value));
    }
}

#[test]
fn decimation_matches_cofactor_at_scale() {
    for (name, n_max) in [("sierpinski", 4), ("diamond", 5), ("hexagasket", 3), ("nonpcf", 3)] {
        let s = builtin(name).unwrap();
        for n in 0..=n_max {
            let rep = verify(&s, n).unwrap_or_else(|e| panic!("{name} n={n}: {e}"));
            assert_eq!(rep.decimation, rep.cofactor);
        }
    }
}

#[test]
fn characteristic_polynomials_to_level_three() {
    for s in builtin_schemas() {
        let engine = SpectrumEngine::new(&s).unwrap();
        for n in 0..=3 {
            assert!(charpoly_check_with(&engine, n).unwrap(), "{} n={n}", s.name());
        }
    }
}

#[test]
fn tree_count_bounds() {
    for s in builtin_schemas() {
        let engine = SpectrumEngine::new(&s).unwrap();
        for n in 0..=30 {
            let t = tau_decimation_with(&engine, n).unwrap();
            bounds_check(&s, n, &t).unwrap_or_else(|e| panic!("{} n={n}: {e}", s.name()));
        }
    }
}
