//! Property tests for the library invariants: mean ordering, idempotence,
//! homogeneity, reflection symmetry, gap bracketing, the sandwich chain, and
//! parser robustness.

use proptest::prelude::*;

use hhmeans::convex::ConvexFn;
use hhmeans::fnspec;
use hhmeans::hh::{hh_functional, refine_r1, refine_r2};
use hhmeans::means::{
    rep_function, weighted_arithmetic, weighted_geometric, weighted_identric,
    weighted_logarithmic, LimitPolicy, PositivePair, Weight,
};
use hhmeans::quad::QuadratureSpec;
use hhmeans::young::{afk_log_bounds, cf_bounds, km_bounds, young_gap};

const LP: LimitPolicy = LimitPolicy::DEFAULT;

fn positive() -> impl Strategy<Value = f64> {
    // log-uniform over the six-decade default box
    (-3f64..3f64).prop_map(|e| 10f64.powf(e))
}

fn interior_weight() -> impl Strategy<Value = f64> {
    0.01f64..0.99f64
}

fn pair(a: f64, b: f64) -> PositivePair {
    PositivePair::new(a, b).unwrap()
}

fn weight(nu: f64) -> Weight {
    Weight::new(nu).unwrap()
}

proptest! {
    #[test]
    fn mean_ordering(a in positive(), b in positive(), nu in interior_weight()) {
        let p = pair(a, b);
        let w = weight(nu);
        let g = weighted_geometric(p, w);
        let l = weighted_logarithmic(p, w, &LP);
        let m = weighted_arithmetic(p, w);
        let tol = 1e-10 * a.max(b);
        prop_assert!(g <= l + tol, "geo {g} > log {l}");
        prop_assert!(l <= m + tol, "log {l} > arith {m}");
    }

    #[test]
    fn idempotence_is_exact(a in positive(), nu in 0.0f64..=1.0) {
        let p = pair(a, a);
        let w = weight(nu);
        prop_assert_eq!(weighted_arithmetic(p, w), a);
        prop_assert_eq!(weighted_geometric(p, w), a);
        prop_assert_eq!(weighted_logarithmic(p, w, &LP), a);
    }

    #[test]
    fn scaling_homogeneity(a in positive(), b in positive(), nu in interior_weight()) {
        let w = weight(nu);
        for c in [1e-3, 1.0, 1e3] {
            let p = pair(a, b);
            let q = pair(c * a, c * b);
            let cases = [
                (weighted_arithmetic(p, w), weighted_arithmetic(q, w)),
                (weighted_geometric(p, w), weighted_geometric(q, w)),
                (weighted_logarithmic(p, w, &LP), weighted_logarithmic(q, w, &LP)),
            ];
            for (base, scaled) in cases {
                prop_assert!(
                    (scaled - c * base).abs() <= 1e-12 * (c * base).abs(),
                    "c={c}: {scaled} vs {}", c * base
                );
            }
            if (a - b).abs() > 1e-6 * a.max(b) {
                let base = weighted_identric(p, w, &LP).unwrap();
                let scaled = weighted_identric(q, w, &LP).unwrap();
                prop_assert!((scaled - c * base).abs() <= 1e-12 * (c * base).abs());
            }
        }
    }

    #[test]
    fn weight_reflection(a in positive(), b in positive(), nu in interior_weight()) {
        let l1 = weighted_logarithmic(pair(a, b), weight(nu), &LP);
        let l2 = weighted_logarithmic(pair(b, a), weight(1.0 - nu), &LP);
        prop_assert!((l1 - l2).abs() <= 1e-12 * l1.abs(), "{l1} vs {l2}");
    }

    #[test]
    fn rep_function_is_the_unit_reduction(t in positive(), nu in interior_weight()) {
        let f = rep_function(t, weight(nu), &LP).unwrap();
        let l = weighted_logarithmic(pair(1.0, t), weight(nu), &LP);
        prop_assert!((f - l).abs() <= 1e-13 * l.abs(), "{f} vs {l}");
    }

    #[test]
    fn gap_nonnegative_and_bracketed(t in positive(), nu in 0.0f64..=1.0) {
        let w = weight(nu);
        let gap = young_gap(t, w);
        prop_assert!(gap >= -1e-14 * (1.0 + t));
        let tol = 1e-12 * (1.0 + t);
        for bounds in [km_bounds(t, w), cf_bounds(t, w), afk_log_bounds(t, w)] {
            prop_assert!(bounds.contains(gap, tol), "{bounds:?} vs gap {gap} at t={t} nu={nu}");
        }
    }

    #[test]
    fn gap_vanishes_only_at_equality_cases(t in positive(), nu in 0.01f64..0.99) {
        // away from t = 1 and endpoint weights the gap is strictly positive
        prop_assume!(t.ln().abs() > 1e-3);
        let gap = young_gap(t, weight(nu));
        prop_assert!(gap > 1e-14, "gap {gap} at t={t} nu={nu}");
    }

    #[test]
    fn sandwich_chain_holds(x in -5.0f64..5.0, y in -5.0f64..5.0, nu in 0.0f64..=1.0, pick in 0u8..3) {
        let f = match pick {
            0 => ConvexFn::exp(),
            1 => ConvexFn::square(),
            _ => ConvexFn::pow_base(3.0),
        };
        let spec = QuadratureSpec::default();
        let c = hh_functional(&f, x, y, nu, &spec).unwrap();
        let lo = f.eval(x + nu * (y - x)).unwrap();
        let r1 = refine_r1(&f, x, y, nu).unwrap();
        let r2 = refine_r2(&f, x, y, nu).unwrap();
        let hi = (1.0 - nu) * f.eval(x).unwrap() + nu * f.eval(y).unwrap();
        let tol = c.est_error + 1e-10 * hi.abs().max(1.0);
        prop_assert!(lo <= r1 + tol);
        prop_assert!(r1 <= c.value + tol);
        prop_assert!(c.value <= r2 + tol);
        prop_assert!(r2 <= hi + tol);
    }

    #[test]
    fn parser_never_panics(src in "[0-9xels(). +*/^-]{0,40}") {
        let _ = fnspec::parse(&src);
    }

    #[test]
    fn eval_is_deterministic(x in -100.0f64..100.0) {
        let ast = fnspec::parse("exp(-(x^2)/2) + abs(x - 1)/3").unwrap();
        match (fnspec::eval(&ast, x), fnspec::eval(&ast, x)) {
            (Ok(u), Ok(v)) => prop_assert_eq!(u.to_bits(), v.to_bits()),
            (Err(_), Err(_)) => {}
            (u, v) => prop_assert!(false, "nondeterministic: {u:?} vs {v:?}"),
        }
    }
}
