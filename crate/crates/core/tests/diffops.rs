//! Differential operators against independent oracles.

use shriek_core::diagonal::diffops::{diff_ops, generators_pass_bracket_test, derived_diff_ops};
use shriek_core::*;

#[path = "support/cusp.rs"]
mod cusp;

use cusp::oracle_first_order;

fn line() -> Ring {
    RingPresentation::polynomial("A", Field::Rational, &["x"])
}

#[test]
fn operators_on_the_line_are_free_with_one_more_generator_per_order() {
    let a = line();
    let mut previous = None;
    for n in 0..=4 {
        let ops = diff_ops(&a, n);
        assert_eq!(ops.module().free_rank(), Some(n + 1), "order {n}");
        assert!(generators_pass_bracket_test(&ops, 6), "bracket test at order {n}");
        if let Some(p) = previous.replace(ops.clone()) {
            let t = shriek_core::diagonal::diffops::DiffOps::transition(&p, &ops).unwrap();
            assert!(t.is_injective(), "filtration at order {n}");
        }
    }
}

#[test]
fn smooth_rings_have_underived_operators() {
    let q = Field::Rational;
    let rings = [
        line(),
        RingPresentation::polynomial("P", q, &["x", "y"]),
        RingPresentation::parse("H", q, &["x", "y"], &["x*y - 1"]).unwrap(),
    ];
    for a in &rings {
        for n in 1..=2 {
            let d = derived_diff_ops(a, n, Window::new(-3, 0), 6).unwrap();
            for e in -3..0 {
                assert!(d.homology(e).unwrap().is_zero(), "{} order {n}: Ext^{} nonzero", a.label, -e);
            }
            assert!(!d.homology(0).unwrap().is_zero());
        }
    }
}

#[test]
fn cusp_first_order_operators_match_the_commutator_oracle() {
    let q = Field::Rational;
    let cusp = RingPresentation::parse("C", q, &["x", "y"], &["y^2 - x^3"]).unwrap().with_weights(vec![2, 3]);
    let ops = diff_ops(&cusp, 1);
    assert!(generators_pass_bracket_test(&ops, 8));
    let module = ops.module();
    for e in -6..=6 {
        let engine = module.hilbert_function(e).expect("graded");
        assert_eq!(engine, oracle_first_order(e), "operators of degree {e}");
    }
    // Sanity of the oracle itself: 1, and the Euler derivation 2x d/dx + 3y d/dy in degree 0.
    assert_eq!(oracle_first_order(0), 2);
}
