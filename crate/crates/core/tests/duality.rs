//! Dualizing complexes, shrieks and local cohomology on the test rings.

use shriek_core::diagonal::convolution::convolution;
use shriek_core::diagonal::diffops::{diff_ops, Operator};
use shriek_core::diagonal::local::local_cohomology;
use shriek_core::diagonal::{Bimodule, Diagonal, Neighborhood};
use shriek_core::duality::dualizing::{dualizing_oracle_route, dualizing_paper_route, Route};
use shriek_core::duality::shriek::{lower_shriek, upper_shriek};
use shriek_core::invariants::{compare_modules, vector_space_dimension, VerdictStatus};
use shriek_core::tower::TowerVerdict;
use shriek_core::*;

const Q: Field = Field::Rational;

fn line() -> Ring {
    RingPresentation::polynomial("A", Q, &["x"])
}

#[test]
fn affine_line_tower() {
    let a = line();
    let w = dualizing_paper_route(&a, 6, Window::new(-1, 2), 8).unwrap();
    assert_eq!(w.route, Route::Paper);
    assert_eq!(w.verdict(1), Some(TowerVerdict::StablyIso));
    assert_eq!(w.verdict(0), Some(TowerVerdict::ProZero));
    let tower = w.tower.as_ref().unwrap();
    assert!(tower.homology.iter().all(|h| h[&0].module.free_rank() == Some(1)), "stage H_0 is A");
    let (d, m) = w.concentrated().unwrap();
    assert_eq!((d, m.free_rank()), (1, Some(1)));
}

#[test]
fn paper_and_oracle_routes_agree_on_singular_rings() {
    let fat = RingPresentation::parse("F", Q, &["x"], &["x^2"]).unwrap();
    let cusp = RingPresentation::parse("C", Q, &["x", "y"], &["y^2 - x^3"]).unwrap();
    let b = line();
    let cases = [
        (fat.clone(), RingMap::structure(&fat), 0, Some(2)),
        (cusp.clone(), RingMap::new(b.clone(), cusp.clone(), vec![cusp.var(0)]).unwrap(), 1, None),
    ];
    for (a, normalization, degree, length) in cases {
        let window = Window::new(-1, a.dimension() as i64 + 1);
        let paper = dualizing_paper_route(&a, 5, window, 8).unwrap();
        let oracle = dualizing_oracle_route(&normalization, window, 8).unwrap();
        assert_eq!(paper.support(), vec![degree], "{}", a.label);
        assert_eq!(oracle.support(), vec![degree], "{}", a.label);
        for (d, m) in &paper.homology {
            let v = compare_modules(m, &oracle.homology[d], None);
            assert!(v.status >= VerdictStatus::InvariantEqual && v.status.agrees(), "{} H_{d}: {v:?}", a.label);
        }
        let h = &paper.homology[&degree];
        if let Some(len) = length {
            assert_eq!(vector_space_dimension(h), Some(len));
        } else {
            assert_eq!(shriek_core::invariants::generic_rank(h), Some(1));
        }
    }
}

#[test]
fn identity_shrieks_return_the_module() {
    let a = line();
    let m = FPModule::cyclic(&a, &[a.var(0)]);
    let id = RingMap::identity(&a);
    let up = upper_shriek(&id, &m, 4, Window::new(-2, 2), 6).unwrap();
    let (d, h) = up.concentrated().unwrap();
    assert_eq!(d, 0);
    assert_eq!(compare_modules(h, &m, Some(&ModuleMap::identity(&m))).status, VerdictStatus::IsoByMap);
    let low = lower_shriek(&id, &m, 4, Window::new(-2, 2), 6).unwrap();
    assert_eq!(low.concentrated().map(|(d, _)| d), Some(0));
}

#[test]
fn cech_cross_check_for_principal_ideals() {
    let r = RingPresentation::polynomial("R", Q, &["x", "y"]);
    let (x, y) = (r.var(0), r.var(1));
    let t = x.clone();
    // Modules on which t is a nonzerodivisor, with M/tM of finite length: polar parts of
    // t^{-m} M / M are m copies of M/tM.
    let m = FPModule::cyclic(&r, &[&y - &r.one()]);
    let tower = local_cohomology(&m, std::slice::from_ref(&t), Window::new(-1, 0), 4).unwrap();
    let quotient = FPModule::new(&r, 1, vec![vec![t.clone()], vec![&y - &r.one()]]);
    let per_stage = vector_space_dimension(&quotient).unwrap();
    for (i, h) in tower.homology.iter().enumerate() {
        assert!(h[&0].is_zero());
        assert_eq!(vector_space_dimension(&h[&-1].module), Some((i + 1) * per_stage), "stage {}", i + 1);
    }
    // t invertible on M: the localization is M itself, so both sides vanish.
    let inv = FPModule::cyclic(&r, &[&x - &r.one()]);
    let tower = local_cohomology(&inv, std::slice::from_ref(&t), Window::new(-1, 0), 3).unwrap();
    assert!(tower.homology.iter().all(|h| h.values().all(|s| s.is_zero())));
    assert_eq!(tower.verdicts[&-1], TowerVerdict::ProZero);
    // t-torsion: Γ_t M = M, M_t = 0.
    let tors = FPModule::cyclic(&r, &[x.pow(2, Q)]);
    let tower = local_cohomology(&tors, std::slice::from_ref(&t), Window::new(-1, 0), 4).unwrap();
    assert_eq!(tower.verdicts[&0], TowerVerdict::StablyIso);
    let gamma = tower.colimit(0).unwrap();
    assert!(compare_modules(&gamma, &tors, None).status.agrees());
}

#[test]
fn composing_first_derivatives() {
    let a = line();
    let (d1, d2) = (diff_ops(&a, 1), diff_ops(&a, 2));
    let dx = Operator::from_fn(&d1.neighborhood, |f| f.derivative(0, Q));
    let composite = Operator::from_fn(&d2.neighborhood, |f| dx.apply(&dx.apply(f)));
    let second = Operator::from_fn(&d2.neighborhood, |f| f.derivative(0, Q).derivative(0, Q));
    assert_eq!(d2.express(&composite), d2.express(&second));
    for k in 0..=6u32 {
        let p = a.var(0).pow(k, Q);
        assert_eq!(composite.apply(&p), second.apply(&p), "x^{k}");
    }
}

#[test]
fn convolution_of_neighborhoods_is_associative() {
    let a = line();
    let d = Diagonal::absolute(&a);
    let n2 = Neighborhood::new(&d, 2).bimodule();
    let w = Window::new(0, 0);
    let left_inner = convolution(&n2, &n2, w, 4).unwrap().bimodule(0).unwrap();
    let right_inner = left_inner.clone();
    let left = convolution(&left_inner, &n2, w, 4).unwrap().bimodule(0).unwrap();
    let right = convolution(&n2, &right_inner, w, 4).unwrap().bimodule(0).unwrap();
    let v = compare_modules(&left.module, &right.module, None);
    assert!(v.status.agrees(), "{v:?}");
    let unit = Bimodule::unit(&d);
    let u = convolution(&unit, &unit, w, 4).unwrap().bimodule(0).unwrap();
    assert!(compare_modules(&u.module, &unit.module, None).status.agrees());
}
