//! Property tests for the algebraic invariants of the engine.

use proptest::prelude::*;

use shriek_core::derived::{derived_hom, derived_tensor};
use shriek_core::groebner::{GroebnerBasis, Lifter};
use shriek_core::invariants::compare_modules;
use shriek_core::monomial::Monomial;
use shriek_core::resolve::free_resolution;
use shriek_core::ring::enveloping_presentation;
use shriek_core::*;

const Q: Field = Field::Rational;

fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, nvars), -4i64..=4), 0..4).prop_map(move |terms| {
        Poly::from_terms(nvars, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), Q.from_i64(c))))
    })
}

fn nonzero_poly(nvars: usize) -> impl Strategy<Value = Poly> {
    poly(nvars).prop_filter("nonzero", |p| !p.is_zero())
}

fn plane() -> Ring {
    RingPresentation::polynomial("R", Q, &["x", "y"])
}

fn cusp() -> Ring {
    RingPresentation::parse("C", Q, &["x", "y"], &["y^2 - x^3"]).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn arithmetic_is_exact(p in poly(2), q in poly(2), r in poly(2)) {
        let a = cusp();
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        let nf = a.reduce(&(&p * &q));
        prop_assert_eq!(a.reduce(&nf), nf.clone());
        prop_assert_eq!(a.reduce(&(&a.reduce(&p) * &a.reduce(&q))), nf);
    }

    #[test]
    fn ring_maps_are_homomorphisms(u in poly(2), v in poly(2), p in poly(2), q in poly(2)) {
        let f = RingMap::new(plane(), cusp(), vec![u, v]).unwrap();
        let lhs = f.apply(&(&p * &q)).unwrap();
        let rhs = f.target.reduce(&(&f.apply(&p).unwrap() * &f.apply(&q).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn enveloping_doubles_variables_and_relations(n in 0usize..3, rels in prop::collection::vec(nonzero_poly(2), 0..3)) {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let ambient = PolyRing::new(Q, &refs).unwrap();
        let rels: Vec<Poly> = rels.iter().map(|r| r.substitute(&(0..2).map(|i| if i < n { ambient.var(i) } else { ambient.one() }).collect::<Vec<_>>(), Q)).filter(|r| !r.is_zero()).collect();
        let a = RingPresentation::new("A", ambient, rels.clone());
        let e = enveloping_presentation(&a);
        prop_assert_eq!(e.ring.nvars(), 2 * n);
        prop_assert_eq!(e.ring.relations().len(), 2 * rels.len());
        prop_assert_eq!(e.diagonal.len(), n);
    }

    #[test]
    fn membership_matches_cofactors(g in prop::collection::vec(nonzero_poly(2), 1..3), c in prop::collection::vec(poly(2), 2), extra in poly(2)) {
        let gb = GroebnerBasis::ideal(2, TermOrder::DegRevLex, &g);
        prop_assert!(gb.is_groebner());
        let member = g.iter().zip(&c).fold(Poly::zero(2), |acc, (gi, ci)| &acc + &(gi * ci));
        prop_assert!(gb.normal_form_poly(&member).is_zero());
        let tracked: Vec<Vec<Poly>> = g.iter().map(|p| vec![p.clone()]).collect();
        let lifter = Lifter::new(Q, 2, 1, &tracked, &[]);
        for v in [member, &extra + &c[0]] {
            let cof = lifter.lift(std::slice::from_ref(&v));
            prop_assert_eq!(cof.is_some(), gb.normal_form_poly(&v).is_zero());
            if let Some(cof) = cof {
                let back = g.iter().zip(&cof).fold(Poly::zero(2), |acc, (gi, ci)| &acc + &(gi * ci));
                prop_assert_eq!(back, v);
            }
        }
    }

    #[test]
    fn bases_are_deterministic(g in prop::collection::vec(nonzero_poly(2), 1..4)) {
        let first = GroebnerBasis::ideal(2, TermOrder::DegRevLex, &g);
        shriek_core::par::set_sequential(true);
        let second = GroebnerBasis::ideal(2, TermOrder::DegRevLex, &g);
        shriek_core::par::set_sequential(false);
        prop_assert_eq!(first.generators(), second.generators());
        let nf = |p: &Poly| first.normal_form_poly(p);
        for p in &g {
            prop_assert_eq!(nf(&nf(p)), nf(p));
        }
    }

    #[test]
    fn resolutions_are_exact_complexes(g in prop::collection::vec(nonzero_poly(2), 1..3)) {
        let r = plane();
        let m = FPModule::cyclic(&r, &g);
        let res = free_resolution(&m, 4);
        prop_assert!(res.complex.is_complex());
        let top = if res.complete { res.complex.hi() } else { res.complex.hi() - 1 };
        for i in 1..=top {
            prop_assert!(res.complex.homology(i).is_zero(), "H_{} nonzero", i);
        }
        let h0 = res.complex.homology(0).module;
        prop_assert!(compare_modules(&h0, &m, None).status.agrees());
    }

    #[test]
    fn tor_is_symmetric(g in nonzero_poly(2), h in nonzero_poly(2)) {
        let r = plane();
        let (m, n) = (FPModule::cyclic(&r, &[g]), FPModule::cyclic(&r, &[h]));
        let w = Window::new(0, 2);
        let mn = derived_tensor(&m, &n, w, 4).unwrap();
        let nm = derived_tensor(&n, &m, w, 4).unwrap();
        for d in 0..=2 {
            let v = compare_modules(&mn.homology(d).unwrap().module, &nm.homology(d).unwrap().module, None);
            prop_assert!(v.status.agrees(), "Tor_{}: {:?}", d, v);
        }
    }

    #[test]
    fn ext_is_stable_under_longer_resolutions(g in prop::collection::vec(nonzero_poly(2), 1..3)) {
        let r = plane();
        let m = FPModule::cyclic(&r, &g);
        let a = FPModule::free(&r, 1);
        let short = derived_hom(&m, &a, Window::new(-2, 0), 6).unwrap();
        let long = derived_hom(&m, &a, Window::new(-4, 0), 6).unwrap();
        for d in -2..=0 {
            let v = compare_modules(&short.homology(d).unwrap().module, &long.homology(d).unwrap().module, None);
            prop_assert!(v.status.agrees(), "Ext^{}: {:?}", -d, v);
        }
        prop_assert!(short.complex.is_complex() && long.complex.is_complex());
    }
}
