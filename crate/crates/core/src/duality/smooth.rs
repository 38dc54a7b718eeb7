//! Smoothness by the Jacobian criterion, phrased through the Fitting ideals of `Ω¹`.

use std::fmt;

use crate::diagonal::{Diagonal, Neighborhood};
use crate::invariants::fitting_ideal;
use crate::module::FPModule;
use crate::ring::{Ring, RingMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Smoothness {
    /// Smooth of the given relative dimension.
    Smooth(usize),
    NotSmooth(String),
    Undecided(String),
}

impl Smoothness {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Smoothness::Smooth(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Smoothness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Smoothness::Smooth(n) => write!(f, "smooth of relative dimension {n}"),
            Smoothness::NotSmooth(why) => write!(f, "not smooth ({why})"),
            Smoothness::Undecided(why) => write!(f, "undecided ({why})"),
        }
    }
}

/// `Ω¹_{A/B} = I/I²` read off the second diagonal neighborhood: generators `dx_t` for the
/// doubled variables.
pub fn cotangent_module(diag: &Diagonal) -> FPModule {
    let n2 = Neighborhood::new(diag, 2);
    let rels = n2.module.relations().iter().map(|r| r[1..].to_vec()).collect();
    FPModule::new(&diag.ring, diag.ndoubled(), rels)
}

/// Decides smoothness of `f : B → A` when `f` sends variables to variables, with relative
/// dimension `dim A - dim B`: `Ω¹` must be locally free of that rank.
pub fn smoothness_check(f: &RingMap) -> Smoothness {
    let diag = match Diagonal::relative(f) {
        Ok(d) => d,
        Err(_) => return Smoothness::Undecided("map does not send variables to variables".into()),
    };
    let (da, db) = (f.target.dimension(), f.source.dimension());
    if f.target.is_zero_ring() {
        return Smoothness::NotSmooth("target is the zero ring".into());
    }
    if da < db {
        return Smoothness::NotSmooth(format!("fibre dimension {da} - {db} is negative"));
    }
    let n = da - db;
    let omega = cotangent_module(&diag);
    let Some(top) = fitting_ideal(&omega, n) else {
        return Smoothness::Undecided("Jacobian too large for minors".into());
    };
    if !top.is_whole() {
        return Smoothness::NotSmooth(format!("Jacobian minors of size {} do not generate the unit ideal", omega.rank() - n));
    }
    if n > 0 {
        let Some(below) = fitting_ideal(&omega, n - 1) else {
            return Smoothness::Undecided("Jacobian too large for minors".into());
        };
        let ring: &Ring = &f.target;
        if below.polys().iter().any(|p| !ring.is_zero(p)) {
            return Smoothness::NotSmooth(format!("cotangent module is not of constant rank {n}"));
        }
    }
    Smoothness::Smooth(n)
}

/// Smoothness of `A` over its base field.
pub fn absolute_smoothness(a: &Ring) -> Smoothness {
    smoothness_check(&RingMap::structure(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;

    #[test]
    fn jacobian_criterion() {
        let plane = RingPresentation::polynomial("P", Field::Rational, &["x", "y"]);
        assert_eq!(absolute_smoothness(&plane), Smoothness::Smooth(2));
        let cusp = RingPresentation::parse("C", Field::Rational, &["x", "y"], &["y^2 - x^3"]).unwrap();
        assert!(matches!(absolute_smoothness(&cusp), Smoothness::NotSmooth(_)));
        let hyp = RingPresentation::parse("H", Field::Rational, &["x", "y"], &["x*y - 1"]).unwrap();
        assert_eq!(absolute_smoothness(&hyp), Smoothness::Smooth(1));
        let fat = RingPresentation::parse("F", Field::Rational, &["x"], &["x^2"]).unwrap();
        assert!(matches!(absolute_smoothness(&fat), Smoothness::NotSmooth(_)));
        let k = RingPresentation::polynomial("k", Field::Rational, &[]);
        assert_eq!(absolute_smoothness(&k), Smoothness::Smooth(0));
        let mixed = RingPresentation::parse("M", Field::Rational, &["x", "y"], &["x^2 - x", "x*y"]).unwrap();
        assert!(matches!(absolute_smoothness(&mixed), Smoothness::NotSmooth(_)));
    }
}
