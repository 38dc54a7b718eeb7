//! Relative dualizing complexes and the functors `f^!`, `f^×` and `f_!` on modules.
//!
//! For `f : A → B` the relative `ω_{B/A}` comes from the relative diagonal when `B` is `A`
//! with free variables and relations adjoined on its own variables (so the fibre product needs
//! no deriving), and from `RHom_A(B, A)` when `B` is module-finite over `A`.

use std::collections::BTreeMap;
use std::fmt;

use crate::derived::{derived_hom, derived_tensor, tensor_free_with, Window};
use crate::diagonal::Diagonal;
use crate::error::{Error, Result};
use crate::finite::{
    descend_along_surjection, dual_of_free_algebra, extend_complex, finiteness_certificate, is_variable_surjective,
    restrict, variable_inclusion,
};
use crate::module::FPModule;
use crate::resolve::free_resolution;
use crate::ring::{Ring, RingMap};

use super::dualizing::{paper_route_tower, DualizingResult, Route};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShriekRoute {
    Identity,
    /// `ω_{B/A} ⊗^L_B Lf^*M` with `ω_{B/A}` from the relative diagonal.
    Diagonal,
    /// `RHom_A(B, M)` for module-finite `B`.
    FiniteDuality,
}

impl ShriekRoute {
    pub fn name(self) -> &'static str {
        match self {
            ShriekRoute::Identity => "identity",
            ShriekRoute::Diagonal => "diagonal",
            ShriekRoute::FiniteDuality => "finite-duality",
        }
    }
}

impl fmt::Display for ShriekRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Homology of `f^!M`, `f^×M` or `f_!M` in a window.
#[derive(Clone, Debug)]
pub struct Shriek {
    pub route: ShriekRoute,
    pub map: RingMap,
    pub window: Window,
    /// Over the ring the functor lands in, in the degrees where that structure is known.
    pub homology: BTreeMap<i64, FPModule>,
    /// Over the source of the map (finite duality only).
    pub over_source: Option<BTreeMap<i64, FPModule>>,
    pub omega: Option<DualizingResult>,
}

impl Shriek {
    pub fn support(&self) -> Vec<i64> {
        self.homology.iter().filter(|(_, m)| !m.is_zero()).map(|(&d, _)| d).collect()
    }

    pub fn concentrated(&self) -> Option<(i64, &FPModule)> {
        match self.support().as_slice() {
            [d] => Some((*d, &self.homology[d])),
            _ => None,
        }
    }
}

/// `f : A → B` sends variables to variables and the relations of `B` split into relations of
/// `A` and relations among the remaining variables, so `B = A ⊗_k B'` is flat over `A`.
pub fn is_split_inclusion(f: &RingMap) -> bool {
    let Some(shared) = variable_inclusion(f) else {
        return false;
    };
    if f.source.nvars() == 0 {
        return true;
    }
    let (a, b) = (&f.source, &f.target);
    let mut back = vec![a.zero(); b.nvars()];
    for (k, &j) in shared.iter().enumerate() {
        back[j] = a.var(k);
    }
    b.relations().iter().all(|r| {
        let uses = |inside: bool| r.terms().iter().all(|(m, _)| m.support().all(|(i, _)| shared.contains(&i) == inside));
        if uses(true) {
            a.is_zero(&r.substitute(&back, a.field()))
        } else {
            uses(false)
        }
    })
}

/// Window in which relative dualizing complexes are computed when only their value matters.
pub fn omega_window(f: &RingMap) -> Window {
    Window::new(-(f.source.nvars() as i64) - 1, f.target.dimension() as i64 + 1)
}

fn unit_result(f: &RingMap, window: Window, max_length: usize) -> DualizingResult {
    let b = f.target.clone();
    let homology = window
        .degrees()
        .map(|d| (d, if d == 0 { FPModule::free(&b, 1) } else { FPModule::zero(&b) }))
        .collect();
    DualizingResult {
        route: Route::Cross,
        ring: b,
        certified: window,
        homology,
        over_base: None,
        tower: None,
        hochschild: None,
        mmax: 0,
        max_length,
    }
}

/// `RHom_A(B, M)` over `A`, and over `B` where the `B`-structure can be read off: `B` a
/// quotient of `A`, or `B` and `M` both free over `A`.
fn finite_dual(
    f: &RingMap,
    m: &FPModule,
    window: Window,
    max_length: usize,
) -> Result<(BTreeMap<i64, FPModule>, BTreeMap<i64, FPModule>)> {
    let push = finiteness_certificate(f)?;
    let rhom = derived_hom(&push.module, m, window, max_length)?;
    let over_source: BTreeMap<i64, FPModule> = rhom.all_homology().into_iter().map(|(e, h)| (e, h.module)).collect();
    let mut over_target = BTreeMap::new();
    if is_variable_surjective(f) {
        for (&e, h) in &over_source {
            over_target.insert(e, descend_along_surjection(f, h)?);
        }
    } else if push.module.is_free_presentation() && m.is_free_presentation() {
        let dual = dual_of_free_algebra(f)?;
        let sum = (0..m.rank()).fold(FPModule::zero(&f.target), |acc, _| acc.direct_sum(&dual));
        for &e in over_source.keys() {
            over_target.insert(e, if e == 0 { sum.clone() } else { FPModule::zero(&f.target) });
        }
    }
    Ok((over_source, over_target))
}

/// `ω_{B/A}` for `f : A → B`, in the window.
pub fn relative_dualizing(f: &RingMap, mmax: usize, window: Window, max_length: usize) -> Result<DualizingResult> {
    if f.is_identity() {
        return Ok(unit_result(f, window, max_length));
    }
    if is_split_inclusion(f) {
        return paper_route_tower(&Diagonal::relative(f)?, mmax, window, max_length)?.require_stable();
    }
    if finiteness_certificate(f).is_ok() {
        let (over_source, homology) = finite_dual(f, &FPModule::free(&f.source, 1), window, max_length)?;
        return Ok(DualizingResult {
            route: Route::Cross,
            ring: f.target.clone(),
            certified: window,
            homology,
            over_base: Some(over_source),
            tower: None,
            hochschild: None,
            mmax,
            max_length,
        });
    }
    Err(Error::Invalid(format!(
        "no route to the dualizing complex of {} over {}: the map is neither a split variable inclusion nor finite",
        f.target.label, f.source.label
    )))
}

/// The single degree and module of a relative `ω`, or `None` when it vanishes in the window.
fn concentrated_omega(omega: &DualizingResult) -> Result<Option<(i64, FPModule)>> {
    match omega.support().as_slice() {
        [] => Ok(None),
        [d] => Ok(Some((*d, omega.homology[d].clone()))),
        more => Err(Error::Invalid(format!("relative dualizing complex has homology in degrees {more:?}"))),
    }
}

fn check_source(f: &RingMap, m: &FPModule) -> Result<()> {
    if **m.ring() != *f.source {
        return Err(Error::RingMismatch(format!("module is not over {}", f.source.label)));
    }
    Ok(())
}

fn zeros(ring: &Ring, window: Window) -> BTreeMap<i64, FPModule> {
    window.degrees().map(|d| (d, FPModule::zero(ring))).collect()
}

/// `f^!M = ω_{B/A} ⊗^L_B Lf^*M` for `f : A → B` and an `A`-module `M`.
pub fn upper_shriek(f: &RingMap, m: &FPModule, mmax: usize, window: Window, max_length: usize) -> Result<Shriek> {
    check_source(f, m)?;
    if f.is_identity() {
        let mut homology = zeros(&f.target, window);
        if window.contains(0) {
            homology.insert(0, m.clone());
        }
        return Ok(Shriek {
            route: ShriekRoute::Identity,
            map: f.clone(),
            window,
            homology,
            over_source: None,
            omega: None,
        });
    }
    if is_split_inclusion(f) {
        let omega = relative_dualizing(f, mmax, omega_window(f), max_length)?;
        let mut homology = zeros(&f.target, window);
        if let Some((d, w)) = concentrated_omega(&omega)? {
            let top = window.hi - d;
            if top >= 0 {
                if top as usize > max_length {
                    return Err(Error::WindowTooNarrow { lo: window.lo, hi: window.hi, max_length });
                }
                let res = free_resolution(m, top as usize + 1);
                let t = tensor_free_with(&extend_complex(f, &res.complex), &w);
                for e in window.degrees().filter(|&e| e >= d) {
                    homology.insert(e, t.homology(e - d).module);
                }
            }
        }
        return Ok(Shriek {
            route: ShriekRoute::Diagonal,
            map: f.clone(),
            window,
            homology,
            over_source: None,
            omega: Some(omega),
        });
    }
    let mut s = upper_cross_finite(f, m, window, max_length)?;
    s.route = ShriekRoute::FiniteDuality;
    Ok(s)
}

/// `f^×M = RHom_A(B, M)` for module-finite `f : A → B`.
pub fn upper_cross_finite(f: &RingMap, m: &FPModule, window: Window, max_length: usize) -> Result<Shriek> {
    check_source(f, m)?;
    let (over_source, homology) = finite_dual(f, m, window, max_length)?;
    Ok(Shriek {
        route: ShriekRoute::FiniteDuality,
        map: f.clone(),
        window,
        homology,
        over_source: Some(over_source),
        omega: None,
    })
}

/// `f_!M = f_*(M ⊗^L_B ω_{B/A})` for a `B`-module `M` whose twisted homology is finite over `A`.
pub fn lower_shriek(f: &RingMap, m: &FPModule, mmax: usize, window: Window, max_length: usize) -> Result<Shriek> {
    if **m.ring() != *f.target {
        return Err(Error::RingMismatch(format!("module is not over {}", f.target.label)));
    }
    let omega = relative_dualizing(f, mmax, omega_window(f), max_length)?;
    let route = if f.is_identity() {
        ShriekRoute::Identity
    } else if omega.route == Route::Cross {
        ShriekRoute::FiniteDuality
    } else {
        ShriekRoute::Diagonal
    };
    let mut homology = zeros(&f.source, window);
    if omega.homology.is_empty() && !omega.certified.is_empty() {
        return Err(Error::Invalid("the dualizing complex has no structure over the target".into()));
    }
    if let Some((d, w)) = concentrated_omega(&omega)? {
        let tw = Window::new((window.lo - d).max(0), window.hi - d);
        if !tw.is_empty() {
            let t = derived_tensor(m, &w, tw, max_length)?;
            for i in tw.degrees() {
                homology.insert(i + d, restrict(f, &t.homology(i)?.module)?);
            }
        }
    }
    Ok(Shriek { route, map: f.clone(), window, homology, over_source: None, omega: Some(omega) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::vector_space_dimension;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;

    #[test]
    fn shriek_examples() {
        let q = Field::Rational;
        let a = RingPresentation::polynomial("A", q, &["x"]);
        let w = Window::new(-2, 2);
        let id = upper_shriek(&RingMap::identity(&a), &FPModule::free(&a, 1), 3, w, 6).unwrap();
        assert_eq!(id.concentrated().unwrap().0, 0);

        let k = RingMap::structure(&a);
        let point = FPModule::free(&k.source, 1);
        let s = upper_shriek(&k, &point, 4, w, 6).unwrap();
        assert_eq!(s.route, ShriekRoute::Diagonal);
        let (deg, m) = s.concentrated().unwrap();
        assert_eq!((deg, m.free_rank()), (1, Some(1)));

        let fat = RingPresentation::parse("F", q, &["x"], &["x^2"]).unwrap();
        let q_map = RingMap::new(a.clone(), fat.clone(), vec![fat.var(0)]).unwrap();
        assert!(!is_split_inclusion(&q_map));
        let s = upper_shriek(&q_map, &FPModule::free(&a, 1), 4, w, 6).unwrap();
        assert_eq!(s.route, ShriekRoute::FiniteDuality);
        let (deg, m) = s.concentrated().unwrap();
        assert_eq!((deg, vector_space_dimension(m)), (-1, Some(2)));

        let residue = FPModule::cyclic(&a, &[a.var(0)]);
        let l = lower_shriek(&k, &residue, 4, w, 6).unwrap();
        let (deg, m) = l.concentrated().unwrap();
        assert_eq!((deg, m.free_rank()), (1, Some(1)));
    }

    #[test]
    fn upper_cross_for_the_cusp() {
        let q = Field::Rational;
        let b = RingPresentation::polynomial("B", q, &["x"]);
        let c = RingPresentation::parse("C", q, &["x", "y"], &["y^2 - x^3"]).unwrap();
        let f = RingMap::new(b.clone(), c.clone(), vec![c.var(0)]).unwrap();
        let s = upper_cross_finite(&f, &FPModule::free(&b, 1), Window::new(-1, 1), 6).unwrap();
        let over_b = &s.over_source.as_ref().unwrap()[&0];
        assert_eq!(over_b.free_rank(), Some(2));
        assert_eq!(s.concentrated().unwrap().1.prune().module.rank(), 1);
        let split = RingPresentation::polynomial("P", q, &["x", "y"]);
        let g = RingMap::new(b, split.clone(), vec![split.var(0)]).unwrap();
        assert!(is_split_inclusion(&g));
    }
}
