//! The dualizing complex by the diagonal formula and by finite duality.
//!
//! Paper route: with `P → O_Δ` a free resolution over `A ⊗_B A`, the stage
//! `ω_m = RHom_A(Hom_{A⊗A}(P, N_m), A)` is `D^(m-1) ⊗^L_{A⊗A} A` computed through the
//! left `A`-dual of the neighborhood `N_m`. The stages form a tower under `N_{m+1} → N_m`.
//!
//! Oracle route: `RHom_B(A, B)[d]` along a finite map `B → A` from a polynomial ring.

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::{ChainComplex, ChainMap};
use crate::derived::{derived_hom, derived_hom_complex, hom_map_into, Derived, Window};
use crate::diagonal::hochschild::{bimodule_resolution, restrict_to_diagonal, Hochschild};
use crate::diagonal::{Diagonal, Neighborhood};
use crate::error::{Error, Result};
use crate::finite::{descend_along_surjection, dual_of_free_algebra, finiteness_certificate, is_variable_surjective};
use crate::matrix::Matrix;
use crate::module::{FPModule, ModuleMap};
use crate::poly::Poly;
use crate::resolve::{lift_between, ComplexResolution};
use crate::ring::{Ring, RingMap};
use crate::tower::{Tower, TowerVerdict};

/// Default number of neighborhood stages.
pub const DEFAULT_MMAX: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Paper,
    Oracle,
    /// `RHom_A(B, A)` along a finite map, or the unit for the identity.
    Cross,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Paper => "paper",
            Route::Oracle => "oracle",
            Route::Cross => "cross",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `ω` in the certified window, degree by degree.
#[derive(Clone, Debug)]
pub struct DualizingResult {
    pub route: Route,
    pub ring: Ring,
    pub certified: Window,
    /// Homology of `ω` as `A`-modules, in the degrees where it is determined.
    pub homology: BTreeMap<i64, FPModule>,
    /// Homology over the source of the map (oracle and cross routes), in every certified degree.
    pub over_base: Option<BTreeMap<i64, FPModule>>,
    pub tower: Option<Tower>,
    pub hochschild: Option<Hochschild>,
    pub mmax: usize,
    pub max_length: usize,
}

impl DualizingResult {
    /// Degrees whose tower verdict is undetermined.
    pub fn undetermined(&self) -> Vec<i64> {
        self.tower.as_ref().map(|t| t.undetermined()).unwrap_or_default()
    }

    pub fn require_stable(self) -> Result<Self> {
        let u = self.undetermined();
        if u.is_empty() {
            Ok(self)
        } else {
            Err(Error::NotStabilized(u))
        }
    }

    /// Degrees with nonzero homology.
    pub fn support(&self) -> Vec<i64> {
        self.homology.iter().filter(|(_, m)| !m.is_zero()).map(|(&d, _)| d).collect()
    }

    /// The single degree carrying homology, if `ω` is concentrated there.
    pub fn concentrated(&self) -> Option<(i64, &FPModule)> {
        match self.support().as_slice() {
            [d] => Some((*d, &self.homology[d])),
            _ => None,
        }
    }

    pub fn verdict(&self, d: i64) -> Option<TowerVerdict> {
        self.tower.as_ref().and_then(|t| t.verdicts.get(&d).copied())
    }
}

/// `Hom_{A⊗A}(P, N_m)` as a complex of `A`-modules: `N_m^{b_k}` in degree `-k`.
pub fn hom_into_neighborhood(p: &ChainComplex, nb: &Neighborhood) -> ChainComplex {
    let a = &nb.diagonal.ring;
    let nv = a.nvars();
    if p.is_empty() {
        return ChainComplex::zero(a);
    }
    let r = nb.rank();
    let terms: Vec<FPModule> = (p.lo()..=p.hi()).rev().map(|k| nb.module.power(p.rank(k))).collect();
    let mut acts: std::collections::HashMap<Poly, Matrix> = std::collections::HashMap::new();
    for k in p.lo() + 1..=p.hi() {
        for col in p.diff(k).cols {
            for e in col {
                if !e.is_zero() && !acts.contains_key(&e) {
                    let m = nb.act(&e);
                    acts.insert(e, m);
                }
            }
        }
    }
    // Degree -k maps to -k-1 by precomposition with d_{k+1}.
    let diffs: Vec<Matrix> = (p.lo()..p.hi())
        .rev()
        .map(|k| {
            let d = p.diff(k + 1);
            let (bk, bk1) = (d.nrows, d.ncols());
            let mut cols = Vec::with_capacity(bk * r);
            for i in 0..bk {
                for beta in 0..r {
                    let mut v = vec![Poly::zero(nv); bk1 * r];
                    for jj in 0..bk1 {
                        let e = d.entry(i, jj);
                        if e.is_zero() {
                            continue;
                        }
                        let col = &acts[e].cols[beta];
                        for (alpha, c) in col.iter().enumerate() {
                            if !c.is_zero() {
                                v[jj * r + alpha] = c.clone();
                            }
                        }
                    }
                    cols.push(v);
                }
            }
            Matrix::from_cols(nv, bk1 * r, cols)
        })
        .collect();
    ChainComplex::new_unchecked(a, -p.hi(), terms, diffs).expect("Hom complex shapes")
}

/// `Hom(P, N_{m+1}) → Hom(P, N_m)`.
fn neighborhood_projection(p: &ChainComplex, big: &Neighborhood, small: &Neighborhood) -> BTreeMap<i64, Matrix> {
    let proj = big.projection(small);
    let a = &big.diagonal.ring;
    p.degrees().map(|k| (-k, Matrix::identity(a, p.rank(k)).kron(&proj))).collect()
}

/// The paper-route tower for `A` over `B` along a variable inclusion (or over `k`).
pub fn paper_route_tower(diag: &Diagonal, mmax: usize, window: Window, max_length: usize) -> Result<DualizingResult> {
    if mmax < 2 {
        return Err(Error::Invalid("the tower needs at least two stages (mmax ≥ 2)".into()));
    }
    let a = diag.ring.clone();
    let nv = a.nvars() as i64;
    let wanted = (window.hi + nv + 1).max(1) as usize;
    let wp = wanted.min(max_length.max(1));
    let p = bimodule_resolution(diag, wp);
    let hi = if p.complete { window.hi } else { wp as i64 - nv - 1 };
    let certified = Window::new(window.lo, window.hi.min(hi));
    if certified.is_empty() {
        return Err(Error::WindowTooNarrow { lo: window.lo, hi: window.hi, max_length });
    }
    let free = FPModule::free(&a, 1);
    let nbs: Vec<Neighborhood> = crate::par::map_range(mmax, |i| Neighborhood::new(diag, i + 1));
    let stages: Vec<Result<(Derived, ComplexResolution, ChainComplex)>> = crate::par::map(&nbs, |nb| {
        let c = hom_into_neighborhood(&p.complex, nb);
        let (d, res) = derived_hom_complex(&c, &free, certified, max_length)?;
        Ok((d, res, c))
    });
    let stages = stages.into_iter().collect::<Result<Vec<_>>>()?;
    let maps: Vec<Result<ChainMap>> = crate::par::map_range(mmax - 1, |i| {
        let h = neighborhood_projection(&p.complex, &nbs[i + 1], &nbs[i]);
        let psi = lift_between(&stages[i + 1].1, &stages[i].1, &h)?;
        Ok(hom_map_into(&psi, &free, &stages[i].0.complex, &stages[i + 1].0.complex))
    });
    let maps = maps.into_iter().collect::<Result<Vec<_>>>()?;
    let degrees: Vec<i64> = certified.degrees().collect();
    let complexes: Vec<ChainComplex> = stages.iter().map(|s| s.0.complex.clone()).collect();
    let tower = Tower::new((1..=mmax).collect(), complexes, maps, &degrees);
    let homology: BTreeMap<i64, FPModule> =
        tower.degrees().into_iter().filter_map(|d| tower.colimit(d).map(|m| (d, m))).collect();
    let hh = Hochschild {
        diagonal: diag.clone(),
        complex: restrict_to_diagonal(diag, &p.complex),
        resolution: p,
        certified,
    };
    Ok(DualizingResult {
        route: Route::Paper,
        ring: a,
        certified,
        homology,
        over_base: None,
        tower: Some(tower),
        hochschild: Some(hh),
        mmax,
        max_length,
    })
}

/// `ω_{A/k}` by the diagonal formula; fails with `NotStabilized` if a degree is undetermined.
pub fn dualizing_paper_route(a: &Ring, mmax: usize, window: Window, max_length: usize) -> Result<DualizingResult> {
    paper_route_tower(&Diagonal::absolute(a), mmax, window, max_length)?.require_stable()
}

/// `RHom_B(A, B)[dim B]` along a finite map `f : B → A`, with its `A`-structure when `A`
/// is free over `B` or a quotient of `B`.
pub fn dualizing_oracle_route(f: &RingMap, window: Window, max_length: usize) -> Result<DualizingResult> {
    let push = finiteness_certificate(f)?;
    let b = &f.source;
    let a = &f.target;
    let d = b.dimension() as i64;
    let shifted = Window::new(window.lo - d, window.hi - d);
    let rhom = derived_hom(&push.module, &FPModule::free(b, 1), shifted, max_length)?;
    let over_base: BTreeMap<i64, FPModule> = rhom.all_homology().into_iter().map(|(e, h)| (e + d, h.module)).collect();
    let mut homology = BTreeMap::new();
    if push.module.is_free_presentation() {
        let dual = dual_of_free_algebra(f)?;
        for &e in over_base.keys() {
            homology.insert(e, if e == d { dual.clone() } else { FPModule::zero(a) });
        }
    } else if is_variable_surjective(f) {
        for (&e, m) in &over_base {
            homology.insert(e, descend_along_surjection(f, m)?);
        }
    }
    Ok(DualizingResult {
        route: Route::Oracle,
        ring: a.clone(),
        certified: window,
        homology,
        over_base: Some(over_base),
        tower: None,
        hochschild: None,
        mmax: 0,
        max_length,
    })
}

/// The map `HH_d(A) → H_d(ω)`: the image of `1 ↦ id_A` pushed through the tower.
pub fn unit_map(result: &DualizingResult, d: i64) -> Result<ModuleMap> {
    let tower = result.tower.as_ref().ok_or_else(|| Error::Invalid("unit map needs the paper route".into()))?;
    tower.composite_to_last(0, d).ok_or(Error::OutsideWindow(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;

    #[test]
    fn affine_line() {
        let a = RingPresentation::polynomial("A", Field::Rational, &["x"]);
        let r = dualizing_paper_route(&a, 4, Window::new(-1, 2), 8).unwrap();
        assert_eq!(r.verdict(0), Some(TowerVerdict::ProZero));
        assert_eq!(r.verdict(1), Some(TowerVerdict::StablyIso));
        let (deg, m) = r.concentrated().unwrap();
        assert_eq!(deg, 1);
        assert_eq!(m.free_rank(), Some(1));
        assert!(unit_map(&r, 1).unwrap().is_iso());
    }

    #[test]
    fn point() {
        let k = RingPresentation::polynomial("k", Field::Rational, &[]);
        let r = dualizing_paper_route(&k, 3, Window::new(-1, 1), 4).unwrap();
        let (deg, m) = r.concentrated().unwrap();
        assert_eq!((deg, m.free_rank()), (0, Some(1)));
    }

    #[test]
    fn oracle_for_the_cusp() {
        let b = RingPresentation::polynomial("B", Field::Rational, &["x"]);
        let a = RingPresentation::parse("C", Field::Rational, &["x", "y"], &["y^2 - x^3"]).unwrap();
        let f = RingMap::new(b, a.clone(), vec![a.var(0)]).unwrap();
        let r = dualizing_oracle_route(&f, Window::new(-1, 2), 8).unwrap();
        let (deg, m) = r.concentrated().unwrap();
        assert_eq!(deg, 1);
        assert_eq!(m.free_rank(), Some(1));
    }

    #[test]
    fn singular_rings_on_the_paper_route() {
        let q = Field::Rational;
        let fat = RingPresentation::parse("F", q, &["x"], &["x^2"]).unwrap();
        let r = dualizing_paper_route(&fat, 5, Window::new(-1, 1), 8).unwrap();
        let (deg, m) = r.concentrated().unwrap();
        assert_eq!(deg, 0);
        assert_eq!(crate::invariants::vector_space_dimension(m), Some(2));
        let cusp = RingPresentation::parse("C", q, &["x", "y"], &["y^2 - x^3"]).unwrap();
        let r = dualizing_paper_route(&cusp, 5, Window::new(0, 2), 8).unwrap();
        assert_eq!(r.verdict(1), Some(TowerVerdict::EssentiallyConstant));
        let (deg, m) = r.concentrated().unwrap();
        assert_eq!((deg, m.free_rank()), (1, Some(1)));
    }
}
