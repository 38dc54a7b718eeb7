//! Convolution of bimodules: `F ⋆ G = π_{13*}(π_{12}^* F ⊗^L π_{23}^* G)`.
//!
//! Both factors are moved into `A ⊗ A ⊗ A` (variables `x`, `y`, `z`), tensored there over
//! the middle copy, and pushed forward to the outer copies, which requires each homology
//! module to be finite over `A ⊗ A`.

use std::collections::BTreeMap;

use crate::derived::{tensor_free_with, Window};
use crate::error::{Error, Result};
use crate::finite::Pushforward;
use crate::matrix::{Matrix, Vector};
use crate::module::{FPModule, ModuleMap, Subquotient};
use crate::poly::{Poly, PolyRing};
use crate::resolve::{free_resolution, Resolution};
use crate::ring::{Ring, RingMap, RingPresentation};

use super::{Bimodule, Diagonal};

/// `A ⊗ A ⊗ A` with the embeddings of the factors of `F` and `G`.
#[derive(Clone, Debug)]
pub struct Triple {
    pub ring: Ring,
    /// `(x, x') ↦ (x, y)`.
    pub first: RingMap,
    /// `(x, x') ↦ (y, z)`.
    pub second: RingMap,
    /// `(x, x') ↦ (x, z)`.
    pub outer: RingMap,
}

impl Triple {
    pub fn new(diag: &Diagonal) -> Result<Triple> {
        if diag.ndoubled() != diag.nvars() {
            return Err(Error::Invalid("convolution is implemented for absolute diagonals".into()));
        }
        let a = &diag.ring;
        let n = a.nvars();
        let mut names = Vec::with_capacity(3 * n);
        for suffix in ["", "'", "''"] {
            names.extend(a.variables().iter().map(|v| format!("{v}{suffix}")));
        }
        let weights: Vec<i64> = (0..3).flat_map(|_| a.ambient.weights.iter().copied()).collect();
        let ambient = PolyRing::with_names(a.field(), names).expect("fresh names").with_weights(weights);
        let mut rels = Vec::new();
        for block in 0..3 {
            let pos: Vec<usize> = (block * n..(block + 1) * n).collect();
            rels.extend(a.relations().iter().map(|r| r.embed(3 * n, &pos)));
        }
        let ring = RingPresentation::new(format!("{}^3", a.label), ambient, rels);
        let embed = |lo: usize, hi: usize| {
            let images: Vec<Poly> = (lo * n..(lo + 1) * n).chain(hi * n..(hi + 1) * n).map(|i| ring.var(i)).collect();
            RingMap { source: diag.env.clone(), target: ring.clone(), images }
        };
        Ok(Triple { first: embed(0, 1), second: embed(1, 2), outer: embed(0, 2), ring })
    }

    fn move_module(&self, f: &RingMap, m: &FPModule) -> FPModule {
        let rels = m.relations().iter().map(|r| f.apply_vec(r)).collect();
        FPModule::new(&self.ring, m.rank(), rels)
    }
}

/// Homology of `F ⋆ G` in a window of non-negative degrees, each as a bimodule.
#[derive(Clone, Debug)]
pub struct Convolution {
    pub triple: Triple,
    pub resolution: Resolution,
    /// `H_d` over the triple ring.
    pub homology: BTreeMap<i64, Subquotient>,
    /// `H_d` pushed forward to `A ⊗ A`.
    pub pushed: BTreeMap<i64, Pushforward>,
    pub diagonal: Diagonal,
}

impl Convolution {
    /// `H_d(F ⋆ G)` as a bimodule.
    pub fn bimodule(&self, d: i64) -> Option<Bimodule> {
        self.pushed.get(&d).map(|p| Bimodule { diagonal: self.diagonal.clone(), module: p.module.clone() })
    }

    /// Expresses a vector of the triple-ring tensor term in degree `d` in the pushed-forward
    /// generators.
    pub fn express(&self, d: i64, v: &[Poly]) -> Option<Vector> {
        let coords = self.homology.get(&d)?.express(v)?;
        Some(self.pushed[&d].express(&coords))
    }
}

pub fn convolution(f: &Bimodule, g: &Bimodule, window: Window, max_length: usize) -> Result<Convolution> {
    if !f.diagonal.same(&g.diagonal) {
        return Err(Error::RingMismatch("convolution factors live over different enveloping rings".into()));
    }
    let triple = Triple::new(&f.diagonal)?;
    let fm = triple.move_module(&triple.first, &f.module);
    let gm = triple.move_module(&triple.second, &g.module);
    let window = window.intersect(&Window::new(0, window.hi));
    if window.is_empty() {
        return Err(Error::WindowTooNarrow { lo: window.lo, hi: window.hi, max_length });
    }
    let length = (window.hi + 1) as usize;
    if length > max_length + 1 {
        return Err(Error::WindowTooNarrow { lo: window.lo, hi: window.hi, max_length });
    }
    let resolution = free_resolution(&fm, length);
    let complex = tensor_free_with(&resolution.complex, &gm);
    let degrees: Vec<i64> = window.degrees().collect();
    let homology: BTreeMap<i64, Subquotient> =
        degrees.iter().copied().zip(crate::par::map(&degrees, |&d| complex.homology(d))).collect();
    let mut pushed = BTreeMap::new();
    for (&d, h) in &homology {
        pushed.insert(d, Pushforward::new(&triple.outer, &h.module)?);
    }
    Ok(Convolution { triple, resolution, homology, pushed, diagonal: f.diagonal.clone() })
}

/// The unit map `G → O_Δ ⋆ G` in degree 0, `g_j ↦ 1 ⊗ g_j`.
pub fn left_unit_map(g: &Bimodule, conv: &Convolution) -> Result<ModuleMap> {
    let ring = &g.diagonal.env;
    let n0 = conv.resolution.complex.rank(0);
    let lift = &conv.resolution.cover_to_f0;
    if n0 != 1 || lift.nrows != 1 {
        return Err(Error::InvalidMap("left factor is not cyclic".into()));
    }
    let unit = conv.triple.ring.reduce(&lift.cols[0][0]);
    let cols = unit_images(g.module.rank(), |j| {
        let mut v = vec![conv.triple.ring.zero(); g.module.rank()];
        v[j] = unit.clone();
        v
    });
    finish_unit(g, conv, ring, cols)
}

/// The unit map `F → F ⋆ O_Δ` in degree 0, `f_j ↦ f_j ⊗ 1`.
pub fn right_unit_map(f: &Bimodule, conv: &Convolution) -> Result<ModuleMap> {
    let ring = &f.diagonal.env;
    let lift = &conv.resolution.cover_to_f0;
    let cols = unit_images(f.module.rank(), |j| lift.cols[j].clone());
    finish_unit(f, conv, ring, cols)
}

fn unit_images(rank: usize, f: impl Fn(usize) -> Vector) -> Vec<Vector> {
    (0..rank).map(f).collect()
}

fn finish_unit(m: &Bimodule, conv: &Convolution, ring: &Ring, ambient: Vec<Vector>) -> Result<ModuleMap> {
    let target = conv.pushed.get(&0).ok_or(Error::OutsideWindow(0))?;
    let mut cols = Vec::with_capacity(ambient.len());
    for v in &ambient {
        cols.push(conv.express(0, v).ok_or_else(|| Error::InvalidMap("unit element is not a cycle".into()))?);
    }
    let matrix = Matrix::from_cols(ring.nvars(), target.module.rank(), cols);
    ModuleMap::new(m.module.clone(), target.module.clone(), matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonal::Neighborhood;
    use crate::scalar::Field;

    #[test]
    fn unit_laws_on_the_line() {
        let a = RingPresentation::polynomial("A", Field::Rational, &["x"]);
        let d = Diagonal::absolute(&a);
        let o = Bimodule::unit(&d);
        let n2 = Neighborhood::new(&d, 2).bimodule();
        let w = Window::new(0, 1);
        let left = convolution(&o, &n2, w, 4).unwrap();
        assert!(left_unit_map(&n2, &left).unwrap().is_iso());
        assert!(left.homology[&1].is_zero());
        let right = convolution(&n2, &o, w, 4).unwrap();
        assert!(right_unit_map(&n2, &right).unwrap().is_iso());
    }
}
