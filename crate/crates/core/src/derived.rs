//! Derived Hom and derived tensor with explicit certification windows.
//!
//! Cohomological objects are re-indexed homologically once: `Ext^i` sits in degree `-i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{FPModule, Subquotient};
use crate::resolve::{free_resolution, resolve_complex, ComplexResolution};

/// Default resolution length bound.
pub const DEFAULT_LENGTH: usize = 8;

/// A closed range of homological degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub const DEFAULT: Window = Window { lo: -6, hi: 6 };

    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    pub fn contains(&self, d: i64) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn intersect(&self, other: &Window) -> Window {
        Window { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::DEFAULT
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("window `{s}` is not of the form lo:hi"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let lo = a.trim().parse().map_err(|_| bad())?;
        let hi = b.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok(Window { lo, hi })
    }
}

/// `Hom_A(F, N)` for a complex `F` of free modules; `Hom(F_k, N) = N^{a_k}` sits in degree `-k`.
pub fn hom_free_into(f: &ChainComplex, n: &FPModule) -> ChainComplex {
    let ring = f.ring();
    if f.is_empty() {
        return ChainComplex::zero(ring);
    }
    let r = n.rank();
    let id = Matrix::identity(ring, r);
    let terms: Vec<FPModule> = (f.lo()..=f.hi()).rev().map(|k| n.power(f.rank(k))).collect();
    // Degree -k maps to -k-1 by precomposition with d_{k+1}.
    let diffs: Vec<Matrix> = (f.lo()..f.hi()).rev().map(|k| f.diff(k + 1).transpose().kron(&id)).collect();
    ChainComplex::new_unchecked(ring, -f.hi(), terms, diffs).expect("Hom complex shapes")
}

/// `Hom(ψ, N) : Hom(F', N) → Hom(F, N)` for `ψ : F → F'`, between the given Hom complexes.
pub fn hom_map_into(psi: &BTreeMap<i64, Matrix>, n: &FPModule, from: &ChainComplex, to: &ChainComplex) -> ChainMap {
    let id = Matrix::identity(from.ring(), n.rank());
    let maps = psi.iter().map(|(&k, m)| (-k, m.transpose().kron(&id))).collect();
    ChainMap::new_unchecked(from.clone(), to.clone(), maps)
}

/// `F ⊗_A N` for a complex of free modules.
pub fn tensor_free_with(f: &ChainComplex, n: &FPModule) -> ChainComplex {
    let ring = f.ring();
    if f.is_empty() {
        return ChainComplex::zero(ring);
    }
    let id = Matrix::identity(ring, n.rank());
    let terms: Vec<FPModule> = f.degrees().map(|k| n.power(f.rank(k))).collect();
    let diffs: Vec<Matrix> = (f.lo() + 1..=f.hi()).map(|k| f.diff(k).kron(&id)).collect();
    ChainComplex::new_unchecked(ring, f.lo(), terms, diffs).expect("tensor complex shapes")
}

/// A complex computed from a truncated resolution, with the degrees where its homology is
/// certified to be the homology of the derived functor.
#[derive(Clone, Debug)]
pub struct Derived {
    pub complex: ChainComplex,
    pub certified: Window,
}

impl Derived {
    pub fn homology(&self, d: i64) -> Result<Subquotient> {
        if !self.certified.contains(d) {
            return Err(Error::OutsideWindow(d));
        }
        Ok(self.complex.homology(d))
    }

    /// Homology in all certified degrees.
    pub fn all_homology(&self) -> BTreeMap<i64, Subquotient> {
        let degs: Vec<i64> = self.certified.degrees().collect();
        degs.iter().copied().zip(crate::par::map(&degs, |&d| self.complex.homology(d))).collect()
    }
}

/// `RHom_A(M, N)` certified on `window`.
pub fn derived_hom(m: &FPModule, n: &FPModule, window: Window, max_length: usize) -> Result<Derived> {
    derived_hom_complex(&ChainComplex::single(m.clone(), 0), n, window, max_length).map(|(d, _)| d)
}

/// `RHom_A(C, N)` for a bounded complex `C`. Degree `d` needs `F` exact through `-d`, so the
/// resolution must reach degree `-window.lo + 1`.
pub fn derived_hom_complex(
    c: &ChainComplex,
    n: &FPModule,
    window: Window,
    max_length: usize,
) -> Result<(Derived, ComplexResolution)> {
    let top = -window.lo + 1;
    if c.is_empty() {
        return Ok((Derived { complex: ChainComplex::zero(n.ring()), certified: window }, resolve_complex(c, 0)));
    }
    let needed = (top - c.lo()).max(0) as usize;
    if needed > max_length + 1 {
        return Err(Error::WindowTooNarrow { lo: window.lo, hi: window.hi, max_length });
    }
    let res = resolve_complex(c, top.max(c.lo()));
    let complex = hom_free_into(&res.free, n);
    Ok((Derived { complex, certified: window }, res))
}

/// `M ⊗^L_A N` certified on `window`.
pub fn derived_tensor(m: &FPModule, n: &FPModule, window: Window, max_length: usize) -> Result<Derived> {
    if window.hi < 0 {
        return Ok(Derived { complex: ChainComplex::zero(m.ring()), certified: window });
    }
    let length = (window.hi + 1) as usize;
    if length > max_length + 1 {
        return Err(Error::WindowTooNarrow { lo: window.lo, hi: window.hi, max_length });
    }
    let res = free_resolution(m, length);
    Ok(Derived { complex: tensor_free_with(&res.complex, n), certified: window })
}

/// `C ⊗^L_A N` for a bounded complex.
pub fn derived_tensor_complex(c: &ChainComplex, n: &FPModule, window: Window, max_length: usize) -> Result<Derived> {
    if c.is_empty() {
        return Ok(Derived { complex: ChainComplex::zero(n.ring()), certified: window });
    }
    let top = window.hi + 1;
    if (top - c.lo()).max(0) as usize > max_length + 1 {
        return Err(Error::WindowTooNarrow { lo: window.lo, hi: window.hi, max_length });
    }
    let res = resolve_complex(c, top.max(c.lo()));
    Ok(Derived { complex: tensor_free_with(&res.free, n), certified: window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;

    #[test]
    fn ext_of_residue_field_over_line() {
        let r = RingPresentation::polynomial("R", Field::Rational, &["x"]);
        let k = FPModule::cyclic(&r, &[r.var(0)]);
        let a = FPModule::free(&r, 1);
        let d = derived_hom(&k, &a, Window::new(-3, 1), 8).unwrap();
        for (deg, h) in d.all_homology() {
            assert_eq!(!h.is_zero(), deg == -1, "degree {deg}");
        }
        let t = derived_tensor(&k, &k, Window::new(0, 3), 8).unwrap();
        for (deg, h) in t.all_homology() {
            assert_eq!(!h.is_zero(), deg == 0 || deg == 1, "degree {deg}");
        }
    }

    #[test]
    fn window_parsing() {
        assert_eq!("-2:3".parse::<Window>().unwrap(), Window::new(-2, 3));
        assert!("3:1".parse::<Window>().is_err());
    }
}
