//! Bounded chain complexes of finitely presented modules, homologically indexed.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{FPModule, ModuleMap, Subquotient};
use crate::ring::Ring;

/// `C_lo ← C_{lo+1} ← … ← C_hi` with `d_i : C_i → C_{i-1}`.
#[derive(Clone)]
pub struct ChainComplex {
    ring: Ring,
    lo: i64,
    terms: Vec<FPModule>,
    /// `diffs[k]` is `d_{lo+k+1}`.
    diffs: Vec<Matrix>,
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranks: Vec<String> = self.terms.iter().map(|t| t.rank().to_string()).collect();
        write!(f, "ChainComplex(degrees {}..={}, ranks [{}])", self.lo, self.hi(), ranks.join(", "))
    }
}

impl ChainComplex {
    /// Validates well-definedness of each differential and `d ∘ d = 0`.
    pub fn new(ring: &Ring, lo: i64, terms: Vec<FPModule>, diffs: Vec<Matrix>) -> Result<Self> {
        let c = Self::new_unchecked(ring, lo, terms, diffs)?;
        c.check()?;
        Ok(c)
    }

    /// Checks only the shapes; used for complexes that are exact by construction.
    pub fn new_unchecked(ring: &Ring, lo: i64, terms: Vec<FPModule>, diffs: Vec<Matrix>) -> Result<Self> {
        if terms.is_empty() {
            return Ok(ChainComplex { ring: ring.clone(), lo, terms, diffs: Vec::new() });
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::InvalidComplex(format!("{} terms need {} differentials", terms.len(), terms.len() - 1)));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.ncols() != terms[k + 1].rank() || d.nrows != terms[k].rank() {
                return Err(Error::InvalidComplex(format!("differential in degree {} has the wrong shape", lo + k as i64 + 1)));
            }
        }
        let diffs = crate::par::map(&diffs, |d| d.reduced(ring));
        Ok(ChainComplex { ring: ring.clone(), lo, terms, diffs })
    }

    pub fn zero(ring: &Ring) -> Self {
        ChainComplex { ring: ring.clone(), lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// A module placed in one degree.
    pub fn single(m: FPModule, degree: i64) -> Self {
        ChainComplex { ring: m.ring().clone(), lo: degree, terms: vec![m], diffs: Vec::new() }
    }

    /// Recheck of the defining conditions.
    pub fn check(&self) -> Result<()> {
        let checks = crate::par::map_range(self.diffs.len(), |k| {
            let d = &self.diffs[k];
            let (src, tgt) = (&self.terms[k + 1], &self.terms[k]);
            for (i, r) in src.relations().iter().enumerate() {
                if !tgt.is_zero_element(&d.apply(r)) {
                    return Err(Error::InvalidComplex(format!(
                        "d_{} does not respect relation {i}",
                        self.lo + k as i64 + 1
                    )));
                }
            }
            if k + 1 < self.diffs.len() {
                let dd = d.mul(&self.diffs[k + 1]);
                for col in &dd.cols {
                    if !tgt.is_zero_element(col) {
                        return Err(Error::InvalidComplex(format!("d∘d is nonzero at degree {}", self.lo + k as i64 + 2)));
                    }
                }
            }
            Ok(())
        });
        checks.into_iter().collect()
    }

    /// `d ∘ d = 0` everywhere.
    pub fn is_complex(&self) -> bool {
        self.check().is_ok()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn term(&self, i: i64) -> FPModule {
        if self.terms.is_empty() || i < self.lo || i > self.hi() {
            return FPModule::zero(&self.ring);
        }
        self.terms[(i - self.lo) as usize].clone()
    }

    pub fn rank(&self, i: i64) -> usize {
        if self.terms.is_empty() || i < self.lo || i > self.hi() {
            0
        } else {
            self.terms[(i - self.lo) as usize].rank()
        }
    }

    /// `d_i : C_i → C_{i-1}` (a zero matrix outside the stored range).
    pub fn diff(&self, i: i64) -> Matrix {
        if !self.terms.is_empty() && i > self.lo && i <= self.hi() {
            return self.diffs[(i - self.lo - 1) as usize].clone();
        }
        Matrix::zero(self.ring.nvars(), self.rank(i - 1), self.rank(i))
    }

    pub fn terms(&self) -> &[FPModule] {
        &self.terms
    }

    /// Every term is free.
    pub fn is_free(&self) -> bool {
        self.terms.iter().all(|t| t.is_free_presentation())
    }

    /// `C[k]`: the term of degree `i` becomes the term of degree `i + k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        ChainComplex { ring: self.ring.clone(), lo: self.lo + k, terms: self.terms.clone(), diffs: self.diffs.clone() }
    }

    /// `ker d_i / im d_{i+1}` as a subquotient of the cover of `C_i`.
    pub fn homology(&self, i: i64) -> Subquotient {
        let ci = self.term(i);
        let d = self.diff(i);
        let target = self.term(i - 1);
        let kernel = ModuleMap::new_unchecked(ci.clone(), target, d).kernel_generators();
        let mut zero = ci.relations().to_vec();
        zero.extend(self.diff(i + 1).cols);
        Subquotient::new(&self.ring, ci.rank(), kernel, zero)
    }

    /// Homology in every degree of the complex.
    pub fn all_homology(&self) -> BTreeMap<i64, Subquotient> {
        let degs: Vec<i64> = self.degrees().collect();
        degs.iter().copied().zip(crate::par::map(&degs, |&i| self.homology(i))).collect()
    }

    /// Brutal truncation to degrees in `[lo, hi]`.
    pub fn truncate(&self, lo: i64, hi: i64) -> ChainComplex {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi());
        if self.terms.is_empty() || lo > hi {
            return ChainComplex::zero(&self.ring);
        }
        let terms = (lo..=hi).map(|i| self.term(i)).collect();
        let diffs = (lo + 1..=hi).map(|i| self.diff(i)).collect();
        ChainComplex { ring: self.ring.clone(), lo, terms, diffs }
    }

    /// Direct sum of complexes.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let terms = (lo..=hi).map(|i| self.term(i).direct_sum(&other.term(i))).collect();
        let diffs = (lo + 1..=hi).map(|i| self.diff(i).direct_sum(&other.diff(i))).collect();
        ChainComplex { ring: self.ring.clone(), lo, terms, diffs }
    }
}

/// A degree-preserving chain map given by matrices on the covers.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub maps: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    /// Validates commutation with the differentials.
    pub fn new(source: ChainComplex, target: ChainComplex, maps: BTreeMap<i64, Matrix>) -> Result<Self> {
        let f = ChainMap { source, target, maps };
        for i in f.source.degrees() {
            let lhs = f.target.diff(i).mul(&f.component(i));
            let rhs = f.component(i - 1).mul(&f.source.diff(i));
            let diff = lhs.add(&rhs.neg());
            let tgt = f.target.term(i - 1);
            if diff.cols.iter().any(|c| !tgt.is_zero_element(c)) {
                return Err(Error::InvalidMap(format!("chain map does not commute at degree {i}")));
            }
        }
        Ok(f)
    }

    pub fn new_unchecked(source: ChainComplex, target: ChainComplex, maps: BTreeMap<i64, Matrix>) -> Self {
        ChainMap { source, target, maps }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let maps = c.degrees().map(|i| (i, Matrix::identity(c.ring(), c.rank(i)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn component(&self, i: i64) -> Matrix {
        match self.maps.get(&i) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.source.ring().nvars(), self.target.rank(i), self.source.rank(i)),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap) -> ChainMap {
        let ring = self.source.ring().clone();
        let maps = first
            .source
            .degrees()
            .map(|i| (i, self.component(i).mul(&first.component(i)).reduced(&ring)))
            .collect();
        ChainMap { source: first.source.clone(), target: self.target.clone(), maps }
    }

    /// The map induced on `H_i`, between the given homology subquotients.
    pub fn on_homology(&self, i: i64, source_h: &Subquotient, target_h: &Subquotient) -> Result<ModuleMap> {
        source_h.induced(target_h, &self.component(i))
    }

    /// Whether `H_i` of the map is an isomorphism for every `i` in the window.
    pub fn is_quasi_iso(&self, lo: i64, hi: i64) -> bool {
        (lo..=hi).all(|i| {
            let a = self.source.homology(i);
            let b = self.target.homology(i);
            self.on_homology(i, &a, &b).map(|m| m.is_iso()).unwrap_or(false)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;

    #[test]
    fn koszul_homology() {
        let r = RingPresentation::polynomial("R", Field::Rational, &["x", "y"]);
        let (x, y) = (r.var(0), r.var(1));
        let d1 = Matrix::from_rows(2, vec![vec![x.clone(), y.clone()]]);
        let d2 = Matrix::from_cols(2, 2, vec![vec![-&y, x.clone()]]);
        let c = ChainComplex::new(
            &r,
            0,
            vec![FPModule::free(&r, 1), FPModule::free(&r, 2), FPModule::free(&r, 1)],
            vec![d1, d2],
        )
        .unwrap();
        assert!(c.homology(1).is_zero());
        assert!(c.homology(2).is_zero());
        let h0 = c.homology(0);
        assert_eq!(h0.module.rank(), 1);
        assert!(!h0.is_zero());
        let bad = Matrix::from_cols(2, 2, vec![vec![y.clone(), x.clone()]]);
        let d1 = Matrix::from_rows(2, vec![vec![x, y]]);
        assert!(ChainComplex::new(
            &r,
            0,
            vec![FPModule::free(&r, 1), FPModule::free(&r, 2), FPModule::free(&r, 1)],
            vec![d1, bad]
        )
        .is_err());
        assert!(ChainComplex::zero(&r).homology(0).is_zero());
    }
}
