//! Free resolutions of modules and of bounded complexes, and lifts of chain maps.

use std::collections::BTreeMap;

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::groebner::syzygies;
use crate::matrix::{is_zero_vector, Matrix, Vector};
use crate::module::{FPModule, Subquotient};
use crate::poly::Poly;
use crate::ring::Ring;

/// A free resolution `F_L → … → F_0 → M`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: ChainComplex,
    /// `F_0 → M` on covers (the inclusion of the pruned generators).
    pub augmentation: Matrix,
    /// The original generators of `M` written in the basis of `F_0`.
    pub cover_to_f0: Matrix,
    /// The syzygies ran out before the length bound, so the resolution is exact everywhere.
    pub complete: bool,
}

impl Resolution {
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.complex.degrees().map(|i| self.complex.rank(i)).collect()
    }

    pub fn length(&self) -> usize {
        self.complex.hi().max(0) as usize
    }
}

/// Iterated syzygies, pruned at each step so no differential has a scalar unit entry.
pub fn free_resolution(m: &FPModule, length: usize) -> Resolution {
    let ring = m.ring().clone();
    let nv = ring.nvars();
    let pruned = m.prune();
    let a0 = pruned.module.rank();
    let mut terms = vec![FPModule::free(&ring, a0)];
    let mut diffs = Vec::new();
    let mut gens: Vec<Vector> = pruned.module.relations().to_vec();
    let mut prev_rank = a0;
    for _ in 1..=length {
        if gens.is_empty() {
            break;
        }
        let rels = syzygies(ring.field(), nv, prev_rank, &gens, &ring.ideal_vectors(prev_rank));
        let p = FPModule::new(&ring, gens.len(), rels).prune();
        let kept: Vec<Vector> = p.kept.iter().map(|&i| gens[i].clone()).collect();
        let rank = kept.len();
        diffs.push(Matrix::from_cols(nv, prev_rank, kept));
        terms.push(FPModule::free(&ring, rank));
        gens = p.module.relations().to_vec();
        prev_rank = rank;
    }
    let complex = ChainComplex::new_unchecked(&ring, 0, terms, diffs).expect("shapes are consistent");
    Resolution { complex, augmentation: pruned.to_old, cover_to_f0: pruned.to_new, complete: gens.is_empty() }
}

/// A free complex `F` with a quasi-isomorphism `ε : F → C`, exact through degree `top - 1`.
#[derive(Clone, Debug)]
pub struct ComplexResolution {
    pub source: ChainComplex,
    pub free: ChainComplex,
    pub eps: BTreeMap<i64, Matrix>,
    pub top: i64,
    /// `None` when `C` was already free and `F = C`.
    cycles: Option<BTreeMap<i64, Subquotient>>,
}

impl ComplexResolution {
    /// Degrees in which `F → C` is known to induce isomorphisms on homology.
    pub fn exact_through(&self) -> i64 {
        if self.cycles.is_none() {
            i64::MAX
        } else {
            self.top - 1
        }
    }
}

fn block_vector(a: &[Poly], b: &[Poly]) -> Vector {
    let mut v = a.to_vec();
    v.extend(b.iter().cloned());
    v
}

/// Resolves a bounded complex by free modules up to degree `top`, using mapping cones:
/// the generators of `F_n` map onto the cycles of `cone(ε)` in degree `n`.
pub fn resolve_complex(c: &ChainComplex, top: i64) -> ComplexResolution {
    let ring: Ring = c.ring().clone();
    let nv = ring.nvars();
    if c.is_free() {
        let free = c.truncate(c.lo(), top.max(c.hi()));
        let eps = free.degrees().map(|i| (i, Matrix::identity(&ring, free.rank(i)))).collect();
        return ComplexResolution { source: c.clone(), free, eps, top: i64::MAX, cycles: None };
    }
    let lo = c.lo();
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    let mut dfree: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut eps: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut cycles: BTreeMap<i64, Subquotient> = BTreeMap::new();
    for n in lo..=top {
        let a_prev = ranks.get(&(n - 1)).copied().unwrap_or(0);
        let a_prev2 = ranks.get(&(n - 2)).copied().unwrap_or(0);
        let cn = c.term(n);
        let cprev = c.term(n - 1);
        let b = cn.rank();
        let bprev = cprev.rank();
        let zero_poly = Poly::zero(nv);
        // Columns of the cone differential cone_n → cone_{n-1}.
        let mut cols: Vec<Vector> = Vec::with_capacity(a_prev + b);
        if a_prev > 0 {
            let d = dfree.get(&(n - 1)).cloned().unwrap_or_else(|| Matrix::zero(nv, a_prev2, a_prev));
            let e = eps.get(&(n - 1)).cloned().unwrap_or_else(|| Matrix::zero(nv, bprev, a_prev));
            for k in 0..a_prev {
                let f: Vector = d.cols[k].iter().map(|p| -p).collect();
                cols.push(block_vector(&f, &e.cols[k]));
            }
        }
        let dc = c.diff(n);
        for k in 0..b {
            cols.push(block_vector(&vec![zero_poly.clone(); a_prev2], &dc.cols[k]));
        }
        let tgt_rank = a_prev2 + bprev;
        let mut untracked: Vec<Vector> = ring.ideal_vectors(tgt_rank);
        for r in cprev.relations() {
            untracked.push(block_vector(&vec![zero_poly.clone(); a_prev2], r));
        }
        let candidates: Vec<Vector> = if tgt_rank == 0 {
            (0..a_prev + b).map(|i| crate::matrix::unit_vector(&ring, a_prev + b, i)).collect()
        } else {
            syzygies(ring.field(), nv, tgt_rank, &cols, &untracked)
        };
        let zero: Vec<Vector> =
            cn.relations().iter().map(|r| block_vector(&vec![zero_poly.clone(); a_prev], r)).collect();
        let sq = Subquotient::new(&ring, a_prev + b, candidates, zero);
        let an = sq.gens.len();
        let dcols: Vec<Vector> = sq.gens.iter().map(|z| z[..a_prev].iter().map(|p| -p).collect()).collect();
        let ecols: Vec<Vector> = sq.gens.iter().map(|z| z[a_prev..].to_vec()).collect();
        dfree.insert(n, Matrix::from_cols(nv, a_prev, dcols));
        eps.insert(n, Matrix::from_cols(nv, b, ecols));
        ranks.insert(n, an);
        cycles.insert(n, sq);
    }
    let terms: Vec<FPModule> = (lo..=top).map(|n| FPModule::free(&ring, ranks[&n])).collect();
    let diffs: Vec<Matrix> = (lo + 1..=top).map(|n| dfree[&n].clone()).collect();
    let free = ChainComplex::new_unchecked(&ring, lo, terms, diffs).expect("cone construction shapes");
    ComplexResolution { source: c.clone(), free, eps, top, cycles: Some(cycles) }
}

/// Lifts a chain map `g : F' → C` from a free complex through `ε : F → C`, giving
/// `ψ : F' → F` with `ε ψ = g` exactly, in degrees up to the resolution's top.
pub fn lift_chain_map(
    res: &ComplexResolution,
    fsrc: &ChainComplex,
    g: &BTreeMap<i64, Matrix>,
) -> Result<BTreeMap<i64, Matrix>> {
    let ring = res.free.ring().clone();
    let nv = ring.nvars();
    let mut psi: BTreeMap<i64, Matrix> = BTreeMap::new();
    let Some(cycles) = &res.cycles else {
        for n in fsrc.degrees() {
            let m = g.get(&n).cloned().unwrap_or_else(|| Matrix::zero(nv, res.free.rank(n), fsrc.rank(n)));
            psi.insert(n, m);
        }
        return Ok(psi);
    };
    for n in fsrc.degrees() {
        if n > res.top {
            break;
        }
        let an = fsrc.rank(n);
        let a_prev = res.free.rank(n - 1);
        let gn = g.get(&n).cloned().unwrap_or_else(|| Matrix::zero(nv, res.source.rank(n), an));
        let Some(sq) = cycles.get(&n) else {
            psi.insert(n, Matrix::zero(nv, 0, an));
            continue;
        };
        let dsrc = fsrc.diff(n);
        let prev = psi.get(&(n - 1)).cloned().unwrap_or_else(|| Matrix::zero(nv, a_prev, fsrc.rank(n - 1)));
        let cols: Vec<Result<Vector>> = crate::par::map_range(an, |k| {
            let back: Vector = prev.apply(&dsrc.cols[k]).iter().map(|p| -p).collect();
            let z = block_vector(&back, &gn.cols[k]);
            if is_zero_vector(&z) {
                return Ok(vec![Poly::zero(nv); sq.gens.len()]);
            }
            sq.express(&z).ok_or_else(|| Error::InvalidMap(format!("chain map does not lift in degree {n}")))
        });
        let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
        psi.insert(n, Matrix::from_cols(nv, sq.gens.len(), cols));
    }
    Ok(psi)
}

/// Lifts a map of complexes `h : C → C'` to resolutions `F → F'`.
pub fn lift_between(
    src: &ComplexResolution,
    tgt: &ComplexResolution,
    h: &BTreeMap<i64, Matrix>,
) -> Result<BTreeMap<i64, Matrix>> {
    let ring = src.free.ring().clone();
    let nv = ring.nvars();
    let mut g = BTreeMap::new();
    for n in src.free.degrees() {
        let e = src.eps.get(&n).cloned().unwrap_or_else(|| Matrix::zero(nv, src.source.rank(n), src.free.rank(n)));
        let hn = h.get(&n).cloned().unwrap_or_else(|| Matrix::zero(nv, tgt.source.rank(n), src.source.rank(n)));
        g.insert(n, hn.mul(&e).reduced(&ring));
    }
    lift_chain_map(tgt, &src.free, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;

    #[test]
    fn koszul_betti_numbers() {
        let r = RingPresentation::polynomial("R", Field::Rational, &["x", "y"]);
        let k = FPModule::cyclic(&r, &[r.var(0), r.var(1)]);
        let res = free_resolution(&k, 4);
        assert_eq!(res.betti_numbers(), vec![1, 2, 1]);
        assert!(res.complex.is_complex());
        assert!(res.complex.homology(1).is_zero());
    }

    #[test]
    fn periodic_over_fat_point() {
        let a = RingPresentation::parse("F", Field::Rational, &["x"], &["x^2"]).unwrap();
        let k = FPModule::cyclic(&a, &[a.var(0)]);
        let res = free_resolution(&k, 5);
        assert_eq!(res.betti_numbers(), vec![1; 6]);
        for i in 1..5 {
            assert!(res.complex.homology(i).is_zero(), "degree {i}");
        }
    }

    #[test]
    fn cone_resolution_of_a_module() {
        let r = RingPresentation::polynomial("R", Field::Rational, &["x", "y"]);
        let k = FPModule::cyclic(&r, &[r.var(0), r.var(1)]);
        let c = ChainComplex::single(k, 0);
        let res = resolve_complex(&c, 3);
        assert_eq!(res.free.rank(0), 1);
        assert_eq!(res.free.rank(1), 2);
        assert_eq!(res.free.rank(2), 1);
        assert!(res.free.is_complex());
        let id: BTreeMap<i64, Matrix> = [(0, Matrix::identity(&r, 1))].into_iter().collect();
        let psi = lift_between(&res, &res, &id).unwrap();
        assert_eq!(psi[&0], Matrix::identity(&r, 1));
    }
}
