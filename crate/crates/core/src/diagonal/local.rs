//! Local cohomology `RΓ_I M` as the tower `Hom(K(t_1^m, …, t_r^m), M)`.

use std::collections::BTreeMap;

use crate::complex::{ChainComplex, ChainMap};
use crate::derived::{hom_free_into, hom_map_into, Window};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::FPModule;
use crate::poly::Poly;
use crate::ring::Ring;
use crate::tower::Tower;

/// Subsets of `{0..r}` of size `k`, in lexicographic order.
fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, k, &mut Vec::new(), &mut out);
    out
}

/// The Koszul complex on `t`: `K_k = Λ^k R^r` with `d e_S = Σ_i (-1)^i t_{s_i} e_{S - s_i}`.
pub fn koszul_complex(ring: &Ring, t: &[Poly]) -> ChainComplex {
    let r = t.len();
    let nv = ring.nvars();
    let bases: Vec<Vec<Vec<usize>>> = (0..=r).map(|k| subsets(r, k)).collect();
    let terms: Vec<FPModule> = bases.iter().map(|b| FPModule::free(ring, b.len())).collect();
    let diffs: Vec<Matrix> = (1..=r)
        .map(|k| {
            let cols = bases[k]
                .iter()
                .map(|s| {
                    let mut v = vec![Poly::zero(nv); bases[k - 1].len()];
                    for (pos, &i) in s.iter().enumerate() {
                        let mut face = s.clone();
                        face.remove(pos);
                        let row = bases[k - 1].iter().position(|b| *b == face).expect("face is a subset");
                        let term = if pos % 2 == 0 { t[i].clone() } else { -&t[i] };
                        v[row] = &v[row] + &term;
                    }
                    v
                })
                .collect();
            Matrix::from_cols(nv, bases[k - 1].len(), cols)
        })
        .collect();
    ChainComplex::new_unchecked(ring, 0, terms, diffs).expect("Koszul shapes")
}

/// `K(t^{m+1}) → K(t^m)`: `e_S ↦ (Π_{i ∈ S} t_i) e_S`.
fn koszul_transition(ring: &Ring, t: &[Poly]) -> BTreeMap<i64, Matrix> {
    let r = t.len();
    let nv = ring.nvars();
    (0..=r)
        .map(|k| {
            let basis = subsets(r, k);
            let cols = (0..basis.len())
                .map(|j| {
                    let mut v = vec![Poly::zero(nv); basis.len()];
                    v[j] = basis[j].iter().fold(ring.one(), |acc, &i| ring.mul(&acc, &t[i]));
                    v
                })
                .collect();
            (k as i64, Matrix::from_cols(nv, basis.len(), cols))
        })
        .collect()
}

/// The tower `m ↦ Hom(K(t^m), M)` for `m = 1..=mmax`, with homology in the window.
/// `H^i` sits in homological degree `-i`.
pub fn local_cohomology(m: &FPModule, t: &[Poly], window: Window, mmax: usize) -> Result<Tower> {
    let ring = m.ring().clone();
    if mmax < 2 {
        return Err(Error::Invalid("local cohomology needs at least two stages".into()));
    }
    if t.iter().any(|p| p.nvars() != ring.nvars()) {
        return Err(Error::RingMismatch("ideal generators outside the module's ring".into()));
    }
    let r = t.len() as i64;
    let degrees: Vec<i64> = Window::new(-r, 0).intersect(&window).degrees().collect();
    let field = ring.field();
    let powers = |k: u32| -> Vec<Poly> { t.iter().map(|p| ring.reduce(&p.pow(k, field))).collect() };
    let koszul: Vec<ChainComplex> = crate::par::map_range(mmax, |i| koszul_complex(&ring, &powers(i as u32 + 1)));
    let stages: Vec<ChainComplex> = crate::par::map(&koszul, |k| hom_free_into(k, m));
    let psi = koszul_transition(&ring, t);
    let maps: Vec<ChainMap> = (0..mmax - 1).map(|i| hom_map_into(&psi, m, &stages[i], &stages[i + 1])).collect();
    Ok(Tower::new((1..=mmax).collect(), stages, maps, &degrees))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;
    use crate::tower::TowerVerdict;

    #[test]
    fn supported_module_is_stable() {
        let r = RingPresentation::polynomial("R", Field::Rational, &["x", "y"]);
        let t = vec![&r.var(0) - &r.var(1)];
        let m = FPModule::cyclic(&r, &t);
        let tower = local_cohomology(&m, &t, Window::DEFAULT, 4).unwrap();
        assert_eq!(tower.verdicts[&0], TowerVerdict::StablyIso);
        assert_eq!(tower.verdicts[&-1], TowerVerdict::ProZero);
        let free = FPModule::free(&r, 1);
        let tower = local_cohomology(&free, &t, Window::DEFAULT, 4).unwrap();
        assert!(tower.homology.iter().all(|h| h[&0].is_zero()));
        assert_eq!(tower.verdicts[&-1], TowerVerdict::Undetermined);
        let unit = local_cohomology(&free, &[r.one()], Window::DEFAULT, 3).unwrap();
        assert!(unit.homology.iter().all(|h| h.values().all(|s| s.is_zero())));
    }
}
