//! Buchberger's algorithm with the Gebauer-Möller pair update and normal selection.

use crate::monomial::{Monomial, ModuleOrder};

use super::vector::{make_key, Key, MVec};

/// Reduces `v` by `basis` (all monic). With `full` the tail is reduced as well.
pub(crate) fn reduce(order: &ModuleOrder, basis: &[&MVec], v: MVec, full: bool) -> MVec {
    let mut p = v;
    let mut done: Vec<super::vector::Term> = Vec::new();
    let mut start = 0usize;
    while let Some(t) = p.terms.get(start) {
        let divisor = basis.iter().find(|g| {
            let l = g.lead().unwrap();
            l.comp == t.comp && l.mono.divides(&t.mono)
        });
        match divisor {
            Some(g) => {
                let l = g.lead().unwrap();
                let m = l.mono.quotient_of(&t.mono);
                let c = t.coeff.clone();
                p = p.sub_mul_from(start, order, &c, &m, g);
                start = 0;
            }
            None => {
                if !full {
                    break;
                }
                done.push(t.clone());
                start += 1;
            }
        }
    }
    done.extend(p.terms.drain(start..));
    MVec { terms: done }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    degree: u32,
    key: Key,
}

fn lead_parts(g: &MVec) -> (usize, &Monomial) {
    let l = g.lead().expect("zero basis element");
    (l.comp, &l.mono)
}

fn s_vector(order: &ModuleOrder, a: &MVec, b: &MVec, lcm: &Monomial) -> MVec {
    let (_, la) = lead_parts(a);
    let (_, lb) = lead_parts(b);
    let ma = la.quotient_of(lcm);
    let mb = lb.quotient_of(lcm);
    let one = a.lead().unwrap().coeff.field().one();
    let zero = MVec::default();
    let left = zero.sub_mul(order, &(-&one), &ma, a);
    left.sub_mul(order, &one, &mb, b)
}

struct State<'a> {
    order: &'a ModuleOrder,
    rank_one: bool,
    polys: Vec<MVec>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State<'_> {
    fn update(&mut self, h: usize) {
        let (ch, lh) = {
            let (c, m) = lead_parts(&self.polys[h]);
            (c, m.clone())
        };
        let candidates: Vec<(usize, Monomial)> = (0..h)
            .filter(|&g| self.active[g])
            .filter_map(|g| {
                let (cg, lg) = lead_parts(&self.polys[g]);
                (cg == ch).then(|| (g, lh.lcm(lg)))
            })
            .collect();

        let coprime = |g: usize| -> bool {
            self.rank_one && lead_parts(&self.polys[g]).1.is_coprime(&lh)
        };

        // Chain criterion among the new pairs themselves.
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (idx, (g, l)) in candidates.iter().enumerate() {
            if coprime(*g) {
                kept.push((*g, l.clone()));
                continue;
            }
            let dominated_later = candidates[idx + 1..].iter().any(|(_, l2)| l2.divides(l));
            let dominated_kept = kept.iter().any(|(_, l2)| l2.divides(l));
            if !dominated_later && !dominated_kept {
                kept.push((*g, l.clone()));
            }
        }
        // Drop pairs killed by the product criterion.
        let new_pairs: Vec<(usize, Monomial)> = kept.into_iter().filter(|(g, _)| !coprime(*g)).collect();

        // Old pairs whose lcm is strictly dominated through h.
        let polys = &self.polys;
        self.pairs.retain(|p| {
            let (cp, _) = lead_parts(&polys[p.i]);
            if cp != ch || !lh.divides(&p.lcm) {
                return true;
            }
            let li = lead_parts(&polys[p.i]).1.lcm(&lh);
            let lj = lead_parts(&polys[p.j]).1.lcm(&lh);
            li == p.lcm || lj == p.lcm
        });

        for (g, lcm) in new_pairs {
            let key = make_key(self.order, ch, &lcm);
            self.pairs.push(Pair { i: g, j: h, degree: lcm.degree(), lcm, key });
        }

        for g in 0..h {
            if self.active[g] {
                let (cg, lg) = lead_parts(&self.polys[g]);
                if cg == ch && lh.divides(lg) {
                    self.active[g] = false;
                }
            }
        }
        self.active.push(true);
    }

    fn basis_refs(&self) -> Vec<&MVec> {
        self.polys.iter().zip(&self.active).filter(|(_, a)| **a).map(|(p, _)| p).collect()
    }

    fn add(&mut self, v: MVec) {
        let reduced = {
            let basis = self.basis_refs();
            reduce(self.order, &basis, v, true)
        };
        if reduced.is_zero() {
            return;
        }
        let mut r = reduced;
        r.make_monic();
        self.polys.push(r);
        let h = self.polys.len() - 1;
        self.update(h);
    }

    fn select(&mut self) -> Option<Pair> {
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.degree
                    .cmp(&b.degree)
                    .then_with(|| a.key.cmp(&b.key))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }
}

/// Computes the reduced Gröbner basis of the submodule generated by `gens`.
///
/// The result is monic, inter-reduced and sorted by ascending leading term.
pub(crate) fn buchberger(order: &ModuleOrder, rank: usize, gens: Vec<MVec>) -> Vec<MVec> {
    let mut st = State { order, rank_one: rank == 1, polys: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    for g in gens {
        if !g.is_zero() {
            st.add(g);
        }
    }
    while let Some(pair) = st.select() {
        let s = s_vector(order, &st.polys[pair.i], &st.polys[pair.j], &pair.lcm);
        st.add(s);
    }
    let mut basis: Vec<MVec> = st.polys.iter().zip(&st.active).filter(|(_, a)| **a).map(|(p, _)| p.clone()).collect();
    interreduce(order, &mut basis);
    basis
}

/// Turns a minimal basis (no lead divides another) into the reduced one.
pub(crate) fn interreduce(order: &ModuleOrder, basis: &mut Vec<MVec>) {
    basis.sort_by(|a, b| a.lead().unwrap().key.cmp(&b.lead().unwrap().key));
    // Drop elements whose leads are divisible by another lead.
    let mut minimal: Vec<MVec> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let (cg, lg) = lead_parts(g);
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let (ch, lh) = lead_parts(h);
            j != i && ch == cg && lh.divides(lg) && (lh != lg || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let n = minimal.len();
    for i in 0..n {
        let g = minimal[i].clone();
        let others: Vec<&MVec> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h).collect();
        let lead = MVec { terms: vec![g.terms[0].clone()] };
        let tail = MVec { terms: g.terms[1..].to_vec() };
        let tail = reduce(order, &others, tail, true);
        let mut terms = lead.terms;
        terms.extend(tail.terms);
        let mut r = MVec { terms };
        r.make_monic();
        minimal[i] = r;
    }
    *basis = minimal;
}

/// Checks Buchberger's criterion directly: every S-vector reduces to zero.
pub(crate) fn all_s_vectors_reduce(order: &ModuleOrder, basis: &[MVec]) -> bool {
    let refs: Vec<&MVec> = basis.iter().collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (ci, li) = lead_parts(&basis[i]);
            let (cj, lj) = lead_parts(&basis[j]);
            if ci != cj {
                continue;
            }
            let lcm = li.lcm(lj);
            let s = s_vector(order, &basis[i], &basis[j], &lcm);
            if !reduce(order, &refs, s, false).is_zero() {
                return false;
            }
        }
    }
    true
}
