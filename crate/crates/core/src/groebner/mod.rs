//! Gröbner bases of ideals and submodules of free modules over a polynomial ring.
//!
//! Everything else in the crate reduces to three questions answered here: normal forms,
//! cofactors of a vector in terms of generators, and syzygies among generators modulo a
//! fixed submodule.

mod buchberger;
mod vector;

use crate::monomial::{Monomial, ModuleOrder, TermOrder};
use crate::poly::Poly;
use crate::scalar::Field;

use vector::MVec;

/// A reduced Gröbner basis of a submodule of `R^rank`, `R = k[x_1..x_nvars]`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    rank: usize,
    order: ModuleOrder,
    elems: Vec<MVec>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.rank == other.rank
            && self.order == other.order
            && self.generators() == other.generators()
    }
}

impl GroebnerBasis {
    pub fn new(nvars: usize, rank: usize, order: ModuleOrder, gens: &[Vec<Poly>]) -> Self {
        let vecs = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), rank, "generator rank");
                MVec::from_polys(&order, g)
            })
            .collect();
        let elems = buchberger::buchberger(&order, rank, vecs);
        GroebnerBasis { nvars, rank, order, elems }
    }

    /// Gröbner basis of an ideal.
    pub fn ideal(nvars: usize, order: TermOrder, gens: &[Poly]) -> Self {
        let gens: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
        Self::new(nvars, 1, ModuleOrder::pot(order), &gens)
    }

    /// Rebuilds a basis from stored generators without rerunning Buchberger.
    ///
    /// Returns `None` unless the generators form a reduced Gröbner basis for `order`.
    pub fn from_reduced(nvars: usize, rank: usize, order: ModuleOrder, gens: &[Vec<Poly>]) -> Option<Self> {
        let mut elems: Vec<MVec> = gens.iter().map(|g| MVec::from_polys(&order, g)).collect();
        if elems.iter().any(|e| e.is_zero() || !e.lead().unwrap().coeff.is_one()) {
            return None;
        }
        let gb = GroebnerBasis { nvars, rank, order, elems: elems.clone() };
        if !gb.is_groebner() {
            return None;
        }
        buchberger::interreduce(&order, &mut elems);
        let reduced = GroebnerBasis { nvars, rank, order, elems };
        (reduced == gb).then_some(reduced)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> ModuleOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn generators(&self) -> Vec<Vec<Poly>> {
        self.elems.iter().map(|e| e.to_polys(self.nvars, self.rank)).collect()
    }

    /// Rank-one convenience: the basis as polynomials.
    pub fn polys(&self) -> Vec<Poly> {
        assert_eq!(self.rank, 1);
        self.generators().into_iter().map(|mut v| v.pop().unwrap()).collect()
    }

    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elems.iter().map(|e| (e.lead().unwrap().comp, e.lead().unwrap().mono.clone())).collect()
    }

    /// Whether the submodule is everything (for ideals: contains 1).
    pub fn is_whole(&self) -> bool {
        (0..self.rank).all(|c| {
            self.elems.iter().any(|e| {
                let l = e.lead().unwrap();
                l.comp == c && l.mono.is_one()
            })
        })
    }

    pub fn normal_form(&self, v: &[Poly]) -> Vec<Poly> {
        let refs: Vec<&MVec> = self.elems.iter().collect();
        let r = buchberger::reduce(&self.order, &refs, MVec::from_polys(&self.order, v), true);
        r.to_polys(self.nvars, self.rank)
    }

    pub fn normal_form_poly(&self, p: &Poly) -> Poly {
        assert_eq!(self.rank, 1);
        self.normal_form(std::slice::from_ref(p)).pop().unwrap()
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        let refs: Vec<&MVec> = self.elems.iter().collect();
        buchberger::reduce(&self.order, &refs, MVec::from_polys(&self.order, v), false).is_zero()
    }

    /// Whether a monomial in component `comp` is a standard monomial (not a leading term multiple).
    pub fn is_standard(&self, comp: usize, m: &Monomial) -> bool {
        !self.elems.iter().any(|e| {
            let l = e.lead().unwrap();
            l.comp == comp && l.mono.divides(m)
        })
    }

    /// Rechecks Buchberger's criterion on the stored basis.
    pub fn is_groebner(&self) -> bool {
        buchberger::all_s_vectors_reduce(&self.order, &self.elems)
    }
}

/// Expresses vectors through tracked generators modulo a submodule of untracked ones, and
/// yields the syzygies among the tracked generators modulo the untracked ones.
///
/// Internally this is one Gröbner basis of `{(g_i, e_i)} ∪ {(u_k, 0)}` in `R^rank ⊕ R^s`
/// under an order in which the first block dominates.
#[derive(Clone, Debug)]
pub struct Lifter {
    nvars: usize,
    rank: usize,
    ntracked: usize,
    gb: GroebnerBasis,
}

impl Lifter {
    pub fn new(field: Field, nvars: usize, rank: usize, tracked: &[Vec<Poly>], untracked: &[Vec<Poly>]) -> Self {
        Self::with_order(field, nvars, rank, tracked, untracked, TermOrder::DegRevLex)
    }

    pub fn with_order(
        field: Field,
        nvars: usize,
        rank: usize,
        tracked: &[Vec<Poly>],
        untracked: &[Vec<Poly>],
        term: TermOrder,
    ) -> Self {
        let s = tracked.len();
        let zero = Poly::zero(nvars);
        let mut gens: Vec<Vec<Poly>> = Vec::with_capacity(s + untracked.len());
        for u in untracked {
            let mut v = u.clone();
            v.resize(rank + s, zero.clone());
            gens.push(v);
        }
        for (i, g) in tracked.iter().enumerate() {
            let mut v = g.clone();
            v.resize(rank + s, zero.clone());
            v[rank + i] = Poly::one(nvars, field);
            gens.push(v);
        }
        let order = ModuleOrder::pot(term).with_priority(rank);
        let gb = GroebnerBasis::new(nvars, rank + s, order, &gens);
        Lifter { nvars, rank, ntracked: s, gb }
    }

    /// Cofactors `c` with `v = Σ c_i g_i + u`, `u` in the untracked span, if they exist.
    pub fn lift(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        let mut w = v.to_vec();
        w.resize(self.rank + self.ntracked, Poly::zero(self.nvars));
        let r = self.gb.normal_form(&w);
        if r[..self.rank].iter().any(|p| !p.is_zero()) {
            return None;
        }
        Some(r[self.rank..].iter().map(|p| -p).collect())
    }

    /// Membership in the span of tracked and untracked generators.
    pub fn contains(&self, v: &[Poly]) -> bool {
        self.lift(v).is_some()
    }

    /// Generators of `{c : Σ c_i g_i ∈ untracked span}`.
    pub fn syzygies(&self) -> Vec<Vec<Poly>> {
        self.gb
            .generators()
            .into_iter()
            .filter(|g| g[..self.rank].iter().all(|p| p.is_zero()))
            .map(|g| g[self.rank..].to_vec())
            .collect()
    }

    pub fn ntracked(&self) -> usize {
        self.ntracked
    }
}

/// Syzygies among `gens` modulo the span of `modulo`.
pub fn syzygies(field: Field, nvars: usize, rank: usize, gens: &[Vec<Poly>], modulo: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    if gens.is_empty() {
        return Vec::new();
    }
    Lifter::new(field, nvars, rank, gens, modulo).syzygies()
}

/// Eliminates the variables in `vars` from an ideal; the result lives in the same ring but
/// involves only the remaining variables.
pub fn eliminate(nvars: usize, gens: &[Poly], vars: &[usize]) -> Vec<Poly> {
    let rows: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
    eliminate_module(nvars, 1, &rows, vars).into_iter().map(|mut v| v.pop().unwrap()).collect()
}

/// Elimination for submodules: term-over-position with a block order whose first block holds
/// the eliminated variables.
pub fn eliminate_module(nvars: usize, rank: usize, gens: &[Vec<Poly>], vars: &[usize]) -> Vec<Vec<Poly>> {
    if vars.is_empty() {
        return GroebnerBasis::new(nvars, rank, ModuleOrder::pot(TermOrder::DegRevLex), gens).generators();
    }
    let mut positions = vec![usize::MAX; nvars];
    let mut next = 0;
    for &v in vars {
        positions[v] = next;
        next += 1;
    }
    for p in positions.iter_mut() {
        if *p == usize::MAX {
            *p = next;
            next += 1;
        }
    }
    let mut inverse = vec![0; nvars];
    for (i, &p) in positions.iter().enumerate() {
        inverse[p] = i;
    }
    let moved: Vec<Vec<Poly>> = gens.iter().map(|g| g.iter().map(|p| p.embed(nvars, &positions)).collect()).collect();
    let order = ModuleOrder::top(TermOrder::Block(vars.len()));
    let gb = GroebnerBasis::new(nvars, rank, order, &moved);
    gb.generators()
        .into_iter()
        .filter(|g| g.iter().all(|p| p.terms().iter().all(|(m, _)| (0..vars.len()).all(|i| m.exponent(i) == 0))))
        .map(|g| g.iter().map(|p| p.embed(nvars, &inverse)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    fn xy() -> PolyRing {
        PolyRing::new(Field::Rational, &["x", "y"]).unwrap()
    }

    #[test]
    fn small_ideal_bases() {
        let r = xy();
        let gb = GroebnerBasis::ideal(2, TermOrder::DegRevLex, &[r.parse("x").unwrap(), r.parse("y - x^2").unwrap()]);
        let mut got: Vec<String> = gb.polys().iter().map(|p| r.format(p)).collect();
        got.sort();
        assert_eq!(got, vec!["x", "y"]);
        let cusp = r.parse("y^2 - x^3").unwrap();
        let gb = GroebnerBasis::ideal(2, TermOrder::DegRevLex, std::slice::from_ref(&cusp));
        assert_eq!(gb.polys(), vec![cusp.monic()]);
        // degrevlex leads with x^3
        assert_eq!(r.format(&gb.normal_form_poly(&r.parse("x^3").unwrap())), "y^2");
        let yx = PolyRing::new(Field::Rational, &["y", "x"]).unwrap();
        let lex = GroebnerBasis::ideal(2, TermOrder::Lex, &[yx.parse("y^2 - x^3").unwrap()]);
        assert_eq!(yx.format(&lex.normal_form_poly(&yx.parse("y^2").unwrap())), "x^3");
        assert!(GroebnerBasis::ideal(2, TermOrder::DegRevLex, &[]).is_empty());
    }

    #[test]
    fn koszul_syzygy() {
        let r = xy();
        let gens = vec![vec![r.var(0)], vec![r.var(1)]];
        let syz = syzygies(Field::Rational, 2, 1, &gens, &[]);
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        assert!((&(&s[0] * &r.var(0)) + &(&s[1] * &r.var(1))).is_zero());
        assert!(s[0].degree() == Some(1));
        let dup = syzygies(Field::Rational, 2, 1, &[vec![r.var(0)], vec![r.var(0)]], &[]);
        assert_eq!(dup.len(), 1);
        assert!(dup[0][0].is_constant());
    }

    #[test]
    fn lift_gives_certificates() {
        let r = xy();
        let gens = vec![vec![r.parse("x^2 - y").unwrap()], vec![r.parse("x*y - 1").unwrap()]];
        let l = Lifter::new(Field::Rational, 2, 1, &gens, &[]);
        let target = &(&r.parse("x*y").unwrap() * &gens[0][0]) + &(&r.parse("y + 2").unwrap() * &gens[1][0]);
        let c = l.lift(std::slice::from_ref(&target)).unwrap();
        let back = &(&c[0] * &gens[0][0]) + &(&c[1] * &gens[1][0]);
        assert_eq!(back, target);
        assert!(l.lift(&[r.var(0)]).is_none());
    }

    #[test]
    fn elimination_examples() {
        let r = xy();
        let e = eliminate(2, &[r.parse("y - x^2").unwrap()], &[1]);
        assert!(e.is_empty());
        let e = eliminate(2, &[r.parse("y - x^2").unwrap(), r.var(1)], &[1]);
        assert_eq!(e.len(), 1);
        assert_eq!(r.format(&e[0]), "x^2");
    }

    #[test]
    fn module_basis_passes_criterion() {
        let r = xy();
        let gens = vec![
            vec![r.parse("x").unwrap(), r.parse("y").unwrap()],
            vec![r.parse("y^2").unwrap(), r.parse("x*y - 1").unwrap()],
        ];
        let gb = GroebnerBasis::new(2, 2, ModuleOrder::pot(TermOrder::DegRevLex), &gens);
        assert!(gb.is_groebner());
        for g in &gens {
            assert!(gb.contains(g));
        }
        let again = GroebnerBasis::from_reduced(2, 2, gb.order(), &gb.generators()).unwrap();
        assert_eq!(again, gb);
    }
}
