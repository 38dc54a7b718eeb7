//! Finitely presented modules, maps between them, and subquotients of free modules.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, Lifter};
use crate::matrix::{is_zero_vector, unit_vector, Matrix, Vector};
use crate::monomial::{Monomial, ModuleOrder};
use crate::poly::Poly;
use crate::ring::{Ring, RingPresentation};

/// `M = R^rank / (relations + J R^rank)`, i.e. a module over `A = R/J`.
#[derive(Clone)]
pub struct FPModule {
    ring: Ring,
    rank: usize,
    relations: Vec<Vector>,
    /// Optional grading: degree of each generator.
    pub degrees: Option<Vec<i64>>,
    gb: Arc<OnceLock<GroebnerBasis>>,
}

impl fmt::Debug for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FPModule(rank {}, {} relations over {})", self.rank, self.relations.len(), self.ring.label)
    }
}

impl FPModule {
    pub fn new(ring: &Ring, rank: usize, relations: Vec<Vector>) -> Self {
        let mut rels: Vec<Vector> = Vec::new();
        for r in relations {
            assert_eq!(r.len(), rank, "relation length must equal the rank");
            let r = ring.reduce_vec(&r);
            if !is_zero_vector(&r) && !rels.contains(&r) {
                rels.push(r);
            }
        }
        FPModule { ring: ring.clone(), rank, relations: rels, degrees: None, gb: Arc::default() }
    }

    pub fn free(ring: &Ring, rank: usize) -> Self {
        Self::new(ring, rank, Vec::new())
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::free(ring, 0)
    }

    /// `A / I` for an ideal given by generators.
    pub fn cyclic(ring: &Ring, ideal: &[Poly]) -> Self {
        Self::new(ring, 1, ideal.iter().map(|p| vec![p.clone()]).collect())
    }

    pub fn with_degrees(mut self, degrees: Vec<i64>) -> Self {
        assert_eq!(degrees.len(), self.rank);
        self.degrees = Some(degrees);
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    pub fn presentation_matrix(&self) -> Matrix {
        Matrix::from_cols(self.ring.nvars(), self.rank, self.relations.clone())
    }

    /// Generators of the submodule of `R^rank` that is zero in `M`.
    pub fn zero_submodule(&self) -> Vec<Vector> {
        let mut out = self.relations.clone();
        out.extend(self.ring.ideal_vectors(self.rank));
        out
    }

    pub fn gb(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| {
            GroebnerBasis::new(
                self.ring.nvars(),
                self.rank,
                ModuleOrder::pot(self.ring.term_order()),
                &self.zero_submodule(),
            )
        })
    }

    pub fn normal_form(&self, v: &[Poly]) -> Vector {
        if self.relations.is_empty() {
            return self.ring.reduce_vec(v);
        }
        self.gb().normal_form(v)
    }

    pub fn is_zero_element(&self, v: &[Poly]) -> bool {
        if self.relations.is_empty() {
            return v.iter().all(|p| self.ring.is_zero(p));
        }
        self.gb().contains(v)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 || self.ring.is_zero_ring() || self.gb().is_whole()
    }

    /// No relations beyond those of the ring.
    pub fn is_free_presentation(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn direct_sum(&self, other: &FPModule) -> FPModule {
        let n = self.rank + other.rank;
        let zero = Poly::zero(self.ring.nvars());
        let mut rels = Vec::with_capacity(self.relations.len() + other.relations.len());
        for r in &self.relations {
            let mut v = r.clone();
            v.resize(n, zero.clone());
            rels.push(v);
        }
        for r in &other.relations {
            let mut v = vec![zero.clone(); self.rank];
            v.extend(r.iter().cloned());
            rels.push(v);
        }
        let mut m = FPModule::new(&self.ring, n, rels);
        if let (Some(a), Some(b)) = (&self.degrees, &other.degrees) {
            m.degrees = Some(a.iter().chain(b).copied().collect());
        }
        m
    }

    /// `M^k` laid out as `k` consecutive blocks.
    pub fn power(&self, k: usize) -> FPModule {
        let mut acc = FPModule::zero(&self.ring);
        acc.degrees = self.degrees.as_ref().map(|_| Vec::new());
        for _ in 0..k {
            acc = acc.direct_sum(self);
        }
        acc
    }

    /// `M ⊗_R N` on the generators `e_i ⊗ f_j`, indexed `i * rank N + j`.
    pub fn tensor(&self, other: &FPModule) -> FPModule {
        let (a, b) = (self.rank, other.rank);
        let zero = Poly::zero(self.ring.nvars());
        let mut rels = Vec::new();
        for r in &self.relations {
            for j in 0..b {
                let mut v = vec![zero.clone(); a * b];
                for i in 0..a {
                    v[i * b + j] = r[i].clone();
                }
                rels.push(v);
            }
        }
        for r in &other.relations {
            for i in 0..a {
                let mut v = vec![zero.clone(); a * b];
                v[i * b..(i + 1) * b].clone_from_slice(r);
                rels.push(v);
            }
        }
        FPModule::new(&self.ring, a * b, rels)
    }

    /// `Hom_R(M, M)` inside `M^r`, a map being recorded by the images of the generators.
    pub fn endomorphisms(&self) -> Subquotient {
        let r = self.rank;
        let id = Matrix::identity(&self.ring, r);
        let constraints = self.presentation_matrix().transpose().kron(&id);
        let target = self.power(self.relations.len());
        let eval = ModuleMap::new_unchecked(self.power(r), target, constraints);
        Subquotient::new(&self.ring, r * r, eval.kernel_generators(), self.power(r).relations)
    }

    /// The identity map as an element of `M^r`, in the layout of [`FPModule::endomorphisms`].
    pub fn identity_element(&self) -> Vector {
        let r = self.rank;
        let mut v = vec![Poly::zero(self.ring.nvars()); r * r];
        for j in 0..r {
            v[j * r + j] = self.ring.one();
        }
        v
    }

    /// Removes generators eliminated by relations with a unit entry.
    pub fn prune(&self) -> Pruned {
        prune(self)
    }

    /// Free of the given rank, decided on a pruned presentation.
    pub fn free_rank(&self) -> Option<usize> {
        let p = self.prune();
        p.module.is_free_presentation().then_some(p.module.rank)
    }

    /// Dimension of the graded piece of degree `d` (generator degrees and ring weights
    /// must be set and all relations homogeneous).
    pub fn hilbert_function(&self, d: i64) -> Option<usize> {
        let degrees = self.degrees.as_ref()?;
        let w = &self.ring.ambient.weights;
        if w.iter().any(|&x| x <= 0) {
            return None;
        }
        let gb = self.gb();
        let mut count = 0;
        for (c, &dc) in degrees.iter().enumerate() {
            for m in monomials_of_weight(w, d - dc) {
                if gb.is_standard(c, &m) {
                    count += 1;
                }
            }
        }
        Some(count)
    }

    pub fn format_element(&self, v: &[Poly]) -> String {
        let parts: Vec<String> = v.iter().map(|p| self.ring.format(p)).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// All monomials with the given weighted degree (positive weights).
pub fn monomials_of_weight(weights: &[i64], d: i64) -> Vec<Monomial> {
    let n = weights.len();
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    let mut exps = vec![0u32; n];
    fn rec(i: usize, rest: i64, w: &[i64], exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == w.len() {
            if rest == 0 {
                out.push(Monomial::from_exponents(exps));
            }
            return;
        }
        let mut e = 0;
        while e as i64 * w[i] <= rest {
            exps[i] = e;
            rec(i + 1, rest - e as i64 * w[i], w, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }
    rec(0, d, weights, &mut exps, &mut out);
    out
}

/// Result of pruning: an isomorphic presentation on a subset of the generators.
#[derive(Clone, Debug)]
pub struct Pruned {
    pub module: FPModule,
    /// Indices of the original generators that survive.
    pub kept: Vec<usize>,
    /// Original generator `j` written in the new generators (new rank × old rank).
    pub to_new: Matrix,
    /// Inclusion of the surviving generators (old rank × new rank).
    pub to_old: Matrix,
}

fn pick_pivot(ring: &RingPresentation, rels: &[Vector]) -> Option<(usize, usize, Poly)> {
    let weight = |r: &Vector| r.iter().filter(|p| !p.is_zero()).count();
    let mut best: Option<(usize, usize, usize, Poly)> = None;
    for (ri, r) in rels.iter().enumerate() {
        for (j, p) in r.iter().enumerate() {
            if p.is_constant() && !p.is_zero() {
                let w = weight(r);
                if best.as_ref().map(|b| w < b.0).unwrap_or(true) {
                    best = Some((w, ri, j, ring.scalar_poly(p.constant_coeff(ring.field()).inverse())));
                }
                break;
            }
        }
    }
    if let Some((_, ri, j, inv)) = best {
        return Some((ri, j, inv));
    }
    if ring.is_polynomial_ring() {
        return None;
    }
    for (ri, r) in rels.iter().enumerate() {
        for (j, p) in r.iter().enumerate() {
            if p.len() == 1 {
                if let Some(inv) = ring.inverse(p) {
                    return Some((ri, j, inv));
                }
            }
        }
    }
    None
}

fn eliminate_coordinate(ring: &RingPresentation, v: &Vector, j: usize, sub: &Vector) -> Vector {
    let vj = &v[j];
    let mut out = Vec::with_capacity(v.len() - 1);
    let mut si = 0;
    for (k, p) in v.iter().enumerate() {
        if k == j {
            continue;
        }
        let q = if vj.is_zero() || sub[si].is_zero() { p.clone() } else { ring.reduce(&(p + &(vj * &sub[si]))) };
        out.push(q);
        si += 1;
    }
    out
}

fn prune(m: &FPModule) -> Pruned {
    let ring = m.ring.clone();
    let nv = ring.nvars();
    let mut rels: Vec<Vector> = m.relations.clone();
    let mut alive: Vec<usize> = (0..m.rank).collect();
    let mut expr: Vec<Vector> = (0..m.rank).map(|j| unit_vector(&ring, m.rank, j)).collect();
    while let Some((ri, j, inv)) = pick_pivot(&ring, &rels) {
        let rho = rels.remove(ri);
        let neg_inv = -&inv;
        let sub: Vector = rho
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, p)| if p.is_zero() { p.clone() } else { ring.reduce(&(p * &neg_inv)) })
            .collect();
        rels = crate::par::map(&rels, |v| eliminate_coordinate(&ring, v, j, &sub))
            .into_iter()
            .filter(|v| !is_zero_vector(v))
            .collect();
        expr = expr.iter().map(|v| eliminate_coordinate(&ring, v, j, &sub)).collect();
        alive.remove(j);
    }
    let mut module = FPModule::new(&ring, alive.len(), rels);
    if let Some(d) = &m.degrees {
        module.degrees = Some(alive.iter().map(|&i| d[i]).collect());
    }
    let to_old = Matrix::from_cols(nv, m.rank, alive.iter().map(|&i| unit_vector(&ring, m.rank, i)).collect());
    let to_new = Matrix::from_cols(nv, alive.len(), expr);
    Pruned { module, kept: alive, to_new, to_old }
}

/// A module map given by its matrix on the free covers.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: FPModule,
    pub target: FPModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    /// Checks that relations of the source go to zero in the target.
    pub fn new(source: FPModule, target: FPModule, matrix: Matrix) -> Result<Self> {
        if matrix.nrows != target.rank || matrix.ncols() != source.rank {
            return Err(Error::InvalidMap(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.nrows,
                matrix.ncols(),
                target.rank,
                source.rank
            )));
        }
        let matrix = matrix.reduced(&source.ring);
        let map = ModuleMap { source, target, matrix };
        for (i, r) in map.source.relations.iter().enumerate() {
            if !map.target.is_zero_element(&map.matrix.apply(r)) {
                return Err(Error::InvalidMap(format!("relation {i} is not carried to zero")));
            }
        }
        Ok(map)
    }

    pub(crate) fn new_unchecked(source: FPModule, target: FPModule, matrix: Matrix) -> Self {
        ModuleMap { source, target, matrix }
    }

    pub fn identity(m: &FPModule) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(&m.ring, m.rank) }
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> Self {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zero(source.ring.nvars(), target.rank, source.rank),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.source.ring
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix).reduced(&self.source.ring),
        }
    }

    pub fn apply(&self, v: &[Poly]) -> Vector {
        self.target.normal_form(&self.matrix.apply(v))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.cols.iter().all(|c| self.target.is_zero_element(c))
    }

    /// Generators (in the source cover) of the kernel.
    pub fn kernel_generators(&self) -> Vec<Vector> {
        let ring = &self.source.ring;
        crate::groebner::syzygies(
            ring.field(),
            ring.nvars(),
            self.target.rank,
            &self.matrix.cols,
            &self.target.zero_submodule(),
        )
    }

    pub fn kernel(&self) -> Subquotient {
        let gens = self.kernel_generators();
        Subquotient::new(&self.source.ring, self.source.rank, gens, self.source.relations.clone())
    }

    pub fn is_injective(&self) -> bool {
        if self.source.is_zero() {
            return true;
        }
        self.kernel_generators().iter().all(|k| self.source.is_zero_element(k))
    }

    pub fn is_surjective(&self) -> bool {
        if self.target.is_zero() {
            return true;
        }
        let ring = &self.source.ring;
        let mut gens = self.matrix.cols.clone();
        gens.extend(self.target.zero_submodule());
        let gb = GroebnerBasis::new(ring.nvars(), self.target.rank, ModuleOrder::pot(ring.term_order()), &gens);
        gb.is_whole()
    }

    pub fn is_iso(&self) -> bool {
        let (a, b) = crate::par::join(|| self.is_injective(), || self.is_surjective());
        a && b
    }

    pub fn cokernel(&self) -> FPModule {
        let mut rels = self.target.relations.clone();
        rels.extend(self.matrix.cols.iter().cloned());
        FPModule::new(&self.target.ring, self.target.rank, rels)
    }
}

/// `span(gens) / (span(gens) ∩ Q)` inside `R^ambient`, where `Q` is spanned by `zero` and
/// `J R^ambient`. The module is presented on (a pruned subset of) the generators.
#[derive(Clone)]
pub struct Subquotient {
    ring: Ring,
    pub ambient: usize,
    pub gens: Vec<Vector>,
    pub zero: Vec<Vector>,
    pub module: FPModule,
    lifter: Arc<OnceLock<Lifter>>,
}

impl fmt::Debug for Subquotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subquotient({} generators in rank {}, {:?})", self.gens.len(), self.ambient, self.module)
    }
}

impl Subquotient {
    pub fn new(ring: &Ring, ambient: usize, gens: Vec<Vector>, zero: Vec<Vector>) -> Self {
        let mut q = zero;
        q.retain(|v| !is_zero_vector(v));
        let mut qfull = q.clone();
        qfull.extend(ring.ideal_vectors(ambient));
        let gbq = GroebnerBasis::new(ring.nvars(), ambient, ModuleOrder::pot(ring.term_order()), &qfull);
        let mut cand: Vec<Vector> = Vec::new();
        for g in gens {
            let g = gbq.normal_form(&g);
            if !is_zero_vector(&g) && !cand.contains(&g) {
                cand.push(g);
            }
        }
        let rels = crate::groebner::syzygies(ring.field(), ring.nvars(), ambient, &cand, &qfull);
        let raw = FPModule::new(ring, cand.len(), rels);
        let pruned = raw.prune();
        let gens: Vec<Vector> = pruned.kept.iter().map(|&i| cand[i].clone()).collect();
        Subquotient { ring: ring.clone(), ambient, gens, zero: q, module: pruned.module, lifter: Arc::default() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }

    fn lifter(&self) -> &Lifter {
        self.lifter.get_or_init(|| {
            let mut q = self.zero.clone();
            q.extend(self.ring.ideal_vectors(self.ambient));
            Lifter::new(self.ring.field(), self.ring.nvars(), self.ambient, &self.gens, &q)
        })
    }

    /// Coordinates of an ambient vector in the generators, if it lies in the span.
    pub fn express(&self, v: &[Poly]) -> Option<Vector> {
        if self.gens.is_empty() {
            let mut q = self.zero.clone();
            q.extend(self.ring.ideal_vectors(self.ambient));
            if is_zero_vector(v) {
                return Some(Vec::new());
            }
            let gb = GroebnerBasis::new(self.ring.nvars(), self.ambient, ModuleOrder::pot(self.ring.term_order()), &q);
            return gb.contains(v).then(Vec::new);
        }
        self.lifter().lift(v).map(|c| self.ring.reduce_vec(&c))
    }

    /// The map on subquotients induced by an ambient matrix `R^ambient → R^target.ambient`.
    pub fn induced(&self, target: &Subquotient, ambient_map: &Matrix) -> Result<ModuleMap> {
        let cols: Vec<Option<Vector>> = crate::par::map(&self.gens, |g| target.express(&ambient_map.apply(g)));
        let mut out = Vec::with_capacity(cols.len());
        for (i, c) in cols.into_iter().enumerate() {
            match c {
                Some(c) => out.push(c),
                None => {
                    return Err(Error::InvalidMap(format!("generator {i} does not land in the target subquotient")))
                }
            }
        }
        let m = Matrix::from_cols(self.ring.nvars(), target.gens.len(), out);
        Ok(ModuleMap::new_unchecked(self.module.clone(), target.module.clone(), m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{localization, RingPresentation};
    use crate::scalar::Field;

    #[test]
    fn pruning_removes_unit_relations() {
        let r = RingPresentation::polynomial("R", Field::Rational, &["x", "y"]);
        let x = r.var(0);
        let m = FPModule::new(&r, 2, vec![vec![r.one(), x.clone()], vec![r.zero(), r.var(1)]]);
        let p = m.prune();
        assert_eq!(p.module.rank(), 1);
        assert_eq!(p.kept, vec![1]);
        assert_eq!(p.module.relations().len(), 1);
        let ax = localization(&r, &x, "s").0;
        let m = FPModule::new(&ax, 1, vec![vec![ax.var(0)]]);
        assert!(m.prune().module.rank() == 0);
        assert!(m.is_zero());
    }

    #[test]
    fn kernel_of_multiplication() {
        let r = RingPresentation::polynomial("R", Field::Rational, &["x", "y"]);
        let f = ModuleMap::new(
            FPModule::free(&r, 1),
            FPModule::free(&r, 1),
            Matrix::from_cols(2, 1, vec![vec![&r.var(0) - &r.var(1)]]),
        )
        .unwrap();
        assert!(f.is_injective());
        assert!(!f.is_surjective());
        assert!(f.kernel().is_zero());
        let z = ModuleMap::zero(&FPModule::free(&r, 2), &FPModule::free(&r, 2));
        assert_eq!(z.kernel().module.free_rank(), Some(2));
    }

    #[test]
    fn hilbert_of_graded_quotient() {
        let r = RingPresentation::polynomial("R", Field::Rational, &["x", "y"]);
        let m = FPModule::cyclic(&r, &[r.var(0), r.var(1)]).with_degrees(vec![0]);
        assert_eq!(m.hilbert_function(0), Some(1));
        assert_eq!(m.hilbert_function(1), Some(0));
        let f = FPModule::free(&r, 1).with_degrees(vec![0]);
        assert_eq!(f.hilbert_function(3), Some(4));
    }
}
