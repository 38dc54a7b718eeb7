//! Quotient rings `k[x_1..x_n]/J`, ring maps between them, and enveloping algebras.
//!
//! A quotient ring is never represented intrinsically. Elements are polynomials in the
//! ambient ring, compared through normal forms modulo a Gröbner basis of `J`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, Lifter};
use crate::monomial::{ModuleOrder, TermOrder};
use crate::poly::{Poly, PolyRing};
use crate::scalar::Field;

pub type Ring = Arc<RingPresentation>;

pub struct RingPresentation {
    pub label: String,
    pub ambient: PolyRing,
    relations: Vec<Poly>,
    gb: OnceLock<GroebnerBasis>,
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.relations == other.relations
    }
}

impl Eq for RingPresentation {}

impl Hash for RingPresentation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.relations.hash(state);
    }
}

impl RingPresentation {
    pub fn new(label: impl Into<String>, ambient: PolyRing, relations: Vec<Poly>) -> Ring {
        let relations = relations.into_iter().filter(|p| !p.is_zero()).collect();
        Arc::new(RingPresentation { label: label.into(), ambient, relations, gb: OnceLock::new() })
    }

    /// `k[vars]` with no relations.
    pub fn polynomial(label: impl Into<String>, field: Field, vars: &[&str]) -> Ring {
        Self::new(label, PolyRing::new(field, vars).expect("distinct variable names"), Vec::new())
    }

    /// Parses relations given in infix notation.
    pub fn parse(label: impl Into<String>, field: Field, vars: &[&str], relations: &[&str]) -> Result<Ring> {
        let ambient = PolyRing::new(field, vars)?;
        let rels = relations.iter().map(|r| ambient.parse(r)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(label, ambient, rels))
    }

    pub fn with_weights(self: &Ring, weights: Vec<i64>) -> Ring {
        Self::new(self.label.clone(), self.ambient.clone().with_weights(weights), self.relations.clone())
    }

    pub fn field(&self) -> Field {
        self.ambient.field
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    pub fn variables(&self) -> &[String] {
        &self.ambient.variables
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn term_order(&self) -> TermOrder {
        self.ambient.order
    }

    /// Reduced Gröbner basis of `J` in the ring's term order.
    pub fn ideal_basis(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| GroebnerBasis::ideal(self.nvars(), self.ambient.order, &self.relations))
    }

    /// Installs a stored basis of `J` before first use. Accepted only if it is a reduced
    /// Gröbner basis for the ring's order whose ideal contains every relation.
    pub fn seed_ideal_basis(&self, gb: GroebnerBasis) -> bool {
        let order = ideal_order(self);
        if gb.nvars() != self.nvars() || gb.rank() != 1 || gb.order() != order {
            return false;
        }
        let Some(gb) = GroebnerBasis::from_reduced(gb.nvars(), 1, order, &gb.generators()) else {
            return false;
        };
        if !self.relations.iter().all(|r| gb.normal_form_poly(r).is_zero()) {
            return false;
        }
        self.gb.set(gb).is_ok()
    }

    /// Whether the basis of `J` has been computed or installed.
    pub fn has_ideal_basis(&self) -> bool {
        self.gb.get().is_some()
    }

    /// Normal form modulo `J`.
    pub fn reduce(&self, p: &Poly) -> Poly {
        if self.relations.is_empty() {
            return p.clone();
        }
        self.ideal_basis().normal_form_poly(p)
    }

    pub fn reduce_vec(&self, v: &[Poly]) -> Vec<Poly> {
        v.iter().map(|p| self.reduce(p)).collect()
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    /// The ring is zero exactly when `1 ∈ J`.
    pub fn is_zero_ring(&self) -> bool {
        self.ideal_basis().is_whole()
    }

    pub fn zero(&self) -> Poly {
        self.ambient.zero()
    }

    pub fn one(&self) -> Poly {
        self.ambient.one()
    }

    pub fn var(&self, i: usize) -> Poly {
        self.ambient.var(i)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&(a * b))
    }

    pub fn parse_element(&self, text: &str) -> Result<Poly> {
        self.ambient.parse(text)
    }

    pub fn format(&self, p: &Poly) -> String {
        self.ambient.format(p)
    }

    /// `J`-generators placed in each coordinate of `R^rank`: the submodule `J R^rank`.
    pub fn ideal_vectors(&self, rank: usize) -> Vec<Vec<Poly>> {
        let gens = self.ideal_basis().polys();
        let mut out = Vec::with_capacity(rank * gens.len());
        for c in 0..rank {
            for g in &gens {
                let mut v = vec![self.zero(); rank];
                v[c] = g.clone();
                out.push(v);
            }
        }
        out
    }

    /// Inverse of `u` in the quotient ring, if `u` is a unit there.
    pub fn inverse(&self, u: &Poly) -> Option<Poly> {
        let u = self.reduce(u);
        if u.is_zero() {
            return None;
        }
        if u.is_constant() {
            let c = u.constant_coeff(self.field());
            return Some(self.ambient.scalar(c.inverse()));
        }
        let untracked = self.ideal_vectors(1);
        let l = Lifter::new(self.field(), self.nvars(), 1, &[vec![u]], &untracked);
        l.lift(&[self.one()]).map(|c| self.reduce(&c[0]))
    }

    /// Whether every relation is homogeneous for the variable weights (all weights positive).
    pub fn is_graded(&self) -> bool {
        self.ambient.weights.iter().all(|&w| w > 0)
            && self.relations.iter().all(|r| r.is_homogeneous(&self.ambient.weights))
    }

    /// Krull dimension, read off the leading-term ideal of `J`.
    pub fn dimension(&self) -> usize {
        crate::invariants::krull_dimension(self.nvars(), &self.ideal_basis().leading_terms())
    }

    /// Canonical textual description used for hashing and display.
    pub fn describe(&self) -> String {
        let rels: Vec<String> = self.relations.iter().map(|r| self.format(r)).collect();
        format!(
            "{} = {}[{}] / ({}) order {}",
            self.label,
            self.field(),
            self.ambient.variables.join(", "),
            rels.join(", "),
            self.ambient.order.name()
        )
    }

    /// Fingerprint of the mathematical content (labels excluded).
    pub fn fingerprint(&self) -> String {
        let rels: Vec<String> = self.relations.iter().map(|r| self.format(r)).collect();
        format!(
            "{}|{}|{}|{}|{:?}",
            self.field(),
            self.ambient.variables.join(","),
            rels.join(","),
            self.ambient.order.name(),
            self.ambient.weights
        )
    }
}

/// A `k`-algebra map `source → target` given by images of the source variables.
#[derive(Clone, Debug)]
pub struct RingMap {
    pub source: Ring,
    pub target: Ring,
    pub images: Vec<Poly>,
}

impl RingMap {
    /// Validates that every source relation maps to zero in the target.
    pub fn new(source: Ring, target: Ring, images: Vec<Poly>) -> Result<RingMap> {
        if images.len() != source.nvars() {
            return Err(Error::Arity { expected: source.nvars(), found: images.len() });
        }
        if source.field() != target.field() {
            return Err(Error::RingMismatch("different base fields".into()));
        }
        if images.iter().any(|p| p.nvars() != target.nvars()) {
            return Err(Error::RingMismatch("image outside the target ring".into()));
        }
        let images: Vec<Poly> = images.iter().map(|p| target.reduce(p)).collect();
        for (i, r) in source.relations().iter().enumerate() {
            if !target.is_zero(&r.substitute(&images, source.field())) {
                return Err(Error::RelationNotPreserved(i));
            }
        }
        Ok(RingMap { source, target, images })
    }

    pub fn identity(ring: &Ring) -> RingMap {
        let images = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        RingMap { source: ring.clone(), target: ring.clone(), images }
    }

    /// The structure map `k → A`.
    pub fn structure(ring: &Ring) -> RingMap {
        let base = RingPresentation::polynomial("k", ring.field(), &[]);
        RingMap { source: base, target: ring.clone(), images: Vec::new() }
    }

    /// Image of a source element, in normal form.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        if p.nvars() != self.source.nvars() {
            return Err(Error::RingMismatch("element not in the source ring".into()));
        }
        Ok(self.apply_unchecked(p))
    }

    pub(crate) fn apply_unchecked(&self, p: &Poly) -> Poly {
        if self.images.is_empty() {
            return self.target.scalar_poly(p.constant_coeff(self.source.field()));
        }
        self.target.reduce(&p.substitute(&self.images, self.source.field()))
    }

    pub fn apply_vec(&self, v: &[Poly]) -> Vec<Poly> {
        v.iter().map(|p| self.apply_unchecked(p)).collect()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &RingMap) -> Result<RingMap> {
        if *first.target != *self.source {
            return Err(Error::RingMismatch("maps are not composable".into()));
        }
        let images = first.images.iter().map(|p| self.apply_unchecked(p)).collect();
        Ok(RingMap { source: first.source.clone(), target: self.target.clone(), images })
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && (0..self.source.nvars()).all(|i| self.images[i] == self.source.var(i))
    }
}

impl RingPresentation {
    pub fn scalar_poly(&self, c: crate::scalar::Scalar) -> Poly {
        self.ambient.scalar(c)
    }
}

/// `A^e = A ⊗_k A` with its diagonal ideal and the two structure maps.
#[derive(Clone, Debug)]
pub struct Enveloping {
    pub base: Ring,
    pub ring: Ring,
    /// `x_i - x_i'`.
    pub diagonal: Vec<Poly>,
    /// `a ↦ a ⊗ 1` (first variable block).
    pub left: RingMap,
    /// `a ↦ 1 ⊗ a` (second variable block).
    pub right: RingMap,
}

impl Enveloping {
    pub fn n(&self) -> usize {
        self.base.nvars()
    }

    /// Multiplication map `A^e → A`, `x_i, x_i' ↦ x_i`.
    pub fn multiplication(&self) -> RingMap {
        let n = self.n();
        let images = (0..2 * n).map(|i| self.base.var(i % n)).collect();
        RingMap { source: self.ring.clone(), target: self.base.clone(), images }
    }
}

/// Builds `A^e = k[x, x'] / (J(x) + J(x'))` and the diagonal ideal.
pub fn enveloping_presentation(a: &Ring) -> Enveloping {
    let n = a.nvars();
    let mut names: Vec<String> = a.variables().to_vec();
    names.extend(a.variables().iter().map(|v| format!("{v}'")));
    let weights: Vec<i64> = a.ambient.weights.iter().chain(a.ambient.weights.iter()).copied().collect();
    let ambient = PolyRing::with_names(a.field(), names).expect("primed names are fresh").with_weights(weights);
    let first: Vec<usize> = (0..n).collect();
    let second: Vec<usize> = (n..2 * n).collect();
    let mut rels: Vec<Poly> = a.relations().iter().map(|r| r.embed(2 * n, &first)).collect();
    rels.extend(a.relations().iter().map(|r| r.embed(2 * n, &second)));
    let ring = RingPresentation::new(format!("{}^e", a.label), ambient, rels);
    let diagonal = (0..n).map(|i| &ring.var(i) - &ring.var(n + i)).collect();
    let left = RingMap { source: a.clone(), target: ring.clone(), images: (0..n).map(|i| ring.var(i)).collect() };
    let right = RingMap { source: a.clone(), target: ring.clone(), images: (0..n).map(|i| ring.var(n + i)).collect() };
    Enveloping { base: a.clone(), ring, diagonal, left, right }
}

/// `A ⊗_k B` on disjoint variables; variables of `B` clashing with `A` get a `_2` suffix.
pub fn tensor_rings(a: &Ring, b: &Ring) -> (Ring, RingMap, RingMap) {
    let (na, nb) = (a.nvars(), b.nvars());
    let mut names: Vec<String> = a.variables().to_vec();
    for v in b.variables() {
        let mut name = v.clone();
        while names.contains(&name) {
            name.push_str("_2");
        }
        names.push(name);
    }
    let weights: Vec<i64> = a.ambient.weights.iter().chain(b.ambient.weights.iter()).copied().collect();
    let ambient = PolyRing::with_names(a.field(), names).expect("renamed").with_weights(weights);
    let pa: Vec<usize> = (0..na).collect();
    let pb: Vec<usize> = (na..na + nb).collect();
    let mut rels: Vec<Poly> = a.relations().iter().map(|r| r.embed(na + nb, &pa)).collect();
    rels.extend(b.relations().iter().map(|r| r.embed(na + nb, &pb)));
    let ring = RingPresentation::new(format!("{}*{}", a.label, b.label), ambient, rels);
    let ia = RingMap { source: a.clone(), target: ring.clone(), images: pa.iter().map(|&i| ring.var(i)).collect() };
    let ib = RingMap { source: b.clone(), target: ring.clone(), images: pb.iter().map(|&i| ring.var(i)).collect() };
    (ring, ia, ib)
}

/// `A[t]` for a fresh variable name.
pub fn polynomial_extension(a: &Ring, var: &str) -> (Ring, RingMap) {
    let t = RingPresentation::polynomial(var, a.field(), &[var]);
    let (ring, ia, _) = tensor_rings(a, &t);
    (ring, ia)
}

/// The basic open `A_g = A[s]/(s g - 1)` with its localization map.
pub fn localization(a: &Ring, g: &Poly, var: &str) -> (Ring, RingMap) {
    let n = a.nvars();
    let mut names = a.variables().to_vec();
    let mut name = var.to_string();
    while names.contains(&name) {
        name.push('_');
    }
    names.push(name);
    let mut weights = a.ambient.weights.clone();
    weights.push(-g.weighted_degree(&a.ambient.weights).unwrap_or(0));
    let ambient = PolyRing::with_names(a.field(), names).expect("fresh").with_weights(weights);
    let pos: Vec<usize> = (0..n).collect();
    let mut rels: Vec<Poly> = a.relations().iter().map(|r| r.embed(n + 1, &pos)).collect();
    let s = ambient.var(n);
    rels.push(&(&s * &g.embed(n + 1, &pos)) - &ambient.one());
    let ring = RingPresentation::new(format!("{}_loc", a.label), ambient, rels);
    let map = RingMap { source: a.clone(), target: ring.clone(), images: (0..n).map(|i| ring.var(i)).collect() };
    (ring, map)
}

/// Ambient order for ideal computations in this ring.
pub fn ideal_order(ring: &RingPresentation) -> ModuleOrder {
    ModuleOrder::pot(ring.term_order())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_map_validation() {
        let a = RingPresentation::polynomial("A", Field::Rational, &["x"]);
        let fat = RingPresentation::parse("F", Field::Rational, &["x"], &["x^2"]).unwrap();
        let cusp = RingPresentation::parse("C", Field::Rational, &["x", "y"], &["y^2 - x^3"]).unwrap();
        assert!(RingMap::new(a.clone(), cusp.clone(), vec![cusp.var(0)]).is_ok());
        assert_eq!(RingMap::new(fat.clone(), a.clone(), vec![a.var(0)]).unwrap_err(), Error::RelationNotPreserved(0));
        let q = RingMap::new(a.clone(), fat.clone(), vec![fat.var(0)]).unwrap();
        assert!(q.apply(&a.parse_element("x^3").unwrap()).unwrap().is_zero());
        let inc = RingMap::new(a.clone(), cusp.clone(), vec![cusp.var(0)]).unwrap();
        assert_eq!(cusp.format(&inc.apply(&a.parse_element("x^2").unwrap()).unwrap()), "x^2");
        let bad = RingMap::new(cusp.clone(), cusp.clone(), vec![cusp.parse_element("x^2").unwrap(), cusp.var(1)]);
        assert_eq!(bad.unwrap_err(), Error::RelationNotPreserved(0));
    }

    #[test]
    fn enveloping_shapes() {
        let cusp = RingPresentation::parse("C", Field::Rational, &["x", "y"], &["y^2 - x^3"]).unwrap();
        let e = enveloping_presentation(&cusp);
        assert_eq!(e.ring.nvars(), 4);
        assert_eq!(e.ring.relations().len(), 2);
        assert_eq!(e.ring.format(&e.diagonal[1]), "y - y'");
        let k = RingPresentation::polynomial("k", Field::Rational, &[]);
        let ek = enveloping_presentation(&k);
        assert_eq!(ek.ring.nvars(), 0);
        assert!(ek.diagonal.is_empty());
    }

    #[test]
    fn units_in_localization() {
        let a = RingPresentation::polynomial("A", Field::Rational, &["x"]);
        let (ax, _) = localization(&a, &a.var(0), "s");
        let inv = ax.inverse(&ax.var(0)).unwrap();
        assert!(ax.is_zero(&(&ax.mul(&inv, &ax.var(0)) - &ax.one())));
        assert!(a.inverse(&a.var(0)).is_none());
    }
}
