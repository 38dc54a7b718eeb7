//! The diagonal of `Spec A` in affine form: enveloping rings, diagonal neighborhoods,
//! differential operators, local cohomology, convolution and Hochschild homology.

pub mod convolution;
pub mod diffops;
pub mod hochschild;
pub mod local;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finite::{variable_inclusion, Pushforward};
use crate::matrix::{Matrix, Vector};
use crate::module::{FPModule, Subquotient};
use crate::monomial::Monomial;
use crate::poly::{Poly, PolyRing};
use crate::ring::{enveloping_presentation, Ring, RingMap, RingPresentation};

/// `A ⊗_B A` for `B → A` a variable inclusion (the absolute case has `B = k`).
///
/// Variables of `A` not coming from `B` are doubled; the copies are primed and appended
/// after the variables of `A`.
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub ring: Ring,
    pub env: Ring,
    /// Indices of the doubled variables of `A`.
    pub doubled: Vec<usize>,
    /// `a ↦ a ⊗ 1`.
    pub left: RingMap,
    /// `a ↦ 1 ⊗ a`.
    pub right: RingMap,
    /// `x_j - x_j'` for the doubled variables.
    pub ideal: Vec<Poly>,
}

impl Diagonal {
    pub fn absolute(a: &Ring) -> Diagonal {
        let e = enveloping_presentation(a);
        Diagonal {
            ring: a.clone(),
            env: e.ring,
            doubled: (0..a.nvars()).collect(),
            left: e.left,
            right: e.right,
            ideal: e.diagonal,
        }
    }

    /// The diagonal of `A` over `B` for a map sending each variable of `B` to a variable of `A`.
    pub fn relative(f: &RingMap) -> Result<Diagonal> {
        let shared = variable_inclusion(f)
            .ok_or_else(|| Error::Invalid("relative diagonals need a map sending variables to variables".into()))?;
        let a = f.target.clone();
        if shared.is_empty() {
            return Ok(Self::absolute(&a));
        }
        let n = a.nvars();
        let doubled: Vec<usize> = (0..n).filter(|i| !shared.contains(i)).collect();
        let d = doubled.len();
        let mut names = a.variables().to_vec();
        let mut weights = a.ambient.weights.clone();
        for &j in &doubled {
            let mut name = format!("{}'", a.variables()[j]);
            while names.contains(&name) {
                name.push('\'');
            }
            names.push(name);
            weights.push(a.ambient.weights[j]);
        }
        let ambient = PolyRing::with_names(a.field(), names).expect("fresh names").with_weights(weights);
        let first: Vec<usize> = (0..n).collect();
        let mut second: Vec<usize> = (0..n).collect();
        for (t, &j) in doubled.iter().enumerate() {
            second[j] = n + t;
        }
        let mut rels: Vec<Poly> = a.relations().iter().map(|r| r.embed(n + d, &first)).collect();
        rels.extend(a.relations().iter().map(|r| r.embed(n + d, &second)));
        let env = RingPresentation::new(format!("{}^e/{}", a.label, f.source.label), ambient, rels);
        let left = RingMap { source: a.clone(), target: env.clone(), images: first.iter().map(|&i| env.var(i)).collect() };
        let right =
            RingMap { source: a.clone(), target: env.clone(), images: second.iter().map(|&i| env.var(i)).collect() };
        let ideal = doubled.iter().enumerate().map(|(t, &j)| &env.var(j) - &env.var(n + t)).collect();
        Ok(Diagonal { ring: a, env, doubled, left, right, ideal })
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// Number of doubled variables (the relative embedding dimension).
    pub fn ndoubled(&self) -> usize {
        self.doubled.len()
    }

    /// `A ⊗_B A → A`.
    pub fn multiplication(&self) -> RingMap {
        let n = self.nvars();
        let mut images: Vec<Poly> = (0..n).map(|i| self.ring.var(i)).collect();
        images.extend(self.doubled.iter().map(|&j| self.ring.var(j)));
        RingMap { source: self.env.clone(), target: self.ring.clone(), images }
    }

    /// Generators of `I^m`.
    pub fn ideal_power(&self, m: usize) -> Vec<Poly> {
        let d = self.ndoubled();
        if d == 0 {
            return if m == 0 { vec![self.env.one()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for e in exponents_of_degree(d, m as u32) {
            let mut p = self.env.one();
            for (t, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    p = self.env.mul(&p, &self.ideal[t]);
                }
            }
            out.push(p);
        }
        out
    }

    /// `O_Δ = A ⊗_B A / I` as a module over the enveloping ring.
    pub fn diagonal_module(&self) -> FPModule {
        FPModule::cyclic(&self.env, &self.ideal)
    }

    /// The two copies of `A` in the enveloping ring agree on the diagonal.
    pub fn same(&self, other: &Diagonal) -> bool {
        *self.env == *other.env && self.doubled == other.doubled
    }
}

/// All exponent vectors of `n` variables with total degree `k`, in lexicographically
/// decreasing order.
pub fn exponents_of_degree(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in exponents_of_degree(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// An `A ⊗_B A`-module with its two `A`-structures.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub diagonal: Diagonal,
    pub module: FPModule,
}

impl Bimodule {
    pub fn new(diagonal: Diagonal, module: FPModule) -> Result<Bimodule> {
        if **module.ring() != *diagonal.env {
            return Err(Error::RingMismatch("bimodule must live over the enveloping ring".into()));
        }
        Ok(Bimodule { diagonal, module })
    }

    /// The unit `O_Δ`.
    pub fn unit(diagonal: &Diagonal) -> Bimodule {
        Bimodule { module: diagonal.diagonal_module(), diagonal: diagonal.clone() }
    }

    /// Underlying `A`-module through the left structure (requires it to be finite).
    pub fn left_module(&self) -> Result<Pushforward> {
        Pushforward::new(&self.diagonal.left, &self.module)
    }

    /// Underlying `A`-module through the right structure.
    pub fn right_module(&self) -> Result<Pushforward> {
        Pushforward::new(&self.diagonal.right, &self.module)
    }
}

/// `N_m = A ⊗_B A / I^m`, presented over `A` through the left factor in the basis
/// `ε^α` with `|α| < m`, where `ε_t = x_t' - x_t` for the doubled variables.
#[derive(Clone, Debug)]
pub struct Neighborhood {
    pub diagonal: Diagonal,
    pub order: usize,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// `N_m` as an `A`-module.
    pub module: FPModule,
}

impl Neighborhood {
    pub fn new(diagonal: &Diagonal, m: usize) -> Neighborhood {
        assert!(m >= 1, "neighborhoods start at m = 1");
        let d = diagonal.ndoubled();
        let basis: Vec<Monomial> =
            (0..m as u32).flat_map(|k| exponents_of_degree(d, k)).map(|e| Monomial::from_exponents(&e)).collect();
        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let a = &diagonal.ring;
        let mut nb = Neighborhood {
            diagonal: diagonal.clone(),
            order: m,
            basis,
            index,
            module: FPModule::zero(a),
        };
        let rels: Vec<Vector> = crate::par::map(a.relations(), |g| {
            // Unreduced: in the enveloping ring `g(x')` is already zero.
            let gy = g.substitute(&diagonal.right.images, a.field());
            nb.act(&gy).cols
        })
        .into_iter()
        .flatten()
        .collect();
        let mut module = FPModule::new(a, nb.basis.len(), rels);
        if let Some(degs) = nb.eps_degrees() {
            module = module.with_degrees(degs);
        }
        nb.module = module;
        nb
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, alpha: &Monomial) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    /// Degrees of the basis elements when `A` is graded with positive weights.
    pub fn eps_degrees(&self) -> Option<Vec<i64>> {
        if !self.diagonal.ring.is_graded() {
            return None;
        }
        let w: Vec<i64> = self.diagonal.doubled.iter().map(|&j| self.diagonal.ring.ambient.weights[j]).collect();
        Some(self.basis.iter().map(|b| b.weighted_degree(&w)).collect())
    }

    /// `p(x, x + ε)` truncated at `|ε| < m`, as coefficients in `A` of the basis monomials.
    pub fn expand(&self, p: &Poly) -> Vector {
        let diag = &self.diagonal;
        let a = &diag.ring;
        let n = a.nvars();
        let d = diag.ndoubled();
        let field = a.field();
        let mut images: Vec<Poly> = (0..n).map(|i| Poly::var(n + d, i, field)).collect();
        for (t, &j) in diag.doubled.iter().enumerate() {
            images.push(&Poly::var(n + d, j, field) + &Poly::var(n + d, n + t, field));
        }
        let q = p.substitute(&images, field);
        let mut coeffs: Vec<Vec<(Monomial, crate::scalar::Scalar)>> = vec![Vec::new(); self.rank()];
        for (mono, c) in q.terms() {
            let e = mono.exponents();
            let eps = Monomial::from_exponents(&e[n..]);
            if let Some(&k) = self.index.get(&eps) {
                let x = Monomial::from_exponents(&e[..n]);
                coeffs[k].push((x, c.clone()));
            }
        }
        coeffs.into_iter().map(|terms| a.reduce(&Poly::from_terms(n, terms))).collect()
    }

    /// Multiplication by `p ∈ A ⊗_B A` on `N_m`, as a matrix over `A`.
    pub fn act(&self, p: &Poly) -> Matrix {
        let a = &self.diagonal.ring;
        let n = a.nvars();
        let r = self.rank();
        let e = self.expand(p);
        let cols = (0..r)
            .map(|col| {
                let mut v = vec![Poly::zero(n); r];
                for (row_b, c) in e.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let prod = self.basis[col].mul(&self.basis[row_b]);
                    if let Some(&k) = self.index.get(&prod) {
                        v[k] = &v[k] + c;
                    }
                }
                v
            })
            .collect();
        Matrix::from_cols(n, r, cols)
    }

    /// `1 ⊗ f` in `N_m`, i.e. the truncated Taylor expansion of `f`.
    pub fn taylor(&self, f: &Poly) -> Vector {
        self.expand(&self.diagonal.right.apply_unchecked(f))
    }

    /// The surjection `N_m → N_k` for `k ≤ m`, as a matrix over `A`.
    pub fn projection(&self, smaller: &Neighborhood) -> Matrix {
        let n = self.diagonal.nvars();
        let ring = &self.diagonal.ring;
        let cols = self
            .basis
            .iter()
            .map(|b| match smaller.index_of(b) {
                Some(k) => crate::matrix::unit_vector(ring, smaller.rank(), k),
                None => vec![Poly::zero(n); smaller.rank()],
            })
            .collect();
        Matrix::from_cols(n, smaller.rank(), cols)
    }

    /// `N_m` as a module over the enveloping ring.
    pub fn bimodule(&self) -> Bimodule {
        let d = &self.diagonal;
        Bimodule { diagonal: d.clone(), module: FPModule::cyclic(&d.env, &d.ideal_power(self.order)) }
    }
}

/// Assigns generator degrees to a subquotient from homogeneous generators in a graded
/// ambient module; `None` when a generator is not homogeneous.
pub fn graded_subquotient(sq: &Subquotient, ambient_degrees: &[i64]) -> Option<FPModule> {
    let w = &sq.ring().ambient.weights;
    let mut degs = Vec::with_capacity(sq.gens.len());
    for g in &sq.gens {
        let mut deg: Option<i64> = None;
        for (c, p) in g.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !p.is_homogeneous(w) {
                return None;
            }
            let dc = p.weighted_degree(w)? + ambient_degrees[c];
            match deg {
                None => deg = Some(dc),
                Some(d0) if d0 != dc => return None,
                _ => {}
            }
        }
        degs.push(deg.unwrap_or(0));
    }
    Some(sq.module.clone().with_degrees(degs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    #[test]
    fn second_neighborhood_of_the_line_is_free() {
        let a = RingPresentation::polynomial("A", Field::Rational, &["x"]);
        let d = Diagonal::absolute(&a);
        let n2 = Neighborhood::new(&d, 2);
        assert_eq!(n2.rank(), 2);
        assert_eq!(n2.module.free_rank(), Some(2));
        let n1 = Neighborhood::new(&d, 1);
        assert_eq!(n1.module.free_rank(), Some(1));
        let t = n2.taylor(&a.parse_element("x^3").unwrap());
        assert_eq!(a.format(&t[0]), "x^3");
        assert_eq!(a.format(&t[1]), "3*x^2");
    }

    #[test]
    fn fat_point_neighborhood_has_length_three() {
        let a = RingPresentation::parse("F", Field::Rational, &["x"], &["x^2"]).unwrap();
        let d = Diagonal::absolute(&a);
        let n2 = Neighborhood::new(&d, 2);
        let total: usize = (0..4).map(|k| n2.module.hilbert_function(k).unwrap()).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn relative_diagonal_doubles_only_new_variables() {
        let b = RingPresentation::polynomial("B", Field::Rational, &["t"]);
        let a = RingPresentation::polynomial("A", Field::Rational, &["t", "x"]);
        let f = RingMap::new(b, a.clone(), vec![a.var(0)]).unwrap();
        let d = Diagonal::relative(&f).unwrap();
        assert_eq!(d.doubled, vec![1]);
        assert_eq!(d.env.nvars(), 3);
        assert_eq!(Neighborhood::new(&d, 3).module.free_rank(), Some(3));
    }
}
