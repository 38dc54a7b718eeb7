//! Differential operators of bounded order as `Hom_A(N_{n+1}, A)`.

use crate::derived::{derived_hom, Derived, Window};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::module::{FPModule, ModuleMap, Subquotient};
use crate::poly::Poly;
use crate::ring::Ring;

use super::{exponents_of_degree, graded_subquotient, Diagonal, Neighborhood};

/// `D^(n)`: operators of order at most `n`, as the subquotient of `A^r` of functionals on
/// the basis `ε^α` of `N_{n+1}` that kill its relations.
#[derive(Clone, Debug)]
pub struct DiffOps {
    pub order: usize,
    pub neighborhood: Neighborhood,
    pub operators: Subquotient,
}

impl DiffOps {
    pub fn new(diagonal: &Diagonal, n: usize) -> DiffOps {
        let nb = Neighborhood::new(diagonal, n + 1);
        let a = &diagonal.ring;
        let r = nb.rank();
        let rels = nb.module.presentation_matrix();
        let eval = ModuleMap::new_unchecked(FPModule::free(a, r), FPModule::free(a, rels.ncols()), rels.transpose());
        let operators = Subquotient::new(a, r, eval.kernel_generators(), Vec::new());
        DiffOps { order: n, neighborhood: nb, operators }
    }

    /// `D^(n)` as an `A`-module, graded when `A` is (`ε^α` has degree `-|α|`).
    pub fn module(&self) -> FPModule {
        match self.neighborhood.eps_degrees() {
            Some(d) => {
                let neg: Vec<i64> = d.iter().map(|x| -x).collect();
                graded_subquotient(&self.operators, &neg).unwrap_or_else(|| self.operators.module.clone())
            }
            None => self.operators.module.clone(),
        }
    }

    /// The generators as operators.
    pub fn generators(&self) -> Vec<Operator> {
        self.operators.gens.iter().map(|g| Operator { values: g.clone(), neighborhood: self.neighborhood.clone() }).collect()
    }

    /// The inclusion `D^(n) → D^(n+1)` induced by `N_{n+2} → N_{n+1}`.
    pub fn transition(&self, next: &DiffOps) -> Result<ModuleMap> {
        let proj = next.neighborhood.projection(&self.neighborhood);
        self.operators.induced(&next.operators, &proj.transpose())
    }

    /// The element of `D^(n)` representing an operator given as a function, if it has order
    /// at most `n`.
    pub fn express(&self, op: &Operator) -> Option<Vector> {
        self.operators.express(&op.values)
    }
}

/// `D^(n)` for `A` over `k`.
pub fn diff_ops(a: &Ring, n: usize) -> DiffOps {
    DiffOps::new(&Diagonal::absolute(a), n)
}

/// `RHom_A(N_{n+1}, A)` in the window.
pub fn derived_diff_ops(a: &Ring, n: usize, window: Window, max_length: usize) -> Result<Derived> {
    let nb = Neighborhood::new(&Diagonal::absolute(a), n + 1);
    derived_hom(&nb.module, &FPModule::free(a, 1), window, max_length)
}

/// An operator `A → A` through its values `φ(ε^α)` on the basis of a neighborhood.
#[derive(Clone, Debug)]
pub struct Operator {
    pub values: Vector,
    pub neighborhood: Neighborhood,
}

impl Operator {
    /// `P(f) = Σ_α φ(ε^α) · (coefficient of ε^α in f(x + ε))`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let a = &self.neighborhood.diagonal.ring;
        let t = self.neighborhood.taylor(f);
        let mut acc = Poly::zero(a.nvars());
        for (phi, c) in self.values.iter().zip(&t) {
            if !phi.is_zero() && !c.is_zero() {
                acc = &acc + &(phi * c);
            }
        }
        a.reduce(&acc)
    }

    /// The functional on `N_m` of a `k`-linear map `P`, via
    /// `φ(ε^γ) = Σ_{δ ≤ γ} C(γ, δ) (-x)^{γ-δ} P(x^δ)` over the doubled variables.
    pub fn from_fn(neighborhood: &Neighborhood, p: impl Fn(&Poly) -> Poly) -> Operator {
        let diag = &neighborhood.diagonal;
        let a = &diag.ring;
        let field = a.field();
        let values = neighborhood
            .basis
            .iter()
            .map(|gamma| {
                let g = gamma.exponents();
                let mut acc = Poly::zero(a.nvars());
                for delta in sub_exponents(g) {
                    let mut coeff: i64 = 1;
                    let mut sign = 1;
                    let mut left = a.one();
                    let mut right = a.one();
                    for (t, &j) in diag.doubled.iter().enumerate() {
                        coeff *= binomial(g[t], delta[t]);
                        let rest = g[t] - delta[t];
                        if rest % 2 == 1 {
                            sign = -sign;
                        }
                        left = &left * &a.var(j).pow(rest, field);
                        right = &right * &a.var(j).pow(delta[t], field);
                    }
                    let c = field.from_i64(sign * coeff);
                    let term = &left * &p(&a.reduce(&right));
                    acc = &acc + &term.scale(&c);
                }
                a.reduce(&acc)
            })
            .collect();
        Operator { values, neighborhood: neighborhood.clone() }
    }

    /// Composite `self ∘ other`, as a functional on `N_{p+q+1}`.
    pub fn compose(&self, other: &Operator) -> Operator {
        let m = self.neighborhood.order + other.neighborhood.order - 1;
        let nb = Neighborhood::new(&self.neighborhood.diagonal, m);
        Operator::from_fn(&nb, |f| self.apply(&other.apply(f)))
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn sub_exponents(g: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &e in g {
        let mut next = Vec::new();
        for prefix in &out {
            for k in 0..=e {
                let mut p = prefix.clone();
                p.push(k);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// `[P, a](f) = P(a f) - a P(f)`.
fn bracket<'a>(p: &'a (dyn Fn(&Poly) -> Poly + Sync + 'a), a: Poly, ring: &'a Ring) -> impl Fn(&Poly) -> Poly + Sync + 'a {
    move |f: &Poly| {
        let af = ring.mul(&a, f);
        ring.reduce(&(&p(&af) - &ring.mul(&a, &p(f))))
    }
}

/// Checks that `order + 1` nested commutators of `op` with ring generators vanish on the
/// samples.
pub fn bracket_test(ring: &Ring, op: &(dyn Fn(&Poly) -> Poly + Sync), order: usize, samples: &[Poly]) -> bool {
    fn rec(ring: &Ring, op: &(dyn Fn(&Poly) -> Poly + Sync), depth: usize, samples: &[Poly]) -> bool {
        if depth == 0 {
            return samples.iter().all(|s| op(s).is_zero());
        }
        (0..ring.nvars()).all(|i| {
            let b = bracket(op, ring.var(i), ring);
            rec(ring, &b, depth - 1, samples)
        })
    }
    rec(ring, op, order + 1, samples)
}

/// Monomials of total degree at most `bound`, reduced in the ring and deduplicated.
pub fn sample_polynomials(ring: &Ring, bound: u32) -> Vec<Poly> {
    let n = ring.nvars();
    let mut out: Vec<Poly> = Vec::new();
    for k in 0..=bound {
        for e in exponents_of_degree(n, k) {
            let m = crate::monomial::Monomial::from_exponents(&e);
            let p = ring.reduce(&Poly::term(m, ring.field().one()));
            if !p.is_zero() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Every generator of `D^(n)` passes the bracket test on samples of degree at most `bound`.
pub fn generators_pass_bracket_test(ops: &DiffOps, bound: u32) -> bool {
    let ring = &ops.neighborhood.diagonal.ring;
    let samples = sample_polynomials(ring, bound);
    ops.generators().iter().all(|g| bracket_test(ring, &|f: &Poly| g.apply(f), ops.order, &samples))
}

/// The composition pairing `D^(p) × D^(q) → D^(p+q)` on generators, as a matrix whose
/// column `(i, j)` is the class of `g_i ∘ h_j`.
pub fn composition_matrix(first: &DiffOps, second: &DiffOps, target: &DiffOps) -> Result<Matrix> {
    if target.order != first.order + second.order {
        return Err(Error::Invalid("composition lands in the order p + q".into()));
    }
    let ring = &target.neighborhood.diagonal.ring;
    let mut cols = Vec::new();
    for g in first.generators() {
        for h in second.generators() {
            let c = Operator::from_fn(&target.neighborhood, |f| g.apply(&h.apply(f)));
            cols.push(target.express(&c).ok_or_else(|| Error::InvalidMap("composite has too large an order".into()))?);
        }
    }
    Ok(Matrix::from_cols(ring.nvars(), target.operators.gens.len(), cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;

    #[test]
    fn operators_on_the_line() {
        let a = RingPresentation::polynomial("A", Field::Rational, &["x"]);
        for n in 0..4 {
            let d = diff_ops(&a, n);
            assert_eq!(d.operators.module.free_rank(), Some(n + 1), "order {n}");
            assert!(generators_pass_bracket_test(&d, 6));
        }
        let d1 = diff_ops(&a, 1);
        let d2 = diff_ops(&a, 2);
        assert!(d1.transition(&d2).unwrap().is_injective());
        let dx = Operator::from_fn(&d1.neighborhood, |f| f.derivative(0, Field::Rational));
        assert_eq!(a.format(&dx.values[1]), "1");
        assert!(dx.values[0].is_zero());
        let sq = dx.compose(&dx);
        let vals: Vec<String> = sq.values.iter().map(|v| a.format(v)).collect();
        assert_eq!(vals, vec!["0", "0", "2"]);
        let f = a.parse_element("x^5 + x").unwrap();
        assert_eq!(a.format(&sq.apply(&f)), "20*x^3");
    }

    #[test]
    fn order_zero_is_the_ring() {
        let a = RingPresentation::parse("C", Field::Rational, &["x", "y"], &["y^2 - x^3"]).unwrap();
        let d = diff_ops(&a, 0);
        assert_eq!(d.operators.module.free_rank(), Some(1));
    }
}
