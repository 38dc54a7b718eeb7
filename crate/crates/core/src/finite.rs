//! Restriction and extension of scalars along ring maps, and duals along module-finite maps.
//!
//! Restriction of scalars along `f : B → C` works in the graph ring
//! `G = k[z, s] / (J_C(z), s - f(z))`, where `z` are the variables of `C` and `s` those of `B`.
//! Under a block order eliminating `z`, the standard monomials free of `s` generate the module
//! over `B`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::matrix::{unit_vector, Matrix, Vector};
use crate::module::{FPModule, ModuleMap};
use crate::monomial::{Monomial, ModuleOrder, TermOrder};
use crate::poly::Poly;
use crate::ring::RingMap;

/// Upper bound on generators produced by restriction of scalars.
pub const MAX_PUSHFORWARD_RANK: usize = 20_000;

/// A module over `C` viewed as a module over `B` along `f : B → C`.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub map: RingMap,
    pub module: FPModule,
    basis: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
    gb: GroebnerBasis,
}

fn split(m: &Monomial, nz: usize) -> (Monomial, Monomial) {
    let e = m.exponents();
    (Monomial::from_exponents(&e[..nz]), Monomial::from_exponents(&e[nz..]))
}

impl Pushforward {
    pub fn new(f: &RingMap, m: &FPModule) -> Result<Self> {
        if **m.ring() != *f.target {
            return Err(Error::RingMismatch("module is not over the target of the map".into()));
        }
        let (c, b) = (&f.target, &f.source);
        let (nz, ns) = (c.nvars(), b.nvars());
        let ng = nz + ns;
        let zpos: Vec<usize> = (0..nz).collect();
        let r = m.rank();
        let mut gens: Vec<Vector> = m.relations().iter().map(|v| v.iter().map(|p| p.embed(ng, &zpos)).collect()).collect();
        let field = c.field();
        let mut ideal: Vec<Poly> = c.relations().iter().map(|p| p.embed(ng, &zpos)).collect();
        for (j, img) in f.images.iter().enumerate() {
            ideal.push(&Poly::var(ng, nz + j, field) - &img.embed(ng, &zpos));
        }
        for i in 0..r {
            for g in &ideal {
                let mut v = vec![Poly::zero(ng); r];
                v[i] = g.clone();
                gens.push(v);
            }
        }
        let gb = GroebnerBasis::new(ng, r, ModuleOrder::pot(TermOrder::Block(nz)), &gens);
        let leads = gb.leading_terms();
        for i in 0..r {
            for k in 0..nz {
                let bounded = leads.iter().any(|(comp, mono)| {
                    *comp == i
                        && mono.exponents()[nz..].iter().all(|&e| e == 0)
                        && mono.exponents()[..nz].iter().enumerate().all(|(j, &e)| j == k || e == 0)
                });
                if !bounded {
                    return Err(Error::NotFinite(format!(
                        "variable {} is not integral over {} on generator {i}",
                        c.variables()[k],
                        b.label
                    )));
                }
            }
        }
        let mut basis: Vec<(usize, Monomial)> = Vec::new();
        let mut index = HashMap::new();
        for i in 0..r {
            let mut queue = VecDeque::from([Monomial::one(ng)]);
            while let Some(mono) = queue.pop_front() {
                let key = (i, split(&mono, nz).0);
                if index.contains_key(&key) || !gb.is_standard(i, &mono) {
                    continue;
                }
                if basis.len() >= MAX_PUSHFORWARD_RANK {
                    return Err(Error::NotFinite("too many generators over the source ring".into()));
                }
                index.insert(key.clone(), basis.len());
                basis.push(key);
                for k in 0..nz {
                    queue.push_back(mono.mul(&Monomial::var(ng, k)));
                }
            }
        }
        let mut p = Pushforward {
            map: f.clone(),
            module: FPModule::zero(b),
            basis,
            index,
            gb,
        };
        let mut rels: Vec<Vector> = Vec::new();
        for (bi, (i, beta)) in p.basis.iter().enumerate() {
            let mut gammas: Vec<Monomial> = Vec::new();
            for (comp, lead) in &leads {
                let (lz, ls) = split(lead, nz);
                if *comp == *i && lz.divides(beta) && !gammas.iter().any(|g| g.divides(&ls)) {
                    gammas.retain(|g| !ls.divides(g));
                    gammas.push(ls);
                }
            }
            for gamma in gammas {
                let full = Monomial::from_exponents(&[beta.exponents(), gamma.exponents()].concat());
                let mut v = vec![Poly::zero(ng); r];
                v[*i] = Poly::term(full, field.one());
                let mut rel = p.coordinates(&p.gb.normal_form(&v));
                rel[bi] = &rel[bi] - &Poly::term(gamma, field.one());
                rels.push(rel);
            }
        }
        p.module = FPModule::new(b, p.basis.len(), rels);
        Ok(p)
    }

    fn coordinates(&self, nf: &[Poly]) -> Vector {
        let b = &self.map.source;
        let nz = self.map.target.nvars();
        let mut out = vec![Poly::zero(b.nvars()); self.basis.len()];
        for (i, p) in nf.iter().enumerate() {
            let mut groups: BTreeMap<usize, Vec<(Monomial, crate::scalar::Scalar)>> = BTreeMap::new();
            for (m, c) in p.terms() {
                let (z, s) = split(m, nz);
                let k = self.index[&(i, z)];
                groups.entry(k).or_default().push((s, c.clone()));
            }
            for (k, terms) in groups {
                out[k] = &out[k] + &Poly::from_terms(b.nvars(), terms);
            }
        }
        out
    }

    /// Coordinates over the source ring of an element given on the cover of the module.
    pub fn express(&self, v: &[Poly]) -> Vector {
        let ng = self.gb.nvars();
        let zpos: Vec<usize> = (0..self.map.target.nvars()).collect();
        let w: Vector = v.iter().map(|p| p.embed(ng, &zpos)).collect();
        let c = self.coordinates(&self.gb.normal_form(&w));
        self.map.source.reduce_vec(&c)
    }

    /// Generators as `(component, monomial in the target variables)`.
    pub fn basis(&self) -> &[(usize, Monomial)] {
        &self.basis
    }

    /// The cover element of generator `k`.
    pub fn generator(&self, k: usize) -> Vector {
        let c = &self.map.target;
        let (i, beta) = &self.basis[k];
        let mut v = vec![c.zero(); self.gb.rank()];
        v[*i] = Poly::term(beta.clone(), c.field().one());
        v
    }

    /// Restriction of scalars of a map `g : M → M'` between pushed-forward modules.
    pub fn push_map(&self, target: &Pushforward, g: &ModuleMap) -> ModuleMap {
        let cols = crate::par::map_range(self.basis.len(), |k| target.express(&g.matrix.apply(&self.generator(k))));
        let m = Matrix::from_cols(self.map.source.nvars(), target.basis.len(), cols);
        ModuleMap::new(self.module.clone(), target.module.clone(), m).expect("restriction of scalars preserves relations")
    }
}

/// `C` as a module over `B`, if it is finite.
pub fn finiteness_certificate(f: &RingMap) -> Result<Pushforward> {
    Pushforward::new(f, &FPModule::free(&f.target, 1))
}

/// `M ⊗_B C` for `f : B → C`.
pub fn extend_scalars(f: &RingMap, m: &FPModule) -> FPModule {
    let rels = m.relations().iter().map(|v| f.apply_vec(v)).collect();
    FPModule::new(&f.target, m.rank(), rels)
}

/// Entrywise image of a matrix under a ring map.
pub fn map_matrix(f: &RingMap, m: &Matrix) -> Matrix {
    let cols = m.cols.iter().map(|c| f.apply_vec(c)).collect();
    Matrix::from_cols(f.target.nvars(), m.nrows, cols)
}

/// Termwise extension of scalars of a complex; this is `Lf^*` on complexes of free modules.
pub fn extend_complex(f: &RingMap, c: &ChainComplex) -> ChainComplex {
    if c.is_empty() {
        return ChainComplex::zero(&f.target);
    }
    let terms = c.terms().iter().map(|t| extend_scalars(f, t)).collect();
    let diffs = (c.lo() + 1..=c.hi()).map(|i| map_matrix(f, &c.diff(i))).collect();
    ChainComplex::new_unchecked(&f.target, c.lo(), terms, diffs).expect("shapes are preserved")
}

/// Whether every target variable is the image of a source variable.
pub fn is_variable_surjective(f: &RingMap) -> bool {
    (0..f.target.nvars()).all(|j| f.images.iter().any(|p| *p == f.target.var(j)))
}

/// Reinterprets a `B`-module annihilated by `ker f` as a module over `C`, for surjective `f`.
pub fn descend_along_surjection(f: &RingMap, m: &FPModule) -> Result<FPModule> {
    if !is_variable_surjective(f) {
        return Err(Error::Invalid("map is not surjective on variables".into()));
    }
    Ok(extend_scalars(f, m))
}

/// `Hom_B(C, B)` as a `C`-module, for `C` free over `B` (dual basis construction).
pub fn dual_of_free_algebra(f: &RingMap) -> Result<FPModule> {
    let p = finiteness_certificate(f)?;
    if !p.module.is_free_presentation() {
        return Err(Error::NotFinite(format!("{} is not free over {}", f.target.label, f.source.label)));
    }
    let c = &f.target;
    let n = p.basis().len();
    let mut rels: Vec<Vector> = Vec::new();
    for j in 0..c.nvars() {
        let zj = c.var(j);
        // Column l of the multiplication matrix: z_j · basis_l in the basis.
        let mult: Vec<Vector> = (0..n).map(|l| p.express(&[c.mul(&zj, &p.generator(l)[0])])).collect();
        for k in 0..n {
            let mut rel = unit_vector(c, n, k).into_iter().map(|e| c.mul(&e, &zj)).collect::<Vector>();
            for (l, col) in mult.iter().enumerate() {
                let coeff = f.apply_vec(&[col[k].clone()]).pop().unwrap();
                rel[l] = c.reduce(&(&rel[l] - &coeff));
            }
            rels.push(rel);
        }
    }
    Ok(FPModule::new(c, n, rels))
}

/// Restriction of scalars of every term of a complex.
pub fn push_complex(f: &RingMap, c: &ChainComplex) -> Result<ChainComplex> {
    if c.is_empty() {
        return Ok(ChainComplex::zero(&f.source));
    }
    let pushed: Vec<Pushforward> = c.terms().iter().map(|t| Pushforward::new(f, t)).collect::<Result<_>>()?;
    let terms = pushed.iter().map(|p| p.module.clone()).collect();
    let diffs = (c.lo() + 1..=c.hi())
        .map(|i| {
            let (s, t) = (&pushed[(i - c.lo()) as usize], &pushed[(i - c.lo() - 1) as usize]);
            let d = c.diff(i);
            let cols = (0..s.basis().len()).map(|k| t.express(&d.apply(&s.generator(k)))).collect();
            Matrix::from_cols(f.source.nvars(), t.basis().len(), cols)
        })
        .collect();
    ChainComplex::new_unchecked(&f.source, c.lo(), terms, diffs)
}

/// Variables of the source sent to distinct target variables, as target indices.
pub fn variable_inclusion(f: &RingMap) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(f.images.len());
    for p in &f.images {
        let j = (0..f.target.nvars()).find(|&j| *p == f.target.var(j))?;
        if out.contains(&j) {
            return None;
        }
        out.push(j);
    }
    Some(out)
}

/// Restriction of scalars of a module.
pub fn restrict(f: &RingMap, m: &FPModule) -> Result<FPModule> {
    Pushforward::new(f, m).map(|p| p.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;

    #[test]
    fn cusp_over_the_line_is_free_of_rank_two() {
        let b = RingPresentation::polynomial("B", Field::Rational, &["t"]);
        let c = RingPresentation::parse("C", Field::Rational, &["x", "y"], &["y^2 - x^3"]).unwrap();
        let f = RingMap::new(b.clone(), c.clone(), vec![c.var(0)]).unwrap();
        let p = finiteness_certificate(&f).unwrap();
        assert_eq!(p.module.rank(), 2);
        assert!(p.module.is_free_presentation());
        let y2 = p.express(&[c.parse_element("y^2").unwrap()]);
        assert_eq!(b.format(&y2[0]), "t^3");
        let dual = dual_of_free_algebra(&f).unwrap();
        assert_eq!(dual.prune().module.rank(), 1);
    }

    #[test]
    fn fat_point_over_field_and_line() {
        let k = RingPresentation::polynomial("k", Field::Rational, &[]);
        let a = RingPresentation::parse("F", Field::Rational, &["x"], &["x^2"]).unwrap();
        let p = finiteness_certificate(&RingMap::new(k, a.clone(), vec![]).unwrap()).unwrap();
        assert_eq!(p.module.rank(), 2);
        let line = RingPresentation::polynomial("L", Field::Rational, &["x"]);
        let q = RingMap::new(line.clone(), a.clone(), vec![a.var(0)]).unwrap();
        let p = finiteness_certificate(&q).unwrap();
        assert_eq!(p.module.rank(), 1);
        assert_eq!(p.module.relations().len(), 1);
        let inc = RingMap::new(RingPresentation::polynomial("k", Field::Rational, &[]), line, vec![]).unwrap();
        assert!(matches!(finiteness_certificate(&inc), Err(Error::NotFinite(_))));
    }
}
