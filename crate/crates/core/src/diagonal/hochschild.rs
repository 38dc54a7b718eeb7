//! Hochschild homology `A ⊗^L_{A^e} A`, Kähler forms and the HKR map.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::complex::ChainComplex;
use crate::derived::Window;
use crate::duality::smooth::{cotangent_module, smoothness_check, Smoothness};
use crate::error::{Error, Result};
use crate::groebner::Lifter;
use crate::matrix::{scale_vector, Matrix, Vector};
use crate::module::{FPModule, ModuleMap, Subquotient};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::resolve::{free_resolution, Resolution};
use crate::ring::{Ring, RingMap};

use super::Diagonal;

/// Hochschild homology through a free resolution `P → O_Δ` over the enveloping ring.
#[derive(Clone, Debug)]
pub struct Hochschild {
    pub diagonal: Diagonal,
    pub resolution: Resolution,
    /// `P ⊗_{A^e} A`.
    pub complex: ChainComplex,
    pub certified: Window,
}

impl Hochschild {
    pub fn homology(&self, d: i64) -> Result<Subquotient> {
        if !self.certified.contains(d) {
            return Err(Error::OutsideWindow(d));
        }
        Ok(self.complex.homology(d))
    }
}

/// Resolution of the diagonal bimodule reaching degree `length`.
pub fn bimodule_resolution(diag: &Diagonal, length: usize) -> Resolution {
    free_resolution(&diag.diagonal_module(), length)
}

/// `P ⊗_{A^e} A` for a complex of free bimodules.
pub fn restrict_to_diagonal(diag: &Diagonal, p: &ChainComplex) -> ChainComplex {
    let mult = diag.multiplication();
    let a = &diag.ring;
    if p.is_empty() {
        return ChainComplex::zero(a);
    }
    let terms: Vec<FPModule> = p.degrees().map(|k| FPModule::free(a, p.rank(k))).collect();
    let diffs: Vec<Matrix> = (p.lo() + 1..=p.hi()).map(|k| p.diff(k).map_entries(|e| mult.apply_unchecked(e))).collect();
    ChainComplex::new_unchecked(a, p.lo(), terms, diffs).expect("same shapes as P")
}

pub fn hochschild(a: &Ring, window: Window, max_length: usize) -> Result<Hochschild> {
    hochschild_of(&Diagonal::absolute(a), window, max_length)
}

/// `A ⊗^L_{A ⊗_B A} A` for a relative diagonal.
pub fn hochschild_of(diag: &Diagonal, window: Window, max_length: usize) -> Result<Hochschild> {
    let length = (window.hi + 1).max(0) as usize;
    if length > max_length + 1 {
        return Err(Error::WindowTooNarrow { lo: window.lo, hi: window.hi, max_length });
    }
    let resolution = bimodule_resolution(diag, length);
    let complex = restrict_to_diagonal(diag, &resolution.complex);
    Ok(Hochschild { diagonal: diag.clone(), resolution, complex, certified: window })
}

/// `Ω^n_{A/B}` as the exterior power of `I/I²`.
#[derive(Clone, Debug)]
pub struct TopForms {
    pub degree: usize,
    pub cotangent: FPModule,
    /// Subsets `S` of the doubled variables indexing the generators `dx_S`.
    pub subsets: Vec<Vec<usize>>,
    pub module: FPModule,
}

/// Subsets of size `k` of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.extend(subsets(n - 1, k));
    out.sort();
    out
}

/// `Λ^k (A^r / R) = Λ^k A^r / (R ∧ Λ^{k-1} A^r)`.
pub fn exterior_power(m: &FPModule, k: usize) -> (Vec<Vec<usize>>, FPModule) {
    let ring = m.ring();
    let r = m.rank();
    let basis = subsets(r, k);
    let index: HashMap<Vec<usize>, usize> = basis.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut rels = Vec::new();
    if k > 0 {
        for rho in m.relations() {
            for t in subsets(r, k - 1) {
                let mut v = vec![ring.zero(); basis.len()];
                for (i, c) in rho.iter().enumerate() {
                    if c.is_zero() || t.contains(&i) {
                        continue;
                    }
                    let before = t.iter().filter(|&&j| j < i).count();
                    let mut s = t.clone();
                    s.push(i);
                    s.sort();
                    let pos = index[&s];
                    v[pos] = if before % 2 == 0 { &v[pos] + c } else { &v[pos] - c };
                }
                rels.push(v);
            }
        }
    }
    let module = FPModule::new(ring, basis.len(), rels);
    (basis, module)
}

/// `Ω^n_{A/k}`; fails unless `A` is smooth of dimension `n`.
pub fn top_forms(a: &Ring, n: usize) -> Result<TopForms> {
    top_forms_of(&Diagonal::absolute(a), &RingMap::structure(a), n)
}

pub fn top_forms_of(diag: &Diagonal, f: &RingMap, n: usize) -> Result<TopForms> {
    match smoothness_check(f) {
        Smoothness::Smooth(d) if d == n => {}
        Smoothness::Smooth(d) => return Err(Error::NotSmooth(format!("relative dimension is {d}, not {n}"))),
        other => return Err(Error::NotSmooth(other.to_string())),
    }
    let cotangent = cotangent_module(diag);
    let (subsets, module) = exterior_power(&cotangent, n);
    Ok(TopForms { degree: n, cotangent, subsets, module })
}

/// The comparison map from the normalized bar resolution into `P`, built lazily by lifting
/// through the differentials of `P`.
pub struct BarComparison<'a> {
    diag: &'a Diagonal,
    res: &'a Resolution,
    lifters: Vec<Lifter>,
    memo: Mutex<HashMap<Vec<Monomial>, Vector>>,
}

impl<'a> BarComparison<'a> {
    pub fn new(diag: &'a Diagonal, res: &'a Resolution, top: usize) -> Result<Self> {
        if res.complex.rank(0) != 1 {
            return Err(Error::Invalid("resolution of the diagonal must start with a cyclic term".into()));
        }
        if (res.complex.hi() as usize) < top {
            return Err(Error::WindowTooNarrow { lo: 0, hi: top as i64, max_length: res.length() });
        }
        let env = &diag.env;
        let lifters = (1..=top as i64)
            .map(|k| {
                let d = res.complex.diff(k);
                Lifter::new(env.field(), env.nvars(), d.nrows, &d.cols, &env.ideal_vectors(d.nrows))
            })
            .collect();
        Ok(BarComparison { diag, res, lifters, memo: Mutex::new(HashMap::new()) })
    }

    /// `χ([a_1 | … | a_k])` for elements of `A`, extended multilinearly over standard monomials.
    pub fn chi(&self, entries: &[Poly]) -> Result<Vector> {
        let a = &self.diag.ring;
        let env = &self.diag.env;
        let k = entries.len();
        let rank = self.res.complex.rank(k as i64);
        let mut acc = vec![env.zero(); rank];
        let expanded: Vec<Vec<(Monomial, crate::scalar::Scalar)>> =
            entries.iter().map(|p| a.reduce(p).terms().to_vec()).collect();
        let mut failed = None;
        for_each_choice(&expanded, a.field(), &mut |monos, coeff| {
            if failed.is_some() {
                return;
            }
            match self.chi_monomials(monos) {
                Ok(v) => {
                    let c = env.scalar_poly(coeff.clone());
                    acc = crate::matrix::add_vectors(&acc, &scale_vector(&v, &c));
                }
                Err(e) => failed = Some(e),
            }
        });
        if let Some(e) = failed {
            return Err(e);
        }
        Ok(env.reduce_vec(&acc))
    }

    fn chi_monomials(&self, monos: &[Monomial]) -> Result<Vector> {
        let env = &self.diag.env;
        let k = monos.len();
        if k == 0 {
            return Ok(self.res.cover_to_f0.cols[0].clone());
        }
        let rank = self.res.complex.rank(k as i64);
        if monos.iter().any(|m| m.is_one()) {
            return Ok(vec![env.zero(); rank]);
        }
        if let Some(v) = self.memo.lock().expect("memo lock").get(monos) {
            return Ok(v.clone());
        }
        let a = &self.diag.ring;
        let field = a.field();
        let polys: Vec<Poly> = monos.iter().map(|m| Poly::term(m.clone(), field.one())).collect();
        // χ_{k-1} applied to the bar differential of [a_1 | … | a_k].
        let mut target = scale_vector(&self.chi(&polys[1..])?, &self.diag.left.apply_unchecked(&polys[0]));
        for i in 0..k - 1 {
            let mut merged = polys[..i].to_vec();
            merged.push(a.mul(&polys[i], &polys[i + 1]));
            merged.extend(polys[i + 2..].iter().cloned());
            let v = self.chi(&merged)?;
            target = if i % 2 == 0 {
                crate::matrix::add_vectors(&target, &v.iter().map(|p| -p).collect::<Vec<_>>())
            } else {
                crate::matrix::add_vectors(&target, &v)
            };
        }
        let last = scale_vector(&self.chi(&polys[..k - 1])?, &self.diag.right.apply_unchecked(&polys[k - 1]));
        target = if k.is_multiple_of(2) {
            crate::matrix::add_vectors(&target, &last)
        } else {
            crate::matrix::add_vectors(&target, &last.iter().map(|p| -p).collect::<Vec<_>>())
        };
        let target = env.reduce_vec(&target);
        let lifted = self.lifters[k - 1]
            .lift(&target)
            .ok_or_else(|| Error::InvalidMap(format!("bar element does not lift in degree {k}")))?;
        let lifted = env.reduce_vec(&lifted);
        self.memo.lock().expect("memo lock").insert(monos.to_vec(), lifted.clone());
        Ok(lifted)
    }
}

fn for_each_choice(
    options: &[Vec<(Monomial, crate::scalar::Scalar)>],
    field: crate::scalar::Field,
    f: &mut dyn FnMut(&[Monomial], &crate::scalar::Scalar),
) {
    fn rec(
        options: &[Vec<(Monomial, crate::scalar::Scalar)>],
        i: usize,
        monos: &mut Vec<Monomial>,
        coeff: crate::scalar::Scalar,
        f: &mut dyn FnMut(&[Monomial], &crate::scalar::Scalar),
    ) {
        if i == options.len() {
            f(monos, &coeff);
            return;
        }
        for (m, c) in &options[i] {
            monos.push(m.clone());
            rec(options, i + 1, monos, &coeff * c, f);
            monos.pop();
        }
    }
    rec(options, 0, &mut Vec::new(), field.one(), f);
}

/// Antisymmetrization `Σ_σ sgn(σ) [x_{s_σ(1)} | … | x_{s_σ(n)}]` pushed into `HH_n`.
pub fn hkr_map(hh: &Hochschild, forms: &TopForms) -> Result<ModuleMap> {
    let n = forms.degree;
    let diag = &hh.diagonal;
    let a = &diag.ring;
    let target = hh.homology(n as i64)?;
    let chi = BarComparison::new(diag, &hh.resolution, n)?;
    let mult = diag.multiplication();
    let mut cols = Vec::with_capacity(forms.subsets.len());
    for s in &forms.subsets {
        let mut acc = vec![a.zero(); hh.complex.rank(n as i64)];
        for (perm, sign) in permutations(n) {
            let entries: Vec<Poly> = perm.iter().map(|&i| a.var(diag.doubled[s[i]])).collect();
            let v = mult.apply_vec(&chi.chi(&entries)?);
            let v = if sign > 0 { v } else { v.iter().map(|p| -p).collect() };
            acc = crate::matrix::add_vectors(&acc, &v);
        }
        let acc = a.reduce_vec(&acc);
        let coords = target.express(&acc).ok_or_else(|| Error::InvalidMap("HKR class is not a cycle".into()))?;
        cols.push(coords);
    }
    let m = Matrix::from_cols(a.nvars(), target.module.rank(), cols);
    ModuleMap::new(forms.module.clone(), target.module.clone(), m)
}

/// Permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}
