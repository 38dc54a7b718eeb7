//! Module invariants and comparison verdicts.

use std::fmt;

use crate::groebner::GroebnerBasis;
use crate::matrix::Vector;
use crate::module::{FPModule, ModuleMap};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::ring::RingPresentation;

/// Krull dimension of `k[x]/M` for a monomial ideal given by its generators: the size of a
/// largest set of variables containing the support of no generator.
pub fn krull_dimension(nvars: usize, leads: &[(usize, Monomial)]) -> usize {
    if leads.iter().any(|(_, m)| m.is_one()) {
        return 0;
    }
    let supports: Vec<u64> =
        leads.iter().map(|(_, m)| m.support().fold(0u64, |acc, (i, _)| acc | (1 << i))).collect();
    let mut best = 0;
    for set in 0u64..(1u64 << nvars) {
        let size = set.count_ones() as usize;
        if size > best && supports.iter().all(|s| s & !set != 0) {
            best = size;
        }
    }
    best
}

/// `dim_k M`, or `None` when it is infinite: the number of standard monomials of the
/// module's Gröbner basis, component by component.
pub fn vector_space_dimension(m: &FPModule) -> Option<usize> {
    if m.is_zero() {
        return Some(0);
    }
    let nvars = m.ring().nvars();
    let leads = m.gb().leading_terms();
    let mut total = 0;
    for comp in 0..m.rank() {
        let here: Vec<Monomial> = leads.iter().filter(|(c, _)| *c == comp).map(|(_, mon)| mon.clone()).collect();
        if here.iter().any(|mon| mon.is_one()) {
            continue;
        }
        let tagged: Vec<(usize, Monomial)> = here.iter().map(|mon| (0, mon.clone())).collect();
        if nvars > 0 && (here.is_empty() || krull_dimension(nvars, &tagged) > 0) {
            return None;
        }
        // Every variable has a pure power among the leads, which bounds the box to search.
        let bounds: Vec<u32> = (0..nvars)
            .map(|i| {
                here.iter()
                    .filter(|mon| mon.support().all(|(j, _)| j == i))
                    .map(|mon| mon.exponent(i))
                    .min()
                    .expect("zero-dimensional")
            })
            .collect();
        let mut exps = vec![0u32; nvars];
        loop {
            let mon = Monomial::from_exponents(&exps);
            if !here.iter().any(|l| l.divides(&mon)) {
                total += 1;
            }
            let mut i = 0;
            while i < nvars {
                exps[i] += 1;
                if exps[i] < bounds[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == nvars {
                break;
            }
        }
    }
    Some(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictStatus {
    Distinct,
    Inconclusive,
    InvariantEqual,
    IsoByMap,
}

impl VerdictStatus {
    pub fn name(self) -> &'static str {
        match self {
            VerdictStatus::IsoByMap => "iso-by-map",
            VerdictStatus::InvariantEqual => "invariant-equal",
            VerdictStatus::Distinct => "distinct",
            VerdictStatus::Inconclusive => "inconclusive",
        }
    }

    /// At least invariant-equal.
    pub fn agrees(self) -> bool {
        self >= VerdictStatus::InvariantEqual
    }
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonVerdict {
    pub status: VerdictStatus,
    pub evidence: String,
}

impl ComparisonVerdict {
    pub fn new(status: VerdictStatus, evidence: impl Into<String>) -> Self {
        ComparisonVerdict { status, evidence: evidence.into() }
    }
}

/// Largest minor size attempted when computing Fitting ideals.
pub const MAX_MINOR_SIZE: usize = 6;
/// Largest number of minors attempted.
pub const MAX_MINORS: usize = 20_000;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant by cofactor expansion along the first row, reducing modulo `J` as it goes.
pub fn determinant(ring: &RingPresentation, rows: &[Vector]) -> Poly {
    let k = rows.len();
    if k == 0 {
        return ring.one();
    }
    if k == 1 {
        return ring.reduce(&rows[0][0]);
    }
    let mut acc = ring.zero();
    for j in 0..k {
        let a = &rows[0][j];
        if a.is_zero() {
            continue;
        }
        let minor: Vec<Vector> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let d = determinant(ring, &minor);
        if d.is_zero() {
            continue;
        }
        let t = ring.mul(a, &d);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    ring.reduce(&acc)
}

/// Gröbner basis of the `j`-th Fitting ideal (including `J`), or `None` when too large.
pub fn fitting_ideal(m: &FPModule, j: usize) -> Option<GroebnerBasis> {
    let ring = m.ring();
    let r = m.rank();
    let mut gens: Vec<Poly> = ring.relations().to_vec();
    if j >= r {
        gens.push(ring.one());
    } else {
        let k = r - j;
        let s = m.relations().len();
        if k <= s {
            if k > MAX_MINOR_SIZE || binomial(r, k).saturating_mul(binomial(s, k)) > MAX_MINORS {
                return None;
            }
            let mat = m.presentation_matrix();
            for rows in combinations(r, k) {
                for cols in combinations(s, k) {
                    let sub: Vec<Vector> =
                        rows.iter().map(|&i| cols.iter().map(|&c| mat.entry(i, c).clone()).collect()).collect();
                    let d = determinant(ring, &sub);
                    if !d.is_zero() {
                        gens.push(d);
                    }
                }
            }
        }
    }
    Some(GroebnerBasis::ideal(ring.nvars(), ring.term_order(), &gens))
}

/// All Fitting ideals up to the first one that is the unit ideal.
pub fn fitting_chain(m: &FPModule) -> Option<Vec<GroebnerBasis>> {
    let p = m.prune().module;
    let mut out = Vec::new();
    for j in 0..=p.rank() {
        let f = fitting_ideal(&p, j)?;
        let whole = f.is_whole();
        out.push(f);
        if whole {
            break;
        }
    }
    Some(out)
}

/// Generic rank over a domain: the least `j` with nonzero `Fitt_j`.
pub fn generic_rank(m: &FPModule) -> Option<usize> {
    let chain = fitting_chain(m)?;
    let ring = m.ring();
    let jgb = ring.ideal_basis();
    chain.iter().position(|f| f.polys().iter().any(|p| !jgb.normal_form_poly(p).is_zero()))
}

/// Compares two modules: by a supplied map if it is an isomorphism, else by graded Hilbert
/// functions on a degree range when both carry degrees, else by Fitting ideals.
pub fn compare_modules(m: &FPModule, n: &FPModule, map: Option<&ModuleMap>) -> ComparisonVerdict {
    if **m.ring() != **n.ring() {
        return ComparisonVerdict::new(VerdictStatus::Inconclusive, "modules over different rings");
    }
    if let Some(f) = map {
        if f.is_iso() {
            return ComparisonVerdict::new(VerdictStatus::IsoByMap, "supplied map has zero kernel and cokernel");
        }
    }
    let (mz, nz) = (m.is_zero(), n.is_zero());
    if mz && nz {
        return ComparisonVerdict::new(VerdictStatus::IsoByMap, "both modules are zero");
    }
    if mz != nz {
        return ComparisonVerdict::new(VerdictStatus::Distinct, "exactly one module is zero");
    }
    if let (Some(dm), Some(dn)) = (&m.degrees, &n.degrees) {
        if m.ring().is_graded() {
            let lo = dm.iter().chain(dn).copied().min().unwrap_or(0);
            for d in lo..lo + HILBERT_RANGE {
                if m.hilbert_function(d) != n.hilbert_function(d) {
                    return ComparisonVerdict::new(VerdictStatus::Distinct, format!("Hilbert functions differ in degree {d}"));
                }
            }
            return ComparisonVerdict::new(
                VerdictStatus::InvariantEqual,
                format!("Hilbert functions agree in degrees {lo}..{}", lo + HILBERT_RANGE),
            );
        }
    }
    match (fitting_chain(m), fitting_chain(n)) {
        (Some(a), Some(b)) => {
            let len = a.len().max(b.len());
            for j in 0..len {
                let fa = a.get(j).map(|g| g.polys());
                let fb = b.get(j).map(|g| g.polys());
                let unit = |f: &Option<Vec<Poly>>| f.as_ref().map(|p| p.len() == 1 && p[0].is_constant()).unwrap_or(true);
                if fa != fb && !(unit(&fa) && unit(&fb)) {
                    return ComparisonVerdict::new(VerdictStatus::Distinct, format!("Fitting ideal {j} differs"));
                }
            }
            ComparisonVerdict::new(VerdictStatus::InvariantEqual, format!("Fitting ideals 0..{} agree", len))
        }
        _ => ComparisonVerdict::new(VerdictStatus::Inconclusive, "presentations too large for Fitting ideals"),
    }
}

/// Number of consecutive degrees compared for graded modules.
pub const HILBERT_RANGE: i64 = 24;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;
    use crate::scalar::Field;

    #[test]
    fn dimensions() {
        let r = RingPresentation::parse("C", Field::Rational, &["x", "y"], &["y^2 - x^3"]).unwrap();
        assert_eq!(r.dimension(), 1);
        let p = RingPresentation::polynomial("P", Field::Rational, &["x", "y"]);
        assert_eq!(p.dimension(), 2);
        let f = RingPresentation::parse("F", Field::Rational, &["x"], &["x^2"]).unwrap();
        assert_eq!(f.dimension(), 0);
    }

    #[test]
    fn fitting_distinguishes_points() {
        let r = RingPresentation::polynomial("R", Field::Rational, &["x"]);
        let a = FPModule::cyclic(&r, &[r.var(0)]);
        let b = FPModule::cyclic(&r, &[&r.var(0) - &r.one()]);
        assert_eq!(compare_modules(&a, &b, None).status, VerdictStatus::Distinct);
        assert_eq!(compare_modules(&a, &a, Some(&ModuleMap::identity(&a))).status, VerdictStatus::IsoByMap);
        let free = FPModule::free(&r, 2);
        assert_eq!(generic_rank(&free), Some(2));
    }
}
