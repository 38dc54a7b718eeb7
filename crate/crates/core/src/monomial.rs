//! Exponent vectors and the term/module orders used by the Gröbner engine.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent vector. Its `Ord` is degree reverse lexicographic, the canonical storage order
/// for polynomial terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u32; 8]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial { exps: SmallVec::from_slice(exps) }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.exps.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| b - a).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial { exps: self.exps.iter().map(|e| e * k).collect() }
    }

    /// Re-embeds into a ring with `nvars` variables, sending variable `i` to `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Monomial {
        let mut m = Monomial::one(nvars);
        for (i, &e) in self.exps.iter().enumerate() {
            m.exps[positions[i]] += e;
        }
        m
    }

    /// Nonzero exponents as `(variable, exponent)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        degrevlex(&self.exps, &other.exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// A multiplicative total order on monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermOrder {
    DegRevLex,
    Lex,
    /// Elimination order: degrevlex on variables `0..split` decides first, then degrevlex on
    /// the rest.
    Block(usize),
}

impl TermOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::DegRevLex => degrevlex(&a.exps, &b.exps),
            TermOrder::Lex => a.exps.cmp(&b.exps),
            TermOrder::Block(split) => {
                let s = (*split).min(a.nvars());
                degrevlex(&a.exps[..s], &b.exps[..s])
                    .then_with(|| degrevlex(&a.exps[s..], &b.exps[s..]))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            TermOrder::DegRevLex => "degrevlex".into(),
            TermOrder::Lex => "lex".into(),
            TermOrder::Block(s) => format!("block({s})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Position {
    /// Position over term: the component decides first, lower index is larger.
    Pot,
    /// Term over position.
    Top,
}

/// Order on terms `(component, monomial)` of a free module.
///
/// Components below `priority` dominate every other component regardless of the monomial;
/// this is what turns the augmented-module trick into an elimination of the leading block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub term: TermOrder,
    pub position: Position,
    pub priority: usize,
}

impl ModuleOrder {
    pub fn pot(term: TermOrder) -> Self {
        ModuleOrder { term, position: Position::Pot, priority: 0 }
    }

    pub fn top(term: TermOrder) -> Self {
        ModuleOrder { term, position: Position::Top, priority: 0 }
    }

    pub fn with_priority(mut self, priority: usize) -> Self {
        self.priority = priority;
        self
    }

    pub fn cmp(&self, ca: usize, ma: &Monomial, cb: usize, mb: &Monomial) -> Ordering {
        if self.priority > 0 {
            let pa = ca < self.priority;
            let pb = cb < self.priority;
            if pa != pb {
                return pa.cmp(&pb);
            }
        }
        match self.position {
            Position::Pot => cb.cmp(&ca).then_with(|| self.term.cmp(ma, mb)),
            Position::Top => self.term.cmp(ma, mb).then_with(|| cb.cmp(&ca)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_basics() {
        // x > y > z, and x*z < y^2 in degrevlex
        assert!(m(&[1, 0, 0]) > m(&[0, 1, 0]));
        assert!(m(&[1, 0, 1]) < m(&[0, 2, 0]));
        assert!(m(&[0, 0, 2]) > m(&[1, 0, 0]));
    }

    #[test]
    fn block_order_eliminates() {
        let o = TermOrder::Block(1);
        // anything with x beats anything without
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 9])), Ordering::Greater);
    }

    #[test]
    fn priority_block_dominates() {
        let o = ModuleOrder::pot(TermOrder::DegRevLex).with_priority(1);
        assert_eq!(o.cmp(0, &m(&[0]), 1, &m(&[5])), Ordering::Greater);
        let t = ModuleOrder::top(TermOrder::DegRevLex);
        assert_eq!(t.cmp(1, &m(&[2]), 0, &m(&[1])), Ordering::Greater);
    }

    #[test]
    fn divisibility() {
        assert!(m(&[1, 1]).divides(&m(&[2, 1])));
        assert_eq!(m(&[1, 1]).quotient_of(&m(&[2, 1])), m(&[1, 0]));
        assert_eq!(m(&[2, 0]).lcm(&m(&[1, 3])), m(&[2, 3]));
    }
}
