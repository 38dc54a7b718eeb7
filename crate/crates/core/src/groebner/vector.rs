//! Module elements as term lists sorted by a module order.
//!
//! Each term carries a precomputed integer key whose lexicographic order equals the module
//! order, so comparisons during reduction never consult the order again.

use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::monomial::{Monomial, ModuleOrder, Position, TermOrder};
use crate::poly::Poly;
use crate::scalar::Scalar;

pub(crate) type Key = SmallVec<[i64; 16]>;

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub key: Key,
    pub comp: usize,
    pub mono: Monomial,
    pub coeff: Scalar,
}

fn push_degrevlex(key: &mut Key, exps: &[u32]) {
    key.push(exps.iter().map(|&e| e as i64).sum());
    for &e in exps.iter().rev() {
        key.push(-(e as i64));
    }
}

fn term_key(order: TermOrder, key: &mut Key, m: &Monomial) {
    let e = m.exponents();
    match order {
        TermOrder::DegRevLex => push_degrevlex(key, e),
        TermOrder::Lex => key.extend(e.iter().map(|&x| x as i64)),
        TermOrder::Block(s) => {
            let s = s.min(e.len());
            push_degrevlex(key, &e[..s]);
            push_degrevlex(key, &e[s..]);
        }
    }
}

pub(crate) fn make_key(order: &ModuleOrder, comp: usize, m: &Monomial) -> Key {
    let mut key = Key::new();
    if order.priority > 0 {
        key.push((comp < order.priority) as i64);
    }
    match order.position {
        Position::Pot => {
            key.push(-(comp as i64));
            term_key(order.term, &mut key, m);
        }
        Position::Top => {
            term_key(order.term, &mut key, m);
            key.push(-(comp as i64));
        }
    }
    key
}

/// A vector in a free module, terms in strictly descending order.
#[derive(Clone, Debug, Default)]
pub(crate) struct MVec {
    pub terms: Vec<Term>,
}

impl MVec {
    pub fn from_polys(order: &ModuleOrder, v: &[Poly]) -> MVec {
        let mut terms: Vec<Term> = v
            .iter()
            .enumerate()
            .flat_map(|(c, p)| {
                p.terms().iter().map(move |(m, k)| Term {
                    key: make_key(order, c, m),
                    comp: c,
                    mono: m.clone(),
                    coeff: k.clone(),
                })
            })
            .collect();
        terms.sort_by(|a, b| b.key.cmp(&a.key));
        MVec { terms }
    }

    pub fn to_polys(&self, nvars: usize, rank: usize) -> Vec<Poly> {
        let mut parts: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            parts[t.comp].push((t.mono.clone(), t.coeff.clone()));
        }
        parts.into_iter().map(|ts| Poly::from_terms(nvars, ts)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn make_monic(&mut self) {
        if let Some(t) = self.terms.first() {
            if !t.coeff.is_one() {
                let inv = t.coeff.inverse();
                for t in &mut self.terms {
                    t.coeff = &t.coeff * &inv;
                }
            }
        }
    }

    /// `self - c * m * other`, where multiplying by a monomial preserves the order.
    pub fn sub_mul(&self, order: &ModuleOrder, c: &Scalar, m: &Monomial, other: &MVec) -> MVec {
        self.sub_mul_from(0, order, c, m, other)
    }

    /// As `sub_mul` but only the terms of `self` from index `start` are kept.
    pub fn sub_mul_from(&self, start: usize, order: &ModuleOrder, c: &Scalar, m: &Monomial, other: &MVec) -> MVec {
        let shifted: Vec<Term> = other
            .terms
            .iter()
            .map(|t| {
                let mono = t.mono.mul(m);
                Term { key: make_key(order, t.comp, &mono), comp: t.comp, mono, coeff: -(&t.coeff * c) }
            })
            .collect();
        let a = &self.terms[start..];
        let mut out = Vec::with_capacity(a.len() + shifted.len());
        let mut i = 0;
        let mut shifted = shifted.into_iter().peekable();
        while i < a.len() {
            let Some(b) = shifted.peek() else { break };
            match a[i].key.cmp(&b.key) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(shifted.next().unwrap());
                }
                Ordering::Equal => {
                    let b = shifted.next().unwrap();
                    let s = &a[i].coeff + &b.coeff;
                    if !s.is_zero() {
                        out.push(Term { coeff: s, ..b });
                    }
                    i += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(shifted);
        MVec { terms: out }
    }
}
