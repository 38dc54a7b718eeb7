//! Sparse multivariate polynomials over an exact field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, TermOrder};
use crate::scalar::{Field, Scalar};

/// A polynomial in a fixed number of variables.
///
/// Terms are stored in descending degree-reverse-lexicographic order with no zero
/// coefficients, so equal polynomials have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: Vec<(Monomial, Scalar)>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize, field: Field) -> Self {
        Self::constant(nvars, field.one())
    }

    pub fn var(nvars: usize, i: usize, field: Field) -> Self {
        Self::term(Monomial::var(nvars, i), field.one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            Poly::zero(nvars)
        } else {
            Poly { nvars, terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant term (zero if absent).
    pub fn constant_coeff(&self, field: Field) -> Scalar {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => field.zero(),
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> Option<i64> {
        self.terms.iter().map(|(m, _)| m.weighted_degree(weights)).max()
    }

    pub fn is_homogeneous(&self, weights: &[i64]) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| m.weighted_degree(weights));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn leading_term(&self, order: TermOrder) -> Option<&(Monomial, Scalar)> {
        match order {
            TermOrder::DegRevLex => self.terms.first(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0)),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32, field: Field) -> Poly {
        let mut acc = Poly::one(self.nvars, field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one variable count.
    pub fn substitute(&self, images: &[Poly], field: Field) -> Poly {
        assert_eq!(images.len(), self.nvars, "substitution arity");
        let target_n = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.nvars, field)]).collect();
        let mut acc = Poly::zero(target_n);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target_n, c.clone());
            for (i, e) in m.support() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Renames variables into a ring with `nvars` variables: variable `i` becomes `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Poly {
        Poly::from_terms(nvars, self.terms.iter().map(|(m, c)| (m.embed(nvars, positions), c.clone())))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize, field: Field) -> Poly {
        Poly::from_terms(
            self.nvars,
            self.terms.iter().filter(|(m, _)| m.exponent(i) > 0).map(|(m, c)| {
                let e = m.exponent(i);
                let mut exps = m.exponents().to_vec();
                exps[i] -= 1;
                (Monomial::from_exponents(&exps), c * &field.from_i64(e as i64))
            }),
        )
    }

    /// Evaluates variables `i` with `values[i]` where given, leaving the others.
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Makes the leading coefficient (in storage order) equal to one.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inverse()),
        }
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        debug_assert!(self.is_zero() || other.is_zero() || self.nvars == other.nvars);
        let nvars = self.nvars.max(other.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((mb.clone(), if negate_other { -cb } else { cb.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate_other { -c } else { c.clone() })),
        );
        Poly { nvars, terms: out }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.merge(rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.merge(rhs, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.nvars.max(rhs.nvars));
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_term(m, c);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_term(m, c);
        }
        Poly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .flat_map(|(ma, ca)| rhs.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))),
        )
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&format_poly(self, &names))
    }
}

/// Renders a polynomial in infix notation, e.g. `y^2 - x^3` or `3/2*x*y + 1`.
pub fn format_poly(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = m
            .support()
            .map(|(i, e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
            .collect();
        if mono.is_empty() {
            out.push_str(&abs.to_canonical_string());
        } else {
            if !abs.is_one() {
                out.push_str(&abs.to_canonical_string());
                out.push('*');
            }
            out.push_str(&mono.join("*"));
        }
    }
    out
}

/// A polynomial ring `k[x_1..x_n]` with a monomial order and a grading by variable weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub field: Field,
    pub variables: Vec<String>,
    pub order: TermOrder,
    pub weights: Vec<i64>,
}

impl PolyRing {
    pub fn new(field: Field, variables: &[&str]) -> Result<Self> {
        Self::with_names(field, variables.iter().map(|s| s.to_string()).collect())
    }

    pub fn with_names(field: Field, variables: Vec<String>) -> Result<Self> {
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable `{v}`")));
            }
        }
        let weights = vec![1; variables.len()];
        Ok(PolyRing { field, variables, order: TermOrder::DegRevLex, weights })
    }

    pub fn with_weights(mut self, weights: Vec<i64>) -> Self {
        assert_eq!(weights.len(), self.variables.len());
        self.weights = weights;
        self
    }

    pub fn with_order(mut self, order: TermOrder) -> Self {
        self.order = order;
        self
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.nvars())
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.nvars(), self.field)
    }

    pub fn constant(&self, n: i64) -> Poly {
        Poly::constant(self.nvars(), self.field.from_i64(n))
    }

    pub fn scalar(&self, c: Scalar) -> Poly {
        Poly::constant(self.nvars(), c)
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), i, self.field)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn format(&self, p: &Poly) -> String {
        format_poly(p, &self.variables)
    }

    /// Parses an infix polynomial. Multiplication must be explicit (`2*x`, not `2x`).
    pub fn parse(&self, text: &str) -> Result<Poly> {
        let mut p = ExprParser { ring: self, chars: text.char_indices().collect(), pos: 0, text };
        let value = p.sum()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(value)
    }

    /// Parses with errors reported against `line` of a larger document, offset by `column`.
    pub fn parse_at(&self, text: &str, line: usize, column: usize) -> Result<Poly> {
        self.parse(text).map_err(|e| match e {
            Error::Parse { column: c, message, .. } => Error::Parse { line, column: column + c - 1, message },
            other => other,
        })
    }
}

struct ExprParser<'a> {
    ring: &'a PolyRing,
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl ExprParser<'_> {
    fn error(&self, message: &str) -> Error {
        let column = if self.pos < self.chars.len() {
            self.text[..self.chars[self.pos].0].chars().count() + 1
        } else {
            self.text.chars().count() + 1
        };
        Error::Parse { line: 1, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn sum(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.product()?
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let start = self.pos;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        self.pos = start;
                        return Err(self.error("division only by nonzero constants"));
                    }
                    let c = d.constant_coeff(self.ring.field).inverse();
                    acc = acc.scale(&c);
                }
                Some(c) if c.is_alphanumeric() || c == '(' || c == '_' => {
                    return Err(self.error("implicit multiplication is not allowed; use `*`"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
            let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
            let e: u32 = s.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e, self.ring.field));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                let n: BigInt = s.parse().map_err(|_| self.error("bad integer"))?;
                let q = BigRational::from_integer(n);
                let c = self
                    .ring
                    .field
                    .from_rational(&q)
                    .ok_or_else(|| self.error("constant not representable in the field"))?;
                Ok(self.ring.scalar(c))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len() {
                    let ch = self.chars[self.pos].1;
                    if ch.is_alphanumeric() || ch == '_' || ch == '\'' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                match self.ring.var_index(&name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable `{name}`")))
                    }
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(Field::Rational, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        let r = ring();
        for s in ["y^2 - x^3", "3/2*x*y + 1", "-x + z^4", "0", "x - 1/3"] {
            let p = r.parse(s).unwrap();
            let q = r.parse(&r.format(&p)).unwrap();
            assert_eq!(p, q, "{s}");
        }
        assert_eq!(r.format(&r.parse("(x+y)^2").unwrap()), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let r = ring();
        match r.parse("2x") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(r.parse("x + w"), Err(Error::Parse { .. })));
    }

    #[test]
    fn distributivity_and_substitution() {
        let r = ring();
        let p = r.parse("x + y").unwrap();
        let q = r.parse("x*y - 2").unwrap();
        let s = r.parse("z^2 + x").unwrap();
        assert_eq!(&(&p + &q) * &s, &(&p * &s) + &(&q * &s));
        let images = vec![r.parse("y").unwrap(), r.parse("x").unwrap(), r.parse("z").unwrap()];
        assert_eq!(q.substitute(&images, r.field), q);
        assert_eq!(p.derivative(0, r.field), r.one());
    }
}
