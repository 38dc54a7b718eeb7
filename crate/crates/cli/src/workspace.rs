//! Workspace documents: line-oriented declarations of fields, rings, ideals, maps and modules.
//!
//! ```text
//! field Q
//! ring A = poly(x, y) / (y^2 - x^3)
//! ideal I in A = (x, y)
//! map f : B -> A = [t -> x]
//! module M over A = coker [[x, y]]
//! module F over A = free 2
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use shriek_core::scalar::is_prime;
use shriek_core::{Error, FPModule, Field, Poly, PolyRing, Result, Ring, RingMap, RingPresentation};

#[derive(Clone, Debug)]
pub enum Decl {
    Field(Field),
    Ring { name: String, ring: Ring },
    Ideal { name: String, ring: String, generators: Vec<Poly> },
    Map { name: String, source: String, target: String, map: RingMap },
    Module { name: String, ring: String, module: FPModule },
}

impl Decl {
    pub fn name(&self) -> Option<&str> {
        match self {
            Decl::Field(_) => None,
            Decl::Ring { name, .. } | Decl::Ideal { name, .. } | Decl::Map { name, .. } | Decl::Module { name, .. } => {
                Some(name)
            }
        }
    }
}

impl PartialEq for Decl {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Decl::Field(a), Decl::Field(b)) => a == b,
            (Decl::Ring { name: n, ring: r }, Decl::Ring { name: m, ring: s }) => n == m && **r == **s,
            (
                Decl::Ideal { name: n, ring: r, generators: g },
                Decl::Ideal { name: m, ring: s, generators: h },
            ) => n == m && r == s && g == h,
            (
                Decl::Map { name: n, source: a, target: b, map: f },
                Decl::Map { name: m, source: c, target: d, map: g },
            ) => n == m && a == c && b == d && f.images == g.images,
            (
                Decl::Module { name: n, ring: r, module: a },
                Decl::Module { name: m, ring: s, module: b },
            ) => n == m && r == s && a.rank() == b.rank() && a.relations() == b.relations(),
            _ => false,
        }
    }
}

/// A referenced entity.
#[derive(Clone, Debug)]
pub enum Entity<'a> {
    Ring(&'a Ring),
    Ideal { ring: &'a Ring, generators: &'a [Poly] },
    Map(&'a RingMap),
    Module(&'a FPModule),
}

impl Entity<'_> {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Ring(_) => "ring",
            Entity::Ideal { .. } => "ideal",
            Entity::Map(_) => "map",
            Entity::Module(_) => "module",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Workspace {
    pub decls: Vec<Decl>,
    names: BTreeMap<String, usize>,
}

impl Workspace {
    pub fn parse(text: &str) -> Result<Workspace> {
        Self::parse_with(text, |_| {})
    }

    /// Parses, calling `on_ring` on each ring as soon as it is declared (before any map
    /// validation touches it).
    pub fn parse_with(text: &str, mut on_ring: impl FnMut(&Ring)) -> Result<Workspace> {
        let mut ws = Workspace::default();
        let mut field = Field::Rational;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let decl = Line { text: raw, content, line }.parse(&ws, field)?;
            match &decl {
                Decl::Field(f) => field = *f,
                Decl::Ring { ring, .. } => on_ring(ring),
                _ => {}
            }
            if let Some(name) = decl.name() {
                if ws.names.contains_key(name) {
                    return Err(Error::Parse { line, column: column_of(raw, name), message: format!("`{name}` is already declared") });
                }
                ws.names.insert(name.to_string(), ws.decls.len());
            }
            ws.decls.push(decl);
        }
        Ok(ws)
    }

    /// Canonical text; parsing it gives back an equal workspace.
    pub fn print(&self) -> String {
        let mut out = String::new();
        let mut current = Field::Rational;
        for d in &self.decls {
            match d {
                Decl::Field(f) => {
                    current = *f;
                    match f {
                        Field::Rational => out.push_str("field Q\n"),
                        Field::Prime(p) => writeln!(out, "field Fp {p}").unwrap(),
                    }
                }
                Decl::Ring { name, ring } => {
                    if ring.field() != current {
                        current = ring.field();
                        match current {
                            Field::Rational => out.push_str("field Q\n"),
                            Field::Prime(p) => writeln!(out, "field Fp {p}").unwrap(),
                        }
                    }
                    let rels: Vec<String> = ring.relations().iter().map(|r| ring.format(r)).collect();
                    writeln!(out, "ring {name} = poly({}) / ({})", ring.variables().join(", "), rels.join(", ")).unwrap();
                }
                Decl::Ideal { name, ring, generators } => {
                    let r = self.ring(ring).expect("declared");
                    let gens: Vec<String> = generators.iter().map(|g| r.format(g)).collect();
                    writeln!(out, "ideal {name} in {ring} = ({})", gens.join(", ")).unwrap();
                }
                Decl::Map { name, source, target, map } => {
                    let items: Vec<String> = map
                        .source
                        .variables()
                        .iter()
                        .zip(&map.images)
                        .map(|(v, p)| format!("{v} -> {}", map.target.format(p)))
                        .collect();
                    writeln!(out, "map {name} : {source} -> {target} = [{}]", items.join(", ")).unwrap();
                }
                Decl::Module { name, ring, module } => {
                    if module.relations().is_empty() {
                        writeln!(out, "module {name} over {ring} = free {}", module.rank()).unwrap();
                    } else {
                        let r = module.ring();
                        let rows: Vec<String> = (0..module.rank())
                            .map(|i| {
                                let row: Vec<String> = module.relations().iter().map(|c| r.format(&c[i])).collect();
                                format!("[{}]", row.join(", "))
                            })
                            .collect();
                        writeln!(out, "module {name} over {ring} = coker [{}]", rows.join(", ")).unwrap();
                    }
                }
            }
        }
        out
    }

    pub fn get(&self, name: &str) -> Result<Entity<'_>> {
        let i = *self.names.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        Ok(match &self.decls[i] {
            Decl::Ring { ring, .. } => Entity::Ring(ring),
            Decl::Ideal { ring, generators, .. } => Entity::Ideal { ring: self.ring(ring)?, generators },
            Decl::Map { map, .. } => Entity::Map(map),
            Decl::Module { module, .. } => Entity::Module(module),
            Decl::Field(_) => unreachable!("fields are not named"),
        })
    }

    pub fn ring(&self, name: &str) -> Result<&Ring> {
        match self.get(name)? {
            Entity::Ring(r) => Ok(r),
            other => Err(Error::Invalid(format!("`{name}` is a {}, not a ring", other.kind()))),
        }
    }

    pub fn map(&self, name: &str) -> Result<&RingMap> {
        match self.get(name)? {
            Entity::Map(f) => Ok(f),
            other => Err(Error::Invalid(format!("`{name}` is a {}, not a map", other.kind()))),
        }
    }

    pub fn module(&self, name: &str) -> Result<&FPModule> {
        match self.get(name)? {
            Entity::Module(m) => Ok(m),
            other => Err(Error::Invalid(format!("`{name}` is a {}, not a module", other.kind()))),
        }
    }

    /// Every ring declared, in order.
    pub fn rings(&self) -> impl Iterator<Item = &Ring> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Ring { ring, .. } => Some(ring),
            _ => None,
        })
    }
}

fn column_of(line: &str, part: &str) -> usize {
    let base = line.as_ptr() as usize;
    let p = part.as_ptr() as usize;
    if p >= base && p <= base + line.len() {
        line[..p - base].chars().count() + 1
    } else {
        line.find(part).map_or(1, |i| line[..i].chars().count() + 1)
    }
}

struct Line<'a> {
    text: &'a str,
    content: &'a str,
    line: usize,
}

impl<'a> Line<'a> {
    fn error(&self, at: &str, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: column_of(self.text, at), message: message.into() }
    }

    /// Wraps non-syntax errors with the position of `at`.
    fn locate(&self, at: &str, e: Error) -> Error {
        match e {
            Error::Parse { .. } => e,
            other => self.error(at, other.to_string()),
        }
    }

    fn parse(&self, ws: &Workspace, field: Field) -> Result<Decl> {
        let s = self.content.trim();
        let (keyword, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rest = rest.trim();
        match keyword {
            "field" => self.field(rest),
            "ring" => self.ring(rest, field),
            "ideal" => self.ideal(rest, ws),
            "map" => self.map(rest, ws),
            "module" => self.module(rest, ws),
            _ => Err(self.error(keyword, format!("unknown declaration `{keyword}`"))),
        }
    }

    fn field(&self, rest: &str) -> Result<Decl> {
        let parts: Vec<&str> = rest.split_whitespace().collect();
        match parts.as_slice() {
            ["Q"] => Ok(Decl::Field(Field::Rational)),
            ["Fp", p] => {
                let v: u32 = p.parse().map_err(|_| self.error(p, "expected a prime"))?;
                if !is_prime(v) || v >= 1 << 31 {
                    return Err(self.error(p, format!("{v} is not a prime below 2^31")));
                }
                Ok(Decl::Field(Field::Prime(v)))
            }
            _ => Err(self.error(rest, "expected `Q` or `Fp <p>`")),
        }
    }

    fn name<'b>(&self, s: &'b str) -> Result<&'b str> {
        let s = s.trim();
        let ok = !s.is_empty()
            && s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
        if ok {
            Ok(s)
        } else {
            Err(self.error(s, format!("invalid name `{s}`")))
        }
    }

    fn split_eq<'b>(&self, rest: &'b str) -> Result<(&'b str, &'b str)> {
        rest.split_once('=').map(|(a, b)| (a.trim(), b.trim())).ok_or_else(|| self.error(rest, "expected `=`"))
    }

    /// Contents of a bracketed group starting at the beginning of `s`, and what follows it.
    fn group<'b>(&self, s: &'b str, open: char, close: char) -> Result<(&'b str, &'b str)> {
        let s = s.trim_start();
        if !s.starts_with(open) {
            return Err(self.error(s, format!("expected `{open}`")));
        }
        let mut depth = 0;
        for (i, c) in s.char_indices() {
            if c == open {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    return Ok((&s[1..i], &s[i + 1..]));
                }
            }
        }
        Err(self.error(s, format!("unclosed `{open}`")))
    }

    /// Splits on commas outside brackets; an all-blank list is empty.
    fn items<'b>(&self, s: &'b str) -> Vec<&'b str> {
        if s.trim().is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, c) in s.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                ',' if depth == 0 => {
                    out.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        out.push(&s[start..]);
        out
    }

    fn poly(&self, ring: &PolyRing, text: &str) -> Result<Poly> {
        let t = text.trim();
        ring.parse_at(t, self.line, column_of(self.text, t))
    }

    fn ring(&self, rest: &str, field: Field) -> Result<Decl> {
        let (name, body) = self.split_eq(rest)?;
        let name = self.name(name)?;
        let body = body.trim();
        let Some(after) = body.strip_prefix("poly") else {
            return Err(self.error(body, "expected `poly(...)`"));
        };
        let (vars, tail) = self.group(after, '(', ')')?;
        let vars: Vec<&str> = self.items(vars).into_iter().map(str::trim).collect();
        for v in &vars {
            self.name(v)?;
        }
        let ambient = PolyRing::new(field, &vars).map_err(|e| self.locate(body, e))?;
        let tail = tail.trim();
        let mut rels = Vec::new();
        if !tail.is_empty() {
            let Some(r) = tail.strip_prefix('/') else {
                return Err(self.error(tail, "expected `/ (relations)`"));
            };
            let (inner, trailing) = self.group(r, '(', ')')?;
            if !trailing.trim().is_empty() {
                return Err(self.error(trailing.trim(), "unexpected trailing input"));
            }
            for item in self.items(inner) {
                rels.push(self.poly(&ambient, item)?);
            }
        }
        Ok(Decl::Ring { name: name.to_string(), ring: RingPresentation::new(name, ambient, rels) })
    }

    fn known_ring<'w>(&self, ws: &'w Workspace, name: &str) -> Result<&'w Ring> {
        ws.ring(name).map_err(|e| self.locate(name, e))
    }

    fn ideal(&self, rest: &str, ws: &Workspace) -> Result<Decl> {
        let (head, body) = self.split_eq(rest)?;
        let (name, ring) = head.split_once(" in ").ok_or_else(|| self.error(head, "expected `<name> in <ring>`"))?;
        let (name, ring_name) = (self.name(name)?, ring.trim());
        let ring = self.known_ring(ws, ring_name)?;
        let (inner, trailing) = self.group(body, '(', ')')?;
        if !trailing.trim().is_empty() {
            return Err(self.error(trailing.trim(), "unexpected trailing input"));
        }
        let generators = self.items(inner).into_iter().map(|g| self.poly(&ring.ambient, g)).collect::<Result<Vec<_>>>()?;
        Ok(Decl::Ideal { name: name.to_string(), ring: ring_name.to_string(), generators })
    }

    fn map(&self, rest: &str, ws: &Workspace) -> Result<Decl> {
        let (head, body) = self.split_eq(rest)?;
        let (name, arrow) = head.split_once(':').ok_or_else(|| self.error(head, "expected `<name> : <source> -> <target>`"))?;
        let name = self.name(name)?;
        let (source, target) =
            arrow.split_once("->").ok_or_else(|| self.error(arrow, "expected `<source> -> <target>`"))?;
        let (src_name, tgt_name) = (source.trim(), target.trim());
        let (src, tgt) = (self.known_ring(ws, src_name)?, self.known_ring(ws, tgt_name)?);
        let (inner, trailing) = self.group(body, '[', ']')?;
        if !trailing.trim().is_empty() {
            return Err(self.error(trailing.trim(), "unexpected trailing input"));
        }
        let mut images: Vec<Option<Poly>> = vec![None; src.nvars()];
        let items = self.items(inner);
        for item in &items {
            let (var, image) = item.split_once("->").ok_or_else(|| self.error(item.trim(), "expected `<variable> -> <image>`"))?;
            let var = var.trim();
            let i = src.ambient.var_index(var).ok_or_else(|| self.error(var, format!("`{var}` is not a variable of {src_name}")))?;
            if images[i].is_some() {
                return Err(self.error(var, format!("`{var}` is assigned twice")));
            }
            images[i] = Some(self.poly(&tgt.ambient, image)?);
        }
        if images.iter().any(Option::is_none) {
            return Err(self.locate(body, Error::Arity { expected: src.nvars(), found: items.len() }));
        }
        let images = images.into_iter().map(Option::unwrap).collect();
        let map = RingMap::new(src.clone(), tgt.clone(), images).map_err(|e| self.locate(body, e))?;
        Ok(Decl::Map { name: name.to_string(), source: src_name.to_string(), target: tgt_name.to_string(), map })
    }

    fn module(&self, rest: &str, ws: &Workspace) -> Result<Decl> {
        let (head, body) = self.split_eq(rest)?;
        let (name, ring) = head.split_once(" over ").ok_or_else(|| self.error(head, "expected `<name> over <ring>`"))?;
        let (name, ring_name) = (self.name(name)?, ring.trim());
        let ring = self.known_ring(ws, ring_name)?;
        let module = if let Some(n) = body.strip_prefix("free") {
            let n = n.trim();
            let rank: usize = n.parse().map_err(|_| self.error(n, "expected a rank"))?;
            FPModule::free(ring, rank)
        } else if let Some(m) = body.strip_prefix("coker") {
            let (inner, trailing) = self.group(m, '[', ']')?;
            if !trailing.trim().is_empty() {
                return Err(self.error(trailing.trim(), "unexpected trailing input"));
            }
            let mut rows: Vec<Vec<Poly>> = Vec::new();
            for row in self.items(inner) {
                let (entries, rest) = self.group(row, '[', ']')?;
                if !rest.trim().is_empty() {
                    return Err(self.error(rest.trim(), "unexpected input after row"));
                }
                rows.push(self.items(entries).into_iter().map(|e| self.poly(&ring.ambient, e)).collect::<Result<Vec<_>>>()?);
            }
            let ncols = rows.first().map_or(0, Vec::len);
            if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
                return Err(self.locate(m, Error::Arity { expected: ncols, found: bad.len() }));
            }
            let cols: Vec<Vec<Poly>> = (0..ncols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
            FPModule::new(ring, rows.len(), cols)
        } else {
            return Err(self.error(body, "expected `coker [[...]]` or `free <rank>`"));
        };
        Ok(Decl::Module { name: name.to_string(), ring: ring_name.to_string(), module })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "\
# the cusp and its normalization
field Q
ring B = poly(t) / ()
ring A = poly(x, y) / (y^2 - x^3)
ideal I in A = (x, y)
map f : B -> A = [t -> x]
module M over A = coker [[x, y]]
module F over A = free 2
";

    #[test]
    fn round_trip() {
        let ws = Workspace::parse(DOC).unwrap();
        assert_eq!(ws.decls.len(), 7);
        let printed = ws.print();
        let again = Workspace::parse(&printed).unwrap();
        assert_eq!(ws, again);
        assert_eq!(printed, again.print());
        assert_eq!(ws.ring("A").unwrap().relations().len(), 1);
        assert_eq!(ws.module("M").unwrap().relations().len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let bad = "ring A = poly(x, y) / (y^2 - x^3)\nmap f : A -> A = [x -> x^2, y -> y]\n";
        match Workspace::parse(bad) {
            Err(Error::Parse { line: 2, message, .. }) => assert!(message.contains("not preserved"), "{message}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Workspace::parse("ring A = poly(x) / (2x)"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Workspace::parse("module M over A = free 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Workspace::parse("ring A = poly(x) / ()\nring A = poly(y) / ()"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(
            Workspace::parse("ring A = poly(x, y) / ()\nmap f : A -> A = [x -> y]"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
