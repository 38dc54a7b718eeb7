//! Subcommands over a parsed workspace.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use shriek_core::diagonal::diffops::{derived_diff_ops, diff_ops, generators_pass_bracket_test};
use shriek_core::diagonal::hochschild::hochschild;
use shriek_core::diagonal::Diagonal;
use shriek_core::duality::dualizing::{dualizing_oracle_route, paper_route_tower, DualizingResult, DEFAULT_MMAX};
use shriek_core::duality::shriek::{lower_shriek, omega_window, upper_cross_finite, upper_shriek, Shriek};
use shriek_core::duality::verify::{verify_identity, Identity, Input, Params};
use shriek_core::invariants::{compare_modules, krull_dimension, vector_space_dimension};
use shriek_core::resolve::free_resolution;
use shriek_core::{Error, FPModule, Poly, Result, Ring, RingMap, Window};

use crate::cache::Cache;
use crate::report;
use crate::workspace::{Entity, Workspace};

/// Sample degree bound for the nested-commutator test on operator generators.
pub const BRACKET_BOUND: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Groebner { ideal: String },
    Resolve { module: String },
    Diffops { ring: String, order: usize, derived: bool },
    Hochschild { ring: String },
    Dualizing { ring: String, route: RouteArg, normalization: Option<String> },
    Shriek { map: String, module: String, kind: ShriekKind },
    Verify { identity: String, inputs: Vec<String> },
    Print,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RouteArg {
    Paper,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ShriekKind {
    Upper,
    Lower,
    Cross,
}

impl Command {
    pub fn echo(&self) -> Value {
        let (name, args): (&str, Vec<String>) = match self {
            Command::Groebner { ideal } => ("groebner", vec![ideal.clone()]),
            Command::Resolve { module } => ("resolve", vec![module.clone()]),
            Command::Diffops { ring, order, derived } => {
                let mut a = vec![ring.clone(), format!("--order={order}")];
                if *derived {
                    a.push("--derived".into());
                }
                ("diffops", a)
            }
            Command::Hochschild { ring } => ("hochschild", vec![ring.clone()]),
            Command::Dualizing { ring, route, normalization } => {
                let mut a = vec![ring.clone(), format!("--route={}", route_name(*route))];
                if let Some(n) = normalization {
                    a.push(format!("--normalization={n}"));
                }
                ("dualizing", a)
            }
            Command::Shriek { map, module, kind } => {
                ("shriek", vec![map.clone(), module.clone(), format!("--kind={}", kind_name(*kind))])
            }
            Command::Verify { identity, inputs } => {
                ("verify", std::iter::once(identity.clone()).chain(inputs.iter().cloned()).collect())
            }
            Command::Print => ("print", Vec::new()),
        };
        json!({ "name": name, "args": args })
    }
}

fn route_name(r: RouteArg) -> &'static str {
    match r {
        RouteArg::Paper => "paper",
        RouteArg::Oracle => "oracle",
    }
}

fn kind_name(k: ShriekKind) -> &'static str {
    match k {
        ShriekKind::Upper => "upper",
        ShriekKind::Lower => "lower",
        ShriekKind::Cross => "cross",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub window: Option<Window>,
    pub mmax: usize,
    pub length: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { window: None, mmax: DEFAULT_MMAX, length: shriek_core::derived::DEFAULT_LENGTH }
    }
}

impl Options {
    pub fn echo(&self) -> Value {
        json!({
            "mmax": self.mmax,
            "length": self.length,
            "window": self.window.map(report::window),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub results: Value,
    pub status: String,
    pub exit_code: i32,
}

fn success(results: Value) -> Outcome {
    Outcome { results, status: "success".into(), exit_code: 0 }
}

fn checked(results: Value, ok: bool) -> Outcome {
    if ok {
        success(results)
    } else {
        Outcome { results, status: "failed".into(), exit_code: 3 }
    }
}

pub fn run(ws: &Workspace, cmd: &Command, opts: &Options, cache: &mut Cache) -> Result<Outcome> {
    match cmd {
        Command::Groebner { ideal } => groebner(ws, ideal, cache),
        Command::Resolve { module } => resolve(ws.module(module)?, opts),
        Command::Diffops { ring, order, derived } => diffops(ws.ring(ring)?, *order, *derived, opts),
        Command::Hochschild { ring } => hochschild_cmd(ws.ring(ring)?, opts),
        Command::Dualizing { ring, route, normalization } => {
            let a = ws.ring(ring)?;
            match route {
                RouteArg::Paper => dualizing_paper(a, opts),
                RouteArg::Oracle => {
                    let f = match normalization {
                        Some(n) => ws.map(n)?.clone(),
                        None => RingMap::structure(a),
                    };
                    if *f.target != **a {
                        return Err(Error::RingMismatch(format!("the normalization must land in {ring}")));
                    }
                    dualizing_oracle(&f, opts)
                }
            }
        }
        Command::Shriek { map, module, kind } => shriek_cmd(ws.map(map)?, ws.module(module)?, *kind, opts),
        Command::Verify { identity, inputs } => verify(ws, identity, inputs, opts),
        Command::Print => Ok(success(json!({ "workspace": ws.print() }))),
    }
}

fn groebner(ws: &Workspace, name: &str, cache: &mut Cache) -> Result<Outcome> {
    let Entity::Ideal { ring, generators } = ws.get(name)? else {
        return Err(Error::Invalid(format!("`{name}` is not an ideal")));
    };
    let mut gens: Vec<Poly> = ring.relations().to_vec();
    gens.extend(generators.iter().cloned());
    let order = ring.term_order();
    let (gb, _) = cache.basis(ring, &gens, order);
    let recheck = gb.is_groebner();
    let one = shriek_core::Field::one(ring.field());
    let leads: Vec<String> = gb
        .leading_terms()
        .iter()
        .map(|(_, m)| ring.format(&Poly::from_terms(ring.nvars(), [(m.clone(), one.clone())])))
        .collect();
    let quotient = FPModule::cyclic(ring, generators);
    let results = json!({
        "ideal": name,
        "ring": ring.describe(),
        "order": order.name(),
        "basis": gb.polys().iter().map(|p| ring.format(p)).collect::<Vec<_>>(),
        "leading_terms": leads,
        "s_pair_recheck": recheck,
        "whole_ring": gb.is_whole(),
        "quotient_krull_dimension": krull_dimension(ring.nvars(), &gb.leading_terms()),
        "quotient_dimension": vector_space_dimension(&quotient),
    });
    Ok(checked(results, recheck))
}

fn resolve(m: &FPModule, opts: &Options) -> Result<Outcome> {
    let res = free_resolution(m, opts.length);
    let dd = res.complex.is_complex();
    let top = if res.complete { res.complex.hi() } else { res.complex.hi() - 1 };
    let exact: Vec<i64> = (1..=top).filter(|&i| !res.complex.homology(i).is_zero()).collect();
    let h0 = compare_modules(&res.complex.homology(0).module, m, None);
    let ok = dd && exact.is_empty() && h0.status.agrees();
    let results = json!({
        "betti_numbers": res.betti_numbers(),
        "complete": res.complete,
        "length": res.length(),
        "d_squared_zero": dd,
        "exact_in_positive_degrees": exact.is_empty(),
        "nonexact_degrees": exact,
        "cokernel_matches": report::verdict(&h0),
    });
    Ok(checked(results, ok))
}

fn diffops(a: &Ring, n: usize, derived: bool, opts: &Options) -> Result<Outcome> {
    let ops = diff_ops(a, n);
    let bracket = generators_pass_bracket_test(&ops, BRACKET_BOUND);
    let mut results = json!({
        "ring": a.describe(),
        "order": n,
        "operators": report::module(&ops.module()),
        "generator_count": ops.operators.gens.len(),
        "bracket_test": bracket,
    });
    let mut ok = bracket;
    if derived {
        let w = opts.window.unwrap_or(Window::new(-(a.nvars() as i64) - 1, 0));
        let d = derived_diff_ops(a, n, w, opts.length)?;
        let homology: BTreeMap<i64, FPModule> = d.all_homology().into_iter().map(|(k, h)| (k, h.module)).collect();
        let support: Vec<i64> = homology.iter().filter(|(_, m)| !m.is_zero()).map(|(k, _)| *k).collect();
        let underived = compare_modules(&homology.get(&0).cloned().unwrap_or_else(|| FPModule::zero(a)), &ops.module(), None);
        ok &= underived.status.agrees();
        results["derived"] = json!({
            "window": report::window(w),
            "certified": report::window(d.certified),
            "homology": report::modules(&homology),
            "support": support,
            "concentrated_in_degree_zero": support.iter().all(|&k| k == 0),
            "degree_zero_matches_underived": report::verdict(&underived),
        });
    }
    Ok(checked(results, ok))
}

fn hochschild_cmd(a: &Ring, opts: &Options) -> Result<Outcome> {
    let w = opts.window.unwrap_or(Window::new(0, a.dimension() as i64 + 1));
    let hh = hochschild(a, w, opts.length)?;
    let mut homology = BTreeMap::new();
    for d in hh.certified.degrees() {
        homology.insert(d, hh.homology(d)?.module);
    }
    Ok(success(json!({
        "ring": a.describe(),
        "certified": report::window(hh.certified),
        "homology": report::modules(&homology),
        "d_squared_zero": hh.complex.is_complex(),
    })))
}

fn default_window(a: &Ring, opts: &Options) -> Window {
    opts.window.unwrap_or(Window::new(-1, a.dimension() as i64 + 1))
}

fn identification(res: &DualizingResult) -> Value {
    match res.concentrated() {
        Some((d, m)) => match m.free_rank() {
            Some(1) => json!(format!("A[{d}]")),
            Some(r) => json!(format!("A^{r}[{d}]")),
            None => json!(format!("H_{d}[{d}]")),
        },
        None => Value::Null,
    }
}

fn dualizing_json(res: &DualizingResult) -> Value {
    let mut v = json!({
        "ring": res.ring.describe(),
        "route": res.route.name(),
        "certified": report::window(res.certified),
        "homology": report::modules(&res.homology),
        "support": res.support(),
        "concentrated_in": res.concentrated().map(|(d, _)| d),
        "identification": identification(res),
    });
    if let Some(t) = &res.tower {
        let degrees: BTreeMap<String, Value> = t
            .degrees()
            .into_iter()
            .map(|d| {
                let transitions: Vec<&str> = t.transitions.get(&d).map_or(Vec::new(), |ts| ts.iter().map(|x| x.name()).collect());
                (
                    d.to_string(),
                    json!({
                        "verdict": t.verdicts.get(&d).map(|v| v.name()),
                        "transitions": transitions,
                        "stage_generators": t.generator_counts(d),
                    }),
                )
            })
            .collect();
        v["tower"] = json!({ "stages": t.labels, "degrees": degrees, "undetermined": t.undetermined() });
    }
    if let Some(b) = &res.over_base {
        v["over_base"] = report::modules(b);
    }
    v
}

fn dualizing_paper(a: &Ring, opts: &Options) -> Result<Outcome> {
    let w = default_window(a, opts);
    let res = paper_route_tower(&Diagonal::absolute(a), opts.mmax, w, opts.length)?;
    let results = dualizing_json(&res);
    if res.undetermined().is_empty() {
        Ok(success(results))
    } else {
        Ok(Outcome { results, status: "not-stabilized".into(), exit_code: 4 })
    }
}

fn dualizing_oracle(f: &RingMap, opts: &Options) -> Result<Outcome> {
    let w = default_window(&f.target, opts);
    let res = dualizing_oracle_route(f, w, opts.length)?;
    let mut results = dualizing_json(&res);
    results["normalization"] = json!(f.source.describe());
    Ok(success(results))
}

fn shriek_cmd(f: &RingMap, m: &FPModule, kind: ShriekKind, opts: &Options) -> Result<Outcome> {
    let w = opts.window.unwrap_or(omega_window(f));
    let s: Shriek = match kind {
        ShriekKind::Upper => upper_shriek(f, m, opts.mmax, w, opts.length)?,
        ShriekKind::Lower => lower_shriek(f, m, opts.mmax, w, opts.length)?,
        ShriekKind::Cross => upper_cross_finite(f, m, w, opts.length)?,
    };
    let mut results = json!({
        "kind": kind_name(kind),
        "route": s.route.name(),
        "source": f.source.describe(),
        "target": f.target.describe(),
        "window": report::window(s.window),
        "homology": report::modules(&s.homology),
        "support": s.support(),
        "concentrated_in": s.concentrated().map(|(d, _)| d),
    });
    if let Some(o) = &s.over_source {
        results["over_source"] = report::modules(o);
    }
    if let Some(o) = &s.omega {
        results["omega"] = dualizing_json(o);
    }
    Ok(success(results))
}

fn verify(ws: &Workspace, identity: &str, names: &[String], opts: &Options) -> Result<Outcome> {
    let id: Identity = identity.parse()?;
    let mut inputs = Vec::new();
    for name in names {
        let input = match ws.get(name) {
            Ok(Entity::Ring(r)) => Input::Ring(r.clone()),
            Ok(Entity::Map(f)) => Input::Map(f.clone()),
            Ok(Entity::Module(m)) => Input::Module(m.clone()),
            Ok(Entity::Ideal { .. }) => {
                return Err(Error::Invalid(format!("`{name}` is an ideal; identities take rings, maps, modules or elements")))
            }
            Err(Error::UnknownName(_)) => {
                let ring = match inputs.first() {
                    Some(Input::Ring(r)) => r.clone(),
                    Some(Input::Map(f)) => f.target.clone(),
                    Some(Input::Module(m)) => m.ring().clone(),
                    _ => return Err(Error::UnknownName(name.clone())),
                };
                Input::Element(ring.ambient.parse(name).map_err(|_| Error::UnknownName(name.clone()))?)
            }
            Err(e) => return Err(e),
        };
        inputs.push(input);
    }
    let params = Params { mmax: opts.mmax, window: opts.window.unwrap_or(Window::DEFAULT), max_length: opts.length };
    let r = verify_identity(id, &inputs, &params)?;
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "degree": c.degree,
                "left": c.left,
                "right": c.right,
                "verdict": report::verdict(&c.verdict),
            })
        })
        .collect();
    let results = json!({
        "identity": id.name(),
        "statement": id.statement(),
        "inputs": r.inputs,
        "checks": checks,
        "notes": r.notes,
    });
    Ok(Outcome { results, status: r.status.name().into(), exit_code: r.status.exit_code() })
}
