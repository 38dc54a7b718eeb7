//! Workspace files, command dispatch and canonical JSON reports for the `shriek` binary.

pub mod cache;
pub mod commands;
pub mod report;
pub mod workspace;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};

use shriek_core::{Error, Window};

use crate::cache::Cache;
use crate::commands::{Command, Options, RouteArg, ShriekKind};
use crate::report::Report;
use crate::workspace::Workspace;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty window {lo}:{hi}"));
    }
    Ok(Window::new(lo, hi))
}

#[derive(Debug, Parser)]
#[command(name = "shriek", version, about = "Differential operators, dualizing complexes and shriek functors")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Workspace file with ring, ideal, map and module declarations.
    #[arg(short, long, global = true, default_value = "workspace.shr")]
    pub workspace: PathBuf,
    /// Homological window `lo:hi`.
    #[arg(long, global = true, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<Window>,
    /// Number of neighborhood stages in the paper-route tower.
    #[arg(long, global = true)]
    pub mmax: Option<usize>,
    /// Maximal resolution length.
    #[arg(long, global = true)]
    pub length: Option<usize>,
    /// Gröbner basis cache file (overridden by SHRIEK_CACHE).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Re-run sequentially from a fresh parse without cache and compare the reports.
    #[arg(long, global = true)]
    pub seed_check: bool,
    /// Omit timing and cache statistics from the report.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Reduced Gröbner basis of an ideal together with the ring relations.
    Groebner { ideal: String },
    /// Free resolution of a module.
    Resolve { module: String },
    /// Differential operators of order at most n.
    Diffops {
        ring: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        derived: bool,
    },
    /// Hochschild homology.
    Hochschild { ring: String },
    /// The dualizing complex.
    Dualizing {
        ring: String,
        #[arg(long, value_enum, default_value = "paper")]
        route: RouteArg,
        /// Finite map into the ring used by the oracle route.
        #[arg(long)]
        normalization: Option<String>,
    },
    /// Upper, lower or finite-duality shriek of a module along a map.
    Shriek {
        map: String,
        module: String,
        #[arg(long, value_enum, default_value = "upper")]
        kind: ShriekKind,
    },
    /// Check one of the duality identities.
    Verify {
        identity: String,
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Print the workspace in canonical form.
    Print,
}

impl Sub {
    pub fn to_command(&self) -> Command {
        match self {
            Sub::Groebner { ideal } => Command::Groebner { ideal: ideal.clone() },
            Sub::Resolve { module } => Command::Resolve { module: module.clone() },
            Sub::Diffops { ring, order, derived } => Command::Diffops { ring: ring.clone(), order: *order, derived: *derived },
            Sub::Hochschild { ring } => Command::Hochschild { ring: ring.clone() },
            Sub::Dualizing { ring, route, normalization } => {
                Command::Dualizing { ring: ring.clone(), route: *route, normalization: normalization.clone() }
            }
            Sub::Shriek { map, module, kind } => Command::Shriek { map: map.clone(), module: module.clone(), kind: *kind },
            Sub::Verify { identity, inputs } => Command::Verify { identity: identity.clone(), inputs: inputs.clone() },
            Sub::Print => Command::Print,
        }
    }
}

impl Global {
    pub fn options(&self) -> Options {
        let d = Options::default();
        Options { window: self.window, mmax: self.mmax.unwrap_or(d.mmax), length: self.length.unwrap_or(d.length) }
    }

    pub fn cache_path(&self) -> Option<PathBuf> {
        std::env::var_os("SHRIEK_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from).or_else(|| self.cache.clone())
    }
}

pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::NotStabilized(_) => 4,
        _ => 3,
    }
}

/// One command on workspace text; the report and its exit code.
pub fn execute(text: &str, cmd: &Command, opts: &Options, cache: &mut Cache) -> Report {
    let mut report = Report {
        command: cmd.echo(),
        parameters: opts.echo(),
        input_hash: sha256_hex(text.as_bytes()),
        ..Report::default()
    };
    let outcome = Workspace::parse_with(text, |r| {
        cache.seed_ring(r);
    })
    .and_then(|ws| commands::run(&ws, cmd, opts, cache));
    match outcome {
        Ok(o) => {
            report.results = o.results;
            report.status = o.status;
            report.exit_code = o.exit_code;
        }
        Err(e) => {
            report.results = json!(null);
            report.status = match e {
                Error::NotStabilized(_) => "not-stabilized".into(),
                _ => "error".into(),
            };
            report.exit_code = error_exit_code(&e);
            report.error = Some(e.to_string());
        }
    }
    report
}

/// Runs a parsed command line: the rendered report and exit code.
pub fn run_cli(cli: &Cli) -> (String, i32) {
    let g = &cli.global;
    let text = match std::fs::read_to_string(&g.workspace) {
        Ok(t) => t,
        Err(e) => {
            let r = Report {
                command: cli.command.to_command().echo(),
                parameters: g.options().echo(),
                status: "error".into(),
                exit_code: 3,
                error: Some(format!("cannot read workspace {}: {e}", g.workspace.display())),
                ..Report::default()
            };
            return (r.render(), 3);
        }
    };
    let cmd = cli.command.to_command();
    let opts = g.options();
    let mut cache = match g.cache_path() {
        Some(p) => Cache::load(&p),
        None => Cache::disabled(),
    };
    let start = Instant::now();
    let mut report = execute(&text, &cmd, &opts, &mut cache);
    let elapsed = start.elapsed().as_millis();
    for w in &cache.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = cache.save() {
        cache.warnings.push(format!("cannot write cache: {e}"));
        eprintln!("warning: cannot write cache: {e}");
    }
    if g.seed_check {
        seed_check(&text, &cmd, &opts, &cache, &mut report);
    }
    if !g.no_timing {
        report.timing_ms = Some(elapsed);
        if let Some(p) = cache.path() {
            report.cache = Some(json!({
                "path": p.display().to_string(),
                "entries": cache.len(),
                "hits": cache.hits,
                "misses": cache.misses,
                "warnings": cache.warnings,
            }));
        }
    }
    let code = report.exit_code;
    (report.render(), code)
}

/// Recomputes from scratch in sequential mode and compares the stable parts of both reports;
/// also recomputes every cache entry against a fresh basis.
fn seed_check(text: &str, cmd: &Command, opts: &Options, cache: &Cache, report: &mut Report) {
    shriek_core::par::set_sequential(true);
    let again = execute(text, cmd, opts, &mut Cache::disabled());
    shriek_core::par::set_sequential(false);
    let identical = report::stable(&report.to_value()) == report::stable(&again.to_value());
    let rings: Vec<_> = Workspace::parse(text).map(|ws| ws.rings().cloned().collect()).unwrap_or_default();
    let bad = cache.audit(&rings);
    report.seed_check = Some(json!({
        "identical": identical,
        "cache_entries_audited": cache.len(),
        "cache_mismatches": bad,
    }));
    if !identical || !bad.is_empty() {
        report.status = "seed-check-failed".into();
        report.exit_code = 3;
    }
}
