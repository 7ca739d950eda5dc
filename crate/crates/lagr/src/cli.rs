//! The `lagr` command line: census, triple and rank tables, oracle runs.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bd::{enumerate_triples, is_nilpotent, BdError, Triple};
use crate::chevalley::{ChevalleyError, Label, Oracle, TorusElement, DEFAULT_ORACLE_CAP};
use crate::lagrlin::canonical_vs;
use crate::poisson::{conjugacy_rank, flag_table, pi0_rank, Nonempty, PoissonError, DEFAULT_SAMPLES};
use crate::rootdata::{Isometry, NodeSet, RootDataError, RootSystem};
use crate::strata::{irreducible_components, StrataError};
use crate::weyl::{WeylError, WeylGroup};
use crate::Rational;

pub const DEFAULT_SEED: u64 = 0xBD;
pub const DEFAULT_RANK_CAP: usize = 4;
/// Seeded torus elements added to `m = e` in `verify`.
pub const VERIFY_TORUS: usize = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("rank {rank} exceeds the rank cap {cap}")]
    RankCap { rank: usize, cap: usize },
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Bd(#[from] BdError),
    #[error(transparent)]
    Oracle(#[from] ChevalleyError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error("output: {0}")]
    Output(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Parser)]
#[command(name = "lagr", version, about = "Lagrangian subalgebras of g+g: censuses, BD triples, Poisson ranks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format (default: csv for rank, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value = "0xBD", value_parser = parse_seed)]
    pub seed: u64,
    /// Largest rank accepted by census, bd and rank.
    #[arg(long = "rank-cap", global = true, default_value_t = DEFAULT_RANK_CAP)]
    pub rank_cap: usize,
    /// The oracle accepts types of rank strictly below this.
    #[arg(long = "oracle-cap", global = true, default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: usize,
    /// Samples for the nonemptiness certificate.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strata and irreducible components of L.
    Census {
        type_spec: String,
        /// List every stratum, not only the components.
        #[arg(long)]
        strata: bool,
    },
    /// Generalized BD triples.
    Bd {
        type_spec: String,
        #[arg(long)]
        nilpotent: bool,
    },
    /// Rank of Pi_0.
    Rank {
        type_spec: String,
        #[command(subcommand)]
        kind: RankKind,
    },
    /// Run the Chevalley oracle over the full label sweep.
    Verify { type_spec: String },
}

#[derive(Debug, Subcommand)]
pub enum RankKind {
    /// Shifted double Bruhat cells.
    Flag {
        /// Every (u, v, w); the default when no element is given.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        w: Option<String>,
    },
    /// Conjugacy classes of dimension dimC.
    Conj {
        #[arg(long = "dimC")]
        dim_c: usize,
        #[arg(long)]
        w: Option<String>,
    },
    /// One (G_Delta, B x B^-) orbit pair.
    General {
        /// `S,T,d`, e.g. "{a1},{a1},id" or "{a1},{a2},{a1->a2}".
        #[arg(long)]
        triple: String,
        #[arg(long = "V")]
        v_name: Option<String>,
        #[arg(long, default_value = "e")]
        v: String,
        /// Torus element as comma-separated nonzero rationals.
        #[arg(long)]
        m: Option<String>,
        #[arg(long, default_value = "e")]
        w: String,
        #[arg(long, default_value = "e")]
        v1: String,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed {s}: {e}"))
}

/// Result of a command: rendered text and whether every check passed.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub ok: bool,
}

struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self, format: Format, json: impl FnOnce() -> Value) -> Result<String, CliError> {
        match format {
            Format::Json => serde_json::to_string_pretty(&json()).map(|s| s + "\n").map_err(|e| CliError::Output(e.to_string())),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers).map_err(|e| CliError::Output(e.to_string()))?;
                for r in &self.rows {
                    w.write_record(r).map_err(|e| CliError::Output(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
            }
            Format::Md => {
                let mut s = String::new();
                let _ = writeln!(s, "| {} |", self.headers.join(" | "));
                let _ = writeln!(s, "|{}", "---|".repeat(self.headers.len()));
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                    let _ = writeln!(s, "| {} |", cells.join(" | "));
                }
                Ok(s)
            }
        }
    }
}

fn root_system(spec: &str, cap: usize) -> Result<RootSystem, CliError> {
    let rs = RootSystem::new(spec)?;
    if rs.rank() > cap {
        return Err(CliError::RankCap { rank: rs.rank(), cap });
    }
    Ok(rs)
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Census { type_spec, strata } => census(cli, type_spec, *strata),
        Command::Bd { type_spec, nilpotent } => bd(cli, type_spec, *nilpotent),
        Command::Rank { type_spec, kind } => rank(cli, type_spec, kind),
        Command::Verify { type_spec } => verify(cli, type_spec),
    }
}

fn census(cli: &Cli, spec: &str, all: bool) -> Result<Output, CliError> {
    let rs = root_system(spec, cli.rank_cap)?;
    let wg = WeylGroup::new(&rs)?;
    let c = irreducible_components(&wg, cli.seed)?;
    let shown: Vec<_> = c.strata.iter().filter(|s| all || s.is_component).collect();
    let table = Table {
        headers: vec!["S", "T", "d", "eps", "orbitDim", "stratumDim", "isComponent", "boundary"],
        rows: shown
            .iter()
            .map(|s| {
                let t = &s.key.triple;
                vec![
                    t.s.to_string(),
                    t.t.to_string(),
                    t.d.to_string(),
                    s.key.eps.to_string(),
                    s.orbit_dim.to_string(),
                    s.stratum_dim.to_string(),
                    s.is_component.to_string(),
                    s.boundary.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(";"),
                ]
            })
            .collect(),
    };
    let json = || {
        json!({
            "type": c.type_spec,
            "components": c.component_count(),
            "triples": shown.iter().map(|s| {
                let t = &s.key.triple;
                json!({
                    "S": t.s.to_string(),
                    "T": t.t.to_string(),
                    "d": t.d.to_string(),
                    "eps": s.key.eps,
                    "orbitDim": s.orbit_dim,
                    "stratumDim": s.stratum_dim,
                    "isComponent": s.is_component,
                    "boundary": s.boundary.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
            "unrealized": c.unrealized.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            "note": c.note,
        })
    };
    let format = cli.format.unwrap_or(Format::Json);
    let mut text = table.render(format, json)?;
    if format != Format::Json {
        if let Some(n) = &c.note {
            let _ = writeln!(text, "# {n}");
        }
    }
    Ok(Output { text, ok: true })
}

fn bd(cli: &Cli, spec: &str, nilpotent: bool) -> Result<Output, CliError> {
    let rs = root_system(spec, cli.rank_cap)?;
    let wg = WeylGroup::new(&rs)?;
    let triples = enumerate_triples(&wg, nilpotent);
    let table = Table {
        headers: vec!["S", "T", "d", "nilpotent"],
        rows: triples
            .iter()
            .map(|t| vec![t.s.to_string(), t.t.to_string(), t.d.to_string(), is_nilpotent(&wg, t).to_string()])
            .collect(),
    };
    let json = || {
        json!({
            "type": rs.type_spec(),
            "triples": triples.iter().map(|t| json!({
                "S": t.s.to_string(), "T": t.t.to_string(), "d": t.d.to_string(), "nilpotent": is_nilpotent(&wg, t),
            })).collect::<Vec<_>>(),
        })
    };
    Ok(Output { text: table.render(cli.format.unwrap_or(Format::Json), json)?, ok: true })
}

fn rank(cli: &Cli, spec: &str, kind: &RankKind) -> Result<Output, CliError> {
    let rs = root_system(spec, cli.rank_cap)?;
    let format = cli.format.unwrap_or(Format::Csv);
    match kind {
        RankKind::Flag { all, u, v, w } => {
            let oracle = Oracle::new(&rs, cli.oracle_cap)?;
            let wg = oracle.weyl();
            let pick = |s: &Option<String>| -> Result<Option<String>, CliError> {
                Ok(match s {
                    Some(x) if !all => Some(wg.parse(x)?.name()),
                    _ => None,
                })
            };
            let (pu, pv, pw) = (pick(u)?, pick(v)?, pick(w)?);
            let rows: Vec<_> = flag_table(&oracle, cli.samples, cli.seed)?
                .into_iter()
                .filter(|r| pu.as_ref().is_none_or(|x| *x == r.u) && pv.as_ref().is_none_or(|x| *x == r.v) && pw.as_ref().is_none_or(|x| *x == r.w))
                .collect();
            let mut violations = Vec::new();
            for r in rows.iter().filter(|r| r.nonempty == Nonempty::CertifiedNonempty) {
                if r.rank % 2 != 0 || r.rank > r.dim || (r.rank, r.dim) != r.closed_form {
                    violations.push(format!("{},{},{}", r.u, r.v, r.w));
                }
            }
            for v in &violations {
                eprintln!("rank violation at (u,v,w) = ({v})");
            }
            let table = Table {
                headers: vec!["u", "v", "w", "dim", "rank", "correction", "nonempty"],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.u.clone(),
                            r.v.clone(),
                            r.w.clone(),
                            r.dim.to_string(),
                            r.rank.to_string(),
                            r.correction.to_string(),
                            r.nonempty.as_str().to_string(),
                        ]
                    })
                    .collect(),
            };
            let json = || {
                json!({
                    "type": rs.type_spec(),
                    "rows": rows.iter().map(|r| json!({
                        "u": r.u, "v": r.v, "w": r.w, "dim": r.dim, "rank": r.rank,
                        "correction": r.correction, "nonempty": r.nonempty,
                        "conditional": r.nonempty != Nonempty::CertifiedNonempty,
                    })).collect::<Vec<_>>(),
                })
            };
            Ok(Output { text: table.render(format, json)?, ok: violations.is_empty() })
        }
        RankKind::Conj { dim_c, w } => {
            let wg = WeylGroup::new(&rs)?;
            let ws = match w {
                Some(x) => vec![wg.parse(x)?],
                None => wg.elements().iter().collect(),
            };
            let rows: Vec<_> = ws.into_iter().map(|x| conjugacy_rank(&wg, *dim_c, x)).collect();
            let table = Table {
                headers: vec!["w", "rank", "open_dense_leaf", "cell_empty"],
                rows: rows
                    .iter()
                    .map(|r| vec![r.w.clone(), r.rank.to_string(), r.open_dense_leaf.to_string(), r.cell_empty.to_string()])
                    .collect(),
            };
            let json = || json!({ "type": rs.type_spec(), "dimC": dim_c, "rows": rows });
            Ok(Output { text: table.render(format, json)?, ok: true })
        }
        RankKind::General { triple, v_name, v, m, w, v1 } => {
            let oracle = Oracle::new(&rs, cli.oracle_cap)?;
            let wg = oracle.weyl();
            let tr = parse_triple(&rs, triple)?;
            let vs = canonical_vs(&rs, &tr, cli.seed);
            let nv = match v_name {
                None => &vs[0],
                Some(name) => vs.iter().find(|x| &x.name == name).ok_or_else(|| {
                    let names: Vec<&str> = vs.iter().map(|x| x.name.as_str()).collect();
                    CliError::Usage(format!("unknown V {name}; available: {}", names.join(", ")))
                })?,
            };
            let m = match m {
                None => TorusElement::identity(rs.rank()),
                Some(s) => parse_torus(rs.rank(), s)?,
            };
            let (v, w, v1) = (wg.parse(v)?, wg.parse(w)?, wg.parse(v1)?);
            if !wg.is_min_coset(v, tr.t) {
                return Err(WeylError::NotMinimal { v: v.name(), t: tr.t }.into());
            }
            let label = Label { triple: tr.clone(), v_space: nv.v.clone(), v: v.id, m: m.clone() };
            let r = pi0_rank(&oracle, &label, w.id, v1.id)?;
            let row = vec![
                tr.s.to_string(),
                tr.t.to_string(),
                tr.d.to_string(),
                nv.name.clone(),
                v.name(),
                m.to_string(),
                w.name(),
                v1.name(),
                r.dim_o.to_string(),
                r.dim_o_prime.to_string(),
                r.intersection_dim.to_string(),
                r.correction.to_string(),
                r.rank.to_string(),
            ];
            let table = Table {
                headers: vec!["S", "T", "d", "V", "v", "m", "w", "v1", "dimO", "dimOPrime", "dim", "correction", "rank"],
                rows: vec![row],
            };
            let json = || {
                json!({
                    "type": rs.type_spec(),
                    "S": tr.s.to_string(), "T": tr.t.to_string(), "d": tr.d.to_string(),
                    "V": nv.name, "v": v.name(), "m": m.to_string(), "w": w.name(), "v1": v1.name(),
                    "dimO": r.dim_o, "dimOPrime": r.dim_o_prime, "dim": r.intersection_dim,
                    "correction": r.correction, "rank": r.rank,
                })
            };
            Ok(Output { text: table.render(format, json)?, ok: true })
        }
    }
}

fn verify(cli: &Cli, spec: &str) -> Result<Output, CliError> {
    let rs = RootSystem::new(spec)?;
    let oracle = Oracle::new(&rs, cli.oracle_cap)?;
    let rep = oracle.verify_sweep(cli.seed, VERIFY_TORUS)?;
    let counts = [
        ("jacobi", rep.jacobi.to_string()),
        ("invariance", rep.invariance.to_string()),
        ("labels", rep.labels.to_string()),
        ("failures", rep.failures.len().to_string()),
    ];
    let mut rows: Vec<Vec<String>> = counts.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
    rows.extend(rep.failures.iter().map(|f| vec!["failure".into(), f.clone()]));
    let table = Table { headers: vec!["check", "value"], rows };
    let text = table.render(cli.format.unwrap_or(Format::Md), || serde_json::to_value(&rep).unwrap_or(Value::Null))?;
    Ok(Output { text, ok: rep.ok() })
}

fn parse_nodes(rs: &RootSystem, s: &str) -> Result<NodeSet, CliError> {
    let bad = || CliError::Usage(format!("bad node set {s}"));
    let inner = s.trim().strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(bad)?;
    let mut out = NodeSet::empty();
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = part.strip_prefix('a').and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        if i == 0 || i > rs.rank() {
            return Err(bad());
        }
        out.insert(i - 1);
    }
    Ok(out)
}

/// Split on commas outside braces.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

pub fn parse_triple(rs: &RootSystem, s: &str) -> Result<Triple, CliError> {
    let parts = split_top(s);
    let [sp, tp, dp] = parts.as_slice() else {
        return Err(CliError::Usage(format!("triple must be S,T,d: {s}")));
    };
    let (sn, tn) = (parse_nodes(rs, sp)?, parse_nodes(rs, tp)?);
    let d = if *dp == "id" || *dp == "1" {
        Isometry::identity(sn)
    } else {
        let inner = dp.strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(|| CliError::Usage(format!("bad d {dp}")))?;
        let mut pairs = Vec::new();
        for p in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = p.split_once("->").ok_or_else(|| CliError::Usage(format!("bad pair {p}")))?;
            let node = |x: &str| -> Result<usize, CliError> {
                let n = parse_nodes(rs, &format!("{{{x}}}"))?;
                n.iter().next().ok_or_else(|| CliError::Usage(format!("bad node {x}")))
            };
            pairs.push((node(a)?, node(b)?));
        }
        Isometry::new(pairs)
    };
    if d.domain() != sn || d.image() != tn {
        return Err(CliError::Usage(format!("d does not map {sn} onto {tn}")));
    }
    Ok(Triple::new(rs, d)?)
}

fn parse_torus(r: usize, s: &str) -> Result<TorusElement, CliError> {
    let vals: Result<Vec<Rational>, _> = s.split(',').map(|x| Rational::from_str(x.trim())).collect();
    let vals = vals.map_err(|e| CliError::Usage(format!("bad torus element {s}: {e}")))?;
    if vals.len() != r {
        return Err(CliError::Usage(format!("torus element needs {r} entries")));
    }
    TorusElement::new(vals).ok_or_else(|| CliError::Usage(format!("torus entries must be nonzero: {s}")))
}

fn init_threads() {
    if let Some(n) = std::env::var("LAGR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses arguments, runs, prints, and returns the exit code:
/// 0 ok, 1 verification failure, 2 usage or cap error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_threads();
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                0
            } else {
                eprintln!("verification failed");
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
