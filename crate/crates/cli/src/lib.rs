//! Command-line front end: problem files, dispatch to the core operations and
//! canonical text or JSON rendering.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use charid_core::charideal::{char_ideal, is_pseudo_null, DivisorSummary};
use charid_core::descent::{descent_check, pseudo_null_via_descent, DescentSummary};
use charid_core::modules::{quotient_by_t, t_torsion, ModuleJson, PresentedModule};
use charid_core::oracle::{fit_growth, FitGrid, GrowthFit};
use charid_core::suites::{self, SuiteOutcome};
use charid_core::tower::{pro_char_ideal, Tower, TowerJson, TowerSummary};
use charid_core::Error;
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_HOLDS: u8 = 0;
pub const EXIT_FAILS: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "charid", version, about = "Characteristic ideals over p-adic power-series rings")]
pub struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the coefficient precision N of the input ring.
    #[arg(long, global = true, value_name = "N")]
    pub precision: Option<u32>,
    /// Override the total-degree cap D of the input ring.
    #[arg(long = "degree-cap", global = true, value_name = "D")]
    pub degree_cap: Option<u32>,
    /// Seed for the randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic ideal of a module (and of its torsion and quotient
    /// along `variable`, when given).
    Charideal { path: PathBuf },
    /// Pseudo-nullity, by descent along `variable` when given.
    Pseudonull { path: PathBuf },
    /// The descent identity along `variable` (default: the last one).
    DescentCheck { path: PathBuf },
    /// Hypotheses and limit ideal of a tower.
    TowerLimit { path: PathBuf },
    /// (mu, lambda) fitted from finite-quotient orders.
    OracleGrowth { path: PathBuf },
    /// Built-in golden and property suites at reduced size.
    Selftest,
}

/// `{"version": 1, "module" | "tower": ..., "variable"?: name, "options"?: {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Values of `m` on the growth grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_m: Option<Vec<u32>>,
    /// Offsets added to `lambda_c * m` for the `n` values of the grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_offsets: Option<Vec<u32>>,
}

impl Options {
    fn is_empty(&self) -> bool {
        self.grid_m.is_none() && self.grid_offsets.is_none()
    }
}

impl ProblemFile {
    pub fn parse(src: &str) -> Result<Self, Failure> {
        let pf: ProblemFile = serde_json::from_str(src).map_err(|e| Failure::Schema(e.to_string()))?;
        if pf.version != SCHEMA_VERSION {
            return Err(Failure::Schema(format!(
                "unsupported version {}, expected {SCHEMA_VERSION}",
                pf.version
            )));
        }
        if pf.module.is_some() == pf.tower.is_some() {
            return Err(Failure::Schema("exactly one of \"module\" and \"tower\" is required".into()));
        }
        if pf.tower.is_some() && pf.variable.is_some() {
            return Err(Failure::Schema("\"variable\" applies to modules only".into()));
        }
        Ok(pf)
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let src = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&src)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Io(String),
    Schema(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Schema(_) => EXIT_INVALID,
            Failure::Core(e) if e.is_precision() => EXIT_INCONCLUSIVE,
            Failure::Core(Error::SizeLimit(..)) => EXIT_INCONCLUSIVE,
            Failure::Core(Error::Unstable(_)) => EXIT_FAILS,
            Failure::Core(_) => EXIT_INVALID,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Io(_) => "io",
            Failure::Schema(_) => "schema",
            Failure::Core(e) => match e {
                Error::NonUnit => "non_unit",
                Error::RingMismatch => "ring_mismatch",
                Error::BadVariable(_) => "bad_variable",
                Error::InvalidRing(_) => "invalid_ring",
                Error::PrecisionExhausted => "precision_exhausted",
                Error::Inconclusive => "inconclusive",
                Error::DegreeCapExceeded(_) => "degree_cap_exceeded",
                Error::UnitGenerator(_) => "unit_generator",
                Error::NonTorsion => "non_torsion",
                Error::NotPseudoNull => "not_pseudo_null",
                Error::HypothesisViolated(_) => "hypothesis_violated",
                Error::SizeLimit(..) => "size_limit",
                Error::Unstable(_) => "unstable",
                Error::Parse(_) => "parse",
                Error::Invalid(_) => "invalid",
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Io(m) | Failure::Schema(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorOutput {
    pub error: String,
    pub message: String,
    pub exit_code: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharIdealOutput {
    pub ch: DivisorSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ch_torsion: Option<DivisorSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ch_quotient: Option<DivisorSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudoNullOutput {
    pub pseudo_null: bool,
    /// `direct` or `descent`.
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteOutput {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub resolved: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub accepted: bool,
    pub log: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestOutput {
    pub seed: u64,
    pub accepted: bool,
    pub suites: Vec<SuiteOutput>,
}

impl From<&SuiteOutcome> for SuiteOutput {
    fn from(s: &SuiteOutcome) -> Self {
        SuiteOutput {
            name: s.name.clone(),
            cases: s.cases,
            passed: s.passed,
            resolved: s.resolved,
            failed: s.failed,
            inconclusive: s.inconclusive,
            accepted: s.accepted,
            log: s.log.clone(),
        }
    }
}

/// What a command prints and its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Rendered {
    code: u8,
    text: String,
    json: serde_json::Value,
}

fn to_value<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("plain data serializes")
}

pub fn run(cli: &Cli) -> Outcome {
    let res = match &cli.command {
        Command::Charideal { path } => cmd_charideal(cli, path),
        Command::Pseudonull { path } => cmd_pseudonull(cli, path),
        Command::DescentCheck { path } => cmd_descent_check(cli, path),
        Command::TowerLimit { path } => cmd_tower_limit(cli, path),
        Command::OracleGrowth { path } => cmd_oracle_growth(cli, path),
        Command::Selftest => Ok(cmd_selftest(cli.seed.unwrap_or(DEFAULT_SEED))),
    };
    match res {
        Ok(r) => Outcome {
            code: r.code,
            stdout: if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&r.json).expect("json"))
            } else {
                r.text
            },
            stderr: String::new(),
        },
        Err(f) => {
            let code = f.exit_code();
            if cli.json {
                let out = ErrorOutput {
                    error: f.kind().into(),
                    message: f.message(),
                    exit_code: code,
                };
                Outcome {
                    code,
                    stdout: format!("{}\n", serde_json::to_string_pretty(&out).expect("json")),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("error ({}): {}\n", f.kind(), f.message()),
                }
            }
        }
    }
}

fn load_module(cli: &Cli, path: &Path) -> Result<(ProblemFile, PresentedModule), Failure> {
    let pf = ProblemFile::load(path)?;
    let Some(json) = &pf.module else {
        return Err(Failure::Schema("this command needs a \"module\"".into()));
    };
    let m = PresentedModule::from_json(json)?;
    let m = if cli.precision.is_some() || cli.degree_cap.is_some() {
        let r = m.ring();
        let wider = r.with_precision(
            cli.precision.unwrap_or(r.precision()),
            cli.degree_cap.unwrap_or(r.degree_cap()),
        )?;
        m.with_ring(&wider)?
    } else {
        m
    };
    Ok((pf, m))
}

/// Index of the descent variable; it must be the last one.
fn descent_variable(pf: &ProblemFile, m: &PresentedModule) -> Result<usize, Failure> {
    let ring = m.ring();
    let d = ring.nvars();
    if d == 0 {
        return Err(Error::BadVariable("the ring has no variables".into()).into());
    }
    let Some(name) = &pf.variable else {
        return Ok(d - 1);
    };
    match ring.var_index(name) {
        Some(k) if k == d - 1 => Ok(k),
        Some(_) => Err(Error::BadVariable(format!("descent runs along the last variable, not {name}")).into()),
        None => Err(Error::BadVariable(format!("unknown variable {name}")).into()),
    }
}

fn cmd_charideal(cli: &Cli, path: &Path) -> Result<Rendered, Failure> {
    let (pf, m) = load_module(cli, path)?;
    let ch = char_ideal(&m)?;
    let mut text = format!("ch: {ch}\n");
    let mut out = CharIdealOutput {
        ch: ch.summary(),
        variable: None,
        ch_torsion: None,
        ch_quotient: None,
    };
    if pf.variable.is_some() {
        let k = descent_variable(&pf, &m)?;
        let tors = char_ideal(&t_torsion(&m, k)?)?;
        let quot = char_ideal(&quotient_by_t(&m, k)?)?;
        let name = m.ring().vars()[k].clone();
        let _ = writeln!(text, "ch_torsion({name}): {tors}");
        let _ = writeln!(text, "ch_quotient({name}): {quot}");
        out.variable = Some(name);
        out.ch_torsion = Some(tors.summary());
        out.ch_quotient = Some(quot.summary());
    }
    Ok(Rendered {
        code: EXIT_HOLDS,
        text,
        json: to_value(&out),
    })
}

fn cmd_pseudonull(cli: &Cli, path: &Path) -> Result<Rendered, Failure> {
    let (pf, m) = load_module(cli, path)?;
    let (verdict, method) = if pf.variable.is_some() {
        let k = descent_variable(&pf, &m)?;
        (pseudo_null_via_descent(&m, k)?, "descent")
    } else {
        (is_pseudo_null(&m)?, "direct")
    };
    let out = PseudoNullOutput {
        pseudo_null: verdict,
        method: method.into(),
    };
    Ok(Rendered {
        code: EXIT_HOLDS,
        text: format!("pseudo_null: {verdict}\nmethod: {method}\n"),
        json: to_value(&out),
    })
}

fn cmd_descent_check(cli: &Cli, path: &Path) -> Result<Rendered, Failure> {
    let (pf, m) = load_module(cli, path)?;
    let k = descent_variable(&pf, &m)?;
    let rep = descent_check(&m, k)?;
    let mut text = String::new();
    let _ = writeln!(text, "ch_module: {}", rep.ch_module);
    let _ = writeln!(text, "ch_torsion: {}", rep.ch_torsion);
    let _ = writeln!(text, "ch_projected: {}", rep.ch_projected);
    let _ = writeln!(text, "ch_quotient: {}", rep.ch_quotient);
    let _ = writeln!(text, "identity_holds: {}", rep.identity_holds);
    let _ = writeln!(text, "zero_case: {}", rep.zero_case);
    if let Some((a, b)) = rep.rank_info {
        let _ = writeln!(text, "ranks: torsion {a}, quotient {b}");
    }
    let summary: DescentSummary = rep.summary();
    Ok(Rendered {
        code: if rep.identity_holds { EXIT_HOLDS } else { EXIT_FAILS },
        text,
        json: to_value(&summary),
    })
}

fn cmd_tower_limit(cli: &Cli, path: &Path) -> Result<Rendered, Failure> {
    let pf = ProblemFile::load(path)?;
    let Some(json) = &pf.tower else {
        return Err(Failure::Schema("tower-limit needs a \"tower\"".into()));
    };
    let mut tower = Tower::from_json(json)?;
    if cli.precision.is_some() || cli.degree_cap.is_some() {
        let r = tower.ring().clone();
        tower = tower.with_precision(
            cli.precision.unwrap_or(r.precision()),
            cli.degree_cap.unwrap_or(r.degree_cap()),
        )?;
    }
    let rep = pro_char_ideal(&tower)?;
    let summary: TowerSummary = rep.summary();
    let mut text = String::new();
    match (summary.failed_level, summary.failed_hypothesis) {
        (Some(d), Some(h)) => {
            let h = serde_json::to_value(h).expect("json");
            let _ = writeln!(text, "verdict: hypothesis failed at d={d} ({})", h.as_str().unwrap_or("?"));
        }
        _ => {
            let _ = writeln!(text, "verdict: defined");
        }
    }
    let _ = writeln!(text, "limit: {}", summary.limit.rendered);
    let _ = writeln!(text, "limit_generator: {}", summary.limit_generator);
    for l in &summary.levels {
        let _ = write!(text, "level {}: ch {}", l.d, l.ch.rendered);
        let flag = |x: Option<bool>| x.map_or("-".to_string(), |b| b.to_string());
        if l.hyp1.is_some() || l.hyp2.is_some() {
            let _ = write!(text, ", hyp1 {}, hyp2 {}", flag(l.hyp1), flag(l.hyp2));
        }
        if let Some(c) = &l.cofactor {
            let _ = write!(text, ", cofactor {c}");
        }
        if l.coherent_exactly.is_some() {
            let _ = write!(text, ", coherent_exactly {}", flag(l.coherent_exactly));
        }
        text.push('\n');
    }
    Ok(Rendered {
        code: if rep.is_defined() { EXIT_HOLDS } else { EXIT_FAILS },
        text,
        json: to_value(&summary),
    })
}

fn cmd_oracle_growth(cli: &Cli, path: &Path) -> Result<Rendered, Failure> {
    let (pf, m) = load_module(cli, path)?;
    let mut grid = FitGrid::default();
    if let Some(ms) = &pf.options.grid_m {
        grid.ms = ms.clone();
    }
    if let Some(off) = &pf.options.grid_offsets {
        grid.offsets = off.clone();
    }
    let fit: GrowthFit = fit_growth(&m, &grid)?;
    let mut text = String::new();
    let _ = writeln!(text, "mu: {}", fit.mu);
    let _ = writeln!(text, "lambda: {}", fit.lambda);
    let _ = writeln!(text, "constant: {}", fit.constant);
    let _ = writeln!(text, "lambda_candidate: {}", fit.lambda_candidate);
    let _ = writeln!(text, "m_shift: {}", fit.m_shift);
    for (mm, n, e, res) in &fit.points {
        let _ = writeln!(text, "point m={mm} n={n} e={e} residual={res}");
    }
    Ok(Rendered {
        code: EXIT_HOLDS,
        text,
        json: to_value(&fit),
    })
}

/// Reduced-size runs of every suite; the transcript carries no timings.
pub fn selftest(seed: u64) -> Vec<SuiteOutcome> {
    vec![
        suites::golden_suite(u128::MAX),
        suites::pseudo_null_suite(seed, 24),
        suites::descent_suite(seed, 24, 4),
        suites::oracle_suite(seed, 24),
        suites::tower_suite(seed, 8),
    ]
}

fn cmd_selftest(seed: u64) -> Rendered {
    let outcomes = selftest(seed);
    let accepted = outcomes.iter().all(|s| s.accepted);
    let mut text = format!("selftest seed {seed}\n");
    for s in &outcomes {
        let _ = writeln!(text, "{} [{}]", s.summary_line(), if s.accepted { "accepted" } else { "REJECTED" });
        for line in &s.log {
            let _ = writeln!(text, "  {line}");
        }
    }
    let _ = writeln!(text, "overall: {}", if accepted { "accepted" } else { "REJECTED" });
    let out = SelftestOutput {
        seed,
        accepted,
        suites: outcomes.iter().map(SuiteOutput::from).collect(),
    };
    Rendered {
        code: if accepted { EXIT_HOLDS } else { EXIT_FAILS },
        text,
        json: to_value(&out),
    }
}
