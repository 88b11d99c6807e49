//! The `propsel` command line.
//!
//! Every command prints one report (JSON by default, `--format text` for
//! humans). Exit codes: 0 ok, 1 a `verify` mismatch or internal failure,
//! 2 unreadable input, 3 violated precondition, 4 generator refusal,
//! 5 enumeration cap.

use std::ffi::OsString;
use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use propsel::axioms::{audit, recheck, Axiom, Options};
use propsel::fixtures::{build_fixture, FixtureParams, WitnessDomain};
use propsel::priceability::{search_stable_priceable, verify_sp, SearchMode, SpMode};
use propsel::rule_greedy_cohesive::construct_fjr_outcome;
use propsel::rule_pav::{pav_score, pav_swap_search, solve_pav_exact};
use propsel::rule_phragmen::{run_phragmen, run_phragmen_weighted};
use propsel::{CandSet, Election, ErrorClass, ExchangeCheck, DEFAULT_CAP};
use serde_json::{json, Value};

pub mod files;
pub mod report;

use files::{from_json, parse_set, to_json, ElectionFile, FixtureInfo, PriceFile, Reference};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Parse(String),
    Lib(propsel::Error),
    /// A `verify` run found a mismatch.
    Mismatch(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Lib(e) => write!(f, "{}: {e}", code_name(e)),
            CliError::Mismatch(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<propsel::Error> for CliError {
    fn from(e: propsel::Error) -> Self {
        CliError::Lib(e)
    }
}

fn code_name(e: &propsel::Error) -> &'static str {
    use propsel::Error::*;
    match e {
        NTooSmall { .. } => "n-too-small",
        BadN(..) => "bad-n",
        InvalidWitness(_) => "invalid-witness",
        InvalidParameters(_) => "invalid-parameters",
        UnknownFixture(_) => "unknown-fixture",
        EnumerationCapExceeded { .. } => "enumeration-cap",
        InfeasibleOutcome => "infeasible-outcome",
        NotAMatroid => "not-a-matroid",
        Precondition(_) => "precondition",
        SearchExhausted => "search-exhausted",
        _ => "invalid-input",
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Mismatch(_) => 1,
            CliError::Lib(e) => match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::Precondition => 3,
                ErrorClass::Generator => 4,
                ErrorClass::Cap => 5,
                ErrorClass::Internal => 1,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Pav,
    Phragmen,
    PhragmenWeighted,
    GreedyCohesive,
    StablePriceable,
}

#[derive(Debug, Parser)]
#[command(name = "propsel", version, about = "Proportional selection under feasibility constraints")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Enumeration cap for exhaustive searches.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a voting rule.
    Rule {
        /// Election file, or `-` for stdin.
        file: PathBuf,
        #[arg(value_enum)]
        rule: Rule,
        /// pav: exact | swap. stable-priceable: uniform | general | exhaustive.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Audit an outcome for a proportionality axiom.
    Audit {
        file: PathBuf,
        /// ejr, pjr, fjr, fjr-adaptive, core, restrained-ejr, ejr-weighted, pjr-weighted.
        axiom: String,
        /// Comma-separated candidate ids; defaults to the file's reference outcome.
        #[arg(long)]
        outcome: Option<String>,
    },
    /// Check the constraints or a price system.
    Check {
        file: PathBuf,
        #[command(subcommand)]
        check: Check,
    },
    /// Emit a generated election file.
    Fixture {
        id: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        g: Option<usize>,
        /// Rational, e.g. 1/100.
        #[arg(long)]
        eps: Option<String>,
        /// Rational, e.g. 99/200.
        #[arg(long)]
        share: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// explicit, ranking, negative-votes or judgment.
        #[arg(long)]
        domain: Option<String>,
    },
    /// Re-check a report against its election.
    Verify { file: PathBuf, report: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Exchange property: reports a witness pair or that the system is a matroid.
    Matroid,
    /// Whether a set of candidates is feasible.
    Feasible { set: String },
    /// Stable-priceability of an outcome under a price system.
    Sp {
        /// Price file; defaults to the file's reference prices.
        prices: Option<PathBuf>,
        #[arg(long)]
        outcome: Option<String>,
        /// sp4 (default) or exhaustive.
        #[arg(long)]
        mode: Option<String>,
    },
}

/// Reads `path`, or stdin for `-`.
fn read_source(path: &Path, stdin: &mut dyn Read) -> Result<(String, String), CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        return Ok((s, "<stdin>".into()));
    }
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
    Ok((text, name))
}

fn load(path: &Path, stdin: &mut dyn Read) -> Result<(ElectionFile, Election), CliError> {
    let (text, name) = read_source(path, stdin)?;
    let file: ElectionFile = from_json(&text, &name)?;
    let e = file.to_election()?;
    Ok((file, e))
}

fn reference_outcome(file: &ElectionFile, e: &Election) -> Result<Option<CandSet>, CliError> {
    match file.reference.as_ref().and_then(|r| r.outcome.as_ref()) {
        Some(ids) => Ok(Some(e.set_of(ids)?)),
        None => Ok(None),
    }
}

fn outcome_arg(file: &ElectionFile, e: &Election, given: &Option<String>) -> Result<CandSet, CliError> {
    match given {
        Some(list) => parse_set(e, list),
        None => reference_outcome(file, e)?
            .ok_or_else(|| CliError::Parse("no --outcome given and the file has no reference outcome".into())),
    }
}

fn parse_axiom(s: &str) -> Result<Axiom, CliError> {
    Axiom::parse(s).ok_or_else(|| CliError::Parse(format!("unknown axiom {s:?}")))
}

fn sp_mode(mode: &Option<String>) -> Result<SpMode, CliError> {
    match mode.as_deref() {
        None | Some("sp4") => Ok(SpMode::Sp4),
        Some("exhaustive") => Ok(SpMode::Exhaustive),
        Some(other) => Err(CliError::Parse(format!("unknown sp mode {other:?}"))),
    }
}

fn run_rule(e: &Election, rule: Rule, mode: &Option<String>, cap: usize) -> Result<Value, CliError> {
    Ok(match rule {
        Rule::Pav => match mode.as_deref() {
            None | Some("exact") => report::pav(e, &solve_pav_exact(e, cap)?),
            Some("swap") => {
                let start = e.system().complete(&run_phragmen(e)?.outcome);
                let w = pav_swap_search(e, &start)?;
                json!({ "outcome": e.ids_of(&w), "score": propsel::rational::format(&pav_score(e, &w)) })
            }
            Some(other) => return Err(CliError::Parse(format!("unknown pav mode {other:?}"))),
        },
        Rule::Phragmen => report::phragmen(e, &run_phragmen(e)?),
        Rule::PhragmenWeighted => report::phragmen(e, &run_phragmen_weighted(e)?),
        Rule::GreedyCohesive => report::greedy(e, &construct_fjr_outcome(e, &Options::with_cap(cap))?),
        Rule::StablePriceable => {
            let m = match mode.as_deref() {
                None | Some("uniform") => SearchMode::Uniform,
                Some("general") => SearchMode::General,
                Some("exhaustive") => SearchMode::Exhaustive,
                Some(other) => return Err(CliError::Parse(format!("unknown search mode {other:?}"))),
            };
            report::priced(e, &search_stable_priceable(e, m, cap)?)
        }
    })
}

fn rule_name(rule: Rule) -> String {
    rule.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn merge(mut head: serde_json::Map<String, Value>, body: Value) -> Value {
    if let Value::Object(m) = body {
        head.extend(m);
    }
    Value::Object(head)
}

fn parse_rational_arg(s: &Option<String>, what: &str) -> Result<Option<propsel::Rational>, CliError> {
    s.as_deref()
        .map(|v| propsel::rational::parse(v).map_err(|e| CliError::Parse(format!("--{what}: {e}"))))
        .transpose()
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Value, CliError> {
    let cap = cli.cap;
    let opts = Options::with_cap(cap);
    match &cli.command {
        Command::Rule { file, rule, mode } => {
            let (_, e) = load(file, stdin)?;
            let body = run_rule(&e, *rule, mode, cap)?;
            let cmd = json!({ "name": "rule", "rule": rule_name(*rule), "mode": mode });
            Ok(merge(report::header(cmd), body))
        }
        Command::Audit { file, axiom, outcome } => {
            let axiom = parse_axiom(axiom)?;
            let (f, e) = load(file, stdin)?;
            let w = outcome_arg(&f, &e, outcome)?;
            let rep = audit(&e, &w, axiom, &opts)?;
            let cmd = json!({ "name": "audit", "axiom": axiom.name() });
            Ok(merge(report::header(cmd), report::audit(&e, &w, &rep)))
        }
        Command::Check { file, check } => {
            let (f, e) = load(file, stdin)?;
            match check {
                Check::Matroid => {
                    let body = match e.system().check_exchange_property(cap)? {
                        ExchangeCheck::IsMatroid => json!({ "matroid": true, "witness": null }),
                        ExchangeCheck::Witness(w) => {
                            json!({ "matroid": false, "witness": files::witness_entry(&e, &w) })
                        }
                    };
                    Ok(merge(report::header(json!({ "name": "check", "check": "matroid" })), body))
                }
                Check::Feasible { set } => {
                    let w = parse_set(&e, set)?;
                    let body = json!({
                        "outcome": e.ids_of(&w),
                        "feasible": e.is_feasible(&w),
                        "maximal": e.system().is_maximal(&w),
                    });
                    Ok(merge(report::header(json!({ "name": "check", "check": "feasible" })), body))
                }
                Check::Sp { prices, outcome, mode } => {
                    let mode_v = sp_mode(mode)?;
                    let (table, file_outcome) = match prices {
                        Some(p) => {
                            let (text, name) = read_source(p, stdin)?;
                            let pf: PriceFile = from_json(&text, &name)?;
                            (pf.table()?, pf.outcome.clone())
                        }
                        None => {
                            let t = f.reference.as_ref().and_then(|r| r.prices.clone());
                            (t.ok_or_else(|| CliError::Parse("no price file and no reference prices".into()))?, None)
                        }
                    };
                    let w = match (outcome, file_outcome) {
                        (Some(list), _) => parse_set(&e, list)?,
                        (None, Some(ids)) => e.set_of(&ids)?,
                        (None, None) => outcome_arg(&f, &e, &None)?,
                    };
                    let ps = files::price_system(&e, &table)?;
                    let rep = verify_sp(&e, &w, &ps, mode_v, cap)?;
                    let name = if mode_v == SpMode::Sp4 { "sp4" } else { "exhaustive" };
                    let cmd = json!({ "name": "check", "check": "sp", "mode": name });
                    Ok(merge(report::header(cmd), report::sp(&e, &w, &ps, &rep)))
                }
            }
        }
        Command::Fixture {
            id,
            n,
            m,
            k,
            g,
            eps,
            share,
            seed,
            domain,
        } => {
            let domain = domain
                .as_deref()
                .map(|d| WitnessDomain::parse(d).ok_or_else(|| CliError::Parse(format!("unknown domain {d:?}"))))
                .transpose()?;
            let params = FixtureParams {
                n: *n,
                m: *m,
                k: *k,
                g: *g,
                eps: parse_rational_arg(eps, "eps")?,
                share: parse_rational_arg(share, "share")?,
                seed: *seed,
                domain,
            };
            let fx = build_fixture(id, &params, cap)?;
            let e = &fx.election;
            let mut file = ElectionFile::from_election(e);
            file.fixture = Some(FixtureInfo {
                id: fx.id.clone(),
                params: fx.params.iter().cloned().collect(),
            });
            let reference = Reference {
                outcome: fx.outcome.map(|w| e.ids_of(&w)),
                prices: fx.prices.as_ref().map(|ps| files::price_table(e, ps)),
                witness: fx.witness.as_ref().map(|w| files::witness_entry(e, w)),
            };
            if reference != Reference::default() {
                file.reference = Some(reference);
            }
            Ok(serde_json::to_value(&file).expect("serializable"))
        }
        Command::Verify { file, report } => {
            let (_, e) = load(file, stdin)?;
            let (text, name) = read_source(report, stdin)?;
            let rep: Value = from_json(&text, &name)?;
            let checked = verify(&e, &rep, &opts)?;
            let cmd = json!({ "name": "verify" });
            Ok(merge(report::header(cmd), json!({ "verified": true, "checked": checked })))
        }
    }
}

fn mismatch(what: impl Into<String>) -> CliError {
    CliError::Mismatch(what.into())
}

/// Re-derives a report's findings; returns a description of what was checked.
fn verify(e: &Election, rep: &Value, opts: &Options) -> Result<String, CliError> {
    let command = rep
        .get("command")
        .ok_or_else(|| CliError::Parse("report lacks \"command\"".into()))?;
    let name = command.get("name").and_then(Value::as_str).unwrap_or_default();
    match name {
        "audit" => {
            let axiom = parse_axiom(command.get("axiom").and_then(Value::as_str).unwrap_or_default())?;
            let w = report::outcome_of(e, rep)?;
            let stored = report::parse_audit(e, rep, axiom)?;
            if stored.satisfied() {
                if !audit(e, &w, axiom, opts)?.satisfied() {
                    return Err(mismatch(format!("{} is violated", axiom.name())));
                }
                Ok(format!("{} holds", axiom.name()))
            } else {
                if !recheck(e, &w, &stored, opts)? {
                    return Err(mismatch("the witness does not re-derive"));
                }
                Ok(format!("{} witness re-derived", axiom.name()))
            }
        }
        "rule" => {
            let rule = match command.get("rule").and_then(Value::as_str) {
                Some(r) => Rule::from_str(r, false).map_err(CliError::Parse)?,
                None => return Err(CliError::Parse("report lacks the rule name".into())),
            };
            let mode: Option<String> = command.get("mode").and_then(Value::as_str).map(str::to_string);
            let w = report::outcome_of(e, rep)?;
            let again = run_rule(e, rule, &mode, opts.cap)?;
            if report::outcome_of(e, &again)? != w || !e.is_feasible(&w) {
                return Err(mismatch("the rule selects a different outcome"));
            }
            Ok(format!("{} outcome reproduced", rule_name(rule)))
        }
        "check" => match command.get("check").and_then(Value::as_str) {
            Some("matroid") => {
                let witness = rep.get("witness").filter(|w| !w.is_null());
                match witness {
                    Some(w) => {
                        let entry: files::WitnessEntry =
                            serde_json::from_value(w.clone()).map_err(|err| CliError::Parse(err.to_string()))?;
                        files::witness(e, &entry)?
                            .validate(e.system())
                            .map_err(|err| mismatch(err.to_string()))?;
                        Ok("exchange-property witness valid".into())
                    }
                    None => match e.system().check_exchange_property(opts.cap)? {
                        ExchangeCheck::IsMatroid => Ok("matroid confirmed".into()),
                        ExchangeCheck::Witness(_) => Err(mismatch("the system is not a matroid")),
                    },
                }
            }
            Some("sp") => {
                let mode = sp_mode(&command.get("mode").and_then(Value::as_str).map(str::to_string))?;
                let w = report::outcome_of(e, rep)?;
                let ps = report::parse_prices(e, rep)?;
                let passes = verify_sp(e, &w, &ps, mode, opts.cap)?.passes();
                let claimed = rep.get("verdict").and_then(Value::as_str) == Some("pass");
                if passes != claimed {
                    return Err(mismatch("stable-priceability verdict differs"));
                }
                Ok("stable-priceability verdict reproduced".into())
            }
            Some("feasible") => {
                let w = report::outcome_of(e, rep)?;
                let claimed = rep.get("feasible").and_then(Value::as_bool);
                if claimed != Some(e.is_feasible(&w)) {
                    return Err(mismatch("feasibility verdict differs"));
                }
                Ok("feasibility verdict reproduced".into())
            }
            other => Err(CliError::Parse(format!("cannot verify check {other:?}"))),
        },
        other => Err(CliError::Parse(format!("cannot verify a {other:?} report"))),
    }
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line (including the program name) against `stdin`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let text = err.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(&cli, stdin) {
        Ok(value) => Outcome {
            code: 0,
            stdout: match cli.format {
                Format::Json => to_json(&value),
                Format::Text => report::to_text(&value),
            },
            stderr: String::new(),
        },
        Err(err) => Outcome {
            code: err.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        },
    }
}
