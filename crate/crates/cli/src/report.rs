//! Report documents: JSON values plus a plain-text rendering.

use propsel::axioms::{AuditReport, Axiom, Claim, Cohesion, Violation};
use propsel::priceability::{PriceSystem, SpReport};
use propsel::rational::{self, Rational};
use propsel::rule_greedy_cohesive::FjrOutcome;
use propsel::rule_pav::PavResult;
use propsel::rule_phragmen::PhragmenTrace;
use propsel::{CandSet, Election};
use serde_json::{json, Map, Value};

use crate::files::{price_system, price_table, PriceTable, SCHEMA};
use crate::CliError;

fn r(v: &Rational) -> Value {
    Value::String(rational::format(v))
}

fn ids(e: &Election, set: &CandSet) -> Value {
    json!(e.ids_of(set))
}

/// Starts a report with the schema and command echo.
pub fn header(command: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), command);
    m
}

pub fn pav(e: &Election, res: &PavResult) -> Value {
    json!({
        "outcome": ids(e, &res.winners[0]),
        "winners": res.winners.iter().map(|w| ids(e, w)).collect::<Vec<_>>(),
        "score": r(&res.score),
        "stats": { "visited": res.stats.visited, "pruned": res.stats.pruned },
    })
}

pub fn phragmen(e: &Election, tr: &PhragmenTrace) -> Value {
    let cand = |c: usize| e.candidates()[c].id.clone();
    let voter = |i: usize| e.voters()[i].id.clone();
    let events: Vec<Value> = tr
        .events
        .iter()
        .map(|ev| {
            let payments: Map<String, Value> = ev.payments.iter().map(|(i, p)| (voter(*i), r(p))).collect();
            json!({ "time": r(&ev.time), "candidate": cand(ev.candidate), "payments": payments })
        })
        .collect();
    let removals: Vec<Value> = tr
        .removals
        .iter()
        .map(|rm| json!({ "time": r(&rm.time), "candidate": cand(rm.candidate), "reason": "infeasible" }))
        .collect();
    let stranded: Map<String, Value> = tr.stranded.iter().enumerate().map(|(i, s)| (voter(i), r(s))).collect();
    json!({
        "outcome": ids(e, &tr.outcome),
        "trace": {
            "weighted": tr.weighted,
            "events": events,
            "removals": removals,
            "unsupported": tr.unsupported.iter().map(|&c| cand(c)).collect::<Vec<_>>(),
            "end_time": r(&tr.end_time),
            "stranded": stranded,
        },
    })
}

pub fn greedy(e: &Election, out: &FjrOutcome) -> Value {
    let groups: Vec<Value> = out
        .partition
        .groups
        .iter()
        .zip(&out.parts)
        .map(|(g, part)| {
            json!({
                "voters": e.voter_ids(&g.voters),
                "alpha": g.alpha,
                "beta": r(&g.beta),
                "part": ids(e, part),
            })
        })
        .collect();
    json!({ "outcome": ids(e, &out.outcome), "partition": groups })
}

pub fn priced(e: &Election, found: &[(CandSet, PriceSystem)]) -> Value {
    let outcomes: Vec<Value> = found
        .iter()
        .map(|(w, ps)| {
            let t = price_table(e, ps);
            json!({ "outcome": ids(e, w), "prices": t.prices, "payments": t.payments })
        })
        .collect();
    json!({ "outcome": found.first().map(|(w, _)| ids(e, w)), "outcomes": outcomes })
}

fn claim_json(e: &Election, group: &[usize], claim: &Claim) -> Value {
    match claim {
        Claim::Deserves { ell } => json!({ "kind": "deserves", "ell": ell }),
        Claim::Cohesive { cohesion, beta } => match cohesion {
            Cohesion::Fixed { alpha } => json!({ "kind": "cohesive", "mode": "fixed", "alpha": alpha, "beta": r(beta) }),
            Cohesion::Adaptive => json!({ "kind": "cohesive", "mode": "adaptive", "beta": r(beta) }),
        },
        Claim::CoreCohesive { alpha, beta } => {
            let per: Map<String, Value> = group.iter().zip(beta).map(|(&i, b)| (e.voters()[i].id.clone(), r(b))).collect();
            json!({ "kind": "core-cohesive", "alpha": alpha, "beta": per })
        }
        Claim::Blocking { endowment, ell } => json!({ "kind": "blocking", "endowment": endowment, "ell": ell }),
        Claim::StronglyCohesive { alpha, beta } => json!({ "kind": "strongly-cohesive", "alpha": r(alpha), "beta": beta }),
    }
}

pub fn audit(e: &Election, w: &CandSet, rep: &AuditReport) -> Value {
    let witness = rep.violation.as_ref().map(|v| {
        let utilities: Map<String, Value> = v
            .group
            .iter()
            .zip(&v.utilities)
            .map(|(&i, u)| (e.voters()[i].id.clone(), r(u)))
            .collect();
        json!({
            "group": e.voter_ids(&v.group),
            "claim": claim_json(e, &v.group, &v.claim),
            "utilities": utilities,
        })
    });
    json!({
        "outcome": ids(e, w),
        "verdict": if rep.satisfied() { "satisfied" } else { "violated" },
        "witness": witness,
        "stats": { "groups": rep.stats.groups, "t_sets": rep.stats.t_sets },
    })
}

pub fn sp(e: &Election, w: &CandSet, ps: &PriceSystem, rep: &SpReport) -> Value {
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| json!({ "condition": c.condition.name(), "holds": c.holds, "detail": c.detail }))
        .collect();
    let t = price_table(e, ps);
    json!({
        "outcome": ids(e, w),
        "verdict": if rep.passes() { "pass" } else { "fail" },
        "conditions": checks,
        "prices": t.prices,
        "payments": t.payments,
    })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Parse(format!("report lacks {key:?}")))
}

fn string_list(v: &Value) -> Result<Vec<String>, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Parse(format!("expected a list of ids: {e}")))
}

fn rat(v: &Value) -> Result<Rational, CliError> {
    let s = v.as_str().ok_or_else(|| CliError::Parse("expected a rational string".into()))?;
    rational::parse(s).map_err(|e| CliError::Parse(e.to_string()))
}

fn usize_of(v: &Value) -> Result<usize, CliError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| CliError::Parse("expected a nonnegative integer".into()))
}

/// The outcome of a report.
pub fn outcome_of(e: &Election, report: &Value) -> Result<CandSet, CliError> {
    Ok(e.set_of(&string_list(field(report, "outcome")?)?)?)
}

/// Reads back the audit result stored in an audit report.
pub fn parse_audit(e: &Election, report: &Value, axiom: Axiom) -> Result<AuditReport, CliError> {
    let witness = field(report, "witness")?;
    let violation = if witness.is_null() {
        None
    } else {
        let names = string_list(field(witness, "group")?)?;
        let group = names.iter().map(|id| e.voter_index(id)).collect::<Result<Vec<_>, _>>()?;
        let utilities_obj = field(witness, "utilities")?;
        let utilities = names
            .iter()
            .map(|id| rat(field(utilities_obj, id)?))
            .collect::<Result<Vec<_>, _>>()?;
        let c = field(witness, "claim")?;
        let kind = field(c, "kind")?.as_str().unwrap_or_default();
        let claim = match kind {
            "deserves" => Claim::Deserves {
                ell: usize_of(field(c, "ell")?)?,
            },
            "cohesive" => {
                let cohesion = match field(c, "mode")?.as_str() {
                    Some("fixed") => Cohesion::Fixed {
                        alpha: usize_of(field(c, "alpha")?)?,
                    },
                    Some("adaptive") => Cohesion::Adaptive,
                    other => return Err(CliError::Parse(format!("unknown cohesion mode {other:?}"))),
                };
                Claim::Cohesive {
                    cohesion,
                    beta: rat(field(c, "beta")?)?,
                }
            }
            "core-cohesive" => {
                let per = field(c, "beta")?;
                Claim::CoreCohesive {
                    alpha: usize_of(field(c, "alpha")?)?,
                    beta: names.iter().map(|id| rat(field(per, id)?)).collect::<Result<_, _>>()?,
                }
            }
            "blocking" => Claim::Blocking {
                endowment: usize_of(field(c, "endowment")?)?,
                ell: usize_of(field(c, "ell")?)?,
            },
            "strongly-cohesive" => Claim::StronglyCohesive {
                alpha: rat(field(c, "alpha")?)?,
                beta: usize_of(field(c, "beta")?)?,
            },
            other => return Err(CliError::Parse(format!("unknown claim kind {other:?}"))),
        };
        Some(Violation {
            group,
            claim,
            utilities,
        })
    };
    Ok(AuditReport {
        axiom,
        violation,
        stats: Default::default(),
    })
}

/// Reads back the price system stored in a report.
pub fn parse_prices(e: &Election, report: &Value) -> Result<PriceSystem, CliError> {
    let table = PriceTable {
        prices: serde_json::from_value(field(report, "prices")?.clone()).map_err(|e| CliError::Parse(e.to_string()))?,
        payments: serde_json::from_value(field(report, "payments")?.clone())
            .map_err(|e| CliError::Parse(e.to_string()))?,
    };
    price_system(e, &table)
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(inner) if !inner.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for (n, item) in items.iter().enumerate() {
                            out.push_str(&format!("{pad}  [{n}]\n"));
                            render(item, indent + 2, out);
                        }
                    }
                    _ => {
                        out.push_str(&format!("{pad}{k}: "));
                        render(x, 0, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items
                .iter()
                .map(|i| match i {
                    Value::Array(inner) => format!("{{{}}}", inner.iter().map(scalar).collect::<Vec<_>>().join(", ")),
                    other => scalar(other),
                })
                .collect();
            out.push_str(&format!("{pad}{{{}}}\n", parts.join(", ")));
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

/// Indented `key: value` lines; id lists print as `{a, b}`.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}
