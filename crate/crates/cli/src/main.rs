use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;
use vbl::cosets::{coset_reps, CosetKind};
use vbl::defset::{representatives, DEFAULT_REP_CAP};
use vbl::fieldspec::FieldSpec;
use vbl::ledger::{map_relation, Ledger, Relation};
use vbl::maps::{build, Direction, Point, MAP_NAMES};
use vbl::parse::{parse_element, parse_point, parse_set};
use vbl::verify::{render_point, verify_bijection, Status};
use vbl::{with_field, Error, ValuedField};

/// Definable bijections over Q_p and F_q((t)).
///
/// Fields are given as `qp:<p>` or `laurent:<p>:<e>[:c0,c1,...]` (modulus
/// coefficients low degree first).
#[derive(Parser)]
#[command(name = "vbl", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a point and optionally push it through a map.
    Eval {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        /// Map name; see `vbl verify --help` for the list.
        #[arg(long)]
        map: Option<String>,
        /// Apply the inverse instead.
        #[arg(long)]
        inverse: bool,
        /// Copy index for maps on disjoint unions.
        #[arg(long, default_value_t = 0)]
        tag: u32,
        /// Comma-separated coordinates.
        point: String,
    },
    /// Check a map exhaustively on balls and on random samples.
    Verify {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        #[arg(long, help = format!("one of {}", MAP_NAMES.join(", ")))]
        map: String,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ball representatives of a set, or coset representatives.
    Reps {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        /// Set expression, e.g. `R^(k:2)` or `R* x R | {0}`.
        #[arg(long, conflicts_with = "cosets")]
        set: Option<String>,
        /// `units`, `squares:<k>` or `cubes:<k>`.
        #[arg(long)]
        cosets: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Print at most this many representatives.
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
    /// Verify the source maps, register their relations and derive 1 = 0.
    Ledger {
        #[arg(long, default_value = "qp:3")]
        field: String,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = 500)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Expand an expression as a power series.
    Expand {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        expr: String,
    },
}

const USAGE: u8 = 3;

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. }
        | Error::InvalidField(_)
        | Error::NotPrime(_)
        | Error::UnknownMap(_)
        | Error::UnsupportedField { .. }
        | Error::ReducibleModulus(_)
        | Error::InconsistentPrecision(_)
        | Error::ZeroDenominator => USAGE,
        Error::UndecidableMembership | Error::ValuationUndecidable | Error::DivisionUndecidable => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if json {
                println!("{}", json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(exit_for(&e))
        }
    }
}

fn emit(json: bool, value: serde_json::Value, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

fn run(cli: Cli) -> vbl::Result<u8> {
    let json = cli.json;
    match cli.cmd {
        Cmd::Eval { field, prec, map, inverse, tag, point } => {
            let spec = FieldSpec::parse(&field, prec)?;
            with_field!(spec.build()?, k => {
                let x = Point::tagged(tag, parse_point(&*k, &point)?);
                let Some(name) = map else {
                    let shown = render_point(&*k, &x);
                    emit(json, json!({ "field": spec.to_string(), "value": shown }), || shown.clone());
                    return Ok(0);
                };
                let m = build(&name, Arc::clone(&k))?;
                let dir = if inverse { Direction::Inverse } else { Direction::Forward };
                let piece = m.pieces[m.piece_index(&x, dir)?].name.clone();
                let y = m.run(&x, dir)?;
                let (xs, ys) = (render_point(&*k, &x), render_point(&*k, &y));
                emit(
                    json,
                    json!({ "field": spec.to_string(), "map": name, "inverse": inverse, "input": xs, "piece": piece, "output": ys, "tag": y.tag }),
                    || format!("{xs} -> {ys}  [{piece}]"),
                );
                Ok(0)
            })
        }
        Cmd::Verify { field, prec, map, depth, samples, seed } => {
            let spec = FieldSpec::parse(&field, prec)?;
            let report = verify_bijection(&map, &spec, depth, samples, seed)?;
            emit(json, serde_json::to_value(&report).expect("serializable"), || {
                let mut out = format!(
                    "{} over {} at depth {}: {:?}\n  domain balls {}, codomain balls {}, excluded {}/{}, undecidable {}",
                    report.map,
                    report.field,
                    report.depth,
                    report.status,
                    report.domain_count,
                    report.codomain_count,
                    report.excluded_domain,
                    report.excluded_codomain,
                    report.undecidable
                );
                for (name, c) in &report.checks {
                    out.push_str(&format!("\n  {name:<15} {:>7} run {:>5} failed", c.run, c.failed));
                }
                for f in &report.failures {
                    out.push_str(&format!("\n  ! {}: {} — {}", f.check, f.point, f.detail));
                }
                out
            });
            Ok(report.status.exit_code() as u8)
        }
        Cmd::Reps { field, prec, set, cosets, depth, limit } => {
            let spec = FieldSpec::parse(&field, prec)?;
            with_field!(spec.build()?, k => {
                if let Some(c) = cosets {
                    let kind = parse_coset_kind(&c)?;
                    let reps: Vec<String> = coset_reps(&*k, kind)?.iter().map(|r| k.render(r)).collect();
                    emit(json, json!({ "field": spec.to_string(), "cosets": c, "reps": reps }), || reps.join("\n"));
                    return Ok(0);
                }
                let text = set.ok_or_else(|| Error::Syntax { pos: 0, msg: "give --set or --cosets".into() })?;
                let s = parse_set(&*k, &text)?;
                let reps = representatives(&*k, &s, depth, DEFAULT_REP_CAP)?;
                let show = |v: &Vec<Vec<_>>| -> Vec<String> {
                    v.iter().take(limit).map(|p| render_point(&*k, &Point::plain(p.clone()))).collect()
                };
                let (interior, residual) = (show(&reps.interior), show(&reps.residual));
                emit(
                    json,
                    json!({
                        "field": spec.to_string(), "set": s.to_string(), "depth": depth,
                        "interior_count": reps.interior.len(), "residual_count": reps.residual.len(),
                        "interior": interior, "residual": residual,
                    }),
                    || {
                        let mut out = format!(
                            "{s} at depth {depth}: {} interior, {} residual",
                            reps.interior.len(),
                            reps.residual.len()
                        );
                        for p in &interior {
                            out.push_str(&format!("\n  {p}"));
                        }
                        for p in &residual {
                            out.push_str(&format!("\n  ? {p}"));
                        }
                        out
                    },
                );
                Ok(0)
            })
        }
        Cmd::Ledger { field, prec, depth, samples, seed } => {
            let spec = FieldSpec::parse(&field, prec)?;
            let mut ledger = Ledger::new();
            let mut runs = Vec::new();
            for map in ["prop3i", "prop3ii"] {
                let report = verify_bijection(map, &spec, depth, samples, seed)?;
                runs.push(json!({ "map": map, "status": report.status }));
                if ledger.accept_report(&report) {
                    ledger.register(map_relation(map).expect("source map"))?;
                }
            }
            ledger.register(Relation::scissor("R*", "pt", "R", ""))?;
            let trace = ledger.derive_triviality()?;
            emit(
                json,
                json!({
                    "field": spec.to_string(),
                    "verified": runs,
                    "relations": ledger.relations().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "trace": trace.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                }),
                || {
                    let mut out = String::from("relations:\n");
                    for r in ledger.relations() {
                        out.push_str(&format!("  {r}\n"));
                    }
                    out.push_str("derivation:\n");
                    out.push_str(&trace.to_string());
                    out.trim_end().to_string()
                },
            );
            Ok(if runs.iter().all(|r| r["status"] == json!(Status::Pass)) { 0 } else { 1 })
        }
        Cmd::Expand { field, prec, expr } => {
            let spec = FieldSpec::parse(&field, prec)?;
            with_field!(spec.build()?, k => {
                let x = parse_element(&*k, &expr)?;
                let shown = k.render(&x);
                emit(json, json!({ "field": spec.to_string(), "expr": expr, "value": shown }), || shown.clone());
                Ok(0)
            })
        }
    }
}

fn parse_coset_kind(text: &str) -> vbl::Result<CosetKind> {
    let bad = || Error::Syntax { pos: 0, msg: format!("expected units, squares:<k> or cubes:<k>, got `{text}`") };
    match text.split_once(':') {
        None if text == "units" => Ok(CosetKind::UnitsByAcone),
        Some(("squares", k)) => Ok(CosetKind::AconeBySquares(k.parse().map_err(|_| bad())?)),
        Some(("cubes", k)) => Ok(CosetKind::AconeByCubes(k.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}
