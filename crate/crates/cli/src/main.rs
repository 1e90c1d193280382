//! `hnp`: Tate–Shafarevich groups of norm-one-torus character lattices.
//!
//! Reports go to stdout as JSON, diagnostics to stderr.

mod report;
mod selftest;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hnp_core::coh::Budget;
use hnp_core::grp::{build_group, resolve_subgroup, GroupRef, GroupSpec, SubgroupHandle};
use hnp_core::rep::{d_membership, exhaustive_scan, s_min, ScanBudget};
use hnp_core::thm::{classify_6_11, conditions_4_18, sha_full_with, witness_6_12, Classification, Method, WitnessVariant};
use hnp_core::Error;
use serde_json::{json, Value};

use report::{Failure, Outcome, Report};

#[derive(Parser, Debug)]
#[command(name = "hnp", version, about = "Hasse norm principle obstructions for finite groups")]
struct Cli {
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute Ш²_D(G, J_{G/H}) by the structural results, brute force, or both.
    Sha {
        /// Group spec: a file path or inline JSON.
        #[arg(long)]
        group: String,
        /// Subgroup reference (`trivial`, `sylow:P`, anchor, or generator
        /// indices `"0,1"`), optionally with multiplicity `REF*k`.
        #[arg(long = "subgroup", required = true)]
        subgroups: Vec<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Theorem)]
        method: MethodArg,
        /// Decomposition-group set; cyclic subgroups are always added.
        #[arg(long = "dset")]
        dset: Vec<String>,
    },
    /// Enumerate 2-dimensional F_p-representations realising degree p·n.
    ScanReps {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = ScanBudget::default().max_gl2_order)]
        max_gl2_order: usize,
        #[arg(long, default_value_t = ScanBudget::default().max_classes)]
        max_classes: usize,
    },
    /// Tabulate membership of multiples of p in p²Z, D_1(p), D_2(p).
    Dset {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max: u64,
    },
    /// Decide whether the Hasse norm principle holds for a degree-3p-type pair.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
    },
    /// Build the explicit groups with Ш = Z/3p or Z/pl.
    Witness {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = VariantArg::I)]
        variant: VariantArg,
        /// Second prime for variant ii.
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Theorem)]
        method: MethodArg,
    },
    /// Run the built-in consistency checks.
    Selftest {
        #[arg(long, value_enum, default_value_t = Scope::Quick)]
        scope: Scope,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Theorem,
    Brute,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Theorem => Method::Theorem,
            MethodArg::Brute => Method::Brute,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VariantArg {
    I,
    Ii,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Quick,
    Full,
}

fn method_name(m: MethodArg) -> String {
    format!("{m:?}").to_lowercase()
}

/// Inline JSON if the text looks like an object, otherwise a path.
fn load_group_spec(text: &str) -> Result<GroupSpec, Failure> {
    let trimmed = text.trim_start();
    let (source, body) = if trimmed.starts_with('{') {
        ("inline spec".to_string(), text.to_string())
    } else {
        let body = std::fs::read_to_string(text).map_err(|e| Failure::Parse(format!("{text}: {e}")))?;
        (text.to_string(), body)
    };
    let spec: GroupSpec = serde_json::from_str(&body).map_err(|e| {
        let msg = format!("{source}: {e}");
        if e.is_data() {
            Failure::Schema(msg)
        } else {
            Failure::Parse(msg)
        }
    })?;
    spec.validate_shallow()
        .map_err(|e| Failure::Schema(format!("{source}: {e}")))?;
    Ok(spec)
}

fn build(spec: &GroupSpec) -> Result<GroupRef, Failure> {
    build_group(spec).map_err(|e| match e {
        Error::SpecInvalid(m) => Failure::Schema(m),
        e => Failure::Core(e),
    })
}

fn parse_member(g: &GroupRef, text: &str) -> Result<(SubgroupHandle, usize), Failure> {
    let (reference, mult) = match text.rsplit_once('*') {
        Some((r, k)) => {
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| Failure::Parse(format!("bad multiplicity in {text:?}")))?;
            if k == 0 {
                return Err(Failure::Schema(format!("multiplicity must be positive in {text:?}")));
            }
            (r, k)
        }
        None => (text, 1),
    };
    Ok((resolve_subgroup(g, reference)?, mult))
}

fn budget_json(b: &Budget) -> Value {
    json!({ "max_cochains": b.max_cochains, "max_basis": b.max_basis })
}

/// Moves `warnings` and `timing_ms` out of a serialized engine report.
fn split_engine_report(mut v: Value, warnings: &mut Vec<String>) -> Value {
    if let Value::Object(map) = &mut v {
        map.remove("timing_ms");
        if let Some(Value::Array(ws)) = map.remove("warnings") {
            warnings.extend(ws.into_iter().filter_map(|w| w.as_str().map(str::to_string)));
        }
    }
    v
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// The command echo and the canonical inputs that feed the digest. Group
/// arguments are digested through their parsed spec, so a file and the
/// equivalent inline text hash alike.
fn describe(cmd: &Command) -> (Value, Value) {
    let group_input = |g: &str| load_group_spec(g).map_or_else(|_| Value::String(g.into()), |s| to_value(&s));
    match cmd {
        Command::Sha {
            group,
            subgroups,
            p,
            method,
            dset,
        } => (
            json!({"verb": "sha", "group": group, "subgroups": subgroups, "p": p, "method": method_name(*method), "dset": dset}),
            json!({"verb": "sha", "group": group_input(group), "subgroups": subgroups, "p": p, "method": method_name(*method), "dset": dset}),
        ),
        Command::ScanReps {
            p,
            n,
            max_gl2_order,
            max_classes,
        } => {
            let v = json!({"verb": "scan-reps", "p": p, "n": n, "max_gl2_order": max_gl2_order, "max_classes": max_classes});
            (v.clone(), v)
        }
        Command::Dset { p, max } => {
            let v = json!({"verb": "dset", "p": p, "max": max});
            (v.clone(), v)
        }
        Command::Classify { group, subgroup } => (
            json!({"verb": "classify", "group": group, "subgroup": subgroup}),
            json!({"verb": "classify", "group": group_input(group), "subgroup": subgroup}),
        ),
        Command::Witness { p, variant, l, method } => {
            let v = json!({"verb": "witness", "p": p, "variant": format!("{variant:?}").to_lowercase(), "l": l, "method": method_name(*method)});
            (v.clone(), v)
        }
        Command::Selftest { scope } => {
            let v = json!({"verb": "selftest", "scope": format!("{scope:?}").to_lowercase()});
            (v.clone(), v)
        }
    }
}

fn run_sha(
    group: &str,
    subgroups: &[String],
    p: Option<u64>,
    method: MethodArg,
    dset: &[String],
) -> Result<Outcome, Failure> {
    let spec = load_group_spec(group)?;
    let g = build(&spec)?;
    let pairs = subgroups
        .iter()
        .map(|s| parse_member(&g, s))
        .collect::<Result<Vec<_>, _>>()?;
    let dset = dset
        .iter()
        .map(|s| resolve_subgroup(&g, s).map_err(Failure::from))
        .collect::<Result<Vec<_>, _>>()?;
    let budget = Budget::from_env();
    let report = sha_full_with(&g, &pairs, p, &dset, method.into(), &budget)?;
    let mut warnings = Vec::new();
    let results = split_engine_report(to_value(&report), &mut warnings);
    Ok(Outcome {
        results,
        method: Some(method_name(method)),
        budgets: budget_json(&budget),
        warnings,
        exit_code: 0,
    })
}

fn run_scan(p: u64, n: u64, budget: ScanBudget) -> Result<Outcome, Failure> {
    let report = exhaustive_scan(p, n, &budget)?;
    let mut warnings = Vec::new();
    let conclusive = report.conclusive;
    let mut results = to_value(&report);
    if let Value::Object(map) = &mut results {
        map.remove("budget");
        if let Some(Value::Array(ws)) = map.remove("warnings") {
            warnings.extend(ws.into_iter().filter_map(|w| w.as_str().map(str::to_string)));
        }
    }
    if !conclusive {
        warnings.push("scan stopped at its budget; the hit list may be incomplete".into());
    }
    Ok(Outcome {
        results,
        method: Some("exhaustive".into()),
        budgets: to_value(&budget),
        warnings,
        exit_code: if conclusive { 0 } else { 2 },
    })
}

fn run_dset(p: u64, max: u64) -> Result<Outcome, Failure> {
    let smallest = s_min(p)?;
    let entries = (1..=max / p.max(1))
        .map(|k| d_membership(k * p, p).map(|m| to_value(&m)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome {
        results: json!({"p": p, "max": max, "s_min": smallest, "entries": entries}),
        ..Default::default()
    })
}

fn run_classify(group: &str, subgroup: &str) -> Result<Outcome, Failure> {
    let spec = load_group_spec(group)?;
    let g = build(&spec)?;
    let h = resolve_subgroup(&g, subgroup)?;
    let class = classify_6_11(&g, &h)?;
    let conditions = match class {
        Classification::Alpha(p) | Classification::Beta(p) => Some(to_value(&conditions_4_18(&g, &h, p)?)),
        Classification::HnpHolds => None,
    };
    Ok(Outcome {
        results: json!({
            "group": g.label(),
            "group_order": g.order(),
            "subgroup": h.elements(),
            "index": h.index(),
            "classification": class,
            "conditions": conditions,
        }),
        method: Some("classification".into()),
        ..Default::default()
    })
}

fn run_witness(p: u64, variant: VariantArg, l: Option<u64>, method: MethodArg) -> Result<Outcome, Failure> {
    let variant = match (variant, l) {
        (VariantArg::I, None) => WitnessVariant::I,
        (VariantArg::Ii, Some(l)) => WitnessVariant::II(l),
        (VariantArg::I, Some(_)) => return Err(Failure::Schema("--l only applies to variant ii".into())),
        (VariantArg::Ii, None) => return Err(Failure::Schema("variant ii needs --l".into())),
    };
    let w = witness_6_12(p, variant)?;
    let budget = Budget::from_env();
    let report = sha_full_with(&w.group, &[(w.subgroup.clone(), 1)], Some(p), &[], method.into(), &budget)?;
    let mut warnings = Vec::new();
    let matches = report.result == w.prediction;
    if !matches {
        warnings.push(format!("computed {} differs from the predicted {}", report.result, w.prediction));
    }
    let sha = split_engine_report(to_value(&report), &mut warnings);
    Ok(Outcome {
        results: json!({
            "spec": w.spec,
            "group_order": w.group.order(),
            "subgroup": w.subgroup.elements(),
            "index": w.subgroup.index(),
            "prediction": w.prediction,
            "matches_prediction": matches,
            "sha": sha,
        }),
        method: Some(method_name(method)),
        budgets: budget_json(&budget),
        warnings,
        exit_code: 0,
    })
}

fn run(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Sha {
            group,
            subgroups,
            p,
            method,
            dset,
        } => run_sha(group, subgroups, *p, *method, dset),
        Command::ScanReps {
            p,
            n,
            max_gl2_order,
            max_classes,
        } => run_scan(
            *p,
            *n,
            ScanBudget {
                max_gl2_order: *max_gl2_order,
                max_classes: *max_classes,
            },
        ),
        Command::Dset { p, max } => run_dset(*p, *max),
        Command::Classify { group, subgroup } => run_classify(group, subgroup),
        Command::Witness { p, variant, l, method } => run_witness(*p, *variant, *l, *method),
        Command::Selftest { scope } => Ok(selftest::run(*scope)),
    }
}

fn emit(report: &Report, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(report)
    } else {
        serde_json::to_string(report)
    };
    // a closed pipe on stdout is not worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("reports serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            let argv: Vec<String> = std::env::args().skip(1).collect();
            let command = json!({ "argv": argv });
            let report = Report::assemble(command.clone(), &command, Err(Failure::Parse(e.kind().to_string())), 0);
            emit(&report, false);
            return ExitCode::from(3);
        }
    };
    let start = Instant::now();
    let (command, inputs) = describe(&cli.command);
    let outcome = run(&cli.command);
    if let Err(f) = &outcome {
        eprintln!("hnp: {}: {}", f.kind(), f.message());
    }
    let report = Report::assemble(command, &inputs, outcome, start.elapsed().as_millis());
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    emit(&report, cli.pretty);
    ExitCode::from(report.exit_code as u8)
}
