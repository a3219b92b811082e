//! Command-line front end. Every command builds one JSON report; markdown
//! output is rendered from that report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::bibundle::{BisetData, PrincipalBiset};
use crate::cohomology::{
    bar_differential, cohomology_group_with, describe_factors, total_cohomology, ActionData,
    Cochain, CoverData, DoubleComplex, FiniteAbelianGroup, GAction, ModuleData, SimplicialCover,
};
use crate::error::{Error, Result};
use crate::extension::{
    check_extension, classify_extensions, extension_from_cocycle, is_central, skeletal_extension,
};
use crate::groupoid::{FiniteGroupoid, GroupData, GroupTable, GroupoidTable};
use crate::report::Report;
use crate::twogroup::{
    is_two_group, realize_skeletal_unchecked, verify_coherence, SkeletalData, SkeletalTwoGroup,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

/// Random cocycles checked by `classify` when there are too many to enumerate.
pub const CLASSIFY_SAMPLES: usize = 50;

#[derive(Parser, Debug)]
#[command(
    name = "twogroups",
    version,
    about = "Finite 2-groups, bisets and central extensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group cohomology, or total cohomology over a cover.
    Cohomology(CohomologyArgs),
    /// Central extensions of a group by [pt/A], up to equivalence.
    Classify(ClassifyArgs),
    /// Checks the invariants of a skeletal 2-group, biset, group or cocycle.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct Inputs {
    #[arg(long)]
    pub group: Option<PathBuf>,
    #[arg(long)]
    pub coeff: Option<PathBuf>,
    /// Action of the group on the coefficients; trivial when absent.
    #[arg(long)]
    pub action: Option<PathBuf>,
    #[arg(long)]
    pub cover: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub degree: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub coeff: PathBuf,
    /// Largest morphism search space `|A|^((|G|-1)^2)` attempted.
    #[arg(long, default_value_t = crate::extension::DEFAULT_MAX_SEARCH)]
    pub max_search: u128,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A skeletal 2-group, biset, group or groupoid file.
    pub file: Option<PathBuf>,
    #[command(flatten)]
    pub inputs: Inputs,
    /// A bar cochain on the group, checked together with --group and --coeff.
    #[arg(long)]
    pub cochain: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[command(flatten)]
    pub output: Output,
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_MALFORMED
            } else {
                EXIT_OK
            };
        }
    };
    let (result, output) = match &cli.command {
        Command::Cohomology(a) => (cmd_cohomology(a), &a.output),
        Command::Classify(a) => (cmd_classify(a), &a.output),
        Command::Verify(a) => (cmd_verify(a), &a.output),
    };
    match result {
        Ok(report) => {
            let code = if report["pass"].as_bool().unwrap_or(true) {
                EXIT_OK
            } else {
                EXIT_FAILED
            };
            match emit(&report, output) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_MALFORMED
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed { .. } | Error::Invalid { .. } => EXIT_MALFORMED,
        Error::Bound(_) => EXIT_BOUND,
        Error::NoSolution(_) => EXIT_FAILED,
    }
}

fn emit(report: &Value, output: &Output) -> std::io::Result<()> {
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Markdown => markdown(report),
    };
    match &output.out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bad = |detail: String| Error::Malformed {
        field: path.display().to_string(),
        detail,
    };
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    check_schema(path, &v)?;
    serde_json::from_value(v).map_err(|e| bad(e.to_string()))
}

fn check_schema(path: &Path, v: &Value) -> Result<()> {
    match v.get("schema") {
        None => Ok(()),
        Some(s) if s.as_u64() == Some(1) => Ok(()),
        Some(s) => Err(Error::Malformed {
            field: format!("{}: schema", path.display()),
            detail: format!("unsupported schema {s}, expected 1"),
        }),
    }
}

fn require<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| Error::Malformed {
        field: flag.into(),
        detail: "required".into(),
    })
}

fn load_group(p: &Path) -> Result<GroupTable> {
    GroupTable::from_data(&read_json::<GroupData>(p)?)
}

fn load_coeff(p: &Path) -> Result<FiniteAbelianGroup> {
    FiniteAbelianGroup::from_data(&read_json::<ModuleData>(p)?)
}

fn load_action(p: Option<&Path>, g: &GroupTable, a: &FiniteAbelianGroup) -> Result<GAction> {
    match p {
        Some(p) => GAction::from_data(g, a, &read_json::<ActionData>(p)?),
        None => Ok(GAction::trivial(g, a)),
    }
}

fn load_base(inputs: &Inputs) -> Result<(GroupTable, FiniteAbelianGroup, GAction)> {
    let g = load_group(require(&inputs.group, "--group")?)?;
    let a = load_coeff(require(&inputs.coeff, "--coeff")?)?;
    let rho = load_action(inputs.action.as_deref(), &g, &a)?;
    Ok((g, a, rho))
}

fn report_json(r: &Report) -> Value {
    Value::Array(
        r.outcomes
            .iter()
            .map(|o| json!({"check": o.name, "checked": o.checked, "pass": o.witness.is_none(), "witness": o.witness}))
            .collect(),
    )
}

pub fn cmd_cohomology(args: &CohomologyArgs) -> Result<Value> {
    let (g, a, rho) = load_base(&args.inputs)?;
    let n = args.degree;
    match &args.inputs.cover {
        None => {
            let h = cohomology_group_with(&g, &a, &rho, n, true)?;
            let factors = h.invariant_factors();
            Ok(json!({
                "schema": 1,
                "command": "cohomology",
                "complex": "bar",
                "degree": n,
                "invariant_factors": factors,
                "order": h.order(),
                "group": format!("H^{n} = {}", describe_factors(&factors)),
                "generators": h.generators().iter().map(|c| c.to_json(&g)).collect::<Vec<_>>(),
                "pass": true,
            }))
        }
        Some(p) => {
            if n == 0 {
                return Err(Error::Malformed {
                    field: "--degree".into(),
                    detail: "total degree must be at least 1".into(),
                });
            }
            let cover = SimplicialCover::from_data(&g, &read_json::<CoverData>(p)?)?;
            let dc = DoubleComplex::new(&cover, &a, &rho, n, n + 1)?;
            let h = total_cohomology(&dc, n)?;
            let factors = h.invariant_factors();
            let reps: Vec<Value> = h
                .representatives(&dc)
                .iter()
                .map(|t| json!(t.parts))
                .collect();
            Ok(json!({
                "schema": 1,
                "command": "cohomology",
                "complex": "cover",
                "degree": n,
                "invariant_factors": factors,
                "order": h.order(),
                "group": format!("H^{n} = {}", describe_factors(&factors)),
                "representatives": reps,
                "pass": true,
            }))
        }
    }
}

pub fn cmd_classify(args: &ClassifyArgs) -> Result<Value> {
    let g = load_group(&args.group)?;
    let a = load_coeff(&args.coeff)?;
    let c = classify_extensions(&g, &a, args.max_search, CLASSIFY_SAMPLES, args.output.seed)?;
    let classes: Vec<Value> = c
        .classes
        .iter()
        .enumerate()
        .map(|(i, k)| {
            json!({
                "index": i,
                "h3_class": k.h3_class,
                "representative": k.representative.to_json(&g),
                "members": k.members,
                "pass": k.transcript.ok(),
                "transcript": report_json(&k.transcript),
            })
        })
        .collect();
    let pass =
        c.report.ok() && c.classes.iter().all(|k| k.transcript.ok()) && c.n_classes() == c.h3_order;
    Ok(json!({
        "schema": 1,
        "command": "classify",
        "h3": describe_factors(&c.h3_factors),
        "h3_order": c.h3_order,
        "n_classes": c.n_classes(),
        "classes": classes,
        "cocycles_checked": c.cocycles_checked,
        "exhaustive": c.exhaustive,
        "seed": args.output.seed,
        "max_search": args.max_search.to_string(),
        "checks": report_json(&c.report),
        "pass": pass,
    }))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Value> {
    if let Some(p) = &args.file {
        let v: Value = read_json(p)?;
        let kind = if v.get("alpha").is_some() {
            "skeletal"
        } else if v.get("tau").is_some() {
            "biset"
        } else if v.get("mul").is_some() {
            "group"
        } else if v.get("compose").is_some() {
            "groupoid"
        } else {
            return Err(Error::Malformed {
                field: p.display().to_string(),
                detail: "unrecognized file kind".into(),
            });
        };
        let parse = |e: serde_json::Error| Error::Malformed {
            field: p.display().to_string(),
            detail: e.to_string(),
        };
        let report = match kind {
            "skeletal" => verify_skeletal(&SkeletalTwoGroup::from_data(
                &serde_json::from_value::<SkeletalData>(v).map_err(parse)?,
            )?),
            "biset" => verify_biset(p, &serde_json::from_value::<BisetData>(v).map_err(parse)?)?,
            "group" => {
                let mut r = Report::new();
                let w =
                    GroupTable::from_data(&serde_json::from_value::<GroupData>(v).map_err(parse)?)
                        .err();
                r.record("group axioms", 1, w.map(|_| vec![]));
                r
            }
            _ => {
                let t: GroupoidTable = serde_json::from_value(v).map_err(parse)?;
                let mut r = Report::new();
                let v = crate::groupoid::validate_groupoid(&t);
                r.record("groupoid axioms", 1, v.first().map(|x| x.witness.clone()));
                r
            }
        };
        return Ok(verdict("verify", kind, &report));
    }
    let (g, a, rho) = load_base(&args.inputs)?;
    let cp = require(&args.cochain, "--cochain")?;
    let raw: Value = read_json(cp)?;
    let values = raw.get("values").cloned().unwrap_or(raw);
    let c = Cochain::from_json(&g, &a, args.degree, &values)?;
    let mut r = Report::new();
    let d = bar_differential(&c, &g, &a, &rho);
    let failure = d
        .values
        .iter()
        .position(|&x| x != 0)
        .map(|i| crate::cohomology::bar::tuple_of(g.order(), args.degree + 1, i));
    r.record("cocycle", d.values.len(), failure.clone());
    r.record(
        "normalized",
        c.values.len(),
        (!c.is_normalized(&g)).then(Vec::new),
    );
    if args.degree == 3 && failure.is_none() && c.is_normalized(&g) && rho.is_trivial() {
        let cover = match &args.inputs.cover {
            Some(p) => SimplicialCover::from_data(&g, &read_json::<CoverData>(p)?)?,
            None => SimplicialCover::identity(&g, 4),
        };
        let dc = DoubleComplex::new(&cover, &a, &rho, 3, 4)?;
        let e = extension_from_cocycle(&dc, &dc.include_bar(&c))?;
        r.merge("extension", check_extension(&e));
        let central = is_central(&e)?;
        r.record("extension: central", 1, (!central.central).then(Vec::new));
    }
    Ok(verdict("verify", "cochain", &r))
}

fn verify_skeletal(s: &SkeletalTwoGroup) -> Report {
    let md = realize_skeletal_unchecked(s);
    let mut r = Report::new();
    r.record("cocycle", 1, s.cocycle_failure());
    r.merge("", verify_coherence(&md));
    r.record("2-group", 1, is_two_group(&md).witness.map(|v| v.witness));
    if s.cocycle_failure().is_none() {
        match skeletal_extension(s) {
            Ok(e) => {
                r.merge("extension", check_extension(&e));
                if let Ok(c) = is_central(&e) {
                    r.record(
                        "central iff action trivial",
                        1,
                        (c.central != s.rho.is_trivial()).then(Vec::new),
                    );
                }
            }
            Err(_) => r.record("extension", 1, Some(vec![])),
        }
    }
    r
}

fn verify_biset(path: &Path, d: &BisetData) -> Result<Report> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let load = |name: &Option<String>, field: &str| -> Result<Arc<FiniteGroupoid>> {
        let n = name.as_ref().ok_or_else(|| Error::Malformed {
            field: field.into(),
            detail: "groupoid path required".into(),
        })?;
        Ok(Arc::new(FiniteGroupoid::from_table(&read_json::<
            GroupoidTable,
        >(
            &dir.join(n)
        )?)?))
    };
    let (src, tgt) = (load(&d.source, "source")?, load(&d.target, "target")?);
    let p = PrincipalBiset::from_data(d, src, tgt)?;
    let mut r = p.validate();
    let m = p.morita_failure();
    r.record("morita", 1, m.map(|v| v.witness));
    Ok(r)
}

fn verdict(command: &str, kind: &str, r: &Report) -> Value {
    json!({
        "schema": 1,
        "command": command,
        "input": kind,
        "checks": report_json(r),
        "pass": r.ok(),
    })
}

/// Markdown view of a report.
pub fn markdown(v: &Value) -> String {
    let mut s = String::new();
    let cmd = v["command"].as_str().unwrap_or("");
    let _ = writeln!(s, "# {cmd}\n");
    if let Some(h) = v.get("group").and_then(Value::as_str) {
        let _ = writeln!(s, "{h}\n");
    }
    if cmd == "classify" {
        let _ = writeln!(
            s,
            "H^3 = {} ({} classes)\n",
            v["h3"].as_str().unwrap_or(""),
            v["n_classes"]
        );
        let _ = writeln!(s, "| class | H^3 coordinates | members | checks |");
        let _ = writeln!(s, "|---|---|---|---|");
        for c in v["classes"].as_array().into_iter().flatten() {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                c["index"],
                c["h3_class"],
                c["members"],
                if c["pass"].as_bool() == Some(true) {
                    "pass"
                } else {
                    "FAIL"
                }
            );
        }
        let _ = writeln!(s);
    }
    if let Some(checks) = v.get("checks").and_then(Value::as_array) {
        let _ = writeln!(s, "| check | checked | verdict | witness |");
        let _ = writeln!(s, "|---|---|---|---|");
        for c in checks {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                c["check"].as_str().unwrap_or(""),
                c["checked"],
                if c["pass"].as_bool() == Some(true) {
                    "pass"
                } else {
                    "FAIL"
                },
                if c["witness"].is_null() {
                    String::new()
                } else {
                    c["witness"].to_string()
                }
            );
        }
        let _ = writeln!(s);
    }
    let _ = writeln!(
        s,
        "result: {}",
        if v["pass"].as_bool() == Some(true) {
            "pass"
        } else {
            "FAIL"
        }
    );
    s
}
