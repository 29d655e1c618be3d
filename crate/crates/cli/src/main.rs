use std::collections::BTreeMap;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shadowlab::colex::{initial_segment, SegmentMethod, SegmentSpec};
use shadowlab::combinatorics::{cascade_generalized, cascade_hm, cascade_standard};
use shadowlab::families::FamilySpec;
use shadowlab::setfamily::{ell_shadow, Family};
use shadowlab::verify::{
    check_kruskal_katona, check_theorem_1_11, check_theorem_1_3, check_theorem_1_6, cross_check_formulas,
    FormulaRanges, Mode, SearchOptions, Verdict, VerificationReport, DEFAULT_BUDGET, DEFAULT_SEED,
};
use shadowlab::Error;

#[derive(Parser)]
#[command(name = "shadowlab", version, about = "Shadows, colex segments and cascades of uniform set families")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Size of the ell-shadow of a family file.
    Shadow(ShadowArgs),
    /// Initial colex segment of a layer.
    Segment(SegmentArgs),
    /// Cascade representation of an integer.
    Cascade(CascadeArgs),
    /// Build a named family.
    Family(FamilyArgs),
    /// Run a verification check and emit its report.
    Verify(VerifyArgs),
    /// Compare the ell-shadows of two families.
    Compare(CompareArgs),
}

#[derive(Args)]
struct ShadowArgs {
    /// Family file (`-` for stdin).
    #[arg(long = "in")]
    input: String,
    #[arg(long, default_value_t = 1)]
    ell: u32,
    /// Also print the shadow family.
    #[arg(long)]
    print: bool,
}

#[derive(Args)]
struct SegmentArgs {
    /// Layer, e.g. `em:n=10,k=3,s=1,t=1` (may include `m=`).
    #[arg(long)]
    spec: String,
    #[arg(long)]
    m: Option<u128>,
    #[arg(long, default_value = "filter", value_parser = parse_method)]
    method: SegmentMethod,
    /// Print the size and shadow size instead of the members.
    #[arg(long)]
    count_only: bool,
}

#[derive(Args)]
struct CascadeArgs {
    #[arg(long)]
    m: u128,
    #[arg(long)]
    k: u32,
    #[arg(long, requires = "t")]
    s: Option<u32>,
    #[arg(long, requires = "s")]
    t: Option<u32>,
    /// Represent against the HM layers (needs --s and --t).
    #[arg(long, requires = "s")]
    hm: bool,
}

#[derive(Args)]
struct FamilyArgs {
    /// Family name with parameters, e.g. `em:n=10,k=3,s=3,t=2`.
    #[arg(long)]
    spec: String,
    #[arg(long)]
    count_only: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckId {
    Kk,
    T13,
    T16,
    T111,
    Formulas,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeName {
    Exhaustive,
    Shifted,
    Randomized,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckId,
    /// Parameters as `key=value,...`; individual flags take precedence.
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long, value_enum, default_value_t = ModeName::Shifted)]
    mode: ModeName,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Node cap per search subtree.
    #[arg(long, env = "SHADOWLAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads (0 = all cores); never changes the output.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct CompareArgs {
    /// Family file, family spec, or `segment:<layer>,m=..`.
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    #[arg(long, default_value_t = 1)]
    ell: u32,
}

fn parse_method(s: &str) -> Result<SegmentMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Check,
    Budget,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match cli.cmd {
        Cmd::Shadow(a) => shadow(&mut out, cli.format, a),
        Cmd::Segment(a) => segment(&mut out, cli.format, a),
        Cmd::Cascade(a) => cascade(&mut out, cli.format, a),
        Cmd::Family(a) => family(&mut out, cli.format, a),
        Cmd::Verify(a) => verify(&mut out, cli.format, a),
        Cmd::Compare(a) => compare(&mut out, cli.format, a),
    };
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(2),
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Budget) => ExitCode::from(3),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

/// Key/value records; text puts them on one line, csv as a header and a row.
fn emit(out: &mut Out<'_>, format: Format, text: &str, fields: Vec<(&str, Value)>) -> Result<(), Failure> {
    match format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Json => {
            let obj: serde_json::Map<String, Value> = fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&Value::Object(obj)).expect("json"))?;
        }
        Format::Csv => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<String> = fields
                .iter()
                .map(|(_, v)| match v {
                    Value::String(s) => s.replace('\n', " | "),
                    other => other.to_string(),
                })
                .collect();
            writeln!(out, "{}\n{}", keys.join(","), vals.join(","))?;
        }
    }
    Ok(())
}

fn read_family(path: &str) -> Result<Family, Failure> {
    let src = if path == "-" { io::read_to_string(io::stdin())? } else { std::fs::read_to_string(path)? };
    Family::parse_text(&src).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn shadow(out: &mut Out<'_>, format: Format, a: ShadowArgs) -> Result<(), Failure> {
    let f = read_family(&a.input)?;
    let sh = ell_shadow(&f, a.ell)?;
    let mut text = sh.len().to_string();
    let mut fields = vec![("ell", json!(a.ell)), ("size", json!(f.len())), ("shadow", json!(sh.len().to_string()))];
    if a.print {
        text.push('\n');
        text.push_str(sh.to_text().trim_end());
        fields.push(("family", json!(sh.to_text())));
    }
    emit(out, format, &text, fields)
}

fn segment_spec(spec: &str, m: Option<u128>) -> Result<SegmentSpec, Failure> {
    let src = match m {
        Some(m) => format!("{spec},m={m}"),
        None => spec.to_string(),
    };
    Ok(src.parse()?)
}

fn segment(out: &mut Out<'_>, format: Format, a: SegmentArgs) -> Result<(), Failure> {
    let spec = segment_spec(&a.spec, a.m)?;
    let seg = initial_segment(&spec, a.method)?;
    if a.count_only {
        let sh = if spec.k >= 1 { ell_shadow(&seg, 1)?.len() } else { 0 };
        let text = format!("size={} shadow={sh}", seg.len());
        return emit(
            out,
            format,
            &text,
            vec![("spec", json!(spec.to_string())), ("size", json!(seg.len())), ("shadow", json!(sh))],
        );
    }
    match format {
        Format::Text => write!(out, "{}", seg.to_text())?,
        _ => emit(
            out,
            format,
            "",
            vec![("spec", json!(spec.to_string())), ("size", json!(seg.len())), ("family", json!(seg.to_text()))],
        )?,
    }
    Ok(())
}

fn cascade(out: &mut Out<'_>, format: Format, a: CascadeArgs) -> Result<(), Failure> {
    let rep = match (a.s, a.t, a.hm) {
        (Some(s), Some(t), true) => cascade_hm(a.m, a.k, s, t)?,
        (Some(s), Some(t), false) => cascade_generalized(a.m, a.k, s, t)?,
        _ => cascade_standard(a.m, a.k)?,
    };
    let value = rep.evaluate()?;
    let text = format!("{rep} value={value}");
    let fields = vec![
        ("restriction", serde_json::to_value(rep.restriction).expect("json")),
        ("k", json!(rep.k)),
        ("h", json!(rep.h)),
        ("a", json!(rep.terms())),
        ("value", json!(value.to_string())),
    ];
    emit(out, format, &text, fields)
}

fn family(out: &mut Out<'_>, format: Format, a: FamilyArgs) -> Result<(), Failure> {
    let spec: FamilySpec = a.spec.parse()?;
    if a.count_only {
        let size = spec.size()?;
        return emit(
            out,
            format,
            &size.to_string(),
            vec![("spec", json!(spec.to_string())), ("size", json!(size.to_string()))],
        );
    }
    let f = spec.build()?;
    match format {
        Format::Text => write!(out, "{}", f.to_text())?,
        _ => emit(
            out,
            format,
            "",
            vec![("spec", json!(spec.to_string())), ("size", json!(f.len())), ("family", json!(f.to_text()))],
        )?,
    }
    Ok(())
}

fn param_map(src: Option<&str>) -> Result<BTreeMap<String, u64>, Failure> {
    let mut map = BTreeMap::new();
    for item in src.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Failure::Usage(format!("bad parameter {item:?}")))?;
        let v = v.trim().parse().map_err(|_| Failure::Usage(format!("bad value in {item:?}")))?;
        map.insert(k.trim().to_string(), v);
    }
    Ok(map)
}

fn verify(out: &mut Out<'_>, format: Format, a: VerifyArgs) -> Result<(), Failure> {
    let mut p = param_map(a.params.as_deref())?;
    for (key, flag) in [("n", a.n), ("k", a.k), ("t", a.t), ("s", a.s), ("ell", a.ell)] {
        if let Some(v) = flag {
            p.insert(key.to_string(), v as u64);
        }
    }
    let get = |key: &str| -> Result<u32, Failure> {
        let v = p.get(key).ok_or_else(|| Failure::Usage(format!("missing parameter {key}")))?;
        u32::try_from(*v).map_err(|_| Failure::Usage(format!("{key} out of range")))
    };
    let ell = || p.get("ell").map_or(Ok(1), |_| get("ell"));
    let mode = match a.mode {
        ModeName::Exhaustive => Mode::Exhaustive,
        ModeName::Shifted => Mode::Shifted,
        ModeName::Randomized => Mode::Randomized { seed: a.seed, trials: a.trials },
    };
    let opts = SearchOptions { budget: a.budget, jobs: a.jobs };
    let report = match a.check {
        CheckId::Kk => check_kruskal_katona(get("n")?, get("k")?, ell()?, mode, &opts)?,
        CheckId::T13 => check_theorem_1_3(get("n")?, get("k")?, ell()?, mode, &opts)?,
        CheckId::T16 => check_theorem_1_6(get("n")?, get("k")?, get("t")?, ell()?, mode, &opts)?,
        CheckId::T111 => check_theorem_1_11(get("n")?, get("k")?, get("s")?, mode, &opts)?,
        CheckId::Formulas => {
            let d = FormulaRanges::default();
            let or = |key: &str, dflt: u32| p.get(key).map_or(Ok(dflt), |_| get(key));
            let ranges = FormulaRanges {
                n_max: or("n_max", d.n_max)?,
                k_max: or("k_max", d.k_max)?,
                s_max: or("s_max", d.s_max)?,
                hm_t_max: or("hm_t_max", d.hm_t_max)?,
                samples: p.get("samples").copied().unwrap_or(d.samples),
                seed: a.seed,
            };
            cross_check_formulas(&ranges)?
        }
    };
    write_report(out, format, &report)?;
    if report.verdict == Verdict::Fail {
        Err(Failure::Check)
    } else if report.quantities.get("budget_exceeded").is_some_and(|v| v == "true") {
        Err(Failure::Budget)
    } else {
        Ok(())
    }
}

fn write_report(out: &mut Out<'_>, format: Format, report: &VerificationReport) -> Result<(), Failure> {
    match format {
        Format::Text => write!(out, "{}", report.to_text())?,
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Csv => write!(out, "{}", report.to_csv())?,
    }
    Ok(())
}

/// A family file, a `segment:` spec, or a named family.
fn operand(src: &str) -> Result<Family, Failure> {
    if Path::new(src).is_file() || src == "-" {
        return read_family(src);
    }
    if src.trim_start().starts_with("segment:") {
        let spec: SegmentSpec = src.parse()?;
        return Ok(initial_segment(&spec, SegmentMethod::Filter)?);
    }
    let spec: FamilySpec = src.parse()?;
    Ok(spec.build()?)
}

fn compare(out: &mut Out<'_>, format: Format, a: CompareArgs) -> Result<(), Failure> {
    let left = ell_shadow(&operand(&a.left)?, a.ell)?.len();
    let right = ell_shadow(&operand(&a.right)?, a.ell)?.len();
    let rel = match left.cmp(&right) {
        std::cmp::Ordering::Less => "<",
        std::cmp::Ordering::Equal => "=",
        std::cmp::Ordering::Greater => ">",
    };
    let text = format!("{left} {rel} {right}");
    let fields = vec![
        ("ell", json!(a.ell)),
        ("left", json!(left.to_string())),
        ("right", json!(right.to_string())),
        ("relation", json!(rel)),
    ];
    emit(out, format, &text, fields)
}
