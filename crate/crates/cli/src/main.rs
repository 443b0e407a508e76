use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use klrtrace_core::bubbles::bubble_suite;
use klrtrace_core::cartan::{box_window, cyclicity_check, default_scalars, solve_pivotal, CartanDatum, ScalarChoice};
use klrtrace_core::cyclo::CyclotomicFamily;
use klrtrace_core::hh0::report;
use klrtrace_core::klr::KlrAlgebra;
use klrtrace_core::rho::{chern_ranks, divided_power_check, span_check_free, verify_trace_action, TraceRep};
use klrtrace_core::symfunc::{grassmannian_defect, power_sum_form, Basis, PowerSumForm, SymElement};
use klrtrace_core::{Error, Q};

#[derive(Parser)]
#[command(name = "klrtrace", version, about = "Exact checks for KLR algebras, cyclotomic quotients and their traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Cartan datum JSON; type A₁ when omitted
    #[arg(long)]
    cartan: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cache directory for cyclotomic quotients (KLRTRACE_CACHE wins)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetric function identities
    Sym {
        #[command(flatten)]
        common: Common,
        /// Check the truncated Grassmannian identity for D up to this bound
        #[arg(long)]
        grassmannian: Option<u32>,
        /// Check that the power-sum forms agree with p_r for r up to this bound
        #[arg(long)]
        power_sum: Option<u32>,
        /// Expression to rewrite, e.g. "h[2] - e[1,1]"
        #[arg(long)]
        expr: Option<String>,
        /// Target basis for --expr (h, e, p, m)
        #[arg(long, default_value = "h")]
        basis: char,
        #[arg(long, default_value_t = 10)]
        max_degree: u32,
    },
    /// Normal form self-checks of a free KLR algebra
    KlrCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value_t = 6)]
        max_degree: i32,
    },
    /// Build a cyclotomic quotient and print its graded dimension
    Cyclo {
        #[command(flatten)]
        common: Common,
        /// Highest weight in fundamental-weight coordinates, e.g. "1,1"
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value_t = 40)]
        max_degree: i32,
    },
    /// Trace, center and Chern rank of a cyclotomic quotient
    Hh0 {
        #[command(flatten)]
        common: Common,
        /// Highest weight in fundamental-weight coordinates, e.g. "1,1"
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value_t = 40)]
        max_degree: i32,
    },
    /// Grassmannian consistency and bubble slide checks
    Bubbles {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        max_dots: u32,
    },
    /// Trace representation against the local Weyl module
    Verify {
        #[command(flatten)]
        common: Common,
        /// Highest weight in fundamental-weight coordinates, e.g. "1,1"
        #[arg(long)]
        lambda: String,
        /// Largest parameter r, s in the relation suite
        #[arg(long, default_value_t = 2)]
        max_dots: u32,
        #[arg(long, default_value_t = 8)]
        max_degree: i32,
        #[arg(long, value_enum, default_value_t = Suite::TraceAction)]
        suite: Suite,
    },
    /// Solve the pivotal compatibility ratios on a box of weights
    Pivotal {
        #[command(flatten)]
        common: Common,
        /// Box center in fundamental-weight coordinates; zero when omitted
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    TraceAction,
    DividedPowers,
    Chern,
    Span,
    All,
}

enum Failure {
    Usage(String),
    Stabilization(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) | Error::InvalidDatum(_) | Error::NotDominant(_) => Failure::Usage(e.to_string()),
            Error::Stabilization(_) => Failure::Stabilization(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
        Err(Failure::Stabilization(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(1)
        }
    }
}

fn load_cartan(common: &Common) -> Result<(CartanDatum, ScalarChoice), Failure> {
    match &common.cartan {
        None => {
            let d = CartanDatum::type_a(1);
            let q = default_scalars(&d);
            Ok((d, q))
        }
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {}", p.display(), e)))?;
            Ok(CartanDatum::parse_config(&text)?)
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str, len: usize) -> Result<Vec<T>, Failure> {
    let v: Vec<T> = s
        .split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| Failure::Usage(format!("bad {} entry '{}'", what, x.trim()))))
        .collect::<Result<_, _>>()?;
    if v.len() != len {
        return Err(Failure::Usage(format!("{} needs {} entries, got {}", what, len, v.len())));
    }
    Ok(v)
}

fn family(common: &Common, d: &CartanDatum, q: &ScalarChoice, lambda: &str, dmax: i32) -> Result<CyclotomicFamily, Failure> {
    let fund: Vec<i64> = parse_list(lambda, "--lambda", d.rank())?;
    let fam = CyclotomicFamily::new(d, q, &d.dominant(&fund), dmax)?;
    let dir = std::env::var_os("KLRTRACE_CACHE").map(PathBuf::from).or_else(|| common.cache.clone());
    Ok(match dir {
        Some(dir) => fam.with_cache_dir(dir),
        None => fam,
    })
}

fn emit(out: Option<&Path>, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Other(e.to_string()))?;
    match out {
        Some(p) if p.extension().is_some_and(|e| e == "csv") => Err(Failure::Usage("CSV output is only available for verify".into())),
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| Failure::Other(format!("{}: {}", p.display(), e))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{}", text) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Other(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn degree_keys(m: BTreeMap<i32, usize>) -> BTreeMap<String, usize> {
    m.into_iter().map(|(d, c)| (d.to_string(), c)).collect()
}

fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Sym { common, grassmannian, power_sum, expr, basis, max_degree } => {
            let mut checks = BTreeMap::new();
            let mut ok = true;
            if let Some(dmax) = grassmannian {
                let bad: Vec<u32> = (0..=dmax).filter(|&d| !grassmannian_defect::<Q>(d).is_zero()).collect();
                ok &= bad.is_empty();
                checks.insert("grassmannian", json!({ "max_degree": dmax, "failing_degrees": bad }));
            }
            if let Some(rmax) = power_sum {
                let mut bad = Vec::new();
                for r in 0..=rmax {
                    let p = SymElement::<Q>::p(r, r);
                    let forms = [PowerSumForm::APlusOne, PowerSumForm::MinusBPlusOne, PowerSumForm::MinusA];
                    // at r = 0 the forms differ by the sign convention for p_0
                    if r > 0 && forms.iter().any(|&f| power_sum_form::<Q>(f, r) != p) {
                        bad.push(r);
                    }
                }
                ok &= bad.is_empty();
                checks.insert("power_sum", json!({ "max_r": rmax, "failing_r": bad }));
            }
            if let Some(e) = expr {
                let b = Basis::from_tag(basis).ok_or_else(|| Failure::Usage(format!("unknown basis '{}'", basis)))?;
                let x = SymElement::<Q>::parse(&e, max_degree)?;
                checks.insert("expr", json!({ "input": e, "basis": basis.to_string(), "result": x.to_text(b)? }));
            }
            if checks.is_empty() {
                return Err(Failure::Usage("nothing to do: pass --grassmannian, --power-sum or --expr".into()));
            }
            emit(common.out.as_deref(), &json!({ "passed": ok, "checks": checks }))?;
            Ok(ok)
        }
        Command::KlrCheck { common, nu, max_degree } => {
            let (d, q) = load_cartan(&common)?;
            let nu: Vec<u32> = parse_list(&nu, "--nu", d.rank())?;
            let alg = KlrAlgebra::new(&d, &q, &nu)?;
            let pairs = alg.critical_pair_check();
            let rels = alg.relation_check();
            let generated = alg.generated_dims(max_degree);
            let enumerated = alg.enumerated_dims(max_degree);
            let ok = pairs.passed() && rels.passed() && generated == enumerated;
            let report = json!({
                "nu": nu,
                "critical_pairs": { "checked": pairs.checked, "failures": pairs.failures },
                "relations": { "checked": rels.checked, "failures": rels.failures },
                "generated_dims": degree_keys(generated),
                "enumerated_dims": degree_keys(enumerated),
                "passed": ok,
            });
            emit(common.out.as_deref(), &report)?;
            Ok(ok)
        }
        Command::Cyclo { common, lambda, nu, max_degree } => {
            let (d, q) = load_cartan(&common)?;
            let fam = family(&common, &d, &q, &lambda, max_degree)?;
            let nu: Vec<u32> = parse_list(&nu, "--nu", d.rank())?;
            let a = fam.get(&nu)?;
            let report = json!({
                "lambda": fam.lambda().fund_coords(),
                "nu": nu,
                "dim": a.dim(),
                "graded_dims": degree_keys(a.algebra().graded_dims()),
                "cache_key": a.cache_key(),
            });
            emit(common.out.as_deref(), &report)?;
            Ok(true)
        }
        Command::Hh0 { common, lambda, nu, max_degree } => {
            let (d, q) = load_cartan(&common)?;
            let fam = family(&common, &d, &q, &lambda, max_degree)?;
            let nu: Vec<u32> = parse_list(&nu, "--nu", d.rank())?;
            let a = fam.get(&nu)?;
            let name = format!("R^({})_({})", lambda, nu.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
            let r = report(&name, a.algebra())?;
            emit(common.out.as_deref(), &r)?;
            Ok(true)
        }
        Command::Bubbles { common, max_dots } => {
            let (d, q) = load_cartan(&common)?;
            let results = bubble_suite(&d, &q, max_dots)?;
            let ok = results.iter().all(|r| r.passed);
            let failures: Vec<_> = results.iter().filter(|r| !r.passed).collect();
            emit(common.out.as_deref(), &json!({ "checked": results.len(), "failures": failures, "passed": ok }))?;
            Ok(ok)
        }
        Command::Verify { common, lambda, max_dots, max_degree, suite } => {
            let (d, q) = load_cartan(&common)?;
            let fam = family(&common, &d, &q, &lambda, 40)?;
            let tr = TraceRep::build(&fam, 2 * max_dots)?;
            verify(&common, &d, &q, &tr, max_dots, max_degree, suite)
        }
        Command::Pivotal { common, lambda, radius } => {
            let (d, q) = load_cartan(&common)?;
            let center = match lambda {
                Some(l) => d.dominant(&parse_list::<i64>(&l, "--lambda", d.rank())?),
                None => d.zero_weight(),
            };
            let window = box_window(&d, &center, radius);
            let cyc: BTreeMap<String, bool> = cyclicity_check(&d, &q).into_iter().map(|((i, j), ok)| (format!("{},{}", d.name(i), d.name(j)), ok)).collect();
            let mut report = json!({ "window_size": window.len(), "cyclicity": cyc });
            let ok = match solve_pivotal(&d, &q, &window) {
                Ok(p) => {
                    let holds = p.ratios_hold(&d, &q);
                    report["ratios_hold"] = Value::Bool(holds);
                    holds
                }
                Err(e @ Error::InconsistentWindow(_)) => {
                    report["error"] = Value::String(e.to_string());
                    false
                }
                Err(e) => return Err(e.into()),
            };
            let ok = ok && cyc.values().all(|&b| b);
            report["passed"] = Value::Bool(ok);
            emit(common.out.as_deref(), &report)?;
            Ok(ok)
        }
    }
}

fn verify(common: &Common, d: &CartanDatum, q: &ScalarChoice, tr: &TraceRep, r_max: u32, dmax: i32, suite: Suite) -> Result<bool, Failure> {
    let mut out = serde_json::Map::new();
    let mut ok = true;
    let want = |s: Suite| suite == s || suite == Suite::All;
    let mut rows = Vec::new();
    if want(Suite::TraceAction) {
        let (report, _) = verify_trace_action(tr, r_max)?;
        ok &= report.passed;
        rows = report.weights.clone();
        out.insert("trace_action".into(), serde_json::to_value(&report).map_err(|e| Failure::Other(e.to_string()))?);
    }
    if want(Suite::DividedPowers) {
        let mut checks = Vec::new();
        for i in 0..d.rank() {
            for n in 1..=3 {
                for r in 0..=r_max {
                    let pass = divided_power_check(tr, i, r, n)?;
                    ok &= pass;
                    checks.push(json!({ "node": d.name(i), "n": n, "r": r, "passed": pass }));
                }
            }
        }
        out.insert("divided_powers".into(), Value::Array(checks));
    }
    if want(Suite::Chern) {
        let ranks: Vec<Value> = chern_ranks(tr)?.into_iter().map(|(nu, rank, dim)| json!({ "nu": nu, "chern_rank": rank, "trace_dim": dim })).collect();
        out.insert("chern".into(), Value::Array(ranks));
    }
    if want(Suite::Span) {
        let mut spans = Vec::new();
        for b in tr.blocks() {
            if b.nu.iter().sum::<u32>() == 0 || b.nu.iter().sum::<u32>() > 2 {
                continue;
            }
            let r = span_check_free(&KlrAlgebra::new(d, q, &b.nu)?, dmax);
            ok &= r.passed;
            spans.push(serde_json::to_value(&r).map_err(|e| Failure::Other(e.to_string()))?);
        }
        out.insert("span".into(), Value::Array(spans));
    }
    out.insert("total_dim".into(), json!(tr.dim()));
    out.insert("passed".into(), Value::Bool(ok));
    match common.out.as_deref() {
        Some(p) if p.extension().is_some_and(|e| e == "csv") => {
            let mut w = csv::Writer::from_path(p).map_err(|e| Failure::Other(e.to_string()))?;
            w.write_record(["nu", "weight", "trace_dim", "oracle_dim"]).map_err(|e| Failure::Other(e.to_string()))?;
            for r in &rows {
                let join = |v: Vec<String>| v.join(" ");
                w.write_record([
                    join(r.nu.iter().map(|x| x.to_string()).collect()),
                    join(r.weight.iter().map(|x| x.to_string()).collect()),
                    r.trace_dim.to_string(),
                    r.oracle_dim.to_string(),
                ])
                .map_err(|e| Failure::Other(e.to_string()))?;
            }
            w.flush().map_err(|e| Failure::Other(e.to_string()))?;
        }
        other => emit(other, &Value::Object(out))?,
    }
    Ok(ok)
}
