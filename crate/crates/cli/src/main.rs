mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use logres::algebra::PiScalar;
use logres::geometry::{self, GeometryError};
use logres::logexpand::{res_log, zeta_at_zero, LogError, Method};
use logres::residue::TraceKind;
use logres::selftest::{self, SelftestConfig};
use logres::symbols::ClassicalSymbol;
use serde::Serialize;

use input::{read_json, CurvatureFile, GaugeFile, InputError, SymbolFile};
use report::{Report, RouteRow, Value};

const EXIT_INPUT: u8 = 2;
const EXIT_ASSERTION: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "logres", version, about = "Exact logarithmic residue densities of generalised Laplacians")]
struct Cli {
    /// Print a machine-readable JSON document instead of the table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Ch,
    Taylor,
    Seeley,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Ch => vec![Method::Ch],
            MethodArg::Taylor => vec![Method::Taylor],
            MethodArg::Seeley => vec![Method::Seeley],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TraceArg {
    Tr,
    Str,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Residue of log Q for Q = |xi|^2 + (lower-order terms read from a file).
    Residue {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "tr")]
        trace: TraceArg,
        /// Lowest degree of the log symbol to compute; must be at most -n.
        #[arg(long, allow_hyphen_values = true)]
        floor: Option<i32>,
    },
    /// Index density of the spin Dirac operator in dimension 4 from a curvature tensor.
    #[command(name = "index-dirac4")]
    IndexDirac4 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        /// Also write the generated lower-order symbol in `residue` input format.
        #[arg(long)]
        emit_symbol: Option<PathBuf>,
    },
    /// Index density of a twisted Dirac operator on flat space from gauge data.
    #[command(name = "index-flat")]
    IndexFlat {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        #[arg(long)]
        emit_symbol: Option<PathBuf>,
    },
    /// Run the seeded invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Negative control: corrupt the sphere-moment table.
        #[arg(long, hide = true)]
        tamper_moments: bool,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<LogError> for Failure {
    fn from(e: LogError) -> Self {
        match e {
            LogError::Symbol(_) | LogError::Residue(_) | LogError::LieDegree(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Log(inner) => inner.into(),
            GeometryError::Residue(_) | GeometryError::Symbol(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn emit(json: bool, report: &Report) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serialises"));
    } else {
        print!("{}", report.render());
    }
}

fn verdict(report: &Report) -> ExitCode {
    if !report.routes_agree || report.comparison == Some(false) {
        ExitCode::from(EXIT_ASSERTION)
    } else {
        ExitCode::SUCCESS
    }
}

fn run_routes(
    q: &ClassicalSymbol,
    n: usize,
    methods: &[Method],
    kind: TraceKind,
) -> Result<Vec<(Method, PiScalar)>, Failure> {
    methods.iter().map(|&m| Ok((m, res_log(q, n, m, kind)?))).collect()
}

fn all_equal(results: &[(Method, PiScalar)]) -> bool {
    results.windows(2).all(|w| w[0].1 == w[1].1)
}

fn write_symbol(path: &PathBuf, q: &ClassicalSymbol) -> Result<(), Failure> {
    let doc = serde_json::to_string_pretty(&SymbolFile::from_symbol(q)).expect("symbol serialises");
    std::fs::write(path, doc + "\n").map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn cmd_residue(json: bool, input: &PathBuf, method: MethodArg, trace: TraceArg, floor: Option<i32>) -> Result<ExitCode, Failure> {
    let file: SymbolFile = read_json(input)?;
    let q = file.to_symbol()?;
    let n = file.n;
    let mut notes = Vec::new();
    if let Some(f) = floor {
        if f > -(n as i32) {
            return Err(Failure::Input(format!("--floor {f} is above -n = {}; the residue needs degree -n", -(n as i32))));
        }
        if f < -(n as i32) {
            notes.push(format!("degrees below {} do not enter the residue; floor {f} treated as {}", -(n as i32), -(n as i32)));
        }
    }
    let kind = match trace {
        TraceArg::Tr => TraceKind::Tr,
        TraceArg::Str => TraceKind::Str,
    };
    let results = run_routes(&q, n, &method.methods(), kind)?;
    let routes = results
        .iter()
        .map(|(m, v)| RouteRow {
            method: m.to_string(),
            values: vec![
                (format!("res_log ({kind})"), Value::new(v)),
                ("zeta(0)".to_string(), Value::new(&zeta_at_zero(v))),
            ],
        })
        .collect();
    let report = Report {
        command: "residue".into(),
        n,
        routes,
        comparator: None,
        routes_agree: all_equal(&results),
        comparison: None,
        notes,
    };
    emit(json, &report);
    Ok(verdict(&report))
}

fn index_report(command: &str, n: usize, reps: Vec<geometry::IndexReport>, notes: Vec<String>) -> Report {
    let agree = reps.windows(2).all(|w| w[0].sres_log == w[1].sres_log);
    let comparator = reps.first().map(|r| Value::new(&r.comparator));
    let holds = reps.iter().all(|r| r.holds);
    Report {
        command: command.into(),
        n,
        routes: reps
            .iter()
            .map(|r| RouteRow {
                method: r.method.to_string(),
                values: vec![
                    ("sres_log".to_string(), Value::new(&r.sres_log)),
                    ("index_density".to_string(), Value::new(&r.index_density)),
                ],
            })
            .collect(),
        comparator,
        routes_agree: agree,
        comparison: Some(holds),
        notes,
    }
}

fn cmd_index_dirac4(json: bool, input: &PathBuf, method: MethodArg, emit_symbol: Option<&PathBuf>) -> Result<ExitCode, Failure> {
    let file: CurvatureFile = read_json(input)?;
    if file.n != 4 {
        return Err(Failure::Input(format!("index-dirac4 needs n = 4, got {}", file.n)));
    }
    let r = file.to_tensor()?;
    if let Some(path) = emit_symbol {
        write_symbol(path, &geometry::dirac_squared_symbol(&r, 4)?)?;
    }
    let reps = method
        .methods()
        .into_iter()
        .map(|m| geometry::index_pure_dirac4(&r, m))
        .collect::<Result<Vec<_>, _>>()?;
    let p = geometry::pontryagin_density(&r)?;
    let notes = vec![format!("pontryagin_density = {}", logres::algebra::fmt_rational(&p))];
    let report = index_report("index-dirac4", 4, reps, notes);
    emit(json, &report);
    Ok(verdict(&report))
}

fn cmd_index_flat(json: bool, input: &PathBuf, method: MethodArg, emit_symbol: Option<&PathBuf>) -> Result<ExitCode, Failure> {
    let file: GaugeFile = read_json(input)?;
    let g = file.to_field()?;
    if !(g.n() == 2 || g.n() == 4) {
        return Err(Failure::Input(format!("index-flat supports n = 2 or 4, got {}", g.n())));
    }
    if let Some(path) = emit_symbol {
        write_symbol(path, &geometry::twisted_flat_symbol(&g))?;
    }
    let reps = method
        .methods()
        .into_iter()
        .map(|m| geometry::index_flat_twisted(&g, m))
        .collect::<Result<Vec<_>, _>>()?;
    let ch = geometry::chern_density(&g.curvature(), g.n() / 2)?;
    let notes = vec![format!("chern_density = {ch}")];
    let report = index_report("index-flat", g.n(), reps, notes);
    emit(json, &report);
    Ok(verdict(&report))
}

#[derive(Serialize)]
struct SelftestJson {
    seed: u64,
    passed: bool,
    checks: Vec<CheckJson>,
}

#[derive(Serialize)]
struct CheckJson {
    name: &'static str,
    passed: bool,
    cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

fn cmd_selftest(json: bool, seed: u64, tamper_moments: bool) -> ExitCode {
    let cfg = SelftestConfig {
        seed,
        tamper_moments,
        ..SelftestConfig::default()
    };
    let start = Instant::now();
    let rep = selftest::run(&cfg);
    eprintln!("selftest finished in {:.1} s", start.elapsed().as_secs_f64());
    if json {
        let doc = SelftestJson {
            seed,
            passed: rep.passed(),
            checks: rep
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name,
                    passed: c.passed(),
                    cases: c.cases,
                    failure: c.failure.clone(),
                })
                .collect(),
        };
        println!("{}", serde_json::to_string_pretty(&doc).expect("report serialises"));
    } else {
        println!("{rep}");
    }
    if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INTERNAL)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    let json = cli.json;
    let outcome = match &cli.command {
        Command::Residue { input, method, trace, floor } => cmd_residue(json, input, *method, *trace, *floor),
        Command::IndexDirac4 { input, method, emit_symbol } => cmd_index_dirac4(json, input, *method, emit_symbol.as_ref()),
        Command::IndexFlat { input, method, emit_symbol } => cmd_index_flat(json, input, *method, emit_symbol.as_ref()),
        Command::Selftest { seed, tamper_moments } => Ok(cmd_selftest(json, *seed, *tamper_moments)),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
