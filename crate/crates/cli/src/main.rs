//! `qplane`: identity suites, spectrum scans and q-topology from the shell.
//!
//! Exit codes: 0 success, 1 an identity failed, 2 bad usage or input.

mod plot;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use qplane::coeff::{parse_q, QParam};
use qplane::error::Error;
use qplane::fq::FqElement;
use qplane::qtopology::{QPoint, QRegion};
use qplane::spectra::{self, symbolic, Backend, MatrixQModule};
use qplane::suites::{self, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "qplane", version, about = "Exact identity checks, spectra and q-topology over the contractive quantum plane")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run identity suites and write a JSON report
    Verify(Common),
    /// Homology profiles of a matrix q-module at candidate points
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// JSON file {"q": .., "T": [[..]], "S": [[..]]}
        #[arg(long)]
        module: PathBuf,
        /// JSON list of extra points [{"axis": "x", "value": ..}, ..]
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// q-closure of a region
    Qclosure {
        #[command(flatten)]
        common: Common,
        /// region JSON
        #[arg(long)]
        region: PathBuf,
    },
    /// Graded components of an F_q element and a check that they sum back
    Decompose {
        #[command(flatten)]
        common: Common,
        /// element JSON {"q", "trunc", "F", "G"}; the unit element if omitted
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// q-closure of the shift example's Taylor region against the expected region
    Example8(Common),
    /// SVG of a spectrum scan: scanned points and the closure orbits
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        points: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Args, Clone)]
struct Common {
    /// deformation parameter, e.g. 1/2 or (1+i)/4
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    q: String,
    #[arg(long, default_value_t = 10)]
    trunc: usize,
    #[arg(long = "max-degree", default_value_t = 4)]
    max_degree: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// suite name, comma-separated names, or all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendArg,
    /// parallel workers (0: one per core)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// output file; standard output if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Identity(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

type Res = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Verify(c) => verify(&c),
        Cmd::Spectrum { common, module, points } => spectrum(&common, &module, points.as_deref()),
        Cmd::Qclosure { common, region } => qclosure(&common, &region),
        Cmd::Decompose { common, element } => decompose(&common, element.as_deref()),
        Cmd::Example8(c) => example8(&c),
        Cmd::Plot { common, module, points } => plot_cmd(&common, &module, points.as_deref()),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity(m)) => {
            eprintln!("{}", m);
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
    }
}

fn q_of(c: &Common) -> Result<QParam, Failure> {
    parse_q(&c.q).map_err(|e| Failure::Input(format!("--q {}: {}", c.q, e)))
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {}", p.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {}", p.display(), e)))
}

fn emit_text(c: &Common, text: &str) -> Res {
    match &c.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {}", p.display(), e))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.write_all(b"\n")).map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

fn emit<T: Serialize>(c: &Common, v: &T) -> Res {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure::Input(e.to_string()))?;
    emit_text(c, &text)
}

fn backend_of(c: &Common) -> Backend {
    match c.backend {
        BackendArg::Exact => Backend::Exact,
        BackendArg::Float => Backend::float(),
    }
}

fn verify(c: &Common) -> Res {
    if c.backend == BackendArg::Float {
        return Err(Failure::Input("identity suites run on the exact backend only".into()));
    }
    let cfg = SuiteConfig {
        q: q_of(c)?,
        trunc: c.trunc,
        max_degree: c.max_degree,
        seed: c.seed,
        suites: Suite::parse_list(&c.suite)?,
    };
    cfg.validate()?;
    let cells = suites::plan(&cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(c.workers)
        .build()
        .map_err(|e| Failure::Input(e.to_string()))?;
    // indexed collection keeps plan order whatever the scheduling
    let results: Vec<_> = pool.install(|| cells.par_iter().map(|cell| suites::run_cell(&cfg, cell)).collect());
    let report = suites::assemble(&cfg, results);
    emit(c, &report)?;
    let failed: Vec<String> = report
        .cells
        .iter()
        .filter(|r| r.status == suites::Status::Fail)
        .map(|r| format!("FAIL {} ({}, {}) {}: {}", r.suite.name(), r.d, r.l, r.identity, r.message.as_deref().unwrap_or("")))
        .collect();
    if failed.is_empty() {
        eprintln!("{} checks passed", report.cells.len());
        Ok(())
    } else {
        Err(Failure::Identity(failed.join("\n")))
    }
}

/// The block formulas are trusted only after their symbolic expansion checks out.
fn require_koszul_oracle() -> Res {
    let o = symbolic::koszul_oracle();
    if o.holds() {
        Ok(())
    } else {
        Err(Failure::Identity(format!("Koszul blocks fail their symbolic check: d0 d1 = {}", o.composite)))
    }
}

fn scan(c: &Common, module: &Path, points: Option<&Path>) -> Result<spectra::SpectrumReport, Failure> {
    require_koszul_oracle()?;
    let m: MatrixQModule = read_json(module)?;
    let extra: Vec<QPoint> = match points {
        Some(p) => read_json(p)?,
        None => vec![],
    };
    m.q().require_contractive()?;
    Ok(spectra::taylor_spectrum_scan(&m, &extra, backend_of(c))?)
}

fn spectrum(c: &Common, module: &Path, points: Option<&Path>) -> Res {
    let rep = scan(c, module, points)?;
    if rep.samples.iter().any(|s| s.ill_conditioned) {
        eprintln!("warning: some ranks were decided by entries close to the tolerance");
    }
    emit(c, &rep)
}

fn qclosure(c: &Common, region: &Path) -> Res {
    let r: QRegion = read_json(region)?;
    let canon = QRegion::from_parts(&r.q, r.origin, r.x, r.y)?;
    emit(c, &canon.q_closure()?)
}

#[derive(Serialize)]
struct Decomposition {
    q: QParam,
    trunc: usize,
    components: Vec<Component>,
    sum_matches: bool,
}

#[derive(Serialize)]
struct Component {
    d: usize,
    pair: qplane::graded::GermPair,
}

fn decompose(c: &Common, element: Option<&Path>) -> Res {
    let e: FqElement = match element {
        Some(p) => read_json(p)?,
        None => FqElement::unit(&q_of(c)?, c.trunc),
    };
    let parts = e.components();
    let sum = FqElement::reassemble(e.q(), e.trunc(), &parts)?;
    let ok = sum.agree(&e).holds();
    let rep = Decomposition {
        q: e.q().clone(),
        trunc: e.trunc(),
        components: parts
            .into_iter()
            .enumerate()
            .filter(|(_, g)| !g.pair.is_zero())
            .map(|(d, g)| Component { d, pair: g.pair })
            .collect(),
        sum_matches: ok,
    };
    emit(c, &rep)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Identity("graded components do not sum to the element".into()))
    }
}

fn example8(c: &Common) -> Res {
    let q = q_of(c)?;
    q.require_contractive().map_err(|e| Failure::Input(e.to_string()))?;
    let rep = spectra::example8_report(&q)?;
    println!("region equality: {}", rep.region_equality);
    if c.out.is_some() {
        emit(c, &rep)?;
    }
    if rep.region_equality {
        Ok(())
    } else {
        Err(Failure::Identity("closure differs from the expected region".into()))
    }
}

fn plot_cmd(c: &Common, module: &Path, points: Option<&Path>) -> Res {
    let rep = scan(c, module, points)?;
    emit_text(c, &plot::render(&rep))
}
