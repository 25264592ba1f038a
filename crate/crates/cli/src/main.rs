use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dimdraw::engine::{self, EngineError};
use dimdraw::ingest::{self, IngestError};
use dimdraw::oct::{
    self, external::SOLVER_ENV, AnnealParams, ExternalSolver, GeneticParams, KSearch, OctError,
    SatBackend, SolverConfig, Strategy,
};
use dimdraw::order::OrderRelation;
use dimdraw::orientation::two_realizer;
use dimdraw::render::{self, CanvasSpec, RenderError};
use dimdraw::{tig, Parallelism};

#[derive(Parser, Debug)]
#[command(name = "dimdraw", version, about = "Draw order diagrams through two-dimension extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a drawing and write it as SVG, TikZ, JSON or the tig in DOT.
    Draw(DrawArgs),
    /// Write the CNF asking for an odd cycle transversal of size at most k.
    Cnf(CnfArgs),
    /// Report whether the order has dimension at most two.
    Dim(DimArgs),
}

#[derive(clap::Args, Debug)]
struct InputArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    input_format: InputFormat,
}

#[derive(clap::Args, Debug)]
struct DrawArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Defaults to the output file extension, then to SVG.
    #[arg(short, long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long, value_enum, default_value_t = Solver::Sat)]
    solver: Solver,
    #[arg(long, value_enum, default_value_t = Backend::Builtin)]
    sat_backend: Backend,
    /// External solver command; `{input}` and `{output}` are substituted.
    #[arg(long, env = SOLVER_ENV)]
    sat_command: Option<String>,
    #[arg(long, value_enum, default_value_t = Search::Linear)]
    k_search: Search,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep points that lie on edges where they are.
    #[arg(long)]
    no_postprocess: bool,
    /// Print the summary as JSON.
    #[arg(long)]
    summary_json: bool,
    #[arg(short, long)]
    verbose: bool,
}

#[derive(clap::Args, Debug)]
struct CnfArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(short, long)]
    k: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct DimArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Also print a realizer of two linear extensions.
    #[arg(long)]
    realizer: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum InputFormat {
    Auto,
    Order,
    Cxt,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OutputFormat {
    Svg,
    Tikz,
    Json,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Solver {
    Sat,
    Greedy,
    Anneal,
    Genetic,
    Brute,
    Portfolio,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Backend {
    Builtin,
    External,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Search {
    Linear,
    Binary,
}

/// Failure classes and their exit codes.
#[derive(Debug)]
enum Failure {
    Input(String),
    Backend(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Backend(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) | Failure::Backend(m) | Failure::Invariant(m) => f.write_str(m),
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<OctError> for Failure {
    fn from(e: OctError) -> Self {
        match e {
            OctError::Invalid(m) => Failure::Invariant(m),
            other => Failure::Backend(other.to_string()),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Oct(o) => o.into(),
            other => Failure::Invariant(other.to_string()),
        }
    }
}

impl From<RenderError> for Failure {
    fn from(e: RenderError) -> Self {
        Failure::Invariant(e.to_string())
    }
}

fn read_order(args: &InputArgs) -> Result<OrderRelation, Failure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.input.display())))?;
    let format = match args.input_format {
        InputFormat::Auto => {
            let cxt_ext = args.input.extension().is_some_and(|e| e.eq_ignore_ascii_case("cxt"));
            let b_header = text.lines().find(|l| !l.trim().is_empty()).map(str::trim) == Some("B");
            if cxt_ext || b_header {
                InputFormat::Cxt
            } else {
                InputFormat::Order
            }
        }
        f => f,
    };
    let order = match format {
        InputFormat::Cxt => ingest::concept_lattice(&ingest::parse_cxt(&text)?)?,
        _ => ingest::parse_order(&text)?,
    };
    Ok(order)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Summary goes to stdout when the payload goes to a file, else to stderr.
fn report(to_stdout: bool, line: &str) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn strategy(args: &DrawArgs) -> Result<Strategy, Failure> {
    let search = match args.k_search {
        Search::Linear => KSearch::Linear,
        Search::Binary => KSearch::Binary,
    };
    Ok(match args.solver {
        Solver::Sat => {
            let backend = match args.sat_backend {
                Backend::Builtin => SatBackend::Builtin(SolverConfig::default()),
                Backend::External => {
                    let cmd = args.sat_command.as_deref().ok_or_else(|| {
                        Failure::Input(format!("--sat-backend external needs --sat-command or {SOLVER_ENV}"))
                    })?;
                    SatBackend::External(ExternalSolver::new(cmd))
                }
            };
            Strategy::Sat { backend, search }
        }
        Solver::Greedy => Strategy::Greedy,
        Solver::Anneal => Strategy::Anneal {
            seed: args.seed,
            params: AnnealParams::default(),
        },
        Solver::Genetic => Strategy::Genetic {
            seed: args.seed,
            params: GeneticParams::default(),
        },
        Solver::Brute => Strategy::Brute {
            bound: oct::DEFAULT_BRUTE_BOUND,
        },
        Solver::Portfolio => Strategy::Portfolio {
            seed: args.seed,
            par: Parallelism::default(),
        },
    })
}

fn output_format(args: &DrawArgs) -> OutputFormat {
    if let Some(f) = args.format {
        return f;
    }
    let ext = args
        .output
        .as_deref()
        .and_then(Path::extension)
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("tex" | "tikz") => OutputFormat::Tikz,
        Some("json") => OutputFormat::Json,
        Some("dot" | "gv") => OutputFormat::Dot,
        _ => OutputFormat::Svg,
    }
}

fn cmd_draw(args: &DrawArgs) -> Result<(), Failure> {
    let order = read_order(&args.input)?;
    let start = Instant::now();
    let format = output_format(args);
    if format == OutputFormat::Dot {
        return write_output(args.output.as_deref(), &tig::build_tig(&order).to_dot());
    }
    let mut strategy = strategy(args)?;
    let drawing = engine::compute_coordinates(&order, &mut strategy)?;
    if args.verbose {
        for (i, removed) in drawing.extension.removed_per_pass.iter().enumerate() {
            let pairs: Vec<String> = removed
                .iter()
                .map(|&(a, b)| format!("({},{})", order.label(a), order.label(b)))
                .collect();
            eprintln!(
                "pass {}: {:?} removed {}",
                i + 1,
                drawing.extension.methods[i],
                pairs.join(" ")
            );
        }
    }
    let drawing = if args.no_postprocess {
        drawing
    } else {
        let conflicts = render::detect_collinear(&drawing);
        if args.verbose {
            eprintln!("{} point-on-edge conflicts", conflicts.len());
        }
        render::perturb(&drawing, &conflicts, &render::PerturbParams::default())?
    };
    let spec = CanvasSpec::default();
    let content = match format {
        OutputFormat::Svg => render::emit_svg(&drawing, &spec)?,
        OutputFormat::Tikz => render::emit_tikz(&drawing, &spec)?,
        OutputFormat::Json => render::emit_json(&drawing),
        OutputFormat::Dot => unreachable!(),
    };
    write_output(args.output.as_deref(), &content)?;

    let n = order.len();
    let inc = order.incomparable_pairs().len() / 2;
    let passes = drawing.extension.passes;
    let inserted = drawing.extension.pairs.len();
    let false_comp = engine::weak_dominance_stats(&drawing, &order).false_comparabilities;
    let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    let line = if args.summary_json {
        serde_json::json!({
            "n": n,
            "incomparable": inc,
            "passes": passes,
            "inserted": inserted,
            "false_comparabilities": false_comp,
            "wall_ms": wall_ms,
        })
        .to_string()
    } else {
        format!(
            "n={n} inc={inc} passes={passes} |C|={inserted} false_comparabilities={false_comp} time={wall_ms:.1}ms"
        )
    };
    report(args.output.is_some(), &line);
    Ok(())
}

fn cmd_cnf(args: &CnfArgs) -> Result<(), Failure> {
    let order = read_order(&args.input)?;
    let t = tig::build_tig(&order);
    let cnf = oct::encode_oct(t.graph(), args.k);
    write_output(args.output.as_deref(), &cnf.to_dimacs())?;
    let (n, m) = (t.vertex_count(), t.edge_count());
    if n >= 2 && args.k >= 1 {
        let expected = oct::cnf::expected_oct_size(n, m, args.k);
        if expected != (cnf.num_vars(), cnf.num_clauses()) {
            return Err(Failure::Invariant(format!(
                "CNF has {} variables and {} clauses, expected {expected:?}",
                cnf.num_vars(),
                cnf.num_clauses()
            )));
        }
    }
    report(
        args.output.is_some(),
        &format!(
            "n={n} m={m} k={} vars={} clauses={}",
            args.k,
            cnf.num_vars(),
            cnf.num_clauses()
        ),
    );
    Ok(())
}

fn cmd_dim(args: &DimArgs) -> Result<(), Failure> {
    let order = read_order(&args.input)?;
    match two_realizer(&order) {
        None => println!("dim<=2: no"),
        Some((l1, l2)) => {
            println!("dim<=2: yes");
            if args.realizer {
                for (name, l) in [("L1", l1), ("L2", l2)] {
                    let seq: Vec<&str> = l.sequence().into_iter().map(|x| order.label(x)).collect();
                    println!("{name}: {}", seq.join(" "));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Draw(a) => cmd_draw(a),
        Command::Cnf(a) => cmd_cnf(a),
        Command::Dim(a) => cmd_dim(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
