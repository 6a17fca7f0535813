//! Command-line front end. The `qwalk` binary forwards to [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classical;
use crate::closed_forms::{self, ClosedFormFamily};
use crate::dynamics::{self, Horizon, Site};
use crate::error::Error;
use crate::floquet::{self, BandStructure, BaseLattice};
use crate::format;
use crate::graph::{Family, FamilyKind, FiniteGraph, PeriodicGraphSpec, ProductKind};
use crate::spectral;

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Limiting distributions of continuous-time quantum walks on periodic graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Limiting density d(p,q) of a finite graph (or, with --periodic, of a periodic graph by grid quadrature)
    Density(DensityArgs),
    /// Closed-form density table for cycle, path, star or hypercube
    ClosedForm(ClosedFormArgs),
    /// Scan the Floquet condition on the periodic grid of a product Γ_0 ⊙ G
    FloquetCheck(FloquetArgs),
    /// Time-averaged walk on the torus C_N^d □ G, compared with the product prediction
    Simulate(SimulateArgs),
    /// Classical random walk: stationary distribution, bipartiteness, iterates
    Classical(ClassicalArgs),
    /// Quantum density row against classical stationary distribution
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Zd,
    Triangular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProductArg {
    Cartesian,
    Tensor,
    Strong,
}

impl From<ProductArg> for ProductKind {
    fn from(p: ProductArg) -> Self {
        match p {
            ProductArg::Cartesian => ProductKind::Cartesian,
            ProductArg::Tensor => ProductKind::Tensor,
            ProductArg::Strong => ProductKind::Strong,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PeriodicArg {
    /// ℤ^d □ G, with d from --d
    Cartesian,
    /// Hexagonal lattice (two-vertex fundamental domain, ignores the graph flags)
    Honeycomb,
}

/// Finite graph selection: a named family or an edge-list file.
#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Named family: cycle, path, star, complete, complete-bipartite, hypercube, petersen
    #[arg(long, conflicts_with = "edge_list")]
    pub family: Option<String>,
    /// ν for cycle, path, star (leaf count) and complete
    #[arg(long)]
    pub nu: Option<usize>,
    /// Hypercube dimension, or first part size of complete-bipartite
    #[arg(long)]
    pub m: Option<usize>,
    /// Second part size of complete-bipartite
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge-list file: one `u v` pair per line, `#` comments
    #[arg(long)]
    pub edge_list: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Eigenvalue clustering tolerance (relative to max(1, spectral radius))
    #[arg(long, default_value = "1e-8")]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Treat the input as a periodic graph and integrate over the Floquet grid
    #[arg(long, value_enum)]
    pub periodic: Option<PeriodicArg>,
    /// Lattice dimension for --periodic cartesian
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Grid points per axis for --periodic
    #[arg(long = "N", default_value_t = 64)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ClosedFormArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// csv prints the `p,q,d` table, json the density matrix
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct FloquetArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = ProductArg::Cartesian)]
    pub product: ProductArg,
    #[arg(long, value_enum, default_value_t = BaseArg::Zd)]
    pub base: BaseArg,
    /// Dimension of the ℤ^d base
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Grid points per axis
    #[arg(long = "N", default_value_t = 64)]
    pub grid: usize,
    /// Band collision threshold δ
    #[arg(long, default_value = "1e-9")]
    pub delta: f64,
    /// Eigenvalue clustering tolerance
    #[arg(long, default_value = "1e-8")]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Torus dimension
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Cells per axis (N ≥ 3)
    #[arg(long = "N", default_value_t = 64)]
    pub grid: usize,
    /// Averaging horizon: a positive number or `inf`
    #[arg(long = "T", default_value = "1e4", value_parser = parse_horizon)]
    pub horizon: Horizon,
    /// Starting fundamental vertex (0-based index), in cell 0
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    /// Clustering tolerance for T = inf and for the predicted density
    #[arg(long, default_value = "1e-8")]
    pub tol: f64,
    /// Write the distribution CSV here; the summary then goes to stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Starting vertex (0-based index) for the iterates
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    /// Number of transition steps to record (0 records none)
    #[arg(long, default_value_t = 0)]
    pub steps: usize,
    /// Use the lazy walk (I + P)/2
    #[arg(long)]
    pub lazy: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Starting vertex (0-based index) of the quantum walk
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long, default_value = "1e-8")]
    pub tol: f64,
}

fn parse_horizon(s: &str) -> Result<Horizon, String> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(Horizon::Infinite);
    }
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(Horizon::Finite(t)),
        _ => Err(format!("expected a positive number or `inf`, got `{s}`")),
    }
}

/// A failure together with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence(_) | Error::GridPoint { .. } | Error::NotSymmetric(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure { code: 1, message: format!("i/o error: {e}") }
}

impl GraphArgs {
    fn family(&self) -> Result<Family, Failure> {
        let name = self.family.as_deref().ok_or_else(|| usage("a graph is required: pass --family or --edge-list"))?;
        let kind: FamilyKind = name.parse()?;
        let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("{} needs --{flag}", kind.name())));
        let params = match kind {
            FamilyKind::Cycle | FamilyKind::Path | FamilyKind::Star | FamilyKind::Complete => vec![need(self.nu, "nu")?],
            FamilyKind::Hypercube => vec![need(self.m, "m")?],
            FamilyKind::CompleteBipartite => vec![need(self.m, "m")?, need(self.n, "n")?],
            FamilyKind::Petersen => vec![],
        };
        Ok(Family::from_params(kind, &params)?)
    }

    fn load(&self) -> Result<FiniteGraph, Failure> {
        if let Some(path) = &self.edge_list {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            return Ok(FiniteGraph::from_edge_list(&text)?);
        }
        Ok(FiniteGraph::named(self.family()?)?)
    }
}

fn check_vertex(graph: &FiniteGraph, p: usize) -> Result<(), Failure> {
    if p >= graph.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: p, count: graph.vertex_count() }.into());
    }
    Ok(())
}

fn check_tol(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

fn density(args: &DensityArgs, out: &mut dyn Write) -> Result<(), Failure> {
    check_tol("tol", args.tol)?;
    let (d, graph) = match args.periodic {
        None => {
            let graph = args.graph.load()?;
            (spectral::limiting_density(&graph, args.tol)?, Some(graph))
        }
        Some(kind) => {
            let (spec, graph) = match kind {
                PeriodicArg::Cartesian => {
                    let graph = args.graph.load()?;
                    (PeriodicGraphSpec::cartesian_with_lattice(&graph, args.d)?, Some(graph))
                }
                PeriodicArg::Honeycomb => (PeriodicGraphSpec::honeycomb()?, None),
            };
            (floquet::general_density(&spec, args.grid, args.tol)?.density(), graph)
        }
    };
    let text = match args.format {
        OutputFormat::Json => d.to_json() + "\n",
        OutputFormat::Csv => {
            let labels = graph.unwrap_or_else(|| FiniteGraph::new(d.nu(), []).expect("edgeless graph"));
            d.to_csv(&labels)
        }
    };
    out.write_all(text.as_bytes()).map_err(io_failure)
}

fn closed_form(args: &ClosedFormArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if args.graph.edge_list.is_some() {
        return Err(usage("closed-form needs --family (cycle, path, star or hypercube)"));
    }
    let family = ClosedFormFamily::try_from(args.graph.family()?)?;
    let text = match args.format {
        OutputFormat::Csv => closed_forms::closed_form_table(family)?,
        OutputFormat::Json => closed_forms::closed_form_matrix(family)?.to_json() + "\n",
    };
    out.write_all(text.as_bytes()).map_err(io_failure)
}

fn floquet_check(args: &FloquetArgs, out: &mut dyn Write) -> Result<(), Failure> {
    check_tol("tol", args.tol)?;
    check_tol("delta", args.delta)?;
    let base = match args.base {
        BaseArg::Zd => BaseLattice::Zd(args.d),
        BaseArg::Triangular => BaseLattice::Triangular,
    };
    if base.dim() == 0 {
        return Err(usage("--d must be at least 1"));
    }
    let graph = args.graph.load()?;
    let bands = BandStructure::new(base, &graph, args.product.into(), args.tol)?;
    let report = floquet::floquet_condition_fraction(&bands, args.grid, args.delta)?;
    out.write_all((report.to_json() + "\n").as_bytes()).map_err(io_failure)
}

fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    check_tol("tol", args.tol)?;
    let graph = args.graph.load()?;
    check_vertex(&graph, args.p)?;
    let op = dynamics::build_torus(&graph, args.d, args.grid)?;
    let start = Site::origin(args.d, args.p);
    let mu = match args.horizon {
        Horizon::Finite(t) => dynamics::time_averaged(&op, &start, t)?,
        Horizon::Infinite => dynamics::infinite_time_averaged(&op, &start, args.tol)?,
    };
    let predicted = dynamics::product_prediction(&op, &spectral::limiting_density(&graph, args.tol)?, args.p)?;
    let tv = dynamics::total_variation(&mu.values, &predicted)?;
    let horizon = match args.horizon {
        Horizon::Finite(t) => format::table(t),
        Horizon::Infinite => "inf".to_string(),
    };
    let summary = format!(
        "vertices={} T={} total_mass={} tv_vs_prediction={}\n",
        op.vertex_count(),
        horizon,
        format::table(mu.total()),
        format::table(tv)
    );
    let csv = mu.to_csv(&op);
    match &args.output {
        Some(path) => {
            std::fs::write(path, csv).map_err(io_failure)?;
            out.write_all(summary.as_bytes()).map_err(io_failure)
        }
        None => {
            out.write_all(csv.as_bytes()).map_err(io_failure)?;
            eprint!("{summary}");
            Ok(())
        }
    }
}

fn classical_cmd(args: &ClassicalArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let graph = args.graph.load()?;
    check_vertex(&graph, args.p)?;
    let iterates = (args.steps > 0).then_some((args.p, args.steps, args.lazy));
    let report = classical::walk_report(&graph, iterates)?;
    let text = match args.format {
        OutputFormat::Json => report.to_json() + "\n",
        OutputFormat::Csv => report.to_csv(&graph),
    };
    out.write_all(text.as_bytes()).map_err(io_failure)
}

fn compare(args: &CompareArgs, out: &mut dyn Write) -> Result<(), Failure> {
    check_tol("tol", args.tol)?;
    let graph = args.graph.load()?;
    check_vertex(&graph, args.p)?;
    let d = spectral::limiting_density(&graph, args.tol)?;
    let pi = classical::stationary_distribution(&graph)?;
    let uniform = 1.0 / graph.vertex_count() as f64;
    let mut text = String::from("p,q,quantum,classical,uniform\n");
    for (q, pq) in pi.iter().enumerate() {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            graph.label(args.p),
            graph.label(q),
            format::table(d.get(args.p, q)),
            format::table(*pq),
            format::table(uniform)
        ));
    }
    out.write_all(text.as_bytes()).map_err(io_failure)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Density(a) => density(a, out),
        Command::ClosedForm(a) => closed_form(a, out),
        Command::FloquetCheck(a) => floquet_check(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Classical(a) => classical_cmd(a, out),
        Command::Compare(a) => compare(a, out),
    }
}

/// Parses `argv` (including the program name) and runs one subcommand.
///
/// Returns the exit code: 0 on success, 2 on argument errors, 1 on numeric
/// or i/o failure. Diagnostics go to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                2
            } else {
                let _ = out.write_all(rendered.as_bytes());
                0
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
