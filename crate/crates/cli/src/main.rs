//! `graphbell` command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphbell::bell::{lhv_search, named_operator, ASSIGNMENT_CAP_ENV, DEFAULT_ASSIGNMENT_CAP};
use graphbell::experiment::{simulate_operator, DEFAULT_MEAN_EVENTS, DEFAULT_SEED};
use graphbell::noise::{decay_curve, violation_threshold, Grid};
use graphbell::{
    aggregate_bell, apply_depolarizing_dm, exact_fidelity, gme_check, ingest_table, BellOperator,
    DepolarizingNoise, Error, GraphSpec, NamedState, PauliString, QubitOrder, StabilizerGroup, StateVector,
};

#[derive(Parser)]
#[command(name = "graphbell", version, about = "Stabilizer Bell tests on six-qubit graph states")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the document to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Stabilizer eigenstate checks.
    #[command(subcommand)]
    State(StateCmd),
    /// Bell operator expansion and evaluation.
    #[command(subcommand)]
    Bell(BellCmd),
    /// Depolarizing decay curves and thresholds.
    #[command(subcommand)]
    Noise(NoiseCmd),
    /// Exact stabilizer fidelity and the GME verdict.
    Fidelity(FidelityArgs),
    /// Counting simulations and measured tables.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand)]
enum StateCmd {
    /// Report the expectation of every stabilizer generator.
    Verify(StateArgs),
}

#[derive(Args, Clone)]
struct StateArgs {
    /// Named state: lc4, lc6, y6, ghz6.
    #[arg(long, conflicts_with = "graph")]
    state: Option<String>,
    /// Graph document: vertex count, then one `u v` edge per line.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct OperatorArgs {
    /// Named operator: lc6, y6, mermin.
    #[arg(long, conflicts_with = "operator_file")]
    operator: Option<String>,
    /// Operator document (TOML) as written by `bell expand --format structured`.
    #[arg(long)]
    operator_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BellCmd {
    /// List the signed terms.
    Expand {
        #[command(flatten)]
        op: OperatorArgs,
        /// Display order such as 5-1-3-2-4-6.
        #[arg(long)]
        order: Option<String>,
    },
    /// Quantum value, exhaustive LHV bound and ratio D.
    Eval {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        op: OperatorArgs,
    },
}

#[derive(Args, Clone)]
struct NoiseArgs {
    /// Uniform retention probability.
    #[arg(long, conflicts_with = "p_vector")]
    p: Option<f64>,
    /// Per-qubit retention probabilities, comma separated, qubit 1 first.
    #[arg(long, value_delimiter = ',')]
    p_vector: Option<Vec<f64>>,
}

impl NoiseArgs {
    fn build(&self, n: usize) -> graphbell::Result<DepolarizingNoise> {
        match (&self.p, &self.p_vector) {
            (_, Some(v)) => {
                if v.len() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        actual: v.len(),
                    });
                }
                DepolarizingNoise::new(v.clone())
            }
            (Some(p), None) => DepolarizingNoise::uniform(n, *p),
            (None, None) => Ok(DepolarizingNoise::noiseless(n)),
        }
    }
}

#[derive(Subcommand)]
enum NoiseCmd {
    /// Bell value on a uniform noise grid (CSV `p,value,operator`).
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        op: OperatorArgs,
        /// `p_min,p_max,steps`
        #[arg(long, default_value = "0,1,101")]
        grid: String,
    },
    /// Uniform p at which the violation disappears.
    Threshold {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        op: OperatorArgs,
    },
}

#[derive(Args)]
struct FidelityArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Print all stabilizer group elements with weights.
    #[arg(long)]
    dump_group: bool,
    /// Display order for the group dump.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Simulate counting runs for every term of an operator.
    Simulate {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        /// Mean events per setting.
        #[arg(long, default_value_t = DEFAULT_MEAN_EVENTS)]
        events: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Parse a measurement table and list its records.
    Ingest {
        #[arg(long = "in")]
        input: PathBuf,
        /// Qubit order; overrides a `# order=` line.
        #[arg(long)]
        order: Option<String>,
    },
    /// Sum a measurement table into a Bell value with propagated error.
    Aggregate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        order: Option<String>,
        /// LHV bound; defaults to the reference operator's bound when given.
        #[arg(long)]
        bound: Option<f64>,
        /// Reference operator used to check term coverage.
        #[command(flatten)]
        op: OperatorArgs,
        /// Published aggregate to compare against.
        #[arg(long)]
        reported: Option<f64>,
    },
}

#[derive(Debug)]
enum CliError {
    Model(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl CliError {
    /// 2 is reserved for argument errors reported by clap.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) => match e {
                Error::InvalidToken { .. }
                | Error::InvalidOrder(_)
                | Error::InvalidGraph(_)
                | Error::MalformedTable(_) => 3,
                Error::TooManyQubits { .. } | Error::AssignmentSpaceTooLarge { .. } => 5,
                Error::NoViolation { .. } => 7,
                Error::RecordMismatch(_) => 8,
                _ => 4,
            },
            CliError::Io(..) => 6,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn assignment_cap() -> CliResult<u64> {
    match std::env::var(ASSIGNMENT_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("{ASSIGNMENT_CAP_ENV}={v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_ASSIGNMENT_CAP),
    }
}

struct LoadedState {
    label: String,
    state: StateVector,
    generators: Vec<PauliString>,
}

fn load_state(args: &StateArgs) -> CliResult<LoadedState> {
    match (&args.state, &args.graph) {
        (Some(name), _) => {
            let named: NamedState = name.parse()?;
            Ok(LoadedState {
                label: named.to_string(),
                state: named.build(),
                generators: named.stabilizer_generators(),
            })
        }
        (None, Some(path)) => {
            let g = GraphSpec::parse(&read(path)?)?;
            Ok(LoadedState {
                label: path.display().to_string(),
                state: StateVector::graph_state(&g)?,
                generators: g.stabilizer_generators(),
            })
        }
        (None, None) => Err(CliError::Usage("one of --state or --graph is required".into())),
    }
}

fn load_operator(args: &OperatorArgs) -> CliResult<BellOperator> {
    match (&args.operator, &args.operator_file) {
        (Some(name), _) => Ok(named_operator(name)?),
        (None, Some(path)) => Ok(BellOperator::from_document(&read(path)?)?),
        (None, None) => Err(CliError::Usage("one of --operator or --operator-file is required".into())),
    }
}

/// Computes the bound unless the operator document already carried one.
fn with_bound(op: BellOperator) -> CliResult<BellOperator> {
    if op.lhv_bound().is_some() {
        return Ok(op);
    }
    Ok(op.with_computed_bound(assignment_cap()?)?.0)
}

fn check_sizes(op: &BellOperator, s: &LoadedState) -> CliResult<()> {
    if op.n() != s.state.n() {
        return Err(Error::LengthMismatch {
            expected: s.state.n(),
            actual: op.n(),
        }
        .into());
    }
    Ok(())
}

fn parse_order(text: &Option<String>, fallback: &QubitOrder) -> CliResult<QubitOrder> {
    match text {
        Some(t) => {
            let o: QubitOrder = t.parse()?;
            // Keep the lowercase display of the fallback when the permutation length matches.
            if o.len() == fallback.len() {
                Ok(o.with_lowercase(&fallback.lowercase_qubits())?)
            } else {
                Ok(o)
            }
        }
        None => Ok(fallback.clone()),
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn run(cli: &Cli) -> CliResult<String> {
    let format = cli.format;
    match &cli.command {
        Command::State(StateCmd::Verify(args)) => {
            let s = load_state(args)?;
            let order = QubitOrder::canonical(s.state.n());
            let mut out = String::new();
            let mut all_ok = true;
            let rows: Vec<(String, f64)> = s
                .generators
                .iter()
                .map(|g| Ok((g.format(&order)?, s.state.expectation(g)?)))
                .collect::<graphbell::Result<_>>()?;
            match format {
                Some(Format::Csv) => {
                    out.push_str("generator,expectation\n");
                    for (tok, e) in &rows {
                        let _ = writeln!(out, "{tok},{e}");
                    }
                }
                _ => {
                    let _ = writeln!(out, "state {} ({} qubits)", s.label, s.state.n());
                    for (tok, e) in &rows {
                        let ok = (e - 1.0).abs() <= 1e-9;
                        all_ok &= ok;
                        let _ = writeln!(out, "  {tok:>10}  {e:+.12}  {}", if ok { "ok" } else { "NOT STABILIZED" });
                    }
                    let _ = writeln!(out, "{}", if all_ok { "stabilized" } else { "not stabilized" });
                }
            }
            Ok(out)
        }
        Command::Bell(BellCmd::Expand { op, order }) => {
            let op = load_operator(op)?;
            let order = parse_order(order, op.display_order())?;
            match format {
                Some(Format::Structured) => Ok(with_bound(op.with_display_order(order)?)?.to_document()),
                Some(Format::Csv) => {
                    let mut out = String::from("term,weight\n");
                    for t in op.terms() {
                        let _ = writeln!(out, "{},{}", t.format(&order)?, t.weight());
                    }
                    Ok(out)
                }
                _ => {
                    let mut out = String::new();
                    let _ = writeln!(out, "{} in qubit order {order}", op.label());
                    if let Some(m) = op.metadata() {
                        let _ = writeln!(out, "pattern: {}", m.pattern);
                        for (l, g) in m.labels.iter().zip(&m.generators) {
                            let _ = writeln!(out, "  {l} = {}", g.format(&order)?);
                        }
                        if let Some(note) = &m.note {
                            let _ = writeln!(out, "note: {note}");
                        }
                    }
                    for (k, t) in op.terms().iter().enumerate() {
                        let _ = writeln!(out, "{:>3}  {:>9}  weight {}", k + 1, t.format(&order)?, t.weight());
                    }
                    Ok(out)
                }
            }
        }
        Command::Bell(BellCmd::Eval { state, op }) => {
            let s = load_state(state)?;
            let op = load_operator(op)?;
            check_sizes(&op, &s)?;
            let search = lhv_search(&op, assignment_cap()?)?;
            let op = op.with_lhv_bound(search.bound)?;
            let value = op.quantum_value(&s.state)?;
            let d = op.violation_ratio(&s.state)?;
            match format {
                Some(Format::Csv) => Ok(format!(
                    "operator,state,value,bound,D,observables,assignments\n{},{},{value},{},{d},{},{}\n",
                    csv_escape(op.label()),
                    csv_escape(&s.label),
                    search.bound,
                    search.observables,
                    search.assignments_searched
                )),
                Some(Format::Structured) => {
                    let mut out = String::new();
                    let _ = writeln!(out, "operator = {:?}", op.label());
                    let _ = writeln!(out, "state = {:?}", s.label);
                    let _ = writeln!(out, "value = {value}");
                    let _ = writeln!(out, "bound = {}", search.bound);
                    let _ = writeln!(out, "D = {d}");
                    let _ = writeln!(out, "observables = {}", search.observables);
                    let _ = writeln!(out, "assignments = {}", search.assignments_searched);
                    Ok(out)
                }
                _ => Ok(format!(
                    "operator  {}\nstate     {}\nvalue     {value:.10}\nbound     {} (exhaustive over 2^{} assignments)\nD         {d:.10}\n",
                    op.label(),
                    s.label,
                    search.bound,
                    search.observables
                )),
            }
        }
        Command::Noise(NoiseCmd::Sweep { state, op, grid }) => {
            let s = load_state(state)?;
            let op = load_operator(op)?;
            check_sizes(&op, &s)?;
            let grid: Grid = grid.parse()?;
            let curve = decay_curve(&op, &op.ideal_values(&s.state)?, grid)?;
            match format {
                Some(Format::Table) => Ok(curve.to_table()),
                _ => Ok(curve.to_csv()),
            }
        }
        Command::Noise(NoiseCmd::Threshold { state, op }) => {
            let s = load_state(state)?;
            let op = with_bound(load_operator(op)?)?;
            check_sizes(&op, &s)?;
            let t = violation_threshold(&op, &op.ideal_values(&s.state)?)?;
            match format {
                Some(Format::Structured) => Ok(t.to_document()),
                Some(Format::Csv) => Ok(format!(
                    "operator,bound,p_star,iterations,normalized_bound\n{},{},{},{},{}\n",
                    csv_escape(&t.operator),
                    t.bound,
                    t.p_star,
                    t.iterations,
                    t.normalized_bound
                )),
                _ => Ok(format!(
                    "operator    {}\nbound       {}\np*          {:.9}\niterations  {}\nnormalized  {:.6} of the noiseless value\n",
                    t.operator, t.bound, t.p_star, t.iterations, t.normalized_bound
                )),
            }
        }
        Command::Fidelity(args) => {
            let s = load_state(&args.state)?;
            let group = StabilizerGroup::new(s.generators.clone())?;
            let noise = args.noise.build(s.state.n())?;
            let noiseless = noise.retention().iter().all(|&p| p == 1.0);
            let f = if noiseless {
                exact_fidelity(&s.state, &group)?
            } else {
                exact_fidelity(&apply_depolarizing_dm(&s.state, &noise)?, &group)?
            };
            let gme = gme_check(f.clamp(0.0, 1.0))?;
            let mut out = String::new();
            match format {
                Some(Format::Csv) => {
                    let _ = writeln!(out, "state,fidelity,gme");
                    let _ = writeln!(out, "{},{f},{gme}", csv_escape(&s.label));
                }
                Some(Format::Structured) => {
                    let _ = writeln!(out, "state = {:?}\nfidelity = {f}\ngme = {gme}", s.label);
                }
                _ => {
                    let _ = writeln!(out, "state     {}", s.label);
                    let _ = writeln!(out, "fidelity  {f:.10}");
                    let _ = writeln!(
                        out,
                        "GME       {}",
                        if gme { "yes (F > 1/2)" } else { "not certified (F <= 1/2)" }
                    );
                }
            }
            if args.dump_group {
                let order = parse_order(&args.order, &QubitOrder::canonical(s.state.n()))?;
                out.push_str(&group.dump(&order)?);
            }
            Ok(out)
        }
        Command::Experiment(ExperimentCmd::Simulate {
            state,
            op,
            noise,
            events,
            seed,
        }) => {
            let s = load_state(state)?;
            let op = load_operator(op)?;
            check_sizes(&op, &s)?;
            let noise = noise.build(s.state.n())?;
            let records = simulate_operator(&s.state, &noise, &op, *events, *seed)?;
            let order = op.display_order();
            let mut out = String::new();
            let _ = writeln!(out, "# simulated {} on {} seed={seed} mean_events={events}", op.label(), s.label);
            let _ = writeln!(out, "# order={order}");
            let _ = writeln!(out, "observable,value,sigma,events");
            for r in &records {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.term.format(order)?,
                    r.estimate,
                    r.sigma,
                    r.events.unwrap_or(0)
                );
            }
            Ok(out)
        }
        Command::Experiment(ExperimentCmd::Ingest { input, order }) => {
            let order = order.as_deref().map(str::parse::<QubitOrder>).transpose()?;
            let table = ingest_table(&read(input)?, order.as_ref())?;
            let mut out = String::new();
            match format {
                Some(Format::Csv) => {
                    let _ = writeln!(out, "# order={}", table.order);
                    let _ = writeln!(out, "observable,value,sigma");
                    for r in &table.records {
                        let _ = writeln!(out, "{},{},{}", r.term.format(&table.order)?, r.estimate, r.sigma);
                    }
                }
                _ => {
                    let _ = writeln!(out, "{} records, qubit order {}", table.records.len(), table.order);
                    for r in &table.records {
                        let _ = writeln!(
                            out,
                            "  {:>9}  canonical {}  weight {}  {:.2} +/- {:.2}",
                            r.term.format(&table.order)?,
                            r.term,
                            r.term.weight(),
                            r.estimate,
                            r.sigma
                        );
                    }
                }
            }
            Ok(out)
        }
        Command::Experiment(ExperimentCmd::Aggregate {
            input,
            order,
            bound,
            op,
            reported,
        }) => {
            let order = order.as_deref().map(str::parse::<QubitOrder>).transpose()?;
            let table = ingest_table(&read(input)?, order.as_ref())?;
            let reference = if op.operator.is_some() || op.operator_file.is_some() {
                Some(with_bound(load_operator(op)?)?)
            } else {
                None
            };
            let bound = match (bound, &reference) {
                (Some(b), _) => *b,
                (None, Some(r)) => r.lhv_bound().expect("bound computed"),
                (None, None) => return Err(CliError::Usage("--bound or --operator is required".into())),
            };
            let agg = aggregate_bell(&table.records, bound, reference.as_ref())?;
            let mut out = match format {
                Some(Format::Structured) => format!("{}\n", agg.to_json()),
                Some(Format::Csv) => format!(
                    "value,sigma,bound,sigmas_above,D,sigma_D\n{},{},{},{},{},{}\n",
                    agg.value, agg.sigma, agg.bound, agg.sigmas_above, agg.ratio_d, agg.sigma_d
                ),
                _ => agg.to_text(),
            };
            if let Some(r) = reported {
                let diff = agg.value - r;
                let line = format!(
                    "reported {r}, reconstructed {:.4}, difference {diff:+.4}{}",
                    agg.value,
                    if diff.abs() > 1e-9 { " (rounded table entries)" } else { "" }
                );
                if format == Some(Format::Structured) || format == Some(Format::Csv) {
                    eprintln!("{line}");
                } else {
                    let _ = writeln!(out, "{line}");
                }
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(doc) => {
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, doc) {
                    let err = CliError::Io(path.clone(), e);
                    eprintln!("error: {err}");
                    return ExitCode::from(err.exit_code());
                }
            } else {
                print!("{doc}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
