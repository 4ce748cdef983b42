use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fragalign::alignment::validate_alignment;
use fragalign::auxiliary::{
    advanced_markings, auxiliary_to_dot, baseline_markings, build_auxiliary_net, filtered_markings,
};
use fragalign::bench::{run_bench, BenchConfig};
use fragalign::net::{load_pnml, net_to_dot, DEFAULT_STATE_CAP};
use fragalign::trace::{
    load_log, sample_infixes, sample_postfixes, simulate_log, write_jsonl, write_xes, SimulationConfig,
};
use fragalign::tree::{load_ptml, parse_tree_text, to_wfnet, TreeNetBinding};
use fragalign::{align, AcceptingPetriNet, AlignConfig, AlignmentKind, Method, Model, Trace, TraceKind};

const EXIT_IO: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fragalign",
    version,
    about = "Alignments of trace fragments against process models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align one trace or fragment against a model.
    Align(AlignArgs),
    /// Sample fragments from a log and align them with several methods.
    Bench(BenchArgs),
    /// Check that a model is a sound workflow net.
    Validate(ModelArgs),
    /// Print a model, or its auxiliary net for a fragment, in Graphviz format.
    Dot(DotArgs),
    /// Play out a model into a synthetic log.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelFormat {
    Pnml,
    Ptree,
    Ptml,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Pretty,
    Json,
}

#[derive(Args)]
struct ModelArgs {
    /// Model file (.pnml, .ptml, or a textual process tree).
    #[arg(long)]
    model: PathBuf,
    /// Model format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<ModelFormat>,
}

#[derive(Args)]
struct AlignArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated activities, e.g. "d,g".
    #[arg(long, conflicts_with = "trace_file")]
    trace: Option<String>,
    /// JSON file holding `["a", ...]` or `{"activities": [...]}`.
    #[arg(long)]
    trace_file: Option<PathBuf>,
    #[arg(long, default_value = "complete", value_parser = parse_kind)]
    kind: AlignmentKind,
    /// Relevant-marking method; advanced for trees, filtered for nets by default.
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
    #[arg(long, value_enum, default_value = "pretty")]
    output: Output,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Event log (.xes, .csv or .jsonl).
    #[arg(long)]
    log: PathBuf,
    /// Number of fragments to sample.
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    min_len: usize,
    #[arg(long, default_value_t = 5)]
    max_len: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated methods; all applicable ones by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    methods: Vec<Method>,
    /// infix or postfix.
    #[arg(long, default_value = "infix", value_parser = parse_kind)]
    kind: AlignmentKind,
    /// Per-instance CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the wall-time columns out of the CSV.
    #[arg(long)]
    no_timing: bool,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct DotArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Draw the auxiliary net over all reachable markings for this fragment.
    #[arg(long)]
    aux: bool,
    /// Fragment used with --aux.
    #[arg(long, default_value = "")]
    trace: String,
    /// Method whose markings are highlighted with --aux.
    #[arg(long, default_value = "filtered", value_parser = parse_method)]
    method: Method,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 50)]
    traces: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-event probability of a deletion, insertion or swap.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Output file; `.xes` writes XES, anything else JSON lines.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<AlignmentKind, String> {
    s.parse().map_err(|e: fragalign::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: fragalign::Error| e.to_string())
}

enum LoadedModel {
    Net(AcceptingPetriNet),
    Tree(TreeNetBinding),
}

impl LoadedModel {
    fn as_model(&self) -> Model<'_> {
        match self {
            LoadedModel::Net(net) => Model::Net(net),
            LoadedModel::Tree(binding) => Model::Tree(binding),
        }
    }

    fn default_method(&self) -> Method {
        match self {
            LoadedModel::Net(_) => Method::Filtered,
            LoadedModel::Tree(_) => Method::Advanced,
        }
    }
}

fn load_model(args: &ModelArgs) -> anyhow::Result<LoadedModel> {
    let path = &args.model;
    let format = match args.format {
        Some(f) => f,
        None => match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("pnml") => ModelFormat::Pnml,
            Some("ptml") => ModelFormat::Ptml,
            _ => ModelFormat::Ptree,
        },
    };
    let context = || format!("loading model {}", path.display());
    Ok(match format {
        ModelFormat::Pnml => LoadedModel::Net(load_pnml(path).with_context(context)?),
        ModelFormat::Ptml => LoadedModel::Tree(to_wfnet(&load_ptml(path).with_context(context)?)),
        ModelFormat::Ptree => {
            let text = std::fs::read_to_string(path).with_context(context)?;
            LoadedModel::Tree(to_wfnet(&parse_tree_text(text.trim()).with_context(context)?))
        }
    })
}

fn state_cap() -> anyhow::Result<usize> {
    match std::env::var("FRAGALIGN_STATE_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("FRAGALIGN_STATE_CAP=`{v}` is not a number")),
        Err(_) => Ok(DEFAULT_STATE_CAP),
    }
}

fn trace_kind(kind: AlignmentKind) -> TraceKind {
    match kind {
        AlignmentKind::Complete | AlignmentKind::Prefix => TraceKind::Complete,
        AlignmentKind::Infix => TraceKind::Infix,
        AlignmentKind::Postfix => TraceKind::Postfix,
    }
}

fn output_stream(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_align(args: AlignArgs) -> anyhow::Result<u8> {
    let model = load_model(&args.model)?;
    let kind = trace_kind(args.kind);
    let trace = match (&args.trace, &args.trace_file) {
        (Some(text), _) => Trace::parse_inline(text, kind)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Trace::from_json(&text, kind).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, None) => bail!("one of --trace or --trace-file is required"),
    };
    let method = args.method.unwrap_or_else(|| model.default_method());
    let cap = state_cap()?;
    let config = AlignConfig { state_cap: cap };
    let alignment = align(model.as_model(), &trace, args.kind, method, &config)?;
    let net = model.as_model().net();
    let mut out = io::stdout().lock();
    match args.output {
        Output::Pretty => write!(out, "{}", alignment.render_pretty(net))?,
        Output::Json => writeln!(out, "{}", serde_json::to_string_pretty(&alignment.to_json(net))?)?,
    }
    let report = validate_alignment(&alignment, net, &trace, cap);
    if !report.is_valid() {
        eprintln!("invalid alignment:\n{report}");
        return Ok(EXIT_INVALID);
    }
    Ok(0)
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<u8> {
    let model = load_model(&args.model)?;
    let log = load_log(&args.log).with_context(|| format!("loading log {}", args.log.display()))?;
    let fragments = match args.kind {
        AlignmentKind::Infix => sample_infixes(&log, args.n, args.min_len, args.max_len, args.seed)?,
        AlignmentKind::Postfix => sample_postfixes(&log, args.n, args.min_len, args.max_len, args.seed)?,
        other => bail!("bench samples fragments; kind must be infix or postfix, not {other}"),
    };
    let methods = if args.methods.is_empty() {
        match model {
            LoadedModel::Net(_) => vec![Method::Baseline, Method::Filtered],
            LoadedModel::Tree(_) => Method::ALL.to_vec(),
        }
    } else {
        args.methods
    };
    let config = BenchConfig {
        methods,
        kind: args.kind,
        jobs: args.jobs,
        align: AlignConfig {
            state_cap: state_cap()?,
        },
    };
    let report = run_bench(model.as_model(), &fragments, &config)?;
    if let Some(path) = &args.out {
        let out = output_stream(Some(path))?;
        report.write_csv(out, !args.no_timing)?;
    }
    print!("{}", report.render_summary());
    if !report.mismatches.is_empty() {
        for &i in &report.mismatches {
            eprintln!("cost mismatch on instance {i}: {}", fragments[i]);
        }
        return Ok(EXIT_MISMATCH);
    }
    Ok(0)
}

fn cmd_validate(args: ModelArgs) -> anyhow::Result<u8> {
    let model = load_model(&args)?;
    let report = model.as_model().net().validate_workflow_net(state_cap()?);
    println!("{report}");
    Ok(if report.is_valid() { 0 } else { EXIT_INVALID })
}

fn cmd_dot(args: DotArgs) -> anyhow::Result<u8> {
    let model = load_model(&args.model)?;
    let net = model.as_model().net();
    let dot = if args.aux {
        let cap = state_cap()?;
        let trace = Trace::parse_inline(&args.trace, TraceKind::Infix)?;
        let all = baseline_markings(net, cap)?;
        let aux = build_auxiliary_net(net, &all)?;
        let kept = match (args.method, &model) {
            (Method::Baseline, _) => None,
            (Method::Filtered, _) => Some(filtered_markings(net, &trace, cap)?.markings),
            (Method::Advanced, LoadedModel::Tree(binding)) => Some(advanced_markings(binding, &trace).markings),
            (Method::Advanced, LoadedModel::Net(_)) => return Err(fragalign::Error::MethodRequiresTree.into()),
        };
        auxiliary_to_dot(&aux, kept.as_ref())
    } else {
        net_to_dot(net, |_| None)
    };
    print!("{dot}");
    Ok(0)
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<u8> {
    let model = load_model(&args.model)?;
    let config = SimulationConfig {
        traces: args.traces,
        seed: args.seed,
        noise: args.noise,
        ..SimulationConfig::default()
    };
    let log = simulate_log(model.as_model().net(), &config)?;
    let xes = args
        .out
        .as_deref()
        .and_then(|p| p.extension())
        .is_some_and(|e| e.eq_ignore_ascii_case("xes"));
    let mut out = output_stream(args.out.as_deref())?;
    if xes {
        write_xes(&log, &mut out)?;
    } else {
        write_jsonl(&log, &mut out)?;
    }
    out.flush()?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Align(args) => cmd_align(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Dot(args) => cmd_dot(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_IO)
        }
    }
}
