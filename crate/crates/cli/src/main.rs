//! Command line front end: parse contexts and lattices, enumerate
//! concepts, run the local-congruence reduction pipeline, classify
//! partitions and export DOT drawings.
//!
//! Exit codes are stable for scripting: 0 success, 2 input parse error,
//! 3 structurally invalid lattice or partition, 4 pipeline error.

mod dot;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use latcon::closure::enumerate_partitions;
use latcon::fca::context::{parse_cxt, ConceptLattice, FormalContext};
use latcon::fca::fuzzy::{FuzzyConceptLattice, FuzzyContext, FuzzyContextFile};
use latcon::lattice::{FiniteLattice, LatticeFile};
use latcon::partition::{Partition, PartitionFile};
use latcon::quotient::{all_cycles_closed, CycleCheck};
use latcon::reduce::{reduce_partition, ReductionReport};
use latcon::{FcaError, LatticeError, PartitionError};

#[derive(Parser)]
#[command(name = "latcon", version, about = "Concept lattices and local-congruence reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Cxt,
    FuzzyJson,
    LatticeJson,
}

#[derive(Subcommand)]
enum Command {
    /// List the concepts of a context and the lattice they form
    Concepts {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduce a concept lattice by an attribute subset, or any lattice by a
    /// starting partition
    Reduce {
        /// Context file (.cxt or fuzzy context JSON)
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Attribute labels to keep, comma separated
        #[arg(short = 'D', long = "attributes", value_delimiter = ',')]
        attributes: Vec<String>,
        /// Lattice JSON input; use together with --partition
        #[arg(long, conflicts_with = "input")]
        lattice: Option<PathBuf>,
        /// Starting partition JSON for --lattice mode
        #[arg(long, requires = "lattice")]
        partition: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write three DOT files next to the report (start, final, quotient)
        #[arg(long)]
        dot: bool,
        /// Write the closure traces as JSON lines to this file
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Verify the result against the exhaustive enumeration oracle
        #[arg(long)]
        oracle_check: bool,
        /// Largest lattice the oracle check will attempt
        #[arg(long, default_value_t = 8)]
        max_oracle_n: usize,
    },
    /// Classify a partition of a lattice
    Check {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// List every local congruence of a small lattice
    EnumerateLcon {
        #[arg(long)]
        lattice: PathBuf,
        /// Largest lattice to enumerate over
        #[arg(long, default_value_t = 8)]
        cap: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit a DOT drawing of a lattice, optionally clustered by a partition
    ExportDot {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum CliError {
    Parse(String),
    Invalid(String),
    Pipeline(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Pipeline(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Invalid(m) | CliError::Pipeline(m) => write!(f, "{m}"),
        }
    }
}

impl From<FcaError> for CliError {
    fn from(e: FcaError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Concepts { input, format, output } => cmd_concepts(&input, format, output),
        Command::Reduce {
            input,
            format,
            attributes,
            lattice,
            partition,
            output,
            dot,
            trace,
            oracle_check,
            max_oracle_n,
        } => cmd_reduce(ReduceArgs {
            input,
            format,
            attributes,
            lattice,
            partition,
            output,
            dot,
            trace,
            oracle_check,
            max_oracle_n,
        }),
        Command::Check { lattice, partition } => cmd_check(&lattice, &partition),
        Command::EnumerateLcon { lattice, cap, output } => {
            cmd_enumerate_lcon(&lattice, cap, output)
        }
        Command::ExportDot { input, format, partition, output } => {
            cmd_export_dot(&input, format, partition, output)
        }
    }
}

// ----- input loading -----

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn sniff_format(path: &Path, explicit: Option<Format>) -> Result<Format, CliError> {
    if let Some(f) = explicit {
        return Ok(f);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("cxt") => Ok(Format::Cxt),
        Some("json") => {
            let value: serde_json::Value = serde_json::from_str(&read_file(path)?)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            if value.get("chain").is_some() {
                Ok(Format::FuzzyJson)
            } else if value.get("covers").is_some() {
                Ok(Format::LatticeJson)
            } else {
                Err(CliError::Parse(format!(
                    "{}: cannot tell the JSON kind, pass --format",
                    path.display()
                )))
            }
        }
        _ => Err(CliError::Parse(format!(
            "{}: unknown extension, pass --format",
            path.display()
        ))),
    }
}

enum Loaded {
    Crisp(FormalContext, ConceptLattice),
    Fuzzy(FuzzyContext, FuzzyConceptLattice),
}

fn load_context(path: &Path, format: Option<Format>) -> Result<Loaded, CliError> {
    match sniff_format(path, format)? {
        Format::Cxt => {
            let ctx = parse_cxt(&read_file(path)?)?;
            let cl = ctx.concepts()?;
            Ok(Loaded::Crisp(ctx, cl))
        }
        Format::FuzzyJson => {
            let file: FuzzyContextFile = serde_json::from_str(&read_file(path)?)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            let ctx = FuzzyContext::from_file(&file)?;
            let cl = ctx.concepts()?;
            Ok(Loaded::Fuzzy(ctx, cl))
        }
        Format::LatticeJson => Err(CliError::Parse(format!(
            "{}: a lattice file needs the --lattice flag here",
            path.display()
        ))),
    }
}

fn load_lattice(path: &Path) -> Result<FiniteLattice, CliError> {
    let file: LatticeFile = serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(FiniteLattice::from_file(&file)?)
}

fn load_partition(lat: &FiniteLattice, path: &Path) -> Result<Partition, CliError> {
    let file: PartitionFile = serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(Partition::from_file(lat, &file)?)
}

fn write_output(output: Option<&Path>, content: &str) -> Result<(), CliError> {
    match output {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Pipeline(format!("cannot write {}: {e}", path.display()))),
    }
}

fn out_dir() -> PathBuf {
    std::env::var_os("LATCON_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("latcon")
        .to_string()
}

// ----- concepts -----

fn cmd_concepts(
    input: &Path,
    format: Option<Format>,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let listing = match load_context(input, format)? {
        Loaded::Crisp(ctx, cl) => {
            let concepts: Vec<serde_json::Value> = cl
                .concepts
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    serde_json::json!({
                        "index": i,
                        "extent": c.extent.iter().map(|o| &ctx.objects()[o]).collect::<Vec<_>>(),
                        "intent": c.intent.iter().map(|a| &ctx.attributes()[a]).collect::<Vec<_>>(),
                    })
                })
                .collect();
            serde_json::json!({
                "input": stem_of(input),
                "kind": "crisp",
                "attributes": ctx.attributes(),
                "objects": ctx.objects(),
                "concepts": concepts,
                "lattice": cl.lattice.to_file(),
            })
        }
        Loaded::Fuzzy(ctx, cl) => {
            let concepts: Vec<serde_json::Value> = cl
                .concepts
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    serde_json::json!({
                        "index": i,
                        "extent": ctx.values_of(&c.extent),
                        "intent": ctx.values_of(&c.intent),
                    })
                })
                .collect();
            serde_json::json!({
                "input": stem_of(input),
                "kind": "fuzzy",
                "chain": ctx.chain().values(),
                "attributes": ctx.attributes(),
                "objects": ctx.objects(),
                "concepts": concepts,
                "lattice": cl.lattice.to_file(),
            })
        }
    };
    let text =
        serde_json::to_string_pretty(&listing).map_err(|e| CliError::Pipeline(e.to_string()))?;
    write_output(output.as_deref(), &text)
}

// ----- reduce -----

struct ReduceArgs {
    input: Option<PathBuf>,
    format: Option<Format>,
    attributes: Vec<String>,
    lattice: Option<PathBuf>,
    partition: Option<PathBuf>,
    output: Option<PathBuf>,
    dot: bool,
    trace: Option<PathBuf>,
    oracle_check: bool,
    max_oracle_n: usize,
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), CliError> {
    let (lat, report, source) = match (&args.input, &args.lattice) {
        (Some(input), None) => {
            if args.attributes.is_empty() {
                return Err(CliError::Parse(
                    "reduce needs a nonempty attribute subset, pass -D".into(),
                ));
            }
            let labels: Vec<&str> = args.attributes.iter().map(|s| s.as_str()).collect();
            match load_context(input, args.format)? {
                Loaded::Crisp(ctx, cl) => {
                    let report = latcon::reduce(&cl, &ctx, &labels, stem_of(input))?;
                    (cl.lattice, report, input.clone())
                }
                Loaded::Fuzzy(ctx, cl) => {
                    let report = latcon::reduce_fuzzy(&cl, &ctx, &labels, stem_of(input))?;
                    (cl.lattice, report, input.clone())
                }
            }
        }
        (None, Some(lattice_path)) => {
            let partition_path = args.partition.as_ref().ok_or_else(|| {
                CliError::Parse("--lattice mode needs --partition".into())
            })?;
            if !args.attributes.is_empty() {
                return Err(CliError::Parse(
                    "-D applies to contexts, not to --lattice mode".into(),
                ));
            }
            let lat = load_lattice(lattice_path)?;
            let start = load_partition(&lat, partition_path)?;
            let report = reduce_partition(&lat, start, stem_of(lattice_path), None);
            (lat, report, lattice_path.clone())
        }
        _ => {
            return Err(CliError::Parse(
                "pass either a context input or --lattice with --partition".into(),
            ))
        }
    };

    if args.oracle_check {
        oracle_check(&lat, &report, args.max_oracle_n)?;
    }

    if let Some(trace_path) = &args.trace {
        let mut lines = String::new();
        for (stage, trace) in report.traces() {
            for line in trace.to_json_lines(&lat).lines() {
                let mut value: serde_json::Value =
                    serde_json::from_str(line).expect("trace lines are json");
                value["stage"] = serde_json::Value::String(stage.clone());
                lines.push_str(&value.to_string());
                lines.push('\n');
            }
        }
        std::fs::write(trace_path, lines)
            .map_err(|e| CliError::Pipeline(format!("cannot write trace: {e}")))?;
        eprintln!("wrote {}", trace_path.display());
    }

    if args.dot {
        let dir = out_dir();
        let stem = stem_of(&source);
        let files = [
            (
                format!("{stem}_start.dot"),
                dot::lattice_dot(
                    &stem,
                    &label_vec(&lat),
                    lat.covers(),
                    Some(report.start.blocks()),
                ),
            ),
            (
                format!("{stem}_final.dot"),
                dot::lattice_dot(
                    &stem,
                    &label_vec(&lat),
                    lat.covers(),
                    Some(report.final_delta.blocks()),
                ),
            ),
            (
                format!("{stem}_quotient.dot"),
                dot::lattice_dot(
                    &format!("{stem} quotient"),
                    &report.quotient.labels,
                    report.quotient.covers(),
                    None,
                ),
            ),
        ];
        for (name, content) in files {
            let path = dir.join(name);
            std::fs::write(&path, content)
                .map_err(|e| CliError::Pipeline(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
    }

    let text = serde_json::to_string_pretty(&report.to_file(&lat))
        .map_err(|e| CliError::Pipeline(e.to_string()))?;
    write_output(args.output.as_deref(), &text)
}

fn label_vec(lat: &FiniteLattice) -> Vec<String> {
    lat.labels().to_vec()
}

/// Compares the pipeline result with the least cycle-closed local
/// congruence found by exhaustive enumeration.
fn oracle_check(
    lat: &FiniteLattice,
    report: &ReductionReport,
    max_n: usize,
) -> Result<(), CliError> {
    if lat.n() > max_n {
        eprintln!(
            "oracle check skipped: {} elements exceed --max-oracle-n {max_n}",
            lat.n()
        );
        return Ok(());
    }
    let candidates: Vec<Partition> = enumerate_partitions(lat.n())
        .filter(|q| q.is_local_congruence(lat))
        .filter(|q| report.start.refines(q))
        .filter(|q| all_cycles_closed(lat, q).unwrap().is_closed())
        .collect();
    let least = candidates.iter().find(|q| candidates.iter().all(|o| q.refines(o)));
    match least {
        Some(least) if *least == report.final_delta => {
            eprintln!("oracle check passed over {} candidates", candidates.len());
            Ok(())
        }
        Some(_) => Err(CliError::Pipeline(
            "oracle check failed: pipeline result is not the least cycle-closed local congruence"
                .into(),
        )),
        None => {
            let minimal = candidates
                .iter()
                .all(|o| !o.refines(&report.final_delta) || *o == report.final_delta);
            if minimal {
                eprintln!("oracle check: no unique least candidate; the result is minimal");
                Ok(())
            } else {
                Err(CliError::Pipeline(
                    "oracle check failed: a strictly finer cycle-closed local congruence exists"
                        .into(),
                ))
            }
        }
    }
}

// ----- check -----

fn cmd_check(lattice: &Path, partition: &Path) -> Result<(), CliError> {
    let lat = load_lattice(lattice)?;
    let p = load_partition(&lat, partition)?;
    if let Some(violation) = p.local_violation(&lat) {
        use latcon::partition::LocalViolation;
        println!("classification: not a local congruence");
        match violation {
            LocalViolation::Sublattice(v) => println!(
                "witness: {} of {} and {} escapes their block (lands on {})",
                if v.is_meet { "meet" } else { "join" },
                lat.label(v.a),
                lat.label(v.b),
                lat.label(v.escaped),
            ),
            LocalViolation::Convexity(v) => println!(
                "witness: {} lies between {} and {} but outside their block",
                lat.label(v.missing),
                lat.label(v.a),
                lat.label(v.b),
            ),
        }
        return Ok(());
    }
    match p.quadrilateral_witness(&lat) {
        None => println!("classification: congruence"),
        Some(q) => {
            println!("classification: local congruence (not a congruence)");
            println!(
                "quadrilateral witness: <{},{};{},{}>",
                lat.label(q.a),
                lat.label(q.b),
                lat.label(q.c),
                lat.label(q.d),
            );
        }
    }
    match all_cycles_closed(&lat, &p).expect("local congruence") {
        CycleCheck::AllClosed => println!("cycles: closed (quotient is a poset)"),
        CycleCheck::Open(cycle) => {
            println!("cycles: NOT closed");
            let names: Vec<&str> = cycle.iter().map(|&e| lat.label(e)).collect();
            println!("witness cycle: {}", names.join(" -> "));
        }
    }
    Ok(())
}

// ----- enumerate-lcon -----

fn cmd_enumerate_lcon(
    lattice: &Path,
    cap: usize,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let lat = load_lattice(lattice)?;
    let lcons = latcon::closure::enumerate_local_congruences_capped(&lat, cap)
        .map_err(|e| CliError::Pipeline(e.to_string()))?;
    let listing = serde_json::json!({
        "lattice": stem_of(lattice),
        "count": lcons.len(),
        "local_congruences": lcons
            .iter()
            .map(|p| p.to_file(&lat))
            .collect::<Vec<PartitionFile>>(),
    });
    let text =
        serde_json::to_string_pretty(&listing).map_err(|e| CliError::Pipeline(e.to_string()))?;
    write_output(output.as_deref(), &text)
}

// ----- export-dot -----

fn cmd_export_dot(
    input: &Path,
    format: Option<Format>,
    partition: Option<PathBuf>,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let (lat, name) = match sniff_format(input, format)? {
        Format::LatticeJson => (load_lattice(input)?, stem_of(input)),
        _ => {
            let lat = match load_context(input, format)? {
                Loaded::Crisp(_, cl) => cl.lattice,
                Loaded::Fuzzy(_, cl) => cl.lattice,
            };
            (lat, format!("{} concepts", stem_of(input)))
        }
    };
    let clusters = match &partition {
        None => None,
        Some(path) => Some(load_partition(&lat, path)?),
    };
    let text = dot::lattice_dot(
        &name,
        &label_vec(&lat),
        lat.covers(),
        clusters.as_ref().map(|p| p.blocks()),
    );
    write_output(output.as_deref(), text.trim_end())
}
