//! Command-line front end for the peeling decompositions.
//!
//! Exit codes: 0 on success, 1 on domain errors (bad data, guard limits,
//! failed verification), 2 on usage errors.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tempeel::components::write_partition;
use tempeel::decompose::write_result;
use tempeel::graph::{load_graph_auto, load_graph_path, LoadOptions, LoadReport};
use tempeel::oracle::{oracle_components, oracle_decompose};
use tempeel::synth::{random_graph, SynthSpec};
use tempeel::{
    component_label_report, delta_connected_components, delta_stats, extract_subgraph,
    iet_percentiles, kd_core_decompose, kd_truss_decompose, DecompositionKind, ExtractMode,
    TemporalGraph, Time, TimeInterval,
};

/// Environment variable overriding where staged output files are written
/// before the final rename.
const TMPDIR_ENV: &str = "TEMPEEL_TMPDIR";

#[derive(Parser)]
#[command(
    name = "tempeel",
    version,
    about = "Peeling decompositions of temporal networks: (k,Δ)-cores, (k,Δ)-trusses, Δ-connected components"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute per-edge (k,Δ)-core numbers
    Core(DecomposeArgs),
    /// Compute per-edge (k,Δ)-truss numbers
    Truss(DecomposeArgs),
    /// Extract the edges at a core/truss level (a shell or a full core)
    Shells(ShellsArgs),
    /// Split the graph (or one of its cores/trusses) into Δ-connected components
    Components(ComponentsArgs),
    /// Inter-event-time percentiles and per-Δ degree/support statistics
    Stats(StatsArgs),
    /// Cross-check the fast decompositions against the brute-force oracle
    Verify(VerifyArgs),
    /// Generate a synthetic random temporal graph
    Generate(GenerateArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input edge list file, plain text or gzip; "-" reads standard input
    input: String,
    /// Parse a fourth column as an integer edge label
    #[arg(long)]
    labeled: bool,
    /// Keep only edges with timestamp in the closed interval A:B
    #[arg(long, value_name = "A:B", value_parser = parse_interval)]
    interval: Option<TimeInterval>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Temporal distance: an integer, or a percentile of the inter-event
    /// times like p50 (p10/p25/p50/p75 or any pNN.N)
    #[arg(long)]
    delta: DeltaSpec,
    /// Output file (standard output when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ShellsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Which decomposition to extract from
    #[arg(long, value_enum, default_value_t = KindArg::Core)]
    kind: KindArg,
    #[arg(long)]
    delta: DeltaSpec,
    /// Level to extract
    #[arg(short, long)]
    k: u64,
    /// exactly = the k-shell; at-least = the whole (k,Δ)-core/truss
    #[arg(long, value_enum, default_value_t = ModeArg::Exactly)]
    mode: ModeArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComponentsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    delta: DeltaSpec,
    /// First restrict to the (K,Δ)-core and partition that
    #[arg(long, value_name = "K", conflicts_with = "within_truss")]
    within_core: Option<u64>,
    /// First restrict to the (K,Δ)-truss and partition that
    #[arg(long, value_name = "K", conflicts_with = "within_core")]
    within_truss: Option<u64>,
    /// Append a per-component label census (requires --labeled input)
    #[arg(long)]
    label_report: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Percentile list (percent values) for the IET table
    #[arg(
        long,
        value_name = "LIST",
        require_equals = true,
        num_args = 0..=1,
        default_missing_value = "10,25,50,75"
    )]
    percentiles: Option<String>,
    /// Compute degree/support statistics at these Δ (repeatable); defaults
    /// to the resolved percentile values
    #[arg(long)]
    delta: Vec<DeltaSpec>,
    /// Emit comma-separated instead of tab-separated tables
    #[arg(long)]
    csv: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// What to verify
    #[arg(long, value_enum, default_value_t = VerifyKind::All)]
    kind: VerifyKind,
    #[arg(long)]
    delta: DeltaSpec,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of nodes to draw endpoints from
    #[arg(long)]
    nodes: u32,
    /// Number of temporal edges
    #[arg(long)]
    edges: u32,
    /// Timestamps are uniform in 0..=SPAN
    #[arg(long)]
    span: u64,
    /// Attach claim/fact labels (claim-heavy, 4:1)
    #[arg(long)]
    labeled: bool,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Core,
    Truss,
}

impl From<KindArg> for DecompositionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Core => DecompositionKind::Core,
            KindArg::Truss => DecompositionKind::Truss,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exactly,
    AtLeast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    Core,
    Truss,
    Components,
    All,
}

/// Either an explicit Δ or a percentile of the IETs resolved at run time.
#[derive(Clone, Debug)]
enum DeltaSpec {
    Explicit(Time),
    Percentile { fraction: f64, raw: String },
}

impl std::str::FromStr for DeltaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix(['p', 'P']) {
            let percent: f64 = rest
                .parse()
                .map_err(|_| format!("`{s}` is not a percentile spec like p50"))?;
            if !(percent > 0.0 && percent <= 100.0) {
                return Err(format!("percentile {percent} outside (0, 100]"));
            }
            Ok(DeltaSpec::Percentile {
                fraction: percent / 100.0,
                raw: s.to_string(),
            })
        } else {
            let v: Time = s
                .parse()
                .map_err(|_| format!("`{s}` is neither an integer Δ nor a percentile spec"))?;
            if v < 0 {
                return Err("Δ must be non-negative".to_string());
            }
            Ok(DeltaSpec::Explicit(v))
        }
    }
}

impl DeltaSpec {
    /// Resolves to a concrete Δ; percentile specs are echoed into output
    /// headers so downstream joins know the value used.
    fn resolve(&self, g: &TemporalGraph) -> Result<(Time, Option<String>)> {
        match self {
            DeltaSpec::Explicit(d) => Ok((*d, None)),
            DeltaSpec::Percentile { fraction, raw } => {
                let summary =
                    iet_percentiles(g, &[*fraction]).with_context(|| format!("resolving {raw}"))?;
                let delta = summary.percentile(*fraction).expect("requested fraction");
                Ok((delta, Some(format!("delta_spec={raw} resolved_delta={delta}"))))
            }
        }
    }
}

fn format_percent(fraction: f64) -> String {
    let p = fraction * 100.0;
    if (p - p.round()).abs() < 1e-9 {
        format!("{}", p.round() as i64)
    } else {
        format!("{p}")
    }
}

fn parse_interval(s: &str) -> Result<TimeInterval, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| "expected A:B".to_string())?;
    let alpha: Time = a.trim().parse().map_err(|_| format!("bad integer `{a}`"))?;
    let beta: Time = b.trim().parse().map_err(|_| format!("bad integer `{b}`"))?;
    TimeInterval::new(alpha, beta).map_err(|e| e.to_string())
}

fn load_input(args: &InputArgs) -> Result<TemporalGraph> {
    let options = LoadOptions {
        interval: args.interval,
        labeled: args.labeled,
    };
    let (graph, report): (TemporalGraph, LoadReport) = if args.input == "-" {
        let stdin = io::stdin();
        load_graph_auto(stdin.lock(), &options)?
    } else {
        load_graph_path(&args.input, &options).with_context(|| format!("loading {}", args.input))?
    };
    eprintln!("tempeel: {report}, {} nodes", graph.node_count());
    Ok(graph)
}

/// Writes through a staging file and renames it into place. The staging
/// directory defaults to the output's parent and can be overridden with
/// TEMPEEL_TMPDIR.
fn write_output<F>(path: Option<&Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write(&mut out)?;
            out.flush()?;
        }
        Some(path) => {
            let staging_dir = std::env::var_os(TMPDIR_ENV)
                .map(PathBuf::from)
                .or_else(|| path.parent().map(Path::to_path_buf))
                .filter(|d| !d.as_os_str().is_empty())
                .unwrap_or_else(|| PathBuf::from("."));
            let name = path
                .file_name()
                .ok_or_else(|| anyhow!("output path has no file name"))?;
            let staged = staging_dir.join(format!(
                ".{}.tmp.{}",
                name.to_string_lossy(),
                std::process::id()
            ));
            {
                let mut out = BufWriter::new(
                    File::create(&staged)
                        .with_context(|| format!("creating {}", staged.display()))?,
                );
                write(&mut out)?;
                out.flush()?;
            }
            if fs::rename(&staged, path).is_err() {
                // staging dir may sit on another filesystem
                fs::copy(&staged, path)?;
                fs::remove_file(&staged)?;
            }
        }
    }
    Ok(())
}

fn run_decompose(args: &DecomposeArgs, kind: DecompositionKind) -> Result<()> {
    let g = load_input(&args.input)?;
    let (delta, echo) = args.delta.resolve(&g)?;
    let result = match kind {
        DecompositionKind::Core => kd_core_decompose(&g, delta),
        DecompositionKind::Truss => kd_truss_decompose(&g, delta),
    };
    let headers: Vec<String> = echo.into_iter().collect();
    write_output(args.output.as_deref(), |out| {
        write_result(&g, &result, &headers, out)
    })
}

fn run_shells(args: &ShellsArgs) -> Result<()> {
    let g = load_input(&args.input)?;
    let (delta, echo) = args.delta.resolve(&g)?;
    let kind: DecompositionKind = args.kind.into();
    let result = match kind {
        DecompositionKind::Core => kd_core_decompose(&g, delta),
        DecompositionKind::Truss => kd_truss_decompose(&g, delta),
    };
    let mode = match args.mode {
        ModeArg::Exactly => ExtractMode::Exactly,
        ModeArg::AtLeast => ExtractMode::AtLeast,
    };
    let (sub, map) = extract_subgraph(&g, &result, args.k, mode)?;
    let mode_name = match args.mode {
        ModeArg::Exactly => "exactly",
        ModeArg::AtLeast => "at_least",
    };
    write_output(args.output.as_deref(), |out| {
        writeln!(
            out,
            "# kind={} delta={} k={} mode={}",
            kind.as_str(),
            delta,
            args.k,
            mode_name
        )?;
        if let Some(e) = &echo {
            writeln!(out, "# {e}")?;
        }
        writeln!(
            out,
            "# nodes={} edges={}",
            sub.node_count(),
            sub.edge_count()
        )?;
        for u in sub.node_ids() {
            writeln!(out, "# node\t{}\t{}", u, sub.token(u))?;
        }
        for e in sub.edges() {
            let source = map.edges[e.id.index()];
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                source,
                sub.token(e.u),
                sub.token(e.v),
                e.t,
                result.values[source.index()]
            )?;
        }
        Ok(())
    })
}

fn run_components(args: &ComponentsArgs) -> Result<()> {
    let g = load_input(&args.input)?;
    let (delta, echo) = args.delta.resolve(&g)?;
    let mut headers: Vec<String> = echo.into_iter().collect();

    let restricted = match (args.within_core, args.within_truss) {
        (Some(k), None) => Some((DecompositionKind::Core, k)),
        (None, Some(k)) => Some((DecompositionKind::Truss, k)),
        _ => None,
    };
    let (target, source_ids) = match restricted {
        None => (g, None),
        Some((kind, k)) => {
            let result = match kind {
                DecompositionKind::Core => kd_core_decompose(&g, delta),
                DecompositionKind::Truss => kd_truss_decompose(&g, delta),
            };
            let (sub, map) = extract_subgraph(&g, &result, k, ExtractMode::AtLeast)?;
            headers.push(format!("within={} k={}", kind.as_str(), k));
            (sub, Some(map.edges))
        }
    };

    let partition = delta_connected_components(&target, delta);
    let report = if args.label_report {
        Some(component_label_report(&target, &partition)?)
    } else {
        None
    };
    write_output(args.output.as_deref(), |out| {
        write_partition(&target, &partition, source_ids.as_deref(), &headers, &mut *out)?;
        if let Some(report) = &report {
            writeln!(
                out,
                "# label\tcomponent\tnodes\tedges\tclaims\tfacts\tother\tclass\tfrequency"
            )?;
            for c in &report.components {
                let claims = c
                    .census
                    .get(&tempeel::stats::CLAIM_LABEL)
                    .copied()
                    .unwrap_or(0);
                let facts = c
                    .census
                    .get(&tempeel::stats::FACT_LABEL)
                    .copied()
                    .unwrap_or(0);
                let other = c.edges - claims - facts;
                writeln!(
                    out,
                    "label\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}",
                    c.component,
                    c.nodes,
                    c.edges,
                    claims,
                    facts,
                    other,
                    c.class.as_str(),
                    c.mean_frequency
                )?;
            }
            writeln!(
                out,
                "# label_totals claims_only={} facts_only={} mixed={}",
                report.claims_only, report.facts_only, report.mixed
            )?;
        }
        Ok(())
    })
}

fn run_stats(args: &StatsArgs) -> Result<()> {
    let g = load_input(&args.input)?;
    let sep = if args.csv { ',' } else { '\t' };

    let list = args.percentiles.as_deref().unwrap_or("10,25,50,75");
    let mut fractions = Vec::new();
    for part in list.split(',') {
        let percent: f64 = part
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad percentile `{part}`"))?;
        if !(percent > 0.0 && percent <= 100.0) {
            bail!("percentile {percent} outside (0, 100]");
        }
        fractions.push(percent / 100.0);
    }
    let summary = iet_percentiles(&g, &fractions)?;

    let mut deltas: Vec<(Time, String)> = Vec::new();
    if args.delta.is_empty() {
        for &(frac, d) in &summary.percentiles {
            if !deltas.iter().any(|&(existing, _)| existing == d) {
                deltas.push((d, format!("p{}", format_percent(frac.0))));
            }
        }
    } else {
        for spec in &args.delta {
            let (d, _) = spec.resolve(&g)?;
            let label = match spec {
                DeltaSpec::Explicit(_) => "explicit".to_string(),
                DeltaSpec::Percentile { raw, .. } => raw.clone(),
            };
            deltas.push((d, label));
        }
    }
    let stats: Vec<(tempeel::DeltaStats, String)> = deltas
        .iter()
        .map(|(d, label)| (delta_stats(&g, *d), label.clone()))
        .collect();

    write_output(args.output.as_deref(), |out| {
        writeln!(out, "# kind=stats")?;
        writeln!(out, "# percentile{sep}p{sep}delta")?;
        for &(frac, d) in &summary.percentiles {
            writeln!(out, "percentile{sep}{}{sep}{}", frac.0, d)?;
        }
        writeln!(
            out,
            "# stats{sep}delta{sep}source{sep}avg_degree{sep}max_degree{sep}avg_support{sep}max_support{sep}xi"
        )?;
        for (s, label) in &stats {
            writeln!(
                out,
                "stats{sep}{}{sep}{}{sep}{:.6}{sep}{}{sep}{:.6}{sep}{}{sep}{}",
                s.delta, label, s.avg_degree, s.max_degree, s.avg_support, s.max_support, s.xi
            )?;
        }
        writeln!(out, "[graph]")?;
        writeln!(out, "nodes={}", g.node_count())?;
        writeln!(out, "edges={}", g.edge_count())?;
        if let Some((lo, hi)) = g.span() {
            writeln!(out, "span_min={lo}")?;
            writeln!(out, "span_max={hi}")?;
        }
        writeln!(out, "[iets]")?;
        writeln!(out, "count={}", summary.iets.len())?;
        writeln!(out, "min={}", summary.iets.first().unwrap())?;
        writeln!(out, "max={}", summary.iets.last().unwrap())?;
        Ok(())
    })
}

fn run_verify(args: &VerifyArgs) -> Result<bool> {
    let g = load_input(&args.input)?;
    let (delta, _) = args.delta.resolve(&g)?;
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool| {
        println!(
            "verify kind={name} delta={delta} edges={}: {}",
            g.edge_count(),
            if ok { "ok" } else { "MISMATCH" }
        );
        all_ok &= ok;
    };
    let want = args.kind;
    if matches!(want, VerifyKind::Core | VerifyKind::All) {
        let fast = kd_core_decompose(&g, delta);
        let slow = oracle_decompose(&g, delta, DecompositionKind::Core)?;
        check("core", fast.values == slow.values);
    }
    if matches!(want, VerifyKind::Truss | VerifyKind::All) {
        let fast = kd_truss_decompose(&g, delta);
        let slow = oracle_decompose(&g, delta, DecompositionKind::Truss)?;
        check("truss", fast.values == slow.values);
    }
    if matches!(want, VerifyKind::Components | VerifyKind::All) {
        let fast = delta_connected_components(&g, delta);
        let slow = oracle_components(&g, delta)?;
        check("components", fast == slow);
    }
    println!("{}", if all_ok { "PASS" } else { "FAIL" });
    Ok(all_ok)
}

fn run_generate(args: &GenerateArgs) -> Result<()> {
    if args.nodes < 2 {
        bail!("--nodes must be at least 2");
    }
    let g = random_graph(&SynthSpec {
        nodes: args.nodes,
        edges: args.edges,
        span: args.span,
        labeled: args.labeled,
        seed: args.seed,
    });
    eprintln!(
        "tempeel: generated {} edges over {} nodes (seed {})",
        g.edge_count(),
        g.node_count(),
        args.seed
    );
    write_output(args.output.as_deref(), |out| g.write_edge_list(out))
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Core(args) => run_decompose(args, DecompositionKind::Core).map(|()| true),
        Command::Truss(args) => run_decompose(args, DecompositionKind::Truss).map(|()| true),
        Command::Shells(args) => run_shells(args).map(|()| true),
        Command::Components(args) => run_components(args).map(|()| true),
        Command::Stats(args) => run_stats(args).map(|()| true),
        Command::Verify(args) => run_verify(args),
        Command::Generate(args) => run_generate(args).map(|()| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("tempeel: {err:#}");
            ExitCode::from(1)
        }
    }
}
