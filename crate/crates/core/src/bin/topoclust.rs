//! Command-line interface over sequence files of cluster labels.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse or validation error,
//! 3 resource cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use topoclust::baselines;
use topoclust::bifiltration::first_merge_matrix;
use topoclust::generators::{generate_order_sequence, sample_coarse_graining, GeneratorConfig};
use topoclust::io;
use topoclust::measures::{conflict_summary, hilbert_distance, hilbert_grid};
use topoclust::sankey::{
    build_sankey, classify_layer_conflicts, hf1_crossing_bound, minimize_crossings_exact,
    minimize_crossings_heuristic,
};
use topoclust::{Construction, Error, HomologyDim, PartitionSequence};

#[derive(Parser)]
#[command(
    name = "topoclust",
    version,
    about = "Topological feature maps and diagnostics for multiscale sequences of partitions"
)]
struct Cli {
    /// Suppress JSON summaries on stdout (files are still written).
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Hilbert-function grids and write them as CSV feature maps.
    Hilbert(HilbertArgs),
    /// Print conflict measures, per-layer conflict flags and the crossing bound.
    Conflicts(ConflictsArgs),
    /// Build the Sankey diagram, optimise its layout and export the edge list.
    Sankey(SankeyArgs),
    /// Pairwise conditional-entropy and variation-of-information baselines.
    Baselines(BaselinesArgs),
    /// Generate synthetic sequence files.
    Generate(GenerateArgs),
    /// L2 distance between the Hilbert grids of two sequences.
    Distance(DistanceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DimArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Element,
    Nerve,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Self {
        match c {
            ConstructionArg::Element => Construction::Element,
            ConstructionArg::Nerve => Construction::Nerve,
        }
    }
}

#[derive(Args)]
struct HilbertArgs {
    /// Sequence file to read.
    #[arg(long)]
    input: PathBuf,
    /// Homology dimension(s) to compute.
    #[arg(long, value_enum, default_value = "both")]
    dim: DimArg,
    #[arg(long, value_enum, default_value = "nerve")]
    construction: ConstructionArg,
    /// Output prefix: writes <out>.hf0.csv / <out>.hf1.csv and <out>.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConflictsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "nerve")]
    construction: ConstructionArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
}

#[derive(Args)]
struct SankeyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Barycenter sweeps in heuristic mode.
    #[arg(long, default_value_t = 4)]
    sweeps: usize,
    /// Output prefix: writes <out>.edges.csv and <out>.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BaselinesArgs {
    #[arg(long)]
    input: PathBuf,
    /// Output prefix: writes <out>.ce.csv / <out>.vi.csv and <out>.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Coarse,
    Order,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Ground-set size.
    #[arg(short = 'n', long)]
    n_elements: usize,
    /// Number of layers.
    #[arg(short = 'm', long)]
    n_layers: usize,
    /// Per-layer swap probability (kind = order).
    #[arg(short = 'p', long, default_value_t = 0.0)]
    swap_probability: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, value_enum, default_value = "0")]
    dim: DimArg,
    #[arg(long, value_enum, default_value = "nerve")]
    construction: ConstructionArg,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, everything else is
            // a usage error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let quiet = cli.quiet;
    let outcome = match cli.command {
        Command::Hilbert(args) => cmd_hilbert(args, quiet),
        Command::Conflicts(args) => cmd_conflicts(args, quiet),
        Command::Sankey(args) => cmd_sankey(args, quiet),
        Command::Baselines(args) => cmd_baselines(args, quiet),
        Command::Generate(args) => cmd_generate(args, quiet),
        Command::Distance(args) => cmd_distance(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TriangleCapExceeded { .. }
        | Error::WidthCapExceeded { .. }
        | Error::OrderCapExceeded { .. } => 3,
        Error::InvalidConfig(_) => 1,
        _ => 2,
    }
}

fn load(path: &Path) -> Result<PartitionSequence, Error> {
    io::parse_sequence_file(path)
}

fn emit(quiet: bool, summary: &serde_json::Value) {
    if !quiet {
        println!("{summary}");
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(suffix);
    prefix.with_file_name(name)
}

fn cmd_hilbert(args: HilbertArgs, quiet: bool) -> Result<(), Error> {
    let seq = load(&args.input)?;
    let construction: Construction = args.construction.into();
    let started = Instant::now();
    let mut files = Vec::new();
    let mut timings = serde_json::Map::new();
    let dims: &[HomologyDim] = match args.dim {
        DimArg::Zero => &[HomologyDim::Zero],
        DimArg::One => &[HomologyDim::One],
        DimArg::Both => &[HomologyDim::Zero, HomologyDim::One],
    };
    for &dim in dims {
        let t = Instant::now();
        let grid = hilbert_grid(&seq, dim, construction)?;
        let key = format!("hf{}", dim.as_u8());
        timings.insert(
            format!("{key}_ms"),
            json!(t.elapsed().as_secs_f64() * 1e3),
        );
        let path = with_suffix(&args.out, &format!(".{key}.csv"));
        io::write_atomic(&path, &io::grid_to_csv(&grid))?;
        files.push(path.display().to_string());
    }
    let summary = json!({
        "m": seq.len(),
        "n": seq.n_elements(),
        "construction": match construction {
            Construction::Element => "element",
            Construction::Nerve => "nerve",
        },
        "files": files,
        "timings": timings,
        "total_ms": started.elapsed().as_secs_f64() * 1e3,
    });
    io::write_atomic(
        &with_suffix(&args.out, ".json"),
        &format!("{summary}\n"),
    )?;
    emit(quiet, &summary);
    Ok(())
}

fn cmd_conflicts(args: ConflictsArgs, quiet: bool) -> Result<(), Error> {
    let seq = load(&args.input)?;
    let summary = conflict_summary(&seq, args.construction.into())?;
    let bound = hf1_crossing_bound(&seq, &summary.hf1)?;
    let diagram = build_sankey(&seq);
    let mut windows = Vec::new();
    for m in 0..seq.len().saturating_sub(1) {
        let flags = classify_layer_conflicts(&diagram, m)?;
        windows.push(json!({
            "layer": m + 1,
            "zero": flags.zero,
            "triangle_zero": flags.triangle_zero,
            "one": flags.one,
        }));
    }
    let out = json!({
        "m": seq.len(),
        "n": seq.n_elements(),
        "c0_bar": summary.avg_conflict0,
        "c1_bar": summary.avg_conflict1,
        "hf1_bound": bound,
        "windows": windows,
    });
    // The summary is the tool's output; --quiet still prints the measures
    // on one line for scripted pipelines.
    if quiet {
        println!("{} {}", summary.avg_conflict0, summary.avg_conflict1);
    } else {
        println!("{out}");
    }
    Ok(())
}

fn cmd_sankey(args: SankeyArgs, quiet: bool) -> Result<(), Error> {
    let seq = load(&args.input)?;
    let diagram = build_sankey(&seq);
    let (layout, crossings, mode) = match args.mode {
        ModeArg::Exact => {
            let (layout, crossings) = minimize_crossings_exact(&diagram)?;
            (layout, crossings, "exact")
        }
        ModeArg::Heuristic => {
            let (layout, crossings) = minimize_crossings_heuristic(&diagram, args.sweeps);
            (layout, crossings, "heuristic")
        }
    };
    let hf1 = hilbert_grid(&seq, HomologyDim::One, Construction::Nerve)?;
    let bound = hf1_crossing_bound(&seq, &hf1)?;
    let edges_path = with_suffix(&args.out, ".edges.csv");
    io::write_atomic(&edges_path, &diagram.to_edge_list(&layout)?)?;
    let rankings: Vec<Vec<u32>> = layout
        .rankings()
        .iter()
        .map(|r| r.iter().map(|&v| v + 1).collect())
        .collect();
    let summary = json!({
        "m": seq.len(),
        "n": seq.n_elements(),
        "mode": mode,
        "crossings": crossings,
        "hf1_bound": bound,
        "rankings": rankings,
        "edges_file": edges_path.display().to_string(),
    });
    io::write_atomic(&with_suffix(&args.out, ".json"), &format!("{summary}\n"))?;
    emit(quiet, &summary);
    Ok(())
}

fn cmd_baselines(args: BaselinesArgs, quiet: bool) -> Result<(), Error> {
    let seq = load(&args.input)?;
    let m = seq.len();
    // ce[s][t] = H(theta(t) | theta(s)): the row is the conditioned-on layer.
    let mut ce = vec![vec![0.0; m]; m];
    let mut vi = vec![vec![0.0; m]; m];
    for s in 0..m {
        for t in 0..m {
            ce[s][t] =
                baselines::conditional_entropy(&seq.partitions()[t], &seq.partitions()[s])?;
        }
    }
    for a in 0..m {
        for b in 0..m {
            vi[a][b] = ce[a][b] + ce[b][a];
        }
    }
    let ci = if m >= 2 {
        Some(baselines::consensus_index(&seq)?)
    } else {
        None
    };
    let violations = baselines::strong_triangle_violations(&first_merge_matrix(&seq, 0)?);
    io::write_atomic(&with_suffix(&args.out, ".ce.csv"), &io::matrix_to_csv(&ce))?;
    io::write_atomic(&with_suffix(&args.out, ".vi.csv"), &io::matrix_to_csv(&vi))?;
    let summary = json!({
        "m": m,
        "n": seq.n_elements(),
        "ci": ci,
        "ce_orientation": "row s, column t: entry is H(t | s)",
        "strong_triangle_violations": violations.len(),
    });
    io::write_atomic(&with_suffix(&args.out, ".json"), &format!("{summary}\n"))?;
    emit(quiet, &summary);
    Ok(())
}

fn cmd_generate(args: GenerateArgs, quiet: bool) -> Result<(), Error> {
    std::fs::create_dir_all(&args.out_dir)?;
    let mut entries = Vec::new();
    for k in 0..args.count {
        // Each file gets its own seed so individual files are reproducible.
        let cfg = GeneratorConfig::new(
            args.n_elements,
            args.n_layers,
            args.swap_probability,
            args.seed.wrapping_add(k as u64),
        )?;
        let file = format!("seq_{k:04}.csv");
        let path = args.out_dir.join(&file);
        match args.kind {
            KindArg::Coarse => {
                let seq = sample_coarse_graining(&cfg)?;
                io::write_atomic(&path, &io::write_sequence(&seq))?;
                entries.push(json!({ "file": file, "seed": cfg.seed }));
            }
            KindArg::Order => {
                let sample = generate_order_sequence(&cfg)?;
                io::write_atomic(&path, &io::write_sequence(&sample.sequence))?;
                entries.push(json!({
                    "file": file,
                    "seed": cfg.seed,
                    "label": sample.label(),
                    "swaps": sample.swaps,
                }));
            }
        }
    }
    let manifest = json!({
        "kind": match args.kind { KindArg::Coarse => "coarse", KindArg::Order => "order" },
        "n": args.n_elements,
        "m": args.n_layers,
        "p": args.swap_probability,
        "seed": args.seed,
        "count": args.count,
        "sequences": entries,
    });
    io::write_atomic(
        &args.out_dir.join("manifest.json"),
        &format!("{manifest}\n"),
    )?;
    emit(quiet, &manifest);
    Ok(())
}

fn cmd_distance(args: DistanceArgs) -> Result<(), Error> {
    let seq_a = load(&args.a)?;
    let seq_b = load(&args.b)?;
    let construction: Construction = args.construction.into();
    let dim = match args.dim {
        DimArg::Zero => HomologyDim::Zero,
        DimArg::One => HomologyDim::One,
        DimArg::Both => {
            return Err(Error::InvalidConfig(
                "distance needs a single dimension (0 or 1)".into(),
            ))
        }
    };
    let grid_a = hilbert_grid(&seq_a, dim, construction)?;
    let grid_b = hilbert_grid(&seq_b, dim, construction)?;
    println!("{}", hilbert_distance(&grid_a, &grid_b)?);
    Ok(())
}
