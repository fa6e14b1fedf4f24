//! Command-line front end: generation, checking, tiling, canal reports,
//! coloring conversion, degree statistics, theorem verification, the
//! counterexample hunt, and format conversion.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rgbtiling::canal::{
    bank_triangle_identity, boundary_matching, build_canal_system,
    cycle_black_parity_equivalence, is_grand, orient_canal_system, Grandness,
};
use rgbtiling::coloring::{coloring_to_rgb, tiling_to_coloring};
use rgbtiling::embedding::SemiMpg;
use rgbtiling::generator::enumerate_mpgs;
use rgbtiling::harness::{hunt_counterexample, run_suite, Suite};
use rgbtiling::io;
use rgbtiling::stats::{
    black_quadrangulation, check_degree_bounds, degree_table, euler_degree_residual,
    red_degree_table,
};
use rgbtiling::tiling::{enumerate_r_tilings, extend_to_rgb, EdgeColor};

#[derive(Parser)]
#[command(name = "rgbtiling", version, about = "Tilings and canal systems on maximal planar graphs")]
struct Cli {
    /// Random seed recorded in outputs; the pipelines themselves are
    /// deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for corpus sweeps (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ColorArg {
    R,
    G,
    B,
}

impl From<ColorArg> for EdgeColor {
    fn from(c: ColorArg) -> EdgeColor {
        match c {
            ColorArg::R => EdgeColor::Red,
            ColorArg::G => EdgeColor::Green,
            ColorArg::B => EdgeColor::Blue,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all MPG isomorphism classes up to a vertex bound.
    Gen(GenArgs),
    /// Validate a graph file and report its classification.
    Check(CheckArgs),
    /// Enumerate or count tilings of a host.
    Tile(TileArgs),
    /// Build the canal system of a tiling and optional reports.
    Canal(CanalArgs),
    /// Convert between vertex colorings and tilings.
    Color(ColorCmdArgs),
    /// Degree statistics and identities.
    Stats(StatsArgs),
    /// Run a verification suite over generated corpora.
    Verify(VerifyArgs),
    /// Hunt for odd-cycle-free non-grand tilings on annulus belts.
    Hunt(HuntArgs),
    /// Convert between graph file formats.
    Convert(ConvertArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long = "max-n")]
    max_n: usize,
    #[arg(long)]
    out: PathBuf,
    /// Also write one plantri-compatible planar_code file per size.
    #[arg(long = "planar-code")]
    planar_code: bool,
    /// Abort if any size exceeds this many classes.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct TileArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = ["r", "rgb"])]
    mode: String,
    /// Print the number of tilings instead of emitting them.
    #[arg(long)]
    count: bool,
    /// Emit the tilings as a JSON array.
    #[arg(long)]
    emit: bool,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CanalArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    tiling: PathBuf,
    #[arg(long, value_enum, default_value = "r")]
    color: ColorArg,
    /// Orient the canal lines antiparallel across diamonds.
    #[arg(long)]
    orient: bool,
    #[arg(long, value_parser = ["parity", "banks", "matching"])]
    report: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ColorCmdArgs {
    #[arg(long)]
    input: PathBuf,
    /// Convert a vertex coloring (--coloring) to an RGB tiling.
    #[arg(long = "to-tiling")]
    to_tiling: bool,
    /// Reconstruct a coloring from a grand R-tiling (--tiling).
    #[arg(long = "from-tiling")]
    from_tiling: bool,
    #[arg(long)]
    coloring: Option<PathBuf>,
    #[arg(long)]
    tiling: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    base: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    tiling: Option<PathBuf>,
    #[arg(long, value_enum)]
    drop: Option<ColorArg>,
    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long = "max-n", default_value_t = 8)]
    max_n: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct HuntArgs {
    /// Outer facet sizes, e.g. 5,5 or 5,7.
    #[arg(long)]
    shape: String,
    #[arg(long = "max-vertices", default_value_t = 12)]
    max_vertices: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = ["json", "planar-code"])]
    from: String,
    #[arg(long, value_parser = ["json", "planar-code", "dot"])]
    to: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional tiling overlay for dot output.
    #[arg(long)]
    tiling: Option<PathBuf>,
}

fn main() -> ExitCode {
    // Die quietly when a pipe downstream closes, like other unix filters.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            // Machine-readable error on stderr as a JSON line.
            let line = json!({"error": err.to_string()});
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}

fn verbosity() -> usize {
    match std::env::var("RGBTILING_LOG").ok().as_deref() {
        Some("debug") => 2,
        Some("info") => 1,
        _ => 0,
    }
}

fn progress(level: usize, msg: &str) {
    if verbosity() >= level {
        eprintln!("rgbtiling: {msg}");
    }
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("out")
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<std::sync::Arc<SemiMpg>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(io::graph_from_json(&text)?)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Gen(args) => {
            progress(1, &format!("generating MPGs up to n = {}", args.max_n));
            let run = enumerate_mpgs(args.max_n, args.cap)?;
            fs::create_dir_all(&args.out)?;
            let mut counts = Vec::new();
            for (n, classes) in &run.classes_per_n {
                counts.push(json!({"n": n, "classes": classes.len()}));
                for (i, m) in classes.iter().enumerate() {
                    let path = args.out.join(format!("mpg-n{n}-c{i}.json"));
                    write_atomic(&path, io::graph_to_json(m).as_bytes())?;
                }
                if args.planar_code {
                    let embeddings: Vec<_> =
                        classes.iter().map(|m| m.embedding()).collect();
                    let bytes = io::write_planar_code(&embeddings)?;
                    write_atomic(&args.out.join(format!("mpg-n{n}.planar_code")), &bytes)?;
                }
            }
            let summary = json!({"seed": cli.seed, "max_n": args.max_n, "counts": counts});
            write_atomic(
                &args.out.join("summary.json"),
                serde_json::to_string_pretty(&summary)?.as_bytes(),
            )?;
            println!("{}", serde_json::to_string(&summary)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let m = load_graph(&args.input)?;
            let kind = if m.is_mpg() {
                "MPG".to_string()
            } else {
                let sizes: Vec<String> = m
                    .outer_facets()
                    .iter()
                    .map(|&f| m.embedding().faces()[f].len().to_string())
                    .collect();
                format!("({})-semi-MPG", sizes.join(","))
            };
            let piece = if m.one_piece() { "One Piece" } else { "not One Piece" };
            println!(
                "{kind}, {piece}: V={} E={} F={} inner-triangles={} exempt-edges={}",
                m.vertex_count(),
                m.edge_count(),
                m.embedding().face_count(),
                m.inner_faces().len(),
                m.exempt_edges().len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Tile(args) => {
            let m = load_graph(&args.input)?;
            let tilings = enumerate_r_tilings(&m, args.limit);
            let all: Vec<rgbtiling::Tiling> = match args.mode.as_str() {
                "r" => tilings,
                "rgb" => tilings.iter().flat_map(extend_to_rgb).collect(),
                _ => unreachable!("clap validates the mode"),
            };
            if args.count || !args.emit {
                println!("{}", all.len());
            }
            if args.emit {
                let texts: Vec<serde_json::Value> = all
                    .iter()
                    .map(|t| serde_json::from_str(&io::tiling_to_json(t)).unwrap())
                    .collect();
                let body = serde_json::to_string_pretty(&json!({
                    "seed": cli.seed,
                    "mode": args.mode,
                    "tilings": texts,
                }))?;
                emit(&args.out, &body)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Canal(args) => {
            let m = load_graph(&args.input)?;
            let text = fs::read_to_string(&args.tiling)?;
            let t = io::tiling_from_json(&m, &text)?;
            let color: EdgeColor = args.color.into();
            let sys = build_canal_system(&t, color)?;
            let lines: Vec<serde_json::Value> = sys
                .lines()
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    json!({
                        "kind": l.kind,
                        "triangles": l.triangles,
                        "crossings": l.crossings,
                        "entrance": l.entrance,
                        "exit": l.exit,
                        "deja_vu_edges": sys.deja_vu_edges(i),
                    })
                })
                .collect();
            let mut body = json!({"seed": cli.seed, "color": color.letter().to_string(), "lines": lines});
            if args.orient {
                match orient_canal_system(&sys, &t) {
                    Ok(oriented) => {
                        body["orientations"] = serde_json::to_value(&oriented.orientations)?;
                        body["partition"] = serde_json::to_value(&oriented.partition)?;
                    }
                    Err(e) => body["orientation_error"] = json!(e.to_string()),
                }
            }
            match is_grand(&t, color) {
                Grandness::Grand(p) => body["grand"] = serde_json::to_value(&p)?,
                Grandness::NotGrand(w) => body["not_grand_witness"] = serde_json::to_value(&w)?,
            }
            if let Some(report) = &args.report {
                body["report"] = match report.as_str() {
                    "parity" => serde_json::to_value(cycle_black_parity_equivalence(&t, color, 12))?,
                    "banks" => {
                        let ids: Vec<_> = (0..sys.lines().len())
                            .filter(|&l| sys.lines()[l].is_ring())
                            .map(|l| bank_triangle_identity(&sys, l).unwrap())
                            .collect();
                        serde_json::to_value(ids)?
                    }
                    "matching" => serde_json::to_value(boundary_matching(&sys)?)?,
                    _ => unreachable!("clap validates the report kind"),
                };
            }
            emit(&args.out, &serde_json::to_string_pretty(&body)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Color(args) => {
            let m = load_graph(&args.input)?;
            if args.to_tiling == args.from_tiling {
                bail!("pass exactly one of --to-tiling and --from-tiling");
            }
            if args.to_tiling {
                let path = args
                    .coloring
                    .as_ref()
                    .ok_or_else(|| anyhow!("--to-tiling needs --coloring"))?;
                let f = io::coloring_from_json(&fs::read_to_string(path)?)?;
                let t = coloring_to_rgb(&m, &f)?;
                emit(&args.out, &io::tiling_to_json(&t))?;
            } else {
                let path = args
                    .tiling
                    .as_ref()
                    .ok_or_else(|| anyhow!("--from-tiling needs --tiling"))?;
                let t = io::tiling_from_json(&m, &fs::read_to_string(path)?)?;
                let f = tiling_to_coloring(&t, args.base)?;
                emit(&args.out, &io::coloring_to_json(&f))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats(args) => {
            let m = load_graph(&args.input)?;
            let table = degree_table(m.embedding());
            let mut body = json!({
                "seed": cli.seed,
                "degree_table": table,
            });
            if m.is_mpg() {
                body["euler_degree_residual"] = json!(euler_degree_residual(&m)?);
            }
            if let Some(tiling_path) = &args.tiling {
                let t = io::tiling_from_json(&m, &fs::read_to_string(tiling_path)?)?;
                let drop: EdgeColor = args.drop.unwrap_or(ColorArg::R).into();
                let quad = black_quadrangulation(&t, drop)?;
                body["quadrangulation"] = json!({
                    "residual": quad.residual,
                    "counts_consistent": quad.counts_consistent,
                    "degree_table": quad.table,
                });
                body["degree_bounds_violations"] = serde_json::to_value(check_degree_bounds(&t)?)?;
                body["split_degree_table"] = serde_json::to_value(red_degree_table(&t, drop))?;
            }
            let text = if args.format == "csv" {
                stats_csv(&body)
            } else {
                serde_json::to_string_pretty(&body)?
            };
            emit(&args.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let suite: Suite = args.suite.parse().map_err(|e: String| anyhow!(e))?;
            progress(1, &format!("running suite {:?} at max-n {}", suite, args.max_n));
            let reports = run_suite(suite, args.max_n);
            let mut failed = false;
            for r in &reports {
                let status = if r.ok() { "PASS" } else { "FAIL" };
                println!(
                    "{status} {theorem}: {passes}/{instances} instances",
                    theorem = r.theorem,
                    passes = r.passes,
                    instances = r.instances
                );
                for note in &r.notes {
                    progress(1, note);
                }
                failed |= !r.ok();
            }
            if let Some(path) = &args.report {
                let body = json!({"seed": cli.seed, "suite": args.suite, "max_n": args.max_n, "reports": reports});
                write_atomic(path, serde_json::to_string_pretty(&body)?.as_bytes())?;
            }
            Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
        Command::Hunt(args) => {
            let parts: Vec<usize> = args
                .shape
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .context("shape must look like 5,5")?;
            if parts.len() != 2 {
                bail!("shape must have exactly two sizes");
            }
            let report = hunt_counterexample((parts[0], parts[1]), args.max_vertices);
            println!(
                "scanned {} hosts / {} tilings, found {} odd-cycle-free non-grand instances",
                report.hosts_scanned,
                report.tilings_scanned,
                report.instances.len()
            );
            if report.instances.is_empty() {
                println!("none found within the bound");
            }
            if let Some(path) = &args.report {
                let body = json!({"seed": cli.seed, "report": report});
                write_atomic(path, serde_json::to_string_pretty(&body)?.as_bytes())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert(args) => {
            let graphs: Vec<std::sync::Arc<SemiMpg>> = match args.from.as_str() {
                "json" => vec![load_graph(&args.input)?],
                "planar-code" => {
                    let bytes = fs::read(&args.input)?;
                    io::read_planar_code(&bytes)?
                        .into_iter()
                        .map(|emb| SemiMpg::mpg(emb).map_err(anyhow::Error::from))
                        .collect::<Result<_>>()?
                }
                _ => unreachable!("clap validates --from"),
            };
            let out: Vec<u8> = match args.to.as_str() {
                "json" => {
                    let texts: Vec<String> =
                        graphs.iter().map(|m| io::graph_to_json(m)).collect();
                    if texts.len() == 1 {
                        texts[0].clone().into_bytes()
                    } else {
                        serde_json::to_string_pretty(&texts)?.into_bytes()
                    }
                }
                "planar-code" => {
                    let embeddings: Vec<_> = graphs.iter().map(|m| m.embedding()).collect();
                    io::write_planar_code(&embeddings)?
                }
                "dot" => {
                    let m = &graphs[0];
                    let tiling = match &args.tiling {
                        Some(path) => {
                            Some(io::tiling_from_json(m, &fs::read_to_string(path)?)?)
                        }
                        None => None,
                    };
                    io::to_dot(m, tiling.as_ref(), None).into_bytes()
                }
                _ => unreachable!("clap validates --to"),
            };
            match &args.out {
                Some(path) => write_atomic(path, &out)?,
                None => print!("{}", String::from_utf8_lossy(&out)),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Flattens the stats JSON into metric,k,j,value rows.
fn stats_csv(body: &serde_json::Value) -> String {
    let mut rows = vec!["metric,k,j,value".to_string()];
    if let Some(table) = body.get("degree_table") {
        for entry in table["v_k"].as_array().into_iter().flatten() {
            rows.push(format!("V_k,{},,{}", entry[0], entry[1]));
        }
    }
    if let Some(r) = body.get("euler_degree_residual") {
        rows.push(format!("euler_degree_residual,,,{r}"));
    }
    if let Some(q) = body.get("quadrangulation") {
        rows.push(format!("quad_residual,,,{}", q["residual"]));
        for entry in q["degree_table"]["v_k"].as_array().into_iter().flatten() {
            rows.push(format!("quad_V_j,{},,{}", entry[0], entry[1]));
        }
    }
    if let Some(split) = body.get("split_degree_table") {
        for entry in split["bar"].as_array().into_iter().flatten() {
            rows.push(format!("V_bar,{},{},{}", entry[0], entry[1], entry[2]));
        }
        for entry in split["colored"].as_array().into_iter().flatten() {
            rows.push(format!("V_colored,{},{},{}", entry[0], entry[1], entry[2]));
        }
    }
    rows.join("\n")
}
