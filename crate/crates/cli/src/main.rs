//! Single-binary surface for the correspondence toolkit: exact chain
//! operations, entropy and degree-growth estimators, indicator scans and
//! the selftest. Batch-oriented: reproducible seeds, JSON summaries, CSV
//! tables, atomic writes; every artifact embeds the run configuration.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use corr1::corresp::{
    compose, fixed_point_poly, iterate, parse_correspondence, Correspondence,
    DEFAULT_DEGREE_CAP,
};
use corr1::entropy::{estimate_entropy, estimate_entropy_from, lov_report, StartDesign};
use corr1::julia::{phi_estimate, psi_estimate, scan};
use corr1::orbits::{roots, ProjPoint, RootFinder};
use corr1::selftest::{run_all, Budget};
use corr1::CoreError;

use output::{csv_artifact, emit_error, json_artifact, write_atomic};

#[derive(Parser)]
#[command(
    name = "corr1",
    about = "Polynomial correspondences on the Riemann sphere: exact chain algebra, entropy and Julia/Fatou indicators",
    version
)]
struct Cli {
    /// Worker threads (default: CORR1_THREADS or all cores). Results do
    /// not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Root-finding strategy: aberth | durand-kerner
    #[arg(long, global = true, default_value = "aberth")]
    root_finder: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose two correspondences (the second acts first)
    Compose(ComposeArgs),
    /// Iterate a correspondence and report per-order degrees
    Iterate(IterateArgs),
    /// Graph degrees of a correspondence
    Degrees(DegreesArgs),
    /// Entropy-rate table from sampled orbits
    Entropy(EntropyArgs),
    /// Entropy restricted to orbits starting from given points
    EntropyFrom(EntropyFromArgs),
    /// Projective fixed points of an iterate
    FixedPoints(FixedPointsArgs),
    /// Degree growth of the iterates and the entropy bound
    Lov(LovArgs),
    /// Local volume-growth indicator at a point
    Phi(IndicatorArgs),
    /// Normalized local indicator at a point (bounded vs divergent)
    Psi(IndicatorArgs),
    /// Per-pixel indicator scan over a window
    Scan(ScanArgs),
    /// Run the acceptance criteria (reduced budgets by default)
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct ComposeArgs {
    /// Correspondence file for the outer map
    #[arg(short = 'f')]
    f: PathBuf,
    /// Correspondence file for the inner map (acts first)
    #[arg(short = 'g')]
    g: PathBuf,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct IterateArgs {
    #[arg(short = 'f')]
    f: PathBuf,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DegreesArgs {
    #[arg(short = 'f')]
    f: PathBuf,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(short = 'f')]
    f: PathBuf,
    /// Orbit depths, comma-separated
    #[arg(long, value_delimiter = ',')]
    n: Vec<u32>,
    /// Separation scales, comma-separated
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Total orbit budget
    #[arg(long)]
    samples: usize,
    /// Number of random starts
    #[arg(long, default_value_t = 100)]
    starts: usize,
    /// Start design: uniform | circle-band:WIDTH
    #[arg(long, default_value = "uniform")]
    design: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// CSV table destination
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// JSON summary destination
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Orbit dump (CSV) of the deepest sampled level
    #[arg(long)]
    orbits: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyFromArgs {
    #[arg(short = 'f')]
    f: PathBuf,
    /// Start points: "re,im" pairs separated by ';' (use "inf" for the
    /// point at infinity)
    #[arg(long, allow_hyphen_values = true)]
    points: String,
    #[arg(long, value_delimiter = ',')]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    #[arg(long)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Orbit dump (CSV) of the deepest sampled level
    #[arg(long)]
    orbits: Option<PathBuf>,
}

#[derive(Args)]
struct FixedPointsArgs {
    #[arg(short = 'f')]
    f: PathBuf,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LovArgs {
    #[arg(short = 'f')]
    f: PathBuf,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct IndicatorArgs {
    #[arg(short = 'f')]
    f: PathBuf,
    /// Base point "re,im" (or "inf")
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Chordal radii, comma-separated (in (0, 0.5])
    #[arg(long, value_delimiter = ',')]
    r: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<u32>,
    #[arg(long, default_value_t = 32)]
    mc_points: usize,
    #[arg(long, default_value_t = 32)]
    mc_branches: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(short = 'f')]
    f: PathBuf,
    /// Window "re_lo,re_hi,im_lo,im_hi"
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    #[arg(long, default_value_t = 64)]
    resolution: usize,
    #[arg(long)]
    r: f64,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 16)]
    mc_points: usize,
    #[arg(long, default_value_t = 8)]
    mc_branches: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// CSV grid destination
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Companion gnuplot script destination
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run full acceptance budgets instead of the reduced profile
    #[arg(long)]
    full: bool,
}

#[derive(Deserialize)]
struct CorrFile {
    poly: String,
    label: Option<String>,
}

fn load_correspondence(path: &Path) -> Result<Correspondence, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: CorrFile =
        toml::from_str(&text).map_err(|e| format!("bad correspondence file: {e}"))?;
    let (corr, scale) =
        parse_correspondence(&file.poly).map_err(|e| format!("{e}"))?;
    if scale.to_string() != "1" {
        eprintln!("note: cleared rational coefficients by a factor of {scale}");
    }
    Ok(match file.label {
        Some(l) => corr.with_label(l),
        None => corr,
    })
}

fn parse_point(text: &str) -> Result<ProjPoint, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") {
        return Ok(ProjPoint::infinity());
    }
    let parts: Vec<&str> = t.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("bad point `{t}` (want `re,im` or `inf`)"));
    }
    let re: f64 = parts[0].trim().parse().map_err(|e| format!("bad point `{t}`: {e}"))?;
    let im: f64 = parts[1].trim().parse().map_err(|e| format!("bad point `{t}`: {e}"))?;
    Ok(ProjPoint::from_affine(Complex64::new(re, im)))
}

fn parse_points(text: &str) -> Result<Vec<ProjPoint>, String> {
    text.split(';').map(parse_point).collect()
}

fn parse_design(text: &str, count: usize) -> Result<StartDesign, String> {
    if text == "uniform" {
        return Ok(StartDesign::UniformSphere { count });
    }
    if let Some(w) = text.strip_prefix("circle-band:") {
        let width: f64 = w.parse().map_err(|e| format!("bad band width: {e}"))?;
        if !(width > 0.0 && width < 1.0) {
            return Err("band width must lie in (0, 1)".into());
        }
        return Ok(StartDesign::CircleBand { count, width });
    }
    Err(format!("unknown design `{text}` (uniform | circle-band:WIDTH)"))
}

fn write_or_print(path: &Option<PathBuf>, bytes: Vec<u8>) -> Result<(), String> {
    match path {
        Some(p) => write_atomic(p, &bytes).map_err(|e| format!("write {}: {e}", p.display())),
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), (String, String)> {
    let finder: &'static dyn RootFinder = roots::lookup(&cli.root_finder)
        .map_err(|e| ("usage".to_string(), e.to_string()))?;
    let domain = |e: CoreError| ("domain".to_string(), e.to_string());
    let io = |e: String| ("io".to_string(), e);

    match cli.command {
        Command::Compose(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let g = load_correspondence(&a.g).map_err(io)?;
            let (chain, report) = compose(&f, &g).map_err(domain)?;
            println!("chain: {chain}");
            println!(
                "lambda0 = {}, lambda1 = {}{}",
                report.lambda0,
                report.lambda1,
                if report.dropped.is_empty() {
                    String::new()
                } else {
                    format!(", dropped: {}", report.dropped.join(" | "))
                }
            );
            let config = json!({
                "command": "compose", "f": a.f, "g": a.g,
                "root_finder": finder.name(),
            });
            if a.output.is_some() {
                let result = json!({ "chain": chain.to_string(), "report": report });
                write_or_print(&a.output, json_artifact(&config, &result)).map_err(io)?;
            }
            Ok(())
        }
        Command::Iterate(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let out = iterate(&f, a.n, a.degree_cap).map_err(domain)?;
            for (chain, rep) in &out.orders {
                println!(
                    "n={}: lambda=({}, {}), d_est=({:.6}, {:.6}) chain {}",
                    rep.n, rep.lambda0, rep.lambda1, rep.d0_est, rep.d1_est, chain
                );
            }
            if let Some(hit) = &out.cap_hit {
                println!(
                    "degree cap {} exceeded at order {} (total bidegree {})",
                    hit.cap, hit.order, hit.got
                );
            }
            let config = json!({
                "command": "iterate", "f": a.f, "n": a.n,
                "degree_cap": a.degree_cap, "root_finder": finder.name(),
            });
            if a.output.is_some() {
                let reports: Vec<_> = out.orders.iter().map(|(_, r)| r).collect();
                let result = json!({ "orders": reports, "cap_hit": out.cap_hit });
                write_or_print(&a.output, json_artifact(&config, &result)).map_err(io)?;
            }
            Ok(())
        }
        Command::Degrees(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let (l0, l1) = f.lambda();
            println!("chain: {f}");
            println!("lambda0 = {l0}, lambda1 = {l1}");
            let config = json!({ "command": "degrees", "f": a.f });
            if a.output.is_some() {
                let result = json!({
                    "chain": f.to_string(), "lambda0": l0, "lambda1": l1,
                    "label": f.label(),
                });
                write_or_print(&a.output, json_artifact(&config, &result)).map_err(io)?;
            }
            Ok(())
        }
        Command::Entropy(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let design = parse_design(&a.design, a.starts)
                .map_err(|m| ("usage".to_string(), m))?;
            let table = estimate_entropy(&f, &design, &a.n, &a.eps, a.samples, a.seed, finder)
                .map_err(domain)?;
            let config = json!({
                "command": "entropy", "f": a.f, "n": a.n, "eps": a.eps,
                "samples": a.samples, "starts": a.starts, "design": table.design,
                "seed": a.seed, "root_finder": finder.name(),
            });
            if let Some(dump) = &a.orbits {
                dump_orbits(&f, &design, &a.n, a.samples, a.seed, finder, &config, dump)
                    .map_err(io)?;
            }
            emit_entropy(&table, &config, &a.output, &a.summary).map_err(io)
        }
        Command::EntropyFrom(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let points = parse_points(&a.points).map_err(|m| ("usage".to_string(), m))?;
            let table =
                estimate_entropy_from(&f, &points, &a.n, &a.eps, a.samples, a.seed, finder)
                    .map_err(domain)?;
            let config = json!({
                "command": "entropy-from", "f": a.f, "points": a.points,
                "n": a.n, "eps": a.eps, "samples": a.samples, "seed": a.seed,
                "root_finder": finder.name(),
            });
            if let Some(dump) = &a.orbits {
                let design = StartDesign::Points(points.clone());
                dump_orbits(&f, &design, &a.n, a.samples, a.seed, finder, &config, dump)
                    .map_err(io)?;
            }
            emit_entropy(&table, &config, &a.output, &a.summary).map_err(io)
        }
        Command::FixedPoints(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let rep = fixed_point_poly(&f, a.n, a.degree_cap).map_err(domain)?;
            if rep.diagonal_component {
                println!("n={}: diagonal is a component of the chain", rep.n);
            } else {
                println!(
                    "n={}: diagonal restriction {} with {} affine roots, {} at infinity, Lefschetz {}",
                    rep.n, rep.poly, rep.affine_count, rep.infinity_count, rep.lefschetz
                );
            }
            let config = json!({
                "command": "fixed-points", "f": a.f, "n": a.n,
                "degree_cap": a.degree_cap,
            });
            if a.output.is_some() {
                write_or_print(&a.output, json_artifact(&config, &rep)).map_err(io)?;
            }
            Ok(())
        }
        Command::Lov(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let rep = lov_report(&f, a.n, a.degree_cap).map_err(domain)?;
            for row in &rep.rows {
                println!(
                    "n={}: lambda=({}, {}), graph mass in [{}, {}], d_est=({:.6}, {:.6})",
                    row.n, row.lambda0, row.lambda1, row.mass_lower, row.mass_upper,
                    row.d0_est, row.d1_est
                );
            }
            println!(
                "lov_value = {:.6}{}",
                rep.lov_value,
                if rep.capped { " (degree cap hit)" } else { "" }
            );
            let config = json!({
                "command": "lov", "f": a.f, "n": a.n, "degree_cap": a.degree_cap,
            });
            if a.output.is_some() {
                write_or_print(&a.output, json_artifact(&config, &rep)).map_err(io)?;
            }
            Ok(())
        }
        Command::Phi(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let x = parse_point(&a.x).map_err(|m| ("usage".to_string(), m))?;
            let est = phi_estimate(
                &f, &x, &a.r, &a.n, a.mc_points, a.mc_branches, a.seed, finder,
            )
            .map_err(domain)?;
            println!(
                "phi({}) = {:.6} (stderr {:.6}, ln d0 = {:.6}, {} samples)",
                est.x,
                est.phi_headline,
                est.stderr,
                est.d0.ln(),
                est.effective_samples
            );
            let config = json!({
                "command": "phi", "f": a.f, "x": a.x, "r": a.r, "n": a.n,
                "mc_points": a.mc_points, "mc_branches": a.mc_branches,
                "seed": a.seed, "root_finder": finder.name(),
            });
            if a.output.is_some() {
                write_or_print(&a.output, json_artifact(&config, &est)).map_err(io)?;
            }
            Ok(())
        }
        Command::Psi(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let x = parse_point(&a.x).map_err(|m| ("usage".to_string(), m))?;
            let est = psi_estimate(
                &f, &x, &a.r, &a.n, a.mc_points, a.mc_branches, a.seed, finder,
            )
            .map_err(domain)?;
            println!(
                "psi({}) = {:.6e}{}",
                est.x,
                est.headline,
                if est.divergent { " [divergent]" } else { " [bounded]" }
            );
            let config = json!({
                "command": "psi", "f": a.f, "x": a.x, "r": a.r, "n": a.n,
                "mc_points": a.mc_points, "mc_branches": a.mc_branches,
                "seed": a.seed, "root_finder": finder.name(),
            });
            if a.output.is_some() {
                write_or_print(&a.output, json_artifact(&config, &est)).map_err(io)?;
            }
            Ok(())
        }
        Command::Scan(a) => {
            let f = load_correspondence(&a.f).map_err(io)?;
            let parts: Vec<f64> = a
                .window
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| ("usage".to_string(), format!("bad window: {e}")))?;
            if parts.len() != 4 {
                return Err((
                    "usage".to_string(),
                    "window must be re_lo,re_hi,im_lo,im_hi".into(),
                ));
            }
            let grid = scan(
                &f,
                (parts[0], parts[1], parts[2], parts[3]),
                a.resolution,
                a.r,
                a.n,
                a.mc_points,
                a.mc_branches,
                a.seed,
                finder,
            )
            .map_err(domain)?;
            let config = json!({
                "command": "scan", "f": a.f, "window": a.window,
                "resolution": a.resolution, "r": a.r, "n": a.n,
                "mc_points": a.mc_points, "mc_branches": a.mc_branches,
                "seed": a.seed, "root_finder": finder.name(),
            });
            let mut body = Vec::new();
            grid.write_csv(&mut body).map_err(|e| io(e.to_string()))?;
            write_or_print(&a.output, csv_artifact(&config, body)).map_err(io)?;
            if let Some(ps) = &a.plot_script {
                let csv_name = a
                    .output
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "scan.csv".into());
                write_atomic(ps, grid.plot_script(&csv_name).as_bytes())
                    .map_err(|e| io(e.to_string()))?;
            }
            let nan = grid.rows.iter().filter(|r| r.2.is_nan()).count();
            eprintln!(
                "scanned {} pixels ({} failures)",
                grid.rows.len(),
                nan
            );
            Ok(())
        }
        Command::Selftest(a) => {
            let results = run_all(Budget { full: a.full });
            let mut failed = 0;
            for r in &results {
                println!(
                    "{} criterion {}: {} [{:.2}s] - {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    r.seconds,
                    r.details
                );
                if !r.passed {
                    failed += 1;
                }
            }
            println!(
                "{}/{} criteria passed ({} profile)",
                results.len() - failed,
                results.len(),
                if a.full { "full" } else { "reduced" }
            );
            if failed > 0 {
                return Err((
                    "selftest".to_string(),
                    format!("{failed} criterion(s) failed"),
                ));
            }
            Ok(())
        }
    }
}

/// Re-samples the deepest level deterministically and writes the orbit
/// dump with the run config embedded.
#[allow(clippy::too_many_arguments)]
fn dump_orbits(
    f: &Correspondence,
    design: &StartDesign,
    n_list: &[u32],
    budget: usize,
    seed: u64,
    finder: &'static dyn RootFinder,
    config: &Value,
    path: &Path,
) -> Result<(), String> {
    let n_max = *n_list.iter().max().ok_or("empty n grid")?;
    let starts = design.starts(seed);
    let (orbits, _) = corr1::orbits::sample_orbits(f, &starts, n_max, budget, seed, finder)
        .map_err(|e| e.to_string())?;
    let mut body = Vec::new();
    corr1::orbits::write_orbits_csv(&orbits, &mut body).map_err(|e| e.to_string())?;
    write_atomic(path, &csv_artifact(config, body)).map_err(|e| e.to_string())
}

fn emit_entropy(
    table: &corr1::entropy::EntropyTable,
    config: &Value,
    output: &Option<PathBuf>,
    summary: &Option<PathBuf>,
) -> Result<(), String> {
    println!(
        "headline rate = {:.6} vs bound ({}) = {:.6} [n_max={}, seed={}]",
        table.headline_rate, table.bound_kind, table.bound, table.n_max, table.seed
    );
    for row in &table.rows {
        println!(
            "n={} eps={}: count={} rate={:.6}",
            row.n, row.epsilon, row.separated_count, row.rate
        );
    }
    if output.is_some() {
        let mut body = Vec::new();
        table.write_csv(&mut body).map_err(|e| e.to_string())?;
        write_or_print(output, csv_artifact(config, body))?;
    }
    if summary.is_some() {
        let doc = json!({
            "headline_rate": table.headline_rate,
            "bound": table.bound,
            "bound_kind": table.bound_kind,
            "n_max": table.n_max,
            "eps_grid": table.eps_grid,
            "seed": table.seed,
            "rows": table.rows,
            "design": table.design,
            "estimator": table.estimator,
        });
        write_or_print(summary, json_artifact(config, &doc))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli
        .threads
        .or_else(|| {
            std::env::var("CORR1_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((kind, message)) => {
            emit_error(&kind, &message);
            if kind == "usage" {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
