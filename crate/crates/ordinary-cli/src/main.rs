//! Command-line front end: configuration generation, ordinary counting,
//! graph analysis, structure detection, and the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input or hypothesis
//! violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ordinary::checks::{self, CheckResult};
use ordinary::dual_graph::build_graph;
use ordinary::elliptic::{
    exact_cyclic_config, float_cyclic_config, generate_cyclic_config, Curve,
    CurvePoint,
};
use ordinary::error::Error;
use ordinary::io::{
    self, config_from_file, graph_report_file, point_set_file, verdict_file, CurveFile,
    LineSummary, Manifest, Mode, PointSetFile,
};
use ordinary::projective::{PointConfig, ProjectivePoint};
use ordinary::scalar::{set_float_tolerance, Rat, Scalar};
use ordinary::structure::{
    count_ordinary_generic_d, detect_structure, generate_nrc_config, perturb, DetectParams,
};

#[derive(Parser)]
#[command(
    name = "ordinary",
    about = "Exact incidence geometry for configurations spanning few ordinary hyperplanes",
    version
)]
struct Cli {
    /// Scalar field: exact rationals or floats under an absolute tolerance.
    #[arg(long, global = true, default_value = "exact")]
    mode: CliMode,
    /// Seed for every random draw; recorded in the output manifest.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker-thread cap for the counting and graph stages.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Absolute tolerance for float-mode zero tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Output path; commands print to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliMode {
    Exact,
    Float,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Exact => Mode::Exact,
            CliMode::Float => Mode::Float,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a point-set file for one of the bundled constructions.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Count ordinary hyperplanes of a point-set file.
    Count {
        #[arg(long)]
        input: PathBuf,
        /// Expected ambient dimension (validated against the file).
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Build and classify the dual arrangement graph; emit the report.
    Graph {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the structure-detection pipeline; emit the verdict.
    Detect {
        #[arg(long)]
        input: PathBuf,
        /// Outlier budget multiplier in the quadric case.
        #[arg(long, default_value_t = 10)]
        c: u64,
    },
    /// Run a lemma-verification suite; exit 0 iff every check passes.
    Verify {
        #[arg(long)]
        suite: Suite,
        /// Largest float elliptic order used by the euler/bounds suites.
        #[arg(long, default_value_t = 20)]
        float_max: usize,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Lift of a finite cyclic subgroup of an elliptic curve.
    Elliptic(EllipticArgs),
    /// Points on a normal rational curve in a solid, plus one point off it.
    Nrc {
        #[arg(long)]
        n: usize,
    },
    /// Seeded random rational points in general position.
    Random {
        #[arg(long)]
        n: usize,
    },
    /// Replace k points of an input configuration with random points.
    Perturbed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args)]
struct EllipticArgs {
    /// Short-Weierstrass coefficient a (rational string).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Short-Weierstrass coefficient b (rational string).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Generator x coordinate.
    #[arg(long, allow_hyphen_values = true)]
    gx: Option<String>,
    /// Generator y coordinate.
    #[arg(long, allow_hyphen_values = true)]
    gy: Option<String>,
    /// Subgroup order.
    #[arg(long)]
    n: usize,
    /// Use the built-in rational torsion family of this order instead of
    /// explicit coefficients.
    #[arg(long)]
    torsion: bool,
    /// Curve descriptor file (short a,b or long a1..a6 plus generator).
    #[arg(long)]
    curve_file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[allow(non_camel_case_types)]
enum Suite {
    Lemma1,
    #[value(name = "11pts")]
    Pts11,
    #[value(name = "10points")]
    Points10,
    Euler,
    Bounds,
    Glynn,
    All,
}

fn exit_code(_err: &Error) -> u8 {
    // every named hypothesis/input violation is exit 2
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    set_float_tolerance(cli.tolerance);
    let mode: Mode = cli.mode.into();
    let result = match mode {
        Mode::Exact => run::<Rat>(&cli, mode),
        Mode::Float => run::<f64>(&cli, mode),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn write_or_print<T: serde::Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Error> {
    match out {
        Some(path) => io::write_json(path, value),
        None => {
            let text = serde_json::to_string_pretty(value)
                .map_err(|e| Error::Format(format!("serialize: {e}")))?;
            println!("{text}");
            Ok(())
        }
    }
}

fn load_config<S: Scalar>(path: &Path) -> Result<(PointConfig<S>, PointSetFile), Error> {
    let file: PointSetFile = io::read_json(path)?;
    let cfg = config_from_file::<S>(&file)?;
    Ok((cfg, file))
}

fn parse_scalar<S: Scalar>(s: &Option<String>, what: &str) -> Result<S, Error> {
    match s {
        Some(text) => S::parse_repr(text),
        None => Err(Error::Parse(format!("missing required value for {what}"))),
    }
}

fn run<S: Scalar>(cli: &Cli, mode: Mode) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Generate { kind } => {
            let (config, inputs) = generate::<S>(kind, cli, mode)?;
            let manifest = Manifest::new("generate", inputs, cli.seed, mode);
            let file = point_set_file(&config, manifest);
            write_or_print(&cli.out, &file)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Count { input, dim } => {
            let (cfg, _) = load_config::<S>(input)?;
            if let Some(d) = dim {
                if *d != cfg.dim() {
                    return Err(Error::MixedDimensions {
                        expected: *d,
                        found: cfg.dim(),
                    });
                }
            }
            let census = count_ordinary_generic_d(&cfg)?;
            println!(
                "n = {}, d = {}, ordinary = {}, total hyperplanes = {}, K = {:.6}",
                census.n, census.d, census.ordinary, census.total_hyperplanes, census.k
            );
            if cli.out.is_some() {
                #[derive(serde::Serialize)]
                struct CountReport {
                    manifest: Manifest,
                    #[serde(flatten)]
                    census: ordinary::structure::OrdinaryCount,
                }
                let report = CountReport {
                    manifest: Manifest::new(
                        "count",
                        vec![input.display().to_string()],
                        cli.seed,
                        mode,
                    ),
                    census,
                };
                write_or_print(&cli.out, &report)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { input } => {
            let (cfg, _) = load_config::<S>(input)?;
            let graph = build_graph(&cfg)?;
            let classes = graph.classify_edges()?;
            let stats = graph.stats_and_bounds(&classes)?;
            let lines: Vec<LineSummary> = (0..graph.lines.len())
                .map(|li| LineSummary {
                    triple: graph.lines[li].triple,
                    edges: graph.lines[li].edge_count(),
                    rather_good_runs: graph
                        .rather_good_segments(li, &classes)
                        .iter()
                        .map(|s| s.slots.len())
                        .collect(),
                    good_runs: graph
                        .good_segments(li, &classes)
                        .iter()
                        .map(|s| s.slots.len())
                        .collect(),
                })
                .collect();
            println!(
                "n = {}, vertices = {}, edges = {}, faces = {}, good = {}, rather good = {}, \
                 bad = {} (bound {}), slightly bad = {} (bound {}), identities ok = {}",
                stats.n,
                stats.v_histogram.values().sum::<u64>(),
                stats.edge_count,
                stats.face_count,
                stats.good_edges,
                stats.rather_good_edges,
                stats.bad_edges,
                stats.bad_edge_bound,
                stats.slightly_bad_edges,
                stats.slightly_bad_edge_bound,
                stats.identity_checks.all_hold()
            );
            let manifest =
                Manifest::new("graph", vec![input.display().to_string()], cli.seed, mode);
            let report = graph_report_file(&stats, lines, manifest);
            if cli.out.is_some() {
                write_or_print(&cli.out, &report)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Detect { input, c } => {
            let (cfg, _) = load_config::<S>(input)?;
            let params = DetectParams {
                c: *c,
                ..DetectParams::default()
            };
            let census = count_ordinary_generic_d(&cfg)?;
            let verdict = detect_structure(&cfg, &params)?;
            let manifest =
                Manifest::new("detect", vec![input.display().to_string()], cli.seed, mode);
            let file = verdict_file(&verdict, census.k, &params, manifest);
            println!(
                "case = {}, outliers = {:?}, K = {:.6}",
                file.case, file.outlier_indices, file.k
            );
            write_or_print(&cli.out, &file)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, float_max } => {
            let results = run_suite(*suite, *float_max, cli.seed)?;
            let mut ok = true;
            for r in &results {
                println!("[{}] {} - {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                ok &= r.passed;
            }
            if cli.out.is_some() {
                write_or_print(&cli.out, &results)?;
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn generate<S: Scalar>(
    kind: &GenerateKind,
    cli: &Cli,
    mode: Mode,
) -> Result<(PointConfig<S>, Vec<String>), Error> {
    match kind {
        GenerateKind::Elliptic(args) => {
            if let Some(path) = &args.curve_file {
                let file: CurveFile = io::read_json(path)?;
                let (curve, g) = curve_from_file::<S>(&file)?;
                let cfg = generate_cyclic_config(&curve, &g, args.n)?;
                return Ok((cfg.config, vec![path.display().to_string()]));
            }
            if args.torsion {
                let cfg = match mode {
                    Mode::Exact => exact_cyclic_config::<S>(args.n)?,
                    Mode::Float => {
                        // float torsion tables are pointless; the numeric
                        // division-point construction covers every order
                        return Err(Error::Parse(
                            "--torsion is an exact-mode construction".into(),
                        ));
                    }
                };
                return Ok((cfg.config, vec![]));
            }
            match (&args.a, &args.b, &args.gx, &args.gy, mode) {
                (None, None, None, None, Mode::Float) => {
                    let cfg = float_cyclic_config(args.n)?;
                    let lifted: Vec<ProjectivePoint<S>> = cfg
                        .config
                        .points
                        .iter()
                        .map(|p| {
                            ProjectivePoint::new(
                                p.coords()
                                    .iter()
                                    .map(|c| {
                                        S::parse_repr(&format!("{c}"))
                                    })
                                    .collect::<Result<Vec<S>, Error>>()?,
                            )
                        })
                        .collect::<Result<_, Error>>()?;
                    Ok((PointConfig::new(lifted, cfg.config.label.clone())?, vec![]))
                }
                _ => {
                    let a: S = parse_scalar(&args.a, "--a")?;
                    let b: S = parse_scalar(&args.b, "--b")?;
                    let gx: S = parse_scalar(&args.gx, "--gx")?;
                    let gy: S = parse_scalar(&args.gy, "--gy")?;
                    let curve = Curve::new(a, b)?;
                    let g = CurvePoint::affine(gx, gy);
                    let cfg = generate_cyclic_config(&curve, &g, args.n)?;
                    Ok((cfg.config, vec![]))
                }
            }
        }
        GenerateKind::Nrc { n } => Ok((generate_nrc_config::<S>(*n)?, vec![])),
        GenerateKind::Random { n } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
            for _ in 0..500 {
                let pts: Result<Vec<ProjectivePoint<S>>, Error> = (0..*n)
                    .map(|_| {
                        ProjectivePoint::new(
                            (0..5)
                                .map(|_| S::from_i64(rng.gen_range(-9..=9)))
                                .collect::<Vec<S>>(),
                        )
                    })
                    .collect();
                let Ok(pts) = pts else { continue };
                let Ok(cfg) = PointConfig::new(pts, format!("random-n{n}-seed{}", cli.seed))
                else {
                    continue;
                };
                if cfg.check_general_position().is_ok() && cfg.spans() {
                    return Ok((cfg, vec![]));
                }
            }
            Err(Error::RetriesExhausted(
                "drawing a random general-position configuration".into(),
            ))
        }
        GenerateKind::Perturbed { input, k } => {
            let (cfg, _) = load_config::<S>(input)?;
            let (out, _idx) = perturb(&cfg, *k, cli.seed)?;
            Ok((out, vec![input.display().to_string()]))
        }
    }
}

fn curve_from_file<S: Scalar>(file: &CurveFile) -> Result<(Curve<S>, CurvePoint<S>), Error> {
    let gx = S::parse_repr(&file.gx)?;
    let gy = S::parse_repr(&file.gy)?;
    let g = CurvePoint::affine(gx, gy);
    if let Some(long) = &file.long {
        let c: Vec<S> = long
            .iter()
            .map(|s| S::parse_repr(s))
            .collect::<Result<_, Error>>()?;
        let (curve, map) = ordinary::elliptic::weierstrass_short_form(
            c[0].clone(),
            c[1].clone(),
            c[2].clone(),
            c[3].clone(),
            c[4].clone(),
        )?;
        return Ok((curve, map.apply(&g)));
    }
    match (&file.a, &file.b) {
        (Some(a), Some(b)) => {
            let curve = Curve::new(S::parse_repr(a)?, S::parse_repr(b)?)?;
            Ok((curve, g))
        }
        _ => Err(Error::Format(
            "curve file needs either a,b or long coefficients".into(),
        )),
    }
}

fn run_suite(suite: Suite, float_max: usize, seed: u64) -> Result<Vec<CheckResult>, Error> {
    let mut out = Vec::new();
    let grids = |out: &mut Vec<CheckResult>| -> Result<(), Error> {
        out.extend(checks::grids_suite(25, seed)?);
        Ok(())
    };
    match suite {
        Suite::Lemma1 => out.extend(checks::lemma1_suite(10, 1000, 100, seed)?),
        Suite::Pts11 | Suite::Points10 => grids(&mut out)?,
        Suite::Euler => out.extend(checks::euler_suite(float_max)?),
        Suite::Bounds => out.extend(checks::bounds_suite(float_max)?),
        Suite::Glynn => out.extend(checks::glynn_suite()?),
        Suite::All => {
            out.extend(checks::lemma1_suite(10, 1000, 100, seed)?);
            grids(&mut out)?;
            out.extend(checks::counting_suite()?);
            out.extend(checks::curve_quadrics_suite(20, seed)?);
            out.extend(checks::euler_suite(float_max)?);
            out.extend(checks::bounds_suite(float_max)?);
            out.extend(checks::glynn_suite()?);
        }
    }
    Ok(out)
}
