//! Command-line front end: each subcommand reproduces one claim about
//! the explicit channel pair (or its random cousins) and emits CSV/JSON
//! records with the effective configuration echoed alongside.
//!
//! Exit codes: 0 success, 1 claim-check failure, 2 usage error,
//! 3 numerical failure.

mod config;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use config::RunConfig;
use minent::channels::{depolarizing_channel, Channel};
use minent::construction::{
    channel_pair, explicit_channels_paper_weights, explicit_channels_projector, explicit_shape,
    paper_weights_r, paper_weights_s, subspace_r, subspace_s, SubspacePair,
};
use minent::experiments::{
    certify_pair, lemma1_sweep, random_pair_sweep, verify_construction,
};
use minent::qmath::{BipartiteShape, PureVector, SubspaceJson};
use minent::scan::{
    optimize_weights, scan_to_csv, violation_scan, ScanSidecar, WeightInit, WeightSearchOptions,
};

#[derive(Parser)]
#[command(
    name = "minent",
    version,
    about = "Minimum output Rényi entropy: explicit additivity-violating channel pairs, scans, and certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Base seed for every random draw in the command.
    #[arg(long)]
    seed: Option<u64>,
    /// Restart count for the product / entropy optimizers.
    #[arg(long)]
    restarts: Option<usize>,
    /// JSON config file; flags override file values.
    #[arg(long)]
    config: Option<String>,
    /// Output directory for CSV/JSON records.
    #[arg(long)]
    out: Option<String>,
    /// CJ state choice: projector | paper_weights | custom:<path>.
    #[arg(long)]
    cj: Option<String>,
    /// Red curve: sp (S_p of the joint output) | s1 (its von Neumann entropy).
    #[arg(long = "red-variant")]
    red_variant: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks of the explicit construction (exit 1 if any fails).
    Verify {
        #[command(flatten)]
        common: Common,
        /// Replace the first subspace basis by one loaded from JSON.
        #[arg(long)]
        subspace: Option<String>,
    },
    /// Violation scan: red/blue curves over p plus the crossing point.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Channel family: explicit | depolarizing.
        #[arg(long, default_value = "explicit")]
        channels: String,
        /// Grid as start,stop,points.
        #[arg(long)]
        grid: Option<String>,
    },
    /// SDP certificates and the certified violation threshold.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Channel family: explicit | depolarizing.
        #[arg(long, default_value = "explicit")]
        channels: String,
    },
    /// Random orthogonal CJ pairs: construction identities per seed.
    Random {
        #[command(flatten)]
        common: Common,
        /// Bipartite shape, e.g. 4x3.
        #[arg(long, default_value = "4x3")]
        shape: String,
        /// Number of consecutive seeds.
        #[arg(long, default_value_t = 50)]
        seeds: usize,
        /// Also attach SDP certificates per channel.
        #[arg(long, default_value_t = false)]
        certify: bool,
    },
    /// Product-vector search in Haar-random subspaces over d_E values.
    Lemma1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "4x3")]
        shape: String,
        /// Comma-separated subspace dimensions.
        #[arg(long = "dE", default_value = "6,7")]
        d_e: String,
        #[arg(long, default_value_t = 50)]
        seeds: usize,
        /// Overlap tolerance for declaring a product vector.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Search the weight simplices for the largest crossing point.
    WeightsOpt {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        /// Start point: uniform | paper.
        #[arg(long, default_value = "uniform")]
        init: String,
        /// Restarts inside the search objective.
        #[arg(long = "inner-restarts", default_value_t = 12)]
        inner_restarts: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            3
        }
    };
    std::process::exit(code);
}

enum CliError {
    Usage(String),
    Numerical(String),
}

impl From<minent::Error> for CliError {
    fn from(e: minent::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

fn resolve(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::from_file(common.config.as_deref()).map_err(CliError::Usage)?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if common.restarts.is_some() {
        cfg.restarts = common.restarts;
    }
    if let Some(o) = &common.out {
        cfg.output_dir = o.clone();
    }
    if let Some(c) = &common.cj {
        cfg.cj_variant = c.clone();
    }
    if let Some(v) = &common.red_variant {
        cfg.red_variant = v.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
    }
    cfg.validate().map_err(CliError::Usage)?;
    Ok(cfg)
}

fn parse_shape(text: &str) -> Result<BipartiteShape, CliError> {
    let parts: Vec<&str> = text.split('x').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("shape must look like 4x3, got `{text}`")));
    }
    let d_a: usize = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad shape `{text}`")))?;
    let d_b: usize = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad shape `{text}`")))?;
    BipartiteShape::new(d_a, d_b).map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Deserialize)]
struct CustomWeights {
    weights_r: Vec<f64>,
    weights_s: Vec<f64>,
}

fn build_pair(cfg: &RunConfig) -> Result<(Channel, Channel), CliError> {
    match cfg.cj_variant.as_str() {
        "projector" => Ok(explicit_channels_projector()?),
        "paper_weights" => Ok(explicit_channels_paper_weights()?),
        other => {
            if let Some(path) = other.strip_prefix("custom:") {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
                let w: CustomWeights = serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("bad weights file {path}: {e}")))?;
                let pair = SubspacePair::explicit();
                Ok(channel_pair(&pair, &w.weights_r, &w.weights_s)?)
            } else {
                Err(CliError::Usage(format!(
                    "unknown cj variant `{other}` (expected projector | paper_weights | custom:<path>)"
                )))
            }
        }
    }
}

fn write_output(dir: &str, name: &str, value: &serde_json::Value) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("cannot create {dir}: {e}")))?;
    let path = Path::new(dir).join(name);
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    std::fs::write(&path, text).map_err(|e| CliError::Usage(format!("cannot write {path:?}: {e}")))?;
    Ok(path)
}

fn timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn sidecar(cfg: &RunConfig, payload: serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "tool_version": minent::TOOL_VERSION,
        "timestamp_unix": timestamp(),
        "config": cfg,
        "report": payload,
    })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify { common, subspace } => cmd_verify(&common, subspace.as_deref()),
        Command::Scan { common, channels, grid } => cmd_scan(&common, &channels, grid.as_deref()),
        Command::Certify { common, channels } => cmd_certify(&common, &channels),
        Command::Random { common, shape, seeds, certify } => {
            cmd_random(&common, &shape, seeds, certify)
        }
        Command::Lemma1 { common, shape, d_e, seeds, tol } => {
            cmd_lemma1(&common, &shape, &d_e, seeds, tol)
        }
        Command::WeightsOpt { common, budget, init, inner_restarts } => {
            cmd_weights_opt(&common, budget, &init, inner_restarts)
        }
    }
}

fn load_basis(path: &str) -> Result<Vec<PureVector>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    let doc: SubspaceJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad subspace file {path}: {e}")))?;
    // Lenient load: the checks, not the loader, judge a corrupted file.
    doc.to_basis_lenient().map_err(CliError::from)
}

fn cmd_verify(common: &Common, subspace: Option<&str>) -> Result<i32, CliError> {
    let cfg = resolve(common)?;
    let r_basis = match subspace {
        Some(path) => load_basis(path)?,
        None => subspace_r().basis().to_vec(),
    };
    let s_basis = subspace_s().basis().to_vec();
    let restarts = cfg.product_search_restarts();
    let checks = verify_construction(explicit_shape(), &r_basis, &s_basis, restarts, cfg.seed);
    let all_passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        println!(
            "{:<34} {}  value={} threshold={}",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            fmt12(c.value),
            fmt12(c.threshold),
        );
    }
    let payload = serde_json::json!({
        "checks": checks,
        "all_passed": all_passed,
        "replaced_subspace": subspace,
        "restarts": restarts,
    });
    let path = write_output(&cfg.output_dir, "verify.json", &sidecar(&cfg, payload))?;
    println!("report: {}", path.display());
    Ok(if all_passed { 0 } else { 1 })
}

fn cmd_scan(common: &Common, channels: &str, grid: Option<&str>) -> Result<i32, CliError> {
    let mut cfg = resolve(common)?;
    if let Some(g) = grid {
        let parts: Vec<&str> = g.split(',').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!("grid must be start,stop,points, got `{g}`")));
        }
        cfg.grid = config::GridSpec {
            start: parts[0].parse().map_err(|_| CliError::Usage("bad grid start".into()))?,
            stop: parts[1].parse().map_err(|_| CliError::Usage("bad grid stop".into()))?,
            points: parts[2].parse().map_err(|_| CliError::Usage("bad grid points".into()))?,
        };
        cfg.validate().map_err(CliError::Usage)?;
    }
    let (label, n1, n2) = match channels {
        "explicit" => {
            let (a, b) = build_pair(&cfg)?;
            (cfg.cj_variant.clone(), a, b)
        }
        "depolarizing" => {
            let d = depolarizing_channel(explicit_shape())?;
            ("depolarizing".to_string(), d.clone(), d)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown channel family `{other}` (expected explicit | depolarizing)"
            )))
        }
    };
    let scan = violation_scan(&n1, &n2, &cfg.scan_options())?;

    std::fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", cfg.output_dir)))?;
    let csv_path = Path::new(&cfg.output_dir).join("scan.csv");
    std::fs::write(&csv_path, scan_to_csv(&scan))
        .map_err(|e| CliError::Usage(format!("cannot write {csv_path:?}: {e}")))?;
    let side = ScanSidecar::new(&scan, &label);
    let json_path = write_output(
        &cfg.output_dir,
        "scan.json",
        &sidecar(&cfg, serde_json::to_value(&side).map_err(|e| CliError::Numerical(e.to_string()))?),
    )?;

    match scan.crossing {
        Some(c) => println!("crossing: {}", fmt12(c)),
        None => println!("crossing: none (no sign change on the grid)"),
    }
    println!(
        "violated points: {}/{}",
        scan.violated.iter().filter(|v| **v).count(),
        scan.p_grid.len()
    );
    println!("csv: {}", csv_path.display());
    println!("sidecar: {}", json_path.display());
    Ok(0)
}

fn cmd_certify(common: &Common, channels: &str) -> Result<i32, CliError> {
    let cfg = resolve(common)?;
    let (n1, n2) = match channels {
        "explicit" => build_pair(&cfg)?,
        "depolarizing" => {
            let d = depolarizing_channel(explicit_shape())?;
            (d.clone(), d)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown channel family `{other}` (expected explicit | depolarizing)"
            )))
        }
    };
    let restarts = cfg.entropy_restarts();
    let (c1, c2, threshold) = certify_pair(&n1, &n2, restarts, cfg.seed)?;
    let converged = c1.converged && c2.converged;
    println!(
        "channel 1: lambda {} (gap {}, seesaw {})",
        fmt12(c1.lambda),
        fmt12(c1.gap),
        fmt12(c1.seesaw_upper)
    );
    println!(
        "channel 2: lambda {} (gap {}, seesaw {})",
        fmt12(c2.lambda),
        fmt12(c2.gap),
        fmt12(c2.seesaw_upper)
    );
    match &threshold {
        Some(t) => println!("certified violation for all p <= {}", fmt12(t.p_star)),
        None => println!("no certified violation interval (bounds too weak)"),
    }
    let payload = serde_json::json!({
        "channel_1": c1,
        "channel_2": c2,
        "threshold": threshold,
        "checkers_passed": c1.checker_passed && c2.checker_passed,
        "restarts": restarts,
    });
    let path = write_output(&cfg.output_dir, "certify.json", &sidecar(&cfg, payload))?;
    println!("report: {}", path.display());
    if !converged {
        return Ok(3);
    }
    Ok(if c1.checker_passed && c2.checker_passed { 0 } else { 1 })
}

fn cmd_random(common: &Common, shape: &str, seeds: usize, certify: bool) -> Result<i32, CliError> {
    let cfg = resolve(common)?;
    let shape = parse_shape(shape)?;
    if shape.dim() % 2 != 0 {
        return Err(CliError::Usage(format!(
            "total dimension {} is odd; the orthogonal pair needs an even split",
            shape.dim()
        )));
    }
    let records = random_pair_sweep(shape, cfg.seed, seeds, certify)?;
    let joint_zero = records
        .iter()
        .filter(|r| r.joint_ninth_eigenvalue.abs() <= 1e-10)
        .count();
    let ortho = records.iter().filter(|r| r.cj_orthogonality <= 1e-14).count();
    println!("joint-zero-eigenvalue confirmations: {joint_zero}/{seeds}");
    println!("cj orthogonality within 1e-14: {ortho}/{seeds}");
    if certify {
        let certified = records
            .iter()
            .filter(|r| {
                r.certified
                    .as_ref()
                    .map(|(a, b)| a.lambda > 0.0 && b.lambda > 0.0)
                    .unwrap_or(false)
            })
            .count();
        println!("certified positive pairs: {certified}/{seeds}");
    }
    let payload = serde_json::json!({
        "shape": shape,
        "records": records,
        "joint_zero_count": joint_zero,
    });
    let path = write_output(&cfg.output_dir, "random.json", &sidecar(&cfg, payload))?;
    println!("report: {}", path.display());
    Ok(if joint_zero == seeds && ortho == seeds { 0 } else { 1 })
}

fn cmd_lemma1(
    common: &Common,
    shape: &str,
    d_e_list: &str,
    seeds: usize,
    tol: Option<f64>,
) -> Result<i32, CliError> {
    let cfg = resolve(common)?;
    let shape = parse_shape(shape)?;
    let dims: Vec<usize> = d_e_list
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad dimension list `{d_e_list}`")))?;
    let tol = tol.unwrap_or(cfg.product_tol);
    let restarts = cfg.product_search_restarts();
    let records = lemma1_sweep(shape, &dims, cfg.seed, seeds, tol, restarts)?;
    for &d in &dims {
        let sub: Vec<_> = records.iter().filter(|r| r.d_e == d).collect();
        let hits = sub.iter().filter(|r| r.detected).count();
        let condition = minent::construction::lemma1_condition(shape, d);
        println!(
            "d_E={d}: {hits}/{} product-vector detections (dimension condition holds: {condition})",
            sub.len()
        );
    }
    let payload = serde_json::json!({
        "shape": shape,
        "dims": dims,
        "tol": tol,
        "restarts": restarts,
        "records": records,
    });
    let path = write_output(&cfg.output_dir, "lemma1.json", &sidecar(&cfg, payload))?;
    println!("report: {}", path.display());
    Ok(0)
}

fn cmd_weights_opt(
    common: &Common,
    budget: usize,
    init: &str,
    inner_restarts: usize,
) -> Result<i32, CliError> {
    let cfg = resolve(common)?;
    let init = match init {
        "uniform" => WeightInit::Uniform,
        "paper" => WeightInit::Paper,
        other => {
            return Err(CliError::Usage(format!(
                "unknown init `{other}` (expected uniform | paper)"
            )))
        }
    };
    let pair = SubspacePair::explicit();
    let opts = WeightSearchOptions {
        seed: cfg.seed,
        budget,
        inner_restarts,
        final_restarts: cfg.entropy_restarts(),
        red_variant: cfg.red_variant,
        init,
    };
    let res = optimize_weights(&pair, &opts)?;
    println!("achieved crossing: {}", fmt12(res.achieved_crossing));
    let join = |w: &[f64]| w.iter().map(|x| fmt12(*x)).collect::<Vec<_>>().join(", ");
    println!("weights_r: [{}]", join(&res.weights_r));
    println!("weights_s: [{}]", join(&res.weights_s));
    let payload = serde_json::json!({
        "result": res,
        "reference_weights_r": paper_weights_r(),
        "reference_weights_s": paper_weights_s(),
    });
    let path = write_output(&cfg.output_dir, "weights_opt.json", &sidecar(&cfg, payload))?;
    println!("report: {}", path.display());
    Ok(0)
}
