use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use noisynorm::bounds::{
    ai_bounds, block_error_bound, eta_star, gk_curve, p_ue_bounds, p_ue_exact,
    weight_bound_margin,
};
use noisynorm::channel::DiscreteChannel;
use noisynorm::code::{macwilliams, LinearCode};
use noisynorm::fmt_sig;
use noisynorm::gf::{Field, Matrix};
use noisynorm::prob::FiniteDist;
use noisynorm::sdpi::{lambda_opt, sup_search};
use noisynorm::simulate::monte_carlo_pb;
use noisynorm::verify::{
    check_base_case, check_minkowski, check_tensor, default_minkowski_pairs, monotone_suite,
    CheckReport,
};
use noisynorm::Exponent;

/// Exit code reserved for a mathematical violation found by `verify`, so CI
/// can distinguish science failures from plumbing failures.
const EXIT_VIOLATION: u8 = 2;

#[derive(Parser)]
#[command(
    name = "noisynorm",
    about = "Noise-operator norm inequalities, SDPI constants and linear-code bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal contraction exponent λ(q, μ*, ρ).
    Lambda {
        /// Norm exponent: a real ≥ 2 or `inf`.
        #[arg(long)]
        q: Exponent,
        #[arg(long)]
        mu_star: f64,
        #[arg(long)]
        rho: f64,
    },
    /// Brute-force supremum of the contraction ratio over bounded
    /// mean-zero random variables.
    SdpiSup {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        alpha: f64,
        /// Grid points per dimension.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Randomized falsification suites; exits 2 if a violation is found.
    Verify(VerifyArgs),
    /// Field construction info: order, modulus, element encoding.
    Field {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        ell: u32,
    },
    /// Code analysis: dimension, distance, weight distributions, erasure
    /// entropy.
    Code {
        #[command(subcommand)]
        command: CodeCommand,
    },
    /// Channel statistics: Bhattacharyya coefficient and capacity.
    Channel {
        /// `kec:k:lambda`, `ksc:k:eta`, or a path to a CSV transition matrix.
        descriptor: String,
    },
    /// Bounds tying code statistics to channel parameters.
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
    /// Capacity-transfer curve (c_e, eta_star, g_k) as CSV.
    Curve {
        /// Comma-separated list of alphabet sizes, e.g. `2,3,4,8`.
        #[arg(long)]
        k: String,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Output path, or `-` for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Monte Carlo MAP block-error simulation.
    Simulate {
        #[arg(long)]
        code: String,
        #[arg(long)]
        channel: String,
        /// Trial count; scientific notation like `1e6` is accepted.
        #[arg(long, value_parser = parse_count)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// One of `base`, `tensor`, `minkowski`, `monotone`.
    #[arg(long)]
    suite: String,
    /// Base distribution: comma-separated decimals or `uniform:k`.
    #[arg(long, default_value = "uniform:2")]
    dist: String,
    #[arg(long, default_value = "2")]
    q: Exponent,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_parser = parse_count, default_value = "1000")]
    trials: u64,
    /// Mandatory for the randomized suites; there is no wall-clock default.
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the optimal λ in the tensor suite (falsification aid).
    #[arg(long)]
    lambda_override: Option<f64>,
    /// Check one specific function, loaded from a CSV file (one value per
    /// line, mixed-radix index order, coordinate 0 most significant).
    /// Only meaningful with `--suite tensor`; n is inferred from the length.
    #[arg(long)]
    f_csv: Option<String>,
    /// Estimate the subset average by Monte Carlo with this many samples
    /// instead of exact 2^n enumeration (requires --seed).
    #[arg(long)]
    mc: Option<u64>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Reads a generator matrix file and reports dim, min distance, weight
    /// distributions and erasure-channel conditional entropy.
    Analyze {
        file: String,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// `exact` or `mc:<trials>`.
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Weight-distribution bound: lhs/rhs in bits and the margin.
    Weight {
        #[arg(long)]
        code: String,
        #[arg(long)]
        lambda: f64,
    },
    /// Per-weight codeword-count bounds (primal and dual).
    Ai {
        #[arg(long)]
        code: String,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        i: usize,
    },
    /// Block-error bound from minimum distance and the channel's
    /// Bhattacharyya coefficient.
    Blockerr {
        #[arg(long)]
        code: String,
        #[arg(long)]
        channel: String,
        #[arg(long)]
        lambda: f64,
    },
    /// Undetected-error bounds and the exact value.
    Pue {
        #[arg(long)]
        code: String,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        eta: f64,
    },
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("bad count {s:?}"))?;
    if !(1.0..=1e18).contains(&v) || v.fract() != 0.0 {
        return Err(format!("count {s:?} is not a positive integer"));
    }
    Ok(v as u64)
}

fn parse_dist(s: &str) -> Result<FiniteDist, String> {
    if let Some(k) = s.strip_prefix("uniform:") {
        let k: usize = k.parse().map_err(|_| format!("bad alphabet size {k:?}"))?;
        return FiniteDist::uniform(k).map_err(|e| e.to_string());
    }
    let probs: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("bad distribution {s:?}"))?;
    FiniteDist::new(&probs).map_err(|e| e.to_string())
}

fn parse_channel(s: &str) -> Result<DiscreteChannel, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["kec", k, lambda] => {
            let k = k.parse().map_err(|_| format!("bad k {k:?}"))?;
            let lambda = lambda
                .parse()
                .map_err(|_| format!("bad lambda {lambda:?}"))?;
            DiscreteChannel::erasure(k, lambda).map_err(|e| e.to_string())
        }
        ["ksc", k, eta] => {
            let k = k.parse().map_err(|_| format!("bad k {k:?}"))?;
            let eta = eta.parse().map_err(|_| format!("bad eta {eta:?}"))?;
            DiscreteChannel::symmetric(k, eta).map_err(|e| e.to_string())
        }
        _ => {
            // A CSV transition matrix: one row per input symbol.
            let mut text = String::new();
            File::open(s)
                .and_then(|mut f| f.read_to_string(&mut text))
                .map_err(|e| format!("cannot read channel file {s:?}: {e}"))?;
            let mut rows: Vec<Vec<f64>> = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let row: Vec<f64> = line
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| format!("bad row {line:?}"))?;
                rows.push(row);
            }
            let k = rows.len();
            let m = rows.first().map(|r| r.len()).unwrap_or(0);
            if rows.iter().any(|r| r.len() != m) {
                return Err("ragged transition matrix".into());
            }
            let flat: Vec<f64> = rows.into_iter().flatten().collect();
            DiscreteChannel::generic(k, m, &flat).map_err(|e| e.to_string())
        }
    }
}

fn load_code(path: &str) -> Result<LinearCode, String> {
    let file = File::open(path).map_err(|e| format!("cannot open {path:?}: {e}"))?;
    let matrix = Matrix::from_reader(BufReader::new(file)).map_err(|e| e.to_string())?;
    LinearCode::from_generator(matrix).map_err(|e| e.to_string())
}

fn wd_json(counts: &[u128]) -> serde_json::Value {
    json!(counts.iter().map(|c| *c as u64).collect::<Vec<u64>>())
}

fn print_report(report: &CheckReport, format: Format) {
    let verdict = if report.passed() { "ok" } else { "VIOLATED" };
    let summary = format!(
        "{:<22} trials {:>8}  min margin {:>16}  violations {:>4}  [{verdict}]",
        report.suite,
        report.trials,
        fmt_sig(report.min_margin, 6),
        report.violations,
    );
    match format {
        Format::Json => {
            // Summary on stderr keeps stdout machine-readable.
            eprintln!("{summary}");
            println!("{}", serde_json::to_string(report).unwrap());
        }
        Format::Human => println!("{summary}"),
    }
}

fn run() -> Result<u8, String> {
    let cli = Cli::try_parse().map_err(|e| e.to_string())?;
    match cli.command {
        Command::Lambda { q, mu_star, rho } => {
            let lam = lambda_opt(q, mu_star, rho).map_err(|e| e.to_string())?;
            println!("{}", fmt_sig(lam, 12));
        }
        Command::SdpiSup {
            q,
            rho,
            alpha,
            grid,
            format,
        } => {
            let res = sup_search(q, rho, alpha, grid).map_err(|e| e.to_string())?;
            let lam = lambda_opt(Exponent::Finite(q), 1.0 / (1.0 + alpha), rho)
                .map_err(|e| e.to_string())?;
            match format {
                Format::Json => {
                    let payload = json!({
                        "best_value": res.best_value,
                        "best_binary": res.best_binary,
                        "best_ternary": res.best_ternary,
                        "atoms": res.best.atoms(),
                        "probs": res.best.probs(),
                        "lambda_opt": lam,
                        "gap": lam - res.best_value,
                    });
                    println!("{payload}");
                }
                Format::Human => {
                    println!("sup ratio   {}", fmt_sig(res.best_value, 12));
                    println!("lambda_opt  {}", fmt_sig(lam, 12));
                    println!("gap         {}", fmt_sig(lam - res.best_value, 6));
                    println!(
                        "argmax      atoms {:?}  probs {:?}",
                        res.best.atoms(),
                        res.best.probs()
                    );
                }
            }
        }
        Command::Verify(args) => return run_verify(args),
        Command::Field { p, ell } => {
            let field = Field::new(p, ell).map_err(|e| e.to_string())?;
            let payload = json!({
                "p": field.p(),
                "ell": field.ell(),
                "k": field.order(),
                "modulus": field.modulus(),
            });
            println!("{payload}");
        }
        Command::Code { command } => match command {
            CodeCommand::Analyze {
                file,
                lambda,
                mode,
                seed,
            } => {
                let code = load_code(&file)?;
                let wd = code.weight_distribution().map_err(|e| e.to_string())?;
                let dual_wd =
                    macwilliams(&wd, code.field().order() as u64).map_err(|e| e.to_string())?;
                let d = code.min_distance().ok();
                let h_bits = match mode.as_str() {
                    "exact" => code
                        .erasure_entropy_exact(lambda)
                        .map_err(|e| e.to_string())?,
                    m => {
                        let trials: u64 = m
                            .strip_prefix("mc:")
                            .ok_or_else(|| format!("bad mode {m:?}; use exact or mc:<trials>"))?
                            .parse()
                            .map_err(|_| format!("bad trial count in {m:?}"))?;
                        let seed =
                            seed.ok_or_else(|| "--seed is required for mc mode".to_string())?;
                        code.erasure_entropy_mc(lambda, trials, seed)
                            .map_err(|e| e.to_string())?
                            .0
                    }
                };
                let payload = json!({
                    "n": code.length(),
                    "dim": code.dim(),
                    "d": d,
                    "wd": wd_json(&wd.counts),
                    "dual_wd": wd_json(&dual_wd.counts),
                    "H_bits": h_bits,
                    "lambda": lambda,
                });
                println!("{payload}");
            }
        },
        Command::Channel { descriptor } => {
            let w = parse_channel(&descriptor)?;
            let kind = match w.kind() {
                noisynorm::channel::ChannelKind::Erasure { .. } => "erasure",
                noisynorm::channel::ChannelKind::Symmetric { .. } => "symmetric",
                noisynorm::channel::ChannelKind::Generic => "generic",
            };
            let payload = json!({
                "kind": kind,
                "inputs": w.input_size(),
                "outputs": w.output_size(),
                "bhattacharyya": w.bhattacharyya(),
                "capacity": w.capacity().ok(),
            });
            println!("{payload}");
        }
        Command::Bounds { command } => return run_bounds(command),
        Command::Curve { k, points, out } => {
            let ks: Vec<u32> = k
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("bad alphabet list {k:?}"))?;
            if points == 0 {
                return Err("need at least one grid point".into());
            }
            let grid: Vec<f64> = (1..=points).map(|j| j as f64 / points as f64).collect();
            let mut text = String::new();
            if ks.len() == 1 {
                text.push_str("c_e,eta_star,g_k\n");
            } else {
                text.push_str("k,c_e,eta_star,g_k\n");
            }
            for &kk in &ks {
                let rows = gk_curve(kk, &grid).map_err(|e| e.to_string())?;
                for (c_e, eta, g) in rows {
                    if ks.len() == 1 {
                        text.push_str(&format!(
                            "{},{},{}\n",
                            fmt_sig(c_e, 12),
                            fmt_sig(eta, 12),
                            fmt_sig(g, 12)
                        ));
                    } else {
                        text.push_str(&format!(
                            "{kk},{},{},{}\n",
                            fmt_sig(c_e, 12),
                            fmt_sig(eta, 12),
                            fmt_sig(g, 12)
                        ));
                    }
                }
            }
            if out == "-" {
                print!("{text}");
            } else {
                let mut file = File::create(&out).map_err(|e| e.to_string())?;
                file.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
            }
        }
        Command::Simulate {
            code,
            channel,
            trials,
            seed,
        } => {
            let code = load_code(&code)?;
            let w = parse_channel(&channel)?;
            let res = monte_carlo_pb(&code, &w, trials, seed).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string(&res).unwrap());
        }
    }
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> Result<u8, String> {
    let dist = parse_dist(&args.dist)?;
    let need_seed = || args.seed.ok_or_else(|| "--seed is required".to_string());
    if let Some(path) = &args.f_csv {
        return verify_csv_function(&args, &dist, path);
    }
    let reports: Vec<CheckReport> = match args.suite.as_str() {
        "base" => vec![
            check_base_case(&dist, args.q, args.rho, args.trials, need_seed()?)
                .map_err(|e| e.to_string())?,
        ],
        "tensor" => vec![check_tensor(
            &dist,
            args.n,
            args.q,
            args.rho,
            args.lambda_override,
            args.trials,
            need_seed()?,
        )
        .map_err(|e| e.to_string())?],
        "minkowski" => {
            let pairs = default_minkowski_pairs();
            vec![
                check_minkowski(&dist, args.n.max(2), &pairs, args.trials, need_seed()?)
                    .map_err(|e| e.to_string())?,
            ]
        }
        "monotone" => monotone_suite(),
        other => return Err(format!("unknown suite {other:?}")),
    };
    let mut violated = false;
    for report in &reports {
        print_report(report, args.format);
        violated |= !report.passed();
    }
    Ok(if violated { EXIT_VIOLATION } else { 0 })
}

/// Checks the tensorized inequality on one explicit function loaded from a
/// CSV file; the coordinate count is inferred from the value count.
fn verify_csv_function(args: &VerifyArgs, dist: &FiniteDist, path: &str) -> Result<u8, String> {
    if args.suite != "tensor" {
        return Err("--f-csv only applies to --suite tensor".into());
    }
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| format!("cannot read {path:?}: {e}"))?;
    let values: Vec<f64> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.parse::<f64>().map_err(|_| format!("bad value {l:?}")))
        .collect::<Result<_, _>>()?;
    if values.iter().any(|v| *v < 0.0) {
        return Err("the contraction inequality requires a nonnegative function".into());
    }
    let k = dist.alphabet_size();
    let (mut n, mut size) = (0usize, 1usize);
    while size < values.len() {
        size *= k;
        n += 1;
    }
    if size != values.len() || n == 0 {
        return Err(format!(
            "{} values do not fill {k}^n for any n ≥ 1",
            values.len()
        ));
    }
    let f = noisynorm::TensorFn::new(dist.clone(), n, values).map_err(|e| e.to_string())?;
    let lambda = match args.lambda_override {
        Some(l) => l,
        None => lambda_opt(args.q, dist.min_prob(), args.rho).map_err(|e| e.to_string())?,
    };
    let (rhs, trials) = match args.mc {
        None => (
            f.erasure_log_functional_exact(args.q, lambda)
                .map_err(|e| e.to_string())?,
            1,
        ),
        Some(samples) => {
            let seed = args.seed.ok_or_else(|| "--seed is required".to_string())?;
            let (estimate, _) = f
                .erasure_log_functional_mc(args.q, lambda, samples, seed)
                .map_err(|e| e.to_string())?;
            (estimate, samples)
        }
    };
    let lhs = f.noise_all(args.rho).q_norm(args.q).ln();
    let margin = rhs - lhs;
    let violated = margin < noisynorm::verify::VIOLATION_TOL;
    let report = CheckReport {
        suite: "tensor:file".into(),
        q: args.q.to_string(),
        rho: args.rho,
        lambda: Some(lambda),
        dist: dist.probs().to_vec(),
        n,
        trials,
        tolerance: noisynorm::verify::VIOLATION_TOL,
        min_margin: margin,
        violations: violated as u64,
        worst_witness: if violated { f.values().to_vec() } else { vec![] },
    };
    print_report(&report, args.format);
    Ok(if violated { EXIT_VIOLATION } else { 0 })
}

fn run_bounds(command: BoundsCommand) -> Result<u8, String> {
    match command {
        BoundsCommand::Weight { code, lambda } => {
            let code = load_code(&code)?;
            let (lhs, rhs) = weight_bound_margin(&code, lambda).map_err(|e| e.to_string())?;
            let payload = json!({
                "lambda": lambda,
                "lhs_bits": lhs,
                "rhs_bits": rhs,
                "margin_bits": rhs - lhs,
                "holds": lhs <= rhs + 1e-9,
            });
            println!("{payload}");
        }
        BoundsCommand::Ai { code, lambda, i } => {
            let code = load_code(&code)?;
            let (primal, dual) = ai_bounds(&code, lambda, i).map_err(|e| e.to_string())?;
            let wd = code.weight_distribution().map_err(|e| e.to_string())?;
            let payload = json!({
                "i": i,
                "a_i": wd.counts[i] as u64,
                "primal": primal,
                "dual": dual,
            });
            println!("{payload}");
        }
        BoundsCommand::Blockerr {
            code,
            channel,
            lambda,
        } => {
            let code = load_code(&code)?;
            let w = parse_channel(&channel)?;
            let d = code.min_distance().map_err(|e| e.to_string())?;
            let z = w.bhattacharyya();
            let h = code
                .erasure_entropy_exact(lambda)
                .map_err(|e| e.to_string())?;
            let bound = block_error_bound(d, z, code.field().order() as u32, lambda, h)
                .map_err(|e| e.to_string())?;
            let payload = json!({
                "d": d,
                "z": z,
                "H_bits": h,
                "lambda": lambda,
                "bound": bound,
            });
            println!("{payload}");
        }
        BoundsCommand::Pue { code, lambda, eta } => {
            let code = load_code(&code)?;
            let reports = p_ue_bounds(&code, lambda, eta).map_err(|e| e.to_string())?;
            let wd = code.weight_distribution().map_err(|e| e.to_string())?;
            let payload = json!({
                "lambda": lambda,
                "eta": eta,
                "z_threshold": eta_star(code.field().order() as u32, lambda).ok(),
                "p_ue_exact": p_ue_exact(&wd, code.field().order() as u32, eta),
                "bounds": reports,
            });
            println!("{payload}");
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("{message}");
            ExitCode::from(1)
        }
    }
}
