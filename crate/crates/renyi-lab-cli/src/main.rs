//! Command-line front end: loads JSON instances, runs divergence sweeps,
//! inequality audits and the hypothesis-testing / compression / channel
//! simulations, and emits deterministic CSV or JSON reports.
//!
//! Exit codes: 0 all checks pass, 1 inequality failure, 2 input error,
//! 3 resource cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use renyi_lab::audit::{self, AuditReport};
use renyi_lab::channel::{chi_new, chi_old, hn_bound, holevo, ChiNewConfig, InputDist};
use renyi_lab::compress::{build_scheme, compression_rate, scheme_fidelity};
use renyi_lab::divergence::{
    comparison_lower_bound, d_renyi, renyi_entropy, DivergenceFamily,
};
use renyi_lab::io::{fmt_ext, fmt_f64, load_json, ChannelJson, HypothesisJson, OperatorJson};
use renyi_lab::stein::{error_pair, exponent_functions, np_test, HypothesisFamily};
use renyi_lab::{Error, ExtReal};

#[derive(Parser)]
#[command(
    name = "renyi-lab",
    about = "Quantum Renyi divergence sweeps, inequality audits and coding-theorem simulations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep both divergence families over an alpha grid for one operator pair
    Divergence(DivergenceArgs),
    /// Run the randomized inequality audit suite
    Audit(AuditArgs),
    /// Neyman-Pearson hypothesis-testing sweep on tensor powers
    Stein(SteinArgs),
    /// Universal compression sweep
    Compress(CompressArgs),
    /// Channel quantities sweep (alpha-Holevo, gap, random-coding bound)
    Channel(ChannelArgs),
}

#[derive(Args)]
struct DivergenceArgs {
    /// Operator JSON for rho
    #[arg(long)]
    rho: PathBuf,
    /// Operator JSON for sigma
    #[arg(long)]
    sigma: PathBuf,
    /// Comma-separated alpha grid
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.8,1.2,1.5,2,3")]
    alpha_grid: Vec<f64>,
    /// Slack tolerance for the satisfied column
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    /// Dimensions to audit
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    dims: Vec<usize>,
    /// Samples per (audit, dimension) cell
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Worker threads (0 = rayon default)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// JSON report path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional CSV report path (one row per inequality id)
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SteinArgs {
    /// Hypothesis JSON: {"sigma": <op>, "null": [<op>...]}
    #[arg(long)]
    instance: PathBuf,
    /// Comma-separated thresholds; defaults to D1/2 and 0.9*D1
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a_grid: Option<Vec<f64>>,
    /// Largest block length
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompressArgs {
    /// Hypothesis JSON; a missing "sigma" means the identity
    #[arg(long)]
    instance: PathBuf,
    /// Comma-separated thresholds; defaults to -(S+0.1) and -(S-0.1) with S
    /// the largest source entropy (eigenvalues above e^{na} survive)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a_grid: Option<Vec<f64>>,
    /// Largest block length
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChannelArgs {
    /// Channel JSON: {"alphabet": [...], "outputs": {...}}
    #[arg(long)]
    channel: PathBuf,
    /// Input distribution over the alphabet (uniform when omitted)
    #[arg(long, value_delimiter = ',')]
    dist: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.8,0.95,1.05,1.5,2")]
    alpha_grid: Vec<f64>,
    /// Code size for the random-coding bound column
    #[arg(long, default_value_t = 2)]
    hn_m: u64,
    /// Constant c of the random-coding bound
    #[arg(long, default_value_t = 1.0)]
    hn_c: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::DimCapExceeded { .. } => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Divergence(args) => cmd_divergence(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Stein(args) => cmd_stein(args),
        Command::Compress(args) => cmd_compress(args),
        Command::Channel(args) => cmd_channel(args),
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, Error> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))
}

fn cmd_divergence(args: DivergenceArgs) -> Result<u8, Error> {
    if args.alpha_grid.is_empty() {
        return Err(Error::EmptyInput("alpha grid"));
    }
    let rho = load_json::<OperatorJson>(&args.rho)?.to_psd()?;
    let sigma = load_json::<OperatorJson>(&args.sigma)?.to_psd()?;
    let mut csv = String::from("alpha,d_old,d_new,comparison_lower,satisfied\n");
    let mut all_ok = true;
    for &alpha in &args.alpha_grid {
        let d_old = d_renyi(&rho, &sigma, alpha, DivergenceFamily::Old)?;
        let d_new = d_renyi(&rho, &sigma, alpha, DivergenceFamily::New)?;
        let lower = if alpha == 1.0 {
            d_new
        } else {
            comparison_lower_bound(&rho, &sigma, alpha)?
        };
        let ok = chain_satisfied(d_old, d_new, lower, args.tolerance);
        all_ok &= ok;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(alpha),
            fmt_ext(d_old),
            fmt_ext(d_new),
            fmt_ext(lower),
            ok
        ));
    }
    emit(args.out, &csv)?;
    Ok(if all_ok { 0 } else { 1 })
}

fn chain_satisfied(d_old: ExtReal, d_new: ExtReal, lower: ExtReal, tol: f64) -> bool {
    let upper_ok = match (d_old, d_new) {
        (ExtReal::Infinity, _) => true,
        (ExtReal::Finite(_), ExtReal::Infinity) => false,
        (ExtReal::Finite(o), ExtReal::Finite(n)) => o >= n - tol * (1.0 + o.abs().max(n.abs())),
    };
    let lower_ok = match (d_new, lower) {
        (ExtReal::Infinity, _) => true,
        (ExtReal::Finite(_), ExtReal::Infinity) => false,
        (ExtReal::Finite(n), ExtReal::Finite(l)) => n >= l - tol * (1.0 + n.abs().max(l.abs())),
    };
    upper_ok && lower_ok
}

fn cmd_audit(args: AuditArgs) -> Result<u8, Error> {
    if args.dims.is_empty() {
        return Err(Error::EmptyInput("dimension list"));
    }
    let pool = thread_pool(args.jobs)?;
    let grids = audit::default_grids();
    // one cell per (inequality, dimension), evaluated in parallel and merged
    // in a fixed order so reports are deterministic
    let cells: Vec<(usize, usize)> = (0..grids.len())
        .flat_map(|g| (0..args.dims.len()).map(move |d| (g, d)))
        .collect();
    let mut results: Vec<((usize, usize), AuditReport)> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(g, d)| {
                let (id, grid) = &grids[g];
                let ens = renyi_lab::sample::Ensemble::new(
                    args.dims[d],
                    args.samples,
                    args.seed.wrapping_add(d as u64),
                );
                let rep = match *id {
                    "alt" => audit::audit_alt(&ens, grid, args.tolerance),
                    "rotfeld" => audit::audit_rotfeld(&ens, grid, args.tolerance),
                    "complements" => audit::audit_complements(&ens, 3, grid, args.tolerance),
                    "joint-convexity" => {
                        audit::audit_joint_convexity(&ens, grid, args.tolerance)
                            .expect("default grid is valid")
                    }
                    "carlen-lieb" => {
                        audit::audit_carlen_lieb(&ens, &[0.3, 0.5, 0.2], grid, args.tolerance)
                            .expect("default grid is valid")
                    }
                    other => unreachable!("unknown audit {other}"),
                };
                ((g, d), rep)
            })
            .collect()
    });
    results.sort_by_key(|&((g, d), _)| (g, d));
    let mut reports: Vec<AuditReport> = Vec::new();
    for ((g, _), rep) in results {
        match reports.iter_mut().find(|r| r.inequality_id == grids[g].0) {
            Some(existing) => *existing = existing.clone().merge(&rep),
            None => reports.push(rep),
        }
    }

    let failures: usize = reports.iter().map(|r| r.failures).sum();
    let json = serde_json::to_string_pretty(&reports)?;
    emit(args.out, &format!("{json}\n"))?;
    if let Some(csv_path) = args.csv {
        let mut csv =
            String::from("inequality_id,samples,worst_slack,failures,dims,seed,tolerance\n");
        for r in &reports {
            let dims = r
                .dims
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(";");
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.inequality_id,
                r.samples,
                fmt_f64(r.worst_slack),
                r.failures,
                dims,
                r.seed,
                fmt_f64(r.tolerance)
            ));
        }
        std::fs::write(csv_path, csv)?;
    }
    Ok(if failures == 0 { 0 } else { 1 })
}

fn cmd_stein(args: SteinArgs) -> Result<u8, Error> {
    if args.n_max == 0 {
        return Err(Error::InvalidInput("n-max must be at least 1".into()));
    }
    let hyp: HypothesisJson = load_json(&args.instance)?;
    let family = HypothesisFamily::new(hyp.null_states()?, hyp.sigma_or_identity()?)?;
    let d1 = family.d1();
    let a_grid = args.a_grid.unwrap_or_else(|| vec![0.5 * d1, 0.9 * d1]);
    if a_grid.is_empty() {
        return Err(Error::EmptyInput("a grid"));
    }
    let ef = exponent_functions(&family);
    let rhos: Vec<renyi_lab::PSDOp> = family
        .null_states()
        .iter()
        .map(|r| r.as_psd().clone())
        .collect();

    let points: Vec<(usize, f64)> = (1..=args.n_max)
        .flat_map(|n| a_grid.iter().map(move |&a| (n, a)))
        .collect();
    let pool = thread_pool(args.jobs)?;
    let rows: Vec<Result<String, Error>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(n, a)| -> Result<String, Error> {
                let test = np_test(&rhos, family.sigma(), a, n).map_err(|e| name_n(e, n))?;
                let errs = error_pair(&test, &family, n).map_err(|e| name_n(e, n))?;
                let bounds = ef.finite_n_bounds(a, n, family.null_states().len(), 0.0);
                Ok(format!(
                    "{n},{},{},{},{},{},{},{}\n",
                    fmt_f64(a),
                    fmt_f64(errs.type_i),
                    fmt_f64(errs.type_ii),
                    fmt_f64(bounds.bound_type_i),
                    fmt_f64(bounds.bound_type_ii),
                    fmt_f64(ef.phi(a)),
                    fmt_f64(ef.phi_hat(a))
                ))
            })
            .collect()
    });
    let mut csv = String::from("n,a,type_I,type_II,bound_typeI,bound_typeII,phi,phi_hat\n");
    for row in rows {
        csv.push_str(&row?);
    }
    emit(args.out, &csv)?;
    Ok(0)
}

fn name_n(err: Error, n: usize) -> Error {
    match err {
        Error::DimCapExceeded { requested, cap } => Error::DimCapExceeded {
            requested: requested.max(n),
            cap,
        },
        other => other,
    }
}

fn cmd_compress(args: CompressArgs) -> Result<u8, Error> {
    if args.n_max == 0 {
        return Err(Error::InvalidInput("n-max must be at least 1".into()));
    }
    let hyp: HypothesisJson = load_json(&args.instance)?;
    let states = hyp.null_states()?;
    let a_grid = match args.a_grid {
        Some(grid) if !grid.is_empty() => grid,
        Some(_) => return Err(Error::EmptyInput("a grid")),
        None => {
            let s_max = states
                .iter()
                .map(|rho| renyi_entropy(rho.as_psd(), 1.0).expect("alpha = 1 is valid"))
                .fold(f64::NEG_INFINITY, f64::max);
            vec![-(s_max + 0.1), -(s_max - 0.1)]
        }
    };
    let points: Vec<(usize, f64)> = (1..=args.n_max)
        .flat_map(|n| a_grid.iter().map(move |&a| (n, a)))
        .collect();
    let pool = thread_pool(args.jobs)?;
    let rows: Vec<Result<Option<String>, Error>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(n, a)| -> Result<Option<String>, Error> {
                let scheme = match build_scheme(&states, a, n) {
                    Ok(s) => s,
                    // an empty keep-subspace has no fidelity row
                    Err(Error::DegenerateScheme) => return Ok(None),
                    Err(e) => return Err(name_n(e, n)),
                };
                let mut fe_worst = f64::INFINITY;
                let mut f_worst = f64::INFINITY;
                for rho in &states {
                    let f = scheme_fidelity(&scheme, rho).map_err(|e| name_n(e, n))?;
                    fe_worst = fe_worst.min(f.entanglement);
                    f_worst = f_worst.min(f.plain);
                }
                Ok(Some(format!(
                    "{n},{},{},{},{}\n",
                    fmt_f64(a),
                    fmt_f64(compression_rate(&scheme)),
                    fmt_f64(fe_worst),
                    fmt_f64(f_worst)
                )))
            })
            .collect()
    });
    let mut csv = String::from("n,a,rate,F_e_worst,F_worst\n");
    for row in rows {
        if let Some(r) = row? {
            csv.push_str(&r);
        }
    }
    emit(args.out, &csv)?;
    Ok(0)
}

fn cmd_channel(args: ChannelArgs) -> Result<u8, Error> {
    if args.alpha_grid.is_empty() {
        return Err(Error::EmptyInput("alpha grid"));
    }
    let channel = load_json::<ChannelJson>(&args.channel)?.to_channel()?;
    let p = match args.dist {
        Some(probs) => InputDist::new(channel.alphabet().to_vec(), probs)?,
        None => InputDist::uniform(channel.alphabet())?,
    };
    let mut csv = String::from("alpha,chi_old,chi_new,gap,holevo,hn_bound\n");
    let mut all_ok = true;
    let chi1 = holevo(&channel, &p)?;
    for &alpha in &args.alpha_grid {
        let old = chi_old(&channel, &p, alpha)?;
        let new_value = if alpha == 1.0 {
            chi1
        } else {
            let cfg = ChiNewConfig { seed: args.seed, ..ChiNewConfig::default() };
            chi_new(&channel, &p, alpha, &cfg)?.value
        };
        let gap = old - new_value;
        all_ok &= gap >= -1e-6;
        let hn = if alpha > 0.0 && alpha < 1.0 {
            hn_bound(&channel, &p, args.hn_m, alpha, args.hn_c)?
        } else {
            f64::NAN
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(alpha),
            fmt_f64(old),
            fmt_f64(new_value),
            fmt_f64(gap),
            fmt_f64(chi1),
            fmt_f64(hn)
        ));
    }
    emit(args.out, &csv)?;
    Ok(if all_ok { 0 } else { 1 })
}
