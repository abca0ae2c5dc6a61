use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kac::experiments::{run_scenario_with_cache, ReferenceCache};
use kac::io::{resolve_config, write_report, ConfigOverrides};
use kac::{compute_coefficients, CrossSection, Error, InitialDatum, Result, Scenario, Scheme};

#[derive(Parser)]
#[command(name = "kac", version, about = "Kac equation particle simulations and convergence experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print collision coefficients as JSON.
    Coeffs(CoeffsArgs),
    /// Replicated particle simulation recording moments and event counts.
    Simulate(RunArgs),
    GrazingRate(RunArgs),
    SchemeCompare(RunArgs),
    EpsRate(RunArgs),
    NRate(RunArgs),
    MomentTrack(RunArgs),
    /// Empirical-measure rates for i.i.d. samples.
    LemmaRates {
        #[arg(long, value_enum, default_value = "w1")]
        distance: Distance,
        #[command(flatten)]
        run: RunArgs,
    },
    PoissonDemo(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Distance {
    W1,
    Wgamma,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    PowerLaw,
    UniformGrazing,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long, value_enum, default_value = "power-law")]
    kernel: Kernel,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    eps: f64,
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; flags below take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: out/<scenario>].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for content-addressed reference samples.
    #[arg(long)]
    reference_cache: Option<PathBuf>,
    #[arg(long = "seed")]
    base_seed: Option<u64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long = "eps", value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_ref: Option<usize>,
    #[arg(long)]
    eps_ref: Option<f64>,
    #[arg(long)]
    ref_replicas: Option<usize>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    snapshot_times: Option<Vec<f64>>,
    #[arg(long)]
    replicas: Option<usize>,
    /// `rademacher`, `gaussian:MEAN,VARIANCE` or `atoms:P1,P2,..@W1,W2,..`.
    #[arg(long, value_parser = parse_f0)]
    f0: Option<InitialDatum>,
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<Scheme>,
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    h_list: Option<Vec<f64>>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    floor_samples: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    exclude_self_collision: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    emit_histograms: Option<bool>,
    #[arg(long)]
    bins: Option<usize>,
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"))).collect()
}

fn parse_f0(s: &str) -> std::result::Result<InitialDatum, String> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    match kind {
        "rademacher" => Ok(InitialDatum::Rademacher),
        "gaussian" => match parse_list(rest)?.as_slice() {
            [mean, variance] => Ok(InitialDatum::Gaussian {
                mean: *mean,
                variance: *variance,
            }),
            _ => Err("expected gaussian:MEAN,VARIANCE".into()),
        },
        "atoms" => {
            let (p, w) = rest.split_once('@').ok_or("expected atoms:P1,P2,..@W1,W2,..")?;
            Ok(InitialDatum::DiscreteAtoms {
                points: parse_list(p)?,
                weights: parse_list(w)?,
            })
        }
        other => Err(format!("unknown initial datum `{other}`")),
    }
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown scheme `{s}`"))
}

impl RunArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            scenario: None,
            nu: self.nu,
            eps_list: self.eps_list.clone(),
            n: self.n,
            n_ref: self.n_ref,
            eps_ref: self.eps_ref,
            ref_replicas: self.ref_replicas,
            t_final: self.t_final,
            snapshot_times: self.snapshot_times.clone(),
            replicas: self.replicas,
            base_seed: self.base_seed,
            f0: self.f0.clone(),
            scheme: self.scheme,
            n_list: self.n_list.clone(),
            h_list: self.h_list.clone(),
            gamma: self.gamma,
            floor_samples: self.floor_samples,
            exclude_self_collision: self.exclude_self_collision,
            emit_histograms: self.emit_histograms,
            bins: self.bins,
        }
    }
}

fn run(args: &RunArgs, scenario: Scenario) -> Result<()> {
    let text = match &args.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?),
        None => None,
    };
    let cfg = resolve_config(text.as_deref(), args.overrides(), scenario)?;
    let cache = match &args.reference_cache {
        Some(dir) => ReferenceCache::on_disk(dir),
        None => ReferenceCache::in_memory(),
    };
    let report = run_scenario_with_cache(&cfg, &cache)?;
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out").join(scenario.as_str()));
    for path in write_report(&report, &out)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn coeffs(args: &CoeffsArgs) -> Result<()> {
    let cs = match args.kernel {
        Kernel::PowerLaw => CrossSection::power_law(
            args.nu
                .ok_or_else(|| Error::Domain("--nu is required for the power-law kernel".into()))?,
        )?,
        Kernel::UniformGrazing => CrossSection::UniformGrazing,
    };
    let c = compute_coefficients(&cs, args.eps)?;
    println!("{}", serde_json::to_string_pretty(&c).map_err(|e| Error::Logic(e.to_string()))?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Coeffs(a) => coeffs(a),
        Command::Simulate(a) => run(a, Scenario::Simulate),
        Command::GrazingRate(a) => run(a, Scenario::GrazingRate),
        Command::SchemeCompare(a) => run(a, Scenario::SchemeCompare),
        Command::EpsRate(a) => run(a, Scenario::EpsRate),
        Command::NRate(a) => run(a, Scenario::NRate),
        Command::MomentTrack(a) => run(a, Scenario::MomentTrack),
        Command::LemmaRates { distance, run: a } => run(
            a,
            match distance {
                Distance::W1 => Scenario::EmpiricalW1Rate,
                Distance::Wgamma => Scenario::EmpiricalWgammaRate,
            },
        ),
        Command::PoissonDemo(a) => run(a, Scenario::PoissonGaussianDemo),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
