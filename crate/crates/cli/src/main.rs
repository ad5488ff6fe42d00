mod config;
mod output;
mod verify;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use config::{config_error, load_config, load_family, ConfigError, Overrides, RunConfig};
use output::{fmt, Sink};
use thetalab::coeffs::build_coefficients;
use thetalab::contour::ZeroHypothesis;
use thetalab::eval::{evaluate_with, EvalOptions, Strategy};
use thetalab::instance::AutomorphicInstance;
use thetalab::moments::{moment_i_on, second_moment_on, weighted_second_moment_on, CriticalLine, MomentResult};
use thetalab::mollifier::mollifier_sweep;
use thetalab::theorems::{
    count_zeros_rectangle, family_condition, family_zero_statistic, rh_criterion_scan, thm_global_sup,
    thm_local_check, FamilySpec, LocalCheck, LocalMode, TheoremReport,
};
use thetalab::Complex64;

#[derive(Parser)]
#[command(name = "thetalab", version, about = "Mollified moments and non-vanishing diagnostics for L-functions")]
struct Cli {
    /// TOML configuration file (default: $THETALAB_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Instance label from the config, or `zeta`, `delta`, `chi_<q>_<index>`, `chi-4`.
    #[arg(long, global = true)]
    instance: Option<String>,
    /// Assume the generalized Ramanujan conjecture for every instance.
    #[arg(long, global = true)]
    grc: bool,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Disable memoization of critical-line values.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Record wall-clock seconds in moment output (otherwise written as 0).
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Main output file (default: stdout).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Write `x y` pairs for plotting.
    #[arg(long, global = true)]
    plot_data: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MomentArg {
    Second,
    Mollified,
    Integrated,
    Weighted,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Local,
    #[value(name = "all-T")]
    AllT,
    Rh,
    Family,
}

#[derive(Subcommand)]
enum Command {
    /// Dirichlet coefficients and their Dirichlet inverse as CSV.
    Coeffs {
        #[arg(long)]
        n: usize,
    },
    /// `L(sigma + it)` on a uniform grid of heights as CSV.
    EvalGrid {
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        sigma: f64,
        #[arg(long, allow_negative_numbers = true)]
        t_start: f64,
        #[arg(long, allow_negative_numbers = true)]
        t_end: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        strategy: Option<Strategy>,
    },
    /// `M_y(1/2 + it)` for `y` on a uniform grid in `[1, y_max]` as CSV.
    Mollifier {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long)]
        y_max: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// One critical-line moment as CSV.
    Moment {
        #[arg(long, value_enum)]
        kind: MomentArg,
        #[arg(long = "T1")]
        t1: Option<f64>,
        #[arg(long = "T2")]
        t2: Option<f64>,
        /// Mollifier length `y`, `X` for the integrated kind, `x` for the weighted kind.
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Run the smoke suite; JSON array of checks, exit 0 iff all pass.
    Verify,
    /// Evaluate the hypothesis of one of the non-vanishing criteria.
    Theorem {
        #[arg(long, value_enum)]
        id: TheoremArg,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long = "T1")]
        t1: Option<f64>,
        #[arg(long = "T2")]
        t2: Option<f64>,
        /// Comma-separated heights.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        epsilons: Option<Vec<f64>>,
        #[arg(long)]
        dyadic: bool,
        /// Constant `c` for "hypothesis satisfied at constant c".
        #[arg(long)]
        constant: Option<f64>,
        /// Synthetic zero for the local check; without it the rectangle is scanned.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Family spec file for `--id family`.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// CSV of `I_y(T1, T2)` against `y` for the local check.
        #[arg(long)]
        integrand: Option<PathBuf>,
    },
    /// Count zeros of the completed function in a rectangle.
    Zeros {
        #[arg(long, num_args = 4, value_names = ["SIGMA_LO", "SIGMA_HI", "T1", "T2"], allow_negative_numbers = true)]
        rect: Vec<f64>,
    },
    /// Family condition over a grid, or the zero statistic with `--count-zeros`.
    Family {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long)]
        constant: Option<f64>,
        #[arg(long)]
        count_zeros: bool,
        #[arg(long = "T")]
        t: Option<f64>,
    },
}

const DEFAULT_CONSTANT: f64 = 1.0;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink = Sink::default();
    match run(cli, &mut sink) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let config = e.downcast_ref::<ConfigError>().is_some()
                || matches!(e.downcast_ref::<thetalab::Error>(), Some(thetalab::Error::Domain(_)));
            let manifest = serde_json::json!({
                "status": if config { "config-error" } else { "numeric-failure" },
                "error": format!("{e:#}"),
                "written": sink.written(),
            });
            eprintln!("{manifest:#}");
            ExitCode::from(if config { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli, sink: &mut Sink) -> Result<bool> {
    let file = load_config(cli.config.as_deref())?;
    let flags = Overrides {
        instance: cli.instance,
        grc: cli.grc,
        threads: cli.threads,
        no_cache: cli.no_cache,
        timing: cli.timing,
        tol: cli.tol,
        output: cli.output,
        plot_data: cli.plot_data,
    };
    let cfg = RunConfig::resolve(file, flags)?;
    rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global()?;
    match cli.command {
        Command::Coeffs { n } => {
            let table = build_coefficients(&cfg.instance()?, n)?;
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            sink.primary(&cfg, &buf)?;
        }
        Command::EvalGrid { sigma, t_start, t_end, steps, strategy } => {
            let inst = cfg.instance()?;
            let opts = EvalOptions::with_tol(cfg.tol).with_strategy(strategy.unwrap_or(Strategy::Auto));
            let mut csv = String::from("t,re,im,abs2,err\n");
            let mut plot = String::new();
            for k in 0..=steps {
                let t = if steps == 0 { t_start } else { t_start + (t_end - t_start) * k as f64 / steps as f64 };
                let r = evaluate_with(&inst, Complex64::new(sigma, t), &opts)?;
                let v = r.value;
                csv += &format!("{},{},{},{},{}\n", fmt(t), fmt(v.re), fmt(v.im), fmt(v.norm_sqr()), fmt(r.error));
                plot += &format!("{} {}\n", fmt(t), fmt(v.norm()));
            }
            sink.primary(&cfg, csv.as_bytes())?;
            sink.plot(&cfg, &plot)?;
        }
        Command::Mollifier { t, y_max, points } => {
            let inst = cfg.instance()?;
            let table = build_coefficients(&inst, (y_max.floor() as usize).max(1))?;
            let sweep = mollifier_sweep(&table, t, y_max)?;
            let mut csv = String::from("y,t,re,im,abs2\n");
            let mut plot = String::new();
            let points = points.max(1);
            for k in 0..=points {
                let y = 1.0 + (y_max - 1.0) * k as f64 / points as f64;
                let v = sweep.value(y);
                csv += &format!("{},{},{},{},{}\n", fmt(y), fmt(t), fmt(v.re), fmt(v.im), fmt(v.norm_sqr()));
                plot += &format!("{} {}\n", fmt(y), fmt(v.norm_sqr()));
            }
            sink.primary(&cfg, csv.as_bytes())?;
            sink.plot(&cfg, &plot)?;
        }
        Command::Moment { kind, t1, t2, y, beta, gamma } => {
            let inst = cfg.instance()?;
            let t1 = cfg.require(t1, cfg.file.t1, "T1")?;
            let t2 = cfg.require(t2, cfg.file.t2, "T2")?;
            let line = if cfg.cache { CriticalLine::new(&inst) } else { CriticalLine::uncached(&inst) };
            let r = run_moment(&cfg, &inst, &line, kind, t1, t2, y, beta, gamma)?;
            let seconds = if cfg.timing { r.seconds } else { 0.0 };
            let length = match kind {
                MomentArg::Second => String::new(),
                _ => fmt(r.length),
            };
            let csv = format!(
                "kind,T1,T2,y_or_X,value,error,seconds\n{},{},{},{},{},{},{}\n",
                r.kind,
                fmt(r.t1),
                fmt(r.t2),
                length,
                fmt(r.value),
                fmt(r.error),
                fmt(seconds)
            );
            sink.primary(&cfg, csv.as_bytes())?;
        }
        Command::Verify => {
            let checks = verify::run_suite(cfg.grc)?;
            let all = checks.iter().all(|c| c.pass);
            sink.primary(&cfg, (serde_json::to_string_pretty(&checks)? + "\n").as_bytes())?;
            return Ok(all);
        }
        Command::Theorem { id, sigma, theta, epsilon, t1, t2, grid, epsilons, dyadic, constant, beta, gamma, spec, integrand } => {
            let f = &cfg.file;
            let constant = constant.or(f.constant).unwrap_or(DEFAULT_CONSTANT);
            let report = match id {
                TheoremArg::Local => {
                    let inst = cfg.instance()?;
                    let p = LocalCheck {
                        sigma: cfg.require(sigma, f.sigma, "sigma")?,
                        theta: cfg.require(theta, f.theta, "theta")?,
                        epsilon: cfg.require(epsilon, f.epsilon, "epsilon")?,
                        t1: cfg.require(t1, f.t1, "T1")?,
                        t2: cfg.require(t2, f.t2, "T2")?,
                        constant,
                        tol: cfg.tol,
                    };
                    let mode = match (beta, gamma) {
                        (Some(b), Some(g)) => LocalMode::Hypothesis(ZeroHypothesis::synthetic(b, g)?),
                        (None, None) => LocalMode::Scan,
                        _ => return Err(config_error("give both --beta and --gamma, or neither")),
                    };
                    let report = thm_local_check(&inst, &p, mode)?;
                    if let Some(path) = integrand {
                        sink.file(&path, local_integrand_csv(&inst, &p)?.as_bytes())?;
                    }
                    report
                }
                TheoremArg::AllT => thm_global_sup(
                    &cfg.instance()?,
                    cfg.require(sigma, f.sigma, "sigma")?,
                    cfg.require(theta, f.theta, "theta")?,
                    &cfg.grid(&grid)?,
                    dyadic,
                    constant,
                    cfg.tol,
                )?,
                TheoremArg::Rh => rh_criterion_scan(
                    &cfg.instance()?,
                    cfg.require(theta, f.theta, "theta")?,
                    &epsilons.or_else(|| f.epsilons.clone()).ok_or_else(|| config_error("missing parameter `epsilons`"))?,
                    &cfg.grid(&grid)?,
                    cfg.tol,
                )?,
                TheoremArg::Family => {
                    let spec = spec.ok_or_else(|| config_error("`--id family` needs --spec"))?;
                    family_condition(
                        &family_spec(&cfg, &spec)?,
                        cfg.require(sigma, f.sigma, "sigma")?,
                        cfg.require(theta, f.theta, "theta")?,
                        &cfg.grid(&grid)?,
                        constant,
                        cfg.tol,
                    )?
                }
            };
            emit_report(&cfg, sink, &report)?;
        }
        Command::Zeros { rect } => {
            let r = count_zeros_rectangle(&cfg.instance()?, rect[0], rect[1], rect[2], rect[3])?;
            sink.primary(&cfg, (serde_json::to_string_pretty(&r)? + "\n").as_bytes())?;
            return Ok(r.confident);
        }
        Command::Family { spec, sigma, theta, grid, constant, count_zeros, t } => {
            let fam = family_spec(&cfg, &spec)?;
            let f = &cfg.file;
            let sigma = cfg.require(sigma, f.sigma, "sigma")?;
            if count_zeros {
                let t = cfg.require(t, f.t2, "T")?;
                let stat = family_zero_statistic(&fam, sigma, t)?;
                sink.primary(&cfg, (serde_json::to_string_pretty(&stat)? + "\n").as_bytes())?;
                return Ok(stat.excluded.is_empty());
            }
            let report = family_condition(
                &fam,
                sigma,
                cfg.require(theta, f.theta, "theta")?,
                &cfg.grid(&grid)?,
                constant.or(f.constant).unwrap_or(DEFAULT_CONSTANT),
                cfg.tol,
            )?;
            emit_report(&cfg, sink, &report)?;
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn run_moment(
    cfg: &RunConfig,
    inst: &AutomorphicInstance,
    line: &CriticalLine,
    kind: MomentArg,
    t1: f64,
    t2: f64,
    y: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
) -> Result<MomentResult> {
    let need_y = || y.ok_or_else(|| config_error("this moment kind needs --y"));
    Ok(match kind {
        MomentArg::Second => second_moment_on(line, t1, t2, cfg.tol)?,
        MomentArg::Mollified => {
            let y = need_y()?;
            let table = build_coefficients(inst, (y.floor() as usize).max(1))?;
            moment_i_on(line, &table, y, t1, t2, cfg.tol)?
        }
        MomentArg::Integrated => {
            let x = need_y()?;
            let table = build_coefficients(inst, (x.floor() as usize).max(1))?;
            thetalab::moments::moment_i_integrated_on(line, &table, t1, t2, x, cfg.tol)?
        }
        MomentArg::Weighted => {
            let x = need_y()?;
            let (b, g) = match (beta, gamma) {
                (Some(b), Some(g)) => (b, g),
                _ => return Err(config_error("weighted moment needs --beta and --gamma")),
            };
            weighted_second_moment_on(line, g, t1, t2, x, b, cfg.tol)?.result
        }
    })
}

const INTEGRAND_POINTS: usize = 16;

fn local_integrand_csv(inst: &AutomorphicInstance, p: &LocalCheck) -> Result<String> {
    let x = p.t2.powf(p.theta);
    let table = build_coefficients(inst, (x.floor() as usize).max(1))?;
    let line = CriticalLine::new(inst);
    let mut csv = String::from("y,value,error\n");
    for k in 0..=INTEGRAND_POINTS {
        let y = x.powf(k as f64 / INTEGRAND_POINTS as f64);
        let r = moment_i_on(&line, &table, y, p.t1, p.t2, p.tol)?;
        csv += &format!("{},{},{}\n", fmt(y), fmt(r.value), fmt(r.error));
    }
    Ok(csv)
}

fn family_spec(cfg: &RunConfig, path: &std::path::Path) -> Result<FamilySpec> {
    let file = load_family(path)?;
    let members = file
        .members
        .iter()
        .map(|d| d.build(cfg.grc).map_err(|e| config_error(format!("{}: {e}", path.display()))))
        .collect::<Result<Vec<_>>>()?;
    FamilySpec::new(members, file.description).map_err(|e| config_error(e.to_string()))
}

fn emit_report(cfg: &RunConfig, sink: &mut Sink, report: &TheoremReport) -> Result<()> {
    sink.primary(cfg, (serde_json::to_string_pretty(report)? + "\n").as_bytes())?;
    let mut plot = String::new();
    for r in &report.rows {
        plot += &format!("{} {}\n", fmt(r.t), fmt(r.normalized));
    }
    sink.plot(cfg, &plot)
}
