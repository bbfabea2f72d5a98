//! Command-line interface for the irrationality-measure toolkit.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rug::{Integer, Rational};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use thue_measures::config::{resolve, ConfigLayer, RunConfig};
use thue_measures::error::Error;
use thue_measures::families::{family_instance, lemma4_bound_check, FamilyKind};
use thue_measures::hyperg::CDConstants;
use thue_measures::pipeline::{certify, InstanceInput};
use thue_measures::real::{cached_expand, cf_expand, AlphaSpec, AlphaTarget};
use thue_measures::refine::{refine, RefineTarget};
use thue_measures::replay::run_replay;
use thue_measures::search::{convergent_scan, window_scan, SearchConfig, ThresholdMode};

#[derive(Parser)]
#[command(
    name = "thue-measures",
    about = "Certified effective irrationality measures for sqrt(|t|) tan(k pi / n) \
             via the hypergeometric method",
    version
)]
struct Cli {
    /// Config file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Starting precision in bits (escalates automatically as needed).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Directory for continued-fraction cache files.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Emit JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write JSON output to this file (implies JSON formatting for the file).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = automatic).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify one instance (n, t, x) of the measure pipeline.
    Certify(CertifyArgs),
    /// Evaluate a parametric family member (n = 4 or 5) for a given b.
    Family(FamilyArgs),
    /// Run the instance searches.
    Search(SearchArgs),
    /// Expand a continued fraction with certified partial quotients.
    Cf(CfArgs),
    /// Refine a raw certificate into a clean (c*, kappa*) measure.
    Refine(RefineArgs),
    /// Recompute every pinned published value and report pass/fail.
    VerifyPaper(VerifyArgs),
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    n: u32,
    /// Negative integer t of F_{n,t}.
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Override the (C, D) constants as "C,D" (rationals).
    #[arg(long)]
    cd: Option<String>,
}

#[derive(Args)]
struct FamilyArgs {
    /// Family branch: 4:1, 4:3, 5:1 or 5:2.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    b: u32,
}

#[derive(Args)]
struct SearchArgs {
    #[command(subcommand)]
    mode: SearchMode,
}

#[derive(Subcommand)]
enum SearchMode {
    /// Scan squarefree t <= t-max and x near the roots.
    Window {
        /// Comma-separated n values.
        #[arg(long, default_value = "7,13")]
        n: String,
        #[arg(long, default_value_t = 1000)]
        t_max: u32,
        #[arg(long, default_value_t = 10)]
        window: u32,
        #[arg(long, default_value = "totient")]
        threshold: String,
    },
    /// Build instances from convergents of tan^2(2k pi / n).
    Convergents {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value = "totient")]
        threshold: String,
    },
}

#[derive(Args)]
struct CfArgs {
    /// Root target: n of F_{n,t}.
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Root index k (odd n: angle 2k pi/n; even n: (2k+1) pi/(2n)).
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Bypass the cache even when --cache-dir is set.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct RefineArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Target numerator constant c* (rational, e.g. 9/100 or 0.09).
    #[arg(long)]
    c_star: String,
    /// Target exponent kappa* + 1 (e.g. 4.6).
    #[arg(long)]
    kappa_star: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only run checks whose id contains this substring.
    #[arg(long)]
    only: Option<String>,
    /// Include the full (slow) search reproduction.
    #[arg(long)]
    deep: bool,
}

fn parse_int(s: &str) -> anyhow::Result<Integer> {
    Integer::from_str_radix(s, 10).map_err(|e| anyhow!("bad integer {:?}: {}", s, e))
}

/// Rationals accepted as `p/q`, an integer, or a decimal like `0.09`.
fn parse_rational(s: &str) -> anyhow::Result<Rational> {
    if let Some((int_part, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(anyhow!("bad rational {:?}", s));
        }
        let neg = int_part.starts_with('-');
        let whole = if int_part.is_empty() || int_part == "-" {
            Integer::new()
        } else {
            parse_int(int_part)?
        };
        let den = Integer::from(10).pow(frac.len() as u32);
        let num = parse_int(frac)?;
        let mag = Rational::from((whole.abs(), Integer::from(1)))
            + Rational::from((num, den));
        return Ok(if neg { -mag } else { mag });
    }
    Rational::from_str(s).map_err(|e| anyhow!("bad rational {:?}: {}", s, e))
}

use rug::ops::Pow;

fn emit<T: serde::Serialize>(cfg: &RunConfig, out: &Option<PathBuf>, value: &T, text: String) -> anyhow::Result<()> {
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(value)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if cfg.json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        println!("{}", text);
    }
    Ok(())
}

fn threshold_mode(s: &str) -> anyhow::Result<ThresholdMode> {
    match s {
        "totient" => Ok(ThresholdMode::Totient),
        "degree" => Ok(ThresholdMode::Degree),
        other => Err(anyhow!("unknown threshold mode {:?}", other)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            // Inapplicable instances exit with 2, everything else with 1.
            if e.downcast_ref::<Error>()
                .map(|e| matches!(e, Error::NotApplicable(_) | Error::Degenerate(_)))
                .unwrap_or(false)
            {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let layer = ConfigLayer {
        precision_floor: cli.precision,
        cache_dir: cli.cache_dir.clone(),
        json: if cli.json { Some(true) } else { None },
        threads: cli.threads,
    };
    let cfg = resolve(cli.config.as_deref(), &layer)?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .ok();
    }

    match &cli.command {
        Command::Certify(a) => {
            let t = parse_int(&a.t)?;
            let x = parse_int(&a.x)?;
            let cd = match &a.cd {
                Some(spec) => {
                    let (c, d) = spec
                        .split_once(',')
                        .ok_or_else(|| anyhow!("--cd expects C,D"))?;
                    CDConstants::user(a.n, parse_rational(c)?, parse_rational(d)?)
                }
                None => CDConstants::builtin(a.n)
                    .ok_or_else(|| anyhow!(
                        "no built-in (C, D) constants for n = {}; pass --cd",
                        a.n
                    ))?,
            };
            let inst = InstanceInput::standard(a.n, t, x, cd)?;
            let cert = certify(&inst, cfg.precision_floor)?;
            let text = format!(
                "alpha = {} ~ {}\nE = {}\nQ = {}\nkappa = {}  (measure exponent kappa + 1 ~ {:.6})\nc = {}\n|alpha - p/q| > 1 / ({:.6e} |q|^{:.6})",
                cert.root.alpha,
                cert.alpha_value,
                cert.e,
                cert.q,
                cert.kappa,
                cert.kappa_upper + 1.0,
                cert.c_prop,
                cert.c_prop_upper,
                cert.kappa_upper + 1.0,
            );
            emit(&cfg, &cli.out, &cert, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Family(a) => {
            let kind = FamilyKind::parse(&a.kind)?;
            let cert = family_instance(kind, a.b, cfg.precision_floor)?;
            let text = format!(
                "{} b = {}: a1 = {}, a2 = {}, eps = {}\nN = {}\nkappa_thm = {} (improves Liouville: {})\nc_thm = {}\nc_thm_sharp = {}\ndirect kappa = {}\nlemma-4 bound: {}",
                kind,
                a.b,
                cert.a1,
                cert.a2,
                cert.eps,
                cert.script_n,
                cert.kappa_thm,
                cert.verdict.improves,
                cert.c_thm,
                cert.c_thm_sharp,
                cert.crosscheck.kappa,
                lemma4_bound_check(&cert),
            );
            emit(&cfg, &cli.out, &cert, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Search(a) => match &a.mode {
            SearchMode::Window {
                n,
                t_max,
                window,
                threshold,
            } => {
                let n_values = n
                    .split(',')
                    .map(|v| v.trim().parse::<u32>().map_err(|e| anyhow!("bad n: {}", e)))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let config = SearchConfig {
                    n_values,
                    t_max: *t_max,
                    window: *window,
                    threshold_mode: threshold_mode(threshold)?,
                    precision_floor: cfg.precision_floor,
                };
                let (findings, summary) = window_scan(&config)?;
                let mut text = format!(
                    "{} instances tried, {} inapplicable, {} hits\n",
                    summary.instances_tried, summary.inapplicable, summary.hits
                );
                for f in &findings {
                    text += &format!(
                        "hit: n = {}, t = {}, x = {}, kappa = {} (threshold {})\n",
                        f.n, f.t, f.x, f.kappa, f.threshold
                    );
                }
                emit(&cfg, &cli.out, &findings, text)?;
                Ok(ExitCode::SUCCESS)
            }
            SearchMode::Convergents {
                n,
                k,
                count,
                threshold,
            } => {
                let (findings, skipped) = convergent_scan(
                    *n,
                    *k,
                    *count,
                    threshold_mode(threshold)?,
                    cfg.precision_floor,
                )?;
                let mut text = String::new();
                for f in &findings {
                    text += &format!(
                        "n = {}, t = {}, x = {}: kappa = {}, margin = {}{}\n",
                        f.n,
                        f.t,
                        f.x,
                        f.kappa,
                        f.margin,
                        if f.is_hit { "  HIT" } else { "" }
                    );
                }
                for s in &skipped {
                    text += &format!("skipped: {}\n", s);
                }
                emit(&cfg, &cli.out, &findings, text)?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Cf(a) => {
            let t = parse_int(&a.t)?;
            let spec = AlphaSpec::new(a.n, t, a.k)?;
            let target = AlphaTarget::Root(spec);
            let cf = match (&cfg.cache_dir, a.no_cache) {
                (Some(dir), false) => cached_expand(dir, &target, a.count, cfg.precision_floor)?,
                _ => cf_expand(&target, a.count, cfg.precision_floor)?,
            };
            let mut text = format!(
                "{}: {} certified quotients at {} bits\n",
                cf.target,
                cf.len(),
                cf.precision_bits
            );
            if let Some((idx, a_max)) = cf.max_quotient() {
                text += &format!("largest partial quotient a_{} = {}\n", idx, a_max);
            }
            text += &format!(
                "quotients: {}\n",
                cf.quotients
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            emit(&cfg, &cli.out, &cf, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Refine(a) => {
            let t = parse_int(&a.t)?;
            let x = parse_int(&a.x)?;
            let cd = CDConstants::builtin(a.n)
                .ok_or_else(|| anyhow!("no built-in (C, D) constants for n = {}", a.n))?;
            let inst = InstanceInput::standard(a.n, t, x, cd)?;
            let cert = certify(&inst, cfg.precision_floor)?;
            let target = RefineTarget::new(parse_rational(&a.c_star)?, parse_rational(&a.kappa_star)?)?;
            let refined = refine(&cert, target, cfg.precision_floor, cfg.cache_dir.as_deref())?;
            let text = format!(
                "alpha = {}\nverified: {}\n|alpha - p/q| > {} / |q|^{}\n  q > 10^{}: raw certificate (c = {:.3e}, kappa = {:.6})\n  {} < q <= 10^{}: {} convergents, max quotient {} at index {}\n  q <= {}: direct scan\ngap threshold tau = {}",
                refined.alpha,
                refined.verified,
                refined.target.c_star,
                refined.target.kappa_star_plus_one,
                refined.tail_exponent,
                cert.c_prop_upper,
                cert.kappa_upper,
                refined.small_scan_max,
                refined.tail_exponent,
                refined.cf_quotients,
                refined.max_quotient,
                refined.max_quotient_index,
                refined.small_scan_max,
                refined.gap_bound,
            );
            emit(&cfg, &cli.out, &refined, text)?;
            if refined.verified {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Command::VerifyPaper(a) => {
            let results = run_replay(
                a.only.as_deref(),
                a.deep,
                cfg.precision_floor,
                cfg.cache_dir.as_deref(),
            );
            let mut text = String::new();
            let mut all_pass = true;
            for r in &results {
                all_pass &= r.pass;
                text += &format!(
                    "[{}] {}\n    expected: {}\n    computed: {}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.expected,
                    r.computed
                );
            }
            text += &format!(
                "{}/{} checks pass",
                results.iter().filter(|r| r.pass).count(),
                results.len()
            );
            emit(&cfg, &cli.out, &results, text)?;
            if all_pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
    }
}
