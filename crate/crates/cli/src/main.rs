use anyhow::Result;
use clap::{Parser, Subcommand};
use serde::Deserialize;
use std::path::PathBuf;
use std::time::Instant;
use tautring::recursion::IntegralCache;
use tautring_cli::commands;
use tautring_cli::report::Report;
use tautring_cli::suites::SuiteParams;

/// Exact intersection-theory calculator and verification runner for
/// tautological classes on Hilbert schemes of points on the plane.
#[derive(Parser)]
#[command(name = "tautring", version, about)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_parser = ["text", "json"])]
    output: Option<String>,

    /// Directory holding the persistent integral cache
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Optional TOML configuration file; command-line flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Run single-threaded (results are identical either way)
    #[arg(long, global = true)]
    serial: bool,

    /// Practical cap on n for the engine commands; expression swell in the
    /// pullback expansion grows quickly with n
    #[arg(long, global = true, default_value_t = 5)]
    max_n: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a degree-2n expression over Hilb(n)
    Integrate {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        expr: String,
        /// Integration backend (strategy registry)
        #[arg(long, default_value = "recursion", value_parser = ["recursion", "bott"])]
        backend: String,
    },
    /// Same integral through the localization backend
    OracleIntegrate {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        expr: String,
    },
    /// Decide class vanishing by the pairing test
    IsZero {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        expr: String,
    },
    /// Almost-perversity of a gamma-expressed class (or one membership test)
    Perversity {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        expr: String,
        /// Test membership at this filtration step only
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        k_cap: Option<u32>,
    },
    /// Run a named verification suite
    Verify {
        /// Lemma id (see `verify list`)
        lemma: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        k_cap: Option<u32>,
        #[arg(long)]
        i_min: Option<i64>,
        #[arg(long)]
        i_max: Option<i64>,
        #[arg(long)]
        j_min: Option<i64>,
        #[arg(long)]
        j_max: Option<i64>,
    },
    /// Even Betti numbers of Hilb(n)
    Betti {
        #[arg(long)]
        n: Option<u32>,
    },
    /// Show persistent-cache statistics
    Cache,
}

#[derive(Deserialize, Default)]
struct FileConfig {
    n: Option<u32>,
    d: Option<u32>,
    k_cap: Option<u32>,
    cache_dir: Option<PathBuf>,
    output: Option<String>,
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(toml::from_str(&text)?)
        }
        None => Ok(FileConfig::default()),
    }
}

fn run(cli: Cli) -> Result<(Report, bool)> {
    let cfg = load_config(&cli.config)?;
    let n_default = |n: Option<u32>| n.or(cfg.n).unwrap_or(2);
    let d_default = |d: Option<u32>| d.or(cfg.d).unwrap_or(3);
    let cache_dir = cli
        .cache_dir
        .clone()
        .or(cfg.cache_dir.clone())
        .or_else(|| std::env::var_os("TAUTRING_CACHE_DIR").map(PathBuf::from));

    let cache = IntegralCache::new();
    let mut preloaded = 0;
    if let Some(dir) = &cache_dir {
        preloaded = tautring_cli::cache::load(dir, &cache)?;
    }

    let engine_n = match &cli.command {
        Command::Integrate { n, .. }
        | Command::OracleIntegrate { n, .. }
        | Command::IsZero { n, .. }
        | Command::Perversity { n, .. }
        | Command::Verify { n, .. } => Some(n_default(*n)),
        Command::Betti { .. } | Command::Cache => None,
    };
    if let Some(n) = engine_n {
        if n > cli.max_n {
            anyhow::bail!(
                "n = {} exceeds the practical cap {} (raise it with --max-n)",
                n,
                cli.max_n
            );
        }
    }

    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Integrate { n, d, expr, backend } => {
            commands::cmd_integrate(n_default(*n), d_default(*d), expr, backend, &cache)?
        }
        Command::OracleIntegrate { n, d, expr } => {
            commands::cmd_oracle_integrate(n_default(*n), d_default(*d), expr, &cache)?
        }
        Command::IsZero { n, d, expr } => {
            commands::cmd_is_zero(n_default(*n), d_default(*d), expr, &cache)?
        }
        Command::Perversity { n, d, expr, k, k_cap } => commands::cmd_perversity(
            n_default(*n),
            d_default(*d),
            expr,
            *k,
            k_cap.or(cfg.k_cap),
            &cache,
        )?,
        Command::Verify {
            lemma,
            n,
            d,
            k_cap,
            i_min,
            i_max,
            j_min,
            j_max,
        } => {
            let mut p = SuiteParams::new(n_default(*n), d_default(*d));
            p.k_cap = k_cap.or(cfg.k_cap);
            if let Some(v) = i_min {
                p.i_lo = *v;
            }
            if let Some(v) = i_max {
                p.i_hi = *v;
            }
            if let Some(v) = j_min {
                p.j_lo = *v;
            }
            if let Some(v) = j_max {
                p.j_hi = *v;
            }
            commands::cmd_verify(lemma, &p, &cache)?
        }
        Command::Betti { n } => commands::cmd_betti(n_default(*n))?,
        Command::Cache => {
            let label = cache_dir
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "(none)".into());
            commands::cmd_cache_stats(&label, &cache)?
        }
    };
    report
        .timings_ms
        .insert("total".into(), start.elapsed().as_millis());
    let (hits, misses) = cache.stats();
    report.cache.hits = hits;
    report.cache.misses = misses;
    report.cache.entries = cache.len();
    report.param("cache_preloaded", preloaded);

    if let Some(dir) = &cache_dir {
        tautring_cli::cache::save(dir, &cache)?;
    }

    let json = cli.output.as_deref().or(cfg.output.as_deref()) == Some("json");
    Ok((report, json))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Integrate { .. } => "integrate",
        Command::OracleIntegrate { .. } => "oracle-integrate",
        Command::IsZero { .. } => "is-zero",
        Command::Perversity { .. } => "perversity",
        Command::Verify { .. } => "verify",
        Command::Betti { .. } => "betti",
        Command::Cache => "cache",
    }
}

fn main() {
    let cli = Cli::parse();
    let serial = cli.serial;
    let name = command_name(&cli.command);
    let wants_json = cli.output.as_deref() == Some("json");
    let work = || -> Result<(Report, bool)> { run(cli) };
    let result = if serial {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .expect("thread pool");
        pool.install(work)
    } else {
        work()
    };
    match result {
        Ok((report, json)) => {
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            std::process::exit(if report.pass() { 0 } else { 1 });
        }
        Err(e) => {
            // Precondition violations and I/O failures surface as a
            // structured one-verdict report on stdout, nonzero exit.
            let mut report = Report::new(name);
            report.verdict("error", false, e.to_string());
            if wants_json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
