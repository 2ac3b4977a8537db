use std::path::PathBuf;
use std::process::ExitCode;

use chabauty_kim::cache::CACHE_DIR_ENV;
use chabauty_kim::verify::{
    cmd_build, cmd_constants, cmd_sweep, cmd_verify_s2, cmd_verify_z, render, render_sweep, write_text, CheckStatus,
    ReportFormat, RunConfig, Site,
};
use chabauty_kim::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "kim-verify",
    version,
    about = "p-adic verification of Chabauty-Kim loci for P^1 minus 0, 1, infinity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or load from the cache) the polylogarithm family and audit it.
    Build,
    /// Print log 2, zeta values, Li_k(1/2), c1 and C^p.
    Constants,
    /// Common zeros of F2 and F4 against {2, 1/2, -1}.
    VerifyS2,
    /// Teichmüller pairs and odd polylogarithms for X over Z.
    VerifyZ,
    /// Run a verification for several primes.
    Sweep {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,11,13,17,19,23,29")]
        primes: Vec<u64>,
        #[arg(long, value_enum, default_value = "z-minus-2")]
        site: SiteArg,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, default_value_t = 11)]
    p: u64,
    /// Target precision N (digits).
    #[arg(long, global = true, default_value_t = 30)]
    prec: u32,
    #[arg(long, global = true, default_value_t = 4)]
    kmax: u32,
    #[arg(long, global = true, default_value_t = 20)]
    match_digits: u32,
    /// Cache directory for constructed families.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for sampled identity checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 25)]
    samples: usize,
    /// Skip the ODE/Frobenius residual audit.
    #[arg(long, global = true)]
    no_audit: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SiteArg {
    #[value(name = "z-minus-2")]
    ZMinus2,
    Z,
}

impl Common {
    fn config(&self, site: Site) -> RunConfig {
        RunConfig {
            kmax: self.kmax,
            site,
            match_digits: self.match_digits,
            cache_dir: self.cache.clone(),
            format: match self.format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Text => ReportFormat::Text,
            },
            seed: self.seed,
            samples: self.samples,
            audit: !self.no_audit,
            ..RunConfig::new(self.p, self.prec)
        }
    }
}

fn exit_for(status: CheckStatus) -> ExitCode {
    if status.is_failure() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(e, Error::InvalidPrime(_) | Error::InvalidPrecision | Error::Config(_))
}

fn run(cli: &Cli) -> Result<CheckStatus, Error> {
    let c = &cli.common;
    let (text, status) = match &cli.command {
        Command::Sweep { primes, site } => {
            let site = match site {
                SiteArg::ZMinus2 => Site::ZMinus2,
                SiteArg::Z => Site::Z,
            };
            let template = c.config(site);
            for &p in primes {
                RunConfig { p, ..template.clone() }.validate()?;
            }
            let sweep = cmd_sweep(primes, &template);
            (render_sweep(&sweep, template.format)?, sweep.overall())
        }
        cmd => {
            let site = if matches!(cmd, Command::VerifyZ) { Site::Z } else { Site::ZMinus2 };
            let cfg = c.config(site);
            let report = match cmd {
                Command::Build => cmd_build(&cfg)?,
                Command::Constants => cmd_constants(&cfg)?,
                Command::VerifyS2 => cmd_verify_s2(&cfg)?,
                _ => cmd_verify_z(&cfg)?,
            };
            (render(&report, cfg.format)?, report.overall())
        }
    };
    write_text(&text, c.out.as_deref())?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => exit_for(status),
        Err(e) => {
            eprintln!("kim-verify: {e}");
            if is_config_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
