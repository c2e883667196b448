use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cotorsion::harness::{
    compute, list_modules, run_suite, AlgebraSource, CheckId, Computation, Report, SuiteConfig,
    TripleSource,
};
use cotorsion::Error;

#[derive(Parser)]
#[command(name = "ctl", version, about = "Cotorsion triple and relative homology checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Common {
    /// `builtin:A1`, `builtin:A2`, `builtin:A3` or a path to an algebra JSON file
    #[arg(long)]
    algebra: String,
    /// Characteristic for builtin algebras
    #[arg(long = "char", default_value_t = 3)]
    characteristic: u32,
    /// `trivial`, `gorenstein` or a path to a triple JSON file
    #[arg(long, default_value = "gorenstein")]
    triple: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    bound: usize,
    #[arg(long, default_value_t = 4)]
    imax: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit wall-clock fields so reports are byte-identical across runs
    #[arg(long)]
    no_timestamps: bool,
}

impl Common {
    fn config(&self) -> SuiteConfig {
        let mut c = SuiteConfig::new(
            AlgebraSource::parse(&self.algebra, self.characteristic),
            TripleSource::parse(&self.triple),
        );
        c.seed = self.seed;
        c.bound = self.bound;
        c.imax = self.imax;
        c.jobs = self.jobs;
        c.timestamps = !self.no_timestamps;
        c
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit a JSON report
    Run {
        #[command(flatten)]
        common: Common,
        /// `all` or comma-separated check ids
        #[arg(long, default_value = "all")]
        suite: String,
        /// Exit with 3 when any check is unknown
        #[arg(long)]
        strict_unknown: bool,
    },
    /// Compute a single invariant for registered modules
    Compute {
        #[command(flatten)]
        common: Common,
        #[arg(value_parser = ["ext-table", "z-pd", "z-id", "ho-hom", "stable-eq"])]
        what: String,
        m: String,
        n: Option<String>,
    },
    /// List registered modules with their class memberships
    ListModules {
        #[command(flatten)]
        common: Common,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &Report, out: Option<&PathBuf>) -> Result<(), Error> {
    emit(&report.to_json()?, out)
}

fn second(what: &str, n: Option<String>) -> Result<String, Error> {
    n.ok_or_else(|| Error::Config(format!("{what} needs two module names")))
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Run {
            common,
            suite,
            strict_unknown,
        } => {
            let mut config = common.config();
            config.checks = CheckId::parse_list(&suite)?;
            let report = run_suite(&config)?;
            emit_report(&report, common.out.as_ref())?;
            Ok(report.exit_code(strict_unknown))
        }
        Command::Compute {
            common,
            what,
            m,
            n,
        } => {
            let comp = match what.as_str() {
                "ext-table" => Computation::ExtTable {
                    n: second(&what, n)?,
                    m,
                },
                "z-pd" => Computation::ZPd { m },
                "z-id" => Computation::ZId { m },
                "ho-hom" => Computation::HoHom {
                    n: second(&what, n)?,
                    m,
                },
                _ => Computation::StableEq {
                    n: second(&what, n)?,
                    m,
                },
            };
            let report = compute(&common.config(), &comp)?;
            emit_report(&report, common.out.as_ref())?;
            Ok(report.exit_code(false))
        }
        Command::ListModules { common } => {
            let v = list_modules(&common.config())?;
            let mut text = serde_json::to_string_pretty(&v).expect("json");
            text.push('\n');
            emit(&text, common.out.as_ref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("ctl: {e}");
            ExitCode::from(2)
        }
    }
}
