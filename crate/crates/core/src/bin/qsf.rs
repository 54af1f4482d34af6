use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qsf::cli::{
    dump_example, exit_code, run_generate, run_inspect, run_validate, Preset, RunConfig, Selector,
    EXIT_OK, EXIT_USAGE, EXIT_VALIDATION,
};
use qsf::pulsegen::FilterSettings;

#[derive(Parser)]
#[command(name = "qsf", version, about = "Noisy qubit simulator and dataset generator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Desk,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one dataset by name, or all 52 with `all-52`.
    Generate {
        selector: String,
        #[arg(long)]
        num_ex: Option<usize>,
        /// Time steps per example.
        #[arg(long = "M", alias = "m")]
        n_steps: Option<usize>,
        /// Noise realizations per example.
        #[arg(long = "K", alias = "k")]
        n_realizations: Option<usize>,
        #[arg(long, env = "QSF_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "datasets")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = PresetArg::Desk)]
        preset: PresetArg,
        #[arg(long)]
        noise_strength: Option<f64>,
        #[arg(long)]
        filter_order: Option<usize>,
        #[arg(long)]
        filter_ripple_db: Option<f64>,
        /// Cutoff as a fraction of Nyquist.
        #[arg(long)]
        filter_cutoff: Option<f64>,
        /// Store the interaction unitary at every step rather than only the last.
        #[arg(long)]
        full_ui: bool,
        /// Record wall-clock time per example (breaks byte reproducibility).
        #[arg(long)]
        record_timing: bool,
        /// Validate archives already in the output directory.
        #[arg(long)]
        validate_only: bool,
    },
    /// Check archives against the format and physics invariants.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Summarize an example, or dump it as JSON.
    Inspect {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long)]
        dump: bool,
    },
}

fn run(cli: Cli) -> qsf::Result<i32> {
    match cli.command {
        Command::Generate {
            selector,
            num_ex,
            n_steps,
            n_realizations,
            seed,
            out,
            workers,
            preset,
            noise_strength,
            filter_order,
            filter_ripple_db,
            filter_cutoff,
            full_ui,
            record_timing,
            validate_only,
        } => {
            let mut rc = RunConfig::new(Selector::parse(&selector), out);
            rc.preset = match preset {
                PresetArg::Desk => Preset::Desk,
                PresetArg::Full => Preset::Full,
            };
            rc.num_ex = num_ex;
            rc.n_steps = n_steps;
            rc.n_realizations = n_realizations;
            rc.master_seed = seed;
            rc.workers = workers;
            rc.noise_strength = noise_strength;
            if filter_order.is_some() || filter_ripple_db.is_some() || filter_cutoff.is_some() {
                let d = FilterSettings::default();
                rc.filter = Some(FilterSettings {
                    order: filter_order.unwrap_or(d.order),
                    ripple_db: filter_ripple_db.unwrap_or(d.ripple_db),
                    cutoff_frac: filter_cutoff.unwrap_or(d.cutoff_frac),
                });
            }
            rc.store_full_ui = full_ui;
            rc.record_timing = record_timing;
            rc.validate_only = validate_only;

            let summary = run_generate(&rc)?;
            for d in &summary.datasets {
                let status = if d.validation_passed { "ok" } else { "FAILED" };
                println!("{:<32} {:>6} examples  {}  {}", d.dataset, d.num_ex, status, d.archive.display());
            }
            Ok(if summary.all_valid() { EXIT_OK } else { EXIT_VALIDATION })
        }
        Command::Validate { paths, json } => {
            let refs: Vec<&std::path::Path> = paths.iter().map(PathBuf::as_path).collect();
            let (reports, code) = run_validate(&refs);
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                for r in &reports {
                    println!("{}", r.archive);
                    for c in &r.checks {
                        println!("  {:<22} {:?} {:?}  {}", c.name, c.kind, c.status, c.detail);
                    }
                }
            }
            Ok(code)
        }
        Command::Inspect { path, index, dump } => {
            if dump {
                dump_example(&path, index, io::stdout().lock())?;
            } else {
                print!("{}", run_inspect(&path, index)?.text);
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_OK as u8 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
