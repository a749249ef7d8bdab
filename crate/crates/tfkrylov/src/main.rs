use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tfkrylov::config::Problem;
use tfkrylov::report::write_outputs;
use tfkrylov::verify::{generator_conformance, reference, run_invariant_suite};
use tfkrylov::{parse_config, run_experiment, HarnessError};

/// Overrides `output_dir` from the configuration file.
const OUTPUT_DIR_ENV: &str = "TFKRYLOV_OUTPUT_DIR";

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CONFORMANCE: u8 = 3;

#[derive(Parser)]
#[command(name = "tfkrylov", version, about = "Transpose-free Krylov experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a configuration file.
    Run { config: PathBuf },
    /// List the test problems and their generator conformance values.
    Problems,
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn fail(e: &HarnessError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_config() { EXIT_CONFIG } else { EXIT_FAILURE })
}

fn run(path: PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let base = path.parent().map(PathBuf::from).unwrap_or_default();
    let mut cfg = match parse_config(&text, &base) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
        cfg.output_dir = PathBuf::from(dir);
    }
    let out = match run_experiment(&cfg) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let written = match write_outputs(&out, cfg.problem, &cfg.output_dir, cfg.convergence) {
        Ok(w) => w,
        Err(e) => return fail(&e),
    };
    println!("{:<10} {:>4} {:>12} {:>12} {:>7} {:>7} {:>9}", "solver", "runs", "err@stop", "err best", "k_stop", "stopO", "stopOvar3");
    let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.2}"));
    for s in &out.summary {
        println!(
            "{:<10} {:>4} {:>12.4e} {:>12.4e} {:>7} {:>7} {:>9}",
            s.solver.tag(),
            s.runs,
            s.rel_err_stop,
            s.rel_err_best,
            show(s.k_stop),
            show(s.stop_o),
            show(s.stop_o_var3)
        );
    }
    println!("wrote {} files to {}", written.len(), cfg.output_dir.display());
    match out.conformance {
        Some(c) if !c.passed() => {
            eprintln!(
                "conformance failure: {} asymmetry {:.5}, expected {} ± {}; rank {:?}, expected {:?}",
                c.problem.tag(),
                c.asymmetry,
                c.reference.asymmetry,
                c.reference.tol,
                c.rank,
                c.reference.rank
            );
            ExitCode::from(EXIT_CONFORMANCE)
        }
        _ => ExitCode::SUCCESS,
    }
}

fn problems() -> ExitCode {
    for p in Problem::ALL {
        let line = match reference(p) {
            Some(r) => match generator_conformance(p, r.n) {
                Ok(Some(c)) => {
                    let rank = c.rank.map(|k| format!(", rank {k}")).unwrap_or_default();
                    let mark = if c.passed() { "ok" } else { "MISMATCH" };
                    format!("n={} asymmetry {:.5} (reference {}){rank} {mark}", r.n, c.asymmetry, r.asymmetry)
                }
                Ok(None) => String::new(),
                Err(e) => return fail(&e),
            },
            None => format!("n={} image side, psf {}", p.default_n(), p.default_psf_size()),
        };
        println!("{:<16} {}\n{:<16} {}", p.tag(), p.description(), "", line);
    }
    ExitCode::SUCCESS
}

fn verify(seed: u64) -> ExitCode {
    let outcomes = match run_invariant_suite(seed) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    for o in &outcomes {
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    if outcomes.iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CONFORMANCE)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config } => run(config),
        Command::Problems => problems(),
        Command::Verify { seed } => verify(seed),
    }
}
