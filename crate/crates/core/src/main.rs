use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hopf_cw::cyclic::HomologyMode;
use hopf_cw::fixtures::fixture;
use hopf_cw::io::suite::{compute_chw, deform_spec, homology};
use hopf_cw::io::{export, load_spec, run_suite, save_spec, to_canonical_string};
use hopf_cw::scalar::Rational;
use hopf_cw::Error;

#[derive(Parser)]
#[command(
    name = "hopf-cw",
    version,
    about = "Exact checks for Hopf-Galois extensions and their Chern-Weil classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite on a fixture file.
    Verify {
        spec: PathBuf,
        /// hopf-axioms, galois, chern-weil, prop-deformation-hopf, thm-deformed-strong-conn-right,
        /// prop-pushforward, naturality, prop-chw-deform-right, prop-chw-deform-external,
        /// combined, all, or fixture (the suites listed in the file)
        #[arg(long)]
        suite: String,
        /// Write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compute a Chern-Weil cycle.
    Compute {
        #[command(subcommand)]
        what: ComputeWhat,
    },
    /// Dimension of the cyclic homology of the coinvariant subalgebra.
    Homology {
        spec: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Mode::Bicomplex)]
        mode: Mode,
    },
    /// Write the fixture deformed by one of its cocycles.
    Deform {
        spec: PathBuf,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print or write a bundled fixture.
    #[command(hide = true)]
    Fixture {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ComputeWhat {
    Chw {
        spec: PathBuf,
        /// A basis label of H, or comma-separated coefficients.
        #[arg(long)]
        cotrace: String,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Connes,
    Bicomplex,
}

/// 0 pass, 1 check failure, 2 input error.
fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Falsification(_) | Error::NotGalois(_) | Error::NoSolution(_) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify { spec, suite, report } => {
            let spec = load_spec(&spec)?;
            let start = Instant::now();
            let r = run_suite(&spec, &suite)?;
            print!("{}", r.summary());
            println!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
            if let Some(path) = report {
                std::fs::write(path, to_canonical_string(&r)?)?;
            }
            Ok(r.passed())
        }
        Command::Compute {
            what:
                ComputeWhat::Chw {
                    spec,
                    cotrace,
                    degree,
                },
        } => {
            let spec = load_spec(&spec)?;
            let out = compute_chw(&spec, &cotrace, degree)?;
            print!("{}", to_canonical_string(&out)?);
            Ok(out.passed())
        }
        Command::Homology { spec, degree, mode } => {
            let spec = load_spec(&spec)?;
            let mode = match mode {
                Mode::Connes => HomologyMode::Connes,
                Mode::Bicomplex => HomologyMode::Bicomplex,
            };
            print!("{}", to_canonical_string(&homology(&spec, degree, mode)?)?);
            Ok(true)
        }
        Command::Deform { spec, cocycle, out } => {
            let spec = load_spec(&spec)?;
            let deformed = deform_spec(&spec, &cocycle)?;
            save_spec(&deformed, &out)?;
            println!("wrote {}", out.display());
            Ok(true)
        }
        Command::Fixture { name, out } => {
            let spec = export(&fixture::<Rational>(&name)?)?;
            match out {
                Some(path) => save_spec(&spec, path)?,
                None => print!("{}", to_canonical_string(&spec)?),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(exit_for(&e))
        }
    }
}
