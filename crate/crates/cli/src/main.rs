//! `sandalc`: compile Sandal models to NuSMV, check them, or dump their IR.
//!
//! Exit codes: 0 success or every property passed, 1 some property failed,
//! 2 usage, parse or type error, 3 resource limit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sandal::checker::{CheckConfig, CheckError, Checker, Verdict, DEFAULT_MAX_STATES};
use sandal::{smv, Error, System};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "sandalc", version, about = "Compiler and checker for Sandal models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the woven system as NuSMV modules.
    Compile {
        #[command(flatten)]
        common: Common,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify the `ltl` properties with the built-in checker.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
        /// Check only property N (1-based, in source order).
        #[arg(long, value_name = "N")]
        property: Option<usize>,
    },
    /// Print the woven process automata.
    DumpIr {
        model: PathBuf,
        /// Print the automata before fault weaving.
        #[arg(long)]
        unwoven: bool,
    },
}

#[derive(Args)]
struct Common {
    model: PathBuf,
    /// Process fairness for liveness properties.
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    fairness: Toggle,
    /// Also print the woven automata.
    #[arg(long)]
    dump_ir: bool,
    /// Print how many fault transitions weaving added.
    #[arg(long)]
    report_weave: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load(path: &Path) -> Result<(String, String), String> {
    let file = path.display().to_string();
    let source = fs::read_to_string(path).map_err(|e| format!("{file}: {e}"))?;
    Ok((file, source))
}

fn build(path: &Path, woven: bool) -> Result<(String, System), String> {
    let (file, source) = load(path)?;
    let instance = sandal::instantiate_source(&source).map_err(|e| e.render(&file))?;
    let sys = if woven {
        System::woven(instance)
    } else {
        System::unwoven(instance)
    };
    Ok((file, sys))
}

fn preamble(common: &Common, sys: &System) {
    if common.report_weave {
        print!("{}", sys.report);
    }
    if common.dump_ir {
        print!("{}", sys.dump_ir());
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Compile { common, output } => {
            let (file, sys) = build(&common.model, true)?;
            preamble(&common, &sys);
            let doc = smv::emit_smv(&sys, common.fairness == Toggle::On)
                .map_err(|e| Error::from(e).render(&file))?;
            match output {
                Some(out) => fs::write(&out, doc.to_string())
                    .map_err(|e| format!("{}: {e}", out.display()))?,
                None => print!("{doc}"),
            }
            Ok(0)
        }
        Command::Check {
            common,
            max_states,
            property,
        } => {
            let (file, sys) = build(&common.model, true)?;
            preamble(&common, &sys);
            let specs = &sys.instance.specs;
            let selected: Vec<usize> = match property {
                None => (0..specs.len()).collect(),
                Some(n) if (1..=specs.len()).contains(&n) => vec![n - 1],
                Some(n) => {
                    return Err(format!(
                        "{file}: no property {n}; the model has {}",
                        specs.len()
                    ))
                }
            };
            if selected.is_empty() {
                println!("no properties to check");
                return Ok(0);
            }
            let checker = Checker::new(
                &sys,
                CheckConfig {
                    max_states,
                    fairness: common.fairness == Toggle::On,
                },
            );
            let mut code = 0;
            for i in selected {
                let spec = &specs[i];
                println!("property {}: {}", i + 1, spec.text);
                match checker.check(&spec.formula) {
                    Ok(outcome) => match outcome.verdict {
                        Verdict::Pass => println!("PASS ({} states)", outcome.states),
                        Verdict::Fail(cx) => {
                            println!("FAIL ({} states)", outcome.states);
                            print!("{}", cx.render(&sys));
                            code = code.max(EXIT_FAIL);
                        }
                    },
                    Err(e @ CheckError::StateLimitExceeded { .. }) => {
                        eprintln!("{}", Error::from(e).render(&file));
                        return Ok(EXIT_LIMIT);
                    }
                    Err(e @ CheckError::UnsupportedFormula { .. }) => {
                        let line = spec.pos.line;
                        let col = spec.pos.column;
                        eprintln!("{file}:{line}:{col}: {e}");
                        code = code.max(EXIT_USAGE);
                    }
                }
            }
            Ok(code)
        }
        Command::DumpIr { model, unwoven } => {
            let (_, sys) = build(&model, !unwoven)?;
            print!("{}", sys.dump_ir());
            Ok(0)
        }
    }
}
