use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pbwlab_cli::{run, Caps, Command, Example, Exit, JobSpec};

/// PBW checks, rewriting oracle and twisted-product resolutions for T(V)#G.
///
/// Exit codes: 0 PBW/success, 1 fails/not PBW, 2 inconclusive, 3 input error.
#[derive(Parser)]
#[command(name = "pbwlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conditions (i)-(iii) on a filtered quadratic presentation.
    CheckPbw {
        file: PathBuf,
        /// Koszul certification window when `assert_koszul` is false.
        #[arg(long, default_value_t = 4)]
        homological_cap: usize,
        #[arg(long, default_value_t = 6)]
        polydeg_cap: usize,
    },
    /// The four Drinfeld orbifold conditions on κ.
    CheckKappa { file: PathBuf },
    /// Degree-truncated ideal span and completion.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, default_value_t = 7)]
        gen_cap: usize,
    },
    /// Checker against oracle on a seeded random κ corpus.
    CrossValidate {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, default_value_t = 7)]
        gen_cap: usize,
    },
    /// Builds the twisted-product resolution of S#G and its homology table.
    Resolution {
        file: PathBuf,
        #[arg(long, value_enum)]
        example: ExampleArg,
        #[arg(long, default_value_t = 6)]
        polydeg_cap: usize,
        #[arg(long, default_value_t = 4)]
        homological_cap: usize,
    },
    /// Bounded exactness of the Koszul complex of S.
    KoszulCheck {
        file: PathBuf,
        /// Homological and polynomial degree caps, e.g. `4,6`.
        #[arg(long, default_value = "4,6", value_parser = parse_caps)]
        caps: (usize, usize),
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleArg {
    CyclicP,
    Custom,
}

fn parse_caps(s: &str) -> Result<(usize, usize), String> {
    let (h, d) = s.split_once(',').ok_or("expected H,D")?;
    let h = h.trim().parse().map_err(|e| format!("{e}"))?;
    let d = d.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((h, d))
}

fn job(cmd: Cmd) -> JobSpec {
    let mut caps = Caps::default();
    let mut seed = None;
    let mut count = 0;
    let (command, input) = match cmd {
        Cmd::CheckPbw {
            file,
            homological_cap,
            polydeg_cap,
        } => {
            caps.homological_cap = homological_cap;
            caps.polydeg_cap = polydeg_cap;
            (Command::CheckPbw, file)
        }
        Cmd::CheckKappa { file } => (Command::CheckKappa, file),
        Cmd::Oracle {
            file,
            max_degree,
            gen_cap,
        } => {
            caps.max_degree = max_degree;
            caps.gen_cap = gen_cap;
            (Command::Oracle, file)
        }
        Cmd::CrossValidate {
            file,
            count: n,
            seed: s,
            max_degree,
            gen_cap,
        } => {
            caps.max_degree = max_degree;
            caps.gen_cap = gen_cap;
            seed = Some(s);
            count = n;
            (Command::CrossValidate, file)
        }
        Cmd::Resolution {
            file,
            example,
            polydeg_cap,
            homological_cap,
        } => {
            caps.polydeg_cap = polydeg_cap;
            caps.homological_cap = homological_cap;
            let e = match example {
                ExampleArg::CyclicP => Example::CyclicP,
                ExampleArg::Custom => Example::Custom,
            };
            (Command::Resolution(e), file)
        }
        Cmd::KoszulCheck { file, caps: (h, d) } => {
            caps.homological_cap = h;
            caps.polydeg_cap = d;
            (Command::KoszulCheck, file)
        }
    };
    JobSpec {
        command,
        input,
        caps,
        seed,
        count,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { Exit::InputError as u8 } else { 0 };
            return ExitCode::from(code);
        }
    };
    // Rayon sizes its global pool from this variable on first use.
    if let Ok(n) = std::env::var("PBWLAB_THREADS") {
        std::env::set_var("RAYON_NUM_THREADS", n);
    }
    let start = Instant::now();
    let outcome = run(&job(cli.command));
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.report).expect("report serializes")
    );
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(outcome.exit as u8)
}
