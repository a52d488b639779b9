use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "cring",
    version,
    about = "Exact arithmetic in truncations of the I-adic completion of ZR"
)]
struct Cli {
    /// Coefficient algebra: gf(p), gf(q), gf(q,<modulus in x>), perfect(p;t,u,...)
    #[arg(long, global = true)]
    ring: Option<String>,

    /// Precision n, i.e. work modulo I^n
    #[arg(long, global = true)]
    prec: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical form of an element of ZR modulo I^n
    Reduce {
        element: String,
    },
    Add {
        left: String,
        right: String,
    },
    Mul {
        left: String,
        right: String,
    },
    Invert {
        element: String,
    },
    /// Teichmüller digits r_0, ..., r_{n-1}
    TeichExpand {
        element: String,
    },
    /// Sum of p^i [r_i] from a comma-separated digit list
    FromDigits {
        #[arg(long)]
        digits: String,
    },
    /// The unique a mod I^{n-1} with p*a = z mod I^n, for z in I
    DivideP {
        element: String,
    },
    Valuation {
        element: String,
    },
    /// Compare the map to Witt vectors on sums and products
    WittCompare {
        left: String,
        right: Option<String>,
    },
    /// Idempotent e of (Z/p^n)R cutting out the image of I^n
    Idempotent,
    /// Run the exhaustive small-ring consistency suites
    Selftest {
        /// Run suites one after another instead of in parallel
        #[arg(long)]
        sequential: bool,
    },
}

/// Errors in how the program was invoked, as opposed to in the mathematics.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn read_arg(src: &str) -> anyhow::Result<String> {
    if src != "-" {
        return Ok(src.to_string());
    }
    let mut buf = String::new();
    io::stdin().read_to_string(&mut buf)?;
    Ok(buf.trim().to_string())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<cring::Error>() {
        Some(e) => commands::exit_code_for(e),
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            match cli.output {
                OutputMode::Text => print!("{}", out.text),
                OutputMode::Structured => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&out.structured).expect("JSON value")
                    )
                }
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
