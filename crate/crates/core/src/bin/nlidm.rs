use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nlidm::commands::{self, parse_alphabet};
use nlidm::{Error, SchemeTag};

#[derive(Parser)]
#[command(name = "nlidm", version, about = "Distribution matchers and per-block NLI/SNR analysis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a scheme and write its scheme file.
    Build {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value = "1,3,5,7")]
        alphabet: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-composition SNR of a scheme file, written as CSVs under a prefix.
    Analyze {
        scheme_file: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        bins: Option<f64>,
    },
    /// Build all schemes at (n, k) and print the comparison table.
    Compare {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value = "1,3,5,7")]
        alphabet: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a hex word or decode an amplitude sequence with a scheme file.
    Codec {
        #[command(subcommand)]
        op: CodecOp,
    },
}

#[derive(Subcommand)]
enum CodecOp {
    Encode { scheme_file: PathBuf, word: String },
    Decode { scheme_file: PathBuf, sequence: String },
}

fn run(cli: Cli) -> nlidm::Result<()> {
    match cli.cmd {
        Cmd::Build {
            scheme,
            n,
            k,
            alphabet,
            config,
            out,
        } => {
            let tag: SchemeTag = scheme.parse()?;
            let a = parse_alphabet(&alphabet)?;
            let set = commands::cmd_build(tag, n, k, &a, config.as_deref(), &out)?;
            println!(
                "{}: {} compositions, rate loss {:.4} -> {}",
                set.tag,
                set.len(),
                set.rate_loss,
                out.display()
            );
        }
        Cmd::Analyze {
            scheme_file,
            config,
            out,
            bins,
        } => {
            let (set, r) = commands::cmd_analyze(&scheme_file, config.as_deref(), &out, bins)?;
            let g = r.aggregates;
            println!(
                "{}: min {:.2} dB, max {:.2} dB, avg {:.2} dB, p2p {:.2} dB",
                set.tag, g.min, g.max, g.avg, g.p2p
            );
        }
        Cmd::Compare {
            n,
            k,
            alphabet,
            config,
            out,
        } => {
            let a = parse_alphabet(&alphabet)?;
            match out {
                Some(p) => {
                    let mut f = std::fs::File::create(&p)?;
                    commands::cmd_compare(n, k, &a, config.as_deref(), &mut f)?;
                }
                None => {
                    commands::cmd_compare(n, k, &a, config.as_deref(), &mut std::io::stdout())?;
                }
            }
        }
        Cmd::Codec { op } => match op {
            CodecOp::Encode { scheme_file, word } => {
                println!("{}", commands::cmd_encode(&scheme_file, &word)?)
            }
            CodecOp::Decode {
                scheme_file,
                sequence,
            } => println!("{}", commands::cmd_decode(&scheme_file, &sequence)?),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
