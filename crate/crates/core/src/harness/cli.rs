use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    apply_channel, emit_bound_curves, oracle_decode, simulate, write_trials, ChannelKind, ChannelSpec, SimulationConfig,
};
use crate::decoder::{
    decoding_threshold, list_decode_with, list_recover_with, DecodeOptions, DecodeResult, DegreeMode,
};
use crate::error::{Error, Result};
use crate::frs::{FrsParams, RecoverySets, Variant};

pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "frs", version, about = "Folded Reed-Solomon encoding, list decoding and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode a message file (k+1 coefficients) into a folded codeword.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Corrupt exactly --errors folded symbols of a word.
    Corrupt {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List decode a received word; prints one message per line.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        decode: DecodeArgs,
    },
    /// List recover from per-position candidate sets.
    Recover {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        decode: DecodeArgs,
        /// Largest allowed set size.
        #[arg(long)]
        l: usize,
    },
    /// Run seeded encode/corrupt/decode trials and write CSV.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        decode: DecodeArgs,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write closed-form decoding radius curves as CSV.
    Bounds {
        #[arg(long, value_delimiter = ',', default_value = "4")]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        s: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive reference decoder for small instances.
    Oracle {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
        /// Agreement threshold; defaults to the decoder's.
        #[arg(long)]
        t: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct CodeArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    s: usize,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value = "standard")]
    variant: Variant,
}

impl CodeArgs {
    fn params(&self) -> Result<FrsParams> {
        FrsParams::new(self.q, self.m, self.k, self.s, self.r, self.variant)
    }
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Input file; standard input when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChannelArg {
    Uniform,
    Burst,
    Fixed,
}

#[derive(Args, Debug)]
struct ChannelArgs {
    /// Number of corrupted folded symbols.
    #[arg(long, default_value_t = 0)]
    errors: usize,
    #[arg(long, value_enum, default_value_t = ChannelArg::Uniform)]
    channel: ChannelArg,
    /// Comma-separated positions for the fixed channel.
    #[arg(long, value_delimiter = ',')]
    positions: Vec<usize>,
}

impl ChannelArgs {
    fn spec(&self) -> ChannelSpec {
        let kind = match self.channel {
            ChannelArg::Uniform => ChannelKind::Uniform,
            ChannelArg::Burst => ChannelKind::Burst,
            ChannelArg::Fixed => ChannelKind::Fixed(self.positions.clone()),
        };
        ChannelSpec { kind, e: self.errors }
    }
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the closed-form degree bound instead of the refined one.
    #[arg(long)]
    formula_degree: bool,
}

impl DecodeArgs {
    fn options(&self) -> DecodeOptions {
        let degree = if self.formula_degree { DegreeMode::Formula } else { DegreeMode::Refined };
        DecodeOptions { seed: self.seed, degree, ..Default::default() }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => Ok(fs::read_to_string(p)?),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn messages_text(params: &FrsParams, res: &DecodeResult) -> String {
    res.messages.iter().map(|f| params.message_text(f) + "\n").collect()
}

fn report(res: &DecodeResult) {
    let st = &res.stats;
    eprintln!(
        "t={} D={} (formula {}) matrix={}x{} candidates={} listed={}",
        res.t,
        st.d,
        st.d_formula,
        st.equations,
        st.unknowns,
        st.candidates,
        res.messages.len()
    );
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode { code, io } => {
            let p = code.params()?;
            let f = p.parse_message(&read_input(&io.input)?)?;
            write_output(&io.out, p.encode(&f)?.to_text().as_bytes())
        }
        Command::Corrupt { code, io, channel, seed } => {
            let p = code.params()?;
            let w = p.parse_word(&read_input(&io.input)?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let y = apply_channel(&p, &w, &channel.spec(), &mut rng)?;
            write_output(&io.out, y.to_text().as_bytes())
        }
        Command::Decode { code, io, decode } => {
            let p = code.params()?;
            let y = p.parse_word(&read_input(&io.input)?)?;
            let res = list_decode_with(&p, &y, &decode.options())?;
            report(&res);
            write_output(&io.out, messages_text(&p, &res).as_bytes())
        }
        Command::Recover { code, io, decode, l } => {
            let p = code.params()?;
            let sets = RecoverySets::parse(&p, &read_input(&io.input)?, l)?;
            let res = list_recover_with(&p, &sets, &decode.options())?;
            report(&res);
            write_output(&io.out, messages_text(&p, &res).as_bytes())
        }
        Command::Simulate { code, channel, decode, trials, out } => {
            let config = SimulationConfig {
                params: code.params()?,
                channel: channel.spec(),
                trials,
                seed: decode.seed,
                options: decode.options(),
            };
            let records = simulate(&config)?;
            let mut buf = Vec::new();
            write_trials(&records, &mut buf)?;
            write_output(&out, &buf)
        }
        Command::Bounds { m, s, r, step, out } => {
            if r == 0 || m.contains(&0) || s.contains(&0) {
                return Err(Error::InvalidParams("m, s and r must be positive".into()));
            }
            let mut buf = Vec::new();
            emit_bound_curves(&m, &s, r, step, &mut buf)?;
            write_output(&out, &buf)
        }
        Command::Oracle { code, io, t } => {
            let p = code.params()?;
            let y = p.parse_word(&read_input(&io.input)?)?;
            let t = t.unwrap_or_else(|| decoding_threshold(&p, DegreeMode::Refined).1);
            let list = oracle_decode(&p, &y, t)?;
            let text: String = list.iter().map(|f| p.message_text(f) + "\n").collect();
            write_output(&io.out, text.as_bytes())
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_)
        | Error::Parse(_)
        | Error::ShapeMismatch(_)
        | Error::DimensionMismatch { .. }
        | Error::DegreeTooLarge { .. } => EXIT_IO,
        _ => EXIT_REJECTED,
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
