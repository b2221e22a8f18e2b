//! `ssec`: sketch a file, corrupt it, recover it, and run the code's sweeps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssec::bits::BitString;
use ssec::blockhash::PhiMode;
use ssec::channel::sample_edit;
use ssec::codec::{default_phi_mode, recover, redundancy_report, sketch_with, CodecError, RedundancyReport, Sketch};
use ssec::params::{derive_params, CodeParams, Mode, Overrides, ParamsError};
use ssec::verify::{run_sweep, Selection, SweepConfig};
use thiserror::Error;

/// Documented exit codes.
mod exit {
    pub const IO: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const NOT_DENSE: u8 = 3;
    pub const DECODE_FAILURE: u8 = 4;
    pub const AMBIGUOUS: u8 = 5;
    pub const SKETCH_PARSE: u8 = 6;
    pub const VERIFY_FAILED: u8 = 7;
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("input is not dense: {0}")]
    NotDense(CodecError),
    #[error("recovery failed: {0}")]
    Decode(String),
    #[error("recovery is ambiguous: {0} candidates match the sketch")]
    Ambiguous(usize),
    #[error("{path}: {reason}")]
    SketchParse { path: PathBuf, reason: String },
    #[error("verification sweep reported failures")]
    VerifyFailed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Usage(_) => exit::USAGE,
            CliError::NotDense(_) => exit::NOT_DENSE,
            CliError::Decode(_) => exit::DECODE_FAILURE,
            CliError::Ambiguous(_) => exit::AMBIGUOUS,
            CliError::SketchParse { .. } => exit::SKETCH_PARSE,
            CliError::VerifyFailed => exit::VERIFY_FAILED,
        }
    }
}

impl From<ParamsError> for CliError {
    fn from(e: ParamsError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Sketch and recover files across one substring edit of at most k bits.
///
/// Exit codes: 0 success, 1 I/O, 2 usage, 3 input not dense, 4 decoding
/// failure, 5 ambiguous recovery, 6 unreadable sketch, 7 sweep failures.
#[derive(Debug, Parser)]
#[command(name = "ssec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the sketch of a file and print its size breakdown.
    Sketch {
        input: PathBuf,
        #[command(flatten)]
        code: CodeArgs,
        /// Block label kind; `auto` compresses when the block geometry allows it.
        #[arg(long, value_enum, default_value_t = PhiArg::Auto)]
        phi: PhiArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Restore the original file from a corrupted copy and its sketch.
    Recover {
        corrupted: PathBuf,
        sketch: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply one random edit of at most k bits and print it.
    Corrupt {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sketch strings, apply every edit, and check recovery.
    Verify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        code: CodeArgs,
        /// Visit every string of length n (n <= 16).
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        /// Number of random dense strings.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = PhiArg::Auto)]
        phi: PhiArg,
        /// Also run the fallback decoder on every instance.
        #[arg(long)]
        compare_fallback: bool,
        /// Print JSON instead of key=value lines.
        #[arg(long)]
        json: bool,
    },
    /// Print sketch sizes in paper mode for n = 2^lo .. 2^hi.
    Stats {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Exponent range `LO:HI`.
        #[arg(long, default_value = "10:20")]
        n_range: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct CodeArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
    mode: ModeArg,
    /// Block length (scaled mode).
    #[arg(long)]
    blk: Option<usize>,
    /// Density bound (scaled mode).
    #[arg(long)]
    delta: Option<usize>,
    /// Width of the block labels (scaled mode).
    #[arg(long)]
    b_phi: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Paper,
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhiArg {
    Auto,
    Compressed,
    Reference,
}

impl CodeArgs {
    fn params(&self, n: usize) -> Result<CodeParams, CliError> {
        match self.mode {
            ModeArg::Paper => {
                if self.blk.is_some() || self.delta.is_some() || self.b_phi.is_some() {
                    return Err(CliError::Usage("--blk, --delta and --b-phi apply to scaled mode only".into()));
                }
                Ok(derive_params(self.k, n, Mode::Paper, None)?)
            }
            ModeArg::Scaled => {
                let (Some(blk), Some(delta), Some(b_phi)) = (self.blk, self.delta, self.b_phi) else {
                    return Err(CliError::Usage("scaled mode needs --blk, --delta and --b-phi".into()));
                };
                let o = Overrides::paper_weights(self.k, n, delta, blk, b_phi)?;
                Ok(derive_params(self.k, n, Mode::Scaled, Some(&o))?)
            }
        }
    }
}

fn phi_mode(arg: PhiArg, params: &CodeParams) -> PhiMode {
    match arg {
        PhiArg::Auto => default_phi_mode(params),
        PhiArg::Compressed => PhiMode::Compressed,
        PhiArg::Reference => PhiMode::Reference,
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn codec_error(e: CodecError) -> CliError {
    match e {
        CodecError::NotDense { .. } => CliError::NotDense(e),
        CodecError::Ambiguous { count } => CliError::Ambiguous(count),
        CodecError::Params(p) => CliError::Usage(p.to_string()),
        other => CliError::Decode(other.to_string()),
    }
}

fn report_lines(r: &RedundancyReport) -> String {
    format!(
        "n={}\nk={}\nh_bits={}\nvt_bits={}\nfsum_bits={}\nnpart_bits={}\nphi_width={}\nprime_bits={}\npsi_bits={}\ntotal_bits={}\nbaseline_bits={}\n",
        r.n, r.k, r.h_bits, r.vt_bits, r.fsum_bits, r.npart_bits, r.phi_width, r.prime_bits, r.psi_bits, r.total_bits, r.baseline_bits
    )
}

fn cmd_sketch(input: &Path, code: &CodeArgs, phi: PhiArg, out: &Path) -> Result<(), CliError> {
    let x = BitString::from_bytes(&read(input)?);
    let params = code.params(x.len())?;
    let sk = sketch_with(&x, &params, phi_mode(phi, &params)).map_err(codec_error)?;
    write(out, sk.to_text().as_bytes())?;
    let mut report = redundancy_report(&sk.params);
    // reference labels are sent unhashed, with no prime
    if sk.hash.mode == PhiMode::Reference {
        report.prime_bits = 0;
        report.total_bits = report.h_bits + report.psi_bits;
    }
    print!("{}", report_lines(&report));
    println!("phi_mode={}", format!("{:?}", sk.hash.mode).to_lowercase());
    Ok(())
}

/// Recovers from a byte file whose bit length is unknown: every length in
/// `[n − k, n + k]` that occupies exactly this many bytes with zero padding
/// is tried, and the verified results must agree.
fn cmd_recover(corrupted: &Path, sketch_path: &Path, out: &Path) -> Result<(), CliError> {
    let bytes = read(corrupted)?;
    let text = String::from_utf8(read(sketch_path)?)
        .map_err(|e| CliError::SketchParse { path: sketch_path.to_owned(), reason: e.to_string() })?;
    let sk: Sketch =
        text.parse().map_err(|e: ssec::codec::SketchParseError| CliError::SketchParse {
            path: sketch_path.to_owned(),
            reason: e.to_string(),
        })?;
    let (n, k) = (sk.params.n, sk.params.k);
    let full = BitString::from_bytes(&bytes);
    let mut found: Vec<BitString> = Vec::new();
    let mut last_error = None;
    for len in n.saturating_sub(k)..=n + k {
        if len.div_ceil(8) != bytes.len() || full.as_slice()[len..].iter().any(|&b| b) {
            continue;
        }
        let y = BitString::from_slice(&full.as_slice()[..len]);
        match recover(&y, &sk) {
            Ok(x) => {
                if !found.contains(&x) {
                    found.push(x);
                }
            }
            Err(CodecError::Ambiguous { count }) => return Err(CliError::Ambiguous(count)),
            Err(e) => last_error = Some(e),
        }
    }
    match found.len() {
        1 => write(out, &found[0].to_bytes()),
        0 => Err(last_error.map_or_else(
            || CliError::Decode(format!("{} bytes cannot hold {n}±{k} bits", bytes.len())),
            codec_error,
        )),
        count => Err(CliError::Ambiguous(count)),
    }
}

fn cmd_corrupt(input: &Path, k: usize, seed: u64, out: &Path) -> Result<(), CliError> {
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let x = BitString::from_bytes(&read(input)?);
    let (op, y) = sample_edit(&x, k, seed);
    write(out, &y.to_bytes())?;
    println!("pos={}\ndel={}\nins={}\nbits={}", op.pos, op.del_len, op.ins, y.len());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    n: usize,
    code: &CodeArgs,
    exhaustive: bool,
    samples: Option<usize>,
    seed: u64,
    phi: PhiArg,
    compare_fallback: bool,
    json: bool,
) -> Result<(), CliError> {
    let selection = match (exhaustive, samples) {
        (true, _) if n > 16 => return Err(CliError::Usage("--exhaustive is limited to n <= 16".into())),
        (true, _) => Selection::Exhaustive,
        (false, Some(count)) => Selection::Samples { count, seed },
        (false, None) => return Err(CliError::Usage("pass --exhaustive or --samples".into())),
    };
    let params = code.params(n)?;
    let config = SweepConfig { phi_mode: phi_mode(phi, &params), params, selection, compare_fallback };
    let report = run_sweep(&config);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", report.to_lines());
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

fn cmd_stats(k: usize, n_range: &str, json: bool) -> Result<(), CliError> {
    let bad = || CliError::Usage(format!("--n-range expects LO:HI exponents, got `{n_range}`"));
    let (lo, hi) = n_range.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (u32, u32) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    if lo > hi || hi > 40 {
        return Err(bad());
    }
    let mut rows = Vec::new();
    for e in lo..=hi {
        rows.push(redundancy_report(&derive_params(k, 1usize << e, Mode::Paper, None)?));
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
        return Ok(());
    }
    println!("n\th_bits\tphi_width\tpsi_bits\tprime_bits\ttotal_bits\tbaseline_bits");
    for r in &rows {
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.n, r.h_bits, r.phi_width, r.psi_bits, r.prime_bits, r.total_bits, r.baseline_bits
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sketch { input, code, phi, out } => cmd_sketch(&input, &code, phi, &out),
        Command::Recover { corrupted, sketch, out } => cmd_recover(&corrupted, &sketch, &out),
        Command::Corrupt { input, k, seed, out } => cmd_corrupt(&input, k, seed, &out),
        Command::Verify { n, code, exhaustive, samples, seed, phi, compare_fallback, json } => {
            cmd_verify(n, &code, exhaustive, samples, seed, phi, compare_fallback, json)
        }
        Command::Stats { k, n_range, json } => cmd_stats(k, &n_range, json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ssec: {e}");
            ExitCode::from(e.code())
        }
    }
}
