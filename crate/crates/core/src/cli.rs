//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failed under `--strict`, 2 input or
//! parse error, 3 codec error (expansion overflow or capacity mismatch).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::features::BlinkDetectorConfig;
use crate::format::{self, SignalFile, WatermarkHeader};
use crate::metrics::MetricsReport;
use crate::pipeline::{self, ExtractReport, FeatureReport};
use crate::signal::{
    dequantize, quantize, IntSignal, QuantizationSpec, Region, Signal, DEFAULT_SCALE,
};
use crate::watermark::{pack, BitString};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CODEC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "eogmark",
    version,
    about = "Reversible blink-statistics watermarking for EOG signals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct DetectorArgs {
    /// Blink threshold in standard deviations above the mean.
    #[arg(long, default_value_t = BlinkDetectorConfig::DEFAULT_THRESHOLD_SIGMAS)]
    pub k: f64,
    /// Minimum time between blinks, seconds.
    #[arg(long, default_value_t = BlinkDetectorConfig::DEFAULT_REFRACTORY)]
    pub refractory: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print time-domain features and blink statistics as JSON.
    Features {
        input: PathBuf,
        /// Sample rate in Hz; overrides the file header.
        #[arg(long)]
        rate: Option<f64>,
        #[command(flatten)]
        detector: DetectorArgs,
    },
    /// Quantize a signal and embed a watermark into one region.
    Embed {
        input: PathBuf,
        #[arg(long)]
        rate: Option<f64>,
        /// Integer units per volt, used when the input holds real samples.
        #[arg(long, default_value_t = DEFAULT_SCALE)]
        scale: u32,
        #[arg(long, default_value_t = 0)]
        offset: usize,
        #[arg(long, default_value_t = crate::signal::DEFAULT_REGION_LENGTH)]
        length: usize,
        /// Explicit watermark ('0'/'1', spaces allowed). Defaults to the
        /// 64-bit blink-statistics payload of the input.
        #[arg(long)]
        bits: Option<String>,
        #[command(flatten)]
        detector: DetectorArgs,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the watermark and optionally write the restored signal.
    Extract {
        input: PathBuf,
        /// Where to write the restored quantized signal.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract, restore, recompute the payload and compare.
    Verify {
        input: PathBuf,
        /// Archived original (quantized) to compare the restored signal with.
        #[arg(long)]
        original: Option<PathBuf>,
        /// Exit with status 1 unless verification passes.
        #[arg(long)]
        strict: bool,
    },
    /// SNR, BER and maximum absolute error of a watermarked file.
    Metrics {
        original: PathBuf,
        watermarked: PathBuf,
        #[arg(long)]
        rate: Option<f64>,
        /// Scale used when the original holds real samples; defaults to the
        /// watermarked file's scale.
        #[arg(long)]
        scale: Option<u32>,
        /// Reference watermark; defaults to the payload of the original.
        #[arg(long)]
        bits: Option<String>,
    },
}

/// A failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapacityMismatch { .. } | Error::ExpansionOverflow { .. } => EXIT_CODEC,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn read_file(path: &Path, rate: Option<f64>) -> std::result::Result<SignalFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
    format::parse(&text, rate).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn write_output(
    path: Option<&Path>,
    text: &str,
    stdout: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
    .map_err(|e| input_failure(format!("write failed: {e}")))
}

fn watermarked_file(path: &Path) -> std::result::Result<(IntSignal, WatermarkHeader), Failure> {
    match read_file(path, None)? {
        SignalFile::Quantized {
            signal,
            watermark: Some(header),
        } => Ok((signal, header)),
        _ => Err(input_failure(format!(
            "{}: not a watermarked file (missing #scale/#region/#bits/#detector)",
            path.display()
        ))),
    }
}

fn to_quantized(file: SignalFile, scale: u32) -> std::result::Result<IntSignal, Failure> {
    match file {
        SignalFile::Plain(s) => Ok(quantize(&s, QuantizationSpec::new(scale)?)?),
        SignalFile::Quantized { signal, .. } => Ok(signal),
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn detector(args: &DetectorArgs) -> std::result::Result<BlinkDetectorConfig, Failure> {
    Ok(BlinkDetectorConfig::new(args.k, args.refractory)?)
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    match cli.command {
        Command::Features {
            input,
            rate,
            detector: det,
        } => {
            let cfg = detector(&det)?;
            let signal: Signal = match read_file(&input, rate)? {
                SignalFile::Plain(s) => s,
                SignalFile::Quantized { signal, .. } => dequantize(&signal),
            };
            let (report, err) = FeatureReport::compute(&signal, &cfg);
            write_output(None, &json_line(&report), stdout)?;
            match err {
                None => Ok(EXIT_OK),
                Some(e) => Err(e.into()),
            }
        }
        Command::Embed {
            input,
            rate,
            scale,
            offset,
            length,
            bits,
            detector: det,
            out,
        } => {
            let cfg = detector(&det)?;
            let region = Region::new(offset, length)?;
            let bits = bits.map(|b| b.parse::<BitString>()).transpose()?;
            let carrier = match read_file(&input, rate)? {
                SignalFile::Quantized {
                    watermark: Some(_), ..
                } => {
                    return Err(input_failure(format!(
                        "{}: input already carries a watermark",
                        input.display()
                    )))
                }
                other => to_quantized(other, scale)?,
            };
            let embedded = pipeline::embed(&carrier, region, bits, cfg)?;
            let text = format::write_quantized(&embedded.watermarked, Some(&embedded.header));
            write_output(out.as_deref(), &text, stdout)?;
            if out.is_some() {
                writeln!(
                    stderr,
                    "embedded {} bits: {}",
                    embedded.bits.len(),
                    embedded.bits
                )
                .ok();
            }
            Ok(EXIT_OK)
        }
        Command::Extract { input, out } => {
            let (signal, header) = watermarked_file(&input)?;
            let extracted = pipeline::extract(&signal, &header)?;
            if let Some(path) = out.as_deref() {
                write_output(
                    Some(path),
                    &format::write_quantized(&extracted.restored, None),
                    stdout,
                )?;
            }
            write_output(None, &json_line(&ExtractReport::from(&extracted)), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            input,
            original,
            strict,
        } => {
            let (signal, header) = watermarked_file(&input)?;
            let original = original
                .map(|p| to_quantized(read_file(&p, Some(signal.sample_rate()))?, signal.scale()))
                .transpose()?;
            let report = pipeline::verify(&signal, &header, original.as_ref())?;
            write_output(None, &json_line(&report), stdout)?;
            if strict && !report.passed() {
                Ok(EXIT_MISMATCH)
            } else {
                Ok(EXIT_OK)
            }
        }
        Command::Metrics {
            original,
            watermarked,
            rate,
            scale,
            bits,
        } => {
            let (marked, header) = watermarked_file(&watermarked)?;
            let original = to_quantized(
                read_file(&original, rate.or(Some(marked.sample_rate())))?,
                scale.unwrap_or(marked.scale()),
            )?;
            let extracted = pipeline::extract(&marked, &header)?;
            let reference = match bits {
                Some(b) => b.parse::<BitString>()?,
                None => pack(&pipeline::self_payload(&original, &header.detector)?)?,
            };
            let report = MetricsReport::compute(&original, &marked, &reference, &extracted.bits)?;
            write_output(None, &json_line(&report), stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// to the given streams. Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if e.use_stderr() {
                write!(stderr, "{e}").ok();
            } else {
                write!(stdout, "{e}").ok();
            }
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            writeln!(stderr, "error: {}", f.message).ok();
            f.code
        }
    }
}
