//! Line-based signal files.
//!
//! ```text
//! #WMEOG 1
//! #rate 250
//! #scale 1000000            quantized files only
//! #region 0 128             watermarked files only
//! #bits 64                  watermarked files only
//! #detector 2 0.2           watermarked files only
//! <one sample per line>
//! ```
//!
//! Plain files hold decimal reals, quantized files decimal integers. A file
//! that does not start with `#` is read as a bare column of real samples and
//! needs the sample rate from the caller. Blank lines are ignored.

use std::fmt::Write as _;

use crate::features::BlinkDetectorConfig;
use crate::signal::{IntSignal, Region, Signal};
use crate::{Error, Result};

pub const MAGIC: &str = "#WMEOG 1";

/// Embedding parameters recorded alongside a watermarked signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WatermarkHeader {
    pub region: Region,
    pub bits: usize,
    pub detector: BlinkDetectorConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignalFile {
    Plain(Signal),
    Quantized {
        signal: IntSignal,
        watermark: Option<WatermarkHeader>,
    },
}

impl SignalFile {
    pub fn sample_rate(&self) -> f64 {
        match self {
            SignalFile::Plain(s) => s.sample_rate(),
            SignalFile::Quantized { signal, .. } => signal.sample_rate(),
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_field<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| err(line, format!("invalid #{key} value {value:?}")))
}

#[derive(Default)]
struct Header {
    rate: Option<f64>,
    scale: Option<u32>,
    region: Option<(usize, usize)>,
    bits: Option<usize>,
    detector: Option<(f64, f64)>,
}

impl Header {
    fn apply(&mut self, line: usize, text: &str) -> Result<()> {
        let mut parts = text[1..].split_whitespace();
        let key = parts.next().unwrap_or("");
        let values: Vec<&str> = parts.collect();
        let expect = |n: usize| {
            if values.len() == n {
                Ok(())
            } else {
                Err(err(line, format!("#{key} takes {n} value(s)")))
            }
        };
        let duplicate = || err(line, format!("duplicate #{key}"));
        match key {
            "rate" => {
                expect(1)?;
                if self
                    .rate
                    .replace(parse_field(line, key, values[0])?)
                    .is_some()
                {
                    return Err(duplicate());
                }
            }
            "scale" => {
                expect(1)?;
                if self
                    .scale
                    .replace(parse_field(line, key, values[0])?)
                    .is_some()
                {
                    return Err(duplicate());
                }
            }
            "region" => {
                expect(2)?;
                let region = (
                    parse_field(line, key, values[0])?,
                    parse_field(line, key, values[1])?,
                );
                if self.region.replace(region).is_some() {
                    return Err(duplicate());
                }
            }
            "bits" => {
                expect(1)?;
                if self
                    .bits
                    .replace(parse_field(line, key, values[0])?)
                    .is_some()
                {
                    return Err(duplicate());
                }
            }
            "detector" => {
                expect(2)?;
                let detector = (
                    parse_field(line, key, values[0])?,
                    parse_field(line, key, values[1])?,
                );
                if self.detector.replace(detector).is_some() {
                    return Err(duplicate());
                }
            }
            _ => return Err(err(line, format!("unknown header {text:?}"))),
        }
        Ok(())
    }
}

/// Parses a signal file. `rate_override`, when given, replaces the `#rate`
/// header and is required for bare sample columns.
pub fn parse(text: &str, rate_override: Option<f64>) -> Result<SignalFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    let mut header = Header::default();
    let mut last_line = 0;
    match lines.peek() {
        None => return Err(Error::EmptySignal),
        Some(&(n, l)) if l.starts_with('#') => {
            if l != MAGIC {
                return Err(err(n, format!("expected {MAGIC:?}")));
            }
            lines.next();
            last_line = n;
            while let Some(&(n, l)) = lines.peek() {
                if !l.starts_with('#') {
                    break;
                }
                header.apply(n, l)?;
                lines.next();
                last_line = n;
            }
        }
        Some(_) => {}
    }

    let rate = rate_override
        .or(header.rate)
        .ok_or_else(|| err(1, "missing sample rate (#rate header or --rate)"))?;

    let watermark = match (header.region, header.bits, header.detector) {
        (None, None, None) => None,
        (Some((offset, length)), Some(bits), Some((k, refractory))) => {
            let region = Region::new(offset, length).map_err(|e| err(1, e.to_string()))?;
            if bits != region.pairs() {
                return Err(err(
                    1,
                    format!("#bits {bits} does not match region of {length} samples"),
                ));
            }
            let detector =
                BlinkDetectorConfig::new(k, refractory).map_err(|e| err(1, e.to_string()))?;
            Some(WatermarkHeader {
                region,
                bits,
                detector,
            })
        }
        _ => {
            return Err(err(
                1,
                "watermarked files need #region, #bits and #detector",
            ))
        }
    };

    match header.scale {
        None => {
            if watermark.is_some() {
                return Err(err(1, "watermarked files need #scale"));
            }
            let samples = lines
                .map(|(n, l)| {
                    let x: f64 = l
                        .parse()
                        .map_err(|_| err(n, format!("invalid sample {l:?}")))?;
                    if x.is_finite() {
                        Ok(x)
                    } else {
                        Err(err(n, format!("non-finite sample {l:?}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SignalFile::Plain(Signal::new(samples, rate)?))
        }
        Some(scale) => {
            let mut samples = Vec::new();
            for (n, l) in lines {
                samples.push(
                    l.parse::<i32>()
                        .map_err(|_| err(n, format!("invalid integer sample {l:?}")))?,
                );
                last_line = n;
            }
            if let Some(w) = &watermark {
                if w.region.end() > samples.len() {
                    return Err(err(
                        last_line + 1,
                        format!(
                            "file ends after {} samples but region needs {}",
                            samples.len(),
                            w.region.end()
                        ),
                    ));
                }
            }
            let signal = IntSignal::new(samples, scale, rate)?;
            Ok(SignalFile::Quantized { signal, watermark })
        }
    }
}

pub fn write_plain(signal: &Signal) -> String {
    let mut out = format!("{MAGIC}\n#rate {}\n", signal.sample_rate());
    for x in signal.samples() {
        // Shortest representation that parses back to the same f64.
        writeln!(out, "{x:?}").unwrap();
    }
    out
}

pub fn write_quantized(signal: &IntSignal, watermark: Option<&WatermarkHeader>) -> String {
    let mut out = format!(
        "{MAGIC}\n#rate {}\n#scale {}\n",
        signal.sample_rate(),
        signal.scale()
    );
    if let Some(w) = watermark {
        writeln!(out, "#region {} {}", w.region.offset(), w.region.length()).unwrap();
        writeln!(out, "#bits {}", w.bits).unwrap();
        writeln!(
            out,
            "#detector {} {}",
            w.detector.threshold_sigmas(),
            w.detector.refractory()
        )
        .unwrap();
    }
    for q in signal.samples() {
        writeln!(out, "{q}").unwrap();
    }
    out
}
