//! Signal representations and the real/integer bridge.
//!
//! Difference expansion is an integer transform, so the codec only ever sees
//! [`IntSignal`]. Real-valued [`Signal`]s are mapped onto integers with a fixed
//! scale (integer units per volt) and round-half-away-from-zero.

use crate::{Error, Result};

/// Default quantization scale: one integer unit per microvolt.
pub const DEFAULT_SCALE: u32 = 1_000_000;

/// Default embedding region length (64 pairs, one 64-bit watermark).
pub const DEFAULT_REGION_LENGTH: usize = 128;

fn check_rate(sample_rate: f64) -> Result<()> {
    if sample_rate.is_finite() && sample_rate > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSampleRate(sample_rate.to_string()))
    }
}

/// Real-valued samples (volts) with a sample rate in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        check_rate(sample_rate)?;
        if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration covered by the samples, `len / sample_rate`.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }
}

/// Integer units per volt. Rounding is always half-away-from-zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantizationSpec {
    scale: u32,
}

impl QuantizationSpec {
    pub fn new(scale: u32) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidScale);
        }
        Ok(Self { scale })
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }
}

impl Default for QuantizationSpec {
    fn default() -> Self {
        Self {
            scale: DEFAULT_SCALE,
        }
    }
}

/// Integer samples in the signed 32-bit domain plus the scale that maps them
/// back to volts.
#[derive(Debug, Clone, PartialEq)]
pub struct IntSignal {
    samples: Vec<i32>,
    scale: u32,
    sample_rate: f64,
}

impl IntSignal {
    pub fn new(samples: Vec<i32>, scale: u32, sample_rate: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if scale == 0 {
            return Err(Error::InvalidScale);
        }
        check_rate(sample_rate)?;
        Ok(Self {
            samples,
            scale,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[i32] {
        &self.samples
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Same scale and sample rate.
    pub(crate) fn compatible_with(&self, other: &IntSignal) -> bool {
        self.scale == other.scale && self.sample_rate == other.sample_rate
    }

    /// Replaces the samples, keeping scale and rate.
    pub(crate) fn with_samples(&self, samples: Vec<i32>) -> IntSignal {
        IntSignal {
            samples,
            scale: self.scale,
            sample_rate: self.sample_rate,
        }
    }
}

/// A contiguous run of samples `[offset, offset + length)` with even length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    offset: usize,
    length: usize,
}

impl Region {
    pub fn new(offset: usize, length: usize) -> Result<Self> {
        if length == 0 || !length.is_multiple_of(2) {
            return Err(Error::InvalidRegionLength(length));
        }
        Ok(Self { offset, length })
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Number of disjoint sample pairs, i.e. the embedding capacity in bits.
    pub fn pairs(&self) -> usize {
        self.length / 2
    }

    pub fn end(&self) -> usize {
        self.offset + self.length
    }

    pub fn contains(&self, index: usize) -> bool {
        index >= self.offset && index < self.end()
    }

    /// Fails unless the region fits inside a signal of `signal_len` samples.
    pub fn check(&self, signal_len: usize) -> Result<()> {
        match self.offset.checked_add(self.length) {
            Some(end) if end <= signal_len => Ok(()),
            _ => Err(Error::RegionOutOfBounds {
                offset: self.offset,
                length: self.length,
                signal_len,
            }),
        }
    }
}

impl Default for Region {
    fn default() -> Self {
        Self {
            offset: 0,
            length: DEFAULT_REGION_LENGTH,
        }
    }
}

pub fn quantize(signal: &Signal, spec: QuantizationSpec) -> Result<IntSignal> {
    let scale = f64::from(spec.scale);
    let samples = signal
        .samples
        .iter()
        .enumerate()
        .map(|(index, &x)| {
            // f64::round is half-away-from-zero.
            let q = (x * scale).round();
            if q < f64::from(i32::MIN) || q > f64::from(i32::MAX) {
                Err(Error::RangeOverflow {
                    index,
                    scale: spec.scale,
                })
            } else {
                Ok(q as i32)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntSignal {
        samples,
        scale: spec.scale,
        sample_rate: signal.sample_rate,
    })
}

pub fn dequantize(int_signal: &IntSignal) -> Signal {
    let scale = f64::from(int_signal.scale);
    Signal {
        samples: int_signal
            .samples
            .iter()
            .map(|&q| f64::from(q) / scale)
            .collect(),
        sample_rate: int_signal.sample_rate,
    }
}

pub fn crop(int_signal: &IntSignal, region: Region) -> Result<IntSignal> {
    region.check(int_signal.len())?;
    Ok(int_signal.with_samples(int_signal.samples[region.offset..region.end()].to_vec()))
}

pub fn merge(carrier: &IntSignal, region: Region, replacement: &IntSignal) -> Result<IntSignal> {
    region.check(carrier.len())?;
    if replacement.len() != region.length {
        return Err(Error::LengthMismatch {
            expected: region.length,
            actual: replacement.len(),
        });
    }
    if !carrier.compatible_with(replacement) {
        return Err(Error::IncompatibleSignals);
    }
    let mut samples = carrier.samples.clone();
    samples[region.offset..region.end()].copy_from_slice(&replacement.samples);
    Ok(carrier.with_samples(samples))
}
