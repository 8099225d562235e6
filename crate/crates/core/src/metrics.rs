//! Distortion and robustness measures.

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::signal::IntSignal;
use crate::watermark::BitString;
use crate::{Error, Result};

/// Signal-to-noise ratio; both fields are `+inf` when the signals match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snr {
    pub linear: f64,
    pub db: f64,
}

impl Snr {
    pub fn is_infinite(&self) -> bool {
        self.linear.is_infinite()
    }
}

fn check_pair(a: &IntSignal, b: &IntSignal) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.scale() != b.scale() {
        return Err(Error::IncompatibleSignals);
    }
    Ok(())
}

/// `P_sig / P_no` with `P_sig = sum(x^2) / N` over `original` and
/// `P_no = sum((x - y)^2) / N`.
///
/// The power sums are exact integers; the common `N` and any common factor
/// cancel before the single floating-point division, so scaling both signals
/// by the same integer gives the same result.
pub fn snr(original: &IntSignal, watermarked: &IntSignal) -> Result<Snr> {
    check_pair(original, watermarked)?;
    let mut signal_power: u128 = 0;
    let mut noise_power: u128 = 0;
    for (&x, &y) in original.samples().iter().zip(watermarked.samples()) {
        let x = i128::from(x);
        let e = x - i128::from(y);
        signal_power += (x * x) as u128;
        noise_power += (e * e) as u128;
    }
    if signal_power == 0 {
        return Err(Error::ZeroSignal);
    }
    if noise_power == 0 {
        return Ok(Snr {
            linear: f64::INFINITY,
            db: f64::INFINITY,
        });
    }
    let g = signal_power.gcd(&noise_power);
    let linear = (signal_power / g) as f64 / (noise_power / g) as f64;
    Ok(Snr {
        linear,
        db: 10.0 * linear.log10(),
    })
}

/// Fraction of positions where the two bit strings differ.
pub fn ber(reference: &BitString, received: &BitString) -> Result<f64> {
    if reference.len() != received.len() {
        return Err(Error::LengthMismatch {
            expected: reference.len(),
            actual: received.len(),
        });
    }
    if reference.is_empty() {
        return Err(Error::EmptyBits);
    }
    let errors = reference
        .iter()
        .zip(received.iter())
        .filter(|(a, b)| a != b)
        .count();
    Ok(errors as f64 / reference.len() as f64)
}

/// Largest per-sample absolute difference, in quantized units.
pub fn max_abs_error(original: &IntSignal, watermarked: &IntSignal) -> Result<u64> {
    check_pair(original, watermarked)?;
    Ok(original
        .samples()
        .iter()
        .zip(watermarked.samples())
        .map(|(&x, &y)| (i64::from(x) - i64::from(y)).unsigned_abs())
        .max()
        .unwrap_or(0))
}

/// Serializes a real, writing infinities as the string `"inf"` (or `"-inf"`).
pub fn serialize_real<S: Serializer>(
    x: &f64,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() {
        serializer.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        serializer.serialize_f64(*x)
    }
}

pub fn serialize_opt_real<S: Serializer>(
    x: &Option<f64>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => serialize_real(x, serializer),
        None => serializer.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    #[serde(serialize_with = "serialize_real")]
    pub snr_linear: f64,
    #[serde(serialize_with = "serialize_real")]
    pub snr_db: f64,
    pub ber: f64,
    pub max_abs_error: u64,
}

impl MetricsReport {
    pub fn compute(
        original: &IntSignal,
        watermarked: &IntSignal,
        reference_bits: &BitString,
        extracted_bits: &BitString,
    ) -> Result<Self> {
        let snr = snr(original, watermarked)?;
        Ok(Self {
            snr_linear: snr.linear,
            snr_db: snr.db,
            ber: ber(reference_bits, extracted_bits)?,
            max_abs_error: max_abs_error(original, watermarked)?,
        })
    }
}
