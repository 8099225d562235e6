//! The embed / extract / verify workflow.
//!
//! When no explicit watermark is given, the payload is generated from the
//! blink statistics of the *quantized* carrier (dequantized back to volts).
//! Extraction restores exactly that carrier, so recomputing the statistics
//! on the receiving side reproduces the payload bit for bit.

use serde::Serialize;

use crate::de::{embed_region, extract_region};
use crate::features::{blink_stats, detect_blinks, BlinkDetectorConfig, BlinkStats, FeatureSet};
use crate::format::WatermarkHeader;
use crate::metrics::{self, serialize_opt_real};
use crate::signal::{dequantize, IntSignal, Region, Signal};
use crate::watermark::{pack, unpack, verify as payload_matches, BitString, WatermarkPayload};
use crate::{Error, Result};

/// Features and blink statistics of one signal, as emitted by `features`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureReport {
    pub sample_rate: f64,
    pub n_samples: usize,
    #[serde(flatten)]
    pub features: FeatureSet,
    pub peak_time: f64,
    pub valley_time: f64,
    pub blink_times: Vec<f64>,
    pub blink_count: usize,
    pub intervals: Option<Vec<f64>>,
    pub mean_frequency: Option<f64>,
    pub blinks_per_interval: Option<f64>,
    pub mean_interval: Option<f64>,
}

impl FeatureReport {
    /// Scalar features are always filled in; blink statistics are `None`
    /// when fewer than two blinks were found, and that error is returned
    /// alongside.
    pub fn compute(signal: &Signal, cfg: &BlinkDetectorConfig) -> (Self, Option<Error>) {
        let features = FeatureSet::compute(signal);
        let blink_times = detect_blinks(signal, cfg);
        let stats = blink_stats(&blink_times);
        let rate = signal.sample_rate();
        let mut report = Self {
            sample_rate: rate,
            n_samples: signal.len(),
            features,
            peak_time: features.peak_index as f64 / rate,
            valley_time: features.valley_index as f64 / rate,
            blink_count: blink_times.len(),
            blink_times,
            intervals: None,
            mean_frequency: None,
            blinks_per_interval: None,
            mean_interval: None,
        };
        match stats {
            Ok(s) => {
                report.intervals = Some(s.intervals);
                report.mean_frequency = Some(s.mean_frequency);
                report.blinks_per_interval = Some(s.blinks_per_interval);
                report.mean_interval = Some(s.mean_interval);
                (report, None)
            }
            Err(e) => (report, Some(e)),
        }
    }
}

/// Blink statistics of a quantized signal, measured in volts.
pub fn quantized_blink_stats(signal: &IntSignal, cfg: &BlinkDetectorConfig) -> Result<BlinkStats> {
    let volts = dequantize(signal);
    blink_stats(&detect_blinks(&volts, cfg))
}

/// The payload a sender derives from its own carrier.
pub fn self_payload(signal: &IntSignal, cfg: &BlinkDetectorConfig) -> Result<WatermarkPayload> {
    WatermarkPayload::from_stats(&quantized_blink_stats(signal, cfg)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedded {
    pub watermarked: IntSignal,
    pub header: WatermarkHeader,
    pub bits: BitString,
}

/// Embeds `bits`, or the self-generated 64-bit payload when `bits` is `None`.
pub fn embed(
    carrier: &IntSignal,
    region: Region,
    bits: Option<BitString>,
    detector: BlinkDetectorConfig,
) -> Result<Embedded> {
    region.check(carrier.len())?;
    let bits = match bits {
        Some(b) => b,
        None => pack(&self_payload(carrier, &detector)?)?,
    };
    let watermarked = embed_region(carrier, region, &bits)?;
    Ok(Embedded {
        watermarked,
        header: WatermarkHeader {
            region,
            bits: bits.len(),
            detector,
        },
        bits,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extracted {
    pub restored: IntSignal,
    pub bits: BitString,
    /// Decoded payload when the watermark is 64 bits long.
    pub payload: Option<WatermarkPayload>,
}

pub fn extract(watermarked: &IntSignal, header: &WatermarkHeader) -> Result<Extracted> {
    let (restored, bits) = extract_region(watermarked, header.region)?;
    let payload = unpack(&bits).ok();
    Ok(Extracted {
        restored,
        bits,
        payload,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractReport {
    pub bits: BitString,
    pub extracted_payload: Option<WatermarkPayload>,
}

impl From<&Extracted> for ExtractReport {
    fn from(e: &Extracted) -> Self {
        Self {
            bits: e.bits.clone(),
            extracted_payload: e.payload,
        }
    }
}

/// Outcome of checking a watermarked signal on the receiving side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub bits: BitString,
    pub extracted_payload: Option<WatermarkPayload>,
    pub recomputed_payload: Option<WatermarkPayload>,
    pub payload_match: bool,
    /// BER between the extracted bits and the bits packed from the
    /// recomputed payload.
    pub ber: Option<f64>,
    /// SNR of the restored signal against the watermarked one.
    #[serde(serialize_with = "serialize_opt_real")]
    pub snr_db: Option<f64>,
    /// Restored signal equals the supplied original; `None` without one.
    pub restored_identical: Option<bool>,
}

impl VerificationReport {
    /// Payload matches, BER is zero and the restored signal does not
    /// contradict a supplied original.
    pub fn passed(&self) -> bool {
        self.payload_match && self.ber == Some(0.0) && self.restored_identical != Some(false)
    }
}

pub fn verify(
    watermarked: &IntSignal,
    header: &WatermarkHeader,
    original: Option<&IntSignal>,
) -> Result<VerificationReport> {
    let extracted = extract(watermarked, header)?;
    let recomputed = self_payload(&extracted.restored, &header.detector).ok();

    let payload_match = match (&extracted.payload, &recomputed) {
        (Some(e), Some(r)) => payload_matches(e, r),
        _ => false,
    };
    let ber = recomputed
        .as_ref()
        .and_then(|r| pack(r).ok())
        .and_then(|reference| metrics::ber(&reference, &extracted.bits).ok());
    let snr_db = metrics::snr(&extracted.restored, watermarked)
        .ok()
        .map(|s| s.db);
    let restored_identical = original.map(|o| o.samples() == extracted.restored.samples());

    Ok(VerificationReport {
        bits: extracted.bits,
        extracted_payload: extracted.payload,
        recomputed_payload: recomputed,
        payload_match,
        ber,
        snr_db,
        restored_identical,
    })
}
