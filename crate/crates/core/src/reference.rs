//! Published values from the original clinical EOG recording.
//!
//! That recording and its blink-detection procedure are not available, so
//! these numbers cannot be recomputed here. They are kept for comparison only.
//! The blink statistics are exact inputs to the watermark codec and come with
//! their binary32 bit patterns.

/// Mean of the recording.
pub const SIGNAL_MEAN: f64 = 36.1163;
/// Standard deviation of the recording.
pub const SIGNAL_STD_DEV: f64 = 9.8547;

/// Peak/valley rows as published. The amplitude and position entries of the
/// second and third rows look transposed (a position of 353 and an amplitude
/// of -3.7076e-5 would be coherent).
pub const PEAK_AMPLITUDE: f64 = 4.9698e-5;
pub const VALLEY_AMPLITUDE_AS_PUBLISHED: f64 = 353.0;
pub const PEAK_POSITION_AS_PUBLISHED: f64 = -3.7076e-5;
pub const VALLEY_POSITION: f64 = 53.0;
pub const AREA_UNDER_CURVE: f64 = 0.0058;
pub const VARIANCE: f64 = 9.6983e-11;

/// Mean blink frequency, Hz.
pub const MEAN_BLINK_FREQUENCY: f64 = 0.3911;
/// Mean blink interval.
pub const MEAN_BLINK_INTERVAL: f64 = 0.3730;

pub const MEAN_BLINK_FREQUENCY_BITS: &str = "00111110 11001000 00111110 01000010";
pub const MEAN_BLINK_INTERVAL_BITS: &str = "00111110 10111110 11111001 11011011";
/// The 64-bit watermark built from the two statistics above.
pub const WATERMARK_BITS: &str =
    "00111110 11001000 00111110 01000010 00111110 10111110 11111001 11011011";

/// SNR between original and watermarked recording. Whether this is a linear
/// ratio or decibels is not stated.
pub const SNR: f64 = 33.0385;
