//! Time-domain features and blink statistics.
//!
//! All statistics are population statistics (divisor `N`). Peak and valley
//! positions are 0-based sample indices; ties go to the first occurrence.

use serde::Serialize;

use crate::signal::Signal;
use crate::{Error, Result};

/// Scalar time-domain features of a signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeatureSet {
    pub mav: f64,
    pub std_dev: f64,
    pub variance: f64,
    pub auc: f64,
    pub peak_value: f64,
    pub peak_index: usize,
    pub valley_value: f64,
    pub valley_index: usize,
}

impl FeatureSet {
    pub fn compute(signal: &Signal) -> Self {
        let (peak_value, peak_index) = peak(signal);
        let (valley_value, valley_index) = valley(signal);
        let variance = variance(signal);
        Self {
            mav: mav(signal),
            std_dev: variance.sqrt(),
            variance,
            auc: auc(signal),
            peak_value,
            peak_index,
            valley_value,
            valley_index,
        }
    }
}

/// Mean absolute value, `auc / N`.
pub fn mav(signal: &Signal) -> f64 {
    auc(signal) / signal.len() as f64
}

/// Area under the curve: sum of absolute sample values.
pub fn auc(signal: &Signal) -> f64 {
    signal.samples().iter().map(|x| x.abs()).sum()
}

pub fn mean(signal: &Signal) -> f64 {
    signal.samples().iter().sum::<f64>() / signal.len() as f64
}

/// Population variance, accumulated in a single pass (Welford).
pub fn variance(signal: &Signal) -> f64 {
    let (_, m2) =
        signal
            .samples()
            .iter()
            .enumerate()
            .fold((0.0f64, 0.0f64), |(mean, m2), (i, &x)| {
                let delta = x - mean;
                let mean = mean + delta / (i + 1) as f64;
                (mean, m2 + delta * (x - mean))
            });
    (m2 / signal.len() as f64).max(0.0)
}

pub fn std_dev(signal: &Signal) -> f64 {
    variance(signal).sqrt()
}

/// Global maximum and the index of its first occurrence.
pub fn peak(signal: &Signal) -> (f64, usize) {
    extremum(signal, |candidate, best| candidate > best)
}

/// Global minimum and the index of its first occurrence.
pub fn valley(signal: &Signal) -> (f64, usize) {
    extremum(signal, |candidate, best| candidate < best)
}

fn extremum(signal: &Signal, better: impl Fn(f64, f64) -> bool) -> (f64, usize) {
    let samples = signal.samples();
    samples
        .iter()
        .enumerate()
        .skip(1)
        .fold((samples[0], 0), |(best, at), (i, &x)| {
            if better(x, best) {
                (x, i)
            } else {
                (best, at)
            }
        })
}

/// Threshold-and-refractory blink detector settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlinkDetectorConfig {
    threshold_sigmas: f64,
    refractory: f64,
}

impl BlinkDetectorConfig {
    pub const DEFAULT_THRESHOLD_SIGMAS: f64 = 2.0;
    pub const DEFAULT_REFRACTORY: f64 = 0.2;

    /// `threshold_sigmas` is `k` in `mean + k * std_dev`; `refractory` is in
    /// seconds.
    pub fn new(threshold_sigmas: f64, refractory: f64) -> Result<Self> {
        if !(threshold_sigmas.is_finite() && threshold_sigmas > 0.0)
            || !(refractory.is_finite() && refractory >= 0.0)
        {
            return Err(Error::InvalidDetectorConfig);
        }
        Ok(Self {
            threshold_sigmas,
            refractory,
        })
    }

    pub fn threshold_sigmas(&self) -> f64 {
        self.threshold_sigmas
    }

    pub fn refractory(&self) -> f64 {
        self.refractory
    }
}

impl Default for BlinkDetectorConfig {
    fn default() -> Self {
        Self {
            threshold_sigmas: Self::DEFAULT_THRESHOLD_SIGMAS,
            refractory: Self::DEFAULT_REFRACTORY,
        }
    }
}

/// Blink apex times in seconds.
///
/// Sample `i` is an apex when it exceeds `mean + k * std_dev`, is a local
/// maximum with at least one strict side (`x[i-1] <= x[i] >= x[i+1]`), and
/// lies at least `refractory` seconds after the previously accepted apex.
/// The first and last samples have only one neighbour and are never apices.
pub fn detect_blinks(signal: &Signal, cfg: &BlinkDetectorConfig) -> Vec<f64> {
    let x = signal.samples();
    let rate = signal.sample_rate();
    let threshold = mean(signal) + cfg.threshold_sigmas * std_dev(signal);

    let mut times: Vec<f64> = Vec::new();
    for i in 1..x.len().saturating_sub(1) {
        let (prev, here, next) = (x[i - 1], x[i], x[i + 1]);
        let local_max = prev <= here && here >= next && (prev < here || here > next);
        if !local_max || here <= threshold {
            continue;
        }
        let t = i as f64 / rate;
        if times.last().is_none_or(|&last| t - last >= cfg.refractory) {
            times.push(t);
        }
    }
    times
}

/// Blink timing statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlinkStats {
    pub blink_times: Vec<f64>,
    /// `T_i = t_{i+1} - t_i`, seconds.
    pub intervals: Vec<f64>,
    /// Mean of the per-interval frequencies `1 / T_i`, Hz.
    pub mean_frequency: f64,
    /// Blink count over total span, `(n + 1) / sum(T_i)`, Hz.
    pub blinks_per_interval: f64,
    /// `sum(T_i) / n`, seconds.
    pub mean_interval: f64,
}

/// Statistics over blink times; needs at least two strictly increasing
/// times.
pub fn blink_stats(blink_times: &[f64]) -> Result<BlinkStats> {
    if blink_times.len() < 2 {
        return Err(Error::InsufficientBlinks {
            found: blink_times.len(),
        });
    }
    if blink_times.iter().any(|t| !t.is_finite()) {
        return Err(Error::UnorderedBlinkTimes);
    }
    let intervals: Vec<f64> = blink_times.windows(2).map(|w| w[1] - w[0]).collect();
    if intervals.iter().any(|&t| t <= 0.0) {
        return Err(Error::UnorderedBlinkTimes);
    }

    // Running means, so that equal intervals give exactly 1/T and T.
    let n = intervals.len() as f64;
    let mean_frequency = running_mean(intervals.iter().map(|t| 1.0 / t));
    let mean_interval = running_mean(intervals.iter().copied());
    let blinks_per_interval = (n + 1.0) / (n * mean_interval);

    Ok(BlinkStats {
        blink_times: blink_times.to_vec(),
        intervals,
        mean_frequency,
        blinks_per_interval,
        mean_interval,
    })
}

fn running_mean(values: impl Iterator<Item = f64>) -> f64 {
    values
        .enumerate()
        .fold(0.0, |mean, (i, x)| mean + (x - mean) / (i + 1) as f64)
}
