#![allow(dead_code)]

use eogmark::signal::{quantize, QuantizationSpec};
use eogmark::{IntSignal, Signal};
use rand::Rng;

pub const RATE: f64 = 250.0;

/// Baseline ripple of a few microvolts with blink-like spikes of a few
/// hundred microvolts at the given sample indices.
pub fn blinky_with(rng: &mut impl Rng, len: usize, spikes: &[usize]) -> Signal {
    let mut v: Vec<f64> = (0..len).map(|_| rng.gen_range(-20e-6..20e-6)).collect();
    for &i in spikes {
        v[i] = rng.gen_range(300e-6..450e-6);
        // Shoulders so the apex is a clear local maximum.
        v[i - 1] = v[i] * 0.5;
        v[i + 1] = v[i] * 0.5;
    }
    Signal::new(v, RATE).unwrap()
}

/// 12 s of signal with 4 to 8 blinks at least 0.6 s apart, all after the
/// first 130 samples so the default region holds only baseline.
pub fn random_blinky(rng: &mut impl Rng) -> Signal {
    let len = 3000;
    let count = rng.gen_range(4..=8);
    let mut spikes = Vec::new();
    let mut at = rng.gen_range(150..300);
    for _ in 0..count {
        if at + 2 >= len {
            break;
        }
        spikes.push(at);
        at += rng.gen_range(150..400);
    }
    blinky_with(rng, len, &spikes)
}

pub fn micro(signal: &Signal) -> IntSignal {
    quantize(signal, QuantizationSpec::default()).unwrap()
}

/// Five identical spikes 2 s apart at 250 Hz.
pub fn five_spike_train() -> Signal {
    let mut v = vec![0.0; 2500];
    for j in 0..5 {
        v[250 + 500 * j] = 400e-6;
    }
    Signal::new(v, RATE).unwrap()
}
