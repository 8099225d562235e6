//! Difference expansion.
//!
//! A pair `(m1, m2)` is split into its difference `d = m1 - m2` and floor
//! average `a = floor((m1 + m2) / 2)`. Embedding doubles the difference and
//! appends the bit, `d_w = 2d + bit`, then rebuilds the pair from `(a, d_w)`:
//!
//! ```text
//! m1' = a + floor((d_w + 1) / 2)
//! m2' = a - floor(d_w / 2)
//! ```
//!
//! Extraction reads the bit as the parity of `d' = m1' - m2'`, halves the
//! difference back and rebuilds the original pair from the unchanged average.
//! All divisions are floor divisions, so negative differences need no special
//! case. Arithmetic is done in `i64`; results must fit the `i32` sample domain.

use crate::signal::{IntSignal, Region};
use crate::watermark::BitString;
use crate::{Error, Result};

/// Two consecutive carrier samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pair {
    pub m1: i32,
    pub m2: i32,
}

impl Pair {
    pub fn new(m1: i32, m2: i32) -> Self {
        Self { m1, m2 }
    }

    pub fn difference(&self) -> i64 {
        i64::from(self.m1) - i64::from(self.m2)
    }

    pub fn average(&self) -> i64 {
        floor_half(i64::from(self.m1) + i64::from(self.m2))
    }
}

/// A pair after one bit has been expanded into its difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EmbeddedPair {
    pub m1p: i32,
    pub m2p: i32,
}

impl EmbeddedPair {
    pub fn new(m1p: i32, m2p: i32) -> Self {
        Self { m1p, m2p }
    }
}

#[inline]
fn floor_half(x: i64) -> i64 {
    x.div_euclid(2)
}

/// Rebuilds a pair from its floor average and difference.
#[inline]
fn from_average_difference(a: i64, d: i64) -> Option<(i32, i32)> {
    let m1 = i32::try_from(a + floor_half(d + 1)).ok()?;
    let m2 = i32::try_from(a - floor_half(d)).ok()?;
    Some((m1, m2))
}

/// Embeds one bit. Fails with an empty-index `ExpansionOverflow` when either
/// new sample would leave the `i32` range.
pub fn embed_pair(p: Pair, bit: bool) -> Result<EmbeddedPair> {
    let expanded = 2 * p.difference() + i64::from(bit);
    from_average_difference(p.average(), expanded)
        .map(|(m1p, m2p)| EmbeddedPair { m1p, m2p })
        .ok_or(Error::ExpansionOverflow { pairs: Vec::new() })
}

/// Inverse of [`embed_pair`]. Any pair decodes to something; the result is
/// only meaningful for pairs produced by `embed_pair`.
pub fn extract_pair(e: EmbeddedPair) -> (Pair, bool) {
    let expanded = i64::from(e.m1p) - i64::from(e.m2p);
    let average = floor_half(i64::from(e.m1p) + i64::from(e.m2p));
    let bit = expanded.rem_euclid(2) == 1;
    let d = floor_half(expanded);
    // |d| <= |d'| / 2 + 1 and a' lies between m1p and m2p, so this cannot
    // leave the i32 range.
    let (m1, m2) = from_average_difference(average, d).expect("halved pair fits i32");
    (Pair { m1, m2 }, bit)
}

/// Embeds `bits` into `region`, one bit per disjoint pair
/// `(offset + 2i, offset + 2i + 1)`, bit `i` going to pair `i`.
///
/// The region must hold exactly `bits.len()` pairs. If any pair overflows,
/// nothing is embedded and every failing pair index is reported.
pub fn embed_region(carrier: &IntSignal, region: Region, bits: &BitString) -> Result<IntSignal> {
    region.check(carrier.len())?;
    if bits.len() != region.pairs() {
        return Err(Error::CapacityMismatch {
            pairs: region.pairs(),
            bits: bits.len(),
        });
    }

    let mut samples = carrier.samples().to_vec();
    let window = &mut samples[region.offset()..region.end()];
    let mut failed = Vec::new();
    for (i, (chunk, bit)) in window.chunks_exact_mut(2).zip(bits.iter()).enumerate() {
        match embed_pair(Pair::new(chunk[0], chunk[1]), bit) {
            Ok(e) => {
                chunk[0] = e.m1p;
                chunk[1] = e.m2p;
            }
            Err(_) => failed.push(i),
        }
    }
    if !failed.is_empty() {
        return Err(Error::ExpansionOverflow { pairs: failed });
    }
    Ok(carrier.with_samples(samples))
}

/// Recovers the bits and the original samples of `region`. Samples outside
/// the region are copied through.
pub fn extract_region(watermarked: &IntSignal, region: Region) -> Result<(IntSignal, BitString)> {
    region.check(watermarked.len())?;
    let mut samples = watermarked.samples().to_vec();
    let mut bits = Vec::with_capacity(region.pairs());
    for chunk in samples[region.offset()..region.end()].chunks_exact_mut(2) {
        let (p, bit) = extract_pair(EmbeddedPair::new(chunk[0], chunk[1]));
        chunk[0] = p.m1;
        chunk[1] = p.m2;
        bits.push(bit);
    }
    Ok((watermarked.with_samples(samples), BitString::from(bits)))
}
