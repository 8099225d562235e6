//! Watermark bit strings and the 64-bit blink-statistics payload.
//!
//! Each statistic is rounded to IEEE-754 binary32 (nearest-even) and written
//! MSB-first: sign, 8 exponent bits, 23 mantissa bits. The frequency word
//! comes first, the interval word second.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::features::BlinkStats;
use crate::{Error, Result};

/// Ordered bits, MSB-first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.0.get(index).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BitString(bits)
    }

    /// Flips every bit.
    pub fn complement(&self) -> BitString {
        BitString(self.0.iter().map(|b| !b).collect())
    }

    pub fn flip(&mut self, index: usize) {
        self.0[index] = !self.0[index];
    }

    /// The 32 bits of `word`, most significant first.
    pub fn from_u32(word: u32) -> Self {
        Self((0..32).rev().map(|i| (word >> i) & 1 == 1).collect())
    }

    /// Reads exactly 32 bits, MSB-first.
    pub fn to_u32(&self) -> Result<u32> {
        if self.len() != 32 {
            return Err(Error::WrongLength {
                expected: 32,
                actual: self.len(),
            });
        }
        Ok(self
            .0
            .iter()
            .fold(0u32, |acc, &b| (acc << 1) | u32::from(b)))
    }

    /// Groups of eight separated by spaces, as printed in reports.
    pub fn grouped(&self) -> String {
        self.0
            .chunks(8)
            .map(|c| {
                c.iter()
                    .map(|&b| if b { '1' } else { '0' })
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses `'0'`/`'1'` characters. Whitespace is ignored, so both
/// `"00111110..."` and `"00111110 11001000 ..."` are accepted.
impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBitChar(other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Rounds `x` to binary32 and returns its 32 bits. NaN and values that
/// overflow binary32 are rejected.
pub fn encode_f32(x: f64) -> Result<BitString> {
    let single = x as f32;
    if !single.is_finite() {
        return Err(Error::NotFinite(x.to_string()));
    }
    Ok(BitString::from_u32(single.to_bits()))
}

/// Decodes 32 bits as binary32. NaN patterns are returned as NaN; callers
/// check `is_nan()`.
pub fn decode_f32(bits: &BitString) -> Result<f32> {
    bits.to_u32().map(f32::from_bits)
}

/// The two blink statistics carried by the watermark, stored at binary32
/// precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WatermarkPayload {
    /// Mean blink frequency, Hz.
    pub mean_blink_frequency: f32,
    /// Mean blink interval, seconds.
    pub mean_blink_interval: f32,
}

impl WatermarkPayload {
    /// Rounds both values to binary32.
    pub fn new(mean_blink_frequency: f64, mean_blink_interval: f64) -> Result<Self> {
        let round = |x: f64| {
            let single = x as f32;
            if single.is_finite() {
                Ok(single)
            } else {
                Err(Error::NotFinite(x.to_string()))
            }
        };
        Ok(Self {
            mean_blink_frequency: round(mean_blink_frequency)?,
            mean_blink_interval: round(mean_blink_interval)?,
        })
    }

    pub fn from_stats(stats: &BlinkStats) -> Result<Self> {
        Self::new(stats.mean_frequency, stats.mean_interval)
    }
}

/// Frequency word followed by interval word, 64 bits.
pub fn pack(payload: &WatermarkPayload) -> Result<BitString> {
    let frequency = encode_f32(f64::from(payload.mean_blink_frequency))?;
    let interval = encode_f32(f64::from(payload.mean_blink_interval))?;
    Ok(frequency.concat(&interval))
}

pub fn unpack(bits: &BitString) -> Result<WatermarkPayload> {
    if bits.len() != 64 {
        return Err(Error::WrongLength {
            expected: 64,
            actual: bits.len(),
        });
    }
    let (head, tail) = bits.as_slice().split_at(32);
    Ok(WatermarkPayload {
        mean_blink_frequency: decode_f32(&BitString(head.to_vec()))?,
        mean_blink_interval: decode_f32(&BitString(tail.to_vec()))?,
    })
}

/// True iff both fields have bit-identical binary32 encodings.
pub fn verify(extracted: &WatermarkPayload, recomputed: &WatermarkPayload) -> bool {
    extracted.mean_blink_frequency.to_bits() == recomputed.mean_blink_frequency.to_bits()
        && extracted.mean_blink_interval.to_bits() == recomputed.mean_blink_interval.to_bits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FREQUENCY_BITS: &str = "00111110 11001000 00111110 01000010";
    const INTERVAL_BITS: &str = "00111110 10111110 11111001 11011011";

    #[test]
    fn golden_words() {
        assert_eq!(encode_f32(0.3911).unwrap().grouped(), FREQUENCY_BITS);
        assert_eq!(encode_f32(0.3730).unwrap().grouped(), INTERVAL_BITS);
        assert_eq!(encode_f32(0.0).unwrap(), BitString::zeros(32));
    }

    #[test]
    fn golden_decode() {
        let f = decode_f32(&FREQUENCY_BITS.parse().unwrap()).unwrap();
        assert_eq!(f, 0.3911f32);
        assert_eq!(decode_f32(&BitString::zeros(32)).unwrap(), 0.0);
    }

    #[test]
    fn golden_pack() {
        let p = WatermarkPayload::new(0.3911, 0.3730).unwrap();
        let bits = pack(&p).unwrap();
        assert_eq!(bits.grouped(), format!("{FREQUENCY_BITS} {INTERVAL_BITS}"));
        assert_eq!(unpack(&bits).unwrap(), p);
        let zero = WatermarkPayload::new(0.0, 0.0).unwrap();
        assert_eq!(pack(&zero).unwrap(), BitString::zeros(64));
        assert_eq!(unpack(&BitString::zeros(64)).unwrap(), zero);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(encode_f32(f64::NAN), Err(Error::NotFinite(_))));
        assert!(matches!(
            encode_f32(f64::INFINITY),
            Err(Error::NotFinite(_))
        ));
        assert!(matches!(encode_f32(1e39), Err(Error::NotFinite(_))));
        assert!(WatermarkPayload::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn wrong_lengths() {
        assert_eq!(
            decode_f32(&BitString::zeros(31)),
            Err(Error::WrongLength {
                expected: 32,
                actual: 31
            })
        );
        assert_eq!(
            unpack(&BitString::zeros(63)),
            Err(Error::WrongLength {
                expected: 64,
                actual: 63
            })
        );
    }

    #[test]
    fn nan_pattern_decodes_to_nan() {
        let nan = decode_f32(&BitString::from_u32(0x7fc0_0001)).unwrap();
        assert!(nan.is_nan());
    }

    #[test]
    fn parsing() {
        let b: BitString = "0101 1\t1\n0".parse().unwrap();
        assert_eq!(b.to_string(), "0101110");
        assert_eq!("01x".parse::<BitString>(), Err(Error::InvalidBitChar('x')));
    }

    #[test]
    fn verify_examples() {
        let p = WatermarkPayload::new(0.3911, 0.3730).unwrap();
        assert!(verify(&p, &p));
        let q = WatermarkPayload::new(0.3911, 0.3731).unwrap();
        assert!(!verify(&p, &q));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn decode_encode_identity(word in any::<u32>()) {
            let bits = BitString::from_u32(word);
            let x = decode_f32(&bits).unwrap();
            prop_assume!(x.is_finite());
            prop_assert_eq!(encode_f32(f64::from(x)).unwrap(), bits);
        }

        #[test]
        fn encode_is_binary32_rounding(x in -1e30f64..1e30) {
            let back = decode_f32(&encode_f32(x).unwrap()).unwrap();
            prop_assert_eq!(back.to_bits(), (x as f32).to_bits());
        }

        #[test]
        fn pack_unpack_inverse(f in any::<u32>(), i in any::<u32>()) {
            let (f, i) = (f32::from_bits(f), f32::from_bits(i));
            prop_assume!(f.is_finite() && i.is_finite());
            let p = WatermarkPayload { mean_blink_frequency: f, mean_blink_interval: i };
            let bits = pack(&p).unwrap();
            prop_assert_eq!(bits.len(), 64);
            let back = unpack(&bits).unwrap();
            prop_assert!(verify(&back, &p));
            prop_assert_eq!(pack(&back).unwrap(), bits);
        }
    }
}
