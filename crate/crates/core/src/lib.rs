//! Reversible watermarking of electrooculography (EOG) signals.
//!
//! Blink statistics computed from a signal (mean blink frequency and mean
//! blink interval) are encoded as two IEEE-754 binary32 words, concatenated
//! into a 64-bit watermark and hidden inside a 128-sample region of the
//! quantized signal with difference expansion. The receiver extracts the
//! watermark, restores the carrier bit-exactly and can cross-check the
//! extracted parameters against ones recomputed from the restored signal.
//!
//! Module map:
//! * [`signal`]: real and integer signal representations, quantization, crop/merge.
//! * [`de`]: the difference-expansion transform, per pair and per region.
//! * [`features`]: time-domain features and blink statistics.
//! * [`watermark`]: bit strings and the binary32 payload codec.
//! * [`metrics`]: SNR, BER and maximum absolute error.
//! * [`format`]: the line-based signal file format.
//! * [`pipeline`]: the embed/extract/verify workflow.
//! * [`cli`]: the `eogmark` command-line tool.

pub mod cli;
pub mod de;
mod error;
pub mod features;
pub mod format;
pub mod metrics;
pub mod pipeline;
pub mod reference;
pub mod signal;
pub mod watermark;

pub use error::{Error, Result};
pub use signal::{IntSignal, QuantizationSpec, Region, Signal};
pub use watermark::{BitString, WatermarkPayload};
