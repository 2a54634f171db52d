//! Unsigned fixed-point words and the affine maps between real quantities
//! and integer codes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_BITS: u8 = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixedError {
    #[error("width {0} outside 1..=32 bits")]
    Width(u8),
    #[error("value {value} does not fit in {bits} bits")]
    Overflow { value: u64, bits: u8 },
    #[error("cannot shrink a {from}-bit word to {to} bits")]
    Shrink { from: u8, to: u8 },
    #[error("empty or inverted domain [{lo}, {hi}]")]
    Domain { lo: f64, hi: f64 },
}

/// Largest code representable in `bits` bits.
#[inline]
pub fn max_code(bits: u8) -> u32 {
    debug_assert!((1..=MAX_BITS).contains(&bits));
    (u64::from(u32::MAX) >> (32 - u32::from(bits))) as u32
}

fn check_width(bits: u8) -> Result<(), FixedError> {
    if (1..=MAX_BITS).contains(&bits) {
        Ok(())
    } else {
        Err(FixedError::Width(bits))
    }
}

/// An unsigned integer of a declared bit width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedWord {
    value: u32,
    bits: u8,
}

impl FixedWord {
    pub fn new(value: u32, bits: u8) -> Result<Self, FixedError> {
        check_width(bits)?;
        if value > max_code(bits) {
            return Err(FixedError::Overflow {
                value: u64::from(value),
                bits,
            });
        }
        Ok(Self { value, bits })
    }

    pub fn zero(bits: u8) -> Result<Self, FixedError> {
        Self::new(0, bits)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn bits(self) -> u8 {
        self.bits
    }

    /// Largest value of this word's width.
    #[inline]
    pub fn full_scale(self) -> u32 {
        max_code(self.bits)
    }
}

impl std::fmt::Display for FixedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/u{}", self.value, self.bits)
    }
}

/// Affine correspondence between the real interval `[lo, hi]` and the codes
/// `0..=2^bits - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainMap {
    lo: f64,
    hi: f64,
    bits: u8,
}

impl DomainMap {
    pub fn new(lo: f64, hi: f64, bits: u8) -> Result<Self, FixedError> {
        check_width(bits)?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FixedError::Domain { lo, hi });
        }
        Ok(Self { lo, hi, bits })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    /// Real distance covered by one code step.
    pub fn lsb(&self) -> f64 {
        (self.hi - self.lo) / f64::from(max_code(self.bits))
    }

    pub fn quantize(&self, x: f64) -> FixedWord {
        quantize(x, self)
    }

    pub fn dequantize(&self, w: FixedWord) -> f64 {
        dequantize(w, self)
    }
}

/// Nearest code for `x` (ties away from zero); out-of-range values clamp to
/// the end codes and NaN maps to code 0.
pub fn quantize(x: f64, map: &DomainMap) -> FixedWord {
    let top = f64::from(max_code(map.bits));
    let scaled = ((x - map.lo) / (map.hi - map.lo) * top).round();
    let value = if scaled.is_nan() {
        0
    } else {
        scaled.clamp(0.0, top) as u32
    };
    FixedWord {
        value,
        bits: map.bits,
    }
}

/// Inverse affine map. The word width is taken from the map.
pub fn dequantize(w: FixedWord, map: &DomainMap) -> f64 {
    let top = f64::from(max_code(map.bits));
    map.lo + f64::from(w.value) / top * (map.hi - map.lo)
}

/// Widens `w` to `to_bits` by a left shift.
pub fn rescale(w: FixedWord, to_bits: u8) -> Result<FixedWord, FixedError> {
    check_width(to_bits)?;
    if to_bits < w.bits {
        return Err(FixedError::Shrink {
            from: w.bits,
            to: to_bits,
        });
    }
    Ok(FixedWord {
        value: w.value << (to_bits - w.bits),
        bits: to_bits,
    })
}
