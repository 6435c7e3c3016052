//! Bit-string combinatorics over N-qubit basis labels.
//!
//! Basis kets are labeled by unsigned integers. Bit 0 is the least
//! significant bit and corresponds to the rightmost digit of the ket label
//! |b_{N-1} ... b_1 b_0>, so the ket |0...01> is the integer 1.

use crate::error::{Error, Result};
use std::fmt;

/// Largest supported label width, in bits.
pub const MAX_WIDTH: u32 = 24;

/// An N-bit basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    value: u32,
    width: u32,
}

impl BitString {
    /// Builds a label of `width` bits. Fails if `width` is out of range or
    /// `value` needs more than `width` bits.
    pub fn new(value: u32, width: u32) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::WidthOutOfRange {
                width,
                min: 1,
                max: MAX_WIDTH,
            });
        }
        if value >= (1u32 << width) {
            return Err(Error::ValueOutOfRange {
                value: u64::from(value),
                width,
            });
        }
        Ok(Self { value, width })
    }

    /// The all-zero string of the given width.
    pub fn zero(width: u32) -> Result<Self> {
        Self::new(0, width)
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// The label as a basis-vector index.
    pub fn index(&self) -> usize {
        self.value as usize
    }

    /// Hamming weight h(b): the number of set bits. h(b) = h(b, 0).
    pub fn weight(&self) -> u32 {
        self.value.count_ones()
    }

    /// Hamming distance h(a, b): the number of bit positions where the two
    /// strings differ, i.e. the weight of their xor.
    pub fn distance(&self, other: &BitString) -> Result<u32> {
        self.check_width(other)?;
        Ok((self.value ^ other.value).count_ones())
    }

    /// Bitwise complement within the width.
    pub fn complement(&self) -> BitString {
        BitString {
            value: !self.value & self.mask(),
            width: self.width,
        }
    }

    /// Bitwise AND. Fails on width mismatch.
    pub fn and(&self, other: &BitString) -> Result<BitString> {
        self.check_width(other)?;
        Ok(BitString {
            value: self.value & other.value,
            width: self.width,
        })
    }

    /// Whether bit `i` (0 = least significant) is set.
    pub fn bit(&self, i: u32) -> bool {
        i < self.width && (self.value >> i) & 1 == 1
    }

    fn mask(&self) -> u32 {
        if self.width == 32 {
            u32::MAX
        } else {
            (1u32 << self.width) - 1
        }
    }

    fn check_width(&self, other: &BitString) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        Ok(())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.width).rev() {
            write!(f, "{}", u32::from(self.bit(i)))?;
        }
        Ok(())
    }
}

/// The jump selector theta(n AND b) * (1 - theta(n AND NOT b)): true iff
/// n != 0 and every set bit of n is also set in b.
pub fn jump_selector(n: &BitString, b: &BitString) -> Result<bool> {
    if n.width != b.width {
        return Err(Error::WidthMismatch {
            left: n.width,
            right: b.width,
        });
    }
    Ok(n.value != 0 && n.value & !b.value == 0)
}

/// All strings b of n's width whose set bits contain n's set bits, in
/// increasing value order. Exactly the b with `jump_selector(n, b)` true
/// when n != 0 (for n = 0 this is every string).
pub fn supersets(n: &BitString) -> Vec<BitString> {
    let free = n.complement().value;
    let mut out = Vec::with_capacity(1usize << free.count_ones());
    // enumerate submasks of the free positions, descending, then sort
    let mut s = free;
    loop {
        out.push(BitString {
            value: n.value | s,
            width: n.width,
        });
        if s == 0 {
            break;
        }
        s = (s - 1) & free;
    }
    out.sort_by_key(|b| b.value);
    out
}
