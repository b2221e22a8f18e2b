//! Binary strings, integer strings and the single substring edit.
//!
//! Positions in the public API are 1-based to match the way edits are
//! usually written down (`x[i..j]`, "edit at position j"). Slices handed out
//! by [`BitString::as_slice`] are ordinary 0-based Rust slices.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("invalid character {0:?} in bit string (expected '0' or '1')")]
    InvalidChar(char),
    #[error("substring [{start}, {end}] is out of range for a string of length {len}")]
    SubstringOutOfRange { start: usize, end: usize, len: usize },
}

/// A finite sequence over `{0, 1}`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn from_slice(bits: &[bool]) -> Self {
        Self { bits: bits.to_vec() }
    }

    /// The `len` low bits of `value`, most significant first.
    pub fn from_uint(value: u128, len: usize) -> Self {
        assert!(len <= 128, "from_uint supports at most 128 bits");
        let bits = (0..len).rev().map(|i| (value >> i) & 1 == 1).collect();
        Self { bits }
    }

    /// Bytes in file order, bits within a byte most significant first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let bits = bytes
            .iter()
            .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
            .collect();
        Self { bits }
    }

    /// Inverse of [`BitString::from_bytes`]; a trailing partial byte is
    /// padded with zero bits.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)))
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 1-based position `i`.
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i - 1]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_vec(self) -> Vec<bool> {
        self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `x[start..=end]`, 1-based and inclusive. `start == end + 1` yields the
    /// empty string.
    pub fn substring(&self, start: usize, end: usize) -> Result<BitString, BitsError> {
        if start == 0 || start > end + 1 || end > self.len() {
            return Err(BitsError::SubstringOutOfRange { start, end, len: self.len() });
        }
        Ok(Self::from_slice(&self.bits[start - 1..end]))
    }

    pub fn concat(parts: &[&BitString]) -> BitString {
        let bits = parts.iter().flat_map(|p| p.bits.iter().copied()).collect();
        Self { bits }
    }

    /// Big-endian integer value. Panics above 128 bits.
    pub fn to_uint(&self) -> u128 {
        uint_of(&self.bits)
    }
}

/// Big-endian integer value of a bit slice (at most 128 bits).
pub(crate) fn uint_of(bits: &[bool]) -> u128 {
    assert!(bits.len() <= 128, "uint_of supports at most 128 bits");
    bits.iter().fold(0u128, |acc, &b| (acc << 1) | u128::from(b))
}

impl FromStr for BitString {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitsError::InvalidChar(other)),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

/// A finite sequence of nonnegative integers (feature vectors, VT inputs).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IntString {
    vals: Vec<u64>,
}

impl IntString {
    pub fn new(vals: Vec<u64>) -> Self {
        Self { vals }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    /// Value at 1-based position `i`.
    pub fn get(&self, i: usize) -> u64 {
        self.vals[i - 1]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.vals
    }

    pub fn sum(&self) -> u128 {
        self.vals.iter().map(|&v| u128::from(v)).sum()
    }

    pub fn max(&self) -> u64 {
        self.vals.iter().copied().max().unwrap_or(0)
    }

    /// Every entry is at most `bound`.
    pub fn is_bounded(&self, bound: u64) -> bool {
        self.vals.iter().all(|&v| v <= bound)
    }
}

impl From<Vec<u64>> for IntString {
    fn from(vals: Vec<u64>) -> Self {
        Self { vals }
    }
}

/// One substring edit: delete `del_len` bits starting at the 1-based
/// position `pos` and insert `ins` in their place.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EditOp {
    pub pos: usize,
    pub del_len: usize,
    pub ins: BitString,
}

impl EditOp {
    pub fn new(pos: usize, del_len: usize, ins: BitString) -> Self {
        Self { pos, del_len, ins }
    }

    /// Whether the edit can be applied to a string of length `len` and
    /// respects the window bound `k`.
    pub fn is_valid_for(&self, len: usize, k: usize) -> bool {
        self.fits(len) && self.del_len <= k && self.ins.len() <= k
    }

    pub(crate) fn fits(&self, len: usize) -> bool {
        self.pos >= 1 && self.pos + self.del_len <= len + 1
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pos={} del={} ins={}", self.pos, self.del_len, self.ins)
    }
}

/// Whether `y` can be produced from `x` by a single `k`-substring edit
/// (the identity included).
pub fn within_one_edit(x: &[bool], y: &[bool], k: usize) -> bool {
    let (changed_x, changed_y) = edit_core(x, y);
    changed_x <= k && changed_y <= k
}

/// Lengths of the smallest differing middle sections of `x` and `y` after
/// stripping their longest common prefix and then their longest common
/// suffix.
pub(crate) fn edit_core<T: PartialEq>(x: &[T], y: &[T]) -> (usize, usize) {
    let prefix = x.iter().zip(y).take_while(|(a, b)| a == b).count();
    let room = x.len().min(y.len()) - prefix;
    let suffix = x
        .iter()
        .rev()
        .zip(y.iter().rev())
        .take(room)
        .take_while(|(a, b)| a == b)
        .count();
    (x.len() - prefix - suffix, y.len() - prefix - suffix)
}
