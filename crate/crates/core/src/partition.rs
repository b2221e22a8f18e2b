//! Splitting a string at the left edge of every occurrence of the pattern
//! `0^k 1^k`.
//!
//! Part 1 runs from the first bit up to the first occurrence; every later
//! part starts with an occurrence. When the string itself starts with the
//! pattern, part 1 is kept as an empty string so that the part count is
//! always one more than the number of occurrences.

use crate::bits::BitString;

/// 1-based start positions of all occurrences of `0^k 1^k` in `x`.
///
/// Two occurrences can never overlap: a second occurrence starting inside
/// the first would need a 1 inside the first block of zeros.
pub fn find_patterns(x: &[bool], k: usize) -> Vec<usize> {
    let plen = 2 * k;
    if k == 0 || x.len() < plen {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i + plen <= x.len() {
        if is_pattern_at(x, i, k) {
            out.push(i + 1);
            i += plen;
        } else {
            i += 1;
        }
    }
    out
}

#[inline]
fn is_pattern_at(x: &[bool], i: usize, k: usize) -> bool {
    x[i..i + k].iter().all(|&b| !b) && x[i + k..i + 2 * k].iter().all(|&b| b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<BitString>,
    starts: Vec<usize>,
    len: usize,
}

impl Partition {
    pub fn parts(&self) -> &[BitString] {
        &self.parts
    }

    /// 1-based start position of each part.
    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn n_parts(&self) -> usize {
        self.parts.len()
    }

    /// Length of the partitioned string.
    pub fn total_len(&self) -> usize {
        self.len
    }

    /// Start of part `i` (1-based).
    pub fn start(&self, i: usize) -> usize {
        self.starts[i - 1]
    }

    /// Last bit of part `i` (1-based); `start(i) - 1` for an empty part.
    pub fn end(&self, i: usize) -> usize {
        self.starts.get(i).map_or(self.len, |next| next - 1)
    }

    pub fn max_part_len(&self) -> usize {
        self.parts.iter().map(BitString::len).max().unwrap_or(0)
    }
}

pub fn partition(x: &BitString, k: usize) -> Partition {
    let bits = x.as_slice();
    let mut starts = vec![1];
    starts.extend(find_patterns(bits, k));
    let parts = starts
        .iter()
        .enumerate()
        .map(|(idx, &s)| {
            let end = starts.get(idx + 1).map_or(bits.len(), |next| next - 1);
            BitString::from_slice(&bits[s - 1..end])
        })
        .collect();
    Partition { parts, starts, len: bits.len() }
}

/// Lengths of the parts of `x`, without materializing them.
pub fn part_lengths(x: &[bool], k: usize) -> Vec<usize> {
    let mut bounds = vec![1];
    bounds.extend(find_patterns(x, k));
    bounds.push(x.len() + 1);
    bounds.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Every part of `x` has at most `density` bits.
pub fn is_dense(x: &[bool], k: usize, density: usize) -> bool {
    part_lengths(x, k).into_iter().all(|l| l <= density)
}

/// Bit interval covering parts `j_lo..=j_hi`, widened by `margin_parts`
/// parts and then `margin_bits` bits on each side and clipped to the string.
pub fn part_interval_to_bits(
    part: &Partition,
    j_lo: usize,
    j_hi: usize,
    margin_parts: usize,
    margin_bits: usize,
) -> (usize, usize) {
    let count = part.n_parts();
    let first = j_lo.saturating_sub(margin_parts).clamp(1, count);
    let last = j_hi.saturating_add(margin_parts).clamp(1, count);
    let lo = part.start(first).saturating_sub(margin_bits).max(1);
    let hi = part.end(last).saturating_add(margin_bits).min(part.total_len());
    (lo, hi)
}
