//! Per-part features.
//!
//! Each part `s` of the partition maps to
//! `f(s) = d(s) + B·n₁(s) + C·|s|`, where `d` packs the parities of the `k`
//! residue classes of positions (detects a burst of substitutions), `n₁`
//! counts occurrences of `1^k` (detects a burst that shifts a pattern) and
//! `|s|` is the length.

use serde::Serialize;

use crate::bits::{BitString, IntString};
use crate::params::CodeParams;
use crate::partition::find_patterns;

/// Parity signature: bit `j` (leftmost = most significant) is the XOR of
/// all `s_i` with `i ≡ j (mod k)`, positions 1-based. `d(ε) = 0`.
pub fn parity_signature(s: &[bool], k: usize) -> u64 {
    assert!((1..=63).contains(&k), "parity signature needs 1 <= k <= 63");
    let mut classes = 0u64;
    for (i, &b) in s.iter().enumerate() {
        if b {
            classes ^= 1 << (i % k);
        }
    }
    // class of 0-based index r is position r+1, which lands on bit k-1-r
    (0..k).fold(0u64, |acc, r| (acc << 1) | ((classes >> r) & 1))
}

/// Number of (overlapping) occurrences of `1^k` in `s`.
pub fn count_ones_runs(s: &[bool], k: usize) -> u64 {
    let mut run = 0usize;
    let mut count = 0u64;
    for &b in s {
        if b {
            run += 1;
            if run >= k {
                count += 1;
            }
        } else {
            run = 0;
        }
    }
    count
}

pub fn feature_value(s: &[bool], params: &CodeParams) -> u64 {
    if s.is_empty() {
        return 0;
    }
    parity_signature(s, params.k)
        + params.run_weight * count_ones_runs(s, params.k)
        + params.length_weight * s.len() as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureVector {
    pub values: IntString,
    pub total: u128,
}

impl FeatureVector {
    pub fn n_parts(&self) -> usize {
        self.values.len()
    }
}

/// Feature vector of `x` over its pattern partition.
pub fn feature_vector(x: &[bool], params: &CodeParams) -> FeatureVector {
    let mut bounds = vec![0];
    bounds.extend(find_patterns(x, params.k).into_iter().map(|p| p - 1));
    bounds.push(x.len());
    let values: Vec<u64> = bounds
        .windows(2)
        .map(|w| feature_value(&x[w[0]..w[1]], params))
        .collect();
    let total = values.iter().map(|&v| u128::from(v)).sum();
    FeatureVector { values: IntString::new(values), total }
}

/// Component sums over all parts: `L` (total length), `D` (sum of parity
/// signatures), `N` (sum of `1^k` counts) and `F` (sum of features).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Aggregates {
    pub length: u64,
    pub parity: u64,
    pub runs: u64,
    pub feature: u128,
}

pub fn aggregates(x: &BitString, params: &CodeParams) -> Aggregates {
    let part = crate::partition::partition(x, params.k);
    let mut agg = Aggregates { length: 0, parity: 0, runs: 0, feature: 0 };
    for p in part.parts() {
        let s = p.as_slice();
        agg.length += s.len() as u64;
        if !s.is_empty() {
            agg.parity += parity_signature(s, params.k);
        }
        agg.runs += count_ones_runs(s, params.k);
        agg.feature += u128::from(feature_value(s, params));
    }
    agg
}
