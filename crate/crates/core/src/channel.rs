//! The single-edit channel: apply, enumerate and sample `k`-substring edits.
//!
//! Randomness comes from ChaCha8 seeded with a 64-bit seed, so every sample
//! is reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bits::{BitString, EditOp};
use crate::partition::is_dense;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("edit {op} does not fit a string of length {len}")]
    OutOfRange { op: EditOp, len: usize },
}

/// `x[1..j−1] · ins · x[j+a..]`.
pub fn apply_edit(x: &BitString, op: &EditOp) -> Result<BitString, ChannelError> {
    if !op.fits(x.len()) {
        return Err(ChannelError::OutOfRange { op: op.clone(), len: x.len() });
    }
    let bits = x.as_slice();
    let mut y = Vec::with_capacity(x.len() + op.ins.len() - op.del_len.min(x.len()));
    y.extend_from_slice(&bits[..op.pos - 1]);
    y.extend(op.ins.iter());
    y.extend_from_slice(&bits[op.pos - 1 + op.del_len..]);
    Ok(BitString::new(y))
}

/// Every edit applicable to a string of length `len`, in canonical order:
/// position, then deleted length, then inserted length, then inserted bits
/// read as a number.
pub fn canonical_edits(len: usize, k: usize) -> Vec<EditOp> {
    let mut out = Vec::new();
    for pos in 1..=len + 1 {
        for del_len in 0..=k.min(len + 1 - pos) {
            for ins_len in 0..=k {
                for v in 0..(1u128 << ins_len) {
                    out.push(EditOp::new(pos, del_len, BitString::from_uint(v, ins_len)));
                }
            }
        }
    }
    out
}

/// Every edit of `x` with its output, in canonical order. Includes the
/// identity edits.
pub fn enumerate_edits(x: &BitString, k: usize) -> impl Iterator<Item = (EditOp, BitString)> + '_ {
    canonical_edits(x.len(), k).into_iter().map(move |op| {
        let y = apply_edit(x, &op).expect("canonical edits fit");
        (op, y)
    })
}

/// One edit drawn uniformly from the canonical list.
pub fn sample_edit(x: &BitString, k: usize, seed: u64) -> (EditOp, BitString) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_edit_with(x, k, &mut rng)
}

pub fn sample_edit_with<R: Rng>(x: &BitString, k: usize, rng: &mut R) -> (EditOp, BitString) {
    let ops = canonical_edits(x.len(), k);
    let idx = rng.random_range(0..ops.len() as u64) as usize;
    let op = ops[idx].clone();
    let y = apply_edit(x, &op).expect("canonical edits fit");
    (op, y)
}

/// Uniform random string of length `n`.
pub fn random_bits<R: Rng>(n: usize, rng: &mut R) -> BitString {
    let mut bits = Vec::with_capacity(n);
    while bits.len() < n {
        let word: u64 = rng.random();
        let take = (n - bits.len()).min(64);
        bits.extend((0..take).map(|i| (word >> (63 - i)) & 1 == 1));
    }
    BitString::new(bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityReport {
    pub trials: u64,
    pub non_dense: u64,
    pub fraction: f64,
    pub seed: u64,
}

/// Monte Carlo estimate of the probability that a uniform string of length
/// `n` has a part longer than `density`.
pub fn density_trial(n: usize, k: usize, density: usize, trials: u64, seed: u64) -> DensityReport {
    assert!(trials >= 1, "density_trial needs at least one trial");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let non_dense = (0..trials)
        .filter(|_| !is_dense(random_bits(n, &mut rng).as_slice(), k, density))
        .count() as u64;
    DensityReport { trials, non_dense, fraction: non_dense as f64 / trials as f64, seed }
}
