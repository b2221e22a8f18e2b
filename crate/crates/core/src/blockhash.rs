//! Fixed-length block hashing and recovery of an edited region.
//!
//! `x` is cut into blocks of `block_len` bits (the last one may be short and
//! is read as if zero-padded on the right). Each block gets a label `φ`:
//! either `int(block) mod P` for one global prime `P` (compressed), or the
//! block itself (reference). `ψ` is the pair of sums of the labels of the
//! odd- and even-indexed blocks modulo `2^width`.
//!
//! An edit confined to two adjacent blocks leaves every other block
//! readable from `y`, so subtracting their labels from `ψ` isolates the
//! labels of the affected blocks. `P` is chosen at sketch time so that no
//! other string sharing a one-edit descendant with an adjacent block pair
//! agrees with it on both labels.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitString, EditOp};
use crate::params::{CodeParams, MAX_COMPRESSED_BLOCK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockHashError {
    #[error("no prime below 2^{width} separates every block pair")]
    PrimeSearchExhausted { width: u32 },
    #[error("compressed labels are not supported here: {0}")]
    Unsupported(String),
    #[error("interval [{lo}, {hi}] is not a range of at most {block_len} positions in 1..={n}")]
    InvalidInterval { lo: usize, hi: usize, block_len: usize, n: usize },
    #[error("received length {received} is not within {k} of {n}")]
    LengthMismatch { received: usize, n: usize, k: usize },
    #[error("no candidate inside the interval matches the block hashes")]
    NoCandidate,
    #[error("{count} distinct candidates match the block hashes")]
    Ambiguous { count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiMode {
    Compressed,
    Reference,
}

impl PhiMode {
    pub fn wire_code(self) -> u8 {
        match self {
            PhiMode::Compressed => 0,
            PhiMode::Reference => 1,
        }
    }

    pub fn from_wire_code(code: u64) -> Option<PhiMode> {
        match code {
            0 => Some(PhiMode::Compressed),
            1 => Some(PhiMode::Reference),
            _ => None,
        }
    }
}

/// Block geometry of a string of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    pub n: usize,
    pub block_len: usize,
}

impl BlockLayout {
    pub fn new(n: usize, block_len: usize) -> Self {
        assert!(block_len >= 1, "block length must be positive");
        Self { n, block_len }
    }

    pub fn count(&self) -> usize {
        self.n.div_ceil(self.block_len).max(1)
    }

    /// 1-based inclusive bit range of block `i` (0-based index).
    pub fn range(&self, i: usize) -> (usize, usize) {
        let start = i * self.block_len + 1;
        (start, ((i + 1) * self.block_len).min(self.n))
    }

    /// 0-based index of the block holding bit `p` (1-based).
    pub fn block_of(&self, p: usize) -> usize {
        (p - 1) / self.block_len
    }

    /// Zero bits appended to block `i` before it is read as an integer.
    pub fn pad(&self, i: usize) -> usize {
        let (s, e) = self.range(i);
        self.block_len - (e + 1 - s)
    }
}

/// The labelling rule shared by the sketch and the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockHash {
    pub mode: PhiMode,
    /// Prime modulus; 0 in reference mode.
    pub prime: u64,
    /// ψ components are reduced modulo `2^width`.
    pub width: u32,
    pub block_len: usize,
}

impl BlockHash {
    pub fn reference(block_len: usize) -> Self {
        let width = u32::try_from(block_len).expect("block length fits in u32");
        Self { mode: PhiMode::Reference, prime: 0, width, block_len }
    }

    /// Label of one block given its bits (the pad is added here).
    pub fn label(&self, block: &[bool]) -> BigUint {
        let pad = self.block_len - block.len();
        match self.mode {
            PhiMode::Compressed => {
                let v = (crate::bits::uint_of(block) << pad) % u128::from(self.prime);
                BigUint::from(v)
            }
            PhiMode::Reference => biguint_of(block) << pad,
        }
    }

    /// Label of a block whose padded value fits in 64 bits.
    #[inline]
    fn label_small(&self, padded: u64) -> u64 {
        match self.mode {
            PhiMode::Compressed => padded % self.prime,
            PhiMode::Reference => padded,
        }
    }

    fn modulus(&self) -> BigUint {
        BigUint::one() << self.width
    }
}

/// Big-endian integer value of any number of bits.
pub fn biguint_of(bits: &[bool]) -> BigUint {
    let bytes = BitString::from_slice(bits).to_bytes();
    BigUint::from_bytes_be(&bytes) >> (bytes.len() * 8 - bits.len())
}

/// Per-block labels of one string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiSketch {
    pub hash: BlockHash,
    pub labels: Vec<BigUint>,
}

impl PhiSketch {
    pub fn psi(&self) -> Psi {
        let m = self.hash.modulus();
        let mut odd = BigUint::zero();
        let mut even = BigUint::zero();
        for (i, l) in self.labels.iter().enumerate() {
            // blocks are numbered from 1, so index 0 is odd
            if i % 2 == 0 {
                odd += l;
            } else {
                even += l;
            }
        }
        Psi { odd: odd % &m, even: even % m }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Psi {
    pub odd: BigUint,
    pub even: BigUint,
}

/// Labels of every block of `x` under `hash`.
pub fn block_labels(x: &[bool], hash: &BlockHash) -> Vec<BigUint> {
    let layout = BlockLayout::new(x.len(), hash.block_len);
    (0..layout.count())
        .map(|i| {
            let (s, e) = layout.range(i);
            hash.label(&x[s - 1..e])
        })
        .collect()
}

pub fn psi(x: &[bool], hash: &BlockHash) -> Psi {
    PhiSketch { hash: *hash, labels: block_labels(x, hash) }.psi()
}

/// Length of the longest region whose confusables must be separated.
fn region_len(params: &CodeParams) -> usize {
    if params.block_count() >= 2 {
        2 * params.block_len
    } else {
        params.n
    }
}

/// Whether compressed labels can be computed for these parameters: block
/// values must fit in 64 bits and every one-edit descendant of a region in
/// 128 bits.
pub fn compressed_supported(params: &CodeParams) -> bool {
    params.block_len <= MAX_COMPRESSED_BLOCK && region_len(params) + params.k <= 128
}

/// Labels for `x`. Compressed mode searches for the smallest prime that
/// separates every adjacent block pair of `x` from its confusables.
pub fn phi_sketch(x: &BitString, params: &CodeParams, mode: PhiMode) -> Result<PhiSketch, BlockHashError> {
    let hash = match mode {
        PhiMode::Reference => BlockHash::reference(params.block_len),
        PhiMode::Compressed => {
            if !compressed_supported(params) {
                return Err(BlockHashError::Unsupported(format!(
                    "block length {} with k = {} is too long",
                    params.block_len, params.k
                )));
            }
            let moduli = separation_moduli(x.as_slice(), params.block_len, params.k);
            let prime = smallest_separating_prime(&moduli, params.phi_width)?;
            BlockHash { mode, prime, width: params.phi_width, block_len: params.block_len }
        }
    };
    Ok(PhiSketch { hash, labels: block_labels(x.as_slice(), &hash) })
}

/// Smallest prime `P < 2^width` dividing none of `moduli`.
pub fn smallest_separating_prime(moduli: &[u64], width: u32) -> Result<u64, BlockHashError> {
    let cap = if width >= 64 { u64::MAX } else { 1u64 << width };
    let mut p = 2u64;
    while p < cap {
        if primal_check::miller_rabin(p) && moduli.iter().all(|&g| g % p != 0) {
            return Ok(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Err(BlockHashError::PrimeSearchExhausted { width })
}

/// Integer-packed bit string of at most 128 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Packed {
    val: u128,
    len: usize,
}

#[inline]
fn shl(v: u128, s: usize) -> u128 {
    if s >= 128 {
        0
    } else {
        v << s
    }
}

#[inline]
fn shr(v: u128, s: usize) -> u128 {
    if s >= 128 {
        0
    } else {
        v >> s
    }
}

#[inline]
fn low_mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

impl Packed {
    /// Replace `del` bits after the first `head` bits with `ins_len` bits of `ins`.
    #[inline]
    fn splice(self, head: usize, del: usize, ins: u128, ins_len: usize) -> Packed {
        let tail_len = self.len - head - del;
        let prefix = shr(self.val, self.len - head);
        let tail = self.val & low_mask(tail_len);
        let val = shl(shl(prefix, ins_len) | ins, tail_len) | tail;
        Packed { val, len: head + ins_len + tail_len }
    }
}

/// All distinct results of one `k`-substring edit on `r`.
fn packed_ball(r: Packed, k: usize) -> Vec<Packed> {
    let mut out = Vec::new();
    for head in 0..=r.len {
        for del in 0..=k.min(r.len - head) {
            for ins_len in 0..=k {
                for ins in 0..(1u128 << ins_len) {
                    out.push(r.splice(head, del, ins, ins_len));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Strings of length `len` with `s` among their one-edit descendants.
fn packed_preimages(s: Packed, len: usize, k: usize, out: &mut Vec<Packed>) {
    for head in 0..=s.len {
        for a in 0..=k {
            let Some(b) = (a + s.len).checked_sub(len) else { continue };
            if b > k || head + b > s.len {
                continue;
            }
            for v in 0..(1u128 << a) {
                out.push(s.splice(head, b, v, a));
            }
        }
    }
}

/// Regions checked for separation, as (0-based first block, bit range).
fn regions(n: usize, block_len: usize) -> Vec<(usize, usize, usize)> {
    let layout = BlockLayout::new(n, block_len);
    let count = layout.count();
    if count == 1 {
        return vec![(0, 1, n)];
    }
    (0..count - 1)
        .map(|i| (i, layout.range(i).0, layout.range(i + 1).1))
        .collect()
}

/// Distinct values `g` such that a prime `P` separates every adjacent block
/// pair of `x` from its confusables exactly when `P` divides no `g`.
///
/// For a confusable `r'` of `r`, both labels agree iff `P` divides the
/// difference of the left blocks and that of the (padded) right blocks,
/// i.e. their gcd.
pub fn separation_moduli(x: &[bool], block_len: usize, k: usize) -> Vec<u64> {
    let n = x.len();
    let layout = BlockLayout::new(n, block_len);
    let mut gs = Vec::new();
    let mut preimages = Vec::new();
    for (first, lo, hi) in regions(n, block_len) {
        let r = Packed { val: crate::bits::uint_of(&x[lo - 1..hi]), len: hi + 1 - lo };
        preimages.clear();
        for s in packed_ball(r, k) {
            packed_preimages(s, r.len, k, &mut preimages);
        }
        preimages.sort_unstable();
        preimages.dedup();
        let single = layout.count() == 1;
        let right_len = if single { 0 } else { r.len - block_len };
        let right_pad = if single { 0 } else { layout.pad(first + 1) };
        let left_pad = if single { layout.pad(0) } else { 0 };
        for q in preimages.iter().filter(|q| q.val != r.val) {
            let dl = (shr(r.val, right_len) << left_pad).abs_diff(shr(q.val, right_len) << left_pad);
            let mask = low_mask(right_len);
            let dr = ((r.val & mask) << right_pad).abs_diff((q.val & mask) << right_pad);
            let g = dl.gcd(&dr);
            gs.push(u64::try_from(g).expect("block differences fit in 64 bits"));
        }
    }
    gs.sort_unstable();
    gs.dedup();
    gs
}

/// Every string obtainable from `s` by one `k`-substring edit whose
/// position lies in `window` (1-based, inclusive; whole string if `None`).
/// Includes `s` itself.
pub fn edit_ball(s: &BitString, k: usize, window: Option<(usize, usize)>) -> BTreeSet<BitString> {
    let (lo, hi) = window.unwrap_or((1, s.len() + 1));
    let mut out = BTreeSet::new();
    out.insert(s.clone());
    let bits = s.as_slice();
    for pos in lo.max(1)..=hi.min(s.len() + 1) {
        for del in 0..=k.min(s.len() + 1 - pos) {
            for ins_len in 0..=k {
                for v in 0..(1u128 << ins_len) {
                    let ins = BitString::from_uint(v, ins_len);
                    let mut y = bits[..pos - 1].to_vec();
                    y.extend(ins.iter());
                    y.extend_from_slice(&bits[pos - 1 + del..]);
                    out.insert(BitString::new(y));
                }
            }
        }
    }
    out
}

/// Every string of length `len` from which `y` is reachable by one
/// `k`-substring edit.
pub fn preimages(y: &BitString, len: usize, k: usize) -> BTreeSet<BitString> {
    let mut out = BTreeSet::new();
    let bits = y.as_slice();
    for pos in 1..=y.len() + 1 {
        for a in 0..=k {
            let Some(b) = (a + y.len()).checked_sub(len) else { continue };
            if b > k || pos + b > y.len() + 1 {
                continue;
            }
            for v in 0..(1u128 << a) {
                let mut x = bits[..pos - 1].to_vec();
                x.extend(BitString::from_uint(v, a).iter());
                x.extend_from_slice(&bits[pos - 1 + b..]);
                out.insert(BitString::new(x));
            }
        }
    }
    out
}

/// Confusables of one adjacent block pair (or of the single block).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusableRegion {
    /// 0-based index of the first block of the region.
    pub first_block: usize,
    pub region: BitString,
    pub confusables: BTreeSet<BitString>,
}

/// Direct enumeration of the confusable sets; slow, meant for checking.
pub fn confusable_pairs(x: &BitString, block_len: usize, k: usize) -> Vec<ConfusableRegion> {
    regions(x.len(), block_len)
        .into_iter()
        .map(|(first, lo, hi)| {
            let region = x.substring(lo, hi).expect("region inside x");
            let mut confusables = BTreeSet::new();
            for s in edit_ball(&region, k, None) {
                confusables.extend(preimages(&s, region.len(), k));
            }
            confusables.remove(&region);
            ConfusableRegion { first_block: first, region, confusables }
        })
        .collect()
}

/// Bits of `y` packed into words for fast extraction of short runs.
struct Words {
    words: Vec<u64>,
}

impl Words {
    fn new(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64) + 1];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (63 - i % 64);
            }
        }
        Self { words }
    }

    /// Value of `len ≤ 64` bits starting at 0-based `start`.
    #[inline]
    fn get(&self, start: usize, len: usize) -> u64 {
        if len == 0 {
            return 0;
        }
        let w = start / 64;
        let off = start % 64;
        let joined = (u128::from(self.words[w]) << 64) | u128::from(self.words[w + 1]);
        ((joined << off) >> (128 - len)) as u64
    }
}

/// What the labels of the blocks touched by a candidate must equal.
enum Target {
    Small(u64),
    Bits(Vec<bool>),
}

struct Group {
    /// 0-based touched blocks `first..=last`; empty when `first > last`.
    first: usize,
    last: usize,
    targets: Option<Vec<Target>>,
}

/// A candidate preimage of `y`: replace `y[pos..pos+ins_len)` by the
/// `del_len` bits of `v` (so `x → y` is `EditOp { pos, del_len, ins }`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub x: BitString,
    pub op: EditOp,
}

/// Scans preimages of `y` of length `n` against `ψ` without materializing
/// candidates that fail.
pub(crate) struct PreimageScanner<'a> {
    y: &'a [bool],
    words: Words,
    n: usize,
    k: usize,
    layout: BlockLayout,
    hash: BlockHash,
    psi: &'a Psi,
    modulus: BigUint,
    /// Labels of blocks read from `y` at their own position (before the edit).
    pre: Vec<Option<BigUint>>,
    /// Labels of blocks read from `y` shifted by `|y| − n` (after the edit).
    post: Vec<Option<BigUint>>,
}

impl<'a> PreimageScanner<'a> {
    pub(crate) fn new(y: &'a [bool], n: usize, k: usize, hash: BlockHash, psi: &'a Psi) -> Self {
        let layout = BlockLayout::new(n, hash.block_len);
        let shift = y.len() as isize - n as isize;
        let mut pre = Vec::with_capacity(layout.count());
        let mut post = Vec::with_capacity(layout.count());
        for i in 0..layout.count() {
            let (s, e) = layout.range(i);
            pre.push((e <= y.len()).then(|| hash.label(&y[s - 1..e])));
            let (ps, pe) = (s as isize + shift, e as isize + shift);
            post.push((ps >= 1 && pe as usize <= y.len()).then(|| hash.label(&y[ps as usize - 1..pe as usize])));
        }
        Self {
            y,
            words: Words::new(y),
            n,
            k,
            layout,
            hash,
            psi,
            modulus: hash.modulus(),
            pre,
            post,
        }
    }

    /// Touched blocks of a candidate replacing `a` bits at `j`.
    fn touched(&self, j: usize, a: usize) -> (usize, usize) {
        if j > self.n {
            return (1, 0);
        }
        let first = self.layout.block_of(j);
        if a > 0 {
            (first, self.layout.block_of(j + a - 1))
        } else if self.layout.range(first).0 < j {
            (first, first)
        } else {
            (1, 0)
        }
    }

    /// Targets for candidates replacing bits at `j` that touch blocks
    /// `first..=last` (none when `first > last`). Untouched blocks ending
    /// before `j` are read from `y` unshifted, the rest shifted.
    fn group(&self, j: usize, first: usize, last: usize) -> Group {
        let touched: Vec<usize> = if first > last { Vec::new() } else { (first..=last).collect() };
        let none = Group { first, last, targets: None };
        let mut residual = [self.psi.odd.clone(), self.psi.even.clone()];
        for i in 0..self.layout.count() {
            if touched.contains(&i) {
                continue;
            }
            let label = if self.layout.range(i).1 < j { &self.pre[i] } else { &self.post[i] };
            let Some(label) = label else { return none };
            let r = &mut residual[i % 2];
            *r = (&*r + &self.modulus - label) % &self.modulus;
        }
        // a parity with no touched block must cancel exactly
        for (par, r) in residual.iter().enumerate() {
            if !touched.iter().any(|i| i % 2 == par) && !r.is_zero() {
                return none;
            }
        }
        let mut targets = Vec::with_capacity(touched.len());
        for &i in &touched {
            match self.target_for(i, &residual[i % 2]) {
                Some(t) => targets.push(t),
                None => return none,
            }
        }
        Group { first, last, targets: Some(targets) }
    }

    fn target_for(&self, i: usize, residual: &BigUint) -> Option<Target> {
        let pad = self.layout.pad(i);
        if self.hash.block_len <= 64 {
            let v = residual.to_u64()?;
            match self.hash.mode {
                PhiMode::Compressed if v >= self.hash.prime => None,
                PhiMode::Reference if pad > 0 && v & ((1u64 << pad) - 1) != 0 => None,
                _ => Some(Target::Small(v)),
            }
        } else {
            if residual.bits() > self.hash.block_len as u64 {
                return None;
            }
            let (s, e) = self.layout.range(i);
            let bits: Vec<bool> = (0..self.hash.block_len)
                .map(|t| residual.bit((self.hash.block_len - 1 - t) as u64))
                .collect();
            if bits[e + 1 - s..].iter().any(|&b| b) {
                return None;
            }
            Some(Target::Bits(bits[..e + 1 - s].to_vec()))
        }
    }

    /// Bit of the candidate at 1-based position `p`.
    #[inline]
    fn cand_bit(&self, p: usize, j: usize, a: usize, b: usize, v: u128) -> bool {
        if p < j {
            self.y[p - 1]
        } else if p < j + a {
            (v >> (a - 1 - (p - j))) & 1 == 1
        } else {
            self.y[p - a + b - 1]
        }
    }

    /// Padded value of block `i` of the candidate (block length ≤ 64).
    #[inline]
    fn cand_block(&self, i: usize, j: usize, a: usize, b: usize, v: u128) -> u64 {
        let (s, e) = self.layout.range(i);
        let mut acc: u128 = 0;
        // part before the edit
        let pre_end = e.min(j - 1);
        if pre_end >= s {
            let len = pre_end + 1 - s;
            acc = u128::from(self.words.get(s - 1, len));
        }
        // inserted bits
        let vs = s.max(j);
        let ve = e.min(j + a - 1);
        if a > 0 && ve >= vs {
            let len = ve + 1 - vs;
            let from = vs - j;
            let bits = (v >> (a - from - len)) & low_mask(len);
            acc = (acc << len) | bits;
        }
        // part after the edit, read from y shifted
        let ts = s.max(j + a);
        if e >= ts {
            let len = e + 1 - ts;
            acc = (acc << len) | u128::from(self.words.get(ts - a + b - 1, len));
        }
        (acc << self.layout.pad(i)) as u64
    }

    fn matches(&self, group: &Group, j: usize, a: usize, b: usize, v: u128) -> bool {
        let Some(targets) = &group.targets else { return false };
        for (t, i) in targets.iter().zip(group.first..=group.last) {
            let ok = match t {
                Target::Small(want) => self.hash.label_small(self.cand_block(i, j, a, b, v)) == *want,
                Target::Bits(want) => {
                    let (s, _) = self.layout.range(i);
                    want.iter().enumerate().all(|(o, &bit)| self.cand_bit(s + o, j, a, b, v) == bit)
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn materialize(&self, j: usize, a: usize, b: usize, v: u128) -> Candidate {
        let mut x = self.y[..j - 1].to_vec();
        x.extend(BitString::from_uint(v, a).iter());
        x.extend_from_slice(&self.y[j - 1 + b..]);
        let ins = BitString::from_slice(&self.y[j - 1..j - 1 + b]);
        Candidate { x: BitString::new(x), op: EditOp::new(j, a, ins) }
    }

    /// Candidates whose replaced span `[j, j+a−1]` lies in `[lo, hi]` (a pure
    /// insertion point `j` may be `hi + 1`) and whose labels reproduce `ψ`.
    /// Canonical order, deduplicated by content.
    pub(crate) fn scan(&self, lo: usize, hi: usize) -> Vec<Candidate> {
        let mut out: Vec<Candidate> = Vec::new();
        let mut seen: HashSet<BitString> = HashSet::new();
        let mut cache: Option<(usize, usize, usize, Group)> = None;
        for j in lo.max(1)..=(hi + 1).min(self.n + 1) {
            for a in 0..=self.k {
                // a − b = n − |y|
                let Some(b) = (a + self.y.len()).checked_sub(self.n) else { continue };
                if b > self.k || j + a > self.n + 1 || j + b > self.y.len() + 1 {
                    continue;
                }
                if a > 0 && j + a - 1 > hi {
                    continue;
                }
                let (first, last) = self.touched(j, a);
                // empty groups depend on where the split falls
                let key = if first > last { (j, 0, 1) } else { (first, last, 0) };
                let fresh = !matches!(&cache, Some((f, l, e, _)) if (*f, *l, *e) == key);
                if fresh {
                    let g = self.group(j, first, last);
                    cache = Some((key.0, key.1, key.2, g));
                }
                let group = &cache.as_ref().expect("group cached").3;
                if group.targets.is_none() {
                    continue;
                }
                for v in 0..(1u128 << a) {
                    if self.matches(group, j, a, b, v) {
                        let c = self.materialize(j, a, b, v);
                        if seen.insert(c.x.clone()) {
                            out.push(c);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Repair `y` given `ψ` of the original and an interval of original
/// positions containing the edit.
///
/// The interval may hold at most `block_len` positions, so the edit touches
/// at most two blocks. Every other block is read from `y`; the affected
/// ones are found by enumerating the edits inside the interval.
pub fn recover_region(
    y: &BitString,
    psi: &Psi,
    hash: &BlockHash,
    n: usize,
    k: usize,
    interval: (usize, usize),
) -> Result<BitString, BlockHashError> {
    let (lo, hi) = interval;
    if lo == 0 || hi < lo || hi > n || hi + 1 - lo > hash.block_len {
        return Err(BlockHashError::InvalidInterval { lo, hi, block_len: hash.block_len, n });
    }
    if y.len().abs_diff(n) > k {
        return Err(BlockHashError::LengthMismatch { received: y.len(), n, k });
    }
    let scanner = PreimageScanner::new(y.as_slice(), n, k, *hash, psi);
    let mut found = scanner.scan(lo, hi);
    match found.len() {
        0 => Err(BlockHashError::NoCandidate),
        1 => {
            let c = found.pop().expect("one candidate");
            debug_assert_eq!(crate::channel::apply_edit(&c.x, &c.op).ok().as_ref(), Some(y));
            Ok(c.x)
        }
        count => Err(BlockHashError::Ambiguous { count }),
    }
}
