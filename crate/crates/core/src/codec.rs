//! Sketch construction, the decoder and the `SSEC1` text format.
//!
//! A sketch holds three residues of the feature vector
//! (`VT(f(x)) mod m_vt`, `Σf(x) mod m_fsum`, part count `mod m_npart`) and
//! the block aggregate `ψ`. The decoder locates the edit among the parts,
//! repairs the affected blocks from `ψ`, and checks every answer against
//! the whole sketch. When the fast path cannot produce a unique verified
//! answer it falls back to trying every preimage of `y`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;
use crate::blockhash::{
    compressed_supported, phi_sketch, psi, BlockHash, BlockHashError, BlockLayout, PhiMode, PreimageScanner, Psi,
};
use crate::features::{feature_vector, FeatureVector};
use crate::locate::{locate, vt, LocateError, LocatorInput};
use crate::modular::{centered_residue, ModularError};
use crate::params::{ceil_log2, derive_params, CodeParams, Mode, Overrides, ParamsError};
use crate::partition::{part_lengths, partition};

pub const SKETCH_VERSION: u64 = 1;
const MAGIC: &str = "SSEC1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("input has a part of {longest} bits, above the density bound {density}")]
    NotDense { longest: usize, density: usize },
    #[error("input has {got} bits but the parameters are for {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    BlockHash(#[from] BlockHashError),
    #[error("no candidate within one edit of the input matches the sketch")]
    NoCandidate,
    #[error("{count} distinct candidates match the sketch")]
    Ambiguous { count: usize },
    #[error("decoding failed: {0}")]
    DecodeFailure(String),
    #[error("feature arithmetic overflowed")]
    Overflow,
}

/// `(VT(f(x)) mod m_vt, Σf(x) mod m_fsum, n_parts(x) mod m_npart)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HTriple {
    pub vt: u128,
    pub fsum: u64,
    pub npart: u64,
}

fn h_from_features(fv: &FeatureVector, params: &CodeParams) -> HTriple {
    HTriple {
        vt: vt(&fv.values) % params.vt_modulus,
        fsum: (fv.total % u128::from(params.sum_modulus)) as u64,
        npart: fv.n_parts() as u64 % params.part_modulus,
    }
}

pub fn h_of(x: &BitString, params: &CodeParams) -> HTriple {
    h_from_features(&feature_vector(x.as_slice(), params), params)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sketch {
    pub version: u64,
    /// Parameters as transmitted: `feature_bound` is `8·δ·C` and
    /// `phi_width` is the width of the `ψ` components.
    pub params: CodeParams,
    pub h: HTriple,
    pub psi: Psi,
    pub hash: BlockHash,
}

/// Compressed labels when the block geometry allows it, reference labels
/// otherwise.
pub fn default_phi_mode(params: &CodeParams) -> PhiMode {
    if compressed_supported(params) {
        PhiMode::Compressed
    } else {
        PhiMode::Reference
    }
}

pub fn sketch(x: &BitString, params: &CodeParams) -> Result<Sketch, CodecError> {
    sketch_with(x, params, default_phi_mode(params))
}

pub fn sketch_with(x: &BitString, params: &CodeParams, mode: PhiMode) -> Result<Sketch, CodecError> {
    if x.len() != params.n {
        return Err(CodecError::LengthMismatch { expected: params.n, got: x.len() });
    }
    let longest = part_lengths(x.as_slice(), params.k).into_iter().max().unwrap_or(0);
    if longest > params.density {
        return Err(CodecError::NotDense { longest, density: params.density });
    }
    let phi = phi_sketch(x, params, mode)?;
    let mut params = params.clone();
    params.feature_bound = transmitted_feature_bound(params.density, params.length_weight)?;
    params.phi_width = phi.hash.width;
    Ok(Sketch { version: SKETCH_VERSION, h: h_of(x, &params), psi: phi.psi(), hash: phi.hash, params })
}

fn transmitted_feature_bound(density: usize, length_weight: u64) -> Result<u64, CodecError> {
    (density as u64)
        .checked_mul(8)
        .and_then(|v| v.checked_mul(length_weight))
        .ok_or(CodecError::Overflow)
}

/// `Σf(y) ≡ Σf(x)` and `n_parts(y) ≡ n_parts(x)` modulo their moduli.
pub fn detect_identity(y: &BitString, sk: &Sketch) -> bool {
    identity_from_features(&feature_vector(y.as_slice(), &sk.params), sk)
}

fn identity_from_features(fv: &FeatureVector, sk: &Sketch) -> bool {
    let h = h_from_features(fv, &sk.params);
    h.fsum == sk.h.fsum && h.npart == sk.h.npart
}

/// The members of the code defined by one sketch value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeClass {
    pub params: CodeParams,
    pub hash: BlockHash,
    pub h: HTriple,
    pub psi: Psi,
}

impl From<&Sketch> for CodeClass {
    fn from(sk: &Sketch) -> Self {
        CodeClass { params: sk.params.clone(), hash: sk.hash, h: sk.h, psi: sk.psi.clone() }
    }
}

/// `x` is dense and reproduces the class's `h` and `ψ`.
pub fn is_codeword(x: &BitString, class: &CodeClass) -> bool {
    x.len() == class.params.n
        && part_lengths(x.as_slice(), class.params.k).into_iter().all(|l| l <= class.params.density)
        && h_of(x, &class.params) == class.h
        && psi(x.as_slice(), &class.hash) == class.psi
}

impl Sketch {
    /// Whether `x` reproduces every field of the sketch.
    pub fn verifies(&self, x: &BitString) -> bool {
        is_codeword(x, &CodeClass::from(self))
    }
}

/// Why the decoder left the fast path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FallbackReason {
    /// The congruences claim `y = x` but `y` does not verify.
    IdentityUnverified,
    Delta(ModularError),
    Locate(LocateError),
    NoRegionCandidate,
    AmbiguousRegion { count: usize },
}

impl fmt::Display for FallbackReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FallbackReason::IdentityUnverified => f.write_str("identity check passed but y does not verify"),
            FallbackReason::Delta(e) => write!(f, "delta recovery: {e}"),
            FallbackReason::Locate(e) => write!(f, "location: {e}"),
            FallbackReason::NoRegionCandidate => f.write_str("no verified candidate in the located region"),
            FallbackReason::AmbiguousRegion { count } => write!(f, "{count} verified candidates in the located region"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecoverPath {
    Identity,
    Region {
        /// Located interval of original positions.
        interval: (usize, usize),
        /// Windows of at most one block length scanned.
        windows: usize,
        /// Blocks overlapped by the window that produced the answer.
        blocks: usize,
    },
    Fallback(FallbackReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovery {
    pub x: BitString,
    pub path: RecoverPath,
}

pub fn recover(y: &BitString, sk: &Sketch) -> Result<BitString, CodecError> {
    recover_with_trace(y, sk).map(|r| r.x)
}

pub fn recover_with_trace(y: &BitString, sk: &Sketch) -> Result<Recovery, CodecError> {
    let p = &sk.params;
    if y.len().abs_diff(p.n) > p.k {
        return Err(CodecError::DecodeFailure(format!(
            "received {} bits, expected {} ± {}",
            y.len(),
            p.n,
            p.k
        )));
    }
    let fv = feature_vector(y.as_slice(), p);
    let reason = if identity_from_features(&fv, sk) {
        if sk.verifies(y) {
            return Ok(Recovery { x: y.clone(), path: RecoverPath::Identity });
        }
        FallbackReason::IdentityUnverified
    } else {
        match fast_path(y, &fv, sk) {
            Ok(r) => return Ok(r),
            Err(reason) => reason,
        }
    };
    let x = fallback_recover(y, sk)?;
    Ok(Recovery { x, path: RecoverPath::Fallback(reason) })
}

fn fast_path(y: &BitString, fv: &FeatureVector, sk: &Sketch) -> Result<Recovery, FallbackReason> {
    let p = &sk.params;
    let n_y = fv.n_parts() as u64;
    let npart_diff = (sk.h.npart + p.part_modulus - n_y % p.part_modulus) % p.part_modulus;
    let d_len = centered_residue(u128::from(npart_diff), u128::from(p.part_modulus), 2).map_err(FallbackReason::Delta)?;
    let m = u128::from(p.sum_modulus);
    let fsum_diff = (u128::from(sk.h.fsum) + m - fv.total % m) % m;
    let d_sum = centered_residue(fsum_diff, m, (m / 2).saturating_sub(1)).map_err(FallbackReason::Delta)?;
    let input = LocatorInput {
        w: fv.values.clone(),
        d_len,
        d_sum,
        vt_mod: sk.h.vt,
        modulus: p.vt_modulus,
        bound: u128::from(p.decoder_feature_bound()),
        big_k: p.feature_edit_bound,
    };
    let found = locate(&input).map_err(FallbackReason::Locate)?;
    let interval = parts_to_bits(y, p, found.lo, found.hi, d_len);

    let windows = tile(interval, p.block_len, p.k);
    let scanner = PreimageScanner::new(y.as_slice(), p.n, p.k, sk.hash, &sk.psi);
    let layout = BlockLayout::new(p.n, p.block_len);
    let mut verified: Vec<(BitString, usize)> = Vec::new();
    for &(lo, hi) in &windows {
        for c in scanner.scan(lo, hi) {
            if verified.iter().any(|(x, _)| *x == c.x) || !sk.verifies(&c.x) {
                continue;
            }
            let blocks = layout.block_of(hi) - layout.block_of(lo) + 1;
            verified.push((c.x, blocks));
        }
    }
    match verified.len() {
        0 => Err(FallbackReason::NoRegionCandidate),
        1 => {
            let (x, blocks) = verified.pop().expect("one candidate");
            Ok(Recovery { x, path: RecoverPath::Region { interval, windows: windows.len(), blocks } })
        }
        count => Err(FallbackReason::AmbiguousRegion { count }),
    }
}

/// Original bit positions covering parts `lo..=hi` of `x`, widened by `K`
/// parts and `k` bits on each side. Part boundaries are read from `y`.
fn parts_to_bits(y: &BitString, p: &CodeParams, lo: usize, hi: usize, d_len: i128) -> (usize, usize) {
    let part = partition(y, p.k);
    let count = part.n_parts() as i128;
    let big_k = p.feature_edit_bound as i128;
    let first = (lo as i128 - big_k).clamp(1, count) as usize;
    let last = (hi as i128 + big_k - d_len).clamp(1, count) as usize;
    let start = part.start(first).saturating_sub(p.k).max(1);
    let end = part.end(last) as i128 + p.k as i128 + p.n as i128 - y.len() as i128;
    let end = end.clamp(1, p.n as i128) as usize;
    (start.min(end), end)
}

/// Cover `[lo, hi]` by windows of at most `block_len` positions, each
/// overlapping the next by `k` so every span of at most `k` positions lies
/// inside one window.
fn tile(interval: (usize, usize), block_len: usize, k: usize) -> Vec<(usize, usize)> {
    let (lo, hi) = interval;
    if hi + 1 - lo <= block_len {
        return vec![interval];
    }
    let stride = block_len.saturating_sub(k).max(1);
    let mut out = Vec::new();
    let mut start = lo;
    loop {
        let end = (start + block_len - 1).min(hi);
        out.push((start, end));
        if end == hi {
            return out;
        }
        start += stride;
    }
}

/// Try every preimage of `y` of the original length and keep those that
/// reproduce the whole sketch.
pub fn fallback_recover(y: &BitString, sk: &Sketch) -> Result<BitString, CodecError> {
    let mut all = fallback_candidates(y, sk);
    match all.len() {
        0 => Err(CodecError::NoCandidate),
        1 => Ok(all.pop().expect("one candidate")),
        count => Err(CodecError::Ambiguous { count }),
    }
}

/// All verified preimages, in canonical order of their first edit.
pub fn fallback_candidates(y: &BitString, sk: &Sketch) -> Vec<BitString> {
    let p = &sk.params;
    if y.len().abs_diff(p.n) > p.k {
        return Vec::new();
    }
    let scanner = PreimageScanner::new(y.as_slice(), p.n, p.k, sk.hash, &sk.psi);
    scanner.scan(1, p.n).into_iter().map(|c| c.x).filter(|x| sk.verifies(x)).collect()
}

/// Bit counts of every sketch field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedundancyReport {
    pub n: usize,
    pub k: usize,
    pub vt_bits: u32,
    pub fsum_bits: u32,
    pub npart_bits: u32,
    pub h_bits: u32,
    pub phi_width: u32,
    pub prime_bits: u32,
    pub psi_bits: u32,
    pub total_bits: u32,
    /// `⌈2·log₂ n⌉`, the redundancy of earlier single-edit constructions.
    pub baseline_bits: u32,
    pub log2_n: f64,
    pub log2_log2_n: f64,
}

pub fn redundancy_report(params: &CodeParams) -> RedundancyReport {
    let vt_bits = ceil_log2(params.vt_modulus);
    let fsum_bits = ceil_log2(u128::from(params.sum_modulus));
    let npart_bits = ceil_log2(u128::from(params.part_modulus));
    let h_bits = vt_bits + fsum_bits + npart_bits;
    let phi_width = params.phi_width;
    let psi_bits = 2 * phi_width;
    let n = params.n as f64;
    RedundancyReport {
        n: params.n,
        k: params.k,
        vt_bits,
        fsum_bits,
        npart_bits,
        h_bits,
        phi_width,
        prime_bits: phi_width,
        psi_bits,
        total_bits: h_bits + psi_bits + phi_width,
        baseline_bits: (2.0 * n.log2()).ceil() as u32,
        log2_n: n.log2(),
        log2_log2_n: n.log2().max(1.0).log2(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sketch line {line}: {reason}")]
pub struct SketchParseError {
    pub line: usize,
    pub reason: String,
}

const KEYS: [&str; 20] = [
    "version", "k", "n", "mode", "B", "C", "delta", "K", "m_vt", "m_fsum", "m_npart", "blk", "b_phi", "phi_mode", "P",
    "h_vt", "h_fsum", "h_npart", "psi_odd", "psi_even",
];

impl Sketch {
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let values: [String; 20] = [
            self.version.to_string(),
            p.k.to_string(),
            p.n.to_string(),
            p.mode.wire_code().to_string(),
            p.run_weight.to_string(),
            p.length_weight.to_string(),
            p.density.to_string(),
            p.feature_edit_bound.to_string(),
            p.vt_modulus.to_string(),
            p.sum_modulus.to_string(),
            p.part_modulus.to_string(),
            p.block_len.to_string(),
            self.hash.width.to_string(),
            self.hash.mode.wire_code().to_string(),
            self.hash.prime.to_string(),
            self.h.vt.to_string(),
            self.h.fsum.to_string(),
            self.h.npart.to_string(),
            self.psi.odd.to_string(),
            self.psi.even.to_string(),
        ];
        let mut out = String::from(MAGIC);
        out.push('\n');
        for (key, value) in KEYS.iter().zip(values) {
            out.push_str(key);
            out.push('=');
            out.push_str(&value);
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Sketch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Sketch {
    type Err = SketchParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_sketch(text)
    }
}

fn parse_sketch(text: &str) -> Result<Sketch, SketchParseError> {
    let fail = |line: usize, reason: String| SketchParseError { line, reason };
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| fail(text.lines().count().max(1), "missing trailing newline".into()))?;
    let lines: Vec<&str> = body.split('\n').collect();
    if lines.first().copied() != Some(MAGIC) {
        return Err(fail(1, format!("expected magic line {MAGIC}")));
    }
    if lines.len() != KEYS.len() + 1 {
        return Err(fail(lines.len(), format!("expected {} fields, found {}", KEYS.len(), lines.len() - 1)));
    }
    let mut raw: Vec<&str> = Vec::with_capacity(KEYS.len());
    for (i, (line, key)) in lines[1..].iter().zip(KEYS).enumerate() {
        let line_no = i + 2;
        let (k, v) = line.split_once('=').ok_or_else(|| fail(line_no, "expected key=value".into()))?;
        if k != key {
            return Err(fail(line_no, format!("expected key `{key}`, found `{k}`")));
        }
        if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) {
            return Err(fail(line_no, format!("`{key}` must be a decimal integer")));
        }
        raw.push(v);
    }
    let num = |idx: usize| -> Result<u128, SketchParseError> {
        raw[idx].parse::<u128>().map_err(|e| fail(idx + 2, format!("`{}`: {e}", KEYS[idx])))
    };
    let small = |idx: usize| -> Result<u64, SketchParseError> {
        u64::try_from(num(idx)?).map_err(|_| fail(idx + 2, format!("`{}` is out of range", KEYS[idx])))
    };
    let size = |idx: usize| -> Result<usize, SketchParseError> {
        usize::try_from(small(idx)?).map_err(|_| fail(idx + 2, format!("`{}` is out of range", KEYS[idx])))
    };
    let big = |idx: usize| -> Result<BigUint, SketchParseError> {
        raw[idx].parse::<BigUint>().map_err(|e| fail(idx + 2, format!("`{}`: {e}", KEYS[idx])))
    };

    let version = small(0)?;
    if version != SKETCH_VERSION {
        return Err(fail(2, format!("unsupported version {version}")));
    }
    let (k, n) = (size(1)?, size(2)?);
    let mode = Mode::from_wire_code(small(3)?).ok_or_else(|| fail(5, "mode must be 0 or 1".into()))?;
    let phi_mode = PhiMode::from_wire_code(small(13)?).ok_or_else(|| fail(15, "phi_mode must be 0 or 1".into()))?;
    let width = u32::try_from(small(12)?).map_err(|_| fail(14, "`b_phi` is out of range".into()))?;
    let density = size(6)?;
    let length_weight = small(5)?;
    let feature_bound = transmitted_feature_bound(density, length_weight).map_err(|e| fail(8, e.to_string()))?;
    let wire = CodeParams {
        k,
        n,
        mode,
        run_weight: small(4)?,
        length_weight,
        density,
        feature_edit_bound: size(7)?,
        vt_modulus: num(8)?,
        sum_modulus: small(9)?,
        part_modulus: small(10)?,
        feature_bound,
        block_len: size(11)?,
        phi_width: width,
    };
    let params = match mode {
        Mode::Paper => {
            let mut derived = derive_params(k, n, Mode::Paper, None).map_err(|e| fail(3, e.to_string()))?;
            derived.phi_width = width;
            if derived != wire {
                return Err(fail(2, "paper-mode constants do not match those derived from k and n".into()));
            }
            derived
        }
        Mode::Scaled => {
            let o = Overrides {
                run_weight: Some(wire.run_weight),
                length_weight: Some(wire.length_weight),
                density: Some(wire.density),
                feature_edit_bound: Some(wire.feature_edit_bound),
                vt_modulus: Some(wire.vt_modulus),
                sum_modulus: Some(wire.sum_modulus),
                part_modulus: Some(wire.part_modulus),
                feature_bound: Some(wire.feature_bound),
                block_len: Some(wire.block_len),
                phi_width: Some(wire.phi_width),
            };
            let checked = derive_params(k, n, Mode::Scaled, Some(&o)).map_err(|e| fail(3, e.to_string()))?;
            if checked != wire {
                return Err(fail(13, "block length exceeds n".into()));
            }
            checked
        }
    };
    let prime = small(14)?;
    let hash = match phi_mode {
        PhiMode::Reference => {
            if prime != 0 {
                return Err(fail(16, "P must be 0 in reference mode".into()));
            }
            if width as usize != params.block_len {
                return Err(fail(14, "b_phi must equal blk in reference mode".into()));
            }
            BlockHash::reference(params.block_len)
        }
        PhiMode::Compressed => {
            if !compressed_supported(&params) {
                return Err(fail(15, "compressed mode is not supported for this block length".into()));
            }
            if !primal_check::miller_rabin(prime) {
                return Err(fail(16, format!("P = {prime} is not prime")));
            }
            if width < 64 && prime >= 1u64 << width {
                return Err(fail(16, "P does not fit in b_phi bits".into()));
            }
            BlockHash { mode: PhiMode::Compressed, prime, width, block_len: params.block_len }
        }
    };
    let h = HTriple { vt: num(15)?, fsum: small(16)?, npart: small(17)? };
    if h.vt >= params.vt_modulus {
        return Err(fail(17, "h_vt is not reduced".into()));
    }
    if h.fsum >= params.sum_modulus {
        return Err(fail(18, "h_fsum is not reduced".into()));
    }
    if h.npart >= params.part_modulus {
        return Err(fail(19, "h_npart is not reduced".into()));
    }
    let psi = Psi { odd: big(18)?, even: big(19)? };
    for (idx, v) in [(18, &psi.odd), (19, &psi.even)] {
        if v.bits() > u64::from(width) {
            return Err(fail(idx + 2, format!("`{}` does not fit in b_phi bits", KEYS[idx])));
        }
    }
    Ok(Sketch { version, params, h, psi, hash })
}
