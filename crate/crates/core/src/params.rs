//! Constants governing one code instance.
//!
//! `Mode::Paper` derives every constant from `(k, n)`. Those constants are
//! large enough that the ψ block covers the whole string at any practical
//! length, so `Mode::Scaled` takes every constant explicitly to exercise the
//! multi-block machinery on small inputs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("window constant k must be at least 1")]
    ZeroWindow,
    #[error("string length {n} is shorter than one pattern (2k = {min})")]
    TooShort { n: usize, min: usize },
    #[error("scaled mode requires an explicit value for `{0}`")]
    MissingOverride(&'static str),
    #[error("invalid value for `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("parameter arithmetic overflowed while deriving `{0}`")]
    Overflow(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    Scaled,
}

impl Mode {
    pub fn wire_code(self) -> u8 {
        match self {
            Mode::Paper => 0,
            Mode::Scaled => 1,
        }
    }

    pub fn from_wire_code(code: u64) -> Option<Mode> {
        match code {
            0 => Some(Mode::Paper),
            1 => Some(Mode::Scaled),
            _ => None,
        }
    }
}

/// All constants of one code instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeParams {
    /// Window constant: an edit deletes and inserts at most `k` bits.
    pub k: usize,
    /// Length of the protected string.
    pub n: usize,
    pub mode: Mode,
    /// Weight of the `1^k` run count inside the feature map.
    pub run_weight: u64,
    /// Weight of the part length inside the feature map.
    pub length_weight: u64,
    /// Density bound: every part of a protected string has at most this many bits.
    pub density: usize,
    /// Size bound of the induced edit on feature vectors (3 in paper mode).
    pub feature_edit_bound: usize,
    pub vt_modulus: u128,
    pub sum_modulus: u64,
    pub part_modulus: u64,
    /// Bound on feature values of dense strings and their one-edit outputs.
    pub feature_bound: u64,
    /// Length of the fixed blocks hashed by φ.
    pub block_len: usize,
    /// Width in bits of each ψ component in compressed mode.
    pub phi_width: u32,
}

/// Explicit constants for scaled mode. Every field must be set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overrides {
    pub run_weight: Option<u64>,
    pub length_weight: Option<u64>,
    pub density: Option<usize>,
    pub feature_edit_bound: Option<usize>,
    pub vt_modulus: Option<u128>,
    pub sum_modulus: Option<u64>,
    pub part_modulus: Option<u64>,
    pub feature_bound: Option<u64>,
    pub block_len: Option<usize>,
    pub phi_width: Option<u32>,
}

impl Overrides {
    /// Paper-mode formulas for the feature weights and moduli, with an explicit
    /// density bound, block length and φ width.
    pub fn paper_weights(
        k: usize,
        n: usize,
        density: usize,
        block_len: usize,
        phi_width: u32,
    ) -> Result<Overrides, ParamsError> {
        let run_weight = run_weight(k)?;
        let length_weight = length_weight(k)?;
        Ok(Overrides {
            run_weight: Some(run_weight),
            length_weight: Some(length_weight),
            density: Some(density),
            feature_edit_bound: Some(PAPER_FEATURE_EDIT_BOUND),
            vt_modulus: Some(vt_modulus(length_weight, n)?),
            sum_modulus: Some(sum_modulus(length_weight, k)?),
            part_modulus: Some(PAPER_PART_MODULUS),
            feature_bound: Some(feature_bound(density, length_weight)?),
            block_len: Some(block_len),
            phi_width: Some(phi_width),
        })
    }
}

const PAPER_FEATURE_EDIT_BOUND: usize = 3;
const PAPER_PART_MODULUS: u64 = 5;

/// Largest block length for which compressed φ is supported (block values
/// are handled as `u64`).
pub const MAX_COMPRESSED_BLOCK: usize = 64;

pub fn derive_params(
    k: usize,
    n: usize,
    mode: Mode,
    overrides: Option<&Overrides>,
) -> Result<CodeParams, ParamsError> {
    if k == 0 {
        return Err(ParamsError::ZeroWindow);
    }
    if n < 2 * k {
        return Err(ParamsError::TooShort { n, min: 2 * k });
    }
    let params = match mode {
        Mode::Paper => paper_params(k, n)?,
        Mode::Scaled => scaled_params(k, n, overrides.cloned().unwrap_or_default())?,
    };
    params.validate()?;
    Ok(params)
}

fn paper_params(k: usize, n: usize) -> Result<CodeParams, ParamsError> {
    let run_weight = run_weight(k)?;
    let length_weight = length_weight(k)?;
    let density = paper_density(k, n)?;
    let feature_bound = feature_bound(density, length_weight)?;
    let block_len = paper_block_len(k, n, density, feature_bound)?;
    Ok(CodeParams {
        k,
        n,
        mode: Mode::Paper,
        run_weight,
        length_weight,
        density,
        feature_edit_bound: PAPER_FEATURE_EDIT_BOUND,
        vt_modulus: vt_modulus(length_weight, n)?,
        sum_modulus: sum_modulus(length_weight, k)?,
        part_modulus: PAPER_PART_MODULUS,
        feature_bound,
        block_len,
        phi_width: paper_phi_width(k, block_len),
    })
}

fn scaled_params(k: usize, n: usize, o: Overrides) -> Result<CodeParams, ParamsError> {
    fn need<T>(v: Option<T>, name: &'static str) -> Result<T, ParamsError> {
        v.ok_or(ParamsError::MissingOverride(name))
    }
    Ok(CodeParams {
        k,
        n,
        mode: Mode::Scaled,
        run_weight: need(o.run_weight, "run_weight")?,
        length_weight: need(o.length_weight, "length_weight")?,
        density: need(o.density, "density")?,
        feature_edit_bound: need(o.feature_edit_bound, "feature_edit_bound")?,
        vt_modulus: need(o.vt_modulus, "vt_modulus")?,
        sum_modulus: need(o.sum_modulus, "sum_modulus")?,
        part_modulus: need(o.part_modulus, "part_modulus")?,
        feature_bound: need(o.feature_bound, "feature_bound")?,
        block_len: need(o.block_len, "block_len")?.min(n),
        phi_width: need(o.phi_width, "phi_width")?,
    })
}

fn pow2(e: usize, what: &'static str) -> Result<u64, ParamsError> {
    u32::try_from(e)
        .ok()
        .and_then(|e| 1u64.checked_shl(e))
        .filter(|&v| v != 0 && e < 64)
        .ok_or(ParamsError::Overflow(what))
}

fn run_weight(k: usize) -> Result<u64, ParamsError> {
    pow2(k, "run_weight")?.checked_mul(3).ok_or(ParamsError::Overflow("run_weight"))
}

fn length_weight(k: usize) -> Result<u64, ParamsError> {
    pow2(k, "length_weight")?
        .checked_mul(40)
        .and_then(|v| v.checked_mul(k as u64))
        .ok_or(ParamsError::Overflow("length_weight"))
}

/// `⌈k·2^(2k+3)·log₂ n⌉`.
fn paper_density(k: usize, n: usize) -> Result<usize, ParamsError> {
    let scale = pow2(2 * k + 3, "density")? as f64 * k as f64;
    let d = (scale * (n as f64).log2()).ceil();
    if !d.is_finite() || d >= usize::MAX as f64 {
        return Err(ParamsError::Overflow("density"));
    }
    Ok((d as usize).max(1))
}

fn feature_bound(density: usize, length_weight: u64) -> Result<u64, ParamsError> {
    (density as u64)
        .checked_mul(8)
        .and_then(|v| v.checked_mul(length_weight))
        .ok_or(ParamsError::Overflow("feature_bound"))
}

fn vt_modulus(length_weight: u64, n: usize) -> Result<u128, ParamsError> {
    2000u128
        .checked_mul(u128::from(length_weight))
        .and_then(|v| v.checked_mul(n as u128))
        .ok_or(ParamsError::Overflow("vt_modulus"))
}

fn sum_modulus(length_weight: u64, k: usize) -> Result<u64, ParamsError> {
    length_weight
        .checked_mul(10)
        .and_then(|v| v.checked_mul(k as u64))
        .ok_or(ParamsError::Overflow("sum_modulus"))
}

/// `min(n, (6K²·A + 2K + 2)·δ + 2k)`: enough bits to hold every part the
/// locator can point at, plus `K` parts and `k` bits of slack on each side.
fn paper_block_len(
    k: usize,
    n: usize,
    density: usize,
    feature_bound: u64,
) -> Result<usize, ParamsError> {
    let big_k = PAPER_FEATURE_EDIT_BOUND as u128;
    let span = (6 * big_k * big_k)
        .checked_mul(u128::from(feature_bound))
        .and_then(|v| v.checked_add(2 * big_k + 2))
        .and_then(|v| v.checked_mul(density as u128))
        .and_then(|v| v.checked_add(2 * k as u128))
        .ok_or(ParamsError::Overflow("block_len"))?;
    Ok(span.min(n as u128) as usize)
}

/// `⌈4k·log₂ blk⌉`, the leading term of a hash that corrects one
/// `k`-substring edit inside a block.
fn paper_phi_width(k: usize, block_len: usize) -> u32 {
    let w = (4.0 * k as f64 * (block_len as f64).log2()).ceil();
    (w as u32).max(1)
}

impl CodeParams {
    fn validate(&self) -> Result<(), ParamsError> {
        fn invalid(field: &'static str, reason: impl Into<String>) -> ParamsError {
            ParamsError::Invalid { field, reason: reason.into() }
        }
        if self.density == 0 {
            return Err(invalid("density", "must be at least 1"));
        }
        if self.length_weight == 0 {
            return Err(invalid("length_weight", "must be at least 1"));
        }
        if self.feature_edit_bound == 0 {
            return Err(invalid("feature_edit_bound", "must be at least 1"));
        }
        if self.vt_modulus < 2 {
            return Err(invalid("vt_modulus", "must be at least 2"));
        }
        if self.sum_modulus < 3 {
            return Err(invalid("sum_modulus", "must be at least 3"));
        }
        // The decoder recovers a part-count change in [-2, 2] from this residue.
        if self.part_modulus < 5 {
            return Err(invalid("part_modulus", "must be at least 5"));
        }
        let min_block = self.n.min(2 * self.k + 1);
        if self.block_len < min_block {
            return Err(invalid("block_len", format!("must be at least {min_block}")));
        }
        if self.phi_width == 0 {
            return Err(invalid("phi_width", "must be at least 1"));
        }
        Ok(())
    }

    pub fn block_count(&self) -> usize {
        self.n.div_ceil(self.block_len)
    }

    /// Feature bound used by the decoder: the smaller of `feature_bound`
    /// and the trivial bound `(B + C)·(n + k) + 2^k − 1` that holds because
    /// no part of the input or output can exceed `n + k` bits.
    pub fn decoder_feature_bound(&self) -> u64 {
        let trivial = (u128::from(self.run_weight) + u128::from(self.length_weight))
            * (self.n + self.k) as u128
            + (1u128 << self.k.min(64))
            - 1;
        u128::from(self.feature_bound).min(trivial) as u64
    }

    /// `m_vt > 8K²(2Cn + A_f)`: the VT modulus is wide enough for the
    /// location step even with the loose bound `A_f`. Only true for long
    /// strings (about `n ≥ 700` at `k = 2`).
    pub fn vt_modulus_covers_feature_bound(&self) -> bool {
        let big_k = self.feature_edit_bound as u128;
        let need = (2 * u128::from(self.length_weight))
            .checked_mul(self.n as u128)
            .and_then(|v| v.checked_add(u128::from(self.feature_bound)))
            .and_then(|v| v.checked_mul(8 * big_k * big_k));
        need.is_some_and(|need| self.vt_modulus > need)
    }
}

/// `⌈log₂ m⌉` for `m ≥ 1`.
pub fn ceil_log2(m: u128) -> u32 {
    if m <= 1 {
        0
    } else {
        128 - (m - 1).leading_zeros()
    }
}
