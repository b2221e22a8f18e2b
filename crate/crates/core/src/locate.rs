//! VT sketches over integer strings and approximate location of one edit.
//!
//! Given the observed feature vector `w`, the changes in length and sum of
//! the hidden original `z`, and `VT(z) mod m`, the edit position in `z` is
//! pinned down to a short interval by comparing the VT difference with the
//! predictor `η(v)` for every hypothetical position `v`.

use thiserror::Error;

use crate::bits::{edit_core, IntString};
use crate::modular::{centered_residue, reduce_signed, ModularError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocateError {
    #[error("edit (j={pos}, a={del}, b={ins}) does not turn z into w")]
    InconsistentEdit { pos: usize, del: usize, ins: usize },
    #[error("no position is consistent with the VT difference")]
    EmptyCandidateSet,
    #[error("recovered sum of z is negative")]
    NegativeSum,
    #[error("arithmetic overflow while locating")]
    Overflow,
    #[error(transparent)]
    Modular(#[from] ModularError),
}

/// `Σ i·z_i`, positions 1-based.
pub fn vt(z: &IntString) -> u128 {
    z.as_slice()
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as u128 + 1) * u128::from(v))
        .sum()
}

/// `d_len·Σ_{i≥v} w_i + d_sum·v` for `1 ≤ v ≤ |w| + 1`.
pub fn eta(v: usize, w: &IntString, d_len: i128, d_sum: i128) -> i128 {
    assert!(v >= 1 && v <= w.len() + 1, "eta position {v} out of range");
    let suffix: u128 = w.as_slice()[v - 1..].iter().map(|&x| u128::from(x)).sum();
    d_len * suffix as i128 + d_sum * v as i128
}

/// A substring edit on integer strings: `del` symbols of `z` starting at
/// `pos` are replaced by `ins` symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeatureEdit {
    pub pos: usize,
    pub del: usize,
    pub ins: usize,
}

/// The edit with the shortest replaced sections: strip the common prefix,
/// then the common suffix of what remains.
pub fn minimal_edit(z: &IntString, w: &IntString) -> FeatureEdit {
    let zs = z.as_slice();
    let ws = w.as_slice();
    let prefix = zs.iter().zip(ws).take_while(|(a, b)| a == b).count();
    let (del, ins) = edit_core(zs, ws);
    FeatureEdit { pos: prefix + 1, del, ins }
}

fn check_consistent(z: &IntString, w: &IntString, op: FeatureEdit) -> Result<(), LocateError> {
    let err = LocateError::InconsistentEdit { pos: op.pos, del: op.del, ins: op.ins };
    let (zs, ws) = (z.as_slice(), w.as_slice());
    if op.pos == 0 || op.pos + op.del > zs.len() + 1 || op.pos + op.ins > ws.len() + 1 {
        return Err(err);
    }
    let head = op.pos - 1;
    if zs[..head] != ws[..head] || zs[head + op.del..] != ws[head + op.ins..] {
        return Err(err);
    }
    Ok(())
}

/// Whether `op` is a locatable `K`-substring edit from `z` to `w`: both
/// sides have at most `K` symbols, the sum changes by less than every
/// symbol of `w`, and the length or the sum changes.
pub fn is_locatable(
    z: &IntString,
    w: &IntString,
    op: FeatureEdit,
    big_k: usize,
) -> Result<bool, LocateError> {
    check_consistent(z, w, op)?;
    if op.del > big_k || op.ins > big_k {
        return Ok(false);
    }
    let d_sum = z.sum() as i128 - w.sum() as i128;
    let small_shift = w.as_slice().iter().all(|&wi| d_sum.unsigned_abs() < u128::from(wi));
    let changes = z.len() != w.len() || d_sum != 0;
    Ok(small_shift && changes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatorInput {
    pub w: IntString,
    /// `|z| − |w|`.
    pub d_len: i128,
    /// `Σz − Σw`.
    pub d_sum: i128,
    /// `VT(z) mod modulus`.
    pub vt_mod: u128,
    pub modulus: u128,
    /// Bound on the symbols of `z` and `w`.
    pub bound: u128,
    pub big_k: usize,
}

/// Part indices `lo..=hi` of `z` containing the edit position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Located {
    pub lo: usize,
    pub hi: usize,
    /// The recovered `VT(z) − VT(w)`.
    pub delta_vt: i128,
}

impl Located {
    pub fn width(&self) -> usize {
        self.hi - self.lo
    }
}

pub fn locate(input: &LocatorInput) -> Result<Located, LocateError> {
    let k2 = (input.big_k as u128).pow(2);
    let sum_w = input.w.sum() as i128;
    let sum_z = sum_w.checked_add(input.d_sum).ok_or(LocateError::Overflow)?;
    let sum_z = u128::try_from(sum_z).map_err(|_| LocateError::NegativeSum)?;
    let magnitude = sum_z
        .checked_add(input.bound)
        .and_then(|v| v.checked_mul(4 * k2))
        .ok_or(LocateError::Overflow)?;
    let vt_w = vt(&input.w) % input.modulus;
    let diff = (input.vt_mod % input.modulus + input.modulus - vt_w) % input.modulus;
    let delta_vt = centered_residue(diff, input.modulus, magnitude)?;

    let tolerance = i128::try_from(3 * k2 * input.bound).map_err(|_| LocateError::Overflow)?;
    let vals = input.w.as_slice();
    let mut suffix: i128 = sum_w;
    let mut found: Option<(usize, usize)> = None;
    for v in 1..=vals.len() + 1 {
        let predicted = input.d_len * suffix + input.d_sum * v as i128;
        if (delta_vt - predicted).abs() < tolerance {
            found = Some(found.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v))));
        }
        if v <= vals.len() {
            suffix -= i128::from(vals[v - 1]);
        }
    }
    let (lo, hi) = found.ok_or(LocateError::EmptyCandidateSet)?;
    Ok(Located { lo: lo.saturating_sub(1).max(1), hi, delta_vt })
}

/// Convenience: the locator input an honest decoder would see for `z → w`.
pub fn input_for(z: &IntString, w: &IntString, modulus: u128, bound: u128, big_k: usize) -> LocatorInput {
    LocatorInput {
        w: w.clone(),
        d_len: z.len() as i128 - w.len() as i128,
        d_sum: z.sum() as i128 - w.sum() as i128,
        vt_mod: reduce_signed(vt(z) as i128, modulus),
        modulus,
        bound,
        big_k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[u64]) -> IntString {
        IntString::new(v.to_vec())
    }

    #[test]
    fn vt_examples() {
        assert_eq!(vt(&ints(&[])), 0);
        assert_eq!(vt(&ints(&[3, 1, 4])), 17);
        assert_eq!(vt(&ints(&[9])), 9);
    }

    #[test]
    fn eta_examples() {
        let w = ints(&[3, 4, 5]);
        assert_eq!(eta(2, &w, 1, 2), 13);
        assert_eq!(eta(4, &w, 1, 2), 8);
        assert_eq!(eta(3, &w, 0, 0), 0);
    }

    #[test]
    fn locatable_examples() {
        let z = ints(&[3, 4, 5]);
        assert_eq!(is_locatable(&z, &z, FeatureEdit { pos: 2, del: 1, ins: 1 }, 3), Ok(false));
        let w = ints(&[3, 9]);
        assert_eq!(is_locatable(&z, &w, FeatureEdit { pos: 2, del: 2, ins: 1 }, 2), Ok(true));
        assert_eq!(
            is_locatable(&ints(&[3, 4]), &w, FeatureEdit { pos: 2, del: 1, ins: 1 }, 1),
            Ok(false)
        );
        assert!(matches!(
            is_locatable(&z, &w, FeatureEdit { pos: 1, del: 1, ins: 1 }, 2),
            Err(LocateError::InconsistentEdit { .. })
        ));
    }

    #[test]
    fn minimal_edit_strips_both_ends() {
        let e = minimal_edit(&ints(&[3, 4, 5]), &ints(&[3, 9]));
        assert_eq!(e, FeatureEdit { pos: 2, del: 2, ins: 1 });
        let e = minimal_edit(&ints(&[1, 1, 1]), &ints(&[1, 1]));
        assert_eq!(e, FeatureEdit { pos: 3, del: 1, ins: 0 });
    }

    #[test]
    fn locate_example() {
        let z = ints(&[3, 4, 5]);
        let w = ints(&[5, 4, 5]);
        let input = input_for(&z, &w, 1000, 5, 1);
        let found = locate(&input).unwrap();
        assert_eq!(found.delta_vt, -2);
        assert_eq!((found.lo, found.hi), (1, 4));
    }

    #[test]
    fn locate_without_change_is_vacuous_or_empty() {
        let w = ints(&[5, 4, 5]);
        let input = LocatorInput {
            w: w.clone(),
            d_len: 0,
            d_sum: 0,
            vt_mod: vt(&w) + 50,
            modulus: 100_000,
            bound: 5,
            big_k: 1,
        };
        assert_eq!(locate(&input), Err(LocateError::EmptyCandidateSet));
    }

    proptest! {
        #[test]
        fn true_position_is_located(
            head in proptest::collection::vec(50u64..100, 0..20),
            mid_z in proptest::collection::vec(50u64..100, 0..=3),
            mid_w in proptest::collection::vec(50u64..100, 0..=3),
            tail in proptest::collection::vec(50u64..100, 0..20),
        ) {
            let mut z = head.clone();
            z.extend(&mid_z);
            z.extend(&tail);
            let mut w = head.clone();
            w.extend(&mid_w);
            w.extend(&tail);
            let (z, w) = (ints(&z), ints(&w));
            let j = head.len() + 1;
            let a = 100u128;
            let input = input_for(&z, &w, 1 << 40, a, 3);
            let found = locate(&input).unwrap();
            prop_assert!(found.lo <= j && j <= found.hi);
            prop_assert!(found.width() as u128 <= 6 * 9 * a);
        }
    }
}
