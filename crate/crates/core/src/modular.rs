use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("no integer in [-{bound}, {bound}] is congruent to {residue} mod {modulus}")]
    NoCenteredResidue { residue: u128, modulus: u128, bound: u128 },
    #[error("modulus {modulus} must exceed twice the bound {bound}")]
    ModulusTooSmall { modulus: u128, bound: u128 },
}

/// The unique `t ≡ residue (mod modulus)` with `|t| ≤ bound`.
///
/// Used to turn transmitted residues back into signed differences whose
/// magnitude is known to be small.
pub fn centered_residue(residue: u128, modulus: u128, bound: u128) -> Result<i128, ModularError> {
    if bound.checked_mul(2).is_none_or(|twice| modulus <= twice) {
        return Err(ModularError::ModulusTooSmall { modulus, bound });
    }
    let r = residue % modulus;
    if r <= bound {
        Ok(r as i128)
    } else if modulus - r <= bound {
        Ok(-((modulus - r) as i128))
    } else {
        Err(ModularError::NoCenteredResidue { residue, modulus, bound })
    }
}

/// `value mod modulus` for a signed value, in `[0, modulus)`.
pub fn reduce_signed(value: i128, modulus: u128) -> u128 {
    let m = modulus as i128;
    value.rem_euclid(m) as u128
}
