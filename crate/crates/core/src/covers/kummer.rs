use super::CoverError;
use crate::field::{Field, FiniteField};

/// The cover `x^l = u t` with `p ∤ l`, `u` a constant unit.
///
/// Units of `K[[t]]` are `l`-th powers up to a constant, so a constant
/// represents every class in `K[[t]]^* / (K[[t]]^*)^l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerCover {
    field: FiniteField,
    l: u64,
    unit: u32,
}

impl KummerCover {
    pub fn new(field: &FiniteField, l: u64, unit: u32) -> Result<Self, CoverError> {
        if l == 0 || l % field.p() == 0 {
            return Err(CoverError::InvalidCover("Kummer degree must be prime to p"));
        }
        if field.is_zero(&unit) || u64::from(unit) >= field.q() {
            return Err(CoverError::InvalidCover("unit must be a nonzero field element"));
        }
        Ok(KummerCover { field: field.clone(), l, unit })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn unit(&self) -> u32 {
        self.unit
    }

    /// The generator's eigenvalue `ζ_l` on `x`.
    pub fn zeta(&self) -> Result<u32, CoverError> {
        self.field.root_of_unity(self.l).map_err(|_| CoverError::NoRootOfUnity(self.l))
    }
}

/// Smallest prime `p ≡ 1 (mod l)` below `2^16`, so that `F_p` carries a
/// primitive `l`-th root of unity.
pub(crate) fn prime_with_roots_of_unity(l: u64) -> Option<u64> {
    (2..65_536u64).find(|&p| crate::field::is_prime(p) && (p - 1) % l == 0)
}

impl KummerCover {
    /// `x^l = t` over the smallest prime field containing `μ_l`.
    pub fn standard(l: u64) -> Result<Self, CoverError> {
        let p = prime_with_roots_of_unity(l).ok_or(CoverError::NoRootOfUnity(l))?;
        let field = FiniteField::prime(p)?;
        Self::new(&field, l, 1)
    }
}
