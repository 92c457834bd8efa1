use super::{LatticeVector, SpaceTag};
use crate::error::{LatticeError, Result};

/// Element `f ⊕ g` of `l1 ⊕∞ l∞`, normed by `max(‖f‖₁, ‖g‖∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSumVector {
    left: LatticeVector,
    right: LatticeVector,
}

impl DirectSumVector {
    pub fn new(left: LatticeVector, right: LatticeVector) -> Result<Self> {
        if left.tag() != &SpaceTag::Lp(1.0) {
            return Err(LatticeError::InvalidElement(format!(
                "left part must be l1, got {}",
                left.tag()
            )));
        }
        if right.tag() != &SpaceTag::LInftySeq {
            return Err(LatticeError::InvalidElement(format!(
                "right part must be linf, got {}",
                right.tag()
            )));
        }
        Ok(DirectSumVector { left, right })
    }

    pub fn zero() -> Self {
        DirectSumVector {
            left: LatticeVector::zero(SpaceTag::Lp(1.0)),
            right: LatticeVector::zero(SpaceTag::LInftySeq),
        }
    }

    pub fn left(&self) -> &LatticeVector {
        &self.left
    }

    pub fn right(&self) -> &LatticeVector {
        &self.right
    }

    pub fn is_zero(&self) -> bool {
        self.left.is_zero() && self.right.is_zero()
    }

    pub fn norm(&self) -> f64 {
        self.left.norm().max(self.right.norm())
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        DirectSumVector {
            left: self.left.map(&f),
            right: self.right.map(&f),
        }
    }

    pub(crate) fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        Ok(DirectSumVector {
            left: self.left.zip(&other.left, &f)?,
            right: self.right.zip(&other.right, &f)?,
        })
    }

    pub(crate) fn all_pairs(&self, other: &Self, pred: impl Fn(f64, f64) -> bool) -> Result<bool> {
        Ok(
            self.left.all_pairs(&other.left, &pred)?
                && self.right.all_pairs(&other.right, &pred)?,
        )
    }

    pub(crate) fn pairing(&self, x: &Self) -> Result<f64> {
        Ok(self.left.pairing(&x.left)? + self.right.pairing(&x.right)?)
    }
}
