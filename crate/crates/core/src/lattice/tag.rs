use std::fmt;
use std::sync::Arc;

use crate::error::{LatticeError, Result};

/// Cell weights of a dyadic partition of `[0,1)` at a fixed level.
///
/// Finer partitions split each weight evenly between the two children, so the
/// model describes a measure with a density that is constant on every cell of
/// its own level.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureModel {
    level: u32,
    weights: Vec<f64>,
}

impl MeasureModel {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let len = weights.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(LatticeError::InvalidElement(format!(
                "measure needs 2^L weights, got {len}"
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(LatticeError::InvalidElement(
                "measure weights must be finite and >= 0".into(),
            ));
        }
        let model = MeasureModel {
            level: len.trailing_zeros(),
            weights,
        };
        if !(model.total_mass() > 0.0) {
            return Err(LatticeError::InvalidElement(
                "measure must have positive total mass".into(),
            ));
        }
        Ok(model)
    }

    /// Lebesgue measure on `[0,1)`, every cell of `level` weighing `2^-level`.
    pub fn lebesgue(level: u32) -> Self {
        let n = 1usize << level;
        MeasureModel {
            level,
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        super::pairwise_sum(&self.weights)
    }

    /// Cell weights at `level`, which must not be coarser than the model.
    pub fn weights_at(&self, level: u32) -> Vec<f64> {
        debug_assert!(level >= self.level);
        let shift = level - self.level;
        let split = (0.5f64).powi(shift as i32);
        let n = 1usize << level;
        (0..n).map(|j| self.weights[j >> shift] * split).collect()
    }
}

/// Ambient space of an element. Elements combine only under equal tags.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceTag {
    C0,
    Lp(f64),
    LInftySeq,
    LpStep { p: f64, measure: Arc<MeasureModel> },
    DirectSumL1Linf,
}

impl SpaceTag {
    pub fn lp(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(SpaceTag::Lp(p))
    }

    pub fn lp_step(p: f64, measure: MeasureModel) -> Result<Self> {
        check_exponent(p)?;
        Ok(SpaceTag::LpStep {
            p,
            measure: Arc::new(measure),
        })
    }

    /// `L_p` over Lebesgue measure, stored at level 0.
    pub fn lp_lebesgue(p: f64) -> Result<Self> {
        Self::lp_step(p, MeasureModel::lebesgue(0))
    }

    /// Sequence spaces: c0, l_p and l_infinity.
    pub fn is_sequence(&self) -> bool {
        matches!(self, SpaceTag::C0 | SpaceTag::Lp(_) | SpaceTag::LInftySeq)
    }

    pub fn is_step(&self) -> bool {
        matches!(self, SpaceTag::LpStep { .. })
    }

    pub fn measure(&self) -> Option<&MeasureModel> {
        match self {
            SpaceTag::LpStep { measure, .. } => Some(measure),
            _ => None,
        }
    }

    /// Order continuous models: everything but l_infinity and the direct sum.
    pub fn is_order_continuous(&self) -> bool {
        !matches!(self, SpaceTag::LInftySeq | SpaceTag::DirectSumL1Linf)
    }

    pub fn ensure_same(&self, other: &SpaceTag) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(LatticeError::TagMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(LatticeError::InvalidElement(format!(
            "exponent p = {p} must be >= 1"
        )))
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::C0 => write!(f, "c0"),
            SpaceTag::Lp(p) => write!(f, "l{p}"),
            SpaceTag::LInftySeq => write!(f, "linf"),
            SpaceTag::LpStep { p, measure } => {
                write!(f, "L{p}-step(level {})", measure.level())
            }
            SpaceTag::DirectSumL1Linf => write!(f, "l1+linf"),
        }
    }
}
