use std::borrow::Cow;

use super::{pairwise_sum, SpaceTag};
use crate::error::{LatticeError, Result};

/// Highest dyadic level a step function may be refined to.
pub const MAX_LEVEL: u32 = 24;

/// Dyadic step function on `[0,1)`: `values[j]` is the value on
/// `[j/2^level, (j+1)/2^level)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    tag: SpaceTag,
    level: u32,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(tag: SpaceTag, values: Vec<f64>) -> Result<Self> {
        if !tag.is_step() {
            return Err(LatticeError::InvalidElement(format!(
                "{tag} is not a step-function space"
            )));
        }
        let len = values.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(LatticeError::InvalidElement(format!(
                "step function needs 2^L values, got {len}"
            )));
        }
        let level = len.trailing_zeros();
        if level > MAX_LEVEL {
            return Err(LatticeError::RefinementOverflow {
                level,
                max: MAX_LEVEL,
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LatticeError::InvalidElement(
                "step values must be finite".into(),
            ));
        }
        Ok(StepFunction { tag, level, values })
    }

    pub fn constant(tag: SpaceTag, c: f64) -> Result<Self> {
        Self::new(tag, vec![c])
    }

    pub fn zero(tag: SpaceTag) -> Self {
        Self::constant(tag, 0.0).expect("zero is a valid step function")
    }

    /// Indicator of the dyadic cell `cell` at `level`.
    pub fn indicator(tag: SpaceTag, level: u32, cell: usize) -> Result<Self> {
        let n = 1usize << level;
        if cell >= n {
            return Err(LatticeError::InvalidElement(format!(
                "cell {cell} outside level {level}"
            )));
        }
        let mut values = vec![0.0; n];
        values[cell] = 1.0;
        Self::new(tag, values)
    }

    pub fn tag(&self) -> &SpaceTag {
        &self.tag
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    /// Values replicated to a finer `level`.
    pub fn values_at(&self, level: u32) -> Cow<'_, [f64]> {
        debug_assert!(level >= self.level);
        if level == self.level {
            return Cow::Borrowed(&self.values);
        }
        let shift = level - self.level;
        let n = 1usize << level;
        Cow::Owned((0..n).map(|j| self.values[j >> shift]).collect())
    }

    pub fn refine_to(&self, level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(LatticeError::RefinementOverflow {
                level,
                max: MAX_LEVEL,
            });
        }
        if level <= self.level {
            return Ok(self.clone());
        }
        Ok(StepFunction {
            tag: self.tag.clone(),
            level,
            values: self.values_at(level).into_owned(),
        })
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        StepFunction {
            tag: self.tag.clone(),
            level: self.level,
            values: self.values.iter().map(|v| f(*v)).collect(),
        }
    }

    pub(crate) fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.tag.ensure_same(&other.tag)?;
        let level = self.level.max(other.level);
        let a = self.values_at(level);
        let b = other.values_at(level);
        Ok(StepFunction {
            tag: self.tag.clone(),
            level,
            values: a.iter().zip(b.iter()).map(|(x, y)| f(*x, *y)).collect(),
        })
    }

    pub(crate) fn all_pairs(&self, other: &Self, pred: impl Fn(f64, f64) -> bool) -> Result<bool> {
        self.tag.ensure_same(&other.tag)?;
        let level = self.level.max(other.level);
        let a = self.values_at(level);
        let b = other.values_at(level);
        Ok(a.iter().zip(b.iter()).all(|(x, y)| pred(*x, *y)))
    }

    /// Level at which both the values and the measure are constant per cell.
    pub fn working_level(&self) -> u32 {
        self.level.max(self.measure_level())
    }

    fn measure_level(&self) -> u32 {
        self.tag.measure().map_or(0, |m| m.level())
    }

    fn p(&self) -> f64 {
        match self.tag {
            SpaceTag::LpStep { p, .. } => p,
            _ => unreachable!("step function with non-step tag"),
        }
    }

    /// Cell weights at the working level.
    pub fn cell_weights(&self) -> Vec<f64> {
        let measure = self.tag.measure().expect("step tag carries a measure");
        measure.weights_at(self.working_level())
    }

    pub fn norm(&self) -> f64 {
        let level = self.working_level();
        let weights = self.cell_weights();
        let values = self.values_at(level);
        let p = self.p();
        let terms: Vec<f64> = values
            .iter()
            .zip(&weights)
            .map(|(v, w)| {
                let a = v.abs();
                if p == 1.0 {
                    w * a
                } else if p == 2.0 {
                    w * a * a
                } else {
                    w * a.powf(p)
                }
            })
            .collect();
        let s = pairwise_sum(&terms);
        if p == 1.0 {
            s
        } else if p == 2.0 {
            s.sqrt()
        } else {
            s.powf(p.recip())
        }
    }

    /// Measure of `{|f| > threshold}`.
    pub fn measure_above(&self, threshold: f64) -> f64 {
        let level = self.working_level();
        let weights = self.cell_weights();
        let values = self.values_at(level);
        let terms: Vec<f64> = values
            .iter()
            .zip(&weights)
            .map(|(v, w)| if v.abs() > threshold { *w } else { 0.0 })
            .collect();
        pairwise_sum(&terms)
    }

    /// `sum_i w_i f_i x_i`, pairwise-summed at the common working level.
    pub(crate) fn pairing(&self, x: &Self) -> Result<f64> {
        self.tag.ensure_same(&x.tag)?;
        let level = self.working_level().max(x.level);
        let weights = self
            .tag
            .measure()
            .expect("step tag carries a measure")
            .weights_at(level);
        let f = self.values_at(level);
        let v = x.values_at(level);
        let terms: Vec<f64> = (0..weights.len())
            .map(|j| weights[j] * f[j] * v[j])
            .collect();
        Ok(pairwise_sum(&terms))
    }
}
