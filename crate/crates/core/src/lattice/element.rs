use super::{DirectSumVector, LatticeVector, SpaceTag, StepFunction};
use crate::error::{LatticeError, Result};

/// Any element of one of the concrete lattice models.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Seq(LatticeVector),
    Step(StepFunction),
    Sum(DirectSumVector),
}

impl From<LatticeVector> for Element {
    fn from(x: LatticeVector) -> Self {
        Element::Seq(x)
    }
}

impl From<StepFunction> for Element {
    fn from(x: StepFunction) -> Self {
        Element::Step(x)
    }
}

impl From<DirectSumVector> for Element {
    fn from(x: DirectSumVector) -> Self {
        Element::Sum(x)
    }
}

fn mismatch(a: &Element, b: &Element) -> LatticeError {
    LatticeError::TagMismatch {
        left: a.tag().to_string(),
        right: b.tag().to_string(),
    }
}

impl Element {
    pub fn zero(tag: &SpaceTag) -> Element {
        match tag {
            t if t.is_sequence() => LatticeVector::zero(t.clone()).into(),
            t @ SpaceTag::LpStep { .. } => StepFunction::zero(t.clone()).into(),
            _ => DirectSumVector::zero().into(),
        }
    }

    pub fn tag(&self) -> SpaceTag {
        match self {
            Element::Seq(x) => x.tag().clone(),
            Element::Step(x) => x.tag().clone(),
            Element::Sum(_) => SpaceTag::DirectSumL1Linf,
        }
    }

    pub fn as_seq(&self) -> Option<&LatticeVector> {
        match self {
            Element::Seq(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_step(&self) -> Option<&StepFunction> {
        match self {
            Element::Step(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_sum(&self) -> Option<&DirectSumVector> {
        match self {
            Element::Sum(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Seq(x) => x.is_zero(),
            Element::Step(x) => x.is_zero(),
            Element::Sum(x) => x.is_zero(),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            Element::Seq(x) => x.norm(),
            Element::Step(x) => x.norm(),
            Element::Sum(x) => x.norm(),
        }
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Element {
        match self {
            Element::Seq(x) => x.map(f).into(),
            Element::Step(x) => x.map(f).into(),
            Element::Sum(x) => x.map(f).into(),
        }
    }

    pub(crate) fn zip(&self, other: &Element, f: impl Fn(f64, f64) -> f64) -> Result<Element> {
        Ok(match (self, other) {
            (Element::Seq(a), Element::Seq(b)) => a.zip(b, f)?.into(),
            (Element::Step(a), Element::Step(b)) => a.zip(b, f)?.into(),
            (Element::Sum(a), Element::Sum(b)) => a.zip(b, f)?.into(),
            _ => return Err(mismatch(self, other)),
        })
    }

    fn all_pairs(&self, other: &Element, pred: impl Fn(f64, f64) -> bool) -> Result<bool> {
        match (self, other) {
            (Element::Seq(a), Element::Seq(b)) => a.all_pairs(b, pred),
            (Element::Step(a), Element::Step(b)) => a.all_pairs(b, pred),
            (Element::Sum(a), Element::Sum(b)) => a.all_pairs(b, pred),
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn meet(&self, other: &Element) -> Result<Element> {
        self.zip(other, f64::min)
    }

    pub fn join(&self, other: &Element) -> Result<Element> {
        self.zip(other, f64::max)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, a: f64) -> Element {
        self.map(|v| a * v)
    }

    pub fn abs(&self) -> Element {
        self.map(f64::abs)
    }

    pub fn pos_part(&self) -> Element {
        self.map(|v| if v > 0.0 { v } else { 0.0 })
    }

    pub fn neg_part(&self) -> Element {
        self.map(|v| if v < 0.0 { -v } else { 0.0 })
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Element) -> Result<bool> {
        self.all_pairs(other, |a, b| a <= b)
    }

    pub fn is_positive(&self) -> bool {
        self.neg_part().is_zero()
    }

    /// `‖|self| ∧ u‖`, the quantity every un diagnostic is built from.
    pub fn meet_norm(&self, u: &Element) -> Result<f64> {
        Ok(self.abs().meet(u)?.norm())
    }

    /// Evaluates `self` as a functional on `x`.
    pub fn pairing(&self, x: &Element) -> Result<f64> {
        match (self, x) {
            (Element::Seq(a), Element::Seq(b)) => a.pairing(b),
            (Element::Step(a), Element::Step(b)) => a.pairing(b),
            (Element::Sum(a), Element::Sum(b)) => a.pairing(b),
            _ => Err(mismatch(self, x)),
        }
    }
}
