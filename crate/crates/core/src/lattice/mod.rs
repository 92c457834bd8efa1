//! Concrete vector-lattice models.
//!
//! Sequence spaces (c0, l_p, l_infinity) hold finitely supported vectors on
//! the coordinates `1..=horizon`; `L_p` spaces over a dyadic measure on
//! `[0,1)` hold step functions; `l1 ⊕∞ l∞` holds pairs. All lattice
//! operations are componentwise selects, so the lattice identities hold
//! exactly in floating point.

mod direct_sum;
mod element;
pub mod literal;
mod sparse;
mod step;
mod tag;

pub use direct_sum::DirectSumVector;
pub use element::Element;
pub use sparse::LatticeVector;
pub use step::{StepFunction, MAX_LEVEL};
pub use tag::{MeasureModel, SpaceTag};

use crate::error::{LatticeError, Result};

/// Coordinate horizon used when an infinite object must be truncated.
pub const DEFAULT_HORIZON: usize = 4096;

/// Relative tolerance for algebraic identities.
pub const IDENTITY_RTOL: f64 = 1e-12;

/// Sums adjacent pairs level by level. Symmetric `+t, -t` neighbours cancel
/// exactly, which the Rademacher pairings rely on.
pub(crate) fn pairwise_sum(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        _ => {
            let mut level: Vec<f64> = terms.chunks(2).map(|c| c.iter().sum()).collect();
            while level.len() > 1 {
                level = level.chunks(2).map(|c| c.iter().sum()).collect();
            }
            level[0]
        }
    }
}

/// A quasi-interior point of the model, truncated to `horizon` coordinates
/// for sequence spaces.
///
/// c0 and l_p get the geometric weights `2^-n` (entries that underflow are
/// dropped), l_infinity gets its strong unit, step spaces the constant one and
/// the direct sum the pair of the first two.
pub fn quasi_interior_point(tag: &SpaceTag, horizon: usize) -> Element {
    let geometric = |tag: SpaceTag| {
        LatticeVector::new(tag, (1..=horizon).map(|n| (n, (0.5f64).powi(n as i32))))
            .expect("geometric weights are finite")
    };
    let ones =
        |tag: SpaceTag| LatticeVector::new(tag, (1..=horizon).map(|n| (n, 1.0))).expect("finite");
    match tag {
        SpaceTag::C0 | SpaceTag::Lp(_) => geometric(tag.clone()).into(),
        SpaceTag::LInftySeq => ones(SpaceTag::LInftySeq).into(),
        SpaceTag::LpStep { .. } => StepFunction::constant(tag.clone(), 1.0)
            .expect("constant one")
            .into(),
        SpaceTag::DirectSumL1Linf => {
            DirectSumVector::new(geometric(SpaceTag::Lp(1.0)), ones(SpaceTag::LInftySeq))
                .expect("parts carry the right tags")
                .into()
        }
    }
}

/// `u ∧ (m·e)` for positive `u`, `e`.
pub fn truncate(u: &Element, e: &Element, m: u64) -> Result<Element> {
    u.tag().ensure_same(&e.tag())?;
    if !u.is_positive() {
        return Err(LatticeError::NegativeInput(
            "u has a negative coordinate".into(),
        ));
    }
    if !e.is_positive() {
        return Err(LatticeError::NegativeInput(
            "e has a negative coordinate".into(),
        ));
    }
    u.meet(&e.scale(m as f64))
}

/// `‖|x| ∧ |y|‖ <= tol·(1 + ‖x‖ + ‖y‖)`.
pub fn is_disjoint(x: &Element, y: &Element, tol: f64) -> Result<bool> {
    let overlap = x.abs().meet(&y.abs())?.norm();
    Ok(overlap <= tol * (1.0 + x.norm() + y.norm()))
}

/// `‖a − b‖ <= rtol·max(‖a‖, ‖b‖)`, exact equality when both vanish.
pub fn approx_eq(a: &Element, b: &Element, rtol: f64) -> Result<bool> {
    let diff = a.sub(b)?.norm();
    Ok(diff <= rtol * a.norm().max(b.norm()))
}
