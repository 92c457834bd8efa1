//! Tail diagnostics for sequences: norm, un (with an explicit test family or a
//! quasi-interior point), convergence in measure, the coordinatewise/a.e.
//! proxy for uo, weak and modulus-weak pairings, order-convergence witnesses
//! in atomic models and the almost-order-bounded check.
//!
//! Every diagnostic returns a [`TailReport`]: one value per index, and a
//! verdict that is `NULL` iff every value on the final window is below the
//! tolerance.

mod report;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use report::{CellStat, QipSelection, TailReport, ToleranceSpec, Verdict, Witness};

use crate::error::{LatticeError, Result};
use crate::lattice::{
    pairwise_sum, quasi_interior_point, Element, LatticeVector, SpaceTag, MAX_LEVEL,
};
use crate::sequence::VectorSequence;

fn check_limit(seq: &VectorSequence, limit: &Element) -> Result<()> {
    seq.tag().ensure_same(&limit.tag())
}

/// Evaluates `f` on every term, in parallel, keeping index order.
fn per_index<T, F>(seq: &VectorSequence, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Element) -> Result<T> + Sync + Send,
{
    (1..=seq.len())
        .into_par_iter()
        .map(|n| f(&seq.term(n)))
        .collect()
}

/// Largest value and the first position attaining it.
fn argmax(values: impl Iterator<Item = f64>) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, v) in values.enumerate() {
        if v > best.0 {
            best = (v, i);
        }
    }
    best
}

/// `‖x_n − limit‖`.
pub fn norm_tail(seq: &VectorSequence, limit: &Element, ts: &ToleranceSpec) -> Result<TailReport> {
    check_limit(seq, limit)?;
    let values = per_index(seq, |x| Ok(x.sub(limit)?.norm()))?;
    TailReport::from_values("norm", values, ts, |_| None)
}

fn validate_tests(tag: &SpaceTag, tests: &[(String, Element)]) -> Result<()> {
    if tests.is_empty() {
        return Err(LatticeError::InvalidElement("empty test family".into()));
    }
    for (i, (_, u)) in tests.iter().enumerate() {
        tag.ensure_same(&u.tag())?;
        if !u.is_positive() || u.is_zero() {
            return Err(LatticeError::NegativeTestVector { index: i });
        }
    }
    Ok(())
}

/// `max_u ‖|x_n − limit| ∧ u‖` over the test vectors, labelled `u1, u2, …`.
pub fn un_tail(
    seq: &VectorSequence,
    limit: &Element,
    tests: &[Element],
    ts: &ToleranceSpec,
) -> Result<TailReport> {
    let labeled: Vec<(String, Element)> = tests
        .iter()
        .enumerate()
        .map(|(i, u)| (format!("u{}", i + 1), u.clone()))
        .collect();
    un_tail_labeled(seq, limit, &labeled, ts)
}

/// [`un_tail`] with caller-chosen labels for the test family.
pub fn un_tail_labeled(
    seq: &VectorSequence,
    limit: &Element,
    tests: &[(String, Element)],
    ts: &ToleranceSpec,
) -> Result<TailReport> {
    check_limit(seq, limit)?;
    validate_tests(seq.tag(), tests)?;
    let rows = per_index(seq, |x| {
        let d = x.sub(limit)?.abs();
        let meets = tests
            .iter()
            .map(|(_, u)| d.meet(u).map(|m| m.norm()))
            .collect::<Result<Vec<f64>>>()?;
        Ok(argmax(meets.into_iter()))
    })?;
    let values = rows.iter().map(|r| r.0).collect();
    let mut report = TailReport::from_values("un", values, ts, |n| {
        let i = rows[n - 1].1;
        Some((i, tests[i].0.clone()))
    })?;
    report.family = Some(tests.iter().map(|(l, _)| l.clone()).collect());
    Ok(report)
}

/// Request for the multiplier `m` of the quasi-interior reduction.
#[derive(Debug, Clone)]
pub struct QipRequest {
    pub u: Element,
    pub eps: f64,
    pub m_max: u64,
}

/// Smallest `m <= m_max` with `‖u − u ∧ m·e‖ < eps`.
///
/// The remainder is non-increasing in `m`, so the search doubles and then
/// bisects.
pub fn qip_multiplier(u: &Element, e: &Element, eps: f64, m_max: u64) -> Result<QipSelection> {
    u.tag().ensure_same(&e.tag())?;
    if !u.is_positive() || !e.is_positive() {
        return Err(LatticeError::NegativeInput(
            "u and e must be positive".into(),
        ));
    }
    let remainder = |m: u64| -> Result<f64> { Ok(u.sub(&u.meet(&e.scale(m as f64))?)?.norm()) };
    let not_found = LatticeError::MNotFound { m_max, eps };
    if m_max == 0 {
        return Err(not_found);
    }
    let (mut lo, mut hi) = (0u64, 1u64);
    loop {
        if remainder(hi)? < eps {
            break;
        }
        if hi == m_max {
            return Err(not_found);
        }
        lo = hi;
        hi = hi.saturating_mul(2).min(m_max);
    }
    // remainder(lo) >= eps (or lo == 0), remainder(hi) < eps
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if remainder(mid)? < eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(QipSelection {
        m: hi,
        remainder: remainder(hi)?,
        eps,
    })
}

/// un test against the model's quasi-interior point, truncated to `horizon`
/// coordinates. Optionally also selects the multiplier for `request`.
pub fn un_tail_qip(
    seq: &VectorSequence,
    limit: &Element,
    ts: &ToleranceSpec,
    horizon: usize,
    request: Option<&QipRequest>,
) -> Result<TailReport> {
    let e = quasi_interior_point(seq.tag(), horizon);
    let label = format!("quasi_interior_point(horizon={horizon})");
    let mut report = un_tail_labeled(seq, limit, &[(label, e.clone())], ts)?;
    report.quantity = "un_qip".into();
    report.coord_horizon = Some(horizon);
    if let Some(req) = request {
        report.qip = Some(qip_multiplier(&req.u, &e, req.eps, req.m_max)?);
    }
    Ok(report)
}

fn step_terms(seq: &VectorSequence) -> Result<Vec<crate::lattice::StepFunction>> {
    if !seq.tag().is_step() {
        return Err(LatticeError::NonStepSequence);
    }
    Ok(seq
        .materialize()
        .into_iter()
        .map(|x| match x {
            Element::Step(f) => f,
            _ => unreachable!("step tag produces step functions"),
        })
        .collect())
}

/// `μ{|f_n| > delta}`.
pub fn in_measure_tail(seq: &VectorSequence, delta: f64, ts: &ToleranceSpec) -> Result<TailReport> {
    if !seq.tag().is_step() {
        return Err(LatticeError::NonStepSequence);
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(LatticeError::InvalidTolerance(format!(
            "delta = {delta} must be > 0"
        )));
    }
    let values = per_index(seq, |x| {
        Ok(x.as_step().expect("step tag").measure_above(delta))
    })?;
    let mut report = TailReport::from_values("in_measure", values, ts, |_| None)?;
    report.note = Some(format!("delta = {delta}"));
    Ok(report)
}

/// Coordinatewise (atomic models) or cellwise (step models) proxy for uo.
///
/// Sequence models: the tracked coordinates are those touched before the
/// tail window, and `values[n] = max_c |x_n(c)|` over them.
///
/// Step models: `values[n] = μ{c : max_{n<=m<=N} |f_m(c)| >= tol}`, the
/// measure of the cells that have not yet settled. A sequence converges a.e.
/// on a finite measure space iff this measure tends to zero.
///
/// Both variants report, per tracked coordinate or cell, the largest and
/// smallest modulus on the tail window.
pub fn pointwise_tail(seq: &VectorSequence, ts: &ToleranceSpec) -> Result<TailReport> {
    pointwise_tail_with_max_level(seq, ts, MAX_LEVEL)
}

pub fn pointwise_tail_with_max_level(
    seq: &VectorSequence,
    ts: &ToleranceSpec,
    max_level: u32,
) -> Result<TailReport> {
    ts.check(seq.len())?;
    if seq.tag().is_step() {
        pointwise_step(seq, ts, max_level)
    } else {
        pointwise_atomic(seq, ts)
    }
}

fn coordinates(x: &Element) -> Vec<((u8, usize), f64)> {
    match x {
        Element::Seq(v) => v.iter().map(|(i, a)| ((0, i), a)).collect(),
        Element::Sum(s) => s
            .left()
            .iter()
            .map(|(i, a)| ((1, i), a))
            .chain(s.right().iter().map(|(i, a)| ((2, i), a)))
            .collect(),
        Element::Step(_) => unreachable!("handled cellwise"),
    }
}

fn coordinate_label((part, i): (u8, usize)) -> String {
    match part {
        0 => i.to_string(),
        1 => format!("left:{i}"),
        _ => format!("right:{i}"),
    }
}

fn pointwise_atomic(seq: &VectorSequence, ts: &ToleranceSpec) -> Result<TailReport> {
    let terms = seq.materialize();
    let len = terms.len();
    let start = ts.tail_start(len);
    let head_end = if start > 1 { start - 1 } else { len };
    let tracked: BTreeSet<(u8, usize)> = terms[..head_end]
        .iter()
        .flat_map(|x| coordinates(x).into_iter().map(|(c, _)| c))
        .collect();
    let rows: Vec<BTreeMap<(u8, usize), f64>> = terms
        .par_iter()
        .map(|x| {
            coordinates(x)
                .into_iter()
                .filter(|(c, _)| tracked.contains(c))
                .map(|(c, a)| (c, a.abs()))
                .collect()
        })
        .collect();
    let values = rows
        .iter()
        .map(|r| r.values().copied().fold(0.0, f64::max))
        .collect();
    let mut report = TailReport::from_values("pointwise", values, ts, |n| {
        rows[n - 1]
            .iter()
            .fold(None::<((u8, usize), f64)>, |best, (c, a)| match best {
                Some((_, b)) if b >= *a => best,
                _ => Some((*c, *a)),
            })
            .map(|(c, _)| (c.1, coordinate_label(c)))
    })?;
    let cells = tracked
        .iter()
        .map(|c| {
            let tail = rows[start - 1..]
                .iter()
                .map(|r| r.get(c).copied().unwrap_or(0.0));
            let (limsup, liminf) = tail.fold((0.0f64, f64::INFINITY), |(hi, lo), a| {
                (hi.max(a), lo.min(a))
            });
            CellStat {
                cell: coordinate_label(*c),
                limsup,
                liminf,
            }
        })
        .collect();
    report.cells = Some(cells);
    report.note = Some(format!(
        "{} coordinates tracked from indices 1..={head_end}",
        tracked.len()
    ));
    Ok(report)
}

fn pointwise_step(seq: &VectorSequence, ts: &ToleranceSpec, max_level: u32) -> Result<TailReport> {
    let terms = step_terms(seq)?;
    let level = terms.iter().map(|f| f.working_level()).max().unwrap_or(0);
    if level > max_level {
        return Err(LatticeError::RefinementOverflow {
            level,
            max: max_level,
        });
    }
    let weights = seq
        .tag()
        .measure()
        .expect("step tag carries a measure")
        .weights_at(level);
    let cells = weights.len();
    let len = terms.len();
    let start = ts.tail_start(len);

    let mut running = vec![0.0f64; cells];
    let mut limsup = vec![0.0f64; cells];
    let mut liminf = vec![f64::INFINITY; cells];
    let mut values = vec![0.0; len];
    let mut unsettled = vec![0.0; cells];
    for n in (1..=len).rev() {
        let v = terms[n - 1].values_at(level);
        for j in 0..cells {
            let a = v[j].abs();
            running[j] = running[j].max(a);
            if n >= start {
                limsup[j] = limsup[j].max(a);
                liminf[j] = liminf[j].min(a);
            }
            unsettled[j] = if running[j] >= ts.tol {
                weights[j]
            } else {
                0.0
            };
        }
        values[n - 1] = pairwise_sum(&unsettled);
    }
    let mut report = TailReport::from_values("pointwise", values, ts, |_| None)?;
    report.cell_level = Some(level);
    report.cells = Some(
        (0..cells)
            .map(|j| CellStat {
                cell: j.to_string(),
                limsup: limsup[j],
                liminf: liminf[j],
            })
            .collect(),
    );
    report.note = Some("values are the measure of cells not yet settled below tol".into());
    Ok(report)
}

/// `max_f |⟨f, x_n⟩|`, or `max_f ⟨|f|, |x_n|⟩` when `modulus` is set.
///
/// A finite family can refute weak nullity but never prove it; a `NULL`
/// verdict holds against the family only.
pub fn weak_tail(
    seq: &VectorSequence,
    functionals: &[Element],
    modulus: bool,
    ts: &ToleranceSpec,
) -> Result<TailReport> {
    if functionals.is_empty() {
        return Err(LatticeError::InvalidElement(
            "empty functional family".into(),
        ));
    }
    for f in functionals {
        seq.tag().ensure_same(&f.tag())?;
    }
    let family: Vec<Element> = if modulus {
        functionals.iter().map(Element::abs).collect()
    } else {
        functionals.to_vec()
    };
    let rows = per_index(seq, |x| {
        let x = if modulus { x.abs() } else { x.clone() };
        let pairs = family
            .iter()
            .map(|f| f.pairing(&x).map(f64::abs))
            .collect::<Result<Vec<f64>>>()?;
        Ok(argmax(pairs.into_iter()))
    })?;
    let values = rows.iter().map(|r| r.0).collect();
    let quantity = if modulus { "modulus_weak" } else { "weak" };
    let mut report = TailReport::from_values(quantity, values, ts, |n| {
        let i = rows[n - 1].1;
        Some((i, format!("f{}", i + 1)))
    })?;
    report.family = Some((1..=functionals.len()).map(|i| format!("f{i}")).collect());
    report.note = Some("NULL holds against the listed functional family only".into());
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleStep {
    pub k: usize,
    pub n_k: usize,
    pub v_norm: f64,
}

/// Dominating schedule `(v_k, n_k)`: `|x_n| <= v_k` for all `n >= n_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderWitness {
    /// Support of the bound, in the order the atoms are enumerated.
    pub atoms: Vec<usize>,
    pub schedule: Vec<ScheduleStep>,
}

/// `v_k = Σ_{i<=k} (1/k ∧ u_i) a_i + Σ_{i>k} u_i a_i`, with the atoms `a_i`
/// enumerated along the support of `bound`.
pub fn order_schedule_vector(bound: &LatticeVector, k: usize) -> LatticeVector {
    let cap = 1.0 / k as f64;
    LatticeVector::new(
        bound.tag().clone(),
        bound
            .iter()
            .enumerate()
            .map(|(i, (c, u))| (c, if i < k { cap.min(u) } else { u })),
    )
    .expect("entries are finite")
}

/// Builds the schedule for `k = 1..=depth` in an atomic (sequence) model.
pub fn order_witness_atomic(
    seq: &VectorSequence,
    bound: &Element,
    depth: usize,
) -> Result<OrderWitness> {
    if !seq.tag().is_sequence() {
        return Err(LatticeError::InvalidElement(
            "order witnesses need an atomic sequence model".into(),
        ));
    }
    seq.tag().ensure_same(&bound.tag())?;
    if !bound.is_positive() {
        return Err(LatticeError::NegativeInput("bound must be positive".into()));
    }
    let bound_vec = bound.as_seq().expect("sequence tag");
    let moduli: Vec<Element> = seq.materialize().iter().map(Element::abs).collect();
    for (i, x) in moduli.iter().enumerate() {
        if !x.le(bound)? {
            return Err(LatticeError::NotOrderBounded { index: i + 1 });
        }
    }
    let mut schedule = Vec::with_capacity(depth);
    for k in 1..=depth {
        let v: Element = order_schedule_vector(bound_vec, k).into();
        let mut n_k = 1;
        for n in (1..=moduli.len()).rev() {
            if !moduli[n - 1].le(&v)? {
                n_k = n + 1;
                break;
            }
        }
        if n_k > moduli.len() {
            return Err(LatticeError::NoIndexFound { k });
        }
        schedule.push(ScheduleStep {
            k,
            n_k,
            v_norm: v.norm(),
        });
    }
    Ok(OrderWitness {
        atoms: bound_vec.support().collect(),
        schedule,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlmostOrderBoundedReport {
    pub passed: bool,
    pub eps: f64,
    /// 1-based position of the worst vector.
    pub worst_index: Option<usize>,
    pub worst_value: f64,
}

/// `‖(|x| − u)⁺‖ < eps` for every listed `x`.
pub fn almost_order_bounded_check(
    vectors: &[Element],
    u: &Element,
    eps: f64,
) -> Result<AlmostOrderBoundedReport> {
    if !u.is_positive() {
        return Err(LatticeError::NegativeInput("u must be positive".into()));
    }
    if !(eps > 0.0) {
        return Err(LatticeError::InvalidTolerance(format!(
            "eps = {eps} must be > 0"
        )));
    }
    let excess = vectors
        .iter()
        .map(|x| Ok(x.abs().sub(u)?.pos_part().norm()))
        .collect::<Result<Vec<f64>>>()?;
    let (worst_value, worst) = argmax(excess.iter().copied());
    let worst_index = (!excess.is_empty()).then_some(worst + 1);
    let worst_value = if excess.is_empty() { 0.0 } else { worst_value };
    Ok(AlmostOrderBoundedReport {
        passed: worst_value < eps,
        eps,
        worst_index,
        worst_value,
    })
}

#[cfg(test)]
mod tests;
