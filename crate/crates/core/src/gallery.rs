//! Generators for the classical example sequences, each pinned to the
//! verdicts it is known to produce.

use serde::Serialize;

use crate::convergence::{ToleranceSpec, Verdict};
use crate::diagnostic::Diagnostic;
use crate::error::{LatticeError, Result};
use crate::lattice::{
    DirectSumVector, Element, LatticeVector, SpaceTag, StepFunction, DEFAULT_HORIZON, MAX_LEVEL,
};
use crate::sequence::VectorSequence;

/// `n ↦ e_n`.
pub fn std_units(tag: &SpaceTag, horizon: usize) -> Result<VectorSequence> {
    if !tag.is_sequence() {
        return Err(LatticeError::InvalidElement(format!(
            "{tag} is not a sequence space"
        )));
    }
    let t = tag.clone();
    Ok(VectorSequence::from_fn(
        format!("std_units({tag})"),
        tag.clone(),
        horizon,
        move |n| LatticeVector::unit(t.clone(), n).into(),
    ))
}

/// `n ↦ f_n ⊕ g_n` with `f_n`, `g_n` the unit vectors of l1 and l∞.
pub fn direct_sum_seq(horizon: usize) -> VectorSequence {
    VectorSequence::from_fn("direct_sum", SpaceTag::DirectSumL1Linf, horizon, |n| {
        DirectSumVector::new(
            LatticeVector::unit(SpaceTag::Lp(1.0), n),
            LatticeVector::unit(SpaceTag::LInftySeq, n),
        )
        .expect("parts carry the right tags")
        .into()
    })
}

/// `0 ⊕ 1`, the constant one truncated to `horizon` coordinates.
pub fn direct_sum_witness(horizon: usize) -> Element {
    DirectSumVector::new(
        LatticeVector::zero(SpaceTag::Lp(1.0)),
        LatticeVector::new(SpaceTag::LInftySeq, (1..=horizon).map(|i| (i, 1.0))).expect("finite"),
    )
    .expect("parts carry the right tags")
    .into()
}

/// `(2^-n) ⊕ 0`, a test vector living in the l1 part only.
pub fn direct_sum_left_test(horizon: usize) -> Element {
    DirectSumVector::new(
        LatticeVector::new(
            SpaceTag::Lp(1.0),
            (1..=horizon).map(|i| (i, (0.5f64).powi(i as i32))),
        )
        .expect("finite"),
        LatticeVector::zero(SpaceTag::LInftySeq),
    )
    .expect("parts carry the right tags")
    .into()
}

/// Level and cell of the `n`-th typewriter block: `2^k <= n < 2^(k+1)`,
/// cell `n − 2^k`.
pub fn typewriter_cell(n: usize) -> (u32, usize) {
    assert!(n >= 1);
    let k = usize::BITS - 1 - n.leading_zeros();
    (k, n - (1usize << k))
}

/// Indicators of the dyadic cells, sweeping `[0,1)` level by level, for
/// `n` in `1..2^(max_level+1)`.
pub fn typewriter(max_level: u32, p: f64) -> Result<VectorSequence> {
    if max_level < 1 {
        return Err(LatticeError::InvalidElement(
            "typewriter needs max_level >= 1".into(),
        ));
    }
    if max_level > MAX_LEVEL {
        return Err(LatticeError::RefinementOverflow {
            level: max_level,
            max: MAX_LEVEL,
        });
    }
    let tag = SpaceTag::lp_lebesgue(p)?;
    let len = (1usize << (max_level + 1)) - 1;
    let t = tag.clone();
    Ok(VectorSequence::from_fn("typewriter", tag, len, move |n| {
        let (k, cell) = typewriter_cell(n);
        StepFunction::indicator(t.clone(), k, cell)
            .expect("cell within level")
            .into()
    }))
}

/// The `n`-th Rademacher function: `+1, −1` alternating on the cells of
/// level `n`.
pub fn rademacher(tag: &SpaceTag, n: u32) -> Result<StepFunction> {
    if n > MAX_LEVEL {
        return Err(LatticeError::RefinementOverflow {
            level: n,
            max: MAX_LEVEL,
        });
    }
    let cells = 1usize << n;
    StepFunction::new(
        tag.clone(),
        (0..cells)
            .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
    )
}

/// `n ↦ x·r_n` for `n = 1..=horizon`; every term has modulus `x`.
pub fn rademacher_modulated(x: &StepFunction, horizon: usize) -> Result<VectorSequence> {
    if x.values().iter().any(|v| *v < 0.0) {
        return Err(LatticeError::NegativeInput("x must be positive".into()));
    }
    let top = u32::try_from(horizon).unwrap_or(u32::MAX).max(x.level());
    if top > MAX_LEVEL {
        return Err(LatticeError::RefinementOverflow {
            level: top,
            max: MAX_LEVEL,
        });
    }
    let base: Element = x.clone().into();
    let tag = x.tag().clone();
    let t = tag.clone();
    Ok(VectorSequence::from_fn(
        "rademacher_modulated",
        tag,
        horizon,
        move |n| {
            let r: Element = rademacher(&t, n as u32).expect("level checked").into();
            base.zip(&r, |a, b| a * b).expect("same tag")
        },
    ))
}

/// `x_n = e_n + 2^-n (e_1 + … + e_{n−1})`: un-null, not disjoint.
pub fn overlap_seq(tag: &SpaceTag, horizon: usize) -> Result<VectorSequence> {
    if !tag.is_sequence() {
        return Err(LatticeError::InvalidElement(format!(
            "{tag} is not a sequence space"
        )));
    }
    let t = tag.clone();
    Ok(VectorSequence::from_fn(
        format!("overlap({tag})"),
        tag.clone(),
        horizon,
        move |n| {
            let c = (0.5f64).powi(n as i32);
            LatticeVector::new(t.clone(), (1..n).map(|j| (j, c)).chain([(n, 1.0)]))
                .expect("finite")
                .into()
        },
    ))
}

/// One pinned diagnostic of a gallery entry.
#[derive(Debug, Clone, Serialize)]
pub struct ExpectedCheck {
    pub diagnostic: Diagnostic,
    pub expected: Verdict,
}

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// Which classical claim the entry instantiates.
    pub provenance: &'static str,
    pub sequence: VectorSequence,
    pub tolerance: ToleranceSpec,
    pub checks: Vec<ExpectedCheck>,
}

/// Metadata of an entry, for listings.
#[derive(Debug, Clone, Serialize)]
pub struct EntrySummary {
    pub name: &'static str,
    pub description: &'static str,
    pub provenance: &'static str,
    pub tag: SpaceTag,
    pub length: usize,
    pub tolerance: ToleranceSpec,
    pub checks: Vec<CheckSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub kind: &'static str,
    pub expected: Verdict,
}

/// An entry with its pinned checks in full and the first terms.
#[derive(Debug, Clone, Serialize)]
pub struct EntryDump {
    pub name: &'static str,
    pub description: &'static str,
    pub provenance: &'static str,
    pub tag: SpaceTag,
    pub length: usize,
    pub tolerance: ToleranceSpec,
    pub checks: Vec<ExpectedCheck>,
    pub terms: Vec<Element>,
}

impl GalleryEntry {
    pub fn summary(&self) -> EntrySummary {
        EntrySummary {
            name: self.name,
            description: self.description,
            provenance: self.provenance,
            tag: self.sequence.tag().clone(),
            length: self.sequence.len(),
            tolerance: self.tolerance,
            checks: self
                .checks
                .iter()
                .map(|c| CheckSummary {
                    kind: c.diagnostic.kind(),
                    expected: c.expected,
                })
                .collect(),
        }
    }

    /// The first `max_terms` terms (all of them if `None`).
    pub fn dump(&self, max_terms: Option<usize>) -> EntryDump {
        let shown = max_terms.map_or(self.sequence.len(), |m| m.min(self.sequence.len()));
        EntryDump {
            name: self.name,
            description: self.description,
            provenance: self.provenance,
            tag: self.sequence.tag().clone(),
            length: self.sequence.len(),
            tolerance: self.tolerance,
            checks: self.checks.clone(),
            terms: (1..=shown).map(|n| self.sequence.term(n)).collect(),
        }
    }
}

pub const NAMES: [&str; 8] = [
    "std_units_linf",
    "std_units_c0",
    "std_units_l1",
    "std_units_l2",
    "direct_sum",
    "typewriter",
    "rademacher",
    "overlap_l2",
];

/// Horizon shared by the sequence-space entries.
pub const UNIT_HORIZON: usize = 256;
/// Top level of the typewriter entry (2047 terms).
pub const TYPEWRITER_LEVEL: u32 = 10;
/// Number of Rademacher levels in the modulated entry.
pub const RADEMACHER_HORIZON: usize = 12;
/// Level of the step functionals used against the Rademacher entry.
pub const RADEMACHER_FUNCTIONAL_LEVEL: u32 = 3;

fn check(diagnostic: Diagnostic, expected: Verdict) -> ExpectedCheck {
    ExpectedCheck {
        diagnostic,
        expected,
    }
}

fn ones(tag: SpaceTag, horizon: usize) -> Element {
    LatticeVector::new(tag, (1..=horizon).map(|i| (i, 1.0)))
        .expect("finite")
        .into()
}

/// The positive step function modulated by the Rademacher entry.
pub fn rademacher_base() -> StepFunction {
    let tag = SpaceTag::lp_lebesgue(2.0).expect("p = 2");
    StepFunction::new(tag, vec![1.0, 2.0, 0.5, 1.0]).expect("valid step function")
}

/// Step functionals of level 3 paired against the Rademacher entry.
pub fn rademacher_functionals() -> Vec<Element> {
    let tag = rademacher_base().tag().clone();
    let rows = [
        vec![1.0; 8],
        vec![0.3, -1.2, 2.5, 0.7, -0.4, 1.1, 0.0, 3.0],
        vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ];
    rows.into_iter()
        .map(|r| StepFunction::new(tag.clone(), r).expect("valid").into())
        .collect()
}

/// Coordinate functionals on the head `1..=head` plus the geometric weights:
/// the summable family used for weak checks in l_p.
pub fn coordinate_functionals(tag: &SpaceTag, head: usize) -> Vec<Element> {
    let mut family: Vec<Element> = (1..=head)
        .map(|i| LatticeVector::unit(tag.clone(), i).into())
        .collect();
    family.push(
        LatticeVector::new(
            tag.clone(),
            (1..=DEFAULT_HORIZON).map(|i| (i, (0.5f64).powi(i as i32))),
        )
        .expect("finite")
        .into(),
    );
    family
}

pub fn entry(name: &str) -> Result<GalleryEntry> {
    use Verdict::{NotNull, Null};
    let units = |tag: SpaceTag| std_units(&tag, UNIT_HORIZON).expect("sequence tag");
    let unit_ts = ToleranceSpec::default_for(UNIT_HORIZON);
    let qip = Diagnostic::UnQip {
        horizon: None,
        limit: None,
    };
    let norm = Diagnostic::Norm { limit: None };
    let entry = match name {
        "std_units_linf" => GalleryEntry {
            name: "std_units_linf",
            description: "standard unit vectors in l_infinity",
            provenance: "a disjoint sequence need not be un-null: (e_n) in l_infinity",
            sequence: units(SpaceTag::LInftySeq),
            tolerance: unit_ts,
            checks: vec![
                check(
                    Diagnostic::Un {
                        tests: vec![ones(SpaceTag::LInftySeq, UNIT_HORIZON)],
                        limit: None,
                    },
                    NotNull,
                ),
                check(qip.clone(), NotNull),
                check(norm.clone(), NotNull),
                check(Diagnostic::Pointwise, Null),
            ],
        },
        "std_units_c0" => GalleryEntry {
            name: "std_units_c0",
            description: "standard unit vectors in c0",
            provenance: "(e_n) is un-null in c0, where un is coordinatewise convergence",
            sequence: units(SpaceTag::C0),
            tolerance: unit_ts,
            checks: vec![
                check(qip.clone(), Null),
                check(norm.clone(), NotNull),
                check(Diagnostic::Pointwise, Null),
            ],
        },
        "std_units_l1" => GalleryEntry {
            name: "std_units_l1",
            description: "standard unit vectors in l1",
            provenance: "(e_n) is un-null but neither norm-null nor weakly null in l1",
            sequence: units(SpaceTag::Lp(1.0)),
            tolerance: unit_ts,
            checks: vec![
                check(qip.clone(), Null),
                check(norm.clone(), NotNull),
                check(
                    Diagnostic::Weak {
                        functionals: vec![ones(SpaceTag::Lp(1.0), UNIT_HORIZON)],
                        modulus: false,
                    },
                    NotNull,
                ),
            ],
        },
        "std_units_l2" => GalleryEntry {
            name: "std_units_l2",
            description: "standard unit vectors in l2",
            provenance: "in an order continuous atomic space weakly null sequences are un-null",
            sequence: units(SpaceTag::Lp(2.0)),
            tolerance: unit_ts,
            checks: vec![
                check(qip.clone(), Null),
                check(norm.clone(), NotNull),
                check(Diagnostic::Pointwise, Null),
                check(
                    Diagnostic::Weak {
                        functionals: coordinate_functionals(
                            &SpaceTag::Lp(2.0),
                            UNIT_HORIZON - unit_ts.window,
                        ),
                        modulus: false,
                    },
                    Null,
                ),
            ],
        },
        "direct_sum" => GalleryEntry {
            name: "direct_sum",
            description: "x_n = f_n ⊕ g_n in l1 ⊕∞ l∞",
            provenance: "un-null in the closed span (a copy of l1) but not in the whole space",
            sequence: direct_sum_seq(UNIT_HORIZON),
            tolerance: unit_ts,
            checks: vec![
                check(
                    Diagnostic::Un {
                        tests: vec![direct_sum_left_test(UNIT_HORIZON)],
                        limit: None,
                    },
                    Null,
                ),
                check(
                    Diagnostic::Un {
                        tests: vec![direct_sum_witness(UNIT_HORIZON)],
                        limit: None,
                    },
                    NotNull,
                ),
                check(norm.clone(), NotNull),
            ],
        },
        "typewriter" => GalleryEntry {
            name: "typewriter",
            description: "typewriter indicators in L1 over Lebesgue measure",
            provenance: "converges to zero in measure but not almost everywhere",
            sequence: typewriter(TYPEWRITER_LEVEL, 1.0)?,
            tolerance: ToleranceSpec::new(1e-2, 256)?,
            checks: vec![
                check(Diagnostic::InMeasure { delta: 0.5 }, Null),
                check(qip.clone(), Null),
                check(norm.clone(), Null),
                check(Diagnostic::Pointwise, NotNull),
            ],
        },
        "rademacher" => {
            let base = rademacher_base();
            GalleryEntry {
                name: "rademacher",
                description: "x·r_n in L2 over Lebesgue measure, x = (1, 2, 1/2, 1)",
                provenance: "weakly null (against step functionals) yet |x_n| = x for all n",
                sequence: rademacher_modulated(&base, RADEMACHER_HORIZON)?,
                tolerance: ToleranceSpec::default_for(RADEMACHER_HORIZON),
                checks: vec![
                    check(
                        Diagnostic::Weak {
                            functionals: rademacher_functionals(),
                            modulus: false,
                        },
                        Null,
                    ),
                    check(
                        Diagnostic::Weak {
                            functionals: vec![
                                StepFunction::constant(base.tag().clone(), 1.0)?.into()
                            ],
                            modulus: true,
                        },
                        NotNull,
                    ),
                    check(
                        Diagnostic::Un {
                            tests: vec![base.clone().into()],
                            limit: None,
                        },
                        NotNull,
                    ),
                    check(qip.clone(), NotNull),
                    check(Diagnostic::InMeasure { delta: 0.1 }, NotNull),
                ],
            }
        }
        "overlap_l2" => GalleryEntry {
            name: "overlap_l2",
            description: "x_n = e_n + 2^-n (e_1 + … + e_{n-1}) in l2",
            provenance: "un-null, not disjoint: stress input for disjointification",
            sequence: overlap_seq(&SpaceTag::Lp(2.0), UNIT_HORIZON)?,
            tolerance: unit_ts,
            checks: vec![
                check(qip, Null),
                check(norm, NotNull),
                check(Diagnostic::Pointwise, Null),
            ],
        },
        other => {
            return Err(LatticeError::InvalidElement(format!(
                "unknown gallery entry {other:?}"
            )))
        }
    };
    Ok(entry)
}

pub fn entries() -> Vec<GalleryEntry> {
    NAMES
        .iter()
        .map(|n| entry(n).expect("listed entries exist"))
        .collect()
}
