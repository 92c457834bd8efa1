//! Serializable description of a single diagnostic or algorithm run, and its
//! dispatch onto a sequence.

use serde::{Deserialize, Serialize};

use crate::constructive::{
    kp_disjointify, norm_to_order_subsequence, uo_extract, DisjointificationResult,
    OrderSubsequence, UoExtraction,
};
use crate::convergence::{
    almost_order_bounded_check, in_measure_tail, norm_tail, order_witness_atomic, pointwise_tail,
    un_tail, un_tail_qip, weak_tail, AlmostOrderBoundedReport, OrderWitness, TailReport,
    ToleranceSpec,
};
use crate::error::Result;
use crate::json::format_float;
use crate::lattice::Element;
use crate::sequence::VectorSequence;

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Diagnostic {
    Norm {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<Element>,
    },
    Un {
        tests: Vec<Element>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<Element>,
    },
    UnQip {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<Element>,
    },
    InMeasure {
        delta: f64,
    },
    Pointwise,
    Weak {
        functionals: Vec<Element>,
        #[serde(default)]
        modulus: bool,
    },
    Kp {
        count: usize,
    },
    UoExtract {
        #[serde(default = "one")]
        min_terms: usize,
    },
    NormToOrder {
        count: usize,
    },
    OrderWitness {
        bound: Element,
        depth: usize,
    },
    AlmostOrderBounded {
        u: Element,
        eps: f64,
    },
}

impl Diagnostic {
    /// The `kind` string.
    pub fn kind(&self) -> &'static str {
        match self {
            Diagnostic::Norm { .. } => "norm",
            Diagnostic::Un { .. } => "un",
            Diagnostic::UnQip { .. } => "un_qip",
            Diagnostic::InMeasure { .. } => "in_measure",
            Diagnostic::Pointwise => "pointwise",
            Diagnostic::Weak { .. } => "weak",
            Diagnostic::Kp { .. } => "kp",
            Diagnostic::UoExtract { .. } => "uo_extract",
            Diagnostic::NormToOrder { .. } => "norm_to_order",
            Diagnostic::OrderWitness { .. } => "order_witness",
            Diagnostic::AlmostOrderBounded { .. } => "almost_order_bounded",
        }
    }

    /// Element-valued parameters, which must share the sequence's tag.
    pub fn elements(&self) -> Vec<&Element> {
        match self {
            Diagnostic::Norm { limit } | Diagnostic::UnQip { limit, .. } => limit.iter().collect(),
            Diagnostic::Un { tests, limit } => tests.iter().chain(limit).collect(),
            Diagnostic::Weak { functionals, .. } => functionals.iter().collect(),
            Diagnostic::OrderWitness { bound, .. } => vec![bound],
            Diagnostic::AlmostOrderBounded { u, .. } => vec![u],
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Outcome {
    Tail(TailReport),
    Disjointification(DisjointificationResult),
    UoExtraction(UoExtraction),
    OrderSubsequence(OrderSubsequence),
    OrderWitness(OrderWitness),
    AlmostOrderBounded(AlmostOrderBoundedReport),
}

impl Outcome {
    /// `NULL`/`NOT_NULL` for tail reports (the pointwise verdict for
    /// uo-extraction), `OK` for completed constructions and `FAILED` for an
    /// almost-order-bounded check that does not hold.
    pub fn status(&self) -> String {
        match self {
            Outcome::Tail(r) => r.verdict.to_string(),
            Outcome::UoExtraction(u) => u.report.verdict.to_string(),
            Outcome::AlmostOrderBounded(r) if !r.passed => "FAILED".into(),
            _ => "OK".into(),
        }
    }

    /// One row per index (tail reports) or per selected term.
    pub fn to_csv(&self) -> String {
        let f = format_float;
        let mut out = String::new();
        match self {
            Outcome::Tail(r) => return r.to_csv(),
            Outcome::Disjointification(d) => {
                out.push_str("k,index,residual_norm,v_norm\n");
                for (k, n) in d.selected_indices.iter().enumerate() {
                    let (r, v) = (d.residual_norms[k], d.v_norms[k]);
                    out.push_str(&format!("{},{n},{},{}\n", k + 1, f(r), f(v)));
                }
            }
            Outcome::UoExtraction(u) => {
                out.push_str("k,index,meet_norm\n");
                for (k, (n, m)) in u.subindices.iter().zip(&u.meet_norms).enumerate() {
                    out.push_str(&format!("{},{n},{}\n", k + 1, f(*m)));
                }
            }
            Outcome::OrderSubsequence(o) => {
                out.push_str("k,index,certificate_norm\n");
                for (k, (n, z)) in o.indices.iter().zip(&o.certificate_norms).enumerate() {
                    out.push_str(&format!("{},{n},{}\n", k + 1, f(*z)));
                }
            }
            Outcome::OrderWitness(w) => {
                out.push_str("k,n_k,v_norm\n");
                for s in &w.schedule {
                    out.push_str(&format!("{},{},{}\n", s.k, s.n_k, f(s.v_norm)));
                }
            }
            Outcome::AlmostOrderBounded(a) => {
                out.push_str("passed,eps,worst_index,worst_value\n");
                let worst = a.worst_index.map_or(String::new(), |i| i.to_string());
                out.push_str(&format!(
                    "{},{},{worst},{}\n",
                    a.passed,
                    f(a.eps),
                    f(a.worst_value)
                ));
            }
        }
        out
    }
}

/// Runs `diagnostic` on `seq`. `horizon` is the coordinate horizon of the
/// quasi-interior point when the diagnostic does not fix one.
pub fn evaluate(
    seq: &VectorSequence,
    diagnostic: &Diagnostic,
    ts: &ToleranceSpec,
    horizon: usize,
) -> Result<Outcome> {
    let zero = || Element::zero(seq.tag());
    let limit_or_zero = |l: &Option<Element>| l.clone().unwrap_or_else(zero);
    Ok(match diagnostic {
        Diagnostic::Norm { limit } => Outcome::Tail(norm_tail(seq, &limit_or_zero(limit), ts)?),
        Diagnostic::Un { tests, limit } => {
            Outcome::Tail(un_tail(seq, &limit_or_zero(limit), tests, ts)?)
        }
        Diagnostic::UnQip { horizon: h, limit } => Outcome::Tail(un_tail_qip(
            seq,
            &limit_or_zero(limit),
            ts,
            h.unwrap_or(horizon),
            None,
        )?),
        Diagnostic::InMeasure { delta } => Outcome::Tail(in_measure_tail(seq, *delta, ts)?),
        Diagnostic::Pointwise => Outcome::Tail(pointwise_tail(seq, ts)?),
        Diagnostic::Weak {
            functionals,
            modulus,
        } => Outcome::Tail(weak_tail(seq, functionals, *modulus, ts)?),
        Diagnostic::Kp { count } => Outcome::Disjointification(kp_disjointify(seq, *count, ts)?),
        Diagnostic::UoExtract { min_terms } => {
            Outcome::UoExtraction(uo_extract(seq, ts, *min_terms)?)
        }
        Diagnostic::NormToOrder { count } => {
            Outcome::OrderSubsequence(norm_to_order_subsequence(seq, *count)?)
        }
        Diagnostic::OrderWitness { bound, depth } => {
            Outcome::OrderWitness(order_witness_atomic(seq, bound, *depth)?)
        }
        Diagnostic::AlmostOrderBounded { u, eps } => {
            Outcome::AlmostOrderBounded(almost_order_bounded_check(&seq.materialize(), u, *eps)?)
        }
    })
}
