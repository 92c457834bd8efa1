//! Constructive algorithms: Riesz decomposition of a modulus split,
//! disjointification of un-null sequences, uo-subsequence extraction and the
//! order-convergent subsequence of a norm-null sequence.

use serde::{Deserialize, Serialize};

use crate::convergence::{pointwise_tail, un_tail_qip, TailReport, ToleranceSpec};
use crate::error::{LatticeError, Result};
use crate::lattice::{is_disjoint, Element, DEFAULT_HORIZON, IDENTITY_RTOL};
use crate::sequence::VectorSequence;

/// `x = y + z` with `|y| = u`, `|z| = v`, and the positive parts behind it:
/// `u = a + b`, `v = c + d`, `x⁺ = a + c`, `x⁻ = b + d`, `a ⊥ b`, `c ⊥ d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszWitness {
    pub y: Element,
    pub z: Element,
    pub a: Element,
    pub b: Element,
    pub c: Element,
    pub d: Element,
}

/// Names of the identities checked by [`RieszWitness::identity_defects`].
pub const RIESZ_IDENTITIES: [&str; 9] = [
    "x = y + z",
    "|y| = u",
    "|z| = v",
    "u = a + b",
    "v = c + d",
    "x+ = a + c",
    "x- = b + d",
    "a ^ b = 0",
    "c ^ d = 0",
];

impl RieszWitness {
    /// Absolute defect of each identity, in the order of [`RIESZ_IDENTITIES`].
    pub fn identity_defects(&self, x: &Element, u: &Element, v: &Element) -> Result<[f64; 9]> {
        let gap = |l: &Element, r: &Element| -> Result<f64> { Ok(l.sub(r)?.norm()) };
        Ok([
            gap(x, &self.y.add(&self.z)?)?,
            gap(&self.y.abs(), u)?,
            gap(&self.z.abs(), v)?,
            gap(u, &self.a.add(&self.b)?)?,
            gap(v, &self.c.add(&self.d)?)?,
            gap(&x.pos_part(), &self.a.add(&self.c)?)?,
            gap(&x.neg_part(), &self.b.add(&self.d)?)?,
            self.a.meet(&self.b)?.norm(),
            self.c.meet(&self.d)?.norm(),
        ])
    }

    /// Identities that fail `defect <= rtol·max(‖x‖, ‖u‖, ‖v‖)`.
    pub fn failed_identities(
        &self,
        x: &Element,
        u: &Element,
        v: &Element,
        rtol: f64,
    ) -> Result<Vec<&'static str>> {
        let scale = x.norm().max(u.norm()).max(v.norm());
        let defects = self.identity_defects(x, u, v)?;
        Ok(RIESZ_IDENTITIES
            .iter()
            .zip(defects)
            .filter(|(_, d)| *d > rtol * scale)
            .map(|(name, _)| *name)
            .collect())
    }
}

/// Splits `x` along `|x| = u + v`.
///
/// The parts are `a = x⁺ ∧ u`, `b = u − a`, `c = x⁺ − a`, `d = x⁻ − b`, and
/// `y = a − b`, `z = c − d`. Entries of the parts in `[−tol, 0)` are rounding
/// residue and are set to zero; anything more negative is an error.
pub fn riesz_decompose(x: &Element, u: &Element, v: &Element) -> Result<RieszWitness> {
    let tag = x.tag();
    tag.ensure_same(&u.tag())?;
    tag.ensure_same(&v.tag())?;
    if !u.is_positive() || !v.is_positive() {
        return Err(LatticeError::NegativeInput(
            "u and v must be positive".into(),
        ));
    }
    let sum = u.add(v)?;
    let scale = x.norm().max(sum.norm());
    let tol = IDENTITY_RTOL * scale;
    let defect = x.abs().sub(&sum)?.norm();
    if defect > tol {
        return Err(LatticeError::NotADecomposition { defect });
    }
    let xp = x.pos_part();
    let xn = x.neg_part();
    let a = xp.meet(u)?;
    let b = u.sub(&a)?;
    let c = xp.sub(&a)?;
    let d = xn.sub(&b)?;
    let clean = |part: char, e: Element| -> Result<Element> {
        let low = e.neg_part().norm();
        if low > tol {
            return Err(LatticeError::NegativePart { part, value: -low });
        }
        Ok(if low > 0.0 { e.pos_part() } else { e })
    };
    let (a, b, c, d) = (
        clean('a', a)?,
        clean('b', b)?,
        clean('c', c)?,
        clean('d', d)?,
    );
    Ok(RieszWitness {
        y: a.sub(&b)?,
        z: c.sub(&d)?,
        a,
        b,
        c,
        d,
    })
}

/// Output of the disjointification scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisjointificationResult {
    /// Strictly increasing, 1-based.
    pub selected_indices: Vec<usize>,
    pub disjoint_parts: Vec<Element>,
    /// `‖x_{α_k} − d_k‖`.
    pub residual_norms: Vec<f64>,
    /// `‖v_k‖`, the bound behind each residual.
    pub v_norms: Vec<f64>,
    /// `meet_matrix[i][k] = ‖x_{α_i} ∧ x_{α_k}‖` for `i < k`, zero elsewhere.
    pub meet_matrix: Vec<Vec<f64>>,
    /// Post-hoc check of the parts with [`is_disjoint`].
    pub disjointness_verified: bool,
    /// Set when the input failed the un-nullity pre-check.
    pub advisory: Option<String>,
}

impl DisjointificationResult {
    /// `2^-(k+i)` for 1-based `i < k`.
    pub fn pair_bound(i: usize, k: usize) -> f64 {
        (0.5f64).powi((i + k) as i32)
    }

    /// True iff every selected pair obeys its meet bound.
    pub fn meets_within_bounds(&self) -> bool {
        let count = self.selected_indices.len();
        (0..count).all(|i| {
            ((i + 1)..count).all(|k| self.meet_matrix[i][k] <= Self::pair_bound(i + 1, k + 1))
        })
    }

    /// True iff `residual_norms[k] < 2^-k` for every 1-based `k`.
    pub fn residuals_within_bounds(&self) -> bool {
        self.residual_norms
            .iter()
            .enumerate()
            .all(|(k, r)| *r < (0.5f64).powi(k as i32 + 1))
    }
}

/// Relative tolerance of the post-hoc disjointness check.
pub const DISJOINT_RTOL: f64 = 1e-12;

fn finish_positive(
    indices: Vec<usize>,
    terms: Vec<Element>,
    advisory: Option<String>,
) -> Result<DisjointificationResult> {
    let count = terms.len();
    let mut meet_matrix = vec![vec![0.0; count]; count];
    let mut meets: Vec<Vec<Option<Element>>> = vec![vec![None; count]; count];
    for i in 0..count {
        for k in (i + 1)..count {
            let z = terms[i].meet(&terms[k])?;
            meet_matrix[i][k] = z.norm();
            meets[i][k] = Some(z);
        }
    }
    let mut parts = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    let mut v_norms = Vec::with_capacity(count);
    for k in 0..count {
        let mut v = Element::zero(&terms[k].tag());
        for j in 0..count {
            let z = match j.cmp(&k) {
                std::cmp::Ordering::Less => meets[j][k].as_ref(),
                std::cmp::Ordering::Greater => meets[k][j].as_ref(),
                std::cmp::Ordering::Equal => None,
            };
            if let Some(z) = z {
                v = v.add(z)?;
            }
        }
        let d = terms[k].sub(&v)?.pos_part();
        residuals.push(terms[k].sub(&d)?.norm());
        v_norms.push(v.norm());
        parts.push(d);
    }
    let verified = disjoint_pairs(&parts)?;
    Ok(DisjointificationResult {
        selected_indices: indices,
        disjoint_parts: parts,
        residual_norms: residuals,
        v_norms,
        meet_matrix,
        disjointness_verified: verified,
        advisory,
    })
}

fn disjoint_pairs(parts: &[Element]) -> Result<bool> {
    for i in 0..parts.len() {
        for k in (i + 1)..parts.len() {
            if !is_disjoint(&parts[i], &parts[k], DISJOINT_RTOL)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn un_advisory(seq: &VectorSequence, ts: &ToleranceSpec) -> Result<Option<String>> {
    let zero = Element::zero(seq.tag());
    let report = un_tail_qip(seq, &zero, ts, DEFAULT_HORIZON, None)?;
    Ok((!report.is_null()).then(|| {
        format!(
            "input failed the un-null pre-check (witness index {})",
            report.witness.map_or(0, |w| w.index)
        )
    }))
}

/// Greedy disjointification of a positive sequence.
///
/// `α_1 = 1`; `α_k` is the first index after `α_{k−1}` whose meets with the
/// earlier selections satisfy `‖x_{α_k} ∧ x_{α_i}‖ <= 2^-(k+i)`. With
/// `z_ik = x_{α_i} ∧ x_{α_k}` and `v_k` the sum of the `z` touching `k` among
/// the selected indices, `d_k = (x_{α_k} − v_k)⁺`.
pub fn kp_disjointify_positive(
    seq: &VectorSequence,
    target_count: usize,
    ts: &ToleranceSpec,
) -> Result<DisjointificationResult> {
    if target_count == 0 {
        return Err(LatticeError::InvalidElement(
            "target count must be >= 1".into(),
        ));
    }
    let advisory = un_advisory(seq, ts)?;
    let positive = |n: usize| -> Result<Element> {
        let x = seq.term(n);
        if !x.is_positive() {
            return Err(LatticeError::NegativeInput(format!(
                "term {n} is not positive"
            )));
        }
        Ok(x)
    };
    let mut indices = vec![1];
    let mut terms = vec![positive(1)?];
    let mut next = 2;
    for k in 2..=target_count {
        let mut found = None;
        let mut failing_bound = DisjointificationResult::pair_bound(1, k);
        while next <= seq.len() {
            let n = next;
            next += 1;
            let x = positive(n)?;
            let mut admissible = true;
            for (i, t) in terms.iter().enumerate() {
                let bound = DisjointificationResult::pair_bound(i + 1, k);
                if x.meet(t)?.norm() > bound {
                    admissible = false;
                    failing_bound = bound;
                    break;
                }
            }
            if admissible {
                found = Some((n, x));
                break;
            }
        }
        match found {
            Some((n, x)) => {
                indices.push(n);
                terms.push(x);
            }
            None => {
                let partial = finish_positive(indices, terms, advisory)?;
                return Err(LatticeError::HorizonExhausted {
                    k,
                    bound: failing_bound,
                    partial: Box::new(partial),
                });
            }
        }
    }
    finish_positive(indices, terms, advisory)
}

/// Disjointification of a signed sequence: run the positive scan on `(|x_n|)`,
/// then split each `x_{α_k}` along `|x_{α_k}| = w_k + (|x_{α_k}| − w_k)` and
/// keep the part with modulus `w_k`.
pub fn kp_disjointify(
    seq: &VectorSequence,
    target_count: usize,
    ts: &ToleranceSpec,
) -> Result<DisjointificationResult> {
    let positive = kp_disjointify_positive(&seq.modulus(), target_count, ts)?;
    let mut parts = Vec::with_capacity(positive.disjoint_parts.len());
    let mut residuals = Vec::with_capacity(parts.capacity());
    for (&n, w) in positive
        .selected_indices
        .iter()
        .zip(&positive.disjoint_parts)
    {
        let x = seq.term(n);
        let h = x.abs().sub(w)?;
        let witness = riesz_decompose(&x, w, &h)?;
        residuals.push(x.sub(&witness.y)?.norm());
        parts.push(witness.y);
    }
    let verified = disjoint_pairs(&parts)?;
    Ok(DisjointificationResult {
        disjoint_parts: parts,
        residual_norms: residuals,
        disjointness_verified: verified,
        ..positive
    })
}

/// Output of [`uo_extract`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UoExtraction {
    /// `Σ |x_n| / (2^n ‖x_n‖)` over the horizon.
    pub e: Element,
    pub subindices: Vec<usize>,
    /// `‖|x_{n_k}| ∧ e‖` for each selected index.
    pub meet_norms: Vec<f64>,
    /// Pointwise report of the subsequence restricted to the support of `e`.
    pub report: TailReport,
}

/// Extracts a subsequence with `‖|x_{n_k}| ∧ e‖ <= 2^-k`, taking the first
/// admissible index each time, and reports its coordinatewise (or cellwise)
/// behaviour on the support of `e`.
///
/// The report window is `min(ts.window, len/4)` of the subsequence. An
/// all-zero sequence succeeds with `e = 0` and every index selected.
pub fn uo_extract(
    seq: &VectorSequence,
    ts: &ToleranceSpec,
    min_terms: usize,
) -> Result<UoExtraction> {
    let terms = seq.materialize();
    let mut e = Element::zero(seq.tag());
    for (i, x) in terms.iter().enumerate() {
        let norm = x.norm();
        let weight = (0.5f64).powi(i as i32 + 1);
        if norm > 0.0 && weight > 0.0 {
            e = e.add(&x.abs().scale(weight / norm))?;
        }
    }
    if e.is_zero() {
        let all: Vec<usize> = (1..=seq.len()).collect();
        let sub_ts = ToleranceSpec::new(ts.tol, ts.window.min(seq.len()))?;
        return Ok(UoExtraction {
            e,
            meet_norms: vec![0.0; all.len()],
            subindices: all,
            report: pointwise_tail(seq, &sub_ts)?,
        });
    }
    let mut subindices = Vec::new();
    let mut meet_norms = Vec::new();
    for (i, x) in terms.iter().enumerate() {
        let bound = (0.5f64).powi(subindices.len() as i32 + 1);
        let m = x.meet_norm(&e)?;
        if m <= bound {
            subindices.push(i + 1);
            meet_norms.push(m);
        }
    }
    if subindices.len() < min_terms.max(1) {
        return Err(LatticeError::SelectionStalled {
            k: subindices.len() + 1,
        });
    }
    let support = e.clone();
    let restricted =
        seq.subsequence(&subindices)?
            .map(format!("{}[sub|supp e]", seq.name()), move |x| {
                x.zip(&support, |a, s| if s > 0.0 { a } else { 0.0 })
                    .expect("same tag")
            });
    let window = ts.window.min((subindices.len() / 4).max(1));
    let report = pointwise_tail(&restricted, &ToleranceSpec::new(ts.tol, window)?)?;
    Ok(UoExtraction {
        e,
        subindices,
        meet_norms,
        report,
    })
}

/// Output of [`norm_to_order_subsequence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderSubsequence {
    pub indices: Vec<usize>,
    /// `‖z_m‖` with `z_m = Σ_{k>=m} |x_{n_k}|`.
    pub certificate_norms: Vec<f64>,
    /// `|x_{n_k}| <= z_m` for `k >= m` and `‖z_m‖ <= 2^(1−m)` for every `m`.
    pub certified: bool,
}

/// Picks `n_k` with `‖x_{n_k}‖ <= 2^-k` for `k = 1..=count`.
pub fn norm_to_order_subsequence(seq: &VectorSequence, count: usize) -> Result<OrderSubsequence> {
    let mut indices = Vec::with_capacity(count);
    let mut n = 1;
    for k in 1..=count {
        let bound = (0.5f64).powi(k as i32);
        loop {
            if n > seq.len() {
                return Err(LatticeError::SelectionStalled { k });
            }
            let hit = seq.term(n).norm() <= bound;
            n += 1;
            if hit {
                indices.push(n - 1);
                break;
            }
        }
    }
    let moduli: Vec<Element> = indices.iter().map(|&i| seq.term(i).abs()).collect();
    let mut z = Element::zero(seq.tag());
    let mut tails = vec![Element::zero(seq.tag()); moduli.len()];
    for m in (0..moduli.len()).rev() {
        z = moduli[m].add(&z)?;
        tails[m] = z.clone();
    }
    let mut certified = true;
    for (m, zm) in tails.iter().enumerate() {
        certified &= zm.norm() <= (0.5f64).powi(m as i32);
        for x in &moduli[m..] {
            certified &= x.le(zm)?;
        }
    }
    Ok(OrderSubsequence {
        indices,
        certificate_norms: tails.iter().map(Element::norm).collect(),
        certified,
    })
}
