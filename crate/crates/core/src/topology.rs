//! Neighborhood base `V_{u,ε} = {x : ‖|x| ∧ u‖ < ε}` of the un-topology and
//! randomized checks of the neighborhood-base axioms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LatticeError, Result};
use crate::lattice::{DirectSumVector, Element, LatticeVector, SpaceTag, StepFunction};
use crate::sequence::VectorSequence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighborhood {
    u: Element,
    eps: f64,
}

impl Neighborhood {
    pub fn new(u: Element, eps: f64) -> Result<Self> {
        if !u.is_positive() || u.is_zero() {
            return Err(LatticeError::NegativeInput(
                "neighborhood vector must be positive and nonzero".into(),
            ));
        }
        if !(eps.is_finite() && eps > 0.0) {
            return Err(LatticeError::InvalidTolerance(format!(
                "eps = {eps} must be > 0"
            )));
        }
        Ok(Neighborhood { u, eps })
    }

    pub fn u(&self) -> &Element {
        &self.u
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `‖|x| ∧ u‖ < ε`, strictly and without slack.
    pub fn contains(&self, x: &Element) -> Result<bool> {
        Ok(x.meet_norm(&self.u)? < self.eps)
    }

    /// `V_{u₁∨u₂, ε₁∧ε₂}`, contained in both.
    pub fn base_intersection(&self, other: &Neighborhood) -> Result<Neighborhood> {
        Ok(Neighborhood {
            u: self.u.join(&other.u)?,
            eps: self.eps.min(other.eps),
        })
    }

    /// `V_{u,δ}` with `δ = ε − ‖|y| ∧ u‖`, so that `y + V_{u,δ} ⊆ V_{u,ε}`.
    pub fn translate(&self, y: &Element) -> Result<Neighborhood> {
        let delta = self.eps - y.meet_norm(&self.u)?;
        if !(delta > 0.0) {
            return Err(LatticeError::NoRoom);
        }
        Ok(Neighborhood {
            u: self.u.clone(),
            eps: delta,
        })
    }
}

/// Smallest `n₀` with `x_n ∈ V` for every `n₀ <= n <= len`, if any.
pub fn tail_entry(seq: &VectorSequence, v: &Neighborhood) -> Result<Option<usize>> {
    let mut entry = None;
    for n in (1..=seq.len()).rev() {
        if !v.contains(&seq.term(n))? {
            break;
        }
        entry = Some(n);
    }
    Ok(entry)
}

/// Largest coordinate index drawn by [`random_element`] in sequence models.
pub const SAMPLE_COORDS: usize = 32;
/// Levels drawn above the measure's own level in step models.
pub const SAMPLE_EXTRA_LEVELS: u32 = 4;

fn random_sparse<R: Rng>(tag: SpaceTag, rng: &mut R) -> LatticeVector {
    let count = rng.gen_range(1..=8);
    let coords: Vec<(usize, f64)> = (0..count)
        .map(|_| (rng.gen_range(1..=SAMPLE_COORDS), rng.gen_range(-1.0..=1.0)))
        .collect();
    LatticeVector::new(tag, coords).expect("finite entries")
}

/// Entries uniform on `[−1, 1]` over a random sparse support (sequence
/// models) or a random set of cells at a random level (step models).
pub fn random_element<R: Rng>(tag: &SpaceTag, rng: &mut R) -> Element {
    match tag {
        SpaceTag::DirectSumL1Linf => DirectSumVector::new(
            random_sparse(SpaceTag::Lp(1.0), rng),
            random_sparse(SpaceTag::LInftySeq, rng),
        )
        .expect("part tags")
        .into(),
        SpaceTag::LpStep { measure, .. } => {
            let level = measure.level() + rng.gen_range(0..=SAMPLE_EXTRA_LEVELS);
            let values = (0..1usize << level)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        rng.gen_range(-1.0..=1.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            StepFunction::new(tag.clone(), values)
                .expect("valid step function")
                .into()
        }
        _ => random_sparse(tag.clone(), rng).into(),
    }
}

/// A random element with nonzero norm.
pub fn random_nonzero<R: Rng>(tag: &SpaceTag, rng: &mut R) -> Element {
    loop {
        let x = random_element(tag, rng);
        if x.norm() > 0.0 {
            return x;
        }
    }
}

/// `ε` log-uniform on `[1e-4, 1]`.
pub fn random_eps<R: Rng>(rng: &mut R) -> f64 {
    10f64.powf(rng.gen_range(-4.0..=0.0))
}

/// A random neighborhood: `u = |x|` for a random nonzero `x`, random `ε`.
pub fn random_neighborhood<R: Rng>(tag: &SpaceTag, rng: &mut R) -> Neighborhood {
    Neighborhood::new(random_nonzero(tag, rng).abs(), random_eps(rng))
        .expect("valid by construction")
}

/// A random member of `v`: a random vector, shrunk to norm `r·ε` when it is
/// not already inside.
pub fn random_member<R: Rng>(v: &Neighborhood, rng: &mut R) -> Element {
    let x = random_element(&v.u.tag(), rng);
    if v.contains(&x).expect("same tag") {
        return x;
    }
    let r: f64 = rng.gen_range(0.0..1.0);
    x.scale(v.eps * r / x.norm())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub sample: usize,
    pub neighborhood: Neighborhood,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<Neighborhood>,
    pub x: Element,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub samples: usize,
    pub failures: usize,
    pub first_counterexample: Option<Counterexample>,
}

pub const AXIOMS: [&str; 5] = [
    "zero_in_neighborhood",
    "base_intersection",
    "sum_in_double",
    "balanced",
    "separation",
];

/// Samples per worker chunk; chunk `i` draws from stream `i` of the seed.
const CHUNK: usize = 512;

fn one_sample(
    axiom: usize,
    tag: &SpaceTag,
    rng: &mut ChaCha8Rng,
    sample: usize,
) -> Result<Option<Counterexample>> {
    let v = random_neighborhood(tag, rng);
    let bare = |v: Neighborhood, x: Element| Counterexample {
        sample,
        neighborhood: v,
        other: None,
        x,
        y: None,
        lambda: None,
    };
    Ok(match axiom {
        0 => {
            let zero = Element::zero(tag);
            (!v.contains(&zero)?).then(|| bare(v, zero))
        }
        1 => {
            let w = random_neighborhood(tag, rng);
            let both = v.base_intersection(&w)?;
            let x = random_member(&both, rng);
            let inside = both.contains(&x)? && v.contains(&x)? && w.contains(&x)?;
            (!inside).then(|| Counterexample {
                other: Some(w),
                ..bare(v, x)
            })
        }
        2 => {
            let x = random_member(&v, rng);
            let y = random_member(&v, rng);
            let double = Neighborhood::new(v.u.clone(), 2.0 * v.eps)?;
            let ok = !v.contains(&x)? || !v.contains(&y)? || double.contains(&x.add(&y)?)?;
            (!ok).then(|| Counterexample {
                y: Some(y),
                ..bare(v, x)
            })
        }
        3 => {
            let x = random_member(&v, rng);
            let lambda: f64 = rng.gen_range(-1.0..=1.0);
            let ok = !v.contains(&x)? || v.contains(&x.scale(lambda))?;
            (!ok).then(|| Counterexample {
                lambda: Some(lambda),
                ..bare(v, x)
            })
        }
        _ => {
            let x = random_nonzero(tag, rng);
            let own = Neighborhood::new(x.abs(), x.norm())?;
            own.contains(&x)?.then(|| bare(own, x))
        }
    })
}

/// Checks the five neighborhood-base axioms on `samples` random draws each.
/// Deterministic in `(tag, samples, seed)`, independent of the thread count.
pub fn axiom_suite(tag: &SpaceTag, samples: usize, seed: u64) -> Result<Vec<AxiomReport>> {
    AXIOMS
        .iter()
        .enumerate()
        .map(|(axiom, name)| {
            let chunks: Vec<(usize, Option<Counterexample>)> = (0..samples.div_ceil(CHUNK))
                .into_par_iter()
                .map(|chunk| -> Result<(usize, Option<Counterexample>)> {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream((axiom * (1 << 32) + chunk) as u64);
                    let mut failures = 0;
                    let mut first = None;
                    let start = chunk * CHUNK;
                    for sample in start..(start + CHUNK).min(samples) {
                        if let Some(c) = one_sample(axiom, tag, &mut rng, sample)? {
                            failures += 1;
                            first.get_or_insert(c);
                        }
                    }
                    Ok((failures, first))
                })
                .collect::<Result<_>>()?;
            Ok(AxiomReport {
                axiom: name.to_string(),
                samples,
                failures: chunks.iter().map(|c| c.0).sum(),
                first_counterexample: chunks.into_iter().find_map(|c| c.1),
            })
        })
        .collect()
}
