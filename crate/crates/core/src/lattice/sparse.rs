use std::collections::BTreeMap;

use super::SpaceTag;
use crate::error::{LatticeError, Result};

/// Finitely supported element of a sequence space (c0, l_p, l_infinity).
///
/// Coordinates are 1-based. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector {
    tag: SpaceTag,
    coords: BTreeMap<usize, f64>,
}

impl LatticeVector {
    pub fn new<I>(tag: SpaceTag, coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        if !tag.is_sequence() {
            return Err(LatticeError::InvalidElement(format!(
                "{tag} is not a sequence space"
            )));
        }
        let mut map = BTreeMap::new();
        for (i, v) in coords {
            if i == 0 {
                return Err(LatticeError::InvalidElement(
                    "coordinates start at 1".into(),
                ));
            }
            if !v.is_finite() {
                return Err(LatticeError::InvalidElement(format!(
                    "coordinate {i} is not finite"
                )));
            }
            if v != 0.0 {
                map.insert(i, v);
            } else {
                map.remove(&i);
            }
        }
        Ok(LatticeVector { tag, coords: map })
    }

    pub fn zero(tag: SpaceTag) -> Self {
        debug_assert!(tag.is_sequence());
        LatticeVector {
            tag,
            coords: BTreeMap::new(),
        }
    }

    /// The unit vector `e_n`.
    pub fn unit(tag: SpaceTag, n: usize) -> Self {
        Self::new(tag, [(n, 1.0)]).expect("unit vector index must be >= 1")
    }

    /// Dense literal: `values[0]` lands on coordinate 1.
    pub fn from_dense(tag: SpaceTag, values: &[f64]) -> Result<Self> {
        Self::new(tag, values.iter().enumerate().map(|(i, v)| (i + 1, *v)))
    }

    pub fn tag(&self) -> &SpaceTag {
        &self.tag
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coords.get(&i).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coords.iter().map(|(i, v)| (*i, *v))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Applies `f` coordinatewise; `f(0)` must be 0.
    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let coords = self
            .coords
            .iter()
            .filter_map(|(i, v)| {
                let w = f(*v);
                (w != 0.0).then_some((*i, w))
            })
            .collect();
        LatticeVector {
            tag: self.tag.clone(),
            coords,
        }
    }

    /// Merges two vectors over the union of supports; `f(0, 0)` must be 0.
    pub(crate) fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.tag.ensure_same(&other.tag)?;
        let mut coords = BTreeMap::new();
        let mut a = self.coords.iter().peekable();
        let mut b = other.coords.iter().peekable();
        loop {
            let (i, x, y) = match (a.peek(), b.peek()) {
                (Some((&i, &x)), Some((&j, &y))) => {
                    if i == j {
                        a.next();
                        b.next();
                        (i, x, y)
                    } else if i < j {
                        a.next();
                        (i, x, 0.0)
                    } else {
                        b.next();
                        (j, 0.0, y)
                    }
                }
                (Some((&i, &x)), None) => {
                    a.next();
                    (i, x, 0.0)
                }
                (None, Some((&j, &y))) => {
                    b.next();
                    (j, 0.0, y)
                }
                (None, None) => break,
            };
            let w = f(x, y);
            if w != 0.0 {
                coords.insert(i, w);
            }
        }
        Ok(LatticeVector {
            tag: self.tag.clone(),
            coords,
        })
    }

    /// True iff `pred` holds on every coordinate of the union of supports.
    pub(crate) fn all_pairs(&self, other: &Self, pred: impl Fn(f64, f64) -> bool) -> Result<bool> {
        self.tag.ensure_same(&other.tag)?;
        let ok = self.coords.iter().all(|(i, x)| pred(*x, other.get(*i)))
            && other
                .coords
                .iter()
                .filter(|(i, _)| !self.coords.contains_key(i))
                .all(|(_, y)| pred(0.0, *y));
        Ok(ok)
    }

    pub fn norm(&self) -> f64 {
        let abs = self.coords.values().map(|v| v.abs());
        match self.tag {
            SpaceTag::C0 | SpaceTag::LInftySeq => abs.fold(0.0, f64::max),
            SpaceTag::Lp(p) => lp_norm(abs, p),
            _ => unreachable!("sequence vector with non-sequence tag"),
        }
    }

    pub(crate) fn pairing(&self, x: &Self) -> Result<f64> {
        self.tag.ensure_same(&x.tag)?;
        Ok(self.coords.iter().map(|(i, f)| f * x.get(*i)).sum())
    }
}

pub(crate) fn lp_norm(abs: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p == 1.0 {
        abs.sum()
    } else if p == 2.0 {
        abs.map(|v| v * v).sum::<f64>().sqrt()
    } else {
        abs.map(|v| v.powf(p)).sum::<f64>().powf(p.recip())
    }
}
