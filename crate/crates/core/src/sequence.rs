use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{LatticeError, Result};
use crate::lattice::{Element, SpaceTag};

type Generator = dyn Fn(usize) -> Element + Send + Sync;

/// A finite, 1-indexed sequence of elements sharing one tag.
///
/// Terms are produced on demand by a pure generator, so a sequence is cheap to
/// clone and to share between threads.
#[derive(Clone)]
pub struct VectorSequence {
    name: String,
    tag: SpaceTag,
    len: usize,
    generator: Arc<Generator>,
}

impl fmt::Debug for VectorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorSequence")
            .field("name", &self.name)
            .field("tag", &self.tag)
            .field("len", &self.len)
            .finish()
    }
}

impl VectorSequence {
    /// `generator(n)` must return an element tagged `tag` for `1 <= n <= len`.
    pub fn from_fn<F>(name: impl Into<String>, tag: SpaceTag, len: usize, generator: F) -> Self
    where
        F: Fn(usize) -> Element + Send + Sync + 'static,
    {
        assert!(len >= 1, "sequences have at least one term");
        VectorSequence {
            name: name.into(),
            tag,
            len,
            generator: Arc::new(generator),
        }
    }

    pub fn from_elements(name: impl Into<String>, elements: Vec<Element>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| LatticeError::InvalidElement("empty sequence".into()))?;
        let tag = first.tag();
        for x in &elements {
            tag.ensure_same(&x.tag())?;
        }
        let len = elements.len();
        let elements = Arc::new(elements);
        Ok(Self::from_fn(name, tag, len, move |n| {
            elements[n - 1].clone()
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tag(&self) -> &SpaceTag {
        &self.tag
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn at(&self, n: usize) -> Result<Element> {
        if n == 0 || n > self.len {
            return Err(LatticeError::IndexOutOfRange {
                index: n,
                len: self.len,
            });
        }
        Ok((self.generator)(n))
    }

    pub(crate) fn term(&self, n: usize) -> Element {
        debug_assert!((1..=self.len).contains(&n));
        (self.generator)(n)
    }

    /// All terms, in order.
    pub fn materialize(&self) -> Vec<Element> {
        (1..=self.len)
            .into_par_iter()
            .map(|n| self.term(n))
            .collect()
    }

    pub fn map<F>(&self, name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Element) -> Element + Send + Sync + 'static,
    {
        let inner = self.generator.clone();
        VectorSequence {
            name: name.into(),
            tag: self.tag.clone(),
            len: self.len,
            generator: Arc::new(move |n| f(&inner(n))),
        }
    }

    /// `(|x_n|)`.
    pub fn modulus(&self) -> Self {
        self.map(format!("|{}|", self.name), Element::abs)
    }

    /// `n ↦ x_{indices[n-1]}`; indices must lie in `1..=len`.
    pub fn subsequence(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(LatticeError::InvalidElement("empty subsequence".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > self.len) {
            return Err(LatticeError::IndexOutOfRange {
                index: bad,
                len: self.len,
            });
        }
        let inner = self.generator.clone();
        let indices: Arc<Vec<usize>> = Arc::new(indices.to_vec());
        Ok(VectorSequence {
            name: format!("{}[sub]", self.name),
            tag: self.tag.clone(),
            len: indices.len(),
            generator: Arc::new(move |n| inner(indices[n - 1])),
        })
    }

    /// `a·x_n + b·y_n`, truncated to the shorter length.
    pub fn linear_combination(a: f64, x: &Self, b: f64, y: &Self) -> Result<Self> {
        x.tag.ensure_same(&y.tag)?;
        let (gx, gy) = (x.generator.clone(), y.generator.clone());
        Ok(VectorSequence {
            name: format!("{a}*{} + {b}*{}", x.name, y.name),
            tag: x.tag.clone(),
            len: x.len.min(y.len),
            generator: Arc::new(move |n| gx(n).scale(a).add(&gy(n).scale(b)).expect("equal tags")),
        })
    }
}
