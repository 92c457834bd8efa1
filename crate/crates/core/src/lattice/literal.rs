//! Structured-text literals for tags and elements.
//!
//! ```json
//! {"tag": "lp", "p": 2.0, "coords": {"3": 0.25}}
//! {"tag": "lp_step", "p": 1.0, "level": 1, "values": [1.0, 0.0], "weights": [1.0]}
//! {"tag": "direct_sum", "left": {"1": 1.0}, "right": {"1": 1.0}}
//! ```

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::{DirectSumVector, Element, LatticeVector, MeasureModel, SpaceTag, StepFunction};
use crate::error::{LatticeError, Result};

/// Coordinates keyed by 1-based index, written in numeric order.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>")]
pub struct Coords(pub Vec<(usize, f64)>);

impl TryFrom<BTreeMap<String, f64>> for Coords {
    type Error = String;

    fn try_from(map: BTreeMap<String, f64>) -> std::result::Result<Self, String> {
        let mut out = Vec::with_capacity(map.len());
        for (k, v) in map {
            let i: usize = k
                .parse()
                .map_err(|_| format!("coordinate key {k:?} is not an index"))?;
            out.push((i, v));
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(Coords(out))
    }
}

impl Serialize for Coords {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (i, v) in &self.0 {
            map.serialize_entry(&i.to_string(), v)?;
        }
        map.end()
    }
}

impl From<&LatticeVector> for Coords {
    fn from(x: &LatticeVector) -> Self {
        Coords(x.iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagLiteral {
    pub tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementLiteral {
    pub tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Coords>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Coords>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Coords>,
}

fn invalid(msg: impl Into<String>) -> LatticeError {
    LatticeError::InvalidElement(msg.into())
}

impl TagLiteral {
    pub fn to_tag(&self) -> Result<SpaceTag> {
        build_tag(&self.tag, self.p, self.weights.as_deref())
    }
}

impl From<&SpaceTag> for TagLiteral {
    fn from(tag: &SpaceTag) -> Self {
        let (name, p, weights) = tag_parts(tag);
        TagLiteral {
            tag: name.into(),
            p,
            weights,
        }
    }
}

fn tag_parts(tag: &SpaceTag) -> (&'static str, Option<f64>, Option<Vec<f64>>) {
    match tag {
        SpaceTag::C0 => ("c0", None, None),
        SpaceTag::Lp(p) => ("lp", Some(*p), None),
        SpaceTag::LInftySeq => ("linf", None, None),
        SpaceTag::LpStep { p, measure } => ("lp_step", Some(*p), Some(measure.weights().to_vec())),
        SpaceTag::DirectSumL1Linf => ("direct_sum", None, None),
    }
}

fn build_tag(name: &str, p: Option<f64>, weights: Option<&[f64]>) -> Result<SpaceTag> {
    let need_p = || p.ok_or_else(|| invalid(format!("tag {name} needs an exponent p")));
    let no_weights = || match weights {
        Some(_) => Err(invalid(format!("tag {name} takes no weights"))),
        None => Ok(()),
    };
    match name {
        "c0" | "linf" | "direct_sum" => {
            if p.is_some() {
                return Err(invalid(format!("tag {name} takes no exponent")));
            }
            no_weights()?;
            Ok(match name {
                "c0" => SpaceTag::C0,
                "linf" => SpaceTag::LInftySeq,
                _ => SpaceTag::DirectSumL1Linf,
            })
        }
        "lp" => {
            no_weights()?;
            SpaceTag::lp(need_p()?)
        }
        "lp_step" => {
            let measure = match weights {
                Some(w) => MeasureModel::new(w.to_vec())?,
                None => MeasureModel::lebesgue(0),
            };
            SpaceTag::lp_step(need_p()?, measure)
        }
        other => Err(invalid(format!("unknown tag {other:?}"))),
    }
}

/// Short tag names used on the command line: `c0`, `linf`, `direct_sum`,
/// `l<p>` (e.g. `l2`) and `step<p>` (e.g. `step1`, Lebesgue measure).
pub fn parse_tag_name(s: &str) -> Result<SpaceTag> {
    let exponent = |rest: &str| -> Result<f64> {
        rest.parse::<f64>()
            .map_err(|_| invalid(format!("bad exponent in tag {s:?}")))
    };
    match s {
        "c0" => Ok(SpaceTag::C0),
        "linf" => Ok(SpaceTag::LInftySeq),
        "direct_sum" => Ok(SpaceTag::DirectSumL1Linf),
        _ => {
            if let Some(rest) = s.strip_prefix("step") {
                SpaceTag::lp_lebesgue(exponent(rest)?)
            } else if let Some(rest) = s.strip_prefix('l') {
                SpaceTag::lp(exponent(rest)?)
            } else {
                Err(invalid(format!("unknown tag {s:?}")))
            }
        }
    }
}

impl ElementLiteral {
    pub fn to_element(&self) -> Result<Element> {
        let tag = build_tag(&self.tag, self.p, self.weights.as_deref())?;
        let unexpected = |field: &str, present: bool| {
            if present {
                Err(invalid(format!(
                    "field {field:?} does not apply to tag {}",
                    self.tag
                )))
            } else {
                Ok(())
            }
        };
        match &tag {
            t if t.is_sequence() => {
                unexpected("level", self.level.is_some())?;
                unexpected("values", self.values.is_some())?;
                unexpected("left", self.left.is_some())?;
                unexpected("right", self.right.is_some())?;
                let coords = self.coords.clone().unwrap_or_default();
                Ok(LatticeVector::new(tag, coords.0)?.into())
            }
            SpaceTag::LpStep { .. } => {
                unexpected("coords", self.coords.is_some())?;
                unexpected("left", self.left.is_some())?;
                unexpected("right", self.right.is_some())?;
                let values = self
                    .values
                    .clone()
                    .ok_or_else(|| invalid("step function needs values"))?;
                let f = StepFunction::new(tag, values)?;
                if let Some(level) = self.level {
                    if level != f.level() {
                        return Err(invalid(format!(
                            "level {level} does not match {} values",
                            f.values().len()
                        )));
                    }
                }
                Ok(f.into())
            }
            _ => {
                unexpected("coords", self.coords.is_some())?;
                unexpected("level", self.level.is_some())?;
                unexpected("values", self.values.is_some())?;
                let left =
                    LatticeVector::new(SpaceTag::Lp(1.0), self.left.clone().unwrap_or_default().0)?;
                let right = LatticeVector::new(
                    SpaceTag::LInftySeq,
                    self.right.clone().unwrap_or_default().0,
                )?;
                Ok(DirectSumVector::new(left, right)?.into())
            }
        }
    }
}

impl From<&Element> for ElementLiteral {
    fn from(x: &Element) -> Self {
        let tag = x.tag();
        let (name, p, weights) = tag_parts(&tag);
        let mut lit = ElementLiteral {
            tag: name.into(),
            p,
            coords: None,
            level: None,
            values: None,
            weights,
            left: None,
            right: None,
        };
        match x {
            Element::Seq(v) => lit.coords = Some(v.into()),
            Element::Step(f) => {
                lit.level = Some(f.level());
                lit.values = Some(f.values().to_vec());
            }
            Element::Sum(s) => {
                lit.left = Some(s.left().into());
                lit.right = Some(s.right().into());
            }
        }
        lit
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementLiteral::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lit = ElementLiteral::deserialize(d)?;
        lit.to_element().map_err(serde::de::Error::custom)
    }
}

impl Serialize for SpaceTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TagLiteral::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpaceTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lit = TagLiteral::deserialize(d)?;
        lit.to_tag().map_err(serde::de::Error::custom)
    }
}
