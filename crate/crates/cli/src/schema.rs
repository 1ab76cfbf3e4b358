//! JSON input formats and their conversion into engine values.
//!
//! Parsing happens in two stages: serde checks the shape (with line and
//! column on failure, and the JSON path of the offending value), then the
//! conversion functions check the model-level constraints such as gamble
//! lengths and known labels, naming the offending index.

use std::fmt;
use std::path::Path;

use imprecise_core::lowprev::Assessment;
use imprecise_core::rational::parse;
use imprecise_core::shift::{quadratic_event, residue_counterexample_event, NatGamble};
use imprecise_core::transforms::TransformationMonoid;
use imprecise_core::{Event, Gamble, Rational, Space, Transformation};
use serde::de::{self, DeserializeOwned, Deserializer, Visitor};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// A rational written as `"p/q"`, an integer string, or a JSON integer.
#[derive(Clone, Debug)]
pub struct Num(pub Rational);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct NumVisitor;

        impl Visitor<'_> for NumVisitor {
            type Value = Num;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                parse(v).map(Num).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(imprecise_core::rational::int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                parse(&v.to_string()).map(Num).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Err(E::custom(format!("floating-point value {v}; write rationals as \"p/q\" strings")))
            }
        }

        deserializer.deserialize_any(NumVisitor)
    }
}

fn nums(values: &[Num]) -> Vec<Rational> {
    values.iter().map(|n| n.0.clone()).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GambleJson {
    pub values: Vec<Num>,
}

impl GambleJson {
    pub fn to_gamble(&self, space: &Space, at: &str) -> Result<Gamble, CliError> {
        if self.values.len() != space.size() {
            return Err(CliError::Input(format!(
                "{at}: expected {} values, found {}",
                space.size(),
                self.values.len()
            )));
        }
        Ok(Gamble::new(space, nums(&self.values))?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemJson {
    pub gamble: Option<GambleJson>,
    pub event: Option<Vec<String>>,
    pub lower: Num,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentJson {
    pub space: Vec<String>,
    #[serde(default)]
    pub items: Vec<ItemJson>,
}

fn event(space: &Space, labels: &[String], at: &str) -> Result<Event, CliError> {
    Event::from_labels(space, labels).map_err(|e| CliError::Input(format!("{at}: {e}")))
}

impl AssessmentJson {
    pub fn to_assessment(&self) -> Result<Assessment, CliError> {
        let space = Space::new(self.space.iter().cloned()).map_err(|e| CliError::Input(format!("space: {e}")))?;
        build_assessment(&space, &self.items)
    }
}

impl CountPriorJson {
    pub fn to_assessment(&self, space: &Space) -> Result<Assessment, CliError> {
        if let Some(labels) = &self.space {
            if labels.as_slice() != space.labels() {
                return Err(CliError::Input(format!(
                    "count_prior.space: expected labels {:?}, found {:?}",
                    space.labels(),
                    labels
                )));
            }
        }
        build_assessment(space, &self.items)
    }
}

fn build_assessment(space: &Space, items: &[ItemJson]) -> Result<Assessment, CliError> {
    let mut a = Assessment::vacuous(space);
    for (i, item) in items.iter().enumerate() {
        let at = format!("items[{i}]");
        let gamble = match (&item.gamble, &item.event) {
            (Some(g), None) => g.to_gamble(space, &format!("{at}.gamble"))?,
            (None, Some(labels)) => event(space, labels, &format!("{at}.event"))?.indicator(),
            _ => {
                return Err(CliError::Input(format!(
                    "{at}: give exactly one of `gamble` and `event`"
                )))
            }
        };
        a.push(gamble, item.lower.0.clone())?;
    }
    Ok(a)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub map: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidJson {
    pub generators: Vec<MapJson>,
}

impl MonoidJson {
    pub fn to_monoid(&self, space: &Space) -> Result<TransformationMonoid, CliError> {
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                Transformation::new(space, g.map.clone())
                    .map_err(|e| CliError::Input(format!("generators[{i}].map: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TransformationMonoid::new(space, generators)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NatGambleJson {
    FinSupport { values: Vec<Num> },
    Convergent { prefix: Vec<Num>, limit: Num },
    EventuallyPeriodic { prefix: Vec<Num>, cycle: Vec<Num> },
    Truncated { window: Vec<Num>, lo: Num, hi: Num },
    Residue { modulus: usize, residue: usize },
    QuadraticEvent { truncation: usize },
    ResidueCounterexample { n: u64, truncation: usize },
}

impl NatGambleJson {
    pub fn to_nat_gamble(&self) -> Result<NatGamble, CliError> {
        let g = match self {
            NatGambleJson::FinSupport { values } => NatGamble::FinSupport(nums(values)),
            NatGambleJson::Convergent { prefix, limit } => NatGamble::Convergent {
                prefix: nums(prefix),
                limit: limit.0.clone(),
            },
            NatGambleJson::EventuallyPeriodic { prefix, cycle } => {
                NatGamble::eventually_periodic(nums(prefix), nums(cycle))?
            }
            NatGambleJson::Truncated { window, lo, hi } => {
                NatGamble::truncated(nums(window), lo.0.clone(), hi.0.clone())?
            }
            NatGambleJson::Residue { modulus, residue } => NatGamble::residue_indicator(*modulus, *residue)?,
            NatGambleJson::QuadraticEvent { truncation } => quadratic_event(*truncation)?,
            NatGambleJson::ResidueCounterexample { n, truncation } => {
                residue_counterexample_event(*n, *truncation)?
            }
        };
        Ok(g)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountPriorJson {
    pub space: Option<Vec<String>>,
    #[serde(default)]
    pub items: Vec<ItemJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioJson {
    pub kappa: usize,
    pub n_star: usize,
    pub observed: Vec<usize>,
    pub count_prior: CountPriorJson,
    pub query_gamble: GambleJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFunctionJson {
    pub space: Option<Vec<String>>,
    pub events: Vec<Vec<String>>,
    pub values: Vec<Num>,
}

impl SetFunctionJson {
    /// The declared space, or else the labels of the largest event in the
    /// order listed (the domain must contain the whole space).
    pub fn space(&self) -> Result<Space, CliError> {
        let labels = match &self.space {
            Some(labels) => labels.clone(),
            None => self
                .events
                .iter()
                .max_by_key(|e| e.len())
                .cloned()
                .ok_or_else(|| CliError::Input("events: at least the empty event and the whole space are needed".into()))?,
        };
        Space::new(labels).map_err(|e| CliError::Input(format!("space: {e}")))
    }

    pub fn entries(&self, space: &Space) -> Result<Vec<(Event, Rational)>, CliError> {
        if self.events.len() != self.values.len() {
            return Err(CliError::Input(format!(
                "values: expected {} values (one per event), found {}",
                self.events.len(),
                self.values.len()
            )));
        }
        self.events
            .iter()
            .zip(&self.values)
            .enumerate()
            .map(|(i, (labels, v))| Ok((event(space, labels, &format!("events[{i}]"))?, v.0.clone())))
            .collect()
    }
}

/// A file read from disk together with its digest.
pub struct Input {
    pub path: String,
    pub bytes: Vec<u8>,
}

impl Input {
    pub fn read(path: &Path) -> Result<Input, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(Input {
            path: path.display().to_string(),
            bytes,
        })
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }

    pub fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        let mut de = serde_json::Deserializer::from_slice(&self.bytes);
        let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                CliError::Input(format!("{}: {inner}", self.path))
            } else {
                CliError::Input(format!("{}: {path}: {inner}", self.path))
            }
        })?;
        de.end().map_err(|e| CliError::Input(format!("{}: {e}", self.path)))?;
        Ok(value)
    }

    pub fn json(&self) -> Result<serde_json::Value, CliError> {
        self.parse()
    }
}
