use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BaseSet, Layer, NbhdError, Nsys};
use crate::word::{Alphabet, Word};

/// One layer of a system, as stored in files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "layer", rename_all = "snake_case")]
pub enum LayerRecord {
    Trivial { alphabet: Alphabet, depth: usize },
    Explicit { alphabet: Alphabet, levels: Vec<BTreeSet<Word>> },
    Padded { depth: usize },
    Enriched { alphabet: Alphabet, base: BaseSet },
}

impl Nsys {
    /// Layers from the root up.
    pub fn to_records(&self) -> Vec<LayerRecord> {
        self.stack()
            .iter()
            .map(|s| match s.layer() {
                Layer::Trivial => LayerRecord::Trivial {
                    alphabet: s.alphabet().clone(),
                    depth: s.depth(),
                },
                Layer::Explicit(levels) => LayerRecord::Explicit {
                    alphabet: s.alphabet().clone(),
                    levels: levels.clone(),
                },
                Layer::Padded => LayerRecord::Padded { depth: s.depth() },
                Layer::Enriched(b) => LayerRecord::Enriched {
                    alphabet: s.alphabet().clone(),
                    base: b.clone(),
                },
            })
            .collect()
    }

    /// Rebuilds a system through the checked constructors.
    pub fn from_records(records: &[LayerRecord]) -> Result<Nsys, NbhdError> {
        let (first, rest) = records
            .split_first()
            .ok_or_else(|| NbhdError::Format("empty layer list".into()))?;
        let mut sys = match first {
            LayerRecord::Trivial { alphabet, depth } => Nsys::trivial(alphabet.clone(), *depth)?,
            LayerRecord::Explicit { alphabet, levels } => Nsys::explicit(alphabet.clone(), levels.clone())?,
            _ => return Err(NbhdError::Format("the root layer must be trivial or explicit".into())),
        };
        for r in rest {
            sys = match r {
                LayerRecord::Padded { depth } => {
                    if *depth <= sys.depth() {
                        return Err(NbhdError::Format(format!("padding to {depth} does not add levels")));
                    }
                    sys.pad(*depth)
                }
                LayerRecord::Enriched { alphabet, base } => sys.enrich(base.clone(), alphabet.clone())?,
                _ => return Err(NbhdError::Format("root layer above the root".into())),
            };
        }
        Ok(sys)
    }
}

impl Serialize for Nsys {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_records().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Nsys {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Nsys, D::Error> {
        let records = Vec::<LayerRecord>::deserialize(d)?;
        Nsys::from_records(&records).map_err(serde::de::Error::custom)
    }
}
