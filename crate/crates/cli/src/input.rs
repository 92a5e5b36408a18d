use std::path::Path;

use blockeq_core::equiv::SearchBudget;
use blockeq_core::poset_block::ShapeDoc;
use blockeq_core::quiver::{KWebDocument, PathModule, Quiver, ZRep};
use blockeq_core::sft::SftMatrix;
use blockeq_core::{BlockedMatrix, IntMatrix, Poset, Verdict};
use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::Failure;

fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::data(path, e))?
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::data(path, e))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::data(path, e))
}

fn from_value<T: DeserializeOwned>(path: &Path, v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::data(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    from_value(path, read_value(path)?)
}

/// A blocked-matrix document, or a plain matrix read as a single block.
pub fn read_blocked(path: &Path) -> Result<BlockedMatrix, Failure> {
    let v = read_value(path)?;
    if v.get("shape").is_some() {
        return from_value(path, v);
    }
    let m: IntMatrix = from_value(path, v)?;
    BlockedMatrix::single_block(m).map_err(|e| Failure::data(path, e))
}

/// A column vector: a flat array of integers or an `n x 1` matrix.
pub fn read_vector(path: &Path) -> Result<IntMatrix, Failure> {
    let v = match read_value(path)? {
        Value::Array(items) if items.iter().all(|x| !x.is_array()) => {
            Value::Array(items.into_iter().map(|x| Value::Array(vec![x])).collect())
        }
        other => other,
    };
    let m: IntMatrix = from_value(path, v)?;
    if m.cols() != 1 {
        return Err(Failure::data(path, format!("expected a column vector, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m)
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Schema {
    Matrix,
    Vector,
    Sft,
    Poset,
    Shape,
    Blocked,
    Quiver,
    Rep,
    Module,
    Kweb,
    Budget,
    Verdict,
}

impl Schema {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    pub fn check(self, path: &Path) -> Result<(), Failure> {
        match self {
            Schema::Matrix => read_json::<IntMatrix>(path).map(drop),
            Schema::Vector => read_vector(path).map(drop),
            Schema::Sft => read_json::<SftMatrix>(path).map(drop),
            Schema::Poset => read_json::<Poset>(path).map(drop),
            Schema::Shape => {
                let doc: ShapeDoc = read_json(path)?;
                doc.resolve().map(drop).map_err(|e| Failure::data(path, e))
            }
            Schema::Blocked => read_blocked(path).map(drop),
            Schema::Quiver => read_json::<Quiver>(path).map(drop),
            Schema::Rep => read_json::<ZRep>(path).map(drop),
            Schema::Module => read_json::<PathModule>(path).map(drop),
            Schema::Kweb => {
                let doc: KWebDocument = read_json(path)?;
                if doc.labels.len() != doc.quiver.vertices() {
                    return Err(Failure::data(path, "one label per web node expected"));
                }
                doc.rep.validate(&doc.quiver).map_err(|e| Failure::data(path, e))
            }
            Schema::Budget => {
                let b: SearchBudget = read_json(path)?;
                b.validate().map_err(|e| Failure::data(path, e))
            }
            Schema::Verdict => read_json::<Verdict>(path).map(drop),
        }
    }
}
