//! Loading and writing the JSON file formats. The kind of a file is decided
//! by its keys: `domain` (PDI), `action` (module map), `map` (partial
//! function) or `entries` (matrix).

use std::fs;
use std::path::Path;

use piso::hilbert_module::ModuleMap;
use piso::io::{ModuleMapFile, PdiFile};
use piso::linalg::{ComplexMatrix, Tolerance};
use piso::pdf_sets::{to_partial_isometry, PartialFn};
use piso::pdi::PartiallyDefinedIsometry;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub enum Input {
    Matrix(ComplexMatrix),
    PartialFn(PartialFn),
    ModuleMap(ModuleMap),
    Pdi(PartiallyDefinedIsometry),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Matrix(_) => "matrix",
            Input::PartialFn(_) => "partial function",
            Input::ModuleMap(_) => "module map",
            Input::Pdi(_) => "partially defined isometry",
        }
    }

    /// The operator of a matrix or partial-function input.
    pub fn operator(&self) -> Option<ComplexMatrix> {
        match self {
            Input::Matrix(m) => Some(m.clone()),
            Input::PartialFn(f) => Some(to_partial_isometry(f)),
            _ => None,
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("{}: malformed JSON: {e}", path.display())))
}

fn decode<T: DeserializeOwned>(path: &Path, value: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(value)
        .map_err(|e| CliError::parse(format!("{}: invalid {what}: {e}", path.display())))
}

fn build<T>(path: &Path, r: piso::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path, tol: &Tolerance) -> Result<Input, CliError> {
    let value = read_json(path)?;
    let has = |key: &str| value.get(key).is_some();
    if has("domain") {
        let file: PdiFile = decode(path, value, "PDI file")?;
        Ok(Input::Pdi(build(path, file.into_pdi(tol))?))
    } else if has("action") {
        let file: ModuleMapFile = decode(path, value, "module map file")?;
        Ok(Input::ModuleMap(build(path, file.into_map(tol))?))
    } else if has("map") {
        Ok(Input::PartialFn(decode(path, value, "partial function")?))
    } else if has("entries") {
        Ok(Input::Matrix(decode(path, value, "matrix")?))
    } else {
        Err(CliError::parse(format!(
            "{}: expected a matrix, partial function, module map or PDI file",
            path.display()
        )))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    fs::write(path, to_json(value))
        .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))
}
