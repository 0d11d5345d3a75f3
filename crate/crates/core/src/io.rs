//! JSON file formats for modules, module maps and partially defined
//! isometries. Matrices use the `{"rows", "cols", "entries"}` format and
//! partial functions the `{"source", "target", "map"}` format of their own
//! types.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert_module::{CStarAlgebra, HilbertModule, ModuleMap, Submodule};
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::pdi::PartiallyDefinedIsometry;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub blocks: Vec<usize>,
    pub lift_dim: usize,
    pub generators: Vec<ComplexMatrix>,
}

impl ModuleFile {
    pub fn from_module(m: &HilbertModule) -> Self {
        ModuleFile {
            blocks: m.algebra().block_sizes().to_vec(),
            lift_dim: m.lift_dim(),
            generators: m.generators().to_vec(),
        }
    }

    pub fn into_module(self, tol: &Tolerance) -> Result<HilbertModule> {
        let algebra = CStarAlgebra::new(self.blocks)?;
        HilbertModule::new(algebra, self.lift_dim, self.generators, tol)
    }
}

/// `action` holds the target coordinates of the images of the source
/// generators, one column per source generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleMapFile {
    pub source: ModuleFile,
    pub target: ModuleFile,
    pub action: ComplexMatrix,
}

impl ModuleMapFile {
    pub fn from_map(c: &ModuleMap) -> Self {
        ModuleMapFile {
            source: ModuleFile::from_module(c.source()),
            target: ModuleFile::from_module(c.target()),
            action: c.action().clone(),
        }
    }

    pub fn into_map(self, tol: &Tolerance) -> Result<ModuleMap> {
        let shared = self.source == self.target;
        let source = Arc::new(self.source.into_module(tol)?);
        let target = if shared {
            source.clone()
        } else {
            Arc::new(self.target.into_module(tol)?)
        };
        ModuleMap::new(source, target, self.action, tol)
    }
}

/// A domain entry: a source generator index or an explicit element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainEntry {
    Index(usize),
    Element(ComplexMatrix),
}

/// The domain is the submodule generated by the listed entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdiFile {
    pub map: ModuleMapFile,
    pub domain: Vec<DomainEntry>,
}

impl PdiFile {
    pub fn from_pdi(p: &PartiallyDefinedIsometry) -> Self {
        PdiFile {
            map: ModuleMapFile::from_map(p.map()),
            domain: p
                .domain()
                .basis_elements()
                .into_iter()
                .map(DomainEntry::Element)
                .collect(),
        }
    }

    pub fn into_pdi(self, tol: &Tolerance) -> Result<PartiallyDefinedIsometry> {
        let map = self.map.into_map(tol)?;
        let source = map.source().clone();
        let mut seeds = Vec::with_capacity(self.domain.len());
        for entry in self.domain {
            match entry {
                DomainEntry::Index(i) => {
                    let g = source.generators().get(i).ok_or_else(|| {
                        Error::InvalidPdi(format!("generator index {i} out of range"))
                    })?;
                    seeds.push(g.clone());
                }
                DomainEntry::Element(x) => seeds.push(x),
            }
        }
        let domain = Submodule::generated_by(source, &seeds, tol)?;
        PartiallyDefinedIsometry::new(map, domain, tol)
    }
}
