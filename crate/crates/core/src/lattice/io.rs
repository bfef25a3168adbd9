//! JSON exchange format for patches.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{classify_vertices, Family, GenerationParams, LatticePatch};
use crate::error::{Error, Result};

/// On-disk form of a patch. Positions are written in shortest round-trip
/// decimal form, so export followed by import is bit-exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchDocument {
    pub family: Family,
    pub generation_params: GenerationParams,
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<[usize; 2]>,
    pub classes: Vec<String>,
}

impl LatticePatch {
    pub fn to_document(&self) -> PatchDocument {
        PatchDocument {
            family: self.family,
            generation_params: self.params.clone(),
            vertices: self.positions.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            classes: classify_vertices(self)
                .into_iter()
                .map(|c| c.label)
                .collect(),
        }
    }

    pub fn from_document(doc: PatchDocument) -> Result<Self> {
        if !doc.classes.is_empty() && doc.classes.len() != doc.vertices.len() {
            return Err(Error::MalformedPatch(format!(
                "{} class labels for {} vertices",
                doc.classes.len(),
                doc.vertices.len()
            )));
        }
        LatticePatch::new(
            doc.family,
            doc.generation_params,
            doc.vertices,
            doc.edges.into_iter().map(|[a, b]| (a, b)),
        )
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer(w, &self.to_document())?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        Self::from_document(serde_json::from_reader(r)?)
    }
}
