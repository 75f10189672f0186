//! Binary field container: magic, little-endian format version, a JSON
//! header, then every field as raw little-endian `f64`s in header order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PeriodicGrid, ScalarField};

pub const MAGIC: &[u8; 8] = b"CYLABFLD";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainerHeader {
    pub complex_dim: usize,
    pub resolution: usize,
    pub fields: Vec<String>,
    /// Free-form metadata (continuity parameter, step trace, config hash).
    #[serde(default)]
    pub meta: serde_json::Value,
}

/// Named scalar fields on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldContainer {
    pub grid: PeriodicGrid,
    pub fields: Vec<(String, ScalarField)>,
    pub meta: serde_json::Value,
}

impl FieldContainer {
    pub fn new(grid: PeriodicGrid) -> Self {
        Self {
            grid,
            fields: Vec::new(),
            meta: serde_json::Value::Null,
        }
    }

    pub fn with_field(mut self, name: &str, field: ScalarField) -> Result<Self> {
        if field.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        if self.get(name).is_some() {
            return Err(Error::Container(format!("duplicate field {name}")));
        }
        self.fields.push((name.to_string(), field));
        Ok(self)
    }

    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = meta;
        self
    }

    pub fn get(&self, name: &str) -> Option<&ScalarField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn require(&self, name: &str) -> Result<&ScalarField> {
        self.get(name).ok_or_else(|| Error::Container(format!("missing field {name}")))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let header = ContainerHeader {
            complex_dim: self.grid.complex_dim(),
            resolution: self.grid.resolution(),
            fields: self.fields.iter().map(|(n, _)| n.clone()).collect(),
            meta: self.meta.clone(),
        };
        let json = serde_json::to_vec(&header).expect("header serializes");
        let mut out = Vec::with_capacity(16 + json.len() + 8 * self.grid.len() * self.fields.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(json.len() as u32).to_le_bytes());
        out.extend_from_slice(&json);
        for (_, f) in &self.fields {
            for v in f.values() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Container(m.to_string());
        if bytes.len() < 16 || &bytes[..8] != MAGIC {
            return Err(bad("not a field container"));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(Error::Container(format!("unsupported container version {version}")));
        }
        let hlen = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let body = bytes.get(16..16 + hlen).ok_or_else(|| bad("truncated header"))?;
        let header: ContainerHeader = serde_json::from_slice(body)?;
        let grid = PeriodicGrid::new(header.complex_dim, header.resolution)?;
        let n = grid.len();
        let data = &bytes[16 + hlen..];
        if data.len() != 8 * n * header.fields.len() {
            return Err(Error::Container(format!(
                "payload holds {} bytes, expected {}",
                data.len(),
                8 * n * header.fields.len()
            )));
        }
        let mut fields = Vec::with_capacity(header.fields.len());
        for (i, name) in header.fields.into_iter().enumerate() {
            let values = data[8 * n * i..8 * n * (i + 1)]
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            fields.push((name, ScalarField::new(grid, values)?));
        }
        Ok(Self {
            grid,
            fields,
            meta: header.meta,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_corruption() {
        let grid = PeriodicGrid::new(1, 4).unwrap();
        let c = FieldContainer::new(grid).with_field("phi", ScalarField::constant(grid, 1.5)).unwrap();
        let bytes = c.to_bytes();
        assert_eq!(FieldContainer::from_bytes(&bytes).unwrap(), c);
        assert!(FieldContainer::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        assert!(FieldContainer::from_bytes(&wrong).is_err());
        assert!(c.clone().with_field("phi", ScalarField::zeros(grid)).is_err());
    }
}
