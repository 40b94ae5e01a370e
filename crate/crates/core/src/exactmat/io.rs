use serde::{Deserialize, Serialize};

use super::ExactMatrix;
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// On-disk matrix record: `{"field": "GF(7)", "n": 2, "rows": [["1","0"],["0","1"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub field: String,
    pub n: usize,
    pub rows: Vec<Vec<String>>,
}

impl From<&ExactMatrix> for MatrixFile {
    fn from(m: &ExactMatrix) -> Self {
        MatrixFile {
            field: m.spec.to_string(),
            n: m.n,
            rows: m
                .rows()
                .iter()
                .map(|r| r.iter().map(|v| m.spec.format(v)).collect())
                .collect(),
        }
    }
}

impl TryFrom<&MatrixFile> for ExactMatrix {
    type Error = Error;

    fn try_from(file: &MatrixFile) -> Result<Self> {
        let spec: FieldSpec = file.field.parse()?;
        if file.rows.len() != file.n {
            return Err(Error::Parse(format!(
                "expected {} rows, found {}",
                file.n,
                file.rows.len()
            )));
        }
        let mut rows = Vec::with_capacity(file.n);
        for (i, row) in file.rows.iter().enumerate() {
            if row.len() != file.n {
                return Err(Error::Parse(format!(
                    "row {}: expected {} entries, found {}",
                    i + 1,
                    file.n,
                    row.len()
                )));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(j, text)| {
                    spec.parse(text)
                        .map_err(|e| Error::Parse(format!("row {}, column {}: {e}", i + 1, j + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(parsed);
        }
        ExactMatrix::from_rows(&spec, rows)
    }
}

impl ExactMatrix {
    pub fn to_file(&self) -> MatrixFile {
        MatrixFile::from(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("matrix record serializes")
    }

    pub fn from_json(text: &str) -> Result<ExactMatrix> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        ExactMatrix::try_from(&file)
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(d)?;
        ExactMatrix::try_from(&file).map_err(serde::de::Error::custom)
    }
}
