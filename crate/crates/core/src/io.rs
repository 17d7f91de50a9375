//! The JSON algebra-description format shared by the CLI commands, and
//! atomic report writing.
//!
//! An algebra description is one document:
//! `{"field": {"conductor": n}, "v": .., "N": .., "parameters": [..],
//!   "relations": [[word, coeff], ..], "alpha": [{"degree_drop": i,
//!   "matrix": [[..]]}, ..]}`
//! with matrices row-major over serialized scalars (rows follow the listed
//! relations, columns the word order of the target degree).

use crate::expr::parse_poly;
use crate::linmap::SparseRow;
use crate::pbw::{DeformationData, PbwError};
use crate::poly::PolyRing;
use crate::scalar::Field;
use crate::word::{GradedPiece, TensorElement};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub enum InputError {
    Json(String),
    Field(String),
    Semantic(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Json(m) => write!(f, "malformed JSON: {}", m),
            InputError::Field(m) => write!(f, "bad field spec: {}", m),
            InputError::Semantic(m) => write!(f, "{}", m),
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDoc {
    pub conductor: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaDoc {
    pub degree_drop: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub field: FieldDoc,
    pub v: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub parameters: Vec<String>,
    pub relations: Vec<Vec<(String, String)>>,
    #[serde(default)]
    pub alpha: Vec<AlphaDoc>,
}

pub fn parse_algebra(json: &str) -> Result<DeformationData, InputError> {
    let doc: AlgebraDoc =
        serde_json::from_str(json).map_err(|e| InputError::Json(e.to_string()))?;
    algebra_from_doc(&doc)
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<DeformationData, InputError> {
    if doc.field.conductor < 1 {
        return Err(InputError::Field("conductor must be >= 1".into()));
    }
    if doc.v < 1 || doc.n < 2 {
        return Err(InputError::Semantic(
            "need v >= 1 and N >= 2".to_string(),
        ));
    }
    let field = Field::cyclotomic(doc.field.conductor);
    let params: Vec<&str> = doc.parameters.iter().map(|s| s.as_str()).collect();
    let ring = PolyRing::new(&field, &params);
    let piece = GradedPiece::new(doc.v, doc.n)
        .map_err(|e| InputError::Semantic(format!("relations piece: {}", e)))?;
    let mut relations = Vec::with_capacity(doc.relations.len());
    for (ri, pairs) in doc.relations.iter().enumerate() {
        let mut t = TensorElement::zero(piece, &ring);
        for (w, c) in pairs {
            let idx = piece.parse_word(w).map_err(|e| {
                InputError::Semantic(format!("relations[{}], word '{}': {}", ri, w, e))
            })?;
            let coeff = parse_poly(&ring, c).map_err(|e| {
                InputError::Semantic(format!("relations[{}], coefficient '{}': {}", ri, c, e))
            })?;
            t.add_term(idx, coeff);
        }
        relations.push(t);
    }
    let mut alpha_rows: Vec<Vec<SparseRow>> = vec![Vec::new(); doc.n];
    let mut seen = vec![false; doc.n + 1];
    for a in &doc.alpha {
        if a.degree_drop < 1 || a.degree_drop > doc.n {
            return Err(InputError::Semantic(format!(
                "alpha degree_drop {} out of range 1..{}",
                a.degree_drop, doc.n
            )));
        }
        if seen[a.degree_drop] {
            return Err(InputError::Semantic(format!(
                "alpha with degree_drop {} given twice",
                a.degree_drop
            )));
        }
        seen[a.degree_drop] = true;
        let cod = GradedPiece::new(doc.v, doc.n - a.degree_drop)
            .map_err(|e| InputError::Semantic(e.to_string()))?;
        if a.matrix.len() != relations.len() {
            return Err(InputError::Semantic(format!(
                "alpha_{} matrix has {} rows, expected {} (one per relation)",
                a.degree_drop,
                a.matrix.len(),
                relations.len()
            )));
        }
        let mut rows = Vec::with_capacity(a.matrix.len());
        for (rno, row) in a.matrix.iter().enumerate() {
            if row.len() != cod.dim() as usize {
                return Err(InputError::Semantic(format!(
                    "alpha_{} row {} has {} columns, expected {}",
                    a.degree_drop,
                    rno,
                    row.len(),
                    cod.dim()
                )));
            }
            let mut sparse: SparseRow = Vec::new();
            for (col, entry) in row.iter().enumerate() {
                let val = parse_poly(&ring, entry).map_err(|e| {
                    InputError::Semantic(format!(
                        "alpha_{} row {} col {} ('{}'): {}",
                        a.degree_drop, rno, col, entry, e
                    ))
                })?;
                if !val.is_zero() {
                    sparse.push((col as u64, val));
                }
            }
            rows.push(sparse);
        }
        alpha_rows[a.degree_drop - 1] = rows;
    }
    for i in 0..doc.n {
        if !seen[i + 1] {
            alpha_rows[i] = vec![Vec::new(); relations.len()];
        }
    }
    DeformationData::new(&field, &ring, doc.v, doc.n, relations, alpha_rows)
        .map_err(|e: PbwError| InputError::Semantic(e.to_string()))
}

/// Serializes a deformation datum back to the document format (relations on
/// the echelon basis).
pub fn algebra_to_doc(data: &DeformationData) -> AlgebraDoc {
    let relations = data
        .r_space()
        .basis_elements(data.ring())
        .iter()
        .map(|t| t.to_pairs())
        .collect();
    let mut alpha = Vec::new();
    for i in 1..=data.n() {
        let m = data.alpha(i);
        let cod = GradedPiece::new(data.v(), data.n() - i).expect("piece exists");
        if m.is_zero() {
            continue;
        }
        let matrix = m
            .rows()
            .iter()
            .map(|row| {
                let mut dense = vec!["0".to_string(); cod.dim() as usize];
                for (j, c) in row {
                    dense[*j as usize] = c.to_string();
                }
                dense
            })
            .collect();
        alpha.push(AlphaDoc {
            degree_drop: i,
            matrix,
        });
    }
    AlgebraDoc {
        field: FieldDoc {
            conductor: data.field().conductor(),
        },
        v: data.v(),
        n: data.n(),
        parameters: data.ring().params().to_vec(),
        relations,
        alpha,
    }
}

/// Writes a report atomically (temp file, then rename).
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}
