//! JSON documents for quivers, bases and triangulations.

use serde::{Deserialize, Serialize};

use crate::companion::CompanionBasis;
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::root_lattice::CartanType;
use crate::triangulation::Triangulation;
use crate::type_a::Labelling;

/// `{"n": 3, "arrows": [[0, 1], [1, 2]]}`, one entry per arrow, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDoc {
    pub n: usize,
    pub arrows: Vec<[usize; 2]>,
}

impl QuiverDoc {
    /// Arrows sorted lexicographically.
    pub fn from_quiver(q: &Quiver) -> Self {
        QuiverDoc { n: q.n(), arrows: q.arrows().into_iter().map(|(x, y)| [x, y]).collect() }
    }

    /// Builds the quiver. With `simply_laced`, repeated arrows between one
    /// pair of vertices (in either direction) are rejected.
    pub fn to_quiver(&self, simply_laced: bool) -> Result<Quiver> {
        let arrows: Vec<(usize, usize)> = self.arrows.iter().map(|a| (a[0], a[1])).collect();
        if simply_laced {
            let mut seen = std::collections::BTreeSet::new();
            for &(x, y) in &arrows {
                if !seen.insert((x.min(y), x.max(y))) {
                    return Err(Error::Parse(format!("parallel arrows between {x} and {y}")));
                }
            }
        }
        Quiver::from_arrows(self.n, &arrows)
    }
}

pub fn parse_quiver(text: &str, simply_laced: bool) -> Result<Quiver> {
    let doc: QuiverDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_quiver(simply_laced)
}

pub fn quiver_to_json(q: &Quiver) -> String {
    serde_json::to_string(&QuiverDoc::from_quiver(q)).expect("serializable")
}

/// `{"type": {"family": "A", "rank": 3}, "basis": [[1, 0, 0], ...]}`.
///
/// Rows are listed by label when `labels` (label per vertex id) is present,
/// otherwise by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDoc {
    #[serde(rename = "type")]
    pub cartan: CartanType,
    pub basis: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub labels: Option<Vec<usize>>,
}

impl BasisDoc {
    pub fn from_basis(b: &CompanionBasis<i64>, labelling: Option<&Labelling>) -> Self {
        let rows: Vec<Vec<i64>> = b.entries().iter().map(|r| r.coeffs().to_vec()).collect();
        match labelling {
            Some(l) => BasisDoc {
                cartan: b.cartan(),
                basis: l.vertices_by_label().into_iter().map(|v| rows[v].clone()).collect(),
                labels: Some(l.labels.clone()),
            },
            None => BasisDoc { cartan: b.cartan(), basis: rows, labels: None },
        }
    }

    /// The basis indexed by vertex id.
    pub fn to_basis(&self) -> Result<CompanionBasis<i64>> {
        let rows = match &self.labels {
            None => self.basis.clone(),
            Some(labels) => {
                let l = Labelling::from_labels(labels.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                if labels.len() != self.basis.len() {
                    return Err(Error::LengthMismatch { expected: self.basis.len(), got: labels.len() });
                }
                (0..l.n()).map(|x| self.basis[l.label(x) - 1].clone()).collect()
            }
        };
        CompanionBasis::from_i64_rows(self.cartan, &rows)
    }
}

pub fn parse_basis(text: &str) -> Result<CompanionBasis<i64>> {
    let doc: BasisDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_basis()
}

/// `{"polygon_size": 6, "diagonals": [[0, 2], [2, 4], [4, 0]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationDoc {
    pub polygon_size: usize,
    pub diagonals: Vec<[usize; 2]>,
}

pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let doc: TriangulationDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Triangulation::new(doc.polygon_size, doc.diagonals.iter().map(|d| (d[0], d[1])).collect())
}
