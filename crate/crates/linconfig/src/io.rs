//! File formats. All files are UTF-8 JSON; indices (color classes,
//! projection sets, coordinate labels) are 1-based on disk and 0-based in
//! memory. Matrix entries serialize as JSON numbers when they fit in 64
//! bits and as decimal strings otherwise.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::extension::MatrixExtension;
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::matrix::IntMatrix;
use crate::representation::{IntegerRep, Representation, StructuredRep};
use crate::system::PlainReport;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Int(i64),
    Big(String),
}

impl From<&BigInt> for EntryJson {
    fn from(x: &BigInt) -> EntryJson {
        match x.to_i64() {
            Some(v) => EntryJson::Int(v),
            None => EntryJson::Big(x.to_string()),
        }
    }
}

impl TryFrom<&EntryJson> for BigInt {
    type Error = String;
    fn try_from(e: &EntryJson) -> Result<BigInt, String> {
        match e {
            EntryJson::Int(v) => Ok(BigInt::from(*v)),
            EntryJson::Big(s) => {
                BigInt::from_str(s).map_err(|_| format!("bad integer literal: {s}"))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<EntryJson>>,
}

impl From<&IntMatrix> for MatrixJson {
    fn from(m: &IntMatrix) -> MatrixJson {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| m.row(i).iter().map(EntryJson::from).collect())
                .collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for IntMatrix {
    type Error = String;
    fn try_from(j: &MatrixJson) -> Result<IntMatrix, String> {
        if j.entries.len() != j.rows {
            return Err(format!(
                "matrix declares {} rows but has {} entry rows",
                j.rows,
                j.entries.len()
            ));
        }
        let mut rows = Vec::with_capacity(j.rows);
        for row in &j.entries {
            if row.len() != j.cols {
                return Err(format!(
                    "matrix declares {} cols but a row has {}",
                    j.cols,
                    row.len()
                ));
            }
            rows.push(
                row.iter()
                    .map(BigInt::try_from)
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        if rows.is_empty() {
            return Err("matrix must have at least one row".into());
        }
        Ok(IntMatrix::from_rows(rows))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub moduli: Vec<u64>,
}

impl From<&FiniteAbelianGroup> for GroupJson {
    fn from(g: &FiniteAbelianGroup) -> GroupJson {
        GroupJson {
            moduli: g.moduli().to_vec(),
        }
    }
}

impl TryFrom<&GroupJson> for FiniteAbelianGroup {
    type Error = String;
    fn try_from(j: &GroupJson) -> Result<FiniteAbelianGroup, String> {
        if j.moduli.is_empty() {
            return Err("group needs at least one factor".into());
        }
        if j.moduli.iter().any(|&n| n == 0) {
            return Err("factor orders must be positive".into());
        }
        Ok(FiniteAbelianGroup::new(j.moduli.clone()))
    }
}

/// `{"sets": [[element, ...], ...]}`, elements in the group encoding.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetsJson {
    pub sets: Vec<Vec<GroupElement>>,
}

/// `{"removals": [[edge, ...], ...]}`, edges as k-tuples of elements.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RemovalJson {
    pub removals: Vec<Vec<Vec<GroupElement>>>,
}

impl RemovalJson {
    /// Flattens each edge (k-tuple of class elements) into the flat tuple
    /// used internally.
    pub fn to_edge_sets(&self) -> Vec<BTreeSet<GroupElement>> {
        self.removals
            .iter()
            .map(|edges| {
                edges
                    .iter()
                    .map(|edge| edge.iter().flatten().copied().collect())
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub variant: String,
    pub t: usize,
    pub k: usize,
    /// 1-based color classes.
    pub color_classes: Vec<Vec<usize>>,
    pub psi: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisors: Option<Vec<EntryJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<RepresentationJson>>,
}

fn classes_to_json(classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    classes
        .iter()
        .map(|c| c.iter().map(|&x| x + 1).collect())
        .collect()
}

fn classes_from_json(classes: &[Vec<usize>], t: usize) -> Result<Vec<Vec<usize>>, String> {
    classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|&x| {
                    if x == 0 || x > t {
                        Err(format!("class index {x} out of range 1..={t}"))
                    } else {
                        Ok(x - 1)
                    }
                })
                .collect()
        })
        .collect()
}

impl From<&Representation> for RepresentationJson {
    fn from(rep: &Representation) -> RepresentationJson {
        match rep {
            Representation::Integer(r) => RepresentationJson {
                variant: "integer".into(),
                t: r.t,
                k: r.k,
                color_classes: classes_to_json(&r.color_classes),
                psi: MatrixJson::from(&r.psi),
                divisors: None,
                blocks: None,
            },
            Representation::Structured(r) => RepresentationJson {
                variant: "structured".into(),
                t: r.t,
                k: r.k,
                color_classes: classes_to_json(&r.color_classes),
                psi: MatrixJson::from(&r.psi),
                divisors: Some(r.divisors.iter().map(EntryJson::from).collect()),
                blocks: Some(
                    r.blocks
                        .iter()
                        .map(|b| {
                            RepresentationJson::from(&Representation::Integer(b.clone()))
                        })
                        .collect(),
                ),
            },
        }
    }
}

impl TryFrom<&RepresentationJson> for Representation {
    type Error = String;
    fn try_from(j: &RepresentationJson) -> Result<Representation, String> {
        let psi = IntMatrix::try_from(&j.psi)?;
        let color_classes = classes_from_json(&j.color_classes, j.t)?;
        if color_classes.len() != psi.rows() {
            return Err("one color class per psi row required".into());
        }
        match j.variant.as_str() {
            "integer" => Ok(Representation::Integer(IntegerRep {
                psi,
                t: j.t,
                k: j.k,
                color_classes,
            })),
            "structured" => {
                let divisors = j
                    .divisors
                    .as_ref()
                    .ok_or("structured representation needs divisors")?
                    .iter()
                    .map(BigInt::try_from)
                    .collect::<Result<Vec<_>, _>>()?;
                let blocks_json = j
                    .blocks
                    .as_ref()
                    .ok_or("structured representation needs blocks")?;
                let mut blocks = Vec::with_capacity(blocks_json.len());
                for b in blocks_json {
                    match Representation::try_from(b)? {
                        Representation::Integer(ir) => blocks.push(ir),
                        Representation::Structured(_) => {
                            return Err("blocks must be integer representations".into())
                        }
                    }
                }
                if blocks.len() != divisors.len() + 1 {
                    return Err("blocks must number divisors + 1".into());
                }
                let mut column_blocks = Vec::with_capacity(j.t);
                for (i, b) in blocks.iter().enumerate() {
                    column_blocks.extend(std::iter::repeat(i).take(b.t));
                }
                if column_blocks.len() != j.t {
                    return Err("block widths must sum to t".into());
                }
                Ok(Representation::Structured(StructuredRep {
                    divisors,
                    blocks,
                    psi,
                    t: j.t,
                    k: j.k,
                    color_classes,
                    column_blocks,
                }))
            }
            other => Err(format!("unknown representation variant: {other}")),
        }
    }
}

/// One extension step of the pipeline trail.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrailStepJson {
    pub kind: String,
    /// 1-based projection indices into the child's columns.
    pub j_set: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrailJson {
    pub steps: Vec<TrailStepJson>,
    /// 1-based original column indices removed as plain coordinates.
    pub plain_eliminated: Vec<usize>,
    pub degenerate: bool,
}

impl TrailJson {
    pub fn from_parts(trail: &[MatrixExtension], plain: &PlainReport) -> TrailJson {
        TrailJson {
            steps: trail
                .iter()
                .map(|e| TrailStepJson {
                    kind: e.kind.as_str().into(),
                    j_set: e.j_set.iter().map(|&j| j + 1).collect(),
                })
                .collect(),
            plain_eliminated: plain.eliminated().iter().map(|&c| c + 1).collect(),
            degenerate: plain.degenerate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::represent;

    #[test]
    fn matrix_roundtrip_with_big_entries() {
        let huge = BigInt::from_str("123456789012345678901234567890").unwrap();
        let m = IntMatrix::from_rows(vec![vec![BigInt::from(-3), huge.clone()]]);
        let json = serde_json::to_string(&MatrixJson::from(&m)).unwrap();
        assert!(json.contains("\"123456789012345678901234567890\""));
        assert!(json.contains("-3"));
        let back = IntMatrix::try_from(
            &serde_json::from_str::<MatrixJson>(&json).unwrap(),
        )
        .unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn matrix_rejects_ragged_input() {
        let json = r#"{"rows":2,"cols":2,"entries":[[1,2],[3]]}"#;
        let parsed: MatrixJson = serde_json::from_str(json).unwrap();
        assert!(IntMatrix::try_from(&parsed).is_err());
    }

    #[test]
    fn representation_roundtrip_integer_and_structured() {
        for mat in [
            IntMatrix::from_i64(&[&[1, 1, -1]]),
            IntMatrix::from_i64(&[&[1, 2, 2]]),
        ] {
            let out = represent(&mat).unwrap();
            let json = RepresentationJson::from(&out.representation);
            let text = serde_json::to_string_pretty(&json).unwrap();
            let parsed: RepresentationJson = serde_json::from_str(&text).unwrap();
            let back = Representation::try_from(&parsed).unwrap();
            assert_eq!(back, out.representation);
        }
    }

    #[test]
    fn color_classes_are_one_based_on_disk() {
        let out = represent(&IntMatrix::from_i64(&[&[1, 1, -1]])).unwrap();
        let json = RepresentationJson::from(&out.representation);
        for class in &json.color_classes {
            assert!(class.iter().all(|&x| x >= 1 && x <= json.t));
        }
    }
}
