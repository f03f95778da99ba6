//! JSON fixture documents: an embedding plus optional alpha and named orientations.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embed::{Embedding, Mode};
use crate::error::{Error, Result};
use crate::orient::{AlphaSpec, Orientation};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub mode: Mode,
    pub vertices: Vec<RawVertex>,
    pub edges: Vec<RawEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<(Label, Label)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientations: Option<BTreeMap<String, BTreeMap<String, [i64; 2]>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawVertex {
    pub id: i64,
    pub rotation: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawEdge {
    pub id: i64,
    pub ends: [i64; 2],
}

/// An id that may be written either as a JSON number or a numeric string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl Label {
    pub fn value(&self) -> Result<i64> {
        match self {
            Label::Int(i) => Ok(*i),
            Label::Str(s) => parse_id(s),
        }
    }
}

fn parse_id(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Malformed(format!("expected an integer id, found {s:?}")))
}

impl RawDocument {
    pub fn embedding(&self) -> Result<Embedding> {
        self.embedding_as(self.mode)
    }

    pub fn embedding_as(&self, mode: Mode) -> Result<Embedding> {
        let vertices: Vec<(i64, Vec<i64>)> = self
            .vertices
            .iter()
            .map(|v| (v.id, v.rotation.clone()))
            .collect();
        let edges: Vec<(i64, [i64; 2])> = self.edges.iter().map(|e| (e.id, e.ends)).collect();
        let outer = match &self.outer_face {
            Some((e, t)) => Some((e.value()?, t.value()?)),
            None => None,
        };
        Embedding::new(mode, &vertices, &edges, outer)
    }
}

/// A parsed fixture: the embedding with its optional alpha and orientations.
#[derive(Debug, Clone)]
pub struct Instance {
    pub embedding: Embedding,
    pub alpha: Option<AlphaSpec>,
    pub orientations: BTreeMap<String, Orientation>,
    raw: RawDocument,
}

impl Instance {
    pub fn from_json(document: &str) -> Result<Self> {
        let raw: RawDocument =
            serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_raw(raw, None)
    }

    pub fn from_path(path: impl AsRef<Path>, mode: Option<Mode>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        let raw: RawDocument =
            serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_raw(raw, mode)
    }

    /// Build from a raw document, optionally overriding its mode.
    pub fn from_raw(raw: RawDocument, mode: Option<Mode>) -> Result<Self> {
        let embedding = raw.embedding_as(mode.unwrap_or(raw.mode))?;
        let alpha = match &raw.alpha {
            Some(map) => Some(alpha_from_labels(&embedding, map)?),
            None => None,
        };
        let mut orientations = BTreeMap::new();
        for (name, arcs) in raw.orientations.iter().flatten() {
            let o = orientation_from_labels(&embedding, arcs)
                .map_err(|e| Error::BadOrientation(format!("{name}: {e}")))?;
            orientations.insert(name.clone(), o);
        }
        Ok(Instance {
            embedding,
            alpha,
            orientations,
            raw,
        })
    }

    pub fn orientation(&self, name: &str) -> Result<&Orientation> {
        self.orientations
            .get(name)
            .ok_or_else(|| Error::UnknownOrientation(name.to_string()))
    }

    /// Serialize back to the fixture schema, with the orientations currently held.
    pub fn to_json(&self) -> String {
        let mut raw = self.raw.clone();
        raw.mode = self.embedding.mode();
        raw.orientations = if self.orientations.is_empty() {
            None
        } else {
            Some(
                self.orientations
                    .iter()
                    .map(|(n, o)| (n.clone(), orientation_to_labels(&self.embedding, o)))
                    .collect(),
            )
        };
        serde_json::to_string_pretty(&raw).expect("fixture serializes")
    }
}

pub fn alpha_from_labels(e: &Embedding, map: &BTreeMap<String, i64>) -> Result<AlphaSpec> {
    let mut out = vec![None; e.num_vertices()];
    for (k, &v) in map {
        let label = parse_id(k)?;
        let idx = e.vertex_index(label).ok_or(Error::VertexMismatch)?;
        if v < 0 {
            return Err(Error::Malformed(format!(
                "alpha({label}) = {v} is negative"
            )));
        }
        out[idx] = Some(v as usize);
    }
    let degrees: Option<Vec<usize>> = out.into_iter().collect();
    degrees.map(AlphaSpec::new).ok_or(Error::VertexMismatch)
}

pub fn alpha_to_labels(e: &Embedding, a: &AlphaSpec) -> BTreeMap<String, i64> {
    a.out_degrees()
        .iter()
        .enumerate()
        .map(|(v, &d)| (e.vertex_label(v).to_string(), d as i64))
        .collect()
}

pub fn orientation_from_labels(
    e: &Embedding,
    arcs: &BTreeMap<String, [i64; 2]>,
) -> Result<Orientation> {
    let mut reversed = vec![None; e.num_edges()];
    for (k, [tail, head]) in arcs {
        let h = e.half_edge_from_labels(parse_id(k)?, *tail)?;
        if e.vertex_label(e.head(h)) != *head {
            return Err(Error::Malformed(format!(
                "edge {k} does not join {tail} and {head}"
            )));
        }
        reversed[h.edge()] = Some(h.is_reversed());
    }
    if let Some(missing) = reversed.iter().position(Option::is_none) {
        return Err(Error::Malformed(format!(
            "edge {} has no direction",
            e.edge_label(missing)
        )));
    }
    Ok(Orientation::from_reversed(
        reversed.into_iter().map(Option::unwrap).collect(),
    ))
}

pub fn orientation_to_labels(e: &Embedding, o: &Orientation) -> BTreeMap<String, [i64; 2]> {
    o.arcs()
        .map(|h| {
            (
                e.edge_label(h.edge()).to_string(),
                [e.vertex_label(e.tail(h)), e.vertex_label(e.head(h))],
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::{fixture, fixture_text};

    #[test]
    fn kite_round_trips() {
        let inst = fixture("kite");
        assert_eq!(inst.orientations.len(), 3);
        let again = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(again.orientations, inst.orientations);
        assert_eq!(again.alpha, inst.alpha);
        assert_eq!(again.embedding.outer_face(), inst.embedding.outer_face());
    }

    #[test]
    fn string_edge_ids_accepted_for_outer_face() {
        let text =
            fixture_text("kite").replace("\"outer_face\": [3, 0]", "\"outer_face\": [\"3\", 0]");
        let inst = Instance::from_json(&text).unwrap();
        assert_eq!(
            inst.embedding.outer_face(),
            fixture("kite").embedding.outer_face()
        );
    }

    #[test]
    fn orientation_errors() {
        let e = fixture("kite").embedding;
        let mut arcs = orientation_to_labels(&e, &fixture("kite").orientations["D1"]);
        arcs.insert("4".into(), [1, 3]);
        assert!(orientation_from_labels(&e, &arcs).is_err());
        arcs.remove("4");
        assert!(orientation_from_labels(&e, &arcs).is_err());
    }
}
