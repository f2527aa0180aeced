//! Canonical JSON interchange.
//!
//! ```json
//! {
//!   "edges": [{"categories": ["A"], "child": "2", "parent": "1", "remote": false}],
//!   "format_version": "1",
//!   "id": "example",
//!   "tokens": [{"is_punct": false, "position": 0, "text": "John"}],
//!   "units": [{"id": "0", "kind": "internal"}, {"id": "2", "kind": "terminal", "tokens": [0]}]
//! }
//! ```
//!
//! Keys are sorted, indentation is two spaces and the text ends with a
//! newline. Tokens are sorted by position, units by id and edges by
//! (parent, child, remote). Unit ids are strings; the root is the unit
//! without a primary parent.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::category::CategorySet;
use crate::graph::{BuildError, BuildOptions, EdgeSpec, Passage, Token, UnitKind, UnitSpec};
use crate::json::canonical_json;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterchangeError {
    #[error("malformed interchange document: {0}")]
    MalformedDocument(String),
    #[error("unsupported format_version {0:?}")]
    UnsupportedVersion(String),
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format_version: String,
    id: String,
    tokens: Vec<TokenEntry>,
    units: Vec<UnitEntry>,
    edges: Vec<EdgeEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TokenEntry {
    text: String,
    position: usize,
    is_punct: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitEntry {
    id: String,
    kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tokens: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Terminal,
    Internal,
    Implicit,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeEntry {
    parent: String,
    child: String,
    categories: CategorySet,
    remote: bool,
}

fn document(passage: &Passage) -> Document {
    let units = passage
        .units()
        .iter()
        .map(|u| UnitEntry {
            id: u.id().to_string(),
            kind: match u.kind() {
                UnitKind::Terminal => Kind::Terminal,
                UnitKind::Internal => Kind::Internal,
                UnitKind::Implicit => Kind::Implicit,
            },
            tokens: u.is_terminal().then(|| u.tokens().to_vec()),
        })
        .collect();
    let mut edges: Vec<_> = passage.edges().collect();
    edges.sort_by_key(|e| (e.parent, e.child, e.remote));
    Document {
        format_version: FORMAT_VERSION.to_string(),
        id: passage.id().to_string(),
        tokens: passage
            .tokens()
            .iter()
            .map(|t| TokenEntry {
                text: t.text.clone(),
                position: t.position,
                is_punct: t.is_punct,
            })
            .collect(),
        units,
        edges: edges
            .into_iter()
            .map(|e| EdgeEntry {
                parent: e.parent.to_string(),
                child: e.child.to_string(),
                categories: e.categories,
                remote: e.remote,
            })
            .collect(),
    }
}

/// Canonical JSON for one passage.
pub fn to_interchange(passage: &Passage) -> String {
    canonical_json(&document(passage))
}

/// Canonical JSON array for several passages.
pub fn to_interchange_many(passages: &[Passage]) -> String {
    let docs: Vec<Document> = passages.iter().map(document).collect();
    canonical_json(&docs)
}

fn from_document(value: Value) -> Result<Passage, InterchangeError> {
    match value.get("format_version") {
        Some(Value::String(v)) if v == FORMAT_VERSION => {}
        Some(Value::String(v)) => return Err(InterchangeError::UnsupportedVersion(v.clone())),
        Some(other) => return Err(InterchangeError::UnsupportedVersion(other.to_string())),
        None => {
            return Err(InterchangeError::MalformedDocument(
                "missing format_version".to_string(),
            ))
        }
    }
    let doc: Document = serde_json::from_value(value)
        .map_err(|e| InterchangeError::MalformedDocument(e.to_string()))?;
    let tokens = doc
        .tokens
        .into_iter()
        .map(|t| Token {
            text: t.text,
            position: t.position,
            is_punct: t.is_punct,
        })
        .collect();
    let units = doc
        .units
        .into_iter()
        .map(|u| match (u.kind, u.tokens) {
            (Kind::Terminal, Some(tokens)) => Ok(UnitSpec::terminal(u.id, tokens)),
            (Kind::Terminal, None) => Err(InterchangeError::MalformedDocument(format!(
                "terminal unit {} has no tokens field",
                u.id
            ))),
            (_, Some(_)) => Err(InterchangeError::MalformedDocument(format!(
                "non-terminal unit {} has a tokens field",
                u.id
            ))),
            (Kind::Internal, None) => Ok(UnitSpec::internal(u.id)),
            (Kind::Implicit, None) => Ok(UnitSpec::implicit(u.id)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let edges = doc
        .edges
        .into_iter()
        .map(|e| EdgeSpec {
            parent: e.parent,
            child: e.child,
            categories: e.categories,
            remote: e.remote,
        })
        .collect();
    Ok(Passage::build(
        doc.id,
        tokens,
        units,
        edges,
        BuildOptions::allow_uncovered(),
    )?)
}

fn parse_json(text: &str) -> Result<Value, InterchangeError> {
    serde_json::from_str(text).map_err(|e| InterchangeError::MalformedDocument(e.to_string()))
}

/// Reads one passage document. Uncovered tokens are accepted so that the
/// validator can report them; every other build check applies.
pub fn from_interchange(text: &str) -> Result<Passage, InterchangeError> {
    match parse_json(text)? {
        v @ Value::Object(_) => from_document(v),
        _ => Err(InterchangeError::MalformedDocument(
            "expected a JSON object".to_string(),
        )),
    }
}

/// Reads a single document or an array of documents.
pub fn from_interchange_many(text: &str) -> Result<Vec<Passage>, InterchangeError> {
    match parse_json(text)? {
        Value::Array(items) => items.into_iter().map(from_document).collect(),
        v @ Value::Object(_) => Ok(vec![from_document(v)?]),
        _ => Err(InterchangeError::MalformedDocument(
            "expected a JSON object or array".to_string(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_passage;

    const APA: &str = "[H [A John] [P kicked] [A [F the] [C ball]]] .";

    #[test]
    fn deterministic_and_round_trips() {
        let p = parse_passage(APA).unwrap().with_id("apa");
        let a = to_interchange(&p);
        assert_eq!(a, to_interchange(&p));
        let q = from_interchange(&a).unwrap();
        assert_eq!(q, p);
        assert_eq!(to_interchange(&q), a);
        assert!(a.ends_with("}\n"));
        assert!(a.contains("\"format_version\": \"1\""));
    }

    #[test]
    fn apa_edge_counts() {
        let p = parse_passage(APA).unwrap();
        let v: Value = serde_json::from_str(&to_interchange(&p)).unwrap();
        let edges = v["edges"].as_array().unwrap();
        let root_children: Vec<_> = edges.iter().filter(|e| e["parent"] == "0").collect();
        assert_eq!(root_children.len(), 1);
        assert_eq!(root_children[0]["categories"], serde_json::json!(["H"]));
        let scene = root_children[0]["child"].as_str().unwrap();
        assert_eq!(edges.iter().filter(|e| e["parent"] == scene).count(), 3);
        assert!(edges.iter().all(|e| e["remote"] == false));
    }

    #[test]
    fn implicit_units_have_no_tokens_field() {
        let p = parse_passage("[H [P Eat] [A vegetables] (IMP A)] !").unwrap();
        let v: Value = serde_json::from_str(&to_interchange(&p)).unwrap();
        let imp: Vec<_> = v["units"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|u| u["kind"] == "implicit")
            .collect();
        assert_eq!(imp.len(), 1);
        assert!(imp[0].get("tokens").is_none());
    }

    #[test]
    fn errors() {
        let text = to_interchange(&parse_passage(APA).unwrap());
        assert!(matches!(
            from_interchange(&text[..text.len() / 2]),
            Err(InterchangeError::MalformedDocument(_))
        ));
        assert!(matches!(
            from_interchange(&text.replace("\"1\"", "\"999\"")),
            Err(InterchangeError::UnsupportedVersion(v)) if v == "999"
        ));
        assert!(matches!(
            from_interchange(&text.replace("\"child\": \"1\"", "\"child\": \"77\"")),
            Err(InterchangeError::Build(BuildError::DanglingEdge { .. }))
        ));
    }

    #[test]
    fn many() {
        let ps = vec![
            parse_passage(APA).unwrap().with_id("a"),
            parse_passage("[H [P Thank you UNA]]").unwrap().with_id("b"),
        ];
        let text = to_interchange_many(&ps);
        assert_eq!(from_interchange_many(&text).unwrap(), ps);
        let single = to_interchange(&ps[0]);
        assert_eq!(from_interchange_many(&single).unwrap(), ps[..1]);
    }
}
