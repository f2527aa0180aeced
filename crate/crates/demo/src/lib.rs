//! Browser bindings. Every function takes bracket notation and returns a
//! JSON string, so the page needs no generated TypeScript types.

use serde::Serialize;
use serde_json::{json, Value};
use ucca_core::notation::{parse_passage_with, render, LabelSide, ParseError, ParseOptions};
use ucca_core::score::{score, ScoreMode};
use ucca_core::validate::{validate, Config};
use ucca_core::{Passage, UnitId};
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Node {
    id: UnitId,
    label: String,
    kind: &'static str,
    words: String,
    scene: bool,
    children: Vec<Node>,
    remotes: Vec<Remote>,
}

#[derive(Serialize)]
struct Remote {
    target: UnitId,
    label: String,
    words: String,
}

fn node(p: &Passage, id: UnitId) -> Node {
    let unit = p.unit(id).expect("id from the passage");
    Node {
        id,
        label: unit.incoming().map(|c| c.to_string()).unwrap_or_default(),
        kind: unit.kind().as_str(),
        words: if unit.is_implicit() {
            "IMP".to_string()
        } else {
            p.yield_text(id)
        },
        scene: unit.is_scene(),
        children: unit.primary_children().map(|e| node(p, e.child)).collect(),
        remotes: unit
            .remote_children()
            .map(|e| Remote {
                target: e.child,
                label: e.categories.to_string(),
                words: p.yield_text(e.child),
            })
            .collect(),
    }
}

fn error_json(e: &ParseError) -> Value {
    json!({
        "ok": false,
        "kind": e.kind.to_string(),
        "position": e.position,
        "message": e.to_string(),
    })
}

fn load(source: &str, lenient: bool) -> Result<(Passage, Vec<String>), Value> {
    let options = ParseOptions {
        lenient_remotes: lenient,
    };
    parse_passage_with(source, "demo", &options)
        .map(|p| {
            (
                p.passage,
                p.warnings.iter().map(|w| w.to_string()).collect(),
            )
        })
        .map_err(|e| error_json(&e))
}

/// Parses one passage and returns its tree and both renderings.
#[wasm_bindgen]
pub fn parse(source: &str, lenient_remotes: bool) -> String {
    let out = match load(source, lenient_remotes) {
        Ok((p, warnings)) => json!({
            "ok": true,
            "warnings": warnings,
            "tokens": p.tokens().iter().map(|t| &t.text).collect::<Vec<_>>(),
            "left": render(&p, LabelSide::Left),
            "right": render(&p, LabelSide::Right),
            "tree": node(&p, p.root()),
        }),
        Err(e) => e,
    };
    out.to_string()
}

/// Diagnostics for one passage under the default severities.
#[wasm_bindgen]
pub fn check(source: &str) -> String {
    let out = match load(source, false) {
        Ok((p, _)) => json!({
            "ok": true,
            "diagnostics": validate(&p, &Config::default()),
        }),
        Err(e) => e,
    };
    out.to_string()
}

/// Edge precision, recall and F1 of a prediction against a gold passage.
#[wasm_bindgen]
pub fn compare(gold: &str, predicted: &str, labeled: bool) -> String {
    let mode = if labeled {
        ScoreMode::Labeled
    } else {
        ScoreMode::Unlabeled
    };
    let out = match (load(gold, false), load(predicted, false)) {
        (Err(mut e), _) => {
            e["side"] = "gold".into();
            e
        }
        (_, Err(mut e)) => {
            e["side"] = "predicted".into();
            e
        }
        (Ok((g, _)), Ok((p, _))) => match score(&g, &p, mode) {
            Ok(r) => json!({ "ok": true, "report": r, "table": r.to_table() }),
            Err(e) => json!({ "ok": false, "kind": "token mismatch", "message": e.to_string() }),
        },
    };
    out.to_string()
}
