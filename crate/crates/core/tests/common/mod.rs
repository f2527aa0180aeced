#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ucca_core::{build_passage, CategorySet, EdgeSpec, Passage, Token, UnitKind, UnitSpec};

const WORDS: &[&str] = &[
    "John", "Mary", "kicked", "the", "ball", "took", "up", "on", "a", "shower", "home", "and",
    "went", "dog", "A", "H", "P+A", "1", "Dr.", "'s", "über", "caffè",
];
const PUNCT: &[&str] = &[",", ".", "!", "?", "...", "«"];
const LABELS: &[&str] = &[
    "A", "P", "S", "H", "L", "C", "E", "D", "T", "F", "N", "Q", "R", "G", "P+A", "S+A", "G+A",
    "A+D", "CMR+P", "CMR",
];

pub fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect()
}

pub fn random_tokens(rng: &mut ChaCha8Rng, max: usize) -> Vec<Token> {
    let n = rng.gen_range(0..=max);
    (0..n)
        .map(|i| {
            let text = if rng.gen_bool(0.15) {
                PUNCT.choose(rng).unwrap()
            } else {
                WORDS.choose(rng).unwrap()
            };
            Token::new(i, *text)
        })
        .collect()
}

fn label(rng: &mut ChaCha8Rng, una: f64) -> CategorySet {
    let mut set: CategorySet = LABELS.choose(rng).unwrap().parse().unwrap();
    if rng.gen_bool(una) {
        set = set.with(ucca_core::Category::Una).unwrap();
    }
    set
}

/// A random passage that passes every build check: full coverage,
/// discontinuous terminals and internal units, implicit units, units
/// without tokens, remote edges and combined or UNA categories.
pub fn random_passage(rng: &mut ChaCha8Rng) -> Passage {
    let tokens = random_tokens(rng, 12);
    random_passage_over(rng, tokens)
}

pub fn random_passage_over(rng: &mut ChaCha8Rng, tokens: Vec<Token>) -> Passage {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for t in tokens.iter().filter(|t| !t.is_punct) {
        if groups.is_empty() || rng.gen_bool(0.65) {
            groups.push(vec![t.position]);
        } else {
            let i = rng.gen_range(0..groups.len());
            groups[i].push(t.position);
        }
    }

    let mut units: Vec<UnitSpec> = Vec::new();
    let mut edges: Vec<EdgeSpec> = Vec::new();
    let mut free: Vec<usize> = Vec::new();
    for g in groups {
        free.push(units.len());
        units.push(UnitSpec::terminal(units.len().to_string(), g));
    }
    for _ in 0..rng.gen_range(0..=2) {
        free.push(units.len());
        units.push(UnitSpec::implicit(units.len().to_string()));
    }
    free.shuffle(rng);
    while free.len() > 1 && rng.gen_bool(0.75) {
        let size = rng.gen_range(1..=free.len().min(3));
        let id = units.len();
        units.push(UnitSpec::internal(id.to_string()));
        for _ in 0..size {
            let i = rng.gen_range(0..free.len());
            let child = free.swap_remove(i);
            let una = if units[child].kind == UnitKind::Terminal {
                0.1
            } else {
                0.03
            };
            edges.push(EdgeSpec::primary(
                id.to_string(),
                child.to_string(),
                label(rng, una),
            ));
        }
        free.push(id);
    }
    let root = units.len();
    units.push(UnitSpec::internal(root.to_string()));
    for child in free {
        let una = if units[child].kind == UnitKind::Terminal {
            0.1
        } else {
            0.0
        };
        edges.push(EdgeSpec::primary(
            root.to_string(),
            child.to_string(),
            label(rng, una),
        ));
    }

    let mut passage = build_passage("", tokens.clone(), units.clone(), edges.clone())
        .expect("generated passage builds");
    for _ in 0..rng.gen_range(0..=3) {
        let owners: Vec<usize> = (0..units.len())
            .filter(|&u| units[u].kind == UnitKind::Internal)
            .collect();
        let owner = *owners.choose(rng).unwrap();
        let target = rng.gen_range(0..units.len());
        let mut more = edges.clone();
        more.push(EdgeSpec::remote(
            owner.to_string(),
            target.to_string(),
            label(rng, 0.0),
        ));
        if let Ok(p) = build_passage("", tokens.clone(), units.clone(), more.clone()) {
            edges = more;
            passage = p;
        }
    }
    passage
}
