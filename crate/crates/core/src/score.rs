//! Yield-based edge scoring between two annotations of one text.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::AddAssign;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::category::{Category, CategorySet};
use crate::graph::Passage;

/// What an edge contributes to scoring: the child's primary yield, the
/// edge's categories and whether it is remote.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeSignature {
    #[serde(rename = "yield")]
    pub yield_: Vec<usize>,
    pub categories: CategorySet,
    pub remote: bool,
}

/// One signature per edge, skipping edges into implicit units. Sorted.
pub fn signatures(passage: &Passage) -> Vec<EdgeSignature> {
    let mut out: Vec<EdgeSignature> = passage
        .edges()
        .filter(|e| e.child != passage.root() && !passage.get(e.child).is_implicit())
        .map(|e| EdgeSignature {
            yield_: passage.get(e.child).primary_yield().to_vec(),
            categories: e.categories,
            remote: e.remote,
        })
        .collect();
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum ScoreMode {
    #[default]
    Labeled,
    Unlabeled,
}

impl ScoreMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreMode::Labeled => "labeled",
            ScoreMode::Unlabeled => "unlabeled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("token sequences differ at position {position}")]
    TokenMismatch { position: usize },
}

/// Match counts for one edge class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub matched: usize,
    pub gold: usize,
    pub predicted: usize,
}

impl Counts {
    /// 1.0 when both sides are empty, 0.0 when only the prediction is.
    pub fn precision(&self) -> f64 {
        match (self.gold, self.predicted) {
            (0, 0) => 1.0,
            (_, 0) => 0.0,
            (_, p) => self.matched as f64 / p as f64,
        }
    }

    /// 1.0 when both sides are empty, 0.0 when only the gold is.
    pub fn recall(&self) -> f64 {
        match (self.gold, self.predicted) {
            (0, 0) => 1.0,
            (0, _) => 0.0,
            (g, _) => self.matched as f64 / g as f64,
        }
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        self.matched += rhs.matched;
        self.gold += rhs.gold;
        self.predicted += rhs.predicted;
    }
}

impl Serialize for Counts {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Counts", 6)?;
        st.serialize_field("matched", &self.matched)?;
        st.serialize_field("gold", &self.gold)?;
        st.serialize_field("predicted", &self.predicted)?;
        st.serialize_field("precision", &self.precision())?;
        st.serialize_field("recall", &self.recall())?;
        st.serialize_field("f1", &self.f1())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassScores {
    pub primary: Counts,
    pub remote: Counts,
}

impl AddAssign for ClassScores {
    fn add_assign(&mut self, rhs: ClassScores) {
        self.primary += rhs.primary;
        self.remote += rhs.remote;
    }
}

/// Scores for one or more passage pairs. Adding reports sums the counts,
/// so metrics of a sum are micro-averages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoreReport {
    pub mode: &'static str,
    pub pairs: usize,
    pub labeled: ClassScores,
    pub unlabeled: ClassScores,
    /// Labeled matches per member label, over both edge classes.
    pub per_category: BTreeMap<Category, Counts>,
}

impl ScoreReport {
    pub fn empty(mode: ScoreMode) -> Self {
        ScoreReport {
            mode: mode.as_str(),
            pairs: 0,
            labeled: ClassScores::default(),
            unlabeled: ClassScores::default(),
            per_category: BTreeMap::new(),
        }
    }

    /// The class scores selected by the report's mode.
    pub fn selected(&self) -> &ClassScores {
        if self.mode == ScoreMode::Unlabeled.as_str() {
            &self.unlabeled
        } else {
            &self.labeled
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:<18} {:>9} {:>9} {:>9} {:>8} {:>8} {:>8}",
            "edges", "precision", "recall", "f1", "matched", "gold", "pred"
        )
        .unwrap();
        let mut row = |name: &str, c: &Counts| {
            writeln!(
                out,
                "{:<18} {:>9.4} {:>9.4} {:>9.4} {:>8} {:>8} {:>8}",
                name,
                c.precision(),
                c.recall(),
                c.f1(),
                c.matched,
                c.gold,
                c.predicted
            )
            .unwrap();
        };
        row("labeled primary", &self.labeled.primary);
        row("labeled remote", &self.labeled.remote);
        row("unlabeled primary", &self.unlabeled.primary);
        row("unlabeled remote", &self.unlabeled.remote);
        for (c, counts) in &self.per_category {
            row(&format!("  {}", c.abbreviation()), counts);
        }
        out
    }
}

impl AddAssign<&ScoreReport> for ScoreReport {
    fn add_assign(&mut self, rhs: &ScoreReport) {
        self.pairs += rhs.pairs;
        self.labeled += rhs.labeled;
        self.unlabeled += rhs.unlabeled;
        for (c, counts) in &rhs.per_category {
            *self.per_category.entry(*c).or_default() += *counts;
        }
    }
}

/// Greedy multiset matching: each predicted item takes an unused equal
/// gold item if one is left.
fn matches<K: Ord + Clone>(gold: &[K], pred: &[K]) -> Vec<K> {
    let mut left: BTreeMap<K, usize> = BTreeMap::new();
    for k in gold {
        *left.entry(k.clone()).or_default() += 1;
    }
    let mut out = Vec::new();
    for k in pred {
        if let Some(n) = left.get_mut(k).filter(|n| **n > 0) {
            *n -= 1;
            out.push(k.clone());
        }
    }
    out
}

fn class_counts<K: Ord + Clone>(
    gold: &[EdgeSignature],
    pred: &[EdgeSignature],
    key: impl Fn(&EdgeSignature) -> K,
) -> ClassScores {
    let mut scores = ClassScores::default();
    for (remote, counts) in [(false, &mut scores.primary), (true, &mut scores.remote)] {
        let g: Vec<K> = gold
            .iter()
            .filter(|s| s.remote == remote)
            .map(&key)
            .collect();
        let p: Vec<K> = pred
            .iter()
            .filter(|s| s.remote == remote)
            .map(&key)
            .collect();
        *counts = Counts {
            matched: matches(&g, &p).len(),
            gold: g.len(),
            predicted: p.len(),
        };
    }
    scores
}

/// Compares `pred` against `gold`. Both must share the token sequence.
pub fn score(gold: &Passage, pred: &Passage, mode: ScoreMode) -> Result<ScoreReport, ScoreError> {
    let (gt, pt) = (gold.tokens(), pred.tokens());
    if let Some(position) = (0..gt.len().max(pt.len())).find(|&i| match (gt.get(i), pt.get(i)) {
        (Some(a), Some(b)) => a.text != b.text || a.is_punct != b.is_punct,
        _ => true,
    }) {
        return Err(ScoreError::TokenMismatch { position });
    }

    let (g, p) = (signatures(gold), signatures(pred));
    let labeled = class_counts(&g, &p, |s| s.clone());
    let unlabeled = class_counts(&g, &p, |s| (s.yield_.clone(), s.remote));

    let mut per_category: BTreeMap<Category, Counts> = Category::ALL
        .iter()
        .map(|c| (*c, Counts::default()))
        .collect();
    for s in &g {
        for c in s.categories.iter() {
            per_category.get_mut(&c).unwrap().gold += 1;
        }
    }
    for s in &p {
        for c in s.categories.iter() {
            per_category.get_mut(&c).unwrap().predicted += 1;
        }
    }
    for s in matches(&g, &p) {
        for c in s.categories.iter() {
            per_category.get_mut(&c).unwrap().matched += 1;
        }
    }
    per_category.retain(|_, c| c.gold + c.predicted > 0);

    Ok(ScoreReport {
        mode: mode.as_str(),
        pairs: 1,
        labeled,
        unlabeled,
        per_category,
    })
}
