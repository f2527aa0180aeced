//! Per-category edge counts and structural tallies.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::AddAssign;

use serde::Serialize;

use crate::category::Category;
use crate::graph::Passage;

/// Counts over one or more passages. Adding two counts gives the counts of
/// the combined passage list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryCounts {
    pub passages: usize,
    pub tokens: usize,
    pub units: usize,
    pub edges: usize,
    pub primary_edges: usize,
    pub remote_edges: usize,
    pub implicit_units: usize,
    pub scene_units: usize,
    /// Edges carrying UNA.
    pub unanalyzable: usize,
    /// Edges per label; an edge counts once for each label in its set.
    pub by_category: BTreeMap<Category, usize>,
}

impl Default for CategoryCounts {
    fn default() -> Self {
        CategoryCounts {
            passages: 0,
            tokens: 0,
            units: 0,
            edges: 0,
            primary_edges: 0,
            remote_edges: 0,
            implicit_units: 0,
            scene_units: 0,
            unanalyzable: 0,
            by_category: Category::ALL.iter().map(|c| (*c, 0)).collect(),
        }
    }
}

pub fn stats(passage: &Passage) -> CategoryCounts {
    let mut counts = CategoryCounts {
        passages: 1,
        tokens: passage.tokens().len(),
        units: passage.units().len(),
        ..CategoryCounts::default()
    };
    for unit in passage.units() {
        if unit.is_implicit() {
            counts.implicit_units += 1;
        }
        if unit.is_scene() {
            counts.scene_units += 1;
        }
    }
    for edge in passage.edges() {
        counts.edges += 1;
        if edge.remote {
            counts.remote_edges += 1;
        } else {
            counts.primary_edges += 1;
        }
        if edge.categories.contains(Category::Una) {
            counts.unanalyzable += 1;
        }
        for c in edge.categories.iter() {
            *counts.by_category.entry(c).or_default() += 1;
        }
    }
    counts
}

impl CategoryCounts {
    pub fn count(&self, category: Category) -> usize {
        self.by_category.get(&category).copied().unwrap_or(0)
    }

    /// Aligned two-column table, categories in canonical order.
    pub fn to_table(&self) -> String {
        let rows: Vec<(String, usize)> = [
            ("passages", self.passages),
            ("tokens", self.tokens),
            ("units", self.units),
            ("edges", self.edges),
            ("primary edges", self.primary_edges),
            ("remote edges", self.remote_edges),
            ("implicit units", self.implicit_units),
            ("scene units", self.scene_units),
            ("unanalyzable", self.unanalyzable),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .chain(
            self.by_category
                .iter()
                .map(|(c, n)| (format!("{} ({})", c.abbreviation(), c.name()), *n)),
        )
        .collect();
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            writeln!(out, "{k:<width$}  {v:>8}").unwrap();
        }
        out
    }
}

impl AddAssign<&CategoryCounts> for CategoryCounts {
    fn add_assign(&mut self, rhs: &CategoryCounts) {
        self.passages += rhs.passages;
        self.tokens += rhs.tokens;
        self.units += rhs.units;
        self.edges += rhs.edges;
        self.primary_edges += rhs.primary_edges;
        self.remote_edges += rhs.remote_edges;
        self.implicit_units += rhs.implicit_units;
        self.scene_units += rhs.scene_units;
        self.unanalyzable += rhs.unanalyzable;
        for (c, n) in &rhs.by_category {
            *self.by_category.entry(*c).or_default() += n;
        }
    }
}

impl<'a> std::iter::Sum<&'a CategoryCounts> for CategoryCounts {
    fn sum<I: Iterator<Item = &'a CategoryCounts>>(iter: I) -> Self {
        let mut total = CategoryCounts::default();
        for c in iter {
            total += c;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_passage;

    #[test]
    fn apa_scene_counts() {
        let p = parse_passage("[H [A John] [P kicked] [A [F the] [C ball]]] .").unwrap();
        let s = stats(&p);
        assert_eq!(s.count(Category::A), 2);
        assert_eq!(s.count(Category::P), 1);
        assert_eq!(s.count(Category::H), 1);
        assert_eq!(s.count(Category::F), 1);
        assert_eq!(s.count(Category::C), 1);
        assert_eq!(s.scene_units, 1);
        assert_eq!(s.remote_edges, 0);
        assert_eq!(s.edges, 6);
        assert_eq!(s.primary_edges, s.units - 1);
    }

    #[test]
    fn empty_passage_is_all_zero() {
        let p = parse_passage("").unwrap();
        let s = stats(&p);
        assert_eq!(s.edges, 0);
        assert_eq!(s.scene_units, 0);
        assert!(s.by_category.values().all(|n| *n == 0));
        assert_eq!(s.by_category.len(), 16);
    }

    #[test]
    fn remote_participant_counted_twice() {
        let p = parse_passage(
            "[H [A John] [P got] [A home]] [L and] [H [P took] [A [F a] [C shower]] (John A)]",
        )
        .unwrap();
        let s = stats(&p);
        assert_eq!(s.remote_edges, 1);
        // John, home, a shower, and the remote John
        assert_eq!(s.count(Category::A), 4);
    }

    #[test]
    fn combined_labels_count_each_member() {
        let p = parse_passage("[H [A [E This] [C dog]] [F is] [S+A mine]]").unwrap();
        let s = stats(&p);
        assert_eq!(s.count(Category::S), 1);
        assert_eq!(s.count(Category::A), 2);
    }
}
