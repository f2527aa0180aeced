//! The closed category inventory and non-empty category sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One foundational-layer category label.
///
/// Declaration order is the canonical label order used for sorting,
/// display and serialization. It puts the main relation first so that
/// combined labels come out the way annotators write them (`P+A`, `S+A`,
/// `G+A`, `CMR+P`, `A+D`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    /// Coordinated main relation (secondary).
    Cmr,
    /// Process.
    P,
    /// State.
    S,
    /// Parallel scene.
    H,
    /// Linker.
    L,
    /// Ground.
    G,
    /// Participant.
    A,
    /// Adverbial.
    D,
    /// Time.
    T,
    /// Center.
    C,
    /// Elaborator.
    E,
    /// Connector.
    N,
    /// Quantifier.
    Q,
    /// Relator.
    R,
    /// Function.
    F,
    /// Unanalyzable (secondary).
    Una,
}

impl Category {
    /// Every label in canonical order.
    pub const ALL: [Category; 16] = [
        Category::Cmr,
        Category::P,
        Category::S,
        Category::H,
        Category::L,
        Category::G,
        Category::A,
        Category::D,
        Category::T,
        Category::C,
        Category::E,
        Category::N,
        Category::Q,
        Category::R,
        Category::F,
        Category::Una,
    ];

    pub fn abbreviation(self) -> &'static str {
        match self {
            Category::Cmr => "CMR",
            Category::P => "P",
            Category::S => "S",
            Category::H => "H",
            Category::L => "L",
            Category::G => "G",
            Category::A => "A",
            Category::D => "D",
            Category::T => "T",
            Category::C => "C",
            Category::E => "E",
            Category::N => "N",
            Category::Q => "Q",
            Category::R => "R",
            Category::F => "F",
            Category::Una => "UNA",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Cmr => "coordinated main relation",
            Category::P => "process",
            Category::S => "state",
            Category::H => "parallel scene",
            Category::L => "linker",
            Category::G => "ground",
            Category::A => "participant",
            Category::D => "adverbial",
            Category::T => "time",
            Category::C => "center",
            Category::E => "elaborator",
            Category::N => "connector",
            Category::Q => "quantifier",
            Category::R => "relator",
            Category::F => "function",
            Category::Una => "unanalyzable",
        }
    }

    /// CMR and UNA only ever qualify another label.
    pub fn is_secondary(self) -> bool {
        matches!(self, Category::Cmr | Category::Una)
    }

    pub fn is_main_relation(self) -> bool {
        matches!(self, Category::P | Category::S)
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbreviation())
    }
}

impl FromStr for Category {
    type Err = CategoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.abbreviation() == s)
            .ok_or_else(|| CategoryError::UnknownLabel(s.to_string()))
    }
}

impl Serialize for Category {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.abbreviation())
    }
}

impl<'de> Deserialize<'de> for Category {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("unknown category label `{0}`")]
    UnknownLabel(String),
    #[error("category set is empty")]
    Empty,
    #[error("category set has both P and S")]
    MultipleMainRelations,
    #[error("UNA cannot be the only category")]
    SecondaryOnly,
}

/// A non-empty, order-insensitive set of categories carried by one edge.
///
/// `G+A` and `A+G` are the same set. Construction rejects the empty set,
/// `P+S` and a bare `UNA`. A bare `CMR` is representable so that the
/// validator can report it.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CategorySet(u16);

impl CategorySet {
    pub fn new<I: IntoIterator<Item = Category>>(labels: I) -> Result<Self, CategoryError> {
        let bits = labels.into_iter().fold(0u16, |acc, c| acc | c.bit());
        let set = CategorySet(bits);
        if bits == 0 {
            return Err(CategoryError::Empty);
        }
        if set.contains(Category::P) && set.contains(Category::S) {
            return Err(CategoryError::MultipleMainRelations);
        }
        if bits == Category::Una.bit() {
            return Err(CategoryError::SecondaryOnly);
        }
        Ok(set)
    }

    pub fn single(category: Category) -> Self {
        CategorySet::new([category]).expect("single non-UNA category")
    }

    pub fn contains(self, category: Category) -> bool {
        self.0 & category.bit() != 0
    }

    pub fn iter(self) -> impl Iterator<Item = Category> {
        Category::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// True if any label is also in `other`.
    pub fn intersects(self, other: CategorySet) -> bool {
        self.0 & other.0 != 0
    }

    /// Whether every label is one of `allowed`.
    pub fn is_subset_of(self, allowed: &[Category]) -> bool {
        self.iter().all(|c| allowed.contains(&c))
    }

    /// The non-secondary labels.
    pub fn base(self) -> impl Iterator<Item = Category> {
        self.iter().filter(|c| !c.is_secondary())
    }

    pub fn has_main_relation(self) -> bool {
        self.contains(Category::P) || self.contains(Category::S)
    }

    /// Returns a copy with `category` added, re-checking the set rules.
    pub fn with(self, category: Category) -> Result<Self, CategoryError> {
        CategorySet::new(self.iter().chain([category]))
    }
}

impl fmt::Display for CategorySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            f.write_str(c.abbreviation())?;
        }
        Ok(())
    }
}

impl fmt::Debug for CategorySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CategorySet({self})")
    }
}

impl FromStr for CategorySet {
    type Err = CategoryError;

    /// Parses `+`-joined abbreviations such as `S+A` or `CMR+P`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let labels = s
            .split('+')
            .map(str::parse)
            .collect::<Result<Vec<Category>, _>>()?;
        CategorySet::new(labels)
    }
}

impl PartialOrd for CategorySet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CategorySet {
    /// Lexicographic over the canonical label sequence.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl Serialize for CategorySet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for CategorySet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let labels = Vec::<Category>::deserialize(deserializer)?;
        CategorySet::new(labels).map_err(serde::de::Error::custom)
    }
}
