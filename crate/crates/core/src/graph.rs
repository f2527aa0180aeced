//! The passage graph: tokens, units, primary tree and remote edges.
//!
//! Passages are immutable once built. [`build_passage`] checks the
//! structural invariants and renumbers units into a canonical pre-order so
//! that two isomorphic inputs always produce equal passages. Siblings are
//! ordered by the first token they cover; siblings that cover no token
//! (implicit units and units whose children are all implicit or remote)
//! come last, ordered by a structural signature.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::category::{Category, CategorySet};

/// Dense unit identifier, assigned in canonical pre-order. The root is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct UnitId(pub usize);

impl UnitId {
    pub const ROOT: UnitId = UnitId(0);

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for UnitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub position: usize,
    pub is_punct: bool,
}

impl Token {
    /// A token whose punctuation flag is derived from its text.
    pub fn new(position: usize, text: impl Into<String>) -> Self {
        let text = text.into();
        let is_punct = is_punctuation(&text);
        Token {
            text,
            position,
            is_punct,
        }
    }
}

/// True for non-empty text made only of Unicode punctuation characters.
pub fn is_punctuation(text: &str) -> bool {
    !text.is_empty()
        && text
            .chars()
            .all(|c| c.general_category_group() == GeneralCategoryGroup::Punctuation)
}

fn is_valid_token_text(text: &str) -> bool {
    !text.is_empty()
        && !text
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '[' | ']' | '(' | ')'))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnitKind {
    Terminal,
    Internal,
    Implicit,
}

impl UnitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitKind::Terminal => "terminal",
            UnitKind::Internal => "internal",
            UnitKind::Implicit => "implicit",
        }
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Input description of a unit for [`build_passage`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSpec {
    pub key: String,
    pub kind: UnitKind,
    pub tokens: Vec<usize>,
}

impl UnitSpec {
    pub fn terminal(key: impl Into<String>, tokens: impl IntoIterator<Item = usize>) -> Self {
        UnitSpec {
            key: key.into(),
            kind: UnitKind::Terminal,
            tokens: tokens.into_iter().collect(),
        }
    }

    pub fn internal(key: impl Into<String>) -> Self {
        UnitSpec {
            key: key.into(),
            kind: UnitKind::Internal,
            tokens: Vec::new(),
        }
    }

    pub fn implicit(key: impl Into<String>) -> Self {
        UnitSpec {
            key: key.into(),
            kind: UnitKind::Implicit,
            tokens: Vec::new(),
        }
    }
}

/// Input description of an edge for [`build_passage`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub parent: String,
    pub child: String,
    pub categories: CategorySet,
    pub remote: bool,
}

impl EdgeSpec {
    pub fn primary(
        parent: impl Into<String>,
        child: impl Into<String>,
        categories: CategorySet,
    ) -> Self {
        EdgeSpec {
            parent: parent.into(),
            child: child.into(),
            categories,
            remote: false,
        }
    }

    pub fn remote(
        parent: impl Into<String>,
        child: impl Into<String>,
        categories: CategorySet,
    ) -> Self {
        EdgeSpec {
            remote: true,
            ..EdgeSpec::primary(parent, child, categories)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub parent: UnitId,
    pub child: UnitId,
    pub categories: CategorySet,
    pub remote: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    id: UnitId,
    kind: UnitKind,
    tokens: Vec<usize>,
    /// Primary edges in sibling order, then remote edges by child id.
    outgoing: Vec<Edge>,
    parent: Option<UnitId>,
    incoming: Option<CategorySet>,
    remote_parents: Vec<UnitId>,
    yield_: Vec<usize>,
}

impl Unit {
    pub fn id(&self) -> UnitId {
        self.id
    }

    pub fn kind(&self) -> UnitKind {
        self.kind
    }

    /// Token positions of a terminal; empty otherwise.
    pub fn tokens(&self) -> &[usize] {
        &self.tokens
    }

    pub fn outgoing(&self) -> &[Edge] {
        &self.outgoing
    }

    pub fn primary_children(&self) -> impl Iterator<Item = &Edge> {
        self.outgoing.iter().filter(|e| !e.remote)
    }

    pub fn remote_children(&self) -> impl Iterator<Item = &Edge> {
        self.outgoing.iter().filter(|e| e.remote)
    }

    /// Primary parent; `None` only for the root.
    pub fn parent(&self) -> Option<UnitId> {
        self.parent
    }

    /// Categories on the incoming primary edge; `None` only for the root.
    pub fn incoming(&self) -> Option<CategorySet> {
        self.incoming
    }

    pub fn remote_parents(&self) -> &[UnitId] {
        &self.remote_parents
    }

    /// Sorted token positions reachable through primary edges.
    pub fn primary_yield(&self) -> &[usize] {
        &self.yield_
    }

    pub fn is_terminal(&self) -> bool {
        self.kind == UnitKind::Terminal
    }

    pub fn is_internal(&self) -> bool {
        self.kind == UnitKind::Internal
    }

    pub fn is_implicit(&self) -> bool {
        self.kind == UnitKind::Implicit
    }

    /// Marked unanalyzable on its primary incoming edge.
    pub fn is_unanalyzable(&self) -> bool {
        self.incoming.is_some_and(|c| c.contains(Category::Una))
    }

    /// Has a child edge carrying P or S.
    pub fn is_scene(&self) -> bool {
        self.is_internal()
            && self
                .outgoing
                .iter()
                .any(|e| e.categories.has_main_relation())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown unit {0}")]
    UnknownUnit(UnitId),
    #[error("unit {0} is not internal")]
    NotInternal(UnitId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("duplicate unit id `{0}`")]
    DuplicateId(String),
    #[error("edge {parent} -> {child} refers to a unit that does not exist")]
    DanglingEdge { parent: String, child: String },
    #[error("primary edges form a cycle through unit `{0}`")]
    PrimaryCycle(String),
    #[error("unit `{0}` has more than one primary parent")]
    MultiplePrimaryParents(String),
    #[error("primary edges do not form a single tree (roots: {0:?})")]
    MultipleRoots(Vec<String>),
    #[error("token {position} is claimed by {claims} terminal units")]
    TokenCoverageGap { position: usize, claims: usize },
    #[error("token at index {index} has position {position}")]
    TokenPosition { index: usize, position: usize },
    #[error("token {position} has invalid text {text:?}")]
    InvalidTokenText { position: usize, text: String },
    #[error("token {position} punctuation flag disagrees with its text")]
    PunctuationMismatch { position: usize },
    #[error("unit `{unit}` refers to token {position}, which does not exist")]
    UnknownToken { unit: String, position: usize },
    #[error("unit `{unit}` claims punctuation token {position}")]
    PunctuationInTerminal { unit: String, position: usize },
    #[error("unit `{unit}`: {reason}")]
    InvalidUnit { unit: String, reason: &'static str },
    #[error("duplicate edge {parent} -> {child}")]
    DuplicateEdge { parent: String, child: String },
    #[error("remote edge {parent} -> {child}: {reason}")]
    InvalidRemote {
        parent: String,
        child: String,
        reason: &'static str,
    },
}

/// Relaxations of the build checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Accept non-punctuation tokens that no terminal covers. Such gaps are
    /// reported by the validator instead. Tokens claimed twice are always
    /// rejected.
    pub allow_uncovered_tokens: bool,
    /// Used while resolving remotes, before remote edges exist.
    pub(crate) allow_childless_internal: bool,
}

impl BuildOptions {
    /// Tolerates uncovered tokens; everything else is checked.
    pub fn allow_uncovered() -> Self {
        BuildOptions {
            allow_uncovered_tokens: true,
            ..BuildOptions::default()
        }
    }
}

/// A built passage. See the module docs for the canonical numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Passage {
    id: String,
    tokens: Vec<Token>,
    units: Vec<Unit>,
}

/// Builds a passage with every check enabled.
pub fn build_passage(
    id: impl Into<String>,
    tokens: Vec<Token>,
    units: Vec<UnitSpec>,
    edges: Vec<EdgeSpec>,
) -> Result<Passage, BuildError> {
    Passage::build(id, tokens, units, edges, BuildOptions::default())
}

struct RawEdge {
    child: usize,
    categories: CategorySet,
}

impl Passage {
    pub fn build(
        id: impl Into<String>,
        tokens: Vec<Token>,
        units: Vec<UnitSpec>,
        edges: Vec<EdgeSpec>,
        options: BuildOptions,
    ) -> Result<Passage, BuildError> {
        build(id.into(), tokens, units, edges, options).map(|(p, _)| p)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    pub fn root(&self) -> UnitId {
        UnitId::ROOT
    }

    pub fn unit(&self, id: UnitId) -> Result<&Unit, GraphError> {
        self.units.get(id.0).ok_or(GraphError::UnknownUnit(id))
    }

    pub(crate) fn get(&self, id: UnitId) -> &Unit {
        &self.units[id.0]
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.units.iter().flat_map(|u| u.outgoing.iter())
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Passage {
        self.id = id.into();
        self
    }

    /// Token positions under `unit`, following remote edges too when asked.
    /// Implicit units contribute nothing.
    pub fn yield_of(
        &self,
        unit: UnitId,
        include_remote: bool,
    ) -> Result<BTreeSet<usize>, GraphError> {
        let start = self.unit(unit)?;
        if !include_remote {
            return Ok(start.yield_.iter().copied().collect());
        }
        let mut out = BTreeSet::new();
        let mut seen = vec![false; self.units.len()];
        let mut stack = vec![unit];
        while let Some(u) = stack.pop() {
            if std::mem::replace(&mut seen[u.0], true) {
                continue;
            }
            let u = self.get(u);
            out.extend(u.tokens.iter().copied());
            stack.extend(u.outgoing.iter().map(|e| e.child));
        }
        Ok(out)
    }

    pub fn is_scene_unit(&self, unit: UnitId) -> Result<bool, GraphError> {
        let u = self.unit(unit)?;
        if !u.is_internal() {
            return Err(GraphError::NotInternal(unit));
        }
        Ok(u.is_scene())
    }

    /// Space-joined token texts of the primary yield.
    pub fn yield_text(&self, unit: UnitId) -> String {
        self.get(unit)
            .yield_
            .iter()
            .map(|&t| self.tokens[t].text.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Primary ancestors from the parent up to the root.
    pub fn ancestors(&self, unit: UnitId) -> impl Iterator<Item = UnitId> + '_ {
        std::iter::successors(self.get(unit).parent, |u| self.get(*u).parent)
    }

    /// Non-punctuation tokens that no terminal covers.
    pub fn uncovered_tokens(&self) -> Vec<usize> {
        let mut covered = vec![false; self.tokens.len()];
        for u in &self.units {
            for &t in &u.tokens {
                covered[t] = true;
            }
        }
        self.tokens
            .iter()
            .filter(|t| !t.is_punct && !covered[t.position])
            .map(|t| t.position)
            .collect()
    }

    /// Terminal covering each token position.
    pub fn terminal_of_tokens(&self) -> Vec<Option<UnitId>> {
        let mut out = vec![None; self.tokens.len()];
        for u in &self.units {
            for &t in &u.tokens {
                out[t] = Some(u.id);
            }
        }
        out
    }

    /// Same structure, ignoring the passage id. Ids are canonical, so
    /// isomorphic passages compare equal unit by unit.
    pub fn isomorphic(&self, other: &Passage) -> bool {
        self.tokens == other.tokens && self.units == other.units
    }

    /// The build inputs that reproduce this passage, keyed by unit id.
    pub fn to_specs(&self) -> (Vec<Token>, Vec<UnitSpec>, Vec<EdgeSpec>) {
        let units = self
            .units
            .iter()
            .map(|u| UnitSpec {
                key: u.id.to_string(),
                kind: u.kind,
                tokens: u.tokens.clone(),
            })
            .collect();
        let edges = self
            .edges()
            .map(|e| EdgeSpec {
                parent: e.parent.to_string(),
                child: e.child.to_string(),
                categories: e.categories,
                remote: e.remote,
            })
            .collect();
        (self.tokens.clone(), units, edges)
    }
}

/// Builds a passage and also returns the canonical id of each input unit.
pub(crate) fn build(
    id: String,
    tokens: Vec<Token>,
    units: Vec<UnitSpec>,
    edges: Vec<EdgeSpec>,
    options: BuildOptions,
) -> Result<(Passage, Vec<UnitId>), BuildError> {
    for (index, token) in tokens.iter().enumerate() {
        if token.position != index {
            return Err(BuildError::TokenPosition {
                index,
                position: token.position,
            });
        }
        if !is_valid_token_text(&token.text) {
            return Err(BuildError::InvalidTokenText {
                position: index,
                text: token.text.clone(),
            });
        }
        if token.is_punct != is_punctuation(&token.text) {
            return Err(BuildError::PunctuationMismatch { position: index });
        }
    }

    let mut index_of = HashMap::with_capacity(units.len());
    for (i, u) in units.iter().enumerate() {
        if index_of.insert(u.key.as_str(), i).is_some() {
            return Err(BuildError::DuplicateId(u.key.clone()));
        }
        let invalid = |reason| BuildError::InvalidUnit {
            unit: u.key.clone(),
            reason,
        };
        match u.kind {
            UnitKind::Terminal if u.tokens.is_empty() => {
                return Err(invalid("terminal unit covers no token"))
            }
            UnitKind::Internal | UnitKind::Implicit if !u.tokens.is_empty() => {
                return Err(invalid("only terminal units carry tokens"))
            }
            _ => {}
        }
        for &t in &u.tokens {
            match tokens.get(t) {
                None => {
                    return Err(BuildError::UnknownToken {
                        unit: u.key.clone(),
                        position: t,
                    })
                }
                Some(tok) if tok.is_punct => {
                    return Err(BuildError::PunctuationInTerminal {
                        unit: u.key.clone(),
                        position: t,
                    })
                }
                Some(_) => {}
            }
        }
    }

    let n = units.len();
    let key = |i: usize| units[i].key.clone();
    let mut children: Vec<Vec<RawEdge>> = (0..n).map(|_| Vec::new()).collect();
    let mut remotes: Vec<Vec<RawEdge>> = (0..n).map(|_| Vec::new()).collect();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut incoming: Vec<Option<CategorySet>> = vec![None; n];
    let mut seen_edges = std::collections::HashSet::new();

    for e in &edges {
        let (Some(&p), Some(&c)) = (
            index_of.get(e.parent.as_str()),
            index_of.get(e.child.as_str()),
        ) else {
            return Err(BuildError::DanglingEdge {
                parent: e.parent.clone(),
                child: e.child.clone(),
            });
        };
        if !seen_edges.insert((p, c, e.remote)) {
            return Err(BuildError::DuplicateEdge {
                parent: e.parent.clone(),
                child: e.child.clone(),
            });
        }
        if units[p].kind != UnitKind::Internal {
            return Err(BuildError::InvalidUnit {
                unit: key(p),
                reason: "only internal units have children",
            });
        }
        let raw = RawEdge {
            child: c,
            categories: e.categories,
        };
        if e.remote {
            remotes[p].push(raw);
        } else {
            if p == c {
                return Err(BuildError::PrimaryCycle(key(p)));
            }
            if parent[c].is_some() {
                return Err(BuildError::MultiplePrimaryParents(key(c)));
            }
            parent[c] = Some(p);
            incoming[c] = Some(e.categories);
            children[p].push(raw);
        }
    }

    let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
    let root = match roots.as_slice() {
        [r] => *r,
        [] if n > 0 => return Err(BuildError::PrimaryCycle(key(0))),
        _ => {
            return Err(BuildError::MultipleRoots(
                roots.iter().map(|&i| key(i)).collect(),
            ))
        }
    };
    if units[root].kind != UnitKind::Internal {
        return Err(BuildError::InvalidUnit {
            unit: key(root),
            reason: "the root must be an internal unit",
        });
    }

    // Post-order over the primary tree; anything unreached sits on a cycle.
    let mut post = Vec::with_capacity(n);
    let mut stack = vec![(root, false)];
    while let Some((u, expanded)) = stack.pop() {
        if expanded {
            post.push(u);
            continue;
        }
        stack.push((u, true));
        stack.extend(children[u].iter().rev().map(|e| (e.child, false)));
    }
    if post.len() != n {
        let mut reached = vec![false; n];
        for &u in &post {
            reached[u] = true;
        }
        let stray = (0..n).find(|&i| !reached[i]).unwrap();
        return Err(BuildError::PrimaryCycle(key(stray)));
    }

    for i in 0..n {
        if i != root
            && units[i].kind == UnitKind::Internal
            && children[i].is_empty()
            && remotes[i].is_empty()
            && !options.allow_childless_internal
        {
            return Err(BuildError::InvalidUnit {
                unit: key(i),
                reason: "internal unit has no children",
            });
        }
    }

    let mut claims = vec![0usize; tokens.len()];
    for u in &units {
        for &t in &u.tokens {
            claims[t] += 1;
        }
    }
    for (position, &c) in claims.iter().enumerate() {
        if c > 1 || (c == 0 && !tokens[position].is_punct && !options.allow_uncovered_tokens) {
            return Err(BuildError::TokenCoverageGap {
                position,
                claims: c,
            });
        }
    }

    let mut yields: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &u in &post {
        let mut y = units[u].tokens.clone();
        for e in &children[u] {
            y.extend_from_slice(&yields[e.child]);
        }
        y.sort_unstable();
        y.dedup();
        yields[u] = y;
    }

    for (p, out) in remotes.iter().enumerate() {
        for e in out {
            let invalid = |reason| BuildError::InvalidRemote {
                parent: key(p),
                child: key(e.child),
                reason,
            };
            if e.child == root {
                return Err(invalid("the root cannot be a remote child"));
            }
            if parent[e.child] == Some(p) {
                return Err(invalid("already a primary child of the same parent"));
            }
            if yields[e.child].is_empty() {
                return Err(invalid("remote target covers no token"));
            }
        }
    }
    if let Some(u) = find_cycle(n, &children, &remotes) {
        return Err(BuildError::InvalidRemote {
            parent: key(u),
            child: key(u),
            reason: "edges form a cycle",
        });
    }

    // Depth inside a chain of ancestors that share the same yield; with the
    // yield it pins down a unit without referring to ids.
    let mut chain_rank = vec![0usize; n];
    for &u in post.iter().rev() {
        if let Some(p) = parent[u] {
            if yields[p] == yields[u] {
                chain_rank[u] = chain_rank[p] + 1;
            }
        }
    }
    let mut signature: Vec<String> = vec![String::new(); n];
    for &u in &post {
        if !yields[u].is_empty() {
            continue;
        }
        let mut parts: Vec<String> = children[u]
            .iter()
            .map(|e| format!("{}:{}", e.categories, signature[e.child]))
            .collect();
        parts.sort();
        let mut refs: Vec<String> = remotes[u]
            .iter()
            .map(|e| {
                format!(
                    "{}>{:?}#{}",
                    e.categories, yields[e.child], chain_rank[e.child]
                )
            })
            .collect();
        refs.sort();
        signature[u] = format!("{}({}|{})", units[u].kind, parts.join(","), refs.join(","));
    }
    for list in children.iter_mut() {
        list.sort_by_cached_key(|e| {
            let y = &yields[e.child];
            match y.first() {
                Some(&first) => (false, first, String::new()),
                None => (true, 0, format!("{}:{}", e.categories, signature[e.child])),
            }
        });
    }

    let mut new_id = vec![UnitId(0); n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        new_id[u] = UnitId(order.len());
        order.push(u);
        stack.extend(children[u].iter().rev().map(|e| e.child));
    }

    let mut remote_parents: Vec<Vec<UnitId>> = vec![Vec::new(); n];
    for (p, out) in remotes.iter().enumerate() {
        for e in out {
            remote_parents[e.child].push(new_id[p]);
        }
    }

    let built: Vec<Unit> = order
        .iter()
        .map(|&old| {
            let id = new_id[old];
            let mut outgoing: Vec<Edge> = children[old]
                .iter()
                .map(|e| Edge {
                    parent: id,
                    child: new_id[e.child],
                    categories: e.categories,
                    remote: false,
                })
                .collect();
            let mut remote_edges: Vec<Edge> = remotes[old]
                .iter()
                .map(|e| Edge {
                    parent: id,
                    child: new_id[e.child],
                    categories: e.categories,
                    remote: true,
                })
                .collect();
            remote_edges.sort();
            outgoing.extend(remote_edges);
            let mut tokens = units[old].tokens.clone();
            tokens.sort_unstable();
            let mut rp = remote_parents[old].clone();
            rp.sort();
            Unit {
                id,
                kind: units[old].kind,
                tokens,
                outgoing,
                parent: parent[old].map(|p| new_id[p]),
                incoming: incoming[old],
                remote_parents: rp,
                yield_: yields[old].clone(),
            }
        })
        .collect();

    Ok((
        Passage {
            id,
            tokens,
            units: built,
        },
        new_id,
    ))
}

/// Returns a unit on a cycle over primary and remote edges, if any.
fn find_cycle(n: usize, children: &[Vec<RawEdge>], remotes: &[Vec<RawEdge>]) -> Option<usize> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; n];
    let next = |u: usize| children[u].iter().chain(remotes[u].iter()).map(|e| e.child);
    for start in 0..n {
        if mark[start] != Mark::New {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(start, next(start).collect())];
        mark[start] = Mark::Active;
        while let Some((u, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(c) => match mark[c] {
                    Mark::Active => return Some(c),
                    Mark::New => {
                        mark[c] = Mark::Active;
                        let succ = next(c).collect();
                        stack.push((c, succ));
                    }
                    Mark::Done => {}
                },
                None => {
                    mark[*u] = Mark::Done;
                    stack.pop();
                }
            }
        }
    }
    None
}
