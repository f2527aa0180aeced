use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::lexer::{
    lex, looks_like_unknown_label, parse_label, LabelSpec, NotationToken, TokenKind,
};
use super::remote::{self, RemoteFailure};
use crate::category::{Category, CategorySet};
use crate::graph::{
    self, is_punctuation, BuildOptions, EdgeSpec, Passage, Token, UnitKind, UnitSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    UnbalancedBrackets,
    UnknownCategoryLabel,
    InvalidCategorySet,
    /// A bracket holding nothing but a label, such as `[A]`.
    LabelOnly,
    EmptyUnit,
    DanglingContinuation,
    OrphanContinuation,
    AmbiguousContinuation,
    /// A continuation fragment placed under a different parent.
    MisplacedContinuation,
    /// Fragments of one unit disagree on terminal vs. internal content.
    ContinuationKindMismatch,
    UnresolvedRemote,
    AmbiguousRemote,
    MisplacedRemote,
    NestedRemote,
    InvalidRemote,
    InvalidStructure,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::UnbalancedBrackets => "unbalanced brackets",
            ParseErrorKind::UnknownCategoryLabel => "unknown category label",
            ParseErrorKind::InvalidCategorySet => "invalid category set",
            ParseErrorKind::LabelOnly => "label without content",
            ParseErrorKind::EmptyUnit => "empty unit",
            ParseErrorKind::DanglingContinuation => "dangling continuation",
            ParseErrorKind::OrphanContinuation => "orphan continuation",
            ParseErrorKind::AmbiguousContinuation => "ambiguous continuation",
            ParseErrorKind::MisplacedContinuation => "misplaced continuation",
            ParseErrorKind::ContinuationKindMismatch => "continuation kind mismatch",
            ParseErrorKind::UnresolvedRemote => "unresolved remote",
            ParseErrorKind::AmbiguousRemote => "ambiguous remote",
            ParseErrorKind::MisplacedRemote => "misplaced remote",
            ParseErrorKind::NestedRemote => "nested remote",
            ParseErrorKind::InvalidRemote => "invalid remote",
            ParseErrorKind::InvalidStructure => "invalid structure",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    fn new(
        kind: ParseErrorKind,
        position: usize,
        expected: impl Into<String>,
        found: impl Into<String>,
    ) -> Self {
        ParseError {
            kind,
            position,
            expected: expected.into(),
            found: found.into(),
        }
    }

    fn shifted(mut self, offset: usize) -> Self {
        self.position += offset;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Take the nearest preceding match for an ambiguous remote instead of
    /// failing, and record a warning.
    pub lenient_remotes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "byte {}: {}", self.position, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub passage: Passage,
    pub warnings: Vec<ParseWarning>,
}

/// Parses one passage with strict remote resolution.
pub fn parse_passage(source: &str) -> Result<Passage, ParseError> {
    parse_passage_with(source, "", &ParseOptions::default()).map(|p| p.passage)
}

pub fn parse_passage_with(
    source: &str,
    id: &str,
    options: &ParseOptions,
) -> Result<Parsed, ParseError> {
    let tokens = lex(source);
    let items = tree(&tokens, source.len())?;
    let mut b = Builder::new(*options);
    b.top_level(&items)?;
    b.finish(id)
}

/// Parses a file that may hold several passages separated by blank lines.
/// Passage ids are `{id}` for a single passage and `{id}#{n}` (1-based)
/// otherwise. Error positions are offsets into the whole source.
pub fn parse_document(
    source: &str,
    id: &str,
    options: &ParseOptions,
) -> Result<Vec<Parsed>, ParseError> {
    let chunks = split_passages(source);
    let many = chunks.len() > 1;
    chunks
        .into_iter()
        .enumerate()
        .map(|(i, (offset, text))| {
            let pid = if many {
                format!("{id}#{}", i + 1)
            } else {
                id.to_string()
            };
            parse_passage_with(text, &pid, options)
                .map(|mut p| {
                    for w in &mut p.warnings {
                        w.position += offset;
                    }
                    p
                })
                .map_err(|e| e.shifted(offset))
        })
        .collect()
}

/// Blank-line separated chunks with their byte offsets.
pub fn split_passages(source: &str) -> Vec<(usize, &str)> {
    let mut chunks = Vec::new();
    let mut start: Option<usize> = None;
    let mut end = 0;
    let mut offset = 0;
    for line in source.split_inclusive('\n') {
        if line.trim().is_empty() {
            if let Some(s) = start.take() {
                chunks.push((s, &source[s..end]));
            }
        } else {
            if start.is_none() {
                start = Some(offset);
            }
            end = offset + line.trim_end().len();
        }
        offset += line.len();
    }
    if let Some(s) = start {
        chunks.push((s, &source[s..end]));
    }
    chunks
}

#[derive(Debug)]
enum Item<'a> {
    Group(Group<'a>),
    Atom(NotationToken<'a>),
}

#[derive(Debug)]
struct Group<'a> {
    paren: bool,
    open: usize,
    items: Vec<Item<'a>>,
}

impl Item<'_> {
    fn position(&self) -> usize {
        match self {
            Item::Group(g) => g.open,
            Item::Atom(t) => t.span.start,
        }
    }

    fn describe(&self) -> String {
        match self {
            Item::Group(g) if g.paren => "`(`".into(),
            Item::Group(_) => "`[`".into(),
            Item::Atom(t) => format!("`{}`", t.text),
        }
    }

    fn label_token(&self) -> Option<&NotationToken<'_>> {
        match self {
            Item::Atom(t) if t.kind == TokenKind::Label => Some(t),
            _ => None,
        }
    }
}

fn tree<'a>(tokens: &[NotationToken<'a>], len: usize) -> Result<Vec<Item<'a>>, ParseError> {
    let mut stack: Vec<Group<'a>> = vec![Group {
        paren: false,
        open: 0,
        items: Vec::new(),
    }];
    for t in tokens {
        match t.kind {
            TokenKind::LBracket | TokenKind::LParen => stack.push(Group {
                paren: t.kind == TokenKind::LParen,
                open: t.span.start,
                items: Vec::new(),
            }),
            TokenKind::RBracket | TokenKind::RParen => {
                let closes_paren = t.kind == TokenKind::RParen;
                if stack.len() == 1 {
                    return Err(ParseError::new(
                        ParseErrorKind::UnbalancedBrackets,
                        t.span.start,
                        "an opening bracket before it",
                        format!("`{}`", t.text),
                    ));
                }
                let group = stack.pop().unwrap();
                if group.paren != closes_paren {
                    let want = if group.paren { "`)`" } else { "`]`" };
                    return Err(ParseError::new(
                        ParseErrorKind::UnbalancedBrackets,
                        t.span.start,
                        want,
                        format!("`{}`", t.text),
                    ));
                }
                stack.last_mut().unwrap().items.push(Item::Group(group));
            }
            TokenKind::Label | TokenKind::Word => {
                stack.last_mut().unwrap().items.push(Item::Atom(t.clone()))
            }
        }
    }
    if stack.len() > 1 {
        let open = stack.pop().unwrap();
        let want = if open.paren { "`)`" } else { "`]`" };
        return Err(ParseError::new(
            ParseErrorKind::UnbalancedBrackets,
            open.open.min(len.saturating_sub(1)),
            format!("{want} to close this group"),
            "end of input",
        ));
    }
    Ok(stack.pop().unwrap().items)
}

struct PUnit {
    kind: UnitKind,
    parent: Option<usize>,
    categories: Option<CategorySet>,
    tokens: Vec<usize>,
}

struct RemoteRef {
    owner: usize,
    categories: CategorySet,
    words: Vec<String>,
    anchor: Option<usize>,
    /// Passage tokens preceding the group.
    position: usize,
    offset: usize,
}

type ContinuationKey = (CategorySet, Option<u32>);

struct Builder {
    options: ParseOptions,
    tokens: Vec<Token>,
    units: Vec<PUnit>,
    /// Units waiting for a continuation fragment, with the opener's offset.
    open: HashMap<ContinuationKey, (usize, usize)>,
    remotes: Vec<RemoteRef>,
    warnings: Vec<ParseWarning>,
}

/// Splits bracket content into (label, content, unanalyzable-marker).
fn split_label<'a>(
    items: &'a [Item<'a>],
    open: usize,
    bracket: bool,
) -> Result<(&'a NotationToken<'a>, &'a [Item<'a>], bool), ParseError> {
    let (label, content) = match items {
        [] => {
            return Err(ParseError::new(
                ParseErrorKind::EmptyUnit,
                open,
                "a label and content",
                "an empty group",
            ))
        }
        [only] if only.label_token().is_some() => {
            return Err(ParseError::new(
                ParseErrorKind::LabelOnly,
                open,
                "content next to the label (add an explicit label if the word is text)",
                only.describe(),
            ))
        }
        [first, rest @ ..] if first.label_token().is_some() => (first.label_token().unwrap(), rest),
        [rest @ .., last] if last.label_token().is_some() => (last.label_token().unwrap(), rest),
        [first, .., last] | [first @ last] => {
            let suspect = [first, last].into_iter().find_map(|i| match i {
                Item::Atom(t) if looks_like_unknown_label(t.text) => Some(t),
                _ => None,
            });
            return Err(match suspect {
                Some(t) => ParseError::new(
                    ParseErrorKind::UnknownCategoryLabel,
                    t.span.start,
                    "a category label",
                    format!("`{}`", t.text),
                ),
                None => ParseError::new(
                    ParseErrorKind::UnknownCategoryLabel,
                    open,
                    "a category label at either end of the group",
                    format!("{} ... {}", first.describe(), last.describe()),
                ),
            });
        }
    };
    if bracket {
        if let [rest @ .., Item::Atom(t)] = content {
            if !rest.is_empty() && t.kind == TokenKind::Label && t.text == "UNA" {
                return Ok((label, rest, true));
            }
        }
    }
    Ok((label, content, false))
}

fn label_spec(t: &NotationToken<'_>) -> Result<LabelSpec, ParseError> {
    parse_label(t.text)
        .expect("label tokens are label-shaped")
        .map_err(|e| {
            ParseError::new(
                ParseErrorKind::InvalidCategorySet,
                t.span.start,
                "a valid category combination",
                format!("`{}` ({e})", t.text),
            )
        })
}

impl Builder {
    fn new(options: ParseOptions) -> Self {
        Builder {
            options,
            tokens: Vec::new(),
            units: vec![PUnit {
                kind: UnitKind::Internal,
                parent: None,
                categories: None,
                tokens: Vec::new(),
            }],
            open: HashMap::new(),
            remotes: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn push_token(&mut self, text: &str) -> usize {
        let pos = self.tokens.len();
        self.tokens.push(Token::new(pos, text));
        pos
    }

    fn top_level(&mut self, items: &[Item<'_>]) -> Result<(), ParseError> {
        self.internal_content(items, 0)
    }

    /// Content of an internal unit: sub-groups, loose words, then remotes.
    fn internal_content(&mut self, items: &[Item<'_>], unit: usize) -> Result<(), ParseError> {
        let mut first_paren: Option<usize> = None;
        for item in items {
            match item {
                Item::Group(g) if g.paren => {
                    first_paren.get_or_insert(g.open);
                    self.paren(g, unit)?;
                }
                Item::Group(g) => {
                    if let Some(p) = first_paren {
                        return Err(misplaced_remote(p, item));
                    }
                    self.bracket(g, unit)?;
                }
                Item::Atom(t) => {
                    let punct = is_punctuation(t.text);
                    if let (Some(p), false) = (first_paren, punct) {
                        return Err(misplaced_remote(p, item));
                    }
                    // Words not wrapped in a unit stay uncovered.
                    self.push_token(t.text);
                }
            }
        }
        Ok(())
    }

    fn bracket(&mut self, g: &Group<'_>, enclosing: usize) -> Result<(), ParseError> {
        let (label_tok, content, una) = split_label(&g.items, g.open, true)?;
        let spec = label_spec(label_tok)?;
        let internal = content.iter().any(|i| matches!(i, Item::Group(_)));
        let kind = if internal {
            UnitKind::Internal
        } else {
            UnitKind::Terminal
        };
        let key = (spec.categories, spec.index);
        let unit = if spec.continues {
            let Some(&(u, _)) = self.open.get(&key) else {
                return Err(ParseError::new(
                    ParseErrorKind::OrphanContinuation,
                    label_tok.span.start,
                    format!(
                        "an earlier `{}-` fragment",
                        label_tok.text.trim_matches('-')
                    ),
                    format!("`{}`", label_tok.text),
                ));
            };
            if self.units[u].parent != Some(enclosing) {
                return Err(ParseError::new(
                    ParseErrorKind::MisplacedContinuation,
                    label_tok.span.start,
                    "the continuation under the same parent as its first fragment",
                    format!("`{}`", label_tok.text),
                ));
            }
            if self.units[u].kind != kind {
                return Err(ParseError::new(
                    ParseErrorKind::ContinuationKindMismatch,
                    label_tok.span.start,
                    format!("{} content like the first fragment", self.units[u].kind),
                    format!("{kind} content"),
                ));
            }
            if !spec.continued {
                self.open.remove(&key);
            }
            u
        } else {
            let categories = if una {
                spec.categories.with(Category::Una).map_err(|e| {
                    ParseError::new(
                        ParseErrorKind::InvalidCategorySet,
                        label_tok.span.start,
                        "a valid category combination",
                        e.to_string(),
                    )
                })?
            } else {
                spec.categories
            };
            let u = self.units.len();
            self.units.push(PUnit {
                kind,
                parent: Some(enclosing),
                categories: Some(categories),
                tokens: Vec::new(),
            });
            if spec.continued {
                if let Some(&(_, first)) = self.open.get(&key) {
                    return Err(ParseError::new(
                        ParseErrorKind::AmbiguousContinuation,
                        label_tok.span.start,
                        format!("an index to tell this fragment from the one at byte {first}"),
                        format!("`{}`", label_tok.text),
                    ));
                }
                self.open.insert(key, (u, label_tok.span.start));
            }
            u
        };

        if internal {
            self.internal_content(content, unit)
        } else {
            let mut words = 0;
            for item in content {
                let Item::Atom(t) = item else { unreachable!() };
                let pos = self.push_token(t.text);
                if !self.tokens[pos].is_punct {
                    self.units[unit].tokens.push(pos);
                    words += 1;
                }
            }
            if words == 0 {
                return Err(ParseError::new(
                    ParseErrorKind::EmptyUnit,
                    g.open,
                    "at least one non-punctuation word",
                    "no words",
                ));
            }
            Ok(())
        }
    }

    fn paren(&mut self, g: &Group<'_>, owner: usize) -> Result<(), ParseError> {
        if let Some(Item::Group(inner)) = g.items.iter().find(|i| matches!(i, Item::Group(_))) {
            return Err(ParseError::new(
                ParseErrorKind::NestedRemote,
                inner.open,
                "a flat word sequence inside a remote group",
                "a nested group",
            ));
        }
        let (label_tok, content, _) = split_label(&g.items, g.open, false)?;
        let spec = label_spec(label_tok)?;
        if spec.continues || spec.continued || spec.index.is_some() {
            return Err(ParseError::new(
                ParseErrorKind::InvalidRemote,
                label_tok.span.start,
                "a plain category label",
                format!("`{}`", label_tok.text),
            ));
        }
        let mut words: Vec<&str> = content
            .iter()
            .map(|i| match i {
                Item::Atom(t) => t.text,
                Item::Group(_) => unreachable!(),
            })
            .collect();
        if words == ["IMP"] {
            self.units.push(PUnit {
                kind: UnitKind::Implicit,
                parent: Some(owner),
                categories: Some(spec.categories),
                tokens: Vec::new(),
            });
            return Ok(());
        }
        let mut anchor = None;
        if let Some(first) = words.first() {
            if let Some(n) = first
                .strip_prefix('#')
                .and_then(|d| d.parse::<usize>().ok())
            {
                anchor = Some(n);
                words.remove(0);
            }
        }
        words.retain(|w| !is_punctuation(w));
        if words.is_empty() {
            return Err(ParseError::new(
                ParseErrorKind::UnresolvedRemote,
                g.open,
                "the words of the remote unit, or IMP",
                "no words",
            ));
        }
        self.remotes.push(RemoteRef {
            owner,
            categories: spec.categories,
            words: words.into_iter().map(String::from).collect(),
            anchor,
            position: self.tokens.len(),
            offset: g.open,
        });
        Ok(())
    }

    fn finish(mut self, id: &str) -> Result<Parsed, ParseError> {
        if let Some(&(_, offset)) = self.open.values().min_by_key(|(_, off)| *off) {
            return Err(ParseError::new(
                ParseErrorKind::DanglingContinuation,
                offset,
                "a matching continuation fragment later on",
                "end of input",
            ));
        }

        let specs: Vec<UnitSpec> = self
            .units
            .iter()
            .enumerate()
            .map(|(i, u)| UnitSpec {
                key: i.to_string(),
                kind: u.kind,
                tokens: u.tokens.clone(),
            })
            .collect();
        let mut edges: Vec<EdgeSpec> = self
            .units
            .iter()
            .enumerate()
            .filter_map(|(i, u)| {
                Some(EdgeSpec::primary(
                    u.parent?.to_string(),
                    i.to_string(),
                    u.categories?,
                ))
            })
            .collect();

        if !self.remotes.is_empty() {
            let scaffold_options = BuildOptions {
                allow_childless_internal: true,
                ..BuildOptions::allow_uncovered()
            };
            let (scaffold, ids) = graph::build(
                id.to_string(),
                self.tokens.clone(),
                specs.clone(),
                edges.clone(),
                scaffold_options,
            )
            .map_err(structure_error)?;
            let mut index_of = vec![0; ids.len()];
            for (i, id) in ids.iter().enumerate() {
                index_of[id.index()] = i;
            }
            for r in &self.remotes {
                let words: Vec<&str> = r.words.iter().map(String::as_str).collect();
                let owner = ids[r.owner];
                let resolved = remote::resolve(
                    &scaffold,
                    owner,
                    &words,
                    r.position,
                    r.anchor,
                    self.options.lenient_remotes,
                )
                .map_err(|f| remote_error(f, r, &scaffold))?;
                if resolved.ambiguous {
                    self.warnings.push(ParseWarning {
                        position: r.offset,
                        message: format!(
                            "remote `{}` matches several units; took the one at token {}",
                            r.words.join(" "),
                            scaffold.get(resolved.target).primary_yield()[0]
                        ),
                    });
                }
                edges.push(EdgeSpec::remote(
                    r.owner.to_string(),
                    index_of[resolved.target.index()].to_string(),
                    r.categories,
                ));
            }
        }

        let passage = Passage::build(
            id,
            self.tokens,
            specs,
            edges,
            BuildOptions::allow_uncovered(),
        )
        .map_err(structure_error)?;
        Ok(Parsed {
            passage,
            warnings: self.warnings,
        })
    }
}

fn misplaced_remote(paren: usize, item: &Item<'_>) -> ParseError {
    ParseError::new(
        ParseErrorKind::MisplacedRemote,
        item.position(),
        "remote and implicit groups only at the end of their unit",
        format!("{} after the group at byte {paren}", item.describe()),
    )
}

fn remote_error(f: RemoteFailure, r: &RemoteRef, p: &Passage) -> ParseError {
    let text = format!("`{}`", r.words.join(" "));
    match f {
        RemoteFailure::Unresolved => ParseError::new(
            ParseErrorKind::UnresolvedRemote,
            r.offset,
            "a unit elsewhere whose words match the remote",
            text,
        ),
        RemoteFailure::Ambiguous(units) => {
            let at: Vec<String> = units
                .iter()
                .map(|u| p.get(*u).primary_yield()[0].to_string())
                .collect();
            ParseError::new(
                ParseErrorKind::AmbiguousRemote,
                r.offset,
                "a single matching unit (or an explicit #n anchor)",
                format!("{text} matching at tokens {}", at.join(", ")),
            )
        }
        RemoteFailure::BadAnchor(k) => ParseError::new(
            ParseErrorKind::InvalidRemote,
            r.offset,
            "an anchor within the number of matching units",
            format!("#{k}"),
        ),
        RemoteFailure::InvalidTarget(u) => ParseError::new(
            ParseErrorKind::InvalidRemote,
            r.offset,
            "a target that is not the unit itself, its ancestor or its own child",
            format!("{text} (unit {u})"),
        ),
    }
}

fn structure_error(e: graph::BuildError) -> ParseError {
    ParseError::new(
        ParseErrorKind::InvalidStructure,
        0,
        "a well-formed passage",
        e.to_string(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UnitId;

    fn kind(src: &str) -> ParseErrorKind {
        parse_passage(src).unwrap_err().kind
    }

    fn err(src: &str) -> ParseError {
        parse_passage(src).unwrap_err()
    }

    #[test]
    fn apa_scene() {
        let p = parse_passage("[H [A John] [P kicked] [A [F the] [C ball] ] ]").unwrap();
        assert_eq!(p.units().len(), 7);
        let scene = p.get(UnitId(1));
        assert!(scene.is_scene());
        assert_eq!(scene.primary_yield(), [0, 1, 2, 3]);
    }

    #[test]
    fn discontinuous_with_labels_on_both_sides() {
        let p =
            parse_passage("[H [John A] [P- took] [Mary A] [up on -P] [ [her A] [promise P ] A] ]")
                .unwrap();
        let took = p
            .units()
            .iter()
            .find(|u| u.tokens().first() == Some(&1))
            .unwrap();
        assert_eq!(took.tokens(), [1, 3, 4]);
        assert_eq!(p.yield_of(took.id(), false).unwrap().len(), 3);
    }

    #[test]
    fn label_side_indifference() {
        let a = parse_passage("[A John]").unwrap();
        let b = parse_passage("[John A]").unwrap();
        assert!(a.isomorphic(&b));
    }

    #[test]
    fn interleaved_indices() {
        let p = parse_passage("[H [A1- w1] [A2- w2] w3 [-A1 w4] [-A2 w5] ]").unwrap();
        let a: Vec<_> = p
            .units()
            .iter()
            .filter(|u| u.is_terminal())
            .map(|u| u.tokens().to_vec())
            .collect();
        assert_eq!(a, [vec![0, 3], vec![1, 4]]);
        assert_eq!(p.uncovered_tokens(), [2]);
    }

    #[test]
    fn dangling_offset() {
        let src = "[H [A John] [A- took] [P x]]";
        let e = err(src);
        assert_eq!(e.kind, ParseErrorKind::DanglingContinuation);
        assert_eq!(e.position, src.find("A-").unwrap());
    }

    #[test]
    fn error_kinds() {
        use ParseErrorKind::*;
        assert_eq!(kind("[H [A John]"), UnbalancedBrackets);
        assert_eq!(kind("[H [A John]]]"), UnbalancedBrackets);
        assert_eq!(kind("[H [A John)]"), UnbalancedBrackets);
        assert_eq!(kind("[X John]"), UnknownCategoryLabel);
        assert_eq!(kind("[John went]"), UnknownCategoryLabel);
        assert_eq!(kind("[P+S went]"), InvalidCategorySet);
        assert_eq!(kind("[A]"), LabelOnly);
        assert_eq!(kind("[A .]"), EmptyUnit);
        assert_eq!(kind("[H [-A x]]"), OrphanContinuation);
        assert_eq!(kind("[H [A- x] [A- y] [-A z]]"), AmbiguousContinuation);
        assert_eq!(kind("[H [A- x] [P y]] [H [-A z]]"), MisplacedContinuation);
        assert_eq!(
            kind("[H [A- x] [P y] [-A [C z]]]"),
            ContinuationKindMismatch
        );
        assert_eq!(kind("[H [A John] [P left] (Mary A)]"), UnresolvedRemote);
        assert_eq!(kind("[H [P left] (John A) [A John]]"), MisplacedRemote);
        assert_eq!(kind("[H [A John] [P left] ([A John] A)]"), NestedRemote);
        assert_eq!(
            kind("[H [A John] [P left]] [H [P ran] (John A-)]"),
            InvalidRemote
        );
        assert_eq!(
            kind("[H [A John] [P left]] [H [P ran] (#3 John A)]"),
            InvalidRemote
        );
    }

    #[test]
    fn positions_inside_source() {
        for src in ["[", "]", "[A", "(", "[H [A x] (", "[A x"] {
            let e = err(src);
            assert!(e.position < src.len(), "{src}: {e}");
        }
    }

    #[test]
    fn ambiguous_remote_strict_and_lenient() {
        let src =
            "[H [A John] [P left]] [L and] [H [A John] [P stayed]] [L but] [H [P cried] (John A)]";
        assert_eq!(kind(src), ParseErrorKind::AmbiguousRemote);
        let parsed = parse_passage_with(
            src,
            "x",
            &ParseOptions {
                lenient_remotes: true,
            },
        )
        .unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        let remote = parsed.passage.edges().find(|e| e.remote).unwrap();
        assert_eq!(parsed.passage.get(remote.child).tokens(), [3]);
    }

    #[test]
    fn forward_remote() {
        let p = parse_passage("[H [P Eat] (You A)] ! [H [A You] [P heard] [A me]]").unwrap();
        let remote = p.edges().find(|e| e.remote).unwrap();
        assert_eq!(p.yield_text(remote.child), "You");
    }

    #[test]
    fn unanalyzable_marker() {
        let p = parse_passage("[H [P Thank you UNA]]").unwrap();
        let t = p.units().iter().find(|u| u.is_terminal()).unwrap();
        assert!(t.is_unanalyzable());
        assert_eq!(p.tokens().len(), 2);
    }

    #[test]
    fn documents_split_on_blank_lines() {
        let src = "[H [A John] [P left]]\n\n  \n[H [A Mary] [P came]\n";
        let e = parse_document(src, "f", &ParseOptions::default()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnbalancedBrackets);
        assert_eq!(e.position, src.rfind("[H").unwrap());
        let ok = parse_document(
            "[H [A a] [P b]]\n\n[H [A c] [P d]]\n",
            "f",
            &ParseOptions::default(),
        )
        .unwrap();
        assert_eq!(ok.len(), 2);
        assert_eq!(ok[1].passage.id(), "f#2");
    }
}
