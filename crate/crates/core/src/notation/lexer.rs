use std::ops::Range;

use crate::category::{Category, CategoryError, CategorySet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    LBracket,
    RBracket,
    LParen,
    RParen,
    Label,
    Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotationToken<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    /// Byte offsets into the source.
    pub span: Range<usize>,
}

/// Splits notation source into brackets, parentheses, labels and words.
///
/// Never fails: anything that is not a bracket and does not look like a
/// category label is a word. Whitespace separates tokens and is dropped.
pub fn lex(source: &str) -> Vec<NotationToken<'_>> {
    let mut out: Vec<NotationToken<'_>> = Vec::new();
    let mut word_start: Option<usize> = None;
    fn flush<'a>(
        source: &'a str,
        start: &mut Option<usize>,
        end: usize,
        out: &mut Vec<NotationToken<'a>>,
    ) {
        if let Some(s) = start.take() {
            let text = &source[s..end];
            let kind = if looks_like_label(text) {
                TokenKind::Label
            } else {
                TokenKind::Word
            };
            out.push(NotationToken {
                kind,
                text,
                span: s..end,
            });
        }
    }
    for (i, c) in source.char_indices() {
        let single = match c {
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            flush(source, &mut word_start, i, &mut out);
            out.push(NotationToken {
                kind,
                text: &source[i..i + 1],
                span: i..i + 1,
            });
        } else if c.is_whitespace() {
            flush(source, &mut word_start, i, &mut out);
        } else if word_start.is_none() {
            word_start = Some(i);
        }
    }
    flush(source, &mut word_start, source.len(), &mut out);
    out
}

/// A parsed category label: `-`? categories (`+`-joined) index? `-`?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelSpec {
    pub categories: CategorySet,
    pub index: Option<u32>,
    /// `-X`: continues an earlier fragment.
    pub continues: bool,
    /// `X-`: continued by a later fragment.
    pub continued: bool,
}

struct LabelParts<'a> {
    names: Vec<&'a str>,
    index: Option<u32>,
    continues: bool,
    continued: bool,
}

fn split_label(text: &str) -> Option<LabelParts<'_>> {
    let (continues, rest) = match text.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, text),
    };
    let (continued, rest) = match rest.strip_suffix('-') {
        Some(r) => (true, r),
        None => (false, rest),
    };
    let digits = rest.len() - rest.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (body, index) = rest.split_at(rest.len() - digits);
    let index = if index.is_empty() {
        None
    } else {
        Some(index.parse().ok()?)
    };
    if body.is_empty() {
        return None;
    }
    let names: Vec<&str> = body.split('+').collect();
    if names.iter().any(|n| n.parse::<Category>().is_err()) {
        return None;
    }
    Some(LabelParts {
        names,
        index,
        continues,
        continued,
    })
}

/// Whether the word is shaped like a label made of known abbreviations.
pub fn looks_like_label(text: &str) -> bool {
    split_label(text).is_some()
}

/// Label-shaped words that name no known category, such as `X` or `AB1-`.
pub(crate) fn looks_like_unknown_label(text: &str) -> bool {
    let core = text.trim_start_matches('-').trim_end_matches('-');
    let core = core.trim_end_matches(|c: char| c.is_ascii_digit());
    !core.is_empty()
        && core
            .split('+')
            .all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_uppercase()))
        && !looks_like_label(text)
}

/// Parses a label token; `None` if the text is not label-shaped.
pub fn parse_label(text: &str) -> Option<Result<LabelSpec, CategoryError>> {
    let parts = split_label(text)?;
    let categories = parts
        .names
        .iter()
        .map(|n| n.parse::<Category>())
        .collect::<Result<Vec<_>, _>>()
        .and_then(CategorySet::new);
    Some(categories.map(|categories| LabelSpec {
        categories,
        index: parts.index,
        continues: parts.continues,
        continued: parts.continued,
    }))
}

/// Writes a label back in notation form.
pub(crate) fn format_label(
    categories: CategorySet,
    index: Option<u32>,
    continues: bool,
    continued: bool,
) -> String {
    let mut s = String::new();
    if continues {
        s.push('-');
    }
    s.push_str(&categories.to_string());
    if let Some(i) = index {
        s.push_str(&i.to_string());
    }
    if continued {
        s.push('-');
    }
    s
}
