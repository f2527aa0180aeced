//! The plain-text bracket notation.
//!
//! Each unit is a bracketed group with its category label at either end:
//! `[H [A John] [P kicked] [A [F the] [C ball]]]`. Combined labels join
//! categories with `+` (`S+A`). A discontinuous unit is split into
//! fragments whose labels carry dashes, `[P- took] ... [-P up on]`, with a
//! numeric index when two of them would otherwise be confused (`A1-`).
//! Remote participants and implicit units are parenthesized at the end of
//! the unit that owns them: `(John A)`, `(IMP A)`. A final `UNA` word marks
//! an unanalyzable unit, as in `[P Thank you UNA]`.
//!
//! Words outside any unit are uncovered tokens. Punctuation inside a unit
//! belongs to the token sequence but not to the unit.

pub mod lexer;
mod parser;
mod remote;
mod render;

pub use lexer::lex;
pub use parser::{
    parse_document, parse_passage, parse_passage_with, split_passages, ParseError, ParseErrorKind,
    ParseOptions, ParseWarning, Parsed,
};
pub use render::{render, render_document, LabelSide};
