//! Resolving a remote group's words to the unit it refers to.
//!
//! Shared by the parser and the renderer, so that whatever the renderer
//! writes resolves back to the same target.

use crate::graph::{Passage, UnitId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RemoteFailure {
    Unresolved,
    Ambiguous(Vec<UnitId>),
    BadAnchor(usize),
    InvalidTarget(UnitId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Resolved {
    pub target: UnitId,
    /// Several equally minimal matches; the nearest preceding one was taken.
    pub ambiguous: bool,
}

/// Units whose primary yield reads exactly `words`, in id order.
pub(crate) fn candidates(passage: &Passage, words: &[&str]) -> Vec<UnitId> {
    passage
        .units()
        .iter()
        .filter(|u| u.parent().is_some() && !u.primary_yield().is_empty())
        .filter(|u| {
            let y = u.primary_yield();
            y.len() == words.len()
                && y.iter()
                    .zip(words)
                    .all(|(&t, w)| passage.tokens()[t].text == *w)
        })
        .map(|u| u.id())
        .collect()
}

/// A unit can take `target` as a remote child without a cycle or a
/// duplicate primary edge.
pub(crate) fn is_valid_target(passage: &Passage, owner: UnitId, target: UnitId) -> bool {
    let t = passage.get(target);
    target != owner
        && t.parent().is_some()
        && t.parent() != Some(owner)
        && !passage.ancestors(owner).any(|a| a == target)
}

fn is_minimal(passage: &Passage, unit: UnitId) -> bool {
    let u = passage.get(unit);
    !u.primary_children()
        .any(|e| passage.get(e.child).primary_yield() == u.primary_yield())
}

/// Picks the target for a remote written at token `position` inside
/// `owner`. An explicit 1-based `anchor` selects among all candidates in
/// id order. Otherwise the minimal matching unit wins; several minimal
/// matches are an error unless `lenient`, which takes the nearest one
/// before `position` (or the nearest after, if none precede).
pub(crate) fn resolve(
    passage: &Passage,
    owner: UnitId,
    words: &[&str],
    position: usize,
    anchor: Option<usize>,
    lenient: bool,
) -> Result<Resolved, RemoteFailure> {
    let all = candidates(passage, words);
    if let Some(k) = anchor {
        let target = *k
            .checked_sub(1)
            .and_then(|i| all.get(i))
            .ok_or(RemoteFailure::BadAnchor(k))?;
        if !is_valid_target(passage, owner, target) {
            return Err(RemoteFailure::InvalidTarget(target));
        }
        return Ok(Resolved {
            target,
            ambiguous: false,
        });
    }
    let minimal: Vec<UnitId> = all
        .into_iter()
        .filter(|&u| is_minimal(passage, u) && is_valid_target(passage, owner, u))
        .collect();
    match minimal.as_slice() {
        [] => Err(RemoteFailure::Unresolved),
        [one] => Ok(Resolved {
            target: *one,
            ambiguous: false,
        }),
        _ if !lenient => Err(RemoteFailure::Ambiguous(minimal)),
        _ => {
            let first = |u: UnitId| passage.get(u).primary_yield()[0];
            let target = minimal
                .iter()
                .copied()
                .filter(|&u| first(u) < position)
                .max_by_key(|&u| first(u))
                .or_else(|| minimal.iter().copied().min_by_key(|&u| first(u)))
                .expect("at least two candidates");
            Ok(Resolved {
                target,
                ambiguous: true,
            })
        }
    }
}

/// The anchor the renderer must write so that `target` resolves from
/// `owner` at `position`, or `None` if the words alone suffice.
pub(crate) fn anchor_for(
    passage: &Passage,
    owner: UnitId,
    target: UnitId,
    position: usize,
) -> Option<usize> {
    let text = passage.yield_text(target);
    let words: Vec<&str> = text.split(' ').collect();
    match resolve(passage, owner, &words, position, None, false) {
        Ok(r) if r.target == target => None,
        _ => candidates(passage, &words)
            .iter()
            .position(|&u| u == target)
            .map(|i| i + 1),
    }
}
