//! Structural annotation rules.
//!
//! Rules `R1`..`R13` encode the hard restrictions on foundational-layer
//! graphs; `W1` and `W2` encode softer conventions. [`list_rules`] is the
//! registry and [`validate`] runs all enabled rules over a passage.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::category::Category;
use crate::graph::{Passage, Unit, UnitId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleInfo {
    pub id: &'static str,
    pub severity: Severity,
    pub description: &'static str,
    /// The guideline wording the rule enforces.
    pub guideline_anchor: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub rule: &'static str,
    pub severity: Severity,
    pub unit: UnitId,
    pub message: String,
    /// Start of the unit's yield text, at most 40 characters.
    #[serde(rename = "yield")]
    pub yield_text: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} unit {} \"{}\": {}",
            self.severity, self.rule, self.unit, self.yield_text, self.message
        )
    }
}

type Check = fn(&Passage, &mut Vec<(UnitId, String)>);

struct Rule {
    info: RuleInfo,
    check: Check,
}

const RULES: &[Rule] = &[
    Rule {
        info: RuleInfo {
            id: "R1",
            severity: Severity::Error,
            description: "top-level units are parallel scenes (H) or linkers (L)",
            guideline_anchor: "only H and L children are allowed at the top level",
        },
        check: r1_top_level,
    },
    Rule {
        info: RuleInfo {
            id: "R2",
            severity: Severity::Error,
            description: "a scene has exactly one main relation (P or S)",
            guideline_anchor: "A Scene has a main relation (exactly one)",
        },
        check: r2_one_main_relation,
    },
    Rule {
        info: RuleInfo {
            id: "R3",
            severity: Severity::Error,
            description: "a non-scene unit with several children has a center (C)",
            guideline_anchor: "at least two child units one of which should be C",
        },
        check: r3_center,
    },
    Rule {
        info: RuleInfo {
            id: "R4",
            severity: Severity::Error,
            description:
                "a linker (L) has a parallel scene (H) sibling unless it is at the top level",
            guideline_anchor: "links only between Hs",
        },
        check: r4_linker,
    },
    Rule {
        info: RuleInfo {
            id: "R5",
            severity: Severity::Error,
            description: "function units (F) are never remote and have no remote children",
            guideline_anchor: "F should not be added as remote",
        },
        check: r5_remote_function,
    },
    Rule {
        info: RuleInfo {
            id: "R6",
            severity: Severity::Error,
            description: "an internal unit has a non-remote child that is not only F",
            guideline_anchor: "at least one of them must be non-remote",
        },
        check: r6_substantive_child,
    },
    Rule {
        info: RuleInfo {
            id: "R7",
            severity: Severity::Warning,
            description: "adverbials (D) appear in scenes, except in coordination marked C",
            guideline_anchor: "a unit with D and C children is marked as C",
        },
        check: r7_adverbial,
    },
    Rule {
        info: RuleInfo {
            id: "R8",
            severity: Severity::Error,
            description: "CMR is combined with P or S",
            guideline_anchor: "only as a secondary category",
        },
        check: r8_cmr,
    },
    Rule {
        info: RuleInfo {
            id: "R9",
            severity: Severity::Error,
            description: "unanalyzable (UNA) units have no internal structure",
            guideline_anchor: "does not have sub-parts with significant semantic input",
        },
        check: r9_unanalyzable,
    },
    Rule {
        info: RuleInfo {
            id: "R10",
            severity: Severity::Error,
            description: "every non-punctuation token belongs to exactly one terminal",
            guideline_anchor: "The units must cover all the tokens",
        },
        check: r10_coverage,
    },
    Rule {
        info: RuleInfo {
            id: "R11",
            severity: Severity::Error,
            description: "a unit with a connector (N) has no elaborator (E) or quantifier (Q)",
            guideline_anchor: "Connective (C, N; may not have E, Q)",
        },
        check: r11_connective,
    },
    Rule {
        info: RuleInfo {
            id: "R12",
            severity: Severity::Warning,
            description: "a remote target is the minimal unit with its yield",
            guideline_anchor: "select the minimal possible relevant unit",
        },
        check: r12_minimal_remote,
    },
    Rule {
        info: RuleInfo {
            id: "R13",
            severity: Severity::Error,
            description: "a scene is a parallel scene, participant, elaborator or center",
            guideline_anchor: "no Adverbial (D) Scenes or Time (T) Scenes",
        },
        check: r13_scene_role,
    },
    Rule {
        info: RuleInfo {
            id: "W1",
            severity: Severity::Warning,
            description: "parallel scenes are not grouped under another H",
            guideline_anchor: "should not be united under another H",
        },
        check: w1_nested_parallel,
    },
    Rule {
        info: RuleInfo {
            id: "W2",
            severity: Severity::Warning,
            description: "remote and implicit units carry a category beyond F and UNA",
            guideline_anchor: "assigned relevant categories like any other unit",
        },
        check: w2_bare_remote,
    },
];

/// The rule registry in evaluation order.
pub fn list_rules() -> Vec<RuleInfo> {
    RULES.iter().map(|r| r.info.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `RULE = error|warning|off`")]
    Syntax { line: usize },
    #[error("line {line}: unknown rule `{rule}`")]
    UnknownRule { line: usize, rule: String },
    #[error("line {line}: unknown severity `{value}`")]
    UnknownSeverity { line: usize, value: String },
}

/// Per-rule severity overrides. `None` switches a rule off.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    overrides: BTreeMap<&'static str, Option<Severity>>,
}

impl Config {
    pub fn set(&mut self, rule: &str, severity: Option<Severity>) -> Result<(), ConfigError> {
        let id = rule_id(rule).ok_or_else(|| ConfigError::UnknownRule {
            line: 0,
            rule: rule.to_string(),
        })?;
        self.overrides.insert(id, severity);
        Ok(())
    }

    pub fn severity(&self, rule: &str) -> Option<Severity> {
        let info = &RULES.iter().find(|r| r.info.id == rule)?.info;
        match self.overrides.get(info.id) {
            Some(s) => *s,
            None => Some(info.severity),
        }
    }
}

fn rule_id(rule: &str) -> Option<&'static str> {
    RULES.iter().map(|r| r.info.id).find(|id| *id == rule)
}

/// Reads `RULE = error|warning|off` lines; `#` starts a comment.
impl FromStr for Config {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut config = Config::default();
        for (i, raw) in s.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap().trim();
            if text.is_empty() {
                continue;
            }
            let (rule, value) = text.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (rule, value) = (rule.trim(), value.trim());
            let id = rule_id(rule).ok_or_else(|| ConfigError::UnknownRule {
                line,
                rule: rule.to_string(),
            })?;
            let severity = match value {
                "error" => Some(Severity::Error),
                "warning" => Some(Severity::Warning),
                "off" => None,
                _ => {
                    return Err(ConfigError::UnknownSeverity {
                        line,
                        value: value.to_string(),
                    })
                }
            };
            config.overrides.insert(id, severity);
        }
        Ok(config)
    }
}

/// Runs every enabled rule. Diagnostics are sorted by unit id, then by
/// registry order.
pub fn validate(passage: &Passage, config: &Config) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (order, rule) in RULES.iter().enumerate() {
        let Some(severity) = config.severity(rule.info.id) else {
            continue;
        };
        let mut found = Vec::new();
        (rule.check)(passage, &mut found);
        out.extend(found.into_iter().map(|(unit, message)| {
            (
                order,
                Diagnostic {
                    rule: rule.info.id,
                    severity,
                    unit,
                    message,
                    yield_text: truncate(&passage.yield_text(unit), 40),
                },
            )
        }));
    }
    out.sort_by(|(a_order, a), (b_order, b)| {
        (a.unit, a_order, &a.message).cmp(&(b.unit, b_order, &b.message))
    });
    out.into_iter().map(|(_, d)| d).collect()
}

/// Whether any diagnostic has error severity.
pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

fn truncate(s: &str, max: usize) -> String {
    match s.char_indices().nth(max) {
        Some((i, _)) => s[..i].to_string(),
        None => s.to_string(),
    }
}

fn non_root(p: &Passage) -> impl Iterator<Item = &Unit> {
    p.units().iter().filter(|u| u.parent().is_some())
}

fn r1_top_level(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for e in p.get(p.root()).outgoing() {
        if !e
            .categories
            .base()
            .all(|c| matches!(c, Category::H | Category::L))
        {
            out.push((e.child, format!("top-level unit labeled {}", e.categories)));
        }
    }
}

fn r2_one_main_relation(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for u in p.units().iter().filter(|u| u.is_scene()) {
        let n = u
            .outgoing()
            .iter()
            .filter(|e| e.categories.has_main_relation())
            .count();
        if n != 1 {
            out.push((u.id(), format!("scene has {n} main relations")));
        }
    }
}

fn is_superparallel(u: &Unit) -> bool {
    u.outgoing()
        .iter()
        .any(|e| e.categories.contains(Category::H))
}

fn r3_center(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for u in non_root(p) {
        let cmr = u
            .outgoing()
            .iter()
            .any(|e| e.categories.contains(Category::Cmr));
        if !u.is_internal() || u.is_scene() || cmr || u.is_unanalyzable() || is_superparallel(u) {
            continue;
        }
        if u.outgoing().len() >= 2
            && !u
                .outgoing()
                .iter()
                .any(|e| e.categories.contains(Category::C))
        {
            out.push((
                u.id(),
                format!(
                    "non-scene unit with {} children has no C",
                    u.outgoing().len()
                ),
            ));
        }
    }
}

fn r4_linker(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for u in p.units().iter().filter(|u| u.id() != p.root()) {
        let has_h = u
            .outgoing()
            .iter()
            .any(|e| e.categories.contains(Category::H));
        if has_h {
            continue;
        }
        for e in u.outgoing() {
            if e.categories.contains(Category::L) {
                out.push((
                    e.child,
                    "linker without a parallel scene sibling".to_string(),
                ));
            }
        }
    }
}

fn r5_remote_function(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for e in p.edges().filter(|e| e.remote) {
        if e.categories.contains(Category::F) {
            out.push((
                e.child,
                format!("remote edge from unit {} carries F", e.parent),
            ));
        }
    }
    for u in non_root(p) {
        let function = u.incoming().is_some_and(|c| c.contains(Category::F));
        if function && u.remote_children().next().is_some() {
            out.push((u.id(), "function unit has remote children".to_string()));
        }
    }
}

fn r6_substantive_child(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for u in non_root(p).filter(|u| u.is_internal()) {
        let ok = u
            .primary_children()
            .any(|e| e.categories.base().any(|c| c != Category::F));
        if !ok {
            out.push((u.id(), "no non-remote child other than F".to_string()));
        }
    }
}

fn r7_adverbial(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for u in non_root(p).filter(|u| u.is_internal() && !u.is_scene()) {
        let has = |c| u.outgoing().iter().any(|e| e.categories.contains(c));
        let coordination = u.incoming().is_some_and(|c| c.contains(Category::C))
            && has(Category::D)
            && has(Category::C);
        if coordination {
            continue;
        }
        for e in u.outgoing() {
            if e.categories.contains(Category::D) {
                out.push((e.child, "adverbial outside a scene".to_string()));
            }
        }
    }
}

fn r8_cmr(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for e in p.edges() {
        if e.categories.contains(Category::Cmr) && !e.categories.has_main_relation() {
            out.push((e.child, format!("{} without P or S", e.categories)));
        }
    }
}

fn r9_unanalyzable(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for u in non_root(p).filter(|u| u.is_unanalyzable() && !u.is_terminal()) {
        out.push((u.id(), format!("unanalyzable unit is {}", u.kind())));
    }
}

fn r10_coverage(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    let mut claims = vec![0usize; p.tokens().len()];
    for u in p.units() {
        for &t in u.tokens() {
            claims[t] += 1;
        }
    }
    for t in p.tokens() {
        let n = claims[t.position];
        if !t.is_punct && n != 1 {
            out.push((
                p.root(),
                format!(
                    "token {} `{}` is covered by {n} terminals",
                    t.position, t.text
                ),
            ));
        }
    }
}

fn r11_connective(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for u in p.units() {
        let has = |c| u.outgoing().iter().any(|e| e.categories.contains(c));
        if has(Category::N) && (has(Category::E) || has(Category::Q)) {
            out.push((u.id(), "unit with a connector also has E or Q".to_string()));
        }
    }
}

fn r12_minimal_remote(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    let mut targets: Vec<UnitId> = p.edges().filter(|e| e.remote).map(|e| e.child).collect();
    targets.sort();
    targets.dedup();
    for t in targets {
        let u = p.get(t);
        if let Some(e) = u
            .primary_children()
            .find(|e| p.get(e.child).primary_yield() == u.primary_yield())
        {
            out.push((t, format!("child unit {} has the same yield", e.child)));
        }
    }
}

fn r13_scene_role(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    const ALLOWED: [Category; 4] = [Category::A, Category::E, Category::C, Category::H];
    for u in non_root(p).filter(|u| u.is_scene()) {
        let cats = u.incoming().expect("non-root");
        if !cats.base().all(|c| ALLOWED.contains(&c)) {
            out.push((u.id(), format!("scene labeled {cats}")));
        }
    }
}

fn w1_nested_parallel(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for u in non_root(p) {
        let h = u.incoming().is_some_and(|c| c.contains(Category::H));
        let only_hl = u.outgoing().iter().all(|e| {
            e.categories
                .base()
                .all(|c| matches!(c, Category::H | Category::L))
        });
        if h && u.is_internal() && only_hl {
            out.push((u.id(), "H unit holds only H and L units".to_string()));
        }
    }
}

fn w2_bare_remote(p: &Passage, out: &mut Vec<(UnitId, String)>) {
    for e in p.edges() {
        let secondary = e.remote || p.get(e.child).is_implicit();
        if secondary && e.categories.base().all(|c| c == Category::F) {
            let what = if e.remote { "remote" } else { "implicit" };
            out.push((
                e.child,
                format!("{what} unit labeled only {}", e.categories),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_passage;

    fn rules(src: &str) -> Vec<&'static str> {
        let p = parse_passage(src).unwrap();
        validate(&p, &Config::default())
            .into_iter()
            .map(|d| d.rule)
            .collect()
    }

    #[test]
    fn registry_is_complete() {
        let ids: Vec<_> = list_rules().into_iter().map(|r| r.id).collect();
        assert_eq!(
            ids,
            [
                "R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10", "R11", "R12", "R13",
                "W1", "W2"
            ]
        );
        assert!(list_rules().iter().all(|r| !r.guideline_anchor.is_empty()));
    }

    #[test]
    fn conforming_scene() {
        assert!(rules("[H [A John] [P kicked] [A [F the] [C ball]]] .").is_empty());
    }

    #[test]
    fn spec_examples() {
        assert_eq!(rules("[A John] [H [P left]]"), ["R1"]);
        assert_eq!(rules("[H [A John] [P walked] [S tired]]"), ["R2"]);
        assert_eq!(
            rules("[H [A I] [CMR [C wrote] [N and] [C recorded]] [A it]]"),
            ["R8"]
        );
    }

    #[test]
    fn adverbial_in_plain_elaborator_warns() {
        let src = "[H [F There] [S are] [A earrings] [A [R on] [C [F the] [C table] [E [D very] [C nice]]]]]";
        let p = parse_passage(src).unwrap();
        let d = validate(&p, &Config::default());
        assert!(d
            .iter()
            .any(|d| d.rule == "R7" && d.severity == Severity::Warning));
        assert!(!has_errors(&d), "{d:?}");
    }

    #[test]
    fn config_overrides_severity_only() {
        let p = parse_passage("[A John] [H [P left]]").unwrap();
        let config: Config = "# demote\nR1 = warning\nW1=off\n".parse().unwrap();
        let d = validate(&p, &config);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
        let off: Config = "R1 = off".parse().unwrap();
        assert!(validate(&p, &off).is_empty());
        assert!("R99 = off".parse::<Config>().is_err());
        assert!("R1 = loud".parse::<Config>().is_err());
        assert!("R1 error".parse::<Config>().is_err());
    }

    #[test]
    fn yield_text_is_truncated() {
        assert_eq!(truncate("abcdef", 3), "abc");
        assert_eq!(truncate("ab", 3), "ab");
    }
}
