//! Commonsense layer: defeasible rules of the form "if p then normally q",
//! a single-step forward evaluator, and the WK preference class built on it.
//!
//! Rule DSL, one statement per line:
//!
//! ```text
//! # comment
//! rule HIT: hit(X,Y) ~> hurt(Y).
//! rule REP bridging: call_republican(X,Y) ~> insult(X,Y).
//! synonym hurt injured.
//! ```
//!
//! Variables start uppercase, predicates and constants lowercase.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{Entity, EntityId, EntityRegistry};
use crate::order::{PrefClass, StrictPartialOrder, SupportSet};

/// Ground term: a discourse entity or a constant symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Entity(EntityId),
    Atom(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Entity(id) => write!(f, "{id}"),
            Term::Atom(a) => f.write_str(a),
        }
    }
}

/// A ground proposition. Facts in the discourse model contain no
/// variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Proposition {
    pub predicate: String,
    pub args: Vec<Term>,
    #[serde(default)]
    pub negated: bool,
}

impl Proposition {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Proposition {
            predicate: predicate.into(),
            args,
            negated: false,
        }
    }

    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        let args: Vec<String> = self.args.iter().map(Term::to_string).collect();
        write!(f, "{}({})", self.predicate, args.join(", "))
    }
}

/// Argument of a rule pattern: variable or ground term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatTerm {
    Var(String),
    Ground(Term),
}

impl fmt::Display for PatTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatTerm::Var(v) => f.write_str(v),
            PatTerm::Ground(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulePattern {
    pub predicate: String,
    pub args: Vec<PatTerm>,
}

impl fmt::Display for RulePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(PatTerm::to_string).collect();
        write!(f, "{}({})", self.predicate, args.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Causal,
    Bridging,
}

/// "if antecedent then normally consequent". Every consequent variable
/// must occur in the antecedent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefeasibleRule {
    pub id: String,
    pub antecedent: RulePattern,
    pub consequent: RulePattern,
    pub kind: RuleKind,
}

/// Parsed rule file: rules plus the predicate synonym lexicon.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub rules: Vec<DefeasibleRule>,
    /// Raw synonym declarations, in source order.
    pub synonyms: Vec<(String, String)>,
}

impl RuleSet {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.synonyms.is_empty()
    }

    /// Canonical representative of a predicate's synonym class (the
    /// lexicographically smallest member).
    pub fn canon(&self, predicate: &str) -> String {
        // Union the synonym classes, then pick the smallest member.
        let mut class: BTreeSet<&str> = BTreeSet::from([predicate]);
        let mut grew = true;
        while grew {
            grew = false;
            for (a, b) in &self.synonyms {
                if class.contains(a.as_str()) && class.insert(b) {
                    grew = true;
                }
                if class.contains(b.as_str()) && class.insert(a) {
                    grew = true;
                }
            }
        }
        (*class.iter().next().expect("class contains predicate")).to_owned()
    }

    pub fn same_predicate(&self, a: &str, b: &str) -> bool {
        a == b || self.canon(a) == self.canon(b)
    }

    /// Canonical text form; parsing the output reproduces the rule set.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            let kind = match rule.kind {
                RuleKind::Causal => "",
                RuleKind::Bridging => " bridging",
            };
            out.push_str(&format!(
                "rule {}{}: {} ~> {}.\n",
                rule.id, kind, rule.antecedent, rule.consequent
            ));
        }
        for (a, b) in &self.synonyms {
            out.push_str(&format!("synonym {a} {b}.\n"));
        }
        out
    }

    /// Merge another rule set into this one (documents may combine inline
    /// rules with an external rule file).
    pub fn extend(&mut self, other: RuleSet) -> Result<(), RuleParseError> {
        for rule in other.rules {
            if self.rules.iter().any(|r| r.id == rule.id) {
                return Err(RuleParseError::DuplicateRuleId { id: rule.id });
            }
            self.rules.push(rule);
        }
        for syn in other.synonyms {
            if !self.synonyms.contains(&syn) {
                self.synonyms.push(syn);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate rule id {id}")]
    DuplicateRuleId { id: String },
}

/// Parse rule-DSL source into a rule set.
pub fn parse_rules(text: &str) -> Result<RuleSet, RuleParseError> {
    let mut set = RuleSet::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line_number = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = raw.len() - raw.trim_start().len() + 1;
        if let Some(rest) = trimmed.strip_prefix("rule ") {
            let rule = parse_rule_line(rest, line_number, col)?;
            if set.rules.iter().any(|r| r.id == rule.id) {
                return Err(RuleParseError::DuplicateRuleId { id: rule.id });
            }
            set.rules.push(rule);
        } else if let Some(rest) = trimmed.strip_prefix("synonym ") {
            let body = rest.trim_end();
            let body = body.strip_suffix('.').ok_or_else(|| syntax(
                line_number,
                col,
                "synonym declaration must end with '.'",
            ))?;
            let words: Vec<&str> = body.split_whitespace().collect();
            if words.len() != 2 {
                return Err(syntax(line_number, col, "expected: synonym <pred> <pred>."));
            }
            for w in &words {
                if !is_lower_ident(w) {
                    return Err(syntax(
                        line_number,
                        col,
                        &format!("predicate '{w}' must be a lowercase identifier"),
                    ));
                }
            }
            set.synonyms.push((words[0].to_owned(), words[1].to_owned()));
        } else {
            return Err(syntax(
                line_number,
                col,
                "expected 'rule' or 'synonym' declaration",
            ));
        }
    }
    Ok(set)
}

fn syntax(line: usize, col: usize, msg: &str) -> RuleParseError {
    RuleParseError::Syntax {
        line,
        col,
        msg: msg.to_owned(),
    }
}

fn is_lower_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_upper_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_rule_line(rest: &str, line: usize, col: usize) -> Result<DefeasibleRule, RuleParseError> {
    let (head, body) = rest
        .split_once(':')
        .ok_or_else(|| syntax(line, col, "expected ':' after rule id"))?;
    let head_words: Vec<&str> = head.split_whitespace().collect();
    let (id, kind) = match head_words.as_slice() {
        [id] => (*id, RuleKind::Causal),
        [id, "causal"] => (*id, RuleKind::Causal),
        [id, "bridging"] => (*id, RuleKind::Bridging),
        _ => return Err(syntax(line, col, "expected: rule <ID> [bridging]: ...")),
    };
    if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(syntax(line, col, &format!("invalid rule id '{id}'")));
    }
    let body = body.trim();
    let body = body
        .strip_suffix('.')
        .ok_or_else(|| syntax(line, col, "rule must end with '.'"))?;
    let (ant_src, cons_src) = body
        .split_once("~>")
        .ok_or_else(|| syntax(line, col, "expected '~>' between antecedent and consequent"))?;
    let antecedent = parse_pattern(ant_src.trim(), line, col)?;
    let consequent = parse_pattern(cons_src.trim(), line, col)?;

    let ant_vars: BTreeSet<&String> = antecedent
        .args
        .iter()
        .filter_map(|a| match a {
            PatTerm::Var(v) => Some(v),
            PatTerm::Ground(_) => None,
        })
        .collect();
    for arg in &consequent.args {
        if let PatTerm::Var(v) = arg {
            if !ant_vars.contains(v) {
                return Err(syntax(
                    line,
                    col,
                    &format!("unbound variable {v} in consequent"),
                ));
            }
        }
    }
    Ok(DefeasibleRule {
        id: id.to_owned(),
        antecedent,
        consequent,
        kind,
    })
}

fn parse_pattern(src: &str, line: usize, col: usize) -> Result<RulePattern, RuleParseError> {
    let open = src
        .find('(')
        .ok_or_else(|| syntax(line, col, "expected '(' in pattern"))?;
    let close = src
        .rfind(')')
        .ok_or_else(|| syntax(line, col, "expected ')' in pattern"))?;
    if close != src.len() - 1 || close < open {
        return Err(syntax(line, col, "malformed pattern parentheses"));
    }
    let predicate = src[..open].trim();
    if !is_lower_ident(predicate) {
        return Err(syntax(
            line,
            col,
            &format!("predicate '{predicate}' must be a lowercase identifier"),
        ));
    }
    let mut args = Vec::new();
    let inner = src[open + 1..close].trim();
    if !inner.is_empty() {
        for piece in inner.split(',') {
            let token = piece.trim();
            if is_upper_ident(token) {
                args.push(PatTerm::Var(token.to_owned()));
            } else if is_lower_ident(token) {
                args.push(PatTerm::Ground(Term::Atom(token.to_owned())));
            } else {
                return Err(syntax(line, col, &format!("invalid argument '{token}'")));
            }
        }
    }
    Ok(RulePattern {
        predicate: predicate.to_owned(),
        args,
    })
}

/// Records appended to the discourse model by presupposition
/// accommodation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AccommodationRecord {
    /// A contrasting proposition, e.g. "Mary is not from Louisiana".
    ContrastingProposition { proposition: Proposition },
    /// A pending question with the focused position(s) open.
    PendingQuestion { pattern: ContentPattern },
    /// Entities silently added to the attentional state.
    AccommodatedEntities { entities: Vec<Entity> },
    /// A bridging assumption: the consequent is taken to follow from an
    /// already asserted antecedent.
    BridgingAssumption {
        antecedent: Proposition,
        consequent: Proposition,
    },
}

impl fmt::Display for AccommodationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccommodationRecord::ContrastingProposition { proposition } => {
                write!(f, "contrasting proposition {proposition}")
            }
            AccommodationRecord::PendingQuestion { pattern } => {
                write!(f, "pending question {pattern}")
            }
            AccommodationRecord::AccommodatedEntities { entities } => {
                let names: Vec<&str> = entities.iter().map(|e| e.id.as_str()).collect();
                write!(f, "accommodated entities {{{}}}", names.join(", "))
            }
            AccommodationRecord::BridgingAssumption {
                antecedent,
                consequent,
            } => write!(f, "bridging assumption {antecedent} ~> {consequent}"),
        }
    }
}

/// The structured information state: asserted facts, accommodation
/// records, and the entity registry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscourseModel {
    pub facts: BTreeSet<Proposition>,
    pub accommodated: Vec<AccommodationRecord>,
    pub entities: EntityRegistry,
}

impl DiscourseModel {
    pub fn with_entities<I: IntoIterator<Item = Entity>>(entities: I) -> Self {
        DiscourseModel {
            facts: BTreeSet::new(),
            accommodated: Vec::new(),
            entities: entities.into_iter().map(|e| (e.id.clone(), e)).collect(),
        }
    }

    pub fn assert_fact(&mut self, fact: Proposition) {
        debug_assert!(
            !fact.predicate.is_empty(),
            "facts must carry a predicate symbol"
        );
        self.facts.insert(fact);
    }

    pub fn entity(&self, id: &EntityId) -> Option<&Entity> {
        self.entities.get(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivationStatus {
    Asserted,
    DefeasiblyDerived,
    Underivable,
}

/// Outcome of trying to establish a goal from the discourse model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub goal: Proposition,
    pub status: DerivationStatus,
    /// Rule id and variable binding, present iff defeasibly derived.
    pub via: Option<(String, BTreeMap<String, Term>)>,
}

impl Derivation {
    pub fn succeeded(&self) -> bool {
        !matches!(self.status, DerivationStatus::Underivable)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            DerivationStatus::Asserted => write!(f, "{} (asserted)", self.goal),
            DerivationStatus::DefeasiblyDerived => {
                let via = self
                    .via
                    .as_ref()
                    .map(|(id, _)| id.as_str())
                    .unwrap_or("?");
                write!(f, "{} (via {via})", self.goal)
            }
            DerivationStatus::Underivable => write!(f, "{} (underivable)", self.goal),
        }
    }
}

/// Single forward step: the goal is asserted, or some rule instance whose
/// antecedent is an asserted fact yields it. No rule chaining.
pub fn derive(model: &DiscourseModel, rules: &RuleSet, goal: &Proposition) -> Derivation {
    if model
        .facts
        .iter()
        .any(|f| ground_match(rules, f, goal))
    {
        return Derivation {
            goal: goal.clone(),
            status: DerivationStatus::Asserted,
            via: None,
        };
    }
    if !goal.negated {
        for rule in &rules.rules {
            if let Some(binding) = rule_yields(rules, rule, goal, model) {
                return Derivation {
                    goal: goal.clone(),
                    status: DerivationStatus::DefeasiblyDerived,
                    via: Some((rule.id.clone(), binding)),
                };
            }
        }
    }
    Derivation {
        goal: goal.clone(),
        status: DerivationStatus::Underivable,
        via: None,
    }
}

fn ground_match(rules: &RuleSet, fact: &Proposition, goal: &Proposition) -> bool {
    fact.negated == goal.negated
        && fact.args == goal.args
        && rules.same_predicate(&fact.predicate, &goal.predicate)
}

fn rule_yields(
    rules: &RuleSet,
    rule: &DefeasibleRule,
    goal: &Proposition,
    model: &DiscourseModel,
) -> Option<BTreeMap<String, Term>> {
    if !rules.same_predicate(&rule.consequent.predicate, &goal.predicate)
        || rule.consequent.args.len() != goal.args.len()
    {
        return None;
    }
    let mut binding = BTreeMap::new();
    for (pat, term) in rule.consequent.args.iter().zip(&goal.args) {
        if !bind(&mut binding, pat, term) {
            return None;
        }
    }
    // The antecedent must be an asserted fact under some extension of the
    // binding.
    for fact in &model.facts {
        if fact.negated
            || !rules.same_predicate(&fact.predicate, &rule.antecedent.predicate)
            || fact.args.len() != rule.antecedent.args.len()
        {
            continue;
        }
        let mut extended = binding.clone();
        if rule
            .antecedent
            .args
            .iter()
            .zip(&fact.args)
            .all(|(pat, term)| bind(&mut extended, pat, term))
        {
            return Some(extended);
        }
    }
    None
}

fn bind(binding: &mut BTreeMap<String, Term>, pattern: &PatTerm, term: &Term) -> bool {
    match pattern {
        PatTerm::Ground(g) => g == term,
        PatTerm::Var(v) => match binding.get(v) {
            Some(bound) => bound == term,
            None => {
                binding.insert(v.clone(), term.clone());
                true
            }
        },
    }
}

/// Slot of a content pattern: the focused hole, an unconstrained
/// position, or a fixed term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    Hole,
    Any,
    Fixed(Term),
}

/// A proposition schema with abstracted positions. Instantiating the
/// holes yields the alternative propositions of a focus constraint, or
/// the per-candidate goals of the WK preference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContentPattern {
    pub predicate: String,
    pub slots: Vec<Slot>,
    #[serde(default)]
    pub negated: bool,
}

impl ContentPattern {
    pub fn hole_count(&self) -> usize {
        self.slots.iter().filter(|s| matches!(s, Slot::Hole)).count()
    }

    /// Fill the holes, in order, with the given entities. Remaining `Any`
    /// slots stay open, so the result is a query rather than a ground
    /// proposition when wildcards are present.
    pub fn fill(&self, fillers: &[EntityId]) -> ContentPattern {
        let mut next = 0usize;
        let slots = self
            .slots
            .iter()
            .map(|slot| match slot {
                Slot::Hole => {
                    let filler = fillers.get(next).cloned();
                    next += 1;
                    match filler {
                        Some(id) => Slot::Fixed(Term::Entity(id)),
                        None => Slot::Hole,
                    }
                }
                other => other.clone(),
            })
            .collect();
        ContentPattern {
            predicate: self.predicate.clone(),
            slots,
            negated: self.negated,
        }
    }

    /// Ground proposition, if no open slots remain.
    pub fn to_proposition(&self) -> Option<Proposition> {
        let mut args = Vec::new();
        for slot in &self.slots {
            match slot {
                Slot::Fixed(t) => args.push(t.clone()),
                Slot::Hole | Slot::Any => return None,
            }
        }
        Some(Proposition {
            predicate: self.predicate.clone(),
            args,
            negated: self.negated,
        })
    }

    pub fn negate(&self) -> ContentPattern {
        let mut out = self.clone();
        out.negated = !out.negated;
        out
    }
}

impl fmt::Display for ContentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        let args: Vec<String> = self
            .slots
            .iter()
            .map(|s| match s {
                Slot::Hole => "?".to_owned(),
                Slot::Any => "_".to_owned(),
                Slot::Fixed(t) => t.to_string(),
            })
            .collect();
        write!(f, "{}({})", self.predicate, args.join(", "))
    }
}

/// Derive a possibly open query: open slots match anything; the returned
/// derivation's goal is the ground witness found. Used when a content
/// pattern still contains wildcard positions.
pub fn derive_query(
    model: &DiscourseModel,
    rules: &RuleSet,
    query: &ContentPattern,
) -> Derivation {
    if let Some(goal) = query.to_proposition() {
        return derive(model, rules, &goal);
    }
    // Asserted witness.
    for fact in &model.facts {
        if fact.negated == query.negated
            && rules.same_predicate(&fact.predicate, &query.predicate)
            && fact.args.len() == query.slots.len()
            && query
                .slots
                .iter()
                .zip(&fact.args)
                .all(|(slot, term)| match slot {
                    Slot::Fixed(t) => t == term,
                    Slot::Hole | Slot::Any => true,
                })
        {
            return Derivation {
                goal: fact.clone(),
                status: DerivationStatus::Asserted,
                via: None,
            };
        }
    }
    // Defeasibly derived witness: unify the consequent with the query,
    // then ground the antecedent against the facts.
    if !query.negated {
        for rule in &rules.rules {
            if !rules.same_predicate(&rule.consequent.predicate, &query.predicate)
                || rule.consequent.args.len() != query.slots.len()
            {
                continue;
            }
            let mut binding = BTreeMap::new();
            let unifies = rule
                .consequent
                .args
                .iter()
                .zip(&query.slots)
                .all(|(pat, slot)| match slot {
                    Slot::Fixed(t) => bind(&mut binding, pat, t),
                    Slot::Hole | Slot::Any => true,
                });
            if !unifies {
                continue;
            }
            for fact in &model.facts {
                if fact.negated
                    || !rules.same_predicate(&fact.predicate, &rule.antecedent.predicate)
                    || fact.args.len() != rule.antecedent.args.len()
                {
                    continue;
                }
                let mut extended = binding.clone();
                if rule
                    .antecedent
                    .args
                    .iter()
                    .zip(&fact.args)
                    .all(|(pat, term)| bind(&mut extended, pat, term))
                {
                    // Ground the consequent under the full binding; the
                    // fixed slots were already checked.
                    let mut args = Vec::new();
                    let mut ground = true;
                    for pat in &rule.consequent.args {
                        match pat {
                            PatTerm::Ground(t) => args.push(t.clone()),
                            PatTerm::Var(v) => match extended.get(v) {
                                Some(t) => args.push(t.clone()),
                                None => {
                                    ground = false;
                                    break;
                                }
                            },
                        }
                    }
                    if ground {
                        return Derivation {
                            goal: Proposition {
                                predicate: rule.consequent.predicate.clone(),
                                args,
                                negated: false,
                            },
                            status: DerivationStatus::DefeasiblyDerived,
                            via: Some((rule.id.clone(), extended)),
                        };
                    }
                }
            }
        }
    }
    let fallback = ContentPattern {
        predicate: query.predicate.clone(),
        slots: query.slots.clone(),
        negated: query.negated,
    };
    Derivation {
        goal: Proposition {
            predicate: fallback.predicate,
            args: fallback
                .slots
                .iter()
                .map(|s| match s {
                    Slot::Fixed(t) => t.clone(),
                    Slot::Hole | Slot::Any => Term::Atom("_".to_owned()),
                })
                .collect(),
            negated: query.negated,
        },
        status: DerivationStatus::Underivable,
        via: None,
    }
}

/// Per-candidate derivation outcomes for a content pattern with a single
/// hole (other unresolved positions may be wildcards).
pub fn wk_derivations(
    candidates: &BTreeSet<EntityId>,
    content: &ContentPattern,
    model: &DiscourseModel,
    rules: &RuleSet,
) -> BTreeMap<EntityId, Derivation> {
    candidates
        .iter()
        .map(|candidate| {
            let query = content.fill(std::slice::from_ref(candidate));
            (candidate.clone(), derive_query(model, rules, &query))
        })
        .collect()
}

/// The WK preference class: a candidate whose instantiation of the
/// utterance content is derivable is preferred over one whose
/// instantiation is not. Symmetric derivations distinguish nothing and
/// yield an empty order.
pub fn wk_preference(
    candidates: &BTreeSet<EntityId>,
    content: &ContentPattern,
    model: &DiscourseModel,
    rules: &RuleSet,
) -> StrictPartialOrder {
    let derivations = wk_derivations(candidates, content, model, rules);
    let mut order = StrictPartialOrder::new(candidates.iter().cloned());
    let support: SupportSet = [PrefClass::Wk].into_iter().collect();
    for (x, dx) in &derivations {
        if !dx.succeeded() {
            continue;
        }
        for (y, dy) in &derivations {
            if x != y && !dy.succeeded() {
                order
                    .add_pair(x, y, &support)
                    .expect("derived-over-underivable pairs cannot cycle");
            }
        }
    }
    order
}
