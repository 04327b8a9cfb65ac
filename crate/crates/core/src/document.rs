//! Discourse-document ingestion: a line-oriented annotation format plus a
//! JSON mirror of the same schema, accepted interchangeably.
//!
//! ```text
//! title John hit Bill
//! entity John masc sg PERSON
//! entity Bill masc sg PERSON
//! rule HIT: hit(X,Y) ~> hurt(Y).
//! synonym hurt injured.
//! utterance U1 pred=hit Subj=John:name Obj=Bill:name
//! utterance U2 pred=injured Subj=?HE:pron:masc:sg:stressed coherence=Cause-Effect
//! expect U2.Subj = John felicity=ok discharge=contrast-in-candidates
//! ```
//!
//! `segment` on its own line marks the next utterance segment-initial.
//! Conjoined noun phrases are written `Jack+Bob:name`; they introduce a
//! group entity over the declared conjuncts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    Agreement, Entity, EntityId, Gender, Gf, LogicalForm, Mention, MentionKind, Number, Person,
    Sort, Utterance,
};
use crate::focus::DischargeStatus;
use crate::knowledge::{parse_rules, RuleParseError, RuleSet};
use crate::result::Felicity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: entity '{name}' is not declared")]
    UndeclaredEntity { line: usize, name: String },
    #[error("line {line}: {msg}")]
    BadAgreement { line: usize, msg: String },
    #[error(transparent)]
    Rule(#[from] RuleParseError),
    #[error("structured document: {0}")]
    Structured(String),
}

/// One annotated utterance with its label and optional coherence-relation
/// annotation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtteranceRecord {
    pub label: String,
    pub utterance: Utterance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherence: Option<String>,
}

/// Gold annotation for one pronoun position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub utterance: String,
    pub role: String,
    pub values: BTreeSet<EntityId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub felicity: Option<Felicity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discharge: Option<DischargeStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub garden_path: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak: Option<bool>,
}

/// A parsed discourse fixture.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscourseDocument {
    pub title: String,
    pub entities: Vec<Entity>,
    pub utterances: Vec<UtteranceRecord>,
    pub rules: RuleSet,
    pub expectations: Vec<Expectation>,
}

impl DiscourseDocument {
    pub fn entity(&self, id: &EntityId) -> Option<&Entity> {
        self.entities.iter().find(|e| &e.id == id)
    }

    pub fn utterance(&self, label: &str) -> Option<&UtteranceRecord> {
        self.utterances.iter().find(|u| u.label == label)
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> DocumentError {
    DocumentError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_gender(token: &str, line: usize) -> Result<Gender, DocumentError> {
    match token {
        "masc" => Ok(Gender::Masc),
        "fem" => Ok(Gender::Fem),
        "neut" => Ok(Gender::Neut),
        "unknown" => Ok(Gender::Unknown),
        other => Err(syntax(line, format!("unknown gender '{other}'"))),
    }
}

fn parse_number(token: &str, line: usize) -> Result<Number, DocumentError> {
    match token {
        "sg" => Ok(Number::Sg),
        "pl" => Ok(Number::Pl),
        other => Err(syntax(line, format!("unknown number '{other}'"))),
    }
}

fn parse_sort(token: &str, line: usize) -> Result<Sort, DocumentError> {
    match token {
        "PERSON" => Ok(Sort::Person),
        "PLACE" => Ok(Sort::Place),
        "THING" => Ok(Sort::Thing),
        "GROUP" => Err(DocumentError::BadAgreement {
            line,
            msg: "declare groups by conjoining members (A+B), not as entities".to_owned(),
        }),
        other => Err(syntax(line, format!("unknown sort '{other}'"))),
    }
}

fn render_gender(g: Gender) -> &'static str {
    match g {
        Gender::Masc => "masc",
        Gender::Fem => "fem",
        Gender::Neut => "neut",
        Gender::Unknown => "unknown",
    }
}

fn render_number(n: Number) -> &'static str {
    match n {
        Number::Sg => "sg",
        Number::Pl => "pl",
    }
}

fn role_to_gf(role: &str) -> Gf {
    match role {
        "Subj" => Gf::Subject,
        "Obj" => Gf::Object,
        "Obj2" => Gf::Object2,
        _ => Gf::Other,
    }
}

fn felicity_from_str(s: &str, line: usize) -> Result<Felicity, DocumentError> {
    match s {
        "ok" => Ok(Felicity::Ok),
        "ambiguous" => Ok(Felicity::Ambiguous),
        "infelicitous" => Ok(Felicity::Infelicitous),
        "garden-path" => Ok(Felicity::GardenPath),
        other => Err(syntax(line, format!("unknown felicity '{other}'"))),
    }
}

/// Shared gender of a conjunction, or unknown when mixed.
fn group_gender(members: &[&Entity]) -> Gender {
    let mut genders = members.iter().map(|e| e.gender);
    match genders.next() {
        Some(first) if genders.all(|g| g == first) => first,
        _ => Gender::Unknown,
    }
}

struct DocumentBuilder {
    doc: DiscourseDocument,
    rule_lines: String,
    pending_segment: bool,
}

impl DocumentBuilder {
    fn declared(&self, name: &str) -> Option<&Entity> {
        self.doc.entities.iter().find(|e| e.id.as_str() == name)
    }

    fn parse_entity_line(&mut self, rest: &str, line: usize) -> Result<(), DocumentError> {
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        if tokens.len() < 4 {
            return Err(syntax(line, "expected: entity <Name> <gender> <number> <SORT>"));
        }
        let name = tokens[0];
        if self.declared(name).is_some() {
            return Err(syntax(line, format!("entity '{name}' declared twice")));
        }
        let gender = parse_gender(tokens[1], line)?;
        let number = parse_number(tokens[2], line)?;
        let sort = parse_sort(tokens[3], line)?;
        let mut entity = Entity::new(name, sort, gender, number);
        for extra in &tokens[4..] {
            match *extra {
                "person=1" => entity.person = Person::First,
                "person=2" => entity.person = Person::Second,
                "person=3" => entity.person = Person::Third,
                other => return Err(syntax(line, format!("unknown entity flag '{other}'"))),
            }
        }
        self.doc.entities.push(entity);
        Ok(())
    }

    fn group_mention(&mut self, spec: &str, gf: Gf, line: usize) -> Result<Mention, DocumentError> {
        let (names_part, kind_part) = spec
            .split_once(':')
            .ok_or_else(|| syntax(line, format!("expected ':kind' in '{spec}'")))?;
        if kind_part != "name" && kind_part != "def" {
            return Err(syntax(line, "conjoined phrases must be ':name' or ':def'"));
        }
        let names: Vec<&str> = names_part.split('+').collect();
        let mut members = Vec::new();
        for name in &names {
            let entity = self.declared(name).ok_or_else(|| DocumentError::UndeclaredEntity {
                line,
                name: (*name).to_owned(),
            })?;
            if entity.sort == Sort::Group {
                return Err(DocumentError::BadAgreement {
                    line,
                    msg: format!("conjunct '{name}' is itself a group"),
                });
            }
            members.push(entity);
        }
        let gender = group_gender(&members);
        let member_ids: Vec<EntityId> = members.iter().map(|e| e.id.clone()).collect();
        let group_id = names_part.to_owned();
        if self.declared(&group_id).is_none() {
            self.doc
                .entities
                .push(Entity::group(group_id.clone(), member_ids, gender));
        }
        Ok(Mention {
            surface: group_id.clone(),
            kind: MentionKind::DefiniteNp,
            stressed: false,
            gf,
            agreement: Agreement {
                gender,
                number: Number::Pl,
                person: Person::Third,
            },
            referent: Some(EntityId::new(group_id)),
        })
    }

    fn parse_arg(&mut self, role: &str, spec: &str, line: usize) -> Result<Mention, DocumentError> {
        let gf = role_to_gf(role);
        if let Some(pron) = spec.strip_prefix('?') {
            let parts: Vec<&str> = pron.split(':').collect();
            if parts.len() < 4 {
                return Err(syntax(
                    line,
                    format!("expected ?surface:kind:gender:number in '{spec}'"),
                ));
            }
            let kind = match parts[1] {
                "pron" => MentionKind::Pronoun,
                "zero" => MentionKind::ZeroPronominal,
                other => return Err(syntax(line, format!("unknown pronoun kind '{other}'"))),
            };
            let gender = parse_gender(parts[2], line)?;
            let number = parse_number(parts[3], line)?;
            let mut stressed = false;
            let mut person = Person::Third;
            for flag in &parts[4..] {
                match *flag {
                    "stressed" => stressed = true,
                    "p1" => person = Person::First,
                    "p2" => person = Person::Second,
                    "p3" => person = Person::Third,
                    other => return Err(syntax(line, format!("unknown pronoun flag '{other}'"))),
                }
            }
            if stressed && kind != MentionKind::Pronoun {
                return Err(DocumentError::BadAgreement {
                    line,
                    msg: "only overt pronouns can be stressed".to_owned(),
                });
            }
            return Ok(Mention {
                surface: parts[0].to_owned(),
                kind,
                stressed,
                gf,
                agreement: Agreement {
                    gender,
                    number,
                    person,
                },
                referent: None,
            });
        }
        if spec.split_once(':').map(|(n, _)| n.contains('+')) == Some(true) {
            return self.group_mention(spec, gf, line);
        }
        let (name, kind_token) = spec
            .split_once(':')
            .ok_or_else(|| syntax(line, format!("expected 'Name:kind' in '{spec}'")))?;
        let kind = match kind_token {
            "name" | "def" => MentionKind::DefiniteNp,
            "indef" => MentionKind::IndefiniteNp,
            other => return Err(syntax(line, format!("unknown mention kind '{other}'"))),
        };
        let entity = self
            .declared(name)
            .ok_or_else(|| DocumentError::UndeclaredEntity {
                line,
                name: name.to_owned(),
            })?;
        Ok(Mention {
            surface: name.to_owned(),
            kind,
            stressed: false,
            gf,
            agreement: Agreement {
                gender: entity.gender,
                number: entity.number,
                person: entity.person,
            },
            referent: Some(entity.id.clone()),
        })
    }

    fn parse_utterance_line(&mut self, rest: &str, line: usize) -> Result<(), DocumentError> {
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        let Some((label, arg_tokens)) = tokens.split_first() else {
            return Err(syntax(line, "expected: utterance <Label> pred=... <Role>=..."));
        };
        let index = self.doc.utterances.len() + 1;
        let expected_label = format!("U{index}");
        if *label != expected_label {
            return Err(syntax(
                line,
                format!("utterance labels must be contiguous; expected {expected_label}, found {label}"),
            ));
        }
        let mut predicate = None;
        let mut negated = false;
        let mut coherence = None;
        let mut args: Vec<(String, Mention)> = Vec::new();
        for token in arg_tokens {
            if *token == "neg" {
                negated = true;
                continue;
            }
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| syntax(line, format!("expected key=value, found '{token}'")))?;
            match key {
                "pred" => predicate = Some(value.to_owned()),
                "coherence" => coherence = Some(value.to_owned()),
                role => {
                    if args.iter().any(|(r, _)| r == role) {
                        return Err(syntax(line, format!("duplicate role label {role}")));
                    }
                    let mention = self.parse_arg(role, value, line)?;
                    args.push((role.to_owned(), mention));
                }
            }
        }
        let predicate = predicate.ok_or_else(|| syntax(line, "utterance needs pred=..."))?;
        self.doc.utterances.push(UtteranceRecord {
            label: (*label).to_owned(),
            utterance: Utterance {
                index,
                lf: LogicalForm {
                    predicate,
                    args,
                    negated,
                },
                segment_initial: std::mem::take(&mut self.pending_segment),
            },
            coherence,
        });
        Ok(())
    }

    fn parse_expect_line(&mut self, rest: &str, line: usize) -> Result<(), DocumentError> {
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        if tokens.len() < 3 || tokens[1] != "=" {
            return Err(syntax(line, "expected: expect <Label>.<Role> = <value> [flags]"));
        }
        let (utterance, role) = tokens[0]
            .split_once('.')
            .ok_or_else(|| syntax(line, "expected <Label>.<Role>"))?;
        if self.doc.utterance(utterance).is_none() {
            return Err(syntax(line, format!("expectation targets unknown utterance {utterance}")));
        }
        let mut values = BTreeSet::new();
        let value_token = tokens[2];
        let names: Vec<&str> = if let Some(inner) =
            value_token.strip_prefix('{').and_then(|v| v.strip_suffix('}'))
        {
            inner.split(',').map(str::trim).collect()
        } else {
            vec![value_token]
        };
        for name in names {
            if self.declared(name).is_none() {
                return Err(DocumentError::UndeclaredEntity {
                    line,
                    name: name.to_owned(),
                });
            }
            values.insert(EntityId::new(name));
        }
        let mut expectation = Expectation {
            utterance: utterance.to_owned(),
            role: role.to_owned(),
            values,
            felicity: None,
            discharge: None,
            garden_path: None,
            weak: None,
        };
        for flag in &tokens[3..] {
            let (key, value) = flag
                .split_once('=')
                .ok_or_else(|| syntax(line, format!("expected key=value, found '{flag}'")))?;
            match key {
                "felicity" => expectation.felicity = Some(felicity_from_str(value, line)?),
                "discharge" => {
                    expectation.discharge = Some(DischargeStatus::parse(value).ok_or_else(
                        || syntax(line, format!("unknown discharge status '{value}'")),
                    )?)
                }
                "garden-path" => expectation.garden_path = Some(value == "true"),
                "weak" => expectation.weak = Some(value == "true"),
                other => return Err(syntax(line, format!("unknown expectation flag '{other}'"))),
            }
        }
        self.doc.expectations.push(expectation);
        Ok(())
    }
}

/// Structural checks shared with the JSON mirror, which bypasses the
/// line parser: declared unique entities, contiguous indices, unique
/// role labels, resolved non-pronouns.
fn validate_document(doc: &DiscourseDocument) -> Result<(), DocumentError> {
    if doc.utterances.is_empty() {
        return Err(syntax(1, "document contains no utterances"));
    }
    let mut seen_entities = BTreeSet::new();
    for entity in &doc.entities {
        if !seen_entities.insert(entity.id.clone()) {
            return Err(syntax(1, format!("entity '{}' declared twice", entity.id)));
        }
    }
    for (i, record) in doc.utterances.iter().enumerate() {
        let line = i + 1;
        if record.utterance.index != i + 1 {
            return Err(syntax(
                line,
                format!("utterance {} has index {}, expected {}", record.label, record.utterance.index, i + 1),
            ));
        }
        let mut seen_roles = BTreeSet::new();
        for (role, mention) in &record.utterance.lf.args {
            if !seen_roles.insert(role.clone()) {
                return Err(syntax(line, format!("duplicate role label {role}")));
            }
            match &mention.referent {
                Some(id) if !seen_entities.contains(id) => {
                    return Err(DocumentError::UndeclaredEntity {
                        line,
                        name: id.to_string(),
                    });
                }
                None if !mention.kind.is_pronominal() => {
                    return Err(DocumentError::BadAgreement {
                        line,
                        msg: format!("non-pronoun mention '{}' lacks a referent", mention.surface),
                    });
                }
                _ => {}
            }
            if mention.stressed && mention.kind != MentionKind::Pronoun {
                return Err(DocumentError::BadAgreement {
                    line,
                    msg: "only overt pronouns can be stressed".to_owned(),
                });
            }
        }
    }
    Ok(())
}

/// Parse a discourse document from either the line format or its JSON
/// mirror.
pub fn parse_document(text: &str) -> Result<DiscourseDocument, DocumentError> {
    if text.trim_start().starts_with('{') {
        let doc: DiscourseDocument = serde_json::from_str(text)
            .map_err(|e| DocumentError::Structured(e.to_string()))?;
        validate_document(&doc)?;
        return Ok(doc);
    }
    let mut builder = DocumentBuilder {
        doc: DiscourseDocument::default(),
        rule_lines: String::new(),
        pending_segment: false,
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("title ") {
            builder.doc.title = rest.trim().to_owned();
        } else if let Some(rest) = trimmed.strip_prefix("entity ") {
            builder.parse_entity_line(rest, line)?;
        } else if trimmed.starts_with("rule ") || trimmed.starts_with("synonym ") {
            builder.rule_lines.push_str(trimmed);
            builder.rule_lines.push('\n');
        } else if trimmed == "segment" {
            builder.pending_segment = true;
        } else if let Some(rest) = trimmed.strip_prefix("utterance ") {
            builder.parse_utterance_line(rest, line)?;
        } else if let Some(rest) = trimmed.strip_prefix("expect ") {
            builder.parse_expect_line(rest, line)?;
        } else {
            return Err(syntax(line, format!("unrecognized directive: '{trimmed}'")));
        }
    }
    if builder.doc.utterances.is_empty() {
        return Err(syntax(1, "document contains no utterances"));
    }
    builder.doc.rules = parse_rules(&builder.rule_lines)?;
    validate_document(&builder.doc)?;
    Ok(builder.doc)
}

fn render_mention(mention: &Mention, doc: &DiscourseDocument) -> String {
    if mention.is_unresolved_pronoun() || mention.kind.is_pronominal() {
        let kind = match mention.kind {
            MentionKind::Pronoun => "pron",
            MentionKind::ZeroPronominal => "zero",
            _ => unreachable!(),
        };
        let mut out = format!(
            "?{}:{}:{}:{}",
            mention.surface,
            kind,
            render_gender(mention.agreement.gender),
            render_number(mention.agreement.number)
        );
        if mention.stressed {
            out.push_str(":stressed");
        }
        match mention.agreement.person {
            Person::First => out.push_str(":p1"),
            Person::Second => out.push_str(":p2"),
            Person::Third => {}
        }
        return out;
    }
    let referent = mention.referent.as_ref().expect("non-pronouns are resolved");
    let is_group = doc
        .entity(referent)
        .is_some_and(|e| e.sort == Sort::Group);
    let kind = match mention.kind {
        MentionKind::IndefiniteNp => "indef",
        _ => "name",
    };
    if is_group {
        format!("{referent}:name")
    } else {
        format!("{referent}:{kind}")
    }
}

/// Canonical line-format rendering; parsing the output reproduces the
/// document.
pub fn render_document(doc: &DiscourseDocument) -> String {
    let mut out = String::new();
    if !doc.title.is_empty() {
        out.push_str(&format!("title {}\n", doc.title));
    }
    for entity in &doc.entities {
        if entity.sort == Sort::Group || entity.accommodated {
            continue;
        }
        out.push_str(&format!(
            "entity {} {} {} {}",
            entity.id,
            render_gender(entity.gender),
            render_number(entity.number),
            entity.sort
        ));
        match entity.person {
            Person::First => out.push_str(" person=1"),
            Person::Second => out.push_str(" person=2"),
            Person::Third => {}
        }
        out.push('\n');
    }
    out.push_str(&doc.rules.pretty());
    for record in &doc.utterances {
        if record.utterance.segment_initial {
            out.push_str("segment\n");
        }
        out.push_str(&format!("utterance {} pred={}", record.label, record.utterance.lf.predicate));
        if record.utterance.lf.negated {
            out.push_str(" neg");
        }
        for (role, mention) in &record.utterance.lf.args {
            out.push_str(&format!(" {role}={}", render_mention(mention, doc)));
        }
        if let Some(coherence) = &record.coherence {
            out.push_str(&format!(" coherence={coherence}"));
        }
        out.push('\n');
    }
    for e in &doc.expectations {
        let value = if e.values.len() == 1 {
            e.values.iter().next().unwrap().to_string()
        } else {
            let names: Vec<&str> = e.values.iter().map(|v| v.as_str()).collect();
            format!("{{{}}}", names.join(","))
        };
        out.push_str(&format!("expect {}.{} = {value}", e.utterance, e.role));
        if let Some(f) = e.felicity {
            out.push_str(&format!(" felicity={f}"));
        }
        if let Some(d) = e.discharge {
            out.push_str(&format!(" discharge={d}"));
        }
        if let Some(g) = e.garden_path {
            out.push_str(&format!(" garden-path={g}"));
        }
        if let Some(w) = e.weak {
            out.push_str(&format!(" weak={w}"));
        }
        out.push('\n');
    }
    out
}
