//! Running a discourse document: fold context transitions over the
//! utterances, resolving each pronoun against the context as it stood
//! before its utterance, and emit a deterministic report.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::attention::{advance, CenterRecord, Context};
use crate::document::{DiscourseDocument, Expectation};
use crate::domain::{Entity, EntityId, Gf, LogicalForm, Utterance};
use crate::focus::{accommodate, resolve_utterance};
use crate::knowledge::{AccommodationRecord, DiscourseModel};
use crate::order::{StrictPartialOrder, SupportSet};
use crate::result::{ResolutionResult, TraceEvent};

/// Attentional state summary recorded after each utterance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextSnapshot {
    pub local: Vec<EntityId>,
    pub salience: StrictPartialOrder,
    pub center: Option<CenterRecord>,
    pub background: BTreeSet<EntityId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PronounReport {
    pub role: String,
    pub result: ResolutionResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtteranceReport {
    pub label: String,
    pub rendering: String,
    pub pronouns: Vec<PronounReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    /// Salience-dynamics rules fired while registering the utterance.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transition: Vec<TraceEvent>,
    pub snapshot: ContextSnapshot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationCheck {
    pub target: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<String>,
}

/// Full run output; identical inputs yield identical reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub utterances: Vec<UtteranceReport>,
    pub checks: Vec<ExpectationCheck>,
    pub accommodations: Vec<AccommodationRecord>,
    pub entities: Vec<Entity>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn pronoun(&self, utterance: &str, role: &str) -> Option<&ResolutionResult> {
        self.utterances
            .iter()
            .find(|u| u.label == utterance)?
            .pronouns
            .iter()
            .find(|p| p.role == role)
            .map(|p| &p.result)
    }

    pub fn snapshot(&self, utterance: &str) -> Option<&ContextSnapshot> {
        self.utterances
            .iter()
            .find(|u| u.label == utterance)
            .map(|u| &u.snapshot)
    }

    /// JSON rendering of the whole report.
    pub fn render_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering; `trace` adds rule firings and context
    /// snapshots.
    pub fn render_text(&self, trace: bool) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {}\n", self.title));
        for utterance in &self.utterances {
            out.push_str(&format!("{}  {}\n", utterance.label, utterance.rendering));
            for error in &utterance.errors {
                out.push_str(&format!("    error: {error}\n"));
            }
            for pronoun in &utterance.pronouns {
                let r = &pronoun.result;
                let value = render_id_set(&r.value);
                out.push_str(&format!(
                    "    {}/{} := {}  [{}]\n",
                    r.pronoun.surface, pronoun.role, value, r.felicity
                ));
                out.push_str(&format!(
                    "      H = {}\n",
                    render_id_set(&r.candidates)
                ));
                out.push_str(&format!("      base:  {}\n", r.base.order));
                if !r.base.weak_pairs.is_empty() {
                    let weak: Vec<String> = r
                        .base
                        .weak_pairs
                        .iter()
                        .map(|(x, y)| format!("{x} >? {y}"))
                        .collect();
                    out.push_str(&format!("      weak:  {}\n", weak.join(", ")));
                }
                if r.pronoun.stressed {
                    out.push_str(&format!("      final: {} (complementary)\n", r.final_order));
                }
                if r.base.garden_path {
                    out.push_str("      garden path: first choice retracted\n");
                }
                if let Some(d) = &r.discharge {
                    let mut line = format!("      discharge: {}", d.status);
                    if let Some(p) = &d.contrasting_proposition {
                        line.push_str(&format!(" -- {p}"));
                    }
                    if let Some(s) = &d.support {
                        if let Some((rule, _)) = &s.via {
                            line.push_str(&format!(" (via {rule})"));
                        }
                    }
                    out.push_str(&line);
                    out.push('\n');
                    for record in &d.accommodations {
                        out.push_str(&format!("      accommodated: {record}\n"));
                    }
                }
                if trace {
                    out.push_str("      trace:\n");
                    for event in &r.trace {
                        out.push_str(&format!("        {event}\n"));
                    }
                }
            }
            if trace {
                for event in &utterance.transition {
                    out.push_str(&format!("    {event}\n"));
                }
                let s = &utterance.snapshot;
                out.push_str(&format!(
                    "    after {}: A.LOC = {}; salience {}; Center: {}\n",
                    utterance.label,
                    render_id_list(&s.local),
                    s.salience,
                    match &s.center {
                        Some(c) => format!("{} ({}, chain {})", c.entity, c.realized_gf, c.chain_length),
                        None => "none".to_owned(),
                    }
                ));
                if !s.background.is_empty() {
                    out.push_str(&format!(
                        "    background: {}\n",
                        render_id_set(&s.background)
                    ));
                }
            }
        }
        if !self.checks.is_empty() {
            let passed = self.checks.iter().filter(|c| c.passed).count();
            let failed = self.checks.len() - passed;
            out.push_str(&format!("expectations: {passed} passed, {failed} failed\n"));
            for check in &self.checks {
                if check.passed {
                    out.push_str(&format!("  PASS {}\n", check.target));
                } else {
                    out.push_str(&format!("  FAIL {}\n", check.target));
                    for m in &check.mismatches {
                        out.push_str(&format!("       {m}\n"));
                    }
                }
            }
        }
        out
    }
}

fn render_id_set(ids: &BTreeSet<EntityId>) -> String {
    let names: Vec<&str> = ids.iter().map(|i| i.as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

fn render_id_list(ids: &[EntityId]) -> String {
    let names: Vec<&str> = ids.iter().map(|i| i.as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

fn render_lf(lf: &LogicalForm) -> String {
    let args: Vec<String> = lf
        .args
        .iter()
        .map(|(role, m)| match &m.referent {
            Some(r) => format!("{r}/{role}"),
            None => format!("?{}/{role}", m.surface),
        })
        .collect();
    let neg = if lf.negated { "not " } else { "" };
    format!("{neg}{}({})", lf.predicate, args.join(", "))
}

fn snapshot_of(ctx: &Context) -> ContextSnapshot {
    ContextSnapshot {
        local: ctx.attention.local.clone(),
        salience: ctx.attention.salience.clone(),
        center: ctx.attention.center.clone(),
        background: ctx.attention.background.clone(),
    }
}

/// Which salience-dynamics rules fired in the transition from the input
/// to the output attentional state.
fn transition_events(input: &Context, output: &Context) -> Vec<TraceEvent> {
    let mut events = Vec::new();
    let local: BTreeSet<EntityId> = output.attention.local.iter().cloned().collect();
    if !local.is_empty() {
        let over_local = output
            .attention
            .salience
            .restrict(&local)
            .expect("local is in the carrier");
        events.push(TraceEvent::new("GF-ORDER", over_local.to_string()));
    }
    match (&input.attention.center, &output.attention.center) {
        (_, None) => {
            if output
                .lf_register
                .as_ref()
                .is_some_and(|lf| lf.args.iter().all(|(_, m)| !m.kind.is_pronominal()))
            {
                events.push(TraceEvent::new(
                    "EXP-CENTER",
                    "no pronominal expression; Center absent".to_owned(),
                ));
            }
        }
        (prev, Some(center)) => {
            let chained = prev.as_ref().is_some_and(|p| p.entity == center.entity);
            let verb = if chained { "chain" } else { "establish" };
            events.push(TraceEvent::new(
                "EXP-CENTER",
                format!(
                    "{verb} Center := {} at {} (chain {})",
                    center.entity, center.realized_gf, center.chain_length
                ),
            ));
            let detail = if center.realized_gf == Gf::Subject {
                format!("{} converges with the subject rank", center.entity)
            } else {
                format!("{} competes with the subject rank (indeterminate)", center.entity)
            };
            events.push(TraceEvent::new("CENTER", detail));
        }
    }
    events
}

/// Fold accommodations into the input context: records extend the model;
/// accommodated entities join the background, below all local entities.
fn apply_accommodations(ctx: &mut Context, records: &[AccommodationRecord]) {
    let no_support = SupportSet::new();
    for record in records {
        ctx.model = accommodate(&ctx.model, record);
        if let AccommodationRecord::AccommodatedEntities { entities } = record {
            for entity in entities {
                ctx.attention.background.insert(entity.id.clone());
                ctx.attention.salience.insert_element(entity.id.clone());
                let locals: Vec<EntityId> = ctx.attention.local.clone();
                for local in locals {
                    let _ = ctx.attention.salience.add_pair(&local, &entity.id, &no_support);
                }
            }
        }
    }
}

fn check_expectation(expectation: &Expectation, report: &[UtteranceReport]) -> ExpectationCheck {
    let target = format!("{}.{}", expectation.utterance, expectation.role);
    let result = report
        .iter()
        .find(|u| u.label == expectation.utterance)
        .and_then(|u| u.pronouns.iter().find(|p| p.role == expectation.role));
    let Some(pronoun) = result else {
        return ExpectationCheck {
            target,
            passed: false,
            mismatches: vec!["no resolution recorded at this position".to_owned()],
        };
    };
    let r = &pronoun.result;
    let mut mismatches = Vec::new();
    if r.value != expectation.values {
        mismatches.push(format!(
            "value: expected {}, got {}",
            render_id_set(&expectation.values),
            render_id_set(&r.value)
        ));
    }
    if let Some(f) = expectation.felicity {
        if r.felicity != f {
            mismatches.push(format!("felicity: expected {f}, got {}", r.felicity));
        }
    }
    if let Some(d) = expectation.discharge {
        match &r.discharge {
            Some(outcome) if outcome.status == d => {}
            Some(outcome) => {
                mismatches.push(format!("discharge: expected {d}, got {}", outcome.status))
            }
            None => mismatches.push(format!("discharge: expected {d}, none recorded")),
        }
    }
    if let Some(g) = expectation.garden_path {
        if r.base.garden_path != g {
            mismatches.push(format!(
                "garden-path: expected {g}, got {}",
                r.base.garden_path
            ));
        }
    }
    if let Some(w) = expectation.weak {
        let has_weak = !r.base.weak_pairs.is_empty();
        if has_weak != w {
            mismatches.push(format!("weak: expected {w}, got {has_weak}"));
        }
    }
    ExpectationCheck {
        target,
        passed: mismatches.is_empty(),
        mismatches,
    }
}

/// Run a document: resolve every pronoun, register every utterance, and
/// check the document's expectations. Resolution errors are recorded in
/// the per-utterance report and the run continues.
pub fn run(doc: &DiscourseDocument) -> Report {
    let model = DiscourseModel::with_entities(doc.entities.iter().cloned());
    let mut ctx = Context::initial(model);
    let mut utterance_reports = Vec::new();

    for record in &doc.utterances {
        let mut errors = Vec::new();
        let mut pronouns = Vec::new();

        // Pronouns resolve against the input context; at a segment onset
        // the old Center and background are already gone.
        let resolution_ctx = if record.utterance.segment_initial {
            Context {
                lf_register: ctx.lf_register.clone(),
                attention: ctx.attention.segment_reset(),
                model: ctx.model.clone(),
            }
        } else {
            ctx.clone()
        };
        let mut resolved_lf = record.utterance.lf.clone();
        match resolve_utterance(&record.utterance.lf, &resolution_ctx, &doc.rules) {
            Ok(resolution) => {
                apply_accommodations(&mut ctx, &resolution.accommodations);
                for (role, mut result) in resolution.results {
                    if let Some(coherence) = &record.coherence {
                        result
                            .trace
                            .push(TraceEvent::new("COHERENCE", coherence.clone()));
                    }
                    if let Some(value) = result.unique_value().cloned() {
                        if let Some((_, mention)) =
                            resolved_lf.args.iter_mut().find(|(r, _)| r == &role)
                        {
                            mention.referent = Some(value);
                        }
                    }
                    pronouns.push(PronounReport { role, result });
                }
            }
            Err(e) => errors.push(e.to_string()),
        }

        // Ambiguous or unresolvable pronouns realize nothing; the
        // utterance registers without them.
        let mut registered = Utterance {
            index: record.utterance.index,
            lf: resolved_lf,
            segment_initial: record.utterance.segment_initial,
        };
        registered.lf.args.retain(|(_, m)| m.referent.is_some());
        let mut transition = Vec::new();
        match advance(&ctx, &registered) {
            Ok(next) => {
                transition = transition_events(&ctx, &next);
                ctx = next;
            }
            Err(e) => errors.push(e.to_string()),
        }

        utterance_reports.push(UtteranceReport {
            label: record.label.clone(),
            rendering: render_lf(&registered.lf),
            pronouns,
            errors,
            transition,
            snapshot: snapshot_of(&ctx),
        });
    }

    let checks = doc
        .expectations
        .iter()
        .map(|e| check_expectation(e, &utterance_reports))
        .collect();
    Report {
        title: doc.title.clone(),
        utterances: utterance_reports,
        checks,
        accommodations: ctx.model.accommodated.clone(),
        entities: ctx.model.entities.values().cloned().collect(),
    }
}
