//! Stressed-pronoun resolution: the complementary-preference pipeline.
//!
//! A stressed pronoun draws its candidates from the same local attentional
//! state as its unstressed counterpart, computes the same base preference,
//! and then takes the pairwise reversal of that order. The utterance's
//! focus constraint must afterwards be discharged: the context has to
//! supply, or accommodate, contrasting material for the chosen value.
//! There are three sources, tried in order — a contrasting proposition
//! about an alternative candidate (asserted, derivable, or bridged), a
//! same-sort individual in the local state outside the candidate set, and
//! a pending question accommodated together with fresh entities. When all
//! three fail, the stressed pronoun is infelicitous.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::attention::{local_state, Context};
use crate::domain::{Entity, EntityId, Gender, LogicalForm, Mention, Number, Sort};
use crate::knowledge::{
    derive, AccommodationRecord, ContentPattern, Derivation, DerivationStatus, DiscourseModel,
    Proposition, RuleSet,
};
use crate::order::PrefClass;
use crate::resolver::{base_preference, verdict, ResolverError};
use crate::result::{Felicity, ResolutionResult, TraceEvent};

/// How many fresh persons a question accommodation introduces.
pub const ACCOMMODATED_PERSON_COUNT: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintScope {
    Phrase,
    Utterance,
}

/// A presupposed focus constraint: the abstracted proposition and the
/// contextually determined alternative set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocusConstraint {
    pub scope: ConstraintScope,
    pub pattern: ContentPattern,
    pub alternatives: BTreeSet<EntityId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DischargeStatus {
    ContrastInCandidates,
    ContrastInLocal,
    AccommodatedQuestion,
    Infelicitous,
}

impl fmt::Display for DischargeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DischargeStatus::ContrastInCandidates => "contrast-in-candidates",
            DischargeStatus::ContrastInLocal => "contrast-in-local",
            DischargeStatus::AccommodatedQuestion => "accommodated-question",
            DischargeStatus::Infelicitous => "infelicitous",
        };
        f.write_str(s)
    }
}

impl DischargeStatus {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "contrast-in-candidates" => Some(Self::ContrastInCandidates),
            "contrast-in-local" => Some(Self::ContrastInLocal),
            "accommodated-question" => Some(Self::AccommodatedQuestion),
            "infelicitous" => Some(Self::Infelicitous),
            _ => None,
        }
    }
}

/// What discharging the focus constraint came to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DischargeOutcome {
    pub status: DischargeStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contrasting_proposition: Option<Proposition>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub accommodations: Vec<AccommodationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Derivation>,
}

/// Extend the discourse model with an accommodation record. Repeating a
/// record is a no-op; accommodated entities are registered flagged.
pub fn accommodate(model: &DiscourseModel, record: &AccommodationRecord) -> DiscourseModel {
    if model.accommodated.contains(record) {
        return model.clone();
    }
    let mut out = model.clone();
    if let AccommodationRecord::AccommodatedEntities { entities } = record {
        for entity in entities {
            let mut entity = entity.clone();
            entity.accommodated = true;
            out.entities.insert(entity.id.clone(), entity);
        }
    }
    out.accommodated.push(record.clone());
    out
}

/// Hypothesis 1 as a check: stressed uses must not be felicitous where
/// the unstressed counterpart is not.
pub fn asymmetry_consistent(unstressed: Felicity, stressed: Felicity) -> bool {
    !(stressed == Felicity::Ok && unstressed == Felicity::Infelicitous)
}

/// Run both the unstressed and the stressed variant of the pronoun at
/// the given position and verify the felicity asymmetry on this fixture.
/// Returns `None` when the position is not an overt pronoun.
pub fn check_asymmetry(
    doc: &crate::document::DiscourseDocument,
    utterance_label: &str,
    role: &str,
) -> Option<bool> {
    let variant = |stressed: bool| -> Option<Felicity> {
        let mut doc = doc.clone();
        let record = doc
            .utterances
            .iter_mut()
            .find(|u| u.label == utterance_label)?;
        let (_, mention) = record
            .utterance
            .lf
            .args
            .iter_mut()
            .find(|(r, _)| r == role)?;
        if mention.kind != crate::domain::MentionKind::Pronoun || mention.referent.is_some() {
            return None;
        }
        mention.stressed = stressed;
        let report = crate::engine::run(&doc);
        report.pronoun(utterance_label, role).map(|r| r.felicity)
    };
    let unstressed = variant(false)?;
    let stressed = variant(true)?;
    Some(asymmetry_consistent(unstressed, stressed))
}

fn fresh_person(model: &DiscourseModel) -> Entity {
    let mut index = 1usize;
    loop {
        let id = format!("someone{index}");
        if !model.entities.contains_key(&EntityId::new(id.clone())) {
            let mut entity = Entity::new(id, Sort::Person, Gender::Unknown, Number::Sg);
            entity.accommodated = true;
            return entity;
        }
        index += 1;
    }
}

/// Injective assignments of candidates to positions.
fn injective_assignments(domains: &[BTreeSet<EntityId>]) -> Vec<Vec<EntityId>> {
    fn go(
        domains: &[BTreeSet<EntityId>],
        chosen: &mut Vec<EntityId>,
        out: &mut Vec<Vec<EntityId>>,
    ) {
        if chosen.len() == domains.len() {
            out.push(chosen.clone());
            return;
        }
        for candidate in &domains[chosen.len()] {
            if !chosen.contains(candidate) {
                chosen.push(candidate.clone());
                go(domains, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(domains, &mut Vec::new(), &mut out);
    out
}

/// Discharge a focus constraint whose pattern has exactly one hole.
pub fn discharge(
    constraint: &FocusConstraint,
    chosen: &EntityId,
    h: &BTreeSet<EntityId>,
    ctx: &Context,
    rules: &RuleSet,
) -> DischargeOutcome {
    debug_assert!(
        constraint.alternatives.contains(chosen),
        "the chosen value must be among the constraint's alternatives"
    );
    let alternatives: Vec<Vec<EntityId>> = h
        .iter()
        .filter(|y| *y != chosen)
        .map(|y| vec![y.clone()])
        .collect();
    discharge_joint(
        &constraint.pattern,
        std::slice::from_ref(chosen),
        &alternatives,
        h,
        ctx,
        rules,
    )
}

/// Discharge over a joint chosen assignment; `alternatives` are the other
/// injective assignments of candidates to the focused positions.
pub(crate) fn discharge_joint(
    pattern: &ContentPattern,
    chosen: &[EntityId],
    alternatives: &[Vec<EntityId>],
    h_union: &BTreeSet<EntityId>,
    ctx: &Context,
    rules: &RuleSet,
) -> DischargeOutcome {
    let model = &ctx.model;

    // (a) A contrasting proposition instantiated by alternative
    // candidates: its negation asserted, or the proposition itself
    // asserted or defeasibly derivable from the prior discourse.
    for alt in alternatives {
        let Some(prop) = pattern.fill(alt).to_proposition() else {
            continue;
        };
        let negated = derive(model, rules, &prop.clone().negate());
        if negated.succeeded() {
            return DischargeOutcome {
                status: DischargeStatus::ContrastInCandidates,
                contrasting_proposition: Some(negated.goal.clone()),
                accommodations: Vec::new(),
                support: Some(negated),
            };
        }
        let same = derive(model, rules, &prop);
        if same.succeeded() {
            return DischargeOutcome {
                status: DischargeStatus::ContrastInCandidates,
                contrasting_proposition: Some(same.goal.clone()),
                accommodations: Vec::new(),
                support: Some(same),
            };
        }
    }
    // (a') Bridging: a prior fact about exactly the alternative
    // individuals licenses accommodating the contrasting proposition as
    // following from it.
    for alt in alternatives {
        let Some(prop) = pattern.fill(alt).to_proposition() else {
            continue;
        };
        for fact in &model.facts {
            if !fact.negated
                && fact.args == prop.args
                && !rules.same_predicate(&fact.predicate, &prop.predicate)
            {
                let bridge = AccommodationRecord::BridgingAssumption {
                    antecedent: fact.clone(),
                    consequent: prop.clone(),
                };
                return DischargeOutcome {
                    status: DischargeStatus::ContrastInCandidates,
                    contrasting_proposition: Some(prop.clone()),
                    accommodations: vec![bridge],
                    support: Some(Derivation {
                        goal: prop,
                        status: DerivationStatus::DefeasiblyDerived,
                        via: Some(("accommodated-bridge".to_owned(), Default::default())),
                    }),
                };
            }
        }
    }

    let (local, _) = local_state(ctx);
    let chosen_sorts: BTreeSet<Sort> = chosen
        .iter()
        .filter_map(|id| model.entity(id).map(|e| e.sort))
        .collect();

    // (b) A same-sort individual in the local state outside the candidate
    // set: accommodate the negated instantiation as the contrast.
    if chosen.len() == 1 {
        for y in &local {
            if h_union.contains(y) {
                continue;
            }
            let Some(entity) = model.entity(y) else {
                continue;
            };
            if !chosen_sorts.contains(&entity.sort) {
                continue;
            }
            let Some(prop) = pattern.fill(std::slice::from_ref(y)).to_proposition() else {
                continue;
            };
            let contrast = prop.negate();
            return DischargeOutcome {
                status: DischargeStatus::ContrastInLocal,
                contrasting_proposition: Some(contrast.clone()),
                accommodations: vec![AccommodationRecord::ContrastingProposition {
                    proposition: contrast,
                }],
                support: None,
            };
        }
    }

    // (c) No same-sort contrasting individual anywhere in the local
    // state: accommodate the pending question and a set of fresh persons.
    let chosen_set: BTreeSet<&EntityId> = chosen.iter().collect();
    let blocked = local.iter().any(|y| {
        !chosen_set.contains(y)
            && model
                .entity(y)
                .is_some_and(|e| chosen_sorts.contains(&e.sort))
    });
    if !blocked {
        let mut staged = model.clone();
        let mut persons = Vec::new();
        for _ in 0..ACCOMMODATED_PERSON_COUNT {
            let person = fresh_person(&staged);
            staged.entities.insert(person.id.clone(), person.clone());
            persons.push(person);
        }
        return DischargeOutcome {
            status: DischargeStatus::AccommodatedQuestion,
            contrasting_proposition: None,
            accommodations: vec![
                AccommodationRecord::PendingQuestion {
                    pattern: pattern.clone(),
                },
                AccommodationRecord::AccommodatedEntities { entities: persons },
            ],
            support: None,
        };
    }

    // (d) Alternatives exist but nothing supports a contrast for them.
    DischargeOutcome {
        status: DischargeStatus::Infelicitous,
        contrasting_proposition: None,
        accommodations: Vec::new(),
        support: None,
    }
}

/// The pronoun-level alternative set F after discharge: the local
/// attentional state plus any accommodated entities. For a stressed
/// pronoun whose constraint discharged, this set has at least two
/// members — the chosen value and a contrasting individual.
pub fn focus_alternatives(outcome: &DischargeOutcome, ctx: &Context) -> BTreeSet<EntityId> {
    let (local, _) = local_state(ctx);
    let mut alternatives: BTreeSet<EntityId> = local.into_iter().collect();
    for record in &outcome.accommodations {
        if let AccommodationRecord::AccommodatedEntities { entities } = record {
            alternatives.extend(entities.iter().map(|e| e.id.clone()));
        }
    }
    alternatives
}

/// Phrase-level focus constraint of a stressed pronoun after discharge.
pub fn phrase_constraint(
    pattern: &ContentPattern,
    outcome: &DischargeOutcome,
    ctx: &Context,
) -> FocusConstraint {
    FocusConstraint {
        scope: ConstraintScope::Phrase,
        pattern: pattern.clone(),
        alternatives: focus_alternatives(outcome, ctx),
    }
}

fn discharge_trace(outcome: &DischargeOutcome) -> Vec<TraceEvent> {
    let mut events = Vec::new();
    let detail = match (&outcome.status, &outcome.contrasting_proposition) {
        (DischargeStatus::ContrastInCandidates, Some(p)) => match &outcome.support {
            Some(d) => format!("contrast-in-candidates via {d}"),
            None => format!("contrast-in-candidates: {p}"),
        },
        (DischargeStatus::ContrastInLocal, Some(p)) => {
            format!("contrast-in-local: accommodate {p}")
        }
        (DischargeStatus::AccommodatedQuestion, _) => {
            "accommodated-question: no same-sort contrast in the local state".to_owned()
        }
        (DischargeStatus::Infelicitous, _) => {
            "no derivable contrast and no accommodation source; infelicitous".to_owned()
        }
        (status, _) => status.to_string(),
    };
    events.push(TraceEvent::new("DISCHARGE", detail));
    for record in &outcome.accommodations {
        events.push(TraceEvent::new("ACCOMMODATE", record.to_string()));
    }
    events
}

/// Focus constraint of the utterance: the content pattern with the given
/// roles abstracted, over the local attentional state as alternatives.
fn utterance_constraint(
    focused_roles: &[&str],
    resolved: &[(String, EntityId)],
    utterance: &LogicalForm,
    ctx: &Context,
) -> FocusConstraint {
    let (local, _) = local_state(ctx);
    FocusConstraint {
        scope: ConstraintScope::Utterance,
        pattern: crate::resolver::content_pattern(utterance, focused_roles, resolved),
        alternatives: local.into_iter().collect(),
    }
}

/// Resolve a stressed pronoun: same candidates, same base preference,
/// reversed order, then discharge.
pub fn resolve_stressed(
    pronoun: &Mention,
    utterance: &LogicalForm,
    ctx: &Context,
    rules: &RuleSet,
) -> Result<ResolutionResult, ResolverError> {
    debug_assert!(pronoun.stressed, "resolve_stressed expects a stressed pronoun");
    let role = utterance
        .args
        .iter()
        .find(|(_, m)| std::ptr::eq(m, pronoun) || *m == *pronoun)
        .map(|(r, _)| r.clone())
        .unwrap_or_default();
    let (base, mut trace) = base_preference(&role, pronoun, utterance, ctx, rules)?;
    let final_order = base.order.reverse();
    trace.push(TraceEvent::new(
        "CPH",
        format!("complementary preference: reversed to {final_order}"),
    ));
    let value = final_order.maximal().expect("candidates are nonempty");
    let mut felicity = verdict(&value, base.garden_path);

    let mut discharge_outcome = None;
    if let Some(chosen) = value.iter().next().filter(|_| value.len() == 1) {
        let constraint = utterance_constraint(&[role.as_str()], &[], utterance, ctx);
        let outcome = discharge(&constraint, chosen, &base.candidates, ctx, rules);
        trace.extend(discharge_trace(&outcome));
        if outcome.status == DischargeStatus::Infelicitous {
            felicity = Felicity::Infelicitous;
        } else {
            let phrase = phrase_constraint(&constraint.pattern, &outcome, ctx);
            debug_assert!(
                phrase.alternatives.len() >= 2,
                "a discharged stressed pronoun presupposes at least two alternatives"
            );
        }
        discharge_outcome = Some(outcome);
    } else {
        trace.push(TraceEvent::new(
            "CHOOSE",
            "complement of an indeterminate order is still indeterminate".to_owned(),
        ));
    }
    Ok(ResolutionResult {
        pronoun: pronoun.clone(),
        candidates: base.candidates.clone(),
        base,
        final_order,
        value,
        discharge: discharge_outcome,
        felicity,
        trace,
    })
}

/// Resolution of every unresolved pronoun of one utterance, plus the
/// accommodations to fold into the context before registering it.
#[derive(Debug, Clone, Default)]
pub struct UtteranceResolution {
    pub results: Vec<(String, ResolutionResult)>,
    pub accommodations: Vec<AccommodationRecord>,
}

/// Resolve all pronouns of an utterance against the input context.
/// Several co-argument pronouns are resolved jointly over assignments
/// with pairwise-disjoint references; preferences apply per pronoun and
/// the assignment violating the fewest surviving pairs, strongest class
/// first, wins.
pub fn resolve_utterance(
    utterance: &LogicalForm,
    ctx: &Context,
    rules: &RuleSet,
) -> Result<UtteranceResolution, ResolverError> {
    let pronoun_roles: Vec<(String, Mention)> = utterance
        .args
        .iter()
        .filter(|(_, m)| m.is_unresolved_pronoun())
        .map(|(r, m)| (r.clone(), m.clone()))
        .collect();
    match pronoun_roles.len() {
        0 => Ok(UtteranceResolution::default()),
        1 => {
            let (role, pronoun) = &pronoun_roles[0];
            let original = utterance.arg(role).expect("role comes from the utterance");
            let result = if pronoun.stressed {
                resolve_stressed(original, utterance, ctx, rules)?
            } else {
                crate::resolver::resolve_unstressed(original, utterance, ctx, rules)?
            };
            let accommodations = result
                .discharge
                .as_ref()
                .map(|d| d.accommodations.clone())
                .unwrap_or_default();
            Ok(UtteranceResolution {
                results: vec![(role.clone(), result)],
                accommodations,
            })
        }
        _ => resolve_jointly(&pronoun_roles, utterance, ctx, rules),
    }
}

fn resolve_jointly(
    pronoun_roles: &[(String, Mention)],
    utterance: &LogicalForm,
    ctx: &Context,
    rules: &RuleSet,
) -> Result<UtteranceResolution, ResolverError> {
    let mut bases = Vec::new();
    for (role, pronoun) in pronoun_roles {
        let (base, trace) = base_preference(role, pronoun, utterance, ctx, rules)?;
        let final_order = if pronoun.stressed {
            base.order.reverse()
        } else {
            base.order.clone()
        };
        bases.push((role.clone(), pronoun.clone(), base, final_order, trace));
    }
    let domains: Vec<BTreeSet<EntityId>> =
        bases.iter().map(|(_, _, base, _, _)| base.candidates.clone()).collect();
    let assignments = injective_assignments(&domains);
    if assignments.is_empty() {
        return Err(ResolverError::NoAssignment);
    }

    // Class-wise violation counts, strongest class first: an assignment
    // violates a pair when it picks the dominated side.
    let score = |assignment: &[EntityId]| -> (usize, usize, usize) {
        let mut wk = 0;
        let mut att = 0;
        let mut lf = 0;
        for (i, (_, _, _, final_order, _)) in bases.iter().enumerate() {
            for (_, y, support) in final_order.pairs() {
                if y == &assignment[i] {
                    for class in support {
                        match class {
                            PrefClass::Wk => wk += 1,
                            PrefClass::Att => att += 1,
                            PrefClass::Lf => lf += 1,
                        }
                    }
                }
            }
        }
        (wk, att, lf)
    };
    let best = assignments
        .iter()
        .map(|a| score(a))
        .min()
        .expect("assignments is nonempty");
    let winners: Vec<&Vec<EntityId>> = assignments.iter().filter(|a| score(a) == best).collect();

    let mut values: Vec<BTreeSet<EntityId>> = vec![BTreeSet::new(); bases.len()];
    for winner in &winners {
        for (i, v) in winner.iter().enumerate() {
            values[i].insert(v.clone());
        }
    }

    let unique_winner = if winners.len() == 1 {
        Some(winners[0].clone())
    } else {
        None
    };

    // Utterance-level discharge over the stressed positions, with
    // unstressed pronouns fixed at their resolved values.
    let stressed_roles: Vec<&str> = bases
        .iter()
        .filter(|(_, p, _, _, _)| p.stressed)
        .map(|(r, _, _, _, _)| r.as_str())
        .collect();
    let mut shared_discharge: Option<DischargeOutcome> = None;
    let mut accommodations = Vec::new();
    if let (Some(winner), false) = (&unique_winner, stressed_roles.is_empty()) {
        let resolved: Vec<(String, EntityId)> = bases
            .iter()
            .zip(winner.iter())
            .filter(|((_, p, _, _, _), _)| !p.stressed)
            .map(|((r, _, _, _, _), v)| (r.clone(), v.clone()))
            .collect();
        let constraint = utterance_constraint(&stressed_roles, &resolved, utterance, ctx);
        let stressed_domains: Vec<BTreeSet<EntityId>> = bases
            .iter()
            .filter(|(_, p, _, _, _)| p.stressed)
            .map(|(_, _, base, _, _)| base.candidates.clone())
            .collect();
        let chosen: Vec<EntityId> = bases
            .iter()
            .zip(winner.iter())
            .filter(|((_, p, _, _, _), _)| p.stressed)
            .map(|(_, v)| v.clone())
            .collect();
        let reserved: Vec<EntityId> = resolved.iter().map(|(_, v)| v.clone()).collect();
        let alternatives: Vec<Vec<EntityId>> = injective_assignments(&stressed_domains)
            .into_iter()
            .filter(|a| a != &chosen && a.iter().all(|v| !reserved.contains(v)))
            .collect();
        let h_union: BTreeSet<EntityId> = stressed_domains.iter().flatten().cloned().collect();
        let outcome = discharge_joint(&constraint.pattern, &chosen, &alternatives, &h_union, ctx, rules);
        if outcome.status != DischargeStatus::Infelicitous {
            let phrase = phrase_constraint(&constraint.pattern, &outcome, ctx);
            debug_assert!(
                phrase.alternatives.len() >= 2,
                "a discharged stressed pronoun presupposes at least two alternatives"
            );
        }
        accommodations = outcome.accommodations.clone();
        shared_discharge = Some(outcome);
    }

    let mut results = Vec::new();
    for (i, (role, pronoun, base, final_order, mut trace)) in bases.into_iter().enumerate() {
        if pronoun.stressed {
            trace.push(TraceEvent::new(
                "CPH",
                format!("complementary preference: reversed to {final_order}"),
            ));
        }
        match &unique_winner {
            Some(winner) => {
                let rendered: Vec<String> = pronoun_roles
                    .iter()
                    .zip(winner.iter())
                    .map(|((r, p), v)| format!("{}={v}", if r.is_empty() { &p.surface } else { r }))
                    .collect();
                trace.push(TraceEvent::new(
                    "JOINT",
                    format!("disjoint assignment {}", rendered.join(", ")),
                ));
            }
            None => {
                trace.push(TraceEvent::new(
                    "JOINT",
                    "several disjoint assignments tie; ambiguous".to_owned(),
                ));
            }
        }
        let discharge_outcome = if pronoun.stressed {
            if let Some(outcome) = &shared_discharge {
                trace.extend(discharge_trace(outcome));
            }
            shared_discharge.clone()
        } else {
            None
        };
        let mut felicity = verdict(&values[i], base.garden_path);
        if pronoun.stressed
            && discharge_outcome
                .as_ref()
                .is_some_and(|d| d.status == DischargeStatus::Infelicitous)
        {
            felicity = Felicity::Infelicitous;
        }
        results.push((
            role,
            ResolutionResult {
                pronoun,
                candidates: base.candidates.clone(),
                base,
                final_order,
                value: values[i].clone(),
                discharge: discharge_outcome,
                felicity,
                trace,
            },
        ));
    }
    Ok(UtteranceResolution {
        results,
        accommodations,
    })
}
