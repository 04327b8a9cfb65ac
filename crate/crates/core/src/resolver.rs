//! Unstressed-pronoun resolution: indefeasible candidate filtering, the
//! ATT and LF preference classes, and combination of class conclusions
//! under the override lattice `SYN+SEM >= WK >= ATT >= LF`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attention::{local_state, Context};
use crate::domain::{EntityId, Gender, LogicalForm, Mention, Sort};
use crate::knowledge::{wk_derivations, ContentPattern, RuleSet, Slot, Term};
use crate::order::{PrefClass, StrictPartialOrder, SupportSet};
use crate::result::{Felicity, ResolutionResult, TraceEvent};

/// Center chains at least this long make the attentional preference
/// extremely strong; overriding it garden-paths instead of passing
/// silently.
pub const GARDEN_PATH_CHAIN_THRESHOLD: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolverError {
    #[error("the local attentional state is empty")]
    EmptyLocalState,
    #[error("agreement filters leave no candidate for '{surface}'")]
    NoCandidates { surface: String },
    #[error("no joint assignment satisfies disjoint reference")]
    NoAssignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Normal,
    Extreme,
}

/// What one preference class independently concludes about the
/// candidates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassConclusion {
    pub class: PrefClass,
    pub order: StrictPartialOrder,
    pub strength: Strength,
    pub note: String,
}

/// The combined base preference order H^pref for the unstressed reading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePreference {
    pub candidates: BTreeSet<EntityId>,
    pub order: StrictPartialOrder,
    /// Set when a commonsense pair overrode an extremely strong
    /// attentional pair.
    pub garden_path: bool,
    /// Pairs whose only surviving support is parallelism.
    pub weak_pairs: BTreeSet<(EntityId, EntityId)>,
}

/// The indefeasible SYN+SEM filter: agreement, personhood for gendered
/// personal pronouns, and disjoint reference from resolved co-arguments.
pub fn candidate_set(
    pronoun: &Mention,
    utterance: &LogicalForm,
    ctx: &Context,
) -> Result<BTreeSet<EntityId>, ResolverError> {
    let (local, _) = local_state(ctx);
    if local.is_empty() {
        return Err(ResolverError::EmptyLocalState);
    }
    let mut excluded: BTreeSet<EntityId> = BTreeSet::new();
    for (_, co_arg) in &utterance.args {
        if std::ptr::eq(co_arg, pronoun) {
            continue;
        }
        if let Some(referent) = &co_arg.referent {
            excluded.insert(referent.clone());
            if let Some(entity) = ctx.model.entity(referent) {
                excluded.extend(entity.members.iter().cloned());
            }
        }
    }
    let gendered_personal =
        matches!(pronoun.agreement.gender, Gender::Masc | Gender::Fem);
    Ok(local
        .iter()
        .filter(|id| {
            let Some(entity) = ctx.model.entity(id) else {
                return false;
            };
            pronoun.agreement.admits(entity)
                && (!gendered_personal || entity.sort == Sort::Person)
                && !excluded.contains(*id)
        })
        .cloned()
        .collect())
}

/// ATT: a pronoun prefers maximally salient entities in the input
/// attentional state.
pub fn att_preference(
    _pronoun: &Mention,
    ctx: &Context,
    candidates: &BTreeSet<EntityId>,
) -> ClassConclusion {
    let (_, salience) = local_state(ctx);
    let restricted = salience
        .restrict(candidates)
        .expect("candidates come from the local state");
    let support: SupportSet = [PrefClass::Att].into_iter().collect();
    let mut order = StrictPartialOrder::new(candidates.iter().cloned());
    let mut note = String::from("salience indeterminate among candidates");
    if let Ok(maximal) = restricted.maximal() {
        if maximal.len() < candidates.len() {
            for top in &maximal {
                for other in candidates {
                    if !maximal.contains(other) {
                        order
                            .add_pair(top, other, &support)
                            .expect("maximal-over-rest pairs cannot cycle");
                    }
                }
            }
            let tops: Vec<&str> = maximal.iter().map(|e| e.as_str()).collect();
            note = format!("maximally salient: {}", tops.join(", "));
        }
    }
    let strength = match &ctx.attention.center {
        Some(c)
            if c.chain_length >= GARDEN_PATH_CHAIN_THRESHOLD
                && candidates.contains(&c.entity) =>
        {
            Strength::Extreme
        }
        _ => Strength::Normal,
    };
    ClassConclusion {
        class: PrefClass::Att,
        order,
        strength,
        note,
    }
}

/// LF: parallelism prefers the candidate realized in the LF register at
/// the pronoun's own grammatical function.
pub fn lf_preference(
    pronoun: &Mention,
    ctx: &Context,
    candidates: &BTreeSet<EntityId>,
) -> ClassConclusion {
    let mut order = StrictPartialOrder::new(candidates.iter().cloned());
    let support: SupportSet = [PrefClass::Lf].into_iter().collect();
    let mut note = String::from("no parallel realization");
    if let Some(register) = &ctx.lf_register {
        let registry = &ctx.model.entities;
        let parallel: BTreeSet<&EntityId> = candidates
            .iter()
            .filter(|id| register.gf_of(id, registry) == Some(pronoun.gf))
            .collect();
        if !parallel.is_empty() && parallel.len() < candidates.len() {
            for x in &parallel {
                for y in candidates {
                    if !parallel.contains(y) {
                        order
                            .add_pair(x, y, &support)
                            .expect("parallel-over-rest pairs cannot cycle");
                    }
                }
            }
            let tops: Vec<&str> = parallel.iter().map(|e| e.as_str()).collect();
            note = format!("parallel at {}: {}", pronoun.gf, tops.join(", "));
        }
    }
    ClassConclusion {
        class: PrefClass::Lf,
        order,
        strength: Strength::Normal,
        note,
    }
}

/// Combine class conclusions under the override lattice. Stronger classes
/// delete conflicting weaker pairs; mutually contradictory pairs of the
/// same class cancel; pairs left standing with parallelism-only support
/// are marked weak.
pub fn combine(conclusions: &[ClassConclusion], candidates: &BTreeSet<EntityId>) -> BasePreference {
    combine_traced(conclusions, candidates).0
}

pub(crate) fn combine_traced(
    conclusions: &[ClassConclusion],
    candidates: &BTreeSet<EntityId>,
) -> (BasePreference, Vec<TraceEvent>) {
    let mut trace = Vec::new();
    let mut by_class: BTreeMap<PrefClass, BTreeSet<(EntityId, EntityId)>> = BTreeMap::new();
    for conclusion in conclusions {
        by_class
            .entry(conclusion.class)
            .or_default()
            .extend(conclusion.order.pair_keys());
    }
    // Contradictory pairs inside one class are equally strong: cancel.
    for (class, pairs) in by_class.iter_mut() {
        let contradicted: BTreeSet<(EntityId, EntityId)> = pairs
            .iter()
            .filter(|(x, y)| pairs.contains(&(y.clone(), x.clone())))
            .cloned()
            .collect();
        if !contradicted.is_empty() {
            trace.push(TraceEvent::new(
                "CANCEL",
                format!("{class} concludes contradictory pairs; they cancel"),
            ));
            pairs.retain(|p| !contradicted.contains(p));
        }
    }
    let att_extreme = conclusions
        .iter()
        .any(|c| c.class == PrefClass::Att && c.strength == Strength::Extreme);

    let mut order = StrictPartialOrder::new(candidates.iter().cloned());
    let mut garden_path = false;
    for class in [PrefClass::Wk, PrefClass::Att, PrefClass::Lf] {
        let Some(pairs) = by_class.get(&class) else {
            continue;
        };
        let support: SupportSet = [class].into_iter().collect();
        for (x, y) in pairs {
            if order.holds(y, x) {
                let winner = order
                    .support(y, x)
                    .and_then(|s| s.iter().next().copied())
                    .unwrap_or(PrefClass::Wk);
                if class == PrefClass::Att
                    && winner == PrefClass::Wk
                    && att_extreme
                {
                    garden_path = true;
                    trace.push(TraceEvent::new(
                        "OVERRIDE",
                        format!(
                            "WK deletes extremely strong ATT {x} > {y}; first choice retracted (garden path)"
                        ),
                    ));
                } else {
                    trace.push(TraceEvent::new(
                        "OVERRIDE",
                        format!("{winner} deletes {class} {x} > {y}"),
                    ));
                }
                continue;
            }
            match order.add_pair(x, y, &support) {
                Ok(()) => {}
                Err(_) => {
                    trace.push(TraceEvent::new(
                        "OVERRIDE",
                        format!("{class} {x} > {y} dropped: conflicts transitively with stronger classes"),
                    ));
                }
            }
        }
    }
    let weak_pairs: BTreeSet<(EntityId, EntityId)> = order
        .pairs()
        .filter(|(_, _, s)| s.len() == 1 && s.contains(&PrefClass::Lf))
        .map(|(x, y, _)| (x.clone(), y.clone()))
        .collect();
    for (x, y) in &weak_pairs {
        trace.push(TraceEvent::new(
            "WEAK",
            format!("{x} > {y} survives on parallelism alone"),
        ));
    }
    (
        BasePreference {
            candidates: candidates.clone(),
            order,
            garden_path,
            weak_pairs,
        },
        trace,
    )
}

/// Content pattern of the utterance with the given roles abstracted into
/// holes. Arguments follow the discourse-model convention: core GF
/// positions only, in GF-rank order, unless a hole sits at an adjunct.
/// Other unresolved pronoun positions become wildcards; `overrides` pins
/// positions to already chosen values.
pub(crate) fn content_pattern(
    utterance: &LogicalForm,
    hole_roles: &[&str],
    overrides: &[(String, EntityId)],
) -> ContentPattern {
    let core = utterance.core_args();
    let holes_are_core = hole_roles
        .iter()
        .all(|hr| core.iter().any(|(role, _)| role == hr));
    let all_args: Vec<&(String, Mention)> = utterance.args.iter().collect();
    let selected = if holes_are_core { core } else { all_args };
    let slots = selected
        .iter()
        .map(|(role, m)| {
            if hole_roles.contains(&role.as_str()) {
                Slot::Hole
            } else if let Some((_, id)) = overrides.iter().find(|(r, _)| r == role) {
                Slot::Fixed(Term::Entity(id.clone()))
            } else if let Some(r) = &m.referent {
                Slot::Fixed(Term::Entity(r.clone()))
            } else {
                Slot::Any
            }
        })
        .collect();
    ContentPattern {
        predicate: utterance.predicate.clone(),
        slots,
        negated: utterance.negated,
    }
}

/// Content pattern with a single pronoun position as the hole.
pub(crate) fn content_for(pronoun_role: &str, utterance: &LogicalForm) -> ContentPattern {
    content_pattern(utterance, &[pronoun_role], &[])
}

/// The full base pipeline for one pronoun: candidates, the three class
/// conclusions, and their combination, with the trace of rule firings.
pub(crate) fn base_preference(
    pronoun_role: &str,
    pronoun: &Mention,
    utterance: &LogicalForm,
    ctx: &Context,
    rules: &RuleSet,
) -> Result<(BasePreference, Vec<TraceEvent>), ResolverError> {
    let candidates = candidate_set(pronoun, utterance, ctx)?;
    if candidates.is_empty() {
        return Err(ResolverError::NoCandidates {
            surface: pronoun.surface.clone(),
        });
    }
    let mut trace = Vec::new();
    let (local, salience) = local_state(ctx);
    let local_names: Vec<&str> = local.iter().map(|e| e.as_str()).collect();
    trace.push(TraceEvent::new(
        "LOCATE",
        format!("B = {{{}}}, salience {}", local_names.join(", "), salience),
    ));
    let names: Vec<&str> = candidates.iter().map(|e| e.as_str()).collect();
    trace.push(TraceEvent::new(
        "SYN+SEM",
        format!("H = {{{}}} for '{}'", names.join(", "), pronoun.surface),
    ));

    let content = content_for(pronoun_role, utterance);
    let derivations = wk_derivations(&candidates, &content, &ctx.model, rules);
    let wk_support: SupportSet = [PrefClass::Wk].into_iter().collect();
    let mut wk_order = StrictPartialOrder::new(candidates.iter().cloned());
    for (x, dx) in &derivations {
        if !dx.succeeded() {
            continue;
        }
        if let Some((rule_id, _)) = &dx.via {
            trace.push(TraceEvent::new(rule_id.clone(), format!("derives {}", dx.goal)));
        } else {
            trace.push(TraceEvent::new("WK", format!("{} already asserted", dx.goal)));
        }
        for (y, dy) in &derivations {
            if x != y && !dy.succeeded() {
                wk_order
                    .add_pair(x, y, &wk_support)
                    .expect("derived-over-underivable pairs cannot cycle");
            }
        }
    }
    let both_derived = derivations.values().filter(|d| d.succeeded()).count() > 1
        && wk_order.is_unordered();
    let wk = ClassConclusion {
        class: PrefClass::Wk,
        order: wk_order,
        strength: Strength::Normal,
        note: if both_derived {
            "symmetric derivations distinguish nothing".to_owned()
        } else {
            format!("content {content}")
        },
    };
    let att = att_preference(pronoun, ctx, &candidates);
    let lf = lf_preference(pronoun, ctx, &candidates);

    if !wk.order.is_unordered() {
        trace.push(TraceEvent::new("WK", format!("concludes {}", wk.order)));
    } else {
        trace.push(TraceEvent::new("WK", wk.note.clone()));
    }
    let att_label = match att.strength {
        Strength::Extreme => " (extremely strong: Center chain)",
        Strength::Normal => "",
    };
    if !att.order.is_unordered() {
        trace.push(TraceEvent::new(
            "EXP-ORDER",
            format!("ATT concludes {}{att_label}", att.order),
        ));
    } else {
        trace.push(TraceEvent::new("EXP-ORDER", att.note.clone()));
    }
    if !lf.order.is_unordered() {
        trace.push(TraceEvent::new("PARA", format!("LF concludes {}", lf.order)));
    } else {
        trace.push(TraceEvent::new("PARA", lf.note.clone()));
    }

    let (base, combine_trace) = combine_traced(&[wk, att, lf], &candidates);
    trace.extend(combine_trace);
    trace.push(TraceEvent::new("COMBINE", format!("base order {}", base.order)));
    Ok((base, trace))
}

/// Felicity verdict for a finished (possibly joint) resolution.
pub(crate) fn verdict(value: &BTreeSet<EntityId>, garden_path: bool) -> Felicity {
    if value.len() > 1 {
        Felicity::Ambiguous
    } else if garden_path {
        Felicity::GardenPath
    } else {
        Felicity::Ok
    }
}

/// Resolve an unstressed pronoun against the input context. The final
/// order is the base order itself; the value is its set of maxima.
pub fn resolve_unstressed(
    pronoun: &Mention,
    utterance: &LogicalForm,
    ctx: &Context,
    rules: &RuleSet,
) -> Result<ResolutionResult, ResolverError> {
    let role = utterance
        .args
        .iter()
        .find(|(_, m)| std::ptr::eq(m, pronoun))
        .map(|(r, _)| r.clone())
        .unwrap_or_default();
    let (base, mut trace) = base_preference(&role, pronoun, utterance, ctx, rules)?;
    let final_order = base.order.clone();
    let value = final_order.maximal().expect("candidates are nonempty");
    let felicity = verdict(&value, base.garden_path);
    if felicity == Felicity::Ambiguous {
        trace.push(TraceEvent::new(
            "CHOOSE",
            "maximal set is not a singleton; referential use is infelicitous".to_owned(),
        ));
    } else {
        let names: Vec<&str> = value.iter().map(|e| e.as_str()).collect();
        trace.push(TraceEvent::new("CHOOSE", format!("value {}", names.join(", "))));
    }
    Ok(ResolutionResult {
        pronoun: pronoun.clone(),
        candidates: base.candidates.clone(),
        base,
        final_order,
        value,
        discharge: None,
        felicity,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attention::advance;
    use crate::domain::{Agreement, Entity, Gf, MentionKind, Number, Utterance};
    use crate::knowledge::{parse_rules, DiscourseModel};

    fn id(s: &str) -> EntityId {
        EntityId::from(s)
    }

    fn person(name: &str, gender: Gender) -> Entity {
        Entity::new(name, Sort::Person, gender, Number::Sg)
    }

    fn name_arg(role: &str, entity: &str, gf: Gf, gender: Gender) -> (String, Mention) {
        (
            role.to_owned(),
            Mention {
                surface: entity.to_owned(),
                kind: MentionKind::DefiniteNp,
                stressed: false,
                gf,
                agreement: Agreement::new(gender, Number::Sg),
                referent: Some(id(entity)),
            },
        )
    }

    fn pronoun(surface: &str, gf: Gf) -> Mention {
        Mention {
            surface: surface.to_owned(),
            kind: MentionKind::Pronoun,
            stressed: false,
            gf,
            agreement: Agreement::new(Gender::Masc, Number::Sg),
            referent: None,
        }
    }

    /// Context after "John hit Bill [in front of Mary]".
    fn hit_context(with_mary: bool) -> Context {
        let mut entities = vec![person("John", Gender::Masc), person("Bill", Gender::Masc)];
        if with_mary {
            entities.push(person("Mary", Gender::Fem));
        }
        let ctx = Context::initial(DiscourseModel::with_entities(entities));
        let mut args = vec![
            name_arg("Subj", "John", Gf::Subject, Gender::Masc),
            name_arg("Obj", "Bill", Gf::Object, Gender::Masc),
        ];
        if with_mary {
            args.push(name_arg("InFrontOf", "Mary", Gf::Other, Gender::Fem));
        }
        let u1 = Utterance {
            index: 1,
            lf: LogicalForm {
                predicate: "hit".to_owned(),
                args,
                negated: false,
            },
            segment_initial: false,
        };
        advance(&ctx, &u1).unwrap()
    }

    fn he_utterance(pred: &str) -> LogicalForm {
        LogicalForm {
            predicate: pred.to_owned(),
            args: vec![("Subj".to_owned(), pronoun("he", Gf::Subject))],
            negated: false,
        }
    }

    #[test]
    fn candidate_set_filters_by_gender() {
        let ctx = hit_context(true);
        let u2 = he_utterance("injured");
        let he = u2.arg("Subj").unwrap();
        let h = candidate_set(he, &u2, &ctx).unwrap();
        assert_eq!(h, BTreeSet::from([id("John"), id("Bill")]));
    }

    #[test]
    fn candidate_set_excludes_resolved_co_arguments() {
        // "Mary told him to go home": him cannot be Mary (she is a
        // co-argument) even apart from gender.
        let ctx = hit_context(false);
        let mut u2 = LogicalForm::new("tell_go_home");
        u2.args
            .push(name_arg("Subj", "Mary", Gf::Subject, Gender::Fem));
        u2.args.push(("Obj".to_owned(), pronoun("him", Gf::Object)));
        let him = u2.arg("Obj").unwrap();
        let h = candidate_set(him, &u2, &ctx).unwrap();
        assert_eq!(h, BTreeSet::from([id("John"), id("Bill")]));
    }

    #[test]
    fn candidate_set_errors_on_empty_local_state() {
        let ctx = Context::initial(DiscourseModel::default());
        let u = he_utterance("injured");
        let he = u.arg("Subj").unwrap();
        assert_eq!(
            candidate_set(he, &u, &ctx),
            Err(ResolverError::EmptyLocalState)
        );
    }

    #[test]
    fn att_prefers_maximally_salient() {
        let ctx = hit_context(false);
        let u2 = he_utterance("injured");
        let him = u2.arg("Subj").unwrap();
        let h = BTreeSet::from([id("John"), id("Bill")]);
        let att = att_preference(him, &ctx, &h);
        assert!(att.order.holds(&id("John"), &id("Bill")));
        assert_eq!(att.strength, Strength::Normal);
    }

    #[test]
    fn lf_prefers_parallel_gf() {
        let ctx = hit_context(false);
        // Object pronoun after "John(Subj) hit Bill(Obj)": LF prefers Bill.
        let mut u2 = LogicalForm::new("tell_go_home");
        u2.args
            .push(name_arg("Subj", "Mary", Gf::Subject, Gender::Fem));
        u2.args.push(("Obj".to_owned(), pronoun("him", Gf::Object)));
        let him = u2.arg("Obj").unwrap();
        let h = BTreeSet::from([id("John"), id("Bill")]);
        let lf = lf_preference(him, &ctx, &h);
        assert!(lf.order.holds(&id("Bill"), &id("John")));
    }

    fn conclusion(class: PrefClass, pairs: &[(&str, &str)], carrier: &[&str]) -> ClassConclusion {
        let mut order = StrictPartialOrder::new(carrier.iter().copied());
        let support: SupportSet = [class].into_iter().collect();
        for (x, y) in pairs {
            order.add_pair(&id(x), &id(y), &support).unwrap();
        }
        ClassConclusion {
            class,
            order,
            strength: Strength::Normal,
            note: String::new(),
        }
    }

    #[test]
    fn att_overrides_lf() {
        let carrier = ["Bill", "John"];
        let candidates: BTreeSet<EntityId> = carrier.iter().map(|s| id(s)).collect();
        let lf = conclusion(PrefClass::Lf, &[("Bill", "John")], &carrier);
        let att = conclusion(PrefClass::Att, &[("John", "Bill")], &carrier);
        let base = combine(&[lf, att], &candidates);
        assert!(base.order.holds(&id("John"), &id("Bill")));
        assert!(!base.garden_path);
        assert!(base.weak_pairs.is_empty());
    }

    #[test]
    fn wk_overrides_att_without_flag_at_normal_strength() {
        let carrier = ["Bill", "John"];
        let candidates: BTreeSet<EntityId> = carrier.iter().map(|s| id(s)).collect();
        let wk = conclusion(PrefClass::Wk, &[("Bill", "John")], &carrier);
        let att = conclusion(PrefClass::Att, &[("John", "Bill")], &carrier);
        let base = combine(&[wk, att], &candidates);
        assert!(base.order.holds(&id("Bill"), &id("John")));
        assert!(!base.garden_path);
    }

    #[test]
    fn wk_overriding_extreme_att_garden_paths() {
        let carrier = ["Billy", "Tommy"];
        let candidates: BTreeSet<EntityId> = carrier.iter().map(|s| id(s)).collect();
        let wk = conclusion(PrefClass::Wk, &[("Billy", "Tommy")], &carrier);
        let mut att = conclusion(PrefClass::Att, &[("Tommy", "Billy")], &carrier);
        att.strength = Strength::Extreme;
        let base = combine(&[wk, att], &candidates);
        assert!(base.order.holds(&id("Billy"), &id("Tommy")));
        assert!(base.garden_path);
    }

    #[test]
    fn lf_only_pairs_are_weak() {
        let carrier = ["Babar", "Baker"];
        let candidates: BTreeSet<EntityId> = carrier.iter().map(|s| id(s)).collect();
        let lf = conclusion(PrefClass::Lf, &[("Baker", "Babar")], &carrier);
        let base = combine(&[lf], &candidates);
        assert!(base.order.holds(&id("Baker"), &id("Babar")));
        assert_eq!(
            base.weak_pairs,
            BTreeSet::from([(id("Baker"), id("Babar"))])
        );
    }

    #[test]
    fn agreeing_classes_are_not_weak() {
        let carrier = ["Babar", "Baker"];
        let candidates: BTreeSet<EntityId> = carrier.iter().map(|s| id(s)).collect();
        let att = conclusion(PrefClass::Att, &[("Babar", "Baker")], &carrier);
        let lf = conclusion(PrefClass::Lf, &[("Babar", "Baker")], &carrier);
        let base = combine(&[att, lf], &candidates);
        assert!(base.order.holds(&id("Babar"), &id("Baker")));
        assert!(base.weak_pairs.is_empty());
    }

    #[test]
    fn same_class_contradictions_cancel() {
        let carrier = ["a", "b"];
        let candidates: BTreeSet<EntityId> = carrier.iter().map(|s| id(s)).collect();
        let one = conclusion(PrefClass::Lf, &[("a", "b")], &carrier);
        let two = conclusion(PrefClass::Lf, &[("b", "a")], &carrier);
        let base = combine(&[one, two], &candidates);
        assert!(base.order.is_unordered());
    }

    #[test]
    fn empty_conclusions_yield_empty_order() {
        let candidates: BTreeSet<EntityId> = [id("a"), id("b")].into();
        let base = combine(&[], &candidates);
        assert!(base.order.is_unordered());
        assert_eq!(base.order.carrier(), &candidates);
    }

    #[test]
    fn resolve_unstressed_hit_example() {
        // "John hit Bill. Then he was injured." -> he = Bill via WK(HIT).
        let ctx = hit_context(false);
        let rules = parse_rules("rule HIT: hit(X,Y) ~> hurt(Y).\nsynonym hurt injured.").unwrap();
        let u2 = he_utterance("injured");
        let he = u2.arg("Subj").unwrap();
        let result = resolve_unstressed(he, &u2, &ctx, &rules).unwrap();
        assert_eq!(result.value, BTreeSet::from([id("Bill")]));
        assert_eq!(result.felicity, Felicity::Ok);
        assert!(!result.base.garden_path);
        assert!(result.trace.iter().any(|e| e.rule == "HIT"));
    }

    #[test]
    fn resolve_unstressed_home_example() {
        // "John hit Bill. Mary told him to go home." -> him = John, ATT
        // overriding LF's Bill.
        let ctx = hit_context(false);
        let rules = RuleSet::default();
        let mut u2 = LogicalForm::new("tell_go_home");
        u2.args
            .push(name_arg("Subj", "Mary", Gf::Subject, Gender::Fem));
        u2.args.push(("Obj".to_owned(), pronoun("him", Gf::Object)));
        let him = u2.arg("Obj").unwrap();
        let result = resolve_unstressed(him, &u2, &ctx, &rules).unwrap();
        assert_eq!(result.value, BTreeSet::from([id("John")]));
        assert!(result
            .trace
            .iter()
            .any(|e| e.rule == "OVERRIDE" && e.detail.contains("ATT deletes LF")));
    }

    #[test]
    fn resolve_unstressed_flags_indeterminate_as_ambiguous() {
        // "Jack and Bob are good friends. ??he ..." -> ambiguous.
        let jack = person("Jack", Gender::Masc);
        let bob = person("Bob", Gender::Masc);
        let group = Entity::group("Jack+Bob", vec![jack.id.clone(), bob.id.clone()], Gender::Masc);
        let group_mention = Mention {
            surface: "Jack and Bob".to_owned(),
            kind: MentionKind::DefiniteNp,
            stressed: false,
            gf: Gf::Subject,
            agreement: Agreement::new(Gender::Masc, Number::Pl),
            referent: Some(group.id.clone()),
        };
        let ctx = Context::initial(DiscourseModel::with_entities(vec![jack, bob, group]));
        let u1 = Utterance {
            index: 1,
            lf: LogicalForm {
                predicate: "good_friends".to_owned(),
                args: vec![("Subj".to_owned(), group_mention)],
                negated: false,
            },
            segment_initial: false,
        };
        let ctx = advance(&ctx, &u1).unwrap();
        let u2 = he_utterance("from_louisiana");
        let he = u2.arg("Subj").unwrap();
        let result = resolve_unstressed(he, &u2, &ctx, &RuleSet::default()).unwrap();
        assert_eq!(result.felicity, Felicity::Ambiguous);
        assert_eq!(result.value, BTreeSet::from([id("Bob"), id("Jack")]));
    }
}
