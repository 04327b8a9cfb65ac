//! Salience dynamics: how each utterance rebuilds the attentional state.
//!
//! The output salience order over the realized entities comes from the
//! grammatical function hierarchy (Subject > Object > Object2 > others),
//! adjusted by Centerhood: a Center realized at the subject converges with
//! the GF ranking; a Center realized elsewhere competes with the subject,
//! leaving the two mutually incomparable. Entities from earlier utterances
//! in the segment drop to the background, strictly below everything local.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{EntityId, EntityRegistry, Gf, LogicalForm, Utterance};
use crate::knowledge::{DiscourseModel, Proposition, Term};
use crate::order::{StrictPartialOrder, SupportSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttentionError {
    #[error("mention '{0}' is unresolved")]
    UnresolvedMention(String),
}

/// The Center of the current segment and how it got here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterRecord {
    pub entity: EntityId,
    pub realized_gf: Gf,
    /// 1 when freshly established; grows only while the same entity is
    /// chained by consecutive subject pronouns.
    pub chain_length: u32,
}

/// Attentional state after an utterance: the local subset (entities
/// realized by the registered LF), the salience order over local plus
/// background, the Center, and the backgrounded remainder of the segment.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttentionalState {
    pub local: Vec<EntityId>,
    pub salience: StrictPartialOrder,
    pub center: Option<CenterRecord>,
    pub background: BTreeSet<EntityId>,
}

impl AttentionalState {
    /// Variant with Center and background dropped, used at segment onset.
    pub fn segment_reset(&self) -> AttentionalState {
        let local_set: BTreeSet<EntityId> = self.local.iter().cloned().collect();
        AttentionalState {
            local: self.local.clone(),
            salience: self
                .salience
                .restrict(&local_set)
                .expect("local is a subset of the salience carrier"),
            center: None,
            background: BTreeSet::new(),
        }
    }
}

/// The context triple: LF register, attentional state, discourse model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    pub lf_register: Option<LogicalForm>,
    pub attention: AttentionalState,
    pub model: DiscourseModel,
}

impl Context {
    pub fn initial(model: DiscourseModel) -> Self {
        Context {
            lf_register: None,
            attention: AttentionalState::default(),
            model,
        }
    }
}

/// Salience order over the entities realized by a resolved LF.
pub fn project_salience(
    lf: &LogicalForm,
    center: Option<&CenterRecord>,
    registry: &EntityRegistry,
) -> Result<StrictPartialOrder, AttentionError> {
    if let Some((_, m)) = lf.args.iter().find(|(_, m)| m.referent.is_none()) {
        return Err(AttentionError::UnresolvedMention(m.surface.clone()));
    }
    let realized = lf.realized(registry);
    let ranks: BTreeMap<EntityId, u8> = realized
        .iter()
        .map(|id| {
            let gf = lf.gf_of(id, registry).expect("realized entity has a GF");
            (id.clone(), gf.rank())
        })
        .collect();
    let mut order = StrictPartialOrder::new(realized.iter().cloned());
    let no_support = SupportSet::new();

    let center = center.filter(|c| ranks.contains_key(&c.entity));
    let diverging_center = center.filter(|c| c.realized_gf != Gf::Subject);

    // GF ORDER, leaving a non-subject Center out of any pair against the
    // subject rank.
    for (x, rx) in &ranks {
        for (y, ry) in &ranks {
            if rx >= ry {
                continue;
            }
            if let Some(c) = diverging_center {
                let crosses_center = (&c.entity == x && *ry == 0) || (&c.entity == y && *rx == 0);
                if crosses_center {
                    continue;
                }
            }
            order
                .add_pair(x, y, &no_support)
                .expect("GF rank pairs cannot cycle");
        }
    }
    // CENTER: the Center outranks the rest. When it is realized at the
    // subject the pairs are already there or converge; when not, the
    // subject rank stays incomparable to it.
    if let Some(c) = center {
        for y in ranks.keys() {
            if y == &c.entity {
                continue;
            }
            if diverging_center.is_some() && ranks[y] == 0 {
                continue;
            }
            if order.admits_pair(&c.entity, y) {
                order
                    .add_pair(&c.entity, y, &no_support)
                    .expect("admissibility checked");
            }
        }
    }
    Ok(order)
}

/// The output Center: the highest-ranked pronominal of the utterance
/// establishes or chains it; an utterance without pronominals outputs no
/// Center at all.
pub fn update_center(
    lf: &LogicalForm,
    input: &AttentionalState,
    _registry: &EntityRegistry,
) -> Option<CenterRecord> {
    let mut pronominals: Vec<_> = lf
        .args
        .iter()
        .filter(|(_, m)| m.kind.is_pronominal() && m.referent.is_some())
        .collect();
    pronominals.sort_by_key(|(_, m)| (m.kind, m.gf.rank()));
    let (_, best) = pronominals.first()?;
    let entity = best.referent.clone().expect("filtered on referent");

    let chained = input
        .center
        .as_ref()
        .is_some_and(|c| c.entity == entity);
    let chain_length = if chained && best.gf == Gf::Subject {
        input.center.as_ref().unwrap().chain_length + 1
    } else {
        1
    };
    Some(CenterRecord {
        entity,
        realized_gf: best.gf,
        chain_length,
    })
}

/// Context transition: register a fully resolved utterance.
pub fn advance(ctx: &Context, resolved: &Utterance) -> Result<Context, AttentionError> {
    let registry = &ctx.model.entities;
    if let Some((_, m)) = resolved.lf.args.iter().find(|(_, m)| m.referent.is_none()) {
        return Err(AttentionError::UnresolvedMention(m.surface.clone()));
    }
    let input = if resolved.segment_initial {
        ctx.attention.segment_reset()
    } else {
        ctx.attention.clone()
    };

    let center = update_center(&resolved.lf, &input, registry);
    let local = resolved.lf.realized(registry);
    let mut salience = project_salience(&resolved.lf, center.as_ref(), registry)?;

    let local_set: BTreeSet<EntityId> = local.iter().cloned().collect();
    let mut background: BTreeSet<EntityId> = input
        .local
        .iter()
        .cloned()
        .chain(input.background.iter().cloned())
        .filter(|id| !local_set.contains(id))
        .collect();
    if resolved.segment_initial {
        background.clear();
    }
    let no_support = SupportSet::new();
    for bg in &background {
        salience.insert_element(bg.clone());
    }
    for id in &local {
        for bg in &background {
            salience
                .add_pair(id, bg, &no_support)
                .expect("background sits below all local entities");
        }
    }

    let mut model = ctx.model.clone();
    let args: Vec<Term> = resolved
        .lf
        .core_args()
        .iter()
        .map(|(_, m)| Term::Entity(m.referent.clone().expect("checked above")))
        .collect();
    model.assert_fact(Proposition {
        predicate: resolved.lf.predicate.clone(),
        args,
        negated: resolved.lf.negated,
    });

    Ok(Context {
        lf_register: Some(resolved.lf.clone()),
        attention: AttentionalState {
            local,
            salience,
            center,
            background,
        },
        model,
    })
}

/// The input local attentional state: the candidate pool shared by both
/// pronoun kinds, with the salience order restricted to it.
pub fn local_state(ctx: &Context) -> (Vec<EntityId>, StrictPartialOrder) {
    let local_set: BTreeSet<EntityId> = ctx.attention.local.iter().cloned().collect();
    let order = ctx
        .attention
        .salience
        .restrict(&local_set)
        .expect("local is a subset of the salience carrier");
    (ctx.attention.local.clone(), order)
}
