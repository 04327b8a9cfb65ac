//! Domain vocabulary: entities, mentions, logical forms, utterances.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a discourse entity, unique within a discourse run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        EntityId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        EntityId(s.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Masc,
    Fem,
    Neut,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Sg,
    Pl,
}

/// Grammatical person.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Person {
    First,
    Second,
    Third,
}

/// General-class tag of an entity. `Person` admits personal he/she pronouns;
/// `Group` entities carry their member list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Sort {
    Person,
    Place,
    Group,
    Thing,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sort::Person => "PERSON",
            Sort::Place => "PLACE",
            Sort::Group => "GROUP",
            Sort::Thing => "THING",
        };
        f.write_str(s)
    }
}

/// A discourse entity. Most are introduced by mentions; accommodated
/// entities enter silently to license a stressed pronoun.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub name: String,
    pub sort: Sort,
    pub gender: Gender,
    pub number: Number,
    pub person: Person,
    /// Member ids when sort = Group; empty otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<EntityId>,
    /// True when the entity was introduced by accommodation rather than
    /// by a mention.
    #[serde(default)]
    pub accommodated: bool,
}

impl Entity {
    pub fn new(id: impl Into<String>, sort: Sort, gender: Gender, number: Number) -> Self {
        let id = id.into();
        Entity {
            name: id.clone(),
            id: EntityId::new(id),
            sort,
            gender,
            number,
            person: Person::Third,
            members: Vec::new(),
            accommodated: false,
        }
    }

    /// A group entity over the given members. Number is plural by
    /// construction; gender is the members' shared gender or unknown.
    pub fn group(id: impl Into<String>, members: Vec<EntityId>, gender: Gender) -> Self {
        let id = id.into();
        Entity {
            name: id.clone(),
            id: EntityId::new(id),
            sort: Sort::Group,
            gender,
            number: Number::Pl,
            person: Person::Third,
            members,
            accommodated: false,
        }
    }
}

/// Registry of all entities in a discourse run (the domain of individuals).
pub type EntityRegistry = BTreeMap<EntityId, Entity>;

/// Agreement features carried by a mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    pub gender: Gender,
    pub number: Number,
    pub person: Person,
}

impl Agreement {
    pub fn new(gender: Gender, number: Number) -> Self {
        Agreement {
            gender,
            number,
            person: Person::Third,
        }
    }

    /// Feature match between a pronoun's agreement and an entity.
    /// Gender `Unknown` on either side is compatible with anything;
    /// number and person must match exactly.
    pub fn admits(&self, entity: &Entity) -> bool {
        let gender_ok = self.gender == Gender::Unknown
            || entity.gender == Gender::Unknown
            || self.gender == entity.gender;
        gender_ok && self.number == entity.number && self.person == entity.person
    }
}

/// Nominal expression type, ranked `ZeroPronominal > Pronoun > DefiniteNp
/// > IndefiniteNp`. Proper names count as definite NPs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MentionKind {
    ZeroPronominal,
    Pronoun,
    DefiniteNp,
    IndefiniteNp,
}

impl MentionKind {
    /// True for the pronominal kinds, the only ones that can output the
    /// Center.
    pub fn is_pronominal(self) -> bool {
        matches!(self, MentionKind::ZeroPronominal | MentionKind::Pronoun)
    }
}

/// Grammatical function, ranked `Subject > Object > Object2 > Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gf {
    Subject,
    Object,
    Object2,
    Other,
}

impl Gf {
    pub fn rank(self) -> u8 {
        match self {
            Gf::Subject => 0,
            Gf::Object => 1,
            Gf::Object2 => 2,
            Gf::Other => 3,
        }
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gf::Subject => "Subj",
            Gf::Object => "Obj",
            Gf::Object2 => "Obj2",
            Gf::Other => "Other",
        };
        f.write_str(s)
    }
}

/// One argument phrase of a logical form.
///
/// Non-pronoun mentions come with their referent pre-resolved; a pronoun
/// to be resolved has `referent = None` until resolution binds it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    pub surface: String,
    pub kind: MentionKind,
    #[serde(default)]
    pub stressed: bool,
    pub gf: Gf,
    pub agreement: Agreement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub referent: Option<EntityId>,
}

impl Mention {
    pub fn is_unresolved_pronoun(&self) -> bool {
        self.kind.is_pronominal() && self.referent.is_none()
    }
}

/// Predicate-argument structure preserving grammatical functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalForm {
    pub predicate: String,
    /// (role label, mention) pairs in surface order. Role labels are the
    /// annotation keys (`Subj`, `Obj`, adjunct names) used to address
    /// arguments from expectations.
    pub args: Vec<(String, Mention)>,
    #[serde(default)]
    pub negated: bool,
}

impl LogicalForm {
    pub fn new(predicate: impl Into<String>) -> Self {
        LogicalForm {
            predicate: predicate.into(),
            args: Vec::new(),
            negated: false,
        }
    }

    pub fn arg(&self, role: &str) -> Option<&Mention> {
        self.args.iter().find(|(r, _)| r == role).map(|(_, m)| m)
    }

    /// Entity ids realized by this LF, in GF-rank order then surface
    /// order. A mention whose referent is a group realizes the group's
    /// members as well as the group itself.
    pub fn realized(&self, registry: &EntityRegistry) -> Vec<EntityId> {
        let mut args: Vec<&(String, Mention)> = self.args.iter().collect();
        args.sort_by_key(|(_, m)| m.gf.rank());
        let mut out = Vec::new();
        for (_, mention) in args {
            let Some(referent) = &mention.referent else {
                continue;
            };
            if let Some(entity) = registry.get(referent) {
                for member in &entity.members {
                    if !out.contains(member) {
                        out.push(member.clone());
                    }
                }
            }
            if !out.contains(referent) {
                out.push(referent.clone());
            }
        }
        out
    }

    /// The subject/object/object2 arguments in GF-rank order. These carry
    /// the utterance's predicate-argument structure into the discourse
    /// model; adjuncts affect salience but not the asserted proposition.
    pub fn core_args(&self) -> Vec<&(String, Mention)> {
        let mut core: Vec<&(String, Mention)> = self
            .args
            .iter()
            .filter(|(_, m)| m.gf != Gf::Other)
            .collect();
        core.sort_by_key(|(_, m)| m.gf.rank());
        core
    }

    /// The lowest GF rank (i.e. most prominent function) at which `id` is
    /// realized, counting group members as realized at the group
    /// mention's function.
    pub fn gf_of(&self, id: &EntityId, registry: &EntityRegistry) -> Option<Gf> {
        let mut best: Option<Gf> = None;
        for (_, mention) in &self.args {
            let Some(referent) = &mention.referent else {
                continue;
            };
            let covers = referent == id
                || registry
                    .get(referent)
                    .is_some_and(|e| e.members.contains(id));
            if covers {
                best = Some(match best {
                    Some(b) if b.rank() <= mention.gf.rank() => b,
                    _ => mention.gf,
                });
            }
        }
        best
    }
}

/// One utterance of a discourse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    /// 1-based position; contiguous within a discourse.
    pub index: usize,
    pub lf: LogicalForm,
    #[serde(default)]
    pub segment_initial: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn registry_with(entities: Vec<Entity>) -> EntityRegistry {
        entities.into_iter().map(|e| (e.id.clone(), e)).collect()
    }

    fn name_mention(id: &str, gf: Gf) -> Mention {
        Mention {
            surface: id.to_owned(),
            kind: MentionKind::DefiniteNp,
            stressed: false,
            gf,
            agreement: Agreement::new(Gender::Masc, Number::Sg),
            referent: Some(EntityId::from(id)),
        }
    }

    #[test]
    fn agreement_admits_matching_entity() {
        let john = Entity::new("John", Sort::Person, Gender::Masc, Number::Sg);
        let he = Agreement::new(Gender::Masc, Number::Sg);
        let she = Agreement::new(Gender::Fem, Number::Sg);
        let they = Agreement::new(Gender::Unknown, Number::Pl);
        assert!(he.admits(&john));
        assert!(!she.admits(&john));
        assert!(!they.admits(&john));
    }

    #[test]
    fn realized_orders_by_gf_rank() {
        let registry = registry_with(vec![
            Entity::new("John", Sort::Person, Gender::Masc, Number::Sg),
            Entity::new("Bill", Sort::Person, Gender::Masc, Number::Sg),
        ]);
        let mut lf = LogicalForm::new("hit");
        // Object listed first; subject must still come out first.
        lf.args.push(("Obj".into(), name_mention("Bill", Gf::Object)));
        lf.args
            .push(("Subj".into(), name_mention("John", Gf::Subject)));
        let realized = lf.realized(&registry);
        assert_eq!(realized, vec![EntityId::from("John"), EntityId::from("Bill")]);
    }

    #[test]
    fn group_mention_realizes_members_and_group() {
        let jack = Entity::new("Jack", Sort::Person, Gender::Masc, Number::Sg);
        let bob = Entity::new("Bob", Sort::Person, Gender::Masc, Number::Sg);
        let group = Entity::group(
            "Jack+Bob",
            vec![jack.id.clone(), bob.id.clone()],
            Gender::Masc,
        );
        let group_id = group.id.clone();
        let registry = registry_with(vec![jack, bob, group]);

        let mut lf = LogicalForm::new("good_friends");
        lf.args.push((
            "Subj".into(),
            Mention {
                surface: "Jack and Bob".into(),
                kind: MentionKind::DefiniteNp,
                stressed: false,
                gf: Gf::Subject,
                agreement: Agreement::new(Gender::Masc, Number::Pl),
                referent: Some(group_id.clone()),
            },
        ));
        let realized = lf.realized(&registry);
        assert_eq!(
            realized,
            vec![EntityId::from("Jack"), EntityId::from("Bob"), group_id.clone()]
        );
        assert_eq!(lf.gf_of(&EntityId::from("Bob"), &registry), Some(Gf::Subject));
        assert_eq!(lf.gf_of(&group_id, &registry), Some(Gf::Subject));
    }
}
