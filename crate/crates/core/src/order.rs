//! Strict-partial-order algebra for salience and preference orderings.
//!
//! Orders are kept transitively closed after every mutation, so conflict
//! detection is a single pair lookup. Each pair carries the set of
//! preference classes supporting it; salience orders carry no support.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::EntityId;

/// Preference class tag attached to order pairs. Variant order is
/// lattice strength: WK can override ATT, ATT can override LF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PrefClass {
    Wk,
    Att,
    Lf,
}

impl fmt::Display for PrefClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PrefClass::Wk => "WK",
            PrefClass::Att => "ATT",
            PrefClass::Lf => "LF",
        };
        f.write_str(s)
    }
}

pub type SupportSet = BTreeSet<PrefClass>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("adding {x} > {y} would create a cycle")]
    Cycle { x: EntityId, y: EntityId },
    #[error("entity {0} is not in the carrier")]
    UnknownEntity(EntityId),
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("{0} is not a subset of the carrier")]
    NotASubset(EntityId),
}

/// A strict partial order over entity ids: irreflexive, transitive,
/// acyclic, stored transitively closed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OrderRepr", into = "OrderRepr")]
pub struct StrictPartialOrder {
    carrier: BTreeSet<EntityId>,
    pairs: BTreeMap<(EntityId, EntityId), SupportSet>,
}

/// Serialization mirror: pair keys flattened into records so the order
/// round-trips through JSON.
#[derive(Serialize, Deserialize)]
struct OrderRepr {
    carrier: BTreeSet<EntityId>,
    pairs: Vec<PairRepr>,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    above: EntityId,
    below: EntityId,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    support: SupportSet,
}

impl From<StrictPartialOrder> for OrderRepr {
    fn from(order: StrictPartialOrder) -> Self {
        OrderRepr {
            carrier: order.carrier,
            pairs: order
                .pairs
                .into_iter()
                .map(|((above, below), support)| PairRepr {
                    above,
                    below,
                    support,
                })
                .collect(),
        }
    }
}

impl TryFrom<OrderRepr> for StrictPartialOrder {
    type Error = OrderError;

    fn try_from(repr: OrderRepr) -> Result<Self, OrderError> {
        let pairs = repr
            .pairs
            .into_iter()
            .map(|p| ((p.above, p.below), p.support))
            .collect();
        StrictPartialOrder::from_closed_pairs(repr.carrier, pairs)
    }
}

impl StrictPartialOrder {
    /// Empty order over the given carrier.
    pub fn new<I, T>(carrier: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<EntityId>,
    {
        StrictPartialOrder {
            carrier: carrier.into_iter().map(Into::into).collect(),
            pairs: BTreeMap::new(),
        }
    }

    /// Build from an already transitively closed pair map, validating the
    /// order axioms directly (irreflexivity, transitivity, carrier
    /// membership). Used by the brute-force oracles so they stay off the
    /// incremental closure path.
    pub fn from_closed_pairs(
        carrier: BTreeSet<EntityId>,
        pairs: BTreeMap<(EntityId, EntityId), SupportSet>,
    ) -> Result<Self, OrderError> {
        for (x, y) in pairs.keys() {
            if x == y {
                return Err(OrderError::Cycle {
                    x: x.clone(),
                    y: y.clone(),
                });
            }
            if !carrier.contains(x) {
                return Err(OrderError::UnknownEntity(x.clone()));
            }
            if !carrier.contains(y) {
                return Err(OrderError::UnknownEntity(y.clone()));
            }
        }
        for (a, b) in pairs.keys() {
            for (c, d) in pairs.keys() {
                if b == c && !pairs.contains_key(&(a.clone(), d.clone())) {
                    return Err(OrderError::Cycle {
                        x: a.clone(),
                        y: d.clone(),
                    });
                }
            }
        }
        Ok(StrictPartialOrder { carrier, pairs })
    }

    pub fn carrier(&self) -> &BTreeSet<EntityId> {
        &self.carrier
    }

    pub fn contains(&self, id: &EntityId) -> bool {
        self.carrier.contains(id)
    }

    pub fn insert_element(&mut self, id: EntityId) {
        self.carrier.insert(id);
    }

    /// True when x strictly outranks y.
    pub fn holds(&self, x: &EntityId, y: &EntityId) -> bool {
        self.pairs.contains_key(&(x.clone(), y.clone()))
    }

    pub fn incomparable(&self, x: &EntityId, y: &EntityId) -> bool {
        x != y && !self.holds(x, y) && !self.holds(y, x)
    }

    pub fn support(&self, x: &EntityId, y: &EntityId) -> Option<&SupportSet> {
        self.pairs.get(&(x.clone(), y.clone()))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&EntityId, &EntityId, &SupportSet)> {
        self.pairs.iter().map(|((x, y), s)| (x, y, s))
    }

    pub fn pair_keys(&self) -> BTreeSet<(EntityId, EntityId)> {
        self.pairs.keys().cloned().collect()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_unordered(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Add x > y and recompute the transitive closure. The support set is
    /// unioned onto every pair the addition induces (including already
    /// present ones).
    pub fn add_pair(
        &mut self,
        x: &EntityId,
        y: &EntityId,
        support: &SupportSet,
    ) -> Result<(), OrderError> {
        if !self.carrier.contains(x) {
            return Err(OrderError::UnknownEntity(x.clone()));
        }
        if !self.carrier.contains(y) {
            return Err(OrderError::UnknownEntity(y.clone()));
        }
        if x == y || self.holds(y, x) {
            return Err(OrderError::Cycle {
                x: x.clone(),
                y: y.clone(),
            });
        }
        // Everything at or above x, paired with everything at or below y.
        let mut uppers: Vec<EntityId> = vec![x.clone()];
        let mut lowers: Vec<EntityId> = vec![y.clone()];
        for id in &self.carrier {
            if self.holds(id, x) {
                uppers.push(id.clone());
            }
            if self.holds(y, id) {
                lowers.push(id.clone());
            }
        }
        for a in &uppers {
            for b in &lowers {
                if a == b || self.holds(b, a) {
                    return Err(OrderError::Cycle {
                        x: x.clone(),
                        y: y.clone(),
                    });
                }
            }
        }
        for a in uppers {
            for b in &lowers {
                self.pairs
                    .entry((a.clone(), b.clone()))
                    .or_default()
                    .extend(support.iter().copied());
            }
        }
        Ok(())
    }

    /// Whether x > y could be added without creating a cycle.
    pub fn admits_pair(&self, x: &EntityId, y: &EntityId) -> bool {
        x != y && self.carrier.contains(x) && self.carrier.contains(y) && !self.holds(y, x)
    }

    /// Pairwise reversal: every x > y becomes y > x; incomparable pairs
    /// stay incomparable; supports move with their pair.
    pub fn reverse(&self) -> StrictPartialOrder {
        let pairs = self
            .pairs
            .iter()
            .map(|((x, y), s)| ((y.clone(), x.clone()), s.clone()))
            .collect();
        StrictPartialOrder {
            carrier: self.carrier.clone(),
            pairs,
        }
    }

    /// All elements with nothing ranked above them.
    pub fn maximal(&self) -> Result<BTreeSet<EntityId>, OrderError> {
        if self.carrier.is_empty() {
            return Err(OrderError::EmptyCarrier);
        }
        Ok(self
            .carrier
            .iter()
            .filter(|x| !self.carrier.iter().any(|y| self.holds(y, x)))
            .cloned()
            .collect())
    }

    /// Restriction to a subset of the carrier.
    pub fn restrict(&self, subset: &BTreeSet<EntityId>) -> Result<StrictPartialOrder, OrderError> {
        if let Some(missing) = subset.iter().find(|id| !self.carrier.contains(id)) {
            return Err(OrderError::NotASubset(missing.clone()));
        }
        let pairs = self
            .pairs
            .iter()
            .filter(|((x, y), _)| subset.contains(x) && subset.contains(y))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(StrictPartialOrder {
            carrier: subset.clone(),
            pairs,
        })
    }
}

impl fmt::Display for StrictPartialOrder {
    /// Chain rendering when the order is total (`a > b > c`); otherwise
    /// a sorted pair list, with lone elements listed up front.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.carrier.is_empty() {
            return f.write_str("(empty)");
        }
        if self.carrier.len() == 1 {
            return f.write_str(self.carrier.iter().next().unwrap().as_str());
        }
        let n = self.carrier.len();
        if self.pairs.len() == n * (n - 1) / 2 && n > 1 {
            let mut chain: Vec<&EntityId> = self.carrier.iter().collect();
            chain.sort_by_key(|x| self.carrier.iter().filter(|y| self.holds(y, x)).count());
            let rendered: Vec<&str> = chain.iter().map(|id| id.as_str()).collect();
            return f.write_str(&rendered.join(" > "));
        }
        if self.pairs.is_empty() {
            let rendered: Vec<&str> = self.carrier.iter().map(|id| id.as_str()).collect();
            return write!(f, "{} (unordered)", rendered.join(" <> "));
        }
        let mut parts = Vec::new();
        for (x, y) in self.pairs.keys() {
            parts.push(format!("{x} > {y}"));
        }
        f.write_str(&parts.join(", "))
    }
}
