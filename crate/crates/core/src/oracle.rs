//! Brute-force oracles, independent of the incremental order machinery.
//!
//! `oracle_reverse` rebuilds a reversal by membership tests alone;
//! `oracle_combine` re-derives the override lattice with plain set logic
//! and recovers the closure as the intersection of all consistent total
//! orders. Both are restricted to small carriers and exist to check the
//! production implementations, so they deliberately avoid calling them.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::domain::EntityId;
use crate::order::{PrefClass, StrictPartialOrder, SupportSet};
use crate::resolver::ClassConclusion;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle carriers are limited to {limit} elements, got {got}")]
    CarrierTooLarge { limit: usize, got: usize },
}

/// Reversal by enumerating every ordered pair of the carrier and testing
/// membership in the input.
pub fn oracle_reverse(order: &StrictPartialOrder) -> Result<StrictPartialOrder, OracleError> {
    let carrier = order.carrier();
    if carrier.len() > 5 {
        return Err(OracleError::CarrierTooLarge {
            limit: 5,
            got: carrier.len(),
        });
    }
    let mut pairs: BTreeMap<(EntityId, EntityId), SupportSet> = BTreeMap::new();
    for x in carrier {
        for y in carrier {
            if x != y && order.holds(y, x) {
                let support = order
                    .support(y, x)
                    .cloned()
                    .unwrap_or_default();
                pairs.insert((x.clone(), y.clone()), support);
            }
        }
    }
    Ok(StrictPartialOrder::from_closed_pairs(carrier.clone(), pairs)
        .expect("reversal of a valid order is valid"))
}

/// All permutations of the given elements.
fn permutations(elements: &[EntityId]) -> Vec<Vec<EntityId>> {
    if elements.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, head) in elements.iter().enumerate() {
        let mut rest: Vec<EntityId> = elements.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Reachability over a raw (not closed) pair set.
fn reaches(
    pairs: &BTreeSet<(EntityId, EntityId)>,
    from: &EntityId,
    to: &EntityId,
) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack = vec![from.clone()];
    while let Some(node) = stack.pop() {
        if &node == to {
            return true;
        }
        if !seen.insert(node.clone()) {
            continue;
        }
        for (x, y) in pairs {
            if x == &node {
                stack.push(y.clone());
            }
        }
    }
    false
}

/// Independent re-derivation of the override combination: per-class pair
/// sets with mutual contradictions cancelled, lattice-filtered strongest
/// class first (skipping anything that would close a cycle), then the
/// intersection of all total orders consistent with the surviving raw
/// pairs.
pub fn oracle_combine(
    conclusions: &[ClassConclusion],
    candidates: &BTreeSet<EntityId>,
) -> Result<StrictPartialOrder, OracleError> {
    if candidates.len() > 4 {
        return Err(OracleError::CarrierTooLarge {
            limit: 4,
            got: candidates.len(),
        });
    }
    let mut by_class: BTreeMap<PrefClass, BTreeSet<(EntityId, EntityId)>> = BTreeMap::new();
    for conclusion in conclusions {
        by_class
            .entry(conclusion.class)
            .or_default()
            .extend(conclusion.order.pair_keys());
    }
    for pairs in by_class.values_mut() {
        let snapshot = pairs.clone();
        pairs.retain(|(x, y)| !snapshot.contains(&(y.clone(), x.clone())));
    }

    let mut selected: BTreeSet<(EntityId, EntityId)> = BTreeSet::new();
    for class in [PrefClass::Wk, PrefClass::Att, PrefClass::Lf] {
        let Some(pairs) = by_class.get(&class) else {
            continue;
        };
        for (x, y) in pairs {
            if reaches(&selected, y, x) {
                continue;
            }
            selected.insert((x.clone(), y.clone()));
        }
    }

    let elements: Vec<EntityId> = candidates.iter().cloned().collect();
    let consistent: Vec<Vec<EntityId>> = permutations(&elements)
        .into_iter()
        .filter(|perm| {
            selected.iter().all(|(x, y)| {
                let px = perm.iter().position(|e| e == x).expect("pair in carrier");
                let py = perm.iter().position(|e| e == y).expect("pair in carrier");
                px < py
            })
        })
        .collect();

    let mut pairs: BTreeMap<(EntityId, EntityId), SupportSet> = BTreeMap::new();
    for x in candidates {
        for y in candidates {
            if x == y {
                continue;
            }
            let always_before = !consistent.is_empty()
                && consistent.iter().all(|perm| {
                    let px = perm.iter().position(|e| e == x).unwrap();
                    let py = perm.iter().position(|e| e == y).unwrap();
                    px < py
                });
            if always_before {
                pairs.insert((x.clone(), y.clone()), SupportSet::new());
            }
        }
    }
    Ok(
        StrictPartialOrder::from_closed_pairs(candidates.clone(), pairs)
            .expect("intersection of total orders is a valid order"),
    )
}

/// Exhaustively enumerate every strict partial order over the given
/// labels by filtering all pair subsets for irreflexivity, transitivity,
/// and acyclicity. Feasible for up to 4 labels.
pub fn enumerate_orders(labels: &[&str]) -> Vec<StrictPartialOrder> {
    let ids: Vec<EntityId> = labels.iter().map(|l| EntityId::from(*l)).collect();
    let mut all_pairs = Vec::new();
    for x in &ids {
        for y in &ids {
            if x != y {
                all_pairs.push((x.clone(), y.clone()));
            }
        }
    }
    let carrier: BTreeSet<EntityId> = ids.iter().cloned().collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << all_pairs.len()) {
        let subset: BTreeMap<(EntityId, EntityId), SupportSet> = all_pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| (p.clone(), SupportSet::new()))
            .collect();
        if let Ok(order) = StrictPartialOrder::from_closed_pairs(carrier.clone(), subset) {
            out.push(order);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolver::Strength;

    fn id(s: &str) -> EntityId {
        EntityId::from(s)
    }

    fn chain(labels: &[&str]) -> StrictPartialOrder {
        let mut order = StrictPartialOrder::new(labels.iter().copied());
        for window in labels.windows(2) {
            order
                .add_pair(&id(window[0]), &id(window[1]), &SupportSet::new())
                .unwrap();
        }
        order
    }

    #[test]
    fn there_are_19_labeled_posets_on_three_elements() {
        assert_eq!(enumerate_orders(&["a", "b", "c"]).len(), 19);
    }

    #[test]
    fn there_are_219_labeled_posets_on_four_elements() {
        assert_eq!(enumerate_orders(&["a", "b", "c", "d"]).len(), 219);
    }

    #[test]
    fn oracle_reverse_agrees_on_all_three_element_orders() {
        for order in enumerate_orders(&["a", "b", "c"]) {
            assert_eq!(oracle_reverse(&order).unwrap(), order.reverse());
        }
    }

    #[test]
    fn oracle_reverse_of_empty_and_total_orders() {
        let empty = StrictPartialOrder::new(Vec::<EntityId>::new());
        assert_eq!(oracle_reverse(&empty).unwrap(), empty);

        let total = chain(&["a", "b", "c"]);
        let reversed = oracle_reverse(&total).unwrap();
        assert!(reversed.holds(&id("c"), &id("b")));
        assert!(reversed.holds(&id("b"), &id("a")));
        assert!(reversed.holds(&id("c"), &id("a")));
        assert_eq!(reversed.pair_count(), 3);
    }

    #[test]
    fn oracle_reverse_rejects_large_carriers() {
        let order = StrictPartialOrder::new(["a", "b", "c", "d", "e", "f"]);
        assert!(matches!(
            oracle_reverse(&order),
            Err(OracleError::CarrierTooLarge { .. })
        ));
    }

    #[test]
    fn oracle_combine_single_class_is_identity_on_pairs() {
        let candidates: BTreeSet<EntityId> = [id("a"), id("b"), id("c")].into();
        let conclusion = ClassConclusion {
            class: PrefClass::Att,
            order: chain(&["a", "b"]),
            strength: Strength::Normal,
            note: String::new(),
        };
        let combined = oracle_combine(std::slice::from_ref(&conclusion), &candidates).unwrap();
        assert_eq!(combined.pair_keys(), conclusion.order.pair_keys());
    }

    #[test]
    fn oracle_combine_empty_conclusions_is_empty() {
        let candidates: BTreeSet<EntityId> = [id("a"), id("b")].into();
        let combined = oracle_combine(&[], &candidates).unwrap();
        assert!(combined.is_unordered());
    }
}
