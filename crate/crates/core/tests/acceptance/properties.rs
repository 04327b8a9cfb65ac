//! Randomized property suites (criterion 10), 10,000 cases each.
//!
//! The order-algebra suites go through proptest; the pipeline suites
//! drive the full engine over generated two-utterance discourses with a
//! deterministic seeded generator, comparing the stressed and unstressed
//! runs of the same position.

use std::collections::BTreeSet;

use proptest::prelude::*;

use antecede::{
    combine, oracle_combine, oracle_reverse, parse_document, run, ClassConclusion,
    DiscourseDocument, EntityId, Gender, Number, PrefClass, Sort, Strength, StrictPartialOrder,
    SupportSet,
};

const CASES: u32 = 10_000;

// ---------------------------------------------------------------------
// Deterministic helper RNG (xorshift64*), so the pipeline suites replay
// identically from their printed seeds.
// ---------------------------------------------------------------------

struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(seed.wrapping_mul(2685821657736338717).max(1))
    }

    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(2685821657736338717)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    fn flip(&mut self) -> bool {
        self.next() & 1 == 0
    }
}

// ---------------------------------------------------------------------
// Random orders
// ---------------------------------------------------------------------

fn build_order(n: usize, seed: u64) -> StrictPartialOrder {
    let mut rng = Rng::new(seed);
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut order = StrictPartialOrder::new(labels.iter().map(|l| l.as_str()));
    let mut linear: Vec<EntityId> = labels.iter().map(|l| EntityId::from(l.as_str())).collect();
    // Fisher-Yates; pairs drawn from a random linear extension stay acyclic.
    for i in (1..linear.len()).rev() {
        linear.swap(i, rng.below(i + 1));
    }
    let classes = [PrefClass::Wk, PrefClass::Att, PrefClass::Lf];
    for i in 0..linear.len() {
        for j in (i + 1)..linear.len() {
            if rng.flip() {
                continue;
            }
            let mut support = SupportSet::new();
            for class in classes {
                if rng.below(3) == 0 {
                    support.insert(class);
                }
            }
            order
                .add_pair(&linear[i], &linear[j], &support)
                .expect("pairs from a linear extension cannot cycle");
        }
    }
    order
}

fn arb_order(max_n: usize) -> impl Strategy<Value = StrictPartialOrder> {
    (0..=max_n, any::<u64>()).prop_map(|(n, seed)| build_order(n, seed))
}

fn arb_conclusions() -> impl Strategy<Value = (Vec<ClassConclusion>, BTreeSet<EntityId>)> {
    (1..=4usize, 0..=4usize, any::<u64>()).prop_map(|(n, k, seed)| {
        let mut rng = Rng::new(seed);
        let candidates: BTreeSet<EntityId> = (0..n).map(|i| EntityId::new(format!("e{i}"))).collect();
        let classes = [PrefClass::Wk, PrefClass::Att, PrefClass::Lf];
        let conclusions = (0..k)
            .map(|_| {
                let class = classes[rng.below(3)];
                let order = build_order(n, rng.next());
                ClassConclusion {
                    class,
                    order,
                    strength: if rng.flip() {
                        Strength::Normal
                    } else {
                        Strength::Extreme
                    },
                    note: String::new(),
                }
            })
            .collect();
        (conclusions, candidates)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, ..ProptestConfig::default() })]

    #[test]
    fn reversal_involution(order in arb_order(5)) {
        prop_assert_eq!(order.reverse().reverse(), order);
    }

    #[test]
    fn reversal_preserves_incomparability(order in arb_order(5)) {
        let reversed = order.reverse();
        for x in order.carrier() {
            for y in order.carrier() {
                prop_assert_eq!(order.incomparable(x, y), reversed.incomparable(x, y));
            }
        }
    }

    #[test]
    fn singleton_reversal_fixpoint(order in arb_order(5)) {
        for x in order.carrier() {
            let singleton: BTreeSet<EntityId> = BTreeSet::from([x.clone()]);
            let restricted = order.restrict(&singleton).unwrap();
            prop_assert_eq!(restricted.reverse(), restricted);
        }
    }

    #[test]
    fn oracle_reverse_matches_reverse(order in arb_order(5)) {
        prop_assert_eq!(oracle_reverse(&order).unwrap(), order.reverse());
    }

    #[test]
    fn oracle_combine_matches_combine((conclusions, candidates) in arb_conclusions()) {
        let combined = combine(&conclusions, &candidates);
        let oracle = oracle_combine(&conclusions, &candidates).unwrap();
        prop_assert_eq!(combined.order.carrier(), oracle.carrier());
        prop_assert_eq!(combined.order.pair_keys(), oracle.pair_keys());
    }
}

// ---------------------------------------------------------------------
// Pipeline suites over generated discourses
// ---------------------------------------------------------------------

const PERSONS: [(&str, &str); 5] = [
    ("Alan", "masc"),
    ("Ben", "masc"),
    ("Carl", "masc"),
    ("Eve", "fem"),
    ("Fay", "fem"),
];

/// A two-utterance discourse: an introducing utterance, sometimes a
/// commonsense rule connecting it to the continuation, then a masculine
/// subject pronoun to resolve.
fn scenario(seed: u64) -> DiscourseDocument {
    let mut rng = Rng::new(seed);
    let a = rng.below(PERSONS.len());
    let mut b = rng.below(PERSONS.len());
    while b == a {
        b = rng.below(PERSONS.len());
    }
    let (name_a, gender_a) = PERSONS[a];
    let (name_b, gender_b) = PERSONS[b];

    let mut text = String::new();
    text.push_str(&format!("entity {name_a} {gender_a} sg PERSON\n"));
    text.push_str(&format!("entity {name_b} {gender_b} sg PERSON\n"));

    let conjoined = rng.flip();
    if conjoined {
        text.push_str(&format!("utterance U1 pred=pals Subj={name_a}+{name_b}:name\n"));
    } else {
        if rng.flip() {
            text.push_str("entity park neut sg PLACE\n");
            text.push_str(&format!(
                "utterance U1 pred=meet Subj={name_a}:name Obj={name_b}:name At=park:def\n"
            ));
        } else {
            text.push_str(&format!(
                "utterance U1 pred=meet Subj={name_a}:name Obj={name_b}:name\n"
            ));
        }
        if rng.flip() {
            text.push_str("rule RZ: meet(X,Y) ~> laugh(Y).\n");
        }
    }
    text.push_str("utterance U2 pred=laugh Subj=?he:pron:masc:sg\n");
    parse_document(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"))
}

fn stressed_variant(doc: &DiscourseDocument) -> DiscourseDocument {
    let mut out = doc.clone();
    let record = out.utterances.last_mut().unwrap();
    let (_, mention) = record
        .utterance
        .lf
        .args
        .iter_mut()
        .find(|(r, _)| r == "Subj")
        .unwrap();
    mention.stressed = true;
    out
}

#[test]
fn syn_sem_is_a_hard_filter() {
    for seed in 0..CASES as u64 {
        let doc = scenario(seed);
        let report = run(&doc);
        let Some(result) = report.pronoun("U2", "Subj") else {
            continue;
        };
        for id in &result.candidates {
            let entity = doc.entity(id).unwrap_or_else(|| panic!("seed {seed}: {id}"));
            assert_eq!(entity.gender, Gender::Masc, "seed {seed}");
            assert_eq!(entity.number, Number::Sg, "seed {seed}");
            assert_eq!(entity.sort, Sort::Person, "seed {seed}");
        }
        for order in [&result.base.order, &result.final_order] {
            for (x, y, _) in order.pairs() {
                assert!(
                    result.candidates.contains(x) && result.candidates.contains(y),
                    "seed {seed}: pair outside H"
                );
            }
        }
    }
    println!("ACCEPTANCE 10 PASS: SYN+SEM hard filter over {CASES} generated discourses");
}

#[test]
fn cph_structural_identity() {
    for seed in 0..CASES as u64 {
        let doc = scenario(seed);
        let stressed_doc = stressed_variant(&doc);
        let unstressed = run(&doc);
        let stressed = run(&stressed_doc);
        match (
            unstressed.pronoun("U2", "Subj"),
            stressed.pronoun("U2", "Subj"),
        ) {
            (Some(u), Some(s)) => {
                assert_eq!(u.candidates, s.candidates, "seed {seed}: same salient subset");
                assert_eq!(u.base, s.base, "seed {seed}: same base preference");
                assert_eq!(
                    s.final_order,
                    u.base.order.reverse(),
                    "seed {seed}: stressed final order is the reversed base"
                );
            }
            (None, None) => {}
            (u, s) => panic!("seed {seed}: asymmetric resolvability {u:?} vs {s:?}"),
        }
    }
    println!("ACCEPTANCE 10 PASS: CPH structural identity over {CASES} generated discourses");
}

#[test]
fn indeterminacy_is_preserved_by_stressing() {
    let mut exercised = 0u32;
    for seed in 0..CASES as u64 {
        let doc = scenario(seed);
        let unstressed = run(&doc);
        let Some(u) = unstressed.pronoun("U2", "Subj") else {
            continue;
        };
        if !u.base.order.is_unordered() {
            continue;
        }
        exercised += 1;
        let stressed = run(&stressed_variant(&doc));
        let s = stressed.pronoun("U2", "Subj").unwrap();
        assert_eq!(s.value, s.candidates, "seed {seed}: maximal(final) = H");
        assert_eq!(u.value, s.value, "seed {seed}");
    }
    assert!(exercised > 1_000, "generator failed to produce indeterminate cases");
    println!(
        "ACCEPTANCE 10 PASS: indeterminacy preserved through stressing ({exercised} of {CASES} non-vacuous)"
    );
}

#[test]
fn unambiguous_pronouns_are_reversal_fixpoints() {
    let mut exercised = 0u32;
    for seed in 0..CASES as u64 {
        let doc = scenario(seed);
        let unstressed = run(&doc);
        let Some(u) = unstressed.pronoun("U2", "Subj") else {
            continue;
        };
        if u.candidates.len() != 1 {
            continue;
        }
        exercised += 1;
        let stressed = run(&stressed_variant(&doc));
        let s = stressed.pronoun("U2", "Subj").unwrap();
        assert_eq!(u.value, s.value, "seed {seed}: stressing cannot move a singleton");
    }
    assert!(exercised > 1_000, "generator failed to produce singleton cases");
    println!(
        "ACCEPTANCE 10 PASS: singleton candidate sets are reversal fixpoints ({exercised} of {CASES} non-vacuous)"
    );
}
