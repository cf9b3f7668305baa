use std::sync::Arc;

use pomalg::amalgam::{build_tower, embeddability_report, replay_trace, Embeddability, Letter, WordSearch};
use pomalg::commutative::{commutative_amalgam, completion_amalgam, group_completion, CommutativeVerdict};
use pomalg::congruence::{is_sposet_congruence, nu_congruence};
use pomalg::enumerate::{left_sposets_up_to, random_right_sposet, Limits};
use pomalg::fixtures;
use pomalg::tensor::{unit_iso, TensorPoset};
use pomalg::{analyze_map, PoAmalgam, Pomonoid, SPoset, SubPomonoid, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn golden(i: usize) -> Arc<Pomonoid> {
    let set = fixtures::golden_set();
    set[i % set.len()].clone()
}

fn random_act(i: usize, seed: u64, size: usize) -> SPoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_right_sposet(&golden(i), size, &mut rng)
}

fn random_word(a: &PoAmalgam, raw: &[(usize, usize)]) -> Word {
    let letters: Vec<Letter> = raw
        .iter()
        .map(|&(j, e)| {
            let j = j % 2;
            Letter::new(j, e % a.factor(j).len())
        })
        .collect();
    a.normalize(&letters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_law_on_random_acts(i in 0usize..7, seed in any::<u64>()) {
        let a = random_act(i, seed, 5);
        let (t, map) = unit_iso(&a).unwrap();
        prop_assert_eq!(t.len(), a.len());
        prop_assert!(map.flags.order_embedding && map.flags.surjective);
    }

    #[test]
    fn tensor_certificates_replay(i in 0usize..7, seed in any::<u64>(), pick in any::<usize>()) {
        let a = random_act(i, seed, 3);
        let s = a.right_actor().unwrap().clone();
        let lefts = left_sposets_up_to(&s, 2, &Limits::default()).unwrap();
        let b = &lefts[pick % lefts.len()];
        let t = TensorPoset::new(&a, b).unwrap();
        for x in 0..a.len() {
            for y in 0..b.len() {
                for x2 in 0..a.len() {
                    for y2 in 0..b.len() {
                        let cert = t.leq_certificate(x, y, x2, y2);
                        prop_assert_eq!(cert.is_some(), t.leq(x, y, x2, y2));
                        if let Some(c) = cert {
                            prop_assert!(c.replay(&a, b).is_ok());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nu_quotients_are_sposet_congruences(i in 0usize..7, seed in any::<u64>(), raw in prop::collection::vec((0usize..8, 0usize..8), 0..4)) {
        let a = random_act(i, seed, 5);
        let pairs: Vec<(usize, usize)> = raw.iter().map(|&(x, y)| (x % a.len(), y % a.len())).collect();
        let q = nu_congruence(&a, &pairs).unwrap();
        prop_assert!(is_sposet_congruence(&a, q.projection()).unwrap().holds);
        let proj = analyze_map(q.projection(), &a, q.sposet()).unwrap();
        prop_assert!(proj.flags.monotone && proj.flags.surjective);
        for &(x, y) in &pairs {
            prop_assert!(q.sposet().leq(q.class_of(x), q.class_of(y)));
        }
    }

    #[test]
    fn word_multiplication_is_associative(
        w1 in prop::collection::vec((0usize..2, 0usize..5), 0..4),
        w2 in prop::collection::vec((0usize..2, 0usize..5), 0..4),
        w3 in prop::collection::vec((0usize..2, 0usize..5), 0..4),
    ) {
        let a = fixtures::strong_gap_amalgam();
        let (x, y, z) = (random_word(&a, &w1), random_word(&a, &w2), random_word(&a, &w3));
        prop_assert_eq!(a.word_mult(&a.word_mult(&x, &y), &z), a.word_mult(&x, &a.word_mult(&y, &z)));
        prop_assert_eq!(a.word_mult(&x, &Word::empty()), x.clone());
        prop_assert_eq!(a.word_mult(&Word::empty(), &x), x);
    }

    #[test]
    fn positive_word_traces_replay(
        w1 in prop::collection::vec((0usize..2, 0usize..5), 0..3),
        w2 in prop::collection::vec((0usize..2, 0usize..5), 0..3),
    ) {
        let a = fixtures::strong_gap_amalgam();
        let (x, y) = (random_word(&a, &w1), random_word(&a, &w2));
        let mut search = WordSearch::new(&a);
        if let pomalg::amalgam::WordVerdict::Yes(trace) = search.leq(&x, &y, 5) {
            prop_assert!(replay_trace(&a, &x, &y, &trace).is_ok());
        }
        if a.word_syntactic_leq(&x, &y) {
            prop_assert!(search.leq(&x, &y, 5).is_yes());
        }
    }
}

#[test]
fn trivially_ordered_groups_complete_to_themselves() {
    for n in 1..=5 {
        let g = Arc::new(fixtures::cyclic_group(n));
        let c = group_completion(&g).unwrap();
        assert!(c.chi_is_iso(), "Z_{n}");
        assert!(c.group_law_violations().is_empty(), "Z_{n}");
    }
}

#[test]
fn group_amalgams_are_strongly_poembeddable() {
    let g = Arc::new(fixtures::cyclic_group(4));
    let h = SubPomonoid::new(g.clone(), &[0, 2]).unwrap();
    let phi = h.inclusion().clone();
    let a = PoAmalgam::new(phi.clone(), phi).unwrap();
    let report = commutative_amalgam(&a, 2).unwrap();
    assert_eq!(report.verdict, CommutativeVerdict::StronglyPoembeddable);
    assert!(report.contradiction.is_none());
    let completions = completion_amalgam(&a).unwrap();
    assert_eq!(completions.embeddings_are_order_embeddings(), [true, true]);
    completions.amalgam().unwrap();
}

#[test]
fn tower_and_tensor_agree_on_commutative_amalgams() {
    let cases = [
        fixtures::degenerate_amalgam(Arc::new(fixtures::max_chain(2))),
        {
            let (_, u) = fixtures::max_truncation(1, 2);
            let phi = u.inclusion().clone();
            PoAmalgam::new(phi.clone(), phi).unwrap()
        },
    ];
    for a in &cases {
        let report = commutative_amalgam(a, 2).unwrap();
        let tower = build_tower(a, 4, 2000).unwrap();
        let verdict = embeddability_report(&tower).verdict;
        if report.verdict == CommutativeVerdict::StronglyPoembeddable {
            assert!(matches!(verdict, Embeddability::StronglyPoembeddableToDepth(_)), "{verdict:?}");
        }
    }
}
