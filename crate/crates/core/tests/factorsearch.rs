use openbook::factorsearch::{
    peel_boundary, search_positive, verify_factorisation, SearchOptions, SearchOutcome, SearchProblem,
};
use openbook::{evaluate, Surface, TwistWord};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CURVES: [&str; 9] = ["a", "b", "g", "d1", "d2", "e", "s1", "s2", "s3"];

fn sigma12() -> Surface {
    Surface::load_builtin("sigma12").unwrap()
}

fn names(s: &[&str]) -> Vec<String> {
    s.iter().map(|x| x.to_string()).collect()
}

fn w(s: &str) -> TwistWord {
    TwistWord::parse(s).unwrap()
}

fn run(problem: &SearchProblem, options: &SearchOptions) -> SearchOutcome {
    search_positive(problem, options).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, letters: &[&str], len: usize, positive: bool) -> TwistWord {
    let mut word = TwistWord::new();
    for _ in 0..len {
        let e = if positive || rng.random_bool(0.7) { 1 } else { -1 };
        word.push(*letters.choose(rng).unwrap(), e);
    }
    word
}

/// Alternative option sets that must agree with the naive search.
fn variants() -> Vec<SearchOptions> {
    let full = SearchOptions::default();
    vec![
        full.clone(),
        SearchOptions { suffix_table: false, ..full.clone() },
        SearchOptions { memo: false, ..full.clone() },
        SearchOptions { prune_linear: false, ..full.clone() },
        SearchOptions { prune_boundary: false, ..full.clone() },
        SearchOptions { linear_depth: 1, ..full.clone() },
        SearchOptions { parallel: true, ..full },
    ]
}

#[test]
fn pruned_search_agrees_with_naive_enumeration() {
    let s = sigma12();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfac7);
    for case in 0..60 {
        let mut pool = CURVES.to_vec();
        pool.shuffle(&mut rng);
        let size = rng.random_range(1..=3);
        let alphabet = &pool[..size];
        let max_length = rng.random_range(1..=6);
        // Half the targets are built from the alphabet, so a factorisation exists.
        let target = if case % 2 == 0 {
            let len = rng.random_range(0..=max_length);
            random_word(&mut rng, alphabet, len, true)
        } else {
            let len = rng.random_range(1..=5);
            random_word(&mut rng, &CURVES, len, false)
        };
        let problem = SearchProblem::from_word(&s, &target, names(alphabet), max_length).unwrap();
        let naive = run(&problem, &SearchOptions::naive());
        if case % 2 == 0 {
            assert!(naive.word().is_some(), "naive missed {target}");
        }
        for options in variants() {
            let got = run(&problem, &options);
            match (naive.word(), got.word()) {
                (None, None) => {}
                (Some(a), Some(b)) => {
                    assert_eq!(a.length(), b.length(), "{target} over {alphabet:?} with {options:?}");
                    assert!(verify_factorisation(&s, b, &problem.target));
                }
                (a, b) => panic!("{target} over {alphabet:?} with {options:?}: naive {a:?}, pruned {b:?}"),
            }
        }
    }
}

#[test]
fn found_words_are_shortest_and_positive() {
    let s = sigma12();
    let problem = SearchProblem::from_word(&s, &w("d1 d2 e e"), names(&["s1", "s2", "s3"]), 5).unwrap();
    let out = run(&problem, &SearchOptions::default());
    let word = out.word().unwrap();
    assert_eq!(word.to_string(), "s1 s2 s3");
    assert!(word.is_positive());
    assert_eq!(out.certificate().result, "found");
    assert_eq!(out.certificate().lengths_searched, 4);
}

#[test]
fn chain_relation_is_found_at_length_twelve() {
    let s = Surface::load_builtin("sigma11").unwrap();
    let problem = SearchProblem::from_word(&s, &w("d"), names(&["a", "b"]), 12).unwrap();
    let out = run(&problem, &SearchOptions::default());
    let word = out.word().expect("chain target found");
    assert_eq!(word.length(), 12);
    assert!(verify_factorisation(&s, word, &problem.target));
}

#[test]
fn parallel_search_is_deterministic() {
    let s = sigma12();
    let problem =
        SearchProblem::from_word(&s, &w("a b g^-1 d1 d2"), names(&CURVES), 6).unwrap();
    let serial = run(&problem, &SearchOptions::default());
    for _ in 0..3 {
        let par = run(&problem, &SearchOptions { parallel: true, ..SearchOptions::default() });
        assert_eq!(par, serial);
    }
    let chain = SearchProblem::from_word(&Surface::load_builtin("sigma11").unwrap(), &w("d"), names(&["a", "b"]), 12).unwrap();
    let a = run(&chain, &SearchOptions::default());
    let b = run(&chain, &SearchOptions { parallel: true, ..SearchOptions::default() });
    assert_eq!(a, b);
}

#[test]
fn certificate_is_stable() {
    let s = sigma12();
    let problem = SearchProblem::from_word(&s, &w("d1 d2 e e"), names(&["s1", "s2", "s3"]), 3).unwrap();
    let out = run(&problem, &SearchOptions::default());
    let golden = "result: found\n\
                  alphabet: s1 s2 s3\n\
                  max_length: 3\n\
                  lengths_searched: 4\n\
                  nodes: 7\n\
                  pruned_boundary: 0\n\
                  pruned_linear: 2\n\
                  pruned_memo: 0\n\
                  suffix_table_entries: 13\n\
                  note: shortest positive factorisation has length 3\n";
    assert_eq!(out.certificate().to_string(), golden);
    let json: serde_json::Value = serde_json::from_str(&out.certificate().to_json()).unwrap();
    assert_eq!(json["nodes"], 7);
    assert_eq!(out.certificate().to_json(), run(&problem, &SearchOptions::default()).certificate().to_json());
}

#[test]
fn negative_case_exhausts_deterministically() {
    let s = sigma12();
    let problem = SearchProblem::from_word(&s, &w("a b g^-1 d1 d2"), names(&CURVES), 6).unwrap();
    let first = run(&problem, &SearchOptions::default());
    assert!(matches!(first, SearchOutcome::Exhausted(_)));
    assert_eq!(first, run(&problem, &SearchOptions::default()));
    assert!(first.certificate().note.contains("not a proof"));
}

#[test]
fn peeling_splits_off_mandatory_boundary_twists() {
    let s = sigma12();
    let peeled = peel_boundary(&s, &w("a b g^-1 d1 d2^4")).unwrap();
    assert_eq!(peeled.delta, 3);
    assert_eq!(peeled.mandatory, (3, 0));
    assert_eq!(peeled.residual_word.to_string(), "a b g^-1 d1 d2");
    assert_eq!(
        evaluate(&s, &peeled.residual_word.concat(&w("d2^3"))).unwrap(),
        evaluate(&s, &w("a b g^-1 d1 d2^4")).unwrap()
    );
}

#[test]
fn boundary_constraint_prunes_without_losing_answers() {
    let s = sigma12();
    // Needs three more twists about d2 than d1: anything shorter is pruned.
    let problem = SearchProblem::from_word(&s, &w("d2^3"), names(&["a", "d1", "d2"]), 4).unwrap();
    let out = run(&problem, &SearchOptions::default());
    assert_eq!(out.word().unwrap().to_string(), "d2^3");
    assert!(out.certificate().pruned_boundary > 0);
}

#[test]
fn unknown_alphabet_entry_is_an_error() {
    let s = sigma12();
    let problem = SearchProblem::from_word(&s, &w("a"), names(&["a", "zz"]), 2).unwrap();
    assert!(search_positive(&problem, &SearchOptions::default()).is_err());
}
