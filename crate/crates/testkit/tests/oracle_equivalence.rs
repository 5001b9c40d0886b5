use devctx_core::MatchConfig;
use devctx_testkit::checks::{oracle_case, oracle_equivalence, views_match_oracle, EXTRACTED};
use devctx_testkit::oracle::{of_kind, Model};
use devctx_testkit::generate::{generate, Shape};

#[test]
fn random_corpora_match_brute_force() {
    let mut totals = [0usize; 5];
    for i in 0..50 {
        let (corpus, cfg) = oracle_case(i);
        assert!(corpus.revisions.len() <= 100 && corpus.tasks.len() <= 50);
        if let Err(e) = oracle_equivalence(&corpus, &cfg) {
            panic!("case {i} ({cfg:?}): {e}");
        }
        let rels = Model::new(&corpus, &cfg).relations();
        for (total, kind) in totals.iter_mut().zip(EXTRACTED) {
            *total += of_kind(&rels, kind).len();
        }
    }
    eprintln!("relations compared per kind: {totals:?}");
    // the comparison is only meaningful if every extractor produced something
    assert!(totals.iter().all(|&n| n > 100), "{totals:?}");
}

#[test]
fn unfiltered_cochange_matches_all_pairs() {
    let cfg = MatchConfig {
        cochange_min_weight: 1,
        max_changeset_size: usize::MAX,
        ..MatchConfig::default()
    };
    for seed in 0..5 {
        let corpus = generate(seed, Shape::SMALL);
        oracle_equivalence(&corpus, &cfg).unwrap();
    }
}

#[test]
fn context_views_match_brute_force() {
    for i in 0..8 {
        let (corpus, cfg) = oracle_case(i);
        for k in [2, 50] {
            if let Err(e) = views_match_oracle(&corpus, &cfg, k) {
                panic!("case {i}, k={k}: {e}");
            }
        }
    }
}
