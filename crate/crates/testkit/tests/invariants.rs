use devctx_core::{ExtractionReport, MatchConfig};
use devctx_testkit::checks::*;
use devctx_testkit::fixture;
use devctx_testkit::generate::{extra_revisions, generate, random_config, rng, Shape};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn random_corpus_invariants(seed in any::<u64>()) {
        let cfg = random_config(&mut rng(seed));
        let corpus = generate(seed, Shape { revisions: 40, tasks: 20, resources: 20 });
        let store = corpus.extracted(&cfg);
        let report = ExtractionReport::from_store(&store);
        prop_assert_eq!(determinism(&corpus, &cfg), Ok(()));
        prop_assert_eq!(cochange_symmetry_and_bound(&store), Ok(()));
        prop_assert_eq!(match_soundness(&store, &cfg), Ok(()));
        prop_assert_eq!(snapshot_round_trip(&store), Ok(()));
        prop_assert_eq!(distinct_counts(&store, &report), Ok(()));
        prop_assert_eq!(view_properties(&store), Ok(()));
        prop_assert_eq!(score_additivity(&store, 10), Ok(()));
        prop_assert_eq!(idempotent_extraction(&corpus, &cfg), Ok(()));
        let extra = extra_revisions(seed, &corpus, 10);
        prop_assert_eq!(monotone_under_growth(&corpus, &extra, &cfg), Ok(()));
    }
}

#[test]
fn fixture_invariants() {
    let cfg = MatchConfig::default();
    let corpus = fixture::corpus();
    let store = corpus.extracted(&cfg);
    determinism(&corpus, &cfg).unwrap();
    cochange_symmetry_and_bound(&store).unwrap();
    match_soundness(&store, &cfg).unwrap();
    snapshot_round_trip(&store).unwrap();
    distinct_counts(&store, &ExtractionReport::from_store(&store)).unwrap();
    view_properties(&store).unwrap();
    score_additivity(&store, usize::MAX).unwrap();
    idempotent_extraction(&corpus, &cfg).unwrap();
    monotone_under_growth(&corpus, &extra_revisions(7, &corpus, 10), &cfg).unwrap();
}
