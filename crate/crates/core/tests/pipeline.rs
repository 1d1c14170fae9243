use proptest::prelude::*;
use subsparse_core::synth::{generate_synthetic, random_matrix, SynthConfig, WeightLaw};
use subsparse_core::text::{tfidf_featurize, Corpus, Document};
use subsparse_core::{
    greedy, lazy_greedy, relative_utility, rouge2, sieve_streaming, sparsify, Objective, Sampling,
    SetFunction, SieveConfig, SparsifierConfig,
};

fn clustered(n: usize, seed: u64) -> Objective {
    let cfg = SynthConfig {
        n_elements: n,
        n_features: 400,
        nnz_per_element: 12,
        weight_law: WeightLaw::Uniform,
        cluster_count: 10,
        noise: 0.2,
        seed,
    };
    Objective::feature_sqrt(generate_synthetic(&cfg).unwrap())
}

#[test]
fn sparsified_lazy_greedy_tracks_full_greedy() {
    let f = clustered(3000, 5);
    let ground: Vec<usize> = (0..3000).collect();
    let full = greedy(&f, &ground, 20).unwrap();
    for sampling in [Sampling::Uniform, Sampling::Importance] {
        let cfg = SparsifierConfig {
            seed: 11,
            sampling,
            ..SparsifierConfig::default()
        };
        let (vprime, trace) = sparsify(&f, &ground, &cfg).unwrap();
        assert!(vprime.len() < ground.len() / 2);
        assert_eq!(trace.final_vprime, vprime);
        let sol = lazy_greedy(&f, &vprime, 20).unwrap();
        assert!(sol.selected.iter().all(|v| vprime.binary_search(v).is_ok()));
        assert!(relative_utility(&sol, &full).unwrap() > 0.9);
    }
}

#[test]
fn streaming_over_sparsified_set() {
    let f = clustered(1500, 8);
    let ground: Vec<usize> = (0..1500).collect();
    let (vprime, _) = sparsify(&f, &ground, &SparsifierConfig::default()).unwrap();
    let sol = sieve_streaming(&f, &vprime, 10, SieveConfig::default()).unwrap();
    assert!(sol.selected.len() <= 10);
    assert!((f.eval(&sol.selected).unwrap() - sol.value).abs() <= 1e-9 * sol.value.max(1.0));
}

#[test]
fn summarizes_a_small_corpus() {
    let corpus = Corpus {
        documents: vec![
            Document::from_text("a", "The river flooded the valley. Farmers moved their herds uphill. The river rose again."),
            Document::from_text("b", "Rain fell for a week. The valley flooded after the rain. Schools closed early."),
        ],
        reference_summaries: Some(vec![Document::from_text("ref", "The valley flooded after a week of rain.")]),
    };
    let tfidf = tfidf_featurize(&corpus).unwrap();
    assert_eq!(tfidf.origin.len(), 6);
    let f = Objective::feature_sqrt(tfidf.matrix.clone());
    let ground: Vec<usize> = (0..6).collect();
    let sol = greedy(&f, &ground, 2).unwrap();
    let tokens = tfidf.summary_tokens(&corpus, &sol.selected);
    let reference: Vec<&str> = corpus.reference_summaries.as_ref().unwrap()[0]
        .sentences
        .iter()
        .flatten()
        .map(String::as_str)
        .collect();
    let score = rouge2(&tokens, &reference);
    assert!((0.0..=1.0).contains(&score.recall));
    assert!(score.recall > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sparsify_output_is_a_sorted_deterministic_subset(
        n in 2usize..120,
        seed in 0u64..1000,
        r in 0.5f64..6.0,
        c in 1.5f64..16.0,
    ) {
        let f = Objective::feature_sqrt(random_matrix(n, 15, 0.3, 2.0, seed));
        let ground: Vec<usize> = (0..n).collect();
        let cfg = SparsifierConfig { r, c, seed, ..SparsifierConfig::default() };
        let (a, trace) = sparsify(&f, &ground, &cfg).unwrap();
        let (b, _) = sparsify(&f, &ground, &cfg).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(!a.is_empty());
        prop_assert!(a.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(a.iter().all(|&v| v < n));
        let mut size = trace.n;
        for it in &trace.iterations {
            prop_assert_eq!(it.size_before, size);
            prop_assert_eq!(it.kept_size, it.size_before - it.sample_size - it.removed_count);
            size = it.kept_size;
        }
    }
}
