use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

const A: ElementId = 0;
const B: ElementId = 1;

fn one_feature_ab() -> Objective {
    Objective::feature_sqrt(FeatureMatrix::from_triples(2, 1, [(A, 0, 4.0), (B, 0, 5.0)]).unwrap())
}

fn random_feature(n: usize, n_features: usize, seed: u64) -> Objective {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::new();
    for v in 0..n {
        for f in 0..n_features {
            if rng.gen_bool(0.4) {
                triples.push((v, f, rng.gen_range(0.0..3.0)));
            }
        }
    }
    Objective::feature_sqrt(FeatureMatrix::from_triples(n, n_features, triples).unwrap())
}

fn random_facility(n: usize, seed: u64) -> Objective {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = rng.gen_range(0.0..1.0);
        }
        rows[i][i] = 1.0;
    }
    Objective::facility_location(SimilarityMatrix::from_rows(&rows).unwrap())
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<ElementId> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

#[test]
fn feature_sqrt_closed_form() {
    let f = one_feature_ab();
    assert_eq!(f.eval(&[A, B]).unwrap(), 3.0);
    assert_eq!(f.eval(&[]).unwrap(), 0.0);
    assert_eq!(f.marginal_gain(B, &[A]).unwrap(), 1.0);
    assert_eq!(f.marginal_gain(B, &[]).unwrap(), f.eval(&[B]).unwrap());
}

#[test]
fn facility_location_closed_form() {
    let sim = SimilarityMatrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
    let f = Objective::facility_location(sim);
    assert_eq!(f.eval(&[0]).unwrap(), 1.5);
    assert_eq!(f.eval(&[]).unwrap(), 0.0);
    assert_eq!(f.eval(&[0, 1]).unwrap(), 2.0);
}

#[test]
fn invalid_ids_and_membership_are_rejected() {
    let f = one_feature_ab();
    assert_eq!(f.eval(&[2]), Err(Error::InvalidElement { id: 2, n: 2 }));
    assert_eq!(f.eval(&[0, 0]), Err(Error::DuplicateElement(0)));
    assert_eq!(f.marginal_gain(A, &[A]), Err(Error::AlreadyPresent(A)));

    let mut ctx = f.context();
    ctx.commit(A).unwrap();
    assert_eq!(ctx.commit(A), Err(Error::AlreadyPresent(A)));
    assert_eq!(ctx.gain(A), Err(Error::AlreadyPresent(A)));
}

#[test]
fn matrix_rejects_bad_entries() {
    assert!(matches!(
        FeatureMatrix::from_triples(1, 1, [(0, 0, -1.0)]),
        Err(Error::InvalidWeight { .. })
    ));
    assert!(matches!(
        FeatureMatrix::from_triples(1, 1, [(0, 0, 1.0), (0, 0, 2.0)]),
        Err(Error::DuplicateEntry {
            element: 0,
            feature: 0
        })
    ));
    assert!(matches!(
        FeatureMatrix::from_triples(1, 1, [(0, 3, 1.0)]),
        Err(Error::InvalidFeature { .. })
    ));
    assert!(matches!(
        FeatureMatrix::from_triples(1, 1, [(2, 0, 1.0)]),
        Err(Error::InvalidElement { .. })
    ));
}

#[test]
fn similarity_requires_maximal_diagonal() {
    assert!(SimilarityMatrix::from_rows(&[vec![0.5, 0.9], vec![0.1, 1.0]]).is_err());
    assert!(SimilarityMatrix::from_rows(&[vec![1.0, -0.1], vec![0.1, 1.0]]).is_err());
    assert!(SimilarityMatrix::from_rows(&[vec![1.0], vec![0.1, 1.0]]).is_err());
}

#[test]
fn pair_gain_matches_two_evaluations() {
    for seed in 0..5 {
        for f in [random_feature(8, 6, seed), random_facility(8, seed)] {
            for u in 0..8 {
                for v in 0..8 {
                    let expected = if u == v {
                        0.0
                    } else {
                        f.eval(&[u, v]).unwrap() - f.eval(&[u]).unwrap()
                    };
                    assert!((f.pair_gain(u, v) - expected).abs() < 1e-9);
                }
                assert!((f.singleton(u) - f.eval(&[u]).unwrap()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn marginal_gain_matches_scratch_difference() {
    let f = random_feature(8, 5, 11);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let s = random_subset(&mut rng, 8, 0.4);
        let Some(v) = (0..8).find(|v| !s.contains(v)) else {
            continue;
        };
        let mut with = s.clone();
        with.push(v);
        let expected = f.eval(&with).unwrap() - f.eval(&s).unwrap();
        assert!((f.marginal_gain(v, &s).unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn context_reproduces_scratch_gains_along_commits() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in 0..10 {
        for f in [random_feature(10, 7, seed), random_facility(10, seed)] {
            let mut order: Vec<ElementId> = (0..10).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut ctx = f.context();
            for (step, &v) in order.iter().enumerate() {
                let prefix = &order[..step];
                for w in 0..10 {
                    if ctx.contains(w) {
                        continue;
                    }
                    let scratch = f.marginal_gain(w, prefix).unwrap();
                    assert!((ctx.gain(w).unwrap() - scratch).abs() < 1e-9);
                }
                ctx.commit(v).unwrap();
                assert!((ctx.value() - f.eval(&order[..=step]).unwrap()).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn open_context_positions_at_set() {
    let f = random_feature(6, 4, 2);
    let ctx = f.open_context(&[1, 4]).unwrap();
    assert_eq!(ctx.selected(), &[1, 4]);
    assert!((ctx.value() - f.eval(&[1, 4]).unwrap()).abs() < 1e-12);
    assert!((ctx.gain(0).unwrap() - f.marginal_gain(0, &[1, 4]).unwrap()).abs() < 1e-9);
    assert!(f.open_context(&[1, 1]).is_err());
}

#[test]
fn committing_everything_yields_column_sums() {
    let f = random_feature(12, 9, 5);
    let Objective::FeatureSqrt(inner) = &f else {
        unreachable!()
    };
    let m = inner.matrix();
    // Independent oracle: sum each column straight from the triples.
    let mut expected = vec![0.0; m.n_features()];
    for (_, feature, w) in m.entries() {
        expected[feature] += w;
    }
    let mut ctx = f.context();
    for v in 0..12 {
        ctx.commit(v).unwrap();
    }
    let sums = ctx.coverage_sums().unwrap();
    for (a, b) in sums.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-9);
    }
    assert_eq!(m.column_sums().len(), 9);
}

#[test]
fn modular_table_is_accepted() {
    let t = ExplicitTable::from_fn(4, |s| s.len() as f64).unwrap();
    assert!(t.is_modular());
    assert!(t.is_monotone());
}

#[test]
fn supermodular_pair_is_rejected() {
    let err = ExplicitTable::new(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap_err();
    match err {
        Error::NotSubmodular { a, b, v } => {
            assert!(a.is_empty());
            assert_eq!(b, vec![1]);
            assert_eq!(v, 0);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn table_rejects_denormalized_negative_and_oversized() {
    assert!(ExplicitTable::new(1, vec![1.0, 2.0]).is_err());
    assert!(ExplicitTable::new(1, vec![0.0, -1.0]).is_err());
    assert!(ExplicitTable::signed(1, vec![0.0, -1.0]).is_ok());
    assert!(ExplicitTable::new(2, vec![0.0; 3]).is_err());
    assert!(matches!(
        ExplicitTable::from_fn(21, |_| 0.0),
        Err(Error::TooLarge { .. })
    ));
}

/// Exhaustive diminishing-returns check straight from the definition.
fn is_submodular_by_definition(n: usize, f: impl Fn(usize) -> f64) -> bool {
    for b in 0..1usize << n {
        // every A ⊆ B
        let mut a = b;
        loop {
            for v in 0..n {
                if b & (1 << v) == 0 {
                    let ga = f(a | 1 << v) - f(a);
                    let gb = f(b | 1 << v) - f(b);
                    if ga < gb - 1e-9 {
                        return false;
                    }
                }
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & b;
        }
    }
    true
}

#[test]
fn random_coverage_tables_are_accepted() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let n = 6;
        let covers: Vec<u32> = (0..n).map(|_| rng.gen_range(0..1u32 << 10)).collect();
        let weights: Vec<f64> = (0..10).map(|_| rng.gen_range(0.1..2.0)).collect();
        let value = |mask: usize| -> f64 {
            let union = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .fold(0u32, |u, i| u | covers[i]);
            (0..10)
                .filter(|&j| union & (1 << j) != 0)
                .map(|j| weights[j])
                .sum()
        };
        assert!(is_submodular_by_definition(n, value));
        let values = (0..1usize << n).map(value).collect();
        let t = ExplicitTable::new(n, values).unwrap();
        assert!(t.is_monotone());
    }
}

#[test]
fn table_check_agrees_with_definition_on_random_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = 4;
        let mut values: Vec<f64> = (0..16).map(|_| rng.gen_range(0.0..3.0)).collect();
        values[0] = 0.0;
        let oracle = is_submodular_by_definition(n, |m| values[m]);
        assert_eq!(ExplicitTable::new(n, values.clone()).is_ok(), oracle);
    }
}

#[test]
fn constant_gains_only_for_modular_tables() {
    assert!(!one_feature_ab().has_constant_gains());
    let modular = Objective::explicit(3, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap();
    assert!(modular.has_constant_gains());
    assert_eq!(modular.kind(), ObjectiveKind::ExplicitTable);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diminishing_returns_and_monotonicity(seed in 0u64..10_000, facility in any::<bool>()) {
        let n = 10;
        let f = if facility { random_facility(n, seed) } else { random_feature(n, 6, seed) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
        prop_assert_eq!(f.eval(&[]).unwrap(), 0.0);
        for _ in 0..40 {
            let b = random_subset(&mut rng, n, 0.5);
            let a: Vec<ElementId> = b.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            let outside: Vec<ElementId> = (0..n).filter(|v| !b.contains(v)).collect();
            if outside.is_empty() {
                continue;
            }
            let v = outside[rng.gen_range(0..outside.len())];
            let ga = f.marginal_gain(v, &a).unwrap();
            let gb = f.marginal_gain(v, &b).unwrap();
            prop_assert!(ga >= gb - 1e-9, "f(v|A)={} < f(v|B)={}", ga, gb);
            prop_assert!(gb >= -1e-12);
            prop_assert!(f.eval(&b).unwrap() >= 0.0);
        }
    }
}
