//! Seeded synthetic feature matrices.
//!
//! [`generate_synthetic`] draws elements around a few sparse cluster centroids,
//! so a ground set contains many near-duplicate rows and a small set of
//! representatives covers most of the utility. [`random_matrix`],
//! [`random_similarity`] and [`random_coverage_table`] produce small
//! unstructured instances for property checks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::math::pow;
use crate::objective::{ExplicitTable, FeatureMatrix, SimilarityMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightLaw {
    /// Centroid weights uniform on `(0, 1]`.
    Uniform,
    /// Centroid weight of feature `j` is `(j + 1)^(-s)`.
    Zipf { s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_elements: usize,
    pub n_features: usize,
    pub nnz_per_element: usize,
    #[serde(default = "default_law")]
    pub weight_law: WeightLaw,
    #[serde(default = "default_clusters")]
    pub cluster_count: usize,
    /// Per-entry probability of swapping a centroid feature for a random one;
    /// also the relative jitter applied to weights.
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_law() -> WeightLaw {
    WeightLaw::Uniform
}

fn default_clusters() -> usize {
    1
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_features == 0 {
            return Err(Error::InvalidConfig("n_features must be positive".into()));
        }
        if self.nnz_per_element > self.n_features {
            return Err(Error::InvalidConfig(format!(
                "nnz_per_element {} exceeds n_features {}",
                self.nnz_per_element, self.n_features
            )));
        }
        if self.cluster_count == 0 {
            return Err(Error::InvalidConfig(
                "cluster_count must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::InvalidConfig(format!(
                "noise {} is outside [0, 1]",
                self.noise
            )));
        }
        if let WeightLaw::Zipf { s } = self.weight_law {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "zipf exponent {s} must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// Clustered synthetic instance; identical config gives an identical matrix.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<FeatureMatrix> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let centroids: Vec<Vec<(usize, f64)>> = (0..cfg.cluster_count)
        .map(|_| {
            let mut support =
                index::sample(&mut rng, cfg.n_features, cfg.nnz_per_element).into_vec();
            support.sort_unstable();
            support
                .into_iter()
                .map(|f| {
                    let w = match cfg.weight_law {
                        WeightLaw::Uniform => 1.0 - rng.gen::<f64>(),
                        WeightLaw::Zipf { s } => pow((f + 1) as f64, -s),
                    };
                    (f, w)
                })
                .collect()
        })
        .collect();

    let mut triples = Vec::with_capacity(cfg.n_elements * cfg.nnz_per_element);
    let mut row: Vec<usize> = Vec::with_capacity(cfg.nnz_per_element);
    for v in 0..cfg.n_elements {
        let centroid = &centroids[rng.gen_range(0..cfg.cluster_count)];
        row.clear();
        for &(f, w) in centroid {
            let mut feature = f;
            if cfg.noise > 0.0 && cfg.nnz_per_element < cfg.n_features && rng.gen_bool(cfg.noise) {
                // Termination: the row holds fewer than n_features entries.
                loop {
                    let candidate = rng.gen_range(0..cfg.n_features);
                    if !row.contains(&candidate) {
                        feature = candidate;
                        break;
                    }
                }
            }
            if row.contains(&feature) {
                continue;
            }
            row.push(feature);
            let jitter = 1.0 + cfg.noise * (rng.gen::<f64>() - 0.5);
            triples.push((v, feature, w * jitter));
        }
    }
    FeatureMatrix::from_triples(cfg.n_elements, cfg.n_features, triples)
}

/// Bernoulli(`density`) sparsity pattern with weights uniform on `[0, max_weight)`.
pub fn random_matrix(
    n_elements: usize,
    n_features: usize,
    density: f64,
    max_weight: f64,
    seed: u64,
) -> FeatureMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::new();
    for v in 0..n_elements {
        for f in 0..n_features {
            if rng.gen_bool(density) {
                triples.push((v, f, rng.gen_range(0.0..max_weight)));
            }
        }
    }
    FeatureMatrix::from_triples(n_elements, n_features, triples)
        .expect("generated entries are valid")
}

/// Random similarities in `[0, 1)` with unit self-similarity.
pub fn random_similarity(n: usize, seed: u64) -> SimilarityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(if i == j { 1.0 } else { rng.gen_range(0.0..1.0) });
        }
    }
    SimilarityMatrix::new(n, data).expect("generated similarities are valid")
}

/// Weighted coverage: element `v` covers a random subset of a `universe`-item
/// set, each item hit with probability `p`, items weighted uniformly on
/// `[0.1, 2)`. Monotone submodular by construction.
pub fn random_coverage_table(
    n: usize,
    universe: usize,
    p: f64,
    seed: u64,
) -> Result<ExplicitTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..universe).map(|_| rng.gen_range(0.1..2.0)).collect();
    let sets: Vec<Vec<usize>> = (0..n)
        .map(|_| (0..universe).filter(|_| rng.gen_bool(p)).collect())
        .collect();
    ExplicitTable::from_fn(n, |set| {
        let mut hit = vec![false; universe];
        for &v in set {
            for &e in &sets[v] {
                hit[e] = true;
            }
        }
        hit.iter()
            .zip(&weights)
            .filter(|(h, _)| **h)
            .map(|(_, w)| w)
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SynthConfig {
        SynthConfig {
            n_elements: 300,
            n_features: 200,
            nnz_per_element: 12,
            weight_law: WeightLaw::Uniform,
            cluster_count: 5,
            noise: 0.2,
            seed: 17,
        }
    }

    #[test]
    fn same_seed_same_matrix() {
        let a = generate_synthetic(&cfg()).unwrap();
        let b = generate_synthetic(&cfg()).unwrap();
        assert_eq!(a, b);
        let mut other = cfg();
        other.seed = 18;
        assert_ne!(a, generate_synthetic(&other).unwrap());
    }

    #[test]
    fn single_cluster_without_noise_gives_identical_rows() {
        let m = generate_synthetic(&SynthConfig {
            cluster_count: 1,
            noise: 0.0,
            ..cfg()
        })
        .unwrap();
        let first = m.row(0);
        for v in 1..m.n_elements() {
            assert_eq!(m.row(v), first);
        }
    }

    #[test]
    fn rows_have_requested_support() {
        let m = generate_synthetic(&cfg()).unwrap();
        for v in 0..m.n_elements() {
            assert!(m.row(v).0.len() <= 12);
            assert!(m.row(v).0.len() >= 10);
            assert!(m.row(v).1.iter().all(|&w| w > 0.0));
        }
        let zipf = generate_synthetic(&SynthConfig {
            weight_law: WeightLaw::Zipf { s: 1.0 },
            ..cfg()
        })
        .unwrap();
        assert_eq!(zipf.n_elements(), 300);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for bad in [
            SynthConfig {
                nnz_per_element: 201,
                ..cfg()
            },
            SynthConfig {
                cluster_count: 0,
                ..cfg()
            },
            SynthConfig {
                noise: 1.5,
                ..cfg()
            },
            SynthConfig {
                n_features: 0,
                nnz_per_element: 0,
                ..cfg()
            },
            SynthConfig {
                weight_law: WeightLaw::Zipf { s: -1.0 },
                ..cfg()
            },
        ] {
            assert!(generate_synthetic(&bad).is_err());
        }
    }

    #[test]
    fn random_helpers_are_valid() {
        let m = random_matrix(10, 5, 0.5, 2.0, 1);
        assert_eq!(m.n_elements(), 10);
        let s = random_similarity(4, 2);
        assert_eq!(s.get(2, 2), 1.0);
        assert_eq!(vec![s.n_elements()], vec![4]);
    }

    #[test]
    fn coverage_table_is_monotone_and_normalized() {
        let t = random_coverage_table(8, 7, 0.35, 3).unwrap();
        assert!(t.is_monotone());
        assert_eq!(t.at_mask(0), 0.0);
        assert!(random_coverage_table(21, 7, 0.35, 3).is_err());
    }
}
