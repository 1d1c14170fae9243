use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use subsparse_core::{GraphWeights, Objective};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeSample {
    pub u: usize,
    pub v: usize,
    pub w: f64,
    /// `f(u | V∖u)`.
    pub global_gain_u: f64,
}

/// `samples` ordered pairs drawn uniformly with replacement, in draw order.
pub fn sample_edges(objective: &Objective, samples: usize, seed: u64) -> Result<Vec<EdgeSample>> {
    let n = objective.n_elements();
    let ground: Vec<usize> = (0..n).collect();
    let weights = GraphWeights::new(objective, &ground)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            EdgeSample {
                u,
                v,
                w: weights.edge_weight(u, v),
                global_gain_u: weights.globals()[u],
            }
        })
        .collect())
}

pub fn write_edges_csv(edges: &[EdgeSample], out: impl Write) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for e in edges {
        writer.serialize(e)?;
    }
    writer.flush()?;
    Ok(())
}
