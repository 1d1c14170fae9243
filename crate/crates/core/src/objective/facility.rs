use alloc::format;
use alloc::vec::Vec;

use crate::{ElementId, Error, Result};

/// Dense nonnegative pairwise similarities with maximal self-similarity.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    rows: Vec<f64>,
}

impl SimilarityMatrix {
    /// `data` is row-major, `n * n` values.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidSimilarity(format!(
                "expected {} values for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            let row = &data[i * n..(i + 1) * n];
            for (j, &s) in row.iter().enumerate() {
                if !s.is_finite() || s < 0.0 {
                    return Err(Error::InvalidSimilarity(format!(
                        "entry ({i}, {j}) = {s} is not a finite nonnegative value"
                    )));
                }
                if s > row[i] {
                    return Err(Error::InvalidSimilarity(format!(
                        "entry ({i}, {j}) = {s} exceeds self-similarity {}",
                        row[i]
                    )));
                }
            }
        }
        Ok(Self { n, rows: data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidSimilarity(format!(
                "row {i} has {} columns, expected {n}",
                r.len()
            )));
        }
        Self::new(n, rows.concat())
    }

    pub fn n_elements(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }
}

/// `f(S) = Σ_i max_{j∈S} sim[i][j]`.
#[derive(Debug, Clone)]
pub struct FacilityLocation {
    sim: SimilarityMatrix,
    // Column-major copy so that a candidate's similarities are contiguous.
    cols: Vec<f64>,
}

impl FacilityLocation {
    pub fn new(sim: SimilarityMatrix) -> Self {
        let n = sim.n;
        let mut cols = Vec::with_capacity(n * n);
        for j in 0..n {
            cols.extend((0..n).map(|i| sim.get(i, j)));
        }
        Self { sim, cols }
    }

    pub fn similarity(&self) -> &SimilarityMatrix {
        &self.sim
    }

    /// `sim[·][v]` as a contiguous slice.
    pub fn column(&self, v: ElementId) -> &[f64] {
        let n = self.sim.n;
        &self.cols[v * n..(v + 1) * n]
    }

    pub fn value_of(&self, set: &[ElementId]) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        (0..self.sim.n)
            .map(|i| {
                let row = self.sim.row(i);
                set.iter().map(|&j| row[j]).fold(0.0, f64::max)
            })
            .sum()
    }

    pub(crate) fn pair_gain_from_empty(&self, v: ElementId) -> f64 {
        self.column(v).iter().sum()
    }

    pub fn pair_gain(&self, u: ElementId, v: ElementId) -> f64 {
        self.column(v)
            .iter()
            .zip(self.column(u))
            .map(|(&sv, &su)| (sv - su).max(0.0))
            .sum()
    }
}
