use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;
use crate::{ElementId, Error, Result};

/// Sparse nonnegative element-by-feature affinities, stored both row-major
/// (per element) and column-major (per feature).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n_elements: usize,
    n_features: usize,
    row_ptr: Vec<usize>,
    row_features: Vec<usize>,
    row_weights: Vec<f64>,
    col_ptr: Vec<usize>,
    col_elements: Vec<ElementId>,
    col_weights: Vec<f64>,
}

impl FeatureMatrix {
    /// Builds the matrix from `(element, feature, weight)` triples in any order.
    pub fn from_triples<I>(n_elements: usize, n_features: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ElementId, usize, f64)>,
    {
        let mut entries: Vec<(ElementId, usize, f64)> = triples.into_iter().collect();
        for &(element, feature, weight) in &entries {
            if element >= n_elements {
                return Err(Error::InvalidElement {
                    id: element,
                    n: n_elements,
                });
            }
            if feature >= n_features {
                return Err(Error::InvalidFeature {
                    feature,
                    n_features,
                });
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::InvalidWeight {
                    element,
                    feature,
                    weight,
                });
            }
        }
        entries.sort_unstable_by_key(|&(e, f, _)| (e, f));
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(Error::DuplicateEntry {
                    element: pair[0].0,
                    feature: pair[0].1,
                });
            }
        }

        let nnz = entries.len();
        let mut row_ptr = vec![0usize; n_elements + 1];
        let mut col_ptr = vec![0usize; n_features + 1];
        for &(e, f, _) in &entries {
            row_ptr[e + 1] += 1;
            col_ptr[f + 1] += 1;
        }
        for i in 0..n_elements {
            row_ptr[i + 1] += row_ptr[i];
        }
        for j in 0..n_features {
            col_ptr[j + 1] += col_ptr[j];
        }
        let row_features = entries.iter().map(|&(_, f, _)| f).collect();
        let row_weights = entries.iter().map(|&(_, _, w)| w).collect();

        // Entries are in element order, so each column comes out sorted by element.
        let mut col_elements = vec![0; nnz];
        let mut col_weights = vec![0.0; nnz];
        let mut cursor = col_ptr.clone();
        for &(e, f, w) in &entries {
            let at = cursor[f];
            col_elements[at] = e;
            col_weights[at] = w;
            cursor[f] += 1;
        }

        Ok(Self {
            n_elements,
            n_features,
            row_ptr,
            row_features,
            row_weights,
            col_ptr,
            col_elements,
            col_weights,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn nnz(&self) -> usize {
        self.row_weights.len()
    }

    /// Feature ids (ascending) and weights of element `v`.
    pub fn row(&self, v: ElementId) -> (&[usize], &[f64]) {
        let span = self.row_ptr[v]..self.row_ptr[v + 1];
        (&self.row_features[span.clone()], &self.row_weights[span])
    }

    /// Element ids (ascending) and weights of feature `f`.
    pub fn column(&self, f: usize) -> (&[ElementId], &[f64]) {
        let span = self.col_ptr[f]..self.col_ptr[f + 1];
        (&self.col_elements[span.clone()], &self.col_weights[span])
    }

    /// All entries in element-then-feature order.
    pub fn entries(&self) -> impl Iterator<Item = (ElementId, usize, f64)> + '_ {
        (0..self.n_elements).flat_map(move |e| {
            let (fs, ws) = self.row(e);
            fs.iter().zip(ws).map(move |(&f, &w)| (e, f, w))
        })
    }

    /// Per-feature sums of weights over all elements.
    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n_features)
            .map(|f| self.column(f).1.iter().sum())
            .collect()
    }

    pub(crate) fn row_range(&self, v: ElementId) -> core::ops::Range<usize> {
        self.row_ptr[v]..self.row_ptr[v + 1]
    }

    pub(crate) fn col_range(&self, f: usize) -> core::ops::Range<usize> {
        self.col_ptr[f]..self.col_ptr[f + 1]
    }
}

/// `f(S) = Σ_u √(c_u(S))` with `c_u(S) = Σ_{v∈S} ω_{v,u}`.
#[derive(Debug, Clone)]
pub struct FeatureSqrt {
    matrix: FeatureMatrix,
    // √ω per entry, in row order and in column order.
    row_roots: Vec<f64>,
    col_roots: Vec<f64>,
    singles: Vec<f64>,
}

impl FeatureSqrt {
    pub fn new(matrix: FeatureMatrix) -> Self {
        let row_roots: Vec<f64> = matrix.row_weights.iter().map(|&w| sqrt(w)).collect();
        let col_roots = matrix.col_weights.iter().map(|&w| sqrt(w)).collect();
        let singles = (0..matrix.n_elements)
            .map(|v| row_roots[matrix.row_range(v)].iter().sum())
            .collect();
        Self {
            matrix,
            row_roots,
            col_roots,
            singles,
        }
    }

    pub fn matrix(&self) -> &FeatureMatrix {
        &self.matrix
    }

    pub fn singleton(&self, v: ElementId) -> f64 {
        self.singles[v]
    }

    pub(crate) fn row_roots(&self, v: ElementId) -> &[f64] {
        &self.row_roots[self.matrix.row_range(v)]
    }

    pub(crate) fn col_roots(&self, f: usize) -> &[f64] {
        &self.col_roots[self.matrix.col_range(f)]
    }

    pub fn value_of(&self, set: &[ElementId]) -> f64 {
        let mut acc: Vec<(usize, f64)> = set
            .iter()
            .flat_map(|&v| {
                let (fs, ws) = self.matrix.row(v);
                fs.iter().copied().zip(ws.iter().copied())
            })
            .collect();
        acc.sort_unstable_by_key(|&(f, _)| f);
        let mut total = 0.0;
        let mut i = 0;
        while i < acc.len() {
            let feature = acc[i].0;
            let mut sum = 0.0;
            while i < acc.len() && acc[i].0 == feature {
                sum += acc[i].1;
                i += 1;
            }
            total += sqrt(sum);
        }
        total
    }

    /// `Σ_{f ∈ u∩v} (√ω_uf + √ω_vf - √(ω_uf + ω_vf))`, summed in ascending
    /// feature order, so that `f(v | {u}) = f({v}) - correction` for `u ≠ v`.
    pub(crate) fn overlap_correction(&self, u: ElementId, v: ElementId) -> f64 {
        let (uf, uw) = self.matrix.row(u);
        let (vf, vw) = self.matrix.row(v);
        let ur = self.row_roots(u);
        let vr = self.row_roots(v);
        let mut correction = 0.0;
        let mut j = 0;
        for (i, &f) in uf.iter().enumerate() {
            while j < vf.len() && vf[j] < f {
                j += 1;
            }
            if j < vf.len() && vf[j] == f {
                correction += ur[i] + vr[j] - sqrt(uw[i] + vw[j]);
            }
        }
        correction
    }

    /// `f(v | {u})` by merging the two sorted rows.
    pub fn pair_gain(&self, u: ElementId, v: ElementId) -> f64 {
        let (uf, uw) = self.matrix.row(u);
        let (vf, vw) = self.matrix.row(v);
        let vr = self.row_roots(v);
        let ur = self.row_roots(u);
        let mut gain = 0.0;
        let mut i = 0;
        for (j, &f) in vf.iter().enumerate() {
            while i < uf.len() && uf[i] < f {
                i += 1;
            }
            if i < uf.len() && uf[i] == f {
                gain += sqrt(uw[i] + vw[j]) - ur[i];
            } else {
                gain += vr[j];
            }
        }
        gain
    }
}
