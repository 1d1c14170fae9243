use alloc::format;
use alloc::vec::Vec;

use crate::{ElementId, Error, Result};

/// Largest ground set an exhaustive table may describe.
pub const MAX_TABLE_ELEMENTS: usize = 20;

const TOLERANCE: f64 = 1e-9;

/// A set function given by its value on every subset, indexed by bitmask.
///
/// Construction checks normalization and diminishing returns on every
/// `(A, i, j)` with `i, j ∉ A`, which is equivalent to checking every
/// `A ⊆ B, v ∉ B` triple.
#[derive(Debug, Clone)]
pub struct ExplicitTable {
    n: usize,
    values: Vec<f64>,
    monotone: bool,
    modular: bool,
}

impl ExplicitTable {
    /// A nonnegative, normalized, submodular table.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        let table = Self::signed(n, values)?;
        if let Some(mask) = table.values.iter().position(|&x| x < 0.0) {
            return Err(Error::InvalidTable(format!(
                "f({:?}) = {} is negative",
                members(mask),
                table.values[mask]
            )));
        }
        Ok(table)
    }

    /// Like [`ExplicitTable::new`] but admits negative values. Only useful for
    /// unconstrained maximization tests.
    pub fn signed(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > MAX_TABLE_ELEMENTS {
            return Err(Error::TooLarge {
                what: "explicit value table",
                n,
                limit: MAX_TABLE_ELEMENTS,
            });
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidTable(format!(
                "expected {} values for {n} elements, got {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some(x) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidTable(format!("non-finite value {x}")));
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidTable(format!(
                "f(∅) must be 0, got {}",
                values[0]
            )));
        }

        let full = 1usize << n;
        for a in 0..full {
            for i in 0..n {
                if a & (1 << i) != 0 {
                    continue;
                }
                for j in (i + 1)..n {
                    if a & (1 << j) != 0 {
                        continue;
                    }
                    let gain_small = values[a | 1 << i] - values[a];
                    let gain_large = values[a | 1 << i | 1 << j] - values[a | 1 << j];
                    if gain_small < gain_large - TOLERANCE {
                        return Err(Error::NotSubmodular {
                            a: members(a),
                            b: members(a | 1 << j),
                            v: i,
                        });
                    }
                }
            }
        }

        let mut monotone = true;
        let mut modular = true;
        for a in 0..full {
            for i in 0..n {
                if a & (1 << i) != 0 {
                    continue;
                }
                let gain = values[a | 1 << i] - values[a];
                monotone &= gain >= -1e-12;
                modular &= (gain - values[1 << i]).abs() <= 1e-12;
            }
        }

        Ok(Self {
            n,
            values,
            monotone,
            modular,
        })
    }

    /// Tabulates `f` over every subset of `0..n`.
    pub fn from_fn(n: usize, f: impl Fn(&[ElementId]) -> f64) -> Result<Self> {
        if n > MAX_TABLE_ELEMENTS {
            return Err(Error::TooLarge {
                what: "explicit value table",
                n,
                limit: MAX_TABLE_ELEMENTS,
            });
        }
        let values = (0..1usize << n).map(|mask| f(&members(mask))).collect();
        Self::new(n, values)
    }

    pub fn n_elements(&self) -> usize {
        self.n
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn is_modular(&self) -> bool {
        self.modular
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&x| x >= 0.0)
    }

    pub fn at_mask(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    pub fn singleton(&self, v: ElementId) -> f64 {
        self.values[1 << v]
    }

    pub fn pair_gain(&self, u: ElementId, v: ElementId) -> f64 {
        self.values[1 << u | 1 << v] - self.values[1 << u]
    }

    pub fn value_of(&self, set: &[ElementId]) -> f64 {
        self.values[mask_of(set)]
    }
}

impl super::SetFunction for ExplicitTable {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value_of(&self, set: &[ElementId]) -> f64 {
        ExplicitTable::value_of(self, set)
    }
}

pub(crate) fn mask_of(set: &[ElementId]) -> usize {
    set.iter().fold(0, |m, &v| m | 1 << v)
}

fn members(mask: usize) -> Vec<ElementId> {
    (0..usize::BITS as usize)
        .filter(|&i| mask & (1 << i) != 0)
        .collect()
}
