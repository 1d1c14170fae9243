use alloc::string::String;
use alloc::vec::Vec;

use crate::ElementId;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("element id {id} is out of range for a ground set of {n} elements")]
    InvalidElement { id: ElementId, n: usize },

    #[error("element {0} appears more than once in the set")]
    DuplicateElement(ElementId),

    #[error("element {0} is already in the set")]
    AlreadyPresent(ElementId),

    #[error("feature id {feature} is out of range for {n_features} features")]
    InvalidFeature { feature: usize, n_features: usize },

    #[error(
        "weight {weight} for (element {element}, feature {feature}) must be finite and nonnegative"
    )]
    InvalidWeight {
        element: ElementId,
        feature: usize,
        weight: f64,
    },

    #[error("duplicate entry for (element {element}, feature {feature})")]
    DuplicateEntry { element: ElementId, feature: usize },

    #[error("invalid similarity matrix: {0}")]
    InvalidSimilarity(String),

    #[error("invalid value table: {0}")]
    InvalidTable(String),

    #[error("value table is not submodular: f(v|A) < f(v|B) for A = {a:?}, B = {b:?}, v = {v}")]
    NotSubmodular {
        a: Vec<ElementId>,
        b: Vec<ElementId>,
        v: ElementId,
    },

    #[error("{what} supports at most {limit} elements, got {n}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
