//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("word element at position {position} is zero")]
    ZeroWordElement { position: usize },

    #[error("word violates the lattice condition at prefix {prefix}")]
    InvalidWord { prefix: usize },

    #[error("prefix length {index} out of range for order {order}")]
    PrefixOutOfRange { index: usize, order: usize },

    #[error("generator index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("lattices have mismatched order or shape")]
    LatticeMismatch,

    #[error("rows {rows:?} are not a weakly decreasing positive partition")]
    InvalidShape { rows: Vec<u32> },

    #[error("box ({row},{col}) lies outside the diagram {shape}")]
    BoxOutsideDiagram { shape: String, row: usize, col: usize },

    #[error("cannot parse {what}: {text:?}")]
    Parse { what: &'static str, text: String },

    #[error("parameter x = {x} is an integer below f - 1 = {bound}; B_f(x) is not semisimple there")]
    NonSemisimpleParameter { x: String, bound: i64 },

    #[error("degenerate denominator while building [{f}, {shape}] at generator {index}: {detail}")]
    DegenerateDenominator {
        f: usize,
        shape: String,
        index: usize,
        detail: String,
    },

    #[error("negative radicand while building [{f}, {shape}] at generator {index}: {detail}")]
    NegativeRadicand {
        f: usize,
        shape: String,
        index: usize,
        detail: String,
    },

    #[error("inconsistent grid signature: {detail}")]
    BadSignature { detail: String },

    #[error("generator index {index} is illegal for the split ({f1}, {f2})")]
    IllegalLayerIndex { index: usize, f1: usize, f2: usize },

    #[error("grid and module data disagree during assembly: {detail}")]
    AssemblyInconsistency { detail: String },

    #[error("module does not match the grid signature: {detail}")]
    ModuleMismatch { detail: String },

    #[error("Gram matrix is numerically singular: {detail}")]
    SingularGram { detail: String },

    #[error("solution column {column} is numerically zero; basis is not independent")]
    ZeroColumn { column: usize },

    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
}
