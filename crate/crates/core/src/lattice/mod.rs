//! Exact integer linear algebra: Smith normal form, integral solving and
//! finitely presented abelian groups.

mod group;
mod matrix;
mod snf;

pub use group::{GroupElement, GroupPresentation};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, solve_integral, SnfDecomposition, SolutionSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}
