//! Exact algebra for cones over cell complexes: integral chain complexes,
//! Smith normal form, intersection chain complexes of cones and mapping
//! cones, and Reidemeister torsion over ℚ.

pub mod bundled;
pub mod complex;
pub mod intersection;
pub mod linalg;
pub mod snf;
pub mod torsion;

pub use complex::{algebraic_cone, load_complex, mapping_cone, ChainComplex, ChainInclusion, RegularCWComplex};
pub use intersection::{IntersectionChainComplex, Perversity};
pub use snf::{homology, smith_normal_form, standard_bases, HomologyGroup};
pub use torsion::{r_torsion, BasedChainComplex, TorsionValue};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid complex at {cell}: {msg}")]
    Validation { cell: String, msg: String },
    #[error("not a subcomplex: cell {cell} has a face outside the set")]
    NotSubcomplex { cell: String },
    #[error("the empty complex has no cone")]
    EmptyComplex,
    #[error("integer entries exceeded the {bits}-bit budget")]
    Overflow { bits: u64 },
    #[error("invalid perversity: {0}")]
    InvalidPerversity(String),
    #[error("degree {degree}: expected {expected} basis vectors, got {got}")]
    RankMismatch { degree: usize, expected: usize, got: usize },
    #[error("degree {degree}: chosen basis vectors are dependent")]
    SingularBasis { degree: usize },
    #[error("closed form disagrees with direct computation: {0}")]
    ClosedFormMismatch(String),
    #[error("duality violated: {0}")]
    DualityViolation(String),
    #[error("incompatible bases: {0}")]
    IncompatibleBases(String),
    #[error("{0}")]
    Io(String),
}

impl CoreError {
    pub(crate) fn validation(cell: &str, msg: impl Into<String>) -> Self {
        CoreError::Validation { cell: cell.to_string(), msg: msg.into() }
    }
}
