//! Independent oracle for multiplicative relations among Frobenius
//! eigenvalues: certified roots, exact relation verification and the
//! relation lattice of `{q^-1 a^2}`.

pub mod ball;
pub mod lattice;
pub mod relation;
pub mod roots;

pub use relation::{
    oracle_rank, relation_lattice, replay, verify_relation, Confidence, OracleRank,
    RelationCertificate, RelationConfig, RelationLattice, Verdict,
};
pub use roots::{CertifiedRoot, RootSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelError {
    #[error("PrecisionExhausted: no decision within {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("DegreeOverflow: splitting-field degree bound {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: u64, cap: u64 },
}
