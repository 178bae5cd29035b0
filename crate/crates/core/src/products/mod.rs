//! Amalgamated free products, free iterated amalgamated products (FIAPs),
//! the combinatorial conditions on index families, and amalgamated
//! semidirect products.

pub mod afp;
pub mod asp;
pub mod fiap;
pub mod omega;
pub mod samples;

use thiserror::Error;

pub use afp::{afp_centre, afp_normal_form, AmalgamatedProduct, CosetOracle, Side};
pub use asp::{asp_build, asp_diagonal_checks, asp_multiply, asp_presentation, PreparedAsp, SemidirectData};
pub use fiap::{fiap_build, AmalgamationStep, FiapTree, Leaf};
pub use omega::{combinatorial_conditions, lemma8_decomposition, prop1_conditions, AfpTree, DepthVerdict, OmegaFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("coset or equality oracle undecided within limits")]
    OracleUnknown,
    #[error("amalgamated subgroup is not proper in factor {0}")]
    SubgroupNotProper(String),
    #[error("no strictness witness for leaf {0}")]
    NotStrict(String),
    #[error("combinatorial conditions fail: {0}")]
    ConditionsFail(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("consistency check failed: {0}")]
    ConsistencyFail(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}
