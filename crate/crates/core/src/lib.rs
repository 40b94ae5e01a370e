pub mod cli;
pub mod criterion;
pub mod error;
pub mod exactmat;
pub mod field;
pub mod jordan;
pub mod oracle;
pub mod witness;

pub use criterion::{check_criterion, CriterionResult, MsClass, QSet};
pub use error::{Error, Result};
pub use exactmat::ExactMatrix;
pub use field::{FieldSpec, Poly, Scalar};
pub use jordan::{GSet, Partition};
pub use oracle::{OracleReport, DEFAULT_BUDGET};
pub use witness::{falsify, Witness};
