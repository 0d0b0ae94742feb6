//! Unambiguous comparison of mixed quantum states.
//!
//! Given k candidate density matrices and a tuple size n, decide whether a
//! measurement on n unknown copies can report "all identical" (`M1`) or
//! "not all identical" (`M2`) without ever being wrong, build such
//! measurements explicitly, and check every claim by brute force over all
//! k^n candidate tuples.
//!
//! ```
//! use mixcomp::{comparison, oracle, states, Config, OperatorKind};
//!
//! let set = states::eq26();
//! let cfg = Config::default();
//! assert!(comparison::check_m2_necessary(&set, &cfg.tol).holds);
//! assert!(!oracle::decide_exists(&set, 2, OperatorKind::M2, &cfg).unwrap());
//! assert!(oracle::decide_exists(&set, 3, OperatorKind::M2, &cfg).unwrap());
//! ```

pub mod cli;
pub mod comparison;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod states;
pub mod subspace;
pub mod tolerance;

pub use comparison::{MeasurementOperator, OperatorKind, Provenance};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use oracle::{TupleClass, TupleKind};
pub use states::{CandidateSet, DensityMatrix};
pub use subspace::Subspace;
pub use tolerance::{Config, Tolerances};
