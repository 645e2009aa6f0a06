//! Orthogonal Matching Pursuit together with exact restricted isometry
//! constants for small matrices.
//!
//! * [`numerics`]: Gram matrices, Householder least squares, Jacobi eigenvalues
//! * [`model`] and [`io`]: signals, supports, correlations and text files
//! * [`omp`]: the pursuit itself with explicit tie-breaking and a full trace
//! * [`rip`]: exhaustive `δ_K` and the correlation bounds that drive recovery
//! * [`counterexample`]: the `δ_{K+1} = 1/√K` matrix on which OMP can fail

pub mod counterexample;
pub mod error;
pub mod io;
pub mod model;
pub mod numerics;
pub mod omp;
pub mod rip;

pub use error::{Error, Result};
pub use model::{apply, correlations, CorrelationProfile, SparseSignal, Support};
pub use numerics::{gram, least_squares, sym_eigenvalues, DenseMatrix, LeastSquares};
pub use omp::{omp_run, recovers, select_index, OmpTrace, TieBreakPolicy};
pub use rip::{check_lemma1, ric_exact, theorem1_condition, Lemma1Report, RicReport};
