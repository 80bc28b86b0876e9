//! Unstable algebra over the mod-p Steenrod algebra.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`fp`]: exact F_p arithmetic and small dense linear algebra;
//! - [`steenrod`]: admissible words, Adem normalization, composition, and
//!   decomposition of operations into the generators `b` and `P^{p^j}`
//!   (`Sq^{2^j}` at p = 2);
//! - [`poly`]: polynomial and exterior test algebras with the closed-form
//!   operation action, used as an independent cross-check of the rewriter;
//! - [`module`]: finite-window unstable modules with explicit action tables
//!   and the finite-generation certificate search;
//! - [`unstable`]: free unstable modules on one generator and realization of
//!   small presentations;
//! - [`hopf`]: Borel-style presentations of graded-commutative Hopf algebras,
//!   quotients, Frobenius subalgebras, and kernel verification;
//! - [`em`]: mod-p cohomology of Eilenberg-MacLane spaces as Borel
//!   presentations;
//! - [`aq`]: Andre-Quillen homology of such presentations in degrees 0 and 1,
//!   with the six-term exact sequence check;
//! - [`io`]: the text formats for algebras and modules plus JSON reports;
//! - [`scenario`]: canned end-to-end computations with stable output;
//! - [`oracle`]: independent recomputations used by the test suite.

pub mod aq;
pub mod em;
pub mod fp;
pub mod hopf;
pub mod io;
pub mod module;
pub mod oracle;
pub mod poly;
pub mod scenario;
pub mod steenrod;
pub mod unstable;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("action table incomplete: no entry for {op} on {gen} (degree {degree})")]
    ActionIncomplete { op: String, gen: String, degree: u32 },
    #[error("degree {0} exceeds the computed window (complete through {1})")]
    BeyondWindow(u32, u32),
    #[error("{0}")]
    Unsupported(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use aq::{
    aq_h0, aq_h1, aq_h1_module, coker_beta_p0, les, les_check, CokerBeta, H1Class, LesReport,
    SixTerm,
};
pub use em::{em_cohomology, CoefGroup, EMSpec};
pub use fp::{FpMatrix, Prime, RowSolver, Subspace};
pub use hopf::{
    frobenius_image, hopf_kernel, hopf_quotient, BorelMono, BorelPoly, BorelPresentation,
    GenKind, InclusionMap, QuotientResult,
};
pub use io::{parse_hopf, parse_module, print_hopf, ModuleFile, ModuleSource};
pub use module::{fg_check, AlgebraGen, FgCertificate, FgOptions, GradedModule};
pub use steenrod::{Letter, OperationWord, SteenrodAlgebra, SteenrodElement};
