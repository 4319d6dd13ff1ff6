//! Finite-precision computations with rigid analytic vectors of crystalline
//! principal series of `GL_2(Q_p)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`padic`]: capped-relative arithmetic in `Q_p`, logarithms and binomials.
//! * [`tate`]: truncated power series on closed balls `p^m Z_p` with the
//!   Banach valuation and the substitutions used by the Iwahori action.
//! * [`functions`]: locally analytic, locally constant and locally polynomial
//!   functions on `Z_p` as coset trees of local series.
//! * [`group`]: pro-p Iwahori and congruence subgroup elements and their
//!   twisted action on the function models, one per Weyl cell.
//! * [`analytic`]: orbit expansions and their valuation estimates, the
//!   `G(m)`-analyticity tests and the cokernel model of the analytic vectors.
//! * [`galois`]: continuous characters, trianguline parameter classification
//!   and the filtered phi-module of a crystalline parameter.
//!
//! [`json`] defines the on-disk formats and [`random`] the seeded samplers
//! shared by the property suites.

pub mod analytic;
pub mod error;
pub mod functions;
pub mod galois;
pub mod group;
pub mod json;
pub mod padic;
pub mod random;
pub mod tate;
pub mod valuation;
pub mod verdict;

pub use error::{Error, Result};
pub use padic::{Padic, PadicContext};
pub use tate::TateSeries;
pub use valuation::Valuation;
pub use verdict::Verdict;
