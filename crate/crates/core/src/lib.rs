//! Embedding decisions for generalised Besov-Morrey and Besov-type spaces on the
//! unit cube, worked out through their dyadic sequence spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`phi`]: the weight functions `φ` of the class `G_p`, their dyadic samples and
//!   asymptotic [`RateTerm`]s.
//! * [`seqspace`]: sparse dyadic coefficient sequences and exact evaluation of the
//!   `n`, `b` and sup-type quasi-norms on a truncated tree.
//! * [`indices`]: `α_j`, the critical smoothness indices `σ`, `σ∞`, `σ̄`, dominance of
//!   weight pairs and `ℓ_q` membership of log-power sequences.
//! * [`verdict`]: tri-state continuity and compactness decisions with rule traces.
//! * [`witness`]: extremal sequence families that exhibit non-compactness, plus the
//!   interpolation inequality check and seeded random sequences.
//! * [`cli`]: JSON job configs, sweeps and report output for the `morrey-embed` binary.
//! * [`acceptance`]: the self-test suite, each criterion checked against an
//!   independent oracle.
//!
//! ```
//! use morrey_embed::phi::Family;
//! use morrey_embed::verdict::{decide, SpaceSpec};
//! use morrey_embed::{Exponent, Tri};
//!
//! let src = SpaceSpec::n(1, 1.0, 1.0, Exponent::Finite(2.0), Family::Power { u: 2.0 }).unwrap();
//! let tgt = SpaceSpec::n(1, 0.0, 2.0, Exponent::Finite(2.0), Family::Power { u: 4.0 }).unwrap();
//! let v = decide(&src, &tgt).unwrap();
//! assert_eq!(v.continuous, Tri::Yes);
//! assert_eq!(v.compact, Tri::Yes);
//! ```

pub mod acceptance;
pub mod cli;
mod error;
mod exponent;
pub mod indices;
pub mod phi;
mod rate;
pub mod seqspace;
mod tri;
pub mod verdict;
pub mod witness;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use rate::{Confidence, RateTerm, RATE_TOL};
pub use tri::Tri;
