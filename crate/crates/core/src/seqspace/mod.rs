//! Sparse dyadic coefficient sequences on the unit cube and their quasi-norms.
//!
//! All norms are evaluated exactly on the truncated tree `j = 0..=J`; nothing is
//! extrapolated past the truncation level.

mod dyadic;
mod norms;
mod sum;

pub use dyadic::{morton_decode, morton_encode, DyadicIndex, DyadicSeq, CELL_LIMIT, MAX_LEVEL};
pub use norms::{b_norm, besov_sup_norm, ell_q, n_levels_star, n_norm_morrey, n_norm_star, NormParams};
pub use sum::{compensated_sum, Compensated};

pub(crate) use norms::{b_cube_values, besov_sup_cube_values};
