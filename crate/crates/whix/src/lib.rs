//! Wiener-Hopf index structure of rational matrix functions that take
//! unitary values on the unit circle.
//!
//! The input is a pair of stable unitary state-space realizations of
//! bi-inner factors `V`, `W` with `R = V W^*`. From two small Stein
//! equations the crate computes the complete index structure of the block
//! Toeplitz operator `T_R` — negative, zero, and positive partial indices,
//! kernel/cokernel dimensions, and the Fredholm index — together with an
//! independent kernel-chain method and a truncated-operator oracle for
//! cross-verification.
//!
//! Module map:
//!
//! * [`numerics`] — dense complex kernels with tolerance-explicit rank and
//!   eigenvalue decisions;
//! * [`stein`] — discrete Stein solvers (direct vectorized and series);
//! * [`realization`] — stable unitary realizations and constructions
//!   (monomials, Blaschke cascades, diagonal assembly);
//! * [`blaschke`] — scalar Blaschke products, functional calculus, defect
//!   indices, reconstruction;
//! * [`whindex`] — the realization-to-index pipeline and the kernel-chain
//!   cross-check;
//! * [`oracle`] — finite-section Toeplitz/Hankel verification;
//! * [`testgen`] — seeded instance generators shared by the test suites.

pub mod blaschke;
pub mod numerics;
pub mod oracle;
pub mod realization;
pub mod stein;
pub mod testgen;
pub mod whindex;

pub use blaschke::{scalar_index_report, BlaschkeProduct};
pub use numerics::{CMatrix, Tolerances};
pub use realization::{blaschke_realization, cascade, diag_inner, monomial_realization, Realization};
pub use whindex::{full_report, kernel_chain_dims, IndexReport};
