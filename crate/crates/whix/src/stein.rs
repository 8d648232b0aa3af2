//! Discrete-time Stein equations `S = A₁ S A₂^* + R` for stable `A₁`, `A₂`.
//!
//! Two strategies are kept side by side: a direct solve of the vectorized
//! system (exact at the small state dimensions this crate targets) and an
//! accumulated geometric series that exploits stability and stays
//! memory-light above the vectorization threshold. Their agreement is a
//! standing test invariant.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{kron, spectral_radius, unvec, vec_of, CMatrix, Tolerances};

/// Largest `n₁·n₂` handled by the vectorized direct solve.
pub const DIRECT_LIMIT: usize = 4096;

/// Spectral-radius products at least this close to 1 are rejected as
/// ill-posed.
pub const STABILITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Error)]
pub enum SteinError {
    #[error("dimension mismatch: A1 is {n1}×{n1}, A2 is {n2}×{n2}, R is {r_rows}×{r_cols}")]
    DimensionMismatch {
        n1: usize,
        n2: usize,
        r_rows: usize,
        r_cols: usize,
    },
    #[error("unstable pair: spectral-radius product {rho_product} is too close to 1")]
    UnstablePair { rho_product: f64 },
    #[error("series accumulation stalled after {iterations} terms (last term norm {last_term_norm:.3e})")]
    SeriesStalled {
        iterations: usize,
        last_term_norm: f64,
    },
}

fn check_dims(a1: &CMatrix, a2: &CMatrix, r: &CMatrix) -> Result<(usize, usize), SteinError> {
    let (n1, n2) = (a1.nrows(), a2.nrows());
    if a1.ncols() != n1 || a2.ncols() != n2 || r.nrows() != n1 || r.ncols() != n2 {
        return Err(SteinError::DimensionMismatch {
            n1,
            n2,
            r_rows: r.nrows(),
            r_cols: r.ncols(),
        });
    }
    Ok((n1, n2))
}

fn check_stability(a1: &CMatrix, a2: &CMatrix) -> Result<f64, SteinError> {
    let rho = spectral_radius(a1) * spectral_radius(a2);
    if rho >= 1.0 - STABILITY_MARGIN {
        return Err(SteinError::UnstablePair { rho_product: rho });
    }
    Ok(rho)
}

/// Sensitivity diagnostic `1 / (1 − ρ(A₁)ρ(A₂))`; large values flag
/// near-unit-circle pairs.
pub fn conditioning(a1: &CMatrix, a2: &CMatrix) -> f64 {
    let rho = spectral_radius(a1) * spectral_radius(a2);
    if rho >= 1.0 {
        f64::INFINITY
    } else {
        1.0 / (1.0 - rho)
    }
}

/// Unique solution of `S = A₁ S A₂^* + R`, choosing the direct vectorized
/// solve when `n₁·n₂ ≤ 4096` and the accumulated series otherwise.
pub fn solve_stein(
    a1: &CMatrix,
    a2: &CMatrix,
    r: &CMatrix,
    t: &Tolerances,
) -> Result<CMatrix, SteinError> {
    let (n1, n2) = check_dims(a1, a2, r)?;
    if n1 * n2 <= DIRECT_LIMIT {
        solve_stein_direct(a1, a2, r, t)
    } else {
        solve_stein_series(a1, a2, r, t)
    }
}

/// Direct strategy: solve `(I − conj(A₂) ⊗ A₁) vec(S) = vec(R)`.
pub fn solve_stein_direct(
    a1: &CMatrix,
    a2: &CMatrix,
    r: &CMatrix,
    _t: &Tolerances,
) -> Result<CMatrix, SteinError> {
    let (n1, n2) = check_dims(a1, a2, r)?;
    check_stability(a1, a2)?;
    if n1 == 0 || n2 == 0 {
        return Ok(CMatrix::zeros(n1, n2));
    }
    let dim = n1 * n2;
    let system = DMatrix::<Complex64>::identity(dim, dim) - kron(&a2.conjugate(), a1);
    let rhs = vec_of(r);
    let sol = system
        .lu()
        .solve(&rhs)
        .ok_or(SteinError::UnstablePair { rho_product: 1.0 })?;
    Ok(unvec(&sol, n1, n2))
}

/// Series strategy: accumulate `Σ_k A₁^k R A₂^{*k}` until the terms are
/// negligible against the running sum. Nilpotent state maps terminate the
/// series exactly.
pub fn solve_stein_series(
    a1: &CMatrix,
    a2: &CMatrix,
    r: &CMatrix,
    _t: &Tolerances,
) -> Result<CMatrix, SteinError> {
    let (n1, n2) = check_dims(a1, a2, r)?;
    let rho = check_stability(a1, a2)?;
    if n1 == 0 || n2 == 0 {
        return Ok(CMatrix::zeros(n1, n2));
    }
    let a2h = a2.adjoint();
    let mut acc = r.clone();
    let mut term = r.clone();
    let cap = series_cap(rho, n1, n2);
    for _ in 0..cap {
        term = a1 * &term * &a2h;
        let tn = term.norm();
        acc += &term;
        if tn <= f64::EPSILON * acc.norm().max(1.0) {
            return Ok(acc);
        }
    }
    Err(SteinError::SeriesStalled {
        iterations: cap,
        last_term_norm: term.norm(),
    })
}

fn series_cap(rho: f64, n1: usize, n2: usize) -> usize {
    let floor = n1 + n2 + 8;
    if rho <= 1e-12 {
        return floor;
    }
    // Enough iterations for the geometric envelope to drop below 1e-20,
    // clamped to keep pathological near-unit pairs from spinning forever.
    let k = ((-46.0) / rho.ln()).ceil();
    (k as usize).clamp(floor, 2_000_000)
}
