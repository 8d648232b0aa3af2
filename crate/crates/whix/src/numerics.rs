//! Dense complex linear-algebra kernels with tolerance-explicit rank and
//! spectral decisions.
//!
//! Everything downstream (Stein solvers, the index pipeline, the truncated
//! operator checks) reduces its decisions to the routines in this module so
//! that a single set of cutoffs governs the whole computation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Dense complex matrix value. Zero-dimensional shapes (`0×n`, `n×0`) are
/// legal; products involving them follow the empty-sum convention.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Numerical cutoffs shared by every rank/spectral decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value cutoff: `σ` counts toward the rank when
    /// `σ > rank_rel · σ_max`.
    pub rank_rel: f64,
    /// Distance-to-1 cutoff when counting eigenvalue-1 multiplicities of
    /// Hermitian contractions.
    pub eig_one: f64,
    /// Cutoff for residual/contract checks (unitarity, Stein residuals,
    /// hermiticity).
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel: 1e-9,
            eig_one: 1e-8,
            residual: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum NumericsError {
    /// The argument was expected to be Hermitian up to the residual
    /// tolerance; a violation signals an upstream pipeline bug.
    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {limit:.3e}")]
    NonHermitian { deviation: f64, limit: f64 },
    /// `solve_dense` on a system that is rank-deficient at tolerance.
    #[error("linear system is singular at tolerance (rank {rank} of {dim})")]
    SingularSystem { rank: usize, dim: usize },
}

/// Complex scalar from a real part.
#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `n×n` identity.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Spectral norm `σ_max`, zero for zero-dimensional matrices.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values().iter().fold(0.0_f64, |a, &s| a.max(s))
}

/// Thin singular value decomposition `M = U Σ V^*` with the singular values
/// sorted in decreasing order.
pub fn svd(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows == 0 || cols == 0 {
        return (CMatrix::zeros(rows, 0), Vec::new(), CMatrix::zeros(cols, 0));
    }
    let dec = m.clone().svd(true, true);
    let u = dec.u.expect("SVD requested with U");
    let v = dec.v_t.expect("SVD requested with V^*").adjoint();
    (u, dec.singular_values.iter().copied().collect(), v)
}

/// Numerical rank: the number of singular values above `rank_rel · σ_max`.
/// Total on every input; zero-dimensional and zero matrices have rank 0.
pub fn rank_tol(m: &CMatrix, t: &Tolerances) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.iter().fold(0.0_f64, |a, &s| a.max(s));
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > t.rank_rel * smax).count()
}

/// Orthonormal basis of the numerical null space, returned column-wise as a
/// `cols(M) × (cols(M) − rank)` matrix.
pub fn kernel_basis(m: &CMatrix, t: &Tolerances) -> CMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return identity(cols);
    }
    // Pad with zero rows so the thin SVD carries the full set of right
    // singular vectors even for wide inputs.
    let padded = if m.nrows() < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let dec = padded.svd(false, true);
    let v_t = dec.v_t.expect("SVD requested with V^*");
    let sv = &dec.singular_values;
    let smax = sv.iter().fold(0.0_f64, |a, &s| a.max(s));
    if smax == 0.0 {
        return identity(cols);
    }
    let rank = sv.iter().filter(|&&s| s > t.rank_rel * smax).count();
    v_t.rows(rank, cols - rank).adjoint()
}

/// Hermitian part `(M + M^*)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of the Hermitian part of `m`, sorted ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    assert_eq!(m.nrows(), m.ncols(), "hermitian_eigenvalues needs a square matrix");
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut eigs: Vec<f64> = nalgebra::SymmetricEigen::new(hermitize(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    eigs
}

/// Multiplicity of 1 as an eigenvalue of a Hermitian contraction: the number
/// of eigenvalues `λ ≥ 1 − eig_one` of the symmetrized matrix.
///
/// Errors with [`NumericsError::NonHermitian`] when `‖Q − Q^*‖` exceeds
/// `residual · max(1, ‖Q‖)`.
pub fn eig_one_multiplicity(q: &CMatrix, t: &Tolerances) -> Result<usize, NumericsError> {
    Ok(one_multiplicity_with_gap(q, t)?.0)
}

/// Audit data for a single eigenvalue-1 multiplicity decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigOneGap {
    /// Smallest eigenvalue that was counted (`≥ 1 − eig_one`), if any.
    pub smallest_accepted: Option<f64>,
    /// Largest eigenvalue that fell below the cutoff, if any.
    pub largest_rejected: Option<f64>,
}

/// Same decision rule as [`eig_one_multiplicity`], additionally reporting the
/// eigenvalues bracketing the cutoff so borderline counts can be audited.
pub fn one_multiplicity_with_gap(
    q: &CMatrix,
    t: &Tolerances,
) -> Result<(usize, EigOneGap), NumericsError> {
    let dev = spectral_norm(&(q - q.adjoint()));
    let limit = t.residual * spectral_norm(q).max(1.0);
    if dev > limit {
        return Err(NumericsError::NonHermitian { deviation: dev, limit });
    }
    let eigs = hermitian_eigenvalues(q);
    let cutoff = 1.0 - t.eig_one;
    let count = eigs.iter().filter(|&&l| l >= cutoff).count();
    let gap = EigOneGap {
        smallest_accepted: eigs.iter().copied().filter(|&l| l >= cutoff).next(),
        largest_rejected: eigs.iter().copied().filter(|&l| l < cutoff).last(),
    };
    Ok((count, gap))
}

/// Eigenvalues of a general square complex matrix (via the complex Schur
/// form). Empty for `0×0`; `None` if the QR iteration fails to converge
/// within a bounded budget. The budget matters: the unbounded iteration can
/// cycle on shift/permutation-structured matrices.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<Complex64>> {
    assert_eq!(m.nrows(), m.ncols(), "eigenvalues needs a square matrix");
    if m.nrows() == 0 {
        return Some(Vec::new());
    }
    nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 100_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect())
}

/// Spectral radius `max |λ|`; 0 for the `0×0` matrix.
///
/// Falls back to the (always valid) upper bound `‖A^64‖^{1/64}` in the
/// unlikely event the QR iteration does not converge, so stability checks
/// can only err on the conservative side.
pub fn spectral_radius(m: &CMatrix) -> f64 {
    assert_eq!(m.nrows(), m.ncols(), "spectral_radius needs a square matrix");
    if m.nrows() == 0 {
        return 0.0;
    }
    match eigenvalues(m) {
        Some(eigs) => eigs.iter().fold(0.0_f64, |a, l| a.max(l.norm())),
        None => {
            let mut p = m.clone();
            for _ in 0..6 {
                p = &p * &p; // A^64
            }
            spectral_norm(&p).powf(1.0 / 64.0)
        }
    }
}

/// Solve `A x = b` for square `A`, rejecting systems that are rank-deficient
/// at the `rank_rel` tolerance.
pub fn solve_dense(a: &CMatrix, b: &CMatrix, t: &Tolerances) -> Result<CMatrix, NumericsError> {
    assert_eq!(a.nrows(), a.ncols(), "solve_dense needs a square matrix");
    assert_eq!(a.nrows(), b.nrows(), "solve_dense right-hand side height mismatch");
    let n = a.nrows();
    if n == 0 {
        return Ok(CMatrix::zeros(0, b.ncols()));
    }
    let dec = a.clone().svd(true, true);
    let sv = &dec.singular_values;
    let smax = sv.iter().fold(0.0_f64, |a, &s| a.max(s));
    let rank = if smax == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > t.rank_rel * smax).count()
    };
    if rank < n {
        return Err(NumericsError::SingularSystem { rank, dim: n });
    }
    let u = dec.u.expect("SVD requested with U");
    let v = dec.v_t.expect("SVD requested with V^*").adjoint();
    let mut y = u.adjoint() * b;
    for i in 0..n {
        let s = re(1.0 / sv[i]);
        for j in 0..y.ncols() {
            y[(i, j)] *= s;
        }
    }
    Ok(v * y)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Column-stacking vectorization.
pub fn vec_of(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_of`] for the given shape.
pub fn unvec(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v.as_slice())
}
