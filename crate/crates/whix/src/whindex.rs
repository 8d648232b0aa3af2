//! The realization-to-index pipeline for `R = V W^*` with bi-inner factors.
//!
//! Given stable unitary realizations of `V` and `W`, the coupling operator
//! `Ω` solves `Ω = A_v Ω A_w^* + B_v B_w^*`, the compressed output map is
//! `C∘ = D_v B_w^* + C_v Ω A_w^*`, and the Gram operator `Q` solves
//! `Q = A_w Q A_w^* + C∘^* C∘`. `Q` is a positive contraction with
//! `Q = I − Ω^*Ω`, and
//!
//! `dim ker T_{zᵏR} = dim ker (I − A_wᵏ Q A_w^{*k})`,
//!
//! counted here as the multiplicity of the eigenvalue 1. First differences
//! of that sequence and a conjugate-partition transform yield the negative
//! Wiener-Hopf indices; applying the same pipeline to `R^* = W V^*` (the
//! dual orientation, with `Ω★ = Ω^*`) yields the positive ones.
//!
//! [`kernel_chain_dims`] computes the same sequence a second way, from
//! iterated kernels of the stacked observability rows of `[B_w^*; Ω A_w^*]`
//! against `A_w^*`. The equality of the two sequences is a standing
//! cross-method test. (The published chain formula conjugates `Q` by
//! `A_w^*` on the left; the sequence produced by the stacked kernels matches
//! the `A_wᵏ Q A_w^{*k}` orientation used here, which the cross-method test
//! pins down numerically.)

use thiserror::Error;

use crate::numerics::{
    hermitian_eigenvalues, one_multiplicity_with_gap, rank_tol, spectral_norm, EigOneGap,
    NumericsError, Tolerances,
};
use crate::numerics::{identity, CMatrix};
use crate::realization::{Realization, RealizationError};
use crate::stein::{conditioning, solve_stein, SteinError};

#[derive(Debug, Clone, Error)]
pub enum PipelineError {
    #[error("factors have different I/O dimensions: {left} vs {right}")]
    IoDimensionMismatch { left: usize, right: usize },
    #[error("operand dimensions do not match the realizations: {context}")]
    DimensionMismatch { context: &'static str },
    #[error(transparent)]
    Stein(#[from] SteinError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error("kernel dimension sequence increased at k = {k}: {prev} -> {next} (tolerance failure)")]
    NonMonotone { k: usize, prev: usize, next: usize },
    #[error("kernel dimension sequence did not reach zero within k ≤ {cap}")]
    NoTermination { cap: usize },
    #[error("dimension sequence must be nonincreasing and end at zero, got {dims:?}")]
    MalformedSequence { dims: Vec<usize> },
    #[error(
        "index count exceeds output dimension: {p} negative + {q} positive > m = {m} \
         (tolerance failure; inspect the eigenvalue gaps)"
    )]
    InconsistentIndexCount {
        p: usize,
        q: usize,
        m: usize,
        kernel_gaps: Vec<KernelGap>,
        cokernel_gaps: Vec<KernelGap>,
    },
}

/// Eigenvalue bracket around the 1-cutoff for one `k` of a kernel-dimension
/// sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelGap {
    pub k: usize,
    pub gap: EigOneGap,
}

/// Residuals and sensitivity data accumulated along the pipeline.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Stein residual of the coupling operator `Ω`.
    pub omega_residual: f64,
    /// `‖Ω★ − Ω^*‖`: the dual coupling operator is computed independently
    /// and must agree with the adjoint; disagreement flags solver trouble.
    pub omega_star_vs_adjoint: f64,
    /// Stein residual of `Q`.
    pub q_stein_residual: f64,
    /// `‖Q − Q^*‖`.
    pub q_hermiticity: f64,
    /// `‖Q − (I − Ω^*Ω)‖`.
    pub q_vs_defect_identity: f64,
    /// Extreme eigenvalues of `Q` (should sit in `[0, 1]`).
    pub q_eig_min: f64,
    pub q_eig_max: f64,
    /// `1/(1 − ρ(A_v)ρ(A_w))`.
    pub stein_conditioning: f64,
    /// Per-`k` eigenvalue gaps of the primary sequence.
    pub kernel_gaps: Vec<KernelGap>,
    /// Per-`k` eigenvalue gaps of the dual sequence.
    pub cokernel_gaps: Vec<KernelGap>,
}

/// Complete Wiener-Hopf index structure of `R = V W^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    /// Negative indices `−κ_j`, ascending (e.g. `[-4, -2]`).
    pub negative_indices: Vec<i64>,
    /// Positive indices `ω_j`, ascending (e.g. `[3, 5]`).
    pub positive_indices: Vec<i64>,
    /// Number of zero indices, `m − p − q`.
    pub zero_count: usize,
    /// `n_k = dim ker(I − A_wᵏ Q A_w^{*k})` for `k = 0, …` until 0.
    pub kernel_dims: Vec<usize>,
    /// Dual sequence over `(A_v, Q★)`.
    pub cokernel_dims: Vec<usize>,
    /// First differences `μ_k = n_{k-1} − n_k`.
    pub mu: Vec<usize>,
    /// Dual first differences `ν_k`.
    pub nu: Vec<usize>,
    /// `dim ker T_R = Σ κ_j = n_0`.
    pub n_tr: usize,
    /// `codim ran T_R = Σ ω_j`.
    pub d_tr: usize,
    /// `n_tr − d_tr`.
    pub fredholm_index: i64,
    pub diagnostics: Diagnostics,
}

impl IndexReport {
    /// All `m` indices (negative, zeros, positive), ascending.
    pub fn all_indices(&self) -> Vec<i64> {
        let mut out = self.negative_indices.clone();
        out.extend(std::iter::repeat(0).take(self.zero_count));
        out.extend(&self.positive_indices);
        out
    }

    /// Sum of all indices; equals the winding number of `det R`.
    pub fn index_sum(&self) -> i64 {
        self.all_indices().iter().sum()
    }
}

impl std::fmt::Display for IndexReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let idx: Vec<String> = self.all_indices().iter().map(|k| k.to_string()).collect();
        writeln!(f, "Wiener-Hopf indices: {{{}}}", idx.join(", "))?;
        writeln!(
            f,
            "  dim ker T_R = {}, codim ran T_R = {}, Fredholm index = {}",
            self.n_tr, self.d_tr, self.fredholm_index
        )?;
        writeln!(f, "  kernel dims:   {:?}", self.kernel_dims)?;
        writeln!(f, "  cokernel dims: {:?}", self.cokernel_dims)?;
        writeln!(f, "  mu: {:?}  nu: {:?}", self.mu, self.nu)?;
        write!(
            f,
            "  residuals: omega {:.2e}, q {:.2e}, q vs I-Ω*Ω {:.2e}, Ω★ vs Ω* {:.2e}",
            self.diagnostics.omega_residual,
            self.diagnostics.q_stein_residual,
            self.diagnostics.q_vs_defect_identity,
            self.diagnostics.omega_star_vs_adjoint
        )
    }
}

fn check_io(v: &Realization, w: &Realization) -> Result<usize, PipelineError> {
    if v.io_dim() != w.io_dim() {
        return Err(PipelineError::IoDimensionMismatch {
            left: v.io_dim(),
            right: w.io_dim(),
        });
    }
    Ok(v.io_dim())
}

/// Coupling operator: unique solution of `Ω = A_v Ω A_w^* + B_v B_w^*`;
/// identical to `Υ_v Υ_w^*` built from the controllability operators.
pub fn coupling_omega(
    v: &Realization,
    w: &Realization,
    t: &Tolerances,
) -> Result<CMatrix, PipelineError> {
    check_io(v, w)?;
    Ok(solve_stein(v.a(), w.a(), &(v.b() * w.b().adjoint()), t)?)
}

/// Compressed output map `C∘ = D_v B_w^* + C_v Ω A_w^*`, an `m × n_w`
/// matrix equal to `Σ_k V_k B_w^* (A_w^*)^k`.
pub fn c_circ(
    v: &Realization,
    w: &Realization,
    omega: &CMatrix,
) -> Result<CMatrix, PipelineError> {
    check_io(v, w)?;
    if omega.nrows() != v.state_dim() || omega.ncols() != w.state_dim() {
        return Err(PipelineError::DimensionMismatch {
            context: "coupling operator shape",
        });
    }
    Ok(v.d() * w.b().adjoint() + v.c() * omega * w.a().adjoint())
}

/// Gram operator: unique solution of `Q = A_w Q A_w^* + C∘^* C∘`. A
/// positive contraction satisfying `Q = I − Ω^*Ω`.
pub fn gram_q(
    w: &Realization,
    ccirc: &CMatrix,
    t: &Tolerances,
) -> Result<CMatrix, PipelineError> {
    if ccirc.ncols() != w.state_dim() || ccirc.nrows() != w.io_dim() {
        return Err(PipelineError::DimensionMismatch {
            context: "compressed output map shape",
        });
    }
    Ok(solve_stein(w.a(), w.a(), &(ccirc.adjoint() * ccirc), t)?)
}

/// The sequence `n_k = dim ker(I − A_wᵏ Q A_w^{*k})`, counted as
/// eigenvalue-1 multiplicities and terminated at the first zero. The hard
/// cap `k ≤ n_w + 1` guards against tolerance-induced non-termination.
pub fn kernel_dim_sequence(
    a_w: &CMatrix,
    q: &CMatrix,
    t: &Tolerances,
) -> Result<Vec<usize>, PipelineError> {
    kernel_dim_sequence_with_gaps(a_w, q, t).map(|(dims, _)| dims)
}

fn kernel_dim_sequence_with_gaps(
    a_w: &CMatrix,
    q: &CMatrix,
    t: &Tolerances,
) -> Result<(Vec<usize>, Vec<KernelGap>), PipelineError> {
    if a_w.nrows() != q.nrows() || a_w.ncols() != q.ncols() || q.nrows() != q.ncols() {
        return Err(PipelineError::DimensionMismatch {
            context: "state map and Gram operator shapes",
        });
    }
    let cap = a_w.nrows() + 1;
    let mut dims: Vec<usize> = Vec::new();
    let mut gaps: Vec<KernelGap> = Vec::new();
    let mut conjugated = q.clone();
    for k in 0..=cap {
        let (count, gap) = one_multiplicity_with_gap(&conjugated, t)?;
        if let Some(&prev) = dims.last() {
            if count > prev {
                return Err(PipelineError::NonMonotone {
                    k,
                    prev,
                    next: count,
                });
            }
        }
        dims.push(count);
        gaps.push(KernelGap { k, gap });
        if count == 0 {
            return Ok((dims, gaps));
        }
        conjugated = a_w * conjugated * a_w.adjoint();
    }
    Err(PipelineError::NoTermination { cap })
}

/// Conjugate-partition bookkeeping: from a nonincreasing sequence ending at
/// zero, the differences `μ_k = n_{k-1} − n_k` and the indices
/// `κ_j = #{k : μ_k ≥ j}` for `j = 1..μ_1`. Returns `(κ descending, μ)`.
pub fn indices_from_dims(dims: &[usize]) -> Result<(Vec<usize>, Vec<usize>), PipelineError> {
    let malformed = || PipelineError::MalformedSequence {
        dims: dims.to_vec(),
    };
    if dims.is_empty() || *dims.last().unwrap() != 0 {
        return Err(malformed());
    }
    for pair in dims.windows(2) {
        if pair[1] > pair[0] {
            return Err(malformed());
        }
    }
    let mu: Vec<usize> = dims.windows(2).map(|p| p[0] - p[1]).collect();
    let mu1 = mu.first().copied().unwrap_or(0);
    let kappa: Vec<usize> = (1..=mu1)
        .map(|j| mu.iter().filter(|&&m| m >= j).count())
        .collect();
    Ok((kappa, mu))
}

/// Output of the dual (positive-index) pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPipeline {
    /// `Ω★`, the solution of `Ω★ = A_w Ω★ A_v^* + B_w B_v^*`.
    pub omega_star: CMatrix,
    /// `C∘★ = D_w B_v^* + C_w Ω★ A_v^*`.
    pub c_circ_star: CMatrix,
    /// `Q★`, the solution of `Q★ = A_v Q★ A_v^* + C∘★^* C∘★`.
    pub q_star: CMatrix,
    /// `dim ker(I − A_vᵏ Q★ A_v^{*k})` down to zero.
    pub cokernel_dims: Vec<usize>,
    /// First differences of `cokernel_dims`.
    pub nu: Vec<usize>,
    /// Positive indices `ω_j`, descending.
    pub positive_indices: Vec<usize>,
    /// `‖Ω★ − Ω^*‖` against an independently computed `Ω`.
    pub omega_star_vs_adjoint: f64,
    pub gaps: Vec<KernelGap>,
}

/// Positive-index pipeline: apply the machinery to `R^* = W V^*`, whose
/// negative indices are the opposites of the positive indices of `R`.
pub fn dual_pipeline(
    v: &Realization,
    w: &Realization,
    t: &Tolerances,
) -> Result<DualPipeline, PipelineError> {
    check_io(v, w)?;
    let omega = coupling_omega(v, w, t)?;
    let omega_star = solve_stein(w.a(), v.a(), &(w.b() * v.b().adjoint()), t)?;
    let omega_star_vs_adjoint = spectral_norm(&(&omega_star - omega.adjoint()));
    let c_circ_star = w.d() * v.b().adjoint() + w.c() * &omega_star * v.a().adjoint();
    let q_star = solve_stein(v.a(), v.a(), &(c_circ_star.adjoint() * &c_circ_star), t)?;
    let (cokernel_dims, gaps) = kernel_dim_sequence_with_gaps(v.a(), &q_star, t)?;
    let (positive_indices, nu) = indices_from_dims(&cokernel_dims)?;
    Ok(DualPipeline {
        omega_star,
        c_circ_star,
        q_star,
        cokernel_dims,
        nu,
        positive_indices,
        omega_star_vs_adjoint,
        gaps,
    })
}

fn stein_residual(a1: &CMatrix, a2: &CMatrix, rhs: &CMatrix, s: &CMatrix) -> f64 {
    spectral_norm(&(s - a1 * s * a2.adjoint() - rhs))
}

/// Full pipeline: negative and positive indices, kernel data, Fredholm
/// index, and diagnostics, from one pair of validated realizations.
pub fn full_report(
    v: &Realization,
    w: &Realization,
    t: &Tolerances,
) -> Result<IndexReport, PipelineError> {
    let m = check_io(v, w)?;

    let omega_rhs = v.b() * w.b().adjoint();
    let omega = solve_stein(v.a(), w.a(), &omega_rhs, t)?;
    let omega_residual = stein_residual(v.a(), w.a(), &omega_rhs, &omega);

    let ccirc = c_circ(v, w, &omega)?;
    let q_rhs = ccirc.adjoint() * &ccirc;
    let q = solve_stein(w.a(), w.a(), &q_rhs, t)?;
    let q_stein_residual = stein_residual(w.a(), w.a(), &q_rhs, &q);
    let q_hermiticity = spectral_norm(&(&q - q.adjoint()));
    let q_vs_defect_identity = {
        let n_w = w.state_dim();
        spectral_norm(&(&q - (identity(n_w) - omega.adjoint() * &omega)))
    };
    let q_eigs = hermitian_eigenvalues(&q);
    let (q_eig_min, q_eig_max) = (
        q_eigs.first().copied().unwrap_or(0.0),
        q_eigs.last().copied().unwrap_or(0.0),
    );

    let (kernel_dims, kernel_gaps) = kernel_dim_sequence_with_gaps(w.a(), &q, t)?;
    let (kappa, mu) = indices_from_dims(&kernel_dims)?;

    let dual = dual_pipeline(v, w, t)?;

    let p = kappa.len();
    let q_count = dual.positive_indices.len();
    if p + q_count > m {
        return Err(PipelineError::InconsistentIndexCount {
            p,
            q: q_count,
            m,
            kernel_gaps,
            cokernel_gaps: dual.gaps,
        });
    }

    let n_tr: usize = kappa.iter().sum();
    let d_tr: usize = dual.positive_indices.iter().sum();
    // κ descending ⇒ −κ ascending; ω descending needs a reversal.
    let negative_indices: Vec<i64> = kappa.iter().map(|&k| -(k as i64)).collect();
    let positive_indices: Vec<i64> = dual.positive_indices.iter().rev().map(|&k| k as i64).collect();

    Ok(IndexReport {
        negative_indices,
        positive_indices,
        zero_count: m - p - q_count,
        kernel_dims,
        cokernel_dims: dual.cokernel_dims,
        mu,
        nu: dual.nu,
        n_tr,
        d_tr,
        fredholm_index: n_tr as i64 - d_tr as i64,
        diagnostics: Diagnostics {
            omega_residual,
            omega_star_vs_adjoint: dual.omega_star_vs_adjoint,
            q_stein_residual,
            q_hermiticity,
            q_vs_defect_identity,
            q_eig_min,
            q_eig_max,
            stein_conditioning: conditioning(v.a(), w.a()),
            kernel_gaps,
            cokernel_gaps: dual.gaps,
        },
    })
}

/// Second, independent route to the kernel dimensions: with `X = Ω`,
///
/// `dims[0] = dim ker X` and for `k ≥ 1`
/// `dims[k] = dim ⋂_{j=0}^{k-1} ker([B_w^*; X A_w^*] A_w^{*j})`,
///
/// computed by stacking the rows and taking the numerical kernel.
pub fn kernel_chain_dims(
    v: &Realization,
    w: &Realization,
    k_max: usize,
    t: &Tolerances,
) -> Result<Vec<usize>, PipelineError> {
    let m = check_io(v, w)?;
    let x = coupling_omega(v, w, t)?;
    let n_w = w.state_dim();
    let mut dims = Vec::with_capacity(k_max + 1);
    dims.push(n_w - rank_tol(&x, t));
    if k_max == 0 {
        return Ok(dims);
    }
    let a_wh = w.a().adjoint();
    let block_rows = m + v.state_dim();
    let mut base = CMatrix::zeros(block_rows, n_w);
    base.view_mut((0, 0), (m, n_w)).copy_from(&w.b().adjoint());
    base.view_mut((m, 0), (v.state_dim(), n_w))
        .copy_from(&(&x * &a_wh));
    let mut stack = CMatrix::zeros(block_rows * k_max, n_w);
    let mut current = base;
    for k in 1..=k_max {
        stack
            .view_mut(((k - 1) * block_rows, 0), (block_rows, n_w))
            .copy_from(&current);
        let filled = stack.rows(0, k * block_rows).clone_owned();
        dims.push(n_w - rank_tol(&filled, t));
        current = &current * &a_wh;
    }
    Ok(dims)
}
