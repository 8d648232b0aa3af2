//! Truncated Toeplitz/Hankel laboratory: brute-force verification of kernel
//! dimensions, the `T_R = T_V T_W^* + H_V H_W^*` decomposition, and the
//! lower-triangular unitary identities, all on finite sections with explicit
//! tail bounds.
//!
//! Kernel dimensions of `T_{zᵏR}` are estimated on *tall* rectangular
//! sections: columns restricted to the first `N` block coordinates, rows
//! extended far enough that everything discarded is bounded by the
//! geometric tail of the positive Fourier coefficients. Section sizes grow
//! until two consecutive estimates agree; failures to stabilize are
//! reported, never guessed.


use thiserror::Error;

use crate::numerics::{identity, rank_tol, spectral_norm, CMatrix, Tolerances};
use crate::realization::Realization;
use crate::whindex::{coupling_omega, c_circ, PipelineError};

#[derive(Debug, Clone, Error)]
pub enum OracleError {
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(
        "finite-section kernel dimension for k = {k} did not stabilize by N = {levels_reached} \
         (limit {max_levels})"
    )]
    NoStabilization {
        k: usize,
        levels_reached: usize,
        max_levels: usize,
    },
}

/// A finite block Toeplitz/Hankel section together with its size and the
/// norm bound on everything the truncation discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationProbe {
    /// Block size `m`.
    pub block_size: usize,
    /// Number of block rows/columns `N`.
    pub levels: usize,
    /// The `Nm × Nm` section.
    pub matrix: CMatrix,
    /// Bound on the total norm of discarded coefficients.
    pub tail_bound: f64,
}

/// `Σ_{j ≥ from} ‖A^j‖`, bounded via submultiplicativity by
/// `(Σ_{r<p} ‖A^{from+r}‖) / (1 − ‖A^p‖)` with `p` the state dimension
/// (`‖A^p‖ < 1` for any stable contraction).
fn power_tail_sum(a: &CMatrix, from: usize) -> f64 {
    let p = a.nrows();
    if p == 0 {
        return 0.0;
    }
    let mut cur = identity(p);
    let mut partial = 0.0;
    let mut q = 1.0;
    for j in 0..from + p {
        if j >= from {
            partial += spectral_norm(&cur);
        }
        if j + 1 == p {
            q = spectral_norm(&(&cur * a));
        }
        cur = &cur * a;
    }
    if q >= 1.0 {
        return f64::INFINITY;
    }
    partial / (1.0 - q)
}

/// Bound on `Σ_{k ≥ from} ‖Θ_k‖` for the Taylor coefficients of a stable
/// realization (`from ≥ 1`).
pub fn coefficient_tail_bound(r: &Realization, from: usize) -> f64 {
    let from = from.max(1);
    if r.state_dim() == 0 {
        return 0.0;
    }
    spectral_norm(r.c()) * spectral_norm(r.b()) * power_tail_sum(r.a(), from - 1)
}

/// Fourier data of `R = V W^*` in closed form.
///
/// With `Ω` the coupling operator and `C∘` the compressed output map,
///
/// * `R_0 = D_v D_w^* + C_v Ω C_w^*`,
/// * `R_n = C_v A_v^{n-1} (B_v D_w^* + A_v Ω C_w^*)` for `n ≥ 1`,
/// * `R_{-n} = C∘ A_w^{*(n-1)} C_w^*` for `n ≥ 1`.
#[derive(Debug, Clone)]
pub struct RSymbol {
    v: Realization,
    w: Realization,
    ccirc: CMatrix,
    /// `B_v D_w^* + A_v Ω C_w^*`, the positive-side seed.
    pos_seed: CMatrix,
    r0: CMatrix,
}

impl RSymbol {
    pub fn new(v: &Realization, w: &Realization, t: &Tolerances) -> Result<Self, PipelineError> {
        let omega = coupling_omega(v, w, t)?;
        let ccirc = c_circ(v, w, &omega)?;
        let pos_seed = v.b() * w.d().adjoint() + v.a() * &omega * w.c().adjoint();
        let r0 = v.d() * w.d().adjoint() + v.c() * &omega * w.c().adjoint();
        Ok(Self {
            v: v.clone(),
            w: w.clone(),
            ccirc,
            pos_seed,
            r0,
        })
    }

    pub fn block_size(&self) -> usize {
        self.v.io_dim()
    }

    /// Single Fourier coefficient `R_n`.
    pub fn coeff(&self, n: i64) -> CMatrix {
        if n == 0 {
            return self.r0.clone();
        }
        if n > 0 {
            let mut p = self.pos_seed.clone();
            for _ in 1..n {
                p = self.v.a() * p;
            }
            self.v.c() * p
        } else {
            let mut row = self.ccirc.clone();
            for _ in 1..(-n) {
                row = row * self.w.a().adjoint();
            }
            row * self.w.c().adjoint()
        }
    }

    /// Coefficients `R_lo, …, R_hi` computed with running powers.
    pub fn coeff_range(&self, lo: i64, hi: i64) -> Vec<CMatrix> {
        assert!(lo <= hi);
        let m = self.block_size();
        let mut out = vec![CMatrix::zeros(m, m); (hi - lo + 1) as usize];
        let at = |n: i64| (n - lo) as usize;
        if lo <= 0 && 0 <= hi {
            out[at(0)] = self.r0.clone();
        }
        if hi >= 1 {
            let mut p = self.pos_seed.clone();
            for n in 1..=hi {
                if n >= lo {
                    out[at(n)] = self.v.c() * &p;
                }
                p = self.v.a() * p;
            }
        }
        if lo <= -1 {
            let mut row = self.ccirc.clone();
            for n in 1..=(-lo) {
                if -n <= hi {
                    out[at(-n)] = &row * self.w.c().adjoint();
                }
                row = row * self.w.a().adjoint();
            }
        }
        out
    }

    /// Bound on `Σ_{n ≥ from} ‖R_n‖` (positive side).
    pub fn positive_tail(&self, from: usize) -> f64 {
        let from = from.max(1);
        if self.v.state_dim() == 0 {
            return 0.0;
        }
        spectral_norm(self.v.c())
            * spectral_norm(&self.pos_seed)
            * power_tail_sum(self.v.a(), from - 1)
    }

    /// Bound on `Σ_{n ≥ from} ‖R_{-n}‖` (negative side).
    pub fn negative_tail(&self, from: usize) -> f64 {
        let from = from.max(1);
        if self.w.state_dim() == 0 {
            return 0.0;
        }
        spectral_norm(&self.ccirc)
            * spectral_norm(self.w.c())
            * power_tail_sum(self.w.a(), from - 1)
    }
}

/// Closed-form Fourier coefficient `R_n` of `R = V W^*`.
pub fn fourier_r(
    v: &Realization,
    w: &Realization,
    n: i64,
    t: &Tolerances,
) -> Result<CMatrix, PipelineError> {
    Ok(RSymbol::new(v, w, t)?.coeff(n))
}

/// Truncated-convolution oracle `Σ_{k=0}^{terms} V_{n+k} W_k^*` for the same
/// coefficient; kept independent of the closed forms so the two routes can
/// be compared.
pub fn fourier_r_series(v: &Realization, w: &Realization, n: i64, terms: usize) -> CMatrix {
    let m = v.io_dim();
    let w_coeffs = w.taylor_coefficients(terms + 1);
    let v_up_to = (n.max(0) as usize) + terms + 1;
    let v_coeffs = v.taylor_coefficients(v_up_to);
    let mut acc = CMatrix::zeros(m, m);
    for (k, wk) in w_coeffs.iter().enumerate() {
        let idx = n + k as i64;
        if idx < 0 {
            continue;
        }
        let idx = idx as usize;
        if idx < v_coeffs.len() {
            acc += &v_coeffs[idx] * wk.adjoint();
        }
    }
    acc
}

/// Finite section `[coeffs(i − j)]` with `N` block rows and columns.
pub fn truncated_toeplitz(
    coeffs: &dyn Fn(i64) -> CMatrix,
    block_size: usize,
    levels: usize,
    tail_bound: f64,
) -> TruncationProbe {
    let mut matrix = CMatrix::zeros(levels * block_size, levels * block_size);
    for d in -(levels as i64 - 1)..=(levels as i64 - 1) {
        let blk = coeffs(d);
        for i in 0..levels {
            let j = i as i64 - d;
            if j >= 0 && (j as usize) < levels {
                matrix
                    .view_mut((i * block_size, j as usize * block_size), (block_size, block_size))
                    .copy_from(&blk);
            }
        }
    }
    TruncationProbe {
        block_size,
        levels,
        matrix,
        tail_bound,
    }
}

/// Lower-triangular section of `T_Θ` for an analytic symbol given by a
/// realization.
pub fn truncated_toeplitz_analytic(r: &Realization, levels: usize) -> TruncationProbe {
    let m = r.io_dim();
    let coeffs = r.taylor_coefficients(levels);
    let mut matrix = CMatrix::zeros(levels * m, levels * m);
    for (d, blk) in coeffs.iter().enumerate() {
        for i in d..levels {
            matrix
                .view_mut((i * m, (i - d) * m), (m, m))
                .copy_from(blk);
        }
    }
    TruncationProbe {
        block_size: m,
        levels,
        matrix,
        tail_bound: coefficient_tail_bound(r, levels),
    }
}

/// Section of the Hankel operator `H_Θ`: block `(i, j) = Θ_{i+j+1}`.
pub fn truncated_hankel(r: &Realization, levels: usize) -> TruncationProbe {
    let m = r.io_dim();
    let coeffs = r.taylor_coefficients(2 * levels);
    let mut matrix = CMatrix::zeros(levels * m, levels * m);
    for i in 0..levels {
        for j in 0..levels {
            matrix
                .view_mut((i * m, j * m), (m, m))
                .copy_from(&coeffs[i + j + 1]);
        }
    }
    TruncationProbe {
        block_size: m,
        levels,
        matrix,
        tail_bound: coefficient_tail_bound(r, 2 * levels),
    }
}

/// Square section of `T_R` built from the closed-form coefficients.
pub fn truncated_toeplitz_r(
    v: &Realization,
    w: &Realization,
    levels: usize,
    t: &Tolerances,
) -> Result<TruncationProbe, PipelineError> {
    let sym = RSymbol::new(v, w, t)?;
    let m = sym.block_size();
    let table = sym.coeff_range(-(levels as i64 - 1), levels as i64 - 1);
    let at = |d: i64| &table[(d + levels as i64 - 1) as usize];
    let mut matrix = CMatrix::zeros(levels * m, levels * m);
    for i in 0..levels {
        for j in 0..levels {
            matrix
                .view_mut((i * m, j * m), (m, m))
                .copy_from(at(i as i64 - j as i64));
        }
    }
    Ok(TruncationProbe {
        block_size: m,
        levels,
        matrix,
        tail_bound: sym.positive_tail(levels) + sym.negative_tail(levels),
    })
}

/// Section-size policy for the kernel-dimension oracle. `None` fields fall
/// back to values derived from the realizations.
#[derive(Debug, Clone, Copy, Default)]
pub struct SectionLimits {
    /// First column level to try.
    pub start: Option<usize>,
    /// Level increment between attempts.
    pub growth: Option<usize>,
    /// Hard cap on column levels.
    pub max_levels: Option<usize>,
}

/// Estimated `dim ker T_{zᵏR}` for `k = 0..=k_max`, from numerical kernels
/// of growing tall sections, each accepted once two consecutive sizes agree.
pub fn oracle_kernel_dims(
    v: &Realization,
    w: &Realization,
    k_max: usize,
    t: &Tolerances,
) -> Result<Vec<usize>, OracleError> {
    oracle_kernel_dims_with(v, w, k_max, t, &SectionLimits::default())
}

/// [`oracle_kernel_dims`] with explicit section-size limits.
pub fn oracle_kernel_dims_with(
    v: &Realization,
    w: &Realization,
    k_max: usize,
    t: &Tolerances,
    limits: &SectionLimits,
) -> Result<Vec<usize>, OracleError> {
    let sym = RSymbol::new(v, w, t)?;
    let nv = v.state_dim();
    let nw = w.state_dim();
    let growth = limits.growth.unwrap_or((nv + nw).max(2));
    let max_levels = limits.max_levels.unwrap_or(16 * (nv + nw + k_max).max(1));
    let start = limits.start.unwrap_or_else(|| {
        (nv + nw + 2)
            .max(4)
            .max(decay_informed_start(v, w, t))
            .min(max_levels.saturating_sub(growth).max(4))
    });

    // Row padding: everything a discarded row could contribute is bounded
    // by the positive-coefficient tail beyond the padding horizon.
    let mut horizon = 1usize;
    while sym.positive_tail(horizon + 1) > 1e-13 && horizon < 512 {
        horizon += 1;
    }

    let mut dims = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut level = start;
        let mut prev: Option<usize> = None;
        loop {
            let d = section_kernel_dim(&sym, k, level, horizon, t);
            if prev == Some(d) {
                dims.push(d);
                break;
            }
            prev = Some(d);
            level += growth;
            if level > max_levels {
                return Err(OracleError::NoStabilization {
                    k,
                    levels_reached: level - growth,
                    max_levels,
                });
            }
        }
    }
    Ok(dims)
}

/// Estimated `codim ran T_{zᵏ-shifted}` data: kernel dimensions of the
/// adjoint-oriented symbol `R^* = W V^*`, mirroring the dual pipeline.
pub fn oracle_cokernel_dims(
    v: &Realization,
    w: &Realization,
    k_max: usize,
    t: &Tolerances,
) -> Result<Vec<usize>, OracleError> {
    oracle_kernel_dims(w, v, k_max, t)
}

fn decay_informed_start(v: &Realization, w: &Realization, t: &Tolerances) -> usize {
    let rho = crate::numerics::spectral_radius(v.a()).max(crate::numerics::spectral_radius(w.a()));
    if rho < 1e-9 {
        return 0;
    }
    // Kernel vectors decay like ρᵏ; sections shorter than this cannot see
    // them above the rank cutoff.
    let n = ((t.rank_rel * 0.1).ln() / rho.ln()).ceil();
    (n as usize).min(256)
}

fn section_kernel_dim(
    sym: &RSymbol,
    k: usize,
    levels: usize,
    horizon: usize,
    t: &Tolerances,
) -> usize {
    let m = sym.block_size();
    let rows = levels + k + horizon;
    let lo = -(levels as i64 - 1) - k as i64;
    let hi = rows as i64 - 1 - k as i64;
    let table = sym.coeff_range(lo, hi);
    let at = |d: i64| &table[(d - lo) as usize];
    let mut section = CMatrix::zeros(rows * m, levels * m);
    for i in 0..rows {
        for j in 0..levels {
            let d = i as i64 - j as i64 - k as i64;
            section.view_mut((i * m, j * m), (m, m)).copy_from(at(d));
        }
    }
    levels * m - rank_tol(&section, t)
}

/// Residual of `T_R = T_V T_W^* + H_V H_W^*` on finite sections.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub residual: f64,
    pub threshold: f64,
    pub levels: usize,
}

impl DecompositionReport {
    pub fn pass(&self) -> bool {
        self.residual <= self.threshold
    }
}

/// Compare the section of `T_R` against `T_V T_W^* + H_V H_W^*` assembled
/// from sections of the factors. The Toeplitz product part is exact on the
/// section; only the Hankel product misses a geometric tail.
pub fn verify_decomposition(
    v: &Realization,
    w: &Realization,
    levels: usize,
    t: &Tolerances,
) -> Result<DecompositionReport, PipelineError> {
    let t_r = truncated_toeplitz_r(v, w, levels, t)?;
    let t_v = truncated_toeplitz_analytic(v, levels);
    let t_w = truncated_toeplitz_analytic(w, levels);
    let h_v = truncated_hankel(v, levels);
    let h_w = truncated_hankel(w, levels);
    let lhs = &t_v.matrix * t_w.matrix.adjoint() + &h_v.matrix * h_w.matrix.adjoint();
    let residual = spectral_norm(&(&t_r.matrix - lhs));
    // Per-block miss ≤ min over the two factor tails (the other factor's
    // coefficients are contractions); N blocks per row at worst.
    let miss = coefficient_tail_bound(v, levels + 1).min(coefficient_tail_bound(w, levels + 1));
    let threshold = (levels as f64) * miss + 1e-11 * (levels as f64).max(1.0);
    Ok(DecompositionReport {
        residual,
        threshold,
        levels,
    })
}

/// Residuals of the lower-triangular unitary identities on sections.
#[derive(Debug, Clone, PartialEq)]
pub struct AppendixReport {
    /// `‖T T^* + H H^* − I‖` over the full section.
    pub projection_residual: f64,
    pub projection_threshold: f64,
    /// `‖T^*T − I‖` over the leading `exact_region` blocks.
    pub isometry_residual: f64,
    pub isometry_threshold: f64,
    /// Number of leading block rows/columns where the isometry identity is
    /// tail-bounded.
    pub exact_region: usize,
    pub levels: usize,
}

impl AppendixReport {
    pub fn pass(&self) -> bool {
        self.projection_residual <= self.projection_threshold
            && self.isometry_residual <= self.isometry_threshold
    }
}

/// Check `T_Θ T_Θ^* + H_Θ H_Θ^* = I` on the full section and the isometry
/// `T_Θ^* T_Θ = I` on the leading blocks where truncation is tail-bounded.
pub fn verify_appendix(r: &Realization, levels: usize, t: &Tolerances) -> AppendixReport {
    let m = r.io_dim();
    let t_th = truncated_toeplitz_analytic(r, levels);
    let h_th = truncated_hankel(r, levels);
    let dim = levels * m;
    // Floating-point slack for exactly supported symbols, scaled off the
    // residual tolerance so the thresholds follow user-tightened runs.
    let slack = t.residual * 1e-3 * (levels as f64).max(1.0);
    let proj =
        &t_th.matrix * t_th.matrix.adjoint() + &h_th.matrix * h_th.matrix.adjoint() - identity(dim);
    let projection_residual = spectral_norm(&proj);
    let projection_threshold =
        (levels as f64) * coefficient_tail_bound(r, levels + 1) + slack;

    let exact_region = levels.div_ceil(2);
    let gram = t_th.matrix.adjoint() * &t_th.matrix - identity(dim);
    let isometry_residual =
        spectral_norm(&gram.view((0, 0), (exact_region * m, exact_region * m)).clone_owned());
    let tail_at_half = coefficient_tail_bound(r, levels - exact_region + 1);
    let isometry_threshold = (exact_region as f64) * tail_at_half + slack;

    AppendixReport {
        projection_residual,
        projection_threshold,
        isometry_residual,
        isometry_threshold,
        exact_region,
        levels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::re;
    use crate::realization::{diag_inner, monomial_realization};
    use crate::testgen::{example_v, example_w, random_realization, rng};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn example_negative_coefficient_is_a_single_one() {
        let (v, w) = (example_v(), example_w());
        let r4 = fourier_r(&v, &w, -4, &tol()).unwrap();
        let mut want = CMatrix::zeros(5, 5);
        want[(0, 0)] = re(1.0);
        assert!(spectral_norm(&(&r4 - &want)) < 1e-12);
    }

    #[test]
    fn identical_factors_have_identity_symbol() {
        let mut g = rng(5);
        let v = random_realization(&mut g, 4, 2);
        let sym = RSymbol::new(&v, &v, &tol()).unwrap();
        assert!(spectral_norm(&(sym.coeff(0) - identity(2))) < 1e-10);
        for n in [-3i64, -1, 1, 2, 5] {
            assert!(spectral_norm(&sym.coeff(n)) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn scalar_monomials_have_single_shift_coefficient() {
        let v = monomial_realization(2);
        let w = monomial_realization(3);
        let sym = RSymbol::new(&v, &w, &tol()).unwrap();
        assert!((sym.coeff(-1)[(0, 0)] - re(1.0)).norm() < 1e-12);
        for n in [-4i64, -3, -2, 0, 1, 2, 3] {
            assert!(spectral_norm(&sym.coeff(n)) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn closed_forms_match_convolution_series() {
        let mut g = rng(11);
        for _ in 0..3 {
            let v = random_realization(&mut g, 4, 2);
            let w = random_realization(&mut g, 3, 2);
            let sym = RSymbol::new(&v, &w, &tol()).unwrap();
            for n in -4i64..=4 {
                let closed = sym.coeff(n);
                let series = fourier_r_series(&v, &w, n, 300);
                assert!(
                    spectral_norm(&(&closed - &series)) < 1e-8,
                    "coefficient {n}"
                );
            }
        }
    }

    #[test]
    fn coeff_range_matches_individual_coefficients() {
        let mut g = rng(13);
        let v = random_realization(&mut g, 3, 2);
        let w = random_realization(&mut g, 4, 2);
        let sym = RSymbol::new(&v, &w, &tol()).unwrap();
        let table = sym.coeff_range(-5, 5);
        for n in -5i64..=5 {
            let direct = sym.coeff(n);
            let tabled = &table[(n + 5) as usize];
            assert!(spectral_norm(&(&direct - tabled)) < 1e-13);
        }
    }

    #[test]
    fn shift_toeplitz_section_is_a_shift_matrix() {
        let z1 = monomial_realization(1);
        let probe = truncated_toeplitz_analytic(&z1, 3);
        let want = CMatrix::from_fn(3, 3, |i, j| {
            if i == j + 1 {
                re(1.0)
            } else {
                re(0.0)
            }
        });
        assert!(spectral_norm(&(&probe.matrix - &want)) < 1e-14);
        assert_eq!(probe.tail_bound, 0.0);
    }

    #[test]
    fn hankel_of_constant_is_zero() {
        let mut g = rng(17);
        let c = random_realization(&mut g, 0, 2);
        let probe = truncated_hankel(&c, 4);
        assert!(spectral_norm(&probe.matrix) < 1e-14);
    }

    #[test]
    fn hankel_rank_equals_state_dimension() {
        let w = example_w();
        let probe = truncated_hankel(&w, 6);
        assert_eq!(rank_tol(&probe.matrix, &tol()), 6);
    }

    #[test]
    fn example_kernel_dims_match_theory() {
        let dims = oracle_kernel_dims(&example_v(), &example_w(), 4, &tol()).unwrap();
        assert_eq!(dims, vec![6, 4, 2, 1, 0]);
    }

    #[test]
    fn identical_factors_have_no_kernel() {
        let mut g = rng(19);
        let v = random_realization(&mut g, 3, 2);
        let dims = oracle_kernel_dims(&v, &v, 2, &tol()).unwrap();
        assert_eq!(dims, vec![0, 0, 0]);
    }

    #[test]
    fn scalar_monomial_kernel_dims() {
        let v = monomial_realization(2);
        let w = monomial_realization(3);
        let dims = oracle_kernel_dims(&v, &w, 1, &tol()).unwrap();
        assert_eq!(dims, vec![1, 0]);
    }

    #[test]
    fn decomposition_is_exact_for_finitely_supported_symbols() {
        let rep = verify_decomposition(&example_v(), &example_w(), 12, &tol()).unwrap();
        assert!(rep.residual <= 1e-10, "residual {:.3e}", rep.residual);
        assert!(rep.pass());
    }

    #[test]
    fn decomposition_identity_for_identical_factors() {
        let mut g = rng(23);
        let v = random_realization(&mut g, 3, 2);
        let t_r = truncated_toeplitz_r(&v, &v, 6, &tol()).unwrap();
        assert!(spectral_norm(&(&t_r.matrix - identity(12))) < 1e-9);
    }

    #[test]
    fn decomposition_within_tail_bound_for_random_pairs() {
        let mut g = rng(29);
        for _ in 0..3 {
            let v = random_realization(&mut g, 3, 2);
            let w = random_realization(&mut g, 4, 2);
            let rep = verify_decomposition(&v, &w, 24, &tol()).unwrap();
            assert!(rep.pass(), "residual {:.3e} vs {:.3e}", rep.residual, rep.threshold);
        }
    }

    #[test]
    fn appendix_identities_for_monomial_diagonals() {
        let theta = diag_inner(&[
            monomial_realization(2),
            monomial_realization(0),
            monomial_realization(3),
        ])
        .unwrap();
        let rep = verify_appendix(&theta, 8, &tol());
        assert!(rep.projection_residual <= 1e-10);
        assert!(rep.isometry_residual <= 1e-10);
        assert!(rep.pass());
    }

    #[test]
    fn appendix_identities_for_example_factor() {
        let rep = verify_appendix(&example_v(), 12, &tol());
        assert!(rep.projection_residual <= 1e-10, "{:?}", rep);
        assert!(rep.pass());
    }

    #[test]
    fn appendix_identities_for_random_blaschke_realization() {
        let mut g = rng(31);
        for _ in 0..3 {
            let b = crate::testgen::random_blaschke(&mut g, 3, 0.5);
            let r = crate::realization::blaschke_realization(&b).unwrap();
            let rep = verify_appendix(&r, 32, &tol());
            assert!(rep.pass(), "{rep:?}");
        }
    }

    #[test]
    fn too_small_level_cap_is_reported() {
        // R = z^{-5}: section kernels grow with the level until N = 5, so a
        // cap below that can never see two agreeing sizes.
        let v = monomial_realization(0);
        let w = monomial_realization(5);
        let limits = SectionLimits {
            start: Some(2),
            growth: Some(2),
            max_levels: Some(4),
        };
        assert!(matches!(
            oracle_kernel_dims_with(&v, &w, 0, &tol(), &limits),
            Err(OracleError::NoStabilization { .. })
        ));
    }

    #[test]
    fn truncated_toeplitz_general_matches_symbol() {
        let v = monomial_realization(1);
        let w = monomial_realization(0);
        let sym = RSymbol::new(&v, &w, &tol()).unwrap();
        let probe = truncated_toeplitz(&|d| sym.coeff(d), 1, 4, 0.0);
        let direct = truncated_toeplitz_r(&v, &w, 4, &tol()).unwrap();
        assert!(spectral_norm(&(&probe.matrix - &direct.matrix)) < 1e-13);
    }
}
