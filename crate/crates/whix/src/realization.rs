//! Stable unitary state-space realizations of rational bi-inner functions.
//!
//! A realization `{A, B, C, D}` represents `Θ(z) = D + zC(I − zA)^{-1}B`.
//! Validated realizations have a unitary systems operator `[[A, B], [C, D]]`
//! and all eigenvalues of `A` inside the open unit disc; every quantity this
//! crate derives from a realization is invariant under unitary state
//! equivalence, so any construction producing *a* stable unitary realization
//! of the right transfer function is acceptable.

use num_complex::Complex64;
use thiserror::Error;

use crate::blaschke::BlaschkeProduct;
use crate::numerics::{
    identity, re, solve_dense, spectral_norm, spectral_radius, CMatrix, NumericsError, Tolerances,
};

#[derive(Debug, Clone, Error)]
pub enum RealizationError {
    #[error("inconsistent realization blocks: A {a:?}, B {b:?}, C {c:?}, D {d:?}")]
    DimensionMismatch {
        a: (usize, usize),
        b: (usize, usize),
        c: (usize, usize),
        d: (usize, usize),
    },
    #[error("resolvent I − zA is numerically singular at z = {z}")]
    SingularResolvent { z: Complex64 },
    #[error("Blaschke zero {zero} is not strictly inside the unit disc")]
    ZeroOnOrOutsideDisc { zero: Complex64 },
}

/// State-space quadruple of a (candidate) bi-inner function.
///
/// `A` is `n×n`, `B` is `n×m`, `C` is `m×n`, `D` is `m×m` with `n ≥ 0` and
/// `m ≥ 1`. Degree-0 (constant) functions use empty state matrices. The
/// unitarity/stability contracts are checked by [`Realization::validate`]
/// rather than enforced at construction, so ill-formed input can still be
/// loaded and diagnosed.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    a: CMatrix,
    b: CMatrix,
    c: CMatrix,
    d: CMatrix,
}

/// Outcome of the unitarity/stability contract check.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// `‖T^*T − I‖` for the systems operator `T`.
    pub unitarity_left: f64,
    /// `‖TT^* − I‖`.
    pub unitarity_right: f64,
    /// Spectral radius of the state map `A`.
    pub spectral_radius: f64,
    /// Both unitarity residuals within tolerance and radius strictly < 1.
    pub pass: bool,
    /// Radius above `1 − 1e-6`: downstream Stein solves may be sensitive.
    pub margin_warning: bool,
}

impl Realization {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self, RealizationError> {
        let n = a.nrows();
        let m = d.nrows();
        let consistent = a.ncols() == n
            && b.nrows() == n
            && b.ncols() == m
            && c.nrows() == m
            && c.ncols() == n
            && d.ncols() == m
            && m >= 1;
        if !consistent {
            return Err(RealizationError::DimensionMismatch {
                a: a.shape(),
                b: b.shape(),
                c: c.shape(),
                d: d.shape(),
            });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    pub fn d(&self) -> &CMatrix {
        &self.d
    }

    /// State dimension `n = dim X`.
    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    /// Input/output dimension `m`.
    pub fn io_dim(&self) -> usize {
        self.d.nrows()
    }

    /// Systems operator `[[A, B], [C, D]]`.
    pub fn systems_operator(&self) -> CMatrix {
        let n = self.state_dim();
        let m = self.io_dim();
        let mut t = CMatrix::zeros(n + m, n + m);
        t.view_mut((0, 0), (n, n)).copy_from(&self.a);
        t.view_mut((0, n), (n, m)).copy_from(&self.b);
        t.view_mut((n, 0), (m, n)).copy_from(&self.c);
        t.view_mut((n, n), (m, m)).copy_from(&self.d);
        t
    }

    /// Check the stable-unitary contract and report the residuals.
    pub fn validate(&self, t: &Tolerances) -> ValidationReport {
        let sys = self.systems_operator();
        let dim = sys.nrows();
        let left = spectral_norm(&(sys.adjoint() * &sys - identity(dim)));
        let right = spectral_norm(&(&sys * sys.adjoint() - identity(dim)));
        let radius = spectral_radius(&self.a);
        ValidationReport {
            unitarity_left: left,
            unitarity_right: right,
            spectral_radius: radius,
            pass: left <= t.residual && right <= t.residual && radius < 1.0,
            margin_warning: radius > 1.0 - 1e-6,
        }
    }

    /// Point evaluation `Θ(z) = D + zC(I − zA)^{-1}B`.
    pub fn evaluate(&self, z: Complex64) -> Result<CMatrix, RealizationError> {
        let n = self.state_dim();
        if n == 0 {
            return Ok(self.d.clone());
        }
        let resolvent = identity(n) - self.a.scale(1.0) * z;
        let x = solve_dense(&resolvent, &self.b, &Tolerances::default()).map_err(|e| match e {
            NumericsError::SingularSystem { .. } => RealizationError::SingularResolvent { z },
            NumericsError::NonHermitian { .. } => unreachable!("solve_dense is rank-checked only"),
        })?;
        Ok(&self.d + (&self.c * x) * z)
    }

    /// Taylor coefficient `Θ_0 = D`, `Θ_k = C A^{k-1} B` for `k ≥ 1`.
    pub fn taylor_coefficient(&self, k: usize) -> CMatrix {
        if k == 0 {
            return self.d.clone();
        }
        let mut p = self.b.clone();
        for _ in 1..k {
            p = &self.a * p;
        }
        &self.c * p
    }

    /// The first `count` Taylor coefficients `Θ_0, …, Θ_{count-1}`.
    pub fn taylor_coefficients(&self, count: usize) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        out.push(self.d.clone());
        let mut p = self.b.clone();
        for _ in 1..count {
            out.push(&self.c * &p);
            p = &self.a * p;
        }
        out
    }

    /// Realization of `Θ̃(z) = Σ zⁿ Θ_n^*`, namely `{A^*, C^*, B^*, D^*}`.
    pub fn tilde(&self) -> Realization {
        Realization {
            a: self.a.adjoint(),
            b: self.c.adjoint(),
            c: self.b.adjoint(),
            d: self.d.adjoint(),
        }
    }

    /// Unitary state change `{UAU^*, UB, CU^*, D}`; leaves the transfer
    /// function and all index data unchanged.
    pub fn state_conjugate(&self, u: &CMatrix) -> Realization {
        Realization {
            a: u * &self.a * u.adjoint(),
            b: u * &self.b,
            c: &self.c * u.adjoint(),
            d: self.d.clone(),
        }
    }
}

/// Stable unitary realization of the monomial `zⁿ`: the upper Jordan block
/// `J_n(0)` with `B = e_n`, `C = e_1^T`. For `n = 0` the constant `1` with
/// empty state.
pub fn monomial_realization(n: usize) -> Realization {
    if n == 0 {
        return Realization {
            a: CMatrix::zeros(0, 0),
            b: CMatrix::zeros(0, 1),
            c: CMatrix::zeros(1, 0),
            d: CMatrix::from_element(1, 1, re(1.0)),
        };
    }
    let a = CMatrix::from_fn(n, n, |i, j| if j == i + 1 { re(1.0) } else { re(0.0) });
    let mut b = CMatrix::zeros(n, 1);
    b[(n - 1, 0)] = re(1.0);
    let mut c = CMatrix::zeros(1, n);
    c[(0, 0)] = re(1.0);
    Realization {
        a,
        b,
        c,
        d: CMatrix::zeros(1, 1),
    }
}

/// One canonical stable unitary realization of a finite Blaschke product,
/// built by cascading degree-1 sections. The section for zero `α` with
/// unimodular constant `ζ` is
/// `{ᾱ, √(1−|α|²), ζ√(1−|α|²), −ζα}`.
pub fn blaschke_realization(b: &BlaschkeProduct) -> Result<Realization, RealizationError> {
    let zeta = b.zeta();
    if b.degree() == 0 {
        return Realization::new(
            CMatrix::zeros(0, 0),
            CMatrix::zeros(0, 1),
            CMatrix::zeros(1, 0),
            CMatrix::from_element(1, 1, zeta),
        );
    }
    let mut acc: Option<Realization> = None;
    for (k, &alpha) in b.zeros().iter().enumerate() {
        if alpha.norm() >= 1.0 {
            return Err(RealizationError::ZeroOnOrOutsideDisc { zero: alpha });
        }
        let constant = if k == 0 { zeta } else { re(1.0) };
        let s = (1.0 - alpha.norm_sqr()).sqrt();
        let section = Realization {
            a: CMatrix::from_element(1, 1, alpha.conj()),
            b: CMatrix::from_element(1, 1, re(s)),
            c: CMatrix::from_element(1, 1, constant * s),
            d: CMatrix::from_element(1, 1, -constant * alpha),
        };
        acc = Some(match acc {
            None => section,
            Some(prev) => cascade(&prev, &section)?,
        });
    }
    Ok(acc.expect("degree ≥ 1"))
}

/// Series connection realizing the product `Θ_outer(z) · Θ_inner(z)`.
/// Preserves unitarity and stability; the state dimension is the sum.
pub fn cascade(outer: &Realization, inner: &Realization) -> Result<Realization, RealizationError> {
    let m = outer.io_dim();
    if inner.io_dim() != m {
        return Err(RealizationError::DimensionMismatch {
            a: outer.a.shape(),
            b: outer.b.shape(),
            c: inner.c.shape(),
            d: inner.d.shape(),
        });
    }
    let n1 = outer.state_dim();
    let n2 = inner.state_dim();
    let n = n1 + n2;
    let mut a = CMatrix::zeros(n, n);
    a.view_mut((0, 0), (n1, n1)).copy_from(&outer.a);
    a.view_mut((0, n1), (n1, n2)).copy_from(&(&outer.b * &inner.c));
    a.view_mut((n1, n1), (n2, n2)).copy_from(&inner.a);
    let mut b = CMatrix::zeros(n, m);
    b.view_mut((0, 0), (n1, m)).copy_from(&(&outer.b * &inner.d));
    b.view_mut((n1, 0), (n2, m)).copy_from(&inner.b);
    let mut c = CMatrix::zeros(m, n);
    c.view_mut((0, 0), (m, n1)).copy_from(&outer.c);
    c.view_mut((0, n1), (m, n2)).copy_from(&(&outer.d * &inner.c));
    let d = &outer.d * &inner.d;
    Ok(Realization { a, b, c, d })
}

/// Block-diagonal inner function `diag(θ_1, …, θ_m)` from scalar
/// realizations. States are stacked entry by entry; each entry's `B`, `C`,
/// `D` blocks are embedded into its own coordinate.
pub fn diag_inner(entries: &[Realization]) -> Result<Realization, RealizationError> {
    let m = entries.len();
    for e in entries {
        if e.io_dim() != 1 {
            return Err(RealizationError::DimensionMismatch {
                a: e.a.shape(),
                b: e.b.shape(),
                c: e.c.shape(),
                d: e.d.shape(),
            });
        }
    }
    let n: usize = entries.iter().map(Realization::state_dim).sum();
    let mut a = CMatrix::zeros(n, n);
    let mut b = CMatrix::zeros(n, m);
    let mut c = CMatrix::zeros(m, n);
    let mut d = CMatrix::zeros(m, m);
    let mut offset = 0;
    for (j, e) in entries.iter().enumerate() {
        let nj = e.state_dim();
        a.view_mut((offset, offset), (nj, nj)).copy_from(&e.a);
        b.view_mut((offset, j), (nj, 1)).copy_from(&e.b);
        c.view_mut((j, offset), (1, nj)).copy_from(&e.c);
        d[(j, j)] = e.d[(0, 0)];
        offset += nj;
    }
    Ok(Realization { a, b, c, d })
}
