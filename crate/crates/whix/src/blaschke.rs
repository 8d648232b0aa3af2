//! Finite Blaschke products and the scalar index theory: functional
//! calculus on stable contractions, defect indices, winding numbers, and the
//! reconstruction of a Blaschke product from its action on a defect-1
//! contraction.

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{
    hermitize, identity, re, solve_dense, spectral_norm, spectral_radius, CMatrix, NumericsError,
    Tolerances,
};
use crate::whindex::{Diagnostics, IndexReport};

#[derive(Debug, Clone, Error)]
pub enum BlaschkeError {
    #[error("constant {zeta} is not unimodular")]
    NotUnimodularConstant { zeta: Complex64 },
    #[error("zero {zero} is not strictly inside the unit disc")]
    ZeroOnOrOutsideDisc { zero: Complex64 },
    #[error("evaluation point {z} hits the pole 1/conj({zero})")]
    PoleHit { z: Complex64, zero: Complex64 },
    #[error("matrix argument has spectral radius {rho} ≥ 1")]
    UnstableArgument { rho: f64 },
    #[error("matrix is not a contraction: ‖M‖ = {norm}")]
    NotAContraction { norm: f64 },
    #[error("no eigenvalue-1 eigenvector of φ(A^*)^*φ(A^*): largest eigenvalue {largest}")]
    NoUnitEigenvector { largest: f64 },
    #[error("denominator C(I − zA)^{{-1}}x vanishes at sample point {z}")]
    ZeroDenominator { z: Complex64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Finite Blaschke product `b(z) = ζ Π_k (z − α_k)/(1 − ᾱ_k z)` with
/// `|ζ| = 1` and all zeros strictly inside the open unit disc.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeta: Complex64,
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(zeta: Complex64, zeros: Vec<Complex64>) -> Result<Self, BlaschkeError> {
        if (zeta.norm() - 1.0).abs() > Tolerances::default().residual {
            return Err(BlaschkeError::NotUnimodularConstant { zeta });
        }
        if let Some(&zero) = zeros.iter().find(|a| a.norm() >= 1.0) {
            return Err(BlaschkeError::ZeroOnOrOutsideDisc { zero });
        }
        Ok(Self { zeta, zeros })
    }

    /// The monomial `zⁿ` as a Blaschke product.
    pub fn monomial(n: usize) -> Self {
        Self {
            zeta: re(1.0),
            zeros: vec![re(0.0); n],
        }
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    /// Number of zeros; degree 0 is the constant `ζ`.
    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Product-formula evaluation; unimodular on the unit circle.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, BlaschkeError> {
        let mut acc = self.zeta;
        for &alpha in &self.zeros {
            let den = re(1.0) - alpha.conj() * z;
            if den.norm() < 1e-14 * (1.0 + z.norm()) {
                return Err(BlaschkeError::PoleHit { z, zero: alpha });
            }
            acc *= (z - alpha) / den;
        }
        Ok(acc)
    }

    /// Functional calculus `b(A) = ζ Π_k (A − α_k I)(I − ᾱ_k A)^{-1}` in
    /// rational form; equals the power series for stable `A` and is exact
    /// for nilpotent `A`.
    pub fn of_matrix(&self, a: &CMatrix) -> Result<CMatrix, BlaschkeError> {
        let rho = spectral_radius(a);
        if rho >= 1.0 {
            return Err(BlaschkeError::UnstableArgument { rho });
        }
        let n = a.nrows();
        let t = Tolerances::default();
        let mut acc = identity(n) * self.zeta;
        for &alpha in &self.zeros {
            let g = identity(n) - a * alpha.conj();
            let numer = a - identity(n) * alpha;
            // All factors commute (rational functions of A), so the solve
            // can be applied on either side.
            let factor = solve_dense(&g, &numer, &t)?;
            acc = acc * factor;
        }
        Ok(acc)
    }
}

/// Evaluation as a free function, matching the operation vocabulary of the
/// rest of the crate.
pub fn evaluate_b(b: &BlaschkeProduct, z: Complex64) -> Result<Complex64, BlaschkeError> {
    b.evaluate(z)
}

/// Functional calculus as a free function.
pub fn phi_of_matrix(b: &BlaschkeProduct, a: &CMatrix) -> Result<CMatrix, BlaschkeError> {
    b.of_matrix(a)
}

/// Defect index of a contraction: the rank of `I − M^*M`, i.e. the
/// dimension of the closure of the range of `(I − M^*M)^{1/2}`. Counted as
/// `dim` minus the eigenvalue-1 multiplicity of `M^*M`, which keeps the
/// decision anchored at the natural scale 1 (a relative singular-value
/// cutoff on `I − M^*M` would misread a numerically unitary `M`).
pub fn defect_index(m: &CMatrix, t: &Tolerances) -> Result<usize, BlaschkeError> {
    let norm = spectral_norm(m);
    if norm > 1.0 + t.residual {
        return Err(BlaschkeError::NotAContraction { norm });
    }
    let n = m.ncols();
    let unit_multiplicity = crate::numerics::eig_one_multiplicity(&(m.adjoint() * m), t)?;
    Ok(n - unit_multiplicity)
}

/// Sixteen equispaced sample points on the circle of radius 0.7, well
/// inside the resolvent domain of any stable contraction.
pub fn default_sample_points() -> Vec<Complex64> {
    (0..16)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64) / 16.0;
            Complex64::from_polar(0.7, th)
        })
        .collect()
}

/// Reconstruct a Blaschke product from its functional calculus on a stable
/// defect-1 contraction `A` with `I − A^*A = C^*C`:
///
/// `φ(z) = C(I − zA)^{-1} φ(A^*) x / C(I − zA)^{-1} x`
///
/// where `x` is a unit eigenvector of `φ(A^*)^*φ(A^*)` with eigenvalue 1.
/// Returns the quotient values at the requested sample points; the choice of
/// eigenvector within the eigenspace cancels in the quotient.
pub fn reconstruct_phi(
    a: &CMatrix,
    c: &CMatrix,
    phi: &BlaschkeProduct,
    sample_points: &[Complex64],
    t: &Tolerances,
) -> Result<Vec<Complex64>, BlaschkeError> {
    let rho = spectral_radius(a);
    if rho >= 1.0 {
        return Err(BlaschkeError::UnstableArgument { rho });
    }
    let n = a.nrows();
    let phi_astar = phi.of_matrix(&a.adjoint())?;
    let gram = hermitize(&(phi_astar.adjoint() * &phi_astar));
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut best = 0usize;
    for i in 0..n {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let largest = eig.eigenvalues[best];
    if largest < 1.0 - t.eig_one {
        return Err(BlaschkeError::NoUnitEigenvector { largest });
    }
    let x = eig.eigenvectors.column(best).clone_owned();
    let mx = &phi_astar * &x;
    let mut values = Vec::with_capacity(sample_points.len());
    for &z in sample_points {
        let resolvent = identity(n) - a * z;
        let yw = solve_dense(
            &resolvent,
            &{
                let mut rhs = CMatrix::zeros(n, 2);
                rhs.column_mut(0).copy_from(&mx);
                rhs.column_mut(1).copy_from(&x);
                rhs
            },
            t,
        )?;
        let num = (c * yw.column(0))[(0, 0)];
        let den = (c * yw.column(1))[(0, 0)];
        if den.norm() < 1e-12 {
            return Err(BlaschkeError::ZeroDenominator { z });
        }
        values.push(num / den);
    }
    Ok(values)
}

/// Index structure of the scalar symbol `R = φ m^*`: the single Wiener-Hopf
/// index is `deg(φ) − deg(m)`, the Fredholm index of `T_R` is
/// `deg(m) − deg(φ)`, and the winding number is the index sum.
pub fn scalar_index_report(phi: &BlaschkeProduct, m: &BlaschkeProduct) -> IndexReport {
    let w = phi.degree() as i64 - m.degree() as i64;
    let kappa = (-w).max(0) as usize;
    let omega = w.max(0) as usize;
    IndexReport {
        negative_indices: if w < 0 { vec![w] } else { Vec::new() },
        positive_indices: if w > 0 { vec![w] } else { Vec::new() },
        zero_count: usize::from(w == 0),
        kernel_dims: (0..=kappa).rev().collect(),
        cokernel_dims: (0..=omega).rev().collect(),
        mu: vec![1; kappa],
        nu: vec![1; omega],
        n_tr: kappa,
        d_tr: omega,
        fredholm_index: -w,
        diagnostics: Diagnostics::default(),
    }
}
