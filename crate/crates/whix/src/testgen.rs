//! Seeded generators for randomized checks: Haar-ish unitaries, random
//! stable unitary realizations (corners of random unitaries), Blaschke
//! products, and the built-in diagonal-monomial example pair.
//!
//! These live in the library rather than in test code so that both crates'
//! test suites and the CLI verification path draw the same instances from
//! the same seeds.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::blaschke::BlaschkeProduct;
use crate::numerics::{spectral_radius, CMatrix};
use crate::realization::{diag_inner, monomial_realization, Realization};

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn standard_complex(g: &mut StdRng) -> Complex64 {
    // Box-Muller; keeps the dependency surface at plain `rand`.
    let u1: f64 = g.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = g.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    Complex64::new(r * th.cos(), r * th.sin())
}

/// Matrix with independent complex Gaussian entries scaled by `scale`.
pub fn random_complex_matrix(g: &mut StdRng, rows: usize, cols: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| standard_complex(g) * scale)
}

/// Random unitary from the QR factorization of a complex Gaussian matrix.
pub fn random_unitary(g: &mut StdRng, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let qr = random_complex_matrix(g, n, n, 1.0).qr();
    let q = qr.q();
    let r = qr.r();
    // Fix the column phases so the factorization is unambiguous.
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Random stable unitary realization with state dimension `n` and I/O
/// dimension `m`: the partition of a random `(n+m)×(n+m)` unitary, resampled
/// until the state corner has a comfortable stability margin.
pub fn random_realization(g: &mut StdRng, n: usize, m: usize) -> Realization {
    loop {
        let u = random_unitary(g, n + m);
        let a = u.view((0, 0), (n, n)).clone_owned();
        if spectral_radius(&a) > 1.0 - 1e-3 {
            continue;
        }
        let b = u.view((0, n), (n, m)).clone_owned();
        let c = u.view((n, 0), (m, n)).clone_owned();
        let d = u.view((n, n), (m, m)).clone_owned();
        return Realization::new(a, b, c, d).expect("partition dimensions are consistent");
    }
}

/// Random Blaschke product of the given degree with zeros of modulus at most
/// `max_abs` and a random unimodular constant.
pub fn random_blaschke(g: &mut StdRng, degree: usize, max_abs: f64) -> BlaschkeProduct {
    let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * g.gen::<f64>());
    let zeros = (0..degree)
        .map(|_| {
            let r = max_abs * g.gen::<f64>().sqrt();
            Complex64::from_polar(r, 2.0 * std::f64::consts::PI * g.gen::<f64>())
        })
        .collect();
    BlaschkeProduct::new(zeta, zeros).expect("zeros stay inside the disc")
}

/// Random stable strict contraction (scaled Gaussian).
pub fn random_strict_contraction(g: &mut StdRng, n: usize, norm_cap: f64) -> CMatrix {
    let m = random_complex_matrix(g, n, n, 1.0);
    let s = crate::numerics::spectral_norm(&m);
    m.scale(norm_cap / s.max(1e-12))
}

/// `count` points on the unit circle at angles offset by `seed`.
pub fn unit_circle_points(count: usize, seed: u64) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + (seed as f64) * 0.137) / count as f64;
            Complex64::from_polar(1.0, th)
        })
        .collect()
}

/// The built-in example factor `V(z) = diag(1, 1, 1, z³, z⁵)`.
pub fn example_v() -> Realization {
    diag_inner(&[
        monomial_realization(0),
        monomial_realization(0),
        monomial_realization(0),
        monomial_realization(3),
        monomial_realization(5),
    ])
    .expect("scalar entries")
}

/// The built-in example factor `W(z) = diag(z⁴, z², 1, 1, 1)`.
pub fn example_w() -> Realization {
    diag_inner(&[
        monomial_realization(4),
        monomial_realization(2),
        monomial_realization(0),
        monomial_realization(0),
        monomial_realization(0),
    ])
    .expect("scalar entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{identity, spectral_norm, Tolerances};

    #[test]
    fn random_unitary_is_unitary() {
        let mut g = rng(1);
        for n in [1, 3, 6] {
            let u = random_unitary(&mut g, n);
            assert!(spectral_norm(&(u.adjoint() * &u - identity(n))) < 1e-12);
        }
    }

    #[test]
    fn random_realization_validates() {
        let mut g = rng(2);
        for (n, m) in [(0, 1), (1, 1), (5, 2), (8, 4)] {
            let r = random_realization(&mut g, n, m);
            let rep = r.validate(&Tolerances::default());
            assert!(rep.pass, "n={n} m={m}: {rep:?}");
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = random_realization(&mut rng(99), 4, 2);
        let b = random_realization(&mut rng(99), 4, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn example_factors_have_documented_shapes() {
        assert_eq!(example_v().state_dim(), 8);
        assert_eq!(example_w().state_dim(), 6);
        assert_eq!(example_v().io_dim(), 5);
    }
}
