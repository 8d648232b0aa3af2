//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test -p whix --test acceptance -- --nocapture` to see the
//! per-criterion summary.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::Rng;

use whix::blaschke::{
    default_sample_points, defect_index, phi_of_matrix, reconstruct_phi, scalar_index_report,
    BlaschkeProduct,
};
use whix::numerics::{eig_one_multiplicity, identity, spectral_norm, Tolerances};
use whix::oracle::{oracle_kernel_dims_with, verify_appendix, SectionLimits};
use whix::realization::{blaschke_realization, diag_inner, monomial_realization, Realization};
use whix::testgen::{example_v, example_w, random_blaschke, random_realization, rng};
use whix::whindex::{
    c_circ, coupling_omega, full_report, gram_q, kernel_chain_dims, kernel_dim_sequence,
};

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn criterion_1_example_regression() {
    let started = Instant::now();
    let t = tol();
    let (v, w) = (example_v(), example_w());

    let omega = coupling_omega(&v, &w, &t).unwrap();
    let cc = c_circ(&v, &w, &omega).unwrap();
    assert!(
        spectral_norm(&(&cc - w.b().adjoint())) <= 1e-10,
        "C∘ must equal B_w^*"
    );
    let q = gram_q(&w, &cc, &t).unwrap();
    assert!(spectral_norm(&(&q - identity(6))) <= 1e-10, "Q must equal I_6");

    let report = full_report(&v, &w, &t).unwrap();
    assert_eq!(report.kernel_dims, vec![6, 4, 2, 1, 0]);
    assert_eq!(report.mu, vec![2, 2, 1, 1]);
    assert_eq!(report.negative_indices, vec![-4, -2]);
    assert_eq!(report.positive_indices, vec![3, 5]);
    assert_eq!(report.zero_count, 1);
    assert_eq!(report.fredholm_index, -2);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 1 (built-in example regression): PASS in {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_2_identity_case() {
    let t = tol();
    let mut g = rng(0x0c2);
    for i in 0..20 {
        let n = i % 11; // state dimensions 0..=10
        let m = 1 + i % 3;
        let v = random_realization(&mut g, n, m);
        let omega = coupling_omega(&v, &v, &t).unwrap();
        let cc = c_circ(&v, &v, &omega).unwrap();
        let q = gram_q(&v, &cc, &t).unwrap();
        assert!(spectral_norm(&q) <= 1e-10, "pair {i}: ‖Q‖ = {:.3e}", spectral_norm(&q));
        let report = full_report(&v, &v, &t).unwrap();
        assert!(report.negative_indices.is_empty(), "pair {i}");
        assert!(report.positive_indices.is_empty(), "pair {i}");
        assert_eq!(report.zero_count, m, "pair {i}");
        assert_eq!(report.fredholm_index, 0, "pair {i}");
    }
    println!("criterion 2 (identity case, 20 random realizations): PASS");
}

#[test]
fn criterion_3_scalar_monomials() {
    let t = tol();
    let phi = BlaschkeProduct::monomial(2);
    let m = BlaschkeProduct::monomial(3);

    let scalar = scalar_index_report(&phi, &m);
    assert_eq!(scalar.negative_indices, vec![-1]);
    assert_eq!(scalar.n_tr, 1);
    assert_eq!(scalar.d_tr, 0);

    let v = blaschke_realization(&phi).unwrap();
    let w = blaschke_realization(&m).unwrap();
    let matrix = full_report(&v, &w, &t).unwrap();
    assert_eq!(matrix.negative_indices, vec![-1]);
    assert_eq!(matrix.n_tr, 1);
    assert_eq!(matrix.d_tr, 0);
    assert_eq!(matrix.all_indices(), scalar.all_indices());

    let limits = SectionLimits {
        start: Some(8),
        ..SectionLimits::default()
    };
    let oracle = oracle_kernel_dims_with(&v, &w, 1, &t, &limits).unwrap();
    assert_eq!(oracle, vec![1, 0]);

    println!("criterion 3 (scalar monomials z², z³ by three routes): PASS");
}

fn method_equivalence_pairs() -> Vec<(Realization, Realization)> {
    let mut g = rng(0x0c4);
    (0..100)
        .map(|i| {
            let n_v = 1 + i % 8;
            let n_w = 1 + (i / 3) % 8;
            let m = 1 + i % 4;
            (
                random_realization(&mut g, n_v, m),
                random_realization(&mut g, n_w, m),
            )
        })
        .collect()
}

#[test]
fn criterion_4_method_equivalence() {
    let started = Instant::now();
    let t = tol();
    for (i, (v, w)) in method_equivalence_pairs().iter().enumerate() {
        let omega = coupling_omega(v, w, &t).unwrap();
        let cc = c_circ(v, w, &omega).unwrap();
        let q = gram_q(w, &cc, &t).unwrap();

        let defect = identity(w.state_dim()) - omega.adjoint() * &omega;
        assert!(
            spectral_norm(&(&q - defect)) <= 1e-8,
            "pair {i}: Q vs I − Ω*Ω"
        );

        let spectral = kernel_dim_sequence(w.a(), &q, &t).unwrap();
        let chain = kernel_chain_dims(v, w, spectral.len() - 1, &t).unwrap();
        assert_eq!(chain, spectral, "pair {i}: chain vs spectral sequence");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 4 (method equivalence on 100 random pairs): PASS in {:.2} s",
        elapsed.as_secs_f64()
    );
}

fn random_monomial_diag(g: &mut StdRng, m: usize, total_cap: usize) -> Realization {
    let mut budget = total_cap;
    let entries: Vec<Realization> = (0..m)
        .map(|_| {
            let d = g.gen_range(0..=3.min(budget));
            budget -= d;
            monomial_realization(d)
        })
        .collect();
    diag_inner(&entries).unwrap()
}

fn random_blaschke_diag(g: &mut StdRng, m: usize) -> Realization {
    let entries: Vec<Realization> = (0..m)
        .map(|_| {
            let deg = g.gen_range(0..=3);
            blaschke_realization(&random_blaschke(g, deg, 0.5)).unwrap()
        })
        .collect();
    diag_inner(&entries).unwrap()
}

fn oracle_agreement_pairs() -> Vec<(Realization, Realization)> {
    let mut g = rng(0x0c5);
    let mut pairs = Vec::with_capacity(25);
    for i in 0..15 {
        let m = 1 + i % 4;
        pairs.push((
            random_monomial_diag(&mut g, m, 12),
            random_monomial_diag(&mut g, m, 12),
        ));
    }
    for i in 0..10 {
        let m = 1 + i % 2;
        pairs.push((random_blaschke_diag(&mut g, m), random_blaschke_diag(&mut g, m)));
    }
    pairs
}

#[test]
fn criterion_5_oracle_agreement() {
    let t = tol();
    let limits = SectionLimits {
        max_levels: Some(64),
        ..SectionLimits::default()
    };
    for (i, (v, w)) in oracle_agreement_pairs().iter().enumerate() {
        let report = full_report(v, w, &t).unwrap();
        let kappa1 = report.kernel_dims.len() - 1;
        let oracle = oracle_kernel_dims_with(v, w, kappa1 + 1, &t, &limits)
            .unwrap_or_else(|e| panic!("pair {i}: {e}"));
        assert_eq!(
            &oracle[..=kappa1],
            &report.kernel_dims[..],
            "pair {i}: oracle vs pipeline"
        );
        assert_eq!(oracle[kappa1 + 1], 0, "pair {i}: oracle beyond κ₁");
    }
    println!("criterion 5 (oracle agreement on 25 generated pairs, N < 64): PASS");
}

#[test]
fn criterion_6_index_sum_identity() {
    let t = tol();
    let mut checked = 0usize;
    for (v, w) in method_equivalence_pairs()
        .iter()
        .chain(oracle_agreement_pairs().iter())
    {
        let report = full_report(v, w, &t).unwrap();
        let delta = v.state_dim() as i64 - w.state_dim() as i64;
        assert_eq!(report.index_sum(), delta, "pair {checked}");
        checked += 1;
    }
    println!("criterion 6 (index-sum identity on {checked} pairs): PASS");
}

#[test]
fn criterion_7_blaschke_defect_law() {
    let t = tol();
    let mut g = rng(0x0c7);
    for i in 0..50 {
        let deg_phi = i % 7;
        let deg_m = 1 + i % 6;
        let phi = random_blaschke(&mut g, deg_phi, 0.8);
        let m = random_blaschke(&mut g, deg_m, 0.8);
        let a = blaschke_realization(&m).unwrap();
        let a = a.a().clone();
        let want = deg_phi.min(deg_m);

        let on_a = phi_of_matrix(&phi, &a).unwrap();
        let on_a_star = phi_of_matrix(&phi, &a.adjoint()).unwrap();
        assert_eq!(defect_index(&on_a, &t).unwrap(), want, "case {i}: φ(A)");
        assert_eq!(defect_index(&on_a_star, &t).unwrap(), want, "case {i}: φ(A*)");

        if deg_phi >= deg_m {
            let gram = on_a.adjoint() * &on_a;
            assert_eq!(
                eig_one_multiplicity(&gram, &t).unwrap(),
                0,
                "case {i}: no unit eigenvalues when deg φ ≥ dim X"
            );
        }
    }
    println!("criterion 7 (defect law on 50 random Blaschke pairs): PASS");
}

#[test]
fn criterion_8_reconstruction() {
    let t = tol();
    let mut g = rng(0x0c8);
    let points = default_sample_points();
    for i in 0..20 {
        let n = 2 + i % 5;
        let m = random_blaschke(&mut g, n, 0.7);
        let r = blaschke_realization(&m).unwrap();
        let deg_phi = i % n;
        let phi = random_blaschke(&mut g, deg_phi, 0.7);
        let values = reconstruct_phi(r.a(), r.c(), &phi, &points, &t)
            .unwrap_or_else(|e| panic!("case {i}: {e}"));
        for (value, z) in values.iter().zip(&points) {
            let want = phi.evaluate(*z).unwrap();
            assert!(
                (value - want).norm() <= 1e-6,
                "case {i} at {z}: {value} vs {want}"
            );
        }
    }
    println!("criterion 8 (reconstruction at 16 sample points, 20 cases): PASS");
}

#[test]
fn criterion_9_appendix_identities() {
    let t = tol();
    // Finitely supported symbols: truncation is exact, residuals at float
    // noise level.
    let finite = [
        example_v(),
        example_w(),
        diag_inner(&[monomial_realization(2), monomial_realization(4)]).unwrap(),
    ];
    for (i, r) in finite.iter().enumerate() {
        let rep = verify_appendix(r, 12, &t);
        assert!(
            rep.projection_residual <= 1e-10 && rep.isometry_residual <= 1e-10,
            "finitely supported case {i}: {rep:?}"
        );
    }
    // Rational symbols: residuals within the computed tail bounds.
    let mut g = rng(0x0c9);
    for i in 0..20 {
        let b = random_blaschke(&mut g, 1 + i % 4, 0.5);
        let r = blaschke_realization(&b).unwrap();
        let rep = verify_appendix(&r, 32, &t);
        assert!(rep.pass(), "Blaschke case {i}: {rep:?}");
    }
    println!("criterion 9 (lower-triangular unitary identities): PASS");
}
