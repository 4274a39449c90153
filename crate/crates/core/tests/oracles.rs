//! Closed-form kernels checked against dense exponentials of truncated
//! Fock-space generators.

use num_complex::Complex64;

use zigzag::analytic::{
    amplitude, displacement_element, eval_eta, eval_g1_g0, squeeze_element, ScalarFrame,
};
use zigzag::numeric::{lattice_generator, matrix_exp_oracle, CMatrix, FockOperators};
use zigzag::LatticeParams;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn params(lambda: f64, a1: f64, a2: f64, n0: usize, n: usize) -> LatticeParams {
    LatticeParams::new(lambda, a1, a2, n0, n).unwrap()
}

fn block_err(a: &CMatrix, b: &CMatrix, size: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..size {
        for j in 0..size {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

fn displacement(ops: &FockOperators, eta: Complex64) -> CMatrix {
    matrix_exp_oracle(&ops.displacement_generator(eta), 1.0).unwrap()
}

#[test]
fn displacement_first_elements() {
    let ops = FockOperators::new(64);
    let d = displacement(&ops, c(1.0, 0.0));
    let e = (-0.5f64).exp();
    assert!((displacement_element(1, 0, c(1.0, 0.0)) - e).norm() < 1e-14);
    assert!((displacement_element(0, 1, c(1.0, 0.0)) + e).norm() < 1e-14);
    assert!((d[(1, 0)] - e).norm() < 1e-12);
    assert!((d[(0, 1)] + e).norm() < 1e-12);
}

#[test]
fn squeeze_element_fixture() {
    let ops = FockOperators::new(256);
    let p = params(2.0, 0.0, 0.5, 0, 1);
    let z = 0.7;
    let (g1, g0) = eval_g1_g0(&p, z).unwrap();
    let g = ops.su11_generator(p.lambda / p.alpha2) * c(2.0 * p.alpha2, 0.0);
    let s = matrix_exp_oracle(&g, z).unwrap();
    let value = squeeze_element(4, 2, g1, g0);
    assert!(
        (value - s[(4, 2)]).norm() < 1e-12,
        "{value} vs {}",
        s[(4, 2)]
    );
    assert!(value.norm() > 1e-3);
}

#[test]
fn displacement_composition() {
    let ops = FockOperators::new(128);
    let (x, y) = (c(0.4, -0.3), c(-0.2, 0.9));
    let table = |eta: Complex64| CMatrix::from_fn(128, 128, |m, n| displacement_element(m, n, eta));
    let lhs = table(x) * table(y);
    let phase = ((x * y.conj() - x.conj() * y) * 0.5).exp();
    let rhs = table(x + y) * phase;
    assert!(block_err(&lhs, &rhs, 20) < 1e-8);
    assert!(block_err(&table(x + y), &displacement(&ops, x + y), 20) < 1e-8);
}

#[test]
fn squeeze_conjugates_displacement() {
    // exp(-2i a2 H Z) D+(beta) exp(2i a2 H Z) = D+(beta + eta). The critical
    // generator spreads fastest, so its distance is kept short for 256 states.
    let ops = FockOperators::new(256);
    for (lambda, a1, a2, z) in [
        (2.0, 0.3, 0.5, 0.7),
        (0.5, 1.0, 0.8, 0.4),
        (1.0, 0.5, 0.5, 0.5),
    ] {
        let p = params(lambda, a1, a2, 0, 1);
        let beta = c(p.beta(), 0.0);
        let eta = if p.regime().kind == zigzag::RegimeKind::Critical {
            zigzag::analytic::eval_eta_critical(&p, z).unwrap()
        } else {
            eval_eta(&p, z).unwrap()
        };
        let g = ops.su11_generator(lambda / a2) * c(2.0 * a2, 0.0);
        let fwd = matrix_exp_oracle(&g, z).unwrap();
        let back = matrix_exp_oracle(&g, -z).unwrap();
        let lhs = &back * displacement(&ops, -beta) * &fwd;
        let rhs = displacement(&ops, -(beta + eta));
        assert!(block_err(&lhs, &rhs, 30) < 1e-7, "{lambda} {a1} {a2}");
    }
}

#[test]
fn amplitude_matches_propagator() {
    // Lattices are small enough that the dense propagator on 400 states is
    // exact on the first 60 sites.
    let cases = [
        (2.0, 0.1, 0.5, 10, 2.6),
        (2.0, 2.0, 0.5, 25, 1.0),
        (3.0, 1.0, 0.5, 3, 2.0),
        (1.0, 0.4, 0.5, 5, 1.5),
        (0.5, 0.3, 0.4, 0, 0.8),
        (0.0, 0.0, 0.7, 4, 0.5),
        (1.5, 0.7, 0.0, 6, 1.3),
    ];
    for (lambda, a1, a2, n0, z) in cases {
        let p = params(lambda, a1, a2, n0, 60);
        let u = matrix_exp_oracle(&lattice_generator(&p, 400), z).unwrap();
        let row = amplitude(&p, z).unwrap();
        for (m, a) in row.amps.iter().enumerate() {
            let err = (a - u[(m, n0)]).norm();
            assert!(err < 1e-8, "{p:?} Z={z} m={m}: {err:.2e}");
        }
    }
}

#[test]
fn factorized_product_reproduces_amplitude() {
    // exp(-nu/2) S(Z) D(-eta) |n0> assembled from dense factors.
    let ops = FockOperators::new(256);
    let p = params(2.0, 0.6, 0.5, 3, 30);
    let z = 1.1;
    let frame = ScalarFrame::new(&p, z).unwrap();
    let g = ops.su11_generator(p.lambda / p.alpha2) * c(2.0 * p.alpha2, 0.0);
    let s = matrix_exp_oracle(&g, z).unwrap();
    let d = displacement(&ops, -frame.eta);
    let w = s * d * (-frame.nu * 0.5).exp();
    let row = amplitude(&p, z).unwrap();
    for (m, a) in row.amps.iter().enumerate() {
        assert!((a - w[(m, 3)]).norm() < 1e-8, "m={m}");
    }
}
