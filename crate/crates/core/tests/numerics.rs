use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splinewidth::numerics::{
    cholesky, gauss_legendre, gen_sym_eig, power_iteration, solve_spd, sym_eig, Mat, QuadratureRule, MAX_GAUSS_NODES,
};
use splinewidth::BreakSequence;
use std::f64::consts::PI;

fn random_spd(n: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Mat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let mut a = g.transpose().matmul(&g);
    for i in 0..n {
        a[(i, i)] += n as f64;
    }
    a
}

#[test]
fn gauss_closed_forms() {
    let g1 = gauss_legendre(1).unwrap();
    assert_eq!((g1.nodes[0], g1.weights[0]), (0.0, 2.0));
    let g2 = gauss_legendre(2).unwrap();
    let r = 1.0 / 3f64.sqrt();
    assert!((g2.nodes[0] + r).abs() < 1e-15 && (g2.nodes[1] - r).abs() < 1e-15);
    assert!(g2.weights.iter().all(|w| (w - 1.0).abs() < 1e-15));
    let g3 = gauss_legendre(3).unwrap();
    let s = (0.6f64).sqrt();
    assert!((g3.nodes[0] + s).abs() < 1e-15 && g3.nodes[1].abs() < 1e-15 && (g3.nodes[2] - s).abs() < 1e-15);
    assert!((g3.weights[1] - 8.0 / 9.0).abs() < 1e-15 && (g3.weights[0] - 5.0 / 9.0).abs() < 1e-15);
    assert!(gauss_legendre(0).is_err());
    assert!(gauss_legendre(MAX_GAUSS_NODES + 1).is_err());
}

#[test]
fn composite_rule_exactness() {
    let b = BreakSequence::random_perturbed(7, 0.03, 5, 0.0, 1.0).unwrap();
    for m in 1..=12 {
        let q = QuadratureRule::composite(&b, m).unwrap();
        assert!((q.integrate(|_| 1.0) - 1.0).abs() < 1e-15);
        let d = 2 * m - 1;
        let got = q.integrate(|x| x.powi(d as i32));
        assert!((got - 1.0 / (2 * m) as f64).abs() < 1e-14, "m={m}");
        for e in 0..q.num_elements() {
            let (_, w) = q.element(e);
            let len = b.points()[e + 1] - b.points()[e];
            assert!(w.iter().all(|&w| w > 0.0));
            assert!((w.iter().sum::<f64>() - len).abs() <= 1e-14 * len);
        }
    }
    let q = QuadratureRule::composite(&BreakSequence::uniform(16, 0.0, 1.0).unwrap(), 10).unwrap();
    assert!((q.integrate(|x| (PI * x).sin()) - 2.0 / PI).abs() < 1e-12);
}

#[test]
fn small_factorizations() {
    let i3 = Mat::identity(3);
    assert_eq!(cholesky(&i3).unwrap(), i3);
    let e = sym_eig(&Mat::from_diag(&[3.0, 1.0, 2.0])).unwrap();
    assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    let g = gen_sym_eig(&Mat::from_diag(&[2.0, 2.0]), &Mat::from_diag(&[1.0, 4.0])).unwrap();
    assert!((g.values[0] - 0.5).abs() < 1e-15 && (g.values[1] - 2.0).abs() < 1e-15);
    let bad = Mat::from_rows(&[[1.0, 2.0], [2.0, 1.0]]);
    let msg = cholesky(&bad).unwrap_err().to_string();
    assert!(msg.contains("not positive definite at pivot 1"), "{msg}");
    let asym = Mat::from_rows(&[[1.0, 2.0], [0.0, 1.0]]);
    assert!(sym_eig(&asym).is_err());
}

#[test]
fn spd_solve_round_trip() {
    for (n, seed) in [(5, 1), (60, 2), (200, 3), (500, 4)] {
        let a = random_spd(n, seed);
        let r: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let x = solve_spd(&a, &r).unwrap();
        let ax = a.matvec(&x);
        let res: f64 = ax.iter().zip(&r).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        let rn: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(res <= 1e-10 * rn, "n={n}: {res}");
    }
}

#[test]
fn generalized_pairs_are_mass_orthonormal() {
    let a = random_spd(30, 9);
    let b = random_spd(30, 10);
    let e = gen_sym_eig(&a, &b).unwrap();
    let an = a.max_abs();
    for j in 0..30 {
        let v = e.vector(j);
        let av = a.matvec(&v);
        let bv = b.matvec(&v);
        let res = av.iter().zip(&bv).map(|(x, y)| (x - e.values[j] * y).abs()).fold(0.0, f64::max);
        assert!(res <= 1e-8 * an, "j={j}: {res}");
        for i in 0..30 {
            let bij: f64 = e.vector(i).iter().zip(&bv).map(|(x, y)| x * y).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((bij - want).abs() < 1e-8);
        }
    }
}

#[test]
fn power_iteration_matches_jacobi() {
    let a = random_spd(40, 21);
    let top = sym_eig(&a).unwrap().max_value();
    let it = power_iteration(|v| a.matvec(v), 40, 1e-13, 100_000, 3);
    assert!(it.converged);
    assert!((it.value - top).abs() <= 1e-8 * top, "{} vs {top}", it.value);
}

/// Roots of det(A - λI) by the trigonometric cubic formula.
fn cubic_eigs(a: &Mat) -> [f64; 3] {
    let q = (a[(0, 0)] + a[(1, 1)] + a[(2, 2)]) / 3.0;
    let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let b = Mat::from_fn(3, 3, |i, j| (a[(i, j)] - if i == j { q } else { 0.0 }) / p);
    let det = b[(0, 0)] * (b[(1, 1)] * b[(2, 2)] - b[(1, 2)] * b[(2, 1)])
        - b[(0, 1)] * (b[(1, 0)] * b[(2, 2)] - b[(1, 2)] * b[(2, 0)])
        + b[(0, 2)] * (b[(1, 0)] * b[(2, 1)] - b[(1, 1)] * b[(2, 0)]);
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let mut v = [e1, 3.0 * q - e1 - e3, e3];
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v
}

proptest! {
    #[test]
    fn jacobi_matches_cubic(xs in proptest::collection::vec(-10.0f64..10.0, 6)) {
        let a = Mat::from_rows(&[[xs[0], xs[1], xs[2]], [xs[1], xs[3], xs[4]], [xs[2], xs[4], xs[5]]]);
        let e = sym_eig(&a).unwrap();
        let want = cubic_eigs(&a);
        let scale = a.max_abs().max(1.0);
        for (g, w) in e.values.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-10 * scale, "{:?} vs {:?}", e.values, want);
        }
    }

    #[test]
    fn mass_scaling_scales_eigenvalues(seed in 0u64..1000, c in 0.1f64..10.0) {
        let a = random_spd(8, seed);
        let b = random_spd(8, seed + 1);
        let e1 = gen_sym_eig(&a, &b).unwrap();
        let e2 = gen_sym_eig(&a, &b.scale(c)).unwrap();
        for (x, y) in e1.values.iter().zip(&e2.values) {
            prop_assert!((x / c - y).abs() <= 1e-12 * x.abs());
        }
    }
}
