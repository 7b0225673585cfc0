use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splinewidth::nwidth::*;
use splinewidth::{BreakSequence, ConstraintFamily, Error, SplineSpace};
use std::f64::consts::PI;

fn uniform(n: usize) -> BreakSequence {
    BreakSequence::uniform(n, 0.0, 1.0).unwrap()
}

fn grid(n: usize, m: usize) -> FineGrid {
    FineGrid::new(&uniform(n), m).unwrap()
}

fn inner(g: &FineGrid, f: &[f64], h: &[f64]) -> f64 {
    g.weights().iter().zip(f).zip(h).map(|((w, a), b)| w * a * b).sum()
}

fn random_samples(g: &FineGrid, seed: u64) -> Vec<f64> {
    // smooth random function: a few random Fourier modes
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<(f64, f64)> = (0..6).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    g.sample(|x| c.iter().enumerate().map(|(k, (a, b))| a * (k as f64 * PI * x).cos() + b * (k as f64 * PI * x).sin()).sum())
}

#[test]
fn operator_examples() {
    let g = grid(5, 500);
    let one = vec![1.0; g.len()];
    let k = KernelOperator::LeftIntegration.apply(&g, &one);
    assert!(k.iter().zip(g.nodes()).all(|(v, x)| (v - x).abs() <= 1e-12));
    let k = KernelOperator::PeriodicGreen.apply(&g, &one);
    assert!(k.iter().all(|v| v.abs() <= 1e-12));
    let g = grid(5, 2000);
    let f = g.sample(|x| (2.0 * PI * x).cos());
    let u = KernelOperator::PeriodicGreen.apply(&g, &f);
    let err = u.iter().zip(g.nodes()).map(|(v, x)| (v - (2.0 * PI * x).sin() / (2.0 * PI)).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-8, "{err}");
}

#[test]
fn periodic_green_kernel() {
    // K(x,y) = y - x - 1/2 + H(x - y) applied to y² in closed form
    let g = grid(3, 600);
    let f = g.sample(|y| y * y);
    let u = KernelOperator::PeriodicGreen.apply(&g, &f);
    for (v, &x) in u.iter().zip(g.nodes()) {
        let want = x.powi(3) / 3.0 + 0.25 - (x + 0.5) / 3.0;
        assert!((v - want).abs() < 1e-13, "x={x}");
    }
}

#[test]
fn adjoint_pairs() {
    let g = FineGrid::new(&BreakSequence::random_perturbed(7, 0.03, 2, 0.0, 1.0).unwrap(), 800).unwrap();
    for seed in 0..5 {
        let f = random_samples(&g, seed);
        let h = random_samples(&g, seed + 100);
        let kf = KernelOperator::PeriodicGreen.apply(&g, &f);
        let kh = KernelOperator::PeriodicGreen.apply(&g, &h);
        assert!((inner(&g, &kf, &h) + inner(&g, &f, &kh)).abs() <= 1e-10);
        for op in [KernelOperator::LeftIntegration, KernelOperator::RightIntegration, KernelOperator::NeumannFactor] {
            let lhs = inner(&g, &op.apply(&g, &f), &h);
            let rhs = inner(&g, &f, &op.apply_adjoint(&g, &h));
            assert!((lhs - rhs).abs() <= 1e-10, "{op:?}");
        }
        for class in [FunctionClass::APer, FunctionClass::A0, FunctionClass::A1, FunctionClass::A2] {
            let t = class.operator(3).unwrap();
            let lhs = inner(&g, &t.apply(&g, &f), &h);
            let rhs = inner(&g, &f, &t.apply_adjoint(&g, &h));
            assert!((lhs - rhs).abs() <= 1e-10, "{class:?}");
        }
    }
}

#[test]
fn exact_widths() {
    let d = exact_nwidth(FunctionClass::APer, 2, 10, 1.0).unwrap();
    assert!((d - (1.0 / (10.0 * PI)).powi(2)).abs() < 1e-18);
    assert_eq!(exact_nwidth(FunctionClass::APer, 1, 9, 1.0).unwrap(), exact_nwidth(FunctionClass::APer, 1, 10, 1.0).unwrap());
    let d = exact_nwidth(FunctionClass::AFull, 1, 10, 1.0).unwrap();
    assert!((d - 1.0 / (10.0 * PI)).abs() < 1e-17);
    for n in 1..6 {
        for r in 1..4 {
            let a0 = exact_nwidth(FunctionClass::A0, r, n, 1.0).unwrap();
            assert!((a0 - (1.0 / ((n + 1) as f64 * PI)).powi(r as i32)).abs() <= 1e-15 * a0);
        }
    }
    let msg = exact_nwidth(FunctionClass::AFull, 2, 10, 1.0).unwrap_err().to_string();
    assert!(msg.contains("no closed form implemented"), "{msg}");
}

#[test]
fn poincare_constant() {
    let s = SplineSpace::maximal(&uniform(1), 0, ConstraintFamily::Full).unwrap();
    let rep = residual_operator_norm(&s, FunctionClass::AFull, 1, 1000).unwrap();
    assert!((rep.error - 1.0 / PI).abs() < 1e-4);
    assert!(rep.certified());
}

#[test]
fn periodic_optimality() {
    let b = uniform(20);
    for (r, p) in [(1, 0), (1, 3), (2, 1), (2, 4), (3, 2)] {
        let s = SplineSpace::periodic(&b, p).unwrap();
        let rep = residual_operator_norm(&s, FunctionClass::APer, r, 2000).unwrap();
        let want = (1.0 / (20.0 * PI)).powi(r as i32);
        assert!((rep.error / want - 1.0).abs() < 5e-3, "r={r} p={p}: {}", rep.error / want);
        assert!(rep.certified(), "r={r} p={p}");
    }
}

#[test]
fn widths_are_lower_bounds() {
    for seed in 0..3 {
        let b = BreakSequence::random_perturbed(12, 0.03, seed, 0.0, 1.0).unwrap();
        for p in 1..=3 {
            let s = SplineSpace::periodic(&b, p).unwrap();
            let ratio = optimality_ratio(&s, FunctionClass::APer, 1, 1000).unwrap();
            assert!(ratio >= 1.0 - 1e-3, "seed={seed} p={p}: {ratio}");
            let f = SplineSpace::maximal(&b, p, ConstraintFamily::Full).unwrap();
            let ratio = optimality_ratio(&f, FunctionClass::AFull, 1, 1000).unwrap();
            assert!(ratio >= 1.0 - 1e-3, "seed={seed} p={p}: {ratio}");
        }
    }
}

#[test]
fn odd_dimension_and_full_space_ratios() {
    let s = SplineSpace::periodic(&uniform(19), 3).unwrap();
    let ratio = optimality_ratio(&s, FunctionClass::APer, 1, 2000).unwrap();
    assert!(ratio > 1.0 && ratio <= 20.0 / 19.0 + 0.01, "{ratio}");
    let s = SplineSpace::maximal(&uniform(20), 3, ConstraintFamily::Full).unwrap();
    let ratio = optimality_ratio(&s, FunctionClass::AFull, 1, 2000).unwrap();
    assert!((1.0..=23.0 / 20.0).contains(&ratio), "{ratio}");
}

#[test]
fn optimal_spaces_attain_the_width() {
    for (i, class) in [(0, FunctionClass::A0), (1, FunctionClass::A1), (2, FunctionClass::A2)] {
        for r in 1..=3 {
            for p in [r.max(1), r + 2] {
                let s = optimal_space(i, 5, p).unwrap();
                let ratio = optimality_ratio(&s, class, r, 1000).unwrap();
                assert!((ratio - 1.0).abs() < 5e-3, "i={i} r={r} p={p}: {ratio}");
            }
        }
    }
}

#[test]
fn optimal_space_beats_other_spaces() {
    let n = 20;
    let best = residual_operator_norm(&SplineSpace::periodic(&uniform(n), 3).unwrap(), FunctionClass::APer, 1, 1000).unwrap();
    let d = exact_nwidth(FunctionClass::APer, 1, n, 1.0).unwrap();
    assert!((best.error / d - 1.0).abs() < 5e-3);
    for seed in 0..4 {
        let b = BreakSequence::random_perturbed(n, 0.01, seed, 0.0, 1.0).unwrap();
        let other = residual_operator_norm(&SplineSpace::periodic(&b, 3).unwrap(), FunctionClass::APer, 1, 1000).unwrap();
        assert!(other.error >= best.error * (1.0 - 5e-3));
    }
    let full = SplineSpace::maximal(&uniform(19), 1, ConstraintFamily::Full).unwrap();
    assert_eq!(full.dim(), n);
    let other = residual_operator_norm(&full, FunctionClass::APer, 1, 1000).unwrap();
    assert!(other.error >= best.error * (1.0 - 5e-3));
}

#[test]
fn constants_are_required() {
    let s = optimal_space(0, 5, 3).unwrap();
    assert!(matches!(residual_operator_norm(&s, FunctionClass::APer, 1, 1000), Err(Error::Hypothesis(_))));
    assert!(FineGrid::new(&uniform(2), 100).is_err());
}

#[test]
fn kkstar_spectrum() {
    let rep = kkstar_spectrum_check(&uniform(10), 6, 2000).unwrap();
    let want = [2.0, 2.0, 4.0, 4.0, 6.0, 6.0].map(|k| 1.0 / (k * PI));
    for (v, w) in rep.values.iter().zip(&want) {
        assert!((v / w - 1.0).abs() < 1e-4);
    }
    assert!(rep.max_angle() < 1e-3);
    let g = grid(10, 2000);
    let k1 = KernelOperator::PeriodicGreen.apply(&g, &vec![1.0; g.len()]);
    assert!(inner(&g, &k1, &k1).sqrt() <= 1e-10);
    assert!(kkstar_spectrum_check(&uniform(10), 5, 2000).is_err());
}

#[test]
fn neumann_factorization() {
    assert!(neumann_green_residual(2000).unwrap() < 1e-6);
}

#[test]
fn eigconv_examples() {
    let r = eigconv_report(1, 4, &[1, 2, 3, 4, 5]).unwrap();
    assert!(r.errors[0].iter().all(|&e| e <= 1e-12));
    let degrees: Vec<usize> = (1..=9).collect();
    let r = eigconv_report(0, 4, &degrees).unwrap();
    assert!(r.decreasing_by_parity());
    let r = eigconv_report(2, 3, &[9]).unwrap();
    assert!(r.errors[0][0] < 1e-4, "{}", r.errors[0][0]);
    assert!(r.errors.iter().flatten().all(|&e| e < 1.0));
}

#[test]
fn periodic_eigenfunction_decay() {
    let degrees: Vec<usize> = (2..=9).collect();
    let r = periodic_eigconv(11, 0, 0, &degrees).unwrap();
    assert!(r.within_bounds());
    assert!(r.strictly_decreasing());
    assert!(matches!(periodic_eigconv(11, 1, 2, &degrees), Err(Error::Hypothesis(_))));
}
