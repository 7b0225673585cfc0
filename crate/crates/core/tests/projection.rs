mod common;

use common::simpson;
use splinewidth::numerics::sym_eig;
use splinewidth::projection::*;
use splinewidth::{BreakSequence, ConstraintFamily, Error, Mat, SplineSpace};
use std::f64::consts::PI;

fn f(name: &str) -> FunctionSpec {
    FunctionSpec::by_name(name).unwrap()
}

fn full(b: &BreakSequence, p: usize) -> SplineSpace {
    SplineSpace::maximal(b, p, ConstraintFamily::Full).unwrap()
}

fn unit() -> BreakSequence {
    BreakSequence::uniform(1, 0.0, 1.0).unwrap()
}

#[test]
fn gram_examples() {
    let b = BreakSequence::uniform(4, 0.0, 1.0).unwrap();
    let g = gram_matrix(&full(&b, 0), 0).unwrap();
    assert!(g.sub(&Mat::from_diag(&[0.25; 4])).max_abs() < 1e-15);
    let g = gram_matrix(&full(&unit(), 1), 0).unwrap();
    let want = Mat::from_rows(&[[1.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 3.0]]);
    assert!(g.sub(&want).max_abs() < 1e-15);
    let k = gram_matrix(&full(&BreakSequence::uniform(5, 0.0, 1.0).unwrap(), 3), 1).unwrap();
    let e = sym_eig(&k).unwrap();
    let nullity = e.values.iter().filter(|v| v.abs() < 1e-10).count();
    assert_eq!(nullity, 1);
}

#[test]
fn poincare_equality_case() {
    let s = full(&unit(), 0);
    let u = f("cos_1");
    let res = l2_project(&s, &u).unwrap();
    assert!(res.coeffs[0].abs() < 1e-15);
    let e = error_norm(&s, &u, &res.coeffs, 0).unwrap();
    assert!((e - 0.5f64.sqrt()).abs() < 1e-14);
    let rep = bound_report(&s, &u, ProjectorKind::L2, 1, 0).unwrap();
    assert!((rep.ratio - 1.0).abs() < 1e-9, "{}", rep.ratio);
    assert!(rep.passed);
}

#[test]
fn l2_of_x_squared_on_hats() {
    // normal equations assembled by hand: hats on {0, 1/2, 1}
    let h = 0.5;
    let hat = |i: usize, x: f64| (1.0 - ((x - i as f64 * h) / h).abs()).max(0.0);
    let mass = [[h / 3.0, h / 6.0, 0.0], [h / 6.0, 2.0 * h / 3.0, h / 6.0], [0.0, h / 6.0, h / 3.0]];
    let load: Vec<f64> = (0..3)
        .map(|i| simpson(|x| x * x * hat(i, x), 0.0, 0.5, 2) + simpson(|x| x * x * hat(i, x), 0.5, 1.0, 2))
        .collect();
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(mass);
    let want: Vec<f64> = (0..3)
        .map(|c| {
            let mut m = mass;
            for r in 0..3 {
                m[r][c] = load[r];
            }
            det3(m) / d
        })
        .collect();
    let s = full(&BreakSequence::uniform(2, 0.0, 1.0).unwrap(), 1);
    let got = l2_project(&s, &f("poly_2")).unwrap().coeffs;
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-13, "{got:?} vs {want:?}");
    }
}

#[test]
fn projectors_reproduce_the_space() {
    let b = BreakSequence::random_perturbed(6, 0.03, 4, 0.0, 1.0).unwrap();
    let u = f("poly_3");
    for p in 3..=6 {
        let s = full(&b, p);
        for kind in [ProjectorKind::L2, ProjectorKind::RitzRecursive(1), ProjectorKind::RitzRecursive(2), ProjectorKind::RitzVariational(1)] {
            let r = project(&s, &u, kind).unwrap();
            let e = error_norm(&s, &u, &r.coeffs, 0).unwrap();
            assert!(e <= 1e-10, "p={p} {kind:?}: {e}");
        }
    }
    let s = full(&unit(), 2);
    let r = ritz_project_variational(&s, &FunctionSpec::custom("half_x2", 6, |x, l| match l {
        0 => x * x / 2.0,
        1 => x,
        2 => 1.0,
        _ => 0.0,
    }), 1)
    .unwrap();
    assert!(error_norm(&s, &f("poly_2").scaled("h", 0.5), &r.coeffs, 0).unwrap() < 1e-12);
    let c = ritz_project_variational(&s, &f("poly_0").scaled("three", 3.0), 1).unwrap();
    assert!(error_norm(&s, &f("poly_0").scaled("three", 3.0), &c.coeffs, 0).unwrap() < 1e-13);
}

#[test]
fn ritz_of_order_zero_is_l2() {
    let s = SplineSpace::periodic(&BreakSequence::uniform(7, 0.0, 1.0).unwrap(), 3).unwrap();
    let u = f("sin_4");
    let a = l2_project(&s, &u).unwrap().coeffs;
    let b = ritz_project_recursive(&s, &u, 0).unwrap().coeffs;
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-14));
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    num / b.iter().map(|y| y * y).sum::<f64>().sqrt()
}

#[test]
fn recursive_and_variational_ritz_agree() {
    let s = SplineSpace::periodic(&BreakSequence::uniform(8, 0.0, 1.0).unwrap(), 3).unwrap();
    let u = f("sin_2");
    let a = ritz_project_recursive(&s, &u, 1).unwrap();
    let b = ritz_project_variational(&s, &u, 1).unwrap();
    assert!(rel_diff(&a.coeffs, &b.coeffs) < 1e-8);
    let s = SplineSpace::periodic(&BreakSequence::uniform(6, 0.0, 1.0).unwrap(), 2).unwrap();
    let u = f("cos_2");
    let a = ritz_project_recursive(&s, &u, 1).unwrap();
    let b = ritz_project_variational(&s, &u, 1).unwrap();
    assert!(rel_diff(&a.coeffs, &b.coeffs) < 1e-8);
    // higher q on periodic spaces, q = 1 on the full space
    let s = SplineSpace::periodic(&BreakSequence::random_perturbed(9, 0.02, 6, 0.0, 1.0).unwrap(), 5).unwrap();
    for q in 1..=4 {
        let a = ritz_project_recursive(&s, &u, q).unwrap();
        let b = ritz_project_variational(&s, &u, q).unwrap();
        assert!(rel_diff(&a.coeffs, &b.coeffs) < 1e-8, "q={q}");
    }
    let s = full(&BreakSequence::random_perturbed(9, 0.02, 6, 0.0, 1.0).unwrap(), 4);
    let u = f("exp");
    let a = ritz_project_recursive(&s, &u, 1).unwrap();
    let b = ritz_project_variational(&s, &u, 1).unwrap();
    assert!(rel_diff(&a.coeffs, &b.coeffs) < 1e-8);
    assert!(matches!(ritz_project_variational(&s, &u, 2), Err(Error::Unsupported(_))));
}

#[test]
fn ritz_matches_the_mean() {
    let b = BreakSequence::random_perturbed(7, 0.03, 9, 0.0, 1.0).unwrap();
    let u = f("exp");
    let exact = std::f64::consts::E - 1.0;
    for q in 1..=3 {
        let r = ritz_project_recursive(&full(&b, 4), &u, q).unwrap();
        assert!((r.mean - exact).abs() < 1e-10, "q={q}");
    }
}

#[test]
fn galerkin_orthogonality() {
    let b = BreakSequence::random_perturbed(10, 0.03, 1, 0.0, 1.0).unwrap();
    for p in 0..=6 {
        let s = full(&b, p);
        for name in ["exp", "sin_3", "runge"] {
            let r = l2_project(&s, &f(name)).unwrap();
            assert!(galerkin_residual(&s, &f(name), &r.coeffs).unwrap() <= 1e-9, "p={p} {name}");
        }
    }
}

#[test]
fn error_norm_examples() {
    let s = full(&unit(), 1);
    let e = error_norm(&s, &f("cos_1"), &[0.0, 0.0], 1).unwrap();
    assert!((e - PI / 2f64.sqrt()).abs() < 1e-10);
    let s = full(&BreakSequence::uniform(16, 0.0, 1.0).unwrap(), 3);
    let u = f("sin_2");
    let c = l2_project(&s, &u).unwrap().coeffs;
    let coarse = error_norm(&s, &u, &c, 0).unwrap();
    let fine = error_norm_with(&s, &u, &c, 0, 60).unwrap();
    assert!((coarse - fine).abs() <= 1e-10 * fine);
    assert!(matches!(error_norm(&s, &f("poly_2"), &c[1..], 0), Err(Error::Dimension(_))));
}

#[test]
fn bound_examples() {
    let b = BreakSequence::uniform(10, 0.0, 1.0).unwrap();
    let s = SplineSpace::periodic(&b, 3).unwrap();
    let u = f("sin_2");
    for r in 1..=4 {
        let rep = bound_report(&s, &u, ProjectorKind::L2, r, 0).unwrap();
        let want = (b.h() / PI).powi(r as i32) * (2.0 * PI).powi(r as i32) / 2f64.sqrt();
        assert!((rep.bound - want).abs() <= 1e-10 * want);
        assert!(rep.passed, "r={r} {}", rep.ratio);
    }
    let rb = BreakSequence::random_perturbed(12, 0.03, 5, 0.0, 1.0).unwrap();
    let rep = bound_report(&full(&rb, 4), &f("exp"), ProjectorKind::L2, 5, 0).unwrap();
    assert!(rep.ratio < 1.0, "{}", rep.ratio);
}

#[test]
fn hypotheses_are_enforced() {
    let b = BreakSequence::uniform(6, 0.0, 1.0).unwrap();
    let hyp = |r: splinewidth::Result<BoundReport>| matches!(r, Err(Error::Hypothesis(_)));
    assert!(hyp(bound_report(&full(&b, 1), &f("exp"), ProjectorKind::L2, 3, 0)));
    assert!(hyp(bound_report(&full(&b, 3), &f("exp"), ProjectorKind::L2, 2, 1)));
    let per = SplineSpace::periodic(&b, 3).unwrap();
    assert!(hyp(bound_report(&per, &f("exp"), ProjectorKind::L2, 1, 0)));
    // p >= 2q - l - 1 fails for p = 2, q = 2, l = 0
    let per2 = SplineSpace::periodic(&b, 2).unwrap();
    assert!(hyp(bound_report(&per2, &f("sin_2"), ProjectorKind::RitzRecursive(2), 3, 0)));
    assert!(bound_report(&per2, &f("sin_2"), ProjectorKind::RitzRecursive(2), 3, 1).is_ok());
    let even = SplineSpace::maximal(&b, 3, ConstraintFamily::EvenZero).unwrap();
    assert!(hyp(bound_report(&even, &f("sin_1"), ProjectorKind::L2, 1, 0)));
}

#[test]
fn reduced_space_width_selection() {
    let b = BreakSequence::random_perturbed(8, 0.03, 2, 0.0, 1.0).unwrap();
    for p in 1..=6 {
        let s = SplineSpace::maximal(&b, p, ConstraintFamily::OddZero).unwrap();
        let rep = bound_report(&s, &f("sin_2"), ProjectorKind::L2, 1, 0).unwrap();
        let want = if p % 2 == 0 { WidthKind::H } else { WidthKind::HHat };
        assert_eq!(rep.width_kind, want);
        assert!(rep.passed);
        if p % 2 == 1 {
            let t = SplineSpace::maximal(&b, p, ConstraintFamily::ReducedOdd).unwrap();
            let rep = bound_report(&t, &f("exp"), ProjectorKind::L2, 1, 0).unwrap();
            assert_eq!(rep.width_kind, WidthKind::H);
            assert!(rep.passed);
        }
    }
}

#[test]
fn tensor_examples() {
    let b = BreakSequence::uniform(8, 0.0, 1.0).unwrap();
    let s = full(&b, 3);
    let one = f("poly_0");
    let rep = tensor_bound_report(&SeparableFunction::product(one.clone(), one.clone()), &s, &s, 1).unwrap();
    assert!(rep.error < 1e-13);
    let rep = tensor_bound_report(&SeparableFunction::product(f("poly_3"), one), &s, &s, 1).unwrap();
    assert!(rep.error < 1e-9);
    let rep = tensor_bound_report(&SeparableFunction::product(f("sin_1"), f("sin_1")), &s, &s, 2).unwrap();
    assert!(rep.ratio < 1.0, "{}", rep.ratio);
}

#[test]
fn convergence_order() {
    let u = f("sin_2");
    for p in 1..=6 {
        let errs: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&n| {
                let s = full(&BreakSequence::uniform(n, 0.0, 1.0).unwrap(), p);
                let c = l2_project(&s, &u).unwrap().coeffs;
                error_norm(&s, &u, &c, 0).unwrap()
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= p as f64 + 0.9, "p={p} errs={errs:?}");
        }
    }
}
