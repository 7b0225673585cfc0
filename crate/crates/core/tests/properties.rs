mod common;

use proptest::prelude::*;
use splinewidth::projection::*;
use splinewidth::spectral::outlier_space;
use splinewidth::{differentiate, BreakSequence, ConstraintFamily, ExtendedKnotVector, SplineSpace};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

fn breaks(n: usize, seed: u64) -> BreakSequence {
    BreakSequence::random_perturbed(n, 0.3 / n as f64, seed, 0.0, 1.0).unwrap()
}

fn family(tag: usize, p: usize) -> ConstraintFamily {
    match tag {
        0 => ConstraintFamily::Full,
        1 => ConstraintFamily::Periodic(p),
        2 => ConstraintFamily::EvenZero,
        3 => ConstraintFamily::OddZero,
        4 => ConstraintFamily::Mixed,
        _ => ConstraintFamily::ReducedOdd,
    }
}

/// The spline `coeffs` of `space` as a function with `p` derivatives.
fn as_function(space: &SplineSpace, coeffs: &[f64]) -> FunctionSpec {
    let s = space.clone();
    let c = coeffs.to_vec();
    FunctionSpec::custom("spline", space.degree(), move |x, l| s.eval(&c, x, l).unwrap())
}

fn combo(u: &FunctionSpec, a: f64, v: &FunctionSpec, b: f64) -> FunctionSpec {
    let (u, v) = (u.clone(), v.clone());
    let r = u.r_max().min(v.r_max());
    FunctionSpec::custom("combo", r, move |x, l| a * u.eval(x, l).unwrap() + b * v.eval(x, l).unwrap())
}

fn derivative(u: &FunctionSpec) -> FunctionSpec {
    let u = u.clone();
    FunctionSpec::custom("du", u.r_max() - 1, move |x, l| u.eval(x, l + 1).unwrap())
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

const FUNCS: [&str; 5] = ["exp", "sin_1", "sin_3", "cos_2", "runge"];
/// Periodic on (0, 1) with all derivatives.
const PERIODIC_FUNCS: [&str; 4] = ["sin_2", "cos_2", "sin_4", "cos_6"];

proptest! {
    #![proptest_config(config())]

    #[test]
    fn partition_of_unity(n in 1usize..12, seed in 0u64..500, p in 0usize..8, dk in 0usize..8, x in 0.0f64..=1.0) {
        let k = p as i32 - 1 - (dk % (p + 1)) as i32;
        let kv = ExtendedKnotVector::new(&breaks(n, seed), p, k).unwrap();
        let s: f64 = kv.eval_raw(x, 0).unwrap().iter().sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn dimension_law(n in 1usize..7, seed in 0u64..500, p in 1usize..6, dk in 0usize..6) {
        let k = (p - 1 - dk % p) as i32;
        let b = breaks(n, seed);
        let kv = ExtendedKnotVector::new(&b, p, k).unwrap();
        let dim = n * (p - k as usize) + k as usize + 1;
        prop_assert_eq!(kv.dim(), dim);
        let rows: Vec<Vec<f64>> = (0..3 * dim)
            .map(|i| {
                let x = (i as f64 + 0.5) / (3 * dim) as f64;
                (0..dim).map(|j| common::bspline(kv.knots(), j, p, x)).collect()
            })
            .collect();
        prop_assert_eq!(common::rank(&rows, 1e-10), dim);
    }

    #[test]
    fn constraints_hold(n in 3usize..10, seed in 0u64..500, p in 1usize..8, tag in 0usize..6) {
        let b = breaks(n, seed);
        if let Ok(s) = SplineSpace::maximal(&b, p, family(tag, p)) {
            prop_assert!(s.constraint_residual().unwrap() <= 1e-10);
            // the basis is orthonormal, hence of full rank
            let g = s.basis_map().matmul(&s.basis_map().transpose());
            if !s.is_full() {
                prop_assert!(g.sub(&splinewidth::Mat::identity(s.dim())).max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn derivative_closure(n in 2usize..10, seed in 0u64..500, p in 1usize..8, per in any::<bool>()) {
        let b = breaks(n, seed);
        let s = if per { SplineSpace::periodic(&b, p).unwrap() } else { SplineSpace::maximal(&b, p, ConstraintFamily::Full).unwrap() };
        let c: Vec<f64> = (0..s.dim()).map(|i| ((i as u64 * 7 + seed) as f64).sin()).collect();
        let (kv, d) = differentiate(s.knotvec(), &s.to_raw(&c)).unwrap();
        let low = s.lower().unwrap();
        prop_assert_eq!(kv.knots(), low.knotvec().knots());
        let (_, resid) = low.from_raw(&d);
        prop_assert!(resid < 1e-12, "{}", resid);
    }

    #[test]
    fn periodic_nests_in_larger_spaces(n in 2usize..12, p in 1usize..8, dk in 0usize..8) {
        let k = dk % p;
        let per = SplineSpace::periodic(&BreakSequence::uniform(n, 0.0, 1.0).unwrap(), p).unwrap();
        let big = outlier_space(n, p, k).unwrap();
        for i in 0..per.dim() {
            let mut e = vec![0.0; per.dim()];
            e[i] = 1.0;
            let (_, resid) = big.from_raw(&per.to_raw(&e));
            prop_assert!(resid < 1e-12);
        }
    }

    #[test]
    fn projectors_are_idempotent(n in 3usize..9, seed in 0u64..500, p in 2usize..6, per in any::<bool>(), f in 0usize..5, q in 0usize..3) {
        let b = breaks(n, seed);
        let s = if per { SplineSpace::periodic(&b, p).unwrap() } else { SplineSpace::maximal(&b, p, ConstraintFamily::Full).unwrap() };
        let kind = match q {
            0 => ProjectorKind::L2,
            q => ProjectorKind::RitzRecursive(q),
        };
        let u = FunctionSpec::by_name(FUNCS[f]).unwrap();
        let pu = project(&s, &u, kind).unwrap().coeffs;
        let ppu = project(&s, &as_function(&s, &pu), kind).unwrap().coeffs;
        let scale = pu.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        prop_assert!(max_diff(&pu, &ppu) <= 1e-9 * scale, "{}", max_diff(&pu, &ppu));
    }

    #[test]
    fn projectors_are_linear(seed in 0u64..500, p in 2usize..6, a in -3.0f64..3.0, bb in -3.0f64..3.0, q in 0usize..3) {
        let s = SplineSpace::maximal(&breaks(7, seed), p, ConstraintFamily::Full).unwrap();
        let kind = match q {
            0 => ProjectorKind::L2,
            1 => ProjectorKind::RitzVariational(1),
            q => ProjectorKind::RitzRecursive(q),
        };
        let u = FunctionSpec::by_name("exp").unwrap();
        let v = FunctionSpec::by_name("sin_3").unwrap();
        let pu = project(&s, &u, kind).unwrap().coeffs;
        let pv = project(&s, &v, kind).unwrap().coeffs;
        let pw = project(&s, &combo(&u, a, &v, bb), kind).unwrap().coeffs;
        let want: Vec<f64> = pu.iter().zip(&pv).map(|(x, y)| a * x + bb * y).collect();
        prop_assert!(max_diff(&pw, &want) <= 1e-9 * (1.0 + a.abs() + bb.abs()) * 10.0);
    }

    #[test]
    fn l2_projection_is_best(n in 2usize..9, seed in 0u64..500, p in 0usize..6, tag in 0usize..6, f in 0usize..5) {
        let b = breaks(n, seed);
        if let Ok(s) = SplineSpace::maximal(&b, p, family(tag, p)) {
            let u = FunctionSpec::by_name(FUNCS[f]).unwrap();
            let c = l2_project(&s, &u).unwrap().coeffs;
            let best = error_norm(&s, &u, &c, 0).unwrap();
            for t in 0..20u64 {
                let d: Vec<f64> = c.iter().enumerate().map(|(i, v)| v + 1e-3 * ((seed + 31 * t + i as u64) as f64).sin()).collect();
                prop_assert!(error_norm(&s, &u, &d, 0).unwrap() >= best - 1e-12);
            }
        }
    }

    #[test]
    fn ritz_commutes_with_derivative(n in 3usize..9, seed in 0u64..500, p in 2usize..7, q in 1usize..3, per in any::<bool>(), f in 0usize..4) {
        let b = breaks(n, seed);
        let s = if per { SplineSpace::periodic(&b, p).unwrap() } else { SplineSpace::maximal(&b, p, ConstraintFamily::Full).unwrap() };
        let u = FunctionSpec::by_name(if per { PERIODIC_FUNCS[f] } else { FUNCS[f] }).unwrap();
        let qu = ritz_project_recursive(&s, &u, q).unwrap().coeffs;
        let (_, dq) = differentiate(s.knotvec(), &s.to_raw(&qu)).unwrap();
        let low = s.lower().unwrap();
        let qdu = project(&low, &derivative(&u), if q == 1 { ProjectorKind::L2 } else { ProjectorKind::RitzRecursive(q - 1) }).unwrap().coeffs;
        let want = low.to_raw(&qdu);
        let scale = want.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        prop_assert!(max_diff(&dq, &want) <= 1e-9 * scale, "{}", max_diff(&dq, &want));
    }
}
