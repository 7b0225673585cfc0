//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's evaluation or linear algebra.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Naive Cox–de Boor recursion; the last non-degenerate interval is closed.
pub fn bspline(t: &[f64], i: usize, p: usize, x: f64) -> f64 {
    if p == 0 {
        let b = *t.last().unwrap();
        let last = x == b && t[i + 1] == b && t[i] < b;
        return if (t[i] <= x && x < t[i + 1]) || last { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    if t[i + p] > t[i] {
        v += (x - t[i]) / (t[i + p] - t[i]) * bspline(t, i, p - 1, x);
    }
    if t[i + p + 1] > t[i + 1] {
        v += (t[i + p + 1] - x) / (t[i + p + 1] - t[i + 1]) * bspline(t, i + 1, p - 1, x);
    }
    v
}

/// `d`-th derivative by the textbook recursion on the naive evaluator.
pub fn bspline_deriv(t: &[f64], i: usize, p: usize, d: usize, x: f64) -> f64 {
    if d == 0 {
        return bspline(t, i, p, x);
    }
    if p == 0 {
        return 0.0;
    }
    let mut v = 0.0;
    if t[i + p] > t[i] {
        v += p as f64 / (t[i + p] - t[i]) * bspline_deriv(t, i, p - 1, d - 1, x);
    }
    if t[i + p + 1] > t[i + 1] {
        v -= p as f64 / (t[i + p + 1] - t[i + 1]) * bspline_deriv(t, i + 1, p - 1, d - 1, x);
    }
    v
}

/// Numerical rank by Gaussian elimination with full pivoting.
pub fn rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let scale = a.iter().flatten().fold(0.0_f64, |s, v| s.max(v.abs()));
    let mut r = 0;
    for c in 0..n.min(m) {
        let mut best = (0.0, 0, 0);
        for i in r..m {
            for j in c..n {
                if a[i][j].abs() > best.0 {
                    best = (a[i][j].abs(), i, j);
                }
            }
        }
        if best.0 <= rel_tol * scale {
            break;
        }
        a.swap(r, best.1);
        for row in a.iter_mut() {
            row.swap(c, best.2);
        }
        for i in r + 1..m {
            let f = a[i][c] / a[r][c];
            for j in c..n {
                a[i][j] -= f * a[r][j];
            }
        }
        r += 1;
    }
    r
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

/// Centered cardinal B-spline of degree `d` by the truncated-power formula.
pub fn cardinal(d: usize, x: f64) -> f64 {
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    let shift = (d + 1) as f64 / 2.0;
    (0..=d + 1)
        .map(|k| {
            let y = x + shift - k as f64;
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            if y > 0.0 {
                s * binom(d + 1, k) * y.powi(d as i32)
            } else {
                0.0
            }
        })
        .sum::<f64>()
        / fact
}

/// `Σ_l B_d(l) cos(lθ)`.
pub fn symbol(d: usize, theta: f64) -> f64 {
    let reach = (d + 1) / 2 + 1;
    (-(reach as i64)..=reach as i64).map(|l| cardinal(d, l as f64) * (l as f64 * theta).cos()).sum()
}

/// Discrete periodic Laplace eigenvalues of the maximal-smoothness degree-`p`
/// splines on `n` uniform intervals of (0,1), ascending.
pub fn symbol_spectrum(n: usize, p: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / n as f64;
            if i == 0 {
                0.0
            } else {
                (2.0 - 2.0 * th.cos()) / (h * h) * symbol(2 * p - 1, th) / symbol(2 * p + 1, th)
            }
        })
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Composite Simpson rule with `m` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}
