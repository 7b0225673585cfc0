//! L2 and Ritz projections onto spline spaces, error norms, and the a priori
//! error bounds they satisfy.

pub mod assembly;
pub mod functions;

pub use assembly::{basis_integrals, basis_samples, gram_matrix, load_vector, oversampled_nodes, spline_samples};
pub use functions::{FunctionSpec, SeparableFunction, CATALOG_R_MAX};

use crate::basis::{antidifferentiate, integral};
use crate::error::{Error, Result};
use crate::numerics::{solve_lu, Cholesky, Mat, QuadratureRule};
use crate::space::{ConstraintFamily, SplineSpace};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Slack allowed on `error / bound ≤ 1` for quadrature rounding.
pub const RATIO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectorKind {
    L2,
    RitzRecursive(usize),
    RitzVariational(usize),
}

impl ProjectorKind {
    /// Derivative order `q` of the projector (0 for L2).
    pub fn order(&self) -> usize {
        match *self {
            Self::L2 => 0,
            Self::RitzRecursive(q) | Self::RitzVariational(q) => q,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    /// Coefficients in the space basis.
    pub coeffs: Vec<f64>,
    pub kind: ProjectorKind,
    /// `∫ Qu`.
    pub mean: f64,
}

fn result(space: &SplineSpace, coeffs: Vec<f64>, kind: ProjectorKind) -> ProjectionResult {
    let mean = integral(space.knotvec(), &space.to_raw(&coeffs));
    ProjectionResult { coeffs, kind, mean }
}

fn rule_for(space: &SplineSpace) -> Result<QuadratureRule> {
    QuadratureRule::composite(space.breaks(), oversampled_nodes(space.degree()))
}

/// L2 projection of `∂^order u`.
fn l2_coeffs(space: &SplineSpace, u: &FunctionSpec, order: usize) -> Result<Vec<f64>> {
    let m = gram_matrix(space, 0)?;
    let raw = assembly::raw_load(space.knotvec(), u, order, 0)?;
    let f = assembly::reduce(space, &raw);
    Ok(Cholesky::factor(&m)?.solve(&f))
}

pub fn l2_project(space: &SplineSpace, u: &FunctionSpec) -> Result<ProjectionResult> {
    let c = l2_coeffs(space, u, 0)?;
    Ok(result(space, c, ProjectorKind::L2))
}

pub fn project(space: &SplineSpace, u: &FunctionSpec, kind: ProjectorKind) -> Result<ProjectionResult> {
    match kind {
        ProjectorKind::L2 => l2_project(space, u),
        ProjectorKind::RitzRecursive(q) => ritz_project_recursive(space, u, q),
        ProjectorKind::RitzVariational(q) => ritz_project_variational(space, u, q),
    }
}

fn check_ritz(space: &SplineSpace, u: &FunctionSpec, q: usize) -> Result<bool> {
    let p = space.degree();
    if q > p {
        return Err(Error::DerivativeOrder { order: q, max: p });
    }
    if q > u.r_max() {
        return Err(Error::DerivativeOrder { order: q, max: u.r_max() });
    }
    if space.smoothness() != p as i32 - 1 {
        return Err(Error::Unsupported("Ritz projections need a space of maximal smoothness".into()));
    }
    match space.family() {
        ConstraintFamily::Full => Ok(false),
        ConstraintFamily::Periodic(m) if m == p => Ok(true),
        f => Err(Error::Unsupported(format!(
            "Ritz projections are defined for the full and periodic families, not {}",
            f.name()
        ))),
    }
}

/// `Q_p^q u = c + K Q_{p-1}^{q-1} ∂u`, unrolled: L2-project `∂^q u` onto the
/// degree `p - q` space, then integrate `q` times, fixing each constant by the
/// mean condition. In the periodic case each integrand is made mean-free and
/// the integration constant comes from the periodic kernel.
pub fn ritz_project_recursive(space: &SplineSpace, u: &FunctionSpec, q: usize) -> Result<ProjectionResult> {
    let periodic = check_ritz(space, u, q)?;
    let mut base = space.clone();
    for _ in 0..q {
        base = base.lower()?;
    }
    let g = l2_coeffs(&base, u, q)?;
    let mut kv = base.knotvec().clone();
    let mut raw = base.to_raw(&g);
    let breaks = space.breaks();
    let (a, len) = (breaks.a(), breaks.length());
    let rule = rule_for(space)?;
    for j in 1..=q {
        if periodic {
            let mean = integral(&kv, &raw) / len;
            raw.iter_mut().for_each(|c| *c -= mean);
        }
        let (up, mut d) = antidifferentiate(&kv, &raw)?;
        if periodic {
            // (1/L) ∫ (y - a) g(y) dy makes the antiderivative mean-free.
            let gs = assembly::spline_samples(&kv, &raw, &rule, 0);
            let moment: f64 =
                rule.nodes().iter().zip(rule.weights()).zip(&gs).map(|((x, w), g)| w * (x - a) * g).sum();
            let kappa = moment / len;
            d.iter_mut().for_each(|c| *c += kappa);
        }
        let target = rule.integrate(|x| u.value(x, q - j));
        let shift = (target - integral(&up, &d)) / len;
        d.iter_mut().for_each(|c| *c += shift);
        kv = up;
        raw = d;
    }
    let (coeffs, resid) = space.from_raw(&raw);
    if resid > 1e-8 {
        return Err(Error::Invalid(format!("recursive Ritz result left the space (residual {resid:e})")));
    }
    Ok(result(space, coeffs, ProjectorKind::RitzRecursive(q)))
}

/// Saddle-point form: `(∂^q Qu, ∂^q v) = (∂^q u, ∂^q v)` for all `v` in the
/// space, with `∫ Qu = ∫ u` imposed by one Lagrange multiplier.
pub fn ritz_project_variational(space: &SplineSpace, u: &FunctionSpec, q: usize) -> Result<ProjectionResult> {
    let periodic = check_ritz(space, u, q)?;
    if !periodic && q > 1 {
        return Err(Error::Unsupported(format!(
            "the variational Ritz form on the full space is the q = 1 Neumann problem; got q = {q}"
        )));
    }
    if q == 0 {
        return l2_project(space, u).map(|r| ProjectionResult { kind: ProjectorKind::RitzVariational(0), ..r });
    }
    let n = space.dim();
    let s = gram_matrix(space, q)?;
    let f = load_vector(space, u, q)?;
    let mvec = basis_integrals(space);
    let target = rule_for(space)?.integrate(|x| u.value(x, 0));
    let scale = s.max_abs().max(1.0) / mvec.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut aug = Mat::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = s[(i, j)];
        }
        aug[(i, n)] = scale * mvec[i];
        aug[(n, i)] = scale * mvec[i];
    }
    let mut rhs = f;
    rhs.push(scale * target);
    let mut sol = solve_lu(&aug, &rhs)?;
    sol.truncate(n);
    Ok(result(space, sol, ProjectorKind::RitzVariational(q)))
}

/// `max_i |(u - Pu, b_i)| / (‖u‖ ‖b_i‖)`; zero up to rounding for the L2 projector.
pub fn galerkin_residual(space: &SplineSpace, u: &FunctionSpec, coeffs: &[f64]) -> Result<f64> {
    let m = gram_matrix(space, 0)?;
    let f = load_vector(space, u, 0)?;
    let mc = m.matvec(coeffs);
    let rule = rule_for(space)?;
    let unorm = rule.integrate(|x| u.value(x, 0).powi(2)).sqrt().max(f64::MIN_POSITIVE);
    Ok((0..space.dim())
        .map(|i| (f[i] - mc[i]).abs() / (unorm * m[(i, i)].sqrt()))
        .fold(0.0, f64::max))
}

/// `‖∂^ℓ (u - s)‖` with the oversampled rule (`p + 10` nodes per element).
pub fn error_norm(space: &SplineSpace, u: &FunctionSpec, coeffs: &[f64], l: usize) -> Result<f64> {
    error_norm_with(space, u, coeffs, l, oversampled_nodes(space.degree()))
}

/// As [`error_norm`] with `m` nodes per element.
pub fn error_norm_with(space: &SplineSpace, u: &FunctionSpec, coeffs: &[f64], l: usize, m: usize) -> Result<f64> {
    if l > u.r_max() {
        return Err(Error::DerivativeOrder { order: l, max: u.r_max() });
    }
    if coeffs.len() != space.dim() {
        return Err(Error::Dimension(format!("{} coefficients for a space of dim {}", coeffs.len(), space.dim())));
    }
    let rule = QuadratureRule::composite(space.breaks(), m)?;
    let s = assembly::spline_samples(space.knotvec(), &space.to_raw(coeffs), &rule, l);
    let sq: f64 = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .zip(&s)
        .map(|((&x, &w), &sv)| w * (u.value(x, l) - sv).powi(2))
        .sum();
    Ok(sq.sqrt())
}

/// `‖∂^ℓ u‖` on the space's interval with the oversampled rule.
pub fn derivative_norm(space: &SplineSpace, u: &FunctionSpec, l: usize) -> Result<f64> {
    if l > u.r_max() {
        return Err(Error::DerivativeOrder { order: l, max: u.r_max() });
    }
    Ok(rule_for(space)?.integrate(|x| u.value(x, l).powi(2)).sqrt())
}

/// Mesh width entering a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthKind {
    H,
    HHat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub error: f64,
    pub bound: f64,
    pub ratio: f64,
    pub width: f64,
    pub width_kind: WidthKind,
    /// Which estimate was checked.
    pub theorem: String,
    pub passed: bool,
}

fn hyp(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Hypothesis(msg()))
    }
}

/// Checks the hypotheses of the estimate matching `(space, kind, r, ℓ)` and
/// returns the mesh width and estimate name; the bound is `(w/π)^{r-ℓ} ‖∂^r u‖`.
pub fn bound_hypotheses(
    space: &SplineSpace,
    u: &FunctionSpec,
    kind: ProjectorKind,
    r: usize,
    l: usize,
) -> Result<(f64, WidthKind, &'static str)> {
    let p = space.degree();
    let maximal = space.smoothness() == p as i32 - 1;
    let b = space.breaks();
    hyp(r >= 1, || "r must be at least 1".into())?;
    hyp(r <= u.r_max(), || format!("r = {r} exceeds the derivatives available on {} ({})", u.name(), u.r_max()))?;
    hyp(l < r, || format!("l = {l} must be below r = {r}"))?;
    let periodic_u = || u.periodic_order(b.a(), b.b()) >= r;
    match (kind, space.family()) {
        (ProjectorKind::L2, family) => {
            hyp(l == 0, || "the L2 estimates bound the l = 0 error only".into())?;
            match family {
                ConstraintFamily::Full => {
                    hyp(p + 1 >= r, || format!("p >= r - 1 fails (p = {p}, r = {r})"))?;
                    Ok((b.h(), WidthKind::H, "thm1.1"))
                }
                ConstraintFamily::Periodic(m) => {
                    hyp(maximal && m <= p, || "periodic estimate needs maximal smoothness and order m <= p".into())?;
                    hyp(p + 1 >= r, || format!("p >= r - 1 fails (p = {p}, r = {r})"))?;
                    hyp(periodic_u(), || format!("{} is not in H^{r}_per", u.name()))?;
                    Ok((b.h(), WidthKind::H, "thm4.1"))
                }
                ConstraintFamily::OddZero => {
                    hyp(maximal, || "reduced estimates need maximal smoothness".into())?;
                    hyp(r == 1, || format!("the reduced-space estimate is for r = 1 (got {r})"))?;
                    if p % 2 == 0 {
                        Ok((b.h(), WidthKind::H, "thm8.1"))
                    } else {
                        Ok((b.h_hat(), WidthKind::HHat, "thm8.1"))
                    }
                }
                ConstraintFamily::ReducedOdd => {
                    hyp(maximal, || "reduced estimates need maximal smoothness".into())?;
                    hyp(r == 1, || format!("the reduced-space estimate is for r = 1 (got {r})"))?;
                    Ok((b.h(), WidthKind::H, "thm8.2"))
                }
                f => Err(Error::Hypothesis(format!("no estimate for general u on the {} family", f.name()))),
            }
        }
        (ProjectorKind::RitzRecursive(q) | ProjectorKind::RitzVariational(q), family) => {
            hyp(maximal, || "Ritz estimates need maximal smoothness".into())?;
            hyp(p + 1 >= r, || format!("p >= r - 1 fails (p = {p}, r = {r})"))?;
            match family {
                ConstraintFamily::Full => {
                    hyp(q >= 1 && q < r, || format!("need 1 <= q <= r - 1 (q = {q}, r = {r})"))?;
                    hyp(l + 1 == q || l == q, || format!("need l in {{q - 1, q}} (l = {l}, q = {q})"))?;
                    Ok((b.h(), WidthKind::H, "thm3.2"))
                }
                ConstraintFamily::Periodic(m) if m == p => {
                    hyp(q < r, || format!("need q <= r - 1 (q = {q}, r = {r})"))?;
                    hyp(l <= q, || format!("need l <= q (l = {l}, q = {q})"))?;
                    hyp(p + l + 1 >= 2 * q, || format!("p >= 2q - l - 1 fails (p = {p}, q = {q}, l = {l})"))?;
                    hyp(periodic_u(), || format!("{} is not in H^{r}_per", u.name()))?;
                    Ok((b.h(), WidthKind::H, "thm4.1"))
                }
                f => Err(Error::Hypothesis(format!("no Ritz estimate on the {} family", f.name()))),
            }
        }
    }
}

/// Error of the projection of `u` against the matching a priori bound.
pub fn bound_report(space: &SplineSpace, u: &FunctionSpec, kind: ProjectorKind, r: usize, l: usize) -> Result<BoundReport> {
    let (width, width_kind, theorem) = bound_hypotheses(space, u, kind, r, l)?;
    let res = project(space, u, kind)?;
    let error = error_norm(space, u, &res.coeffs, l)?;
    let bound = (width / PI).powi((r - l) as i32) * derivative_norm(space, u, r)?;
    Ok(make_report(error, bound, width, width_kind, theorem))
}

fn make_report(error: f64, bound: f64, width: f64, width_kind: WidthKind, theorem: &str) -> BoundReport {
    let ratio = if bound > 0.0 {
        error / bound
    } else if error == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    BoundReport { error, bound, ratio, width, width_kind, theorem: theorem.into(), passed: ratio <= 1.0 + RATIO_TOL }
}

/// L2 projection onto `space1 ⊗ space2` by the Kronecker solve
/// `C = M1⁻¹ F M2⁻¹`, compared with `(h/π)^r (‖∂_x^r u‖ + ‖∂_y^r u‖)`.
pub fn tensor_bound_report(
    u: &SeparableFunction,
    space1: &SplineSpace,
    space2: &SplineSpace,
    r: usize,
) -> Result<BoundReport> {
    for s in [space1, space2] {
        hyp(s.is_full() && s.smoothness() == s.degree() as i32 - 1, || {
            "tensor estimate needs full spaces of maximal smoothness".into()
        })?;
        hyp(s.degree() + 1 >= r, || format!("p >= r - 1 fails (p = {}, r = {r})", s.degree()))?;
    }
    hyp(r >= 1 && r <= u.r_max(), || format!("r = {r} out of range"))?;
    let (n1, n2) = (space1.dim(), space2.dim());
    let c1 = Cholesky::factor(&gram_matrix(space1, 0)?)?;
    let c2 = Cholesky::factor(&gram_matrix(space2, 0)?)?;
    let mut c = Mat::zeros(n1, n2);
    for (f, g) in &u.terms {
        let a = c1.solve(&load_vector(space1, f, 0)?);
        let b = c2.solve(&load_vector(space2, g, 0)?);
        for i in 0..n1 {
            for j in 0..n2 {
                c[(i, j)] += a[i] * b[j];
            }
        }
    }
    let q1 = rule_for(space1)?;
    let q2 = rule_for(space2)?;
    let phi1 = basis_samples(space1, &q1, 0);
    let phi2 = basis_samples(space2, &q2, 0);
    // s(x_a, y_b) = Φ1(:,a)ᵀ C Φ2(:,b)
    let s = phi1.transpose().matmul(&c).matmul(&phi2);
    let mut err2 = 0.0;
    let mut dx2 = 0.0;
    let mut dy2 = 0.0;
    for (ia, (&x, &wx)) in q1.nodes().iter().zip(q1.weights()).enumerate() {
        for (ib, (&y, &wy)) in q2.nodes().iter().zip(q2.weights()).enumerate() {
            let w = wx * wy;
            err2 += w * (u.eval(x, y, 0, 0) - s[(ia, ib)]).powi(2);
            dx2 += w * u.eval(x, y, r, 0).powi(2);
            dy2 += w * u.eval(x, y, 0, r).powi(2);
        }
    }
    let h = space1.breaks().h().max(space2.breaks().h());
    let bound = (h / PI).powi(r as i32) * (dx2.sqrt() + dy2.sqrt());
    Ok(make_report(err2.sqrt(), bound, h, WidthKind::H, "cor3.1"))
}
