//! One runner per subcommand. Each expands its config into independent
//! cells, evaluates them in parallel and gathers rows in config order.

use crate::config::*;
use crate::output::{Outcome, PlotSpec, Status, Table, Value};
use rayon::prelude::*;
use serde_json::json;
use splinewidth::nwidth::{
    eigconv_report, optimal_space, periodic_eigconv, residual_operator_norm, FunctionClass,
};
use splinewidth::projection::{
    bound_report, ritz_project_recursive, ritz_project_variational, BoundReport, FunctionSpec, ProjectorKind,
    WidthKind,
};
use splinewidth::spectral::{branch_profile, conjecture_explorer, inverse_report, outlier_report};
use splinewidth::{BreakSequence, ConstraintFamily, Error, SplineSpace};

/// Agreement required between the recursive and variational Ritz forms.
pub const CROSS_CHECK_TOL: f64 = 1e-8;
/// Largest `q` at which the cross-check is asserted. The variational system
/// has condition number growing like `h^{-2q}`, so beyond this the two forms
/// differ by more than the tolerance through rounding alone.
pub const CROSS_CHECK_MAX_Q: usize = 3;
/// Relative slack allowed on an optimality ratio.
pub const OPTIMALITY_TOL: f64 = 5e-3;

type Row = Vec<Value>;

struct CellOut {
    label: String,
    rows: Vec<(Row, Status)>,
    status: Option<Status>,
}

impl CellOut {
    fn new(label: String) -> Self {
        Self { label, rows: Vec::new(), status: None }
    }
}

/// Evaluates cells on the current rayon pool, keeping their order.
fn run<C: Sync>(cells: &[C], f: impl Fn(&C) -> CellOut + Sync + Send) -> Vec<CellOut> {
    cells.par_iter().map(f).collect()
}

fn gather(outcome: &mut Outcome, table: &mut Table, cells: Vec<CellOut>) {
    for c in cells {
        let status = c.status.unwrap_or_else(|| Status::combine(c.rows.iter().map(|(_, s)| s)));
        for (row, _) in c.rows {
            table.push(row);
        }
        outcome.cells.push((c.label, status));
    }
}

fn width_name(w: WidthKind) -> &'static str {
    match w {
        WidthKind::H => "h",
        WidthKind::HHat => "h_hat",
    }
}

fn family_name(f: ConstraintFamily) -> String {
    f.name()
}

fn function(name: &str) -> FunctionSpec {
    // names were checked while validating the config
    FunctionSpec::by_name(name).expect("validated function name")
}

fn knot_cells(spec: &KnotSpec) -> Vec<(String, BreakSequence)> {
    spec.expand()
}

fn bound_cols(rep: &Result<BoundReport, Error>) -> (Vec<Value>, Status, String) {
    match rep {
        Ok(b) => (
            vec![
                b.theorem.as_str().into(),
                width_name(b.width_kind).into(),
                b.width.into(),
                b.error.into(),
                b.bound.into(),
                b.ratio.into(),
            ],
            Status::from_check(b.passed),
            String::new(),
        ),
        Err(e) => (vec![Value::Empty; 6], Status::from_error(e), e.to_string()),
    }
}

fn count_statuses(outcome: &Outcome) -> serde_json::Value {
    let mut counts = std::collections::BTreeMap::new();
    for (_, s) in &outcome.cells {
        *counts.entry(s.label()).or_insert(0usize) += 1;
    }
    json!(counts)
}

fn max_of(table: &Table, col: &str, asserted_only: bool) -> Option<f64> {
    let c = table.header.iter().position(|h| *h == col)?;
    let s = table.header.iter().position(|h| *h == "status");
    table
        .rows
        .iter()
        .filter(|r| {
            !asserted_only
                || s.is_some_and(|s| matches!(&r[s], Value::Text(t) if t == "pass" || t == "fail"))
        })
        .filter_map(|r| match r[c] {
            Value::Float(x) if x.is_finite() => Some(x),
            _ => None,
        })
        .reduce(f64::max)
}

pub fn project(cfg: &ProjectConfig) -> Outcome {
    let mut cells = Vec::new();
    for (label, b) in knot_cells(&cfg.knots) {
        for &p in &cfg.degrees {
            for &fam in &cfg.families {
                for f in &cfg.functions {
                    cells.push((label.clone(), b.clone(), p, fam.family(p), f.clone()));
                }
            }
        }
    }
    let out = run(&cells, |(label, b, p, fam, fname)| {
        let mut cell = CellOut::new(format!("{label} p={p} {} {fname}", family_name(*fam)));
        let head = |dim: Value| -> Row {
            vec![label.as_str().into(), b.num_intervals().into(), b.h().into(), (*p).into(), family_name(*fam).into(), dim, fname.as_str().into()]
        };
        let space = match SplineSpace::maximal(b, *p, *fam) {
            Ok(s) => s,
            Err(e) => {
                let mut row = head(Value::Empty);
                row.extend(vec![Value::Empty; 7]);
                let st = Status::from_error(&e);
                row.extend([(&st).into(), e.to_string().into()]);
                cell.rows.push((row, st));
                return cell;
            }
        };
        let u = function(fname);
        let rs: Vec<usize> = cfg.r.clone().unwrap_or_else(|| (1..=p + 1).collect());
        for r in rs {
            let rep = bound_report(&space, &u, ProjectorKind::L2, r, 0);
            let (cols, st, note) = bound_cols(&rep);
            let mut row = head(space.dim().into());
            row.push(r.into());
            row.extend(cols);
            row.extend([(&st).into(), note.into()]);
            cell.rows.push((row, st));
        }
        cell
    });
    let mut table = Table::new(
        "project",
        &["knots", "intervals", "h", "p", "family", "dim", "function", "r", "theorem", "width_kind", "width", "error", "bound", "ratio", "status", "note"],
    );
    let mut outcome = Outcome::default();
    gather(&mut outcome, &mut table, out);
    outcome.summary = json!({
        "rows": table.rows.len(),
        "cells": count_statuses(&outcome),
        "max_ratio": max_of(&table, "ratio", true),
    });
    outcome.tables.push(table);
    outcome
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

pub fn ritz(cfg: &RitzConfig) -> Outcome {
    let mut cells = Vec::new();
    for (label, b) in knot_cells(&cfg.knots) {
        for &p in &cfg.degrees {
            for &fam in &cfg.families {
                for f in &cfg.functions {
                    for &q in &cfg.q {
                        cells.push((label.clone(), b.clone(), p, fam, f.clone(), q));
                    }
                }
            }
        }
    }
    let out = run(&cells, |(label, b, p, fam, fname, q)| {
        let (p, q) = (*p, *q);
        let family = match fam {
            RitzFamily::Full => ConstraintFamily::Full,
            RitzFamily::Periodic => ConstraintFamily::Periodic(p),
        };
        let mut cell = CellOut::new(format!("{label} p={p} {} {fname} q={q}", family_name(family)));
        let head = |dim: Value| -> Row {
            vec![label.as_str().into(), b.num_intervals().into(), p.into(), family_name(family).into(), dim, fname.as_str().into(), q.into()]
        };
        let space = match SplineSpace::maximal(b, p, family) {
            Ok(s) => s,
            Err(e) => {
                let st = Status::from_error(&e);
                let mut row = head(Value::Empty);
                row.extend(vec![Value::Empty; 9]);
                row.extend([(&st).into(), e.to_string().into()]);
                cell.rows.push((row, st));
                return cell;
            }
        };
        if q > p {
            let st = Status::Skipped("hypothesis");
            let mut row = head(space.dim().into());
            row.extend(vec![Value::Empty; 7]);
            row.extend([(&st).into(), format!("q = {q} exceeds p = {p}").into()]);
            cell.rows.push((row, st));
            return cell;
        }
        let u = function(fname);
        let cross = if cfg.cross_check {
            match (ritz_project_recursive(&space, &u, q), ritz_project_variational(&space, &u, q)) {
                (Ok(a), Ok(v)) => Some(rel_diff(&a.coeffs, &v.coeffs)),
                _ => None,
            }
        } else {
            None
        };
        let ls: Vec<usize> = cfg.l.clone().unwrap_or_else(|| (0..=q).collect());
        let rs: Vec<usize> = cfg.r.clone().unwrap_or_else(|| (q + 1..=p + 1).collect());
        for &l in &ls {
            for &r in &rs {
                let rep = bound_report(&space, &u, ProjectorKind::RitzRecursive(q), r, l);
                let (cols, mut st, mut note) = bound_cols(&rep);
                if st == Status::Pass && q <= CROSS_CHECK_MAX_Q && cross.is_some_and(|d| !(d <= CROSS_CHECK_TOL)) {
                    st = Status::Fail;
                    note = "recursive and variational forms disagree".into();
                }
                let mut row = head(space.dim().into());
                row.extend([l.into(), r.into()]);
                // theorem, error, bound, ratio
                row.extend([cols[0].clone(), cols[3].clone(), cols[4].clone(), cols[5].clone()]);
                row.extend([cross.into(), (&st).into(), note.into()]);
                cell.rows.push((row, st));
            }
        }
        cell
    });
    let mut table = Table::new(
        "ritz",
        &["knots", "intervals", "p", "family", "dim", "function", "q", "l", "r", "theorem", "error", "bound", "ratio", "cross_check", "status", "note"],
    );
    let mut outcome = Outcome::default();
    gather(&mut outcome, &mut table, out);
    outcome.summary = json!({
        "rows": table.rows.len(),
        "cells": count_statuses(&outcome),
        "max_ratio": max_of(&table, "ratio", true),
        "max_cross_check": max_of(&table, "cross_check", false),
    });
    outcome.tables.push(table);
    outcome
}

pub fn reduced(cfg: &ReducedConfig) -> Outcome {
    let mut cells = Vec::new();
    for (label, b) in knot_cells(&cfg.knots) {
        for &p in &cfg.degrees {
            for f in &cfg.functions {
                cells.push((label.clone(), b.clone(), p, f.clone()));
            }
        }
    }
    let out = run(&cells, |(label, b, p, fname)| {
        let mut cell = CellOut::new(format!("{label} p={p} {fname}"));
        let u = function(fname);
        let mut families = vec![ConstraintFamily::OddZero];
        if p % 2 == 1 {
            families.push(ConstraintFamily::ReducedOdd);
        }
        for fam in families {
            let rep = SplineSpace::maximal(b, *p, fam).and_then(|s| Ok((s.dim(), bound_report(&s, &u, ProjectorKind::L2, 1, 0)?)));
            let (dim, rep) = match rep {
                Ok((d, r)) => (Value::from(d), Ok(r)),
                Err(e) => (Value::Empty, Err(e)),
            };
            let (cols, st, note) = bound_cols(&rep);
            let mut row: Row = vec![label.as_str().into(), b.num_intervals().into(), (*p).into(), family_name(fam).into(), dim, fname.as_str().into()];
            row.extend([b.h().into(), b.h_hat().into()]);
            row.extend(cols);
            row.extend([(&st).into(), note.into()]);
            cell.rows.push((row, st));
        }
        cell
    });
    let mut table = Table::new(
        "reduced",
        &["knots", "intervals", "p", "family", "dim", "function", "h", "h_hat", "theorem", "width_kind", "width", "error", "bound", "ratio", "status", "note"],
    );
    let mut outcome = Outcome::default();
    gather(&mut outcome, &mut table, out);
    outcome.summary = json!({
        "rows": table.rows.len(),
        "cells": count_statuses(&outcome),
        "max_ratio": max_of(&table, "ratio", true),
    });
    outcome.tables.push(table);
    outcome
}

/// Adds the per-cell list to `summary` and, for a single cell, its fields at
/// the top level as well.
fn cell_summary(mut top: serde_json::Value, cells: Vec<serde_json::Value>) -> serde_json::Value {
    if let [only] = cells.as_slice() {
        if let (Some(t), Some(o)) = (top.as_object_mut(), only.as_object()) {
            for (k, v) in o {
                t.insert(k.clone(), v.clone());
            }
        }
    }
    top["cells"] = json!(cells);
    top
}

fn spectral_cells(n: &[usize], spaces: &[[usize; 2]]) -> Vec<(usize, usize, usize)> {
    spaces.iter().flat_map(|&[p, k]| n.iter().map(move |&n| (n, p, k))).collect()
}

pub fn outliers(cfg: &OutliersConfig, threshold: Option<f64>) -> Outcome {
    let threshold = threshold.unwrap_or(cfg.threshold);
    let cells = spectral_cells(&cfg.n, &cfg.spaces);
    let reports: Vec<_> = cells.par_iter().map(|&(n, p, k)| outlier_report(n, p, k, threshold)).collect();
    let mut table = Table::new("outliers", &["n", "p", "k", "j", "j_over_dim", "nu_exact", "nu_h", "rel_err", "outlier"]);
    let mut outcome = Outcome::default();
    let mut summaries = Vec::new();
    for (&(n, p, k), rep) in cells.iter().zip(reports) {
        let label = format!("n={n} p={p} k={k}");
        match rep {
            Ok(rep) => {
                let s = &rep.spectrum;
                for j in 0..s.dim() {
                    let err = s.rel_err[j];
                    let flag = err.is_some_and(|e| e.abs() > threshold) as usize;
                    table.push(vec![
                        n.into(), p.into(), k.into(), j.into(), (j as f64 / rep.dim as f64).into(),
                        s.exact[j].into(), s.values[j].into(), err.into(), flag.into(),
                    ]);
                }
                let max_err = s.rel_err.iter().flatten().fold(0.0_f64, |m, e| m.max(e.abs()));
                summaries.push(json!({
                    "n": n, "p": p, "k": k, "dim": rep.dim, "outliers": rep.outliers,
                    "expected": rep.expected, "max_rel_err": max_err,
                }));
                outcome.cells.push((label, Status::from_check(rep.outliers == rep.expected)));
            }
            Err(e) => {
                summaries.push(json!({"n": n, "p": p, "k": k, "error": e.to_string()}));
                outcome.cells.push((label, Status::from_error(&e)));
            }
        }
    }
    outcome.summary = cell_summary(json!({"threshold": threshold}), summaries);
    outcome.plots.push(PlotSpec {
        name: "outliers".into(),
        table: "outliers".into(),
        x: "j_over_dim".into(),
        y: "rel_err".into(),
        series: ["n", "p", "k"].map(String::from).to_vec(),
        log_y: true,
        title: "Relative eigenvalue error, periodic Laplacian".into(),
    });
    outcome.tables.push(table);
    outcome
}

pub fn branches(cfg: &BranchesConfig) -> Outcome {
    let cells = spectral_cells(&cfg.n, &cfg.spaces);
    let reports: Vec<_> = cells.par_iter().map(|&(n, p, k)| branch_profile(n, p, k)).collect();
    let mut table = Table::new("branches", &["n", "p", "k", "j", "j_over_dim", "nu_exact", "nu_h", "rel_err", "wavenumber"]);
    let mut outcome = Outcome::default();
    let mut summaries = Vec::new();
    for (&(n, p, k), rep) in cells.iter().zip(reports) {
        let label = format!("n={n} p={p} k={k}");
        match rep {
            Ok(b) => {
                let s = &b.spectrum;
                for j in 0..b.dim {
                    table.push(vec![
                        n.into(), p.into(), k.into(), j.into(), (j as f64 / b.dim as f64).into(),
                        s.exact[j].into(), s.values[j].into(), s.rel_err[j].into(), b.wavenumbers[j].into(),
                    ]);
                }
                let first_end = b.boundaries.first().copied().unwrap_or(b.dim);
                let acoustic = s.rel_err[..first_end].iter().flatten().fold(0.0_f64, |m, e| m.max(e.abs()));
                summaries.push(json!({
                    "n": n, "p": p, "k": k, "dim": b.dim, "branches": b.branches, "expected": b.expected,
                    "boundaries": b.boundaries, "max_rel_err_first_branch": acoustic,
                }));
                outcome.cells.push((label, Status::from_check(b.branches == b.expected && b.dim == n * (p - k))));
            }
            Err(e) => {
                summaries.push(json!({"n": n, "p": p, "k": k, "error": e.to_string()}));
                outcome.cells.push((label, Status::from_error(&e)));
            }
        }
    }
    outcome.summary = cell_summary(json!({}), summaries);
    outcome.plots.push(PlotSpec {
        name: "branches".into(),
        table: "branches".into(),
        x: "j_over_dim".into(),
        y: "rel_err".into(),
        series: ["n", "p", "k"].map(String::from).to_vec(),
        log_y: true,
        title: "Spectral branches of C^k periodic splines".into(),
    });
    outcome.tables.push(table);
    outcome
}

fn is_uniform(b: &BreakSequence) -> bool {
    let h = b.interval_lengths();
    let mean = b.length() / h.len() as f64;
    h.iter().all(|x| (x - mean).abs() <= 1e-12 * mean)
}

pub fn nwidth(cfg: &NwidthConfig) -> Outcome {
    // (class, space label, space, optimality claimed)
    let mut cells: Vec<(FunctionClass, usize, String, Result<SplineSpace, Error>, bool)> = Vec::new();
    for &class in &cfg.classes {
        for &r in &cfg.r {
            for &p in &cfg.degrees {
                match class {
                    FunctionClass::APer | FunctionClass::AFull => {
                        let knots = cfg.knots.as_ref().expect("validated knots");
                        for (label, b) in knot_cells(knots) {
                            let (space, claim) = if class == FunctionClass::APer {
                                let s = SplineSpace::periodic(&b, p);
                                let even = s.as_ref().is_ok_and(|s| s.dim() % 2 == 0);
                                (s, is_uniform(&b) && even && p + 1 >= r)
                            } else {
                                (SplineSpace::maximal(&b, p, ConstraintFamily::Full), is_uniform(&b) && p == 0 && r == 1)
                            };
                            cells.push((class, r, label, space, claim));
                        }
                    }
                    FunctionClass::A0 | FunctionClass::A1 | FunctionClass::A2 => {
                        let i = match class {
                            FunctionClass::A0 => 0,
                            FunctionClass::A1 => 1,
                            _ => 2,
                        };
                        for &n in &cfg.n {
                            cells.push((class, r, format!("optimal(i={i},n={n})"), optimal_space(i, n, p), p + 1 >= r));
                        }
                    }
                }
            }
        }
    }
    let m = cfg.grid;
    let out = run(&cells, |(class, r, label, space, claim)| {
        let mut cell = CellOut::new(format!("{} r={r} {label} p={}", class.name(), space.as_ref().map_or(0, |s| s.degree())));
        let (p, dim) = match space {
            Ok(s) => (Value::from(s.degree()), Value::from(s.dim())),
            Err(_) => (Value::Empty, Value::Empty),
        };
        let mut row: Row = vec![class.name().into(), (*r).into(), label.as_str().into(), p, dim];
        let rep = space.as_ref().map_err(Clone::clone).and_then(|s| residual_operator_norm(s, *class, *r, m));
        let (st, note) = match &rep {
            Ok(rep) => {
                row.extend([rep.error.into(), rep.error_fine.into(), rep.nwidth.into(), rep.ratio.into()]);
                row.extend([rep.nodes.into(), rep.certificate.into(), (if *claim { "yes" } else { "no" }).into()]);
                let lower = rep.ratio.is_none_or(|q| q >= 1.0 - OPTIMALITY_TOL);
                let attained = !*claim || rep.ratio.is_some_and(|q| q <= 1.0 + OPTIMALITY_TOL);
                let note = if !rep.certified() {
                    "grid certificate not met"
                } else if !lower {
                    "error below the n-width"
                } else if !attained {
                    "optimal space misses the n-width"
                } else {
                    ""
                };
                (Status::from_check(rep.certified() && lower && attained), note.to_string())
            }
            Err(e) => {
                row.extend(vec![Value::Empty; 7]);
                (Status::from_error(e), e.to_string())
            }
        };
        row.extend([(&st).into(), note.into()]);
        cell.rows.push((row, st));
        cell
    });
    let mut table = Table::new(
        "nwidth",
        &["class", "r", "space", "p", "dim", "E", "E_fine", "d_n", "ratio", "M", "certificate", "optimal_claim", "status", "note"],
    );
    let mut outcome = Outcome::default();
    gather(&mut outcome, &mut table, out);
    outcome.summary = json!({
        "rows": table.rows.len(),
        "cells": count_statuses(&outcome),
        "M": m,
        "max_certificate": max_of(&table, "certificate", false),
        "max_ratio": max_of(&table, "ratio", false),
    });
    outcome.tables.push(table);
    outcome
}

pub fn inverse(cfg: &InverseConfig) -> Outcome {
    let mut cells = Vec::new();
    for (label, b) in knot_cells(&cfg.knots) {
        for &p in &cfg.degrees {
            for &fam in &cfg.families {
                cells.push((label.clone(), b.clone(), p, fam.family(p)));
            }
        }
    }
    let out = run(&cells, |(label, b, p, fam)| {
        let mut cell = CellOut::new(format!("{label} p={p} {}", family_name(*fam)));
        let mut row: Row = vec![label.as_str().into(), b.num_intervals().into(), b.h_min().into(), (*p).into(), family_name(*fam).into()];
        let rep = SplineSpace::maximal(b, *p, *fam).and_then(|s| Ok((s.dim(), inverse_report(&s)?)));
        let (st, note) = match rep {
            Ok((dim, rep)) => {
                row.extend([dim.into(), rep.ratio.into(), rep.bound.into(), rep.slack.into()]);
                row.push((if rep.conforming { "yes" } else { "no" }).into());
                if rep.conforming {
                    (Status::from_check(rep.passed()), String::new())
                } else {
                    (Status::Exploratory, "boundary conditions of the inequality not imposed".into())
                }
            }
            Err(e) => {
                row.extend(vec![Value::Empty; 5]);
                (Status::from_error(&e), e.to_string())
            }
        };
        row.extend([(&st).into(), note.into()]);
        cell.rows.push((row, st));
        cell
    });
    let mut table = Table::new(
        "inverse",
        &["knots", "intervals", "h_min", "p", "family", "dim", "ratio", "bound", "slack", "conforming", "status", "note"],
    );
    let mut outcome = Outcome::default();
    gather(&mut outcome, &mut table, out);
    let slack = table.header.iter().position(|h| *h == "slack").unwrap();
    let min_slack = table
        .rows
        .iter()
        .filter(|r| matches!(&r[9], Value::Text(t) if t == "yes"))
        .filter_map(|r| match r[slack] {
            Value::Float(x) => Some(x),
            _ => None,
        })
        .reduce(f64::min);
    outcome.summary = json!({
        "rows": table.rows.len(),
        "cells": count_statuses(&outcome),
        "min_slack_conforming": min_slack,
    });
    outcome.tables.push(table);
    outcome
}

pub fn eigconv(cfg: &EigconvConfig) -> Outcome {
    let mut outcome = Outcome::default();
    match cfg {
        EigconvConfig::Optimal { families, n, degrees, tolerance, .. } => {
            let cells: Vec<(usize, usize)> = families.iter().flat_map(|&i| n.iter().map(move |&n| (i, n))).collect();
            let reports: Vec<_> = cells.par_iter().map(|&(i, n)| eigconv_report(i, n, degrees)).collect();
            let mut table = Table::new("eigconv", &["i", "n", "j", "p", "error"]);
            let mut summaries = Vec::new();
            for (&(i, n), rep) in cells.iter().zip(reports) {
                let label = format!("i={i} n={n}");
                match rep {
                    Ok(rep) => {
                        for (j, row) in rep.errors.iter().enumerate() {
                            for (&p, &e) in rep.degrees.iter().zip(row) {
                                table.push(vec![i.into(), n.into(), (j + 1).into(), p.into(), e.into()]);
                            }
                        }
                        let (dec, top) = (rep.decreasing_by_parity(), rep.max_at_top());
                        summaries.push(json!({"i": i, "n": n, "decreasing_by_parity": dec, "max_at_top": top}));
                        outcome.cells.push((label, Status::from_check(dec && top <= *tolerance)));
                    }
                    Err(e) => {
                        summaries.push(json!({"i": i, "n": n, "error": e.to_string()}));
                        outcome.cells.push((label, Status::from_error(&e)));
                    }
                }
            }
            outcome.summary = cell_summary(json!({"mode": "optimal", "tolerance": tolerance}), summaries);
            outcome.plots.push(PlotSpec {
                name: "eigconv".into(),
                table: "eigconv".into(),
                x: "p".into(),
                y: "error".into(),
                series: ["i", "n", "j"].map(String::from).to_vec(),
                log_y: true,
                title: "Eigenfunction projection error on optimal spline spaces".into(),
            });
            outcome.tables.push(table);
        }
        EigconvConfig::Periodic { n, q, l, degrees, .. } => {
            let reports: Vec<_> = n.par_iter().map(|&n| periodic_eigconv(n, *q, *l, degrees)).collect();
            let mut table = Table::new("eigconv", &["n", "q", "l", "j", "p", "error", "bound", "status"]);
            let mut summaries = Vec::new();
            for (&n, rep) in n.iter().zip(reports) {
                let label = format!("n={n} q={q} l={l}");
                match rep {
                    Ok(rep) => {
                        for (m, &j) in rep.modes.iter().enumerate() {
                            for (k, &p) in rep.degrees.iter().enumerate() {
                                let (e, b) = (rep.errors[m][k], rep.bounds[m][k]);
                                let ok = e <= b || (j == 0 && e <= splinewidth::nwidth::ROUNDING_FLOOR);
                                let st = Status::from_check(ok);
                                table.push(vec![n.into(), (*q).into(), (*l).into(), j.into(), p.into(), e.into(), b.into(), (&st).into()]);
                            }
                        }
                        let (inb, dec) = (rep.within_bounds(), rep.strictly_decreasing());
                        summaries.push(json!({"n": n, "within_bounds": inb, "strictly_decreasing": dec}));
                        outcome.cells.push((label, Status::from_check(inb && dec)));
                    }
                    Err(e) => {
                        summaries.push(json!({"n": n, "error": e.to_string()}));
                        outcome.cells.push((label, Status::from_error(&e)));
                    }
                }
            }
            outcome.summary = cell_summary(json!({"mode": "periodic", "q": q, "l": l}), summaries);
            outcome.plots.push(PlotSpec {
                name: "eigconv".into(),
                table: "eigconv".into(),
                x: "p".into(),
                y: "error".into(),
                series: ["n", "j"].map(String::from).to_vec(),
                log_y: true,
                title: "Periodic eigenfunction error against the degree".into(),
            });
            outcome.tables.push(table);
        }
    }
    outcome
}

pub fn conjecture(cfg: &ConjectureConfig) -> Outcome {
    let qs = if cfg.q.is_empty() { vec![0] } else { cfg.q.clone() };
    let lo = *cfg.degrees.iter().min().unwrap();
    let hi = *cfg.degrees.iter().max().unwrap();
    let cells: Vec<(usize, usize)> = cfg.m.iter().flat_map(|&m| qs.iter().map(move |&q| (m, q))).collect();
    let reports: Vec<_> = cells.par_iter().map(|&(m, q)| conjecture_explorer(m, q, lo..=hi)).collect();
    let mut table = Table::new("conjecture", &["m", "n", "q", "p", "target", "error", "orthogonality"]);
    let mut outcome = Outcome::default();
    let mut summaries = Vec::new();
    for (&(m, q), rep) in cells.iter().zip(reports) {
        let label = format!("m={m} q={q}");
        match rep {
            Ok(rep) => {
                for row in &rep.rows {
                    table.push(vec![m.into(), rep.n.into(), q.into(), row.p.into(), row.target.as_str().into(), row.error.into(), row.orthogonality.into()]);
                }
                summaries.push(json!({
                    "m": m, "q": q, "orthogonality_holds": rep.orthogonality_holds,
                    "piecewise_constant_residual": rep.piecewise_constant_residual,
                }));
                // the conjecture itself is only explored; the orthogonality facts are proven
                let st = if rep.orthogonality_holds { Status::Exploratory } else { Status::Fail };
                outcome.cells.push((label, st));
            }
            Err(e) => {
                summaries.push(json!({"m": m, "q": q, "error": e.to_string()}));
                outcome.cells.push((label, Status::from_error(&e)));
            }
        }
    }
    outcome.summary = cell_summary(json!({}), summaries);
    outcome.plots.push(PlotSpec {
        name: "conjecture".into(),
        table: "conjecture".into(),
        x: "p".into(),
        y: "error".into(),
        series: ["m", "q"].map(String::from).to_vec(),
        log_y: true,
        title: "Projection error of the critical harmonic".into(),
    });
    outcome.tables.push(table);
    outcome
}
