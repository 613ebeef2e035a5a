//! Self-checks run by `matstretch verify`.

use super::gen::{figure6_matrix, rhs_set, toeplitz_arrow};
use super::sweep::relative_error;
use crate::arrow::{
    arrow_glue, dense_column_solve_ops, predicted_counts, stretch_arrow, stretched_lu,
    StretchedSolver,
};
use crate::blockelim::{be_factor, be_solve, dbe_factor, dbe_solve};
use crate::error::Result;
use crate::lu::{
    banded_factor_ops, banded_lu, banded_solve_ops, dense_factor_ops, dense_lu, dense_solve_ops,
};
use crate::matrix::{BandedMatrix, DenseMatrix, Norm};
use crate::stretch::{check_glue_trees, verify_certificate};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, failures: Vec<String>, cases: usize) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{cases} cases")
        } else {
            format!(
                "{} of {cases} failed; first: {}",
                failures.len(),
                failures[0]
            )
        };
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Counts reported by a band factorization, as `(factor, solve)`.
pub type BandCounter = dyn Fn(&BandedMatrix) -> Result<(u64, u64)>;

/// Band matrix with every in-band entry nonzero.
pub fn full_band(n: usize, l: usize, u: usize) -> BandedMatrix {
    let mut b = BandedMatrix::new(n, l, u).expect("positive order");
    for i in 0..n {
        for j in b.stored_cols(i) {
            let v = if i == j {
                4.0 + l as f64 + u as f64
            } else {
                1.0 + ((i * 3 + j * 5) % 7) as f64 / 7.0
            };
            b.set(i, j, v).expect("in band");
        }
    }
    b
}

pub fn default_band_counter(b: &BandedMatrix) -> Result<(u64, u64)> {
    let f = banded_lu(b)?;
    let y = vec![1.0; b.order()];
    Ok((f.counts().total(), f.solve(&y)?.1.total()))
}

/// Compares a band counter to the closed forms over `n <= 24`, `l, u <= 4`.
pub fn check_band_counts(counter: &BandCounter) -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 2..=24u64 {
        for l in 0..=4u64 {
            for u in 0..=4u64 {
                if l + u >= n {
                    continue;
                }
                cases += 1;
                let b = full_band(n as usize, l as usize, u as usize);
                match counter(&b) {
                    Ok((f, s)) => {
                        let (ef, es) = (banded_factor_ops(n, l, u), banded_solve_ops(n, l, u));
                        if (f, s) != (ef, es) {
                            failures.push(format!(
                                "n={n} l={l} u={u}: got ({f}, {s}), expected ({ef}, {es})"
                            ));
                        }
                    }
                    Err(e) => failures.push(format!("n={n} l={l} u={u}: {e}")),
                }
            }
        }
    }
    CheckResult::new("band operation counts", failures, cases)
}

fn check_dense_counts() -> CheckResult {
    let mut failures = Vec::new();
    for n in 1..=16usize {
        let mut a = DenseMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] += 1.0 / (1.0 + i as f64 + 2.0 * j as f64);
            }
        }
        match dense_lu(&a) {
            Ok(f) => {
                let s = f.solve(&vec![1.0; n]).map(|r| r.1.total()).unwrap_or(0);
                let nn = n as u64;
                if f.counts().total() != dense_factor_ops(nn) || s != dense_solve_ops(nn) {
                    failures.push(format!("n={n}: got ({}, {s})", f.counts().total()));
                }
            }
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    CheckResult::new("dense operation counts", failures, 16)
}

fn check_stretched_counts() -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in [5usize, 8, 13, 20, 31] {
        for l in 0..=3usize {
            for u in 0..=3usize {
                for d in 0..=3usize {
                    if l + u == 0 || l + u >= n {
                        continue;
                    }
                    cases += 1;
                    let tag = format!("n={n} l={l} u={u} d={d}");
                    let run = || -> Result<(u64, u64, u64)> {
                        let a = toeplitz_arrow(7.0, n, l, u, d)?;
                        let s = stretch_arrow(&a, &arrow_glue(&a, Norm::Inf)?)?;
                        let f = stretched_lu(&s)?;
                        let sc = f.solve(&vec![1.0; s.order()])?.1.total();
                        Ok((s.order() as u64, f.counts().total(), sc))
                    };
                    let p =
                        predicted_counts(n as u64, l as u64, u as u64, d as u64).expect("valid");
                    let extra = dense_column_solve_ops(n as u64, l as u64, u as u64, d as u64);
                    match run() {
                        Ok(got) if got == (p.order, p.factor, p.solve + extra) => {}
                        Ok(got) => failures.push(format!(
                            "{tag}: got {got:?}, expected ({}, {}, {})",
                            p.order,
                            p.factor,
                            p.solve + extra
                        )),
                        Err(e) => failures.push(format!("{tag}: {e}")),
                    }
                }
            }
        }
    }
    CheckResult::new("stretched operation counts", failures, cases)
}

fn check_certificates() -> CheckResult {
    let mut failures = Vec::new();
    let ts = [-5.0, -0.7, 0.5, 2.9, 4.0];
    for &t in &ts {
        for p in [Norm::One, Norm::Inf] {
            let run = || -> Result<Vec<String>> {
                let a = figure6_matrix(t, 15)?;
                let s = stretch_arrow(&a, &arrow_glue(&a, p)?)?;
                let out = s.as_stretch_output();
                let mut issues = Vec::new();
                if let Err(v) = verify_certificate(&a.to_dense(), &out) {
                    issues.push(v.to_string());
                }
                let trees = check_glue_trees(&out);
                issues.extend(trees.diagnostics);
                Ok(issues)
            };
            match run() {
                Ok(issues) => {
                    failures.extend(issues.into_iter().map(|i| format!("t={t} p={p}: {i}")))
                }
                Err(e) => failures.push(format!("t={t} p={p}: {e}")),
            }
        }
    }
    CheckResult::new(
        "stretching certificates and glue trees",
        failures,
        ts.len() * 2,
    )
}

fn check_solvers_agree() -> CheckResult {
    let mut failures = Vec::new();
    let rhs = rhs_set(51, 4, 7);
    let ts = [-5.5, 4.5, 6.0];
    for &t in &ts {
        let run = || -> Result<Vec<(&'static str, f64)>> {
            let a = figure6_matrix(t, 51)?;
            let dense = a.to_dense();
            let full = dense_lu(&dense)?;
            let st = StretchedSolver::new(&a, Norm::Inf)?;
            let be = be_factor(&a)?;
            let dbe = dbe_factor(&a)?;
            let mut worst = vec![("stretch", 0.0f64), ("be", 0.0), ("dbe", 0.0)];
            for y in &rhs {
                let x = full.solve(y)?.0;
                worst[0].1 = worst[0].1.max(relative_error(&st.solve(y)?.0, &x));
                worst[1].1 = worst[1].1.max(relative_error(&be_solve(&be, y)?.x, &x));
                worst[2].1 = worst[2].1.max(relative_error(&dbe_solve(&dbe, y)?.x, &x));
            }
            Ok(worst)
        };
        match run() {
            Ok(w) => {
                for (name, e) in w {
                    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN counts as a failure
                    if !(e <= 1e-10) {
                        failures.push(format!("t={t} {name}: relative difference {e:e}"));
                    }
                }
            }
            Err(e) => failures.push(format!("t={t}: {e}")),
        }
    }
    CheckResult::new(
        "solvers agree on well-conditioned members",
        failures,
        ts.len(),
    )
}

/// Every self-check with the production counters.
pub fn verify_suite() -> Vec<CheckResult> {
    vec![
        check_dense_counts(),
        check_band_counts(&default_band_counter),
        check_stretched_counts(),
        check_certificates(),
        check_solvers_agree(),
    ]
}
