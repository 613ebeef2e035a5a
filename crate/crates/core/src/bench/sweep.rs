//! Parameter sweep over the diagonal of the test family.

use std::io::{Read, Write};

use rayon::prelude::*;

use super::gen::{rhs_set, toeplitz_arrow};
use crate::arrow::{partition_banded, StretchedSolver};
use crate::blockelim::{be_factor, be_solve, dbe_factor, dbe_solve};
use crate::error::{Error, Result};
use crate::lu::{banded_lu, dense_lu, dense_lu_restricted, CountingLU};
use crate::matrix::{norm2, ArrowMatrix, DenseMatrix, Norm};
use crate::spectral::{cond, svd_values, CondNorm};
use crate::stretch::{condition_multiplier, StretchMode};

pub const CSV_HEADER: [&str; 16] = [
    "t",
    "kappa1",
    "kappa2",
    "kappainf",
    "kappa1_s",
    "kappainf_s",
    "err_full",
    "err_restricted",
    "err_stretch",
    "err_be",
    "err_dbe",
    "fill_full",
    "fill_restricted",
    "fill_stretch",
    "pivot_min",
    "sigma_min",
];

/// Which quantities a sweep computes; unset ones leave empty CSV cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodSet {
    pub conditioning: bool,
    pub spectra: bool,
    pub full: bool,
    pub restricted: bool,
    pub stretch: bool,
    pub be: bool,
    pub dbe: bool,
}

impl MethodSet {
    pub fn all() -> Self {
        Self {
            conditioning: true,
            spectra: true,
            full: true,
            restricted: true,
            stretch: true,
            be: true,
            dbe: true,
        }
    }

    pub fn none() -> Self {
        Self {
            conditioning: false,
            spectra: false,
            full: false,
            restricted: false,
            stretch: false,
            be: false,
            dbe: false,
        }
    }
}

/// Comma-separated names: `full`, `restricted`, `stretch`, `be`, `dbe`,
/// `conditioning`, `spectra`, or `all`.
impl std::str::FromStr for MethodSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut m = Self::none();
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            match name {
                "all" => m = Self::all(),
                "full" => m.full = true,
                "restricted" => m.restricted = true,
                "stretch" => m.stretch = true,
                "be" => m.be = true,
                "dbe" => m.dbe = true,
                "conditioning" => m.conditioning = true,
                "spectra" => m.spectra = true,
                other => return Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Order of the full arrow matrix.
    pub order: usize,
    pub lower: usize,
    pub upper: usize,
    pub border: usize,
    pub tmin: f64,
    pub tmax: f64,
    pub points: usize,
    pub rhs: usize,
    pub seed: u64,
    /// Glue norm used by the stretching solver.
    pub glue_norm: Norm,
    pub methods: MethodSet,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            order: 51,
            lower: 1,
            upper: 1,
            border: 1,
            tmin: -6.0,
            tmax: 6.0,
            points: 1201,
            rhs: 20,
            seed: 1,
            glue_norm: Norm::Inf,
            methods: MethodSet::all(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.border >= self.order {
            return Err(Error::InvalidParameter(
                "border must be smaller than the order".into(),
            ));
        }
        let n = self.order - self.border;
        partition_banded(n, self.lower, self.upper)?;
        if self.points == 0 || self.rhs == 0 {
            return Err(Error::InvalidParameter(
                "need at least one point and one right-hand side".into(),
            ));
        }
        if !(self.tmin.is_finite() && self.tmax.is_finite())
            || (self.points > 1 && self.tmin >= self.tmax)
        {
            return Err(Error::InvalidParameter(
                "t range must be finite and increasing".into(),
            ));
        }
        if (self.methods.be || self.methods.dbe) && self.border != 1 {
            return Err(Error::BorderDepth { depth: self.border });
        }
        Ok(())
    }

    pub fn t_at(&self, i: usize) -> f64 {
        if self.points == 1 {
            return self.tmin;
        }
        self.tmin + (self.tmax - self.tmin) * i as f64 / (self.points - 1) as f64
    }

    pub fn matrix_at(&self, t: f64) -> Result<ArrowMatrix> {
        toeplitz_arrow(
            t,
            self.order - self.border,
            self.lower,
            self.upper,
            self.border,
        )
    }
}

/// One sweep point. `None` means "not computed"; a failed solve is NaN and a
/// singular condition number is infinity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub kappa1: Option<f64>,
    pub kappa2: Option<f64>,
    pub kappainf: Option<f64>,
    pub kappa1_s: Option<f64>,
    pub kappainf_s: Option<f64>,
    pub err_full: Option<f64>,
    pub err_restricted: Option<f64>,
    pub err_stretch: Option<f64>,
    pub err_be: Option<f64>,
    pub err_dbe: Option<f64>,
    pub fill_full: Option<f64>,
    pub fill_restricted: Option<f64>,
    pub fill_stretch: Option<f64>,
    pub pivot_min: Option<f64>,
    pub sigma_min: Option<f64>,
}

impl SweepRow {
    pub fn cells(&self) -> [Option<f64>; 16] {
        [
            Some(self.t),
            self.kappa1,
            self.kappa2,
            self.kappainf,
            self.kappa1_s,
            self.kappainf_s,
            self.err_full,
            self.err_restricted,
            self.err_stretch,
            self.err_be,
            self.err_dbe,
            self.fill_full,
            self.fill_restricted,
            self.fill_stretch,
            self.pivot_min,
            self.sigma_min,
        ]
    }

    fn from_cells(c: [Option<f64>; 16]) -> Option<Self> {
        Some(Self {
            t: c[0]?,
            kappa1: c[1],
            kappa2: c[2],
            kappainf: c[3],
            kappa1_s: c[4],
            kappainf_s: c[5],
            err_full: c[6],
            err_restricted: c[7],
            err_stretch: c[8],
            err_be: c[9],
            err_dbe: c[10],
            fill_full: c[11],
            fill_restricted: c[12],
            fill_stretch: c[13],
            pivot_min: c[14],
            sigma_min: c[15],
        })
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `y - A x` with products and sums carried in double-double.
pub fn compensated_residual(a: &DenseMatrix, x: &[f64], y: &[f64]) -> Vec<f64> {
    (0..a.rows())
        .map(|i| {
            let (mut s, mut comp) = (y[i], 0.0);
            for (aij, xj) in a.row(i).iter().zip(x) {
                let (p, e) = two_prod(-aij, *xj);
                let t = s + p;
                comp += if s.abs() >= p.abs() {
                    (s - t) + p
                } else {
                    (p - t) + s
                };
                s = t;
                comp += e;
            }
            s + comp
        })
        .collect()
}

/// Dense partial pivoting followed by one refinement step whose residual is
/// formed in extended precision.
pub fn reference_solution(f: &CountingLU, a: &DenseMatrix, y: &[f64]) -> Result<Vec<f64>> {
    let (mut x, _) = f.solve(y)?;
    let r = compensated_residual(a, &x, y);
    let (dx, _) = f.solve(&r)?;
    for (xi, d) in x.iter_mut().zip(dx) {
        *xi += d;
    }
    Ok(x)
}

pub fn relative_error(x: &[f64], reference: &[f64]) -> f64 {
    let diff: Vec<f64> = x.iter().zip(reference).map(|(a, b)| a - b).collect();
    let e = norm2(&diff) / norm2(reference);
    if e.is_finite() {
        e
    } else {
        f64::NAN
    }
}

fn worst(errors: impl Iterator<Item = Result<f64>>) -> f64 {
    let mut w: f64 = 0.0;
    for e in errors {
        match e {
            Ok(v) if v.is_nan() => return f64::NAN,
            Ok(v) => w = w.max(v),
            Err(_) => return f64::NAN,
        }
    }
    w
}

fn cond_value(a: &DenseMatrix, p: CondNorm) -> f64 {
    cond(a, p).map_or(f64::NAN, |c| c.or_inf())
}

/// Transpose of an arrow matrix, again in arrow form.
pub fn arrow_transpose(a: &ArrowMatrix) -> Result<ArrowMatrix> {
    ArrowMatrix::from_dense(
        &a.to_dense().transpose(),
        a.core_order(),
        a.upper(),
        a.lower(),
    )
}

/// Condition of the stretched matrix for one glue configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchConditioning {
    pub mode: StretchMode,
    pub norm: Norm,
    pub pieces: u64,
    pub kappa: f64,
    pub kappa_stretched: f64,
    pub multiplier: u64,
}

/// Conditioning of row and column stretchings in both norms.
///
/// Column stretching of `A` in the p-norm is the transpose of row stretching
/// of `A^T` in the dual norm with the same glue.
pub fn stretch_conditioning(a: &ArrowMatrix) -> Result<Vec<StretchConditioning>> {
    let dense = a.to_dense();
    let at = arrow_transpose(a)?;
    let mut out = Vec::with_capacity(4);
    for mode in [StretchMode::Row, StretchMode::Column] {
        for p in [Norm::One, Norm::Inf] {
            let (src, q) = match mode {
                StretchMode::Row => (a, p),
                StretchMode::Column => (&at, p.dual()),
            };
            let s = StretchedSolver::new(src, q)?;
            let pieces = s.stretched.map.max_pieces() as u64;
            out.push(StretchConditioning {
                mode,
                norm: p,
                pieces,
                kappa: cond_value(&dense, p.into()),
                kappa_stretched: cond_value(&s.stretched.to_dense(), q.into()),
                multiplier: condition_multiplier(mode, p, pieces, true),
            });
        }
    }
    Ok(out)
}

fn sweep_point(cfg: &SweepConfig, t: f64, rhs: &[Vec<f64>]) -> Result<SweepRow> {
    let a = cfg.matrix_at(t)?;
    let dense = a.to_dense();
    let order = cfg.order;
    let ms = cfg.methods;
    let mut row = SweepRow {
        t,
        ..SweepRow::default()
    };
    let full = dense_lu(&dense);
    let refs: Option<Vec<Vec<f64>>> = match &full {
        Ok(f) => rhs
            .iter()
            .map(|y| reference_solution(f, &dense, y).ok())
            .collect(),
        Err(_) => None,
    };
    let err_against = |solve: &dyn Fn(&[f64]) -> Result<Vec<f64>>| -> f64 {
        match &refs {
            Some(refs) => worst(
                rhs.iter()
                    .zip(refs)
                    .map(|(y, r)| solve(y).map(|x| relative_error(&x, r))),
            ),
            None => f64::NAN,
        }
    };
    if ms.conditioning {
        row.kappa1 = Some(cond_value(&dense, CondNorm::One));
        row.kappainf = Some(cond_value(&dense, CondNorm::Inf));
        for (p, slot) in [
            (Norm::One, &mut row.kappa1_s),
            (Norm::Inf, &mut row.kappainf_s),
        ] {
            *slot = Some(
                StretchedSolver::new(&a, p)
                    .map_or(f64::NAN, |s| cond_value(&s.stretched.to_dense(), p.into())),
            );
        }
    }
    if ms.spectra {
        row.kappa2 = Some(cond_value(&dense, CondNorm::Two));
        row.sigma_min = Some(svd_values(&a.core().to_dense()).sigma_min());
        row.pivot_min = Some(banded_lu(a.core()).map_or(0.0, |f| f.smallest_pivot().1.abs()));
    }
    if ms.full {
        row.err_full = Some(match &full {
            Ok(f) => err_against(&|y| f.solve(y).map(|r| r.0)),
            Err(_) => f64::NAN,
        });
        row.fill_full = Some(
            full.as_ref()
                .map_or(f64::NAN, |f| f.fill_stats(order).percent),
        );
    }
    if ms.restricted {
        match dense_lu_restricted(&dense, cfg.lower) {
            Ok(f) => {
                row.err_restricted = Some(err_against(&|y| f.solve(y).map(|r| r.0)));
                row.fill_restricted = Some(f.fill_stats(order).percent);
            }
            Err(_) => {
                row.err_restricted = Some(f64::NAN);
                row.fill_restricted = Some(f64::NAN);
            }
        }
    }
    if ms.stretch {
        match StretchedSolver::new(&a, cfg.glue_norm) {
            Ok(s) => {
                row.err_stretch = Some(err_against(&|y| s.solve(y).map(|r| r.0)));
                row.fill_stretch = Some(s.lu.fill_stats(order).percent);
            }
            Err(_) => {
                row.err_stretch = Some(f64::NAN);
                row.fill_stretch = Some(f64::NAN);
            }
        }
    }
    if ms.be {
        row.err_be = Some(match be_factor(&a) {
            Ok(f) => err_against(&|y| be_solve(&f, y).map(|s| s.x)),
            Err(_) => f64::NAN,
        });
    }
    if ms.dbe {
        row.err_dbe = Some(match dbe_factor(&a) {
            Ok(f) => err_against(&|y| dbe_solve(&f, y).map(|s| s.x)),
            Err(_) => f64::NAN,
        });
    }
    Ok(row)
}

/// Runs every point in parallel; rows come back in `t` order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let rhs = rhs_set(cfg.order, cfg.rhs, cfg.seed);
    (0..cfg.points)
        .into_par_iter()
        .map(|i| sweep_point(cfg, cfg.t_at(i), &rhs))
        .collect()
}

fn fmt_cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| format!("{v:e}"))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record(r.cells().map(fmt_cell)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers().map_err(|e| Error::Io(e.to_string()))?.clone();
    if headers.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            message: "unexpected CSV header".into(),
        });
    }
    let mut rows = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let mut cells = [None; 16];
        for (slot, field) in cells.iter_mut().zip(rec.iter()) {
            if !field.is_empty() {
                *slot = Some(field.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad number '{field}'"),
                })?);
            }
        }
        rows.push(SweepRow::from_cells(cells).ok_or(Error::Parse {
            line,
            message: "missing t".into(),
        })?);
    }
    Ok(rows)
}
