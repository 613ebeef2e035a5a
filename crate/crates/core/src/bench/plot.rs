//! Per-figure data subsets and plotter-neutral recipes.
//!
//! A recipe is a small `key: value` text file naming the CSV, the x column
//! and one `series:` line per curve. Series may scale a column by a
//! constant (`75*kappainf`) to draw a bound.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::sweep::{stretch_conditioning, MethodSet, SweepConfig};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Norm};
use crate::stretch::{glue_graph, stretch_rows, Blocks, GlueSpec, StretchMode, StretchOutput};

pub const FIGURES: std::ops::RangeInclusive<u32> = 6..=14;

struct Figure {
    title: &'static str,
    ylabel: &'static str,
    yscale: &'static str,
    series: &'static [&'static str],
}

fn figure(id: u32) -> Result<Figure> {
    let f = match id {
        6 => Figure {
            title: "2-norm condition number of the arrow matrix",
            ylabel: "kappa_2",
            yscale: "log",
            series: &["kappa2"],
        },
        7 => Figure {
            title: "Relative error, full and restricted pivoting",
            ylabel: "relative error",
            yscale: "log",
            series: &["err_full", "err_restricted"],
        },
        8 => Figure {
            title: "Fill, full and restricted pivoting",
            ylabel: "percent of n^2",
            yscale: "linear",
            series: &["fill_full", "fill_restricted"],
        },
        9 => Figure {
            title: "Relative error, stretching vs full pivoting",
            ylabel: "relative error",
            yscale: "log",
            series: &["err_stretch", "err_full"],
        },
        10 => Figure {
            title: "Fill, stretching vs restricted pivoting",
            ylabel: "percent of n^2",
            yscale: "linear",
            series: &["fill_stretch", "fill_restricted"],
        },
        11 => Figure {
            title: "Glue row graphs of repeated stretching",
            ylabel: "",
            yscale: "linear",
            series: &[],
        },
        12 => Figure {
            title: "Condition numbers before and after stretching",
            ylabel: "condition number",
            yscale: "log",
            series: &[
                "kappa1",
                "row_p1",
                "col_p1",
                "49*kappa1",
                "75*kappa1",
                "kappainf",
                "row_pinf",
                "col_pinf",
                "49*kappainf",
                "75*kappainf",
            ],
        },
        13 => Figure {
            title: "Smallest pivot and smallest singular value of the core",
            ylabel: "magnitude",
            yscale: "log",
            series: &["pivot_min", "sigma_min"],
        },
        14 => Figure {
            title: "Relative error, block elimination and stretching",
            ylabel: "relative error",
            yscale: "log",
            series: &["err_be", "err_dbe", "err_stretch"],
        },
        other => {
            return Err(Error::InvalidParameter(format!(
                "no figure {other}; expected 6 to 14"
            )))
        }
    };
    Ok(f)
}

/// Minimal method subset needed for a figure.
pub fn figure_methods(id: u32) -> Result<MethodSet> {
    figure(id)?;
    let none = MethodSet::none();
    Ok(match id {
        6 | 13 => MethodSet {
            spectra: true,
            ..none
        },
        7 | 8 => MethodSet {
            full: true,
            restricted: true,
            ..none
        },
        9 => MethodSet {
            full: true,
            stretch: true,
            ..none
        },
        10 => MethodSet {
            restricted: true,
            stretch: true,
            ..none
        },
        12 => MethodSet {
            conditioning: true,
            ..none
        },
        14 => MethodSet {
            stretch: true,
            be: true,
            dbe: true,
            ..none
        },
        _ => none,
    })
}

pub fn plot_recipe(id: u32, csv_file: &str) -> Result<String> {
    let f = figure(id)?;
    let mut s = String::new();
    let _ = writeln!(s, "figure: {id}");
    let _ = writeln!(s, "title: {}", f.title);
    let _ = writeln!(s, "data: {csv_file}");
    if id == 11 {
        let _ = writeln!(s, "kind: graph");
        let _ = writeln!(s, "columns: graph,u,v,weight");
        let _ = writeln!(s, "panels: r_S,r_SS,r_SSS");
        return Ok(s);
    }
    let _ = writeln!(s, "kind: lines");
    let _ = writeln!(s, "x: t");
    let _ = writeln!(s, "xlabel: t");
    let _ = writeln!(s, "ylabel: {}", f.ylabel);
    let _ = writeln!(s, "yscale: {}", f.yscale);
    for series in f.series {
        let style = if series.contains('*') {
            "dashed"
        } else {
            "solid"
        };
        let _ = writeln!(s, "series: {series} {style}");
    }
    Ok(s)
}

/// Supplementary CSV with all four stretching configurations.
pub fn conditioning_csv(cfg: &SweepConfig) -> Result<String> {
    cfg.validate()?;
    let rows: Vec<Result<(f64, Vec<f64>)>> = (0..cfg.points)
        .into_par_iter()
        .map(|i| {
            let t = cfg.t_at(i);
            let c = stretch_conditioning(&cfg.matrix_at(t)?)?;
            Ok((
                t,
                vec![
                    c[0].kappa,
                    c[1].kappa,
                    c[0].kappa_stretched,
                    c[1].kappa_stretched,
                    c[2].kappa_stretched,
                    c[3].kappa_stretched,
                ],
            ))
        })
        .collect();
    let mut s = String::from("t,kappa1,kappainf,row_p1,row_pinf,col_p1,col_pinf\n");
    for r in rows {
        let (t, v) = r?;
        let _ = write!(s, "{t:e}");
        for x in v {
            let _ = write!(s, ",{x:e}");
        }
        s.push('\n');
    }
    Ok(s)
}

/// The three stages of repeatedly stretching one row `a1..a6`.
pub fn compound_row_stages() -> Result<[StretchOutput; 3]> {
    let mut a = DenseMatrix::identity(6);
    for j in 0..6 {
        a[(5, j)] = (j + 1) as f64;
    }
    let glue = GlueSpec {
        mode: StretchMode::Row,
        norm: Norm::Inf,
        sigma: 1.0,
    };
    let s1 = stretch_rows(&a, &[5], &Blocks::from_sizes(&[1, 3, 1, 1])?, &glue)?;
    // the middle piece (a2 a3 a4 with two glue entries) splits again
    let mid = s1.map.groups[5][1];
    let s2 = s1.restretch(
        &[mid],
        &Blocks::from_sets(vec![vec![0, 1], vec![2], vec![3, 4, 5, 6, 7, 8]], 9)?,
        &glue,
    )?;
    // the piece holding a3 splits into a3, each glue entry, and an empty rest
    let a3 = s2.map.groups[5]
        .iter()
        .copied()
        .find(|&p| s2.matrix[(p, 2)] != 0.0)
        .expect("piece with a3");
    let s3 = s2.restretch(
        &[a3],
        &Blocks::from_sets(
            vec![vec![0, 1, 2], vec![9], vec![10], vec![3, 4, 5, 6, 7, 8]],
            11,
        )?,
        &glue,
    )?;
    Ok([s1, s2, s3])
}

/// Edge list of the glue graphs of [`compound_row_stages`].
pub fn compound_row_csv() -> Result<String> {
    let mut s = String::from("graph,u,v,weight\n");
    for (name, stage) in ["r_S", "r_SS", "r_SSS"]
        .iter()
        .zip(compound_row_stages()?.iter())
    {
        let g = glue_graph(stage);
        for (&(u, v), &w) in &g.edges {
            let _ = writeln!(s, "{name},{u},{v},{w}");
        }
    }
    Ok(s)
}
