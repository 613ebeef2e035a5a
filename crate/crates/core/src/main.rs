use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use matstretch::arrow::solve_arrow_via_stretching;
use matstretch::bench::plot::{
    compound_row_csv, conditioning_csv, figure_methods, plot_recipe, FIGURES,
};
use matstretch::bench::sweep::csv_string;
use matstretch::bench::verify::verify_suite;
use matstretch::bench::{run_sweep, MethodSet, SweepConfig};
use matstretch::blockelim::{be_factor, be_solve, dbe_factor, dbe_solve};
use matstretch::lu::{dense_lu, dense_lu_restricted, OpCounts};
use matstretch::matrix::text::{parse_matrix, parse_vector, write_vector, MatrixFile};
use matstretch::matrix::{ArrowMatrix, Norm};
use matstretch::Error;

#[derive(Parser)]
#[command(
    name = "matstretch",
    version,
    about = "Stretching solvers for arrow matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// Order of the full matrix
    #[arg(long, default_value_t = 51)]
    n: usize,
    /// Lower and upper bandwidth of the core, as L,U
    #[arg(long, default_value = "1,1", value_parser = parse_band)]
    band: (usize, usize),
    #[arg(long, default_value_t = 1)]
    border: usize,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    tmin: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    tmax: f64,
    #[arg(long, default_value_t = 1201)]
    points: usize,
    #[arg(long, default_value_t = 20)]
    rhs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Glue norm for the stretching solver: 1 or inf
    #[arg(long, default_value = "inf")]
    glue_norm: Norm,
}

impl SweepArgs {
    fn config(&self, methods: MethodSet) -> SweepConfig {
        SweepConfig {
            order: self.n,
            lower: self.band.0,
            upper: self.band.1,
            border: self.border,
            tmin: self.tmin,
            tmax: self.tmax,
            points: self.points,
            rhs: self.rhs,
            seed: self.seed,
            glue_norm: self.glue_norm,
            methods,
        }
    }
}

fn parse_band(s: &str) -> Result<(usize, usize), String> {
    let (l, u) = s.split_once(',').ok_or("expected L,U")?;
    Ok((
        l.trim().parse().map_err(|_| "bad lower bandwidth")?,
        u.trim().parse().map_err(|_| "bad upper bandwidth")?,
    ))
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Full,
    Restricted,
    Stretch,
    Be,
    Dbe,
}

#[derive(Subcommand)]
enum Command {
    /// Run the parameter sweep and write CSV
    Sweep {
        #[command(flatten)]
        args: SweepArgs,
        /// Comma-separated subset of full,restricted,stretch,be,dbe,conditioning,spectra
        #[arg(long, default_value = "all")]
        methods: MethodSet,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the data for one figure and write CSV plus a plot recipe
    Figure {
        id: u32,
        #[command(flatten)]
        args: SweepArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Solve one system read from files
    Solve {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Pivot window for the restricted method on dense input
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value = "inf")]
        glue_norm: Norm,
    },
    /// Run the built-in self-checks
    Verify,
}

enum Failure {
    Input(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_counts(label: &str, c: OpCounts) {
    eprintln!(
        "{label}: {} comparisons, {} divisions, {} multiplications, {} subtractions ({} total)",
        c.comparisons,
        c.divisions,
        c.multiplications,
        c.subtractions,
        c.total()
    );
}

fn need_arrow(m: &MatrixFile) -> Result<&ArrowMatrix, Failure> {
    match m {
        MatrixFile::Arrow(a) => Ok(a),
        _ => Err(Failure::Input(
            "this method needs an arrow matrix file".into(),
        )),
    }
}

fn solve(
    matrix: &PathBuf,
    rhs: &PathBuf,
    method: Method,
    window: Option<usize>,
    glue_norm: Norm,
) -> Result<(), Failure> {
    let m = parse_matrix(&read(matrix)?)?;
    let y = parse_vector(&read(rhs)?)?;
    let x = match method {
        Method::Full => {
            let f = dense_lu(&m.to_dense())?;
            print_counts("factor", f.counts());
            let (x, c) = f.solve(&y)?;
            print_counts("solve", c);
            x
        }
        Method::Restricted => {
            let w = match (&m, window) {
                (_, Some(w)) => w,
                (MatrixFile::Arrow(a), None) => a.lower(),
                (MatrixFile::Banded(b), None) => b.lower(),
                (MatrixFile::Dense(d), None) => d.rows().saturating_sub(1),
            };
            let f = dense_lu_restricted(&m.to_dense(), w)?;
            print_counts("factor", f.counts());
            let (x, c) = f.solve(&y)?;
            print_counts("solve", c);
            x
        }
        Method::Stretch => {
            let s = solve_arrow_via_stretching(need_arrow(&m)?, &y, glue_norm)?;
            eprintln!(
                "stretched order {}, sigma {:e}, residual {:e}",
                s.order, s.sigma, s.residual
            );
            print_counts("factor", s.factor_counts);
            print_counts("solve", s.solve_counts);
            s.x
        }
        Method::Be => {
            let f = be_factor(need_arrow(&m)?)?;
            let s = be_solve(&f, &y)?;
            print_counts("solve", s.total());
            s.x
        }
        Method::Dbe => {
            let f = dbe_factor(need_arrow(&m)?)?;
            let s = dbe_solve(&f, &y)?;
            print_counts("solve", s.total());
            s.x
        }
    };
    io::stdout().write_all(write_vector(&x).as_bytes())?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep { args, methods, out } => {
            let rows = run_sweep(&args.config(methods))?;
            let text = csv_string(&rows)?;
            match out {
                Some(p) => fs::write(&p, text)?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
        }
        Command::Figure { id, args, out } => {
            if !FIGURES.contains(&id) {
                return Err(Failure::Input(format!("no figure {id}; expected 6 to 14")));
            }
            fs::create_dir_all(&out)?;
            let name = format!("figure{id}.csv");
            let data = match id {
                11 => compound_row_csv()?,
                12 => conditioning_csv(&args.config(MethodSet::none()))?,
                _ => csv_string(&run_sweep(&args.config(figure_methods(id)?))?)?,
            };
            fs::write(out.join(&name), data)?;
            fs::write(
                out.join(format!("figure{id}.plot")),
                plot_recipe(id, &name)?,
            )?;
            eprintln!("wrote {}", out.join(&name).display());
        }
        Command::Solve {
            matrix,
            rhs,
            method,
            window,
            glue_norm,
        } => solve(&matrix, &rhs, method, window, glue_norm)?,
        Command::Verify => {
            let results = verify_suite();
            let mut ok = true;
            for r in &results {
                println!(
                    "{} {}: {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                ok &= r.passed;
            }
            if !ok {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
