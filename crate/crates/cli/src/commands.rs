use std::fmt;
use std::path::Path;
use std::time::Instant;

use gcrd_core::exact::{gcrd_exact, hermite_form, right_divide, smith_form, PolyGrid};
use gcrd_core::experiments::{
    run_bitmead, run_param_k, run_random_table, run_tolerance_sensitivity, to_csv, PlantedShape, RNG_ALGORITHM,
};
use gcrd_core::gcrd::{extract_gcrd, gcrd_characteristic_poly, ExtractOptions};
use gcrd_core::io::{Blocks, InputFile, MatrixReport, ReportFile};
use gcrd_core::pencil::linalg::{DEFAULT_TOL, LARGE_TOL};
use gcrd_core::pencil::{staircase_system, Tolerance};
use gcrd_core::polymat::{vstack, PolyMatrix};
use gcrd_core::scalar::{c64, Rational};
use gcrd_core::verify::{cross_check, diagnostics, residual, ZeroSource};
use gcrd_core::Error;
use serde::Serialize;
use serde_json::json;

use crate::{Command, Engine, Experiment, Form};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidRequest { .. } => CliError::Usage(e.to_string()),
            Error::Parse(_) | Error::Shape(_) => CliError::Parse(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Gcrd { input, tol, rows, engine, skip_stage2, out } => {
            let report = match engine {
                Engine::Numeric => gcrd_numeric(&input, tol, rows, !skip_stage2)?,
                Engine::Exact => gcrd_exact_report(&input, rows)?,
            };
            emit(out.as_deref(), &report.to_json()?)
        }
        Command::Experiment { name, seed, tol, count, k_min, k_max, csv } => {
            experiment(name, seed, tol, count, k_min, k_max, csv.as_deref())
        }
        Command::NormalForm { input, form, tol, out } => normal_form(&input, form, tol, out.as_deref()),
        Command::Verify { input, tol, seed, out } => verify(&input, tol, seed, out.as_deref()),
    }
}

fn read_input(path: &Path) -> CliResult<InputFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    InputFile::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Numerical(e.to_string()))
}

fn tolerance(tol: Option<f64>, default: f64) -> CliResult<Tolerance> {
    Ok(Tolerance::new(tol.unwrap_or(default))?)
}

fn gcrd_numeric(path: &Path, tol: Option<f64>, rows: Option<usize>, stage2: bool) -> CliResult<ReportFile> {
    let input = read_input(path)?;
    let blocks = input.blocks()?.to_complex();
    let tol = tolerance(tol, DEFAULT_TOL)?;
    let start = Instant::now();
    let res = extract_gcrd(&blocks, &ExtractOptions { tol, rows, stage2 })?;
    let seconds = start.elapsed().as_secs_f64();
    let (p, _) = vstack(&blocks)?;
    let (zeros, source) = match &res.finite_zeros {
        Some(z) => (z.clone(), ZeroSource::Staircase),
        None => (Vec::new(), ZeroSource::None),
    };
    let diag = diagnostics(&p, &res, c64::new(1.0, 0.0), &zeros, source)?;
    let characteristic_poly = if res.rank > 0 && res.rank <= res.g_c.cols() {
        gcrd_characteristic_poly(&res.g_c)
            .ok()
            .map(|c| c.iter().map(|z| [z.re, z.im]).collect())
    } else {
        None
    };
    Ok(ReportFile {
        engine: "numeric".into(),
        rank: res.rank,
        g: MatrixReport::complex(&res.g),
        n: MatrixReport::complex(&res.n),
        g_c: (res.g.rows() != res.rank).then(|| MatrixReport::complex(&res.g_c)),
        residual: residual(&p, &res.n, &res.g)?,
        tolerance: Some(tol.rel()),
        tau_abs: Some(res.tau_abs),
        stage_ranks: Some(res.stage_ranks.clone()),
        characteristic_poly,
        diagnostics: Some(diag),
        seconds,
    })
}

fn rational_blocks(input: &InputFile, what: &str) -> CliResult<Vec<PolyMatrix<Rational>>> {
    match input.blocks()? {
        Blocks::Rational(b) => Ok(b),
        Blocks::Complex(_) => Err(CliError::Usage(format!("{what} needs a rational input"))),
    }
}

fn hstack_zero_cols(n: &PolyGrid, extra: usize) -> CliResult<PolyGrid> {
    let t = n.transpose().vstack(&PolyGrid::zeros(extra, n.rows()))?;
    Ok(t.transpose())
}

fn gcrd_exact_report(path: &Path, rows: Option<usize>) -> CliResult<ReportFile> {
    let input = read_input(path)?;
    let blocks = rational_blocks(&input, "the exact engine")?;
    let start = Instant::now();
    let grids: Vec<PolyGrid> = blocks.iter().map(PolyGrid::from_poly_matrix).collect();
    let ex = gcrd_exact(&grids, rows)?;
    let (p, _) = vstack(&blocks)?;
    let pg = PolyGrid::from_poly_matrix(&p);
    let r = ex.rank;
    let gc = ex.g.row_slice(0, r);
    let n_r = if r == 0 {
        PolyGrid::zeros(pg.rows(), 0)
    } else {
        right_divide(&pg, &gc)?
    };
    if r > 0 && n_r.mul(&gc)? != pg {
        return Err(CliError::Numerical("exact factorization does not reproduce the input".into()));
    }
    let n = hstack_zero_cols(&n_r, ex.g.rows() - r)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(ReportFile {
        engine: "exact".into(),
        rank: r,
        g: MatrixReport::rational(&ex.g.to_poly_matrix()),
        n: MatrixReport::rational(&n.to_poly_matrix()),
        g_c: (ex.g.rows() != r).then(|| MatrixReport::rational(&gc.to_poly_matrix())),
        residual: 0.0,
        tolerance: None,
        tau_abs: None,
        stage_ranks: None,
        characteristic_poly: None,
        diagnostics: None,
        seconds,
    })
}

fn experiment(
    name: Experiment,
    seed: u64,
    tol: Option<f64>,
    count: usize,
    k_min: i32,
    k_max: i32,
    csv: Option<&Path>,
) -> CliResult<()> {
    let text = match name {
        Experiment::Bitmead => {
            let (row, _) = run_bitmead(tolerance(tol, DEFAULT_TOL)?)?;
            to_csv(&[row])?
        }
        Experiment::ParamK => {
            if k_min > k_max {
                return Err(CliError::Usage(format!("empty exponent range {k_min}..={k_max}")));
            }
            let ks: Vec<f64> = (k_min..=k_max).map(|e| 10f64.powi(e)).collect();
            to_csv(&run_param_k(&ks, seed, tolerance(tol, DEFAULT_TOL)?)?)?
        }
        Experiment::RandomTable => {
            to_csv(&run_random_table(PlantedShape::DESK_TABLE, count, seed, tolerance(tol, LARGE_TOL)?)?)?
        }
        Experiment::ToleranceSensitivity => {
            let (base, raised) = run_tolerance_sensitivity(count, seed, tolerance(tol, DEFAULT_TOL)?)?;
            let rows: Vec<_> = base.into_iter().chain(raised).collect();
            to_csv(&rows)?
        }
    };
    if !matches!(name, Experiment::Bitmead) {
        eprintln!("rng: {RNG_ALGORITHM}, seed {seed}");
    }
    emit(csv, &text)
}

fn normal_form(path: &Path, form: Form, tol: Option<f64>, out: Option<&Path>) -> CliResult<()> {
    let input = read_input(path)?;
    let value = match form {
        Form::Hermite => {
            let (p, _) = vstack(&rational_blocks(&input, "the Hermite form")?)?;
            let h = hermite_form(&PolyGrid::from_poly_matrix(&p));
            json!({
                "form": "hermite",
                "rank": h.rank,
                "pivots": h.pivots,
                "h": MatrixReport::rational(&h.h.to_poly_matrix()),
                "u": MatrixReport::rational(&h.u.to_poly_matrix()),
                "u_inv": MatrixReport::rational(&h.u_inv.to_poly_matrix()),
            })
        }
        Form::Smith => {
            let (p, _) = vstack(&rational_blocks(&input, "the Smith form")?)?;
            let s = smith_form(&PolyGrid::from_poly_matrix(&p));
            let factors: Vec<Vec<String>> = s
                .invariant_factors()
                .iter()
                .map(|f| f.coeffs().iter().map(|c| c.to_string()).collect())
                .collect();
            json!({
                "form": "smith",
                "rank": s.rank,
                "invariant_factors": factors,
                "s": MatrixReport::rational(&s.s.to_poly_matrix()),
                "u": MatrixReport::rational(&s.u.to_poly_matrix()),
                "v": MatrixReport::rational(&s.v.to_poly_matrix()),
            })
        }
        Form::Staircase => {
            let (p, _) = vstack(&input.blocks()?.to_complex())?;
            let st = staircase_system(&p, tolerance(tol, DEFAULT_TOL)?, true)?;
            let f = &st.form;
            let zeros: Vec<[f64; 2]> = f.finite_eigenvalues()?.iter().map(|z| [z.re, z.im]).collect();
            json!({
                "form": "staircase",
                "pencil": [f.rows(), f.cols()],
                "state_rows": st.state_rows,
                "tau_abs": f.tau_abs,
                "infinite_steps": f.infinite_steps,
                "kronecker_steps": f.kronecker_steps,
                "part1": f.part1(),
                "regular_size": f.regular_size(),
                "part3": f.part3(),
                "right_kronecker_count": f.right_kronecker_count(),
                "rank": st.rank()?,
                "finite_eigenvalues": zeros,
                "backward_error": f.backward_error(&st.pencil),
            })
        }
    };
    emit(out, &to_json(&value)?)
}

fn verify(path: &Path, tol: Option<f64>, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let input = read_input(path)?;
    let tol = tolerance(tol, DEFAULT_TOL)?;
    let (value, pass) = match input.blocks()? {
        Blocks::Rational(b) => {
            let rep = cross_check(&b, tol, seed)?;
            let pass = rep.pass;
            (json!({ "mode": "cross-check", "rng": RNG_ALGORITHM, "seed": seed, "report": rep }), pass)
        }
        Blocks::Complex(b) => {
            let res = extract_gcrd(&b, &ExtractOptions { tol, ..ExtractOptions::default() })?;
            let (p, _) = vstack(&b)?;
            let diag = diagnostics(&p, &res, c64::new(1.0, 0.0), &[], ZeroSource::None)?;
            let pass = diag.rho1 <= 100.0 * res.tau_abs * res.input_norm;
            (json!({ "mode": "diagnostics", "report": diag, "pass": pass }), pass)
        }
    };
    emit(out, &to_json(&value)?)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Numerical("verification failed".into()))
    }
}
