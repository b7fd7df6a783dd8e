//! JSON documents for inputs and reports.
//!
//! Inputs list the coefficient matrices of the compound matrix by degree,
//! with rational entries as `"p/q"` strings and complex entries as
//! `[re, im]` pairs. Floats are written in shortest round-trip form.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polymat::{BlockSpec, Matrix, PolyMatrix};
use crate::scalar::{c64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Complex,
}

/// A rational `"p/q"` string or a complex `[re, im]` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Rational(String),
    Complex([f64; 2]),
}

impl Entry {
    fn rational(&self) -> Result<Rational> {
        match self {
            Entry::Rational(s) => {
                let r = Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
                Ok(r)
            }
            Entry::Complex(_) => Err(Error::Parse("complex entry in a rational document".into())),
        }
    }

    fn complex(&self) -> Result<c64> {
        match self {
            Entry::Complex([re, im]) => {
                if !(re.is_finite() && im.is_finite()) {
                    return Err(Error::Parse(format!("non-finite entry [{re}, {im}]")));
                }
                Ok(c64::new(*re, *im))
            }
            Entry::Rational(_) => Err(Error::Parse("rational entry in a complex document".into())),
        }
    }
}

/// Coefficients of a polynomial matrix: `coeffs[k][i][j]` multiplies `λ^k`.
pub type CoeffArray = Vec<Vec<Vec<Entry>>>;

fn rational_coeffs(p: &PolyMatrix<Rational>) -> CoeffArray {
    p.coeffs()
        .iter()
        .map(|c| {
            (0..c.rows())
                .map(|i| c.row(i).iter().map(|x| Entry::Rational(x.to_string())).collect())
                .collect()
        })
        .collect()
}

fn complex_coeffs(p: &PolyMatrix<c64>) -> CoeffArray {
    p.coeffs()
        .iter()
        .map(|c| {
            (0..c.rows())
                .map(|i| c.row(i).iter().map(|x| Entry::Complex([x.re, x.im])).collect())
                .collect()
        })
        .collect()
}

fn parse_coeffs<T: crate::scalar::Scalar>(
    coeffs: &CoeffArray,
    m: usize,
    n: usize,
    f: impl Fn(&Entry) -> Result<T>,
) -> Result<PolyMatrix<T>> {
    if coeffs.is_empty() {
        return Err(Error::Parse("at least one coefficient matrix is required".into()));
    }
    let mats = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if c.len() != m || c.iter().any(|row| row.len() != n) {
                return Err(Error::Parse(format!("coefficient {k} is not {m}x{n}")));
            }
            let rows = c
                .iter()
                .map(|row| row.iter().map(&f).collect::<Result<Vec<T>>>())
                .collect::<Result<Vec<_>>>()?;
            if m == 0 {
                return Ok(Matrix::zeros(0, n));
            }
            Matrix::from_rows(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::new(m, n, mats)
}

/// Input document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub m: usize,
    pub n: usize,
    /// Row counts of the stacked blocks.
    pub blocks: Vec<usize>,
    pub field: Field,
    pub coeffs: CoeffArray,
}

/// Parsed blocks in their native field.
#[derive(Clone, Debug)]
pub enum Blocks {
    Rational(Vec<PolyMatrix<Rational>>),
    Complex(Vec<PolyMatrix<c64>>),
}

impl Blocks {
    /// The blocks as complex matrices.
    pub fn to_complex(&self) -> Vec<PolyMatrix<c64>> {
        match self {
            Blocks::Rational(b) => b.iter().map(PolyMatrix::to_c64).collect(),
            Blocks::Complex(b) => b.clone(),
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
}

impl InputFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: InputFile = serde_json::from_str(text).map_err(json_error)?;
        f.blocks()?;
        Ok(f)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    fn spec(&self) -> Result<BlockSpec> {
        if self.blocks.iter().sum::<usize>() != self.m {
            return Err(Error::Parse(format!(
                "block row counts {:?} do not add up to m = {}",
                self.blocks, self.m
            )));
        }
        BlockSpec::new(self.blocks.clone())
    }

    /// Validates shapes and entries and splits the compound into blocks.
    pub fn blocks(&self) -> Result<Blocks> {
        let spec = self.spec()?;
        Ok(match self.field {
            Field::Rational => {
                let p = parse_coeffs(&self.coeffs, self.m, self.n, Entry::rational)?;
                Blocks::Rational(spec.split(&p)?)
            }
            Field::Complex => {
                let p = parse_coeffs(&self.coeffs, self.m, self.n, Entry::complex)?;
                Blocks::Complex(spec.split(&p)?)
            }
        })
    }

    pub fn from_rational(blocks: &[PolyMatrix<Rational>]) -> Result<Self> {
        let (p, spec) = crate::polymat::vstack(blocks)?;
        Ok(Self {
            m: p.rows(),
            n: p.cols(),
            blocks: spec.sizes().to_vec(),
            field: Field::Rational,
            coeffs: rational_coeffs(&p),
        })
    }

    pub fn from_complex(blocks: &[PolyMatrix<c64>]) -> Result<Self> {
        let (p, spec) = crate::polymat::vstack(blocks)?;
        Ok(Self {
            m: p.rows(),
            n: p.cols(),
            blocks: spec.sizes().to_vec(),
            field: Field::Complex,
            coeffs: complex_coeffs(&p),
        })
    }
}

/// A polynomial matrix in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub rows: usize,
    pub cols: usize,
    pub degree: usize,
    pub field: Field,
    pub coeffs: CoeffArray,
}

impl MatrixReport {
    pub fn rational(p: &PolyMatrix<Rational>) -> Self {
        Self {
            rows: p.rows(),
            cols: p.cols(),
            degree: p.degree(),
            field: Field::Rational,
            coeffs: rational_coeffs(p),
        }
    }

    pub fn complex(p: &PolyMatrix<c64>) -> Self {
        Self {
            rows: p.rows(),
            cols: p.cols(),
            degree: p.degree(),
            field: Field::Complex,
            coeffs: complex_coeffs(p),
        }
    }

    pub fn to_complex(&self) -> Result<PolyMatrix<c64>> {
        match self.field {
            Field::Complex => parse_coeffs(&self.coeffs, self.rows, self.cols, Entry::complex),
            Field::Rational => {
                Ok(parse_coeffs(&self.coeffs, self.rows, self.cols, Entry::rational)?.to_c64())
            }
        }
    }

    pub fn to_rational(&self) -> Result<PolyMatrix<Rational>> {
        parse_coeffs(&self.coeffs, self.rows, self.cols, Entry::rational)
    }
}

/// Output document of a divisor computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    /// `"numeric"` or `"exact"`.
    pub engine: String,
    pub rank: usize,
    pub g: MatrixReport,
    pub n: MatrixReport,
    /// Compact divisor, when it differs from `g`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g_c: Option<MatrixReport>,
    /// `‖P − N G‖_F`.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau_abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stage_ranks: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub characteristic_poly: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostics: Option<crate::verify::DiagnosticsReport>,
    pub seconds: f64,
}

impl ReportFile {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::bitmead_blocks;

    #[test]
    fn rational_round_trip() {
        let f = InputFile::from_rational(&bitmead_blocks()).unwrap();
        let text = f.to_json().unwrap();
        let g = InputFile::from_json(&text).unwrap();
        assert_eq!(f, g);
        let Blocks::Rational(b) = g.blocks().unwrap() else { panic!("field changed") };
        assert_eq!(b, bitmead_blocks());
    }

    #[test]
    fn complex_round_trip_is_lossless() {
        let p = PolyMatrix::from_entries(1, 2, |_, j| {
            vec![c64::new(0.1 + j as f64 / 3.0, -1e-300), c64::new(std::f64::consts::PI, 7.0)]
        });
        let f = InputFile::from_complex(std::slice::from_ref(&p)).unwrap();
        let g = InputFile::from_json(&f.to_json().unwrap()).unwrap();
        let Blocks::Complex(b) = g.blocks().unwrap() else { panic!("field changed") };
        assert_eq!(b[0], p);
    }

    #[test]
    fn shape_and_entry_errors() {
        let ok = r#"{"m":1,"n":1,"blocks":[1],"field":"rational","coeffs":[[["1/2"]]]}"#;
        assert!(InputFile::from_json(ok).is_ok());
        for bad in [
            r#"{"m":1,"n":1,"blocks":[2],"field":"rational","coeffs":[[["1/2"]]]}"#,
            r#"{"m":1,"n":2,"blocks":[1],"field":"rational","coeffs":[[["1/2"]]]}"#,
            r#"{"m":1,"n":1,"blocks":[1],"field":"rational","coeffs":[[["x"]]]}"#,
            r#"{"m":1,"n":1,"blocks":[1],"field":"complex","coeffs":[[["1"]]]}"#,
            r#"{"m":1,"n":1,"blocks":[1],"field":"complex","coeffs":[[[1e999, 0]]]}"#,
            r#"{"m":1,"n":1,"blocks":[1],"field":"rational","coeffs":[]}"#,
        ] {
            assert!(matches!(InputFile::from_json(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = InputFile::from_json("{\n  \"m\": 1,\n  oops\n}").unwrap_err();
        let Error::Parse(msg) = err else { panic!("wrong variant") };
        assert!(msg.starts_with("line 3"), "{msg}");
    }
}
