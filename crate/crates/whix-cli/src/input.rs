//! Problem-file parsing.
//!
//! A matrix problem is a single JSON document
//! `{"V": {"A": [[[re,im],...],...], "B": ..., "C": ..., "D": ...}, "W": {...}}`
//! with complex entries as two-element arrays. Scalar problems use
//! `{"phi": {"zeta": [re,im], "zeros": [[re,im],...]}, "m": {...}}`.
//! Matrices with no rows take their column count from `D` (the only case
//! where a nested-list encoding cannot carry it), so degree-0 factors are
//! expressible as `"A": [], "B": [], "C": [[], ...]`.

use num_complex::Complex64;
use serde::Deserialize;
use whix::numerics::CMatrix;
use whix::{BlaschkeProduct, Realization};

#[derive(Debug, Deserialize)]
pub struct ProblemFile {
    #[serde(rename = "V")]
    pub v: Option<RealizationDoc>,
    #[serde(rename = "W")]
    pub w: Option<RealizationDoc>,
    pub phi: Option<BlaschkeDoc>,
    pub m: Option<BlaschkeDoc>,
}

#[derive(Debug, Deserialize)]
pub struct RealizationDoc {
    #[serde(rename = "A")]
    pub a: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
pub struct BlaschkeDoc {
    pub zeta: [f64; 2],
    #[serde(default)]
    pub zeros: Vec<[f64; 2]>,
}

#[derive(Debug)]
pub struct ParseError {
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ParseError {}

fn bad(message: impl Into<String>) -> ParseError {
    ParseError {
        message: message.into(),
    }
}

fn matrix_from_doc(
    rows: &[Vec<[f64; 2]>],
    cols_if_empty: usize,
    field: &str,
    factor: &str,
) -> Result<CMatrix, ParseError> {
    if rows.is_empty() {
        return Ok(CMatrix::zeros(0, cols_if_empty));
    }
    let cols = rows[0].len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(bad(format!(
                "{factor}.{field}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
    }
    Ok(CMatrix::from_fn(rows.len(), cols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

impl RealizationDoc {
    pub fn to_realization(&self, factor: &str) -> Result<Realization, ParseError> {
        let m = self.d.len();
        if m == 0 {
            return Err(bad(format!("{factor}.D must have at least one row")));
        }
        let n = self.a.len();
        let a = matrix_from_doc(&self.a, n, "A", factor)?;
        let b = matrix_from_doc(&self.b, m, "B", factor)?;
        let c = matrix_from_doc(&self.c, n, "C", factor)?;
        let d = matrix_from_doc(&self.d, m, "D", factor)?;
        Realization::new(a, b, c, d).map_err(|e| bad(format!("{factor}: {e}")))
    }
}

impl BlaschkeDoc {
    pub fn to_product(&self, name: &str) -> Result<BlaschkeProduct, ParseError> {
        let zeta = Complex64::new(self.zeta[0], self.zeta[1]);
        let zeros = self
            .zeros
            .iter()
            .map(|z| Complex64::new(z[0], z[1]))
            .collect();
        BlaschkeProduct::new(zeta, zeros).map_err(|e| bad(format!("{name}: {e}")))
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    serde_json::from_str(text).map_err(|e| bad(format!("invalid problem file: {e}")))
}

/// Parse a matrix-factor problem into its realizations.
pub fn parse_pair(text: &str) -> Result<(Realization, Realization), ParseError> {
    let doc = parse_problem(text)?;
    let v = doc
        .v
        .ok_or_else(|| bad("problem file is missing factor \"V\""))?
        .to_realization("V")?;
    let w = doc
        .w
        .ok_or_else(|| bad("problem file is missing factor \"W\""))?
        .to_realization("W")?;
    Ok((v, w))
}

/// Parse a scalar problem into its Blaschke products.
pub fn parse_scalar(text: &str) -> Result<(BlaschkeProduct, BlaschkeProduct), ParseError> {
    let doc = parse_problem(text)?;
    let phi = doc
        .phi
        .ok_or_else(|| bad("scalar problem file is missing \"phi\""))?
        .to_product("phi")?;
    let m = doc
        .m
        .ok_or_else(|| bad("scalar problem file is missing \"m\""))?
        .to_product("m")?;
    Ok((phi, m))
}

/// Parse a semicolon-separated list of complex pairs, e.g. `"0.5,0;0,-0.25"`.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [re] => re
                    .parse::<f64>()
                    .map(|x| Complex64::new(x, 0.0))
                    .map_err(|e| bad(format!("bad complex entry {pair:?}: {e}"))),
                [re, im] => {
                    let re = re
                        .parse::<f64>()
                        .map_err(|e| bad(format!("bad complex entry {pair:?}: {e}")))?;
                    let im = im
                        .parse::<f64>()
                        .map_err(|e| bad(format!("bad complex entry {pair:?}: {e}")))?;
                    Ok(Complex64::new(re, im))
                }
                _ => Err(bad(format!("bad complex entry {pair:?}: expected re[,im]"))),
            }
        })
        .collect()
}
