//! JSON input documents and their conversion into engine types.

use std::fs;
use std::path::Path;

use logres::algebra::{fmt_rational, parse_rational, CliffordElem, MatrixW, Rational, Scalar};
use logres::geometry::{CurvatureTensor, GaugeField};
use logres::symbols::{ClassicalSymbol, HomSymbol};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> InputError {
    InputError::Invalid(msg.into())
}

/// A number: `"p/q"`, an integer, or `["re", "im"]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Real(String),
    Complex([String; 2]),
}

impl Entry {
    pub fn to_scalar(&self) -> Result<Scalar, InputError> {
        let parse = |s: &str| parse_rational(s).map_err(|e| invalid(e.to_string()));
        match self {
            Entry::Int(v) => Ok(Scalar::from_int(*v)),
            Entry::Real(s) => Ok(Scalar::real(parse(s)?)),
            Entry::Complex([re, im]) => Ok(Scalar::new(parse(re)?, parse(im)?)),
        }
    }

    pub fn to_rational(&self) -> Result<Rational, InputError> {
        let s = self.to_scalar()?;
        if !s.is_real() {
            return Err(invalid(format!("expected a real number, got {s}")));
        }
        Ok(s.re)
    }

    pub fn from_scalar(s: &Scalar) -> Entry {
        if s.is_real() {
            Entry::Real(fmt_rational(&s.re))
        } else {
            Entry::Complex([fmt_rational(&s.re), fmt_rational(&s.im)])
        }
    }
}

pub type MatrixSpec = Vec<Vec<Entry>>;

fn to_matrix(m: &MatrixSpec, dw: usize, what: &str) -> Result<MatrixW, InputError> {
    if m.len() != dw || m.iter().any(|row| row.len() != dw) {
        return Err(invalid(format!("{what}: expected a {dw}x{dw} matrix")));
    }
    let rows = m
        .iter()
        .map(|row| row.iter().map(Entry::to_scalar).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    MatrixW::from_rows(rows).map_err(|e| invalid(format!("{what}: {e}")))
}

fn from_matrix(m: &MatrixW) -> MatrixSpec {
    m.rows().iter().map(|row| row.iter().map(Entry::from_scalar).collect()).collect()
}

/// One term `coeff · x^x ξ^xi |ξ|^{2·norm_power}` with a Clifford word (1-based
/// generator indices) times a matrix or a scalar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub xi: Vec<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<u8>,
    #[serde(default, skip_serializing_if = "is_zero_i16")]
    pub norm_power: i16,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clifford: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<Entry>,
}

fn is_zero_i16(v: &i16) -> bool {
    *v == 0
}

/// `σ_{<2}(Q)` as an explicit list of terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolFile {
    pub n: usize,
    #[serde(rename = "d_W")]
    pub dw: usize,
    pub terms: Vec<TermSpec>,
}

impl SymbolFile {
    pub fn to_symbol(&self) -> Result<ClassicalSymbol, InputError> {
        let (n, dw) = (self.n, self.dw);
        if n == 0 || n > logres::algebra::MAX_DIM {
            return Err(invalid(format!("n must be in 1..={}", logres::algebra::MAX_DIM)));
        }
        if dw == 0 {
            return Err(invalid("d_W must be positive"));
        }
        let mut sym = ClassicalSymbol::zero(n, dw, 1, logres::symbols::FLOOR_EXACT);
        for (k, t) in self.terms.iter().enumerate() {
            let what = format!("term {}", k + 1);
            if t.xi.len() > n || t.x.len() > n {
                return Err(invalid(format!("{what}: exponent vectors longer than n = {n}")));
            }
            if let Some(&bad) = t.clifford.iter().find(|&&i| i == 0 || i > n) {
                return Err(invalid(format!("{what}: generator index {bad} outside 1..={n}")));
            }
            let m = match (&t.matrix, &t.scalar) {
                (Some(m), None) => to_matrix(m, dw, &what)?,
                (None, Some(s)) => MatrixW::scalar(dw, s.to_scalar()?),
                _ => return Err(invalid(format!("{what}: give exactly one of \"matrix\" and \"scalar\""))),
            };
            let idx: Vec<usize> = t.clifford.iter().map(|i| i - 1).collect();
            let h = HomSymbol::term(n, &t.xi, &t.x, t.norm_power, CliffordElem::word(n, &idx, m));
            if h.degree() > 1 {
                return Err(invalid(format!("{what}: degree {} exceeds 1; give only the part below |xi|^2", h.degree())));
            }
            sym.add_component(h);
        }
        Ok(sym)
    }

    pub fn from_symbol(s: &ClassicalSymbol) -> SymbolFile {
        let n = s.n();
        let mut terms = Vec::new();
        for (_, h) in s.components() {
            for (mono, c) in h.terms() {
                for (&blade, m) in c.iter() {
                    terms.push(TermSpec {
                        xi: trim(&mono.xi[..n]),
                        x: trim(&mono.x[..n]),
                        norm_power: mono.q,
                        clifford: (0..n).filter(|i| blade >> i & 1 == 1).map(|i| i + 1).collect(),
                        matrix: Some(from_matrix(m)),
                        scalar: None,
                    });
                }
            }
        }
        SymbolFile { n, dw: s.dw(), terms }
    }
}

fn trim(v: &[u8]) -> Vec<u8> {
    let end = v.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1);
    v[..end].to_vec()
}

/// Riemann tensor `R[i][a][j][k]` in dimension 4.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureFile {
    pub n: usize,
    #[serde(rename = "R")]
    pub r: Vec<Vec<Vec<Vec<Entry>>>>,
}

impl CurvatureFile {
    pub fn to_tensor(&self) -> Result<CurvatureTensor, InputError> {
        let n = self.n;
        let shape_ok = self.r.len() == n
            && self.r.iter().all(|a| {
                a.len() == n && a.iter().all(|b| b.len() == n && b.iter().all(|c| c.len() == n))
            });
        if !shape_ok {
            return Err(invalid(format!("R must be an {n}x{n}x{n}x{n} array")));
        }
        let flat = self
            .r
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .map(Entry::to_rational)
            .collect::<Result<Vec<_>, _>>()?;
        CurvatureTensor::new(n, flat).map_err(|e| invalid(e.to_string()))
    }
}

/// Flat-space gauge data: either `A_lin[i][a]` or the curvature `F[i][j]` at 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeFile {
    pub n: usize,
    #[serde(rename = "d_W")]
    pub dw: usize,
    #[serde(rename = "A_lin", default, skip_serializing_if = "Option::is_none")]
    pub a_lin: Option<Vec<Vec<MatrixSpec>>>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<MatrixSpec>>>,
}

impl GaugeFile {
    pub fn to_field(&self) -> Result<GaugeField, InputError> {
        let n = self.n;
        let grid = |g: &Vec<Vec<MatrixSpec>>, name: &str| -> Result<Vec<Vec<MatrixW>>, InputError> {
            if g.len() != n || g.iter().any(|row| row.len() != n) {
                return Err(invalid(format!("{name} must be an {n}x{n} array of matrices")));
            }
            g.iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, m)| to_matrix(m, self.dw, &format!("{name}[{}][{}]", i + 1, j + 1)))
                        .collect()
                })
                .collect()
        };
        match (&self.a_lin, &self.f) {
            (Some(a), None) => GaugeField::new(n, grid(a, "A_lin")?).map_err(|e| invalid(e.to_string())),
            (None, Some(f)) => GaugeField::from_curvature(&grid(f, "F")?).map_err(|e| invalid(e.to_string())),
            _ => Err(invalid("give exactly one of \"A_lin\" and \"F\"")),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| InputError::Io { path: shown.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| InputError::Json { path: shown, source })
}
