//! Report structures shared by the human and JSON renderings.

use logres::algebra::PiScalar;
use serde::Serialize;

/// An exact value with its floating-point approximation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Value {
    pub exact: String,
    pub approx_re: f64,
    pub approx_im: f64,
}

impl Value {
    pub fn new(v: &PiScalar) -> Value {
        let (re, im) = v.to_f64();
        Value {
            exact: v.to_string(),
            approx_re: re,
            approx_im: im,
        }
    }

    pub fn approx(&self) -> String {
        if self.approx_im == 0.0 {
            format!("~ {:.12}", self.approx_re)
        } else {
            format!("~ {:.12} {:+.12} i", self.approx_re, self.approx_im)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RouteRow {
    pub method: String,
    pub values: Vec<(String, Value)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub n: usize,
    pub routes: Vec<RouteRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparator: Option<Value>,
    pub routes_agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn render(&self) -> String {
        let mut out = format!("{} (n = {})\n", self.command, self.n);
        for row in &self.routes {
            out.push_str(&format!("  [{}]\n", row.method));
            for (label, v) in &row.values {
                out.push_str(&format!("    {:<14} = {:<36} {}\n", label, v.exact, v.approx()));
            }
        }
        if let Some(c) = &self.comparator {
            out.push_str(&format!("  {:<16} = {:<36} {}\n", "comparator", c.exact, c.approx()));
        }
        out.push_str(&format!(
            "  routes: {}\n",
            if self.routes_agree { "agree" } else { "DISAGREE" }
        ));
        if let Some(ok) = self.comparison {
            out.push_str(&format!("  sres_log == comparator: {}\n", if ok { "PASS" } else { "FAIL" }));
        }
        for note in &self.notes {
            out.push_str(&format!("  note: {note}\n"));
        }
        out
    }
}
