//! Request handling shared by the `pcmeff` command line tool and its HTTP
//! service. Both front ends go through [`analyze`] and [`render_report`], so
//! the report JSON they emit for the same input is byte for byte the same.

pub mod server;

use std::str::FromStr;

use pcm_efficiency::pcm::{parse_entry, parse_matrix_with, MatrixFormat};
use pcm_efficiency::{
    geometric_mean_vector, principal_eigenvector, test_efficiency_with, test_weak_efficiency_with,
    CertificateRow, DominanceRelation, Error, Pcm, Report, Tol, Verdict, WeakVerdict, Weights,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Largest matrix the service accepts.
pub const MAX_N: usize = 50;
pub const MAX_BODY_BYTES: usize = 64 * 1024;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Eigenvector,
    GeometricMean,
    Custom,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "eigenvector" => Ok(Method::Eigenvector),
            "geometric_mean" | "geometric-mean" => Ok(Method::GeometricMean),
            "custom" => Ok(Method::Custom),
            other => Err(format!(
                "unknown method `{other}` (expected eigenvector, geometric_mean or custom)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Test {
    #[default]
    Efficiency,
    WeakEfficiency,
}

/// A matrix as CSV text, as a list of rows, or as `{"n", "entries"}`.
/// Entries are numbers or strings such as `"1/7"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MatrixPayload {
    Csv(String),
    Rows(Vec<Vec<Value>>),
    Sized { n: usize, entries: Vec<Vec<Value>> },
}

/// Tolerance overrides; unset fields keep the defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub test: Test,
    pub reciprocity: Option<f64>,
    pub arc_equality: Option<f64>,
    pub optimum_cut: Option<f64>,
    pub lp_feasibility: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisRequest {
    pub matrix: MatrixPayload,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub custom_weights: Option<Vec<Value>>,
    #[serde(default)]
    pub options: Options,
}

impl AnalysisRequest {
    pub fn from_json(bytes: &[u8]) -> Result<Self, ApiError> {
        serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request("invalid_request", e.to_string()))
    }
}

/// Failure with an HTTP status and a machine-readable body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl ApiError {
    pub fn bad_request(error: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status: 400,
            error,
            message: message.into(),
            details: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("error serializes") + "\n"
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (status, error, details) = match &e {
            Error::Parse(p) => (400, "parse_error", serde_json::to_value(p).ok()),
            Error::Validation(v) => (400, "validation_error", serde_json::to_value(v).ok()),
            Error::Precondition(_) => (400, "precondition", None),
            Error::VerdictConflict {
                test,
                lp_optimum,
                graph_says,
            } => (
                422,
                "verdict_conflict",
                Some(json!({
                    "test": test,
                    "lp_optimum": lp_optimum,
                    "lp_verdict": if *lp_optimum < 0.0 { "inefficient" } else { "efficient" },
                    "graph_verdict": graph_says,
                })),
            ),
            Error::Convergence { .. } | Error::Numerical(_) => (500, "numerical_error", None),
            Error::ConsistentInput | Error::EqualityWitness { .. } => (500, "internal_error", None),
        };
        ApiError {
            status,
            error,
            message,
            details,
        }
    }
}

/// Validated matrix, chosen weights and effective tolerances.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub matrix: Pcm,
    pub weights: Weights,
    /// Perron eigenvalue, for the eigenvector method.
    pub lambda: Option<f64>,
    pub tolerances: Tol,
    pub test: Test,
}

fn tolerances(options: &Options) -> Result<Tol, ApiError> {
    let mut tol = Tol::default();
    let fields = [
        ("reciprocity", options.reciprocity, &mut tol.reciprocity),
        ("arc_equality", options.arc_equality, &mut tol.arc_equality),
        ("optimum_cut", options.optimum_cut, &mut tol.optimum_cut),
        ("lp_feasibility", options.lp_feasibility, &mut tol.lp_feasibility),
    ];
    for (name, value, slot) in fields {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(ApiError::bad_request(
                    "invalid_request",
                    format!("option {name} must lie in (0, 1), got {v}"),
                ));
            }
            *slot = v;
        }
    }
    Ok(tol)
}

fn parse_payload(payload: &MatrixPayload, reciprocity: f64) -> Result<Pcm, ApiError> {
    let m = match payload {
        MatrixPayload::Csv(text) => parse_matrix_with(text, MatrixFormat::Csv, reciprocity),
        MatrixPayload::Rows(rows) => {
            let text = json!({ "n": rows.len(), "entries": rows }).to_string();
            parse_matrix_with(&text, MatrixFormat::Json, reciprocity)
        }
        MatrixPayload::Sized { n, entries } => {
            let text = json!({ "n": n, "entries": entries }).to_string();
            parse_matrix_with(&text, MatrixFormat::Json, reciprocity)
        }
    };
    Ok(m?)
}

fn payload_size(payload: &MatrixPayload) -> usize {
    match payload {
        MatrixPayload::Csv(text) => text.lines().filter(|l| !l.trim().is_empty()).count(),
        MatrixPayload::Rows(rows) => rows.len(),
        MatrixPayload::Sized { n, entries } => (*n).max(entries.len()),
    }
}

/// Weights for `m` by the requested method.
pub fn derive_weights(
    m: &Pcm,
    method: Method,
    custom: Option<Weights>,
) -> Result<(Weights, Option<f64>), ApiError> {
    match method {
        Method::Eigenvector => {
            let (w, lambda) = principal_eigenvector(m)?;
            Ok((w, Some(lambda)))
        }
        Method::GeometricMean => Ok((geometric_mean_vector(m), None)),
        Method::Custom => {
            let w = custom.ok_or_else(|| {
                ApiError::bad_request("invalid_request", "method custom needs custom_weights")
            })?;
            m.check_weights(&w)?;
            Ok((w, None))
        }
    }
}

fn custom_weights(values: &[Value]) -> Result<Weights, ApiError> {
    let parsed = values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let cell = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                other => other.to_string(),
            };
            parse_entry::<f64>(&cell)
                .map_err(|msg| ApiError::bad_request("invalid_request", format!("custom_weights[{k}]: {msg}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Weights::new(parsed)?)
}

/// Validates a request. `max_n` caps the matrix size before any parsing work.
pub fn prepare(req: &AnalysisRequest, max_n: Option<usize>) -> Result<Prepared, ApiError> {
    if let Some(cap) = max_n {
        let n = payload_size(&req.matrix);
        if n > cap {
            return Err(ApiError {
                status: 400,
                error: "too_large",
                message: format!("matrix size {n} exceeds the limit of {cap}"),
                details: Some(json!({ "n": n, "max_n": cap })),
            });
        }
    }
    let tol = tolerances(&req.options)?;
    let matrix = parse_payload(&req.matrix, tol.reciprocity)?;
    let custom = match &req.custom_weights {
        Some(values) => Some(custom_weights(values)?),
        None => None,
    };
    let (weights, lambda) = derive_weights(&matrix, req.method, custom)?;
    Ok(Prepared {
        matrix,
        weights,
        lambda,
        tolerances: tol,
        test: req.options.test,
    })
}

pub fn run(p: &Prepared) -> Result<Report, ApiError> {
    let report = match p.test {
        Test::Efficiency => test_efficiency_with(&p.matrix, &p.weights, &p.tolerances)?,
        Test::WeakEfficiency => test_weak_efficiency_with(&p.matrix, &p.weights, &p.tolerances)?,
    };
    Ok(report)
}

pub fn analyze(req: &AnalysisRequest, max_n: Option<usize>) -> Result<Report, ApiError> {
    run(&prepare(req, max_n)?)
}

/// The report exactly as both front ends print it.
pub fn render_report(report: &Report) -> String {
    report.to_json() + "\n"
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightsResponse {
    pub method: Method,
    pub n: usize,
    /// Sum-one normalized.
    pub weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
}

pub fn weights(req: &AnalysisRequest, max_n: Option<usize>) -> Result<WeightsResponse, ApiError> {
    let p = prepare(req, max_n)?;
    Ok(WeightsResponse {
        method: req.method,
        n: p.matrix.n(),
        weights: p.weights.sum_one().into_values(),
        lambda_max: p.lambda,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DominateResponse {
    pub verdict: Verdict,
    pub weak_verdict: WeakVerdict,
    /// Efficient dominating vector, sum-one normalized; absent when the input
    /// is efficient.
    pub dominator: Option<Vec<f64>>,
    pub dominator_aligned: Option<Vec<f64>>,
    pub dominator_source: Option<String>,
    pub relation: Option<DominanceRelation>,
    pub certificate: Vec<CertificateRow<f64>>,
}

impl From<Report> for DominateResponse {
    fn from(r: Report) -> Self {
        DominateResponse {
            verdict: r.verdict,
            weak_verdict: r.weak_verdict,
            dominator: r.dominator.map(Weights::into_values),
            dominator_aligned: r.dominator_aligned.map(Weights::into_values),
            dominator_source: r.provenance.dominator_source,
            relation: r.dominance,
            certificate: r.dominance_certificate,
        }
    }
}

pub fn dominate(req: &AnalysisRequest, max_n: Option<usize>) -> Result<DominateResponse, ApiError> {
    Ok(analyze(req, max_n)?.into())
}

pub fn to_json_line<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("response serializes") + "\n"
}

/// Fixed-point rendering with `precision` digits after the point.
pub fn fmt_num(x: f64, precision: usize) -> String {
    format!("{x:.precision$}")
}

pub fn fmt_vec(xs: &[f64], precision: usize) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| fmt_num(x, precision)).collect();
    format!("[{}]", parts.join(", "))
}

/// One-line verdict for the terminal, and whether it reports a dominated input.
pub fn summary_line(report: &Report, test: Test, precision: usize) -> (String, bool) {
    let dominator = report
        .dominator_aligned
        .as_ref()
        .map(|d| fmt_vec(d.values(), precision))
        .unwrap_or_default();
    match test {
        Test::Efficiency if report.is_efficient() => ("EFFICIENT".into(), false),
        Test::Efficiency => (
            format!(
                "INEFFICIENT, lp_optimum={}, dominator={dominator}",
                fmt_num(report.lp_optimum, precision)
            ),
            true,
        ),
        Test::WeakEfficiency if !report.is_strongly_inefficient() => ("WEAKLY_EFFICIENT".into(), false),
        Test::WeakEfficiency => (
            format!(
                "STRONGLY_INEFFICIENT, weak_lp_optimum={}, dominator={dominator}",
                fmt_num(report.weak_lp_optimum.unwrap_or(f64::NAN), precision)
            ),
            true,
        ),
    }
}
