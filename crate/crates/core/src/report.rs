//! Rendering of results with a fixed number of significant digits, so that
//! output is stable across platforms and can be compared byte for byte.

use serde::Serialize;
use serde_json::Value;

use crate::cantor::{CantorSpace, Cell};
use crate::error::Result;
use crate::gauge::{similarity_residual, solve_similarity_dimension};
use crate::metric::{validate_metric, validate_ultrametric, DistanceMatrix, Violation};

/// Significant digits kept in rendered output.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to `digits` significant digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let text = format!("{:.*e}", digits.saturating_sub(1), x);
    text.parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_significant(x, SIGNIFICANT_DIGITS)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// `value` as a JSON tree with every float rounded to
/// [`SIGNIFICANT_DIGITS`] significant digits.
pub fn to_rounded_value<T: Serialize + ?Sized>(value: &T) -> Result<Value> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    Ok(v)
}

/// Compact JSON with rounded floats.
pub fn render_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(&to_rounded_value(value)?)?)
}

/// Outcome of checking a matrix against the metric or ultrametric axioms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub valid: bool,
    pub ultrametric: bool,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    /// Metric axioms, plus the strong triangle inequality if `ultrametric`.
    pub fn run(matrix: &DistanceMatrix, ultrametric: bool, tol: f64) -> Self {
        let report = if ultrametric { validate_ultrametric(matrix, tol) } else { validate_metric(matrix, tol) };
        CheckReport { valid: report.is_valid(), ultrametric, violations: report.violations }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionReport {
    pub n: u64,
    pub r: f64,
    pub alpha: f64,
    pub residual: f64,
}

impl DimensionReport {
    pub fn run(n: u64, r: f64) -> Result<Self> {
        let alpha = solve_similarity_dimension(n, r)?;
        Ok(DimensionReport { n, r, alpha, residual: similarity_residual(n, r, alpha) })
    }
}

/// One cell with its diameter and its measure, exactly and as a float.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellRow {
    pub cell: Cell,
    pub depth: usize,
    pub diameter: f64,
    pub measure: String,
    pub measure_value: f64,
}

/// Every cell of depth `l`, in lexicographic order.
pub fn cell_rows(space: &CantorSpace, l: usize) -> Result<Vec<CellRow>> {
    use num_traits::ToPrimitive;
    Ok(space
        .children(&Cell::root(), l)?
        .into_iter()
        .map(|c| {
            let m = space.cell_measure(&c);
            CellRow {
                depth: c.depth(),
                diameter: space.cell_diameter(&c),
                measure: m.to_string(),
                measure_value: m.to_f64().unwrap_or(0.0),
                cell: c,
            }
        })
        .collect())
}
