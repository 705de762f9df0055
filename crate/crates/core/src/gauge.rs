//! Gauge functions `h(t)` that price a covering set by its diameter, and
//! transform functions `φ(t)` applied to distances.
//!
//! Three gauge forms are supported: the power gauge `t^α`, a table of knots
//! interpolated linearly from `(0, 0)`, and a schedule that attaches one value
//! to each radius of a Cantor space (stored as a table). Any gauge can be
//! rescaled as `h(t / C)`, which is how Lipschitz images are priced.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerance for the sampled subadditivity check.
pub const SUBADDITIVE_TOL: f64 = 1e-12;

/// A monotone gauge `h` with `h(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gauge {
    form: Form,
}

#[derive(Clone, Debug, PartialEq)]
enum Form {
    Power { alpha: f64 },
    /// Knots with strictly increasing `t`, first knot `(0, 0)`. Constant past
    /// the last knot.
    Table { knots: Vec<(f64, f64)> },
    /// `h(t / factor)`.
    Rescaled { base: Box<Gauge>, factor: f64 },
}

impl Gauge {
    /// `h(t) = t^alpha`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return domain(format!("power gauge exponent must be positive, got {alpha}"));
        }
        Ok(Gauge { form: Form::Power { alpha } })
    }

    /// Piecewise-linear gauge through `knots`, anchored at `(0, 0)`.
    ///
    /// Knots must have strictly increasing, nonnegative `t`. Monotonicity and
    /// positivity of the values are not enforced here; see [`check_gauge`].
    pub fn table(knots: &[(f64, f64)]) -> Result<Self> {
        let mut all = Vec::with_capacity(knots.len() + 1);
        match knots.first() {
            Some(&(t, h)) if t == 0.0 => {
                if h != 0.0 {
                    return domain(format!("table gauge must vanish at 0, got h(0) = {h}"));
                }
            }
            _ => all.push((0.0, 0.0)),
        }
        all.extend_from_slice(knots);
        if all.len() < 2 {
            return domain("table gauge needs a knot with t > 0");
        }
        for w in all.windows(2) {
            let ((t0, _), (t1, h1)) = (w[0], w[1]);
            if !(t1 > t0) || !t1.is_finite() || !h1.is_finite() {
                return domain(format!("table knots must have strictly increasing finite t (at t = {t1})"));
            }
        }
        Ok(Gauge { form: Form::Table { knots: all } })
    }

    /// Gauge taking `values[l]` at `radii[l]`, linear in between and linear
    /// down to `(0, 0)` below the last radius. Radii must strictly decrease.
    pub fn schedule(radii: &[f64], values: &[f64]) -> Result<Self> {
        if radii.len() != values.len() || radii.is_empty() {
            return domain(format!(
                "schedule needs one value per radius ({} radii, {} values)",
                radii.len(),
                values.len()
            ));
        }
        let mut knots: Vec<(f64, f64)> = radii.iter().copied().zip(values.iter().copied()).collect();
        knots.reverse();
        Self::table(&knots)
    }

    /// `h(t)` for `t >= 0`; `t = +∞` gives `sup h`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return domain(format!("gauge evaluated at {t}"));
        }
        Ok(self.at(t))
    }

    /// `eval` without the domain check, for diameters known to be nonnegative.
    pub(crate) fn at(&self, t: f64) -> f64 {
        match &self.form {
            Form::Power { alpha } => t.powf(*alpha),
            Form::Table { knots } => {
                if t.is_infinite() {
                    return knots.iter().map(|k| k.1).fold(f64::NEG_INFINITY, f64::max);
                }
                let last = knots[knots.len() - 1];
                if t >= last.0 {
                    return last.1;
                }
                // first knot with knot.t > t; at least index 1 since knots[0].t = 0 <= t
                let hi = knots.partition_point(|k| k.0 <= t);
                let (t0, h0) = knots[hi - 1];
                let (t1, h1) = knots[hi];
                h0 + (h1 - h0) * (t - t0) / (t1 - t0)
            }
            Form::Rescaled { base, factor } => base.at(t / factor),
        }
    }

    /// `(coef, alpha, limit)` such that `h(t) = coef * t^alpha` for all
    /// `0 <= t <= limit`.
    pub fn power_near_zero(&self) -> (f64, f64, f64) {
        match &self.form {
            Form::Power { alpha } => (1.0, *alpha, f64::INFINITY),
            Form::Table { knots } => {
                let (t1, h1) = knots[1];
                (h1 / t1, 1.0, t1)
            }
            Form::Rescaled { base, factor } => {
                let (c, alpha, limit) = base.power_near_zero();
                (c * factor.powf(-alpha), alpha, limit * factor)
            }
        }
    }

    /// Exponent if this is a (possibly rescaled) power gauge.
    pub fn power_exponent(&self) -> Option<f64> {
        match &self.form {
            Form::Power { alpha } => Some(*alpha),
            Form::Table { .. } => None,
            Form::Rescaled { base, .. } => base.power_exponent(),
        }
    }
}

/// `h̃(t) = h(t / C)`, the gauge that prices images under a `C`-Lipschitz map.
pub fn rescaled_gauge(h: &Gauge, c: f64) -> Result<Gauge> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("rescaling constant must be positive, got {c}"));
    }
    let form = match &h.form {
        Form::Rescaled { base, factor } => Form::Rescaled {
            base: base.clone(),
            factor: factor * c,
        },
        _ => Form::Rescaled {
            base: Box::new(h.clone()),
            factor: c,
        },
    };
    Ok(Gauge { form })
}

/// `h(t)`, rejecting negative `t`.
pub fn eval_gauge(h: &Gauge, t: f64) -> Result<f64> {
    h.eval(t)
}

/// A gauge property that fails at some grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum GaugeIssue {
    NotAnchored { value: f64 },
    NonPositive { t: f64, value: f64 },
    Decreasing { t_prev: f64, t: f64, h_prev: f64, h: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GaugeReport {
    pub issues: Vec<GaugeIssue>,
}

impl GaugeReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Scans `grid` for `h(0) != 0`, `h(t) <= 0` at `t > 0`, and decreases.
pub fn check_gauge(h: &Gauge, grid: &[f64]) -> GaugeReport {
    let mut grid: Vec<f64> = grid.iter().copied().filter(|t| *t >= 0.0).collect();
    grid.sort_by(f64::total_cmp);
    let mut issues = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &t in &grid {
        let value = h.at(t);
        if t == 0.0 && value != 0.0 {
            issues.push(GaugeIssue::NotAnchored { value });
        }
        if t > 0.0 && !(value > 0.0) {
            issues.push(GaugeIssue::NonPositive { t, value });
        }
        if let Some((t_prev, h_prev)) = prev {
            if value < h_prev {
                issues.push(GaugeIssue::Decreasing { t_prev, t, h_prev, h: value });
            }
        }
        prev = Some((t, value));
    }
    GaugeReport { issues }
}

/// JSON form of a gauge: `{"form":"power","alpha":..}`,
/// `{"form":"table","knots":[[t,h],..]}` or `{"form":"schedule","values":[..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase", deny_unknown_fields)]
pub enum GaugeSpec {
    Power { alpha: f64 },
    Table { knots: Vec<[f64; 2]> },
    Schedule { values: Vec<f64> },
}

impl GaugeSpec {
    /// Builds the gauge. A schedule takes its radii from `radii`, which must
    /// be at least as long as the value list.
    pub fn build(&self, radii: Option<&[f64]>) -> Result<Gauge> {
        match self {
            GaugeSpec::Power { alpha } => Gauge::power(*alpha),
            GaugeSpec::Table { knots } => {
                Gauge::table(&knots.iter().map(|k| (k[0], k[1])).collect::<Vec<_>>())
            }
            GaugeSpec::Schedule { values } => match radii {
                Some(radii) if radii.len() >= values.len() => Gauge::schedule(&radii[..values.len()], values),
                Some(radii) => domain(format!(
                    "schedule has {} values but only {} radii are available",
                    values.len(),
                    radii.len()
                )),
                None => Err(Error::Unsupported("schedule gauges need a Cantor space for their radii".into())),
            },
        }
    }
}

/// JSON form of a transform: `{"form":"power","a":..}` or a knot table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase", deny_unknown_fields)]
pub enum TransformForm {
    Power { a: f64 },
    Table { knots: Vec<[f64; 2]> },
}

/// A transform `φ` for distances, with a record of whether subadditivity has
/// been checked.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformSpec {
    form: TransformForm,
    phi: Gauge,
    subadditivity_checked: bool,
}

impl TransformSpec {
    pub fn new(form: TransformForm) -> Result<Self> {
        let phi = match &form {
            TransformForm::Power { a } => Gauge::power(*a)?,
            TransformForm::Table { knots } => {
                Gauge::table(&knots.iter().map(|k| (k[0], k[1])).collect::<Vec<_>>())?
            }
        };
        Ok(TransformSpec {
            form,
            phi,
            subadditivity_checked: false,
        })
    }

    /// The snowflake-type transform `t^a`.
    pub fn power(a: f64) -> Result<Self> {
        Self::new(TransformForm::Power { a })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(serde_json::from_str(text)?)
    }

    pub fn form(&self) -> &TransformForm {
        &self.form
    }

    pub fn as_gauge(&self) -> &Gauge {
        &self.phi
    }

    pub fn subadditivity_checked(&self) -> bool {
        self.subadditivity_checked
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.phi.eval(t)
    }

    pub(crate) fn at(&self, t: f64) -> f64 {
        self.phi.at(t)
    }
}

/// Checks `φ(x + y) <= φ(x) + φ(y)` on all pairs from `grid` and records the
/// outcome on `phi`. This is a sampled check, not a proof.
pub fn check_subadditive(phi: &mut TransformSpec, grid: &[f64]) -> bool {
    let ok = grid.iter().filter(|x| **x >= 0.0).all(|&x| {
        grid.iter().filter(|y| **y >= 0.0).all(|&y| {
            let lhs = phi.at(x + y);
            let rhs = phi.at(x) + phi.at(y);
            lhs <= rhs + SUBADDITIVE_TOL * rhs.abs().max(1.0)
        })
    });
    phi.subadditivity_checked = ok;
    ok
}

/// The `α` with `n r^α = 1`, i.e. `log n / log(1/r)`, polished by one Newton
/// step on the residual.
pub fn solve_similarity_dimension(n: u64, r: f64) -> Result<f64> {
    if n < 2 {
        return domain(format!("branching must be at least 2, got {n}"));
    }
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("ratio must lie in (0, 1), got {r}"));
    }
    let nf = n as f64;
    let alpha = nf.ln() / -r.ln();
    // g(α) = n r^α - 1, g'(α) = n r^α ln r
    let scaled = nf * r.powf(alpha);
    let polished = alpha - (scaled - 1.0) / (scaled * r.ln());
    Ok(if similarity_residual(n, r, polished) <= similarity_residual(n, r, alpha) {
        polished
    } else {
        alpha
    })
}

/// `|n r^α - 1|`.
pub fn similarity_residual(n: u64, r: f64, alpha: f64) -> f64 {
    (n as f64 * r.powf(alpha) - 1.0).abs()
}
