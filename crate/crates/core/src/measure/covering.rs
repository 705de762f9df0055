use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cantor::Cell;
use crate::error::{domain, Result};
use crate::gauge::Gauge;
use crate::metric::PointSet;

/// A closed interval `[a, b]` of the real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return domain(format!("interval endpoints must be finite, got [{a}, {b}]"));
        }
        if a > b {
            return domain(format!("interval needs a <= b, got [{a}, {b}]"));
        }
        Ok(Interval { a, b })
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(s)
    }
}

/// One entry of a covering. Cell and interval entries may stand for a block
/// of equal-diameter sets so that fine coverings stay small.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Member {
    /// A subset of a finite space.
    Points(PointSet),
    /// Every depth-`depth` cell inside `cell`.
    Cells { cell: Cell, depth: usize },
    /// `span` cut into `pieces` closed intervals of equal length.
    Intervals { span: Interval, pieces: u64 },
}

/// A member with the number of sets it stands for and their common diameter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Piece {
    #[serde(flatten)]
    pub member: Member,
    pub count: u128,
    pub diameter: f64,
}

impl Piece {
    pub fn single(member: Member, diameter: f64) -> Self {
        Piece { member, count: 1, diameter }
    }

    /// Cost under `h` of the sets this piece stands for.
    pub fn cost(&self, h: &Gauge) -> f64 {
        self.count as f64 * h.at(self.diameter)
    }
}

/// A finite family of sets with cached diameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Covering {
    pub pieces: Vec<Piece>,
}

impl Covering {
    pub fn new(pieces: Vec<Piece>) -> Self {
        Covering { pieces }
    }

    /// Number of sets, counting each block by its multiplicity.
    pub fn len(&self) -> u128 {
        self.pieces.iter().map(|p| p.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn max_diameter(&self) -> f64 {
        self.pieces.iter().map(|p| p.diameter).fold(0.0, f64::max)
    }
}

/// `Σ h(diam A)` over the members of `cov`.
pub fn covering_cost(cov: &Covering, h: &Gauge) -> f64 {
    cov.pieces.iter().map(|p| p.cost(h)).sum()
}

/// Which infimum an estimate is for.
#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    /// `μ_h`: all admissible coverings.
    Content,
    /// `H_{h,ε}`: coverings by sets of diameter `< eps`.
    Premeasure { eps: f64 },
    /// `sup_ε H_{h,ε}` over a finite decreasing schedule.
    Measure { schedule: Vec<f64>, values: Vec<f64>, stabilized: bool },
}

/// A content, premeasure or measure value with the covering that attains it.
///
/// `exact` is true when `value` is the true infimum (or supremum, for
/// measures); otherwise `value` is an upper bound realized by `witness`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContentEstimate {
    pub value: f64,
    pub witness: Covering,
    pub exact: bool,
    pub mode: Mode,
}

impl ContentEstimate {
    pub fn eps(&self) -> Option<f64> {
        match &self.mode {
            Mode::Content => None,
            Mode::Premeasure { eps } => Some(*eps),
            Mode::Measure { schedule, .. } => schedule.last().copied(),
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            Mode::Content => "content",
            Mode::Premeasure { .. } => "premeasure",
            Mode::Measure { .. } => "measure",
        }
    }
}

/// Serializes `+∞` as the string `"inf"`; JSON has no infinity.
pub(crate) struct ExtReal(pub f64);

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl Serialize for ContentEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let measure = matches!(self.mode, Mode::Measure { .. });
        let mut st = s.serialize_struct("ContentEstimate", if measure { 7 } else { 5 })?;
        st.serialize_field("value", &ExtReal(self.value))?;
        st.serialize_field("exact", &self.exact)?;
        st.serialize_field("mode", self.mode_name())?;
        st.serialize_field("eps", &self.eps())?;
        if let Mode::Measure { values, stabilized, .. } = &self.mode {
            st.serialize_field("stabilized", stabilized)?;
            let values: Vec<ExtReal> = values.iter().map(|&v| ExtReal(v)).collect();
            st.serialize_field("values", &values)?;
        }
        st.serialize_field("witness", &self.witness)?;
        st.end()
    }
}
