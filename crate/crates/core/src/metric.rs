//! Finite metric spaces: axiom validation, diameters, balls, r-neighborhoods
//! and distance to a set.
//!
//! A [`DistanceMatrix`] is only known to be square. A [`FiniteMetricSpace`]
//! has passed [`validate_metric`] and is what every solver computes over.
//! Subsets are [`PointSet`] bitsets over point indices.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Default relative tolerance for the axiom checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `lhs > rhs` beyond a relative tolerance.
pub(crate) fn exceeds(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs - rhs > tol * lhs.abs().max(rhs.abs())
}

/// A subset of the points of a finite space, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    universe: usize,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        PointSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.insert(i);
        }
        set
    }

    /// Builds a set from indices. Fails if an index is outside the universe.
    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(universe);
        for i in indices {
            if i >= universe {
                return domain(format!("point {i} outside a space of {universe} points"));
            }
            set.insert(i);
        }
        Ok(set)
    }

    pub fn singleton(universe: usize, i: usize) -> Result<Self> {
        Self::from_indices(universe, [i])
    }

    /// Number of points in the ambient space.
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "point {i} outside universe {}", self.universe);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter().chain(std::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a & b)
    }

    fn zip_with(&self, other: &PointSet, op: impl Fn(u64, u64) -> u64) -> PointSet {
        assert_eq!(self.universe, other.universe, "point sets from different spaces");
        PointSet {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect(),
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// A square matrix of floats, not yet known to be a metric.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(DistanceMatrix { n, entries })
    }

    /// Builds the matrix by evaluating `d` on every ordered pair.
    pub fn from_fn(n: usize, mut d: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(d(i, j));
            }
        }
        DistanceMatrix { n, entries }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DistanceMatrix {
        DistanceMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&d| f(d)).collect(),
        }
    }

    /// Distinct off-diagonal values, ascending.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut values: Vec<f64> = (0..self.n)
            .flat_map(|i| (0..self.n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        values
    }
}

/// One failed axiom, with the points that witness it.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    /// Entry is negative or not a number.
    Nonnegativity { i: usize, j: usize, value: f64 },
    /// `d(i, i) != 0`.
    ZeroDiagonal { i: usize, value: f64 },
    /// `d(i, j) = 0` for distinct points.
    Separation { i: usize, j: usize },
    Symmetry { i: usize, j: usize, forward: f64, backward: f64 },
    /// `d(x, z) > d(x, via) + d(via, z)`.
    Triangle { x: usize, z: usize, via: usize, direct: f64, bound: f64 },
    /// `d(x, z) > max(d(x, via), d(via, z))`.
    Ultrametric { x: usize, z: usize, via: usize, direct: f64, bound: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Nonnegativity { i, j, value } => write!(f, "d({i},{j}) = {value} is not a nonnegative number"),
            Violation::ZeroDiagonal { i, value } => write!(f, "d({i},{i}) = {value}, expected 0"),
            Violation::Separation { i, j } => write!(f, "d({i},{j}) = 0 for distinct points"),
            Violation::Symmetry { i, j, forward, backward } => {
                write!(f, "d({i},{j}) = {forward} but d({j},{i}) = {backward}")
            }
            Violation::Triangle { x, z, via, direct, bound } => {
                write!(f, "triangle ({x},{z},{via}): d({x},{z}) = {direct} > d({x},{via}) + d({via},{z}) = {bound}")
            }
            Violation::Ultrametric { x, z, via, direct, bound } => {
                write!(f, "ultrametric ({x},{z},{via}): d({x},{z}) = {direct} > max(d({x},{via}), d({via},{z})) = {bound}")
            }
        }
    }
}

/// All violations found by a validation pass. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks nonnegativity, identity of indiscernibles, symmetry and the
/// triangle inequality, reporting every violation.
///
/// Triangle triples are reported once per unordered pair `x < z`.
pub fn validate_metric(m: &DistanceMatrix, tol: f64) -> ValidationReport {
    let n = m.len();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if !(v >= 0.0) || v.is_infinite() {
                violations.push(Violation::Nonnegativity { i, j, value: v });
            } else if i == j && v != 0.0 {
                violations.push(Violation::ZeroDiagonal { i, value: v });
            } else if i < j && v == 0.0 {
                violations.push(Violation::Separation { i, j });
            }
            if i < j {
                let w = m.get(j, i);
                if exceeds(v, w, tol) || exceeds(w, v, tol) {
                    violations.push(Violation::Symmetry { i, j, forward: v, backward: w });
                }
            }
        }
    }
    for x in 0..n {
        for z in x + 1..n {
            let direct = m.get(x, z);
            for via in (0..n).filter(|&y| y != x && y != z) {
                let bound = m.get(x, via) + m.get(via, z);
                if exceeds(direct, bound, tol) {
                    violations.push(Violation::Triangle { x, z, via, direct, bound });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// Metric violations plus every triple breaking `d(x,z) <= max(d(x,y), d(y,z))`.
pub fn validate_ultrametric(m: &DistanceMatrix, tol: f64) -> ValidationReport {
    let mut report = validate_metric(m, tol);
    let n = m.len();
    for x in 0..n {
        for z in x + 1..n {
            let direct = m.get(x, z);
            for via in (0..n).filter(|&y| y != x && y != z) {
                let bound = m.get(x, via).max(m.get(via, z));
                if exceeds(direct, bound, tol) {
                    report.violations.push(Violation::Ultrametric { x, z, via, direct, bound });
                }
            }
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallKind {
    Open,
    Closed,
}

/// Center, radius and kind of a ball `B(p, r)` or `B̄(p, r)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallSpec {
    center: usize,
    radius: f64,
    kind: BallKind,
}

impl BallSpec {
    pub fn new(center: usize, radius: f64, kind: BallKind) -> Result<Self> {
        if !(radius > 0.0) {
            return domain(format!("ball radius must be positive, got {radius}"));
        }
        Ok(BallSpec { center, radius, kind })
    }

    pub fn open(center: usize, radius: f64) -> Result<Self> {
        Self::new(center, radius, BallKind::Open)
    }

    pub fn closed(center: usize, radius: f64) -> Result<Self> {
        Self::new(center, radius, BallKind::Closed)
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn kind(&self) -> BallKind {
        self.kind
    }
}

/// On-disk form: `{"labels": [...], "dist": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
}

impl SpaceFile {
    /// Checks squareness and the label count; axioms are left to the caller.
    pub fn into_parts(self) -> Result<(Vec<String>, DistanceMatrix)> {
        let matrix = DistanceMatrix::from_rows(self.dist)?;
        if self.labels.len() != matrix.len() {
            return Err(Error::Shape(format!(
                "{} labels for a {}x{} matrix",
                self.labels.len(),
                matrix.len(),
                matrix.len()
            )));
        }
        Ok((self.labels, matrix))
    }
}

/// A labeled finite set with a validated metric.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    matrix: DistanceMatrix,
}

impl FiniteMetricSpace {
    /// Validates the metric axioms at [`DEFAULT_TOL`].
    pub fn new(labels: Vec<String>, matrix: DistanceMatrix) -> Result<Self> {
        if labels.len() != matrix.len() {
            return Err(Error::Shape(format!("{} labels for {} points", labels.len(), matrix.len())));
        }
        let report = validate_metric(&matrix, DEFAULT_TOL);
        if !report.is_valid() {
            return Err(Error::InvalidMetric(report));
        }
        Ok(FiniteMetricSpace { labels, matrix })
    }

    /// Points labeled `0, 1, ...`.
    pub fn from_matrix(matrix: DistanceMatrix) -> Result<Self> {
        let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
        Self::new(labels, matrix)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_matrix(DistanceMatrix::from_rows(rows)?)
    }

    /// Euclidean distances between coordinate vectors.
    pub fn euclidean(points: &[Vec<f64>]) -> Result<Self> {
        let matrix = DistanceMatrix::from_fn(points.len(), |i, j| {
            points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        });
        Self::from_matrix(matrix)
    }

    /// Points on the real line with `|x - y|`.
    pub fn on_line(coords: &[f64]) -> Result<Self> {
        Self::from_matrix(DistanceMatrix::from_fn(coords.len(), |i, j| (coords[i] - coords[j]).abs()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(text)?;
        let (labels, matrix) = file.into_parts()?;
        Self::new(labels, matrix)
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            labels: self.labels.clone(),
            dist: self.matrix.rows(),
        }
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        &self.matrix
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn subset(&self, indices: impl IntoIterator<Item = usize>) -> Result<PointSet> {
        PointSet::from_indices(self.len(), indices)
    }

    fn check_set(&self, set: &PointSet) -> Result<()> {
        if set.universe() != self.len() {
            return domain(format!(
                "subset of a {}-point space used with a {}-point space",
                set.universe(),
                self.len()
            ));
        }
        Ok(())
    }

    /// Largest pairwise distance in `set`; 0 for empty sets and singletons.
    pub fn diameter(&self, set: &PointSet) -> f64 {
        let points: Vec<usize> = set.iter().collect();
        let mut diam = 0.0f64;
        for (k, &i) in points.iter().enumerate() {
            for &j in &points[k + 1..] {
                diam = diam.max(self.d(i, j));
            }
        }
        diam
    }

    /// Smallest positive pairwise distance in `set`, if it has two points.
    pub fn min_separation(&self, set: &PointSet) -> Option<f64> {
        let points: Vec<usize> = set.iter().collect();
        let mut best: Option<f64> = None;
        for (k, &i) in points.iter().enumerate() {
            for &j in &points[k + 1..] {
                let d = self.d(i, j);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }

    /// Smallest distance between a point of `a` and a point of `b`.
    pub fn cross_distance(&self, a: &PointSet, b: &PointSet) -> Option<f64> {
        a.iter()
            .flat_map(|i| b.iter().map(move |j| (i, j)))
            .map(|(i, j)| self.d(i, j))
            .min_by(f64::total_cmp)
    }

    pub fn ball(&self, spec: &BallSpec) -> Result<PointSet> {
        let p = spec.center;
        if p >= self.len() {
            return domain(format!("ball center {p} outside a {}-point space", self.len()));
        }
        let inside = |d: f64| match spec.kind {
            BallKind::Open => d < spec.radius,
            BallKind::Closed => d <= spec.radius,
        };
        PointSet::from_indices(self.len(), (0..self.len()).filter(|&x| inside(self.d(x, p))))
    }

    /// `A(r)`: points within distance `< r` of some point of `a`.
    pub fn neighborhood(&self, a: &PointSet, r: f64) -> Result<PointSet> {
        self.check_set(a)?;
        if !(r > 0.0) {
            return domain(format!("neighborhood radius must be positive, got {r}"));
        }
        PointSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| a.iter().any(|y| self.d(x, y) < r)),
        )
    }

    /// `dist(x, A) = min_{y in A} d(x, y)`.
    pub fn dist_to_set(&self, x: usize, a: &PointSet) -> Result<f64> {
        self.check_set(a)?;
        if x >= self.len() {
            return domain(format!("point {x} outside a {}-point space", self.len()));
        }
        a.iter()
            .map(|y| self.d(x, y))
            .min_by(f64::total_cmp)
            .ok_or_else(|| Error::Domain("distance to the empty set".into()))
    }

    /// The subspace spanned by `set`, with the induced metric.
    pub fn restrict(&self, set: &PointSet) -> FiniteMetricSpace {
        let idx: Vec<usize> = set.iter().collect();
        FiniteMetricSpace {
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            matrix: DistanceMatrix::from_fn(idx.len(), |a, b| self.d(idx[a], idx[b])),
        }
    }
}
