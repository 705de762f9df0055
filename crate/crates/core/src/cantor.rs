//! The sequence space `X = X_1 × X_2 × ...` with `|X_j| = n_j`, its cells
//! (cylinders fixed by a digit prefix) and the ultrametric in which two
//! sequences first differing at digit `l + 1` are `r_l` apart.
//!
//! Digit `j` (1-based) ranges over `0..n_j`. A depth-`l` cell therefore has
//! `n_{l+1}` children, diameter `r_l`, and measure `1 / (n_1 ⋯ n_l)`.
//! Points are finite truncations; missing digits are read as zeros.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gauge::Gauge;
use crate::metric::{DistanceMatrix, FiniteMetricSpace};

/// Most cells any single enumeration will materialize.
pub const MAX_ENUMERATION: u128 = 1 << 22;

/// Relative tolerance for `h(r_l) = n_{l+1} h(r_{l+1})`.
pub const SELF_SIMILAR_TOL: f64 = 1e-9;

/// `n_1, n_2, ...`: explicit values followed by a constant tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingProfile {
    explicit: Vec<u32>,
    tail: u32,
}

impl BranchingProfile {
    pub fn new(explicit: Vec<u32>, tail: u32) -> Result<Self> {
        if let Some(bad) = explicit.iter().chain([&tail]).find(|&&n| n < 2) {
            return domain(format!("every branching number must be at least 2, got {bad}"));
        }
        Ok(BranchingProfile { explicit, tail })
    }

    pub fn uniform(n: u32) -> Result<Self> {
        Self::new(Vec::new(), n)
    }

    /// `n_j` for `j >= 1`.
    pub fn n(&self, j: usize) -> u32 {
        assert!(j >= 1, "branching is indexed from 1");
        self.explicit.get(j - 1).copied().unwrap_or(self.tail)
    }

    pub fn explicit(&self) -> &[u32] {
        &self.explicit
    }

    pub fn tail(&self) -> u32 {
        self.tail
    }
}

/// `r_0 > r_1 > ...`: explicit radii, then geometric with the tail ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusSchedule {
    radii: Vec<f64>,
    tail_ratio: f64,
}

impl RadiusSchedule {
    pub fn new(radii: Vec<f64>, tail_ratio: f64) -> Result<Self> {
        if radii.is_empty() {
            return domain("radius schedule needs r_0");
        }
        if !(radii[0] > 0.0 && radii[0].is_finite()) {
            return domain(format!("r_0 must be positive, got {}", radii[0]));
        }
        if let Some(w) = radii.windows(2).find(|w| !(w[1] < w[0] && w[1] > 0.0)) {
            return domain(format!("radii must be positive and strictly decreasing ({} then {})", w[0], w[1]));
        }
        if !(tail_ratio > 0.0 && tail_ratio < 1.0) {
            return domain(format!("radius tail ratio must lie in (0, 1), got {tail_ratio}"));
        }
        Ok(RadiusSchedule { radii, tail_ratio })
    }

    /// `r_l = r0 * ratio^l`.
    pub fn geometric(r0: f64, ratio: f64) -> Result<Self> {
        Self::new(vec![r0], ratio)
    }

    pub fn r(&self, l: usize) -> f64 {
        match self.radii.get(l) {
            Some(&r) => r,
            None => {
                let last = self.radii.len() - 1;
                self.radii[last] * self.tail_ratio.powi((l - last) as i32)
            }
        }
    }

    pub fn explicit(&self) -> &[f64] {
        &self.radii
    }

    pub fn tail_ratio(&self) -> f64 {
        self.tail_ratio
    }

    /// First level from which `r_{l+1} = ratio * r_l`.
    fn tail_start(&self) -> usize {
        self.radii.len() - 1
    }
}

fn write_digits(f: &mut fmt::Formatter<'_>, digits: &[u32]) -> fmt::Result {
    if digits.is_empty() {
        return f.write_str("root");
    }
    let sep = if digits.iter().all(|&d| d < 10) { "" } else { "." };
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{d}")?;
    }
    Ok(())
}

/// A truncated sequence `x_1 ... x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Point {
    digits: Vec<u32>,
}

impl Point {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    /// Digit `j` (1-based); zero past the truncation.
    pub fn digit(&self, j: usize) -> u32 {
        assert!(j >= 1, "digits are indexed from 1");
        self.digits.get(j - 1).copied().unwrap_or(0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, &self.digits)
    }
}

/// The cell `N_l(x)` of all sequences starting with `prefix`; `l` is the
/// prefix length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Cell {
    prefix: Vec<u32>,
}

impl Cell {
    pub fn root() -> Self {
        Cell { prefix: Vec::new() }
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    /// True if `self ⊆ other`.
    pub fn is_within(&self, other: &Cell) -> bool {
        self.prefix.starts_with(&other.prefix)
    }

    pub fn contains(&self, x: &Point) -> bool {
        (1..=self.depth()).all(|j| x.digit(j) == self.prefix[j - 1])
    }

    /// Smallest cell containing both.
    pub fn join(&self, other: &Cell) -> Cell {
        let l = common_prefix(&self.prefix, &other.prefix);
        Cell {
            prefix: self.prefix[..l].to_vec(),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, &self.prefix)
    }
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// How two cells sit relative to each other. Two cells are always nested,
/// equal or disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellRelation {
    Equal,
    Nested { inner: Cell, outer: Cell },
    Disjoint,
}

pub fn cell_relation(c1: &Cell, c2: &Cell) -> CellRelation {
    if c1 == c2 {
        CellRelation::Equal
    } else if c1.is_within(c2) {
        CellRelation::Nested { inner: c1.clone(), outer: c2.clone() }
    } else if c2.is_within(c1) {
        CellRelation::Nested { inner: c2.clone(), outer: c1.clone() }
    } else {
        CellRelation::Disjoint
    }
}

/// The depth-`l` cell containing `x`.
pub fn cell_of(x: &Point, l: usize) -> Result<Cell> {
    if l > x.depth() {
        return domain(format!("point has {} digits, cannot take a depth-{l} cell", x.depth()));
    }
    Ok(Cell {
        prefix: x.digits[..l].to_vec(),
    })
}

/// On-disk form:
/// `{"branching":[..],"branching_tail":2,"radii":[..],"radius_tail_ratio":0.5}`.
///
/// `branching_tail` defaults to the last explicit branching number and
/// `radius_tail_ratio` to the ratio of the last two radii.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorFile {
    #[serde(default)]
    pub branching: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branching_tail: Option<u32>,
    pub radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_tail_ratio: Option<f64>,
}

/// Minimum and maximum of `n_{l+1} h(r_{l+1}) / h(r_l)` over all levels from
/// some depth on. A ratio below 1 means splitting a cell into its children
/// lowers the covering cost at that level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefinementRatios {
    pub min: f64,
    pub max: f64,
}

impl RefinementRatios {
    /// Splitting never lowers the cost by more than the tolerance.
    pub fn never_refines(&self) -> bool {
        self.min >= 1.0 - SELF_SIMILAR_TOL
    }

    pub fn self_similar(&self) -> bool {
        self.never_refines() && self.max <= 1.0 + SELF_SIMILAR_TOL
    }
}

/// A sequence space with its ultrametric.
#[derive(Clone, Debug, PartialEq)]
pub struct CantorSpace {
    profile: BranchingProfile,
    schedule: RadiusSchedule,
}

impl CantorSpace {
    pub fn new(profile: BranchingProfile, schedule: RadiusSchedule) -> Self {
        CantorSpace { profile, schedule }
    }

    /// Constant branching `n` with `r_l = ratio^l`.
    pub fn uniform(n: u32, ratio: f64) -> Result<Self> {
        Ok(Self::new(BranchingProfile::uniform(n)?, RadiusSchedule::geometric(1.0, ratio)?))
    }

    pub fn from_file(file: CantorFile) -> Result<Self> {
        let tail = match (file.branching_tail, file.branching.last()) {
            (Some(t), _) => t,
            (None, Some(&last)) => last,
            (None, None) => return domain("branching needs either explicit values or branching_tail"),
        };
        let ratio = match (file.radius_tail_ratio, file.radii.as_slice()) {
            (Some(q), _) => q,
            (None, [.., a, b]) => b / a,
            (None, _) => return domain("radius_tail_ratio is required with fewer than two radii"),
        };
        Ok(Self::new(BranchingProfile::new(file.branching, tail)?, RadiusSchedule::new(file.radii, ratio)?))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn to_file(&self) -> CantorFile {
        CantorFile {
            branching: self.profile.explicit.clone(),
            branching_tail: Some(self.profile.tail),
            radii: self.schedule.radii.clone(),
            radius_tail_ratio: Some(self.schedule.tail_ratio),
        }
    }

    pub fn profile(&self) -> &BranchingProfile {
        &self.profile
    }

    pub fn schedule(&self) -> &RadiusSchedule {
        &self.schedule
    }

    /// `n_j`, the number of values digit `j` can take.
    pub fn n(&self, j: usize) -> u32 {
        self.profile.n(j)
    }

    pub fn r(&self, l: usize) -> f64 {
        self.schedule.r(l)
    }

    /// `r_0, ..., r_depth`.
    pub fn radii(&self, depth: usize) -> Vec<f64> {
        (0..=depth).map(|l| self.r(l)).collect()
    }

    fn check_digits(&self, digits: &[u32]) -> Result<()> {
        for (i, &d) in digits.iter().enumerate() {
            let n = self.n(i + 1);
            if d >= n {
                return domain(format!("digit {} is {d} but only {n} values are allowed", i + 1));
            }
        }
        Ok(())
    }

    pub fn point(&self, digits: Vec<u32>) -> Result<Point> {
        self.check_digits(&digits)?;
        Ok(Point { digits })
    }

    pub fn cell(&self, prefix: Vec<u32>) -> Result<Cell> {
        self.check_digits(&prefix)?;
        Ok(Cell { prefix })
    }

    /// `n_{from+1} ⋯ n_to`, the number of depth-`to` cells inside a
    /// depth-`from` cell.
    pub fn count_between(&self, from: usize, to: usize) -> Option<u128> {
        (from + 1..=to).try_fold(1u128, |acc, j| acc.checked_mul(self.n(j) as u128))
    }

    /// Number of cells of depth `l`.
    pub fn cell_count(&self, l: usize) -> Option<u128> {
        self.count_between(0, l)
    }

    /// `0` if `x` and `y` agree on their common digits, otherwise `r_l`
    /// where `l` is the length of their common prefix.
    pub fn distance(&self, x: &Point, y: &Point) -> f64 {
        let common = x.depth().min(y.depth());
        let l = common_prefix(&x.digits[..common], &y.digits[..common]);
        if l == common {
            0.0
        } else {
            self.r(l)
        }
    }

    /// All depth-`p` cells inside `c`, in lexicographic order.
    pub fn children(&self, c: &Cell, p: usize) -> Result<Vec<Cell>> {
        if p < c.depth() {
            return domain(format!("cannot refine a depth-{} cell to depth {p}", c.depth()));
        }
        let count = self
            .count_between(c.depth(), p)
            .filter(|&k| k <= MAX_ENUMERATION)
            .ok_or_else(|| Error::Unsupported(format!("more than {MAX_ENUMERATION} cells at depth {p}")))?;
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = c.prefix.clone();
        digits.resize(p, 0);
        loop {
            out.push(Cell { prefix: digits.clone() });
            // odometer over positions c.depth()..p
            let mut pos = p;
            loop {
                if pos == c.depth() {
                    return Ok(out);
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < self.n(pos + 1) {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    /// `r_l` for a depth-`l` cell.
    pub fn cell_diameter(&self, c: &Cell) -> f64 {
        self.r(c.depth())
    }

    /// `1 / (n_1 ⋯ n_l)` exactly.
    pub fn cell_measure(&self, c: &Cell) -> BigRational {
        let denom = (1..=c.depth()).fold(BigUint::one(), |acc, j| acc * self.n(j));
        BigRational::new(1.into(), denom.into())
    }

    /// `h(r_l) - n_{l+1} h(r_{l+1})` relative to `h(r_l)`, or the level where
    /// it first exceeds the tolerance for `from <= l < to`.
    fn self_similarity_defect(&self, h: &Gauge, from: usize, to: usize) -> Option<Error> {
        (from..to).find_map(|l| {
            let coarse = h.at(self.r(l));
            let refined = self.n(l + 1) as f64 * h.at(self.r(l + 1));
            ((coarse - refined).abs() > SELF_SIMILAR_TOL * coarse.abs()).then_some(Error::NotSelfSimilar {
                level: l,
                coarse,
                refined,
            })
        })
    }

    /// True iff `h(r_l) = n_{l+1} h(r_{l+1})` (relative tolerance
    /// [`SELF_SIMILAR_TOL`]) for every `l < max_depth`.
    pub fn is_self_similar_gauge(&self, h: &Gauge, max_depth: usize) -> bool {
        self.self_similarity_defect(h, 0, max_depth).is_none()
    }

    /// The Hausdorff content (and measure) of `c` under a self-similar gauge:
    /// `h(r_l)` for a depth-`l` cell.
    ///
    /// The identity is verified for the levels `depth(c)..verify_depth`
    /// first; the call fails with [`Error::NotSelfSimilar`] otherwise.
    pub fn exact_cell_content(&self, c: &Cell, h: &Gauge, verify_depth: usize) -> Result<f64> {
        if verify_depth <= c.depth() {
            return Err(Error::DepthTooSmall {
                needed: c.depth() + 1,
                max_depth: verify_depth,
            });
        }
        match self.self_similarity_defect(h, c.depth(), verify_depth) {
            Some(err) => Err(err),
            None => Ok(h.at(self.cell_diameter(c))),
        }
    }

    /// Bounds on `n_{l+1} h(r_{l+1}) / h(r_l)` over every level `l >= from`.
    ///
    /// Levels are scanned one by one until both the branching and the radii
    /// are in their constant tails and `h` is a pure power `c t^α` below the
    /// current radius; from there on the ratio is `n ρ^α` at every level.
    /// Returns `None` if that regime is not reached within 10 000 levels or
    /// `h` vanishes at some radius.
    pub fn refinement_ratios(&self, h: &Gauge, from: usize) -> Option<RefinementRatios> {
        let (_, alpha, limit) = h.power_near_zero();
        let tail_level = self.schedule.tail_start().max(self.profile.explicit.len()).max(from);
        let mut ratios = RefinementRatios { min: f64::INFINITY, max: f64::NEG_INFINITY };
        let mut l = from;
        loop {
            if l >= tail_level && self.r(l) <= limit {
                let tail = self.profile.tail as f64 * self.schedule.tail_ratio.powf(alpha);
                ratios.min = ratios.min.min(tail);
                ratios.max = ratios.max.max(tail);
                return Some(ratios);
            }
            if l > from + 10_000 {
                return None;
            }
            let coarse = h.at(self.r(l));
            if !(coarse > 0.0) {
                return None;
            }
            let ratio = self.n(l + 1) as f64 * h.at(self.r(l + 1)) / coarse;
            ratios.min = ratios.min.min(ratio);
            ratios.max = ratios.max.max(ratio);
            l += 1;
        }
    }

    /// One representative per depth-`depth` cell (the cell prefix itself),
    /// as a finite metric space with the induced ultrametric. Labels are the
    /// digit strings.
    pub fn distance_matrix(&self, depth: usize) -> Result<(Vec<Point>, FiniteMetricSpace)> {
        let points: Vec<Point> = self
            .children(&Cell::root(), depth)?
            .into_iter()
            .map(|c| Point { digits: c.prefix })
            .collect();
        let matrix = DistanceMatrix::from_fn(points.len(), |i, j| self.distance(&points[i], &points[j]));
        let labels = points.iter().map(ToString::to_string).collect();
        let space = FiniteMetricSpace::new(labels, matrix)?;
        Ok((points, space))
    }
}
