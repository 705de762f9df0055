//! Hausdorff content `μ_h`, premeasures `H_{h,ε}` and Hausdorff measure `H_h`
//! as explicit covering optimizations.
//!
//! Three kinds of target are supported, each with an exact solver:
//!
//! * a subset of a [`FiniteMetricSpace`], by min-cost set partition;
//! * a union of cells of a [`CantorSpace`], by dynamic programming on the
//!   cell tree;
//! * a closed interval of the real line, under a linear gauge.
//!
//! All targets are compact, so finite coverings give the same infimum as
//! countable ones.

mod cells;
mod covering;
mod finite;
mod interval;

use serde::Serialize;

use crate::cantor::{CantorSpace, Cell};
use crate::error::{domain, Error, Result};
use crate::gauge::Gauge;
use crate::metric::{FiniteMetricSpace, PointSet};

pub use cells::content_cells;
pub use covering::{covering_cost, ContentEstimate, Covering, Interval, Member, Mode, Piece};
pub use finite::{content_exact_finite, FiniteOptions, DEFAULT_EXACT_LIMIT, MAX_EXACT_LIMIT};
pub use interval::{interval_content, verify_interval_cover, IntervalCoverCheck};

use covering::ExtReal;

/// Default relative tolerance for comparing values across solvers.
pub const VALUE_TOL: f64 = 1e-9;

/// A set whose content can be computed.
#[derive(Clone, Debug)]
pub enum Target<'a> {
    Finite {
        space: &'a FiniteMetricSpace,
        set: PointSet,
        options: FiniteOptions,
    },
    Cells {
        space: &'a CantorSpace,
        cells: Vec<Cell>,
        max_depth: usize,
    },
    Interval(Interval),
}

impl<'a> Target<'a> {
    pub fn finite(space: &'a FiniteMetricSpace, set: PointSet, options: FiniteOptions) -> Self {
        Target::Finite { space, set, options }
    }

    pub fn cells(space: &'a CantorSpace, cells: Vec<Cell>, max_depth: usize) -> Self {
        Target::Cells { space, cells, max_depth }
    }

    /// Diameter of the target set.
    pub fn diameter(&self) -> f64 {
        match self {
            Target::Finite { space, set, .. } => space.diameter(set),
            Target::Cells { space, cells, .. } => match smallest_enclosing_cell(cells) {
                Some(c) => space.cell_diameter(&c),
                None => 0.0,
            },
            Target::Interval(iv) => iv.length(),
        }
    }

    /// Least distance between a point of `self` and a point of `other`;
    /// `+∞` if either is empty.
    fn separation(&self, other: &Target<'_>) -> Result<f64> {
        match (self, other) {
            (Target::Finite { space, set, .. }, Target::Finite { set: other, .. }) => {
                Ok(space.cross_distance(set, other).unwrap_or(f64::INFINITY))
            }
            (Target::Cells { space, cells, .. }, Target::Cells { cells: other, .. }) => Ok(cells
                .iter()
                .flat_map(|a| other.iter().map(move |b| (a, b)))
                .map(|(a, b)| {
                    if a.is_within(b) || b.is_within(a) {
                        0.0
                    } else {
                        space.r(a.join(b).depth())
                    }
                })
                .fold(f64::INFINITY, f64::min)),
            _ => Err(Error::Unsupported("separation needs two finite or two cell targets".into())),
        }
    }

    fn union(&self, other: &Target<'a>) -> Result<Target<'a>> {
        match (self, other) {
            (Target::Finite { space, set, options }, Target::Finite { space: s2, set: other, .. })
                if std::ptr::eq(*space, *s2) || space == s2 =>
            {
                Ok(Target::Finite { space, set: set.union(other), options: *options })
            }
            (Target::Cells { space, cells, max_depth }, Target::Cells { space: s2, cells: other, max_depth: d2 })
                if std::ptr::eq(*space, *s2) || space == s2 =>
            {
                let mut all = cells.clone();
                all.extend(other.iter().cloned());
                Ok(Target::Cells { space, cells: all, max_depth: (*max_depth).max(*d2) })
            }
            _ => Err(Error::Unsupported("union needs two targets in the same space".into())),
        }
    }
}

fn smallest_enclosing_cell(cells: &[Cell]) -> Option<Cell> {
    let mut iter = cells.iter();
    let first = iter.next()?.clone();
    Some(iter.fold(first, |acc, c| acc.join(c)))
}

/// The covering of `E` by `E` itself: `μ_h(E) <= h(diam E)`.
///
/// Marked exact only where that single set is known to be optimal: empty
/// sets, singletons, intervals under a linear gauge, and a single cell under
/// a gauge for which refining never helps.
pub fn trivial_upper_bound(target: &Target<'_>, h: &Gauge) -> Result<ContentEstimate> {
    let (piece, exact) = match target {
        Target::Finite { space, set, options } => {
            if set.is_empty() {
                return Ok(empty_estimate());
            }
            let diameter = options.priced(space.diameter(set));
            (Piece::single(Member::Points(set.clone()), diameter), set.len() == 1 && options.min_diameter.is_none())
        }
        Target::Cells { space, cells, .. } => {
            let Some(cell) = smallest_enclosing_cell(cells) else {
                return Ok(empty_estimate());
            };
            let single = cells.iter().all(|c| *c == cell);
            let exact = single && space.refinement_ratios(h, cell.depth()).is_some_and(|r| r.never_refines());
            let depth = cell.depth();
            (Piece::single(Member::Cells { cell, depth }, space.r(depth)), exact)
        }
        Target::Interval(iv) => {
            let est = interval::interval_estimate(iv, h, None)?;
            return Ok(est);
        }
    };
    Ok(ContentEstimate {
        value: piece.cost(h),
        witness: Covering::new(vec![piece]),
        exact,
        mode: Mode::Content,
    })
}

fn empty_estimate() -> ContentEstimate {
    ContentEstimate { value: 0.0, witness: Covering::default(), exact: true, mode: Mode::Content }
}

fn solve(target: &Target<'_>, h: &Gauge, eps: Option<f64>) -> Result<ContentEstimate> {
    match target {
        Target::Finite { space, set, options } => content_exact_finite(space, set, h, eps, options),
        Target::Cells { space, cells, max_depth } => content_cells(space, cells, h, *max_depth, eps),
        Target::Interval(iv) => interval::interval_estimate(iv, h, eps),
    }
}

/// `μ_h(E)`: infimum of `Σ h(diam A)` over all coverings.
pub fn content(target: &Target<'_>, h: &Gauge) -> Result<ContentEstimate> {
    solve(target, h, None)
}

/// `H_{h,ε}(E)`: infimum over coverings by sets of diameter `< eps`.
pub fn premeasure(target: &Target<'_>, h: &Gauge, eps: f64) -> Result<ContentEstimate> {
    if !(eps > 0.0) {
        return domain(format!("eps must be positive, got {eps}"));
    }
    solve(target, h, Some(eps))
}

/// `sup_ε H_{h,ε}(E)` over a strictly decreasing `schedule`.
///
/// `stabilized` reports whether the last two values agree within `tol`
/// (relative). `exact` is set only when the last value provably equals the
/// supremum over all `ε > 0`: for finite sets once `ε` is at or below the
/// least pairwise distance, for intervals always, and for cells when the
/// gauge is self-similar from the forced depth on.
pub fn hausdorff_measure(target: &Target<'_>, h: &Gauge, schedule: &[f64], tol: f64) -> Result<ContentEstimate> {
    if schedule.is_empty() {
        return domain("eps schedule is empty");
    }
    if let Some(w) = schedule.windows(2).find(|w| !(w[1] < w[0])) {
        return domain(format!("eps schedule must strictly decrease ({} then {})", w[0], w[1]));
    }
    let estimates = schedule
        .iter()
        .map(|&eps| premeasure(target, h, eps))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let stabilized = match values.as_slice() {
        [.., a, b] => a == b || (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0),
        _ => false,
    };
    let last_eps = *schedule.last().unwrap();
    let last = estimates.last().unwrap();
    let exact = last.exact
        && match target {
            Target::Finite { space, set, .. } => space.min_separation(set).is_none_or(|gap| last_eps <= gap),
            Target::Interval(_) => true,
            Target::Cells { space, .. } => {
                let forced = (0..).find(|&l| space.r(l) < last_eps).unwrap_or(0);
                space.refinement_ratios(h, forced).is_some_and(|r| r.self_similar())
            }
        };
    // values never decrease along the schedule; take the last witness reaching the sup
    let (best, _) = estimates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.value.total_cmp(&b.1.value))
        .unwrap();
    let value = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ContentEstimate {
        value,
        witness: estimates[best].witness.clone(),
        exact,
        mode: Mode::Measure { schedule: schedule.to_vec(), values, stabilized },
    })
}

/// One row of a separated-superadditivity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperadditivityRow {
    pub eps: f64,
    #[serde(serialize_with = "ext")]
    pub union: f64,
    #[serde(serialize_with = "ext")]
    pub first: f64,
    #[serde(serialize_with = "ext")]
    pub second: f64,
    pub holds: bool,
}

fn ext<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    ExtReal(*v).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperadditivityReport {
    pub eta: f64,
    #[serde(serialize_with = "ext")]
    pub separation: f64,
    pub rows: Vec<SuperadditivityRow>,
}

impl SuperadditivityReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Checks `H_{h,ε}(E1 ∪ E2) >= H_{h,ε}(E1) + H_{h,ε}(E2)` for each `ε` in
/// `eps_list`, all of which must lie in `(0, eta]`, for sets at least `eta`
/// apart.
pub fn check_separated_superadditivity(
    first: &Target<'_>,
    second: &Target<'_>,
    h: &Gauge,
    eta: f64,
    eps_list: &[f64],
) -> Result<SuperadditivityReport> {
    if !(eta > 0.0) {
        return domain(format!("eta must be positive, got {eta}"));
    }
    let separation = first.separation(second)?;
    if separation < eta {
        return domain(format!("sets are only {separation} apart, less than eta = {eta}"));
    }
    if let Some(bad) = eps_list.iter().find(|&&e| !(e > 0.0 && e <= eta)) {
        return domain(format!("eps = {bad} is outside (0, eta]"));
    }
    let union = first.union(second)?;
    let rows = eps_list
        .iter()
        .map(|&eps| {
            let u = premeasure(&union, h, eps)?.value;
            let a = premeasure(first, h, eps)?.value;
            let b = premeasure(second, h, eps)?.value;
            let sum = a + b;
            let holds = u >= sum || sum - u <= VALUE_TOL * sum.abs().max(1.0);
            Ok(SuperadditivityRow { eps, union: u, first: a, second: b, holds })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuperadditivityReport { eta, separation, rows })
}
