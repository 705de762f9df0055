//! Exact content of a finite set as a minimum-cost set partition, solved by
//! dynamic programming over bitmasks in `O(3^m)` for `m` points.

use crate::error::{domain, Error, Result};
use crate::gauge::Gauge;
use crate::metric::{FiniteMetricSpace, PointSet};

use super::covering::{ContentEstimate, Covering, Member, Mode, Piece};

/// Default cap on the number of points handed to the exact solver.
pub const DEFAULT_EXACT_LIMIT: usize = 16;

/// Hard cap regardless of overrides; the tables hold `2^m` entries.
pub const MAX_EXACT_LIMIT: usize = 26;

/// Settings for finite-space solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteOptions {
    /// Price every covering set as if its diameter were at least this. Off by
    /// default; with it off the content of any finite set is 0.
    pub min_diameter: Option<f64>,
    /// Largest set the exact solver accepts.
    pub limit: usize,
}

impl Default for FiniteOptions {
    fn default() -> Self {
        FiniteOptions {
            min_diameter: None,
            limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

impl FiniteOptions {
    pub fn with_floor(min_diameter: f64) -> Self {
        FiniteOptions {
            min_diameter: Some(min_diameter),
            ..Self::default()
        }
    }

    pub(crate) fn priced(&self, diameter: f64) -> f64 {
        self.min_diameter.map_or(diameter, |floor| diameter.max(floor))
    }
}

/// Minimum of `Σ h(diam A)` over coverings of `set` by subsets of `set`,
/// restricted to members with `diam A < eps` when `eps` is given.
///
/// Any covering can be intersected with `set` and then made disjoint without
/// raising any diameter, so the minimum runs over set partitions. Among
/// equal-cost partitions, the block holding the lowest point is chosen with
/// the smallest bitmask, recursively.
pub fn content_exact_finite(
    space: &FiniteMetricSpace,
    set: &PointSet,
    h: &Gauge,
    eps: Option<f64>,
    options: &FiniteOptions,
) -> Result<ContentEstimate> {
    if set.universe() != space.len() {
        return domain("subset does not belong to this space");
    }
    if let Some(e) = eps {
        if !(e > 0.0) {
            return domain(format!("eps must be positive, got {e}"));
        }
    }
    if let Some(floor) = options.min_diameter {
        if !(floor >= 0.0 && floor.is_finite()) {
            return domain(format!("min diameter must be a nonnegative number, got {floor}"));
        }
    }
    let points: Vec<usize> = set.iter().collect();
    let m = points.len();
    let limit = options.limit.min(MAX_EXACT_LIMIT);
    if m > limit {
        return Err(Error::SolverLimit { size: m, limit });
    }
    let mode = match eps {
        Some(eps) => Mode::Premeasure { eps },
        None => Mode::Content,
    };

    let full = (1usize << m) - 1;
    // diam[mask] from diam[mask minus its highest point]
    let mut diam = vec![0.0f64; 1 << m];
    for mask in 1..=full {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        let mut d = diam[rest];
        let mut r = rest;
        while r != 0 {
            let k = r.trailing_zeros() as usize;
            d = d.max(space.d(points[top], points[k]));
            r &= r - 1;
        }
        diam[mask] = d;
    }
    let block_cost = |mask: usize| -> f64 {
        let d = diam[mask];
        if eps.is_some_and(|e| d >= e) {
            f64::INFINITY
        } else {
            h.at(options.priced(d))
        }
    };

    let mut best = vec![0.0f64; 1 << m];
    let mut choice = vec![0usize; 1 << m];
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut best_cost = f64::INFINITY;
        let mut best_block = mask;
        // submasks of `rest` in increasing order, starting from 0
        let mut sub = 0usize;
        loop {
            let block = sub | low;
            let c = block_cost(block) + best[mask ^ block];
            if c < best_cost {
                best_cost = c;
                best_block = block;
            }
            sub = sub.wrapping_sub(rest) & rest;
            if sub == 0 {
                break;
            }
        }
        best[mask] = best_cost;
        choice[mask] = best_block;
    }

    let mut pieces = Vec::new();
    let mut mask = full;
    while mask != 0 && best[full].is_finite() {
        let block = choice[mask];
        let members = (0..m).filter(|k| block >> k & 1 == 1).map(|k| points[k]);
        pieces.push(Piece::single(
            Member::Points(PointSet::from_indices(space.len(), members)?),
            options.priced(diam[block]),
        ));
        mask ^= block;
    }
    Ok(ContentEstimate {
        value: best[full],
        witness: Covering::new(pieces),
        exact: true,
        mode,
    })
}
