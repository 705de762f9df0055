//! Optimal coverings of unions of cells by cells.
//!
//! Any set in the sequence space lies in a cell of the same diameter, so cell
//! coverings are enough. The optimum is found on the cell tree: a cell is
//! either taken whole or replaced by the optimal coverings of its children.
//! Cells lying entirely inside a target all behave alike at a given depth, so
//! their cost is tabulated once per level.

use crate::cantor::{CantorSpace, Cell};
use crate::error::{domain, Error, Result};
use crate::gauge::Gauge;

use super::covering::{ContentEstimate, Covering, Member, Mode, Piece};

/// Targets with duplicates and cells inside other targets removed, sorted.
pub(crate) fn normalize_targets(targets: &[Cell]) -> Vec<Cell> {
    let mut sorted: Vec<Cell> = targets.to_vec();
    sorted.sort();
    sorted.dedup();
    // a cell sorts right after any cell it lies in
    let mut out: Vec<Cell> = Vec::with_capacity(sorted.len());
    for c in sorted {
        if !out.last().is_some_and(|outer| c.is_within(outer)) {
            out.push(c);
        }
    }
    out
}

struct Solver<'a> {
    space: &'a CantorSpace,
    h: &'a Gauge,
    eps: Option<f64>,
    /// Cost of covering a whole depth-`l` cell.
    full: Vec<f64>,
    /// Depth at which a whole depth-`l` cell is covered in the optimum.
    full_depth: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(space: &'a CantorSpace, h: &'a Gauge, eps: Option<f64>, max_depth: usize) -> Self {
        let mut full = vec![0.0; max_depth + 1];
        let mut full_depth = vec![max_depth; max_depth + 1];
        full[max_depth] = h.at(space.r(max_depth));
        for l in (0..max_depth).rev() {
            let split = space.n(l + 1) as f64 * full[l + 1];
            let whole = if eps.is_some_and(|e| space.r(l) >= e) {
                f64::INFINITY
            } else {
                h.at(space.r(l))
            };
            if whole <= split {
                full[l] = whole;
                full_depth[l] = l;
            } else {
                full[l] = split;
                full_depth[l] = full_depth[l + 1];
            }
        }
        Solver { space, h, eps, full, full_depth }
    }

    fn allowed(&self, l: usize) -> bool {
        self.eps.is_none_or(|e| self.space.r(l) < e)
    }

    fn whole_cell_cover(&self, cell: &Cell) -> Piece {
        let l = cell.depth();
        let depth = self.full_depth[l];
        Piece {
            member: Member::Cells { cell: cell.clone(), depth },
            count: self.space.count_between(l, depth).expect("counts checked up front"),
            diameter: self.space.r(depth),
        }
    }

    /// Optimal covering of the part of `cell` lying in `targets`, where every
    /// target is strictly inside `cell`.
    fn partial(&self, cell: &Cell, targets: &[Cell]) -> (f64, Vec<Piece>) {
        let l = cell.depth();
        let mut split_cost = 0.0;
        let mut split_pieces = Vec::new();
        let mut rest = targets;
        while let Some(first) = rest.first() {
            let digit = first.prefix()[l];
            let run = rest.iter().take_while(|t| t.prefix()[l] == digit).count();
            let (group, tail) = rest.split_at(run);
            rest = tail;
            let mut prefix = cell.prefix().to_vec();
            prefix.push(digit);
            let child = self.space.cell(prefix).expect("targets have valid digits");
            if group.len() == 1 && group[0] == child {
                split_cost += self.full[l + 1];
                split_pieces.push(self.whole_cell_cover(&child));
            } else {
                let (c, p) = self.partial(&child, group);
                split_cost += c;
                split_pieces.extend(p);
            }
        }
        if self.allowed(l) {
            let whole = self.h.at(self.space.r(l));
            if whole <= split_cost {
                return (whole, vec![Piece::single(Member::Cells { cell: cell.clone(), depth: l }, self.space.r(l))]);
            }
        }
        (split_cost, split_pieces)
    }
}

/// Optimal cost of covering the union of `targets` by cells of depth at most
/// `max_depth`, each of diameter `< eps` when `eps` is given.
///
/// The value is exact (and flagged so) when refining below `max_depth` can
/// never lower the cost, which is decided from the gauge's behavior near 0
/// and the tails of the branching and radius sequences. Otherwise the value
/// is the truncated optimum, an upper bound.
pub fn content_cells(
    space: &CantorSpace,
    targets: &[Cell],
    h: &Gauge,
    max_depth: usize,
    eps: Option<f64>,
) -> Result<ContentEstimate> {
    if let Some(e) = eps {
        if !(e > 0.0) {
            return domain(format!("eps must be positive, got {e}"));
        }
    }
    for t in targets {
        space.cell(t.prefix().to_vec())?;
    }
    let mode = match eps {
        Some(eps) => Mode::Premeasure { eps },
        None => Mode::Content,
    };
    let deepest = targets.iter().map(Cell::depth).max().unwrap_or(0);
    if deepest > max_depth {
        return Err(Error::DepthTooSmall { needed: deepest, max_depth });
    }
    if let Some(e) = eps {
        if space.r(max_depth) >= e {
            let needed = (max_depth..max_depth + 10_000).find(|&l| space.r(l) < e).unwrap_or(usize::MAX);
            return Err(Error::DepthTooSmall { needed, max_depth });
        }
    }
    if space.cell_count(max_depth).is_none() {
        return Err(Error::Unsupported(format!("cell counts overflow at depth {max_depth}")));
    }
    let exact = space.refinement_ratios(h, max_depth).is_some_and(|r| r.never_refines());
    let targets = normalize_targets(targets);
    if targets.is_empty() {
        return Ok(ContentEstimate { value: 0.0, witness: Covering::default(), exact: true, mode });
    }

    let solver = Solver::new(space, h, eps, max_depth);
    let root = Cell::root();
    let (value, pieces) = if targets == [root.clone()] {
        (solver.full[0], vec![solver.whole_cell_cover(&root)])
    } else {
        solver.partial(&root, &targets)
    };
    Ok(ContentEstimate {
        value,
        witness: Covering::new(pieces),
        exact,
        mode,
    })
}
