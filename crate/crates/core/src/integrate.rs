//! Riemann sums and integrals of continuous functions on the sequence space
//! against its uniform cell measure.
//!
//! A depth-`l` Riemann sum evaluates `f` once in every depth-`l` cell and
//! weights each value by the cell measure `1 / (n_1 ⋯ n_l)`. Functions that
//! only read their first `d` digits are integrated exactly at depth `d`.
//! Others are integrated by deepening until two independent sample choices
//! and two successive depths agree; a caller-supplied modulus of continuity
//! turns the result into a certified one.

use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cantor::{CantorSpace, Cell, Point, MAX_ENUMERATION};
use crate::error::{domain, Error, Result};

/// Random digits appended below the sampled depth by default.
pub const DEFAULT_EXTRA_DIGITS: usize = 16;

/// How a representative is picked in each cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleStrategy {
    /// The cell prefix itself, read as followed by zeros.
    LexicographicMin,
    /// The prefix followed by `extra_digits` uniformly random digits, from a
    /// generator seeded with `seed`.
    SeededRandom { seed: u64, extra_digits: usize },
}

impl SampleStrategy {
    pub fn seeded(seed: u64) -> Self {
        SampleStrategy::SeededRandom { seed, extra_digits: DEFAULT_EXTRA_DIGITS }
    }
}

/// One representative per depth-`l` cell, in lexicographic cell order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleSet {
    depth: usize,
    representatives: Vec<Point>,
}

impl SampleSet {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn representatives(&self) -> &[Point] {
        &self.representatives
    }

    /// Weight of every sample, `1 / (n_1 ⋯ n_l)`.
    pub fn weight(&self, space: &CantorSpace) -> BigRational {
        space.cell_measure(&space.cell(vec![0; self.depth]).expect("zero digits are always valid"))
    }
}

type Evaluator = dyn Fn(&Point) -> std::result::Result<f64, String> + Send + Sync;
type Modulus = dyn Fn(usize) -> f64 + Send + Sync;

/// A real-valued function on the sequence space.
///
/// `declared_depth = Some(d)` promises that the value only depends on the
/// first `d` digits. `modulus(l)` bounds the oscillation of `f` on every
/// depth-`l` cell.
pub struct FunctionSpec {
    evaluator: Box<Evaluator>,
    declared_depth: Option<usize>,
    modulus: Option<Box<Modulus>>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("declared_depth", &self.declared_depth)
            .field("modulus", &self.modulus.is_some())
            .finish_non_exhaustive()
    }
}

impl FunctionSpec {
    /// Wraps a fallible evaluator.
    pub fn new(f: impl Fn(&Point) -> std::result::Result<f64, String> + Send + Sync + 'static) -> Self {
        FunctionSpec { evaluator: Box::new(f), declared_depth: None, modulus: None }
    }

    pub fn from_fn(f: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(move |x| Ok(f(x)))
    }

    pub fn with_declared_depth(mut self, depth: usize) -> Self {
        self.declared_depth = Some(depth);
        self
    }

    pub fn with_modulus(mut self, modulus: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        self.modulus = Some(Box::new(modulus));
        self
    }

    pub fn declared_depth(&self) -> Option<usize> {
        self.declared_depth
    }

    pub fn eval(&self, x: &Point) -> std::result::Result<f64, String> {
        (self.evaluator)(x)
    }

    pub fn modulus(&self, depth: usize) -> Option<f64> {
        self.modulus.as_ref().map(|m| m(depth))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(move |_| c).with_declared_depth(0)
    }

    /// `x ↦ x_j` (1-based).
    pub fn digit(j: usize) -> Result<Self> {
        if j == 0 {
            return domain("digits are indexed from 1");
        }
        Ok(Self::from_fn(move |x| x.digit(j) as f64).with_declared_depth(j))
    }

    /// 1 on `cell`, 0 elsewhere.
    pub fn indicator(cell: Cell) -> Self {
        let depth = cell.depth();
        Self::from_fn(move |x| if cell.contains(x) { 1.0 } else { 0.0 }).with_declared_depth(depth)
    }

    /// `x ↦ Σ_j x_j / (n_1 ⋯ n_j)`, the point of `[0, 1]` whose mixed-radix
    /// expansion is `x` (the binary expansion when every `n_j = 2`). Its
    /// oscillation on a depth-`l` cell is `1 / (n_1 ⋯ n_l)`.
    pub fn expansion_value(space: &CantorSpace) -> Self {
        let s = space.clone();
        let s2 = space.clone();
        Self::from_fn(move |x| {
            let mut scale = 1.0;
            let mut total = 0.0;
            for (i, &d) in x.digits().iter().enumerate() {
                scale /= s.n(i + 1) as f64;
                total += d as f64 * scale;
            }
            total
        })
        .with_modulus(move |l| (1..=l).fold(1.0, |acc, j| acc / s2.n(j) as f64))
    }
}

/// Built-in function families, in their JSON form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum BuiltinFunction {
    Constant { value: f64 },
    Digit { index: usize },
    Indicator { cell: Vec<u32> },
    Expansion,
}

impl BuiltinFunction {
    pub fn build(&self, space: &CantorSpace) -> Result<FunctionSpec> {
        Ok(match self {
            BuiltinFunction::Constant { value } => FunctionSpec::constant(*value),
            BuiltinFunction::Digit { index } => FunctionSpec::digit(*index)?,
            BuiltinFunction::Indicator { cell } => FunctionSpec::indicator(space.cell(cell.clone())?),
            BuiltinFunction::Expansion => FunctionSpec::expansion_value(space),
        })
    }
}

/// Calls `visit` on the representative of every depth-`l` cell, in
/// lexicographic order.
fn for_each_representative(
    space: &CantorSpace,
    l: usize,
    strategy: SampleStrategy,
    mut visit: impl FnMut(Point) -> Result<()>,
) -> Result<()> {
    match space.cell_count(l) {
        Some(k) if k <= MAX_ENUMERATION => {}
        _ => return Err(Error::Unsupported(format!("more than {MAX_ENUMERATION} cells at depth {l}"))),
    }
    let mut rng = match strategy {
        SampleStrategy::SeededRandom { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        SampleStrategy::LexicographicMin => None,
    };
    let extra = match strategy {
        SampleStrategy::SeededRandom { extra_digits, .. } => extra_digits,
        SampleStrategy::LexicographicMin => 0,
    };
    let mut prefix = vec![0u32; l];
    loop {
        let mut digits = prefix.clone();
        if let Some(rng) = rng.as_mut() {
            for j in l + 1..=l + extra {
                digits.push(rng.random_range(0..space.n(j)));
            }
        }
        visit(space.point(digits)?)?;
        let mut pos = l;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            prefix[pos] += 1;
            if prefix[pos] < space.n(pos + 1) {
                break;
            }
            prefix[pos] = 0;
        }
    }
}

/// One representative per depth-`l` cell.
pub fn sample_set(space: &CantorSpace, l: usize, strategy: SampleStrategy) -> Result<SampleSet> {
    let mut representatives = Vec::new();
    for_each_representative(space, l, strategy, |p| {
        representatives.push(p);
        Ok(())
    })?;
    Ok(SampleSet { depth: l, representatives })
}

/// Neumaier's compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

fn weight_f64(space: &CantorSpace, l: usize) -> f64 {
    let w = space.cell_measure(&space.cell(vec![0; l]).expect("zero digits are always valid"));
    w.to_f64().unwrap_or(0.0)
}

fn evaluate(f: &FunctionSpec, x: &Point, l: usize) -> Result<f64> {
    f.eval(x).map_err(|message| Error::Evaluation {
        cell: x.digits()[..l.min(x.depth())].to_vec(),
        message,
    })
}

/// `(1 / (n_1 ⋯ n_l)) Σ_{x ∈ E_l} f(x)`, with the weight computed exactly and
/// applied once to a compensated sum.
pub fn riemann_sum(space: &CantorSpace, f: &FunctionSpec, samples: &SampleSet) -> Result<f64> {
    let l = samples.depth;
    if Some(samples.representatives.len() as u128) != space.cell_count(l) {
        return domain("sample set does not have one point per cell");
    }
    let mut acc = CompensatedSum::default();
    for x in &samples.representatives {
        acc.add(evaluate(f, x, l)?);
    }
    Ok(acc.total() * weight_f64(space, l))
}

fn streamed_sum(space: &CantorSpace, f: &FunctionSpec, l: usize, strategy: SampleStrategy) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    for_each_representative(space, l, strategy, |x| {
        acc.add(evaluate(f, &x, l)?);
        Ok(())
    })?;
    Ok(acc.total() * weight_f64(space, l))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub achieved_depth: usize,
    /// The value is within the requested tolerance of the integral.
    pub certified: bool,
}

/// [`integrate_seeded`] with seed 0.
pub fn integrate(space: &CantorSpace, f: &FunctionSpec, tol: f64, max_depth: usize) -> Result<Integral> {
    integrate_seeded(space, f, tol, max_depth, 0)
}

/// Integral of `f` against the uniform cell measure.
///
/// With a declared depth `d` the depth-`d` sum is the exact integral.
/// Otherwise depths `0, 1, ...` are tried until the lexicographic and the
/// seeded random sums agree within `tol` and the lexicographic sum moved by
/// at most `tol` from the previous depth, and, if `f` has a modulus, the
/// modulus is at most `tol`. Only the modulus certifies a result. Reaching
/// `max_depth`, or a depth with more than [`MAX_ENUMERATION`] cells, returns
/// the last lexicographic sum, uncertified.
pub fn integrate_seeded(space: &CantorSpace, f: &FunctionSpec, tol: f64, max_depth: usize, seed: u64) -> Result<Integral> {
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    if let Some(d) = f.declared_depth() {
        let value = streamed_sum(space, f, d, SampleStrategy::LexicographicMin)?;
        return Ok(Integral { value, achieved_depth: d, certified: true });
    }
    let mut previous: Option<f64> = None;
    let mut last = Integral { value: f64::NAN, achieved_depth: 0, certified: false };
    for l in 0..=max_depth {
        if space.cell_count(l).is_none_or(|k| k > MAX_ENUMERATION) {
            break;
        }
        let lex = streamed_sum(space, f, l, SampleStrategy::LexicographicMin)?;
        let random = streamed_sum(space, f, l, SampleStrategy::seeded(seed.wrapping_add(l as u64)))?;
        let stable = (lex - random).abs() <= tol && previous.is_some_and(|p| (lex - p).abs() <= tol);
        let modulus = f.modulus(l);
        last = Integral { value: lex, achieved_depth: l, certified: false };
        if stable && modulus.is_none_or(|w| w <= tol) {
            last.certified = modulus.is_some();
            return Ok(last);
        }
        previous = Some(lex);
    }
    Ok(last)
}
