//! Lipschitz maps between finite spaces and metric transforms `φ ∘ d`.
//!
//! A `C`-Lipschitz map shrinks content once the gauge is rescaled:
//! `μ_{h̃}(f(E)) <= μ_h(E)` with `h̃(t) = h(t / C)`, and likewise for
//! premeasures at `(ε, Cε)`. A transform `φ` turns an ultrametric into an
//! ultrametric whenever it is increasing, and a metric into a metric when it
//! is also subadditive.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::gauge::{rescaled_gauge, Gauge, TransformSpec};
use crate::measure::{content_exact_finite, FiniteOptions, VALUE_TOL};
use crate::metric::{
    validate_metric, validate_ultrametric, DistanceMatrix, FiniteMetricSpace, PointSet, ValidationReport, DEFAULT_TOL,
};

/// A map `f` between finite spaces, given point by point.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzMap {
    source: FiniteMetricSpace,
    target: FiniteMetricSpace,
    assignment: Vec<usize>,
    declared_c: Option<f64>,
}

impl LipschitzMap {
    /// `assignment[i]` is the image of source point `i`. A declared constant
    /// is checked against every pair.
    pub fn new(
        source: FiniteMetricSpace,
        target: FiniteMetricSpace,
        assignment: Vec<usize>,
        declared_c: Option<f64>,
    ) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::Shape(format!(
                "assignment has {} entries for {} source points",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&y| y >= target.len()) {
            return domain(format!("image {bad} is not a point of the target"));
        }
        let map = LipschitzMap { source, target, assignment, declared_c: None };
        if let Some(c) = declared_c {
            if !(c >= 0.0 && c.is_finite()) {
                return domain(format!("Lipschitz constant must be a nonnegative number, got {c}"));
            }
            let actual = lipschitz_constant(&map);
            if actual > c * (1.0 + DEFAULT_TOL) {
                return domain(format!("map stretches some pair by {actual}, more than the declared {c}"));
            }
        }
        Ok(LipschitzMap { declared_c, ..map })
    }

    pub fn identity(space: FiniteMetricSpace) -> Self {
        let assignment = (0..space.len()).collect();
        LipschitzMap { target: space.clone(), source: space, assignment, declared_c: Some(1.0) }
    }

    pub fn source(&self) -> &FiniteMetricSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteMetricSpace {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn declared_c(&self) -> Option<f64> {
        self.declared_c
    }

    /// `f(set)` as a subset of the target.
    pub fn image(&self, set: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.target.len());
        for i in set.iter() {
            out.insert(self.assignment[i]);
        }
        out
    }
}

/// `max ρ(f(x), f(y)) / d(x, y)` over pairs `x != y`; 0 for fewer than two
/// points.
pub fn lipschitz_constant(m: &LipschitzMap) -> f64 {
    let n = m.source.len();
    let mut c: f64 = 0.0;
    for x in 0..n {
        for y in x + 1..n {
            let rho = m.target.d(m.assignment[x], m.assignment[y]);
            c = c.max(rho / m.source.d(x, y));
        }
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageContentRow {
    pub eps: f64,
    pub image_eps: f64,
    pub source: f64,
    pub image: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageContentReport {
    pub lipschitz_constant: f64,
    pub source: f64,
    pub image: f64,
    pub holds: bool,
    pub premeasures: Vec<ImageContentRow>,
}

impl ImageContentReport {
    pub fn all_hold(&self) -> bool {
        self.holds && self.premeasures.iter().all(|r| r.holds)
    }
}

fn at_most(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs || lhs - rhs <= VALUE_TOL * rhs.abs().max(1.0)
}

/// Compares `μ_h(E)` with `μ_{h̃}(f(E))`, and `H_{h,ε}(E)` with
/// `H_{h̃,Cε}(f(E))` for each `ε` in `eps_list`, where `C` is the Lipschitz
/// constant of `m` and `h̃ = h(· / C)`.
///
/// A diameter floor `δ` in `options` becomes `Cδ` on the image side, which
/// is the floor a `C`-Lipschitz image of a priced block inherits. When
/// `C = 0` the image is at most one point and costs nothing.
pub fn check_image_content(
    m: &LipschitzMap,
    set: &PointSet,
    h: &Gauge,
    options: &FiniteOptions,
    eps_list: &[f64],
) -> Result<ImageContentReport> {
    let c = lipschitz_constant(m);
    let image = m.image(set);
    let source_value = |eps: Option<f64>| content_exact_finite(&m.source, set, h, eps, options).map(|e| e.value);
    let (image_gauge, image_options) = if c > 0.0 {
        let floor = options.min_diameter.map(|d| d * c);
        (Some(rescaled_gauge(h, c)?), FiniteOptions { min_diameter: floor, ..*options })
    } else {
        (None, *options)
    };
    let image_value = |eps: Option<f64>| match &image_gauge {
        Some(ht) => content_exact_finite(&m.target, &image, ht, eps.map(|e| e * c), &image_options).map(|e| e.value),
        None => Ok(0.0),
    };

    let source = source_value(None)?;
    let img = image_value(None)?;
    let premeasures = eps_list
        .iter()
        .map(|&eps| {
            if !(eps > 0.0) {
                return domain(format!("eps must be positive, got {eps}"));
            }
            let s = source_value(Some(eps))?;
            let i = image_value(Some(eps))?;
            Ok(ImageContentRow { eps, image_eps: c * eps, source: s, image: i, holds: at_most(i, s) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ImageContentReport {
        lipschitz_constant: c,
        source,
        image: img,
        holds: at_most(img, source),
        premeasures,
    })
}

/// Whether `values[x] <= values[y] + C d(x, y)` for all ordered pairs, which
/// for real values is the same as being `C`-Lipschitz.
pub fn check_real_lipschitz(space: &FiniteMetricSpace, values: &[f64], c: f64) -> Result<bool> {
    if values.len() != space.len() {
        return Err(Error::Shape(format!("{} values for {} points", values.len(), space.len())));
    }
    Ok((0..space.len()).all(|x| {
        (0..space.len()).all(|y| {
            let rhs = values[y] + c * space.d(x, y);
            values[x] <= rhs || values[x] - rhs <= DEFAULT_TOL * rhs.abs().max(1.0)
        })
    }))
}

/// The distances of `matrix` together with 0, which is all a sampled
/// subadditivity check needs: for increasing `φ`, the triangle inequality of
/// `φ ∘ d` follows from `φ(a + b) <= φ(a) + φ(b)` on the distances `a, b`.
pub fn distance_grid(matrix: &DistanceMatrix) -> Vec<f64> {
    let mut grid = vec![0.0];
    grid.extend(matrix.distinct_values());
    grid
}

/// Summary of a transform, without the matrices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformSummary {
    pub basis: TransformBasis,
    pub points: usize,
    pub diameter_before: f64,
    pub diameter_after: f64,
}

impl TransformedSpace {
    pub fn summary(&self) -> TransformSummary {
        TransformSummary {
            basis: self.basis,
            points: self.base.len(),
            diameter_before: self.base.diameter(&self.base.all()),
            diameter_after: self.result.diameter(&self.result.all()),
        }
    }
}

/// `φ` applied to every entry, with no checks on the outcome.
pub fn apply_transform(matrix: &DistanceMatrix, phi: &TransformSpec) -> DistanceMatrix {
    matrix.map(|t| phi.at(t))
}

/// Which fact about `φ` makes the transformed distance a metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformBasis {
    /// The base is an ultrametric and `φ` is increasing on its distances.
    Ultrametric,
    /// `φ` passed the sampled subadditivity check.
    Subadditive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformedSpace {
    pub base: FiniteMetricSpace,
    pub phi: TransformSpec,
    pub result: FiniteMetricSpace,
    pub basis: TransformBasis,
}

fn increasing_on(phi: &TransformSpec, values: &[f64]) -> bool {
    // values are the sorted distinct off-diagonal distances
    phi.at(0.0) == 0.0
        && values.first().is_none_or(|&v| phi.at(v) > 0.0)
        && values.windows(2).all(|w| phi.at(w[0]) < phi.at(w[1]))
}

/// `φ ∘ d` as a new space.
///
/// The base is first tested as an ultrametric; if it is one, `φ` only has to
/// be increasing on the distances that occur. Otherwise `φ` must have passed
/// [`check_subadditive`](crate::gauge::check_subadditive). The result is
/// validated before it is returned.
pub fn transform_space(space: &FiniteMetricSpace, phi: &TransformSpec) -> Result<TransformedSpace> {
    let matrix = space.matrix();
    let ultra = validate_ultrametric(matrix, DEFAULT_TOL).is_valid();
    let basis = if ultra && increasing_on(phi, &matrix.distinct_values()) {
        TransformBasis::Ultrametric
    } else if phi.subadditivity_checked() {
        TransformBasis::Subadditive
    } else if ultra {
        return domain("transform is not increasing on the distances of this space");
    } else {
        return domain("base is not an ultrametric and the transform is not known to be subadditive");
    };
    let out = apply_transform(matrix, phi);
    let report = match basis {
        TransformBasis::Ultrametric => validate_ultrametric(&out, DEFAULT_TOL),
        TransformBasis::Subadditive => validate_metric(&out, DEFAULT_TOL),
    };
    if !report.is_valid() {
        return Err(Error::InvalidMetric(report));
    }
    let result = FiniteMetricSpace::new(space.labels().to_vec(), out)?;
    Ok(TransformedSpace { base: space.clone(), phi: phi.clone(), result, basis })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiameterRow {
    pub set: PointSet,
    pub base: f64,
    pub transformed: f64,
    pub phi_of_base: f64,
    pub holds: bool,
}

/// Checks `diam_{φ∘d}(A) = φ(diam_d(A))` on each sample.
pub fn transformed_diameter_check(
    space: &FiniteMetricSpace,
    phi: &TransformSpec,
    samples: &[PointSet],
) -> Result<Vec<DiameterRow>> {
    let t = transform_space(space, phi)?;
    samples
        .iter()
        .map(|a| {
            if a.universe() != space.len() {
                return domain("sample does not belong to this space");
            }
            let base = space.diameter(a);
            let transformed = t.result.diameter(a);
            let phi_of_base = phi.at(base);
            let holds = (transformed - phi_of_base).abs() <= DEFAULT_TOL * phi_of_base.abs().max(1.0);
            Ok(DiameterRow { set: a.clone(), base, transformed, phi_of_base, holds })
        })
        .collect()
}

/// Validation of `φ ∘ d` without the dispatch, for showing what goes wrong
/// when neither condition holds.
pub fn validate_transformed(space: &FiniteMetricSpace, phi: &TransformSpec) -> ValidationReport {
    validate_metric(&apply_transform(space.matrix(), phi), DEFAULT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::CantorSpace;
    use crate::gauge::check_subadditive;

    fn line(coords: &[f64]) -> FiniteMetricSpace {
        FiniteMetricSpace::on_line(coords).unwrap()
    }

    #[test]
    fn constants() {
        let s = line(&[0.0, 1.0, 2.0]);
        assert_eq!(lipschitz_constant(&LipschitzMap::identity(s.clone())), 1.0);
        let constant = LipschitzMap::new(s.clone(), s.clone(), vec![1, 1, 1], None).unwrap();
        assert_eq!(lipschitz_constant(&constant), 0.0);
        let collapse = LipschitzMap::new(s.clone(), s.clone(), vec![0, 1, 1], Some(1.0)).unwrap();
        assert_eq!(lipschitz_constant(&collapse), 1.0);
        assert!(LipschitzMap::new(s.clone(), s.clone(), vec![0, 2, 1], Some(1.0)).is_err());
        assert!(LipschitzMap::new(s.clone(), s, vec![0, 1], None).is_err());
    }

    #[test]
    fn identity_gives_equality() {
        let s = line(&[0.0, 1.0, 3.0, 4.0]);
        let h = Gauge::power(1.0).unwrap();
        let opts = FiniteOptions::with_floor(1.0);
        let r = check_image_content(&LipschitzMap::identity(s.clone()), &s.all(), &h, &opts, &[1.5, 5.0]).unwrap();
        assert!(r.all_hold());
        assert_eq!(r.source, r.image);
        for row in &r.premeasures {
            assert_eq!(row.source, row.image);
        }
    }

    #[test]
    fn constant_map_image_is_free() {
        let s = line(&[0.0, 1.0, 3.0]);
        let m = LipschitzMap::new(s.clone(), s.clone(), vec![2, 2, 2], None).unwrap();
        let r = check_image_content(&m, &s.all(), &Gauge::power(0.5).unwrap(), &FiniteOptions::with_floor(0.5), &[1.0]).unwrap();
        assert_eq!(r.lipschitz_constant, 0.0);
        assert_eq!(r.image, 0.0);
        assert!(r.all_hold());
    }

    #[test]
    fn real_lipschitz() {
        let s = FiniteMetricSpace::euclidean(&[vec![0.0, 0.0], vec![3.0, 4.0], vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let a = s.subset([1, 2]).unwrap();
        let dist: Vec<f64> = (0..4).map(|x| s.dist_to_set(x, &a).unwrap()).collect();
        assert!(check_real_lipschitz(&s, &dist, 1.0).unwrap());
        let column: Vec<f64> = (0..4).map(|x| 2.0 * s.d(x, 0)).collect();
        assert!(!check_real_lipschitz(&s, &column, 1.0).unwrap());
        assert!(check_real_lipschitz(&s, &column, 2.0).unwrap());
    }

    #[test]
    fn transforms() {
        let s = FiniteMetricSpace::euclidean(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 3.0], vec![-1.0, 0.5]])
            .unwrap();
        let same = transform_space(&s, &{
            let mut p = TransformSpec::power(1.0).unwrap();
            check_subadditive(&mut p, &[0.0, 0.5, 1.0, 2.0]);
            p
        })
        .unwrap();
        assert_eq!(same.result.matrix(), s.matrix());

        let mut snow = TransformSpec::power(0.5).unwrap();
        assert!(transform_space(&s, &snow).is_err());
        assert!(check_subadditive(&mut snow, &[0.0, 0.1, 1.0, 3.0, 10.0]));
        let t = transform_space(&s, &snow).unwrap();
        assert_eq!(t.basis, TransformBasis::Subadditive);

        let mut square = TransformSpec::power(2.0).unwrap();
        assert!(!check_subadditive(&mut square, &[0.5, 1.0]));
        assert!(transform_space(&s, &square).is_err());
        assert!(!validate_transformed(&line(&[0.0, 1.0, 2.0]), &square).is_valid());

        let (_, cantor) = CantorSpace::uniform(2, 0.5).unwrap().distance_matrix(3).unwrap();
        let sq = transform_space(&cantor, &square).unwrap();
        assert_eq!(sq.basis, TransformBasis::Ultrametric);
        let rows = transformed_diameter_check(&cantor, &square, &[cantor.subset([0, 3, 5]).unwrap(), cantor.subset([2]).unwrap()])
            .unwrap();
        assert!(rows.iter().all(|r| r.holds));
        assert_eq!(rows[1].transformed, 0.0);
    }
}
