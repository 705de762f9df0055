//! Hausdorff content and Hausdorff measure computed as explicit covering
//! optimizations, on finite metric spaces, on Cantor-type sequence spaces and
//! on intervals of the line.
//!
//! ```
//! use hausdorff::{content, Gauge, Interval, Target};
//!
//! let unit = Target::Interval(Interval::new(0.0, 1.0).unwrap());
//! let est = content(&unit, &Gauge::power(1.0).unwrap()).unwrap();
//! assert_eq!(est.value, 1.0);
//! assert!(est.exact);
//! ```
//!
//! The guide in `book/` walks through every module with runnable examples.

pub mod cantor;
pub mod error;
pub mod gauge;
pub mod integrate;
pub mod lipschitz;
pub mod measure;
pub mod metric;
pub mod report;

pub use cantor::{cell_of, cell_relation, BranchingProfile, CantorFile, CantorSpace, Cell, CellRelation, Point, RadiusSchedule};
pub use error::{Error, Result};
pub use gauge::{
    check_gauge, check_subadditive, eval_gauge, rescaled_gauge, similarity_residual, solve_similarity_dimension, Gauge,
    GaugeSpec, TransformForm, TransformSpec,
};
pub use measure::{
    check_separated_superadditivity, content, content_cells, content_exact_finite, covering_cost, hausdorff_measure,
    interval_content, premeasure, trivial_upper_bound, verify_interval_cover, ContentEstimate, Covering, FiniteOptions,
    Interval, Member, Mode, Piece, Target,
};
pub use integrate::{integrate, integrate_seeded, riemann_sum, sample_set, BuiltinFunction, FunctionSpec, Integral, SampleSet, SampleStrategy};
pub use lipschitz::{
    check_image_content, check_real_lipschitz, lipschitz_constant, transform_space, transformed_diameter_check,
    LipschitzMap, TransformedSpace,
};
pub use metric::{validate_metric, validate_ultrametric, BallKind, BallSpec, DistanceMatrix, FiniteMetricSpace, PointSet, ValidationReport};
