//! Numerical laboratory for two families of infinite conformal iterated
//! function systems on the closed unit disc: an affine family of
//! similarities and a Mobius family extending complex continued fractions.
//!
//! The crate certifies everything it reports: infinite series carry
//! `[lo, hi]` enclosures from integral-comparison tail envelopes, pressure
//! functions are evaluated exactly (affine) or sandwiched (Mobius),
//! Hausdorff dimensions come from certified bisections on pressure signs,
//! and measure phenomena / dimension comparisons are flagged only when a
//! proven route applies. Limit sets render deterministically as exact disc
//! trees.

// Negated comparisons like `!(x > 0.0)` are deliberate: they reject NaN
// inputs along with out-of-range ones, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparison;
pub mod digits;
pub mod dimension;
pub mod error;
pub mod geometry;
pub mod interval;
pub mod pressure;
pub mod render;
pub mod series;

pub use comparison::{
    boundary_angle_power_sum, compare, comparison_digit_threshold, irregular_witness,
    locate_critical_lambda, quad_ratio_root, quad_ratio_root_unit, quad_term_ratio,
    quad_term_ratio_unit, rotated_digit_power_sum, IrregularWitness, Verdict,
};
pub use digits::{
    CifsReport, DigitSequence, Family, GrowthProfile, MembershipReport, SystemSpec,
    TailCertificate,
};
pub use dimension::{
    apply_line_example_routes, density_bounds_at_zero, dimension_gap_threshold, dimension_report,
    hausdorff_dim, measure_phenomena, n_of_r, DimBudget, DimensionReport, Phenomenon, TraceEntry,
};
pub use error::{Error, Result};
pub use geometry::{
    affine_image, generator_disc, letter_alpha, mobius_image, osc_report, Disc, MobiusMatrix,
    OscReport,
};
pub use interval::Interval;
pub use pressure::{
    classify, continued_fraction, finiteness_threshold, finiteness_threshold_estimate,
    pressure_f, pressure_g_sandwich, pressure_g_word_refine, word_derivative, word_map,
    ClassifyBudget, Letter, PressureCurves, PressureMethod, PressureValue, RegularityClass,
    ThetaResult, Word, WordRefinement,
};
pub use render::{
    leaf_discs, leaf_records, rasterize, render_to_file, write_png, write_ppm, LeafDisc,
    RenderOptions, RenderStats,
};
pub use series::{
    log_family_reciprocal_sum, log_family_sum_bracket, sum_series, sum_series_from,
    PreparedSeries, TermForm, DEFAULT_CUTOFF,
};
