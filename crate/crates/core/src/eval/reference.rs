//! Published figures that depend on data and model weights we do not have.
//! They are kept for comparison only; nothing in the test suite targets them.

/// Mean confidence across all single-alignment data points.
pub const MEAN_CONFIDENCE: f64 = 0.821;
/// Average confidence quoted for the mixed-source queries, population unclear.
pub const OTHER_MEAN_CONFIDENCE: f64 = 0.792;

/// Classifier scores from the two worked example sessions.
pub const EXAMPLE_BIASED_SCORE: f64 = 0.7811554670333862;
pub const EXAMPLE_UNBIASED_SCORE: f64 = 0.7738906145095825;

pub const BIASED_PRECISION: f64 = 0.818;
pub const BIASED_RECALL: f64 = 0.9;
pub const BIASED_F1: f64 = 0.857;
pub const BIASED_SUPPORT: u64 = 20;
pub const NON_BIASED_PRECISION: f64 = 0.714;
pub const NON_BIASED_RECALL: f64 = 0.714;
pub const NON_BIASED_F1: f64 = 0.714;
pub const NON_BIASED_SUPPORT: u64 = 14;
pub const WEIGHTED_PRECISION: f64 = 0.773;
pub const WEIGHTED_RECALL: f64 = 0.811;
pub const WEIGHTED_F1: f64 = 0.795;
pub const MACRO_PRECISION: f64 = 0.766;
pub const MACRO_RECALL: f64 = 0.807;
pub const MACRO_F1: f64 = 0.7869;
