//! Inputs shared by the benchmarks.

use bilinear_core::mat2::Mat2;

/// Drift/control pairs covering the main analysis paths.
pub fn sample_pairs() -> Vec<(&'static str, Mat2, Mat2)> {
    vec![
        ("two_real_roots", Mat2::new(2.0, -1.0, 0.0, 1.0), Mat2::new(0.0, 1.0, -1.0, 0.0)),
        ("rotation_scalar", Mat2::new(0.3, -2.0, 2.0, 0.3), Mat2::scalar(1.5)),
        ("shared_eigenvector", Mat2::new(1.0, 0.0, 0.0, 2.0), Mat2::new(3.0, 1.0, 0.0, -1.0)),
        ("traceless", Mat2::new(1.0, 2.0, -3.0, 0.5), Mat2::new(0.0, 1.0, 1.0, 0.0)),
    ]
}
