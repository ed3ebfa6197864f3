//! Computational substrate: complex scalars with tolerance-based comparison,
//! sparse homogeneous polynomials, binary forms, univariate root finding and
//! numeric nullspaces.

pub mod nullspace;
pub mod poly;
pub mod roots;

pub use nullspace::numeric_nullspace;
pub use poly::{BinaryForm, HomogeneousPoly};
pub use roots::univariate_roots;

use num_complex::Complex64;

/// Default relative tolerance for zero tests, scaled by the magnitude of the
/// object under test.
pub const EPS: f64 = 1e-9;

/// Absolute tolerance on canonical Plücker vectors for line equality.
pub const LINE_TOL: f64 = 1e-7;

/// Relative singular-value cutoff for rank decisions in syzygy searches.
pub const NULLSPACE_TOL: f64 = 1e-8;

/// Distance to a degeneracy locus below which family parameters are rejected.
pub const DEGENERACY_TOL: f64 = 1e-6;

/// Distance to a degeneracy locus below which a warning is attached.
pub const NEAR_DEGENERACY_TOL: f64 = 1e-3;

/// Condition-number bound for linear coordinate changes.
pub const MAX_CONDITION: f64 = 1e8;

/// Complex scalar used throughout; equality is always tolerance-based.
pub type Scalar = Complex64;

pub fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn approx_eq(a: Scalar, b: Scalar, tol: f64) -> bool {
    (a - b).norm() <= tol
}

/// All `k`-th roots of `w`, sorted by (real part, imaginary part) for
/// deterministic fan-out.
pub fn kth_roots(w: Scalar, k: u32) -> Vec<Scalar> {
    let r = w.norm().powf(1.0 / k as f64);
    let theta = w.arg();
    let mut out: Vec<Scalar> = (0..k)
        .map(|j| {
            Scalar::from_polar(r, (theta + 2.0 * std::f64::consts::PI * j as f64) / k as f64)
        })
        .collect();
    sort_scalars(&mut out);
    out
}

/// Sort by (real part, imaginary part); used to make root orderings stable.
pub fn sort_scalars(v: &mut [Scalar]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}
