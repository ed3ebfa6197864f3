//! Univariate complex root finding via companion-matrix eigenvalues with one
//! Newton polishing step; quadratics are solved in closed form.

use nalgebra::DMatrix;

use super::{Scalar, EPS};
use crate::error::{Error, Result};

/// All roots (with multiplicity) of the polynomial with ascending
/// coefficients `coeffs[k] · z^k`. Trailing coefficients below `EPS` times
/// the coefficient scale are trimmed first.
pub fn univariate_roots(coeffs: &[Scalar]) -> Result<Vec<Scalar>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 || coeffs.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut trimmed: Vec<Scalar> = coeffs.to_vec();
    while let Some(last) = trimmed.last() {
        if last.norm() <= EPS * scale && trimmed.len() > 1 {
            trimmed.pop();
        } else {
            break;
        }
    }
    let degree = trimmed.len() - 1;
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }

    let mut roots = match degree {
        1 => vec![-trimmed[0] / trimmed[1]],
        2 => quadratic_roots(trimmed[0], trimmed[1], trimmed[2]),
        _ => companion_eigenvalues(&trimmed),
    };
    for r in roots.iter_mut() {
        *r = newton_polish(&trimmed, *r);
    }
    super::sort_scalars(&mut roots);
    Ok(roots)
}

/// Roots of `c0 + c1·z + c2·z²` by the numerically stable quadratic formula.
fn quadratic_roots(c0: Scalar, c1: Scalar, c2: Scalar) -> Vec<Scalar> {
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    // Pick the sign that avoids cancellation in c1 ± disc.
    let q = if (c1 + disc).norm() >= (c1 - disc).norm() {
        -0.5 * (c1 + disc)
    } else {
        -0.5 * (c1 - disc)
    };
    if q.norm() == 0.0 {
        // c1 = disc = 0: double root at zero shifted by nothing.
        let r = (-c0 / c2).sqrt();
        return vec![r, -r];
    }
    vec![q / c2, c0 / q]
}

fn companion_eigenvalues(coeffs: &[Scalar]) -> Vec<Scalar> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut m = DMatrix::<Scalar>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Scalar::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    m.schur()
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

fn newton_polish(coeffs: &[Scalar], z: Scalar) -> Scalar {
    let (mut p, mut dp) = (Scalar::new(0.0, 0.0), Scalar::new(0.0, 0.0));
    // Horner evaluation of p and p' from the top coefficient down.
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    if dp.norm() > EPS * coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max) {
        z - p / dp
    } else {
        z
    }
}
