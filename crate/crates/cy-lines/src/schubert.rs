//! Expected generic line counts on complete intersections: the top Chern
//! class of the symmetric power of the dual tautological subbundle on the
//! Grassmannian of lines, expanded exactly in the Schur basis.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A symmetric polynomial in two Chern roots, stored by exact integer Schur
/// coefficients over partitions (a, b) with a ≥ b ≥ 0 and a + b = degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricBinaryPoly {
    degree: usize,
    schur_coeffs: BTreeMap<(usize, usize), BigInt>,
}

impl SymmetricBinaryPoly {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn schur_coeff(&self, a: usize, b: usize) -> BigInt {
        self.schur_coeffs
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn schur_coeffs(&self) -> &BTreeMap<(usize, usize), BigInt> {
        &self.schur_coeffs
    }
}

/// Expand ∏ᵢ ∏_{j=0}^{dᵢ} (j·x₁ + (dᵢ−j)·x₂) in the Schur basis
/// s_{(a,b)}(x₁, x₂); the product is the top Chern class of
/// ⊕ᵢ Symᵈⁱ(S*) on the Grassmannian of lines.
pub fn chern_product(degrees: &[usize]) -> Result<SymmetricBinaryPoly> {
    if degrees.is_empty() || degrees.iter().any(|&d| d < 1) {
        return Err(Error::Schema(
            "degrees must be a nonempty list of integers ≥ 1".into(),
        ));
    }
    let total: usize = degrees.iter().map(|&d| d + 1).sum();
    // Dense monomial coefficients: mono[k] multiplies x₁^(m−k) x₂^k.
    let mut mono: Vec<BigInt> = vec![BigInt::one()];
    for &d in degrees {
        for j in 0..=d {
            // multiply by j·x₁ + (d−j)·x₂
            let mut next = vec![BigInt::zero(); mono.len() + 1];
            for (k, c) in mono.iter().enumerate() {
                next[k] += c * BigInt::from(j);
                next[k + 1] += c * BigInt::from(d - j);
            }
            mono = next;
        }
    }
    debug_assert_eq!(mono.len(), total + 1);
    // Symmetry of the factors forces mono[k] == mono[m−k]; convert to the
    // Schur basis: the coefficient of s_{(m−b, b)} is mono[b] − mono[b−1].
    let mut schur_coeffs = BTreeMap::new();
    let mut prev = BigInt::zero();
    for b in 0..=total / 2 {
        let coeff = &mono[b] - &prev;
        if !coeff.is_zero() {
            schur_coeffs.insert((total - b, b), coeff);
        }
        prev = mono[b].clone();
    }
    Ok(SymmetricBinaryPoly {
        degree: total,
        schur_coeffs,
    })
}

/// Result of an expected-count query: either the exact count or a
/// dimension-bookkeeping mismatch report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineCount {
    /// Coefficient of the point class s_{(n−1, n−1)}.
    Count(BigInt),
    /// Σ(dᵢ+1) does not equal the dimension 2(n−1) of the Grassmannian of
    /// lines in Pⁿ.
    DimensionMismatch {
        grassmannian_dim: usize,
        chern_degree: usize,
    },
}

/// Expected number of lines on a generic complete intersection of the given
/// degrees in Pⁿ.
pub fn expected_lines(degrees: &[usize], ambient: usize) -> Result<LineCount> {
    if ambient < 2 {
        return Err(Error::Schema("ambient dimension must be at least 2".into()));
    }
    let product = chern_product(degrees)?;
    let grassmannian_dim = 2 * (ambient - 1);
    if product.degree() != grassmannian_dim {
        return Ok(LineCount::DimensionMismatch {
            grassmannian_dim,
            chern_degree: product.degree(),
        });
    }
    Ok(LineCount::Count(
        product.schur_coeff(ambient - 1, ambient - 1),
    ))
}
