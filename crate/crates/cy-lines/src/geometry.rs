//! Projective lines with canonical Plücker forms, incidence certification,
//! and complete-intersection varieties with the Calabi-Yau check.

use nalgebra::{DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{HomogeneousPoly, Scalar, EPS};
use crate::error::{Error, Result};

/// Magnitude threshold for picking the phase-normalization pivot of a
/// canonical Plücker vector.
const PIVOT_TOL: f64 = 1e-6;

/// A projective line in Pⁿ, stored as a 2×(n+1) spanning matrix whose rows
/// are two distinct projective points. Rows are normalized to unit norm at
/// construction.
#[derive(Clone, Debug)]
pub struct Line {
    span: DMatrix<Scalar>,
}

impl Line {
    /// Build a line from two spanning points. Fails if the span has
    /// numerical rank below 2.
    pub fn new(p0: &[Scalar], p1: &[Scalar]) -> Result<Self> {
        if p0.len() != p1.len() {
            return Err(Error::DimensionMismatch(format!(
                "spanning points have {} and {} coordinates",
                p0.len(),
                p1.len()
            )));
        }
        if p0.len() < 2 {
            return Err(Error::DimensionMismatch(
                "a line needs at least two coordinates".into(),
            ));
        }
        let mut span = DMatrix::<Scalar>::zeros(2, p0.len());
        for (j, &z) in p0.iter().enumerate() {
            span[(0, j)] = z;
        }
        for (j, &z) in p1.iter().enumerate() {
            span[(1, j)] = z;
        }
        for r in 0..2 {
            let norm = span.row(r).norm();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::RankDeficientSpan { sigma: 0.0 });
            }
            for j in 0..span.ncols() {
                span[(r, j)] /= Scalar::new(norm, 0.0);
            }
        }
        let sv = span.clone().singular_values();
        let sigma2 = sv[sv.len() - 1];
        if sigma2 <= EPS.sqrt() * sv[0] {
            return Err(Error::RankDeficientSpan { sigma: sigma2 });
        }
        Ok(Self { span })
    }

    /// Number of homogeneous coordinates, n+1 for a line in Pⁿ.
    pub fn num_coords(&self) -> usize {
        self.span.ncols()
    }

    pub fn span(&self) -> &DMatrix<Scalar> {
        &self.span
    }

    pub fn point(&self, row: usize) -> Vec<Scalar> {
        self.span.row(row).iter().copied().collect()
    }

    /// Plücker vector: the 2×2 minors p_{ij} = x_i y_j − x_j y_i for i < j in
    /// lexicographic order.
    pub fn plucker(&self) -> DVector<Scalar> {
        let n = self.num_coords();
        let mut v = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                v.push(self.span[(0, i)] * self.span[(1, j)] - self.span[(0, j)] * self.span[(1, i)]);
            }
        }
        DVector::from_vec(v)
    }

    /// Unit-norm Plücker vector with the first entry of magnitude above the
    /// pivot threshold rotated to be real and positive. Two `Line`s represent
    /// the same projective line iff these vectors agree within tolerance.
    pub fn canonical_plucker(&self) -> DVector<Scalar> {
        let mut v = self.plucker();
        let norm = v.norm();
        v /= Scalar::new(norm, 0.0);
        if let Some(pivot) = v.iter().find(|z| z.norm() > PIVOT_TOL) {
            let phase = pivot.conj() / Scalar::new(pivot.norm(), 0.0);
            v *= phase;
        }
        v
    }

    /// Tolerance-based projective equality via canonical Plücker vectors.
    pub fn same_line(&self, other: &Line, tol: f64) -> bool {
        if self.num_coords() != other.num_coords() {
            return false;
        }
        (self.canonical_plucker() - other.canonical_plucker()).norm() <= tol
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct LineJson {
    span: Vec<Vec<ComplexJson>>,
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LineJson {
            span: (0..2)
                .map(|r| {
                    self.span
                        .row(r)
                        .iter()
                        .map(|z| ComplexJson { re: z.re, im: z.im })
                        .collect()
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = LineJson::deserialize(deserializer)?;
        if raw.span.len() != 2 {
            return Err(D::Error::custom("line span must have exactly two rows"));
        }
        let to_vec = |row: &[ComplexJson]| -> Vec<Scalar> {
            row.iter().map(|z| Scalar::new(z.re, z.im)).collect()
        };
        Line::new(&to_vec(&raw.span[0]), &to_vec(&raw.span[1]))
            .map_err(|e| D::Error::custom(format!("invalid line: {e}")))
    }
}

/// Result of the Calabi-Yau adjunction check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyCheck {
    /// Σdᵢ = n + 1, i.e. the canonical bundle is trivial.
    pub is_cy: bool,
    /// n = k + 3, i.e. the complete intersection is a threefold.
    pub is_threefold: bool,
}

/// A complete intersection in Pⁿ: the common zero locus of k defining
/// polynomials in n+1 variables, k < n.
#[derive(Clone, Debug)]
pub struct CompleteIntersection {
    ambient_dim: usize,
    polys: Vec<HomogeneousPoly>,
}

impl CompleteIntersection {
    pub fn new(ambient_dim: usize, polys: Vec<HomogeneousPoly>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidVariety("no defining polynomials".into()));
        }
        if polys.len() >= ambient_dim {
            return Err(Error::InvalidVariety(format!(
                "codimension {} is not below ambient dimension {}",
                polys.len(),
                ambient_dim
            )));
        }
        for (i, p) in polys.iter().enumerate() {
            if p.is_zero() {
                return Err(Error::InvalidVariety(format!("polynomial {i} is zero")));
            }
            if p.num_vars() != ambient_dim + 1 {
                return Err(Error::InvalidVariety(format!(
                    "polynomial {i} has {} variables, ambient P^{} needs {}",
                    p.num_vars(),
                    ambient_dim,
                    ambient_dim + 1
                )));
            }
        }
        Ok(Self { ambient_dim, polys })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn polys(&self) -> &[HomogeneousPoly] {
        &self.polys
    }

    pub fn codim(&self) -> usize {
        self.polys.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.degree()).collect()
    }

    /// Adjunction check: the canonical bundle is trivial iff Σdᵢ = n + 1.
    pub fn cy_check(&self) -> CyCheck {
        let sum: usize = self.degrees().iter().sum();
        CyCheck {
            is_cy: sum == self.ambient_dim + 1,
            is_threefold: self.ambient_dim == self.codim() + 3,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VarietyJson {
    ambient_dim: usize,
    polys: Vec<HomogeneousPoly>,
}

impl Serialize for CompleteIntersection {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VarietyJson {
            ambient_dim: self.ambient_dim,
            polys: self.polys.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CompleteIntersection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = VarietyJson::deserialize(deserializer)?;
        CompleteIntersection::new(raw.ambient_dim, raw.polys)
            .map_err(|e| D::Error::custom(format!("invalid variety: {e}")))
    }
}

/// Incidence certificate: whether the line lies on the variety, and the
/// largest normalized coefficient of the restricted defining polynomials.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Incidence {
    pub incident: bool,
    pub residual: f64,
}

/// Substitute the line parametrization into each defining polynomial and
/// test that all binary-form coefficients vanish within `tol` times the
/// coefficient scale of the polynomial.
pub fn lies_on(l: &Line, x: &CompleteIntersection, tol: f64) -> Result<Incidence> {
    if l.num_coords() != x.ambient_dim + 1 {
        return Err(Error::DimensionMismatch(format!(
            "line has {} coordinates, variety lives in P^{}",
            l.num_coords(),
            x.ambient_dim
        )));
    }
    let p0 = l.point(0);
    let p1 = l.point(1);
    let mut residual: f64 = 0.0;
    for p in &x.polys {
        let bf = p.substitute_line(&p0, &p1)?;
        let scale = p.max_coeff_norm();
        residual = residual.max(bf.max_coeff_norm() / scale);
    }
    Ok(Incidence {
        incident: residual <= tol,
        residual,
    })
}
