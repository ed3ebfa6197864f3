//! Sparse homogeneous multivariate polynomials over ℂ and dense binary forms.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{is_finite, Scalar, EPS, MAX_CONDITION};
use crate::error::{Error, Result};

/// Sparse homogeneous polynomial in `num_vars` variables with complex
/// coefficients. Every stored exponent vector sums exactly to `degree`, and
/// coefficients below the pruning threshold are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPoly {
    num_vars: usize,
    degree: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl HomogeneousPoly {
    /// The zero polynomial of the given shape.
    pub fn zero(num_vars: usize, degree: usize) -> Self {
        Self {
            num_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Build from (exponent vector, coefficient) pairs; repeated exponent
    /// vectors accumulate.
    pub fn from_terms<I>(num_vars: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = Self::zero(num_vars, degree);
        for (exps, coeff) in terms {
            p.add_term(&exps, coeff)?;
        }
        p.prune();
        Ok(p)
    }

    /// A single monomial `coeff · x^exps`.
    pub fn monomial(num_vars: usize, exps: &[u32], coeff: Scalar) -> Result<Self> {
        let degree = exps.iter().sum::<u32>() as usize;
        Self::from_terms(num_vars, degree, [(exps.to_vec(), coeff)])
    }

    fn add_term(&mut self, exps: &[u32], coeff: Scalar) -> Result<()> {
        if exps.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector has length {}, polynomial has {} variables",
                exps.len(),
                self.num_vars
            )));
        }
        if exps.iter().sum::<u32>() as usize != self.degree {
            return Err(Error::InvalidPoly(format!(
                "exponents {:?} sum to {}, expected degree {}",
                exps,
                exps.iter().sum::<u32>(),
                self.degree
            )));
        }
        if !is_finite(coeff) {
            return Err(Error::NonFinite(format!("coefficient of {:?}", exps)));
        }
        let entry = self.terms.entry(exps.to_vec()).or_insert(Scalar::new(0.0, 0.0));
        *entry += coeff;
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).copied().unwrap_or(Scalar::new(0.0, 0.0))
    }

    /// Largest coefficient magnitude; 0 for the zero polynomial.
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop coefficients with magnitude below `EPS` times the largest one.
    fn prune(&mut self) {
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            self.terms.clear();
            return;
        }
        let threshold = EPS * scale;
        self.terms.retain(|_, c| c.norm() >= threshold);
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.num_vars, other.num_vars
            )));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut out = self.clone();
        for (exps, c) in &other.terms {
            *out.terms.entry(exps.clone()).or_insert(Scalar::new(0.0, 0.0)) += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: Scalar) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune();
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.num_vars, other.num_vars
            )));
        }
        let mut out = Self::zero(self.num_vars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.terms.entry(exps).or_insert(Scalar::new(0.0, 0.0)) += ca * cb;
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.num_vars
            )));
        }
        let mut acc = Scalar::new(0.0, 0.0);
        for (exps, c) in &self.terms {
            let mut m = *c;
            for (x, &e) in point.iter().zip(exps) {
                m *= x.powu(e);
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Result<Self> {
        if var >= self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "variable index {} out of range for {} variables",
                var, self.num_vars
            )));
        }
        if self.degree == 0 {
            return Ok(Self::zero(self.num_vars, 0));
        }
        let mut out = Self::zero(self.num_vars, self.degree - 1);
        for (exps, c) in &self.terms {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let mut new_exps = exps.clone();
            new_exps[var] = e - 1;
            *out.terms.entry(new_exps).or_insert(Scalar::new(0.0, 0.0)) += c * e as f64;
        }
        out.prune();
        Ok(out)
    }

    /// Substitute the coordinate change `x = A · y`, returning `r` with
    /// `r(y) = p(A·y)`. `A` must be square with matching size and condition
    /// number below `MAX_CONDITION`.
    pub fn change_coordinates(&self, a: &DMatrix<Scalar>) -> Result<Self> {
        if a.nrows() != self.num_vars || a.ncols() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, polynomial has {} variables",
                a.nrows(),
                a.ncols(),
                self.num_vars
            )));
        }
        let sv = a.clone().singular_values();
        let (smax, smin) = (sv[0], sv[sv.len() - 1]);
        if smin <= 0.0 || smax / smin > MAX_CONDITION {
            return Err(Error::IllConditioned {
                cond: if smin > 0.0 { smax / smin } else { f64::INFINITY },
            });
        }
        // Row i of A gives the linear form replacing x_i.
        let linear_forms: Vec<HomogeneousPoly> = (0..self.num_vars)
            .map(|i| {
                let mut lf = Self::zero(self.num_vars, 1);
                for j in 0..self.num_vars {
                    let c = a[(i, j)];
                    if c.norm() > 0.0 {
                        let mut exps = vec![0u32; self.num_vars];
                        exps[j] = 1;
                        lf.terms.insert(exps, c);
                    }
                }
                lf
            })
            .collect();
        let mut out = Self::zero(self.num_vars, self.degree);
        for (exps, c) in &self.terms {
            let mut term = Self::monomial(self.num_vars, &vec![0; self.num_vars], *c)?;
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&linear_forms[i])?;
                }
            }
            out = Self {
                num_vars: self.num_vars,
                degree: self.degree,
                terms: {
                    let mut t = out.terms;
                    for (e, cc) in term.terms {
                        *t.entry(e).or_insert(Scalar::new(0.0, 0.0)) += cc;
                    }
                    t
                },
            };
        }
        out.prune();
        Ok(out)
    }

    /// Restrict to the line `(s,t) ↦ s·p0 + t·p1`, producing a binary form in
    /// `(s,t)` of the same degree.
    pub fn substitute_line(&self, p0: &[Scalar], p1: &[Scalar]) -> Result<BinaryForm> {
        if p0.len() != self.num_vars || p1.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "line points have {}/{} coordinates, polynomial has {} variables",
                p0.len(),
                p1.len(),
                self.num_vars
            )));
        }
        let mut acc = BinaryForm::zero(self.degree);
        for (exps, c) in &self.terms {
            let mut form = BinaryForm::constant(*c);
            for (i, &e) in exps.iter().enumerate() {
                let lin = BinaryForm::linear(p0[i], p1[i]);
                for _ in 0..e {
                    form = form.mul(&lin);
                }
            }
            acc = acc.add(&form).expect("degrees match by homogeneity");
        }
        Ok(acc)
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for (i, &e) in exps.iter().enumerate() {
                if e == 1 {
                    write!(f, "·x{}", i)?;
                } else if e > 1 {
                    write!(f, "·x{}^{}", i, e)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    num_vars: usize,
    degree: usize,
    terms: Vec<TermJson>,
}

impl Serialize for HomogeneousPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            num_vars: self.num_vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(exps, c)| TermJson {
                    exps: exps.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HomogeneousPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        HomogeneousPoly::from_terms(
            raw.num_vars,
            raw.degree,
            raw.terms
                .into_iter()
                .map(|t| (t.exps, Scalar::new(t.re, t.im))),
        )
        .map_err(|e| D::Error::custom(format!("invalid polynomial: {e}")))
    }
}

/// Dense binary form in `(s,t)`: `coeffs[j]` is the coefficient of
/// `s^(degree-j) t^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![Scalar::new(0.0, 0.0); degree + 1],
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self {
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// The linear form `a·s + b·t`.
    pub fn linear(a: Scalar, b: Scalar) -> Self {
        Self {
            degree: 1,
            coeffs: vec![a, b],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty());
        Self {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Scalar {
        self.coeffs[j]
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![Scalar::new(0.0, 0.0); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self { degree, coeffs }
    }

    pub fn scale(&self, factor: Scalar) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn eval(&self, s: Scalar, t: Scalar) -> Scalar {
        let mut acc = Scalar::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            acc += c * s.powu((self.degree - j) as u32) * t.powu(j as u32);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(num_vars: usize, i: usize, e: u32) -> HomogeneousPoly {
        let mut exps = vec![0u32; num_vars];
        exps[i] = e;
        HomogeneousPoly::monomial(num_vars, &exps, Scalar::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn additive_inverse_gives_zero() {
        let p = x(6, 0, 3);
        let sum = p.add(&p.neg()).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn monomial_product() {
        let p = x(2, 0, 1).mul(&x(2, 1, 1)).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.num_terms(), 1);
        assert!((p.coeff(&[1, 1]) - Scalar::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn mul_by_one_matches_pencil_member_minus_mixed_term() {
        // x0^3 + x1^3 + x2^3 times 1, compared against the first pencil
        // equation x0^3 + x1^3 + x2^3 - 3λ x3 x4 x5 with the mixed term
        // removed (λ = 2).
        let cubes = x(6, 0, 3).add(&x(6, 1, 3)).unwrap().add(&x(6, 2, 3)).unwrap();
        let one = HomogeneousPoly::monomial(6, &[0; 6], Scalar::new(1.0, 0.0)).unwrap();
        let prod = cubes.mul(&one).unwrap();

        let lambda = Scalar::new(2.0, 0.0);
        let mixed = HomogeneousPoly::monomial(6, &[0, 0, 0, 1, 1, 1], -3.0 * lambda).unwrap();
        let pencil = cubes.add(&mixed).unwrap();
        let recovered = pencil.sub(&mixed).unwrap();
        assert!(prod.sub(&recovered).unwrap().is_zero());
    }

    #[test]
    fn degree_mismatch_rejected() {
        assert!(x(2, 0, 1).add(&x(2, 0, 2)).is_err());
        assert!(x(2, 0, 1).add(&x(3, 0, 1)).is_err());
    }

    #[test]
    fn change_coordinates_identity() {
        let p = x(3, 0, 2).add(&x(3, 1, 2).scale(Scalar::new(0.0, 1.0))).unwrap();
        let id = DMatrix::<Scalar>::identity(3, 3);
        let q = p.change_coordinates(&id).unwrap();
        assert!(p.sub(&q).unwrap().is_zero());
    }

    #[test]
    fn change_coordinates_swap() {
        let p = x(3, 0, 3);
        let mut a = DMatrix::<Scalar>::zeros(3, 3);
        a[(0, 1)] = Scalar::new(1.0, 0.0);
        a[(1, 0)] = Scalar::new(1.0, 0.0);
        a[(2, 2)] = Scalar::new(1.0, 0.0);
        let q = p.change_coordinates(&a).unwrap();
        assert!(q.sub(&x(3, 1, 3)).unwrap().is_zero());
    }

    #[test]
    fn change_coordinates_rejects_singular() {
        let p = x(2, 0, 1);
        let a = DMatrix::<Scalar>::zeros(2, 2);
        assert!(matches!(
            p.change_coordinates(&a),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn substitute_line_cancels_on_fermat() {
        // (s:-s:t:-t:0) on x0^5 + ... + x4^5 cancels pairwise.
        let quintic = (0..5)
            .map(|i| x(5, i, 5))
            .reduce(|a, b| a.add(&b).unwrap())
            .unwrap();
        let p0 = [
            Scalar::new(1.0, 0.0),
            Scalar::new(-1.0, 0.0),
            Scalar::new(0.0, 0.0),
            Scalar::new(0.0, 0.0),
            Scalar::new(0.0, 0.0),
        ];
        let p1 = [
            Scalar::new(0.0, 0.0),
            Scalar::new(0.0, 0.0),
            Scalar::new(1.0, 0.0),
            Scalar::new(-1.0, 0.0),
            Scalar::new(0.0, 0.0),
        ];
        let bf = quintic.substitute_line(&p0, &p1).unwrap();
        assert_eq!(bf.max_coeff_norm(), 0.0);
    }

    #[test]
    fn poly_json_roundtrip() {
        let p = x(6, 0, 3).add(&x(6, 2, 3).scale(Scalar::new(-2.0, 0.5))).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let q: HomogeneousPoly = serde_json::from_str(&json).unwrap();
        assert!(p.sub(&q).unwrap().is_zero());
    }

    #[test]
    fn poly_json_rejects_inhomogeneous() {
        let bad = r#"{"num_vars":2,"degree":3,"terms":[{"exps":[1,1],"re":1.0,"im":0.0}]}"#;
        assert!(serde_json::from_str::<HomogeneousPoly>(bad).is_err());
    }
}
