//! Closed-form construction of the line families: 36 lines on the (3,3)
//! pencil and 8 seed lines on the (2,2,2,2) family, with degeneracy
//! detection from the discriminants of the governing equations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    kth_roots, univariate_roots, HomogeneousPoly, Scalar, DEGENERACY_TOL, LINE_TOL,
    NEAR_DEGENERACY_TOL,
};
use crate::error::{Error, Result};
use crate::geometry::{lies_on, CompleteIntersection, Line};

/// Incidence tolerance for freshly constructed lines.
const CONSTRUCTION_TOL: f64 = 1e-8;

/// A fixed primitive third root of unity, exp(2πi/3).
pub fn omega() -> Scalar {
    Scalar::from_polar(1.0, 2.0 * PI / 3.0)
}

fn one() -> Scalar {
    Scalar::new(1.0, 0.0)
}

fn zero() -> Scalar {
    Scalar::new(0.0, 0.0)
}

/// Which line family a value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    ThreeThree,
    TwoTwoTwoTwo,
}

/// Pencil parameter for the (3,3) family; degenerate when λ = 0 or λ⁶ ∈ {1, 4}.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Family33Params {
    pub lambda: Scalar,
}

impl Family33Params {
    pub fn new(lambda: Scalar) -> Self {
        Self { lambda }
    }

    /// Distance to the nearest degeneracy locus, with a description of the
    /// locus hit when within tolerance.
    fn degeneracy(&self) -> (f64, String) {
        let l6 = self.lambda.powu(6);
        let candidates = [
            (self.lambda.norm(), "λ = 0".to_string()),
            (
                (l6 - one()).norm(),
                "λ⁶ = 1: the quadratic in c³ has the double root u = -1/8".to_string(),
            ),
            (
                (l6 - Scalar::new(4.0, 0.0)).norm(),
                "λ⁶ = 4: the quadratic in c³ has the double root u = 1/4".to_string(),
            ),
        ];
        candidates
            .into_iter()
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
            .unwrap()
    }
}

/// Parameters for the (2,2,2,2) family; degenerate when λ² = 1 or μ = 0.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Family2222Params {
    pub lambda: Scalar,
    pub mu: Scalar,
}

impl Family2222Params {
    pub fn new(lambda: Scalar, mu: Scalar) -> Self {
        Self { lambda, mu }
    }

    fn degeneracy(&self) -> (f64, String) {
        let l2 = self.lambda * self.lambda;
        let candidates = [
            (self.mu.norm(), "μ = 0".to_string()),
            (
                (l2 - one()).norm(),
                "λ² = 1: q² + 2λq + 1 has a double root and λq + 1 vanishes".to_string(),
            ),
        ];
        candidates
            .into_iter()
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
            .unwrap()
    }
}

/// One of the 36 lines on the (3,3) pencil with its solution scalars.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineSolution33 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub p: Scalar,
    pub line: Line,
    pub residual: f64,
}

/// One of the 8 seed lines on the (2,2,2,2) family with its scalars.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineSolution2222 {
    pub a: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub q: Scalar,
    pub line: Line,
    pub residual: f64,
}

/// Construction output: the solutions plus any near-degeneracy warnings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Constructed<T> {
    pub solutions: Vec<T>,
    pub warnings: Vec<String>,
}

/// The defining cubics of the (3,3) pencil member X_λ.
pub fn build_family_33(lambda: Scalar) -> CompleteIntersection {
    let cube = |i: usize| {
        let mut e = vec![0u32; 6];
        e[i] = 3;
        HomogeneousPoly::monomial(6, &e, one()).unwrap()
    };
    let mixed = |i: usize, j: usize, k: usize| {
        let mut e = vec![0u32; 6];
        e[i] = 1;
        e[j] = 1;
        e[k] = 1;
        HomogeneousPoly::monomial(6, &e, -3.0 * lambda).unwrap()
    };
    let f = cube(0)
        .add(&cube(1))
        .unwrap()
        .add(&cube(2))
        .unwrap()
        .add(&mixed(3, 4, 5))
        .unwrap();
    let g = cube(3)
        .add(&cube(4))
        .unwrap()
        .add(&cube(5))
        .unwrap()
        .add(&mixed(0, 1, 2))
        .unwrap();
    CompleteIntersection::new(5, vec![f, g]).unwrap()
}

/// The four defining quadrics of the (2,2,2,2) family member X_{λ,μ}. Each
/// quadric omits exactly one pair of squares and carries one mixed term.
pub fn build_family_2222(lambda: Scalar, mu: Scalar) -> CompleteIntersection {
    let square = |i: usize| {
        let mut e = vec![0u32; 8];
        e[i] = 2;
        HomogeneousPoly::monomial(8, &e, one()).unwrap()
    };
    let mixed = |i: usize, j: usize, coeff: Scalar| {
        let mut e = vec![0u32; 8];
        e[i] = 1;
        e[j] = 1;
        HomogeneousPoly::monomial(8, &e, -2.0 * coeff).unwrap()
    };
    // Each quadric omits the squares of the pair carrying its mixed term.
    let quadric = |mix: (usize, usize), coeff: Scalar| {
        let mut q = HomogeneousPoly::zero(8, 2);
        for i in 0..8 {
            if i != mix.0 && i != mix.1 {
                q = q.add(&square(i)).unwrap();
            }
        }
        q.add(&mixed(mix.0, mix.1, coeff)).unwrap()
    };
    let polys = vec![
        quadric((6, 7), mu),
        quadric((4, 5), lambda),
        quadric((2, 3), lambda),
        quadric((0, 1), lambda),
    ];
    CompleteIntersection::new(7, polys).unwrap()
}

/// The 36 lines joining the invariant subspaces of the involution (12)(45)
/// on the (3,3) pencil member X_λ, parametrized as
/// (at+s : at−s : bt : ct+ps : ct−ps : t).
pub fn lines_33(params: Family33Params) -> Result<Constructed<LineSolution33>> {
    let (dist, locus) = params.degeneracy();
    if dist < DEGENERACY_TOL {
        return Err(Error::DegenerateFamily(format!("(3,3) pencil: {locus}")));
    }
    let mut warnings = Vec::new();
    if dist < NEAR_DEGENERACY_TOL {
        warnings.push(format!(
            "λ is within {dist:.3e} of the degeneracy locus {locus}; output is best-effort"
        ));
    }

    let lambda = params.lambda;
    let x = build_family_33(lambda);
    let l6 = lambda.powu(6);

    // 64 u² − (16λ⁶ − 32) u + λ⁶ = 0 with u = c³.
    let mut u_roots = univariate_roots(&[l6, -(16.0 * l6 - Scalar::new(32.0, 0.0)), Scalar::new(64.0, 0.0)])?;
    crate::algebra::sort_scalars(&mut u_roots);

    let mut solutions = Vec::with_capacity(36);
    for u in u_roots {
        for c in kth_roots(u, 3) {
            let a_cubed = (2.0 * c.powu(3) + one()) * lambda / (12.0 * c);
            for a in kth_roots(a_cubed, 3) {
                let b = 4.0 * a * c / (lambda * lambda);
                let p_squared = -2.0 * a / lambda;
                for p in kth_roots(p_squared, 2) {
                    // V+ point at (s:t) = (0:1), V- point at (1:0).
                    let p_plus = [a, a, b, c, c, one()];
                    let p_minus = [one(), -one(), zero(), p, -p, zero()];
                    let line = Line::new(&p_plus, &p_minus)?;
                    let inc = lies_on(&line, &x, CONSTRUCTION_TOL)?;
                    if !inc.incident {
                        return Err(Error::NotOnVariety {
                            residual: inc.residual,
                        });
                    }
                    solutions.push(LineSolution33 {
                        a,
                        b,
                        c,
                        p,
                        line,
                        residual: inc.residual,
                    });
                }
            }
        }
    }
    check_distinct(solutions.iter().map(|s| &s.line), &mut warnings);
    Ok(Constructed {
        solutions,
        warnings,
    })
}

/// The 8 lines on X_{λ,μ} joining the invariant subspaces of the order-3
/// automorphism (135)(246), parametrized as
/// (s+at : qs+t : ωs+at : ωqs+t : ω²s+at : ω²qs+t : ct : dt).
pub fn lines_2222(params: Family2222Params) -> Result<Constructed<LineSolution2222>> {
    let (dist, locus) = params.degeneracy();
    if dist < DEGENERACY_TOL {
        return Err(Error::DegenerateFamily(format!(
            "(2,2,2,2) family: {locus}"
        )));
    }
    let mut warnings = Vec::new();
    if dist < NEAR_DEGENERACY_TOL {
        warnings.push(format!(
            "(λ, μ) is within {dist:.3e} of the degeneracy locus {locus}; output is best-effort"
        ));
    }

    let (lambda, mu) = (params.lambda, params.mu);
    let x = build_family_2222(lambda, mu);
    let w = omega();

    // q² + 2λq + 1 = 0.
    let q_roots = univariate_roots(&[one(), 2.0 * lambda, one()])?;

    let mut solutions = Vec::with_capacity(8);
    for q in q_roots {
        let denom = lambda * q + one();
        if denom.norm() < DEGENERACY_TOL {
            return Err(Error::DegenerateFamily(
                "(2,2,2,2) family: λq + 1 vanishes at a root q".into(),
            ));
        }
        let a = -(lambda + q) / denom;
        // Incidence forces c² + d² + 2a² − 2λa + 2 = 0 with d = (3a²+3)/(2μc);
        // in terms of w = c² that is w² + (2a² − 2λa + 2)w + (3a²+3)²/(4μ²) = 0.
        let quad_lin = 2.0 * a * a - 2.0 * lambda * a + Scalar::new(2.0, 0.0);
        let numer = 3.0 * a * a + Scalar::new(3.0, 0.0);
        let quad_const = numer * numer / (4.0 * mu * mu);
        let w_roots = univariate_roots(&[quad_const, quad_lin, one()])?;
        for wr in w_roots {
            if wr.norm() < DEGENERACY_TOL {
                return Err(Error::DegenerateFamily(
                    "(2,2,2,2) family: vanishing root c = 0".into(),
                ));
            }
            for c in kth_roots(wr, 2) {
                let d = numer / (2.0 * mu * c);
                // V_ω point at (s:t) = (1:0), V+ point at (0:1).
                let p_omega = [one(), q, w, w * q, w * w, w * w * q, zero(), zero()];
                let p_plus = [a, one(), a, one(), a, one(), c, d];
                let line = Line::new(&p_omega, &p_plus)?;
                let inc = lies_on(&line, &x, CONSTRUCTION_TOL)?;
                if !inc.incident {
                    return Err(Error::NotOnVariety {
                        residual: inc.residual,
                    });
                }
                solutions.push(LineSolution2222 {
                    a,
                    c,
                    d,
                    q,
                    line,
                    residual: inc.residual,
                });
            }
        }
    }
    check_distinct(solutions.iter().map(|s| &s.line), &mut warnings);
    Ok(Constructed {
        solutions,
        warnings,
    })
}

fn check_distinct<'a, I>(lines: I, warnings: &mut Vec<String>)
where
    I: Iterator<Item = &'a Line>,
{
    let canon: Vec<_> = lines.map(|l| l.canonical_plucker()).collect();
    for i in 0..canon.len() {
        for j in (i + 1)..canon.len() {
            if (&canon[i] - &canon[j]).norm() <= LINE_TOL {
                warnings.push(format!("constructed lines {i} and {j} coincide"));
            }
        }
    }
}

/// The pairs of invariant subspaces the constructed lines join, as row
/// bases of linear subspaces of ℂ^{n+1}.
fn invariant_subspace_bases(family: Family) -> (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>) {
    let e = |n: usize, i: usize| {
        let mut v = vec![zero(); n];
        v[i] = one();
        v
    };
    match family {
        Family::ThreeThree => {
            // V+ = {(a:a:b:c:c:d)}, V- = {(q:-q:0:p:-p:0)}.
            let mut e01 = e(6, 0);
            e01[1] = one();
            let mut e34 = e(6, 3);
            e34[4] = one();
            let v_plus = vec![e01, e(6, 2), e34, e(6, 5)];
            let mut m01 = e(6, 0);
            m01[1] = -one();
            let mut m34 = e(6, 3);
            m34[4] = -one();
            let v_minus = vec![m01, m34];
            (v_plus, v_minus)
        }
        Family::TwoTwoTwoTwo => {
            // V+ = {(a:b:a:b:a:b:c:d)}, V_ω = {(p:q:ωp:ωq:ω²p:ω²q:0:0)}.
            let w = omega();
            let mut ea = vec![zero(); 8];
            ea[0] = one();
            ea[2] = one();
            ea[4] = one();
            let mut eb = vec![zero(); 8];
            eb[1] = one();
            eb[3] = one();
            eb[5] = one();
            let v_plus = vec![ea, eb, e(8, 6), e(8, 7)];
            let mut wa = vec![zero(); 8];
            wa[0] = one();
            wa[2] = w;
            wa[4] = w * w;
            let mut wb = vec![zero(); 8];
            wb[1] = one();
            wb[3] = w;
            wb[5] = w * w;
            let v_omega = vec![wa, wb];
            (v_plus, v_omega)
        }
    }
}

/// True iff the line meets both invariant subspaces of its family: the span
/// of the line together with the subspace basis drops rank.
pub fn invariant_subspace_check(line: &Line, family: Family) -> Result<bool> {
    let (v1, v2) = invariant_subspace_bases(family);
    let n = match family {
        Family::ThreeThree => 6,
        Family::TwoTwoTwoTwo => 8,
    };
    if line.num_coords() != n {
        return Err(Error::DimensionMismatch(format!(
            "line has {} coordinates, family lives in {} coordinates",
            line.num_coords(),
            n
        )));
    }
    let meets = |basis: &[Vec<Scalar>]| -> bool {
        let rows = 2 + basis.len();
        let mut m = DMatrix::<Scalar>::zeros(rows, n);
        for j in 0..n {
            m[(0, j)] = line.span()[(0, j)];
            m[(1, j)] = line.span()[(1, j)];
        }
        for (r, b) in basis.iter().enumerate() {
            let norm = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for j in 0..n {
                m[(2 + r, j)] = b[j] / norm;
            }
        }
        // The line meets the subspace iff the stacked spans share a vector,
        // i.e. the stacked row matrix drops rank.
        crate::algebra::nullspace::numeric_rank(&m, 1e-8) < rows
    };
    Ok(meets(&v1) && meets(&v2))
}
