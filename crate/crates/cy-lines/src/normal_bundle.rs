//! Normal-bundle splitting types of lines on Calabi-Yau complete-intersection
//! threefolds: coordinate normalization, the restriction matrix of partial
//! derivatives, minimal syzygy degree, and Hilbert-scheme tangent dimension.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{numeric_nullspace, BinaryForm, Scalar, NULLSPACE_TOL};
use crate::error::{Error, Result};
use crate::geometry::{lies_on, CompleteIntersection, Line};

/// Incidence tolerance used by the analysis pipeline.
const PIPELINE_TOL: f64 = 1e-7;

/// Splitting type N ≅ O(a) ⊕ O(b) of the normal bundle of a line on a
/// Calabi-Yau threefold, with a ≥ b and a + b = −2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingType {
    pub a: i32,
    pub b: i32,
}

impl SplittingType {
    /// Trichotomy in the minimal syzygy degree t: (1,−3) if t = 0, (0,−2) if
    /// t = 1, (−1,−1) otherwise.
    pub fn from_min_syzygy_degree(t: usize) -> Self {
        match t {
            0 => Self { a: 1, b: -3 },
            1 => Self { a: 0, b: -2 },
            _ => Self { a: -1, b: -1 },
        }
    }

    /// h⁰ of the bundle: each component O(e) with e ≥ 0 contributes e + 1
    /// sections on the line.
    pub fn tangent_dim(&self) -> usize {
        [self.a, self.b]
            .iter()
            .filter(|&&e| e >= 0)
            .map(|&e| e as usize + 1)
            .sum()
    }
}

/// Hilbert-scheme tangent dimension at the line, h⁰ of the normal bundle.
pub fn hilbert_tangent_dim(s: SplittingType) -> usize {
    s.tangent_dim()
}

/// The k×(n−1) matrix of restricted partial derivatives: row i holds
/// f_j = (∂F_i/∂x_j)|_L for j = 2..n, each a binary form of degree dᵢ − 1 in
/// the line coordinates.
#[derive(Clone, Debug)]
pub struct RestrictionMatrix {
    entries: Vec<Vec<BinaryForm>>,
    row_degrees: Vec<usize>,
}

impl RestrictionMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, i: usize, j: usize) -> &BinaryForm {
        &self.entries[i][j]
    }

    /// Degree dᵢ − 1 of the forms in row i.
    pub fn row_degrees(&self) -> &[usize] {
        &self.row_degrees
    }
}

/// Change coordinates so the line becomes the standard line
/// {x₂ = ⋯ = xₙ = 0}. Returns the transformed variety and the invertible
/// witness matrix A with x = A·y; the first two columns of A are the
/// spanning points and the rest an orthonormal complement.
pub fn normalize_line_coords(
    x: &CompleteIntersection,
    l: &Line,
) -> Result<(CompleteIntersection, DMatrix<Scalar>)> {
    normalize_with_complement_mix(x, l, None)
}

/// Same as [`normalize_line_coords`], but the spanning pair and the
/// complement basis are mixed by random invertible matrices drawn from
/// `rng`. Any such witness is an equally valid normalization; splitting
/// outputs must not depend on the choice.
pub fn normalize_line_coords_randomized<R: Rng>(
    x: &CompleteIntersection,
    l: &Line,
    rng: &mut R,
) -> Result<(CompleteIntersection, DMatrix<Scalar>)> {
    normalize_with_complement_mix(x, l, Some(rng))
}

fn normalize_with_complement_mix(
    x: &CompleteIntersection,
    l: &Line,
    mut rng: Option<&mut dyn rand::RngCore>,
) -> Result<(CompleteIntersection, DMatrix<Scalar>)> {
    let n1 = x.ambient_dim() + 1;
    if l.num_coords() != n1 {
        return Err(Error::DimensionMismatch(format!(
            "line has {} coordinates, variety needs {}",
            l.num_coords(),
            n1
        )));
    }
    let inc = lies_on(l, x, PIPELINE_TOL)?;
    if !inc.incident {
        return Err(Error::NotOnVariety {
            residual: inc.residual,
        });
    }

    let mut p0 = l.point(0);
    let mut p1 = l.point(1);
    if let Some(rng) = rng.as_deref_mut() {
        // Random invertible 2x2 mix of the spanning pair.
        loop {
            let coeff = |rng: &mut dyn rand::RngCore| {
                Scalar::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
            };
            let (a, b, c, d) = (coeff(rng), coeff(rng), coeff(rng), coeff(rng));
            if (a * d - b * c).norm() > 0.1 {
                let q0: Vec<Scalar> = p0.iter().zip(&p1).map(|(u, v)| a * u + b * v).collect();
                let q1: Vec<Scalar> = p0.iter().zip(&p1).map(|(u, v)| c * u + d * v).collect();
                p0 = q0;
                p1 = q1;
                break;
            }
        }
    }
    normalize_point(&mut p0);
    normalize_point(&mut p1);

    // Orthonormal complement of span{p0, p1}: nullspace of the 2×(n+1)
    // matrix with rows p0*, p1*.
    let mut conj_span = DMatrix::<Scalar>::zeros(2, n1);
    for j in 0..n1 {
        conj_span[(0, j)] = p0[j].conj();
        conj_span[(1, j)] = p1[j].conj();
    }
    let mut complement = numeric_nullspace(&conj_span, NULLSPACE_TOL);
    if complement.len() != n1 - 2 {
        return Err(Error::RankDeficientSpan { sigma: 0.0 });
    }
    if let Some(rng) = rng.as_deref_mut() {
        // Mix the complement by a random well-conditioned square matrix.
        let m = complement.len();
        loop {
            let mix = DMatrix::<Scalar>::from_fn(m, m, |_, _| {
                Scalar::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
            });
            let sv = mix.clone().singular_values();
            if sv[m - 1] > 0.1 * sv[0] {
                let mixed: Vec<_> = (0..m)
                    .map(|i| {
                        let mut v = nalgebra::DVector::<Scalar>::zeros(n1);
                        for (k, w) in complement.iter().enumerate() {
                            v += w * mix[(i, k)];
                        }
                        v
                    })
                    .collect();
                complement = mixed;
                break;
            }
        }
    }

    let mut a = DMatrix::<Scalar>::zeros(n1, n1);
    for i in 0..n1 {
        a[(i, 0)] = p0[i];
        a[(i, 1)] = p1[i];
    }
    for (j, v) in complement.iter().enumerate() {
        for i in 0..n1 {
            a[(i, 2 + j)] = v[i];
        }
    }

    let transformed: Result<Vec<_>> = x.polys().iter().map(|p| p.change_coordinates(&a)).collect();
    let xt = CompleteIntersection::new(x.ambient_dim(), transformed?)?;
    Ok((xt, a))
}

fn normalize_point(p: &mut [Scalar]) {
    let norm = p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in p.iter_mut() {
        *z /= norm;
    }
}

/// Extract the restriction matrix from a variety whose line is in standard
/// position. Fails if some defining polynomial does not vanish on the
/// standard line.
pub fn restriction_matrix(x_std: &CompleteIntersection) -> Result<RestrictionMatrix> {
    let n1 = x_std.ambient_dim() + 1;
    let mut entries = Vec::with_capacity(x_std.codim());
    let mut row_degrees = Vec::with_capacity(x_std.codim());
    for p in x_std.polys() {
        let d = p.degree();
        let scale = p.max_coeff_norm();
        let mut row: Vec<BinaryForm> = (0..n1 - 2).map(|_| BinaryForm::zero(d - 1)).collect();
        let mut pure_residual: f64 = 0.0;
        for (exps, &coeff) in p.terms() {
            let tail: u32 = exps[2..].iter().sum();
            match tail {
                0 => pure_residual = pure_residual.max(coeff.norm()),
                1 => {
                    let var = 2 + exps[2..].iter().position(|&e| e == 1).unwrap();
                    // term coeff · x0^e0 x1^e1 x_var; restricted partial picks
                    // up the binary monomial x0^e0 x1^e1.
                    let j = exps[1] as usize;
                    let forms = &mut row[var - 2];
                    let mut coeffs = forms.coeffs().to_vec();
                    coeffs[j] += coeff;
                    *forms = BinaryForm::from_coeffs(coeffs);
                }
                _ => {} // in I_L², restricts to zero
            }
        }
        if pure_residual > PIPELINE_TOL * scale {
            return Err(Error::NotInLineIdeal {
                residual: pure_residual / scale,
            });
        }
        entries.push(row);
        row_degrees.push(d - 1);
    }
    Ok(RestrictionMatrix {
        entries,
        row_degrees,
    })
}

/// Result of the minimal-syzygy search up to `max_t`.
#[derive(Clone, Debug)]
pub enum SyzygyOutcome {
    Found {
        /// Minimal degree t with a nonzero syzygy M·T = 0.
        degree: usize,
        /// Witness vector of binary forms of degree t.
        witness: Vec<BinaryForm>,
        /// Nullspace dimension at the minimal degree.
        nullity: usize,
        /// Nullspace dimensions at each degree 0..=t.
        nullity_by_degree: Vec<usize>,
        /// ‖A·w‖ relative to the largest singular value of the coefficient
        /// matrix at the minimal degree.
        residual: f64,
    },
    NotFoundUpTo(usize),
}

/// Smallest t ≤ max_t such that M·T = 0 has a nonzero solution T of binary
/// forms of degree t, decided by the numeric nullspace of the coefficient
/// matrix.
pub fn minimal_syzygy_degree(m: &RestrictionMatrix, max_t: usize) -> SyzygyOutcome {
    let cols = m.cols();
    let mut nullity_by_degree = Vec::with_capacity(max_t + 1);
    for t in 0..=max_t {
        let unknowns = cols * (t + 1);
        let eqs: usize = m.row_degrees().iter().map(|&rd| rd + t + 1).sum();
        let mut a = DMatrix::<Scalar>::zeros(eqs, unknowns);
        let mut row_offset = 0;
        for (i, &rd) in m.row_degrees().iter().enumerate() {
            let out_degree = rd + t;
            for j in 0..cols {
                let entry = m.entry(i, j);
                for mm in 0..=t {
                    for k in 0..=out_degree {
                        if k >= mm && k - mm <= rd {
                            a[(row_offset + k, j * (t + 1) + mm)] += entry.coeff(k - mm);
                        }
                    }
                }
            }
            row_offset += out_degree + 1;
        }
        let basis = numeric_nullspace(&a, NULLSPACE_TOL);
        nullity_by_degree.push(basis.len());
        if !basis.is_empty() {
            let w = &basis[0];
            let sigma_max = a
                .clone()
                .singular_values()
                .iter()
                .copied()
                .fold(0.0, f64::max);
            let residual = if sigma_max > 0.0 {
                (&a * w).norm() / sigma_max
            } else {
                0.0
            };
            let witness = (0..cols)
                .map(|j| {
                    BinaryForm::from_coeffs(
                        (0..=t).map(|mm| w[j * (t + 1) + mm]).collect(),
                    )
                })
                .collect();
            return SyzygyOutcome::Found {
                degree: t,
                witness,
                nullity: basis.len(),
                nullity_by_degree,
                residual,
            };
        }
    }
    SyzygyOutcome::NotFoundUpTo(max_t)
}

/// Splitting classification from a syzygy search outcome. A nullspace of
/// dimension ≥ 2 at t = 0 is incompatible with a + b = −2 and reported as a
/// degenerate input.
pub fn splitting_from_outcome(outcome: &SyzygyOutcome) -> Result<SplittingType> {
    match outcome {
        SyzygyOutcome::Found {
            degree, nullity, ..
        } => {
            if *degree == 0 && *nullity >= 2 {
                return Err(Error::DegenerateSplitting { nullity: *nullity });
            }
            Ok(SplittingType::from_min_syzygy_degree(*degree))
        }
        SyzygyOutcome::NotFoundUpTo(_) => Ok(SplittingType::from_min_syzygy_degree(2)),
    }
}

/// Residuals and intermediate data from the per-line analysis pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalysisDiagnostics {
    pub incidence_residual: f64,
    pub transformed_incidence_residual: f64,
    pub syzygy_residual: f64,
    pub nullity_by_degree: Vec<usize>,
}

/// Full analysis of a line on a Calabi-Yau threefold complete intersection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineAnalysis {
    pub splitting: SplittingType,
    pub tangent_dim: usize,
    pub syzygy_degree: usize,
    /// Witness coefficients per column, ascending in the t-degree.
    pub witness_coeffs: Vec<Vec<Scalar>>,
    pub diagnostics: AnalysisDiagnostics,
}

/// Pipeline: normalize coordinates, extract the restriction matrix, find
/// the minimal syzygy degree, classify the splitting, and report h⁰.
pub fn analyze_line(x: &CompleteIntersection, l: &Line) -> Result<LineAnalysis> {
    analyze_with_witness(x, l, None)
}

/// Same pipeline with a caller-supplied normalization, for checking
/// independence of the coordinate witness.
pub fn analyze_line_with_normalization(
    x: &CompleteIntersection,
    l: &Line,
    normalized: (CompleteIntersection, DMatrix<Scalar>),
) -> Result<LineAnalysis> {
    analyze_with_witness(x, l, Some(normalized))
}

fn analyze_with_witness(
    x: &CompleteIntersection,
    l: &Line,
    normalized: Option<(CompleteIntersection, DMatrix<Scalar>)>,
) -> Result<LineAnalysis> {
    let cy = x.cy_check();
    if !cy.is_cy || !cy.is_threefold {
        return Err(Error::NotCalabiYau(format!(
            "type {:?} in P^{}",
            x.degrees(),
            x.ambient_dim()
        )));
    }
    let inc = lies_on(l, x, PIPELINE_TOL)?;
    if !inc.incident {
        return Err(Error::NotOnVariety {
            residual: inc.residual,
        });
    }
    let (xt, _witness) = match normalized {
        Some(pair) => pair,
        None => normalize_line_coords(x, l)?,
    };
    // Incidence of the standard line in the new coordinates.
    let n1 = x.ambient_dim() + 1;
    let mut e0 = vec![Scalar::new(0.0, 0.0); n1];
    let mut e1 = e0.clone();
    e0[0] = Scalar::new(1.0, 0.0);
    e1[1] = Scalar::new(1.0, 0.0);
    let std_line = Line::new(&e0, &e1)?;
    let t_inc = lies_on(&std_line, &xt, PIPELINE_TOL)?;

    let m = restriction_matrix(&xt)?;
    let outcome = minimal_syzygy_degree(&m, 2);
    let splitting = splitting_from_outcome(&outcome)?;
    let (degree, witness, residual, nullity_by_degree) = match outcome {
        SyzygyOutcome::Found {
            degree,
            witness,
            residual,
            nullity_by_degree,
            ..
        } => (degree, witness, residual, nullity_by_degree),
        SyzygyOutcome::NotFoundUpTo(t) => (t + 1, Vec::new(), 0.0, vec![0; t + 1]),
    };
    Ok(LineAnalysis {
        splitting,
        tangent_dim: splitting.tangent_dim(),
        syzygy_degree: degree,
        witness_coeffs: witness.iter().map(|f| f.coeffs().to_vec()).collect(),
        diagnostics: AnalysisDiagnostics {
            incidence_residual: inc.residual,
            transformed_incidence_residual: t_inc.residual,
            syzygy_residual: residual,
            nullity_by_degree,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::HomogeneousPoly;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn fermat_quintic() -> CompleteIntersection {
        let f = (0..5)
            .map(|i| {
                let mut e = vec![0u32; 5];
                e[i] = 5;
                HomogeneousPoly::monomial(5, &e, c(1.0, 0.0)).unwrap()
            })
            .reduce(|a, b| a.add(&b).unwrap())
            .unwrap();
        CompleteIntersection::new(4, vec![f]).unwrap()
    }

    fn fermat_line() -> Line {
        Line::new(
            &[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn splitting_table() {
        assert_eq!(
            SplittingType::from_min_syzygy_degree(0),
            SplittingType { a: 1, b: -3 }
        );
        assert_eq!(
            SplittingType::from_min_syzygy_degree(1),
            SplittingType { a: 0, b: -2 }
        );
        assert_eq!(
            SplittingType::from_min_syzygy_degree(5),
            SplittingType { a: -1, b: -1 }
        );
    }

    #[test]
    fn tangent_dims() {
        assert_eq!(hilbert_tangent_dim(SplittingType { a: 0, b: -2 }), 1);
        assert_eq!(hilbert_tangent_dim(SplittingType { a: -1, b: -1 }), 0);
        assert_eq!(hilbert_tangent_dim(SplittingType { a: 1, b: -3 }), 2);
    }

    #[test]
    fn fermat_restriction_row_matches_hand_expansion() {
        // Exact witness: x0 = y0, x1 = -y0 + y2, x2 = y1, x3 = -y1 + y3,
        // x4 = y4 puts the fixture line in standard position, and the hand
        // expansion gives the row (5·y0⁴, 5·y1⁴, 0).
        let x = fermat_quintic();
        let mut a = DMatrix::<Scalar>::zeros(5, 5);
        a[(0, 0)] = c(1.0, 0.0);
        a[(1, 0)] = c(-1.0, 0.0);
        a[(1, 2)] = c(1.0, 0.0);
        a[(2, 1)] = c(1.0, 0.0);
        a[(3, 1)] = c(-1.0, 0.0);
        a[(3, 3)] = c(1.0, 0.0);
        a[(4, 4)] = c(1.0, 0.0);
        let transformed: Vec<_> = x
            .polys()
            .iter()
            .map(|p| p.change_coordinates(&a).unwrap())
            .collect();
        let xt = CompleteIntersection::new(4, transformed).unwrap();
        let m = restriction_matrix(&xt).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 3));
        let f2 = m.entry(0, 0);
        assert!((f2.coeff(0) - c(5.0, 0.0)).norm() < 1e-12);
        for j in 1..=4 {
            assert!(f2.coeff(j).norm() < 1e-12);
        }
        let f3 = m.entry(0, 1);
        assert!((f3.coeff(4) - c(5.0, 0.0)).norm() < 1e-12);
        for j in 0..4 {
            assert!(f3.coeff(j).norm() < 1e-12);
        }
        let f4 = m.entry(0, 2);
        assert!(f4.coeffs().iter().all(|z| z.norm() < 1e-12));

        // Third column zero: syzygy of degree 0 with witness (0,0,1).
        match minimal_syzygy_degree(&m, 2) {
            SyzygyOutcome::Found {
                degree, witness, ..
            } => {
                assert_eq!(degree, 0);
                assert!(witness[0].coeff(0).norm() < 1e-10);
                assert!(witness[1].coeff(0).norm() < 1e-10);
                assert!((witness[2].coeff(0).norm() - 1.0).abs() < 1e-10);
            }
            _ => panic!("expected a degree-0 syzygy"),
        }
    }

    #[test]
    fn fermat_fixture_analyzes_to_1_minus3() {
        let x = fermat_quintic();
        let analysis = analyze_line(&x, &fermat_line()).unwrap();
        assert_eq!(analysis.splitting, SplittingType { a: 1, b: -3 });
        assert_eq!(analysis.tangent_dim, 2);
        assert_eq!(analysis.syzygy_degree, 0);
    }

    #[test]
    fn generic_quadratic_matrix_has_syzygy_degree_two() {
        // A generic 2×4 matrix of quadratic binary forms: no syzygy at
        // t = 0 or 1, two independent generators at t = 2.
        let mut state = 1u64;
        let mut next = || {
            // xorshift; deterministic fixture values
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 1000) as f64 / 500.0 - 1.0
        };
        let entries: Vec<Vec<BinaryForm>> = (0..2)
            .map(|_| {
                (0..4)
                    .map(|_| {
                        BinaryForm::from_coeffs(vec![
                            c(next(), next()),
                            c(next(), next()),
                            c(next(), next()),
                        ])
                    })
                    .collect()
            })
            .collect();
        let m = RestrictionMatrix {
            entries,
            row_degrees: vec![2, 2],
        };
        match minimal_syzygy_degree(&m, 2) {
            SyzygyOutcome::Found {
                degree,
                nullity,
                nullity_by_degree,
                ..
            } => {
                assert_eq!(degree, 2);
                assert_eq!(nullity, 2);
                assert_eq!(nullity_by_degree, vec![0, 0, 2]);
            }
            _ => panic!("expected a degree-2 syzygy"),
        }
    }

    #[test]
    fn non_cy_input_rejected() {
        // A quartic threefold in P^4 is not CY.
        let f = (0..5)
            .map(|i| {
                let mut e = vec![0u32; 5];
                e[i] = 4;
                HomogeneousPoly::monomial(5, &e, c(1.0, 0.0)).unwrap()
            })
            .reduce(|a, b| a.add(&b).unwrap())
            .unwrap();
        let x = CompleteIntersection::new(4, vec![f]).unwrap();
        let l = Line::new(
            &[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            analyze_line(&x, &l),
            Err(Error::NotCalabiYau(_))
        ));
    }

    #[test]
    fn standard_line_normalizes_with_near_identity_witness() {
        let l = Line::new(
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        // x0^5 + x1^5 + ... does not contain the standard line, so build a
        // variety that does: x2·x0^4 + x3·x1^4 + x4^5.
        let term = |exps: [u32; 5]| HomogeneousPoly::monomial(5, &exps, c(1.0, 0.0)).unwrap();
        let f = term([4, 0, 1, 0, 0])
            .add(&term([0, 4, 0, 1, 0]))
            .unwrap()
            .add(&term([0, 0, 0, 0, 5]))
            .unwrap();
        let x = CompleteIntersection::new(4, vec![f]).unwrap();
        let l = l.unwrap();
        let (xt, witness) = normalize_line_coords(&x, &l).unwrap();
        // Standard line already: witness should be unitary and the standard
        // line still lies on the transformed variety.
        let prod = &witness * witness.adjoint();
        assert!((prod - DMatrix::<Scalar>::identity(5, 5)).norm() < 1e-10);
        let std_line = Line::new(
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let inc = lies_on(&std_line, &xt, 1e-9).unwrap();
        assert!(inc.incident);
    }
}
