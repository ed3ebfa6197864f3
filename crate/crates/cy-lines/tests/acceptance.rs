//! End-to-end acceptance gate: one test per criterion, each printing a
//! single PASS/FAIL line. Tolerances are pinned here and must not be
//! loosened to force a pass.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cy_lines::algebra::Scalar;
use cy_lines::geometry::{lies_on, CompleteIntersection, Line};
use cy_lines::line_search::{
    build_family_2222, build_family_33, lines_2222, lines_33, Family2222Params, Family33Params,
};
use cy_lines::normal_bundle::{
    analyze_line, analyze_line_with_normalization, minimal_syzygy_degree,
    normalize_line_coords_randomized, restriction_matrix, SplittingType, SyzygyOutcome,
};
use cy_lines::report::fermat_fixture;
use cy_lines::schubert::{expected_lines, LineCount};
use cy_lines::symmetry::{
    generate_group, groups, orbit, stabilizer, union_of_orbits, FiniteGroup, DEFAULT_GROUP_CAP,
};
use cy_lines::Error;

const INCIDENCE_TOL: f64 = 1e-8;
const ORBIT_TOL: f64 = 1e-7;
const SEPARATION_MIN: f64 = 1e-4;

fn c(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

/// Collects sub-check failures so a criterion reports everything wrong at
/// once, then prints the single PASS/FAIL line.
struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, cond: bool, msg: impl Into<String>) {
        if !cond {
            self.failures.push(msg.into());
        }
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("acceptance {}: PASS", self.name);
        } else {
            println!(
                "acceptance {}: FAIL — {}",
                self.name,
                self.failures.join("; ")
            );
            panic!("acceptance {} failed: {}", self.name, self.failures.join("; "));
        }
    }
}

fn count_of(degrees: &[usize], ambient: usize) -> BigInt {
    match expected_lines(degrees, ambient).unwrap() {
        LineCount::Count(n) => n,
        other => panic!("expected a count for {degrees:?} in P^{ambient}, got {other:?}"),
    }
}

fn seeds_33() -> (CompleteIntersection, Vec<Line>) {
    let lambda = c(2.0, 0.0);
    let x = build_family_33(lambda);
    let out = lines_33(Family33Params::new(lambda)).expect("λ=2 is generic");
    (x, out.solutions.into_iter().map(|s| s.line).collect())
}

fn seeds_2222() -> (CompleteIntersection, Vec<Line>) {
    let (lambda, mu) = (c(2.0, 0.0), c(3.0, 0.0));
    let x = build_family_2222(lambda, mu);
    let out = lines_2222(Family2222Params::new(lambda, mu)).expect("(2,3) is generic");
    (x, out.solutions.into_iter().map(|s| s.line).collect())
}

fn group(gens: &[cy_lines::symmetry::MonomialAutomorphism]) -> FiniteGroup {
    generate_group(gens, DEFAULT_GROUP_CAP).expect("group closure within cap")
}

#[test]
fn criterion_1_expected_count_table() {
    let mut cr = Criterion::new("1 (expected-count table)");
    let table: [(&[usize], usize, i64); 5] = [
        (&[5], 4, 2875),
        (&[3, 3], 5, 1053),
        (&[4, 2], 5, 1280),
        (&[3, 2, 2], 6, 720),
        (&[2, 2, 2, 2], 7, 512),
    ];
    for (degrees, ambient, want) in table {
        let got = count_of(degrees, ambient);
        cr.check(
            got == BigInt::from(want),
            format!("type {degrees:?} in P^{ambient}: got {got}, want {want}"),
        );
    }
    // Independent classical oracle: the cubic surface.
    let got = count_of(&[3], 3);
    cr.check(
        got == BigInt::from(27),
        format!("cubic surface oracle: got {got}, want 27"),
    );
    cr.finish();
}

#[test]
fn criterion_2_thirty_six_lines() {
    let mut cr = Criterion::new("2 (36 lines, λ=2)");
    let (x, lines) = seeds_33();
    cr.check(lines.len() == 36, format!("got {} lines, want 36", lines.len()));
    for (i, l) in lines.iter().enumerate() {
        let inc = lies_on(l, &x, INCIDENCE_TOL).unwrap();
        cr.check(
            inc.incident && inc.residual < INCIDENCE_TOL,
            format!("line {i}: residual {:.3e} ≥ {INCIDENCE_TOL:.0e}", inc.residual),
        );
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let sep = (lines[i].canonical_plucker() - lines[j].canonical_plucker()).norm();
            cr.check(
                sep > SEPARATION_MIN,
                format!("lines {i},{j}: separation {sep:.3e} ≤ {SEPARATION_MIN:.0e}"),
            );
        }
    }
    cr.finish();
}

#[test]
fn criterion_3_orbit_1458() {
    let mut cr = Criterion::new("3 (orbit of size 1458)");
    let (x, lines) = seeds_33();
    let g = group(&groups::g33_generators());
    let h = group(&groups::h33_generators());
    let gh = group(&groups::gh33_generators());
    cr.check(g.order() == 81, format!("|G| = {}, want 81", g.order()));

    let seed = &lines[0];
    let members = orbit(seed, &gh, &x, ORBIT_TOL).unwrap();
    cr.check(
        members.len() == 1458,
        format!("orbit size {}, want 1458", members.len()),
    );
    let mut max_residual: f64 = 0.0;
    for m in &members {
        let inc = lies_on(m, &x, ORBIT_TOL).unwrap();
        max_residual = max_residual.max(inc.residual);
    }
    cr.check(
        max_residual < ORBIT_TOL,
        format!("max orbit residual {max_residual:.3e} ≥ {ORBIT_TOL:.0e}"),
    );

    let stab_h = stabilizer(seed, &h).unwrap();
    let stab_g = stabilizer(seed, &g).unwrap();
    cr.check(
        stab_h.order() == 2,
        format!("stabilizer in H has order {}, want 2", stab_h.order()),
    );
    cr.check(
        stab_g.order() == 1,
        format!("stabilizer in G has order {}, want 1", stab_g.order()),
    );
    cr.finish();
}

#[test]
fn criterion_4_splitting_of_all_36() {
    let mut cr = Criterion::new("4 (all 36 lines split as (0,−2))");
    let (x, lines) = seeds_33();
    let results: Vec<_> = lines
        .par_iter()
        .map(|l| analyze_line(&x, l).unwrap())
        .collect();
    for (i, a) in results.iter().enumerate() {
        cr.check(
            a.splitting == SplittingType { a: 0, b: -2 },
            format!("line {i}: splitting ({},{})", a.splitting.a, a.splitting.b),
        );
        cr.check(
            a.tangent_dim == 1,
            format!("line {i}: tangent dim {}", a.tangent_dim),
        );
        cr.check(
            a.diagnostics.nullity_by_degree[0] == 0,
            format!(
                "line {i}: degree-0 nullspace has dimension {}",
                a.diagnostics.nullity_by_degree[0]
            ),
        );
    }
    cr.finish();
}

#[test]
fn criterion_5_eight_lines_and_orbits() {
    let mut cr = Criterion::new("5 (8 lines at (2,3), orbits of 256, union 2048)");
    let (x, lines) = seeds_2222();
    cr.check(lines.len() == 8, format!("got {} lines, want 8", lines.len()));
    for (i, l) in lines.iter().enumerate() {
        let inc = lies_on(l, &x, INCIDENCE_TOL).unwrap();
        cr.check(
            inc.incident,
            format!("line {i}: residual {:.3e}", inc.residual),
        );
        for j in i + 1..lines.len() {
            let sep = (l.canonical_plucker() - lines[j].canonical_plucker()).norm();
            cr.check(
                sep > SEPARATION_MIN,
                format!("lines {i},{j}: separation {sep:.3e}"),
            );
        }
    }

    let gh = group(&groups::gh2222_generators());
    for (i, l) in lines.iter().enumerate() {
        let members = orbit(l, &gh, &x, ORBIT_TOL).unwrap();
        cr.check(
            members.len() == 256,
            format!("orbit of line {i} has {} members, want 256", members.len()),
        );
    }

    // Honest red: the group element acting projectively as
    // (x6, x7) ↦ (−x6, −x7) maps each constructed line to another one
    // (c ↦ −c, d ↦ −d is again a solution), and the pair-transposition
    // element identifies the two q-roots; all 8 seeds therefore share a
    // single orbit of 256 lines and the target total of 2048 disjoint
    // lines is not attainable under this group action.
    let union = union_of_orbits(&lines, &gh, &x, ORBIT_TOL).unwrap();
    cr.check(
        union.disjoint,
        format!("orbits are not disjoint (union {})", union.total),
    );
    cr.check(
        union.total == 2048,
        format!("union has {} lines, want 2048", union.total),
    );

    let results: Vec<_> = lines
        .par_iter()
        .map(|l| analyze_line(&x, l).unwrap())
        .collect();
    for (i, a) in results.iter().enumerate() {
        cr.check(
            a.splitting == SplittingType { a: 0, b: -2 } && a.tangent_dim == 1,
            format!(
                "line {i}: splitting ({},{}), tangent dim {}",
                a.splitting.a, a.splitting.b, a.tangent_dim
            ),
        );
    }
    cr.finish();
}

#[test]
fn criterion_6_fermat_fixture() {
    let mut cr = Criterion::new("6 (Fermat quintic fixture)");
    let (x, l) = fermat_fixture().unwrap();
    let inc = lies_on(&l, &x, INCIDENCE_TOL).unwrap();
    cr.check(
        inc.residual == 0.0,
        format!("incidence residual {:.3e}, want exactly 0", inc.residual),
    );
    let a = analyze_line(&x, &l).unwrap();
    cr.check(
        a.splitting == SplittingType { a: 1, b: -3 },
        format!("splitting ({},{}), want (1,−3)", a.splitting.a, a.splitting.b),
    );
    cr.check(a.tangent_dim == 2, format!("tangent dim {}, want 2", a.tangent_dim));

    // Hand oracle: with the exact coordinate change x0=y0, x1=−y0+y2,
    // x2=y1, x3=−y1+y3, x4=y4 the restriction row is (5·s⁴, 5·t⁴, 0),
    // whose third column is identically zero — a degree-0 syzygy (0,0,1).
    let mut wit = nalgebra::DMatrix::<Scalar>::zeros(5, 5);
    wit[(0, 0)] = c(1.0, 0.0);
    wit[(1, 0)] = c(-1.0, 0.0);
    wit[(1, 2)] = c(1.0, 0.0);
    wit[(2, 1)] = c(1.0, 0.0);
    wit[(3, 1)] = c(-1.0, 0.0);
    wit[(3, 3)] = c(1.0, 0.0);
    wit[(4, 4)] = c(1.0, 0.0);
    let transformed: Vec<_> = x
        .polys()
        .iter()
        .map(|p| p.change_coordinates(&wit).unwrap())
        .collect();
    let xt = CompleteIntersection::new(4, transformed).unwrap();
    let m = restriction_matrix(&xt).unwrap();
    cr.check(
        (m.rows(), m.cols()) == (1, 3),
        format!("restriction matrix is {}×{}, want 1×3", m.rows(), m.cols()),
    );
    let row_ok = (m.entry(0, 0).coeff(0) - c(5.0, 0.0)).norm() < 1e-12
        && (1..=4).all(|j| m.entry(0, 0).coeff(j).norm() < 1e-12)
        && (m.entry(0, 1).coeff(4) - c(5.0, 0.0)).norm() < 1e-12
        && (0..4).all(|j| m.entry(0, 1).coeff(j).norm() < 1e-12)
        && m.entry(0, 2).coeffs().iter().all(|z| z.norm() < 1e-12);
    cr.check(row_ok, "restriction row differs from hand expansion (5s⁴, 5t⁴, 0)");
    match minimal_syzygy_degree(&m, 2) {
        SyzygyOutcome::Found { degree, .. } => {
            cr.check(degree == 0, format!("syzygy degree {degree}, want 0"));
        }
        SyzygyOutcome::NotFoundUpTo(t) => {
            cr.check(false, format!("no syzygy up to degree {t}"));
        }
    }
    cr.finish();
}

#[test]
fn criterion_7_property_suite() {
    let mut cr = Criterion::new("7 (property suite)");
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acc_e57a);
    let (x33, lines33) = seeds_33();
    let (x2222, lines2222) = seeds_2222();

    // Orbit–stabilizer identity on every acceptance group.
    let group_table: Vec<(&str, FiniteGroup, &CompleteIntersection, &Line)> = vec![
        ("G/33", group(&groups::g33_generators()), &x33, &lines33[0]),
        ("H/33", group(&groups::h33_generators()), &x33, &lines33[0]),
        ("GH/33", group(&groups::gh33_generators()), &x33, &lines33[0]),
        ("G/2222", group(&groups::g2222_generators()), &x2222, &lines2222[0]),
        ("H/2222", group(&groups::h2222_generators()), &x2222, &lines2222[0]),
        ("GH/2222", group(&groups::gh2222_generators()), &x2222, &lines2222[0]),
    ];
    for (name, grp, x, l) in &group_table {
        let orb = orbit(l, grp, x, ORBIT_TOL).unwrap();
        let stab = stabilizer(l, grp).unwrap();
        cr.check(
            orb.len() * stab.order() == grp.order(),
            format!(
                "{name}: |orbit|·|stab| = {}·{} ≠ {}",
                orb.len(),
                stab.order(),
                grp.order()
            ),
        );
    }

    // Splitting type is invariant under the symmetry group.
    for (name, x, lines, grp) in [
        ("33", &x33, &lines33, &group_table[2].1),
        ("2222", &x2222, &lines2222, &group_table[5].1),
    ] {
        let base = analyze_line(x, &lines[0]).unwrap().splitting;
        for _ in 0..20 {
            let g = &grp.elements()[rng.gen_range(0..grp.order())];
            let moved = g.apply_line(&lines[0]).unwrap();
            let a = analyze_line(x, &moved).unwrap();
            cr.check(
                a.splitting == base,
                format!(
                    "{name}: splitting changed to ({},{}) under a group element",
                    a.splitting.a, a.splitting.b
                ),
            );
        }
    }

    // Normalization independence: two random valid coordinate witnesses
    // give the same minimal syzygy degree.
    for (i, l) in lines33.iter().take(10).enumerate() {
        let base = analyze_line(&x33, l).unwrap().syzygy_degree;
        for _ in 0..2 {
            let normalized = normalize_line_coords_randomized(&x33, l, &mut rng).unwrap();
            let a = analyze_line_with_normalization(&x33, l, normalized).unwrap();
            cr.check(
                a.syzygy_degree == base,
                format!("line {i}: syzygy degree {} ≠ {base} under a random normalization", a.syzygy_degree),
            );
        }
    }

    // Degeneracy flags at the excluded parameters.
    let mut degenerate_33 = vec![c(1.0, 0.0)];
    for k in 0..6 {
        let theta = std::f64::consts::PI * k as f64 / 3.0;
        degenerate_33.push(Scalar::from_polar(4f64.powf(1.0 / 6.0), theta));
    }
    for lambda in degenerate_33 {
        cr.check(
            matches!(
                lines_33(Family33Params::new(lambda)),
                Err(Error::DegenerateFamily(_))
            ),
            format!("λ = {lambda} should be flagged degenerate"),
        );
    }
    cr.check(
        matches!(
            lines_2222(Family2222Params::new(c(1.0, 0.0), c(3.0, 0.0))),
            Err(Error::DegenerateFamily(_))
        ),
        "(λ,μ) = (1,3) should be flagged degenerate".to_string(),
    );

    // Count stability at random generic parameters.
    for trial in 0..20 {
        let draw = |rng: &mut ChaCha8Rng| {
            Scalar::from_polar(
                rng.gen_range(1.5..3.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        };
        let lambda = draw(&mut rng);
        let n33 = lines_33(Family33Params::new(lambda)).unwrap().solutions.len();
        cr.check(
            n33 == 36,
            format!("trial {trial}: λ = {lambda} gave {n33} lines, want 36"),
        );
        let (lambda2, mu2) = (draw(&mut rng), draw(&mut rng));
        let n2222 = lines_2222(Family2222Params::new(lambda2, mu2))
            .unwrap()
            .solutions
            .len();
        cr.check(
            n2222 == 8,
            format!("trial {trial}: (λ,μ) = ({lambda2},{mu2}) gave {n2222} lines, want 8"),
        );
    }
    cr.finish();
}

#[test]
fn criterion_8_deformation_consequence() {
    // The full positive-dimensional-family statement is not checkable at
    // this scale; its checkable consequence is that every constructed line
    // moves to first order, i.e. the tangent dimension is exactly 1. This
    // re-asserts the substitute on one line per family; criteria 4 and 5
    // cover the rest.
    let mut cr = Criterion::new("8 (first-order deformation substitute)");
    let (x33, lines33) = seeds_33();
    let (x2222, lines2222) = seeds_2222();
    let a33 = analyze_line(&x33, &lines33[0]).unwrap();
    let a2222 = analyze_line(&x2222, &lines2222[0]).unwrap();
    cr.check(
        a33.tangent_dim == 1,
        format!("(3,3) line: tangent dim {}", a33.tangent_dim),
    );
    cr.check(
        a2222.tangent_dim == 1,
        format!("(2,2,2,2) line: tangent dim {}", a2222.tangent_dim),
    );
    cr.finish();
}
