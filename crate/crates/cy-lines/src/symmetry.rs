//! Monomial automorphisms of projective space, finite group generation by
//! closure, and orbits and stabilizers of lines.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Scalar, LINE_TOL};
use crate::error::{Error, Result};
use crate::geometry::{lies_on, CompleteIntersection, Line};

/// Tolerance for projective equality of group elements; scale entries here
/// are roots of unity, so products stay well conditioned.
const ELEMENT_TOL: f64 = 1e-9;

/// Default cap on group closure; all groups in scope have order ≤ 2916.
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// A coordinate permutation composed with a diagonal scaling: the point
/// image is `y_i = scale[i] · x_{perm[i]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonomialAutomorphism {
    perm: Vec<usize>,
    scale: Vec<Scalar>,
}

impl MonomialAutomorphism {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            scale: vec![Scalar::new(1.0, 0.0); n],
        }
    }

    pub fn new(perm: Vec<usize>, scale: Vec<Scalar>) -> Result<Self> {
        if perm.len() != scale.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation has {} entries, scale has {}",
                perm.len(),
                scale.len()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::DimensionMismatch(format!(
                    "invalid permutation {:?}",
                    perm
                )));
            }
            seen[p] = true;
        }
        if scale.iter().any(|s| s.norm() == 0.0 || !crate::algebra::is_finite(*s)) {
            return Err(Error::NonFinite("scale entry zero or non-finite".into()));
        }
        Ok(Self { perm, scale })
    }

    /// Pure coordinate permutation built from disjoint cycles (0-indexed).
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            // cycle (a b c) sends coordinate a to b, b to c, c to a; on point
            // images y_i = x_{perm[i]}, slot b reads x_a.
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                perm[to] = from;
            }
        }
        Self::new(perm, vec![Scalar::new(1.0, 0.0); n])
    }

    /// Pure diagonal scaling.
    pub fn from_scale(scale: Vec<Scalar>) -> Result<Self> {
        let n = scale.len();
        Self::new((0..n).collect(), scale)
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn scale(&self) -> &[Scalar] {
        &self.scale
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} coordinates",
                self.dim(),
                other.dim()
            )));
        }
        let n = self.dim();
        let mut perm = vec![0usize; n];
        let mut scale = vec![Scalar::new(0.0, 0.0); n];
        for i in 0..n {
            perm[i] = other.perm[self.perm[i]];
            scale[i] = self.scale[i] * other.scale[self.perm[i]];
        }
        Self::new(perm, scale)
    }

    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let mut perm = vec![0usize; n];
        let mut scale = vec![Scalar::new(0.0, 0.0); n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            scale[self.perm[i]] = Scalar::new(1.0, 0.0) / self.scale[i];
        }
        Self { perm, scale }
    }

    pub fn apply_point(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, automorphism acts on {}",
                x.len(),
                self.dim()
            )));
        }
        Ok((0..self.dim())
            .map(|i| self.scale[i] * x[self.perm[i]])
            .collect())
    }

    /// Image line spanned by the images of the two spanning points.
    pub fn apply_line(&self, l: &Line) -> Result<Line> {
        let p0 = self.apply_point(&l.point(0))?;
        let p1 = self.apply_point(&l.point(1))?;
        Line::new(&p0, &p1)
    }

    /// Divide the scale vector by its first entry of magnitude above
    /// tolerance; projectively equal elements then have equal scales.
    fn projective_normal_form(&self) -> Vec<Scalar> {
        let pivot = self
            .scale
            .iter()
            .find(|s| s.norm() >= ELEMENT_TOL)
            .copied()
            .unwrap_or(Scalar::new(1.0, 0.0));
        self.scale.iter().map(|s| s / pivot).collect()
    }

    /// Projective equality: same permutation and proportional scale vectors.
    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        if self.perm != other.perm {
            return false;
        }
        let a = self.projective_normal_form();
        let b = other.projective_normal_form();
        a.iter().zip(&b).all(|(x, y)| (x - y).norm() <= tol)
    }
}

/// A finite group of monomial automorphisms, deduplicated projectively,
/// closed under composition and inverse, together with the generators it was
/// built from.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    elements: Vec<MonomialAutomorphism>,
    generators: Vec<MonomialAutomorphism>,
}

impl FiniteGroup {
    pub fn trivial(n: usize) -> Self {
        Self {
            elements: vec![MonomialAutomorphism::identity(n)],
            generators: vec![],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[MonomialAutomorphism] {
        &self.elements
    }

    pub fn generators(&self) -> &[MonomialAutomorphism] {
        &self.generators
    }

    pub fn contains(&self, g: &MonomialAutomorphism, tol: f64) -> bool {
        self.elements.iter().any(|e| e.projectively_eq(g, tol))
    }
}

/// Close the generators under composition with projective deduplication.
/// Errors once the closure exceeds `cap`.
pub fn generate_group(gens: &[MonomialAutomorphism], cap: usize) -> Result<FiniteGroup> {
    let n = gens
        .first()
        .map(|g| g.dim())
        .ok_or_else(|| Error::DimensionMismatch("no generators".into()))?;
    if gens.iter().any(|g| g.dim() != n) {
        return Err(Error::DimensionMismatch(
            "generators act on different spaces".into(),
        ));
    }
    // Bucket elements by permutation so dedup only scans matching perms.
    let mut buckets: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut elements: Vec<MonomialAutomorphism> = Vec::new();
    let mut queue: Vec<usize> = Vec::new();

    let insert = |elements: &mut Vec<MonomialAutomorphism>,
                      buckets: &mut HashMap<Vec<usize>, Vec<usize>>,
                      g: MonomialAutomorphism|
     -> Option<usize> {
        let bucket = buckets.entry(g.perm.clone()).or_default();
        for &idx in bucket.iter() {
            if elements[idx].projectively_eq(&g, ELEMENT_TOL) {
                return None;
            }
        }
        elements.push(g);
        let idx = elements.len() - 1;
        buckets.get_mut(&elements[idx].perm.clone()).unwrap().push(idx);
        Some(idx)
    };

    let id = MonomialAutomorphism::identity(n);
    if let Some(idx) = insert(&mut elements, &mut buckets, id) {
        queue.push(idx);
    }
    let mut head = 0;
    while head < queue.len() {
        let current = elements[queue[head]].clone();
        head += 1;
        for g in gens {
            let product = g.compose(&current)?;
            if elements.len() >= cap {
                return Err(Error::GroupCapExceeded { cap });
            }
            if let Some(idx) = insert(&mut elements, &mut buckets, product) {
                queue.push(idx);
            }
        }
    }
    Ok(FiniteGroup {
        elements,
        generators: gens.to_vec(),
    })
}

/// Orbit of a line under a group, deduplicated by canonical Plücker vectors
/// and computed by breadth-first closure over the generators. Every orbit
/// member is certified incident to `x` within `tol`.
pub fn orbit(
    l: &Line,
    grp: &FiniteGroup,
    x: &CompleteIntersection,
    tol: f64,
) -> Result<Vec<Line>> {
    let base = lies_on(l, x, tol)?;
    if !base.incident {
        return Err(Error::NotOnVariety {
            residual: base.residual,
        });
    }
    let gens: Vec<&MonomialAutomorphism> = if grp.generators.is_empty() {
        grp.elements.iter().collect()
    } else {
        grp.generators.iter().collect()
    };
    let mut members: Vec<Line> = vec![l.clone()];
    let mut canon = vec![l.canonical_plucker()];
    let mut head = 0;
    while head < members.len() {
        let current = members[head].clone();
        head += 1;
        for g in &gens {
            let image = g.apply_line(&current)?;
            let v = image.canonical_plucker();
            if canon.iter().any(|u| (u - &v).norm() <= LINE_TOL) {
                continue;
            }
            let inc = lies_on(&image, x, tol)?;
            if !inc.incident {
                return Err(Error::OrbitIncidenceFailure {
                    residual: inc.residual,
                });
            }
            members.push(image);
            canon.push(v);
        }
    }
    Ok(members)
}

/// Subgroup of elements fixing the line (canonical-vector equality).
pub fn stabilizer(l: &Line, grp: &FiniteGroup) -> Result<FiniteGroup> {
    let target = l.canonical_plucker();
    let mut fixed = Vec::new();
    for g in &grp.elements {
        let image = g.apply_line(l)?;
        if (image.canonical_plucker() - &target).norm() <= LINE_TOL {
            fixed.push(g.clone());
        }
    }
    Ok(FiniteGroup {
        generators: fixed.clone(),
        elements: fixed,
    })
}

/// Union of the orbits of several seeds: total size of the deduplicated
/// union and whether the orbits are pairwise disjoint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitUnion {
    pub total: usize,
    pub disjoint: bool,
    pub orbit_sizes: Vec<usize>,
}

pub fn union_of_orbits(
    seeds: &[Line],
    grp: &FiniteGroup,
    x: &CompleteIntersection,
    tol: f64,
) -> Result<OrbitUnion> {
    let mut union: Vec<nalgebra::DVector<Scalar>> = Vec::new();
    let mut orbit_sizes = Vec::with_capacity(seeds.len());
    for seed in seeds {
        let members = orbit(seed, grp, x, tol)?;
        orbit_sizes.push(members.len());
        for m in &members {
            let v = m.canonical_plucker();
            if !union.iter().any(|u| (u - &v).norm() <= LINE_TOL) {
                union.push(v);
            }
        }
    }
    let total = union.len();
    let disjoint = total == orbit_sizes.iter().sum::<usize>();
    Ok(OrbitUnion {
        total,
        disjoint,
        orbit_sizes,
    })
}

/// The automorphism groups printed for the (3,3) pencil and the (2,2,2,2)
/// family.
pub mod groups {
    use super::*;
    use std::f64::consts::PI;

    fn root_of_unity(order: u32, power: i32) -> Scalar {
        Scalar::from_polar(1.0, 2.0 * PI * power as f64 / order as f64)
    }

    /// The involution (12)(45) preserving the (3,3) pencil: swaps x0↔x1 and
    /// x3↔x4 (0-indexed).
    pub fn phi_33() -> MonomialAutomorphism {
        MonomialAutomorphism::from_cycles(6, &[&[0, 1], &[3, 4]]).unwrap()
    }

    /// Generators of the order-81 diagonal group for the (3,3) pencil, with
    /// ζ = exp(2πi/9) and ω = ζ³.
    pub fn g33_generators() -> Vec<MonomialAutomorphism> {
        let w = |p: i32| root_of_unity(3, p);
        let z = |p: i32| root_of_unity(9, p);
        let one = Scalar::new(1.0, 0.0);
        vec![
            MonomialAutomorphism::from_scale(vec![one, w(1), w(-1), one, one, one]).unwrap(),
            MonomialAutomorphism::from_scale(vec![one, one, w(1), z(1), z(1), z(-2)]).unwrap(),
            MonomialAutomorphism::from_scale(vec![one, one, one, one, w(1), w(-1)]).unwrap(),
        ]
    }

    /// Generators of H = S3 × S3 acting on coordinates {0,1,2} and {3,4,5}.
    pub fn h33_generators() -> Vec<MonomialAutomorphism> {
        vec![
            MonomialAutomorphism::from_cycles(6, &[&[0, 1]]).unwrap(),
            MonomialAutomorphism::from_cycles(6, &[&[0, 1, 2]]).unwrap(),
            MonomialAutomorphism::from_cycles(6, &[&[3, 4]]).unwrap(),
            MonomialAutomorphism::from_cycles(6, &[&[3, 4, 5]]).unwrap(),
        ]
    }

    pub fn gh33_generators() -> Vec<MonomialAutomorphism> {
        let mut gens = g33_generators();
        gens.extend(h33_generators());
        gens
    }

    /// The order-3 automorphism (135)(246) of the (2,2,2,2) family: cycles
    /// the three coordinate pairs (x0,x1) → (x2,x3) → (x4,x5).
    pub fn phi_2222() -> MonomialAutomorphism {
        MonomialAutomorphism::from_cycles(8, &[&[0, 2, 4], &[1, 3, 5]]).unwrap()
    }

    /// Generators of the order-96 permutation group for the (2,2,2,2)
    /// family: S3 permuting the first three coordinate pairs blockwise,
    /// together with the four transpositions (01), (23), (45), (67).
    pub fn g2222_generators() -> Vec<MonomialAutomorphism> {
        vec![
            // pair swap (x0,x1) ↔ (x2,x3)
            MonomialAutomorphism::from_cycles(8, &[&[0, 2], &[1, 3]]).unwrap(),
            phi_2222(),
            MonomialAutomorphism::from_cycles(8, &[&[0, 1]]).unwrap(),
            MonomialAutomorphism::from_cycles(8, &[&[2, 3]]).unwrap(),
            MonomialAutomorphism::from_cycles(8, &[&[4, 5]]).unwrap(),
            MonomialAutomorphism::from_cycles(8, &[&[6, 7]]).unwrap(),
        ]
    }

    /// Generators of the order-8 sign group for the (2,2,2,2) family.
    pub fn h2222_generators() -> Vec<MonomialAutomorphism> {
        let sign = |flips: [usize; 2]| {
            let mut scale = vec![Scalar::new(1.0, 0.0); 8];
            for f in flips {
                scale[f] = Scalar::new(-1.0, 0.0);
            }
            MonomialAutomorphism::from_scale(scale).unwrap()
        };
        vec![sign([0, 1]), sign([2, 3]), sign([4, 5])]
    }

    pub fn gh2222_generators() -> Vec<MonomialAutomorphism> {
        let mut gens = g2222_generators();
        gens.extend(h2222_generators());
        gens
    }
}
