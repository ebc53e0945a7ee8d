//! The Voronoi polytope of a form: facets from relevant vectors, exact
//! vertices by double description, the full face poset, and zones.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::cosets::relevant_vectors;
use crate::dd::double_description;
use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::linalg::{self, dot};
use crate::rational::{canonical_direction, int, to_rat, IntVector, RatVector, Rational};

/// `2·xᵀQv ≤ Q(v)` for the relevant vector `v`: the points at least as close
/// to the origin as to `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: IntVector,
    /// `2Qv`, the linear coefficients in `x`.
    pub coefficients: RatVector,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct HPolytope {
    pub dim: usize,
    pub inequalities: Vec<Halfspace>,
}

impl HPolytope {
    fn is_tight(&self, facet: usize, x: &[Rational]) -> bool {
        let h = &self.inequalities[facet];
        dot(&h.coefficients, x) == h.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertex_set: Vec<usize>,
    pub active_inequalities: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FacePoset {
    pub dim: usize,
    pub vertices: Vec<RatVector>,
    /// Graded by dimension, then by vertex set. The last face is the
    /// polytope itself.
    pub faces: Vec<Face>,
    /// `(lower, upper)` face index pairs between consecutive grades.
    pub incidence: Vec<(usize, usize)>,
}

impl FacePoset {
    pub fn face_ids_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == d).map(|(i, _)| i)
    }

    /// Face counts for dimensions `0..n`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim).map(|d| self.face_ids_of_dim(d).count()).collect()
    }

    pub fn edge_ids(&self) -> Vec<usize> {
        self.face_ids_of_dim(1).collect()
    }

    fn edge_direction(&self, edge: usize) -> Result<IntVector> {
        let f = &self.faces[edge];
        let (a, b) = (&self.vertices[f.vertex_set[0]], &self.vertices[f.vertex_set[1]]);
        let d: RatVector = b.iter().zip(a).map(|(x, y)| x - y).collect();
        canonical_direction(&d)?.ok_or(Error::Invariant("degenerate edge".into()))
    }

    fn contains(&self, outer: usize, inner: usize) -> bool {
        let o = &self.faces[outer].vertex_set;
        self.faces[inner].vertex_set.iter().all(|v| o.binary_search(v).is_ok())
    }
}

/// Class of mutually parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zone {
    /// Coprime integer direction, leading coordinate positive.
    pub direction: IntVector,
    pub edge_ids: Vec<usize>,
    /// `None` until classified.
    pub closed: Option<bool>,
}

pub fn voronoi_polytope(q: &GramForm) -> Result<HPolytope> {
    let two = int(2);
    let inequalities = relevant_vectors(q)
        .into_iter()
        .map(|v| {
            let qv = q.apply(&to_rat(&v));
            Halfspace {
                coefficients: qv.into_iter().map(|x| x * &two).collect(),
                rhs: q.norm(&v),
                normal: v,
            }
        })
        .collect();
    Ok(HPolytope { dim: q.dim(), inequalities })
}

/// Exact vertices, sorted lexicographically.
pub fn enumerate_vertices(p: &HPolytope) -> Result<Vec<RatVector>> {
    let n = p.dim;
    // homogenise: y = (x, t), rhs·t − a·x ≥ 0 and t ≥ 0
    let mut rows: Vec<RatVector> = p
        .inequalities
        .iter()
        .map(|h| {
            let mut row: RatVector = h.coefficients.iter().map(|c| -c.clone()).collect();
            row.push(h.rhs.clone());
            row
        })
        .collect();
    let mut t_row = vec![Rational::zero(); n];
    t_row.push(Rational::one());
    rows.push(t_row);
    let cone = double_description(n + 1, &[], &rows);
    if !cone.lineality.is_empty() {
        return Err(Error::Invariant("Voronoi polytope is unbounded".into()));
    }
    let mut vertices = Vec::with_capacity(cone.rays.len());
    for ray in cone.rays {
        let t = &ray.vector[n];
        if !t.is_positive() {
            return Err(Error::Invariant("Voronoi polytope is unbounded".into()));
        }
        vertices.push(ray.vector[..n].iter().map(|x| x / t).collect::<RatVector>());
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

fn affine_dim(points: &[&RatVector]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0];
    let diffs: Vec<RatVector> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&diffs)
}

/// Every face as the intersection of facet vertex sets, closed under
/// intersection, graded by affine dimension.
pub fn build_face_poset(p: &HPolytope) -> Result<FacePoset> {
    let n = p.dim;
    let vertices = enumerate_vertices(p)?;
    let facet_sets: Vec<Vec<usize>> = (0..p.inequalities.len())
        .map(|i| (0..vertices.len()).filter(|&j| p.is_tight(i, &vertices[j])).collect())
        .collect();
    for (i, s) in facet_sets.iter().enumerate() {
        let pts: Vec<&RatVector> = s.iter().map(|&j| &vertices[j]).collect();
        if pts.is_empty() || affine_dim(&pts) + 1 != n {
            return Err(Error::Invariant(format!(
                "inequality for {:?} does not support a facet",
                p.inequalities[i].normal
            )));
        }
    }

    let mut seen: BTreeSet<Vec<usize>> = facet_sets.iter().cloned().collect();
    let mut queue: Vec<Vec<usize>> = seen.iter().cloned().collect();
    while let Some(face) = queue.pop() {
        for f in &facet_sets {
            let meet: Vec<usize> = face.iter().copied().filter(|v| f.binary_search(v).is_ok()).collect();
            if !meet.is_empty() && seen.insert(meet.clone()) {
                queue.push(meet);
            }
        }
    }

    let mut faces: Vec<Face> = seen
        .into_iter()
        .map(|vs| {
            let pts: Vec<&RatVector> = vs.iter().map(|&j| &vertices[j]).collect();
            let active = facet_sets
                .iter()
                .enumerate()
                .filter(|(_, f)| vs.iter().all(|v| f.binary_search(v).is_ok()))
                .map(|(i, _)| i)
                .collect();
            Face { dim: affine_dim(&pts), vertex_set: vs, active_inequalities: active }
        })
        .collect();
    faces.push(Face {
        dim: n,
        vertex_set: (0..vertices.len()).collect(),
        active_inequalities: Vec::new(),
    });
    faces.sort_by(|a, b| (a.dim, &a.vertex_set).cmp(&(b.dim, &b.vertex_set)));

    let mut poset = FacePoset { dim: n, vertices, faces, incidence: Vec::new() };
    let by_dim: BTreeMap<usize, Vec<usize>> = (0..=n)
        .map(|d| (d, poset.face_ids_of_dim(d).collect()))
        .collect();
    let mut incidence = Vec::new();
    for d in 0..n {
        for &lo in &by_dim[&d] {
            for &hi in &by_dim[&(d + 1)] {
                if poset.contains(hi, lo) {
                    incidence.push((lo, hi));
                }
            }
        }
    }
    poset.incidence = incidence;

    for e in poset.edge_ids() {
        if poset.faces[e].vertex_set.len() != 2 {
            return Err(Error::Invariant("edge without exactly two vertices".into()));
        }
    }
    let euler: i64 = poset
        .f_vector()
        .iter()
        .enumerate()
        .map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) })
        .sum();
    let expected = if n.is_multiple_of(2) { 0 } else { 2 };
    if euler != expected {
        return Err(Error::Invariant(format!("Euler relation fails: {euler} != {expected}")));
    }
    Ok(poset)
}

/// Partition of the edges by direction; zones sorted by direction.
pub fn zones(poset: &FacePoset) -> Result<Vec<Zone>> {
    let mut classes: BTreeMap<IntVector, Vec<usize>> = BTreeMap::new();
    for e in poset.edge_ids() {
        classes.entry(poset.edge_direction(e)?).or_default().push(e);
    }
    Ok(classes
        .into_iter()
        .map(|(direction, edge_ids)| Zone { direction, edge_ids, closed: None })
        .collect())
}

/// Closed iff every 2-face holds either two edges of the zone or none.
pub fn classify_zone(poset: &FacePoset, zone: &Zone) -> bool {
    poset.face_ids_of_dim(2).all(|t| {
        let hits = zone.edge_ids.iter().filter(|&&e| poset.contains(t, e)).count();
        hits == 0 || hits == 2
    })
}

pub fn classified_zones(poset: &FacePoset) -> Result<Vec<Zone>> {
    let mut zs = zones(poset)?;
    for z in zs.iter_mut() {
        z.closed = Some(classify_zone(poset, z));
    }
    Ok(zs)
}

/// Primitive `k ∥ Q·d` for the zone direction `d`, leading coordinate positive.
pub fn zone_functional(q: &GramForm, zone: &Zone) -> Result<IntVector> {
    canonical_direction(&q.apply(&to_rat(&zone.direction)))?.ok_or(Error::ZeroVector)
}

/// Convenience: poset and classified zones of `Q`.
pub fn voronoi_analysis(q: &GramForm) -> Result<(HPolytope, FacePoset, Vec<Zone>)> {
    let p = voronoi_polytope(q)?;
    let poset = build_face_poset(&p)?;
    let zs = classified_zones(&poset)?;
    Ok((p, poset, zs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn a2() -> GramForm {
        GramForm::from_ints(&[[2, 1], [1, 2]]).unwrap()
    }

    fn bcc() -> GramForm {
        GramForm::from_ints(&[[3, -1, -1], [-1, 3, -1], [-1, -1, 3]]).unwrap()
    }

    #[test]
    fn square_polytope() {
        let p = voronoi_polytope(&GramForm::identity(2)).unwrap();
        assert_eq!(p.inequalities.len(), 4);
        let h = p.inequalities.iter().find(|h| h.normal == vec![1, 0]).unwrap();
        assert_eq!(h.coefficients, vec![int(2), int(0)]);
        assert_eq!(h.rhs, int(1));
        let vs = enumerate_vertices(&p).unwrap();
        let half = rat(1, 2);
        assert_eq!(
            vs,
            vec![
                vec![-half.clone(), -half.clone()],
                vec![-half.clone(), half.clone()],
                vec![half.clone(), -half.clone()],
                vec![half.clone(), half.clone()],
            ]
        );
        let poset = build_face_poset(&p).unwrap();
        assert_eq!(poset.f_vector(), vec![4, 4]);
    }

    #[test]
    fn hexagon() {
        let p = voronoi_polytope(&a2()).unwrap();
        assert_eq!(p.inequalities.len(), 6);
        let vs = enumerate_vertices(&p).unwrap();
        assert_eq!(vs.len(), 6);
        assert!(vs.contains(&vec![rat(1, 3), rat(1, 3)]));
        // each vertex satisfies two facet equalities, all others strictly
        for v in &vs {
            let tight = (0..6).filter(|&i| p.is_tight(i, v)).count();
            assert_eq!(tight, 2);
        }
        let poset = build_face_poset(&p).unwrap();
        let zs = classified_zones(&poset).unwrap();
        assert_eq!(zs.len(), 3);
        assert!(zs.iter().all(|z| z.edge_ids.len() == 2 && z.closed == Some(true)));
    }

    #[test]
    fn cube() {
        let poset = build_face_poset(&voronoi_polytope(&GramForm::identity(3)).unwrap()).unwrap();
        assert_eq!(poset.f_vector(), vec![8, 12, 6]);
        let zs = classified_zones(&poset).unwrap();
        assert_eq!(zs.len(), 3);
        assert!(zs.iter().all(|z| z.edge_ids.len() == 4 && z.closed == Some(true)));
    }

    #[test]
    fn truncated_octahedron() {
        let poset = build_face_poset(&voronoi_polytope(&bcc()).unwrap()).unwrap();
        assert_eq!(poset.f_vector(), vec![24, 36, 14]);
        let zs = classified_zones(&poset).unwrap();
        assert_eq!(zs.len(), 6);
        assert!(zs.iter().all(|z| z.closed == Some(true)));
    }

    #[test]
    fn twenty_four_cell_zones_are_open() {
        let d4 = GramForm::from_ints(&[[2, 0, -1, 0], [0, 2, -1, 0], [-1, -1, 2, -1], [0, 0, -1, 2]])
            .unwrap();
        let poset = build_face_poset(&voronoi_polytope(&d4).unwrap()).unwrap();
        assert_eq!(poset.f_vector(), vec![24, 96, 96, 24]);
        let zs = classified_zones(&poset).unwrap();
        assert!(!zs.is_empty());
        assert!(zs.iter().all(|z| z.closed == Some(false)));
    }

    #[test]
    fn zone_functional_examples() {
        let z = |d: IntVector| Zone { direction: d, edge_ids: vec![0], closed: None };
        assert_eq!(zone_functional(&GramForm::identity(2), &z(vec![1, 0])).unwrap(), vec![1, 0]);
        assert_eq!(zone_functional(&a2(), &z(vec![1, -1])).unwrap(), vec![1, -1]);
        assert_eq!(zone_functional(&a2(), &z(vec![1, 1])).unwrap(), vec![1, 1]);
    }

    #[test]
    fn central_symmetry_of_vertices_and_facets() {
        for q in [a2(), bcc(), GramForm::from_ints(&[[2, 1, 1], [1, 2, 1], [1, 1, 2]]).unwrap()] {
            let p = voronoi_polytope(&q).unwrap();
            let poset = build_face_poset(&p).unwrap();
            let vs: BTreeSet<RatVector> = poset.vertices.iter().cloned().collect();
            for v in &poset.vertices {
                let neg: RatVector = v.iter().map(|x| -x.clone()).collect();
                assert!(vs.contains(&neg));
            }
            for f in poset.face_ids_of_dim(q.dim() - 1) {
                let set = &poset.faces[f].vertex_set;
                let pts: Vec<&RatVector> = set.iter().map(|&i| &poset.vertices[i]).collect();
                let k = int(pts.len() as i64);
                let center: RatVector = (0..q.dim())
                    .map(|c| pts.iter().map(|p| p[c].clone()).sum::<Rational>() / &k)
                    .collect();
                let mine: BTreeSet<RatVector> = pts.iter().map(|p| (*p).clone()).collect();
                for p in &pts {
                    let refl: RatVector =
                        p.iter().zip(&center).map(|(x, c)| c * int(2) - x).collect();
                    assert!(mine.contains(&refl));
                }
            }
        }
    }
}
