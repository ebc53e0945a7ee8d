//! The secondary cone of an L-type: all forms with the same Delaunay
//! subdivision, in coordinates `(Q₁₁, Q₁₂, …, Q₁ₙ, Q₂₂, …, Qₙₙ)`.
//!
//! Equalities keep the extra vertices of non-simplicial cells on their
//! spheres; inequalities keep each neighbouring apex off the sphere of the
//! cell across a facet through the origin.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::dd::double_description;
use crate::delaunay::{delaunay_star, DelaunayStar};
use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::lamina::Rank1Form;
use crate::linalg::{dot, rank};
use crate::rational::{
    dot_int, normalize_sign, primitive_int_vector, primitive_integer, primitive_rational, IntVector,
    RatMatrix, RatVector, Rational,
};

/// Number of free entries of an `n × n` symmetric matrix.
pub fn form_space_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i..n).map(move |j| (i, j)))
}

/// Upper-triangle coordinates of a symmetric matrix.
pub fn form_coordinates(m: &RatMatrix) -> RatVector {
    upper_pairs(m.len()).map(|(i, j)| m[i][j].clone()).collect()
}

fn matrix_from_coordinates(y: &[Rational], n: usize) -> RatMatrix {
    let mut m = vec![vec![Rational::zero(); n]; n];
    for ((i, j), v) in upper_pairs(n).zip(y) {
        m[i][j] = v.clone();
        m[j][i] = v.clone();
    }
    m
}

/// The linear functional `Q ↦ Σᵢⱼ Cᵢⱼ Qᵢⱼ` for a symmetric `C`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FormFunctional {
    pub coefficients: RatMatrix,
}

impl FormFunctional {
    /// Coefficients against [`form_coordinates`]: off-diagonal terms count
    /// twice.
    pub fn coordinates(&self) -> RatVector {
        upper_pairs(self.coefficients.len())
            .map(|(i, j)| {
                let c = &self.coefficients[i][j];
                if i == j {
                    c.clone()
                } else {
                    c + c
                }
            })
            .collect()
    }

    pub fn eval(&self, m: &RatMatrix) -> Rational {
        dot(&self.coordinates(), &form_coordinates(m))
    }
}

#[derive(Clone, Debug)]
pub struct SecondaryCone {
    pub dim: usize,
    pub equalities: Vec<FormFunctional>,
    pub inequalities: Vec<FormFunctional>,
}

impl SecondaryCone {
    pub fn space_dim(&self) -> usize {
        form_space_dim(self.dim)
    }

    /// Dimension of the linear span of the cone.
    pub fn cone_dim(&self) -> usize {
        let rows: RatMatrix = self.equalities.iter().map(FormFunctional::coordinates).collect();
        self.space_dim() - rank(&rows)
    }

    /// In the closed cone.
    pub fn contains(&self, m: &RatMatrix) -> bool {
        self.equalities.iter().all(|e| e.eval(m).is_zero())
            && self.inequalities.iter().all(|f| !f.eval(m).is_negative())
    }

    /// In the relative interior: equalities exact, inequalities strict.
    pub fn contains_in_interior(&self, m: &RatMatrix) -> bool {
        self.equalities.iter().all(|e| e.eval(m).is_zero())
            && self.inequalities.iter().all(|f| f.eval(m).is_positive())
    }
}

/// Primitive integer multiple with a positive scale, as rationals.
fn scaled_positive(m: &RatMatrix) -> RatMatrix {
    let n = m.len();
    matrix_from_coordinates(&primitive_rational(&form_coordinates(m)), n)
}

/// The secondary cone of the L-type of `star`. Errors if `q` is not in its
/// relative interior.
pub fn cone_of_ltype(q: &GramForm, star: &DelaunayStar) -> Result<SecondaryCone> {
    let n = q.dim();
    let origin = vec![0i64; n];
    let mut equalities: BTreeSet<FormFunctional> = BTreeSet::new();
    let mut inequalities: BTreeSet<FormFunctional> = BTreeSet::new();

    for cell in &star.cells {
        if cell.vertices.len() == n + 1 {
            continue;
        }
        let basis = cell.sphere_basis(&origin)?;
        for u in &cell.vertices {
            if u == &origin || basis.vectors().contains(u) {
                continue;
            }
            let c = scaled_positive(&basis.margin_functional(u));
            if c.iter().flatten().all(Zero::is_zero) {
                continue;
            }
            // sign of the first nonzero coordinate is irrelevant for equalities
            let coords = form_coordinates(&c);
            let lead = coords.iter().find(|x| !x.is_zero()).expect("nonzero");
            let c = if lead.is_negative() {
                c.iter().map(|row| row.iter().map(|x| -x).collect()).collect()
            } else {
                c
            };
            equalities.insert(FormFunctional { coefficients: c });
        }
    }

    for adj in star.adjacencies()? {
        let cell = &star.cells[adj.cell];
        let neighbor = &star.cells[adj.neighbor];
        let apex = neighbor
            .vertices
            .iter()
            .find(|v| dot_int(&adj.facet.normal, v) != adj.facet.offset)
            .ok_or_else(|| Error::Invariant("neighbour cell is flat".into()))?;
        let basis = cell.sphere_basis(&origin)?;
        let c = scaled_positive(&basis.margin_functional(apex));
        inequalities.insert(FormFunctional { coefficients: c });
    }

    let cone = SecondaryCone {
        dim: n,
        equalities: equalities.into_iter().collect(),
        inequalities: inequalities.into_iter().collect(),
    };
    if !cone.contains_in_interior(q.entries()) {
        return Err(Error::Invariant("form is not interior to its own cone".into()));
    }
    Ok(cone)
}

pub fn secondary_cone(q: &GramForm) -> Result<SecondaryCone> {
    cone_of_ltype(q, &delaunay_star(q)?)
}

/// An extreme ray as a primitive integer symmetric matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExtremeRay {
    pub matrix: Vec<IntVector>,
    pub rank: usize,
    /// For rank 1, the primitive `k` with matrix `kkᵀ` up to a positive
    /// factor, leading coordinate positive.
    pub k: Option<IntVector>,
}

/// Rank of an integer symmetric matrix, and `k` when the rank is one.
pub fn classify_ray(matrix: &[IntVector]) -> (usize, Option<IntVector>) {
    let rows: RatMatrix = matrix.iter().map(|r| crate::rational::to_rat(r)).collect();
    let r = rank(&rows);
    if r != 1 {
        return (r, None);
    }
    let row = matrix.iter().find(|row| row.iter().any(|&x| x != 0)).expect("rank one");
    let mut k = primitive_int_vector(row).expect("nonzero row");
    normalize_sign(&mut k);
    (1, Some(k))
}

/// Extreme rays of a pointed cone, sorted.
pub fn extreme_rays(cone: &SecondaryCone) -> Result<Vec<ExtremeRay>> {
    let n = cone.dim;
    let eqs: Vec<RatVector> = cone.equalities.iter().map(FormFunctional::coordinates).collect();
    let ineqs: Vec<RatVector> = cone.inequalities.iter().map(FormFunctional::coordinates).collect();
    let g = double_description(cone.space_dim(), &eqs, &ineqs);
    if !g.lineality.is_empty() {
        return Err(Error::Invariant("secondary cone is not pointed".into()));
    }
    let mut rays = Vec::with_capacity(g.rays.len());
    for ray in g.rays {
        let coords = primitive_integer(&ray.vector)?.ok_or(Error::ZeroVector)?;
        let matrix: Vec<IntVector> = matrix_from_coordinates(&crate::rational::to_rat(&coords), n)
            .iter()
            .map(|row| row.iter().map(|x| x.to_integer().try_into().map_err(|_| Error::Overflow)).collect())
            .collect::<Result<_>>()?;
        let (rank, k) = classify_ray(&matrix);
        rays.push(ExtremeRay { matrix, rank, k });
    }
    rays.sort();
    rays.dedup();
    Ok(rays)
}

/// Every extreme ray has rank one.
pub fn is_dicing(rays: &[ExtremeRay]) -> bool {
    rays.iter().all(|r| r.rank == 1)
}

/// The rank-1 form is a positive multiple of one of the extreme rays.
pub fn ray_membership(rays: &[ExtremeRay], f: &Rank1Form) -> bool {
    let Ok(Some(target)) = primitive_integer(&form_coordinates(&f.matrix)) else {
        return false;
    };
    let positive = target.iter().any(|&x| x > 0);
    positive
        && rays.iter().any(|r| {
            let coords: IntVector = upper_pairs(r.matrix.len()).map(|(i, j)| r.matrix[i][j]).collect();
            coords == target
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms;
    use crate::lamina::rank1_form;
    use crate::rational::{int, to_rat};

    fn ks(rays: &[ExtremeRay]) -> Vec<IntVector> {
        let mut k: Vec<IntVector> = rays.iter().filter_map(|r| r.k.clone()).collect();
        k.sort();
        k
    }

    #[test]
    fn functional_coordinates_double_off_diagonal() {
        let f = FormFunctional { coefficients: vec![to_rat(&[0, 1]), to_rat(&[1, 0])] };
        assert_eq!(f.coordinates(), to_rat(&[0, 2, 0]));
        assert_eq!(f.eval(forms::a2().entries()), int(2));
    }

    #[test]
    fn square_lattice_cone() {
        let q = forms::cubic(2);
        let cone = secondary_cone(&q).unwrap();
        assert_eq!(cone.equalities.len(), 1);
        assert_eq!(cone.cone_dim(), 2);
        let rays = extreme_rays(&cone).unwrap();
        assert!(is_dicing(&rays));
        assert_eq!(ks(&rays), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn hexagonal_cone() {
        let q = forms::a2();
        let cone = secondary_cone(&q).unwrap();
        assert!(cone.equalities.is_empty());
        assert_eq!(cone.cone_dim(), 3);
        let rays = extreme_rays(&cone).unwrap();
        assert!(is_dicing(&rays));
        assert_eq!(ks(&rays), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(ray_membership(&rays, &rank1_form(&q, &[1, 1]).unwrap()));
        assert!(!ray_membership(&rays, &rank1_form(&q, &[1, -1]).unwrap()));
    }

    #[test]
    fn three_dimensional_cones() {
        for (q, count, dim) in [(forms::cubic(3), 3, 3), (forms::fcc(), 4, 4), (forms::bcc(), 6, 6)] {
            let cone = secondary_cone(&q).unwrap();
            assert_eq!(cone.cone_dim(), dim);
            let rays = extreme_rays(&cone).unwrap();
            assert!(is_dicing(&rays));
            assert_eq!(rays.len(), count);
        }
    }

    #[test]
    fn d4_cone_is_a_single_ray() {
        let q = forms::d4();
        let cone = secondary_cone(&q).unwrap();
        assert_eq!(cone.cone_dim(), 1);
        let rays = extreme_rays(&cone).unwrap();
        assert_eq!(rays.len(), 1);
        assert_eq!(rays[0].rank, 4);
        assert!(!is_dicing(&rays));
    }
}
