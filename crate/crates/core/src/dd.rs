//! Incremental double description for polyhedral cones
//! `{y : eᵢ·y = 0, aⱼ·y ≥ 0}` over the rationals.
//!
//! The cone is carried as a lineality basis plus extreme rays modulo that
//! basis. Equalities only shrink the lineality space. Each inequality either
//! pivots on a lineality vector it does not annihilate, or splits the current
//! rays into positive, zero and negative parts and combines adjacent
//! positive/negative pairs. Adjacency uses the combinatorial zero-set test.

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};

use crate::linalg::dot;
use crate::rational::{primitive_rational, RatVector, Rational};

#[derive(Clone, Debug)]
pub struct Ray {
    pub vector: RatVector,
    /// Indices of inequalities satisfied with equality.
    pub zero_set: FixedBitSet,
}

#[derive(Clone, Debug, Default)]
pub struct ConeGenerators {
    pub rays: Vec<Ray>,
    pub lineality: Vec<RatVector>,
}

fn axpy(y: &[Rational], alpha: &Rational, x: &[Rational]) -> RatVector {
    y.iter().zip(x).map(|(a, b)| a + alpha * b).collect()
}

fn eliminate(target: &[Rational], pivot: &[Rational], row: &[Rational], pivot_value: &Rational) -> RatVector {
    let t = dot(row, target);
    if t.is_zero() {
        return target.to_vec();
    }
    primitive_rational(&axpy(target, &(-t / pivot_value), pivot))
}

/// Extreme rays and lineality of the cone cut out of `Qᵈⁱᵐ`.
pub fn double_description(
    dim: usize,
    equalities: &[RatVector],
    inequalities: &[RatVector],
) -> ConeGenerators {
    let m = inequalities.len();
    let mut lineality: Vec<RatVector> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| Rational::from_integer(i64::from(i == j).into()))
                .collect()
        })
        .collect();

    for eq in equalities {
        if let Some(p) = lineality.iter().position(|l| !dot(eq, l).is_zero()) {
            let pivot = lineality.swap_remove(p);
            let pv = dot(eq, &pivot);
            for l in lineality.iter_mut() {
                *l = eliminate(l, &pivot, eq, &pv);
            }
        }
    }

    let mut rays: Vec<Ray> = Vec::new();
    for (idx, a) in inequalities.iter().enumerate() {
        if let Some(p) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut pivot = lineality.swap_remove(p);
            let mut pv = dot(a, &pivot);
            if pv.is_negative() {
                pivot.iter_mut().for_each(|x| *x = -x.clone());
                pv = -pv;
            }
            for l in lineality.iter_mut() {
                *l = eliminate(l, &pivot, a, &pv);
            }
            for r in rays.iter_mut() {
                r.vector = eliminate(&r.vector, &pivot, a, &pv);
                r.zero_set.insert(idx);
            }
            // the pivot annihilated every earlier inequality
            let mut zero_set = FixedBitSet::with_capacity(m);
            zero_set.insert_range(..idx);
            rays.push(Ray { vector: primitive_rational(&pivot), zero_set });
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|r| dot(a, &r.vector)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zero_set.insert(idx);
                }
            }
            continue;
        }

        let mut fresh = Vec::new();
        for &i in &pos {
            for &j in &neg {
                let mut common = rays[i].zero_set.clone();
                common.intersect_with(&rays[j].zero_set);
                let adjacent = rays.iter().enumerate().all(|(k, r)| {
                    k == i || k == j || !common.is_subset(&r.zero_set)
                });
                if !adjacent {
                    continue;
                }
                // vᵢ·(−a·rⱼ) + vⱼ·(a·rᵢ) lies on a·y = 0
                let combo: RatVector = rays[i]
                    .vector
                    .iter()
                    .zip(&rays[j].vector)
                    .map(|(x, y)| x * (-&values[j]) + y * &values[i])
                    .collect();
                common.insert(idx);
                fresh.push(Ray { vector: primitive_rational(&combo), zero_set: common });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zero_set.insert(idx);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    ConeGenerators { rays, lineality }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, to_rat};

    fn v(x: &[i64]) -> RatVector {
        to_rat(x)
    }

    fn sorted_rays(g: &ConeGenerators) -> Vec<RatVector> {
        let mut r: Vec<RatVector> = g.rays.iter().map(|r| r.vector.clone()).collect();
        r.sort();
        r
    }

    #[test]
    fn positive_orthant() {
        let g = double_description(3, &[], &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert!(g.lineality.is_empty());
        assert_eq!(sorted_rays(&g), vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // cone over the square |x|,|y| ≤ t
        let ineqs = [v(&[1, 0, 1]), v(&[-1, 0, 1]), v(&[0, 1, 1]), v(&[0, -1, 1])];
        let g = double_description(3, &[], &ineqs);
        assert!(g.lineality.is_empty());
        assert_eq!(
            sorted_rays(&g),
            vec![v(&[-1, -1, 1]), v(&[-1, 1, 1]), v(&[1, -1, 1]), v(&[1, 1, 1])]
        );
        for r in &g.rays {
            assert_eq!(r.zero_set.count_ones(..), 2);
        }
    }

    #[test]
    fn equalities_restrict_the_space() {
        // y₂ = 0, y₁ ≥ 0, y₃ ≥ 0 in Q³
        let g = double_description(3, &[v(&[0, 1, 0])], &[v(&[1, 0, 0]), v(&[0, 0, 1])]);
        assert!(g.lineality.is_empty());
        assert_eq!(sorted_rays(&g), vec![v(&[0, 0, 1]), v(&[1, 0, 0])]);
    }

    #[test]
    fn half_space_keeps_lineality() {
        let g = double_description(2, &[], &[v(&[1, 1])]);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays.len(), 1);
        assert_eq!(dot(&v(&[1, 1]), &g.lineality[0]), int(0));
    }

    #[test]
    fn redundant_inequality_is_harmless() {
        let ineqs = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let g = double_description(2, &[], &ineqs);
        assert_eq!(sorted_rays(&g), vec![v(&[0, 1]), v(&[1, 0])]);
    }
}
