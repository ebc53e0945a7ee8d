#![allow(dead_code)]

use num_traits::Zero;
use rand::Rng;
use zonelab::form::GramForm;
use zonelab::linalg::determinant;
use zonelab::rational::{rat, to_rat};
use zonelab::{IntVector, RatMatrix};

/// `BᵀB` for a random nonsingular integer `B` with entries in `[-2, 2]`.
pub fn random_form<R: Rng>(rng: &mut R, n: usize) -> GramForm {
    loop {
        let b: Vec<IntVector> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let rows: RatMatrix = b.iter().map(|r| to_rat(r)).collect();
        if determinant(&rows).unwrap().is_zero() {
            continue;
        }
        let g: Vec<IntVector> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|r| b[r][i] * b[r][j]).sum()).collect())
            .collect();
        return GramForm::from_ints(&g).unwrap();
    }
}

/// Random integer vectors `v₁..vₙ` with entries in `[-bound, bound]`,
/// linearly independent.
pub fn random_basis<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<IntVector> {
    loop {
        let b: Vec<IntVector> =
            (0..n).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        let rows: RatMatrix = b.iter().map(|r| to_rat(r)).collect();
        if !determinant(&rows).unwrap().is_zero() {
            return b;
        }
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> IntVector {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Symmetric perturbation with every entry changed by a multiple of
/// `1/(8·den)` of absolute value at most `1/den`.
#[allow(clippy::needless_range_loop)]
pub fn perturbed<R: Rng>(q: &GramForm, rng: &mut R, den: i64) -> GramForm {
    let n = q.dim();
    let mut m = q.entries().clone();
    for i in 0..n {
        for j in i..n {
            let d = rat(rng.gen_range(-8..=8), 8 * den);
            m[i][j] += &d;
            if i != j {
                m[j][i] += d;
            }
        }
    }
    GramForm::new(m).unwrap()
}

/// Lifting oracle with the box grown until no vertex touches its boundary.
pub fn lifted_star(q: &GramForm) -> zonelab::delaunay::DelaunayStar {
    let mut radius = 2;
    loop {
        match zonelab::lifting::lifting_oracle(q, radius) {
            Err(zonelab::Error::BoxTooSmall { .. }) => radius += 1,
            other => return other.unwrap(),
        }
    }
}
