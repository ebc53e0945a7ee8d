//! Minimal vectors of the classes of `L/2L` and the Voronoi-relevant vectors.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::enumerate::enumerate_in_ellipsoid;
use crate::form::GramForm;
use crate::rational::{int, neg_int, normalize_sign, IntVector, Rational};

/// One nonzero class of `L/2L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRecord {
    /// Coordinates in `{0,1}`, not all zero.
    pub representative: IntVector,
    pub min_norm: Rational,
    /// One vector per `±` pair, leading coordinate positive, sorted.
    pub min_vectors: Vec<IntVector>,
    /// Exactly one `±` pair attains the minimum.
    pub simple: bool,
}

fn class_of(z: &[i64]) -> IntVector {
    z.iter().map(|x| x.rem_euclid(2)).collect()
}

/// Minimal vectors of all `2ⁿ − 1` nonzero cosets, ordered by the binary
/// value of the representative (coordinate `i` is bit `i`).
///
/// Every vector of norm at most `R` is enumerated, starting at twice the
/// largest diagonal entry and doubling `R` until each coset has been hit.
/// Once a coset has a member of norm `≤ R`, all of its minimal vectors are
/// within the enumerated set.
pub fn coset_minima(q: &GramForm) -> Vec<CosetRecord> {
    let n = q.dim();
    let classes = (1usize << n) - 1;
    let max_diag = (0..n).map(|i| q.entry(i, i).clone()).max().expect("n >= 1");
    let mut radius = max_diag * int(2);
    let origin = vec![Rational::zero(); n];
    loop {
        let mut best: BTreeMap<IntVector, (Rational, Vec<IntVector>)> = BTreeMap::new();
        for z in enumerate_in_ellipsoid(q, &origin, &radius) {
            let class = class_of(&z);
            if class.iter().all(|&x| x == 0) {
                continue;
            }
            let norm = q.norm(&z);
            let entry = best
                .entry(class)
                .or_insert_with(|| (norm.clone(), Vec::new()));
            if norm < entry.0 {
                *entry = (norm, vec![z]);
            } else if norm == entry.0 {
                entry.1.push(z);
            }
        }
        if best.len() == classes {
            let mut records: Vec<CosetRecord> = best
                .into_iter()
                .map(|(rep, (min_norm, vectors))| {
                    let mut min_vectors: Vec<IntVector> = vectors
                        .into_iter()
                        .map(|mut v| {
                            normalize_sign(&mut v);
                            v
                        })
                        .collect();
                    min_vectors.sort();
                    min_vectors.dedup();
                    CosetRecord {
                        simple: min_vectors.len() == 1,
                        representative: rep,
                        min_norm,
                        min_vectors,
                    }
                })
                .collect();
            records.sort_by_key(|r| mask_of(&r.representative));
            return records;
        }
        radius *= int(2);
    }
}

fn mask_of(rep: &[i64]) -> usize {
    rep.iter()
        .enumerate()
        .map(|(i, &b)| (b as usize) << i)
        .sum()
}

/// Minimal vectors (both signs) of the simple cosets: the facet normals of
/// the Voronoi polytope. Sorted lexicographically.
pub fn relevant_vectors(q: &GramForm) -> Vec<IntVector> {
    let mut out: Vec<IntVector> = coset_minima(q)
        .into_iter()
        .filter(|c| c.simple)
        .flat_map(|c| {
            let v = c.min_vectors[0].clone();
            [neg_int(&v), v]
        })
        .collect();
    out.sort();
    out
}
