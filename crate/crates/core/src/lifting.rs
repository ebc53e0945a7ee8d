//! Independent star construction by lifting: the lattice points of a
//! coordinate box are lifted to `(z, Q(z))` and the lower hull facets at the
//! lifted origin are found by gift wrapping. Lower-hull facets through the
//! origin are exactly the empty spheres through `0`, so each wrap step moves
//! a sphere centre along a line until it first touches a new lifted point.
//!
//! This path shares nothing with the relevant-vector pipeline beyond exact
//! arithmetic and the cell facet helper; it exists to cross-check it.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::delaunay::{DelaunayCell, DelaunayStar};
use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::linalg::{dot, int_rank, mat_vec, nullspace};
use crate::rational::{int, to_rat, IntVector, RatMatrix, RatVector, Rational};

struct BoxPoints {
    points: Vec<IntVector>,
    norms: Vec<Rational>,
    images: Vec<RatVector>, // Q·p
}

impl BoxPoints {
    fn new(q: &GramForm, radius: i64) -> Self {
        let n = q.dim();
        let side = (2 * radius + 1) as usize;
        let points: Vec<IntVector> = (0..side.pow(n as u32))
            .map(|idx| {
                let mut rest = idx;
                (0..n)
                    .map(|_| {
                        let v = (rest % side) as i64 - radius;
                        rest /= side;
                        v
                    })
                    .collect()
            })
            .collect();
        let norms = points.iter().map(|p| q.norm(p)).collect();
        let images = points.iter().map(|p| q.apply(&to_rat(p))).collect();
        BoxPoints { points, norms, images }
    }

    /// `Q(p) − 2 pᵀQc`: zero on the sphere through the origin centred at `c`.
    fn margin(&self, i: usize, c: &[Rational]) -> Rational {
        &self.norms[i] - dot(&self.images[i], c) * int(2)
    }

    fn on_sphere(&self, c: &[Rational]) -> Vec<IntVector> {
        let mut s: Vec<IntVector> = (0..self.points.len())
            .filter(|&i| self.margin(i, c).is_zero())
            .map(|i| self.points[i].clone())
            .collect();
        s.sort();
        s
    }

    /// Move the centre along `t` until the sphere first meets a point with
    /// `pᵀQt > 0`; returns the new centre.
    fn advance(&self, c: &[Rational], t: &[Rational]) -> Option<RatVector> {
        let mut best: Option<Rational> = None;
        for i in 0..self.points.len() {
            let g = dot(&self.images[i], t);
            if !g.is_positive() {
                continue;
            }
            let tau = self.margin(i, c) / (g * int(2));
            if best.as_ref().is_none_or(|b| tau < *b) {
                best = Some(tau);
            }
        }
        let tau = best?;
        Some(c.iter().zip(t).map(|(a, b)| a + &tau * b).collect())
    }
}

fn make_cell(q: &GramForm, pts: &BoxPoints, center: RatVector) -> DelaunayCell {
    let vertices = pts.on_sphere(&center);
    let radius_sq = q.eval(&center).expect("dimension");
    DelaunayCell { vertices, center, radius_sq }
}

/// Star at the origin of the lower hull of the lifted box `[−R, R]ⁿ`.
/// Fails with [`Error::BoxTooSmall`] when a cell reaches the box boundary.
pub fn lifting_oracle(q: &GramForm, box_radius: i64) -> Result<DelaunayStar> {
    let n = q.dim();
    if box_radius < 1 {
        return Err(Error::BoxTooSmall { radius: box_radius });
    }
    let pts = BoxPoints::new(q, box_radius);
    let too_small = || Error::BoxTooSmall { radius: box_radius };

    // grow one cell from the origin: a sphere of radius zero is empty
    let mut center: RatVector = vec![Rational::zero(); n];
    let mut support = vec![vec![0i64; n]];
    while int_rank(&support) < n {
        let rows: RatMatrix = support
            .iter()
            .filter(|s| s.iter().any(|&x| x != 0))
            .map(|s| q.apply(&to_rat(s)))
            .collect();
        let mut t = nullspace(&rows, n).swap_remove(0);
        let next = match pts.advance(&center, &t) {
            Some(c) => c,
            None => {
                t.iter_mut().for_each(|x| *x = -x.clone());
                pts.advance(&center, &t).ok_or_else(too_small)?
            }
        };
        center = next;
        support = pts.on_sphere(&center);
    }

    let inverse = q.inverse();
    let origin = vec![0i64; n];
    let first = make_cell(q, &pts, center);
    let mut seen: BTreeSet<Vec<IntVector>> = BTreeSet::new();
    seen.insert(first.vertices.clone());
    let mut queue = VecDeque::from([first]);
    let mut cells = Vec::new();
    while let Some(cell) = queue.pop_front() {
        if cell
            .vertices
            .iter()
            .any(|v| v.iter().any(|x| x.abs() >= box_radius))
        {
            return Err(too_small());
        }
        for facet in cell.facets_through(Some(&origin)) {
            // pᵀQt = k·p for t = Q⁻¹k, so the far side is k·p > 0
            let t = mat_vec(&inverse, &to_rat(&facet.normal));
            let c = pts.advance(&cell.center, &t).ok_or_else(too_small)?;
            let next = make_cell(q, &pts, c);
            if seen.insert(next.vertices.clone()) {
                queue.push_back(next);
            }
        }
        cells.push(cell);
    }
    cells.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(DelaunayStar { cells })
}
