//! Delaunay cells around the origin, built dually from the Voronoi vertices,
//! and the canonical same-basis L-type fingerprint.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::Signed;

use crate::enumerate::enumerate_in_ellipsoid;
use crate::error::{Error, Result};
use crate::form::{GramForm, SphereBasis};
use crate::linalg::{int_rank, integer_normal};
use crate::rational::{
    dot_int, format_int_vector, int, sub_int, IntVector, RatVector, Rational,
};
use crate::voronoi::{enumerate_vertices, voronoi_polytope};

/// Convex hull of the lattice points on one empty sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelaunayCell {
    /// Every lattice point on the sphere, sorted lexicographically.
    pub vertices: Vec<IntVector>,
    pub center: RatVector,
    pub radius_sq: Rational,
}

/// A facet of a cell: `normal·x ≤ offset` on the cell, with equality exactly
/// on `vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFacet {
    pub normal: IntVector,
    pub offset: i64,
    pub vertices: Vec<IntVector>,
}

impl DelaunayCell {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains_vertex(&self, p: &[i64]) -> bool {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(p)).is_ok()
    }

    /// Facets through the given vertex (all facets with `None`), found by
    /// testing every hyperplane spanned by `n` vertices.
    pub fn facets_through(&self, through: Option<&[i64]>) -> Vec<CellFacet> {
        let n = self.dim();
        let mut found: BTreeSet<Vec<IntVector>> = BTreeSet::new();
        let mut out = Vec::new();
        let candidates: Box<dyn Iterator<Item = Vec<&IntVector>>> = match through {
            Some(p) => {
                let others: Vec<&IntVector> =
                    self.vertices.iter().filter(|v| v.as_slice() != p).collect();
                let anchor = self
                    .vertices
                    .iter()
                    .find(|v| v.as_slice() == p)
                    .expect("anchor must be a vertex");
                Box::new(others.into_iter().combinations(n - 1).map(move |mut c| {
                    c.insert(0, anchor);
                    c
                }))
            }
            None => Box::new(self.vertices.iter().combinations(n)),
        };
        for subset in candidates {
            let rows: Vec<IntVector> = subset[1..].iter().map(|v| sub_int(v, subset[0])).collect();
            let Some(mut normal) = integer_normal(&rows, n) else {
                continue;
            };
            let mut offset = dot_int(&normal, subset[0]);
            let values: Vec<i64> = self.vertices.iter().map(|v| dot_int(&normal, v)).collect();
            if values.iter().all(|&x| x >= offset) {
                normal.iter_mut().for_each(|x| *x = -*x);
                offset = -offset;
            } else if !values.iter().all(|&x| x <= offset) {
                continue;
            }
            let on: Vec<IntVector> = self
                .vertices
                .iter()
                .filter(|v| dot_int(&normal, v) == offset)
                .cloned()
                .collect();
            if found.insert(on.clone()) {
                out.push(CellFacet { normal, offset, vertices: on });
            }
        }
        out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        out
    }

    pub fn facets(&self) -> Vec<CellFacet> {
        self.facets_through(None)
    }

    /// `n` linearly independent vectors `v − base` over the cell's vertices,
    /// chosen greedily in vertex order.
    pub fn sphere_basis(&self, base: &[i64]) -> Result<SphereBasis> {
        let n = self.dim();
        let mut chosen: Vec<IntVector> = Vec::with_capacity(n);
        for v in &self.vertices {
            let d = sub_int(v, base);
            if d.iter().all(|&x| x == 0) {
                continue;
            }
            chosen.push(d);
            if int_rank(&chosen) < chosen.len() {
                chosen.pop();
            }
            if chosen.len() == n {
                break;
            }
        }
        SphereBasis::new(&chosen)
    }

    fn canonical_text(&self) -> String {
        let parts: Vec<String> = self.vertices.iter().map(|v| format_int_vector(v)).collect();
        format!("[{}]", parts.join(","))
    }
}

/// Delaunay cells having the origin as a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelaunayStar {
    pub cells: Vec<DelaunayCell>,
}

/// One facet through the origin shared by two star cells.
#[derive(Clone, Debug)]
pub struct Adjacency {
    pub cell: usize,
    pub facet: CellFacet,
    pub neighbor: usize,
}

impl DelaunayStar {
    pub fn dim(&self) -> usize {
        self.cells.first().map_or(0, DelaunayCell::dim)
    }

    /// For every cell and every facet of it through the origin, the unique
    /// other star cell containing that facet.
    pub fn adjacencies(&self) -> Result<Vec<Adjacency>> {
        let n = self.dim();
        let origin = vec![0i64; n];
        let mut out = Vec::new();
        for (i, cell) in self.cells.iter().enumerate() {
            for facet in cell.facets_through(Some(&origin)) {
                let sharing: Vec<usize> = self
                    .cells
                    .iter()
                    .enumerate()
                    .filter(|&(j, c)| j != i && facet.vertices.iter().all(|v| c.contains_vertex(v)))
                    .map(|(j, _)| j)
                    .collect();
                if sharing.len() != 1 {
                    return Err(Error::Invariant(format!(
                        "facet {:?} of star cell {i} is shared by {} other cells",
                        facet.vertices,
                        sharing.len()
                    )));
                }
                out.push(Adjacency { cell: i, facet, neighbor: sharing[0] });
            }
        }
        Ok(out)
    }

    /// Checks the star invariants: origin in every cell, full-dimensional
    /// cells with exact radii, and each facet through the origin shared by
    /// exactly two cells.
    pub fn validate(&self, q: &GramForm) -> Result<()> {
        let n = q.dim();
        let origin = vec![0i64; n];
        for cell in &self.cells {
            if !cell.contains_vertex(&origin) {
                return Err(Error::Invariant("star cell without the origin".into()));
            }
            if cell.vertices.len() < n + 1 {
                return Err(Error::Invariant("cell with fewer than n+1 vertices".into()));
            }
            let diffs: Vec<IntVector> = cell.vertices.iter().map(|v| sub_int(v, &origin)).collect();
            if int_rank(&diffs) != n {
                return Err(Error::Invariant("cell is not full-dimensional".into()));
            }
            for v in &cell.vertices {
                if distance_sq(q, v, &cell.center) != cell.radius_sq {
                    return Err(Error::Invariant("vertex off the cell sphere".into()));
                }
            }
        }
        self.adjacencies().map(|_| ())
    }
}

pub(crate) fn distance_sq(q: &GramForm, z: &[i64], c: &[Rational]) -> Rational {
    let d: RatVector = z.iter().zip(c).map(|(&a, b)| int(a) - b).collect();
    q.eval(&d).expect("dimensions agree")
}

/// The cell dual to the Voronoi vertex `w`: all lattice points at squared
/// distance `Q(w)` from `w`, with emptiness verified.
pub fn star_cell_at(q: &GramForm, w: &[Rational]) -> Result<DelaunayCell> {
    let n = q.dim();
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: w.len() });
    }
    let radius_sq = q.eval(w)?;
    let mut vertices = Vec::new();
    for z in enumerate_in_ellipsoid(q, w, &radius_sq) {
        if distance_sq(q, &z, w) < radius_sq {
            return Err(Error::EmptinessViolation { point: z });
        }
        vertices.push(z);
    }
    if vertices.len() < n + 1 || int_rank(&vertices) < n {
        return Err(Error::Precondition("center is not a Voronoi vertex".into()));
    }
    Ok(DelaunayCell { vertices, center: w.to_vec(), radius_sq })
}

/// One cell per Voronoi vertex, in vertex order, with all star invariants
/// verified.
pub fn delaunay_star(q: &GramForm) -> Result<DelaunayStar> {
    let vertices = enumerate_vertices(&voronoi_polytope(q)?)?;
    let star = delaunay_star_from_vertices(q, &vertices)?;
    star.validate(q)?;
    Ok(star)
}

pub fn delaunay_star_from_vertices(q: &GramForm, vertices: &[RatVector]) -> Result<DelaunayStar> {
    let cells = vertices
        .iter()
        .map(|w| star_cell_at(q, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(DelaunayStar { cells })
}

/// Canonical text of a star: sorted cells, each its sorted vertex list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LTypeFingerprint(pub String);

impl fmt::Display for LTypeFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn fingerprint(star: &DelaunayStar) -> LTypeFingerprint {
    let mut cells: Vec<&DelaunayCell> = star.cells.iter().collect();
    cells.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    let parts: Vec<String> = cells.iter().map(|c| c.canonical_text()).collect();
    LTypeFingerprint(parts.join(";"))
}

/// Fingerprint of the star of `Q`, computed from scratch.
pub fn form_fingerprint(q: &GramForm) -> Result<LTypeFingerprint> {
    Ok(fingerprint(&delaunay_star(q)?))
}

/// Does the cell's sphere have lattice points strictly inside? Used in
/// tests and audits; `false` for a genuine Delaunay cell.
pub fn has_interior_point(q: &GramForm, cell: &DelaunayCell) -> bool {
    enumerate_in_ellipsoid(q, &cell.center, &cell.radius_sq)
        .iter()
        .any(|z| distance_sq(q, z, &cell.center) < cell.radius_sq)
}

/// Sign helper for margins: `-1`, `0` or `1`.
pub fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
