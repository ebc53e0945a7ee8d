mod common;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zonelab::cosets::coset_minima;
use zonelab::delaunay::{delaunay_star, fingerprint, star_cell_at, DelaunayCell};
use zonelab::enumerate::enumerate_in_ellipsoid;
use zonelab::form::empty_margin;
use zonelab::forms;
use zonelab::rational::{int, neg_int, sub_int, to_rat};
use zonelab::voronoi::{voronoi_analysis, voronoi_polytope};
use zonelab::{GramForm, IntVector, RatVector};

fn corpus() -> Vec<(&'static str, GramForm)> {
    forms::corpus()
}

/// Smallest face of `cell` holding both points: the intersection of every
/// cell facet containing them.
fn smallest_face(cell: &DelaunayCell, a: &[i64], b: &[i64]) -> Vec<IntVector> {
    let mut face: BTreeSet<IntVector> = cell.vertices.iter().cloned().collect();
    for f in cell.facets() {
        if f.vertices.iter().any(|v| v == a) && f.vertices.iter().any(|v| v == b) {
            let s: BTreeSet<IntVector> = f.vertices.iter().cloned().collect();
            face = face.intersection(&s).cloned().collect();
        }
    }
    face.into_iter().collect()
}

#[test]
fn star_agrees_with_lifting_on_corpus() {
    for (name, q) in corpus() {
        let a = fingerprint(&delaunay_star(&q).unwrap());
        let b = fingerprint(&common::lifted_star(&q));
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn star_agrees_with_lifting_on_random_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 3] {
        for _ in 0..10 {
            let q = common::random_form(&mut rng, n);
            let star = delaunay_star(&q).unwrap();
            assert_eq!(fingerprint(&star), fingerprint(&common::lifted_star(&q)));
        }
    }
}

#[test]
fn non_simple_coset_vectors_are_diagonals_of_symmetric_faces() {
    let mut checked = 0;
    for (name, q) in corpus() {
        let star = delaunay_star(&q).unwrap();
        for coset in coset_minima(&q).iter().filter(|c| !c.simple) {
            for m in &coset.min_vectors {
                let origin = vec![0; m.len()];
                let cell = star
                    .cells
                    .iter()
                    .find(|c| c.contains_vertex(m))
                    .unwrap_or_else(|| panic!("{name}: {m:?} is not in a star cell"));
                let face = smallest_face(cell, &origin, m);
                for v in &face {
                    assert!(face.contains(&sub_int(m, v)), "{name}: face not symmetric about {m:?}/2");
                }
                checked += 1;
            }
        }
    }
    // Z², Z³, Z⁴, FCC and D4 all have non-simple cosets
    assert!(checked > 0);
}

#[test]
fn star_facets_are_shared_by_two_cells() {
    for (name, q) in corpus() {
        let star = delaunay_star(&q).unwrap();
        let adj = star.adjacencies().unwrap();
        for a in &adj {
            assert!(adj.iter().any(|b| b.cell == a.neighbor && b.neighbor == a.cell), "{name}");
        }
    }
}

#[test]
fn star_cells_are_empty() {
    for (name, q) in corpus() {
        let star = delaunay_star(&q).unwrap();
        for cell in &star.cells {
            let base = vec![0; q.dim()];
            let basis = cell.sphere_basis(&base).unwrap();
            for u in enumerate_in_ellipsoid(&q, &cell.center, &cell.radius_sq) {
                let m = empty_margin(&q, basis.vectors(), &u).unwrap();
                assert!(m >= int(0), "{name}: {u:?} inside {:?}", cell.vertices);
            }
        }
    }
}

#[test]
fn voronoi_vertices_are_cell_centers() {
    for (name, q) in corpus() {
        let star = delaunay_star(&q).unwrap();
        let (_, poset, _) = voronoi_analysis(&q).unwrap();
        assert_eq!(poset.vertices.len(), star.cells.len(), "{name}");
        let centers: BTreeSet<RatVector> = star.cells.iter().map(|c| c.center.clone()).collect();
        let vertices: BTreeSet<RatVector> = poset.vertices.iter().cloned().collect();
        assert_eq!(centers, vertices, "{name}");
    }
}

#[test]
fn voronoi_polytope_is_centrally_symmetric() {
    for (name, q) in corpus() {
        let p = voronoi_polytope(&q).unwrap();
        let (_, poset, _) = voronoi_analysis(&q).unwrap();
        let vertices: BTreeSet<RatVector> = poset.vertices.iter().cloned().collect();
        for v in &poset.vertices {
            let neg: RatVector = v.iter().map(|x| -x).collect();
            assert!(vertices.contains(&neg), "{name}");
        }
        for f in poset.face_ids_of_dim(q.dim() - 1) {
            let face = &poset.faces[f];
            let normal = &p.inequalities[face.active_inequalities[0]].normal;
            let own: BTreeSet<RatVector> = face.vertex_set.iter().map(|&i| poset.vertices[i].clone()).collect();
            // reflection through the facet center v/2
            for x in &own {
                let image: RatVector = to_rat(normal).iter().zip(x).map(|(a, b)| a - b).collect();
                assert!(own.contains(&image), "{name}: facet {normal:?}");
            }
        }
        let neg: Vec<IntVector> = p.inequalities.iter().map(|h| neg_int(&h.normal)).collect();
        assert!(neg.iter().all(|v| p.inequalities.iter().any(|h| &h.normal == v)));
    }
}

#[test]
fn voronoi_edges_are_orthogonal_to_dual_facets() {
    for (name, q) in corpus() {
        let (_, poset, _) = voronoi_analysis(&q).unwrap();
        for e in poset.edge_ids() {
            let ends = &poset.faces[e].vertex_set;
            let (w1, w2) = (&poset.vertices[ends[0]], &poset.vertices[ends[1]]);
            let c1 = star_cell_at(&q, w1).unwrap();
            let c2 = star_cell_at(&q, w2).unwrap();
            let common: Vec<&IntVector> = c1.vertices.iter().filter(|v| c2.contains_vertex(v)).collect();
            assert!(common.len() >= q.dim(), "{name}: dual facet too small");
            let d: RatVector = w2.iter().zip(w1).map(|(a, b)| a - b).collect();
            for p in &common {
                for p2 in &common {
                    let diff = to_rat(&sub_int(p, p2));
                    assert_eq!(q.inner(&d, &diff).unwrap(), int(0), "{name}");
                }
            }
        }
    }
}

#[test]
fn zones_partition_the_edges() {
    for (name, q) in corpus() {
        let (_, poset, zones) = voronoi_analysis(&q).unwrap();
        let mut seen: Vec<usize> = zones.iter().flat_map(|z| z.edge_ids.iter().copied()).collect();
        seen.sort();
        assert_eq!(seen, poset.edge_ids(), "{name}");
    }
}
