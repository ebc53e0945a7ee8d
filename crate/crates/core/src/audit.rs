//! Cross-checks, direction by direction, four views of a primitive
//! functional `k`: a closed zone of the Voronoi polytope with functional `k`,
//! a lamina `k·x = 0` of the Delaunay star, invariance of the subdivision
//! under extension along `k`, and the rank-1 form `kkᵀ` being an extreme
//! ray of the secondary cone.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cone::{extreme_rays, is_dicing, ray_membership, cone_of_ltype, ExtremeRay};
use crate::delaunay::{delaunay_star, fingerprint, form_fingerprint, DelaunayStar};
use crate::error::Result;
use crate::form::GramForm;
use crate::lamina::{
    breaking_lambda, certificate_holds, contraction_limit, extend_form, is_lamina,
    lamina_candidates, lamina_certificate, rank1_form, sampled_invariance,
};
use crate::rational::{format_rational, int, rat, IntVector, Rational};
use crate::voronoi::{voronoi_analysis, zone_functional};

fn rational_text<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DirectionReport {
    pub k: IntVector,
    pub lamina: bool,
    /// `None` when no zone has functional `k`.
    pub closed_zone: Option<bool>,
    pub sampled_invariant: bool,
    /// Laminae only.
    pub certificate_valid: Option<bool>,
    /// Laminae only.
    #[serde(serialize_with = "rational_text")]
    pub contraction_limit: Option<Rational>,
    /// Non-laminae only.
    #[serde(serialize_with = "rational_text")]
    pub breaking_lambda: Option<Rational>,
    pub extension_invariant: bool,
    pub extreme_ray: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditCounts {
    pub closed_zones: usize,
    pub laminae: usize,
    pub rank1_rays: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditReport {
    pub name: Option<String>,
    pub dim: usize,
    pub fingerprint: String,
    pub dicing: bool,
    pub counts: AuditCounts,
    pub directions: Vec<DirectionReport>,
    pub pass: bool,
}

/// Extension coefficients tried for invariance when none are given.
pub fn default_samples() -> Vec<Rational> {
    vec![rat(1, 4), int(1), int(4)]
}

struct Context<'a> {
    q: &'a GramForm,
    star: &'a DelaunayStar,
    reference: String,
    zones: &'a BTreeMap<IntVector, bool>,
    rays: &'a [ExtremeRay],
    samples: &'a [Rational],
}

fn report_direction(cx: &Context, k: &IntVector) -> Result<DirectionReport> {
    let lamina = is_lamina(cx.star, k)?;
    let closed_zone = cx.zones.get(k).copied();
    let sampled_invariant = sampled_invariance(cx.q, k, cx.samples)?;
    let (certificate_valid, contraction, breaking, extension_invariant) = if lamina {
        let valid = certificate_holds(&lamina_certificate(cx.q, cx.star, k)?);
        let low = contraction_limit(cx.q, cx.star, k)?;
        (Some(valid), Some(low), None, sampled_invariant && valid)
    } else {
        let l = breaking_lambda(cx.q, cx.star, k)?;
        let probe = if l == int(0) { rat(1, 64) } else { &l * rat(17, 16) };
        let same = form_fingerprint(&extend_form(cx.q, k, &probe)?)?.0 == cx.reference;
        (None, None, Some(l), sampled_invariant && same)
    };
    let extreme_ray = ray_membership(cx.rays, &rank1_form(cx.q, k)?);
    let closed = closed_zone.unwrap_or(false);
    let consistent = lamina == closed && closed == extension_invariant && extension_invariant == extreme_ray;
    Ok(DirectionReport {
        k: k.clone(),
        lamina,
        closed_zone,
        sampled_invariant,
        certificate_valid,
        contraction_limit: contraction,
        breaking_lambda: breaking,
        extension_invariant,
        extreme_ray,
        consistent,
    })
}

/// Audit of one form over every candidate direction: zone functionals,
/// star hyperplane normals and the `k` of rank-1 extreme rays.
pub fn audit_form(q: &GramForm, name: Option<&str>, samples: &[Rational]) -> Result<AuditReport> {
    let star = delaunay_star(q)?;
    let (_, _, zone_list) = voronoi_analysis(q)?;
    let mut zones = BTreeMap::new();
    for z in &zone_list {
        zones.insert(zone_functional(q, z)?, z.closed.unwrap_or(false));
    }
    let cone = cone_of_ltype(q, &star)?;
    let rays = extreme_rays(&cone)?;

    let mut candidates: BTreeSet<IntVector> = lamina_candidates(&star).into_iter().collect();
    candidates.extend(zones.keys().cloned());
    candidates.extend(rays.iter().filter_map(|r| r.k.clone()));

    let cx = Context {
        q,
        star: &star,
        reference: fingerprint(&star).0,
        zones: &zones,
        rays: &rays,
        samples,
    };
    let candidates: Vec<IntVector> = candidates.into_iter().collect();
    let directions = candidates
        .par_iter()
        .map(|k| report_direction(&cx, k))
        .collect::<Result<Vec<_>>>()?;

    let counts = AuditCounts {
        closed_zones: zones.values().filter(|&&c| c).count(),
        laminae: directions.iter().filter(|d| d.lamina).count(),
        rank1_rays: rays.iter().filter(|r| r.rank == 1).count(),
    };
    let pass = directions.iter().all(|d| d.consistent)
        && counts.closed_zones == counts.laminae
        && counts.laminae == counts.rank1_rays;
    Ok(AuditReport {
        name: name.map(str::to_owned),
        dim: q.dim(),
        fingerprint: cx.reference,
        dicing: is_dicing(&rays),
        counts,
        directions,
        pass,
    })
}

/// Audits every form of dimension at most `dim_limit`, in input order.
pub fn audit_corpus(
    forms: &[(String, GramForm)],
    dim_limit: usize,
    samples: &[Rational],
) -> Result<Vec<AuditReport>> {
    forms
        .iter()
        .filter(|(_, q)| q.dim() <= dim_limit)
        .map(|(name, q)| audit_form(q, Some(name), samples))
        .collect()
}
