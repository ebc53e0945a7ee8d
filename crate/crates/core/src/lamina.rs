//! Laminae, rank-1 forms and extensions along a lattice hyperplane.
//!
//! A direction is given by a primitive integer functional `k`; the hyperplane
//! `k·x = 0` is a lamina when every star cell sits between two neighbouring
//! level sets `k·x = c` and `k·x = c + 1`. Extending the lattice along the unit
//! normal `e = α·Q⁻¹k` adds `λ·α²(k·x)²` to the form.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::delaunay::{form_fingerprint, DelaunayStar};
use crate::enumerate::enumerate_in_ellipsoid;
use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::linalg::{dot, integer_normal, mat_vec};
use crate::rational::{
    dot_int, int, is_primitive, normalize_sign, rat, sub_int, to_rat, IntVector, RatMatrix,
    RatVector, Rational,
};

fn check_direction(k: &[i64], n: usize) -> Result<()> {
    if k.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: k.len() });
    }
    if k.iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    if !is_primitive(k) {
        return Err(Error::NotPrimitive(k.to_vec()));
    }
    Ok(())
}

/// Normals of every hyperplane through the origin spanned by `n − 1` further
/// vertices of one star cell. This contains every facet hyperplane through
/// the origin, hence every lamina. Sign-normalized, sorted, deduplicated.
pub fn lamina_candidates(star: &DelaunayStar) -> Vec<IntVector> {
    let n = star.dim();
    let mut out: BTreeSet<IntVector> = BTreeSet::new();
    for cell in &star.cells {
        let others: Vec<&IntVector> = cell.vertices.iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
        for subset in others.into_iter().combinations(n - 1) {
            let rows: Vec<IntVector> = subset.into_iter().cloned().collect();
            if let Some(mut k) = integer_normal(&rows, n) {
                normalize_sign(&mut k);
                out.insert(k);
            }
        }
    }
    out.into_iter().collect()
}

/// Every star cell takes at most two consecutive values under `k`.
pub fn is_lamina(star: &DelaunayStar, k: &[i64]) -> Result<bool> {
    check_direction(k, star.dim())?;
    Ok(star.cells.iter().all(|cell| {
        let (lo, hi) = cell
            .vertices
            .iter()
            .map(|v| dot_int(k, v))
            .minmax()
            .into_option()
            .expect("cells are nonempty");
        hi - lo <= 1
    }))
}

/// The laminae of `Q` among the candidates of its star.
pub fn lamina_set(star: &DelaunayStar) -> Vec<IntVector> {
    lamina_candidates(star)
        .into_iter()
        .filter(|k| is_lamina(star, k).unwrap_or(false))
        .collect()
}

/// `Q⁻¹k`; the unit normal of the hyperplane `k·x = 0` is `α·Q⁻¹k`.
pub fn normal_direction(q: &GramForm, k: &[i64]) -> RatVector {
    mat_vec(&q.inverse(), &to_rat(k))
}

/// `α² = 1/(kᵀQ⁻¹k)`, so that `e = α·Q⁻¹k` has `Q(e) = 1` and
/// `eᵀQv = α·(k·v)`.
pub fn alpha_squared(q: &GramForm, k: &[i64]) -> Result<Rational> {
    if k.len() != q.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), found: k.len() });
    }
    if k.iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    Ok(dot(&to_rat(k), &normal_direction(q, k)).recip())
}

/// The rank-1 form `α²(k·x)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Form {
    pub k: IntVector,
    pub alpha_sq: Rational,
    pub matrix: RatMatrix,
}

impl Rank1Form {
    pub fn eval(&self, x: &[i64]) -> Rational {
        let kx = int(dot_int(&self.k, x));
        &self.alpha_sq * &kx * &kx
    }
}

pub fn rank1_form(q: &GramForm, k: &[i64]) -> Result<Rank1Form> {
    check_direction(k, q.dim())?;
    let alpha_sq = alpha_squared(q, k)?;
    let matrix = k
        .iter()
        .map(|&a| k.iter().map(|&b| &alpha_sq * int(a * b)).collect())
        .collect();
    Ok(Rank1Form { k: k.to_vec(), alpha_sq, matrix })
}

/// Stretch factor `ε > −1` and the induced norm coefficient `λ = ε(2+ε)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionParams {
    pub epsilon: Rational,
    pub lambda: Rational,
}

impl ExtensionParams {
    pub fn from_epsilon(epsilon: Rational) -> Result<Self> {
        if epsilon <= -Rational::one() {
            return Err(Error::Precondition("extension factor must exceed -1".into()));
        }
        let lambda = &epsilon * (int(2) + &epsilon);
        Ok(ExtensionParams { epsilon, lambda })
    }
}

/// `Q + λ·α²kkᵀ`. Positive definite exactly for `λ > −1`.
pub fn extend_form(q: &GramForm, k: &[i64], lambda: &Rational) -> Result<GramForm> {
    let r = rank1_form(q, k)?;
    q.plus(&r.matrix, lambda)
}

/// The margin of one lattice point over one cell's sphere as an affine
/// function of `λ` along the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginLine {
    /// Margin at `λ = 0`.
    pub base: Rational,
    /// Coefficient of `λ`.
    pub slope: Rational,
    pub cell: usize,
    pub witness: IntVector,
    /// `k·(witness − cell base vertex)`.
    pub k_offset: i64,
}

/// Margin lines for all lattice points within twice the radius of each cell
/// (`radius_factor_sq = 4`), measured from the cell's lexicographically least
/// vertex among those minimising `k`.
pub fn margin_lines(
    q: &GramForm,
    star: &DelaunayStar,
    k: &[i64],
    radius_factor_sq: &Rational,
) -> Result<Vec<MarginLine>> {
    let r1 = rank1_form(q, k)?;
    let mut lines = Vec::new();
    for (ci, cell) in star.cells.iter().enumerate() {
        let min_k = cell.vertices.iter().map(|v| dot_int(k, v)).min().expect("nonempty");
        let base = cell
            .vertices
            .iter()
            .find(|v| dot_int(k, v) == min_k)
            .expect("minimum is attained");
        let basis = cell.sphere_basis(base)?;
        let radius_sq = &cell.radius_sq * radius_factor_sq;
        for u in enumerate_in_ellipsoid(q, &cell.center, &radius_sq) {
            let shifted = sub_int(&u, base);
            lines.push(MarginLine {
                base: basis.margin(q, &shifted),
                slope: basis.margin_with(&shifted, |x| r1.eval(x)),
                cell: ci,
                k_offset: dot_int(k, &shifted),
                witness: u,
            });
        }
    }
    Ok(lines)
}

/// Margin lines certifying that the subdivision is unchanged for all
/// `λ ≥ 0` along a lamina: every slope is nonnegative and every point on a
/// sphere keeps slope zero.
pub fn lamina_certificate(q: &GramForm, star: &DelaunayStar, k: &[i64]) -> Result<Vec<MarginLine>> {
    if !is_lamina(star, k)? {
        return Err(Error::Precondition(format!("{k:?} is not a lamina")));
    }
    margin_lines(q, star, k, &int(4))
}

pub fn certificate_holds(lines: &[MarginLine]) -> bool {
    lines
        .iter()
        .all(|l| !l.slope.is_negative() && (!l.base.is_zero() || l.slope.is_zero()))
}

/// Whether the fingerprint of `Q + λ·α²kkᵀ` equals that of `Q` for each `λ`.
pub fn sampled_invariance(q: &GramForm, k: &[i64], lambdas: &[Rational]) -> Result<bool> {
    let reference = form_fingerprint(q)?;
    for lambda in lambdas {
        if form_fingerprint(&extend_form(q, k, lambda)?)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least `λ ≥ 0` at which a margin line reaches zero from above, or zero
/// when a point on some cell sphere already moves off it. `None` if no line
/// decreases within the enumerated set.
fn breaking_from_lines(lines: &[MarginLine]) -> Option<Rational> {
    if lines.iter().any(|l| l.base.is_zero() && !l.slope.is_zero()) {
        return Some(Rational::zero());
    }
    lines
        .iter()
        .filter(|l| l.slope.is_negative())
        .map(|l| &l.base / -&l.slope)
        .min()
}

/// Largest enumeration factor tried before giving up on finding a
/// decreasing margin line.
const MAX_RADIUS_FACTOR_SQ: i64 = 1 << 12;

/// Breaking value for a non-lamina direction: the first `λ > 0` where the
/// subdivision of `Q + λ·α²kkᵀ` changes, or `0` when it changes for every
/// `λ > 0`. The enumeration radius is doubled until a decreasing margin line
/// exists; one always does for a non-lamina.
pub fn breaking_lambda(q: &GramForm, star: &DelaunayStar, k: &[i64]) -> Result<Rational> {
    if is_lamina(star, k)? {
        return Err(Error::Precondition(format!("{k:?} is a lamina")));
    }
    let mut factor = int(4);
    while factor <= int(MAX_RADIUS_FACTOR_SQ) {
        if let Some(l) = breaking_from_lines(&margin_lines(q, star, k, &factor)?) {
            return Ok(l);
        }
        factor *= int(4);
    }
    Err(Error::Invariant(format!("no decreasing margin found for {k:?}")))
}

/// Fingerprint checks around a breaking value: unchanged at `λ·15/16`,
/// changed at `λ` and `λ·17/16`; for `λ = 0`, changed at `1/64`.
pub fn validate_breaking(q: &GramForm, k: &[i64], lambda: &Rational) -> Result<bool> {
    let reference = form_fingerprint(q)?;
    let fp = |l: &Rational| -> Result<_> { form_fingerprint(&extend_form(q, k, l)?) };
    if lambda.is_zero() {
        return Ok(fp(&rat(1, 64))? != reference);
    }
    Ok(fp(&(lambda * rat(15, 16)))? == reference
        && fp(lambda)? != reference
        && fp(&(lambda * rat(17, 16)))? != reference)
}

/// Lower end `λ_low ∈ [−1, 0)` of the shrinking range along a lamina: the
/// largest `−Δ/slope` over increasing margin lines, clamped at the
/// positive-definiteness limit `−1`.
pub fn contraction_limit(q: &GramForm, star: &DelaunayStar, k: &[i64]) -> Result<Rational> {
    let lines = lamina_certificate(q, star, k)?;
    let limit = lines
        .iter()
        .filter(|l| l.slope.is_positive())
        .map(|l| -&l.base / &l.slope)
        .max();
    let floor = -Rational::one();
    Ok(match limit {
        Some(l) if l > floor => l,
        _ => floor,
    })
}

/// Fingerprint checks for a contraction limit: unchanged at `λ_low/2`, and
/// when `λ_low > −1`, changed at `λ_low` and just below it.
pub fn validate_contraction(q: &GramForm, k: &[i64], lambda_low: &Rational) -> Result<bool> {
    let reference = form_fingerprint(q)?;
    let fp = |l: &Rational| -> Result<_> { form_fingerprint(&extend_form(q, k, l)?) };
    if fp(&(lambda_low * rat(1, 2)))? != reference {
        return Ok(false);
    }
    let floor = -Rational::one();
    if *lambda_low > floor {
        let below = lambda_low - (lambda_low - &floor) * rat(1, 16);
        return Ok(fp(lambda_low)? != reference && fp(&below)? != reference);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::delaunay_star;
    use crate::forms;

    #[test]
    fn candidates_of_square_lattice() {
        let star = delaunay_star(&forms::cubic(2)).unwrap();
        assert_eq!(
            lamina_candidates(&star),
            vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn candidates_of_hexagonal_lattice() {
        let star = delaunay_star(&forms::a2()).unwrap();
        // the three edge lines through the origin
        assert_eq!(lamina_candidates(&star), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn candidates_of_cubic_lattice() {
        let c = lamina_candidates(&delaunay_star(&forms::cubic(3)).unwrap());
        for k in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, -1, 0]] {
            assert!(c.contains(&k.to_vec()), "{k:?}");
        }
    }

    #[test]
    fn lamina_examples() {
        let z2 = delaunay_star(&forms::cubic(2)).unwrap();
        assert!(is_lamina(&z2, &[1, 0]).unwrap());
        assert!(!is_lamina(&z2, &[1, 1]).unwrap());
        let a2 = delaunay_star(&forms::a2()).unwrap();
        assert!(is_lamina(&a2, &[1, 1]).unwrap());
        assert!(!is_lamina(&a2, &[1, -1]).unwrap());
        assert_eq!(is_lamina(&a2, &[2, 2]), Err(Error::NotPrimitive(vec![2, 2])));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_squared(&forms::cubic(2), &[1, 0]).unwrap(), int(1));
        assert_eq!(alpha_squared(&forms::a2(), &[1, 1]).unwrap(), rat(3, 2));
        assert_eq!(alpha_squared(&forms::a2(), &[1, -1]).unwrap(), rat(1, 2));
        assert_eq!(alpha_squared(&forms::a2(), &[0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn unit_normal_properties() {
        let q = forms::bcc();
        for k in [[1, 0, 0], [1, -1, 0], [1, 2, -3]] {
            let a2 = alpha_squared(&q, &k).unwrap();
            let d = normal_direction(&q, &k);
            // Q(e) = α²·Q(d) = 1 and eᵀQv = α·(k·v)
            assert_eq!(q.eval(&d).unwrap() * &a2, int(1));
            for v in [[1, 0, 0], [2, -1, 5]] {
                assert_eq!(q.inner(&d, &to_rat(&v)).unwrap(), int(dot_int(&k, &v)));
            }
        }
    }

    #[test]
    fn rank1_examples() {
        let r = rank1_form(&forms::cubic(2), &[1, 0]).unwrap();
        assert_eq!(r.matrix, vec![to_rat(&[1, 0]), to_rat(&[0, 0])]);
        let r = rank1_form(&forms::a2(), &[1, 1]).unwrap();
        assert_eq!(r.matrix, vec![vec![rat(3, 2); 2]; 2]);
        let r = rank1_form(&forms::a2(), &[1, -1]).unwrap();
        assert_eq!(r.matrix, vec![vec![rat(1, 2), rat(-1, 2)], vec![rat(-1, 2), rat(1, 2)]]);
    }

    #[test]
    fn extension_examples() {
        let e = extend_form(&forms::cubic(2), &[1, 0], &int(3)).unwrap();
        assert_eq!(e, GramForm::from_ints(&[[4, 0], [0, 1]]).unwrap());
        let e = extend_form(&forms::a2(), &[1, -1], &int(2)).unwrap();
        assert_eq!(e, GramForm::from_ints(&[[3, 0], [0, 3]]).unwrap());
        assert_eq!(extend_form(&forms::bcc(), &[1, 1, 0], &int(0)).unwrap(), forms::bcc());
        assert_eq!(
            extend_form(&forms::a2(), &[1, 1], &int(-1)),
            Err(Error::NotPositiveDefinite)
        );
        let p = ExtensionParams::from_epsilon(rat(1, 2)).unwrap();
        assert_eq!(p.lambda, rat(5, 4));
        assert!(ExtensionParams::from_epsilon(int(-1)).is_err());
    }

    #[test]
    fn certificate_examples() {
        let q = forms::cubic(2);
        let star = delaunay_star(&q).unwrap();
        assert!(certificate_holds(&lamina_certificate(&q, &star, &[1, 0]).unwrap()));
        // (2,0) lies outside twice the circumradius of the square
        let lines = margin_lines(&q, &star, &[1, 0], &int(16)).unwrap();
        assert!(certificate_holds(&lines));
        let square = star
            .cells
            .iter()
            .position(|c| c.vertices == vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]])
            .unwrap();
        let at = |u: &[i64]| lines.iter().find(|l| l.cell == square && l.witness == u).unwrap();
        assert_eq!((at(&[2, 0]).k_offset, at(&[2, 0]).slope.clone()), (2, int(2)));
        assert_eq!((at(&[1, 1]).base.clone(), at(&[1, 1]).slope.clone()), (int(0), int(0)));

        let q = forms::a2();
        let star = delaunay_star(&q).unwrap();
        let lines = lamina_certificate(&q, &star, &[1, 1]).unwrap();
        let tri = star
            .cells
            .iter()
            .position(|c| c.vertices == vec![vec![0, 0], vec![0, 1], vec![1, 0]])
            .unwrap();
        let l = lines.iter().find(|l| l.cell == tri && l.witness == vec![1, 1]).unwrap();
        assert_eq!((l.base.clone(), l.k_offset, l.slope.clone()), (int(2), 2, int(3)));
        assert!(matches!(lamina_certificate(&q, &star, &[1, -1]), Err(Error::Precondition(_))));
    }

    #[test]
    fn sampled_examples() {
        let samples = [rat(1, 4), int(1), int(4)];
        assert!(sampled_invariance(&forms::cubic(2), &[1, 0], &samples).unwrap());
        assert!(sampled_invariance(&forms::a2(), &[1, 1], &samples).unwrap());
        assert!(!sampled_invariance(&forms::a2(), &[1, -1], &samples).unwrap());
    }

    #[test]
    fn breaking_examples() {
        let q = forms::a2();
        let star = delaunay_star(&q).unwrap();
        let l = breaking_lambda(&q, &star, &[1, -1]).unwrap();
        assert_eq!(l, int(2));
        assert!(validate_breaking(&q, &[1, -1], &l).unwrap());

        let q = forms::cubic(2);
        let star = delaunay_star(&q).unwrap();
        assert_eq!(breaking_lambda(&q, &star, &[1, 1]).unwrap(), int(0));
        assert!(validate_breaking(&q, &[1, 1], &int(0)).unwrap());
        assert!(matches!(breaking_lambda(&q, &star, &[1, 0]), Err(Error::Precondition(_))));

        let q = forms::cubic(3);
        let star = delaunay_star(&q).unwrap();
        assert_eq!(breaking_lambda(&q, &star, &[1, 1, 0]).unwrap(), int(0));
        assert!(validate_breaking(&q, &[1, 1, 0], &int(0)).unwrap());
    }

    #[test]
    fn contraction_examples() {
        let q = forms::cubic(2);
        let star = delaunay_star(&q).unwrap();
        let l = contraction_limit(&q, &star, &[1, 0]).unwrap();
        assert_eq!(l, int(-1));
        assert!(validate_contraction(&q, &[1, 0], &l).unwrap());
        let fp0 = form_fingerprint(&q).unwrap();
        for lam in [rat(-1, 2), rat(-7, 8)] {
            assert_eq!(form_fingerprint(&extend_form(&q, &[1, 0], &lam).unwrap()).unwrap(), fp0);
        }

        let q = forms::a2();
        let star = delaunay_star(&q).unwrap();
        let l = contraction_limit(&q, &star, &[1, 1]).unwrap();
        // at λ_low the form becomes the square lattice
        assert_eq!(l, rat(-2, 3));
        assert_eq!(extend_form(&q, &[1, 1], &l).unwrap(), forms::cubic(2));
        assert!(validate_contraction(&q, &[1, 1], &l).unwrap());
        assert!(matches!(contraction_limit(&q, &star, &[1, -1]), Err(Error::Precondition(_))));
    }

    #[test]
    fn bcc_contraction_is_validated() {
        let q = forms::bcc();
        let star = delaunay_star(&q).unwrap();
        let laminae = lamina_set(&star);
        assert_eq!(laminae.len(), 6);
        for k in &laminae {
            let l = contraction_limit(&q, &star, k).unwrap();
            assert!(l > int(-1) && l < int(0));
            assert!(validate_contraction(&q, k, &l).unwrap(), "{k:?} {l}");
        }
    }
}
