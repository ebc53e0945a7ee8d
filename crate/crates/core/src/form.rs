//! Positive definite rational quadratic forms and the empty-sphere margin.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, determinant};
use crate::rational::{int, to_rat, IntVector, RatMatrix, RatVector, Rational};

/// Gram matrix of a lattice basis: symmetric, positive definite, rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    entries: RatMatrix,
    // entries == numer / denom, kept for fast evaluation on lattice points
    numer: Vec<Vec<BigInt>>,
    denom: BigInt,
}

fn check_symmetric(m: &RatMatrix) -> Result<()> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare);
    }
    let symmetric = (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]));
    if !symmetric {
        return Err(Error::NotSymmetric);
    }
    Ok(())
}

/// True iff every leading principal minor is positive.
pub fn is_positive_definite(m: &RatMatrix) -> Result<bool> {
    check_symmetric(m)?;
    for k in 1..=m.len() {
        let minor: RatMatrix = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        if !determinant(&minor)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

impl GramForm {
    pub fn new(entries: RatMatrix) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Precondition("form dimension must be at least 1".into()));
        }
        if !is_positive_definite(&entries)? {
            return Err(Error::NotPositiveDefinite);
        }
        let denom = entries
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let numer = entries
            .iter()
            .map(|row| row.iter().map(|x| x.numer() * (&denom / x.denom())).collect())
            .collect();
        Ok(GramForm { entries, numer, denom })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(rows.iter().map(|r| to_rat(r.as_ref())).collect())
    }

    pub fn identity(n: usize) -> Self {
        let rows: Vec<IntVector> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::from_ints(&rows).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }

    /// `zᵀ Q z`.
    pub fn eval(&self, z: &[Rational]) -> Result<Rational> {
        self.inner(z, z)
    }

    /// `uᵀ Q v`.
    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Result<Rational> {
        self.check_dim(u.len())?;
        self.check_dim(v.len())?;
        Ok(linalg::dot(u, &self.apply(v)))
    }

    /// Norm of a lattice point. Dimensions are trusted.
    pub fn norm(&self, z: &[i64]) -> Rational {
        self.inner_int(z, z)
    }

    pub fn inner_int(&self, u: &[i64], v: &[i64]) -> Rational {
        debug_assert_eq!(u.len(), self.dim());
        debug_assert_eq!(v.len(), self.dim());
        let mut acc = BigInt::zero();
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            let mut row = BigInt::zero();
            for (j, &vj) in v.iter().enumerate() {
                if vj != 0 {
                    row += &self.numer[i][j] * vj;
                }
            }
            acc += row * ui;
        }
        Rational::new(acc, self.denom.clone())
    }

    /// `Q v`.
    pub fn apply(&self, v: &[Rational]) -> RatVector {
        linalg::mat_vec(&self.entries, v)
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        Self::new(
            self.entries
                .iter()
                .map(|row| row.iter().map(|x| x * factor).collect())
                .collect(),
        )
    }

    /// `Q + t·M`, validated positive definite.
    pub fn plus(&self, m: &RatMatrix, t: &Rational) -> Result<Self> {
        self.check_dim(m.len())?;
        Self::new(
            self.entries
                .iter()
                .zip(m)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + t * y).collect())
                .collect(),
        )
    }

    pub fn inverse(&self) -> RatMatrix {
        linalg::inverse(&self.entries).expect("positive definite forms are invertible")
    }
}

/// Exact linear system for repeated margins against one sphere basis.
///
/// The basis vectors `v₁..vₙ` end on a sphere through the origin; any vector
/// `u` decomposes as `u = Σ zᵢvᵢ`.
#[derive(Clone, Debug)]
pub struct SphereBasis {
    vectors: Vec<IntVector>,
    // inverse of the matrix whose columns are the basis vectors
    inverse: RatMatrix,
}

impl SphereBasis {
    pub fn new(vectors: &[IntVector]) -> Result<Self> {
        let n = vectors.len();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        let columns: RatMatrix = linalg::transpose(&vectors.iter().map(|v| to_rat(v)).collect());
        let inverse = linalg::inverse(&columns)?;
        Ok(SphereBasis { vectors: vectors.to_vec(), inverse })
    }

    pub fn vectors(&self) -> &[IntVector] {
        &self.vectors
    }

    /// Coefficients `z` with `u = Σ zᵢvᵢ`.
    pub fn coefficients(&self, u: &[i64]) -> RatVector {
        linalg::mat_vec(&self.inverse, &to_rat(u))
    }

    /// `F(u) − Σ zᵢF(vᵢ)` for any quadratic function `F`; with `F` the form
    /// itself this is the empty-sphere margin.
    pub fn margin_with<F: Fn(&[i64]) -> Rational>(&self, u: &[i64], f: F) -> Rational {
        let z = self.coefficients(u);
        let mut m = f(u);
        for (zi, v) in z.iter().zip(&self.vectors) {
            if !zi.is_zero() {
                m -= zi * f(v);
            }
        }
        m
    }

    pub fn margin(&self, q: &GramForm, u: &[i64]) -> Rational {
        self.margin_with(u, |x| q.norm(x))
    }

    /// The margin as a linear functional on forms: the symmetric matrix
    /// `C = uuᵀ − Σ zᵢvᵢvᵢᵀ`, so that the margin under `Q̃` is `Σ Cᵢⱼ Q̃ᵢⱼ`.
    pub fn margin_functional(&self, u: &[i64]) -> RatMatrix {
        let n = u.len();
        let z = self.coefficients(u);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut c = int(u[i] * u[j]);
                        for (zi, v) in z.iter().zip(&self.vectors) {
                            c -= zi * int(v[i] * v[j]);
                        }
                        c
                    })
                    .collect()
            })
            .collect()
    }
}

/// Center `c` and squared radius of the sphere through the origin and the
/// endpoints of `vectors`: solves `2 vᵢᵀQc = Q(vᵢ)`.
pub fn circumcenter(q: &GramForm, vectors: &[IntVector]) -> Result<(RatVector, Rational)> {
    let n = q.dim();
    if vectors.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: vectors.len() });
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    let two = int(2);
    let a: RatMatrix = vectors
        .iter()
        .map(|v| q.apply(&to_rat(v)).into_iter().map(|x| x * &two).collect())
        .collect();
    let b: RatVector = vectors.iter().map(|v| q.norm(v)).collect();
    let c = linalg::solve(&a, &b)?;
    let r2 = q.eval(&c)?;
    Ok((c, r2))
}

/// `Q(u) − Σ zᵢQ(vᵢ)` where `u = Σ zᵢvᵢ`: positive outside the sphere through
/// `0, v₁..vₙ`, zero on it, negative strictly inside.
pub fn empty_margin(q: &GramForm, vectors: &[IntVector], u: &[i64]) -> Result<Rational> {
    let n = q.dim();
    if vectors.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: vectors.len() });
    }
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.len() });
    }
    Ok(SphereBasis::new(vectors)?.margin(q, u))
}
