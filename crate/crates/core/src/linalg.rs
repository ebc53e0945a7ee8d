//! Exact linear algebra over the rationals.
//!
//! Square systems and determinants go through fraction-free (Bareiss)
//! elimination on integer-scaled rows; rank and null spaces use a plain
//! rational row echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{IntVector, RatMatrix, RatVector, Rational};

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &RatMatrix, v: &[Rational]) -> RatVector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose(m: &RatMatrix) -> RatMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Scale a row of rationals to integers by the lcm of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Bareiss elimination in place on the first `cols` columns. Returns the
/// number of row swaps, or `None` when a zero pivot column is met.
fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> Option<usize> {
    let n = m.len();
    let mut swaps = 0;
    let mut prev = BigInt::one();
    for k in 0..n.min(cols) {
        let p = (k..n).find(|&r| !m[r][k].is_zero())?;
        if p != k {
            m.swap(p, k);
            swaps += 1;
        }
        for i in k + 1..n {
            for j in k + 1..m[i].len() {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Some(swaps)
}

/// Solve the square system `a x = b` exactly.
pub fn solve(a: &RatMatrix, b: &[Rational]) -> Result<RatVector> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare);
    }
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut aug = row.clone();
            aug.push(rhs.clone());
            integer_row(&aug)
        })
        .collect();
    bareiss(&mut m, n).ok_or(Error::Singular)?;
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

pub fn determinant(a: &RatMatrix) -> Result<Rational> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare);
    }
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    let Some(swaps) = bareiss(&mut m, n) else {
        return Ok(Rational::zero());
    };
    let mut det = Rational::new(m[n - 1][n - 1].clone(), scale);
    if swaps % 2 == 1 {
        det = -det;
    }
    Ok(det)
}

pub fn inverse(a: &RatMatrix) -> Result<RatMatrix> {
    let n = a.len();
    let cols: Vec<RatVector> = (0..n)
        .map(|j| {
            let e: RatVector = (0..n)
                .map(|i| if i == j { Rational::one() } else { Rational::zero() })
                .collect();
            solve(a, &e)
        })
        .collect::<Result<_>>()?;
    Ok(transpose(&cols))
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        m[r].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[i][c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &RatMatrix) -> usize {
    let mut m = rows.clone();
    rref(&mut m).len()
}

/// Basis of `{x : rows · x = 0}` in `cols` unknowns.
pub fn nullspace(rows: &RatMatrix, cols: usize) -> Vec<RatVector> {
    let mut m = rows.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| m[r][k] != 0) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Primitive integer normal of the hyperplane spanned by `n - 1` integer
/// vectors in dimension `n` (generalized cross product). `None` when the
/// vectors are dependent. The sign is not normalized.
pub fn integer_normal(rows: &[IntVector], n: usize) -> Option<IntVector> {
    debug_assert_eq!(rows.len() + 1, n);
    let mut normal = Vec::with_capacity(n);
    for skip in 0..n {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, &x)| x as i128)
                    .collect()
            })
            .collect();
        let d = det_i128(minor);
        normal.push(if skip % 2 == 0 { d } else { -d });
    }
    let g = normal.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g == 0 {
        return None;
    }
    Some(normal.iter().map(|&x| (x / g) as i64).collect())
}

/// Rank of a set of integer vectors.
pub fn int_rank(vectors: &[IntVector]) -> usize {
    let m: RatMatrix = vectors.iter().map(|v| crate::rational::to_rat(v)).collect();
    rank(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn solves_small_system() {
        let a = m(&[&[4, 2], &[2, 4]]);
        let x = solve(&a, &[int(2), int(2)]).unwrap();
        assert_eq!(x, vec![rat(1, 3), rat(1, 3)]);
    }

    #[test]
    fn singular_system_is_reported() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&a, &[int(1), int(1)]), Err(Error::Singular));
        assert_eq!(determinant(&a).unwrap(), int(0));
    }

    #[test]
    fn determinant_with_fractions_and_swaps() {
        let a = vec![
            vec![int(0), rat(1, 2)],
            vec![rat(2, 3), int(5)],
        ];
        assert_eq!(determinant(&a).unwrap(), rat(-1, 3));
        let d4 = m(&[&[2, 0, -1, 0], &[0, 2, -1, 0], &[-1, -1, 2, -1], &[0, 0, -1, 2]]);
        assert_eq!(determinant(&d4).unwrap(), int(4));
    }

    #[test]
    fn inverse_round_trips() {
        let a = m(&[&[2, 1], &[1, 2]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![rat(2, 3), rat(-1, 3)], vec![rat(-1, 3), rat(2, 3)]]);
    }

    #[test]
    fn nullspace_and_rank() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&a, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn cross_products() {
        assert_eq!(integer_normal(&[vec![1, 0, 0], vec![0, 1, 0]], 3), Some(vec![0, 0, 1]));
        assert_eq!(integer_normal(&[vec![2, 2]], 2).map(|v| v.iter().map(|x| x.abs()).collect::<Vec<_>>()), Some(vec![1, 1]));
        assert_eq!(integer_normal(&[vec![1, 2, 3], vec![2, 4, 6]], 3), None);
        assert_eq!(integer_normal(&[], 1), Some(vec![1]));
    }
}
