//! Exact lattice-point enumeration in an ellipsoid `Q(z − c) ≤ r²`.
//!
//! Fincke–Pohst style: the form is split as `Σ dₖ (xₖ + Σⱼ₍ⱼ>ₖ₎ Lⱼₖ xⱼ)²`
//! with an exact rational LDLᵀ factorisation, and coordinates are fixed from
//! the last one down. Integer bounds come from exact integer square roots.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::form::GramForm;
use crate::rational::{IntVector, RatMatrix, Rational};

/// Exact `Q = L·diag(d)·Lᵀ` with unit lower-triangular `L`.
pub(crate) fn ldl(q: &GramForm) -> (RatMatrix, Vec<Rational>) {
    let n = q.dim();
    let mut l = vec![vec![Rational::zero(); n]; n];
    let mut d = vec![Rational::zero(); n];
    for i in 0..n {
        let mut di = q.entry(i, i).clone();
        for k in 0..i {
            di -= &l[i][k] * &l[i][k] * &d[k];
        }
        d[i] = di;
        l[i][i] = Rational::from_integer(1.into());
        for j in i + 1..n {
            let mut s = q.entry(j, i).clone();
            for k in 0..i {
                s -= &l[j][k] * &l[i][k] * &d[k];
            }
            l[j][i] = s / &d[i];
        }
    }
    (l, d)
}

/// `⌊√t⌋` for a nonnegative rational `t`.
fn floor_sqrt(t: &Rational) -> BigInt {
    let (a, b) = (t.numer(), t.denom());
    (a * b).sqrt() / b
}

fn to_i64(b: &BigInt) -> i64 {
    b.to_i64().expect("enumeration bound exceeds i64")
}

/// All lattice points `z` with `Q(z − c) ≤ r²`, sorted lexicographically.
pub fn enumerate_in_ellipsoid(q: &GramForm, center: &[Rational], radius_sq: &Rational) -> Vec<IntVector> {
    let n = q.dim();
    assert_eq!(center.len(), n, "center dimension");
    let mut out = Vec::new();
    if radius_sq.is_negative() {
        return out;
    }
    let (l, d) = ldl(q);
    let mut z = vec![0i64; n];
    descend(n, &l, &d, center, radius_sq.clone(), &mut z, &mut out);
    out.sort();
    out
}

fn descend(
    level: usize,
    l: &RatMatrix,
    d: &[Rational],
    center: &[Rational],
    remaining: Rational,
    z: &mut IntVector,
    out: &mut Vec<IntVector>,
) {
    if level == 0 {
        out.push(z.clone());
        return;
    }
    let k = level - 1;
    let n = z.len();
    // term k is d_k (z_k − m)² with m = c_k − Σ_{j>k} L_jk (z_j − c_j)
    let mut m = center[k].clone();
    for j in k + 1..n {
        m -= &l[j][k] * (Rational::from_integer(z[j].into()) - &center[j]);
    }
    let bound = floor_sqrt(&(&remaining / &d[k]));
    let lo = to_i64(&(m.floor().to_integer() - &bound - 1));
    let hi = to_i64(&(m.ceil().to_integer() + &bound + 1));
    for zk in lo..=hi {
        let x = Rational::from_integer(zk.into()) - &m;
        let term = &d[k] * &x * &x;
        if term <= remaining {
            z[k] = zk;
            descend(k, l, d, center, &remaining - term, z, out);
        }
    }
    z[k] = 0;
}
