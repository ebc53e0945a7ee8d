//! Exact scalars and the small vector vocabulary shared by every module.
//!
//! Scalars are arbitrary-precision rationals, always kept reduced with a
//! positive denominator. Lattice points are plain `i64` coordinate vectors in
//! the fixed basis of the active form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type IntVector = Vec<i64>;
pub type RatVector = Vec<Rational>;
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`, reduced. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Text form `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn to_rat(v: &[i64]) -> RatVector {
    v.iter().map(|&x| int(x)).collect()
}

pub fn dot_int(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub_int(a: &[i64], b: &[i64]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_int(a: &[i64], b: &[i64]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn neg_int(a: &[i64]) -> IntVector {
    a.iter().map(|x| -x).collect()
}

pub fn big_to_i64(b: &BigInt) -> Result<i64> {
    b.to_i64().ok_or(Error::Overflow)
}

/// Flip sign so that the first nonzero coordinate is positive.
pub fn normalize_sign(v: &mut [i64]) {
    if let Some(&first) = v.iter().find(|&&x| x != 0) {
        if first < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn is_primitive(v: &[i64]) -> bool {
    gcd_of(v) == 1
}

/// Integer vector on the same ray as `v` with coprime coordinates, or `None`
/// for the zero vector. The sign of `v` is kept.
pub fn primitive_integer(v: &[Rational]) -> Result<Option<IntVector>> {
    if v.iter().all(Zero::is_zero) {
        return Ok(None);
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let g = scaled.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    scaled
        .iter()
        .map(|x| big_to_i64(&(x / &g)))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Primitive integer direction with the leading coordinate positive.
pub fn canonical_direction(v: &[Rational]) -> Result<Option<IntVector>> {
    Ok(primitive_integer(v)?.map(|mut k| {
        normalize_sign(&mut k);
        k
    }))
}

pub fn primitive_int_vector(v: &[i64]) -> Option<IntVector> {
    let g = gcd_of(v);
    (g != 0).then(|| v.iter().map(|x| x / g).collect())
}

/// Scale a rational vector by a positive factor to coprime integers (as
/// rationals). Used to keep double-description rays small.
pub fn primitive_rational(v: &[Rational]) -> RatVector {
    if v.iter().all(Zero::is_zero) {
        return v.to_vec();
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let g = scaled.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).abs();
    scaled
        .into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

pub fn format_int_vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Parse a comma separated integer list such as `1,-1,0`.
pub fn parse_int_list(text: &str) -> std::result::Result<IntVector, std::num::ParseIntError> {
    text.split(',').map(|s| s.trim().parse::<i64>()).collect()
}
