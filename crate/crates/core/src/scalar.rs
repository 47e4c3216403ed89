//! Scalar abstractions shared by the exact and floating-point layers.
//!
//! Algebra in this crate is written against [`Scalar`] (a commutative ring
//! with negation, e.g. `i64`, `BigInt`, `BigRational`, `f64`, complex
//! numbers) and, where ordering or conversion to exact rationals matters,
//! against [`ExactScalar`].

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Coefficient ring used by the generic containers.
pub trait Scalar: Num + Clone + Neg<Output = Self> + FromPrimitive + Debug {
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer not representable in scalar type")
    }
}

impl<T> Scalar for T where T: Num + Clone + Neg<Output = T> + FromPrimitive + Debug {}

/// Ordered scalars that embed exactly into the rationals.
pub trait ExactScalar: Scalar + Ord + Signed + Send + Sync {
    fn to_rational(&self) -> BigRational;
}

impl ExactScalar for i64 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}

impl ExactScalar for BigInt {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl ExactScalar for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction. Returns `None` for the zero vector.
pub fn primitive_direction(v: &[BigRational]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = scaled
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(scaled.into_iter().map(|x| x / &g).collect())
}

/// Same as [`primitive_direction`] for small integer triples.
pub fn primitive_triple<T: ExactScalar>(v: &[T; 3]) -> Option<[i64; 3]> {
    let r: Vec<BigRational> = v.iter().map(ExactScalar::to_rational).collect();
    let p = primitive_direction(&r)?;
    Some([
        p[0].to_i64().expect("normal component overflows i64"),
        p[1].to_i64().expect("normal component overflows i64"),
        p[2].to_i64().expect("normal component overflows i64"),
    ])
}

/// Formats a rational as `num/den`, or `num` when the denominator is 1.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num`, `-num` or `num/den`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Serde adapter writing rationals as strings.
pub mod rational_string {
    use super::{format_rational, parse_rational};
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = [rational(1, 2), rational(-3, 4), int(0)];
        let p = primitive_direction(&v).unwrap();
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
        assert!(primitive_direction(&[int(0), int(0)]).is_none());
        assert_eq!(primitive_triple(&[4i64, -6, 2]), Some([2, -3, 1]));
    }

    #[test]
    fn rational_text_round_trip() {
        for r in [rational(3, 7), int(-12), rational(-5, 2), int(0)] {
            assert_eq!(parse_rational(&format_rational(&r)), Some(r));
        }
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }
}
