//! Sparse Laurent polynomials in three variables `x, y, z`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{format_rational, parse_rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),
    #[error("scaling factor must be nonzero")]
    ZeroScale,
    #[error("malformed polynomial document: {0}")]
    Document(String),
}

/// Exponent vector of a monomial `x^a y^b z^c`. Ordered lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Exponent {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent { a: 0, b: 0, c: 0 };

    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Exponent { a, b, c }
    }

    pub fn to_array(self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn get(self, axis: Axis) -> i64 {
        match axis {
            Axis::X => self.a,
            Axis::Y => self.b,
            Axis::Z => self.c,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

impl From<[i64; 3]> for Exponent {
    fn from(v: [i64; 3]) -> Self {
        Exponent::new(v[0], v[1], v[2])
    }
}

impl Add for Exponent {
    type Output = Exponent;

    fn add(self, o: Exponent) -> Exponent {
        Exponent::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl Neg for Exponent {
    type Output = Exponent;

    fn neg(self) -> Exponent {
        Exponent::new(-self.a, -self.b, -self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// Integer 3x3 matrix with determinant ±1, acting on exponent vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix([[i64; 3]; 3]);

impl UnimodularMatrix {
    pub const IDENTITY: UnimodularMatrix = UnimodularMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);

    pub fn new(rows: [[i64; 3]; 3]) -> Result<Self, LaurentError> {
        let det = det3(&rows);
        if det.abs() != 1 {
            return Err(LaurentError::NotUnimodular(det));
        }
        Ok(UnimodularMatrix(rows))
    }

    pub fn rows(&self) -> &[[i64; 3]; 3] {
        &self.0
    }

    pub fn apply(&self, e: Exponent) -> Exponent {
        let v = e.to_array();
        let m = &self.0;
        Exponent::new(
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        )
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        let mut out = [[0i64; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        UnimodularMatrix(out)
    }
}

pub(crate) fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// A Laurent polynomial with coefficients in `T`. No stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent<T> {
    terms: BTreeMap<Exponent, T>,
}

impl<T: Scalar> Default for Laurent<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> Laurent<T> {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(Exponent::ZERO, c)
    }

    pub fn monomial(e: Exponent, c: T) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Laurent { terms }
    }

    /// Variable `x`, `y` or `z`.
    pub fn var(axis: Axis) -> Self {
        let e = match axis {
            Axis::X => Exponent::new(1, 0, 0),
            Axis::Y => Exponent::new(0, 1, 0),
            Axis::Z => Exponent::new(0, 0, 1),
        };
        Self::monomial(e, T::one())
    }

    /// Builds a polynomial from terms, summing duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Exponent, T)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: Exponent, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().copied().collect()
    }

    /// Coefficient of `x^0 y^0 z^0`.
    pub fn constant_term(&self) -> T {
        self.coeff(&Exponent::ZERO)
    }

    /// If the polynomial is a single term, returns it.
    pub fn as_monomial(&self) -> Option<(Exponent, &T)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (*e, v.clone() * c.clone())))
    }

    /// Multiplies by the monomial `c * x^e`.
    pub fn shift(&self, e: Exponent, c: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k + e, v.clone() * c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces every exponent `e` by `M e`.
    pub fn substitute_unimodular(&self, m: &UnimodularMatrix) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (m.apply(*e), c.clone())).collect(),
        }
    }

    /// Substitutes `v -> alpha * v` for the chosen variable.
    pub fn scale_variable(&self, axis: Axis, alpha: &T) -> Result<Self, LaurentError> {
        if alpha.is_zero() {
            return Err(LaurentError::ZeroScale);
        }
        Ok(Laurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.clone() * int_pow(alpha, e.get(axis))))
                .collect(),
        })
    }

    /// Logarithmic derivative `v * d/dv` along one axis.
    pub fn log_derivative(&self, axis: Axis) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c.clone() * T::from_int(e.get(axis)))),
        )
    }

    /// `(x ∂f/∂x, y ∂f/∂y, z ∂f/∂z)`.
    pub fn log_gradient(&self) -> [Self; 3] {
        Axis::ALL.map(|a| self.log_derivative(a))
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Laurent<U> {
        Laurent::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Evaluates at a point of the torus (all coordinates invertible).
    pub fn eval(&self, point: &[T; 3]) -> T {
        self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            acc + c.clone()
                * int_pow(&point[0], e.a)
                * int_pow(&point[1], e.b)
                * int_pow(&point[2], e.c)
        })
    }

    /// Componentwise minimum and maximum of the support. `None` when zero.
    pub fn exponent_bounds(&self) -> Option<([i64; 3], [i64; 3])> {
        let mut it = self.terms.keys();
        let first = it.next()?.to_array();
        let (mut lo, mut hi) = (first, first);
        for e in it {
            for (k, v) in e.to_array().into_iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        Some((lo, hi))
    }
}

/// `base^exp` for signed `exp`; negative exponents divide.
pub(crate) fn int_pow<T: Scalar>(base: &T, exp: i64) -> T {
    let mut result = T::one();
    let mut b = base.clone();
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result = result * b.clone();
        }
        b = b.clone() * b;
        e >>= 1;
    }
    if exp < 0 {
        T::one() / result
    } else {
        result
    }
}

impl<T: Scalar> Add for &Laurent<T> {
    type Output = Laurent<T>;

    fn add(self, o: &Laurent<T>) -> Laurent<T> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &Laurent<T> {
    type Output = Laurent<T>;

    fn sub(self, o: &Laurent<T>) -> Laurent<T> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<T: Scalar> Neg for &Laurent<T> {
    type Output = Laurent<T>;

    fn neg(self) -> Laurent<T> {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl<T: Scalar> Mul for &Laurent<T> {
    type Output = Laurent<T>;

    fn mul(self, o: &Laurent<T>) -> Laurent<T> {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(*e1 + *e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Laurent<T> {
            type Output = Laurent<T>;

            fn $m(self, o: Laurent<T>) -> Laurent<T> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Laurent<T> {
    type Output = Laurent<T>;

    fn neg(self) -> Laurent<T> {
        -&self
    }
}

/// Serialized form: `{"vars": ["x","y","z"], "terms": [[[a,b,c], "num/den"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub vars: Vec<String>,
    pub terms: Vec<([i64; 3], String)>,
}

impl Laurent<BigRational> {
    pub fn to_document(&self) -> PolynomialDocument {
        PolynomialDocument {
            vars: vec!["x".into(), "y".into(), "z".into()],
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.to_array(), format_rational(c)))
                .collect(),
        }
    }

    pub fn from_document(doc: &PolynomialDocument) -> Result<Self, LaurentError> {
        if doc.vars != ["x", "y", "z"] {
            return Err(LaurentError::Document(format!(
                "expected vars [x, y, z], found {:?}",
                doc.vars
            )));
        }
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (e, c) in &doc.terms {
            let c = parse_rational(c)
                .ok_or_else(|| LaurentError::Document(format!("invalid coefficient `{c}`")))?;
            terms.push((Exponent::from(*e), c));
        }
        Ok(Self::from_terms(terms))
    }
}

fn write_monomial(out: &mut String, e: &[(&str, i64)]) {
    let mut first = true;
    for (name, p) in e {
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(name);
        if *p != 1 {
            out.push('^');
            out.push_str(&p.to_string());
        }
    }
}

/// Prints in the parser's grammar, e.g. `x + 2*y/(3*z) - 1/(x*y*z)`.
impl fmt::Display for Laurent<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let num = c.numer().abs();
            let den = c.denom().clone();
            let names = ["x", "y", "z"];
            let arr = e.to_array();
            let up: Vec<(&str, i64)> = (0..3).filter(|&k| arr[k] > 0).map(|k| (names[k], arr[k])).collect();
            let down: Vec<(&str, i64)> = (0..3).filter(|&k| arr[k] < 0).map(|k| (names[k], -arr[k])).collect();

            if up.is_empty() {
                out.push_str(&num.to_string());
            } else {
                if !num.is_one() {
                    out.push_str(&num.to_string());
                    out.push('*');
                }
                write_monomial(&mut out, &up);
            }
            if !down.is_empty() || !den.is_one() {
                out.push_str("/(");
                if down.is_empty() {
                    out.push_str(&den.to_string());
                } else {
                    if !den.is_one() {
                        out.push_str(&den.to_string());
                        out.push('*');
                    }
                    write_monomial(&mut out, &down);
                }
                out.push(')');
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    type Q = Laurent<BigRational>;

    fn x() -> Q {
        Q::var(Axis::X)
    }

    fn x_inv() -> Q {
        Q::monomial(Exponent::new(-1, 0, 0), int(1))
    }

    #[test]
    fn binomial_square() {
        let f = &x() + &x_inv();
        let sq = &f * &f;
        let expected = Q::from_terms([
            (Exponent::new(2, 0, 0), int(1)),
            (Exponent::ZERO, int(2)),
            (Exponent::new(-2, 0, 0), int(1)),
        ]);
        assert_eq!(sq, expected);
        assert_eq!(&f * &Q::one(), f);
    }

    #[test]
    fn cancellation_drops_terms() {
        let f = &x() - &x();
        assert!(f.is_zero());
        assert_eq!(Q::from_terms([(Exponent::ZERO, int(0))]).len(), 0);
    }

    #[test]
    fn constant_terms() {
        let f = Q::from_terms([(Exponent::ZERO, int(5)), (Exponent::new(1, 0, 0), int(1))]);
        assert_eq!(f.constant_term(), int(5));
        assert_eq!(Q::zero().constant_term(), int(0));
    }

    #[test]
    fn unimodular_rejects_singular() {
        assert_eq!(
            UnimodularMatrix::new([[2, 0, 0], [0, 1, 0], [0, 0, 1]]),
            Err(LaurentError::NotUnimodular(2))
        );
        assert!(UnimodularMatrix::new([[0, 1, 0], [1, 0, 0], [0, 0, 1]]).is_ok());
    }

    #[test]
    fn scale_variable_examples() {
        let f = &x() + &x_inv();
        assert_eq!(f.scale_variable(Axis::X, &int(1)).unwrap(), f);
        let g = f.scale_variable(Axis::X, &int(2)).unwrap();
        assert_eq!(g.coeff(&Exponent::new(1, 0, 0)), int(2));
        assert_eq!(g.coeff(&Exponent::new(-1, 0, 0)), rational(1, 2));
        assert_eq!(f.scale_variable(Axis::Y, &int(0)), Err(LaurentError::ZeroScale));
    }

    #[test]
    fn log_gradient_of_constant_and_variable() {
        let c = Q::constant(int(7));
        assert!(c.log_gradient().iter().all(Laurent::is_zero));
        let g = x().log_gradient();
        assert_eq!(g[0], x());
        assert!(g[1].is_zero() && g[2].is_zero());
    }

    #[test]
    fn eval_with_negative_exponents() {
        let f = &x() + &x_inv();
        assert_eq!(f.eval(&[int(2), int(1), int(1)]), rational(5, 2));
    }

    #[test]
    fn display_zero_and_signs() {
        assert_eq!(Q::zero().to_string(), "0");
        let f = Q::from_terms([
            (Exponent::new(-1, -1, -1), int(-1)),
            (Exponent::new(1, 0, -2), rational(2, 3)),
            (Exponent::ZERO, rational(-1, 2)),
        ]);
        assert_eq!(f.to_string(), "-1/(x*y*z) - 1/(2) + 2*x/(3*z^2)");
    }

    #[test]
    fn document_rejects_bad_vars() {
        let doc = PolynomialDocument { vars: vec!["a".into()], terms: vec![] };
        assert!(Q::from_document(&doc).is_err());
    }
}
