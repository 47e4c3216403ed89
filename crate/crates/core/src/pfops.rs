//! Differential operators `L = Σ_i t^i p_i(D)` with `D = t d/dt`.
//!
//! `D` acts on `t^n` as multiplication by `n`, so `(t^i p(D) s)_n = p(n-i) s_{n-i}`.
//! Operators are recovered from a truncated series by computing the exact
//! nullspace of the linear conditions `(L s)_n = 0`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{dot, nullspace, normalize_at};
use crate::periods::Series;
use crate::scalar::{format_rational, parse_rational, Scalar};

/// Number of trailing equations kept out of the fit and used for validation.
pub const HELD_OUT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfError {
    #[error("series of order {order} is too short for an operator of t-degree {deg_t}")]
    SeriesTooShort { order: usize, deg_t: usize },
    #[error("need at least {needed} coefficients to recover a ({ord_d},{deg_t}) operator, got {have}")]
    InsufficientLength { needed: usize, have: usize, ord_d: usize, deg_t: usize },
    #[error("nullspace has dimension {dim} for shape ({ord_d},{deg_t}); lower deg_t or ord_D")]
    Ambiguous { dim: usize, ord_d: usize, deg_t: usize },
    #[error("recovered operator fails on held-out coefficient {index}")]
    HeldOutMismatch { index: usize },
    #[error("malformed operator document: {0}")]
    Document(String),
}

/// Univariate polynomial helpers (ascending coefficients).
pub mod dpoly {
    use crate::scalar::Scalar;

    pub fn trim<T: Scalar>(mut p: Vec<T>) -> Vec<T> {
        while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        if p.is_empty() {
            p.push(T::zero());
        }
        p
    }

    pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    a.get(i).cloned().unwrap_or_else(T::zero) + b.get(i).cloned().unwrap_or_else(T::zero)
                })
                .collect(),
        )
    }

    pub fn mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        trim(out)
    }

    pub fn scale<T: Scalar>(a: &[T], c: &T) -> Vec<T> {
        trim(a.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// `c * D^k`.
    pub fn term<T: Scalar>(c: T, k: usize) -> Vec<T> {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        trim(v)
    }

    /// `a + b D`.
    pub fn linear<T: Scalar>(a: i64, b: i64) -> Vec<T> {
        trim(vec![T::from_int(a), T::from_int(b)])
    }

    pub fn eval<T: Scalar>(p: &[T], x: &T) -> T {
        p.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn is_zero<T: Scalar>(p: &[T]) -> bool {
        p.iter().all(|c| c.is_zero())
    }
}

/// `coeff[i][j]` is the coefficient of `t^i D^j`. The stored shape is tight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp<T> {
    coeff: Vec<Vec<T>>,
}

impl<T: Scalar> DiffOp<T> {
    /// Builds from a coefficient matrix (rows may have different lengths),
    /// trimming zero rows and columns at the top end.
    pub fn new(rows: Vec<Vec<T>>) -> Self {
        let ord = rows
            .iter()
            .filter_map(|r| r.iter().rposition(|c| !c.is_zero()))
            .max()
            .unwrap_or(0);
        let deg = rows
            .iter()
            .rposition(|r| r.iter().any(|c| !c.is_zero()))
            .unwrap_or(0);
        let coeff = (0..=deg)
            .map(|i| {
                (0..=ord)
                    .map(|j| rows.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(T::zero))
                    .collect()
            })
            .collect();
        DiffOp { coeff }
    }

    pub fn identity() -> Self {
        Self::new(vec![vec![T::one()]])
    }

    /// `D^k`.
    pub fn d_power(k: usize) -> Self {
        Self::new(vec![dpoly::term(T::one(), k)])
    }

    pub fn deg_t(&self) -> usize {
        self.coeff.len() - 1
    }

    pub fn ord_d(&self) -> usize {
        self.coeff[0].len() - 1
    }

    pub fn coeff(&self) -> &[Vec<T>] {
        &self.coeff
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.coeff.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(T::zero)
    }

    /// Polynomial in `D` multiplying `t^i`.
    pub fn block(&self, i: usize) -> Vec<T> {
        dpoly::trim(self.coeff.get(i).cloned().unwrap_or_default())
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.iter().all(|r| dpoly::is_zero(r))
    }

    /// Coefficient of `D^{ord}` as a polynomial in `t`.
    pub fn leading_symbol(&self) -> Vec<T> {
        let ord = self.ord_d();
        dpoly::trim(self.coeff.iter().map(|r| r[ord].clone()).collect())
    }

    /// `L s`, truncated to order `s.order() - deg_t`.
    pub fn apply(&self, s: &Series<T>) -> Result<Series<T>, PfError> {
        let deg = self.deg_t();
        if s.order() <= deg {
            return Err(PfError::SeriesTooShort { order: s.order(), deg_t: deg });
        }
        let c = s.coeffs();
        let out = (0..s.order() - deg)
            .map(|n| {
                (0..=deg.min(n)).fold(T::zero(), |acc, i| {
                    let m = T::from_int((n - i) as i64);
                    acc + dpoly::eval(&self.coeff[i], &m) * c[n - i].clone()
                })
            })
            .collect();
        Ok(Series::new(out))
    }
}

/// Parameters of the regularized quantum differential operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D3Params<T> {
    pub a01: T,
    pub a02: T,
    pub a03: T,
    pub a11: T,
    pub a12: T,
    /// Shift; the operator for `lambda` annihilates the series of `f + lambda`.
    pub lambda: T,
}

impl<T: Scalar> D3Params<T> {
    pub fn zero() -> Self {
        D3Params { a01: T::zero(), a02: T::zero(), a03: T::zero(), a11: T::zero(), a12: T::zero(), lambda: T::zero() }
    }

    pub fn with_lambda(&self, lambda: T) -> Self {
        D3Params { lambda, ..self.clone() }
    }
}

/// Operator of type D3: order 3 in `D`, degree 4 in `t`, with `t`-blocks
/// polynomial in the parameters.
pub fn build_d3<T: Scalar>(p: &D3Params<T>) -> DiffOp<T> {
    use dpoly::{add, linear, mul, scale, term};
    let l = p.lambda.clone();
    let a = p.a11.clone() + l.clone();
    let c = |k: i64| T::from_int(k);
    let sum = |parts: Vec<Vec<T>>| parts.iter().fold(vec![T::zero()], |acc, q| add(&acc, q));

    let inner1 = sum(vec![
        term(l.clone(), 2),
        term(a.clone(), 2),
        term(l.clone(), 1),
        term(a.clone(), 1),
        term(l.clone(), 0),
    ]);
    let block1 = scale(&mul(&linear(1, 2), &inner1), &c(-1));

    let inner2 = sum(vec![
        term(a.clone() * a.clone(), 2),
        term(l.clone() * l.clone(), 2),
        term(c(4) * a.clone() * l.clone(), 2),
        term(-p.a12.clone(), 2),
        term(c(-2) * p.a01.clone(), 2),
        term(c(8) * a.clone() * l.clone(), 1),
        term(c(-2) * p.a12.clone(), 1),
        term(c(2) * l.clone() * l.clone(), 1),
        term(c(-4) * p.a01.clone(), 1),
        term(c(2) * a.clone() * a.clone(), 1),
        term(c(6) * a.clone() * l.clone(), 0),
        term(l.clone() * l.clone(), 0),
        term(c(-4) * p.a01.clone(), 0),
    ]);
    let block2 = mul(&linear(1, 1), &inner2);

    let inner3 = l.clone() * l.clone() * a.clone() + a.clone() * a.clone() * l.clone() - p.a12.clone() * l.clone()
        + p.a02.clone()
        - a.clone() * p.a01.clone()
        - p.a01.clone() * l.clone();
    let cubic3 = mul(&mul(&linear(3, 2), &linear(2, 1)), &linear(1, 1));
    let block3 = scale(&cubic3, &(-inner3));

    let inner4 = -(l.clone() * l.clone() * p.a12.clone()) + c(2) * p.a02.clone() * l.clone()
        + l.clone() * l.clone() * a.clone() * a.clone()
        - p.a03.clone()
        + p.a01.clone() * p.a01.clone()
        - c(2) * p.a01.clone() * a.clone() * l.clone();
    let cubic4 = mul(&mul(&linear(3, 1), &linear(2, 1)), &linear(1, 1));
    let block4 = scale(&cubic4, &inner4);

    DiffOp::new(vec![term(T::one(), 3), block1, block2, block3, block4])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeViolation {
    /// Order in `D` is not 3.
    Order { found: usize },
    /// Degree in `t` exceeds 4.
    Degree { found: usize },
    /// The `t^0` block is not `D^3`.
    LeadingBlock,
    /// The `t^4` block is not divisible by `(D+1)(D+2)(D+3)`.
    TopBlock,
}

impl fmt::Display for ShapeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeViolation::Order { found } => write!(f, "order in D is {found}, expected 3"),
            ShapeViolation::Degree { found } => write!(f, "degree in t is {found}, expected at most 4"),
            ShapeViolation::LeadingBlock => f.write_str("t^0 block is not D^3"),
            ShapeViolation::TopBlock => f.write_str("t^4 block is not divisible by (D+1)(D+2)(D+3)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeCheck {
    pub ok: bool,
    pub violation: Option<ShapeViolation>,
}

/// Checks the D3 shape: order 3, `deg_t <= 4`, `t^0` block `D^3`, `t^4`
/// block vanishing at `D = -1, -2, -3`.
pub fn is_d3_shape<T: Scalar>(op: &DiffOp<T>) -> ShapeCheck {
    let fail = |v| ShapeCheck { ok: false, violation: Some(v) };
    if op.ord_d() != 3 {
        return fail(ShapeViolation::Order { found: op.ord_d() });
    }
    if op.deg_t() > 4 {
        return fail(ShapeViolation::Degree { found: op.deg_t() });
    }
    if op.block(0) != dpoly::term(T::one(), 3) {
        return fail(ShapeViolation::LeadingBlock);
    }
    if op.deg_t() == 4 {
        let top = op.block(4);
        if (1..=3).any(|k| !dpoly::eval(&top, &T::from_int(-k)).is_zero()) {
            return fail(ShapeViolation::TopBlock);
        }
    }
    ShapeCheck { ok: true, violation: None }
}

/// A recovered operator with its validation record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovered {
    pub operator: DiffOp<BigRational>,
    /// Equations used to determine the nullspace.
    pub fitted: usize,
    /// Equations checked afterwards.
    pub held_out: usize,
}

fn equation_row(s: &[BigRational], n: usize, ord: usize, deg: usize) -> Vec<BigRational> {
    let mut row = Vec::with_capacity((ord + 1) * (deg + 1));
    for i in 0..=deg {
        let mut pw = BigRational::one();
        let m = BigRational::from_integer(((n as i64) - (i as i64)).into());
        for _ in 0..=ord {
            if n >= i {
                row.push(&pw * &s[n - i]);
            } else {
                row.push(BigRational::zero());
            }
            pw = &pw * &m;
        }
    }
    row
}

/// Finds the unique operator of shape `(ord_d, deg_t)` annihilating `s`.
///
/// The last [`HELD_OUT`] equations are excluded from the fit and checked
/// afterwards. Returns `Ok(None)` when no such operator exists.
pub fn recover_operator(
    s: &Series<BigRational>,
    ord_d: usize,
    deg_t: usize,
) -> Result<Option<Recovered>, PfError> {
    let unknowns = (ord_d + 1) * (deg_t + 1);
    let needed = unknowns + HELD_OUT;
    if s.order() < needed {
        return Err(PfError::InsufficientLength { needed, have: s.order(), ord_d, deg_t });
    }
    let c = s.coeffs();
    let fitted = s.order() - HELD_OUT;
    let rows: Vec<_> = (0..fitted).map(|n| equation_row(c, n, ord_d, deg_t)).collect();
    let mut basis = nullspace(&rows, unknowns);
    match basis.len() {
        0 => return Ok(None),
        1 => {}
        dim => return Err(PfError::Ambiguous { dim, ord_d, deg_t }),
    }
    let mut v = basis.pop().expect("one basis vector");
    normalize_at(&mut v, ord_d);
    for n in fitted..s.order() {
        if !dot(&equation_row(c, n, ord_d, deg_t), &v).is_zero() {
            return Err(PfError::HeldOutMismatch { index: n });
        }
    }
    let rows = v.chunks(ord_d + 1).map(<[BigRational]>::to_vec).collect();
    Ok(Some(Recovered { operator: DiffOp::new(rows), fitted, held_out: HELD_OUT }))
}

/// Scans `deg_t = 0..=max_deg_t` and returns the first (lowest-degree)
/// annihilating operator of order `ord_d`.
pub fn recover_minimal_operator(
    s: &Series<BigRational>,
    ord_d: usize,
    max_deg_t: usize,
) -> Result<Option<Recovered>, PfError> {
    for deg in 0..=max_deg_t {
        if let Some(r) = recover_operator(s, ord_d, deg)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Serialized form `{"ord_D": j, "deg_t": i, "coeff": [["num/den", ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorDocument {
    #[serde(rename = "ord_D")]
    pub ord_d: usize,
    pub deg_t: usize,
    pub coeff: Vec<Vec<String>>,
}

impl DiffOp<BigRational> {
    pub fn to_document(&self) -> OperatorDocument {
        OperatorDocument {
            ord_d: self.ord_d(),
            deg_t: self.deg_t(),
            coeff: self.coeff.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
    }

    pub fn from_document(doc: &OperatorDocument) -> Result<Self, PfError> {
        if doc.coeff.len() != doc.deg_t + 1 || doc.coeff.iter().any(|r| r.len() != doc.ord_d + 1) {
            return Err(PfError::Document("coefficient matrix does not match ord_D/deg_t".into()));
        }
        let rows = doc
            .coeff
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| parse_rational(c).ok_or_else(|| PfError::Document(format!("invalid coefficient `{c}`"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let op = DiffOp::new(rows);
        if op.deg_t() != doc.deg_t || op.ord_d() != doc.ord_d {
            return Err(PfError::Document("stored shape is not tight".into()));
        }
        Ok(op)
    }
}

fn format_dpoly(p: &[BigRational]) -> String {
    let mut out = String::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let mono = match k {
            0 => String::new(),
            1 => "D".to_string(),
            _ => format!("D^{k}"),
        };
        if k == 0 {
            out.push_str(&format_rational(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", format_rational(&a), mono));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Prints `Σ t^i p_i(D)`, e.g. `D^3 - t^4*(256*D^3 + 1536*D^2 + 2816*D + 1536)`.
impl fmt::Display for DiffOp<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for i in 0..=self.deg_t() {
            let mut block = self.block(i);
            if dpoly::is_zero(&block) {
                continue;
            }
            let lead_negative = block.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
            if i > 0 && lead_negative {
                block = dpoly::scale(&block, &-BigRational::one());
            }
            let body = format_dpoly(&block);
            if i == 0 {
                out.push_str(&body);
                continue;
            }
            let sep = match (out.is_empty(), lead_negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let tpow = if i == 1 { "t".to_string() } else { format!("t^{i}") };
            out.push_str(&format!("{sep}{tpow}*({body})"));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    type Op = DiffOp<BigRational>;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn d_acts_by_index() {
        let s = Series::new(ints(&[1, 1, 1, 1]));
        assert_eq!(Op::d_power(1).apply(&s).unwrap().coeffs(), ints(&[0, 1, 2, 3]).as_slice());
        assert_eq!(Op::identity().apply(&s).unwrap(), s);
    }

    #[test]
    fn apply_requires_long_enough_series() {
        let op = Op::new(vec![vec![int(0)], vec![int(0)], vec![int(1)]]);
        assert_eq!(op.deg_t(), 2);
        let s = Series::new(ints(&[1, 2]));
        assert_eq!(op.apply(&s), Err(PfError::SeriesTooShort { order: 2, deg_t: 2 }));
    }

    #[test]
    fn tight_shape_and_zero_operator() {
        let op = Op::new(vec![vec![int(0), int(1), int(0)], vec![int(0)], vec![]]);
        assert_eq!((op.ord_d(), op.deg_t()), (1, 0));
        let z = Op::new(vec![]);
        assert!(z.is_zero());
        let s = Series::new(ints(&[0, 0, 0]));
        assert!(Op::d_power(3).apply(&s).unwrap().is_zero());
    }

    #[test]
    fn constant_series_is_annihilated_by_d() {
        let mut c = vec![int(1)];
        c.resize(30, int(0));
        let rec = recover_operator(&Series::new(c), 1, 0).unwrap().unwrap();
        assert_eq!(rec.operator, Op::d_power(1));
        assert_eq!(rec.held_out, HELD_OUT);
    }

    #[test]
    fn insufficient_length_is_reported() {
        let s = Series::new(ints(&[1, 0, 0, 0, 24]));
        assert!(matches!(recover_operator(&s, 3, 4), Err(PfError::InsufficientLength { needed: 40, have: 5, .. })));
    }

    #[test]
    fn geometric_series_has_no_pure_d_operator() {
        // 1/(1-t): (D - t(D+1)) annihilates it but no t-free operator does
        let s = Series::new(vec![int(1); 30]);
        assert!(recover_operator(&s, 1, 0).unwrap().is_none());
        let rec = recover_minimal_operator(&s, 1, 2).unwrap().unwrap();
        assert_eq!(rec.operator, Op::new(vec![ints(&[0, 1]), ints(&[-1, -1])]));
    }

    #[test]
    fn ambiguous_nullspace_is_an_error() {
        let s = Series::new(vec![int(1); 30]);
        assert!(matches!(recover_operator(&s, 1, 2), Err(PfError::Ambiguous { dim: 2, .. })));
    }

    #[test]
    fn d3_with_zero_parameters_is_d_cubed() {
        assert_eq!(build_d3(&D3Params::<BigRational>::zero()), Op::d_power(3));
    }

    /// Evaluates the bracket `(2D+1)(λD² + (a11+λ)D² + λD + (a11+λ)D + λ)`
    /// directly at a numeric `D`.
    fn first_bracket(a11: &BigRational, l: &BigRational, d: &BigRational) -> BigRational {
        let a = a11 + l;
        (int(2) * d + int(1)) * (l * d * d + &a * d * d + l * d + &a * d + l)
    }

    #[test]
    fn d3_first_block_matches_direct_evaluation() {
        for (a11, l) in [(int(5), int(0)), (rational(3, 2), int(-2)), (int(0), rational(1, 3))] {
            let p = D3Params { a11: a11.clone(), lambda: l.clone(), ..D3Params::zero() };
            let op = build_d3(&p);
            for d in -3..=4 {
                let d = int(d);
                assert_eq!(dpoly::eval(&op.block(1), &d), -first_bracket(&a11, &l, &d));
            }
        }
        // lambda = 0, a11 = s: coefficient of t*D^2 is -3s
        let op = build_d3(&D3Params { a11: int(7), ..D3Params::zero() });
        assert_eq!(op.get(1, 2), int(-21));
        assert_eq!(op.get(1, 3), int(-14));
    }

    #[test]
    fn shape_checks() {
        let p3 = Op::new(vec![ints(&[0, 0, 0, 1]), vec![], vec![], vec![], ints(&[-1536, -2816, -1536, -256])]);
        assert_eq!(is_d3_shape(&p3), ShapeCheck { ok: true, violation: None });
        assert_eq!(is_d3_shape(&Op::d_power(2)).violation, Some(ShapeViolation::Order { found: 2 }));
        let deg5 = Op::new(vec![ints(&[0, 0, 0, 1]), vec![], vec![], vec![], vec![], ints(&[0, 1])]);
        assert_eq!(is_d3_shape(&deg5).violation, Some(ShapeViolation::Degree { found: 5 }));
        let bad_top = Op::new(vec![ints(&[0, 0, 0, 1]), vec![], vec![], vec![], ints(&[1, 0, 0, 1])]);
        assert_eq!(is_d3_shape(&bad_top).violation, Some(ShapeViolation::TopBlock));
        let bad_lead = Op::new(vec![ints(&[0, 1, 0, 1])]);
        assert_eq!(is_d3_shape(&bad_lead).violation, Some(ShapeViolation::LeadingBlock));
    }

    #[test]
    fn display_and_document() {
        let p3 = Op::new(vec![ints(&[0, 0, 0, 1]), vec![], vec![], vec![], ints(&[-1536, -2816, -1536, -256])]);
        assert_eq!(p3.to_string(), "D^3 - t^4*(256*D^3 + 1536*D^2 + 2816*D + 1536)");
        assert_eq!(Op::from_document(&p3.to_document()).unwrap(), p3);
        let op = Op::new(vec![ints(&[0, 1]), vec![rational(1, 2), int(-1)]]);
        assert_eq!(op.to_string(), "D - t*(D - 1/2)");
        assert_eq!(op.leading_symbol(), ints(&[1, -1]));
    }
}
