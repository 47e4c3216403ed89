//! Constant-term series `Φ_f = Σ φ_f(i) t^i`, where `φ_f(i)` is the constant
//! term of `f^i`.
//!
//! The fast engine keeps `f^i` in a dense exponent box and multiplies by `f`
//! once per step. Before each step the box is clipped to the exponents that
//! can still return to the origin in the multiplications that remain: with
//! at most `r` steps left and per-coordinate increments in `[lo_k, hi_k]`, an
//! exponent `e` survives only if `min(0, -r*hi_k) <= e_k <= max(0, -r*lo_k)`
//! for every `k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::Laurent;
use crate::scalar::{format_rational, parse_rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodsError {
    #[error("series order must be at least 1")]
    EmptyOrder,
    #[error("intermediate support of {needed} cells exceeds the term budget of {budget}")]
    ResourceLimit { needed: usize, budget: usize },
    #[error("malformed series document: {0}")]
    Document(String),
}

/// Truncated power series `coeffs[0] + coeffs[1] t + ...`; the order is the
/// number of known coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Series<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn get(&self, i: usize) -> Option<&T> {
        self.coeffs.get(i)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series { coeffs: self.coeffs.iter().take(order).cloned().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SeriesOptions {
    /// Maximum number of cells in the dense box holding `f^i`.
    pub term_budget: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { term_budget: 20_000_000 }
    }
}

#[derive(Clone, Debug)]
struct DenseBox<T> {
    lo: [i64; 3],
    dims: [usize; 3],
    data: Vec<T>,
}

impl<T: Scalar> DenseBox<T> {
    fn index(&self, e: [i64; 3]) -> Option<usize> {
        let mut idx = 0usize;
        for k in 0..3 {
            let off = e[k] - self.lo[k];
            if off < 0 || off as usize >= self.dims[k] {
                return None;
            }
            idx = idx * self.dims[k] + off as usize;
        }
        Some(idx)
    }

    fn constant_term(&self) -> T {
        self.index([0, 0, 0]).map_or_else(T::zero, |i| self.data[i].clone())
    }
}

/// Constant-term series of `f` to order `n` over any coefficient ring.
pub fn constant_terms_series_with<T: Scalar>(
    f: &Laurent<T>,
    n: usize,
    opts: SeriesOptions,
) -> Result<Series<T>, PeriodsError> {
    if n == 0 {
        return Err(PeriodsError::EmptyOrder);
    }
    let mut out = Vec::with_capacity(n);
    out.push(T::one());
    let Some((fmin, fmax)) = f.exponent_bounds() else {
        out.resize(n, T::zero());
        return Ok(Series::new(out));
    };
    let terms: Vec<([i64; 3], T)> = f.terms().map(|(e, c)| (e.to_array(), c.clone())).collect();

    let mut cur = DenseBox { lo: [0; 3], dims: [1; 3], data: vec![T::one()] };
    for i in 1..n {
        let remaining = (n - 1 - i) as i64;
        let mut lo = [0i64; 3];
        let mut hi = [0i64; 3];
        let mut empty = false;
        for k in 0..3 {
            let cur_hi = cur.lo[k] + cur.dims[k] as i64 - 1;
            lo[k] = (cur.lo[k] + fmin[k]).max((-remaining * fmax[k]).min(0));
            hi[k] = (cur_hi + fmax[k]).min((-remaining * fmin[k]).max(0));
            empty |= lo[k] > hi[k];
        }
        if empty {
            out.resize(n, T::zero());
            return Ok(Series::new(out));
        }
        let dims = [0, 1, 2].map(|k| (hi[k] - lo[k] + 1) as usize);
        let cells = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
        if cells > opts.term_budget {
            return Err(PeriodsError::ResourceLimit { needed: cells, budget: opts.term_budget });
        }
        let mut next = DenseBox { lo, dims, data: vec![T::zero(); cells] };
        let [d0, d1, d2] = cur.dims;
        for (src, val) in cur.data.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            let e = [
                cur.lo[0] + (src / (d1 * d2)) as i64,
                cur.lo[1] + ((src / d2) % d1) as i64,
                cur.lo[2] + (src % d2) as i64,
            ];
            debug_assert!(src / (d1 * d2) < d0);
            for (t, c) in &terms {
                if let Some(dst) = next.index([e[0] + t[0], e[1] + t[1], e[2] + t[2]]) {
                    let slot = &mut next.data[dst];
                    *slot = std::mem::replace(slot, T::zero()) + val.clone() * c.clone();
                }
            }
        }
        out.push(next.constant_term());
        cur = next;
    }
    Ok(Series::new(out))
}

/// Constant-term series of a rational Laurent polynomial.
///
/// Denominators are cleared first: with `f = g / d` and `g` integral,
/// `φ_f(i) = φ_g(i) / d^i`.
pub fn constant_terms_series_opts(
    f: &Laurent<BigRational>,
    n: usize,
    opts: SeriesOptions,
) -> Result<Series<BigRational>, PeriodsError> {
    let d = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let g: Laurent<BigInt> = f.map_coeffs(|c| (c * &d).to_integer());
    let integral = constant_terms_series_with(&g, n, opts)?;
    let mut scale = BigInt::one();
    let coeffs = integral
        .into_coeffs()
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            if i > 0 {
                scale *= &d;
            }
            BigRational::new(c, scale.clone())
        })
        .collect();
    Ok(Series::new(coeffs))
}

pub fn constant_terms_series(
    f: &Laurent<BigRational>,
    n: usize,
) -> Result<Series<BigRational>, PeriodsError> {
    constant_terms_series_opts(f, n, SeriesOptions::default())
}

/// Computes several series concurrently; results keep the input order.
pub fn constant_terms_series_batch(
    polys: &[Laurent<BigRational>],
    n: usize,
) -> Vec<Result<Series<BigRational>, PeriodsError>> {
    polys.par_iter().map(|f| constant_terms_series(f, n)).collect()
}

/// Reference implementation: full repeated multiplication, no pruning.
pub fn constant_terms_series_naive<T: Scalar>(f: &Laurent<T>, n: usize) -> Series<T> {
    let mut out = Vec::with_capacity(n);
    let mut power = Laurent::one();
    for i in 0..n {
        out.push(power.constant_term());
        if i + 1 < n {
            power = &power * f;
        }
    }
    Series::new(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesComparison {
    pub equal: bool,
    /// Number of coefficients compared (the shorter order).
    pub compared: usize,
    pub first_mismatch: Option<usize>,
}

pub fn series_equal<T: Scalar>(a: &Series<T>, b: &Series<T>) -> SeriesComparison {
    let compared = a.order().min(b.order());
    let first_mismatch = (0..compared).find(|&i| a.coeffs[i] != b.coeffs[i]);
    SeriesComparison { equal: first_mismatch.is_none(), compared, first_mismatch }
}

/// Serialized form `{"order": N, "coeffs": ["num/den", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub order: usize,
    pub coeffs: Vec<String>,
}

impl Series<BigRational> {
    pub fn to_document(&self) -> SeriesDocument {
        SeriesDocument { order: self.order(), coeffs: self.coeffs.iter().map(format_rational).collect() }
    }

    pub fn from_document(doc: &SeriesDocument) -> Result<Self, PeriodsError> {
        if doc.order != doc.coeffs.len() {
            return Err(PeriodsError::Document(format!(
                "order {} does not match {} coefficients",
                doc.order,
                doc.coeffs.len()
            )));
        }
        let coeffs = doc
            .coeffs
            .iter()
            .map(|c| parse_rational(c).ok_or_else(|| PeriodsError::Document(format!("invalid coefficient `{c}`"))))
            .collect::<Result<_, _>>()?;
        Ok(Series::new(coeffs))
    }

    /// Comma-separated text form, e.g. `1, 0, 0, 0, 24`.
    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(format_rational).collect::<Vec<_>>().join(", ")
    }
}
