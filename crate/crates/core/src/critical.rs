//! Critical points of a Laurent polynomial on the complex torus.
//!
//! Solves `x f_x = y f_y = z f_z = 0` by damped Newton iteration in
//! logarithmic coordinates `x = exp(u)`, where the system reads
//! `G_k(u) = Σ c_e e_k exp(<e,u>)` and its Jacobian is
//! `J_kj = Σ c_e e_k e_j exp(<e,u>)`.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::laurent::Laurent;
use crate::pfops::DiffOp;

/// Real type usable for the numeric layer.
pub trait Real: Float + FromPrimitive + std::fmt::Debug + Send + Sync {}

impl<F: Float + FromPrimitive + std::fmt::Debug + Send + Sync> Real for F {}

fn real<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("representable constant")
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalOptions<F> {
    pub starts: usize,
    pub seed: u64,
    pub tol: F,
    pub max_iterations: usize,
    pub max_halvings: usize,
    /// Coordinates must satisfy `floor <= |x_k| <= 1/floor`.
    pub floor: F,
    pub cluster_radius: F,
}

impl<F: Real> Default for CriticalOptions<F> {
    fn default() -> Self {
        CriticalOptions {
            starts: 512,
            seed: 1,
            tol: real(1e-10),
            max_iterations: 200,
            max_halvings: 20,
            floor: real(1e-8),
            cluster_radius: real(1e-6),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint<F> {
    pub location: [Complex<F>; 3],
    pub value: Complex<F>,
    /// Largest magnitude of the log-gradient components at `location`.
    pub residual: F,
}

/// Term list in floating point: `(exponent, coefficient)`.
struct Compiled<F> {
    terms: Vec<([F; 3], Complex<F>)>,
}

impl<F: Real> Compiled<F> {
    fn new(f: &Laurent<BigRational>) -> Self {
        let terms = f
            .terms()
            .map(|(e, c)| {
                let c = c.to_f64().expect("finite coefficient");
                (e.to_array().map(|v| real(v as f64)), Complex::new(real(c), F::zero()))
            })
            .collect();
        Compiled { terms }
    }

    fn monomials(&self, u: &[Complex<F>; 3]) -> Vec<Complex<F>> {
        self.terms
            .iter()
            .map(|(e, c)| *c * (u[0].scale(e[0]) + u[1].scale(e[1]) + u[2].scale(e[2])).exp())
            .collect()
    }

    fn value(&self, u: &[Complex<F>; 3]) -> Complex<F> {
        self.monomials(u).into_iter().fold(Complex::zero(), |a, b| a + b)
    }

    fn gradient(&self, mono: &[Complex<F>]) -> [Complex<F>; 3] {
        let mut g = [Complex::zero(); 3];
        for ((e, _), m) in self.terms.iter().zip(mono) {
            for k in 0..3 {
                g[k] = g[k] + m.scale(e[k]);
            }
        }
        g
    }

    fn jacobian(&self, mono: &[Complex<F>]) -> [[Complex<F>; 3]; 3] {
        let mut j = [[Complex::zero(); 3]; 3];
        for ((e, _), m) in self.terms.iter().zip(mono) {
            for a in 0..3 {
                for b in 0..3 {
                    j[a][b] = j[a][b] + m.scale(e[a] * e[b]);
                }
            }
        }
        j
    }
}

fn max_norm<F: Real>(v: &[Complex<F>; 3]) -> F {
    v.iter().map(|c| c.norm()).fold(F::zero(), F::max)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve3<F: Real>(mut a: [[Complex<F>; 3]; 3], mut b: [Complex<F>; 3]) -> Option<[Complex<F>; 3]> {
    for col in 0..3 {
        let p = (col..3).max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).expect("finite"))?;
        if a[p][col].norm() == F::zero() || !a[p][col].norm().is_finite() {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..3 {
            let factor = a[r][col] / a[col][col];
            for k in col..3 {
                a[r][k] = a[r][k] - factor * a[col][k];
            }
            b[r] = b[r] - factor * b[col];
        }
    }
    let mut x = [Complex::zero(); 3];
    for r in (0..3).rev() {
        let mut s = b[r];
        for k in r + 1..3 {
            s = s - a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

fn newton<F: Real>(p: &Compiled<F>, mut u: [Complex<F>; 3], opts: &CriticalOptions<F>) -> Option<CriticalPoint<F>> {
    let bound = -opts.floor.ln();
    let in_torus = |u: &[Complex<F>; 3]| u.iter().all(|c| c.re.abs() <= bound);
    let mut mono = p.monomials(&u);
    let mut g = p.gradient(&mono);
    let mut res = max_norm(&g);
    for _ in 0..opts.max_iterations {
        if res < opts.tol {
            break;
        }
        let step = solve3(p.jacobian(&mono), g.map(|c| -c))?;
        let mut t = F::one();
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial = [0, 1, 2].map(|k| u[k] + step[k].scale(t));
            let tm = p.monomials(&trial);
            let tg = p.gradient(&tm);
            let tr = max_norm(&tg);
            if tr.is_finite() && tr < res {
                u = trial;
                mono = tm;
                g = tg;
                res = tr;
                accepted = true;
                break;
            }
            t = t / real(2.0);
        }
        if !accepted || !in_torus(&u) {
            return None;
        }
    }
    if !(res < opts.tol) || !in_torus(&u) {
        return None;
    }
    Some(CriticalPoint { location: u.map(|c| c.exp()), value: p.value(&u), residual: res })
}

/// Start point for run `index`: `log|x_k|` uniform in `[-1, 1]`, argument
/// uniform in `[-pi, pi]`. Depends only on `(seed, index)`.
fn start<F: Real>(seed: u64, index: usize) -> [Complex<F>; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    [0; 3].map(|_| {
        let re: f64 = rng.random_range(-1.0..1.0);
        let im: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        Complex::new(real(re), real(im))
    })
}

/// Runs Newton from `opts.starts` seeded starts and returns the converged
/// points in start order (duplicates included).
pub fn find_critical_points<F: Real>(f: &Laurent<BigRational>, opts: &CriticalOptions<F>) -> Vec<CriticalPoint<F>> {
    let p = Compiled::new(f);
    (0..opts.starts)
        .into_par_iter()
        .map(|i| newton(&p, start(opts.seed, i), opts))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValueCluster<F> {
    pub value: Complex<F>,
    /// Distinct critical points with this value.
    pub count: usize,
    pub residual_max: F,
}

/// Deduplicated critical values ordered by real part, then imaginary part.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CriticalValueSet<F> {
    pub clusters: Vec<ValueCluster<F>>,
}

impl<F: Real> CriticalValueSet<F> {
    pub fn values(&self) -> Vec<Complex<F>> {
        self.clusters.iter().map(|c| c.value).collect()
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Every value has a conjugate partner within `tol`.
    pub fn is_conjugation_symmetric(&self, tol: F) -> bool {
        self.clusters.iter().all(|c| self.clusters.iter().any(|d| (d.value - c.value.conj()).norm() < tol))
    }
}

fn close<F: Real>(a: &[Complex<F>; 3], b: &[Complex<F>; 3], radius: F) -> bool {
    (0..3).all(|k| (a[k] - b[k]).norm() <= radius * F::one().max(a[k].norm()))
}

fn single_linkage<F: Real>(items: &[Complex<F>], radius: F) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..items.len()).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if (items[i] - items[j]).norm() <= radius {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; items.len()];
    for i in 0..items.len() {
        let r = root(&mut label, i);
        if index_of[r] == usize::MAX {
            index_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of[r]].push(i);
    }
    groups
}

/// Merges repeated points, then groups values by single linkage. Each
/// cluster reports the centroid of its values and its number of distinct
/// points.
pub fn cluster_values<F: Real>(points: &[CriticalPoint<F>], radius: F) -> CriticalValueSet<F> {
    let mut distinct: Vec<&CriticalPoint<F>> = Vec::new();
    for p in points {
        if !distinct.iter().any(|q| close(&q.location, &p.location, radius)) {
            distinct.push(p);
        }
    }
    let values: Vec<Complex<F>> = distinct.iter().map(|p| p.value).collect();
    let mut clusters: Vec<ValueCluster<F>> = single_linkage(&values, radius)
        .into_iter()
        .map(|g| {
            let n = real::<F>(g.len() as f64);
            let sum = g.iter().fold(Complex::zero(), |a, &i| a + values[i]);
            ValueCluster {
                value: sum / n,
                count: g.len(),
                residual_max: g.iter().map(|&i| distinct[i].residual).fold(F::zero(), F::max),
            }
        })
        .collect();
    clusters.sort_by(|a, b| {
        (a.value.re, a.value.im).partial_cmp(&(b.value.re, b.value.im)).expect("finite values")
    });
    CriticalValueSet { clusters }
}

/// Values from raw complex numbers, each counted once (no location data).
pub fn cluster_raw_values<F: Real>(values: &[Complex<F>], radius: F) -> CriticalValueSet<F> {
    let points: Vec<CriticalPoint<F>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| CriticalPoint {
            location: [Complex::new(real(i as f64), F::zero()); 3],
            value: *v,
            residual: F::zero(),
        })
        .collect();
    cluster_values(&points, radius)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedMatch {
    pub expected: [f64; 2],
    pub found: Option<[f64; 2]>,
    pub distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub ok: bool,
    pub matches: Vec<ExpectedMatch>,
    pub missing: Vec<[f64; 2]>,
    /// Found values not close to any expectation.
    pub extra: Vec<[f64; 2]>,
}

fn pair<F: Real>(c: Complex<F>) -> [f64; 2] {
    [c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)]
}

/// Every expected value must lie within `tol` of some found cluster; extra
/// clusters are listed but do not fail the check.
pub fn check_expected_values<F: Real>(found: &CriticalValueSet<F>, expected: &[Complex<F>], tol: F) -> ExpectationReport {
    let matches: Vec<ExpectedMatch> = expected
        .iter()
        .map(|e| {
            let best = found
                .clusters
                .iter()
                .map(|c| (c.value, (c.value - e).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite distance"));
            match best {
                Some((v, d)) if d < tol => ExpectedMatch {
                    expected: pair(*e),
                    found: Some(pair(v)),
                    distance: d.to_f64(),
                },
                Some((_, d)) => ExpectedMatch { expected: pair(*e), found: None, distance: d.to_f64() },
                None => ExpectedMatch { expected: pair(*e), found: None, distance: None },
            }
        })
        .collect();
    let extra = found
        .clusters
        .iter()
        .filter(|c| !expected.iter().any(|e| (c.value - e).norm() < tol))
        .map(|c| pair(c.value))
        .collect();
    let missing: Vec<[f64; 2]> = matches.iter().filter(|m| m.found.is_none()).map(|m| m.expected).collect();
    ExpectationReport { ok: missing.is_empty(), matches, missing, extra }
}

/// `|σ(1/λ)|` for the leading symbol `σ(t) = Σ_i c[i][ord] t^i` of `op`.
pub fn leading_symbol_at_inverse<F: Real>(op: &DiffOp<BigRational>, lambda: Complex<F>) -> F {
    let t = lambda.inv();
    op.leading_symbol()
        .iter()
        .rev()
        .fold(Complex::zero(), |acc, c| acc * t + Complex::new(real(c.to_f64().expect("finite")), F::zero()))
        .norm()
}

/// Serialized cluster: `{value: [re, im], count, residual_max}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterDocument {
    pub value: [f64; 2],
    pub count: usize,
    pub residual_max: f64,
}

impl<F: Real> CriticalValueSet<F> {
    pub fn to_document(&self) -> Vec<ClusterDocument> {
        self.clusters
            .iter()
            .map(|c| ClusterDocument {
                value: pair(c.value),
                count: c.count,
                residual_max: c.residual_max.to_f64().unwrap_or(f64::NAN),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn opts(starts: usize) -> CriticalOptions<f64> {
        CriticalOptions { starts, ..Default::default() }
    }

    #[test]
    fn simplex_values_are_fourth_roots_of_256() {
        let f = parse("x+y+z+1/(xyz)").unwrap();
        let pts = find_critical_points(&f, &opts(128));
        assert!(pts.iter().all(|p| p.residual < 1e-10));
        let set = cluster_values(&pts, 1e-6);
        assert_eq!(set.len(), 4);
        for v in [c(4.0, 0.0), c(-4.0, 0.0), c(0.0, 4.0), c(0.0, -4.0)] {
            assert!(set.values().iter().any(|w| (w - v).norm() < 1e-8), "{v}");
        }
        assert!(set.clusters.iter().all(|k| k.count == 1));
        assert!(set.is_conjugation_symmetric(1e-9));
    }

    #[test]
    fn toy_multiplicities() {
        let f = parse("x+1/x+y+1/y+z+1/z").unwrap();
        let set = cluster_values(&find_critical_points(&f, &opts(256)), 1e-6);
        let summary: Vec<(i64, usize)> =
            set.clusters.iter().map(|k| (k.value.re.round() as i64, k.count)).collect();
        assert_eq!(summary, vec![(-6, 1), (-2, 3), (2, 3), (6, 1)]);
    }

    #[test]
    fn determinism() {
        let f = parse("(x+1)^2/(xyz)+y+z").unwrap();
        let a = find_critical_points(&f, &opts(64));
        let b = find_critical_points(&f, &opts(64));
        assert_eq!(a, b);
        let other = find_critical_points(&f, &CriticalOptions { seed: 7, ..opts(64) });
        assert_ne!(a, other);
    }

    #[test]
    fn raw_clustering() {
        let vals = [c(4.0000000001, 0.0), c(3.9999999998, 0.0), c(-4.0, 0.0), c(0.0, 4.0), c(0.0, -4.0)];
        let set = cluster_raw_values(&vals, 1e-6);
        assert_eq!(set.len(), 4);
        assert_eq!(set.clusters.iter().map(|k| k.count).max(), Some(2));
        assert!(cluster_raw_values::<f64>(&[], 1e-6).is_empty());
    }

    #[test]
    fn expectation_report() {
        let set = cluster_raw_values(&[c(4.0, 0.0), c(-4.0, 0.0)], 1e-6);
        let r = check_expected_values(&set, &[c(4.0, 0.0)], 1e-8);
        assert!(r.ok);
        assert_eq!(r.extra, vec![[-4.0, 0.0]]);
        let r = check_expected_values(&set, &[c(5.0, 0.0)], 1e-8);
        assert!(!r.ok);
        assert_eq!(r.missing, vec![[5.0, 0.0]]);
    }

    #[test]
    fn symbol_vanishes_at_inverse_values() {
        let op = DiffOp::new(vec![
            vec![0, 0, 0, 1].into_iter().map(crate::scalar::int).collect(),
            vec![],
            vec![],
            vec![],
            vec![-1536, -2816, -1536, -256].into_iter().map(crate::scalar::int).collect(),
        ]);
        assert!(leading_symbol_at_inverse(&op, c(4.0, 0.0)) < 1e-12);
        assert!(leading_symbol_at_inverse(&op, c(0.0, -4.0)) < 1e-12);
        assert!(leading_symbol_at_inverse(&op, c(3.0, 0.0)) > 1.0);
    }

    #[test]
    fn works_in_single_precision() {
        let f = parse("x+y+z+1/(xyz)").unwrap();
        let o = CriticalOptions::<f32> { starts: 64, tol: 1e-4, cluster_radius: 1e-2, ..Default::default() };
        let set = cluster_values(&find_critical_points(&f, &o), o.cluster_radius);
        assert_eq!(set.len(), 4);
    }
}
