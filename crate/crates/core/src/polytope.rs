//! Exact convex hulls in three dimensions, Newton polytopes and their duals,
//! lattice point counts, and Picard ranks of face fans.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{det3, Laurent};
use crate::linalg::IntegerEchelon;
use crate::scalar::{format_rational, primitive_triple, ExactScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("point set spans only a {dimension}-dimensional affine subspace")]
    Degenerate { dimension: usize },
    #[error("origin is not strictly interior to the polytope")]
    OriginNotInterior,
    #[error("fan needs at least 4 rays spanning R^3, got {0}")]
    TooFewRays(usize),
    #[error("cone {0} references a ray that does not exist")]
    InvalidCone(usize),
}

pub type Point<T> = [T; 3];

fn sub<T: ExactScalar>(a: &Point<T>, b: &Point<T>) -> Point<T> {
    [a[0].clone() - b[0].clone(), a[1].clone() - b[1].clone(), a[2].clone() - b[2].clone()]
}

fn cross<T: ExactScalar>(a: &Point<T>, b: &Point<T>) -> Point<T> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn dot<T: ExactScalar>(a: &Point<T>, b: &Point<T>) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

/// `det(b-a, c-a, d-a)`; positive when `d` lies on the side of `(b-a)x(c-a)`.
fn orient<T: ExactScalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>, d: &Point<T>) -> T {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a))
}

fn lift<T: ExactScalar>(n: &[i64; 3]) -> Point<T> {
    n.map(T::from_int)
}

/// Half-space `<normal, x> >= -offset`, with a primitive inward normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet<T> {
    pub normal: [i64; 3],
    pub offset: T,
}

impl<T: ExactScalar> Facet<T> {
    /// `<normal, p> + offset`; zero on the facet, positive inside.
    pub fn slack(&self, p: &Point<T>) -> T {
        dot(&lift(&self.normal), p) + self.offset.clone()
    }
}

/// A full-dimensional convex polytope with exact vertices and facets.
#[derive(Clone, Debug)]
pub struct Polytope<T> {
    vertices: Vec<Point<T>>,
    facets: Vec<Facet<T>>,
    /// Outward-oriented boundary triangulation.
    boundary: Vec<[Point<T>; 3]>,
}

impl<T: ExactScalar> PartialEq for Polytope<T> {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.facets == other.facets
    }
}

/// Integer vertices: the Newton polytope side.
pub type LatticePolytope = Polytope<i64>;
/// Rational vertices: the dual side.
pub type RationalPolytope = Polytope<BigRational>;

/// Incremental beneath-beyond hull; returns outward-oriented triangles.
fn hull_triangles<T: ExactScalar>(pts: &[Point<T>]) -> Result<Vec<[usize; 3]>, PolytopeError> {
    let p0 = 0;
    let Some(p1) = (1..pts.len()).find(|&i| pts[i] != pts[p0]) else {
        return Err(PolytopeError::Degenerate { dimension: 0 });
    };
    let d01 = sub(&pts[p1], &pts[p0]);
    let Some(p2) = (0..pts.len()).find(|&i| cross(&d01, &sub(&pts[i], &pts[p0])).iter().any(|c| !c.is_zero())) else {
        return Err(PolytopeError::Degenerate { dimension: 1 });
    };
    let Some(p3) = (0..pts.len()).find(|&i| !orient(&pts[p0], &pts[p1], &pts[p2], &pts[i]).is_zero()) else {
        return Err(PolytopeError::Degenerate { dimension: 2 });
    };

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let tet = [p0, p1, p2, p3];
    for skip in 0..4 {
        let f: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| tet[k]).collect();
        let (a, b, c) = (f[0], f[1], f[2]);
        if orient(&pts[a], &pts[b], &pts[c], &pts[tet[skip]]).is_positive() {
            faces.push([a, c, b]);
        } else {
            faces.push([a, b, c]);
        }
    }

    for (i, p) in pts.iter().enumerate() {
        if tet.contains(&i) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| orient(&pts[f[0]], &pts[f[1]], &pts[f[2]], p).is_positive())
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges = BTreeSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, v)| **v) {
            for k in 0..3 {
                edges.insert((f[k], f[(k + 1) % 3]));
            }
        }
        let horizon: Vec<(usize, usize)> =
            edges.iter().filter(|(a, b)| !edges.contains(&(*b, *a))).copied().collect();
        faces = faces.into_iter().zip(visible).filter(|(_, v)| !v).map(|(f, _)| f).collect();
        faces.extend(horizon.into_iter().map(|(a, b)| [a, b, i]));
    }
    Ok(faces)
}

impl<T: ExactScalar> Polytope<T> {
    /// Convex hull of a finite point set.
    pub fn from_points(points: &[Point<T>]) -> Result<Self, PolytopeError> {
        let pts: Vec<Point<T>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        if pts.is_empty() {
            return Err(PolytopeError::Degenerate { dimension: 0 });
        }
        let tris = hull_triangles(&pts)?;

        let mut facets = BTreeSet::new();
        for t in &tris {
            let outward = cross(&sub(&pts[t[1]], &pts[t[0]]), &sub(&pts[t[2]], &pts[t[0]]));
            let inward = outward.map(|c| -c);
            let normal = primitive_triple(&inward).expect("nondegenerate triangle");
            let offset = -dot(&lift(&normal), &pts[t[0]]);
            facets.insert(Facet { normal, offset });
        }
        let facets: Vec<Facet<T>> = facets.into_iter().collect();

        let vertices = pts
            .iter()
            .filter(|p| {
                let tight: Vec<[i64; 3]> =
                    facets.iter().filter(|f| f.slack(p).is_zero()).map(|f| f.normal).collect();
                spans_space(&tight)
            })
            .cloned()
            .collect();
        let boundary = tris.iter().map(|t| [pts[t[0]].clone(), pts[t[1]].clone(), pts[t[2]].clone()]).collect();
        Ok(Polytope { vertices, facets, boundary })
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        self.facets.iter().all(|f| !f.slack(p).is_negative())
    }

    pub fn strictly_contains(&self, p: &Point<T>) -> bool {
        self.facets.iter().all(|f| f.slack(p).is_positive())
    }

    pub fn origin_is_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_positive())
    }

    /// Componentwise floor of the minimum and ceiling of the maximum vertex
    /// coordinates of `m * P`.
    fn lattice_box(&self, m: i64) -> ([i64; 3], [i64; 3]) {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        let mq = BigRational::from_integer(BigInt::from(m));
        for v in &self.vertices {
            for k in 0..3 {
                let x = v[k].to_rational() * &mq;
                lo[k] = lo[k].min(x.floor().to_integer().to_i64().expect("coordinate fits i64"));
                hi[k] = hi[k].max(x.ceil().to_integer().to_i64().expect("coordinate fits i64"));
            }
        }
        (lo, hi)
    }

    /// Integer points strictly inside.
    pub fn interior_lattice_points(&self) -> Vec<[i64; 3]> {
        let (lo, hi) = self.lattice_box(1);
        let mut out = Vec::new();
        for a in lo[0]..=hi[0] {
            for b in lo[1]..=hi[1] {
                for c in lo[2]..=hi[2] {
                    if self.strictly_contains(&[a, b, c].map(T::from_int)) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Number of integer points in the dilation `m * P` (1 for `m = 0`).
    pub fn lattice_points_in_dilation(&self, m: u32) -> u64 {
        if m == 0 {
            return 1;
        }
        let m = i64::from(m);
        let (lo, hi) = self.lattice_box(m);
        let mt = T::from_int(m);
        let facets: Vec<(Point<T>, T)> =
            self.facets.iter().map(|f| (lift(&f.normal), f.offset.clone() * mt.clone())).collect();
        (lo[0]..=hi[0])
            .into_par_iter()
            .map(|a| {
                let mut count = 0u64;
                for b in lo[1]..=hi[1] {
                    for c in lo[2]..=hi[2] {
                        let p = [a, b, c].map(T::from_int);
                        if facets.iter().all(|(n, off)| !(dot(n, &p) + off.clone()).is_negative()) {
                            count += 1;
                        }
                    }
                }
                count
            })
            .sum()
    }

    /// Euclidean volume: signed tetrahedra from a fixed apex over the
    /// outward boundary triangulation.
    pub fn normalized_volume(&self) -> BigRational {
        let apex = &self.vertices[0];
        let six_vol = self.boundary.iter().fold(T::zero(), |acc, [a, b, c]| acc - orient(a, b, c, apex));
        six_vol.to_rational() / BigRational::from_integer(BigInt::from(6))
    }

    /// Polar dual `{p : <p, x> >= -1 for all x in P}`.
    pub fn dual(&self) -> Result<RationalPolytope, PolytopeError> {
        if !self.origin_is_interior() {
            return Err(PolytopeError::OriginNotInterior);
        }
        let pts: Vec<Point<BigRational>> = self
            .facets
            .iter()
            .map(|f| {
                let off = f.offset.to_rational();
                f.normal.map(|c| BigRational::from_integer(BigInt::from(c)) / &off)
            })
            .collect();
        RationalPolytope::from_points(&pts)
    }

    /// Vertices converted to exact rationals.
    pub fn rational_vertices(&self) -> Vec<Point<BigRational>> {
        self.vertices.iter().map(|v| v.clone().map(|c| c.to_rational())).collect()
    }
}

fn spans_space(normals: &[[i64; 3]]) -> bool {
    let n = normals.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if det3(&[normals[i], normals[j], normals[k]]) != 0 {
                    return true;
                }
            }
        }
    }
    false
}

impl RationalPolytope {
    /// Dual facets predicted from the primal vertices: `<v, p> >= -1`
    /// rescaled to a primitive normal.
    pub fn facets_from_dual_vertices(vertices: &[[i64; 3]]) -> Vec<Facet<BigRational>> {
        let mut out: Vec<Facet<BigRational>> = vertices
            .iter()
            .map(|v| {
                let normal = primitive_triple(v).expect("nonzero vertex");
                let g = v.iter().zip(&normal).find(|(_, n)| **n != 0).map(|(a, n)| a / n).expect("nonzero");
                Facet { normal, offset: BigRational::new(BigInt::one(), BigInt::from(g)) }
            })
            .collect();
        out.sort();
        out
    }
}

/// Newton polytope of `f`: the hull of its exponent vectors.
pub fn newton_polytope<T: crate::scalar::Scalar>(f: &Laurent<T>) -> Result<LatticePolytope, PolytopeError> {
    let pts: Vec<[i64; 3]> = f.support().into_iter().map(|e| e.to_array()).collect();
    LatticePolytope::from_points(&pts)
}

/// Exactly one interior lattice point, the origin.
pub fn is_canonical<T: crate::scalar::Scalar>(f: &Laurent<T>) -> Result<bool, PolytopeError> {
    Ok(newton_polytope(f)?.interior_lattice_points() == vec![[0, 0, 0]])
}

/// Predicted count `m(m+1)(2m+1)/12 * degree + 2m + 1`.
pub fn toric_formula(degree: i64, m: u32) -> BigRational {
    let m = BigInt::from(m);
    let lead = BigRational::new(&m * (&m + 1) * (BigInt::from(2) * &m + 1), BigInt::from(12));
    lead * BigRational::from_integer(BigInt::from(degree)) + BigRational::from_integer(BigInt::from(2) * m + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricRow {
    pub m: u32,
    pub count: u64,
    pub expected: String,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricReport {
    pub degree: i64,
    pub holds: bool,
    pub rows: Vec<ToricRow>,
}

/// Compares `E(m)` of the dual Newton polytope against the toric formula for
/// `1 <= m <= m_max`.
pub fn check_toric_condition<T: crate::scalar::Scalar>(
    f: &Laurent<T>,
    degree: i64,
    m_max: u32,
) -> Result<ToricReport, PolytopeError> {
    let dual = newton_polytope(f)?.dual()?;
    Ok(toric_report(&dual, degree, m_max))
}

pub fn toric_report(dual: &RationalPolytope, degree: i64, m_max: u32) -> ToricReport {
    let rows: Vec<ToricRow> = (1..=m_max)
        .map(|m| {
            let count = dual.lattice_points_in_dilation(m);
            let expected = toric_formula(degree, m);
            let matches = BigRational::from_integer(BigInt::from(count)) == expected;
            ToricRow { m, count, expected: format_rational(&expected), matches }
        })
        .collect();
    ToricReport { degree, holds: rows.iter().all(|r| r.matches), rows }
}

/// A complete fan given by rays and maximal cones (lists of ray indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<[i64; 3]>,
    cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn new(rays: Vec<[i64; 3]>, cones: Vec<Vec<usize>>) -> Result<Self, PolytopeError> {
        if rays.len() < 4 || !spans_space(&rays) {
            return Err(PolytopeError::TooFewRays(rays.len()));
        }
        if let Some(i) = cones.iter().position(|c| c.iter().any(|&r| r >= rays.len())) {
            return Err(PolytopeError::InvalidCone(i));
        }
        let rays = rays.iter().map(|r| primitive_triple(r).expect("nonzero ray")).collect();
        Ok(Fan { rays, cones })
    }

    /// Fan over the faces of a polytope containing the origin in its interior.
    pub fn from_polytope(p: &LatticePolytope) -> Result<Self, PolytopeError> {
        if !p.origin_is_interior() {
            return Err(PolytopeError::OriginNotInterior);
        }
        let rays = p.vertices().to_vec();
        let cones = p
            .facets()
            .iter()
            .map(|f| (0..rays.len()).filter(|&i| f.slack(&rays[i]) == 0).collect())
            .collect();
        Fan::new(rays, cones)
    }

    pub fn rays(&self) -> &[[i64; 3]] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }
}

/// Rank of the group of piecewise-linear functions on the fan modulo global
/// linear functions.
///
/// One linear functional per maximal cone; neighbouring cones sharing a
/// two-dimensional wall must agree on the rays of that wall.
pub fn picard_rank(fan: &Fan) -> usize {
    let nc = fan.cones.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let sets: Vec<BTreeSet<usize>> = fan.cones.iter().map(|c| c.iter().copied().collect()).collect();
    for i in 0..nc {
        for j in i + 1..nc {
            let shared: Vec<usize> = sets[i].intersection(&sets[j]).copied().collect();
            let dirs: Vec<[i64; 3]> = shared.iter().map(|&r| fan.rays[r]).collect();
            if !spans_plane(&dirs) {
                continue;
            }
            for r in dirs {
                let mut row = vec![BigInt::zero(); 3 * nc];
                for k in 0..3 {
                    row[3 * i + k] = BigInt::from(r[k]);
                    row[3 * j + k] = BigInt::from(-r[k]);
                }
                rows.push(row);
            }
        }
    }
    let rank = IntegerEchelon::from_integer(rows, 3 * nc).rank();
    3 * nc - rank - 3
}

fn spans_plane(v: &[[i64; 3]]) -> bool {
    v.iter().enumerate().any(|(i, a)| {
        v[i + 1..].iter().any(|b| {
            let c = cross(a, b);
            c.iter().any(|x| *x != 0)
        })
    })
}

/// Upper bound for the Picard rank: number of rays minus 3.
pub fn class_group_rank(fan: &Fan) -> Result<usize, PolytopeError> {
    if fan.rays.len() < 4 {
        return Err(PolytopeError::TooFewRays(fan.rays.len()));
    }
    Ok(fan.rays.len() - 3)
}

/// Polytope summary for one Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeReport {
    pub vertices: Vec<[i64; 3]>,
    pub facets: Vec<([i64; 3], i64)>,
    pub interior_points: Vec<[i64; 3]>,
    pub volume: String,
    /// `3! * volume`, the volume in units of the standard simplex.
    pub volume_units: String,
    pub dual_vertices: Vec<[String; 3]>,
    pub dual_volume: String,
    pub dual_volume_units: String,
    pub canonical: bool,
    pub toric: Option<ToricReport>,
    pub picard_rank: Option<usize>,
    pub class_group_rank: Option<usize>,
}

/// Builds the report; dual-side fields are empty when the origin is not
/// interior.
pub fn polytope_report<T: crate::scalar::Scalar>(
    f: &Laurent<T>,
    degree: i64,
    m_max: u32,
) -> Result<PolytopeReport, PolytopeError> {
    let p = newton_polytope(f)?;
    let interior = p.interior_lattice_points();
    let dual = p.dual().ok();
    let fan = Fan::from_polytope(&p).ok();
    Ok(PolytopeReport {
        vertices: p.vertices().to_vec(),
        facets: p.facets().iter().map(|f| (f.normal, f.offset)).collect(),
        canonical: interior == vec![[0, 0, 0]],
        interior_points: interior,
        volume: format_rational(&p.normalized_volume()),
        volume_units: format_rational(&(p.normalized_volume() * six())),
        dual_vertices: dual
            .as_ref()
            .map(|d| d.vertices().iter().map(|v| v.clone().map(|c| format_rational(&c))).collect())
            .unwrap_or_default(),
        dual_volume: dual.as_ref().map(|d| format_rational(&d.normalized_volume())).unwrap_or_default(),
        dual_volume_units: dual.as_ref().map(|d| format_rational(&(d.normalized_volume() * six()))).unwrap_or_default(),
        toric: dual.as_ref().map(|d| toric_report(d, degree, m_max)),
        picard_rank: fan.as_ref().map(picard_rank),
        class_group_rank: fan.as_ref().and_then(|f| class_group_rank(f).ok()),
    })
}

fn six() -> BigRational {
    BigRational::from_integer(BigInt::from(6))
}

/// Vertex sets compared as exact rationals, order-independent.
pub fn same_vertex_set(a: &[Point<BigRational>], b: &[Point<BigRational>]) -> bool {
    let sa: BTreeSet<_> = a.iter().cloned().collect();
    let sb: BTreeSet<_> = b.iter().cloned().collect();
    sa == sb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::scalar::{int, rational};

    fn simplex() -> LatticePolytope {
        LatticePolytope::from_points(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]).unwrap()
    }

    fn cube() -> LatticePolytope {
        newton_polytope(&parse("(x+1/x)(y+1/y)(z+1/z)").unwrap()).unwrap()
    }

    #[test]
    fn simplex_hull() {
        let p = newton_polytope(&parse("x+y+z+1/(xyz)").unwrap()).unwrap();
        assert_eq!(p, simplex());
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
        assert!(p.facets().iter().all(|f| f.offset == 1));
    }

    #[test]
    fn degenerate_supports() {
        assert_eq!(
            newton_polytope(&parse("x+1/x").unwrap()).unwrap_err(),
            PolytopeError::Degenerate { dimension: 1 }
        );
        assert_eq!(
            newton_polytope(&parse("x+y+1").unwrap()).unwrap_err(),
            PolytopeError::Degenerate { dimension: 2 }
        );
        assert_eq!(newton_polytope(&parse("5").unwrap()).unwrap_err(), PolytopeError::Degenerate { dimension: 0 });
    }

    #[test]
    fn coplanar_and_interior_points_are_not_vertices() {
        let mut pts = vec![];
        for a in -1..=1 {
            for b in -1..=1 {
                for c in -1..=1 {
                    pts.push([a, b, c]);
                }
            }
        }
        let p = LatticePolytope::from_points(&pts).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.facets().len(), 6);
        assert_eq!(p, cube());
    }

    #[test]
    fn interior_points() {
        assert_eq!(simplex().interior_lattice_points(), vec![[0, 0, 0]]);
        assert_eq!(cube().interior_lattice_points(), vec![[0, 0, 0]]);
        let unit = LatticePolytope::from_points(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert!(unit.interior_lattice_points().is_empty());
    }

    #[test]
    fn duals() {
        let d = simplex().dual().unwrap();
        let expected: Vec<Point<BigRational>> =
            [[-1, -1, -1], [3, -1, -1], [-1, 3, -1], [-1, -1, 3]].iter().map(|v| v.map(int)).collect();
        assert!(same_vertex_set(d.vertices(), &expected));
        assert!(same_vertex_set(d.dual().unwrap().vertices(), &simplex().rational_vertices()));

        let oct = cube().dual().unwrap();
        let e: Vec<Point<BigRational>> = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]
            .iter()
            .map(|v| v.map(int))
            .collect();
        assert!(same_vertex_set(oct.vertices(), &e));

        let unit = LatticePolytope::from_points(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(unit.dual().unwrap_err(), PolytopeError::OriginNotInterior);
    }

    #[test]
    fn dual_facets_match_primal_vertices() {
        let p = newton_polytope(&parse("(x+1)^3/(xyz)+y/z+2/z+2x/z+z^2/y").unwrap()).unwrap();
        let d = p.dual().unwrap();
        assert_eq!(d.facets().to_vec(), RationalPolytope::facets_from_dual_vertices(p.vertices()));
    }

    #[test]
    fn lattice_counts() {
        let d = simplex().dual().unwrap();
        assert_eq!(d.lattice_points_in_dilation(0), 1);
        assert_eq!(d.lattice_points_in_dilation(1), 35);
        assert_eq!(cube().lattice_points_in_dilation(1), 27);
        assert_eq!(cube().lattice_points_in_dilation(2), 125);
    }

    #[test]
    fn volumes() {
        assert_eq!(simplex().normalized_volume(), rational(4, 6));
        assert_eq!(simplex().dual().unwrap().normalized_volume(), rational(64, 6));
        assert_eq!(cube().normalized_volume(), int(8));
        let unit = LatticePolytope::from_points(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(unit.normalized_volume(), rational(1, 6));
    }

    #[test]
    fn canonical_flags() {
        assert!(is_canonical(&parse("x+y+z+1/(xyz)").unwrap()).unwrap());
        // twice the simplex has interior points besides the origin
        assert!(!is_canonical(&parse("x^2+y^2+z^2+1/(x^2y^2z^2)").unwrap()).unwrap());
    }

    #[test]
    fn toric_formula_values() {
        assert_eq!(toric_formula(64, 1), int(35));
        assert_eq!(toric_formula(54, 1), int(30));
        assert_eq!(toric_formula(32, 1), int(19));
        assert_eq!(toric_formula(16, 1), int(11));
        assert_eq!(toric_formula(18, 1), int(12));
        assert_eq!(toric_formula(7, 0), int(1));
    }

    #[test]
    fn toric_checks() {
        let r = check_toric_condition(&parse("x+y+z+1/(xyz)").unwrap(), 64, 4).unwrap();
        assert!(r.holds, "{r:?}");
        let r = check_toric_condition(&parse("(x+1/x)(y+1/y)(z+1/z)").unwrap(), 32, 3).unwrap();
        assert!(!r.holds);
        assert_eq!(r.rows[0].count, 7);
    }

    #[test]
    fn picard_ranks() {
        let p3 = Fan::from_polytope(&simplex()).unwrap();
        assert_eq!(picard_rank(&p3), 1);
        assert_eq!(class_group_rank(&p3).unwrap(), 1);

        let rays = vec![[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];
        let mut cones = vec![];
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    cones.push(vec![a, b, c]);
                }
            }
        }
        let octants = Fan::new(rays, cones).unwrap();
        assert_eq!(picard_rank(&octants), 3);
        assert_eq!(class_group_rank(&octants).unwrap(), 3);

        let cube_fan = Fan::from_polytope(&cube()).unwrap();
        assert_eq!(picard_rank(&cube_fan), 1);
        assert_eq!(class_group_rank(&cube_fan).unwrap(), 5);
    }

    #[test]
    fn fan_validation() {
        assert_eq!(Fan::new(vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]], vec![]).unwrap_err(), PolytopeError::TooFewRays(3));
        let rays = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]];
        assert_eq!(Fan::new(rays, vec![vec![0, 9]]).unwrap_err(), PolytopeError::InvalidCone(0));
    }
}
