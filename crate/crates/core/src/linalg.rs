//! Exact nullspaces of rational matrices.
//!
//! Rows are scaled to primitive integer vectors and reduced with
//! fraction-free Gauss-Jordan steps `row_i <- p*row_i - a*row_r`, dividing
//! each updated row by its content so entries stay small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::primitive_direction;

/// Reduced row echelon form over the integers: every pivot column is zero
/// outside its pivot row.
#[derive(Clone, Debug)]
pub struct IntegerEchelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    ncols: usize,
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

impl IntegerEchelon {
    pub fn from_rational(rows: &[Vec<BigRational>], ncols: usize) -> Self {
        let int_rows = rows
            .iter()
            .filter_map(|r| {
                assert_eq!(r.len(), ncols, "row length mismatch");
                primitive_direction(r)
            })
            .collect();
        Self::from_integer(int_rows, ncols)
    }

    pub fn from_integer(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Self {
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        for r in rows.iter_mut() {
            assert_eq!(r.len(), ncols, "row length mismatch");
            make_primitive(r);
        }
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            if rank == rows.len() {
                break;
            }
            // smallest nonzero pivot keeps growth down
            let Some(p) = (rank..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by_key(|&i| rows[i][col].bits())
            else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            let pv = pivot_row[col].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == rank || row[col].is_zero() {
                    continue;
                }
                let a = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x * &pv - &a * y;
                }
                make_primitive(row);
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        IntegerEchelon { rows, pivots, ncols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.ncols];
                v[f] = BigRational::one();
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    v[pc] = -BigRational::new(row[f].clone(), row[pc].clone());
                }
                v
            })
            .collect()
    }
}

pub fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    IntegerEchelon::from_rational(rows, ncols).nullspace()
}

pub fn rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    IntegerEchelon::from_rational(rows, ncols).rank()
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Rescales a vector so its entry at `idx` is one (or the first nonzero
/// entry when that one vanishes).
pub fn normalize_at(v: &mut [BigRational], idx: usize) {
    let lead = if !v[idx].is_zero() {
        v[idx].clone()
    } else {
        match v.iter().find(|x| !x.is_zero()) {
            Some(x) => x.clone(),
            None => return,
        }
    };
    for x in v.iter_mut() {
        *x = &*x / &lead;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace_of_singular_matrix() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m, 3), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            assert!(dot(row, &ns[0]).is_zero());
        }
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        let m = q(&[&[2, 1], &[1, 3]]);
        assert!(nullspace(&m, 2).is_empty());
        assert!(nullspace(&[], 2).len() == 2);
    }

    #[test]
    fn rational_entries() {
        let m = vec![vec![rational(1, 2), rational(1, 3), int(-1)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&m[0], v).is_zero());
        }
    }

    #[test]
    fn normalization_falls_back_to_first_nonzero() {
        let mut v = vec![int(0), int(4), int(2)];
        normalize_at(&mut v, 0);
        assert_eq!(v, vec![int(0), int(1), rational(1, 2)]);
        let mut w = vec![int(3), int(6)];
        normalize_at(&mut w, 1);
        assert_eq!(w, vec![rational(1, 2), int(1)]);
    }
}
