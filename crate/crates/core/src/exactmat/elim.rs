//! Row reduction on rectangular systems. Pivots are always taken as the
//! first nonzero entry in column order, so every result is reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::field::{FieldSpec, Scalar};

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in
/// place and returns the pivot columns.
pub(crate) fn rref(spec: &FieldSpec, rows: &mut Vec<Vec<Scalar>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = spec.inv(&rows[r][c]).expect("pivot is nonzero");
        for v in rows[r].iter_mut().skip(c) {
            *v = spec.mul(v, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in c..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] = spec.sub(&row[j], &spec.mul(&factor, &pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the null space, one vector per free column in ascending order.
pub(crate) fn kernel(spec: &FieldSpec, rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut work = rows.to_vec();
    let pivots = rref(spec, &mut work, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![spec.zero(); ncols];
            v[free] = spec.one();
            for (row, &p) in work.iter().zip(&pivots) {
                v[p] = spec.neg(&row[free]);
            }
            v
        })
        .collect()
}

/// Rank by forward Gaussian elimination over a finite field.
pub(crate) fn rank_gaussian(spec: &FieldSpec, mut rows: Vec<Vec<Scalar>>, ncols: usize) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = spec.inv(&rows[r][c]).expect("pivot is nonzero");
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = spec.mul(&row[c], &inv);
            for j in c..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] = spec.sub(&row[j], &spec.mul(&factor, &pivot_row[j]));
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub(crate) fn rank_bareiss(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> usize {
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c..ncols {
                // Exact by Sylvester's identity.
                let num = &pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = num.div_floor(&prev);
            }
        }
        prev = pivot;
        r += 1;
    }
    r
}
