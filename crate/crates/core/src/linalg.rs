//! Small dense linear algebra: exact elimination over a field and
//! full-pivoting elimination over `C`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::series::ring::{Rationals, Ring};

/// Rank over a field, by Gaussian elimination. `ring.inv` must succeed on
/// every nonzero element.
pub fn exact_rank<R: Ring>(ring: &R, rows: &[Vec<R::Elem>]) -> usize {
    let mut rows: Vec<Vec<R::Elem>> = rows.to_vec();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&r| !ring.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = ring
            .inv(&rows[rank][col])
            .expect("nonzero element of a field must be invertible");
        let pivot_row: Vec<R::Elem> = rows[rank].iter().map(|a| ring.mul(a, &inv)).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if ring.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (c, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *c = ring.sub(c, &ring.mul(&factor, p));
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Numerical rank with full pivoting: a pivot counts when it exceeds
/// `relative_tol` times the largest entry of the matrix.
pub fn numeric_rank(rows: &[Vec<Complex64>], relative_tol: f64) -> usize {
    let mut a: Vec<Vec<Complex64>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let threshold = relative_tol * scale;
    let mut col_perm: Vec<usize> = (0..ncols).collect();
    let mut rank = 0;
    while rank < nrows.min(ncols) {
        let mut best = (rank, rank, 0.0f64);
        for (r, row) in a.iter().enumerate().skip(rank) {
            for (ci, &c) in col_perm.iter().enumerate().skip(rank) {
                let v = row[c].norm();
                if v > best.2 {
                    best = (r, ci, v);
                }
            }
        }
        if best.2 <= threshold {
            break;
        }
        a.swap(rank, best.0);
        col_perm.swap(rank, best.1);
        let pc = col_perm[rank];
        let pivot = a[rank][pc];
        let pivot_row = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            let factor = row[pc] / pivot;
            if factor.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= factor * p;
            }
        }
        rank += 1;
    }
    rank
}

/// Solves the square system `matrix * x = rhs`, `None` if singular.
pub fn solve_rational(
    matrix: &[Vec<BigRational>],
    rhs: &[BigRational],
) -> Option<Vec<BigRational>> {
    let n = matrix.len();
    let mut a: Vec<Vec<BigRational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Rank of a rational matrix.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    exact_rank(&Rationals, rows)
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn integer_determinant(matrix: &[Vec<i64>]) -> i128 {
    let n = matrix.len();
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}
