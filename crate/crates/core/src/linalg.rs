//! Exact linear algebra: fraction-free rank and rational null spaces.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rat::Rat;

/// Rank of an integer matrix by Bareiss elimination.
pub fn rank_bigint(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            for j in col + 1..cols {
                let v = (&pivot_row[col] * &row[j] - &row[col] * &pivot_row[j]) / &prev;
                row[j] = v;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot_row[col].clone();
        rank += 1;
    }
    rank
}

/// Rank of a small-entry integer matrix. Uses `i128` Bareiss and falls back
/// to [`rank_bigint`] if an intermediate product overflows.
pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    rank_i128(rows).unwrap_or_else(|| {
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        rank_bigint(&big)
    })
}

fn rank_i128(rows: &[Vec<i64>]) -> Option<usize> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| i128::from(v)).collect())
        .collect();
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut rank = 0;
    for col in 0..cols {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pv = pivot_row[col];
        for row in rest.iter_mut() {
            let rc = row[col];
            if rc == 0 {
                if pv != prev {
                    for v in &mut row[col + 1..cols] {
                        *v = pv.checked_mul(*v)? / prev;
                    }
                }
                continue;
            }
            for j in col + 1..cols {
                let lhs = pv.checked_mul(row[j])?;
                let rhs = rc.checked_mul(pivot_row[j])?;
                row[j] = lhs.checked_sub(rhs)? / prev;
            }
            row[col] = 0;
        }
        prev = pv;
        rank += 1;
    }
    Some(rank)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut [Vec<Rat>]) -> Vec<usize> {
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for v in a[r].iter_mut().skip(col) {
            *v *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}` for `A` with `cols` columns, one vector per free
/// column in increasing order. Each vector has a `1` at its free column and
/// zeros at the other free columns.
pub fn kernel_basis(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![Rat::zero(); cols];
            x[free] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -a[r][free].clone();
            }
            x
        })
        .collect()
}

/// Scales so the first nonzero coordinate is `1`.
pub fn normalize_leading(x: &mut [Rat]) {
    if let Some(lead) = x.iter().find(|v| !v.is_zero()).cloned() {
        let inv = lead.recip();
        for v in x.iter_mut() {
            *v *= &inv;
        }
    }
}
