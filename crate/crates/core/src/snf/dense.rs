use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonzero invariant factors of a dense matrix, smallest first.
///
/// Pivots on the entry of least absolute value in the active block, clears
/// its row and column by Euclidean steps, and folds in any row that the pivot
/// does not divide until the divisibility chain holds.
pub(crate) fn invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_abs(&a, k) else {
                return out;
            };
            a.swap(k, pi);
            if pj != k {
                for row in a.iter_mut().skip(k) {
                    row.swap(k, pj);
                }
            }

            let mut clean = true;
            for i in k + 1..rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = &a[i][k] / &a[k][k];
                let (top, rest) = a.split_at_mut(i);
                let pivot_row = &top[k];
                for (x, y) in rest[0][k..].iter_mut().zip(&pivot_row[k..]) {
                    *x -= &q * y;
                }
                if !a[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = &a[k][j] / &a[k][k];
                for row in a.iter_mut().skip(k) {
                    let y = row[k].clone();
                    row[j] -= &q * y;
                }
                if !a[k][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            let pivot = a[k][k].clone();
            let offender = (k + 1..rows).find(|&i| {
                a[i][k + 1..]
                    .iter()
                    .any(|x| !x.is_zero() && !x.is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in top[k][k..].iter_mut().zip(&rest[0][k..]) {
                        *x += y;
                    }
                }
                None => {
                    out.push(pivot.abs());
                    break;
                }
            }
        }
    }
    out
}

fn min_abs(a: &[Vec<BigInt>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, &BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, x) in row.iter().enumerate().skip(k) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(_, _, b)| x.abs() < b.abs()) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub(crate) fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
