//! Sparse row elimination.
//!
//! Coboundary matrices of simplicial complexes have a handful of `±1`
//! entries per row, so most of the work is unit pivots. Elimination runs on
//! machine integers first and restarts on big integers if anything
//! overflows.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sparse matrix stored by rows; each row is sorted by column with no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    /// Build from rows of `(column, value)` pairs; entries are sorted,
    /// duplicates summed and zeros dropped.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(usize, BigInt)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut row| {
                assert!(row.iter().all(|&(c, _)| c < ncols), "column out of range");
                row.sort_by_key(|&(c, _)| c);
                let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
                for (c, v) in row {
                    match out.last_mut() {
                        Some((lc, lv)) if *lc == c => *lv += v,
                        _ => out.push((c, v)),
                    }
                }
                out.retain(|(_, v)| !v.is_zero());
                out
            })
            .collect::<Vec<_>>();
        SparseMatrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<(usize, BigInt)>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, rhs.nrows, "inner dimensions differ");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: Vec<(usize, BigInt)> = Vec::new();
                for (k, a) in row {
                    acc.extend(rhs.rows[*k].iter().map(|(j, b)| (*j, a * b)));
                }
                acc
            })
            .collect();
        SparseMatrix::from_rows(rhs.ncols, rows)
    }
}

/// Coefficients the elimination can run over.
pub(crate) trait Scalar: Clone + PartialEq + fmt::Debug {
    fn vanishes(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// Inverse of a unit.
    fn unit_inverse(&self) -> Self;
    fn checked_mul(&self, rhs: &Self) -> Option<Self>;
    fn checked_sub(&self, rhs: &Self) -> Option<Self>;
}

/// Integer coefficients, for fraction-free elimination.
pub(crate) trait IntScalar: Scalar {
    fn gcd(&self, rhs: &Self) -> Self;
    fn div_exact(&self, rhs: &Self) -> Self;
    fn magnitude_bits(&self) -> u64;
}

impl Scalar for i64 {
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn unit_inverse(&self) -> Self {
        *self
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        i64::checked_mul(*self, *rhs)
    }
    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        i64::checked_sub(*self, *rhs)
    }
}

impl IntScalar for i64 {
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn magnitude_bits(&self) -> u64 {
        64 - self.unsigned_abs().leading_zeros() as u64
    }
}

impl Scalar for BigInt {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn unit_inverse(&self) -> Self {
        self.clone()
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }
}

impl IntScalar for BigInt {
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn magnitude_bits(&self) -> u64 {
        self.bits()
    }
}

/// Element of `F_q`; the modulus travels with the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct ModQ {
    v: u64,
    q: u64,
}

impl ModQ {
    pub(crate) fn new(v: &BigInt, q: u64) -> Self {
        let r = v.mod_floor(&BigInt::from(q));
        ModQ {
            v: r.to_u64().expect("residue fits"),
            q,
        }
    }
}

impl Scalar for ModQ {
    fn vanishes(&self) -> bool {
        self.v == 0
    }
    fn is_unit(&self) -> bool {
        self.v != 0
    }
    fn unit_inverse(&self) -> Self {
        // Fermat: v^(q−2).
        let (mut base, mut e, mut acc) = (self.v as u128, self.q - 2, 1u128);
        let q = self.q as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        ModQ {
            v: acc as u64,
            q: self.q,
        }
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(ModQ {
            v: ((self.v as u128 * rhs.v as u128) % self.q as u128) as u64,
            q: self.q,
        })
    }
    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        Some(ModQ {
            v: (self.v + self.q - rhs.v) % self.q,
            q: self.q,
        })
    }
}

#[derive(Debug)]
pub(crate) struct Overflow;

type Row<T> = Vec<(usize, T)>;

/// `target − factor · source`, reporting which columns entered or left the support.
fn axpy<T: Scalar>(
    target: &Row<T>,
    factor: &T,
    source: &Row<T>,
    added: &mut Vec<usize>,
    removed: &mut Vec<usize>,
) -> Result<Row<T>, Overflow> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = source.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i].clone());
            i += 1;
        } else {
            let prod = factor.checked_mul(&source[j].1).ok_or(Overflow)?;
            if ci == cj {
                let v = target[i].1.checked_sub(&prod).ok_or(Overflow)?;
                if v.vanishes() {
                    removed.push(ci);
                } else {
                    out.push((ci, v));
                }
                i += 1;
            } else {
                let zero = prod.checked_sub(&prod).ok_or(Overflow)?;
                out.push((cj, zero.checked_sub(&prod).ok_or(Overflow)?));
                added.push(cj);
            }
            j += 1;
        }
    }
    Ok(out)
}

/// Working state shared by the elimination strategies.
struct Eliminator<T> {
    rows: Vec<Option<Row<T>>>,
    col_rows: Vec<BTreeSet<usize>>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
}

impl<T: Scalar> Eliminator<T> {
    fn new(ncols: usize, rows: Vec<Row<T>>) -> Self {
        let mut col_rows = vec![BTreeSet::new(); ncols];
        let mut heap = BinaryHeap::new();
        for (i, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].insert(i);
            }
            if !row.is_empty() {
                heap.push(Reverse((row.len(), i)));
            }
        }
        Eliminator {
            rows: rows.into_iter().map(Some).collect(),
            col_rows,
            heap,
        }
    }

    /// Clear column `col` from every row except `pivot_row`; `combine` gets
    /// the target row, its entry at `col` and the pivot row.
    fn clear_column(
        &mut self,
        pivot_row: usize,
        col: usize,
        combine: impl Fn(&Row<T>, &T, &Row<T>, &mut Vec<usize>, &mut Vec<usize>) -> Result<Row<T>, Overflow>,
    ) -> Result<(), Overflow> {
        let source = self.rows[pivot_row].clone().expect("live pivot row");
        let targets: Vec<usize> = self.col_rows[col]
            .iter()
            .copied()
            .filter(|&j| j != pivot_row)
            .collect();
        for j in targets {
            let target = self.rows[j].take().expect("live target row");
            let a = target
                .binary_search_by_key(&col, |e| e.0)
                .map(|k| target[k].1.clone())
                .expect("column index is consistent");
            let (mut added, mut removed) = (Vec::new(), Vec::new());
            let new_row = combine(&target, &a, &source, &mut added, &mut removed)?;
            for c in removed {
                self.col_rows[c].remove(&j);
            }
            for c in added {
                self.col_rows[c].insert(j);
            }
            if !new_row.is_empty() {
                self.heap.push(Reverse((new_row.len(), j)));
            }
            self.rows[j] = Some(new_row);
        }
        Ok(())
    }

    fn drop_row(&mut self, i: usize) {
        if let Some(row) = self.rows[i].take() {
            for (c, _) in row {
                self.col_rows[c].remove(&i);
            }
        }
    }

    /// Next live row in order of increasing length, skipping stale heap entries.
    fn next_row(&mut self) -> Option<usize> {
        while let Some(Reverse((len, i))) = self.heap.pop() {
            if let Some(row) = &self.rows[i] {
                if row.len() == len && !row.is_empty() {
                    return Some(i);
                }
            }
        }
        None
    }

    fn remaining(self) -> Vec<Row<T>> {
        self.rows
            .into_iter()
            .flatten()
            .filter(|r| !r.is_empty())
            .collect()
    }
}

/// Eliminate with unit pivots only. Returns the number of unit pivots and
/// the rows left over (none of which contain a unit after elimination).
///
/// Removing a unit pivot together with its row and column leaves the Smith
/// form of the rest unchanged apart from one invariant factor `1`.
pub(crate) fn unit_reduce<T: Scalar>(
    ncols: usize,
    rows: Vec<Row<T>>,
) -> Result<(usize, Vec<Row<T>>), Overflow> {
    let mut el = Eliminator::new(ncols, rows);
    let mut pivots = 0;
    while let Some(i) = el.next_row() {
        let row = el.rows[i].as_ref().expect("live row");
        let best = row
            .iter()
            .filter(|(_, v)| v.is_unit())
            .min_by_key(|(c, _)| el.col_rows[*c].len())
            .map(|(c, v)| (*c, v.clone()));
        let Some((col, unit)) = best else {
            continue;
        };
        let inv = unit.unit_inverse();
        el.clear_column(i, col, |target, a, source, added, removed| {
            let factor = a.checked_mul(&inv).ok_or(Overflow)?;
            axpy(target, &factor, source, added, removed)
        })?;
        el.drop_row(i);
        pivots += 1;
    }
    Ok((pivots, el.remaining()))
}

/// Rank over `Q` by fraction-free elimination: each target row is replaced
/// by `(a/g)·row − (b/g)·pivot_row` and then divided by its content.
pub(crate) fn rational_rank<T: IntScalar>(ncols: usize, rows: Vec<Row<T>>) -> Result<usize, Overflow> {
    let mut el = Eliminator::new(ncols, rows);
    let mut rank = 0;
    while let Some(i) = el.next_row() {
        let row = el.rows[i].as_ref().expect("live row");
        let (col, pivot) = row
            .iter()
            .min_by_key(|(c, v)| (!v.is_unit(), v.magnitude_bits(), el.col_rows[*c].len()))
            .map(|(c, v)| (*c, v.clone()))
            .expect("nonempty row");
        el.clear_column(i, col, |target, a, source, added, removed| {
            let g = pivot.gcd(a);
            let scale = pivot.div_exact(&g);
            let factor = a.div_exact(&g);
            let scaled: Row<T> = target
                .iter()
                .map(|(c, v)| Ok((*c, v.checked_mul(&scale).ok_or(Overflow)?)))
                .collect::<Result<_, Overflow>>()?;
            let mut out = axpy(&scaled, &factor, source, added, removed)?;
            let content = out
                .iter()
                .fold(None::<T>, |acc, (_, v)| Some(acc.map_or(v.clone(), |g| g.gcd(v))));
            if let Some(c) = content {
                if !c.is_unit() {
                    for (_, v) in out.iter_mut() {
                        *v = v.div_exact(&c);
                    }
                }
            }
            Ok(out)
        })?;
        el.drop_row(i);
        rank += 1;
    }
    Ok(rank)
}

pub(crate) fn rows_as<T, F: Fn(&BigInt) -> Option<T>>(m: &SparseMatrix, convert: F) -> Option<Vec<Row<T>>> {
    m.rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|(c, v)| convert(v).map(|x| (*c, x)))
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

/// Rank over `Q`.
pub fn rank_rational(m: &SparseMatrix) -> usize {
    if let Some(rows) = rows_as(m, |v| v.to_i64().filter(|x| x.unsigned_abs() < 1 << 31)) {
        if let Ok(r) = rational_rank::<i64>(m.ncols, rows) {
            return r;
        }
    }
    let rows = rows_as(m, |v| Some(v.clone())).expect("BigInt conversion is total");
    rational_rank::<BigInt>(m.ncols, rows).expect("big integers do not overflow")
}

/// Rank over `F_q` for a prime `q`.
pub fn rank_mod(m: &SparseMatrix, q: u64) -> usize {
    let rows: Vec<Row<ModQ>> = m
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|(c, v)| (*c, ModQ::new(v, q)))
                .filter(|(_, v)| !v.vanishes())
                .collect()
        })
        .collect();
    let (rank, rest) = unit_reduce(m.ncols, rows).expect("modular arithmetic does not overflow");
    debug_assert!(rest.is_empty());
    rank
}
