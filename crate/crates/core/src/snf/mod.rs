//! Exact integer linear algebra: Smith normal form and the cohomology of a
//! pair of composable integer matrices.

pub(crate) mod dense;
mod sparse;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use sparse::{rank_mod, rank_rational, SparseMatrix};

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Build from row-major entries; panics if the length is wrong.
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows·cols");
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Build from nested rows; all rows must have the same length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        let entries = rows.iter().flatten().cloned().map(Into::into).collect();
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&rows).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.entries[i * self.cols + j] = v.into();
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &IntMatrix, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<IntMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| op(a, b)).collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn pow(&self, mut e: u64) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn scaled(&self, c: impl Into<BigInt>) -> IntMatrix {
        let c = c.into();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| v * &c).collect(),
        }
    }

    /// Block diagonal matrix with `self` in the top-left corner.
    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Permute rows and columns: entry `(i, j)` moves to `(row_perm[i], col_perm[j])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(row_perm[i], col_perm[j], self.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let rows = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix::from_rows(self.cols, rows)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} {:?}", self.rows, self.cols, self.to_rows())
    }
}

/// Text format: `rows cols` on the first line, then one line per row.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        if self.cols == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty matrix file".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: hline,
                    message: format!("bad dimension {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse {
                line: hline,
                message: "header must be \"rows cols\"".into(),
            });
        };
        let mut entries = Vec::with_capacity(rows * cols);
        let mut seen = 0;
        if cols > 0 {
            for (n, line) in lines.by_ref().take(rows) {
                let before = entries.len();
                for t in line.split_whitespace() {
                    entries.push(t.parse::<BigInt>().map_err(|_| Error::Parse {
                        line: n,
                        message: format!("bad integer {t:?}"),
                    })?);
                }
                if entries.len() - before != cols {
                    return Err(Error::Parse {
                        line: n,
                        message: format!("expected {cols} entries, found {}", entries.len() - before),
                    });
                }
                seen += 1;
            }
            if seen != rows {
                return Err(Error::Parse {
                    line: hline,
                    message: format!("expected {rows} rows, found {seen}"),
                });
            }
        }
        if let Some((n, _)) = lines.next() {
            return Err(Error::Parse {
                line: n,
                message: "trailing data after matrix".into(),
            });
        }
        Ok(IntMatrix::new(rows, cols, entries))
    }
}

/// Nonzero invariant factors (each dividing the next) and their count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
    pub rank: usize,
}

/// Finitely generated abelian group `Z^free_rank ⊕ ⨁ Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Invariant factors `d_i ≥ 2`, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// True if the torsion is `(Z/p)^k` for some `k`.
    pub fn is_elementary(&self, p: u32) -> bool {
        self.torsion.iter().all(|d| *d == BigInt::from(p))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// Smith normal form of a dense matrix.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    smith_normal_form_sparse(&m.to_sparse())
}

/// Smith normal form of a sparse matrix.
///
/// Unit pivots are removed first without densifying; whatever is left
/// goes through the dense algorithm.
pub fn smith_normal_form_sparse(m: &SparseMatrix) -> SmithForm {
    let small = sparse::rows_as(m, |v| v.to_i64().filter(|x| x.unsigned_abs() < 1 << 31));
    let (units, rest) = match small.map(|rows| sparse::unit_reduce::<i64>(m.ncols(), rows)) {
        Some(Ok((units, rest))) => (units, to_big(rest)),
        _ => {
            let rows = sparse::rows_as(m, |v| Some(v.clone())).expect("total conversion");
            sparse::unit_reduce::<BigInt>(m.ncols(), rows).expect("big integers do not overflow")
        }
    };
    let mut divisors = vec![BigInt::one(); units];
    divisors.extend(dense::invariant_factors(compress(rest)));
    SmithForm {
        rank: divisors.len(),
        divisors,
    }
}

fn to_big(rows: Vec<Vec<(usize, i64)>>) -> Vec<Vec<(usize, BigInt)>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, BigInt::from(v))).collect())
        .collect()
}

/// Dense block of the leftover rows restricted to the columns they use.
fn compress(rows: Vec<Vec<(usize, BigInt)>>) -> Vec<Vec<BigInt>> {
    let mut cols: Vec<usize> = rows.iter().flatten().map(|(c, _)| *c).collect();
    cols.sort_unstable();
    cols.dedup();
    rows.into_iter()
        .map(|row| {
            let mut dense = vec![BigInt::zero(); cols.len()];
            for (c, v) in row {
                dense[cols.binary_search(&c).expect("column present")] = v;
            }
            dense
        })
        .collect()
}

/// `ker(d_out) / im(d_in)` for `Z^a --d_in--> Z^m --d_out--> Z^b`
/// (matrices act on column vectors, so `d_in` is `m×a` and `d_out` is `b×m`).
///
/// Since `ker(d_out)` is a direct summand of `Z^m` containing `im(d_in)`, the
/// quotient has free rank `m − rank d_out − rank d_in` and the torsion of
/// `coker(d_in)`.
pub fn cohomology_of_cochain_pair(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<AbelianGroup> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "d_in is {}x{} but d_out is {}x{}",
            d_in.rows(),
            d_in.cols(),
            d_out.rows(),
            d_out.cols()
        )));
    }
    let composite = d_out.mul(d_in)?;
    if !composite.is_zero() {
        return Err(Error::MalformedComplex(format!("d_out·d_in =\n{composite}")));
    }
    Ok(group_from_smith(
        d_in.rows(),
        &smith_normal_form(d_in),
        smith_normal_form(d_out).rank,
    ))
}

/// Sparse variant of [`cohomology_of_cochain_pair`]; the composite is checked too.
pub fn cohomology_of_sparse_pair(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<AbelianGroup> {
    if d_in.nrows() != d_out.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.nrows(),
            d_out.ncols()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::MalformedComplex("d_out·d_in is nonzero".into()));
    }
    Ok(group_from_smith(
        d_in.nrows(),
        &smith_normal_form_sparse(d_in),
        smith_normal_form_sparse(d_out).rank,
    ))
}

/// Group in the middle of a cochain complex from the Smith form of the
/// incoming map and the rank of the outgoing one.
pub fn group_from_smith(dim: usize, incoming: &SmithForm, outgoing_rank: usize) -> AbelianGroup {
    AbelianGroup {
        free_rank: dim - incoming.rank - outgoing_rank,
        torsion: incoming
            .divisors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect(),
    }
}

/// Exact determinant of a square matrix.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(dense::bareiss_determinant(m.to_rows()))
}

/// Rank over `Q`.
pub fn rank_over_q(m: &IntMatrix) -> usize {
    rank_rational(&m.to_sparse())
}

/// `|d|` for a list of divisors multiplied together.
pub fn divisor_product(divisors: &[BigInt]) -> BigInt {
    divisors.iter().fold(BigInt::one(), |acc, d| acc * d.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    /// Cofactor expansion along the first row.
    fn cofactor_det(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * cofactor_det(&minor)
            })
            .sum()
    }

    fn chain_divides(d: &[BigInt]) -> bool {
        d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()) && d.iter().all(|x| x.is_positive())
    }

    #[test]
    fn smith_examples() {
        let s = smith_normal_form(&IntMatrix::from_i64(&[&[2, 0], &[0, 0]]));
        assert_eq!((s.divisors, s.rank), (big(&[2]), 1));
        let s = smith_normal_form(&IntMatrix::from_i64(&[&[-1, -1], &[1, -2]]));
        assert_eq!((s.divisors, s.rank), (big(&[1, 3]), 2));
        let s = smith_normal_form(&IntMatrix::zeros(3, 4));
        assert_eq!((s.divisors, s.rank), (vec![], 0));
    }

    #[test]
    fn smith_without_units() {
        // No unit entries: everything goes through the dense path.
        let m = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(smith_normal_form(&m).divisors, big(&[2, 6, 12]));
        let m = IntMatrix::from_i64(&[&[6, 0], &[0, 4]]);
        assert_eq!(smith_normal_form(&m).divisors, big(&[2, 12]));
    }

    #[test]
    fn smith_large_entries_fall_back() {
        let huge: BigInt = BigInt::from(1u64 << 62) * 3;
        let m = IntMatrix::new(2, 2, vec![huge.clone(), BigInt::one(), BigInt::zero(), huge.clone()]);
        let s = smith_normal_form(&m);
        assert_eq!(s.divisors, vec![BigInt::one(), &huge * &huge]);
    }

    #[test]
    fn cochain_pair_examples() {
        let g = cohomology_of_cochain_pair(&IntMatrix::zeros(2, 0), &IntMatrix::zeros(0, 2)).unwrap();
        assert_eq!(g, AbelianGroup { free_rank: 2, torsion: vec![] });
        let g = cohomology_of_cochain_pair(&IntMatrix::from_i64(&[&[2]]), &IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(g, AbelianGroup { free_rank: 0, torsion: big(&[2]) });
        let a = IntMatrix::from_i64(&[&[-1, 0], &[0, -1]]);
        let d = a.sub(&IntMatrix::identity(2)).unwrap();
        let n = a.add(&IntMatrix::identity(2)).unwrap();
        let g = cohomology_of_cochain_pair(&d, &n).unwrap();
        assert_eq!(g, AbelianGroup { free_rank: 0, torsion: big(&[2, 2]) });
        assert_eq!(g.to_string(), "Z/2 ⊕ Z/2");
    }

    #[test]
    fn cochain_pair_rejects_nonzero_composite() {
        let i = IntMatrix::identity(2);
        assert!(matches!(
            cohomology_of_cochain_pair(&i, &i),
            Err(Error::MalformedComplex(_))
        ));
        assert!(matches!(
            cohomology_of_cochain_pair(&IntMatrix::identity(2), &IntMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn shifted_identity_is_acyclic() {
        // 0 → Z^3 --I--> Z^3 → 0
        let i = IntMatrix::identity(3);
        assert!(cohomology_of_cochain_pair(&IntMatrix::zeros(3, 0), &i).unwrap().is_zero());
        assert!(cohomology_of_cochain_pair(&i, &IntMatrix::zeros(0, 3)).unwrap().is_zero());
    }

    #[test]
    fn text_round_trip() {
        let m = IntMatrix::from_i64(&[&[1, -2, 3], &[0, 40, -5]]);
        let s = m.to_string();
        assert_eq!(s, "2 3\n1 -2 3\n0 40 -5\n");
        assert_eq!(s.parse::<IntMatrix>().unwrap(), m);
        assert_eq!("0 0\n".parse::<IntMatrix>().unwrap(), IntMatrix::zeros(0, 0));
        assert_eq!("3 0\n".parse::<IntMatrix>().unwrap(), IntMatrix::zeros(3, 0));
        assert!("2 2\n1 2\n3\n".parse::<IntMatrix>().is_err());
        assert!("2 2\n1 2\n".parse::<IntMatrix>().is_err());
        assert!("1 1\nx\n".parse::<IntMatrix>().is_err());
    }

    #[test]
    fn rank_over_fields() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(rank_over_q(&m), 2);
        assert_eq!(rank_mod(&m.to_sparse(), 2), 1);
        assert_eq!(rank_mod(&m.to_sparse(), 3), 1);
        assert_eq!(rank_mod(&m.to_sparse(), 5), 2);
        let m = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(rank_over_q(&m), 2);
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
    }

    proptest! {
        #[test]
        fn divisors_multiply_to_determinant(n in 1usize..=6, seed in prop::collection::vec(-5i64..=5, 36)) {
            let rows: Vec<Vec<i64>> = (0..n).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
            let det = cofactor_det(&rows);
            let m = IntMatrix::from_rows(&rows).unwrap();
            let s = smith_normal_form(&m);
            prop_assert!(chain_divides(&s.divisors));
            prop_assert_eq!(determinant(&m).unwrap(), BigInt::from(det));
            if det != 0 {
                prop_assert_eq!(s.rank, n);
                prop_assert_eq!(divisor_product(&s.divisors), BigInt::from(det.abs()));
            } else {
                prop_assert!(s.rank < n);
            }
        }

        #[test]
        fn permutations_preserve_divisors(rows in small_matrix(6), shuffle in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let m = IntMatrix::from_rows(&rows).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(shuffle);
            let mut rp: Vec<usize> = (0..m.rows()).collect();
            let mut cp: Vec<usize> = (0..m.cols()).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let a = smith_normal_form(&m);
            prop_assert!(chain_divides(&a.divisors));
            prop_assert_eq!(&a, &smith_normal_form(&m.permute(&rp, &cp)));
            prop_assert_eq!(&a, &smith_normal_form(&m.transpose()));
            prop_assert_eq!(a.rank, rank_over_q(&m));
        }

        #[test]
        fn sparse_matches_dense(rows in small_matrix(7)) {
            let m = IntMatrix::from_rows(&rows).unwrap();
            let dense = dense::invariant_factors(m.to_rows());
            let mut expected = dense.clone();
            expected.sort();
            prop_assert_eq!(smith_normal_form(&m).divisors, expected);
        }

        #[test]
        fn text_format_round_trips(rows in small_matrix(5), scale in 1i64..1_000_000_007) {
            let scaled: Vec<Vec<BigInt>> = rows.iter()
                .map(|r| r.iter().map(|v| BigInt::from(*v) * scale * scale * scale).collect())
                .collect();
            let m = IntMatrix::from_rows(&scaled).unwrap();
            prop_assert_eq!(m.to_string().parse::<IntMatrix>().unwrap(), m);
        }
    }
}
