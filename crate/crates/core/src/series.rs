//! Truncated power series over `Z[α]/(α² − 1)`.
//!
//! Every element is stored as two integer coefficient arrays: the *f-part*
//! (coefficients of `x^i`) and the *g-part* (coefficients of `α·x^i`).
//! Multiplication follows `α² = 1`, so products of two g-parts land in the
//! f-part.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Truncated series `Σ f_i x^i + α Σ g_i x^i`, tracked for degrees `0..=N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlphaSeries {
    f: Vec<BigInt>,
    g: Vec<BigInt>,
}

impl AlphaSeries {
    /// The zero series with truncation degree `n`.
    pub fn zero(n: usize) -> Self {
        AlphaSeries {
            f: vec![BigInt::zero(); n + 1],
            g: vec![BigInt::zero(); n + 1],
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(1, n)
    }

    /// The constant `c` with truncation degree `n`.
    pub fn constant(c: impl Into<BigInt>, n: usize) -> Self {
        let mut s = Self::zero(n);
        s.f[0] = c.into();
        s
    }

    /// `c·x^d` (or `c·α·x^d` when `alpha` is set). Vanishes when `d > n`.
    pub fn monomial(c: impl Into<BigInt>, alpha: bool, d: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if d <= n {
            if alpha {
                s.g[d] = c.into();
            } else {
                s.f[d] = c.into();
            }
        }
        s
    }

    /// Build from explicit coefficient arrays.
    ///
    /// Panics if the arrays are empty or have different lengths.
    pub fn from_parts(f: Vec<BigInt>, g: Vec<BigInt>) -> Self {
        assert!(!f.is_empty(), "series needs at least the constant term");
        assert_eq!(f.len(), g.len(), "f and g parts must have equal length");
        AlphaSeries { f, g }
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(f: &[i64], g: &[i64]) -> Self {
        Self::from_parts(
            f.iter().map(|&c| BigInt::from(c)).collect(),
            g.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn truncation_degree(&self) -> usize {
        self.f.len() - 1
    }

    /// Coefficients of `x^i`.
    pub fn f(&self) -> &[BigInt] {
        &self.f
    }

    /// Coefficients of `α·x^i`.
    pub fn g(&self) -> &[BigInt] {
        &self.g
    }

    /// Separate the series into its f-part and g-part.
    pub fn split(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        (self.f.clone(), self.g.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().chain(&self.g).all(Zero::is_zero)
    }

    /// Re-truncate to degree `n` (padding with zeros if `n` is larger).
    pub fn truncate(&self, n: usize) -> Self {
        let mut f = self.f.clone();
        let mut g = self.g.clone();
        f.resize(n + 1, BigInt::zero());
        g.resize(n + 1, BigInt::zero());
        AlphaSeries { f, g }
    }

    /// Multiply by `x^k`, dropping whatever falls past the truncation.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.truncation_degree();
        let mut out = Self::zero(n);
        for i in 0..=n.saturating_sub(k) {
            if i + k > n {
                break;
            }
            out.f[i + k] = self.f[i].clone();
            out.g[i + k] = self.g[i].clone();
        }
        out
    }

    /// Multiply every coefficient by an integer.
    pub fn scale(&self, c: &BigInt) -> Self {
        AlphaSeries {
            f: self.f.iter().map(|x| x * c).collect(),
            g: self.g.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `α`, swapping the two parts.
    pub fn times_alpha(&self) -> Self {
        AlphaSeries {
            f: self.g.clone(),
            g: self.f.clone(),
        }
    }

    /// Integer power by repeated squaring; `e = 0` gives the constant 1.
    pub fn pow(&self, mut e: u64) -> Self {
        let n = self.truncation_degree();
        let mut acc = Self::one(n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal division by `1 − x²`, i.e. multiplication by `1 + x² + x⁴ + ⋯`.
    pub fn div_one_minus_x2(&self) -> Self {
        let mut out = self.clone();
        for i in 2..out.f.len() {
            let (lo, hi) = out.f.split_at_mut(i);
            hi[0] += &lo[i - 2];
            let (lo, hi) = out.g.split_at_mut(i);
            hi[0] += &lo[i - 2];
        }
        out
    }

    /// `1 + αx + (αx)² + ⋯ + (αx)^{p−1}`, the polynomial form of
    /// `(1 − (αx)^p)/(1 − αx)`. Even powers of `α` fall in the f-part.
    pub fn alpha_geometric(p: u32, n: usize) -> Self {
        let mut s = Self::zero(n);
        for i in 0..(p as usize).min(n + 1) {
            if i % 2 == 0 {
                s.f[i] = BigInt::one();
            } else {
                s.g[i] = BigInt::one();
            }
        }
        s
    }

    /// `1 + ε_p x^p` with `ε_2 = α` and `ε_p = 1` for odd `p`.
    pub fn epsilon_factor(p: u32, n: usize) -> Self {
        Self::one(n) + Self::monomial(1, p == 2, p as usize, n)
    }

    /// `1 + αx`.
    pub fn one_plus_alpha_x(n: usize) -> Self {
        Self::one(n) + Self::monomial(1, true, 1, n)
    }

    /// `1 + x`.
    pub fn one_plus_x(n: usize) -> Self {
        Self::one(n) + Self::monomial(1, false, 1, n)
    }
}

impl fmt::Debug for AlphaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[BigInt]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "AlphaSeries {{ f: [{}], g: [{}] }}", show(&self.f), show(&self.g))
    }
}

impl fmt::Display for AlphaSeries {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for i in 0..self.f.len() {
            for (c, alpha) in [(&self.f[i], false), (&self.g[i], true)] {
                if c.is_zero() {
                    continue;
                }
                let a = if alpha { "α" } else { "" };
                let term = match (i, alpha) {
                    (0, false) => c.to_string(),
                    (0, true) => format!("{c}α"),
                    (1, _) => format!("{c}{a}x"),
                    _ => format!("{c}{a}x^{i}"),
                };
                terms.push(term);
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(out, "{} + O(x^{})", terms.join(" + "), self.f.len())
    }
}

fn zip_min<'a>(
    a: &'a AlphaSeries,
    b: &'a AlphaSeries,
) -> impl Iterator<Item = ((&'a BigInt, &'a BigInt), (&'a BigInt, &'a BigInt))> {
    a.f.iter().zip(&a.g).zip(b.f.iter().zip(&b.g))
}

impl Add for &AlphaSeries {
    type Output = AlphaSeries;

    fn add(self, rhs: &AlphaSeries) -> AlphaSeries {
        let (f, g) = zip_min(self, rhs)
            .map(|((f1, g1), (f2, g2))| (f1 + f2, g1 + g2))
            .unzip();
        AlphaSeries { f, g }
    }
}

impl Sub for &AlphaSeries {
    type Output = AlphaSeries;

    fn sub(self, rhs: &AlphaSeries) -> AlphaSeries {
        let (f, g) = zip_min(self, rhs)
            .map(|((f1, g1), (f2, g2))| (f1 - f2, g1 - g2))
            .unzip();
        AlphaSeries { f, g }
    }
}

impl Mul for &AlphaSeries {
    type Output = AlphaSeries;

    fn mul(self, rhs: &AlphaSeries) -> AlphaSeries {
        let n = self.truncation_degree().min(rhs.truncation_degree());
        let mut out = AlphaSeries::zero(n);
        for i in 0..=n {
            let (fi, gi) = (&self.f[i], &self.g[i]);
            if fi.is_zero() && gi.is_zero() {
                continue;
            }
            for j in 0..=n - i {
                let (fj, gj) = (&rhs.f[j], &rhs.g[j]);
                if !fj.is_zero() {
                    out.f[i + j] += fi * fj;
                    out.g[i + j] += gi * fj;
                }
                if !gj.is_zero() {
                    out.f[i + j] += gi * gj;
                    out.g[i + j] += fi * gj;
                }
            }
        }
        out
    }
}

impl Neg for &AlphaSeries {
    type Output = AlphaSeries;

    fn neg(self) -> AlphaSeries {
        AlphaSeries {
            f: self.f.iter().map(|c| -c).collect(),
            g: self.g.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for AlphaSeries {
            type Output = AlphaSeries;
            fn $m(self, rhs: AlphaSeries) -> AlphaSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&AlphaSeries> for AlphaSeries {
            type Output = AlphaSeries;
            fn $m(self, rhs: &AlphaSeries) -> AlphaSeries {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for AlphaSeries {
    type Output = AlphaSeries;
    fn neg(self) -> AlphaSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn constants() {
        let one = AlphaSeries::constant(1, 4);
        assert_eq!(ints(one.f()), [1, 0, 0, 0, 0]);
        assert_eq!(ints(one.g()), [0; 5]);
        assert!(AlphaSeries::constant(0, 2).is_zero());
        let c = AlphaSeries::constant(-3, 0);
        assert_eq!(ints(c.f()), [-3]);
        assert_eq!(ints(c.g()), [0]);
    }

    #[test]
    fn alpha_squares_to_one() {
        let a = AlphaSeries::one_plus_alpha_x(2);
        let sq = &a * &a;
        assert_eq!(ints(sq.f()), [1, 0, 1]);
        assert_eq!(ints(sq.g()), [0, 2, 0]);

        let b = AlphaSeries::one(2) - AlphaSeries::monomial(1, true, 1, 2);
        let diff = &a * &b;
        assert_eq!(ints(diff.f()), [1, 0, -1]);
        assert_eq!(ints(diff.g()), [0, 0, 0]);
    }

    #[test]
    fn addition() {
        let s = AlphaSeries::one_plus_x(1) + AlphaSeries::monomial(1, true, 1, 1);
        assert_eq!(ints(s.f()), [1, 1]);
        assert_eq!(ints(s.g()), [0, 1]);
    }

    #[test]
    fn powers() {
        let cube = AlphaSeries::one_plus_alpha_x(3).pow(3);
        // Oracle: three explicit multiplications.
        let a = AlphaSeries::one_plus_alpha_x(3);
        assert_eq!(cube, &(&a * &a) * &a);
        assert_eq!(ints(cube.f()), [1, 0, 3, 0]);
        assert_eq!(ints(cube.g()), [0, 3, 0, 1]);

        assert_eq!(AlphaSeries::one_plus_x(5).pow(0), AlphaSeries::one(5));

        let t = (AlphaSeries::one(6) + AlphaSeries::monomial(1, false, 3, 6)).pow(2);
        assert_eq!(ints(t.f()), [1, 0, 0, 2, 0, 0, 1]);
        assert!(t.g().iter().all(Zero::is_zero));
    }

    #[test]
    fn binomials_do_not_overflow() {
        let big = AlphaSeries::one_plus_x(70).pow(70);
        assert_eq!(big.f()[35].to_string(), "112186277816662845432");
    }

    #[test]
    fn geometric_factor() {
        let s = AlphaSeries::monomial(1, false, 1, 5).div_one_minus_x2();
        assert_eq!(ints(s.f()), [0, 1, 0, 1, 0, 1]);
        assert!(s.g().iter().all(Zero::is_zero));

        let num = AlphaSeries::monomial(2, false, 1, 4) + AlphaSeries::monomial(3, false, 2, 4);
        assert_eq!(ints(num.div_one_minus_x2().f()), [0, 2, 3, 2, 3]);

        let s = AlphaSeries::monomial(-2, true, 2, 4).div_one_minus_x2();
        assert!(s.f().iter().all(Zero::is_zero));
        assert_eq!(ints(s.g()), [0, 0, -2, 0, -2]);
    }

    #[test]
    fn split_projects() {
        let s = AlphaSeries::from_i64(&[1, 0, 1], &[0, 2, 0]);
        let (f, g) = s.split();
        assert_eq!(ints(&f), [1, 0, 1]);
        assert_eq!(ints(&g), [0, 2, 0]);
        let (f, g) = AlphaSeries::zero(3).split();
        assert!(f.iter().chain(&g).all(Zero::is_zero));
        let (f, g) = AlphaSeries::one_plus_alpha_x(2).pow(2).split();
        assert_eq!((ints(&f), ints(&g)), (vec![1, 0, 1], vec![0, 2, 0]));
    }

    #[test]
    fn epsilon_rule() {
        let e2 = AlphaSeries::epsilon_factor(2, 3);
        assert_eq!(ints(e2.f()), [1, 0, 0, 0]);
        assert_eq!(ints(e2.g()), [0, 0, 1, 0]);
        let e3 = AlphaSeries::epsilon_factor(3, 3);
        assert_eq!(ints(e3.f()), [1, 0, 0, 1]);
        assert_eq!(ints(e3.g()), [0, 0, 0, 0]);
    }

    #[test]
    fn cyclotomic_quotient_times_denominator() {
        for p in [2u32, 3, 5, 7] {
            let n = 12;
            let q = AlphaSeries::alpha_geometric(p, n);
            let one_minus = AlphaSeries::one(n) - AlphaSeries::monomial(1, true, 1, n);
            let expected =
                AlphaSeries::one(n) - AlphaSeries::monomial(1, p % 2 == 1, p as usize, n);
            assert_eq!(&q * &one_minus, expected, "p = {p}");
        }
    }

    #[test]
    fn shift_and_display() {
        let s = AlphaSeries::one_plus_alpha_x(3).shift(2);
        assert_eq!(ints(s.f()), [0, 0, 1, 0]);
        assert_eq!(ints(s.g()), [0, 0, 0, 1]);
        assert_eq!(s.to_string(), "1x^2 + 1αx^3 + O(x^4)");
    }

    fn series(n: usize) -> impl Strategy<Value = AlphaSeries> {
        (
            prop::collection::vec(-20i64..20, n + 1),
            prop::collection::vec(-20i64..20, n + 1),
        )
            .prop_map(|(f, g)| AlphaSeries::from_i64(&f, &g))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in series(6), b in series(6), c in series(6)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn geometric_factor_inverts(a in series(8)) {
            let n = 8;
            let one_minus_x2 = AlphaSeries::one(n) - AlphaSeries::monomial(1, false, 2, n);
            let back = &a.div_one_minus_x2() * &one_minus_x2;
            prop_assert_eq!(back.truncate(n - 2), a.truncate(n - 2));
        }
    }
}
