//! Types of `Z/p`-lattices.
//!
//! After localizing at `p` every `Z[Z/p]`-lattice splits into `r` copies of
//! the augmentation-ideal module (rank `p − 1`), `s` copies of the group ring
//! (rank `p`) and `t` trivial summands. The cohomology of the torus quotient
//! only depends on this triple, so the library never represents the modules
//! themselves, only their types.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::AlphaSeries;

/// A prime number, checked at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p as u32))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Trial division; only primes that fit in `u32` are accepted.
pub fn is_prime(n: u64) -> bool {
    if n < 2 || n > u32::MAX as u64 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Binomial coefficient as an exact integer; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The type `(r, s, t)` of a `Z/p`-lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeType {
    pub p: Prime,
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

/// Additive structure of `H*(Z/p; M)` for a lattice `M` of a given type:
/// `Z^{h0_rank}` in degree 0, then `(Z/p)^{odd_dim}` in odd degrees and
/// `(Z/p)^{even_dim}` in positive even degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeCohomology {
    pub h0_rank: usize,
    pub odd_dim: usize,
    pub even_dim: usize,
}

impl TypeCohomology {
    /// `dim_{F_p} H^i` for `i > 0`.
    pub fn dim(&self, i: usize) -> usize {
        match i {
            0 => 0,
            i if i % 2 == 1 => self.odd_dim,
            _ => self.even_dim,
        }
    }
}

impl LatticeType {
    pub fn new(p: u64, r: usize, s: usize, t: usize) -> Result<Self> {
        Ok(LatticeType {
            p: Prime::new(p)?,
            r,
            s,
            t,
        })
    }

    /// Rank `n = r(p − 1) + s·p + t` of the underlying abelian group.
    pub fn rank(&self) -> usize {
        let p = self.p.get() as usize;
        self.r * (p - 1) + self.s * p + self.t
    }

    /// Type of the direct sum; both sides must share the prime.
    pub fn direct_sum(&self, other: &LatticeType) -> Result<LatticeType> {
        if self.p != other.p {
            return Err(Error::InvalidArgument(format!(
                "cannot add lattice types over Z/{} and Z/{}",
                self.p, other.p
            )));
        }
        Ok(LatticeType {
            p: self.p,
            r: self.r + other.r,
            s: self.s + other.s,
            t: self.t + other.t,
        })
    }

    /// `F_L(x) = (1 + αx + ⋯ + (αx)^{p−1})^r (1 + ε_p x^p)^s (1 + x)^t`,
    /// truncated at degree `n`.
    pub fn f_series(&self, n: usize) -> AlphaSeries {
        let p = self.p.get();
        let ideal = AlphaSeries::alpha_geometric(p, n).pow(self.r as u64);
        let projective = AlphaSeries::epsilon_factor(p, n).pow(self.s as u64);
        let trivial = AlphaSeries::one_plus_x(n).pow(self.t as u64);
        &(&ideal * &projective) * &trivial
    }

    /// Type of the exterior power `∧^i L`.
    ///
    /// With `(f_i, g_i)` read off `F_L`, the power has type
    /// `(g_i, h_i − f_i, f_i)` where `h_i = [C(n,i) + (p−1)(f_i − g_i)]/p`.
    pub fn exterior_type(&self, i: usize) -> Result<LatticeType> {
        let n = self.rank();
        if i > n {
            return Err(Error::InvalidArgument(format!(
                "exterior degree {i} exceeds rank {n}"
            )));
        }
        let series = self.f_series(i);
        let (f, g) = (&series.f()[i], &series.g()[i]);
        let h = invariant_rank(self.p, n, i, f, g).map_err(|rem| {
            Error::inconsistent(
                "exterior_type",
                format!("h_{i} is not integral for {self} (remainder {rem}); F_L = {series:?}"),
            )
        })?;
        let s = &h - f;
        if s.is_negative() || f.is_negative() || g.is_negative() {
            return Err(Error::inconsistent(
                "exterior_type",
                format!("negative multiplicity for ∧^{i} of {self}: (g, h−f, f) = ({g}, {s}, {f})"),
            ));
        }
        let to_usize = |v: &BigInt| {
            v.to_usize().ok_or_else(|| {
                Error::inconsistent("exterior_type", format!("multiplicity {v} does not fit"))
            })
        };
        Ok(LatticeType {
            p: self.p,
            r: to_usize(g)?,
            s: to_usize(&s)?,
            t: to_usize(f)?,
        })
    }

    /// `H*(Z/p; L) ≅ Z^s ⊕ (R*)^t ⊕ (S*)^r`.
    pub fn cohomology(&self) -> TypeCohomology {
        TypeCohomology {
            h0_rank: self.s + self.t,
            odd_dim: self.r,
            even_dim: self.t,
        }
    }

    /// Poincaré series of positive-degree group cohomology,
    /// `(r·x + t·x²)/(1 − x²)`.
    pub fn q_series(&self, n: usize) -> AlphaSeries {
        let num = AlphaSeries::monomial(self.r, false, 1, n)
            + AlphaSeries::monomial(self.t, false, 2, n);
        num.div_one_minus_x2()
    }
}

impl fmt::Display for LatticeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}) over Z/{}", self.r, self.s, self.t, self.p)
    }
}

/// `[C(n,k) + (p−1)(f − g)] / p`, or the nonzero remainder if it is not integral.
pub(crate) fn invariant_rank(
    p: Prime,
    n: usize,
    k: usize,
    f: &BigInt,
    g: &BigInt,
) -> std::result::Result<BigInt, BigInt> {
    let p = BigInt::from(p.get());
    let num: BigInt = binomial(n, k) + (&p - 1) * (f - g);
    let (q, rem) = num.div_mod_floor(&p);
    if rem.is_zero() {
        Ok(q)
    } else {
        Err(rem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ty(p: u64, r: usize, s: usize, t: usize) -> LatticeType {
        LatticeType::new(p, r, s, t).unwrap()
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn primes() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert!(matches!(Prime::new(4), Err(Error::NotPrime(4))));
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(0).is_err());
    }

    #[test]
    fn f_series_examples() {
        let s = ty(2, 1, 0, 0).f_series(1);
        assert_eq!((ints(s.f()), ints(s.g())), (vec![1, 0], vec![0, 1]));
        let s = ty(3, 1, 0, 0).f_series(2);
        assert_eq!((ints(s.f()), ints(s.g())), (vec![1, 0, 1], vec![0, 1, 0]));
        let s = ty(2, 0, 1, 0).f_series(2);
        assert_eq!((ints(s.f()), ints(s.g())), (vec![1, 0, 0], vec![0, 0, 1]));
    }

    #[test]
    fn exterior_examples() {
        assert_eq!(ty(2, 2, 0, 0).exterior_type(1).unwrap(), ty(2, 2, 0, 0));
        for l in [ty(2, 3, 1, 2), ty(5, 1, 1, 0), ty(3, 0, 0, 4)] {
            assert_eq!(l.exterior_type(0).unwrap(), ty(l.p.get() as u64, 0, 0, 1));
        }
        assert_eq!(ty(3, 0, 1, 0).exterior_type(3).unwrap(), ty(3, 0, 0, 1));
        assert!(ty(3, 0, 1, 0).exterior_type(4).is_err());
    }

    #[test]
    fn type_cohomology_examples() {
        let c = ty(5, 1, 0, 0).cohomology();
        assert_eq!((c.h0_rank, c.odd_dim, c.even_dim), (0, 1, 0));
        let c = ty(3, 0, 1, 0).cohomology();
        assert_eq!((c.h0_rank, c.odd_dim, c.even_dim), (1, 0, 0));
        let c = ty(2, 0, 0, 1).cohomology();
        assert_eq!((c.h0_rank, c.odd_dim, c.even_dim), (1, 0, 1));
        assert_eq!(c.dim(0), 0);
        assert_eq!(c.dim(4), 1);
    }

    #[test]
    fn q_series_examples() {
        assert_eq!(ints(ty(3, 2, 0, 3).q_series(4).f()), [0, 2, 3, 2, 3]);
        assert!(ty(2, 0, 5, 0).q_series(3).is_zero());
        assert_eq!(ints(ty(2, 1, 0, 0).q_series(3).f()), [0, 1, 0, 1]);
    }

    #[test]
    fn exterior_grid_properties() {
        for p in [2u64, 3, 5, 7] {
            for r in 0..=4 {
                for s in 0..=4 {
                    for t in 0..=4 {
                        let l = ty(p, r, s, t);
                        let n = l.rank();
                        let series = l.f_series(n);
                        let mut total = BigInt::zero();
                        for i in 0..=n {
                            // exterior_type raises if h_i is not integral.
                            let e = l.exterior_type(i).unwrap();
                            assert_eq!(BigInt::from(e.rank()), binomial(n, i), "{l} i={i}");
                            total += e.rank();
                        }
                        assert_eq!(total, BigInt::from(2u32).pow(n as u32));
                        let top = l.exterior_type(n).unwrap();
                        assert_eq!(top.rank(), 1);
                        if series.f()[n] == BigInt::from(1) && series.g()[n].is_zero() {
                            assert_eq!(top, ty(p, 0, 0, 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    proptest! {
        #[test]
        fn f_series_is_multiplicative(
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            a in (0usize..3, 0usize..3, 0usize..4),
            b in (0usize..3, 0usize..3, 0usize..4),
        ) {
            let l = ty(p, a.0, a.1, a.2);
            let m = ty(p, b.0, b.1, b.2);
            let sum = l.direct_sum(&m).unwrap();
            let n = sum.rank() + 1;
            prop_assert_eq!(sum.f_series(n), &l.f_series(n) * &m.f_series(n));
        }
    }
}
