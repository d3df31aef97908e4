//! Lattice type of an explicit integral representation of `Z/p`.
//!
//! For `A` of order `p` with `D = A − I` and `N = I + A + ⋯ + A^{p−1}`,
//! `ker N / im D` is `(Z/p)^r` and `ker D / im N` is `(Z/p)^t`; the rank
//! then fixes `s`.

use crate::cohomology::{quotient_cohomology, CohomologyTable};
use crate::error::{Error, Result};
use crate::lattice::{LatticeType, Prime};
use crate::snf::{cohomology_of_cochain_pair, AbelianGroup, IntMatrix};

/// Result of a successful order check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderCheck {
    /// `A = I`, so the action is trivial and the type is `(0, 0, n)`.
    pub trivial: bool,
}

fn require_square(a: &IntMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

/// `A^p = I`, without raising on failure.
pub fn has_order_dividing(a: &IntMatrix, p: Prime) -> Result<bool> {
    require_square(a)?;
    Ok(a.pow(p.get() as u64)? == IntMatrix::identity(a.rows()))
}

/// Check `A^p = I`; the error carries the offending power.
pub fn verify_order(a: &IntMatrix, p: Prime) -> Result<OrderCheck> {
    require_square(a)?;
    let power = a.pow(p.get() as u64)?;
    let id = IntMatrix::identity(a.rows());
    if power != id {
        return Err(Error::WrongOrder {
            p: p.get(),
            power: power.to_string(),
        });
    }
    Ok(OrderCheck { trivial: *a == id })
}

/// `N = I + A + ⋯ + A^{p−1}`.
pub fn norm_matrix(a: &IntMatrix, p: Prime) -> Result<IntMatrix> {
    require_square(a)?;
    let mut acc = IntMatrix::identity(a.rows());
    let mut power = acc.clone();
    for _ in 1..p.get() {
        power = power.mul(a)?;
        acc = acc.add(&power)?;
    }
    Ok(acc)
}

/// The two periodic cohomology groups `(ker N / im D, ker D / im N)`.
pub fn periodic_groups(a: &IntMatrix, p: Prime) -> Result<(AbelianGroup, AbelianGroup)> {
    let d = a.sub(&IntMatrix::identity(a.rows()))?;
    let n = norm_matrix(a, p)?;
    Ok((cohomology_of_cochain_pair(&d, &n)?, cohomology_of_cochain_pair(&n, &d)?))
}

fn elementary_rank(g: &AbelianGroup, p: Prime, which: &str) -> Result<usize> {
    if g.free_rank != 0 || !g.is_elementary(p.get()) {
        return Err(Error::Classification(format!(
            "{which} is {g}, not an elementary abelian {p}-group"
        )));
    }
    Ok(g.torsion.len())
}

/// Type `(r, s, t)` of the lattice `Z^n` with the generator acting by `A`.
pub fn classify(a: &IntMatrix, p: Prime) -> Result<LatticeType> {
    verify_order(a, p)?;
    let (odd, even) = periodic_groups(a, p)?;
    let r = elementary_rank(&odd, p, "ker N / im (A−I)")?;
    let t = elementary_rank(&even, p, "ker (A−I) / im N")?;
    let n = a.rows();
    let q = p.get() as usize;
    let rest = n
        .checked_sub(r * (q - 1) + t)
        .filter(|rest| rest % q == 0)
        .ok_or_else(|| {
            Error::Classification(format!(
                "rank {n} is not r(p−1) + sp + t with r = {r}, t = {t}, p = {p}"
            ))
        })?;
    Ok(LatticeType {
        p,
        r,
        s: rest / q,
        t,
    })
}

/// `H^k` of the orbifold quotient for the lattice given by `A`.
pub fn cohomology_from_matrix(a: &IntMatrix, p: Prime, max_degree: usize) -> Result<CohomologyTable> {
    quotient_cohomology(&classify(a, p)?, max_degree)
}

/// Companion matrix of `1 + x + ⋯ + x^{p−1}`: the augmentation ideal of `Z[Z/p]`.
pub fn ideal_matrix(p: Prime) -> IntMatrix {
    let n = p.get() as usize - 1;
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        if i + 1 < n {
            m.set(i + 1, i, 1);
        }
        m.set(i, n - 1, -1);
    }
    m
}

/// Cyclic permutation matrix `e_i ↦ e_{i+1}`: the group ring `Z[Z/p]`.
pub fn regular_matrix(p: Prime) -> IntMatrix {
    let n = p.get() as usize;
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m.set((i + 1) % n, i, 1);
    }
    m
}

/// A block-diagonal matrix realizing the given type.
pub fn representative(l: &LatticeType) -> IntMatrix {
    let blocks = std::iter::repeat_n(ideal_matrix(l.p), l.r)
        .chain(std::iter::repeat_n(regular_matrix(l.p), l.s))
        .chain(std::iter::repeat_n(IntMatrix::identity(1), l.t));
    blocks.fold(IntMatrix::zeros(0, 0), |acc, b| acc.block_diag(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snf::rank_over_q;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn ty(p: u64, r: usize, s: usize, t: usize) -> LatticeType {
        LatticeType::new(p, r, s, t).unwrap()
    }

    /// Random unimodular `U` and its inverse built from elementary row operations.
    fn unimodular(n: usize, rng: &mut ChaCha8Rng) -> (IntMatrix, IntMatrix) {
        let mut u = IntMatrix::identity(n);
        let mut v = IntMatrix::identity(n);
        if n == 0 {
            return (u, v);
        }
        if n == 1 {
            if rng.gen_bool(0.5) {
                u.set(0, 0, -1);
                v.set(0, 0, -1);
            }
            return (u, v);
        }
        for _ in 0..3 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j {
                continue;
            }
            let c: i64 = rng.gen_range(-2..=2);
            // U ← E U with E = I + c e_ij; V ← V E⁻¹.
            let mut e = IntMatrix::identity(n);
            e.set(i, j, c);
            let mut e_inv = IntMatrix::identity(n);
            e_inv.set(i, j, -c);
            u = e.mul(&u).unwrap();
            v = v.mul(&e_inv).unwrap();
        }
        (u, v)
    }

    #[test]
    fn order_examples() {
        let minus = IntMatrix::from_i64(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        assert!(has_order_dividing(&minus, prime(2)).unwrap());
        assert!(!verify_order(&minus, prime(2)).unwrap().trivial);
        assert!(has_order_dividing(&regular_matrix(prime(3)), prime(3)).unwrap());
        let shear = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert!(!has_order_dividing(&shear, prime(2)).unwrap());
        assert!(matches!(verify_order(&shear, prime(2)), Err(Error::WrongOrder { p: 2, .. })));
        assert!(verify_order(&IntMatrix::identity(2), prime(5)).unwrap().trivial);
        assert!(matches!(
            verify_order(&IntMatrix::zeros(2, 3), prime(2)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let minus = IntMatrix::from_i64(&[&[-1, 0], &[0, -1]]);
        assert_eq!(classify(&minus, prime(2)).unwrap(), ty(2, 2, 0, 0));
        assert_eq!(classify(&regular_matrix(prime(3)), prime(3)).unwrap(), ty(3, 0, 1, 0));
        let companion = IntMatrix::from_i64(&[&[0, -1], &[1, -1]]);
        assert_eq!(companion, ideal_matrix(prime(3)));
        assert_eq!(classify(&companion, prime(3)).unwrap(), ty(3, 1, 0, 0));
        assert_eq!(classify(&IntMatrix::identity(4), prime(7)).unwrap(), ty(7, 0, 0, 4));
        assert_eq!(classify(&IntMatrix::zeros(0, 0), prime(2)).unwrap(), ty(2, 0, 0, 0));
    }

    #[test]
    fn classify_rejects_wrong_order() {
        let rot = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert!(matches!(classify(&rot, prime(2)), Err(Error::WrongOrder { .. })));
        assert!(matches!(classify(&rot, prime(3)), Err(Error::WrongOrder { .. })));
    }

    #[test]
    fn cohomology_from_matrix_examples() {
        let pairs = |t: &CohomologyTable| -> Vec<(u64, u64)> {
            t.entries
                .iter()
                .map(|g| {
                    (
                        g.free_rank.clone().try_into().unwrap(),
                        g.torsion_rank.clone().try_into().unwrap(),
                    )
                })
                .collect()
        };
        let minus = IntMatrix::from_i64(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        let t = cohomology_from_matrix(&minus, prime(2), 3).unwrap();
        assert_eq!(pairs(&t), [(1, 0), (0, 0), (3, 0), (0, 1)]);
        let t = cohomology_from_matrix(&IntMatrix::identity(2), prime(5), 2).unwrap();
        assert_eq!(pairs(&t), [(1, 0), (2, 0), (1, 0)]);
        let mixed = IntMatrix::from_i64(&[&[-1, 0], &[0, 1]]);
        let t = cohomology_from_matrix(&mixed, prime(2), 2).unwrap();
        assert_eq!(pairs(&t), [(1, 0), (1, 0), (0, 0)]);
    }

    #[test]
    fn representatives_classify_to_their_type() {
        for p in [2u64, 3, 5, 7] {
            for r in 0..3 {
                for s in 0..3 {
                    for t in 0..3 {
                        let l = ty(p, r, s, t);
                        let a = representative(&l);
                        assert_eq!(a.rows(), l.rank());
                        assert_eq!(classify(&a, l.p).unwrap(), l);
                    }
                }
            }
        }
    }

    #[test]
    fn fixed_rank_is_h0_rank() {
        for p in [2u64, 3, 5] {
            for (r, s, t) in [(1, 0, 0), (0, 1, 0), (2, 1, 1), (1, 2, 3)] {
                let l = ty(p, r, s, t);
                let a = representative(&l);
                let d = a.sub(&IntMatrix::identity(a.rows())).unwrap();
                assert_eq!(a.rows() - rank_over_q(&d), l.s + l.t);
            }
        }
    }

    proptest! {
        #[test]
        fn conjugation_invariance(
            p in prop::sample::select(vec![2u64, 3, 5]),
            r in 0usize..3, s in 0usize..2, t in 0usize..3,
            seed in any::<u64>(),
        ) {
            let l = ty(p, r, s, t);
            prop_assume!(l.rank() <= 5);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (u, v) = unimodular(l.rank(), &mut rng);
            prop_assert_eq!(u.mul(&v).unwrap(), IntMatrix::identity(l.rank()));
            let a = u.mul(&representative(&l)).unwrap().mul(&v).unwrap();
            prop_assert_eq!(classify(&a, l.p).unwrap(), l);
        }

        #[test]
        fn block_sums_add(
            p in prop::sample::select(vec![2u64, 3]),
            a in (0usize..3, 0usize..2, 0usize..3),
            b in (0usize..3, 0usize..2, 0usize..3),
            seed in any::<u64>(),
        ) {
            let la = ty(p, a.0, a.1, a.2);
            let lb = ty(p, b.0, b.1, b.2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (u, v) = unimodular(la.rank(), &mut rng);
            let ma = u.mul(&representative(&la)).unwrap().mul(&v).unwrap();
            let sum = ma.block_diag(&representative(&lb));
            prop_assert_eq!(classify(&sum, la.p).unwrap(), la.direct_sum(&lb).unwrap());
        }

        #[test]
        fn rank_identity_and_fixed_rank(
            p in prop::sample::select(vec![2u64, 3]),
            r in 0usize..3, s in 0usize..2, t in 0usize..3,
            seed in any::<u64>(),
        ) {
            let l = ty(p, r, s, t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (u, v) = unimodular(l.rank(), &mut rng);
            let a = u.mul(&representative(&l)).unwrap().mul(&v).unwrap();
            let c = classify(&a, l.p).unwrap();
            let q = p as usize;
            prop_assert_eq!(c.r * (q - 1) + c.s * q + c.t, a.rows());
            let d = a.sub(&IntMatrix::identity(a.rows())).unwrap();
            prop_assert_eq!(a.rows() - rank_over_q(&d), c.s + c.t);
        }
    }
}
