#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toroidal_core::IntMatrix;

/// Truncated series over `Z[α]/(α² − 1)` as `(f, g)` coefficient pairs,
/// kept separate from the library's implementation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair(pub Vec<(BigInt, BigInt)>);

impl Pair {
    pub fn zero(n: usize) -> Self {
        Pair(vec![(BigInt::from(0), BigInt::from(0)); n + 1])
    }

    pub fn term(n: usize, d: usize, f: i64, g: i64) -> Self {
        let mut s = Self::zero(n);
        if d <= n {
            s.0[d] = (BigInt::from(f), BigInt::from(g));
        }
        s
    }

    pub fn one(n: usize) -> Self {
        Self::term(n, 0, 1, 0)
    }

    pub fn add(&self, o: &Pair) -> Pair {
        Pair(
            self.0
                .iter()
                .zip(&o.0)
                .map(|((a, b), (c, d))| (a + c, b + d))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Pair) -> Pair {
        Pair(
            self.0
                .iter()
                .zip(&o.0)
                .map(|((a, b), (c, d))| (a - c, b - d))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Pair) -> Pair {
        let n = self.0.len() - 1;
        let mut out = Self::zero(n);
        for (i, (a, b)) in self.0.iter().enumerate() {
            for (j, (c, d)) in o.0.iter().enumerate().take(n + 1 - i) {
                out.0[i + j].0 += a * c + b * d;
                out.0[i + j].1 += a * d + b * c;
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Pair {
        (0..e).fold(Self::one(self.0.len() - 1), |acc, _| acc.mul(self))
    }

    /// Multiply by `x / (1 − x²)`.
    pub fn times_x_over_one_minus_x2(&self) -> Pair {
        let n = self.0.len() - 1;
        let mut out = Self::zero(n);
        for k in 1..=n {
            out.0[k] = self.0[k - 1].clone();
        }
        for k in 2..=n {
            let prev = out.0[k - 2].clone();
            out.0[k].0 += prev.0;
            out.0[k].1 += prev.1;
        }
        out
    }

    pub fn f(&self) -> Vec<BigInt> {
        self.0.iter().map(|(f, _)| f.clone()).collect()
    }

    pub fn g(&self) -> Vec<BigInt> {
        self.0.iter().map(|(_, g)| g.clone()).collect()
    }
}

/// Number of sequences `(l_1, …, l_r)` with `0 ≤ l_i ≤ p − 1` summing to each `j`,
/// by enumerating all `p^r` sequences.
pub fn brute_force_pr(p: usize, r: usize) -> Vec<u64> {
    let top = r * (p - 1);
    let mut counts = vec![0u64; top + 1];
    let total = p.pow(r as u32);
    for code in 0..total {
        let mut rest = code;
        let mut sum = 0;
        for _ in 0..r {
            sum += rest % p;
            rest /= p;
        }
        counts[sum] += 1;
    }
    counts
}

/// `Φ^r = (1 + αx + ⋯ + (αx)^{p−1})^r` read off the digit-sum counts: the
/// coefficient of `x^j` is `p_r(j) α^j`.
pub fn phi_power(p: usize, r: usize, n: usize) -> Pair {
    let counts = brute_force_pr(p, r);
    let mut s = Pair::zero(n);
    for (j, c) in counts.iter().enumerate().filter(|(j, _)| *j <= n) {
        let c = BigInt::from(*c);
        if j % 2 == 0 {
            s.0[j].0 = c;
        } else {
            s.0[j].1 = c;
        }
    }
    s
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    // Pascal's triangle row, independent of the library's multiplicative formula.
    let mut row = vec![BigInt::from(1)];
    for _ in 0..n {
        let mut next = vec![BigInt::from(1); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row[k].clone()
}

/// `(1 + x)^s` from binomials.
pub fn one_plus_x_pow(s: usize, n: usize) -> Pair {
    let mut out = Pair::zero(n);
    for k in 0..=s.min(n) {
        out.0[k].0 = binomial(s, k);
    }
    out
}

/// `(1 + ε_p x^p)^s` from binomials, with `ε_2 = α` and `ε_p = 1` otherwise.
pub fn epsilon_pow(p: usize, s: usize, n: usize) -> Pair {
    let mut out = Pair::zero(n);
    for k in 0..=s {
        let d = k * p;
        if d > n {
            break;
        }
        let c = binomial(s, k);
        if p == 2 && k % 2 == 1 {
            out.0[d].1 = c;
        } else {
            out.0[d].0 = c;
        }
    }
    out
}

/// Random unimodular `U` with its inverse, from elementary operations.
pub fn unimodular(n: usize, rng: &mut ChaCha8Rng) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);
    if n == 0 {
        return (u, v);
    }
    for _ in 0..4 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let mut e = IntMatrix::identity(n);
        let mut e_inv = IntMatrix::identity(n);
        if i == j {
            e.set(i, i, -1);
            e_inv.set(i, i, -1);
        } else {
            let c: i64 = rng.gen_range(-3..=3);
            e.set(i, j, c);
            e_inv.set(i, j, -c);
        }
        u = e.mul(&u).unwrap();
        v = v.mul(&e_inv).unwrap();
    }
    (u, v)
}

/// `U A U⁻¹` for a random unimodular `U`.
pub fn random_conjugate(a: &IntMatrix, rng: &mut ChaCha8Rng) -> IntMatrix {
    let (u, v) = unimodular(a.rows(), rng);
    u.mul(a).unwrap().mul(&v).unwrap()
}
