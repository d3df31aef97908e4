//! Brute-force checks of the formula pipeline.
//!
//! The rational oracle counts invariants of exterior powers directly. The
//! topological oracle triangulates the torus with its action, makes the
//! action regular by subdivision, and computes the cohomology of the orbit
//! complex from scratch.

mod complex;
mod equivariant;
mod homology;
mod torus;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

pub use complex::{format_complex, parse_complex, SimplicialAction, SimplicialComplex};
pub use equivariant::{
    barycentric_subdivide, fixed_subcomplex, is_regular, quotient_complex, quotient_obstruction,
    regularize, Regularized,
};
pub use homology::{coboundaries, field_cohomology, integral_cohomology, DEFAULT_SIMPLEX_LIMIT};
pub use torus::{build_equivariant_torus, product_case, EquivariantTorus, FactorKind, TorusCase};

use crate::cohomology::{fixed_point_set, quotient_cohomology, Group};
use crate::error::{Error, Result};
use crate::lattice::binomial;
use crate::snf::{dense, rank_over_q, AbelianGroup, IntMatrix};

/// `k`-th compound matrix: entry `(I, J)` is the minor on rows `I` and
/// columns `J`, with `k`-subsets in lexicographic order.
pub fn compound_matrix(a: &IntMatrix, k: usize) -> IntMatrix {
    let rows = subsets(a.rows(), k);
    let cols = subsets(a.cols(), k);
    let mut out = IntMatrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            let minor: Vec<Vec<BigInt>> = r
                .iter()
                .map(|&x| c.iter().map(|&y| a.get(x, y).clone()).collect())
                .collect();
            out.set(i, j, dense::bareiss_determinant(minor));
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `dim_Q` of the vectors fixed by `∧^k(Aᵀ)`.
pub fn rational_alpha_oracle(a: &IntMatrix, k: usize) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let c = compound_matrix(&a.transpose(), k);
    let d = c.sub(&IntMatrix::identity(c.rows()))?;
    Ok(c.rows() - rank_over_q(&d))
}

/// How the quotient's cohomology is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact integral groups by Smith normal form.
    Integral,
    /// Betti numbers over `Q` and `F_p`.
    Field,
}

/// What the oracle saw in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observed {
    Integral(AbelianGroup),
    Field { rational: usize, mod_p: usize },
}

#[derive(Clone, Debug)]
pub struct DegreeCheck {
    pub k: usize,
    /// `Z^{α_k} ⊕ (Z/p)^{β_k}` from the formulas.
    pub expected: Group,
    /// `α_k + β_k + β_{k+1}`, the predicted `F_p` Betti number.
    pub expected_mod_p: BigUint,
    pub observed: Observed,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct FixedCheck {
    pub components: usize,
    pub expected_components: BigUint,
    /// Rational Betti numbers of each component.
    pub component_betti: Vec<Vec<usize>>,
    /// Betti numbers of `(S¹)^{s+t}`.
    pub expected_betti: Vec<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub case: TorusCase,
    pub torus: EquivariantTorus,
    pub subdivisions: usize,
    pub regular_simplices: usize,
    pub quotient_simplices: usize,
    pub mode: Mode,
    /// Integral mode was requested but the quotient exceeded the size limit.
    pub fell_back: bool,
    pub degrees: Vec<DegreeCheck>,
    pub fixed: FixedCheck,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.fixed.pass && self.degrees.iter().all(|d| d.pass)
    }
}

/// Build, regularize and quotient a case, compute its cohomology in the
/// requested mode, and compare with the formula pipeline.
pub fn verify_case(case: &TorusCase, mode: Mode, limit: usize) -> Result<OracleReport> {
    let torus = build_equivariant_torus(case)?;
    let l = torus.lattice_type;
    let n = l.rank();
    let regular = regularize(&torus.complex, &torus.action, 2)?;
    let quotient = quotient_complex(&regular.complex, &regular.action)?;
    let quotient_simplices = quotient.simplex_count();
    let expected = quotient_cohomology(&l, n + 1)?;
    let p = l.p.get() as u64;

    let (used, fell_back) = match mode {
        Mode::Integral if quotient_simplices > limit => (Mode::Field, true),
        m => (m, false),
    };
    let observed: Vec<Observed> = match used {
        Mode::Integral => integral_cohomology(&quotient, limit)?
            .into_iter()
            .map(Observed::Integral)
            .collect(),
        Mode::Field => {
            let q = field_cohomology(&quotient, 0)?;
            let fp = field_cohomology(&quotient, p)?;
            q.into_iter()
                .zip(fp)
                .map(|(rational, mod_p)| Observed::Field { rational, mod_p })
                .collect()
        }
    };

    let top = observed.len().max(n + 1);
    let degrees = (0..top)
        .map(|k| {
            let zero = Group::new(0u32, 0u32);
            let e = expected.entries.get(k).cloned().unwrap_or_else(|| zero.clone());
            let next_beta = expected
                .entries
                .get(k + 1)
                .map_or(BigUint::default(), |g| g.torsion_rank.clone());
            let expected_mod_p = &e.free_rank + &e.torsion_rank + next_beta;
            let obs = observed.get(k).cloned().unwrap_or(match used {
                Mode::Integral => Observed::Integral(AbelianGroup::default()),
                Mode::Field => Observed::Field { rational: 0, mod_p: 0 },
            });
            let pass = match &obs {
                Observed::Integral(g) => {
                    BigUint::from(g.free_rank) == e.free_rank
                        && BigUint::from(g.torsion.len()) == e.torsion_rank
                        && g.is_elementary(l.p.get())
                }
                Observed::Field { rational, mod_p } => {
                    BigUint::from(*rational) == e.free_rank && BigUint::from(*mod_p) == expected_mod_p
                }
            };
            DegreeCheck {
                k,
                expected: e,
                expected_mod_p,
                observed: obs,
                pass,
            }
        })
        .collect();

    let fixed = check_fixed_points(&regular, &l)?;
    Ok(OracleReport {
        case: case.clone(),
        subdivisions: regular.subdivisions,
        regular_simplices: regular.complex.simplex_count(),
        quotient_simplices,
        mode: used,
        fell_back,
        degrees,
        fixed,
        torus,
    })
}

fn check_fixed_points(regular: &Regularized, l: &crate::lattice::LatticeType) -> Result<FixedCheck> {
    let (fixed, _) = fixed_subcomplex(&regular.complex, &regular.action);
    let predicted = fixed_point_set(l);
    let dim = predicted.component_torus_dim;
    let expected_betti: Vec<usize> = (0..=dim)
        .map(|k| binomial(dim, k).to_usize().expect("small binomial"))
        .collect();
    let component_betti = fixed
        .components()
        .iter()
        .map(|vs| field_cohomology(&fixed.induced(vs), 0))
        .collect::<Result<Vec<_>>>()?;
    let components = component_betti.len();
    let pass = BigUint::from(components) == predicted.component_count
        && component_betti.iter().all(|b| {
            let trimmed: Vec<usize> = {
                let mut v = b.clone();
                while v.len() > 1 && v.last() == Some(&0) {
                    v.pop();
                }
                v
            };
            trimmed == expected_betti
        });
    Ok(FixedCheck {
        components,
        expected_components: predicted.component_count,
        component_betti,
        expected_betti,
        pass,
    })
}
