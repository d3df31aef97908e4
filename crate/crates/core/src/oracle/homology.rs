use std::collections::HashMap;

use num_bigint::BigInt;

use super::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::lattice::is_prime;
use crate::snf::{group_from_smith, rank_mod, rank_rational, smith_normal_form_sparse, AbelianGroup, SparseMatrix};

/// Default cap on the number of simplices for integral cohomology.
pub const DEFAULT_SIMPLEX_LIMIT: usize = 20_000;

/// Coboundary matrices `δ_k : C^k → C^{k+1}` for `k = 0..dim`, each stored
/// with one row per `(k+1)`-simplex, plus the cochain dimensions.
pub fn coboundaries(complex: &SimplicialComplex) -> (Vec<SparseMatrix>, Vec<usize>) {
    let simplices = complex.simplices();
    let dims: Vec<usize> = simplices.iter().map(Vec::len).collect();
    let maps = (1..simplices.len())
        .map(|k| {
            let index: HashMap<&[usize], usize> = simplices[k - 1]
                .iter()
                .enumerate()
                .map(|(i, s)| (s.as_slice(), i))
                .collect();
            let rows = simplices[k]
                .iter()
                .map(|s| {
                    (0..s.len())
                        .map(|i| {
                            let mut face = s.clone();
                            face.remove(i);
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            (index[face.as_slice()], BigInt::from(sign))
                        })
                        .collect()
                })
                .collect();
            SparseMatrix::from_rows(dims[k - 1], rows)
        })
        .collect();
    (maps, dims)
}

/// `H^k(K; Z)` for `k = 0..=dim K`, refusing complexes above `limit` simplices.
pub fn integral_cohomology(complex: &SimplicialComplex, limit: usize) -> Result<Vec<AbelianGroup>> {
    let size = complex.simplex_count();
    if size > limit {
        return Err(Error::SizeGate {
            simplices: size,
            limit,
        });
    }
    let (maps, dims) = coboundaries(complex);
    let forms: Vec<_> = maps.iter().map(smith_normal_form_sparse).collect();
    Ok((0..dims.len())
        .map(|k| {
            let outgoing = forms.get(k).map_or(0, |f| f.rank);
            match k.checked_sub(1).map(|j| &forms[j]) {
                Some(incoming) => group_from_smith(dims[k], incoming, outgoing),
                None => AbelianGroup {
                    free_rank: dims[k] - outgoing,
                    torsion: Vec::new(),
                },
            }
        })
        .collect())
}

/// `dim H^k(K; F)` for `k = 0..=dim K`, where `F = Q` for characteristic 0
/// and `F_q` for a prime `q`.
pub fn field_cohomology(complex: &SimplicialComplex, characteristic: u64) -> Result<Vec<usize>> {
    if characteristic != 0 && !is_prime(characteristic) {
        return Err(Error::BadCharacteristic(characteristic));
    }
    let (maps, dims) = coboundaries(complex);
    let ranks: Vec<usize> = maps
        .iter()
        .map(|m| {
            if characteristic == 0 {
                rank_rational(m)
            } else {
                rank_mod(m, characteristic)
            }
        })
        .collect();
    Ok((0..dims.len())
        .map(|k| {
            let out = ranks.get(k).copied().unwrap_or(0);
            let inc = k.checked_sub(1).map_or(0, |j| ranks[j]);
            dims[k] - out - inc
        })
        .collect())
}
