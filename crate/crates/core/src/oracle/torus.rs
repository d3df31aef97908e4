//! Tori with simplicial `Z/p` actions, built from regular cell structures.
//!
//! A regular CW complex is described by its face poset together with the
//! action on cells. Products of circles are cubical, and the order complex
//! of the face poset triangulates them with the action still simplicial.

use std::fmt;
use std::str::FromStr;

use super::complex::{SimplicialAction, SimplicialComplex};
use crate::classify::{classify, regular_matrix};
use crate::error::{Error, Result};
use crate::lattice::{LatticeType, Prime};
use crate::snf::IntMatrix;

/// Face poset of a regular CW complex with a cellular action.
#[derive(Clone, Debug)]
struct FacePoset {
    dims: Vec<usize>,
    /// Codimension-one faces of each cell.
    covers: Vec<Vec<usize>>,
    action: Vec<usize>,
}

impl FacePoset {
    fn len(&self) -> usize {
        self.dims.len()
    }

    /// Circle with `m` vertices and `m` edges; edge `i` joins `i` and `i+1`.
    /// With `reflect`, vertex `i` goes to `−i` and edge `i` to edge `−i−1`.
    fn circle(m: usize, reflect: bool) -> Self {
        let mut dims = vec![0; m];
        dims.extend(std::iter::repeat_n(1, m));
        let mut covers = vec![Vec::new(); m];
        covers.extend((0..m).map(|i| vec![i, (i + 1) % m]));
        let action = if reflect {
            (0..m)
                .map(|i| (m - i) % m)
                .chain((0..m).map(|i| m + (2 * m - i - 1) % m))
                .collect()
        } else {
            (0..2 * m).collect()
        };
        FacePoset { dims, covers, action }
    }

    /// Face poset of a simplicial complex with a simplicial action.
    fn of_complex(complex: &SimplicialComplex, action: &SimplicialAction) -> Self {
        let all: Vec<Vec<usize>> = complex.simplices().into_iter().flatten().collect();
        let index: std::collections::HashMap<&[usize], usize> =
            all.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let dims = all.iter().map(|s| s.len() - 1).collect();
        let covers = all
            .iter()
            .map(|s| {
                if s.len() == 1 {
                    return Vec::new();
                }
                (0..s.len())
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        index[f.as_slice()]
                    })
                    .collect()
            })
            .collect();
        let map = all.iter().map(|s| index[action.image(s).as_slice()]).collect();
        FacePoset {
            dims,
            covers,
            action: map,
        }
    }

    /// Product cell structure with the diagonal action.
    fn product(&self, other: &FacePoset) -> Self {
        let n = other.len();
        let mut dims = Vec::with_capacity(self.len() * n);
        let mut covers = Vec::with_capacity(self.len() * n);
        let mut action = Vec::with_capacity(self.len() * n);
        for i in 0..self.len() {
            for j in 0..n {
                dims.push(self.dims[i] + other.dims[j]);
                let mut c: Vec<usize> = self.covers[i].iter().map(|&a| a * n + j).collect();
                c.extend(other.covers[j].iter().map(|&b| i * n + b));
                covers.push(c);
                action.push(self.action[i] * n + other.action[j]);
            }
        }
        FacePoset { dims, covers, action }
    }

    /// `self^p` with the generator shifting coordinates `(c_0, …, c_{p−1}) ↦ (c_{p−1}, c_0, …)`.
    /// The factor's own action is ignored.
    fn cyclic_power(&self, p: usize) -> Self {
        let base = FacePoset {
            action: (0..self.len()).collect(),
            ..self.clone()
        };
        let mut power = base.clone();
        for _ in 1..p {
            power = power.product(&base);
        }
        let m = self.len();
        power.action = (0..power.len())
            .map(|cell| {
                // Digits most significant first: c_0 c_1 … c_{p−1}.
                let mut digits = vec![0; p];
                let mut rest = cell;
                for d in digits.iter_mut().rev() {
                    *d = rest % m;
                    rest /= m;
                }
                digits.rotate_right(1);
                digits.iter().fold(0, |acc, &d| acc * m + d)
            })
            .collect();
        power
    }

    /// Order complex: one vertex per cell, one facet per maximal chain.
    fn order_complex(&self, p: Prime) -> (SimplicialComplex, SimplicialAction) {
        let mut covered = vec![false; self.len()];
        for c in &self.covers {
            for &f in c {
                covered[f] = true;
            }
        }
        let mut facets = Vec::new();
        let mut chain = Vec::new();
        for top in (0..self.len()).filter(|&c| !covered[c]) {
            self.chains_below(top, &mut chain, &mut facets);
        }
        let complex = SimplicialComplex::new(self.len(), facets).expect("maximal chains are distinct");
        let action = SimplicialAction::new(&complex, p, self.action.clone()).expect("poset automorphism");
        (complex, action)
    }

    fn chains_below(&self, cell: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        chain.push(cell);
        if self.covers[cell].is_empty() {
            out.push(chain.clone());
        } else {
            for &f in &self.covers[cell] {
                self.chains_below(f, chain, out);
            }
        }
        chain.pop();
    }
}

/// Supported families of equivariant tori.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusCase {
    /// `p = 2`, generator `−1` on each of `r` circles (4 arcs each); type `(r,0,0)`.
    Sign { r: usize },
    /// `n` blocks `(S¹)^p` with cyclically permuted coordinates, `segments`
    /// edges per circle; type `(0,n,0)`.
    Cyclic { p: Prime, n: usize, segments: usize },
    /// The hexagonal torus with the order-3 rotation on a `grid × grid`
    /// triangulation; type `(1,0,0)` over `Z/3`.
    Hexagonal { grid: usize },
    /// `t` circles with the trivial action; type `(0,0,t)`.
    Trivial { p: Prime, t: usize },
    /// Product of cases over a common prime.
    Product(Vec<TorusCase>),
}

impl TorusCase {
    /// The prime, or `None` for an empty product.
    pub fn prime(&self) -> Option<Prime> {
        match self {
            TorusCase::Sign { .. } => Some(Prime::new(2).expect("prime")),
            TorusCase::Hexagonal { .. } => Some(Prime::new(3).expect("prime")),
            TorusCase::Cyclic { p, .. } | TorusCase::Trivial { p, .. } => Some(*p),
            TorusCase::Product(fs) => fs.first().and_then(TorusCase::prime),
        }
    }

    /// Matrix of the generator on `H_1` of the torus.
    pub fn lattice_matrix(&self) -> IntMatrix {
        match self {
            TorusCase::Sign { r } => IntMatrix::identity(*r).scaled(-1),
            TorusCase::Cyclic { p, n, .. } => (0..*n)
                .map(|_| regular_matrix(*p))
                .fold(IntMatrix::zeros(0, 0), |acc, b| acc.block_diag(&b)),
            TorusCase::Hexagonal { .. } => IntMatrix::from_i64(&[&[-1, -1], &[1, 0]]),
            TorusCase::Trivial { t, .. } => IntMatrix::identity(*t),
            TorusCase::Product(fs) => fs
                .iter()
                .fold(IntMatrix::zeros(0, 0), |acc, f| acc.block_diag(&f.lattice_matrix())),
        }
    }

    /// The type this case is built to realize.
    pub fn declared_type(&self) -> Result<LatticeType> {
        let p = self.prime().ok_or_else(|| Error::Unsupported("empty product".into()))?;
        let zero = LatticeType { p, r: 0, s: 0, t: 0 };
        Ok(match self {
            TorusCase::Sign { r } => LatticeType { r: *r, ..zero },
            TorusCase::Cyclic { n, .. } => LatticeType { s: *n, ..zero },
            TorusCase::Hexagonal { .. } => LatticeType { r: 1, ..zero },
            TorusCase::Trivial { t, .. } => LatticeType { t: *t, ..zero },
            TorusCase::Product(fs) => {
                let mut acc = zero;
                for f in fs {
                    acc = acc.direct_sum(&f.declared_type()?)?;
                }
                acc
            }
        })
    }

    fn validate(&self) -> Result<()> {
        match self {
            TorusCase::Sign { r } if *r == 0 => Err(Error::Unsupported("sign case needs r ≥ 1".into())),
            TorusCase::Cyclic { n, segments, .. } => {
                if *n == 0 {
                    Err(Error::Unsupported("cyclic case needs n ≥ 1".into()))
                } else if *segments < 2 {
                    Err(Error::Unsupported(
                        "cyclic case needs at least 2 segments per circle for a regular cell structure".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            TorusCase::Hexagonal { grid } if *grid < 3 => {
                Err(Error::Unsupported("hexagonal grid must be at least 3".into()))
            }
            TorusCase::Trivial { t, .. } if *t == 0 => Err(Error::Unsupported("trivial case needs t ≥ 1".into())),
            TorusCase::Product(fs) => {
                if fs.is_empty() {
                    return Err(Error::Unsupported("empty product".into()));
                }
                let p = self.prime();
                if fs.iter().any(|f| f.prime() != p) {
                    return Err(Error::Unsupported("product factors must share the prime".into()));
                }
                fs.iter().try_for_each(TorusCase::validate)
            }
            _ => Ok(()),
        }
    }

    fn poset(&self) -> FacePoset {
        match self {
            TorusCase::Sign { r } => power(&FacePoset::circle(4, true), *r),
            TorusCase::Cyclic { p, n, segments } => {
                let block = FacePoset::circle(*segments, false).cyclic_power(p.get() as usize);
                power(&block, *n)
            }
            TorusCase::Hexagonal { grid } => {
                let (c, a) = hexagonal(*grid);
                FacePoset::of_complex(&c, &a)
            }
            TorusCase::Trivial { t, .. } => power(&FacePoset::circle(3, false), *t),
            TorusCase::Product(fs) => {
                let mut it = fs.iter().map(TorusCase::poset);
                let first = it.next().expect("validated nonempty");
                it.fold(first, |acc, f| acc.product(&f))
            }
        }
    }
}

fn power(base: &FacePoset, k: usize) -> FacePoset {
    let mut acc = base.clone();
    for _ in 1..k {
        acc = acc.product(base);
    }
    acc
}

/// Triangulated hexagonal torus `R² / g·Λ` for the lattice `Λ` spanned by
/// `u` (angle 0) and `w` (angle 60°). Vertex `(a, b)` is `a·u + b·w`, and
/// the rotation by 120° sends it to `(−a−b, a)`.
fn hexagonal(grid: usize) -> (SimplicialComplex, SimplicialAction) {
    let g = grid;
    let idx = |a: usize, b: usize| (a % g) * g + (b % g);
    let mut facets = Vec::with_capacity(2 * g * g);
    for a in 0..g {
        for b in 0..g {
            facets.push(vec![idx(a, b), idx(a + 1, b), idx(a, b + 1)]);
            facets.push(vec![idx(a + 1, b), idx(a, b + 1), idx(a + 1, b + 1)]);
        }
    }
    let complex = SimplicialComplex::new(g * g, facets).expect("grid ≥ 3 gives a simplicial torus");
    let map = (0..g * g)
        .map(|v| {
            let (a, b) = (v / g, v % g);
            idx((2 * g - a - b) % g, a)
        })
        .collect();
    let action = SimplicialAction::new(&complex, Prime::new(3).expect("prime"), map)
        .expect("rotation preserves the triangulation");
    (complex, action)
}

/// A torus with its action and the data it is meant to realize.
#[derive(Clone, Debug)]
pub struct EquivariantTorus {
    pub complex: SimplicialComplex,
    pub action: SimplicialAction,
    pub lattice_matrix: IntMatrix,
    pub lattice_type: LatticeType,
}

/// Build the complex and action for a case.
///
/// Circles and the hexagonal grid are simplicial as they stand; everything
/// else goes through the order complex of the product cell structure. The
/// declared type is checked against the classification of the matrix on `H_1`.
pub fn build_equivariant_torus(case: &TorusCase) -> Result<EquivariantTorus> {
    case.validate()?;
    let declared = case.declared_type()?;
    let p = declared.p;
    let (complex, action) = match case {
        TorusCase::Sign { r: 1 } => {
            let c = cycle(4);
            let a = SimplicialAction::new(&c, p, vec![0, 3, 2, 1])?;
            (c, a)
        }
        TorusCase::Trivial { t: 1, .. } => {
            let c = cycle(3);
            let a = SimplicialAction::trivial(&c, p);
            (c, a)
        }
        TorusCase::Hexagonal { grid } => hexagonal(*grid),
        _ => case.poset().order_complex(p),
    };
    let lattice_matrix = case.lattice_matrix();
    let classified = classify(&lattice_matrix, p)?;
    if classified != declared {
        return Err(Error::inconsistent(
            "build_equivariant_torus",
            format!("{case} declares {declared} but its matrix classifies as {classified}"),
        ));
    }
    Ok(EquivariantTorus {
        complex,
        action,
        lattice_matrix,
        lattice_type: declared,
    })
}

fn cycle(n: usize) -> SimplicialComplex {
    SimplicialComplex::new(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect()).expect("n ≥ 3")
}

impl fmt::Display for TorusCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusCase::Sign { r } => write!(f, "sign(r={r})"),
            TorusCase::Cyclic { p, n, segments } => write!(f, "cyclic(p={p}, n={n}, segments={segments})"),
            TorusCase::Hexagonal { grid } => write!(f, "hexagonal(grid={grid})"),
            TorusCase::Trivial { p, t } => write!(f, "trivial(p={p}, t={t})"),
            TorusCase::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" × "))
            }
        }
    }
}

/// One factor of a product, as written on the command line:
/// `sign`, `trivial`, `cyclic` or `hexagonal`, optionally `name:count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Sign,
    Trivial,
    Cyclic,
    Hexagonal,
}

impl FromStr for FactorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sign" => Ok(FactorKind::Sign),
            "trivial" => Ok(FactorKind::Trivial),
            "cyclic" => Ok(FactorKind::Cyclic),
            "hexagonal" => Ok(FactorKind::Hexagonal),
            other => Err(Error::Unsupported(format!("unknown factor {other:?}"))),
        }
    }
}

/// Parse a factor list such as `sign,sign,trivial` or `cyclic:2,trivial`.
pub fn product_case(p: Prime, factors: &str, segments: usize) -> Result<TorusCase> {
    let mut out = Vec::new();
    for item in factors.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, count) = match item.split_once(':') {
            Some((n, c)) => (
                n,
                c.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad factor count in {item:?}")))?,
            ),
            None => (item, 1),
        };
        let factor = match name.parse::<FactorKind>()? {
            FactorKind::Sign => TorusCase::Sign { r: count },
            FactorKind::Trivial => TorusCase::Trivial { p, t: count },
            FactorKind::Cyclic => TorusCase::Cyclic { p, n: count, segments },
            FactorKind::Hexagonal => {
                if count != 1 {
                    return Err(Error::Unsupported("at most one hexagonal factor per entry".into()));
                }
                TorusCase::Hexagonal { grid: 3 }
            }
        };
        out.push(factor);
    }
    let case = TorusCase::Product(out);
    case.validate()?;
    if case.prime() != Some(p) {
        return Err(Error::Unsupported(format!("factors do not act over Z/{p}")));
    }
    Ok(case)
}
