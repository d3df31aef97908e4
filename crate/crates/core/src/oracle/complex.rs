use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::Prime;

/// Finite simplicial complex given by its facets.
///
/// Vertices are `0..vertex_count`; every vertex is a 0-simplex even if no
/// facet mentions it. Facets are stored sorted, without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(facets.len());
        for mut f in facets {
            f.sort_unstable();
            if f.is_empty() {
                return Err(Error::InvalidComplex("empty facet".into()));
            }
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("repeated vertex in facet {f:?}")));
            }
            if let Some(&v) = f.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::InvalidComplex(format!(
                    "vertex {v} out of range (vertex count {vertex_count})"
                )));
            }
            if !seen.insert(f.clone()) {
                return Err(Error::InvalidComplex(format!("duplicate facet {f:?}")));
            }
            out.push(f);
        }
        out.sort();
        Ok(SimplicialComplex {
            vertex_count,
            facets: out,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        let top = self.facets.iter().map(|f| f.len() - 1).max();
        match top {
            Some(d) => Some(d),
            None if self.vertex_count > 0 => Some(0),
            None => None,
        }
    }

    /// All simplices grouped by dimension, each list sorted.
    pub fn simplices(&self) -> Vec<Vec<Vec<usize>>> {
        let Some(dim) = self.dim() else {
            return Vec::new();
        };
        let mut sets: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); dim + 1];
        for f in &self.facets {
            for mask in 1u64..(1u64 << f.len()) {
                let face: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| *v)
                    .collect();
                sets[face.len() - 1].insert(face);
            }
        }
        sets[0].extend((0..self.vertex_count).map(|v| vec![v]));
        sets.into_iter()
            .map(|s| {
                let mut v: Vec<_> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Face counts `f_0, f_1, …`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices().iter().map(Vec::len).collect()
    }

    pub fn simplex_count(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Vertex sets of the connected components, each sorted, in order of
    /// their least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for f in &self.facets {
            for w in f.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..self.vertex_count {
            let root = find(&mut parent, v);
            groups.entry(root).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Full subcomplex on the given vertices, renumbered in increasing order.
    pub fn induced(&self, vertices: &[usize]) -> SimplicialComplex {
        let mut index = vec![usize::MAX; self.vertex_count];
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (i, &v) in sorted.iter().enumerate() {
            index[v] = i;
        }
        let faces: HashSet<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| {
                f.iter()
                    .filter(|&&v| index[v] != usize::MAX)
                    .map(|&v| index[v])
                    .collect::<Vec<_>>()
            })
            .filter(|f| !f.is_empty())
            .collect();
        SimplicialComplex::new(sorted.len(), maximal(faces)).expect("induced subcomplex is valid")
    }
}

/// Keep only the sets not contained in another one.
pub(crate) fn maximal(faces: HashSet<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut by_size: Vec<Vec<usize>> = faces.into_iter().collect();
    by_size.sort_by_key(|f| std::cmp::Reverse(f.len()));
    let mut kept: Vec<Vec<usize>> = Vec::new();
    let mut covered: HashSet<Vec<usize>> = HashSet::new();
    for f in by_size {
        if covered.contains(&f) {
            continue;
        }
        for mask in 1u64..(1u64 << f.len()) {
            let face: Vec<usize> = f
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| *v)
                .collect();
            covered.insert(face);
        }
        kept.push(f);
    }
    kept.sort();
    kept
}

/// `Z/p` acting on a complex through a vertex permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialAction {
    order: Prime,
    map: Vec<usize>,
}

impl SimplicialAction {
    /// Checks that `map` is a permutation of order dividing `p` that sends
    /// simplices of `complex` to simplices.
    pub fn new(complex: &SimplicialComplex, order: Prime, map: Vec<usize>) -> Result<Self> {
        let n = complex.vertex_count();
        if map.len() != n {
            return Err(Error::InvalidAction(format!(
                "vertex map has {} entries for {n} vertices",
                map.len()
            )));
        }
        let mut hit = vec![false; n];
        for &v in &map {
            if v >= n || std::mem::replace(&mut hit[v], true) {
                return Err(Error::InvalidAction("vertex map is not a permutation".into()));
            }
        }
        let action = SimplicialAction { order, map };
        if (0..n).any(|v| action.apply_power(v, order.get() as usize) != v) {
            return Err(Error::InvalidAction(format!(
                "the {}-th power of the vertex map is not the identity",
                order
            )));
        }
        let all: HashSet<Vec<usize>> = complex.simplices().into_iter().flatten().collect();
        for f in complex.facets() {
            let image = action.image(f);
            if !all.contains(&image) {
                return Err(Error::InvalidAction(format!(
                    "facet {f:?} maps to {image:?}, which is not a simplex"
                )));
            }
        }
        Ok(action)
    }

    pub fn trivial(complex: &SimplicialComplex, order: Prime) -> Self {
        SimplicialAction {
            order,
            map: (0..complex.vertex_count()).collect(),
        }
    }

    pub fn order(&self) -> Prime {
        self.order
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn apply_power(&self, mut v: usize, k: usize) -> usize {
        for _ in 0..k {
            v = self.map[v];
        }
        v
    }

    /// Sorted image of a simplex.
    pub fn image(&self, simplex: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = simplex.iter().map(|&v| self.map[v]).collect();
        out.sort_unstable();
        out
    }

    pub fn fixed_vertices(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&v| self.map[v] == v).collect()
    }
}

/// Line-based text form:
///
/// ```text
/// # comment
/// 2; 6
/// 0 1 3
/// ...
/// action 2: 0 1 2 3 4 5
/// ```
///
/// The header is `<dim>; <vertex count>`, then one facet per line; an
/// optional `action <p>: <images>` line gives the generator's vertex map.
pub fn format_complex(complex: &SimplicialComplex, action: Option<&SimplicialAction>) -> String {
    let dim = complex.dim().map_or("-1".to_string(), |d| d.to_string());
    let mut out = format!("{dim}; {}\n", complex.vertex_count());
    for f in complex.facets() {
        let line: Vec<String> = f.iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    if let Some(a) = action {
        let images: Vec<String> = a.map().iter().map(ToString::to_string).collect();
        out.push_str(&format!("action {}: {}\n", a.order(), images.join(" ")));
    }
    out
}

/// Parse the text form written by [`format_complex`].
pub fn parse_complex(text: &str) -> Result<(SimplicialComplex, Option<SimplicialAction>)> {
    let mut header: Option<(i64, usize)> = None;
    let mut facets = Vec::new();
    let mut action_line: Option<(usize, u64, Vec<usize>)> = None;
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            let (d, v) = line
                .split_once(';')
                .ok_or_else(|| parse_err(n, "header must be \"<dim>; <vertex count>\"".into()))?;
            let d: i64 = d.trim().parse().map_err(|_| parse_err(n, format!("bad dimension {d:?}")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| parse_err(n, format!("bad vertex count {v:?}")))?;
            header = Some((d, v));
            continue;
        }
        if let Some(rest) = line.strip_prefix("action") {
            if action_line.is_some() {
                return Err(parse_err(n, "more than one action line".into()));
            }
            let (p, images) = rest
                .split_once(':')
                .ok_or_else(|| parse_err(n, "action line must be \"action <p>: <images>\"".into()))?;
            let p: u64 = p.trim().parse().map_err(|_| parse_err(n, format!("bad order {p:?}")))?;
            let images = parse_list(images, n)?;
            action_line = Some((n, p, images));
            continue;
        }
        if action_line.is_some() {
            return Err(parse_err(n, "facet after the action line".into()));
        }
        facets.push((n, parse_list(line, n)?));
    }
    let (dim, vertex_count) = header.ok_or_else(|| parse_err(1, "missing header".into()))?;
    for (n, f) in &facets {
        if f.len() as i64 - 1 > dim {
            return Err(parse_err(*n, format!("facet {f:?} exceeds the declared dimension {dim}")));
        }
    }
    let complex = SimplicialComplex::new(vertex_count, facets.into_iter().map(|(_, f)| f).collect())?;
    let actual = complex.dim().map_or(-1, |d| d as i64);
    if actual != dim {
        return Err(Error::InvalidComplex(format!(
            "declared dimension {dim} but the facets have dimension {actual}"
        )));
    }
    let action = match action_line {
        None => None,
        Some((_, p, images)) => Some(SimplicialAction::new(&complex, Prime::new(p)?, images)?),
    };
    Ok((complex, action))
}

fn parse_list(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad vertex {t:?}"),
            })
        })
        .collect()
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_complex(self, None))
    }
}

impl FromStr for SimplicialComplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_complex(s).map(|(c, _)| c)
    }
}
