use std::collections::{HashMap, HashSet};

use super::complex::{maximal, SimplicialAction, SimplicialComplex};
use crate::error::{Error, Result};

/// Barycentric subdivision with the induced action.
///
/// New vertices are the simplices of `K` (in the order of
/// [`SimplicialComplex::simplices`]); new facets are the full flags inside
/// each facet of `K`.
pub fn barycentric_subdivide(
    complex: &SimplicialComplex,
    action: &SimplicialAction,
) -> (SimplicialComplex, SimplicialAction) {
    let all: Vec<Vec<usize>> = complex.simplices().into_iter().flatten().collect();
    let index: HashMap<&[usize], usize> = all.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();

    let mut facets = Vec::new();
    let top: HashSet<Vec<usize>> = complex.facets().iter().cloned().collect();
    for f in maximal(top) {
        for_each_permutation(&f, |order| {
            let mut prefix: Vec<usize> = Vec::with_capacity(order.len());
            let mut chain = Vec::with_capacity(order.len());
            for &v in order {
                prefix.push(v);
                let mut s = prefix.clone();
                s.sort_unstable();
                chain.push(index[s.as_slice()]);
            }
            facets.push(chain);
        });
    }
    let map = all.iter().map(|s| index[action.image(s).as_slice()]).collect();
    let subdivided = SimplicialComplex::new(all.len(), facets).expect("flags are distinct simplices");
    let induced = SimplicialAction::new(&subdivided, action.order(), map)
        .expect("the induced action is simplicial");
    (subdivided, induced)
}

fn for_each_permutation(items: &[usize], mut visit: impl FnMut(&[usize])) {
    fn go(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(items, k + 1, visit);
            items.swap(k, i);
        }
    }
    go(&mut items.to_vec(), 0, &mut visit);
}

/// Every simplex fixed setwise by some `g ≠ 1` is fixed vertexwise by it.
pub fn is_regular(complex: &SimplicialComplex, action: &SimplicialAction) -> bool {
    let p = action.order().get() as usize;
    complex.simplices().iter().flatten().all(|s| {
        (1..p).all(|k| {
            let mut image: Vec<usize> = s.iter().map(|&v| action.apply_power(v, k)).collect();
            image.sort_unstable();
            image != *s || s.iter().all(|&v| action.apply_power(v, k) == v)
        })
    })
}

/// Vertex orbits, numbered in order of their least vertex.
fn orbit_labels(action: &SimplicialAction) -> (Vec<usize>, usize) {
    let n = action.map().len();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for v in 0..n {
        if label[v] != usize::MAX {
            continue;
        }
        let mut w = v;
        loop {
            label[w] = count;
            w = action.apply(w);
            if w == v {
                break;
            }
        }
        count += 1;
    }
    (label, count)
}

/// Why the orbit complex fails to model `K/G`, if it does.
///
/// Besides regularity, two simplices with the same vertex orbits must lie in
/// one orbit, and no simplex may contain two vertices of one orbit.
pub fn quotient_obstruction(complex: &SimplicialComplex, action: &SimplicialAction) -> Option<String> {
    if !is_regular(complex, action) {
        return Some("a simplex is fixed setwise but not vertexwise".into());
    }
    let (label, _) = orbit_labels(action);
    let p = action.order().get() as usize;
    for dim_simplices in complex.simplices() {
        let mut images: HashSet<Vec<usize>> = HashSet::new();
        let mut orbits: HashSet<Vec<usize>> = HashSet::new();
        for s in &dim_simplices {
            let mut image: Vec<usize> = s.iter().map(|&v| label[v]).collect();
            image.sort_unstable();
            if image.windows(2).any(|w| w[0] == w[1]) {
                return Some(format!("simplex {s:?} has two vertices in one orbit"));
            }
            images.insert(image);
            let rep = (0..p)
                .map(|k| {
                    let mut t: Vec<usize> = s.iter().map(|&v| action.apply_power(v, k)).collect();
                    t.sort_unstable();
                    t
                })
                .min()
                .expect("p ≥ 2");
            orbits.insert(rep);
        }
        if images.len() != orbits.len() {
            return Some(format!(
                "{} simplex orbits collapse to {} orbit simplices",
                orbits.len(),
                images.len()
            ));
        }
    }
    None
}

/// Orbit complex `K/G`: vertices are vertex orbits, facets the images of facets.
pub fn quotient_complex(complex: &SimplicialComplex, action: &SimplicialAction) -> Result<SimplicialComplex> {
    if let Some(why) = quotient_obstruction(complex, action) {
        return Err(Error::NotRegular(why));
    }
    let (label, count) = orbit_labels(action);
    let images: HashSet<Vec<usize>> = complex
        .facets()
        .iter()
        .map(|f| {
            let mut image: Vec<usize> = f.iter().map(|&v| label[v]).collect();
            image.sort_unstable();
            image
        })
        .collect();
    SimplicialComplex::new(count, maximal(images))
}

/// Result of [`regularize`].
#[derive(Clone, Debug)]
pub struct Regularized {
    pub complex: SimplicialComplex,
    pub action: SimplicialAction,
    pub subdivisions: usize,
}

/// Subdivide until the orbit complex models the quotient. Two subdivisions
/// always suffice; `max_subdivisions` bounds the attempt.
pub fn regularize(
    complex: &SimplicialComplex,
    action: &SimplicialAction,
    max_subdivisions: usize,
) -> Result<Regularized> {
    let mut current = (complex.clone(), action.clone());
    for subdivisions in 0..=max_subdivisions {
        match quotient_obstruction(&current.0, &current.1) {
            None => {
                return Ok(Regularized {
                    complex: current.0,
                    action: current.1,
                    subdivisions,
                })
            }
            Some(why) if subdivisions == max_subdivisions => {
                return Err(Error::NotRegular(format!(
                    "still not regular after {max_subdivisions} subdivisions: {why}"
                )))
            }
            Some(_) => current = barycentric_subdivide(&current.0, &current.1),
        }
    }
    unreachable!("loop returns on its last iteration")
}

/// Subcomplex of simplices fixed vertexwise by the generator.
///
/// For a regular action this is the fixed-point set. Vertices are renumbered
/// in increasing order; the original indices are returned alongside.
pub fn fixed_subcomplex(
    complex: &SimplicialComplex,
    action: &SimplicialAction,
) -> (SimplicialComplex, Vec<usize>) {
    let fixed = action.fixed_vertices();
    (complex.induced(&fixed), fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Prime;

    fn circle(n: usize) -> SimplicialComplex {
        SimplicialComplex::new(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect()).unwrap()
    }

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn subdivision_counts() {
        let c = circle(4);
        let a = SimplicialAction::trivial(&c, p(2));
        let (c2, _) = barycentric_subdivide(&c, &a);
        assert_eq!(c2.f_vector(), [8, 8]);
        let tri = SimplicialComplex::new(3, vec![vec![0, 1, 2]]).unwrap();
        let (t2, _) = barycentric_subdivide(&tri, &SimplicialAction::trivial(&tri, p(3)));
        assert_eq!(t2.f_vector(), [7, 12, 6]);
    }

    #[test]
    fn sign_circle() {
        let c = circle(4);
        let flip = SimplicialAction::new(&c, p(2), vec![0, 3, 2, 1]).unwrap();
        assert!(is_regular(&c, &flip));
        let q = quotient_complex(&c, &flip).unwrap();
        assert_eq!(q.f_vector(), [3, 2]);
        assert_eq!(q.components().len(), 1);
        let (fixed, original) = fixed_subcomplex(&c, &flip);
        assert_eq!(original, [0, 2]);
        assert_eq!(fixed.components().len(), 2);
    }

    #[test]
    fn trivial_action_is_regular() {
        let c = circle(5);
        assert!(is_regular(&c, &SimplicialAction::trivial(&c, p(5))));
        let q = quotient_complex(&c, &SimplicialAction::trivial(&c, p(5))).unwrap();
        assert_eq!(q, c);
    }

    #[test]
    fn rotation_needs_subdivision() {
        // Rotating a triangle's boundary fixes the 2-simplex setwise only.
        let tri = SimplicialComplex::new(3, vec![vec![0, 1, 2]]).unwrap();
        let rot = SimplicialAction::new(&tri, p(3), vec![1, 2, 0]).unwrap();
        assert!(!is_regular(&tri, &rot));
        assert!(quotient_complex(&tri, &rot).is_err());
        let r = regularize(&tri, &rot, 2).unwrap();
        assert!(r.subdivisions >= 1);
        assert!(is_regular(&r.complex, &r.action));
        let q = quotient_complex(&r.complex, &r.action).unwrap();
        assert_eq!(q.euler_characteristic(), 1);
    }

    #[test]
    fn rotated_circle_is_regular_but_collapses() {
        // A free rotation of a 3-cycle: edges map to edges, but the orbit
        // complex would need a loop.
        let c = circle(3);
        let rot = SimplicialAction::new(&c, p(3), vec![1, 2, 0]).unwrap();
        assert!(is_regular(&c, &rot));
        assert!(quotient_obstruction(&c, &rot).is_some());
        let r = regularize(&c, &rot, 3).unwrap();
        let q = quotient_complex(&r.complex, &r.action).unwrap();
        assert_eq!(q.euler_characteristic(), 0);
        assert_eq!(q.components().len(), 1);
    }
}
