//! Exhaustive search for small (2,3,7) triples.
//!
//! `y` is fixed to the canonical product `(1,2,3)(4,5,6)…` of `q` 3-cycles
//! (every element of that cycle type is conjugate to it), and every
//! involution `x` with `m` transpositions is tried.

use rayon::prelude::*;
use thiserror::Error;

use crate::certify::orbits;
use crate::diagram::Triple237;
use crate::perm::Permutation;

pub const DEFAULT_SEARCH_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("degree {degree} exceeds the search cap {cap}")]
    DegreeOverCap { degree: usize, cap: usize },
    #[error("invalid search: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub degree: usize,
    /// Transpositions of `x`.
    pub m: usize,
    /// 3-cycles of `y`.
    pub q: usize,
    /// Handle types that must each occur at least once.
    pub handles: Vec<u8>,
    pub transitive: bool,
}

/// `y = (1,2,3)(4,5,6)…(3q−2,3q−1,3q)` on `degree` points.
pub fn canonical_y(degree: usize, q: usize) -> Permutation {
    let cycles: Vec<[u32; 3]> = (0..q as u32)
        .map(|i| [3 * i + 1, 3 * i + 2, 3 * i + 3])
        .collect();
    Permutation::from_cycles(degree, &cycles).expect("3q <= degree")
}

pub fn brute_search(spec: &SearchSpec, cap: usize) -> Result<Vec<Triple237>, SearchError> {
    let n = spec.degree;
    if n > cap {
        return Err(SearchError::DegreeOverCap { degree: n, cap });
    }
    if 2 * spec.m > n || 3 * spec.q > n {
        return Err(SearchError::InvalidSpec(format!(
            "m = {} and q = {} do not fit in degree {n}",
            spec.m, spec.q
        )));
    }
    if let Some(i) = spec.handles.iter().find(|i| !(1..=6).contains(*i)) {
        return Err(SearchError::InvalidSpec(format!("handle order {i}")));
    }
    // x must be even to lie in Alt(n)
    if spec.m % 2 == 1 || n == 0 {
        return Ok(Vec::new());
    }
    let y = canonical_y(n, spec.q);
    // Split on the fate of point 0: fixed, or paired with each later point.
    let first: Vec<Option<usize>> = std::iter::once(None).chain((1..n).map(Some)).collect();
    let mut found: Vec<Vec<u32>> = first
        .into_par_iter()
        .flat_map_iter(|choice| {
            let mut images: Vec<u32> = (0..n as u32).collect();
            let mut used = vec![false; n];
            used[0] = true;
            let (pairs_left, fixed_left) = match choice {
                None => {
                    if n - 2 * spec.m == 0 {
                        return Vec::new().into_iter();
                    }
                    (spec.m, n - 2 * spec.m - 1)
                }
                Some(b) => {
                    if spec.m == 0 {
                        return Vec::new().into_iter();
                    }
                    used[b] = true;
                    images[0] = b as u32;
                    images[b] = 0;
                    (spec.m - 1, n - 2 * spec.m)
                }
            };
            let mut out = Vec::new();
            extend(&mut images, &mut used, 1, pairs_left, fixed_left, &mut |imgs| {
                let x = Permutation::from_images(&imgs.iter().map(|i| i + 1).collect::<Vec<_>>())
                    .expect("matching is a permutation");
                if accept(spec, &x, &y) {
                    out.push(imgs.to_vec());
                }
            });
            out.into_iter()
        })
        .collect();
    found.sort();
    Ok(found
        .into_iter()
        .map(|imgs| {
            let x = Permutation::from_images(&imgs.iter().map(|i| i + 1).collect::<Vec<_>>())
                .expect("valid");
            Triple237::new(x, y.clone()).expect("accepted triples are valid")
        })
        .collect())
}

fn accept(spec: &SearchSpec, x: &Permutation, y: &Permutation) -> bool {
    if (x * y).order() != 7 {
        return false;
    }
    if spec.transitive && orbits(x, y).len() != 1 {
        return false;
    }
    if spec.handles.is_empty() {
        return true;
    }
    match Triple237::new(x.clone(), y.clone()) {
        Ok(t) => spec.handles.iter().all(|&i| !t.detect_handles(i).is_empty()),
        Err(_) => false,
    }
}

/// Enumerates involutions by deciding each point in turn: fixed, or paired
/// with a later free point.
fn extend(
    images: &mut Vec<u32>,
    used: &mut Vec<bool>,
    from: usize,
    pairs_left: usize,
    fixed_left: usize,
    visit: &mut dyn FnMut(&[u32]),
) {
    let n = images.len();
    let Some(a) = (from..n).find(|&p| !used[p]) else {
        if pairs_left == 0 && fixed_left == 0 {
            visit(images);
        }
        return;
    };
    used[a] = true;
    if fixed_left > 0 {
        extend(images, used, a + 1, pairs_left, fixed_left - 1, visit);
    }
    if pairs_left > 0 {
        for b in a + 1..n {
            if used[b] {
                continue;
            }
            used[b] = true;
            images[a] = b as u32;
            images[b] = a as u32;
            extend(images, used, a + 1, pairs_left - 1, fixed_left, visit);
            images[a] = a as u32;
            images[b] = b as u32;
            used[b] = false;
        }
    }
    used[a] = false;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(degree: usize, m: usize, q: usize, handles: Vec<u8>, transitive: bool) -> SearchSpec {
        SearchSpec {
            degree,
            m,
            q,
            handles,
            transitive,
        }
    }

    #[test]
    fn counts_all_involutions() {
        // xy must have order exactly 7
        assert!(brute_search(&spec(6, 0, 0, vec![], false), 16)
            .unwrap()
            .is_empty());
        let mut count = 0;
        let mut images: Vec<u32> = (0..8).collect();
        let mut used = vec![false; 8];
        extend(&mut images, &mut used, 0, 2, 4, &mut |_| count += 1);
        // C(8,4) * 3 = 210 involutions with two transpositions on 8 points
        assert_eq!(count, 210);
    }

    #[test]
    fn degree_seven_diagram_exists() {
        let hits = brute_search(&spec(7, 2, 2, vec![1], true), 16).unwrap();
        assert!(!hits.is_empty());
        for t in &hits {
            let sig = t.signature();
            assert_eq!((sig.degree, sig.m), (7, 2));
            assert_eq!(t.xy().order(), 7);
            assert!(!t.detect_handles(1).is_empty());
        }
    }

    #[test]
    fn degree_fourteen_diagram_exists() {
        let hits = brute_search(&spec(14, 6, 4, vec![], true), 16).unwrap();
        assert!(!hits.is_empty());
    }

    #[test]
    fn trivial_y_cannot_be_transitive() {
        assert!(brute_search(&spec(7, 2, 0, vec![], true), 16)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn results_are_distinct() {
        let hits = brute_search(&spec(8, 4, 2, vec![], false), 16).unwrap();
        for (i, a) in hits.iter().enumerate() {
            for b in &hits[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            brute_search(&spec(20, 2, 2, vec![], true), 16),
            Err(SearchError::DegreeOverCap { .. })
        ));
        assert!(matches!(
            brute_search(&spec(7, 4, 2, vec![], true), 16),
            Err(SearchError::InvalidSpec(_))
        ));
        assert!(brute_search(&spec(7, 1, 2, vec![], true), 16)
            .unwrap()
            .is_empty());
    }
}
