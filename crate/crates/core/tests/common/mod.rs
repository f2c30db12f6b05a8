#![allow(dead_code)]

use std::collections::HashSet;

use hurwitz_core::Permutation;
use rand::seq::SliceRandom;
use rand::Rng;

/// Size of `<gens>` by breadth-first closure, giving up past `limit`.
pub fn closure_size(gens: &[&Permutation], limit: usize) -> Option<usize> {
    let n = gens[0].degree();
    let start = Permutation::identity(n);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(start.images());
    let mut frontier = vec![start];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = &g * s;
            if seen.insert(h.images()) {
                if seen.len() > limit {
                    return None;
                }
                frontier.push(h);
            }
        }
    }
    Some(seen.len())
}

pub fn half_factorial(n: usize) -> usize {
    (1..=n).product::<usize>() / 2
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut images: Vec<u32> = (1..=n as u32).collect();
    images.shuffle(rng);
    Permutation::from_images(&images).unwrap()
}

pub fn random_even_perm<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    loop {
        let p = random_perm(rng, n);
        if p.is_even() {
            return p;
        }
    }
}
