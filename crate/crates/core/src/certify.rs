//! Generation certificates.
//!
//! `⟨x,y⟩ = Alt(n)` is certified by Jordan's criterion: a primitive group
//! containing a `p`-cycle with `p` prime and `p ≤ n−3` contains `Alt(n)`;
//! with even generators it equals `Alt(n)`. The double cover is then Hurwitz
//! iff the involution `x` has `m ≡ 0 (mod 4)` transpositions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{is_prime, lcm, Permutation};
use crate::words::{Word, WordError};

pub const CERT_VERSION: &str = "cert/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("the action is not transitive ({orbits} orbits)")]
    Intransitive { orbits: usize },
    #[error("no power of the commutator is a single cycle of prime length <= n-3")]
    NotFound,
    #[error("witness is not a single cycle (cycle type {0})")]
    NotACycle(String),
    #[error("witness cycle length {p} exceeds n-3 = {bound}")]
    PTooLarge { p: usize, bound: usize },
    #[error("witness cycle length {0} is not prime")]
    PNotPrime(usize),
    #[error("x is not an even involution")]
    NotEvenInvolution,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Orbits of `⟨x, y⟩`, each sorted, ordered by least point.
pub fn orbits(x: &Permutation, y: &Permutation) -> Vec<Vec<u32>> {
    orbits_of(&[x, y])
}

pub fn orbits_of(gens: &[&Permutation]) -> Vec<Vec<u32>> {
    let n = gens.first().map_or(0, |g| g.degree());
    let mut label = vec![usize::MAX; n];
    let mut out: Vec<Vec<u32>> = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut orbit = vec![start as u32];
        let mut idx = 0;
        while idx < orbit.len() {
            let p = orbit[idx] as usize;
            for g in gens {
                let q = g.table()[p] as usize;
                if label[q] == usize::MAX {
                    label[q] = id;
                    orbit.push(q as u32);
                }
            }
            idx += 1;
        }
        let mut orbit: Vec<u32> = orbit.into_iter().map(|p| p + 1).collect();
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut a: u32) -> u32 {
        while self.parent[a as usize] != a {
            let grand = self.parent[self.parent[a as usize] as usize];
            self.parent[a as usize] = grand;
            a = grand;
        }
        a
    }

    /// Returns the surviving root if a merge happened.
    fn union(&mut self, a: u32, b: u32) -> Option<u32> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop as usize] = keep;
        Some(keep)
    }
}

/// Finest block system in which `a` and `b` (0-based) share a block.
fn minimal_blocks(gens: &[&Permutation], a: u32, b: u32) -> Vec<Vec<u32>> {
    let n = gens[0].degree();
    let mut uf = UnionFind::new(n);
    let mut queue = Vec::new();
    if uf.union(a, b).is_some() {
        queue.push((a, b));
    }
    while let Some((u, v)) = queue.pop() {
        for g in gens {
            let (gu, gv) = (g.table()[u as usize], g.table()[v as usize]);
            if uf.union(gu, gv).is_some() {
                queue.push((gu, gv));
            }
        }
    }
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for p in 0..n as u32 {
        let r = uf.find(p) as usize;
        if index[r] == usize::MAX {
            index[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[index[r]].push(p + 1);
    }
    blocks
}

/// Primitivity of a transitive `⟨x, y⟩`. Returns `Ok(None)` when primitive,
/// otherwise a nontrivial block system.
pub fn is_primitive(x: &Permutation, y: &Permutation) -> Result<Option<Vec<Vec<u32>>>, CertifyError> {
    primitivity_of(&[x, y])
}

pub fn primitivity_of(gens: &[&Permutation]) -> Result<Option<Vec<Vec<u32>>>, CertifyError> {
    let orbit_count = orbits_of(gens).len();
    if orbit_count > 1 {
        return Err(CertifyError::Intransitive {
            orbits: orbit_count,
        });
    }
    let n = gens.first().map_or(0, |g| g.degree());
    for a in 1..n as u32 {
        let blocks = minimal_blocks(gens, 0, a);
        if blocks.len() > 1 {
            return Ok(Some(blocks));
        }
    }
    Ok(None)
}

/// Whether every generator maps each block onto a block.
pub fn is_block_system(gens: &[&Permutation], blocks: &[Vec<u32>]) -> bool {
    let n = gens.first().map_or(0, |g| g.degree());
    let mut owner = vec![usize::MAX; n + 1];
    for (idx, b) in blocks.iter().enumerate() {
        for &p in b {
            if owner[p as usize] != usize::MAX {
                return false;
            }
            owner[p as usize] = idx;
        }
    }
    if owner[1..].contains(&usize::MAX) {
        return false;
    }
    gens.iter().all(|g| {
        blocks.iter().all(|b| {
            let target = owner[g.image(b[0]) as usize];
            b.iter().all(|&p| owner[g.image(p) as usize] == target)
        })
    })
}

/// A single `p`-cycle witness, given as a power of a word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Word text including the outer exponent, e.g. `(x,y)^13`.
    pub word: String,
    pub p: usize,
}

/// Smallest `k ≥ 1` such that `(x,y)^k` is a single cycle of prime length
/// `p ≤ n−3` (restricted to `p = hint` when given). Returns `(k, p)`.
///
/// `c^k` is a single `p`-cycle iff `c` has exactly one cycle of length `p`,
/// every other cycle length divides `k`, and `p ∤ k`; so the least `k` for a
/// given `p` is the lcm of the other lengths, provided `p` does not divide it.
pub fn find_useful_cycle(
    x: &Permutation,
    y: &Permutation,
    hint: Option<usize>,
) -> Result<(u128, usize), CertifyError> {
    let c = x.commutator(y).map_err(WordError::from)?;
    useful_power(&c, hint).ok_or(CertifyError::NotFound)
}

pub(crate) fn useful_power(c: &Permutation, hint: Option<usize>) -> Option<(u128, usize)> {
    let n = c.degree();
    let ct = c.cycle_type();
    let lengths = ct.lengths();
    let mut best: Option<(u128, usize)> = None;
    for (idx, &p) in lengths.iter().enumerate() {
        if ct.count(p) != 1 || !is_prime(p as u64) || p + 3 > n {
            continue;
        }
        if hint.is_some_and(|h| h != p) {
            continue;
        }
        let k = lengths
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .fold(1u128, |acc, (_, &l)| lcm(acc, l as u128));
        if k % p as u128 == 0 {
            continue;
        }
        if best.is_none_or(|(bk, _)| k < bk) {
            best = Some((k, p));
        }
    }
    best
}

/// Evaluates `w` and checks that it is a single cycle of prime length `p ≤ n−3`.
pub fn check_witness(x: &Permutation, y: &Permutation, w: &Word) -> Result<usize, CertifyError> {
    let value = w.eval(x, y)?;
    check_cycle(&value)
}

fn check_cycle(value: &Permutation) -> Result<usize, CertifyError> {
    let n = value.degree();
    let ct = value.cycle_type();
    let p = ct
        .single_cycle()
        .ok_or_else(|| CertifyError::NotACycle(ct.to_string()))?;
    if !is_prime(p as u64) {
        return Err(CertifyError::PNotPrime(p));
    }
    if p + 3 > n {
        return Err(CertifyError::PTooLarge {
            p,
            bound: n.saturating_sub(3),
        });
    }
    Ok(p)
}

/// Order of a preimage of `x` in the double cover: 2 when `x` is a product
/// of `4k` transpositions, 4 when it is a product of `4k+2`.
pub fn lift_order(x: &Permutation) -> Result<u8, CertifyError> {
    let ct = x.cycle_type();
    if ct.order() > 2 || !ct.is_even() {
        return Err(CertifyError::NotEvenInvolution);
    }
    Ok(if ct.m() % 4 == 0 { 2 } else { 4 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Conclusion {
    /// `⟨x,y⟩ = Alt(n)` and the double cover is Hurwitz as well.
    CoverHurwitz,
    /// `⟨x,y⟩ = Alt(n)` but `x` lifts to an element of order 4.
    AltN,
    Fail,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::CoverHurwitz => "COVER_HURWITZ",
            Conclusion::AltN => "ALT_N",
            Conclusion::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    pub x: u128,
    pub y: u128,
    pub xy: u128,
}

/// Evidence for a verdict on one pair `(x, y)`. Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub degree: usize,
    pub orders: Orders,
    pub even: bool,
    pub transitive: bool,
    pub primitive: bool,
    pub witness: Option<Witness>,
    pub m: usize,
    pub lift_order: Option<u8>,
    pub conclusion: Conclusion,
    /// First failed check, when `conclusion` is `Fail`.
    pub reason: Option<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Runs every check on `(x, y)`. Failures are recorded in the certificate.
///
/// Without a witness word the commutator powers are searched; `hint`
/// restricts that search to one prime.
pub fn certify(x: &Permutation, y: &Permutation, witness: Option<&Word>) -> Certificate {
    certify_with_hint(x, y, witness, None)
}

pub fn certify_with_hint(
    x: &Permutation,
    y: &Permutation,
    witness: Option<&Word>,
    hint: Option<usize>,
) -> Certificate {
    let n = x.degree();
    let mut cert = Certificate {
        version: CERT_VERSION.to_string(),
        degree: n,
        orders: Orders { x: 0, y: 0, xy: 0 },
        even: false,
        transitive: false,
        primitive: false,
        witness: None,
        m: x.cycle_type().m(),
        lift_order: None,
        conclusion: Conclusion::Fail,
        reason: None,
    };
    let fail = |mut cert: Certificate, reason: String| {
        cert.reason = Some(reason);
        cert
    };
    if y.degree() != n {
        return fail(cert, format!("degree mismatch: {} vs {}", n, y.degree()));
    }
    let xy = x * y;
    let (ox, oy, oxy) = (x.order(), y.order(), xy.order());
    cert.orders = Orders {
        x: ox,
        y: oy,
        xy: oxy,
    };
    if (ox, oy, oxy) != (2, 3, 7) {
        return fail(cert, format!("order: ({ox},{oy},{oxy}) is not (2,3,7)"));
    }
    cert.even = x.is_even() && y.is_even();
    if !cert.even {
        return fail(cert, "parity: a generator is odd".into());
    }
    cert.lift_order = lift_order(x).ok();
    let orbit_count = orbits(x, y).len();
    cert.transitive = orbit_count == 1;
    if !cert.transitive {
        return fail(cert, format!("transitivity: {orbit_count} orbits"));
    }
    match is_primitive(x, y) {
        Ok(None) => cert.primitive = true,
        Ok(Some(blocks)) => {
            return fail(
                cert,
                format!("primitivity: blocks of size {}", blocks[0].len()),
            )
        }
        Err(e) => return fail(cert, format!("primitivity: {e}")),
    }
    let found = match witness {
        Some(w) => check_witness(x, y, w).map(|p| Witness {
            word: w.to_string(),
            p,
        }),
        None => find_useful_cycle(x, y, hint).map(|(k, p)| Witness {
            word: Word::commutator_power(k as u64).to_string(),
            p,
        }),
    };
    match found {
        Ok(w) => cert.witness = Some(w),
        Err(e) => return fail(cert, format!("witness: {e}")),
    }
    cert.conclusion = if cert.m % 4 == 0 {
        Conclusion::CoverHurwitz
    } else {
        Conclusion::AltN
    };
    cert
}

/// Jordan's criterion alone, for pairs of any orders: transitive, primitive,
/// even generators, and some power of the commutator a useful cycle.
pub fn generates_alternating(x: &Permutation, y: &Permutation) -> bool {
    x.is_even()
        && y.is_even()
        && orbits(x, y).len() == 1
        && matches!(is_primitive(x, y), Ok(None))
        && find_useful_cycle(x, y, None).is_ok()
}
