//! Necessary conditions that rule degrees out.
//!
//! * the genus formula `n = 84(g−1) + 21r + 28s + 36t`,
//! * the counting inequalities for `Alt(n)` and for its double cover,
//! * the fixed-space bound on the symmetric square of the deleted permutation
//!   module, which rules out `n = 21` even though the cover inequality holds.

use serde::Serialize;
use thiserror::Error;

use crate::perm::CycleType;
use crate::registry::catalog::is_hurwitz_degree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructError {
    #[error("cycle type has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("element order {0} is too large for character averaging")]
    OrderTooLarge(u128),
    #[error("character average {sum}/{order} is not an integer")]
    NonIntegral { sum: i128, order: u128 },
}

/// Non-negative `(g, r, s, t)` with `n = 84(g−1) + 21r + 28s + 36t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GenusSolution {
    pub g: u64,
    pub r: u64,
    pub s: u64,
    pub t: u64,
}

pub fn genus_solutions(n: u64) -> Vec<GenusSolution> {
    let mut out = Vec::new();
    // 84(g-1) <= n
    for g in 0..=n / 84 + 1 {
        let budget = n + 84;
        if 84 * g > budget {
            break;
        }
        let after_g = budget - 84 * g;
        for r in 0..=after_g / 21 {
            let after_r = after_g - 21 * r;
            for s in 0..=after_r / 28 {
                let rest = after_r - 28 * s;
                if rest % 36 == 0 {
                    out.push(GenusSolution {
                        g,
                        r,
                        s,
                        t: rest / 36,
                    });
                }
            }
        }
    }
    out
}

/// Necessary condition for `Alt(n)` to be Hurwitz:
/// `2⌊n/4⌋ + 2⌊n/3⌋ + 6⌊n/7⌋ ≥ 2n − 2`.
pub fn ineq_alt(n: u64) -> bool {
    2 * (n / 4) + 2 * (n / 3) + 6 * (n / 7) + 2 >= 2 * n
}

/// Necessary condition for the double cover of `Alt(n)` to be Hurwitz:
/// `4⌊n/8⌋ + 2⌊n/3⌋ + 6⌊n/7⌋ ≥ 2n − 2`.
pub fn ineq_cover(n: u64) -> bool {
    4 * (n / 8) + 2 * (n / 3) + 6 * (n / 7) + 2 >= 2 * n
}

/// Above this degree `ineq_cover` holds for every `n`: the left side is at
/// least `85n/42 − 10`, which exceeds `2n − 2` once `n ≥ 336`.
pub const INEQ_COVER_ANALYTIC_BOUND: u64 = 336;

/// Hurwitz degrees in `range` for which the cover inequality fails.
pub fn ineq3_failures(range: impl IntoIterator<Item = u64>) -> Vec<u64> {
    range
        .into_iter()
        .filter(|&n| is_hurwitz_degree(n) && !ineq_cover(n))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExceptionReason {
    /// The cover inequality fails.
    Ineq3,
    /// The symmetric-square bound fails (only `n = 21`).
    Lemma4,
}

impl ExceptionReason {
    pub fn tag(&self) -> &'static str {
        match self {
            ExceptionReason::Ineq3 => "INEQ3",
            ExceptionReason::Lemma4 => "LEMMA4",
        }
    }
}

/// Degrees at which `Alt(n)` is Hurwitz but its double cover is not.
pub fn exceptions() -> Vec<(u64, ExceptionReason)> {
    let mut out: Vec<(u64, ExceptionReason)> = ineq3_failures(1..=INEQ_COVER_ANALYTIC_BOUND)
        .into_iter()
        .map(|n| (n, ExceptionReason::Ineq3))
        .collect();
    if sym_square_contradiction().contradiction {
        out.push((21, ExceptionReason::Lemma4));
    }
    out.sort_unstable();
    out
}

pub fn exception_reason(n: u64) -> Option<ExceptionReason> {
    if !is_hurwitz_degree(n) {
        return None;
    }
    if !ineq_cover(n) {
        Some(ExceptionReason::Ineq3)
    } else if n == 21 {
        Some(ExceptionReason::Lemma4)
    } else {
        None
    }
}

/// Dimension of the fixed space of `⟨h⟩` on `Sym²(V)`, `V` the deleted
/// permutation module of degree `n`, for `h` of the given cycle type.
///
/// Averages `χ_S(h^j) = (χ_V(h^j)² + χ_V(h^{2j}))/2` over `j < o`, with
/// `χ_V(h^j) = fix(h^j) − 1`.
pub fn sym_square_fixed_dim(n: usize, cycle_type: &CycleType) -> Result<u64, ObstructError> {
    if cycle_type.degree() != n {
        return Err(ObstructError::DegreeMismatch {
            expected: n,
            found: cycle_type.degree(),
        });
    }
    let order = cycle_type.order();
    if order > 10_000_000 {
        return Err(ObstructError::OrderTooLarge(order));
    }
    let chi_v = |j: u128| cycle_type.fixed_by_power(j) as i128 - 1;
    // sum of 2·χ_S to stay in integers
    let twice: i128 = (0..order)
        .map(|j| {
            let c = chi_v(j);
            c * c + chi_v(2 * j)
        })
        .sum();
    let denom = 2 * order as i128;
    if twice % denom != 0 {
        return Err(ObstructError::NonIntegral {
            sum: twice,
            order: 2 * order,
        });
    }
    Ok((twice / denom) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedDimReport {
    /// Cycle type achieving the minimum, e.g. `2^8 1^5`.
    pub cycle_type: String,
    pub dimension: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymSquareReport {
    pub degree: usize,
    pub x: FixedDimReport,
    pub y: FixedDimReport,
    pub z: FixedDimReport,
    pub sum: u64,
    /// `dim Sym²(V) + 2`.
    pub bound: u64,
    pub contradiction: bool,
}

/// Transposition counts allowed for `x` at degree 21: a multiple of 4 (so `x`
/// lifts to an involution), leaving a number of fixed points that occurs in
/// some genus-formula solution.
pub fn sym_square_x_candidates() -> Vec<usize> {
    let n = 21usize;
    let genus_r: Vec<u64> = genus_solutions(n as u64).iter().map(|s| s.r).collect();
    (1..=n / 2)
        .filter(|m| m % 4 == 0)
        .filter(|m| genus_r.contains(&((n - 2 * m) as u64)))
        .collect()
}

/// Minimal fixed dimensions on `Sym²(V)` at degree 21 for `x` (with the
/// given transposition counts), `y` of order 3 and `z` of order 7, compared
/// with the bound `20·21/2 + 2`.
pub fn sym_square_with_x(x_transpositions: &[usize]) -> SymSquareReport {
    let n = 21usize;
    let minimise = |prime: usize, counts: &mut dyn Iterator<Item = usize>| {
        counts
            .map(|c| {
                let ct = CycleType::new(n, &vec![prime; c]).expect("fits in degree 21");
                let d = sym_square_fixed_dim(n, &ct).expect("small order");
                FixedDimReport {
                    cycle_type: ct.to_string(),
                    dimension: d,
                }
            })
            .min_by_key(|r| r.dimension)
            .expect("nonempty candidate set")
    };
    let x = minimise(2, &mut x_transpositions.iter().copied());
    let y = minimise(3, &mut (1..=n / 3));
    let z = minimise(7, &mut (1..=n / 7));
    let sum = x.dimension + y.dimension + z.dimension;
    let bound = ((n - 1) * n / 2 + 2) as u64;
    SymSquareReport {
        degree: n,
        x,
        y,
        z,
        sum,
        bound,
        contradiction: sum > bound,
    }
}

pub fn sym_square_contradiction() -> SymSquareReport {
    sym_square_with_x(&sym_square_x_candidates())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_examples() {
        assert!(genus_solutions(84).contains(&GenusSolution {
            g: 2,
            r: 0,
            s: 0,
            t: 0
        }));
        assert!(genus_solutions(21).contains(&GenusSolution {
            g: 0,
            r: 5,
            s: 0,
            t: 0
        }));
        // 1 + 84 = 21 + 28 + 36
        assert_eq!(
            genus_solutions(1),
            vec![GenusSolution {
                g: 0,
                r: 1,
                s: 1,
                t: 1
            }]
        );
        assert!(genus_solutions(2).is_empty());
    }

    #[test]
    fn genus_solutions_match_brute_force() {
        for n in 1..200u64 {
            let mut brute = Vec::new();
            for g in 0..5u64 {
                for r in 0..20u64 {
                    for s in 0..20u64 {
                        for t in 0..20u64 {
                            let lhs = 84 * g as i64 - 84 + 21 * r as i64 + 28 * s as i64 + 36 * t as i64;
                            if lhs == n as i64 {
                                brute.push(GenusSolution { g, r, s, t });
                            }
                        }
                    }
                }
            }
            let mut fast = genus_solutions(n);
            fast.sort_by_key(|s| (s.g, s.r, s.s, s.t));
            brute.sort_by_key(|s| (s.g, s.r, s.s, s.t));
            assert_eq!(fast, brute, "n = {n}");
        }
    }

    #[test]
    fn inequality_examples() {
        assert!(!ineq_alt(139));
        assert!(ineq_alt(28));
        assert!(!ineq_cover(15));
        assert!(ineq_cover(21));
        assert!(ineq_cover(56));
    }

    #[test]
    fn cover_inequality_holds_beyond_230() {
        assert!((231..=10_000).all(ineq_cover));
        assert!(ineq3_failures(300..=400).is_empty());
        assert!(ineq3_failures([21]).is_empty());
    }

    #[test]
    fn sym_square_examples() {
        let d = |lengths: &[usize]| {
            sym_square_fixed_dim(21, &CycleType::new(21, lengths).unwrap()).unwrap()
        };
        assert_eq!(d(&[]), 210);
        assert_eq!(d(&[2; 8]), 114);
        assert_eq!(d(&[2; 4]), 146);
        assert_eq!(d(&[3; 7]), 70);
        assert_eq!(d(&[7; 3]), 30);
    }

    #[test]
    fn sym_square_identity_only_reaches_full_dimension() {
        for lengths in [vec![2, 2], vec![3], vec![5, 5, 2, 2], vec![7], vec![20]] {
            let ct = CycleType::new(21, &lengths).unwrap();
            assert!(sym_square_fixed_dim(21, &ct).unwrap() < 210);
        }
        let wrong = CycleType::new(20, &[2, 2]).unwrap();
        assert!(matches!(
            sym_square_fixed_dim(21, &wrong),
            Err(ObstructError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn degree_21_forces_eight_transpositions() {
        assert_eq!(sym_square_x_candidates(), vec![8]);
        let r = sym_square_contradiction();
        assert_eq!(
            (r.x.dimension, r.y.dimension, r.z.dimension),
            (114, 70, 30)
        );
        assert_eq!(r.sum, 214);
        assert_eq!(r.bound, 212);
        assert!(r.contradiction);
        let relaxed = sym_square_with_x(&[4]);
        assert_eq!(relaxed.x.dimension, 146);
        assert!(relaxed.contradiction);
    }
}
