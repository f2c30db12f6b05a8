//! Permutations of the points `{1..n}`.
//!
//! Permutations act on the right: `j·(ab) = (j·a)·b`, so products read left
//! to right. Points are 1-based everywhere in the public API; the image table
//! is stored 0-based and never exposed as such.

use std::fmt;
use std::ops::Mul;

use thiserror::Error;

/// Errors raised while building or combining permutations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: u64, degree: usize },
    #[error("point {0} appears more than once")]
    RepeatedPoint(u32),
    #[error("cycle notation syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

/// A bijection of `{1..n}` stored as an image table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 1-based images: `images[j-1]` is the image of `j`.
    pub fn from_images(images: &[u32]) -> Result<Self, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        let mut table = Vec::with_capacity(degree);
        for &img in images {
            if img == 0 || img as usize > degree {
                return Err(PermError::PointOutOfRange {
                    point: img as u64,
                    degree,
                });
            }
            let z = img as usize - 1;
            if seen[z] {
                return Err(PermError::RepeatedPoint(img));
            }
            seen[z] = true;
            table.push(img - 1);
        }
        Ok(Permutation { images: table })
    }

    /// Builds a permutation of the given degree from disjoint cycles of 1-based points.
    pub fn from_cycles<C: AsRef<[u32]>>(degree: usize, cycles: &[C]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &p in cycle {
                if p == 0 || p as usize > degree {
                    return Err(PermError::PointOutOfRange {
                        point: p as u64,
                        degree,
                    });
                }
                if seen[p as usize - 1] {
                    return Err(PermError::RepeatedPoint(p));
                }
                seen[p as usize - 1] = true;
            }
            for (idx, &p) in cycle.iter().enumerate() {
                let next = cycle[(idx + 1) % cycle.len()];
                images[p as usize - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// The transposition `(a,b)` of the given degree.
    pub fn transposition(degree: usize, a: u32, b: u32) -> Result<Self, PermError> {
        Self::from_cycles(degree, &[[a, b]])
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)`.
    ///
    /// No whitespace is allowed inside a cycle; whitespace between cycles is
    /// ignored. The empty string is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let syntax = |offset: usize, message: &str| PermError::Syntax {
            offset,
            message: message.to_string(),
        };
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b'(' {
                return Err(syntax(pos, "expected '('"));
            }
            pos += 1;
            let mut cycle = Vec::new();
            loop {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(syntax(pos, "expected a point"));
                }
                let value: u64 = text[start..pos]
                    .parse()
                    .map_err(|_| syntax(start, "point too large"))?;
                if value == 0 || value > degree as u64 {
                    return Err(PermError::PointOutOfRange {
                        point: value,
                        degree,
                    });
                }
                cycle.push(value as u32);
                match bytes.get(pos) {
                    Some(b',') => pos += 1,
                    Some(b')') => {
                        pos += 1;
                        break;
                    }
                    Some(_) => return Err(syntax(pos, "expected ',' or ')'")),
                    None => return Err(syntax(pos, "unterminated cycle")),
                }
            }
            cycles.push(cycle);
        }
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point.
    ///
    /// Panics if `point` is not in `1..=degree`.
    pub fn image(&self, point: u32) -> u32 {
        self.images[point as usize - 1] + 1
    }

    /// 1-based image table.
    pub fn images(&self) -> Vec<u32> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    pub(crate) fn table(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &i)| i as usize == j)
    }

    pub fn fixes(&self, point: u32) -> bool {
        self.image(point) == point
    }

    fn check_degree(&self, other: &Permutation) -> Result<(), PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    /// `self` followed by `other`: `j ↦ other(self(j))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(other)?;
        Ok(Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (j, &i) in self.images.iter().enumerate() {
            images[i as usize] = j as u32;
        }
        Permutation { images }
    }

    /// `self^k`, computed cycle by cycle so the cost is `O(n)` for any `k`.
    pub fn power(&self, k: i64) -> Permutation {
        let mut images = vec![0; self.degree()];
        for cycle in self.zero_based_cycles(true) {
            let len = cycle.len() as i64;
            let shift = k.rem_euclid(len) as usize;
            for (idx, &p) in cycle.iter().enumerate() {
                images[p as usize] = cycle[(idx + shift) % cycle.len()];
            }
        }
        Permutation { images }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(g)?;
        // j·(g⁻¹pg) = ((j·g⁻¹)·p)·g, i.e. (j·g)·(g⁻¹pg) = (j·p)·g
        let mut images = vec![0; self.degree()];
        for (j, &i) in self.images.iter().enumerate() {
            images[g.images[j] as usize] = g.images[i as usize];
        }
        Ok(Permutation { images })
    }

    /// `self⁻¹ · other⁻¹ · self · other`.
    pub fn commutator(&self, other: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(other)?;
        let left = self.inverse().compose(&other.inverse())?;
        let right = self.compose(other)?;
        left.compose(&right)
    }

    fn zero_based_cycles(&self, with_fixed: bool) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            if with_fixed || cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        self.zero_based_cycles(false)
            .into_iter()
            .map(|c| c.into_iter().map(|p| p + 1).collect())
            .collect()
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        (1..=self.degree() as u32).filter(|&p| self.fixes(p)).collect()
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut lengths: Vec<usize> = self
            .zero_based_cycles(false)
            .iter()
            .map(Vec::len)
            .collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        let moved: usize = lengths.iter().sum();
        CycleType {
            degree: self.degree(),
            lengths,
            fixed_points: self.degree() - moved,
        }
    }

    pub fn order(&self) -> u128 {
        self.cycle_type().order()
    }

    pub fn is_even(&self) -> bool {
        self.cycle_type().is_even()
    }

    /// Disjoint union: `other` acts on the points shifted by `self.degree()`.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.degree() as u32;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&i| i + shift));
        Permutation { images }
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Left-to-right product. Panics on degree mismatch; use
    /// [`Permutation::compose`] for the fallible form.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs).expect("degree mismatch in permutation product")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            f.write_str("(")?;
            for (idx, p) in cycle.iter().enumerate() {
                if idx > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// Cycle structure of a permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    degree: usize,
    /// Lengths of the nontrivial cycles, largest first.
    lengths: Vec<usize>,
    fixed_points: usize,
}

impl CycleType {
    /// Builds a cycle type from nontrivial lengths; the rest are fixed points.
    ///
    /// Returns `None` if a length is below 2 or the lengths overflow the degree.
    pub fn new(degree: usize, lengths: &[usize]) -> Option<CycleType> {
        if lengths.iter().any(|&l| l < 2) {
            return None;
        }
        let moved: usize = lengths.iter().sum();
        if moved > degree {
            return None;
        }
        let mut lengths = lengths.to_vec();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Some(CycleType {
            degree,
            lengths,
            fixed_points: degree - moved,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn fixed_points(&self) -> usize {
        self.fixed_points
    }

    /// Number of cycles of the given length (length 1 counts fixed points).
    pub fn count(&self, length: usize) -> usize {
        if length == 1 {
            return self.fixed_points;
        }
        self.lengths.iter().filter(|&&l| l == length).count()
    }

    /// Number of 2-cycles.
    pub fn m(&self) -> usize {
        self.count(2)
    }

    pub fn is_even(&self) -> bool {
        self.lengths.iter().map(|l| l - 1).sum::<usize>() % 2 == 0
    }

    pub fn order(&self) -> u128 {
        self.lengths
            .iter()
            .fold(1u128, |acc, &l| lcm(acc, l as u128))
    }

    /// Length of the single nontrivial cycle, if there is exactly one.
    pub fn single_cycle(&self) -> Option<usize> {
        match self.lengths.as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }

    /// Number of points fixed by the `j`-th power of any element of this type.
    pub fn fixed_by_power(&self, j: u128) -> usize {
        self.fixed_points
            + self
                .lengths
                .iter()
                .filter(|&&l| j % l as u128 == 0)
                .sum::<usize>()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut idx = 0;
        while idx < self.lengths.len() {
            let l = self.lengths[idx];
            let run = self.lengths[idx..].iter().take_while(|&&x| x == l).count();
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{l}^{run}")?;
            first = false;
            idx += run;
        }
        if self.fixed_points > 0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "1^{}", self.fixed_points)?;
        }
        Ok(())
    }
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
