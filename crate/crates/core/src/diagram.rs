//! Diagrams: (2,3,7) triples with attachment handles, and the join calculus
//! that glues two of them into a larger one.

use std::fmt;

use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("x does not satisfy x^2 = 1")]
    XNotInvolution,
    #[error("y does not satisfy y^3 = 1")]
    YNotOrderThree,
    #[error("xy does not satisfy (xy)^7 = 1")]
    ProductNotOrderSeven,
    #[error("generator {0} is an odd permutation")]
    OddGenerator(&'static str),
    #[error("{handle} is not a valid handle of {diagram}")]
    InvalidHandle { diagram: String, handle: Handle },
    #[error("handle types differ: ({0}) vs ({1})")]
    HandleTypeMismatch(u8, u8),
    #[error("handle order {0} is outside 1..=6")]
    HandleOrderOutOfRange(u8),
    #[error("handles of the centre overlap: {0} and {1}")]
    OverlappingHandles(Handle, Handle),
    #[error("join {name} produced xy of order {order}, expected 7")]
    JoinOrder { name: String, order: u128 },
    #[error("G' requires the base diagram G of degree 42, got {name} of degree {degree}")]
    NotG { name: String, degree: usize },
}

/// A validated pair `(x, y)` with `x² = y³ = (xy)⁷ = 1`, both even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple237 {
    x: Permutation,
    y: Permutation,
    xy: Permutation,
}

impl Triple237 {
    pub fn new(x: Permutation, y: Permutation) -> Result<Triple237, DiagramError> {
        let xy = x.compose(&y)?;
        if !(&x * &x).is_identity() {
            return Err(DiagramError::XNotInvolution);
        }
        if !y.power(3).is_identity() {
            return Err(DiagramError::YNotOrderThree);
        }
        if !x.is_even() {
            return Err(DiagramError::OddGenerator("x"));
        }
        if !y.is_even() {
            return Err(DiagramError::OddGenerator("y"));
        }
        if !xy.power(7).is_identity() {
            return Err(DiagramError::ProductNotOrderSeven);
        }
        Ok(Triple237 { x, y, xy })
    }

    pub fn x(&self) -> &Permutation {
        &self.x
    }

    pub fn y(&self) -> &Permutation {
        &self.y
    }

    pub fn xy(&self) -> &Permutation {
        &self.xy
    }

    pub fn degree(&self) -> usize {
        self.x.degree()
    }

    pub fn signature(&self) -> Signature {
        let x = self.x.cycle_type();
        Signature {
            degree: self.degree(),
            r: x.fixed_points(),
            s: self.y.cycle_type().fixed_points(),
            t: self.xy.cycle_type().fixed_points(),
            m: x.m(),
        }
    }

    /// Handles of type `i`: ordered pairs `(j, k)` of distinct `x`-fixed
    /// points with `j·(xy)^i = k`, sorted by `j`.
    pub fn detect_handles(&self, i: u8) -> Vec<Handle> {
        let step = self.xy.power(i as i64);
        self.x
            .fixed_points()
            .into_iter()
            .filter_map(|j| {
                let k = step.image(j);
                (k != j && self.x.fixes(k)).then_some(Handle { i, j, k })
            })
            .collect()
    }

    pub fn is_handle(&self, h: &Handle) -> bool {
        (1..=6).contains(&h.i)
            && h.j != h.k
            && h.j >= 1
            && h.k >= 1
            && h.j as usize <= self.degree()
            && h.k as usize <= self.degree()
            && self.x.fixes(h.j)
            && self.x.fixes(h.k)
            && self.xy.power(h.i as i64).image(h.j) == h.k
    }
}

/// Fixed-point counts of `x`, `y`, `xy` and the number of 2-cycles of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Signature {
    pub degree: usize,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub m: usize,
}

/// An `(i)`-handle: `x` fixes `j` and `k`, and `(xy)^i` takes `j` to `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Handle {
    pub i: u8,
    pub j: u32,
    pub k: u32,
}

impl Handle {
    pub fn new(i: u8, j: u32, k: u32) -> Handle {
        Handle { i, j, k }
    }

    pub fn shifted(&self, offset: u32) -> Handle {
        Handle {
            i: self.i,
            j: self.j + offset,
            k: self.k + offset,
        }
    }

    pub fn overlaps(&self, other: &Handle) -> bool {
        [self.j, self.k].iter().any(|p| *p == other.j || *p == other.k)
    }
}

impl fmt::Display for Handle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}):{{{},{}}}", self.i, self.j, self.k)
    }
}

/// A named triple with its declared handles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    name: String,
    triple: Triple237,
    handles: Vec<Handle>,
}

impl Diagram {
    /// Every declared handle is checked against the triple.
    pub fn new(
        name: impl Into<String>,
        triple: Triple237,
        handles: Vec<Handle>,
    ) -> Result<Diagram, DiagramError> {
        let name = name.into();
        for h in &handles {
            if !triple.is_handle(h) {
                return Err(DiagramError::InvalidHandle {
                    diagram: name,
                    handle: *h,
                });
            }
        }
        Ok(Diagram {
            name,
            triple,
            handles,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Diagram {
        self.name = name.into();
        self
    }

    pub fn triple(&self) -> &Triple237 {
        &self.triple
    }

    pub fn degree(&self) -> usize {
        self.triple.degree()
    }

    pub fn x(&self) -> &Permutation {
        self.triple.x()
    }

    pub fn y(&self) -> &Permutation {
        self.triple.y()
    }

    pub fn m(&self) -> usize {
        self.triple.signature().m
    }

    pub fn declared_handles(&self) -> &[Handle] {
        &self.handles
    }

    pub fn detect_handles(&self, i: u8) -> Vec<Handle> {
        self.triple.detect_handles(i)
    }

    /// Handles of type `i` in attachment order: declared handles that are
    /// still valid come first, then the remaining detected ones.
    pub fn handles_of_type(&self, i: u8) -> Vec<Handle> {
        let mut out: Vec<Handle> = self
            .handles
            .iter()
            .filter(|h| h.i == i && self.triple.is_handle(h))
            .copied()
            .collect();
        for h in self.detect_handles(i) {
            if !out.contains(&h) {
                out.push(h);
            }
        }
        out
    }
}

/// Joins `b` onto `a` along matching handles:
/// `x = x_a · x_b · (j,j')(k,k')`, `y = y_a · y_b`, with `b` relabelled by
/// `deg(a)`.
pub fn join(a: &Diagram, ha: Handle, b: &Diagram, hb: Handle) -> Result<Diagram, DiagramError> {
    if !(1..=6).contains(&ha.i) {
        return Err(DiagramError::HandleOrderOutOfRange(ha.i));
    }
    if ha.i != hb.i {
        return Err(DiagramError::HandleTypeMismatch(ha.i, hb.i));
    }
    for (d, h) in [(a, &ha), (b, &hb)] {
        if !d.triple.is_handle(h) {
            return Err(DiagramError::InvalidHandle {
                diagram: d.name.clone(),
                handle: *h,
            });
        }
    }
    let offset = a.degree() as u32;
    let degree = a.degree() + b.degree();
    let hb = hb.shifted(offset);
    let glue = Permutation::from_cycles(degree, &[[ha.j, hb.j], [ha.k, hb.k]])?;
    let x = &a.x().direct_sum(b.x()) * &glue;
    let y = a.y().direct_sum(b.y());
    let name = format!("{}({}){}", a.name, ha.i, b.name);
    let order = x.compose(&y)?.order();
    if order != 7 {
        return Err(DiagramError::JoinOrder { name, order });
    }
    let triple = Triple237::new(x, y)?;
    // Carry over declared handles whose points are still fixed by x.
    let handles = a
        .handles
        .iter()
        .copied()
        .chain(b.handles.iter().map(|h| h.shifted(offset)))
        .filter(|h| triple.is_handle(h))
        .collect();
    Ok(Diagram {
        name,
        triple,
        handles,
    })
}

/// Sequentially joins each attachment onto `center` at the given centre handle.
pub fn multi_join(
    center: &Diagram,
    attachments: &[(&Diagram, Handle, Handle)],
) -> Result<Diagram, DiagramError> {
    for (idx, (_, a, _)) in attachments.iter().enumerate() {
        for (_, b, _) in &attachments[idx + 1..] {
            if a.overlaps(b) {
                return Err(DiagramError::OverlappingHandles(*a, *b));
            }
        }
    }
    let mut acc = center.clone();
    for (diagram, hc, hd) in attachments {
        acc = join(&acc, *hc, diagram, *hd)?;
    }
    Ok(acc)
}

/// The two moves of G's involution used to build G′.
pub const G_PRIME_TRANSPOSITIONS: [[u32; 2]; 2] = [[14, 32], [15, 33]];

/// G′: replaces `x` by `x·(14,32)(15,33)`, consuming the handles
/// `{14,15}` and `{32,33}` of G.
pub fn g_prime(g: &Diagram) -> Result<Diagram, DiagramError> {
    if g.name != "G" || g.degree() != 42 {
        return Err(DiagramError::NotG {
            name: g.name.clone(),
            degree: g.degree(),
        });
    }
    for [j, k] in [[14, 15], [32, 33]] {
        let h = Handle::new(1, j, k);
        if !g.triple.is_handle(&h) {
            return Err(DiagramError::InvalidHandle {
                diagram: g.name.clone(),
                handle: h,
            });
        }
    }
    let swap = Permutation::from_cycles(42, &G_PRIME_TRANSPOSITIONS)?;
    let x = g.x() * &swap;
    let order = x.compose(g.y())?.order();
    if order != 7 {
        return Err(DiagramError::JoinOrder {
            name: "G'".into(),
            order,
        });
    }
    let triple = Triple237::new(x, g.y().clone())?;
    let handles = g
        .handles
        .iter()
        .copied()
        .filter(|h| triple.is_handle(h))
        .collect();
    Ok(Diagram {
        name: "G'".into(),
        triple,
        handles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    /// A transitive (2,3,7) action on 7 points with x fixing 2, 3, 5.
    fn fano() -> Diagram {
        let y = perm("(1,2,3)(4,5,6)", 7);
        let x = perm("(1,4)(6,7)", 7);
        let t = Triple237::new(x, y).unwrap();
        Diagram::new("O", t, vec![]).unwrap()
    }

    #[test]
    fn triple_validation() {
        let e = Permutation::identity(5);
        assert!(Triple237::new(e.clone(), e.clone()).is_ok());
        let bad_x = perm("(1,2,3)", 5);
        assert_eq!(
            Triple237::new(bad_x, e.clone()),
            Err(DiagramError::XNotInvolution)
        );
        let odd = perm("(1,2)", 5);
        assert_eq!(
            Triple237::new(odd, e.clone()),
            Err(DiagramError::OddGenerator("x"))
        );
        let y = perm("(1,2,3)", 5);
        let x = perm("(1,4)(2,5)", 5);
        assert_eq!(Triple237::new(x, y), Err(DiagramError::ProductNotOrderSeven));
    }

    #[test]
    fn no_handles_without_two_fixed_points() {
        // x moves every point but one
        let y = perm("(1,2,3)(4,5,6)", 7);
        let x = perm("(1,4)(2,5)(3,6)", 7);
        if let Ok(t) = Triple237::new(x, y) {
            assert!(t.detect_handles(1).is_empty());
        }
        let t = Triple237::new(Permutation::identity(1), Permutation::identity(1)).unwrap();
        for i in 1..=6 {
            assert!(t.detect_handles(i).is_empty());
        }
    }

    #[test]
    fn fano_handles_and_self_join() {
        let o = fano();
        assert_eq!(o.triple().signature().r, 3);
        let hs = o.detect_handles(1);
        assert!(!hs.is_empty());
        for h in &hs {
            assert!(o.triple().is_handle(h));
        }
        let j = join(&o, hs[0], &o, hs[0]).unwrap();
        assert_eq!(j.degree(), 14);
        assert_eq!(j.m(), 2 + 2 + 2);
        assert_eq!(j.triple().signature().r, 3 + 3 - 4);
        assert_eq!(j.triple().xy().order(), 7);
        assert_eq!(j.name(), "O(1)O");
        // the consumed pair is gone
        for h in j.detect_handles(1) {
            assert!(!h.overlaps(&hs[0]) && !h.overlaps(&hs[0].shifted(7)));
        }
    }

    #[test]
    fn join_rejects_bad_handles() {
        let o = fano();
        let h = o.detect_handles(1)[0];
        let bogus = Handle::new(1, 1, 2);
        assert!(matches!(
            join(&o, bogus, &o, h),
            Err(DiagramError::InvalidHandle { .. })
        ));
        let h2 = Handle::new(2, h.j, h.k);
        assert!(matches!(
            join(&o, h, &o, h2),
            Err(DiagramError::HandleTypeMismatch(1, 2))
        ));
    }

    #[test]
    fn multi_join_empty_is_identity() {
        let o = fano();
        assert_eq!(multi_join(&o, &[]).unwrap(), o);
    }

    #[test]
    fn multi_join_rejects_overlap() {
        let o = fano();
        let h = o.detect_handles(1)[0];
        assert!(matches!(
            multi_join(&o, &[(&o, h, h), (&o, h, h)]),
            Err(DiagramError::OverlappingHandles(..))
        ));
    }

    #[test]
    fn g_prime_requires_g() {
        assert!(matches!(g_prime(&fano()), Err(DiagramError::NotG { .. })));
    }
}
