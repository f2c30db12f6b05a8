//! Hard-coded reference tables: the Hurwitz degrees below 168 and the
//! metadata of every base diagram used by the recipes.

use serde::Serialize;

/// Degrees `n < 168` for which `Alt(n)` is Hurwitz. Every `n ≥ 168` is.
pub const HURWITZ_BELOW_168: [u64; 101] = [
    15, 21, 22, //
    28, 29, 35, 36, 37, //
    42, 43, 45, 49, 50, 51, 52, //
    56, 57, 58, 63, 64, 65, 66, //
    70, 71, 72, 73, 77, 78, 79, 80, 81, //
    84, 85, 86, 87, 88, 91, 92, 93, 94, 96, //
    98, 99, 100, 101, 102, 105, 106, 107, 108, 109, //
    112, 113, 114, 115, 116, 117, 119, 120, 121, 122, 123, 124, //
    126, 127, 128, 129, 130, 132, 133, 134, 135, 136, 137, 138, //
    140, 141, 142, 143, 144, 145, 147, 148, 149, 150, 151, 152, 153, //
    154, 155, 156, 157, 158, 159, 160, 161, 162, 163, 164, 165, 166,
];

pub fn is_hurwitz_degree(n: u64) -> bool {
    n >= 168 || HURWITZ_BELOW_168.binary_search(&n).is_ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BaseDiagramMeta {
    pub name: &'static str,
    pub degree: usize,
    /// Number of 2-cycles of `x`.
    pub m: usize,
    /// Prime `p` such that a power of the commutator is a `p`-cycle.
    pub useful_prime: Option<usize>,
    /// Exact number of `(1)`-handles, where known.
    pub one_handles: Option<usize>,
}

const fn meta(name: &'static str, degree: usize, m: usize, p: usize) -> BaseDiagramMeta {
    BaseDiagramMeta {
        name,
        degree,
        m,
        useful_prime: if p == 0 { None } else { Some(p) },
        one_handles: None,
    }
}

const CATALOG: [BaseDiagramMeta; 28] = [
    meta("A", 14, 6, 0),
    meta("B", 15, 6, 0),
    meta("C", 21, 8, 0),
    meta("D", 22, 10, 0),
    meta("E", 28, 12, 0),
    BaseDiagramMeta {
        one_handles: Some(3),
        ..meta("G", 42, 18, 0)
    },
    meta("G'", 42, 20, 0),
    meta("J", 72, 34, 0),
    meta("O", 7, 2, 0),
    meta("P", 15, 6, 0),
    meta("Q", 21, 8, 0),
    meta("R", 22, 10, 0),
    meta("S", 36, 16, 0),
    meta("T", 66, 32, 0),
    meta("H0", 42, 18, 17),
    meta("H1", 57, 26, 5),
    meta("H2", 142, 68, 23),
    meta("H3", 115, 56, 17),
    meta("H4", 144, 70, 17),
    meta("H5", 187, 92, 43),
    meta("H6", 216, 106, 5),
    meta("H7", 77, 36, 17),
    meta("H8", 36, 16, 5),
    meta("H9", 135, 64, 19),
    meta("H10", 136, 66, 5),
    meta("H11", 165, 80, 19),
    meta("H12", 180, 88, 47),
    meta("H13", 195, 96, 23),
];

pub fn table2_catalog() -> &'static [BaseDiagramMeta] {
    &CATALOG
}

pub fn lookup(name: &str) -> Option<&'static BaseDiagramMeta> {
    let name = canonical_name(name);
    CATALOG.iter().find(|m| m.name == name)
}

/// The `H_i` diagram name for residue `i` (mod 14).
pub fn h_name(i: u64) -> String {
    format!("H{}", i % 14)
}

pub fn h_meta(i: u64) -> &'static BaseDiagramMeta {
    lookup(&h_name(i)).expect("H0..H13 are catalogued")
}

/// `H_i` whose `x` has `m ≡ 2 (mod 4)`.
pub const I1: [u64; 5] = [0, 1, 4, 6, 10];
/// `H_i` whose `x` has `m ≡ 0 (mod 4)`.
pub const I2: [u64; 9] = [2, 3, 5, 7, 8, 9, 11, 12, 13];

/// Normalises typographic variants: `H₈`, `H_8` → `H8`; `G′`, `G’` → `G'`.
pub fn canonical_name(name: &str) -> String {
    name.trim()
        .chars()
        .filter(|&c| c != '_')
        .map(|c| match c {
            '₀'..='₉' => char::from_digit(c as u32 - '₀' as u32, 10).unwrap(),
            '′' | '’' => '\'',
            c => c,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_is_sorted_and_below_168() {
        assert!(HURWITZ_BELOW_168.windows(2).all(|w| w[0] < w[1]));
        assert!(HURWITZ_BELOW_168.iter().all(|&n| n < 168));
        assert!(!is_hurwitz_degree(139));
        assert!(!is_hurwitz_degree(14));
        assert!(is_hurwitz_degree(168));
    }

    #[test]
    fn lookups() {
        let h8 = lookup("H₈").unwrap();
        assert_eq!((h8.degree, h8.m, h8.useful_prime), (36, 16, Some(5)));
        let t = lookup("T").unwrap();
        assert_eq!((t.degree, t.m, t.useful_prime), (66, 32, None));
        assert_eq!(lookup("G′").unwrap().m, 20);
        assert!(lookup("Z").is_none());
    }

    #[test]
    fn h_residues_match_degrees() {
        for i in 0..14 {
            assert_eq!(h_meta(i).degree as u64 % 14, i);
        }
    }

    #[test]
    fn i1_i2_split_by_m_mod_4() {
        for i in I1 {
            assert_eq!(h_meta(i).m % 4, 2, "H{i}");
        }
        for i in I2 {
            assert_eq!(h_meta(i).m % 4, 0, "H{i}");
        }
        let mut all: Vec<u64> = I1.iter().chain(I2.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..14).collect::<Vec<_>>());
    }
}
