//! Words in the generators `x` and `y`, such as `(xy^2xyxy^2xyxy)^44` or
//! `(x,y)^13`.
//!
//! Grammar:
//!
//! ```text
//! word  := group exp?
//! group := "(" body ")" | body
//! body  := atom+ | "x,y"            -- "x,y" only inside parentheses
//! atom  := "x" | "y" | "y^2" | "y2" | "y²"
//! exp   := "^" integer               -- only after a parenthesised group
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    X,
    Y,
    Y2,
    /// The commutator `(x,y) = x⁻¹y⁻¹xy`.
    Commutator,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    atoms: Vec<Atom>,
    exponent: u64,
}

impl Word {
    pub fn new(atoms: Vec<Atom>, exponent: u64) -> Option<Word> {
        if atoms.is_empty() || exponent == 0 {
            return None;
        }
        if atoms.contains(&Atom::Commutator) && atoms.len() != 1 {
            return None;
        }
        Some(Word { atoms, exponent })
    }

    /// The word `(x,y)^k`.
    pub fn commutator_power(k: u64) -> Word {
        Word {
            atoms: vec![Atom::Commutator],
            exponent: k.max(1),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Same word with a different outer exponent.
    pub fn with_exponent(&self, exponent: u64) -> Word {
        Word {
            atoms: self.atoms.clone(),
            exponent: exponent.max(1),
        }
    }

    /// Value of the word before the outer exponent is applied.
    pub fn eval_base(&self, x: &Permutation, y: &Permutation) -> Result<Permutation, WordError> {
        if x.degree() != y.degree() {
            return Err(PermError::DegreeMismatch(x.degree(), y.degree()).into());
        }
        let y2 = y * y;
        let mut acc = Permutation::identity(x.degree());
        for atom in &self.atoms {
            acc = match atom {
                Atom::X => &acc * x,
                Atom::Y => &acc * y,
                Atom::Y2 => &acc * &y2,
                Atom::Commutator => &acc * &x.commutator(y)?,
            };
        }
        Ok(acc)
    }

    /// Left-to-right product of the atoms, raised to the outer exponent.
    pub fn eval(&self, x: &Permutation, y: &Permutation) -> Result<Permutation, WordError> {
        let base = self.eval_base(x, y)?;
        Ok(base.power((self.exponent % i64::MAX as u64) as i64))
    }
}

pub fn parse_word(text: &str) -> Result<Word, WordError> {
    Parser { text, pos: 0 }.word()
}

pub fn eval_word(w: &Word, x: &Permutation, y: &Permutation) -> Result<Permutation, WordError> {
    w.eval(x, y)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, offset: usize, message: &str) -> Result<T, WordError> {
        Err(WordError::Syntax {
            offset,
            message: message.to_string(),
        })
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn word(mut self) -> Result<Word, WordError> {
        if self.text.is_empty() {
            return self.err(0, "empty word");
        }
        let (atoms, exponent) = if self.rest().starts_with('(') {
            self.pos += 1;
            let atoms = if self.rest().starts_with("x,y") {
                self.pos += 3;
                vec![Atom::Commutator]
            } else {
                self.atoms()?
            };
            if !self.rest().starts_with(')') {
                return self.err(self.pos, "expected ')'");
            }
            self.pos += 1;
            let exponent = if self.rest().starts_with('^') {
                self.pos += 1;
                self.exponent()?
            } else {
                1
            };
            (atoms, exponent)
        } else {
            (self.atoms()?, 1)
        };
        if self.pos != self.text.len() {
            return self.err(self.pos, "unexpected trailing input");
        }
        Ok(Word { atoms, exponent })
    }

    fn atoms(&mut self) -> Result<Vec<Atom>, WordError> {
        let mut atoms = Vec::new();
        loop {
            let rest = self.rest();
            if rest.starts_with('x') {
                self.pos += 1;
                atoms.push(Atom::X);
            } else if rest.starts_with('y') {
                self.pos += 1;
                let rest = self.rest();
                if rest.starts_with("^2") {
                    self.pos += 2;
                    atoms.push(Atom::Y2);
                } else if rest.starts_with('^') {
                    return self.err(self.pos, "only y^2 is allowed as an inner power");
                } else if rest.starts_with('2') {
                    self.pos += 1;
                    atoms.push(Atom::Y2);
                } else if rest.starts_with('²') {
                    self.pos += '²'.len_utf8();
                    atoms.push(Atom::Y2);
                } else {
                    atoms.push(Atom::Y);
                }
            } else {
                break;
            }
        }
        if atoms.is_empty() {
            return self.err(self.pos, "expected 'x' or 'y'");
        }
        Ok(atoms)
    }

    fn exponent(&mut self) -> Result<u64, WordError> {
        let start = self.pos;
        if self.rest().starts_with('-') {
            return self.err(start, "exponent must be positive");
        }
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err(start, "expected an exponent");
        }
        self.pos += digits;
        let value: u64 = match self.text[start..self.pos].parse() {
            Ok(v) => v,
            Err(_) => return self.err(start, "exponent too large"),
        };
        if value == 0 {
            return self.err(start, "exponent must be positive");
        }
        Ok(value)
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        parse_word(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms == [Atom::Commutator] {
            f.write_str("(x,y)")?;
        } else {
            if self.exponent != 1 {
                f.write_str("(")?;
            }
            for atom in &self.atoms {
                f.write_str(match atom {
                    Atom::X => "x",
                    Atom::Y => "y",
                    Atom::Y2 => "y^2",
                    Atom::Commutator => unreachable!(),
                })?;
            }
            if self.exponent != 1 {
                f.write_str(")")?;
            }
        }
        if self.exponent != 1 {
            write!(f, "^{}", self.exponent)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Atom::*;

    #[test]
    fn parses_single_atom() {
        assert_eq!(parse_word("x").unwrap(), Word::new(vec![X], 1).unwrap());
    }

    #[test]
    fn parses_powered_group() {
        let w = parse_word("(xy^2xyxyxy^2)^24").unwrap();
        assert_eq!(w.atoms(), &[X, Y2, X, Y, X, Y, X, Y2]);
        assert_eq!(w.exponent(), 24);
    }

    #[test]
    fn parses_commutator() {
        let w = parse_word("(x,y)^13").unwrap();
        assert_eq!(w.atoms(), &[Commutator]);
        assert_eq!(w.exponent(), 13);
        assert_eq!(w.to_string(), "(x,y)^13");
        assert_eq!(parse_word("(x,y)").unwrap().to_string(), "(x,y)");
    }

    #[test]
    fn accepts_y2_aliases() {
        let a = parse_word("(xy^2)^3").unwrap();
        assert_eq!(parse_word("(xy2)^3").unwrap(), a);
        assert_eq!(parse_word("(xy²)^3").unwrap(), a);
        assert_eq!(a.to_string(), "(xy^2)^3");
    }

    #[test]
    fn rejects_malformed_words() {
        for bad in [
            "", "(", "()", "(xy", "(xy)^", "(xy)^0", "(xy)^-3", "xy^3", "x,y", "(x,y,x)",
            "((x,y))", "(xz)", "(xy)^2x", "xy)^2",
        ] {
            assert!(parse_word(bad).is_err(), "{bad:?} should be rejected");
        }
        match parse_word("(xy)^0") {
            Err(WordError::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eval_single_generator() {
        let x = Permutation::parse_cycles("(1,2)", 3).unwrap();
        let y = Permutation::parse_cycles("(1,2,3)", 3).unwrap();
        assert_eq!(parse_word("x").unwrap().eval(&x, &y).unwrap(), x);
        assert_eq!(parse_word("y2").unwrap().eval(&x, &y).unwrap(), y.inverse());
        let c = parse_word("(x,y)").unwrap().eval(&x, &y).unwrap();
        assert_eq!(c, x.commutator(&y).unwrap());
    }

    #[test]
    fn eval_rejects_degree_mismatch() {
        let x = Permutation::identity(3);
        let y = Permutation::identity(4);
        assert!(parse_word("xy").unwrap().eval(&x, &y).is_err());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        let atoms = prop::collection::vec(prop_oneof![Just(X), Just(Y), Just(Y2)], 1..20);
        prop_oneof![
            (atoms, 1u64..100_000).prop_map(|(a, e)| Word::new(a, e).unwrap()),
            (1u64..100_000).prop_map(Word::commutator_power),
        ]
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(w in arb_word()) {
            prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        }

        #[test]
        fn outer_exponent_is_a_power(w in arb_word(), k in 1u64..500, seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut v: Vec<u32> = (1..=12).collect();
            v.shuffle(&mut rng);
            let x = Permutation::from_images(&v).unwrap();
            v.shuffle(&mut rng);
            let y = Permutation::from_images(&v).unwrap();
            let once = w.with_exponent(1).eval(&x, &y).unwrap();
            prop_assert_eq!(w.with_exponent(k).eval(&x, &y).unwrap(), once.power(k as i64));
        }
    }
}
