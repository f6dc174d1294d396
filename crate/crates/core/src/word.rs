//! Generators and freely reduced syllable words.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator symbol. Indices are 1-based except `B`, which starts at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A(u32),
    B(u32),
    C,
    S(u32),
    U(u32),
    V(u32),
    Z(u32),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::A(i) => write!(f, "a_{i}"),
            Generator::B(i) => write!(f, "b_{i}"),
            Generator::C => write!(f, "c"),
            Generator::S(i) => write!(f, "s_{i}"),
            Generator::U(i) => write!(f, "u_{i}"),
            Generator::V(i) => write!(f, "v_{i}"),
            Generator::Z(i) => write!(f, "z_{i}"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownGenerator(s.to_string());
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str().trim_start_matches('_');
        if head == 'c' && rest.is_empty() {
            return Ok(Generator::C);
        }
        let idx: u32 = rest.parse().map_err(|_| bad())?;
        let g = match head {
            'a' => Generator::A(idx),
            'b' => Generator::B(idx),
            's' => Generator::S(idx),
            'u' => Generator::U(idx),
            'v' => Generator::V(idx),
            'z' => Generator::Z(idx),
            _ => return Err(bad()),
        };
        if idx == 0 && !matches!(g, Generator::B(_)) {
            return Err(bad());
        }
        Ok(g)
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Freely reduced word: adjacent syllables carry distinct generators and
/// no exponent is zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(Generator, i64)>", into = "Vec<(Generator, i64)>")]
pub struct Word {
    syllables: Vec<(Generator, i64)>,
}

impl From<Vec<(Generator, i64)>> for Word {
    fn from(v: Vec<(Generator, i64)>) -> Self {
        Word::from_syllables(v)
    }
}

impl From<Word> for Vec<(Generator, i64)> {
    fn from(w: Word) -> Self {
        w.syllables
    }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(g: Generator, e: i64) -> Self {
        let mut w = Word::identity();
        w.push(g, e);
        w
    }

    pub fn from_syllables<I: IntoIterator<Item = (Generator, i64)>>(it: I) -> Self {
        let mut w = Word::identity();
        for (g, e) in it {
            w.push(g, e);
        }
        w
    }

    /// Appends `g^e`, merging with the last syllable when possible.
    pub fn push(&mut self, g: Generator, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push((g, e));
    }

    pub fn append(&mut self, other: &Word) {
        for &(g, e) in &other.syllables {
            self.push(g, e);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word { syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..n.unsigned_abs() {
            w.append(&base);
        }
        w
    }

    /// `[x, y] = x y x^-1 y^-1`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    pub fn syllables(&self) -> &[(Generator, i64)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter length `sum |e|`.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|s| s.1.unsigned_abs()).sum()
    }

    /// Letters one at a time, as `(generator, +1 or -1)`.
    pub fn letters(&self) -> impl Iterator<Item = (Generator, i64)> + '_ {
        self.syllables.iter().flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    /// Exponent sum of `g`.
    pub fn exponent_sum(&self, g: Generator) -> i64 {
        self.syllables.iter().filter(|s| s.0 == g).map(|s| s.1).sum()
    }

    /// Replaces each generator through `f`.
    pub fn substitute<F: FnMut(Generator) -> Word>(&self, mut f: F) -> Word {
        let mut w = Word::identity();
        for &(g, e) in &self.syllables {
            w.append(&f(g).pow(e));
        }
        w
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (k, (g, e)) in self.syllables.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Syllable syntax: `a1^3 b_2^-1 c^2 (a1 a2)^-2`; `1` or the empty
    /// string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let w = p.sequence()?;
        p.skip_separators();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::WordParse(format!("{msg} at offset {}", self.pos))
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'*' | b'.' | b',')) {
            self.pos += 1;
        }
    }

    fn sequence(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        loop {
            self.skip_separators();
            match self.peek() {
                None | Some(b')') => return Ok(w),
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.sequence()?;
                    if self.peek() != Some(b')') {
                        return Err(self.error("missing ')'"));
                    }
                    self.pos += 1;
                    let e = self.exponent()?;
                    w.append(&inner.pow(e));
                }
                Some(b'1') if !self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    self.pos += 1;
                    if self.peek() == Some(b'_') {
                        self.pos += 1;
                    }
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                    let g: Generator = name.parse()?;
                    let e = self.exponent()?;
                    w.push(g, e);
                }
                Some(_) => return Err(self.error("unexpected character")),
            }
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap_or_default()
            .parse()
            .map_err(|_| self.error("bad exponent"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    #[test]
    fn free_reduction() {
        let w = Word::from_syllables([(A(1), 2), (A(1), -2), (B(0), 1)]);
        assert_eq!(w.syllables(), &[(B(0), 1)]);
        assert!(w.concat(&w.inverse()).is_empty());
    }

    #[test]
    fn parse_and_display() {
        let w: Word = "a1^3 b_2^-1 c^2".parse().unwrap();
        assert_eq!(w.syllables(), &[(A(1), 3), (B(2), -1), (C, 2)]);
        assert_eq!(w.to_string(), "a_1^3 b_2^-1 c^2");
        let v: Word = "(a1 a2)^-2".parse().unwrap();
        assert_eq!(v.to_string(), "a_2^-1 a_1^-1 a_2^-1 a_1^-1");
        assert_eq!("1".parse::<Word>().unwrap(), Word::identity());
        assert_eq!("a1a2a3".parse::<Word>().unwrap().len(), 3);
        assert!("q1".parse::<Word>().is_err());
        assert!("a0".parse::<Word>().is_err());
        assert!("(a1".parse::<Word>().is_err());
    }

    #[test]
    fn commutator_shape() {
        let c = Word::commutator(&Word::letter(A(1), 1), &Word::letter(A(2), 1));
        assert_eq!(c.to_string(), "a_1 a_2 a_1^-1 a_2^-1");
    }
}
