//! Free group words.
//!
//! A [`Word`] is always freely reduced; every constructor goes through
//! [`Word::reduce`]. Generators carry an optional chain of degeneracy
//! indices so that `s1.s0.x` names the generator obtained from the base
//! generator `x` by applying `s0` and then `s1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::ParseError;

/// A free generator of some degree of a free simplicial group.
///
/// `degeneracies` lists the applied degeneracy operators outermost first and
/// is kept strictly decreasing, which is the normal form given by the
/// simplicial identity `s_i s_j = s_{j+1} s_i` for `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    base: Arc<str>,
    degeneracies: Vec<u8>,
}

impl Generator {
    pub fn new(base: &str) -> Result<Self, ParseError> {
        validate_base_name(base)?;
        Ok(Generator { base: Arc::from(base), degeneracies: Vec::new() })
    }

    pub(crate) fn from_parts(base: Arc<str>, degeneracies: Vec<u8>) -> Self {
        debug_assert!(degeneracies.windows(2).all(|w| w[0] > w[1]));
        Generator { base, degeneracies }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub(crate) fn base_arc(&self) -> &Arc<str> {
        &self.base
    }

    pub fn degeneracies(&self) -> &[u8] {
        &self.degeneracies
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degeneracies.is_empty()
    }

    /// Applies `s_j` and renormalizes the degeneracy chain.
    pub fn degenerate(&self, j: u8) -> Generator {
        Generator { base: self.base.clone(), degeneracies: insert_degeneracy(j, &self.degeneracies) }
    }
}

/// Normal form of `s_j` composed on the left of a decreasing chain.
pub(crate) fn insert_degeneracy(j: u8, chain: &[u8]) -> Vec<u8> {
    match chain.split_first() {
        None => vec![j],
        Some((&first, rest)) => {
            if j > first {
                let mut out = Vec::with_capacity(chain.len() + 1);
                out.push(j);
                out.extend_from_slice(chain);
                out
            } else {
                // s_j s_i = s_{i+1} s_j for j <= i
                let mut out = vec![first + 1];
                out.extend(insert_degeneracy(j, rest));
                out
            }
        }
    }
}

fn validate_base_name(name: &str) -> Result<(), ParseError> {
    let bad =
        name.is_empty() || name == "1" || !name.is_ascii() || name.chars().any(|c| c == '*' || c == '^' || c == '.' || c.is_whitespace());
    if bad {
        return Err(ParseError::BadGenerator(name.to_string()));
    }
    Ok(())
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in &self.degeneracies {
            write!(f, "s{j}.")?;
        }
        f.write_str(&self.base)
    }
}

impl FromStr for Generator {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts: Vec<&str> = s.split('.').collect();
        let base = parts.pop().unwrap_or_default();
        validate_base_name(base)?;
        let mut degeneracies = Vec::with_capacity(parts.len());
        for p in parts {
            let idx = p.strip_prefix('s').and_then(|n| n.parse::<u8>().ok()).ok_or_else(|| ParseError::BadGenerator(s.to_string()))?;
            degeneracies.push(idx);
        }
        // Accept any order on input and normalize.
        let mut chain: Vec<u8> = Vec::new();
        for &j in degeneracies.iter().rev() {
            chain = insert_degeneracy(j, &chain);
        }
        Ok(Generator { base: Arc::from(base), degeneracies: chain })
    }
}

/// One signed letter `g^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: Generator, exponent: i8) -> Self {
        assert!(exponent == 1 || exponent == -1, "letter exponent must be ±1");
        Letter { generator, inverse: exponent < 0 }
    }

    pub fn exponent(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverted(&self) -> Letter {
        Letter { generator: self.generator.clone(), inverse: !self.inverse }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.inverse != other.inverse && self.generator == other.generator
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(g: Generator) -> Self {
        Word { letters: vec![Letter::new(g, 1)] }
    }

    /// Free reduction by a single left-to-right stack pass.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            if stack.last().is_some_and(|top| top.cancels(&l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        // Only the seam can cancel since both factors are reduced.
        let mut left = self.letters.clone();
        let mut i = 0;
        while i < other.letters.len() && left.last().is_some_and(|l| l.cancels(&other.letters[i])) {
            left.pop();
            i += 1;
        }
        left.extend_from_slice(&other.letters[i..]);
        Word { letters: left }
    }

    pub fn invert(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverted).collect() }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.multiply(b).multiply(&a.invert()).multiply(&b.invert())
    }

    pub fn exponent_sums(&self) -> ExponentVector {
        let mut v = ExponentVector::default();
        for l in &self.letters {
            v.add(&l.generator, l.exponent());
        }
        v
    }

    /// Prefix of the first `n` letters (reduced since `self` is).
    pub fn prefix(&self, n: usize) -> Word {
        Word { letters: self.letters[..n].to_vec() }
    }

    /// Letters from position `n` on.
    pub fn suffix(&self, n: usize) -> Word {
        Word { letters: self.letters[n..].to_vec() }
    }

    /// Generators occurring in the word, deduplicated and sorted.
    pub fn support(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self.letters.iter().map(|l| l.generator.clone()).collect();
        gens.sort();
        gens.dedup();
        gens
    }

    /// Homomorphic extension of a letter substitution.
    pub fn substitute<F>(&self, mut image: F) -> Word
    where
        F: FnMut(&Generator) -> Word,
    {
        let mut out = Word::identity();
        for l in &self.letters {
            let w = image(&l.generator);
            let w = if l.inverse { w.invert() } else { w };
            out = out.multiply(&w);
        }
        out
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{}", l.generator)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::identity());
        }
        if s.is_empty() {
            return Err(ParseError::BadToken(String::new()));
        }
        let mut letters = Vec::new();
        for token in s.split('*') {
            let (name, exponent) = match token.strip_suffix("^-1") {
                Some(name) => (name, -1),
                None => (token, 1),
            };
            if name == "1" {
                continue;
            }
            let generator: Generator = name.parse().map_err(|_| ParseError::BadToken(token.to_string()))?;
            letters.push(Letter::new(generator, exponent));
        }
        Ok(Word::reduce(letters))
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Image of a word in the abelianization: exponent sum per generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExponentVector(BTreeMap<Generator, i64>);

impl ExponentVector {
    pub fn add(&mut self, g: &Generator, n: i64) {
        let e = self.0.entry(g.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.0.remove(g);
        }
    }

    pub fn get(&self, g: &Generator) -> i64 {
        self.0.get(g).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Generator, &i64)> {
        self.0.iter()
    }

    pub fn plus(&self, other: &ExponentVector) -> ExponentVector {
        let mut out = self.clone();
        for (g, n) in other.iter() {
            out.add(g, *n);
        }
        out
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (g, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}:{n}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn g(s: &str) -> Generator {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation() {
        let x = g("x");
        let y = g("y");
        assert!(Word::reduce([Letter::new(x.clone(), 1), Letter::new(x.clone(), -1)]).is_identity());
        let inner =
            Word::reduce([Letter::new(x.clone(), 1), Letter::new(y.clone(), 1), Letter::new(y.clone(), -1), Letter::new(x.clone(), 1)]);
        assert_eq!(inner, w("x*x"));
        let comm = Word::reduce([Letter::new(x.clone(), 1), Letter::new(y.clone(), 1), Letter::new(x, -1), Letter::new(y, -1)]);
        assert_eq!(comm.len(), 4);
        assert_eq!(comm.to_string(), "x*y*x^-1*y^-1");
    }

    #[test]
    fn multiply_and_invert() {
        assert!(w("x").multiply(&w("x^-1")).is_identity());
        assert_eq!(w("x*y").invert(), w("y^-1*x^-1"));
        // [x,y][y,x] = 1 since [y,x] = [x,y]^{-1}
        let xy = Word::commutator(&w("x"), &w("y"));
        let yx = Word::commutator(&w("y"), &w("x"));
        assert!(xy.multiply(&yx).is_identity());
    }

    #[test]
    fn exponent_sums_examples() {
        assert!(Word::identity().exponent_sums().is_zero());
        let c = Word::commutator(&w("x"), &w("y"));
        assert_eq!(c.exponent_sums().get(&g("x")), 0);
        assert_eq!(c.exponent_sums().get(&g("y")), 0);
        let v = w("x*x*y^-1").exponent_sums();
        assert_eq!(v.get(&g("x")), 2);
        assert_eq!(v.get(&g("y")), -1);
    }

    #[test]
    fn text_syntax() {
        assert_eq!(Word::identity().to_string(), "1");
        assert_eq!(w("1"), Word::identity());
        let t = w("x1*y1*x1^-1*y1^-1");
        assert_eq!(t.to_string(), "x1*y1*x1^-1*y1^-1");
        assert_eq!(w("s0.x1*s1.s0.r").to_string(), "s0.x1*s1.s0.r");
        assert!("x**y".parse::<Word>().is_err());
        assert!("x^2".parse::<Word>().is_err());
        assert!(matches!("x* y".parse::<Word>(), Err(ParseError::BadToken(t)) if t == " y"));
    }

    #[test]
    fn degeneracy_normal_form() {
        // s0 s0 x = s1 s0 x
        let x = g("x");
        assert_eq!(x.degenerate(0).degenerate(0).to_string(), "s1.s0.x");
        assert_eq!(x.degenerate(0).degenerate(1).to_string(), "s1.s0.x");
        assert_eq!(x.degenerate(1).degenerate(0).to_string(), "s2.s0.x");
        assert_eq!(g("s0.s1.x"), g("s2.s0.x"));
    }
}
