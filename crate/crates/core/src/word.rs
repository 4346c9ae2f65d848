//! Free-group words in run-length normal form.
//!
//! A [`Word`] is a sequence of `(generator, exponent)` runs with nonzero
//! exponents and no two adjacent runs on the same generator. Every
//! constructor reduces eagerly, so structural equality is equality in the
//! free group.
//!
//! Exponents are `i64`. The admissible range is `-i64::MAX..=i64::MAX`;
//! any operation whose result would leave it returns
//! [`WordError::Overflow`] (the `try_*` methods) or panics with that
//! message (the operator impls).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("exponent overflow while combining runs of `{0}`")]
    Overflow(Generator),
    #[error("generator `{0}` has no image in the substitution")]
    Unmapped(Generator),
    #[error("empty generator name")]
    EmptyName,
    #[error("cannot parse word token `{0}`")]
    Parse(String),
}

/// A named free generator. Names are compared exactly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Generator(String);

impl Generator {
    pub fn new(name: impl Into<String>) -> Result<Self, WordError> {
        let name = name.into();
        if name.is_empty() {
            return Err(WordError::EmptyName);
        }
        Ok(Generator(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Generator {
    /// Panics on the empty string; use [`Generator::new`] for untrusted input.
    fn from(s: &str) -> Self {
        Generator::new(s).expect("generator name must be nonempty")
    }
}

/// Single letter of an expanded word: a generator with exponent `+1` or `-1`.
pub type Letter = (Generator, i8);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    runs: Vec<(Generator, i64)>,
}

fn push_run(runs: &mut Vec<(Generator, i64)>, g: Generator, e: i64) -> Result<(), WordError> {
    if e == 0 {
        return Ok(());
    }
    if let Some(last) = runs.last_mut() {
        if last.0 == g {
            let sum = last.1.checked_add(e).filter(|s| *s != i64::MIN);
            match sum {
                Some(0) => {
                    runs.pop();
                }
                Some(s) => last.1 = s,
                None => return Err(WordError::Overflow(g)),
            }
            return Ok(());
        }
    }
    if e == i64::MIN {
        return Err(WordError::Overflow(g));
    }
    runs.push((g, e));
    Ok(())
}

impl Word {
    pub fn identity() -> Self {
        Word { runs: Vec::new() }
    }

    /// The one-letter word `g`.
    pub fn gen(g: impl Into<Generator>) -> Self {
        Word::power(g, 1)
    }

    /// `g^e`.
    pub fn power(g: impl Into<Generator>, e: i64) -> Self {
        Word::reduce([(g.into(), e)]).expect("a single run cannot overflow unless e == i64::MIN")
    }

    /// Freely reduce a sequence of `(generator, exponent)` pairs.
    pub fn reduce<I>(letters: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = (Generator, i64)>,
    {
        let mut runs = Vec::new();
        for (g, e) in letters {
            push_run(&mut runs, g, e)?;
        }
        Ok(Word { runs })
    }

    /// Build from string names; convenience for literals in tests and fixtures.
    pub fn from_pairs(pairs: &[(&str, i64)]) -> Self {
        Word::reduce(pairs.iter().map(|(g, e)| (Generator::from(*g), *e)))
            .expect("literal word overflow")
    }

    pub fn runs(&self) -> &[(Generator, i64)] {
        &self.runs
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of letters, i.e. the sum of absolute exponents.
    pub fn letter_len(&self) -> u128 {
        self.runs.iter().map(|(_, e)| e.unsigned_abs() as u128).sum()
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.runs.iter().map(|(g, _)| g)
    }

    /// Expanded letter sequence. Only sensible for words of moderate length.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (g, e) in &self.runs {
            let s = if *e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                out.push((g.clone(), s));
            }
        }
        out
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Word::reduce(letters.iter().map(|(g, s)| (g.clone(), *s as i64)))
            .expect("letter sequences are too short to overflow")
    }

    pub fn try_mul(&self, other: &Word) -> Result<Word, WordError> {
        let mut runs = self.runs.clone();
        for (g, e) in &other.runs {
            push_run(&mut runs, g.clone(), *e)?;
        }
        Ok(Word { runs })
    }

    pub fn inverse(&self) -> Word {
        // exponents never equal i64::MIN, so negation is exact
        Word {
            runs: self.runs.iter().rev().map(|(g, e)| (g.clone(), -e)).collect(),
        }
    }

    /// `self^n` for any integer `n`, computed on the cyclically reduced core.
    pub fn try_pow(&self, n: i64) -> Result<Word, WordError> {
        if n == 0 || self.is_identity() {
            return Ok(Word::identity());
        }
        let (core, conj) = self.cyclic_reduce();
        let base = if n < 0 { core.inverse() } else { core };
        let count = n.unsigned_abs();
        let body = if base.runs.len() == 1 {
            let (g, e) = &base.runs[0];
            let total = (*e as i128) * (count as i128);
            let total = i64::try_from(total)
                .ok()
                .filter(|t| *t != i64::MIN)
                .ok_or_else(|| WordError::Overflow(g.clone()))?;
            Word::reduce([(g.clone(), total)])?
        } else {
            // cyclically reduced with distinct end generators: plain concatenation
            let mut runs = Vec::with_capacity(base.runs.len() * count as usize);
            for _ in 0..count {
                runs.extend(base.runs.iter().cloned());
            }
            Word { runs }
        };
        conj.try_mul(&body)?.try_mul(&conj.inverse())
    }

    /// `by · self · by⁻¹`.
    pub fn try_conjugate(&self, by: &Word) -> Result<Word, WordError> {
        by.try_mul(self)?.try_mul(&by.inverse())
    }

    pub fn conjugate(&self, by: &Word) -> Word {
        self.try_conjugate(by).expect("word exponent overflow")
    }

    pub fn pow(&self, n: i64) -> Word {
        self.try_pow(n).expect("word exponent overflow")
    }

    pub fn substitute(&self, map: &Substitution) -> Result<Word, WordError> {
        map.apply(self)
    }

    /// Split into `(core, conjugator)` with `self = conjugator · core · conjugator⁻¹`
    /// and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut runs: std::collections::VecDeque<(Generator, i64)> =
            self.runs.iter().cloned().collect();
        let mut conj: Vec<(Generator, i64)> = Vec::new();
        while runs.len() >= 2 && runs.front().map(|r| &r.0) == runs.back().map(|r| &r.0) {
            let (g, first) = runs.pop_front().unwrap();
            let (_, last) = runs.pop_back().unwrap();
            conj.push((g.clone(), first));
            // x = g^first · mid · g^last = g^first · (mid · g^(first+last)) · g^-first
            let merged = first as i128 + last as i128;
            if merged != 0 {
                runs.push_back((g, i64::try_from(merged).expect("exponent overflow in cyclic reduction")));
            }
        }
        let conjugator = Word::reduce(conj).expect("conjugator runs come from a reduced word");
        (Word { runs: runs.into_iter().collect() }, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.runs.len() < 2 || self.runs[0].0 != self.runs[self.runs.len() - 1].0
    }

    /// Free-group conjugacy: cyclic cores agree up to rotation.
    pub fn is_conjugate(&self, other: &Word) -> bool {
        let (a, _) = self.cyclic_reduce();
        let (b, _) = other.cyclic_reduce();
        if a.runs.len() != b.runs.len() {
            return false;
        }
        if a.runs.len() <= 1 {
            return a == b;
        }
        // Cores have at least two runs and distinct end generators, so the
        // cyclic run sequence is well defined; compare up to rotation.
        let n = a.runs.len();
        (0..n).any(|shift| (0..n).all(|i| a.runs[(i + shift) % n] == b.runs[i]))
    }

    /// Conjugate to `other` or to `other⁻¹`.
    pub fn is_conjugate_up_to_inverse(&self, other: &Word) -> bool {
        self.is_conjugate(other) || self.is_conjugate(&other.inverse())
    }

    /// Find `c` with `c · self · c⁻¹ = other`, if the two are conjugate.
    pub fn conjugator_to(&self, other: &Word) -> Option<Word> {
        if !self.is_conjugate(other) {
            return None;
        }
        let (a, ca) = self.cyclic_reduce();
        let (b, cb) = other.cyclic_reduce();
        // b = r · a · r⁻¹ for a rotation r of a; then other = cb·r·ca⁻¹ · self · (..)⁻¹
        let letters = a.letters();
        let n = letters.len();
        for k in 0..n.max(1) {
            let prefix = Word::from_letters(&letters[..k]);
            let rotated = a.conjugate(&prefix.inverse());
            if rotated == b {
                let c = cb.try_mul(&prefix.inverse()).ok()?.try_mul(&ca.inverse()).ok()?;
                return Some(c);
            }
        }
        None
    }

    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        let total: i128 = self.runs.iter().filter(|(h, _)| h == g).map(|(_, e)| *e as i128).sum();
        i64::try_from(total).expect("exponent sum overflow")
    }

    /// True iff no run has a negative exponent on one of `forbidden`.
    pub fn is_positive_excluding(&self, forbidden: &[Generator]) -> bool {
        !self.runs.iter().any(|(g, e)| *e < 0 && forbidden.contains(g))
    }

    /// Parse the plain-text form, e.g. `"b a b^-2 a"`. `"1"` and `""` are the identity.
    pub fn parse(text: &str) -> Result<Word, WordError> {
        let mut pairs = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| WordError::Parse(tok.to_string()))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            if name.is_empty() || name.contains(['(', ')', '^']) {
                return Err(WordError::Parse(tok.to_string()));
            }
            pairs.push((Generator::new(name)?, exp));
        }
        Word::reduce(pairs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
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

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.try_mul(rhs).expect("word exponent overflow")
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.runs.len()))?;
        for (g, e) in &self.runs {
            seq.serialize_element(&(g.name(), e))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(String, i64)> = Vec::deserialize(d)?;
        let mut letters = Vec::with_capacity(pairs.len());
        for (name, e) in pairs {
            letters.push((Generator::new(name).map_err(de::Error::custom)?, e));
        }
        Word::reduce(letters).map_err(de::Error::custom)
    }
}

/// A homomorphism of free groups given by generator images.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Substitution {
    images: BTreeMap<Generator, Word>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn with(mut self, g: impl Into<Generator>, image: Word) -> Self {
        self.images.insert(g.into(), image);
        self
    }

    pub fn insert(&mut self, g: impl Into<Generator>, image: Word) {
        self.images.insert(g.into(), image);
    }

    /// Substitution that fixes every generator not explicitly mapped.
    pub fn get(&self, g: &Generator) -> Option<&Word> {
        self.images.get(g)
    }

    pub fn images(&self) -> impl Iterator<Item = (&Generator, &Word)> {
        self.images.iter()
    }

    pub fn apply(&self, x: &Word) -> Result<Word, WordError> {
        let mut out = Word::identity();
        for (g, e) in x.runs() {
            let image = self.images.get(g).ok_or_else(|| WordError::Unmapped(g.clone()))?;
            out = out.try_mul(&image.try_pow(*e)?)?;
        }
        Ok(out)
    }

    /// Like [`apply`](Self::apply) but unmapped generators are left fixed.
    pub fn apply_partial(&self, x: &Word) -> Result<Word, WordError> {
        let mut out = Word::identity();
        for (g, e) in x.runs() {
            let piece = match self.images.get(g) {
                Some(image) => image.try_pow(*e)?,
                None => Word::power(g.clone(), *e),
            };
            out = out.try_mul(&piece)?;
        }
        Ok(out)
    }

    /// The map `x ↦ then(self(x))`.
    pub fn then(&self, then: &Substitution) -> Result<Substitution, WordError> {
        let mut images = BTreeMap::new();
        for (g, w) in &self.images {
            images.insert(g.clone(), then.apply(w)?);
        }
        Ok(Substitution { images })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    #[test]
    fn reduce_cancels_and_merges() {
        assert_eq!(w("a b b^-1 a"), Word::power("a", 2));
        assert!(Word::reduce(Vec::new()).unwrap().is_identity());
        // h^-2 h^-1 h^2 h
        assert!(w("h^-2 h^-1 h^2 h").is_identity());
    }

    #[test]
    fn overflow_is_reported() {
        let big = Word::power("a", i64::MAX);
        assert_eq!(big.try_mul(&Word::gen("a")), Err(WordError::Overflow("a".into())));
        assert!(big.try_pow(2).is_err());
        assert!(Word::reduce([(Generator::from("a"), i64::MIN)]).is_err());
    }

    #[test]
    fn group_operations() {
        assert!((&w("b a") * &w("a^-1 b^-1")).is_identity());
        assert_eq!(w("a").conjugate(&w("b a")), w("b a b^-1"));
        assert_eq!(w("a^-7 b^3 a").inverse(), w("a^-1 b^-3 a^7"));
    }

    #[test]
    fn substitution_examples() {
        // v = 0: xi -> h, alpha -> h g^-1, gamma -> g^-1 h
        let s = Substitution::new()
            .with("xi", w("h"))
            .with("alpha", w("h g^-1"))
            .with("gamma", w("g^-1 h"));
        assert!(w("xi^-1 alpha xi gamma^-1").substitute(&s).unwrap().is_identity());
        let s = Substitution::new().with("h", w("b a"));
        assert_eq!(w("h").substitute(&s).unwrap(), w("b a"));
        let s = Substitution::new().with("g", w("b a").pow(2) * w("b"));
        assert_eq!(w("g").substitute(&s).unwrap(), w("b a b a b"));
    }

    #[test]
    fn unmapped_generator_is_named() {
        let s = Substitution::new().with("a", w("b"));
        assert_eq!(w("a c").substitute(&s), Err(WordError::Unmapped("c".into())));
    }

    #[test]
    fn cyclic_reduction_and_conjugacy() {
        let x = w("b a^2 c a^-1 b^-1");
        let (core, conj) = x.cyclic_reduce();
        assert!(core.is_cyclically_reduced());
        assert_eq!(core.conjugate(&conj), x);
        assert_eq!(core, w("c a"));
        assert_eq!(conj, w("b a^2"));
        assert!(!w("a").is_conjugate(&w("b")));
        assert!(w("a b c").is_conjugate(&w("c a b")));
        assert!(!w("a b c").is_conjugate(&w("a c b")));
        assert!(w("a^3 b").is_conjugate(&w("a b a^2")));
    }

    #[test]
    fn conjugator_is_a_witness() {
        let x = w("a b^2 c");
        let y = x.conjugate(&w("c^-1 a b"));
        let c = x.conjugator_to(&y).unwrap();
        assert_eq!(x.conjugate(&c), y);
    }

    #[test]
    fn positivity_and_sums() {
        let forbidden = [Generator::from("a"), Generator::from("b")];
        assert!(w("b^3").is_positive_excluding(&forbidden));
        assert!(!w("b^-1").is_positive_excluding(&forbidden));
        assert!(w("c^-1 b").is_positive_excluding(&forbidden));
        assert_eq!(w("b a b^-2 a").exponent_sum(&"a".into()), 2);
        assert_eq!(w("b a b^-2 a").exponent_sum(&"b".into()), -1);
    }

    #[test]
    fn text_and_json_forms() {
        let x = w("b a b^-2 a");
        assert_eq!(x.to_string(), "b a b^-2 a");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"[["b",1],["a",1],["b",-2],["a",1]]"#);
        let back: Word = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        // unreduced JSON input is reduced on load
        let y: Word = serde_json::from_str(r#"[["a",1],["a",-1],["b",2]]"#).unwrap();
        assert_eq!(y, w("b^2"));
        assert!(Word::parse("a^x").is_err());
        assert_eq!(Word::identity().to_string(), "1");
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, -3i64..=3), 0..12).prop_map(|v| {
            Word::reduce(v.into_iter().map(|(g, e)| (Generator::from(["a", "b", "c"][g]), e))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(x in arb_word()) {
            prop_assert_eq!(Word::reduce(x.runs().iter().cloned()).unwrap(), x.clone());
            prop_assert!((&x * &x.inverse()).is_identity());
            prop_assert_eq!(x.inverse().inverse(), x);
        }

        #[test]
        fn substitution_is_a_homomorphism(x in arb_word(), y in arb_word(),
                                          ia in arb_word(), ib in arb_word(), ic in arb_word()) {
            let s = Substitution::new().with("a", ia).with("b", ib).with("c", ic);
            let lhs = (&x * &y).substitute(&s).unwrap();
            let rhs = &x.substitute(&s).unwrap() * &y.substitute(&s).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn composed_substitution(x in arb_word(), ia in arb_word(), ib in arb_word(), ic in arb_word()) {
            let s = Substitution::new().with("a", ia).with("b", ib).with("c", ic);
            let t = Substitution::new().with("a", Word::parse("b a").unwrap())
                .with("b", Word::parse("c^-1").unwrap()).with("c", Word::parse("a c a").unwrap());
            let st = s.then(&t).unwrap();
            prop_assert_eq!(x.substitute(&st).unwrap(), x.substitute(&s).unwrap().substitute(&t).unwrap());
        }

        #[test]
        fn conjugation_is_detected(x in arb_word(), u in arb_word(), v in arb_word()) {
            let y = x.conjugate(&u);
            let z = y.conjugate(&v);
            prop_assert!(x.is_conjugate(&x));
            prop_assert!(x.is_conjugate(&y));
            prop_assert!(y.is_conjugate(&x));
            prop_assert!(x.is_conjugate(&z));
            let c = x.conjugator_to(&z).unwrap();
            prop_assert_eq!(x.conjugate(&c), z);
        }

        #[test]
        fn exponent_sum_is_additive(x in arb_word(), y in arb_word()) {
            let g = Generator::from("a");
            prop_assert_eq!((&x * &y).exponent_sum(&g), x.exponent_sum(&g) + y.exponent_sum(&g));
        }

        #[test]
        fn pow_matches_repeated_product(x in arb_word(), n in -4i64..=4) {
            let mut expected = Word::identity();
            let base = if n < 0 { x.inverse() } else { x.clone() };
            for _ in 0..n.unsigned_abs() { expected = &expected * &base; }
            prop_assert_eq!(x.pow(n), expected);
        }
    }
}
