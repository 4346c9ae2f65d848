//! Finite group presentations.
//!
//! Relators are stored freely reduced. Tietze moves return new values and
//! never apply a conjugation or inversion silently: those are explicit
//! operations so every manipulation of a relator can be replayed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPolynomial;
use crate::snf::{smith_normal_form, SmithForm, SnfError};
use crate::word::{Generator, Substitution, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("generator `{0}` is used but not declared")]
    Undeclared(Generator),
    #[error("generator `{0}` is declared twice")]
    Duplicate(Generator),
    #[error("generator `{0}` is not part of the presentation")]
    NotPresent(Generator),
    #[error("defining word for `{0}` mentions `{0}` itself")]
    SelfReferential(Generator),
    #[error("no relator is equivalent to `{0}` times the inverse of its defining word")]
    NoConsumableRelator(Generator),
    #[error("relator index {0} out of range")]
    BadIndex(usize),
    #[error("relator {0} is not a conjugate of another relator or its inverse")]
    NotRedundant(usize),
    #[error("Alexander polynomial needs H1 = Z and deficiency one, found {0}")]
    AlexanderHypothesis(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Snf(#[from] SnfError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

#[derive(Deserialize)]
struct RawPresentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = PresentationError;
    fn try_from(raw: RawPresentation) -> Result<Self, Self::Error> {
        Presentation::new(raw.generators, raw.relators)
    }
}

/// Abelianization `Z^free_rank ⊕ ⊕ Z/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    #[serde(rename = "torsion")]
    pub torsion_orders: Vec<i64>,
    #[serde(rename = "rank")]
    pub free_rank: usize,
}

impl HomologySummary {
    /// Group order when finite.
    pub fn order(&self) -> Option<u128> {
        (self.free_rank == 0).then(|| self.torsion_orders.iter().map(|&d| d as u128).product())
    }

    pub fn is_z(&self) -> bool {
        self.free_rank == 1 && self.torsion_orders.is_empty()
    }
}

/// Image of a word in the abelianization, in the Smith basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Class {
    /// Residues modulo each torsion order, aligned with `HomologySummary::torsion_orders`.
    pub torsion: Vec<i64>,
    pub free: Vec<i64>,
}

impl H1Class {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(|&c| c == 0)
    }
}

impl Presentation {
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.clone()) {
                return Err(PresentationError::Duplicate(g.clone()));
            }
        }
        let p = Presentation { generators, relators };
        for r in &p.relators {
            p.check_declared(r)?;
        }
        Ok(p)
    }

    pub fn from_names(gens: &[&str], relators: Vec<Word>) -> Result<Self, PresentationError> {
        Presentation::new(gens.iter().map(|g| Generator::from(*g)).collect(), relators)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn has_generator(&self, g: &Generator) -> bool {
        self.generators.contains(g)
    }

    pub fn check_declared(&self, w: &Word) -> Result<(), PresentationError> {
        match w.generators().find(|g| !self.has_generator(g)) {
            Some(g) => Err(PresentationError::Undeclared(g.clone())),
            None => Ok(()),
        }
    }

    pub fn add_relators(&self, rs: &[Word]) -> Result<Presentation, PresentationError> {
        for r in rs {
            self.check_declared(r)?;
        }
        let mut p = self.clone();
        p.relators.extend(rs.iter().cloned());
        Ok(p)
    }

    /// Tietze move: new generator `g` with relator `g · defining⁻¹`.
    pub fn add_generator(&self, g: Generator, defining: &Word) -> Result<Presentation, PresentationError> {
        if self.has_generator(&g) {
            return Err(PresentationError::Duplicate(g));
        }
        self.check_declared(defining)?;
        let mut p = self.clone();
        p.relators.push(Word::gen(g.clone()).try_mul(&defining.inverse())?);
        p.generators.push(g);
        Ok(p)
    }

    /// Tietze move: remove `g`, consuming the first relator equivalent (up to
    /// conjugacy and inversion) to `g · defining⁻¹`, and rewriting the rest.
    pub fn tietze_eliminate(&self, g: &Generator, defining: &Word) -> Result<Presentation, PresentationError> {
        if !self.has_generator(g) {
            return Err(PresentationError::NotPresent(g.clone()));
        }
        if defining.generators().any(|h| h == g) {
            return Err(PresentationError::SelfReferential(g.clone()));
        }
        self.check_declared(defining)?;
        let target = Word::gen(g.clone()).try_mul(&defining.inverse())?;
        let consumed = self
            .relators
            .iter()
            .position(|r| r.is_conjugate_up_to_inverse(&target))
            .ok_or_else(|| PresentationError::NoConsumableRelator(g.clone()))?;
        let sub = Substitution::new().with(g.clone(), defining.clone());
        let relators = self
            .relators
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != consumed)
            .map(|(_, r)| sub.apply_partial(r))
            .collect::<Result<Vec<_>, _>>()?;
        let generators = self.generators.iter().filter(|h| *h != g).cloned().collect();
        Ok(Presentation { generators, relators })
    }

    /// Tietze move: append `∏ cᵢ · rᵢ^{±1} · cᵢ⁻¹`, a consequence of existing relators.
    pub fn add_consequence(&self, factors: &[(usize, bool, Word)]) -> Result<Presentation, PresentationError> {
        let mut w = Word::identity();
        for (i, inverted, by) in factors {
            let r = self.relators.get(*i).ok_or(PresentationError::BadIndex(*i))?;
            self.check_declared(by)?;
            let r = if *inverted { r.inverse() } else { r.clone() };
            w = w.try_mul(&r.try_conjugate(by)?)?;
        }
        let mut p = self.clone();
        p.relators.push(w);
        Ok(p)
    }

    pub fn conjugate_relator(&self, i: usize, by: &Word) -> Result<Presentation, PresentationError> {
        self.check_declared(by)?;
        let mut p = self.clone();
        let r = p.relators.get_mut(i).ok_or(PresentationError::BadIndex(i))?;
        *r = r.try_conjugate(by)?;
        Ok(p)
    }

    pub fn invert_relator(&self, i: usize) -> Result<Presentation, PresentationError> {
        let mut p = self.clone();
        let r = p.relators.get_mut(i).ok_or(PresentationError::BadIndex(i))?;
        *r = r.inverse();
        Ok(p)
    }

    /// Replace a relator by its cyclic reduction (a conjugate).
    pub fn cyclically_reduce_relator(&self, i: usize) -> Result<Presentation, PresentationError> {
        let mut p = self.clone();
        let r = p.relators.get_mut(i).ok_or(PresentationError::BadIndex(i))?;
        *r = r.cyclic_reduce().0;
        Ok(p)
    }

    /// Drop relators that reduce to the identity.
    pub fn remove_trivial_relators(&self) -> Presentation {
        let mut p = self.clone();
        p.relators.retain(|r| !r.is_identity());
        p
    }

    /// Drop relator `i` provided it is conjugate, up to inversion, to another
    /// relator `witness`.
    pub fn remove_redundant_relator(&self, i: usize, witness: usize) -> Result<Presentation, PresentationError> {
        let r = self.relators.get(i).ok_or(PresentationError::BadIndex(i))?;
        let w = self.relators.get(witness).ok_or(PresentationError::BadIndex(witness))?;
        if i == witness || !r.is_conjugate_up_to_inverse(w) {
            return Err(PresentationError::NotRedundant(i));
        }
        let mut p = self.clone();
        p.relators.remove(i);
        Ok(p)
    }

    /// Rewrite every relator through `sub` onto a new generating set. The
    /// caller is responsible for the substitution inducing an isomorphism.
    pub fn change_generators(&self, new_gens: Vec<Generator>, sub: &Substitution) -> Result<Presentation, PresentationError> {
        let relators = self.relators.iter().map(|r| sub.apply(r)).collect::<Result<Vec<_>, _>>()?;
        Presentation::new(new_gens, relators)
    }

    /// Relators × generators matrix of exponent sums.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| self.exponent_vector(r)).collect()
    }

    fn exponent_vector(&self, w: &Word) -> Vec<i64> {
        self.generators.iter().map(|g| w.exponent_sum(g)).collect()
    }

    fn smith(&self) -> Result<SmithForm, PresentationError> {
        Ok(smith_normal_form(&self.relation_matrix(), self.generators.len())?)
    }

    pub fn homology(&self) -> Result<HomologySummary, PresentationError> {
        let s = self.smith()?;
        Ok(HomologySummary {
            torsion_orders: s.diagonal.iter().copied().filter(|&d| d > 1).collect(),
            free_rank: self.generators.len() - s.rank(),
        })
    }

    /// Coordinates of `x` in H1. Free coordinates use a basis whose defining
    /// functional has a positive first nonzero value on the generators.
    pub fn class_in_h1(&self, x: &Word) -> Result<H1Class, PresentationError> {
        self.check_declared(x)?;
        let s = self.smith()?;
        let vec = self.exponent_vector(x);
        let coord = |j: usize| -> i128 { vec.iter().enumerate().map(|(i, &c)| c as i128 * s.column_transform[i][j]).sum() };
        let mut torsion = Vec::new();
        for (k, &d) in s.diagonal.iter().enumerate() {
            if d > 1 {
                torsion.push(coord(k).rem_euclid(d as i128) as i64);
            }
        }
        let mut free = Vec::new();
        for j in s.rank()..self.generators.len() {
            let sign = (0..self.generators.len())
                .map(|i| s.column_transform[i][j])
                .find(|&c| c != 0)
                .map_or(1, i128::signum);
            free.push(i64::try_from(sign * coord(j)).map_err(|_| SnfError::Overflow)?);
        }
        Ok(H1Class { torsion, free })
    }

    /// Abelianization map onto Z when H1 ≅ Z.
    pub fn abelianization_to_z(&self) -> Result<BTreeMap<Generator, i64>, PresentationError> {
        let h = self.homology()?;
        if !h.is_z() {
            return Err(PresentationError::AlexanderHypothesis(format!("H1 = {h:?}")));
        }
        let mut out = BTreeMap::new();
        for g in &self.generators {
            let c = self.class_in_h1(&Word::gen(g.clone()))?;
            out.insert(g.clone(), c.free[0]);
        }
        Ok(out)
    }

    /// Alexander polynomial from Fox derivatives, normalized up to `±t^k`.
    ///
    /// Needs `H1 ≅ Z` and exactly `generators − 1` relators.
    pub fn alexander_polynomial(&self) -> Result<LaurentPolynomial, PresentationError> {
        let n = self.generators.len();
        if n == 0 || self.relators.len() + 1 != n {
            return Err(PresentationError::AlexanderHypothesis(format!(
                "{} generators and {} relators",
                n,
                self.relators.len()
            )));
        }
        let phi = self.abelianization_to_z()?;
        // delete the column whose generator has the smallest nonzero image
        let (skip, skip_image) = self
            .generators
            .iter()
            .enumerate()
            .map(|(j, g)| (j, phi[g]))
            .filter(|(_, e)| *e != 0)
            .min_by_key(|(j, e)| (e.abs(), *j))
            .expect("H1 = Z forces a generator with nonzero image");
        let matrix: Vec<Vec<LaurentPolynomial>> = self
            .relators
            .iter()
            .map(|r| {
                self.generators
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, g)| fox_derivative_abelianized(r, g, &phi))
                    .collect()
            })
            .collect();
        let det = determinant(matrix);
        let t_minus_one = LaurentPolynomial::t_pow_minus_one(1);
        let numerator = &det * &t_minus_one;
        let delta = numerator
            .div_exact(&LaurentPolynomial::t_pow_minus_one(skip_image))
            .ok_or_else(|| PresentationError::AlexanderHypothesis("inexact Fox quotient".into()))?;
        Ok(delta.normalized())
    }
}

/// `∂w/∂x` pushed through the abelianization `phi` into `Z[t, t⁻¹]`.
pub fn fox_derivative_abelianized(w: &Word, x: &Generator, phi: &BTreeMap<Generator, i64>) -> LaurentPolynomial {
    let mut out = LaurentPolynomial::zero();
    let mut prefix: i64 = 0;
    for (g, e) in w.runs() {
        let step = phi.get(g).copied().unwrap_or(0);
        if g == x {
            if *e > 0 {
                for i in 0..*e {
                    out.add_term(1, prefix + i * step);
                }
            } else {
                for i in 1..=e.unsigned_abs() as i64 {
                    out.add_term(-1, prefix - i * step);
                }
            }
        }
        prefix += e * step;
    }
    out
}

/// Fraction-free (Bareiss) determinant over `Z[t, t⁻¹]`.
fn determinant(mut m: Vec<Vec<LaurentPolynomial>>) -> LaurentPolynomial {
    let n = m.len();
    if n == 0 {
        return LaurentPolynomial::one();
    }
    let mut sign = 1;
    let mut prev = LaurentPolynomial::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return LaurentPolynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// If `g` occurs exactly once in `relator`, with exponent ±1, return the word
/// it equals in the group.
pub fn solve_for(relator: &Word, g: &Generator) -> Option<Word> {
    let runs = relator.runs();
    let hits: Vec<usize> = runs.iter().enumerate().filter(|(_, (h, _))| h == g).map(|(i, _)| i).collect();
    let [i] = hits[..] else { return None };
    let e = runs[i].1;
    if e.abs() != 1 {
        return None;
    }
    // r = P g^e S = 1  =>  g^e = P⁻¹ S⁻¹
    let prefix = Word::reduce(runs[..i].iter().cloned()).ok()?;
    let suffix = Word::reduce(runs[i + 1..].iter().cloned()).ok()?;
    let ge = prefix.inverse().try_mul(&suffix.inverse()).ok()?;
    Some(if e == 1 { ge } else { ge.inverse() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn trefoil() -> Presentation {
        Presentation::from_names(&["a", "b"], vec![w("b a b^-2 a")]).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(
            Presentation::from_names(&["a"], vec![w("a b")]),
            Err(PresentationError::Undeclared("b".into()))
        );
        assert_eq!(Presentation::from_names(&["a", "a"], vec![]), Err(PresentationError::Duplicate("a".into())));
        assert!(trefoil().add_relators(&[w("c")]).is_err());
        assert_eq!(trefoil().add_relators(&[]).unwrap(), trefoil());
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&trefoil()).unwrap();
        assert_eq!(json, r#"{"generators":["a","b"],"relators":[[["b",1],["a",1],["b",-2],["a",1]]]}"#);
        let back: Presentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trefoil());
        assert!(serde_json::from_str::<Presentation>(r#"{"generators":["a"],"relators":[[["q",1]]]}"#).is_err());
        let h = HomologySummary { torsion_orders: vec![5], free_rank: 0 };
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"torsion":[5],"rank":0}"#);
    }

    #[test]
    fn homology_examples() {
        assert!(trefoil().homology().unwrap().is_z());
        let surgered = trefoil().add_relators(&[w("a^5 a^-7 b^3 a")]).unwrap();
        let h = surgered.homology().unwrap();
        assert_eq!(h.torsion_orders, vec![5]);
        assert_eq!(h.free_rank, 0);
        let free = Presentation::from_names(&["a"], vec![]).unwrap();
        assert_eq!(free.homology().unwrap().free_rank, 1);
    }

    #[test]
    fn classes_in_h1() {
        let p = trefoil();
        assert!(p.class_in_h1(&w("a^-7 b^3 a")).unwrap().is_zero());
        assert_eq!(p.class_in_h1(&w("a")).unwrap().free, vec![1]);
        assert_eq!(p.class_in_h1(&w("b")).unwrap().free, vec![2]);
        let u_minus_one = Presentation::from_names(&["a", "b"], vec![w("b a b^-1 a b^-1")]).unwrap();
        assert_eq!(u_minus_one.class_in_h1(&w("a^-5 b a")).unwrap().free, vec![-2]);
        assert!(p.class_in_h1(&w("c")).is_err());
    }

    #[test]
    fn eliminate_generator() {
        let p = Presentation::from_names(&["x", "y"], vec![w("x y^-1")]).unwrap();
        let q = p.tietze_eliminate(&"x".into(), &w("y")).unwrap();
        assert_eq!(q.generators(), &[Generator::from("y")]);
        assert!(q.relators().is_empty());
        assert_eq!(p.tietze_eliminate(&"z".into(), &w("y")), Err(PresentationError::NotPresent("z".into())));
        assert_eq!(
            p.tietze_eliminate(&"x".into(), &w("x y")),
            Err(PresentationError::SelfReferential("x".into()))
        );
        assert_eq!(
            p.tietze_eliminate(&"x".into(), &w("y^2")),
            Err(PresentationError::NoConsumableRelator("x".into()))
        );
    }

    #[test]
    fn explicit_relator_moves() {
        let p = trefoil().conjugate_relator(0, &w("a")).unwrap();
        assert_eq!(p.relators()[0], w("a b a b^-2"));
        let p = p.invert_relator(0).unwrap();
        assert!(p.relators()[0].is_conjugate_up_to_inverse(&trefoil().relators()[0]));
        let p = trefoil().add_consequence(&[(0, true, w("b"))]).unwrap();
        assert_eq!(p.relators().len(), 2);
        let q = p.remove_redundant_relator(1, 0).unwrap();
        assert_eq!(q, trefoil());
        assert!(trefoil().add_relators(&[w("a")]).unwrap().remove_redundant_relator(1, 0).is_err());
    }

    #[test]
    fn solving_for_a_generator() {
        let r = w("xi alpha delta1^-1 alpha^-1");
        assert_eq!(solve_for(&r, &"delta1".into()), Some(w("alpha^-1 xi alpha")));
        assert_eq!(solve_for(&w("a b a"), &"a".into()), None);
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(trefoil().alexander_polynomial().unwrap().to_string(), "t^2 - t + 1");
        let unknot = Presentation::from_names(&["a"], vec![]).unwrap();
        assert_eq!(unknot.alexander_polynomial().unwrap(), LaurentPolynomial::one());
        let bad = trefoil().add_relators(&[w("a")]).unwrap();
        assert!(bad.alexander_polynomial().is_err());
    }

    #[test]
    fn fox_fundamental_identity() {
        // Σ ∂r/∂x · (φ(x) − 1) = φ(r) − 1 = 0 for a relator
        let p = trefoil();
        let phi = p.abelianization_to_z().unwrap();
        let r = &p.relators()[0];
        let mut total = LaurentPolynomial::zero();
        for g in p.generators() {
            let d = fox_derivative_abelianized(r, g, &phi);
            total = &total + &(&d * &LaurentPolynomial::t_pow_minus_one(phi[g]));
        }
        assert!(total.is_zero());
    }
}
