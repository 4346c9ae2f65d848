//! Recognising the relator shape
//! `(w₁ aᵐ w₁⁻¹) b^{−r} (w₂⁻¹ aⁿ w₂) b^{r−k}` and the longitude shape
//! `a^{−s} w a^{−t}`, and deciding whether a surgery slope `p/q` falls in the
//! range where the group of the surgered manifold is known not to be
//! left-orderable.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::twisted::{KnotGroupModel, TwistError, TwistParams};
use crate::word::{Generator, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriterionError {
    #[error("expected 2 generators and 1 relator, got {0} and {1}")]
    WrongShape(usize, usize),
    #[error("longitude has no letters between its leading and trailing meridian powers")]
    EmptyLongitudeCore,
    #[error("slope {0}/{1} is not a reduced fraction")]
    BadSlope(i64, i64),
    #[error("longitude core is not positive for u = {0}; the bound needs u >= -1")]
    NotPositive(i64),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

/// One decomposition of the relator. `meridian` plays the role of `a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ITShape {
    pub meridian: Generator,
    pub other: Generator,
    pub m: i64,
    pub n: i64,
    pub r: i64,
    pub k: i64,
    pub w1: Word,
    pub w2: Word,
}

impl ITShape {
    pub fn reconstruct(&self) -> Word {
        let a = |e: i64| Word::power(self.meridian.clone(), e);
        let b = |e: i64| Word::power(self.other.clone(), e);
        a(self.m).conjugate(&self.w1) * b(-self.r) * a(self.n).conjugate(&self.w2.inverse()) * b(self.r - self.k)
    }

    fn weight(&self) -> u128 {
        self.w1.letter_len() + self.w2.letter_len()
    }

    /// The same decomposition with `w₁` not starting with a `b`-letter nor
    /// ending with an `a`-letter, and `w₂` not starting with an `a`-letter
    /// nor ending with a `b`-letter. Leading `b`-powers of `w₁` and trailing
    /// `b`-powers of `w₂` are absorbed into `r`; `a`-powers next to `aᵐ`,
    /// `aⁿ` commute with them and are dropped.
    pub fn normalized(&self) -> ITShape {
        let mut s = self.clone();
        s.w1 = strip_last(&s.w1, &s.meridian).0;
        let (w1, j) = strip_first(&s.w1, &s.other);
        s.w1 = w1;
        s.r += j;
        s.w2 = strip_first(&s.w2, &s.meridian).0;
        let (w2, j) = strip_last(&s.w2, &s.other);
        s.w2 = w2;
        s.r += j;
        if s.m == 0 {
            s.w1 = Word::identity();
        }
        if s.n == 0 {
            s.w2 = Word::identity();
        }
        if s.m == 0 || s.n == 0 {
            s.r = 0;
        }
        s
    }
}

fn strip_first(w: &Word, g: &Generator) -> (Word, i64) {
    match w.runs().first() {
        Some((h, e)) if h == g => (Word::power(g.clone(), -e) * w.clone(), *e),
        _ => (w.clone(), 0),
    }
}

fn strip_last(w: &Word, g: &Generator) -> (Word, i64) {
    match w.runs().last() {
        Some((h, e)) if h == g => (w.clone() * Word::power(g.clone(), -e), *e),
        _ => (w.clone(), 0),
    }
}

/// If `x` is a conjugate `c aᵉ c⁻¹` with `e > 0`, return `(e, c)`.
fn as_meridian_conjugate(x: &Word, a: &Generator) -> Option<(i64, Word)> {
    let (core, c) = x.cyclic_reduce();
    match core.runs() {
        [(g, e)] if g == a && *e > 0 => Some((*e, c)),
        _ => None,
    }
}

/// Signed length of the maximal run of `g`-letters starting at `from`
/// (going forward) in `letters`.
fn run_forward(letters: &[Letter], from: usize, g: &Generator) -> (usize, i64) {
    let Some((h, s)) = letters.get(from) else { return (0, 0) };
    if h != g {
        return (0, 0);
    }
    let len = letters[from..].iter().take_while(|(h2, s2)| h2 == g && s2 == s).count();
    (len, *s as i64 * len as i64)
}

fn run_backward(letters: &[Letter], g: &Generator) -> (usize, i64) {
    let Some((h, s)) = letters.last() else { return (0, 0) };
    if h != g {
        return (0, 0);
    }
    let len = letters.iter().rev().take_while(|(h2, s2)| h2 == g && s2 == s).count();
    (len, *s as i64 * len as i64)
}

/// All literal splittings `L = A · b^{−r} · B · b^{r−k}` of one rotation.
fn parse_rotation(letters: &[Letter], a: &Generator, b: &Generator, out: &mut BTreeSet<ITShape>) {
    let n_letters = letters.len();
    let (tail_len, tail_exp) = run_backward(letters, b);
    let is_a = |i: usize| letters[i].0 == *a;
    for p in 0..=n_letters {
        // A = letters[..p], empty or bounded by a-letters
        let (m, w1) = if p == 0 {
            (0, Word::identity())
        } else {
            if !is_a(0) || !is_a(p - 1) {
                continue;
            }
            match as_meridian_conjugate(&Word::from_letters(&letters[..p]), a) {
                Some(x) => x,
                None => continue,
            }
        };
        let (mid_len, mid_exp) = run_forward(letters, p, b);
        let q = p + mid_len;
        if q == n_letters {
            // nothing but b-letters after A: B trivial, r canonically 0
            if m == 0 && mid_len == n_letters {
                continue;
            }
            let k = -mid_exp;
            if k >= 0 {
                out.insert(ITShape { meridian: a.clone(), other: b.clone(), m, n: 0, r: 0, k, w1, w2: Word::identity() });
            }
            continue;
        }
        if m == 0 && mid_len > 0 {
            // with A trivial, rotating the leading b-run away gives r = 0
            continue;
        }
        let s = n_letters - tail_len;
        if s <= q {
            continue;
        }
        let Some((n, c)) = as_meridian_conjugate(&Word::from_letters(&letters[q..s]), a) else { continue };
        let r = -mid_exp;
        let k = r - tail_exp;
        if k < 0 {
            continue;
        }
        let (r, w1) = if m == 0 { (0, Word::identity()) } else { (r, w1) };
        out.insert(ITShape { meridian: a.clone(), other: b.clone(), m, n, r, k, w1, w2: c.inverse() });
    }
}

/// Every decomposition of the single relator into the shape, over both
/// choices of which generator is `a`, all cyclic rotations, and inversion.
/// Decompositions are literal: `w₁, w₂` are normalized as in
/// [`ITShape::normalized`] and no cancellation occurs between the four
/// blocks. Sorted by `|w₁| + |w₂|`.
pub fn match_it_shape(p: &Presentation) -> Result<Vec<ITShape>, CriterionError> {
    if p.generators().len() != 2 || p.relators().len() != 1 {
        return Err(CriterionError::WrongShape(p.generators().len(), p.relators().len()));
    }
    let rel = p.relators()[0].cyclic_reduce().0;
    let gens = p.generators();
    if !gens.iter().all(|g| rel.generators().any(|h| h == g)) {
        return Ok(Vec::new());
    }
    let mut found = BTreeSet::new();
    for (a, b) in [(&gens[0], &gens[1]), (&gens[1], &gens[0])] {
        for word in [rel.clone(), rel.inverse()] {
            if word.exponent_sum(a) < 0 || word.exponent_sum(b) > 0 {
                continue;
            }
            let mut letters = word.letters();
            for _ in 0..letters.len() {
                parse_rotation(&letters, a, b, &mut found);
                letters.rotate_left(1);
            }
        }
    }
    let mut shapes: Vec<ITShape> = found.into_iter().collect();
    shapes.sort_by(|x, y| x.weight().cmp(&y.weight()).then_with(|| x.cmp(y)));
    Ok(shapes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongitudeForm {
    pub s: i64,
    pub t: i64,
    pub w: Word,
    pub w_positive: bool,
}

/// Split `x = a^{−s} · w · a^{−t}` with `w` neither starting nor ending in
/// `a`. A missing leading or trailing `a`-run counts as exponent 0.
pub fn parse_longitude(x: &Word, a: &Generator) -> Result<LongitudeForm, CriterionError> {
    let (rest, lead) = strip_first(x, a);
    let (w, trail) = strip_last(&rest, a);
    if w.is_identity() {
        return Err(CriterionError::EmptyLongitudeCore);
    }
    let w_positive = w.runs().iter().all(|(_, e)| *e > 0);
    Ok(LongitudeForm { s: -lead, t: -trail, w, w_positive })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    /// Stored with `q ≥ 0` (and `p = 1` when `q = 0`).
    pub fn new(p: i64, q: i64) -> Result<Slope, CriterionError> {
        if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 || p == i64::MIN || q == i64::MIN {
            return Err(CriterionError::BadSlope(p, q));
        }
        let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
        Ok(Slope { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `p/q ≥ bound`, exactly; false for `q = 0`.
    pub fn at_least(&self, bound: i64) -> bool {
        self.q != 0 && i128::from(self.p) >= i128::from(bound) * i128::from(self.q)
    }
}

fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    GuaranteedNonLo,
    NotApplicable(String),
    /// Hypotheses hold but the slope is below the bound.
    Unknown,
}

pub fn decide(shape: Option<&ITShape>, form: &LongitudeForm, slope: Slope) -> Verdict {
    let Some(shape) = shape else {
        return Verdict::NotApplicable("relator does not have the required shape".into());
    };
    if shape.m < 0 || shape.n < 0 || shape.k < 0 {
        return Verdict::NotApplicable("shape needs m, n, k >= 0".into());
    }
    if !form.w_positive {
        return Verdict::NotApplicable("w is not a positive word".into());
    }
    if slope.q == 0 {
        return Verdict::NotApplicable("q = 0".into());
    }
    if slope.at_least(form.s + form.t) {
        Verdict::GuaranteedNonLo
    } else {
        Verdict::Unknown
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LongitudeChoice {
    Paper,
    Corrected,
}

impl LongitudeChoice {
    pub fn select<'a>(&self, model: &'a KnotGroupModel) -> &'a Word {
        match self {
            LongitudeChoice::Paper => &model.longitude_paper,
            LongitudeChoice::Corrected => &model.longitude_corrected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub params: TwistParams,
    pub slope: Slope,
    pub longitude: LongitudeChoice,
    pub shape: Option<ITShape>,
    pub form_paper: LongitudeForm,
    pub form_corrected: LongitudeForm,
    pub bound_paper: i64,
    pub bound_corrected: i64,
    pub verdict: Verdict,
}

/// Run the full check on a knot group model, using the shape of minimal
/// `|w₁| + |w₂|` and the selected longitude.
pub fn criterion_report(model: &KnotGroupModel, slope: Slope, choice: LongitudeChoice) -> Result<CriterionReport, CriterionError> {
    let shapes = match_it_shape(&model.presentation)?;
    let a = &model.presentation.generators()[0];
    let shape = shapes.into_iter().find(|s| &s.meridian == a);
    let form_paper = parse_longitude(&model.longitude_paper, a)?;
    let form_corrected = parse_longitude(&model.longitude_corrected, a)?;
    let form = match choice {
        LongitudeChoice::Paper => &form_paper,
        LongitudeChoice::Corrected => &form_corrected,
    };
    let verdict = decide(shape.as_ref(), form, slope);
    Ok(CriterionReport {
        params: model.params,
        slope,
        longitude: choice,
        bound_paper: form_paper.s + form_paper.t,
        bound_corrected: form_corrected.s + form_corrected.t,
        shape,
        form_paper,
        form_corrected,
        verdict,
    })
}

/// Least integer slope with a guaranteed verdict, i.e. `s + t`.
pub fn minimal_integer_bound(model: &KnotGroupModel, choice: LongitudeChoice) -> Result<i64, CriterionError> {
    let form = parse_longitude(choice.select(model), &model.meridian.generators().next().cloned().unwrap_or("a".into()))?;
    if !form.w_positive {
        return Err(CriterionError::NotPositive(model.params.u));
    }
    Ok(form.s + form.t)
}
