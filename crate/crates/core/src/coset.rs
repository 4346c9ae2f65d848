//! Todd–Coxeter coset enumeration over the trivial subgroup, HLT style:
//! scan each relator from every live coset in order, defining cosets as
//! needed, then complete the coset's row. Coincidences are merged with a
//! union-find and an explicit queue.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criterion::{LongitudeChoice, Slope};
use crate::presentation::{Presentation, PresentationError};
use crate::twisted::KnotGroupModel;
use crate::word::{Word, WordError};

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;
pub const MAX_COSETS_ENV: &str = "KNOTGROUP_MAX_COSETS";
/// Upper bound on the total letter length of the relators.
pub const MAX_RELATOR_LETTERS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("max_cosets must be at least 1")]
    ZeroLimit,
    #[error("presentation has no generators")]
    NoGenerators,
    #[error("relators are too long to expand ({0} letters)")]
    TooLong(u128),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `KNOTGROUP_MAX_COSETS` if set and valid, otherwise 10⁶.
pub fn default_max_cosets() -> usize {
    std::env::var(MAX_COSETS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n >= 1)
        .unwrap_or(DEFAULT_MAX_COSETS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Finished { order: u64 },
    Exceeded { limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub strategy: String,
    pub outcome: Outcome,
    pub cosets_defined: u64,
    /// FNV-1a over the sequence of definitions, deductions and merges.
    pub trace_hash: String,
}

impl EnumerationResult {
    pub fn order(&self) -> Option<u64> {
        match self.outcome {
            Outcome::Finished { order } => Some(order),
            Outcome::Exceeded { .. } => None,
        }
    }
}

/// `model.presentation` plus `meridian^p · longitude^q`.
pub fn surgered_presentation(
    model: &KnotGroupModel,
    slope: Slope,
    choice: LongitudeChoice,
) -> Result<Presentation, CosetError> {
    let filling = model.meridian.try_pow(slope.p())?.try_mul(&choice.select(model).try_pow(slope.q())?)?;
    Ok(model.presentation.add_relators(&[filling])?)
}

const UNDEF: u32 = u32::MAX;

struct Fnv(u64);

impl Fnv {
    fn feed(&mut self, tag: u8, xs: &[u32]) {
        let mut eat = |b: u8| {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        };
        eat(tag);
        for x in xs {
            for b in x.to_le_bytes() {
                eat(b);
            }
        }
    }
}

struct Aborted;

struct Table {
    cols: usize,
    rows: Vec<u32>,
    parent: Vec<u32>,
    limit: usize,
    defined: u64,
    trace: Fnv,
    queue: Vec<u32>,
}

impl Table {
    fn len(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: u32, x: usize) -> u32 {
        self.rows[c as usize * self.cols + x]
    }

    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.rows[c as usize * self.cols + x] = d;
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<(), Aborted> {
        if self.len() >= self.limit {
            return Err(Aborted);
        }
        let d = self.len() as u32;
        self.parent.push(d);
        self.rows.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        self.defined += 1;
        self.trace.feed(b'D', &[c, x as u32, d]);
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = c;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
            self.trace.feed(b'M', &[lo, hi]);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.trace.feed(b'C', &[a, b]);
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                if self.get(d, x ^ 1) == g {
                    self.set(d, x ^ 1, UNDEF);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_x = self.get(mu, x);
                let nu_xi = self.get(nu, x ^ 1);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else if nu_xi != UNDEF {
                    self.merge(mu, nu_xi);
                } else {
                    self.set(mu, x, nu);
                    self.set(nu, x ^ 1, mu);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, a: u32, w: &[usize]) -> Result<(), Aborted> {
        let (mut f, mut b) = (a, a);
        let (mut i, mut j) = (0isize, w.len() as isize - 1);
        loop {
            while i <= j && self.get(f, w[i as usize]) != UNDEF {
                f = self.get(f, w[i as usize]);
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, w[j as usize] ^ 1) != UNDEF {
                b = self.get(b, w[j as usize] ^ 1);
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            let x = w[i as usize];
            if i == j {
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                self.trace.feed(b'E', &[f, x as u32, b]);
                return Ok(());
            }
            self.define(f, x)?;
        }
    }
}

/// Expand relators into column indices: generator `i` is column `2i`, its
/// inverse `2i + 1`.
fn relator_columns(p: &Presentation) -> Result<Vec<Vec<usize>>, CosetError> {
    let total: u128 = p.relators().iter().map(Word::letter_len).sum();
    if total > MAX_RELATOR_LETTERS {
        return Err(CosetError::TooLong(total));
    }
    let index = |g| p.generators().iter().position(|h| h == g).expect("relators use declared generators");
    Ok(p.relators()
        .iter()
        .map(|r| {
            let mut cols = Vec::new();
            for (g, e) in r.runs() {
                let c = 2 * index(g) + usize::from(*e < 0);
                cols.extend(std::iter::repeat_n(c, e.unsigned_abs() as usize));
            }
            cols
        })
        .collect())
}

pub const HLT: &str = "hlt";

/// Enumerate cosets of the trivial subgroup, giving up once `max_cosets`
/// cosets have been defined in total.
pub fn todd_coxeter(p: &Presentation, max_cosets: usize) -> Result<EnumerationResult, CosetError> {
    if max_cosets == 0 {
        return Err(CosetError::ZeroLimit);
    }
    if p.generators().is_empty() {
        return Err(CosetError::NoGenerators);
    }
    let relators = relator_columns(p)?;
    let cols = 2 * p.generators().len();
    let mut t = Table {
        cols,
        rows: vec![UNDEF; cols],
        parent: vec![0],
        limit: max_cosets.min(UNDEF as usize),
        defined: 1,
        trace: Fnv(0xcbf2_9ce4_8422_2325),
        queue: Vec::new(),
    };
    let mut c = 0u32;
    let finished = 'run: loop {
        if c as usize >= t.len() {
            break true;
        }
        for r in &relators {
            if !t.live(c) {
                break;
            }
            if t.scan_and_fill(c, r).is_err() {
                break 'run false;
            }
        }
        for x in 0..cols {
            if t.live(c) && t.get(c, x) == UNDEF && t.define(c, x).is_err() {
                break 'run false;
            }
        }
        c += 1;
    };
    let outcome = if finished {
        let order = (0..t.len() as u32).filter(|&k| t.live(k)).count() as u64;
        Outcome::Finished { order }
    } else {
        Outcome::Exceeded { limit: max_cosets as u64 }
    };
    Ok(EnumerationResult {
        strategy: HLT.into(),
        outcome,
        cosets_defined: t.defined,
        trace_hash: format!("{:016x}", t.trace.0),
    })
}
