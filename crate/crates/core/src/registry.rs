//! Named, runtime-selectable variants: how a knot group model is built, which
//! longitude framing is used, and which coset enumeration strategy runs.

use thiserror::Error;

use crate::coset::{self, CosetError, EnumerationResult};
use crate::criterion::LongitudeChoice;
use crate::presentation::Presentation;
use crate::twisted::{self, KnotGroupModel, TwistError, TwistParams};
use crate::wirtinger::TwistConvention;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} `{name}` (available: {available})")]
pub struct UnknownName {
    pub kind: &'static str,
    pub name: String,
    pub available: String,
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<(&'static str, Box<T>)>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry { kind, entries: Vec::new() }
    }

    /// Registers `item` under `name`, replacing any previous entry.
    pub fn register(&mut self, name: &'static str, item: Box<T>) {
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = item,
            None => self.entries.push((name, item)),
        }
    }

    pub fn get(&self, name: &str) -> Result<&T, UnknownName> {
        self.entries.iter().find(|(n, _)| *n == name).map(|(_, t)| t.as_ref()).ok_or_else(|| UnknownName {
            kind: self.kind,
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }
}

pub trait GroupModelBuilder: Send + Sync {
    fn build(&self, params: TwistParams) -> Result<KnotGroupModel, TwistError>;
}

pub trait LongitudeFraming: Send + Sync {
    fn choice(&self) -> LongitudeChoice;

    /// The exponent `s` of `a^{−s} w a^{−t}` under this framing.
    fn s(&self, model: &KnotGroupModel) -> i64 {
        match self.choice() {
            LongitudeChoice::Paper => model.s_paper,
            LongitudeChoice::Corrected => model.s_corrected,
        }
    }
}

pub trait EnumerationStrategy: Send + Sync {
    fn enumerate(&self, p: &Presentation, max_cosets: usize) -> Result<EnumerationResult, CosetError>;
}

struct ClosedForm;

impl GroupModelBuilder for ClosedForm {
    fn build(&self, params: TwistParams) -> Result<KnotGroupModel, TwistError> {
        twisted::closed_form(params)
    }
}

struct FromDiagram(TwistConvention);

impl GroupModelBuilder for FromDiagram {
    fn build(&self, params: TwistParams) -> Result<KnotGroupModel, TwistError> {
        twisted::derive_from_diagram(params, self.0)
    }
}

struct Framing(LongitudeChoice);

impl LongitudeFraming for Framing {
    fn choice(&self) -> LongitudeChoice {
        self.0
    }
}

struct Hlt;

impl EnumerationStrategy for Hlt {
    fn enumerate(&self, p: &Presentation, max_cosets: usize) -> Result<EnumerationResult, CosetError> {
        coset::todd_coxeter(p, max_cosets)
    }
}

/// `closed` (template) and `derive` (from the diagram of `L`).
pub fn builders() -> Registry<dyn GroupModelBuilder> {
    let mut r: Registry<dyn GroupModelBuilder> = Registry::new("builder");
    r.register("closed", Box::new(ClosedForm));
    r.register("derive", Box::new(FromDiagram(TwistConvention::SlopeConsistent)));
    r
}

/// `paper` and `corrected`.
pub fn framings() -> Registry<dyn LongitudeFraming> {
    let mut r: Registry<dyn LongitudeFraming> = Registry::new("longitude framing");
    r.register("paper", Box::new(Framing(LongitudeChoice::Paper)));
    r.register("corrected", Box::new(Framing(LongitudeChoice::Corrected)));
    r
}

/// `hlt`.
pub fn enumerators() -> Registry<dyn EnumerationStrategy> {
    let mut r: Registry<dyn EnumerationStrategy> = Registry::new("enumeration strategy");
    r.register(coset::HLT, Box::new(Hlt));
    r
}
