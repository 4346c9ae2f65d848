//! Exact free-group and presentation algebra for twisted torus knot groups.

pub mod coset;
pub mod criterion;
pub mod diagram;
pub mod laurent;
pub mod presentation;
pub mod registry;
pub mod snf;
pub mod twisted;
pub mod wirtinger;
pub mod word;

pub use coset::{EnumerationResult, Outcome};
pub use criterion::{CriterionReport, ITShape, LongitudeChoice, LongitudeForm, Slope, Verdict};
pub use diagram::{Crossing, DiagramError, LinkDiagram};
pub use laurent::LaurentPolynomial;
pub use presentation::{H1Class, HomologySummary, Presentation, PresentationError};
pub use twisted::{KnotGroupModel, ProofReport, TwistError, TwistParams};
pub use wirtinger::{PeripheralSystem, TwistConvention, WirtingerError};
pub use word::{Generator, Substitution, Word, WordError};
