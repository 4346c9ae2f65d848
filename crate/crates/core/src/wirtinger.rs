//! Wirtinger presentations, peripheral words, and the three-component
//! link `L` whose surgeries give the twisted torus knots `T(3, 3v+2; 2, u)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Crossing, DiagramError, LinkDiagram};
use crate::presentation::{solve_for, Presentation, PresentationError};
use crate::word::{Generator, Substitution, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WirtingerError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("twist parameter v must be non-negative, got {0}")]
    NegativeV(i64),
    #[error("crossing `{0}` does not determine arc `{1}`")]
    Unsolvable(String, Generator),
}

/// Relator `in · over^ε · out⁻¹ · over^{−ε}`, i.e. `out = over^{−ε} in over^ε`,
/// with its four letters rotated left by the crossing's `rotation`.
pub fn crossing_relator(c: &Crossing) -> Result<Word, WordError> {
    let e = i64::from(c.sign);
    let mut letters = vec![
        (c.under_in.clone(), 1),
        (c.over.clone(), e),
        (c.under_out.clone(), -1),
        (c.over.clone(), -e),
    ];
    letters.rotate_left(usize::from(c.rotation));
    Word::reduce(letters)
}

pub fn wirtinger_presentation(d: &LinkDiagram) -> Result<Presentation, WirtingerError> {
    let relators = d.crossings().iter().map(crossing_relator).collect::<Result<Vec<_>, _>>()?;
    Ok(Presentation::new(d.arcs().to_vec(), relators)?)
}

/// Wirtinger presentation with one relator dropped. Any single relator of a
/// knot diagram is a consequence of the others, so this leaves a presentation
/// with deficiency one, suitable for Fox calculus.
pub fn knot_presentation(d: &LinkDiagram) -> Result<Presentation, WirtingerError> {
    let p = wirtinger_presentation(d)?;
    let mut relators = p.relators().to_vec();
    relators.pop();
    Ok(Presentation::new(p.generators().to_vec(), relators)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralSystem {
    pub component: usize,
    pub meridian: Word,
    pub longitude: Word,
    /// Exponent sum of the longitude in the component's own arcs.
    pub framing_class: i64,
    /// Exponent sum of the longitude in each component's arcs; entry
    /// `component` equals `framing_class`.
    pub linking: Vec<i64>,
}

impl PeripheralSystem {
    /// Push the peripheral words through a rewriting of the group, then strip
    /// any conjugation of the longitude by a power of the meridian.
    pub fn rewritten(&self, sub: &Substitution) -> Result<PeripheralSystem, WordError> {
        let meridian = sub.apply_partial(&self.meridian)?;
        let mut longitude = sub.apply_partial(&self.longitude)?;
        if let [(m, 1)] = meridian.runs() {
            loop {
                let runs = longitude.runs();
                let (Some((g0, e0)), Some((g1, e1))) = (runs.first(), runs.last()) else { break };
                if runs.len() < 2 || g0 != m || g1 != m || *e0 != -*e1 {
                    break;
                }
                longitude = longitude.conjugate(&Word::power(m.clone(), -*e0));
            }
        }
        Ok(PeripheralSystem { meridian, longitude, ..self.clone() })
    }
}

/// Meridian: the component's basepoint arc. Longitude: the over-arcs met at
/// each under-crossing, with the crossing signs, walking once around the
/// component from the basepoint.
pub fn peripheral_system(d: &LinkDiagram, component: usize) -> Result<PeripheralSystem, WirtingerError> {
    let arcs = d.components().get(component).ok_or(DiagramError::UnknownComponent(component))?;
    let mut pairs = Vec::with_capacity(arcs.len());
    for arc in arcs {
        let c = d.crossing_ending(arc).ok_or_else(|| DiagramError::DanglingIn(arc.clone()))?;
        pairs.push((c.over.clone(), i64::from(c.sign)));
    }
    let longitude = Word::reduce(pairs)?;
    let linking: Vec<i64> = d
        .components()
        .iter()
        .map(|comp| comp.iter().map(|a| longitude.exponent_sum(a)).sum())
        .collect();
    Ok(PeripheralSystem {
        component,
        meridian: Word::gen(arcs[0].clone()),
        longitude,
        framing_class: linking[component],
        linking,
    })
}

/// How the twisting relation on `l₂` is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistConvention {
    /// `ψ(αβ)^u`, as the relation is usually quoted.
    Stated,
    /// `ψ⁻¹(αβ)^u`, i.e. `ψ = (αβ)^u`, the relation actually used when
    /// eliminating `ψ`; it is the `−1/u` surgery on `l₂`.
    SlopeConsistent,
}

pub fn twist_relators(u: i64, v: i64, convention: TwistConvention) -> Result<[Word; 2], WirtingerError> {
    if v < 0 {
        return Err(WirtingerError::NegativeV(v));
    }
    let n = v.checked_add(1).ok_or(WordError::Overflow("xi".into()))?;
    let abc = Word::from_pairs(&[("alpha", 1), ("beta", 1), ("gamma", 1)]);
    let ab = Word::from_pairs(&[("alpha", 1), ("beta", 1)]);
    let r1 = Word::gen("xi").try_mul(&abc.try_pow(-n)?)?;
    let psi = match convention {
        TwistConvention::Stated => Word::gen("psi"),
        TwistConvention::SlopeConsistent => Word::power("psi", -1),
    };
    let r2 = psi.try_mul(&ab.try_pow(u)?)?;
    Ok([r1, r2])
}

/// Append `ξ(αβγ)^{−v−1}` and `ψ(αβ)^u`.
pub fn add_twist_relations(p: &Presentation, u: i64, v: i64) -> Result<Presentation, WirtingerError> {
    add_twist_relations_with(p, u, v, TwistConvention::Stated)
}

pub fn add_twist_relations_with(
    p: &Presentation,
    u: i64,
    v: i64,
    convention: TwistConvention,
) -> Result<Presentation, WirtingerError> {
    Ok(p.add_relators(&twist_relators(u, v, convention)?)?)
}

pub const BUILTIN_ARCS: [&str; 12] = [
    "alpha", "beta", "gamma", "xi", "psi", "delta1", "delta2", "delta3", "delta4", "delta5", "delta6", "delta7",
];

/// The link `L`: `l₀` through α, β, γ, δ₃…δ₆; `l₁` through ξ, δ₁, δ₂;
/// `l₂` through ψ, δ₇.
pub fn builtin_link_l() -> LinkDiagram {
    // (id, under_in, over, sign, under_out, rotation)
    const TABLE: [(&str, &str, &str, i8, &str, u8); 12] = [
        ("P1", "xi", "alpha", 1, "delta1", 0),
        ("P2", "delta1", "beta", 1, "delta2", 0),
        ("P3", "delta2", "gamma", 1, "xi", 0),
        ("P4", "alpha", "xi", 1, "gamma", 3),
        ("P5", "beta", "xi", 1, "delta3", 3),
        ("P6", "gamma", "xi", 1, "delta4", 3),
        ("P7", "delta3", "gamma", -1, "delta5", 2),
        ("P8", "delta4", "gamma", -1, "delta6", 2),
        ("P9", "psi", "delta5", 1, "delta7", 0),
        ("P10", "delta7", "delta6", 1, "psi", 0),
        ("P11", "delta5", "psi", 1, "alpha", 3),
        ("P12", "delta6", "psi", 1, "beta", 3),
    ];
    let crossings = TABLE
        .iter()
        .map(|&(id, i, o, sign, out, rotation)| Crossing {
            id: id.into(),
            over: o.into(),
            under_in: i.into(),
            under_out: out.into(),
            sign,
            rotation,
        })
        .collect();
    let names = |xs: &[&str]| xs.iter().map(|&s| Generator::from(s)).collect::<Vec<_>>();
    LinkDiagram::new(
        names(&BUILTIN_ARCS),
        vec![
            names(&["alpha", "gamma", "delta4", "delta6", "beta", "delta3", "delta5"]),
            names(&["xi", "delta1", "delta2"]),
            names(&["psi", "delta7"]),
        ],
        crossings,
    )
    .expect("built-in diagram is valid")
}

/// Result of eliminating the auxiliary arcs δ₁…δ₇ of `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub presentation: Presentation,
    /// Each eliminated arc written in α, β, γ, ξ, ψ.
    pub substitution: Substitution,
    pub peripheral: Vec<PeripheralSystem>,
}

/// Order in which δ arcs are removed and the crossing each is solved from.
pub const ELIMINATION_ORDER: [(&str, &str); 7] = [
    ("delta1", "P1"),
    ("delta2", "P3"),
    ("delta3", "P5"),
    ("delta4", "P6"),
    ("delta5", "P11"),
    ("delta6", "P12"),
    ("delta7", "P9"),
];

/// Five-generator presentation of the group of `L` by Tietze moves on the
/// Wirtinger presentation, with peripheral words carried along.
pub fn eliminate_auxiliary_arcs(d: &LinkDiagram) -> Result<Elimination, WirtingerError> {
    let mut p = wirtinger_presentation(d)?;
    let mut sub = Substitution::new();
    for (arc, id) in ELIMINATION_ORDER {
        let g = Generator::from(arc);
        let c = d
            .crossings()
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| WirtingerError::Unsolvable(id.into(), g.clone()))?;
        let raw = solve_for(&crossing_relator(c)?, &g).ok_or_else(|| WirtingerError::Unsolvable(id.into(), g.clone()))?;
        let defining = sub.apply_partial(&raw)?;
        p = p.tietze_eliminate(&g, &defining)?;
        let step = Substitution::new().with(g.clone(), defining);
        let mut next = Substitution::new();
        for (h, w) in sub.images() {
            next.insert(h.clone(), step.apply_partial(w)?);
        }
        next.insert(g, step.get(&Generator::from(arc)).cloned().expect("just inserted"));
        sub = next;
    }
    let peripheral = (0..d.components().len())
        .map(|k| Ok(peripheral_system(d, k)?.rewritten(&sub)?))
        .collect::<Result<Vec<_>, WirtingerError>>()?;
    Ok(Elimination { presentation: p, substitution: sub, peripheral })
}

/// The five relators of the reduced presentation of the group of `L`, in
/// the conventional written form.
pub fn reduced_link_relators() -> Vec<Word> {
    [
        "xi^-1 gamma^-1 beta^-1 alpha^-1 xi alpha beta gamma",
        "xi^-1 alpha xi gamma^-1",
        "psi^-1 gamma xi^-1 beta xi gamma^-1 psi alpha^-1",
        "psi^-1 gamma xi^-1 gamma xi gamma^-1 psi beta^-1",
        "psi^-1 beta^-1 alpha^-1 psi alpha beta",
    ]
    .iter()
    .map(|s| Word::parse(s).expect("fixture parses"))
    .collect()
}

pub fn reduced_link_presentation() -> Presentation {
    Presentation::from_names(&["alpha", "beta", "gamma", "xi", "psi"], reduced_link_relators())
        .expect("fixture is well formed")
}
