use std::fmt::Display;
use std::path::Path;

use anyhow::anyhow;
use knotgroup::coset::{surgered_presentation, EnumerationResult, Outcome};
use knotgroup::criterion::{criterion_report, minimal_integer_bound, Slope, Verdict};
use knotgroup::registry::{builders, enumerators, framings};
use knotgroup::twisted::verify_proof;
use knotgroup::wirtinger::{builtin_link_l, knot_presentation, wirtinger_presentation};
use knotgroup::{HomologySummary, KnotGroupModel, LinkDiagram, Presentation, ProofReport, TwistParams};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

/// Result of one command: JSON payloads (one per output line) and a text rendering.
pub struct Output {
    pub payloads: Vec<Value>,
    pub text: String,
}

impl Output {
    fn one(payload: impl Serialize, text: String) -> anyhow::Result<Output> {
        Ok(Output { payloads: vec![serde_json::to_value(payload)?], text })
    }
}

fn in_module<E: Display>(module: &'static str) -> impl Fn(E) -> anyhow::Error {
    move |e| anyhow!("{module}: {e}")
}

pub fn load_diagram(path: Option<&Path>) -> anyhow::Result<LinkDiagram> {
    let Some(path) = path else { return Ok(builtin_link_l()) };
    let text = std::fs::read_to_string(path).map_err(|e| anyhow!("diagram: cannot read {}: {e}", path.display()))?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(in_module("diagram"))
    } else {
        LinkDiagram::parse_pd(&text).map_err(in_module("diagram"))
    }
}

fn render_presentation(p: &Presentation) -> String {
    let mut s = format!("generators: {}\n", p.generators().iter().map(|g| g.name()).collect::<Vec<_>>().join(" "));
    for r in p.relators() {
        s += &format!("  {r}\n");
    }
    s
}

fn render_homology(h: &HomologySummary) -> String {
    let mut parts: Vec<String> = h.torsion_orders.iter().map(|d| format!("Z/{d}")).collect();
    match h.free_rank {
        0 => {}
        1 => parts.push("Z".into()),
        r => parts.push(format!("Z^{r}")),
    }
    if parts.is_empty() { "0".into() } else { parts.join(" + ") }
}

pub fn wirtinger(diagram: Option<&Path>, knot: bool) -> anyhow::Result<Output> {
    let d = load_diagram(diagram)?;
    let p = if knot { knot_presentation(&d) } else { wirtinger_presentation(&d) }.map_err(in_module("wirtinger"))?;
    let text = render_presentation(&p);
    Output::one(&p, text)
}

pub fn model(u: i64, v: i64, mode: &str) -> anyhow::Result<KnotGroupModel> {
    let params = TwistParams::new(u, v).map_err(in_module("twisted"))?;
    builders().get(mode).map_err(in_module("registry"))?.build(params).map_err(in_module("twisted"))
}

#[derive(Serialize)]
struct Generated<'a> {
    #[serde(flatten)]
    model: &'a KnotGroupModel,
    relator_text: String,
    longitude_paper_text: String,
    longitude_corrected_text: String,
}

pub fn generate(u: i64, v: i64, mode: &str) -> anyhow::Result<Output> {
    let m = model(u, v, mode)?;
    let out = Generated {
        model: &m,
        relator_text: m.relator().to_string(),
        longitude_paper_text: m.longitude_paper.to_string(),
        longitude_corrected_text: m.longitude_corrected.to_string(),
    };
    let text = format!(
        "relator: {}\nmeridian: {}\nlongitude (paper, s = {}): {}\nlongitude (corrected, s = {}): {}\n",
        out.relator_text, m.meridian, m.s_paper, out.longitude_paper_text, m.s_corrected, out.longitude_corrected_text
    );
    Output::one(&out, text)
}

fn render_proof(r: &ProofReport) -> String {
    let mut s = format!("u = {}, v = {}\n", r.params.u, r.params.v);
    for c in &r.checks {
        let tag = if c.passed { "ok  " } else { "FAIL" };
        s += &format!("  {tag} {}: {}\n", c.name, c.detail);
    }
    s
}

pub fn verify(u: i64, v: i64) -> anyhow::Result<Output> {
    let params = TwistParams::new(u, v).map_err(in_module("twisted"))?;
    let r = verify_proof(params).map_err(in_module("twisted"))?;
    let text = render_proof(&r);
    Output::one(&r, text)
}

/// Reports for every `(u, v)` in the box, in row-major order.
pub fn verify_sweep(umin: i64, umax: i64, vmin: i64, vmax: i64) -> anyhow::Result<Output> {
    if umin > umax || vmin > vmax {
        return Err(anyhow!("twisted: empty sweep range"));
    }
    let grid: Vec<(i64, i64)> = (umin..=umax).flat_map(|u| (vmin..=vmax).map(move |v| (u, v))).collect();
    let reports: Vec<ProofReport> = grid
        .par_iter()
        .map(|&(u, v)| {
            let params = TwistParams::new(u, v).map_err(in_module("twisted"))?;
            verify_proof(params).map_err(in_module("twisted"))
        })
        .collect::<anyhow::Result<_>>()?;
    let text = reports.iter().map(render_proof).collect();
    let payloads = reports.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
    Ok(Output { payloads, text })
}

fn slope(p: i64, q: i64) -> anyhow::Result<Slope> {
    Slope::new(p, q).map_err(in_module("criterion"))
}

pub fn check_slope(u: i64, v: i64, p: i64, q: i64, longitude: &str, mode: &str) -> anyhow::Result<Output> {
    let m = model(u, v, mode)?;
    let choice = framings().get(longitude).map_err(in_module("registry"))?.choice();
    let r = criterion_report(&m, slope(p, q)?, choice).map_err(in_module("criterion"))?;
    let verdict = match &r.verdict {
        Verdict::GuaranteedNonLo => "guaranteed non-left-orderable".to_string(),
        Verdict::NotApplicable(why) => format!("not applicable ({why})"),
        Verdict::Unknown => "unknown (slope below bound)".to_string(),
    };
    let form = if r.longitude == knotgroup::LongitudeChoice::Paper { &r.form_paper } else { &r.form_corrected };
    let text = format!(
        "slope {}/{}: {verdict}\ns = {}, t = {}, w = {}, positive = {}\n",
        r.slope.p(), r.slope.q(), form.s, form.t, form.w, form.w_positive
    );
    Output::one(&r, text)
}

pub fn bound(u: i64, v: i64, longitude: &str, mode: &str) -> anyhow::Result<Output> {
    let m = model(u, v, mode)?;
    let choice = framings().get(longitude).map_err(in_module("registry"))?.choice();
    let b = minimal_integer_bound(&m, choice).map_err(in_module("criterion"))?;
    Output::one(b, format!("{b}\n"))
}

pub fn h1(u: i64, v: i64, filling: Option<(i64, i64)>, longitude: &str, mode: &str) -> anyhow::Result<Output> {
    let m = model(u, v, mode)?;
    let p = match filling {
        Some((p, q)) => {
            let choice = framings().get(longitude).map_err(in_module("registry"))?.choice();
            surgered_presentation(&m, slope(p, q)?, choice).map_err(in_module("coset"))?
        }
        None => m.presentation,
    };
    let h = p.homology().map_err(in_module("presentation"))?;
    let text = format!("{}\n", render_homology(&h));
    Output::one(&h, text)
}

pub fn alexander(source: AlexanderSource) -> anyhow::Result<Output> {
    let p = match source {
        AlexanderSource::Family { u, v, mode } => model(u, v, mode)?.presentation,
        AlexanderSource::Diagram(path) => knot_presentation(&load_diagram(path)?).map_err(in_module("wirtinger"))?,
    };
    let poly = p.alexander_polynomial().map_err(in_module("presentation"))?;
    let text = format!("{poly}\n");
    let payload = json!({ "polynomial": poly.to_string(), "coefficients": poly.dense() });
    Output::one(payload, text)
}

pub enum AlexanderSource<'a> {
    Family { u: i64, v: i64, mode: &'a str },
    Diagram(Option<&'a Path>),
}

pub struct EnumerateArgs<'a> {
    pub u: i64,
    pub v: i64,
    pub p: i64,
    pub q: i64,
    pub longitude: &'a str,
    pub mode: &'a str,
    pub strategy: &'a str,
    pub max_cosets: usize,
}

pub fn enumerate(a: EnumerateArgs<'_>) -> anyhow::Result<Output> {
    let m = model(a.u, a.v, a.mode)?;
    let choice = framings().get(a.longitude).map_err(in_module("registry"))?.choice();
    let pres = surgered_presentation(&m, slope(a.p, a.q)?, choice).map_err(in_module("coset"))?;
    let registry = enumerators();
    let strategy = registry.get(a.strategy).map_err(in_module("registry"))?;
    let r: EnumerationResult = strategy.enumerate(&pres, a.max_cosets).map_err(in_module("coset"))?;
    let head = match r.outcome {
        Outcome::Finished { order } => format!("finished: order {order}"),
        Outcome::Exceeded { limit } => format!("exceeded: more than {limit} cosets"),
    };
    let text = format!("{head}\ncosets defined: {}\ntrace: {} {}\n", r.cosets_defined, r.strategy, r.trace_hash);
    Output::one(&r, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homology_rendering() {
        let h = |t: Vec<i64>, r| HomologySummary { torsion_orders: t, free_rank: r };
        assert_eq!(render_homology(&h(vec![], 0)), "0");
        assert_eq!(render_homology(&h(vec![2, 4], 1)), "Z/2 + Z/4 + Z");
        assert_eq!(render_homology(&h(vec![], 3)), "Z^3");
    }

    #[test]
    fn empty_sweep_is_an_error() {
        assert!(verify_sweep(1, 0, 0, 0).is_err());
        assert_eq!(verify_sweep(0, 0, 0, 2).unwrap().payloads.len(), 3);
    }
}
