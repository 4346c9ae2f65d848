//! Oriented link diagrams: arcs, components, signed crossings.
//!
//! A crossing records the over-arc, the under-arc entering it (`under_in`)
//! and the under-arc leaving it (`under_out`). Sign `+1` means the
//! under-strand passes right-to-left seen from the over-strand's
//! orientation. The optional `rotation` only affects how the Wirtinger
//! relator of the crossing is written down (a cyclic rotation of its four
//! letters), not the group.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Generator, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("arc `{0}` is listed twice")]
    DuplicateArc(Generator),
    #[error("crossing `{crossing}` refers to unknown arc `{arc}`")]
    UnknownArc { crossing: String, arc: Generator },
    #[error("crossing `{0}` has sign other than +1/-1")]
    BadSign(String),
    #[error("crossing `{0}` has rotation outside 0..4")]
    BadRotation(String),
    #[error("arc `{0}` must end at exactly one crossing (dangling or doubled)")]
    DanglingIn(Generator),
    #[error("arc `{0}` must start at exactly one crossing (dangling or doubled)")]
    DanglingOut(Generator),
    #[error("component {0} is not a single closed strand through its listed arcs")]
    BadComponent(usize),
    #[error("arc `{0}` belongs to no component or to several")]
    Unassigned(Generator),
    #[error("unknown component {0}")]
    UnknownComponent(usize),
    #[error("PD code: {0}")]
    Pd(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub id: String,
    pub over: Generator,
    pub under_in: Generator,
    pub under_out: Generator,
    pub sign: i8,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub rotation: u8,
}

fn is_zero(r: &u8) -> bool {
    *r == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram")]
pub struct LinkDiagram {
    arcs: Vec<Generator>,
    /// Arcs of each component in traversal order; the first is the basepoint.
    components: Vec<Vec<Generator>>,
    crossings: Vec<Crossing>,
}

#[derive(Deserialize)]
struct RawDiagram {
    arcs: Vec<Generator>,
    components: Vec<Vec<Generator>>,
    crossings: Vec<Crossing>,
}

impl TryFrom<RawDiagram> for LinkDiagram {
    type Error = DiagramError;
    fn try_from(raw: RawDiagram) -> Result<Self, Self::Error> {
        LinkDiagram::new(raw.arcs, raw.components, raw.crossings)
    }
}

impl LinkDiagram {
    /// Validates the diagram and reorders each component into traversal
    /// order, keeping its first listed arc as the basepoint.
    pub fn new(
        arcs: Vec<Generator>,
        components: Vec<Vec<Generator>>,
        crossings: Vec<Crossing>,
    ) -> Result<Self, DiagramError> {
        let mut arc_set = BTreeSet::new();
        for a in &arcs {
            if !arc_set.insert(a.clone()) {
                return Err(DiagramError::DuplicateArc(a.clone()));
            }
        }
        let mut ends_at: BTreeMap<&Generator, usize> = BTreeMap::new();
        let mut starts_at: BTreeMap<&Generator, usize> = BTreeMap::new();
        for (k, c) in crossings.iter().enumerate() {
            for arc in [&c.over, &c.under_in, &c.under_out] {
                if !arc_set.contains(arc) {
                    return Err(DiagramError::UnknownArc { crossing: c.id.clone(), arc: arc.clone() });
                }
            }
            if c.sign != 1 && c.sign != -1 {
                return Err(DiagramError::BadSign(c.id.clone()));
            }
            if c.rotation > 3 {
                return Err(DiagramError::BadRotation(c.id.clone()));
            }
            if ends_at.insert(&c.under_in, k).is_some() {
                return Err(DiagramError::DanglingIn(c.under_in.clone()));
            }
            if starts_at.insert(&c.under_out, k).is_some() {
                return Err(DiagramError::DanglingOut(c.under_out.clone()));
            }
        }
        for a in &arcs {
            if !ends_at.contains_key(a) {
                return Err(DiagramError::DanglingIn(a.clone()));
            }
            if !starts_at.contains_key(a) {
                return Err(DiagramError::DanglingOut(a.clone()));
            }
        }
        let mut owner: BTreeMap<&Generator, usize> = BTreeMap::new();
        for (ci, comp) in components.iter().enumerate() {
            for a in comp {
                if !arc_set.contains(a) || owner.insert(a, ci).is_some() {
                    return Err(DiagramError::Unassigned(a.clone()));
                }
            }
        }
        if let Some(a) = arcs.iter().find(|a| !owner.contains_key(a)) {
            return Err(DiagramError::Unassigned(a.clone()));
        }
        let mut ordered = Vec::with_capacity(components.len());
        for (ci, comp) in components.iter().enumerate() {
            let start = comp.first().ok_or(DiagramError::BadComponent(ci))?;
            let mut order = vec![start.clone()];
            let mut cur = &crossings[ends_at[start]].under_out;
            while cur != start {
                if order.len() > comp.len() || owner[cur] != ci {
                    return Err(DiagramError::BadComponent(ci));
                }
                order.push(cur.clone());
                cur = &crossings[ends_at[cur]].under_out;
            }
            if order.len() != comp.len() {
                return Err(DiagramError::BadComponent(ci));
            }
            ordered.push(order);
        }
        Ok(LinkDiagram { arcs, components: ordered, crossings })
    }

    pub fn arcs(&self) -> &[Generator] {
        &self.arcs
    }

    pub fn components(&self) -> &[Vec<Generator>] {
        &self.components
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn component_of(&self, arc: &Generator) -> Option<usize> {
        self.components.iter().position(|c| c.contains(arc))
    }

    /// The crossing at which `arc` ends as an under-strand.
    pub fn crossing_ending(&self, arc: &Generator) -> Option<&Crossing> {
        self.crossings.iter().find(|c| &c.under_in == arc)
    }

    /// Build from a planar diagram code `X[i, j, k, l]` list (edge labels
    /// increasing along each component's orientation, `i` the incoming
    /// under-edge). Arcs are named `x1, x2, …` by their smallest edge.
    pub fn from_pd(code: &[[u32; 4]]) -> Result<Self, DiagramError> {
        if code.is_empty() {
            return Err(DiagramError::Pd("empty code".into()));
        }
        let mut labels: BTreeSet<u32> = BTreeSet::new();
        for x in code {
            labels.extend(x.iter().copied());
        }
        let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let n = labels.len();
        let mut arc_uf = UnionFind::new(n);
        let mut comp_uf = UnionFind::new(n);
        for x in code {
            let [i, j, k, l] = x.map(|e| index[&e]);
            arc_uf.union(j, l);
            comp_uf.union(j, l);
            comp_uf.union(i, k);
        }
        // successor of each edge within its component: next label, wrapping
        let mut comp_edges: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for &e in &labels {
            comp_edges.entry(comp_uf.find(index[&e])).or_default().push(e);
        }
        let mut succ: BTreeMap<u32, u32> = BTreeMap::new();
        for edges in comp_edges.values() {
            if edges.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(DiagramError::Pd("component edge labels are not consecutive".into()));
            }
            for (p, &e) in edges.iter().enumerate() {
                succ.insert(e, edges[(p + 1) % edges.len()]);
            }
        }
        let mut arc_min: BTreeMap<usize, u32> = BTreeMap::new();
        for &e in &labels {
            let root = arc_uf.find(index[&e]);
            let m = arc_min.entry(root).or_insert(e);
            *m = (*m).min(e);
        }
        let mut roots: Vec<(u32, usize)> = arc_min.iter().map(|(&r, &m)| (m, r)).collect();
        roots.sort();
        let names: BTreeMap<usize, Generator> = roots
            .iter()
            .enumerate()
            .map(|(k, (_, r))| (*r, Generator::from(format!("x{}", k + 1).as_str())))
            .collect();
        let arc_of = |e: u32, uf: &mut UnionFind| names[&uf.find(index[&e])].clone();

        let mut crossings = Vec::new();
        for (c, x) in code.iter().enumerate() {
            let [i, j, k, l] = *x;
            if succ[&i] != k {
                return Err(DiagramError::Pd(format!("crossing {}: under edge {i} is not followed by {k}", c + 1)));
            }
            // over strand runs l -> j for a positive crossing
            let sign = if j == l + 1 || l > j + 1 { 1 } else { -1 };
            crossings.push(Crossing {
                id: format!("X{}", c + 1),
                over: arc_of(j, &mut arc_uf),
                under_in: arc_of(i, &mut arc_uf),
                under_out: arc_of(k, &mut arc_uf),
                sign,
                rotation: 0,
            });
        }
        let arcs: Vec<Generator> = roots.iter().map(|(_, r)| names[r].clone()).collect();
        let mut components = Vec::new();
        for edges in comp_edges.values() {
            let mut comp: Vec<Generator> = Vec::new();
            for &e in edges {
                let a = arc_of(e, &mut arc_uf);
                if !comp.contains(&a) {
                    comp.push(a);
                }
            }
            components.push(comp);
        }
        LinkDiagram::new(arcs, components, crossings)
    }

    /// Parse `X[1,4,2,5], X[3,6,4,1], …` (the `PD[...]` wrapper is optional).
    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        let mut code = Vec::new();
        let body = text.trim();
        let body = body.strip_prefix("PD[").and_then(|b| b.strip_suffix(']')).unwrap_or(body);
        for chunk in body.split("X[").skip(1) {
            let inner = chunk.split(']').next().unwrap_or("");
            let nums: Vec<u32> = inner
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| DiagramError::Pd(format!("bad crossing `X[{inner}]`")))?;
            let quad: [u32; 4] =
                nums.try_into().map_err(|_| DiagramError::Pd(format!("crossing `X[{inner}]` needs 4 labels")))?;
            code.push(quad);
        }
        LinkDiagram::from_pd(&code)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Generator {
        s.into()
    }

    fn kink() -> LinkDiagram {
        LinkDiagram::new(
            vec![g("x")],
            vec![vec![g("x")]],
            vec![Crossing { id: "K".into(), over: g("x"), under_in: g("x"), under_out: g("x"), sign: 1, rotation: 0 }],
        )
        .unwrap()
    }

    #[test]
    fn kink_is_valid() {
        assert_eq!(kink().crossings().len(), 1);
    }

    #[test]
    fn dangling_arc_is_rejected() {
        let err = LinkDiagram::new(
            vec![g("x"), g("y")],
            vec![vec![g("x"), g("y")]],
            vec![Crossing { id: "K".into(), over: g("x"), under_in: g("x"), under_out: g("y"), sign: 1, rotation: 0 }],
        );
        assert!(matches!(err, Err(DiagramError::DanglingIn(_) | DiagramError::DanglingOut(_))));
    }

    #[test]
    fn components_are_put_in_traversal_order() {
        let c = |id: &str, o: &str, i: &str, t: &str| Crossing {
            id: id.into(),
            over: g(o),
            under_in: g(i),
            under_out: g(t),
            sign: -1,
            rotation: 0,
        };
        let d = LinkDiagram::new(
            vec![g("a"), g("b"), g("c")],
            vec![vec![g("a"), g("c"), g("b")]],
            vec![c("1", "c", "a", "b"), c("2", "a", "b", "c"), c("3", "b", "c", "a")],
        )
        .unwrap();
        assert_eq!(d.components()[0], vec![g("a"), g("b"), g("c")]);
    }

    #[test]
    fn pd_trefoil() {
        let d = LinkDiagram::parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        assert_eq!(d.arcs().len(), 3);
        assert_eq!(d.components().len(), 1);
        assert!(d.crossings().iter().all(|c| c.sign == -1));
    }

    #[test]
    fn pd_hopf_link_has_two_components() {
        let d = LinkDiagram::parse_pd("X[4,1,3,2], X[2,3,1,4]").unwrap();
        assert_eq!(d.components().len(), 2);
        assert!(LinkDiagram::parse_pd("X[1,2,3]").is_err());
    }

    #[test]
    fn json_round_trip() {
        let json = serde_json::to_string(&kink()).unwrap();
        let back: LinkDiagram = serde_json::from_str(&json).unwrap();
        assert_eq!(back, kink());
        assert!(serde_json::from_str::<LinkDiagram>(
            r#"{"arcs":["x"],"components":[["x"]],"crossings":[{"id":"K","over":"y","under_in":"x","under_out":"x","sign":1}]}"#
        )
        .is_err());
    }
}
