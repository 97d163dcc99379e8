//! Reflection-equation verification by exhaustive diagram enumeration.
//!
//! Each side of the reflection equation is a stack of two boundary and two
//! bulk plaquettes. Every choice of templates whose shared edges agree is
//! traced with union-find; closed loops pick up their fugacity and the
//! remaining open strands fix the terminal class. For each class the two
//! sides must agree as functions of the weights.

pub mod catalog;
pub mod diagram;

use std::collections::BTreeMap;
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

pub use catalog::{
    AnchorKind, Catalog, CatalogModel, EdgeState, Endpoint, PlaquetteKind, PlaquetteTemplate, Port,
    Strand,
};
pub use diagram::{Arg, Edge, ReflectionDiagram, Side, Slot, Terminal};

use crate::dhsys::Fugacity;
use crate::params::{C2Params, GenOnParams, OnParams, ParamError};
use crate::weights::{
    c2_boundary, c2_bulk_at, on_boundary, on_bulk_at, on_generalized_boundary, Branch, Symbol,
    WeightSet,
};

/// Denominator floor of the relative residual.
pub const RESIDUAL_EPS: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReflectError {
    #[error("catalog mismatch: {0}")]
    Catalog(String),
    #[error("malformed diagram: {0}")]
    Diagram(String),
    #[error("loop touches {0} anchors; expected none or two")]
    Profile(usize),
    #[error("no weight for {0} at argument {1}")]
    MissingWeight(Symbol, Arg),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Fugacity of a closed loop from the anchor types it touches, listed top to
/// bottom. Mixed types give n₁ when the upper anchor is a top anchor and n₂
/// otherwise; equal types give n₃.
pub fn classify_loop(profile: &[AnchorKind]) -> Result<Fugacity, ReflectError> {
    use AnchorKind::{Bottom, Top};
    match profile {
        [] => Ok(Fugacity::N),
        [Top, Bottom] => Ok(Fugacity::N1),
        [Bottom, Top] => Ok(Fugacity::N2),
        [_, _] => Ok(Fugacity::N3),
        other => Err(ReflectError::Profile(other.len())),
    }
}

/// What an occupied terminal strand does inside the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    Empty,
    Paired(Terminal),
    /// Ends on a boundary anchor; the type is `None` when the catalog ignores it.
    Attached(Option<AnchorKind>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TerminalStatus {
    pub state: EdgeState,
    pub link: Link,
}

/// External connectivity of one side. Besides the per-terminal status it
/// records, for each pair of same-colour attached terminals, the fugacity a
/// loop would earn by joining them outside the diagram.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TerminalClass {
    pub terminals: [TerminalStatus; 4],
    pub labels: Vec<(Terminal, Terminal, Fugacity)>,
}

impl TerminalClass {
    pub fn status(&self, t: Terminal) -> TerminalStatus {
        self.terminals[t.index()]
    }

    /// Top-bottom mirror image.
    pub fn reflected(&self) -> Self {
        let mut terminals = self.terminals;
        for t in Terminal::ALL {
            let s = self.terminals[t.index()];
            let link = match s.link {
                Link::Paired(o) => Link::Paired(o.reflected()),
                Link::Attached(k) => Link::Attached(k.map(AnchorKind::flipped)),
                Link::Empty => Link::Empty,
            };
            terminals[t.reflected().index()] = TerminalStatus {
                state: s.state,
                link,
            };
        }
        // Mirroring swaps both order and type of the two anchors, which
        // leaves the n₁/n₂/n₃ label unchanged.
        let mut labels: Vec<_> = self
            .labels
            .iter()
            .map(|&(a, b, f)| {
                let (a, b) = (a.reflected(), b.reflected());
                (a.min(b), a.max(b), f)
            })
            .collect();
        labels.sort();
        Self { terminals, labels }
    }

    /// Mirror-symmetric classes give identical sides term by term.
    pub fn is_symmetric(&self) -> bool {
        *self == self.reflected()
    }
}

impl fmt::Display for TerminalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Terminal::ALL
            .iter()
            .map(|t| {
                let s = self.status(*t);
                let colour = match s.state {
                    EdgeState::Empty => "0".to_owned(),
                    EdgeState::Occupied(c) => format!("c{c}"),
                };
                let link = match s.link {
                    Link::Empty => String::new(),
                    Link::Paired(o) => format!("~{o}"),
                    Link::Attached(Some(AnchorKind::Top)) => "@top".into(),
                    Link::Attached(Some(AnchorKind::Bottom)) => "@bottom".into(),
                    Link::Attached(None) => "@".into(),
                };
                format!("{t}:{colour}{link}")
            })
            .collect();
        write!(f, "[{}]", parts.join(" "))?;
        for (a, b, fug) in &self.labels {
            write!(f, " {a}-{b}:{fug:?}")?;
        }
        Ok(())
    }
}

/// Exponents of (n, n₁, n₂, n₃) collected from closed loops.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FugacityPowers(pub [u8; 4]);

impl FugacityPowers {
    fn bump(&mut self, f: Fugacity) {
        let i = match f {
            Fugacity::N => 0,
            Fugacity::N1 => 1,
            Fugacity::N2 => 2,
            Fugacity::N3 => 3,
            Fugacity::One => return,
        };
        self.0[i] += 1;
    }

    pub fn power(&self, f: Fugacity) -> u8 {
        match f {
            Fugacity::N => self.0[0],
            Fugacity::N1 => self.0[1],
            Fugacity::N2 => self.0[2],
            Fugacity::N3 => self.0[3],
            Fugacity::One => 0,
        }
    }

    pub fn eval(&self, f: &Fugacities) -> f64 {
        let b = [f.n, f.n1, f.n2, f.n3];
        self.0
            .iter()
            .zip(b)
            .map(|(p, v)| v.powi(i32::from(*p)))
            .product()
    }
}

/// One product of four weights, top to bottom, with its loop factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DiagramTerm {
    pub factors: Vec<(Symbol, Arg)>,
    pub fugacity: FugacityPowers,
    pub multiplicity: u32,
}

impl fmt::Display for DiagramTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplicity != 1 {
            write!(f, "{}·", self.multiplicity)?;
        }
        for (name, p) in ["n", "n1", "n2", "n3"].iter().zip(self.fugacity.0) {
            match p {
                0 => {}
                1 => write!(f, "{name}·")?,
                _ => write!(f, "{name}^{p}·")?,
            }
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(s, a)| format!("{s}({a})"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Loop fugacities used when evaluating diagram terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fugacities {
    pub n: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
}

impl From<&OnParams> for Fugacities {
    fn from(p: &OnParams) -> Self {
        Self {
            n: p.n,
            n1: p.n1,
            n2: p.n2,
            n3: p.n3,
        }
    }
}

impl From<&C2Params> for Fugacities {
    fn from(p: &C2Params) -> Self {
        Self {
            n: p.n,
            n1: p.n1,
            n2: p.n2,
            n3: p.n3,
        }
    }
}

impl From<&GenOnParams> for Fugacities {
    fn from(g: &GenOnParams) -> Self {
        Self {
            n: g.n(),
            n1: g.n1,
            n2: g.n1,
            n3: g.n1,
        }
    }
}

// Union-find nodes: the eight edges, then (boundary rank, anchor type).
const ANCHOR_BASE: usize = Edge::COUNT;
const NODES: usize = ANCHOR_BASE + 4;

fn anchor_node(rank: usize, kind: AnchorKind) -> usize {
    ANCHOR_BASE + 2 * rank + usize::from(kind == AnchorKind::Bottom)
}

/// Factor list and fugacity powers identifying a term before merging.
type TermKey = (Vec<(Symbol, Arg)>, FugacityPowers);

fn anchor_of(node: usize) -> (usize, AnchorKind) {
    let k = node - ANCHOR_BASE;
    let kind = if k.is_multiple_of(2) {
        AnchorKind::Top
    } else {
        AnchorKind::Bottom
    };
    (k / 2, kind)
}

/// One traced assignment before merging.
struct Traced {
    class: TerminalClass,
    factors: Vec<(Symbol, Arg)>,
    fugacity: FugacityPowers,
}

fn trace(
    diagram: &ReflectionDiagram,
    order: &[usize],
    choice: &[&PlaquetteTemplate],
    typed: bool,
) -> Result<Option<Traced>, ReflectError> {
    // Edge states must agree wherever two slots meet.
    let mut states: [Option<EdgeState>; Edge::COUNT] = [None; Edge::COUNT];
    for (slot, tpl) in diagram.slots.iter().zip(choice) {
        for &(port, edge) in &slot.ports {
            let st = tpl.state(port);
            match states[edge.index()] {
                Some(prev) if prev != st => return Ok(None),
                _ => states[edge.index()] = Some(st),
            }
        }
    }

    // Boundary ranks follow geometric level, not slot storage order.
    let rank_of = |level: u8| order.iter().position(|&l| l == usize::from(level));

    let mut uf = UnionFind::<usize>::new(NODES);
    let mut present = [false; NODES];
    for (slot, tpl) in diagram.slots.iter().zip(choice) {
        for strand in &tpl.strands {
            let mut nodes = [0usize; 2];
            for (i, end) in strand.ends.iter().enumerate() {
                nodes[i] = match end {
                    Endpoint::Port(p) => slot
                        .edge(*p)
                        .ok_or_else(|| {
                            ReflectError::Catalog(format!("{} uses missing port {p:?}", tpl.symbol))
                        })?
                        .index(),
                    Endpoint::Anchor(k) => {
                        let r = rank_of(slot.level).ok_or_else(|| {
                            ReflectError::Diagram("anchor on a non-boundary slot".into())
                        })?;
                        anchor_node(r, *k)
                    }
                };
                present[nodes[i]] = true;
            }
            uf.union(nodes[0], nodes[1]);
        }
    }

    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for node in (0..NODES).filter(|&n| present[n]) {
        comps.entry(uf.find(node)).or_default().push(node);
    }

    let mut fugacity = FugacityPowers::default();
    let mut terminals = [TerminalStatus {
        state: EdgeState::Empty,
        link: Link::Empty,
    }; 4];
    for t in Terminal::ALL {
        terminals[t.index()].state = states[t.index()].unwrap_or(EdgeState::Empty);
    }
    let mut attached: Vec<(Terminal, (usize, AnchorKind))> = Vec::new();
    for nodes in comps.values() {
        let ts: Vec<Terminal> = nodes
            .iter()
            .filter(|&&n| n < 4)
            .map(|&n| Terminal::ALL[n])
            .collect();
        let mut anchors: Vec<(usize, AnchorKind)> = nodes
            .iter()
            .filter(|&&n| n >= ANCHOR_BASE)
            .map(|&n| anchor_of(n))
            .collect();
        anchors.sort();
        match (ts.as_slice(), anchors.as_slice()) {
            ([], []) => fugacity.bump(Fugacity::N),
            ([], [_, _]) => {
                let profile: Vec<_> = anchors.iter().map(|a| a.1).collect();
                fugacity.bump(classify_loop(&profile)?);
            }
            ([a, b], []) => {
                terminals[a.index()].link = Link::Paired(*b);
                terminals[b.index()].link = Link::Paired(*a);
            }
            ([t], [anchor]) => {
                terminals[t.index()].link = Link::Attached(typed.then_some(anchor.1));
                attached.push((*t, *anchor));
            }
            _ => {
                return Err(ReflectError::Diagram(format!(
                    "strand component with {} terminals and {} anchors",
                    ts.len(),
                    anchors.len()
                )))
            }
        }
    }

    let mut labels = Vec::new();
    if typed {
        for (i, (ta, aa)) in attached.iter().enumerate() {
            for (tb, ab) in &attached[i + 1..] {
                if terminals[ta.index()].state != terminals[tb.index()].state {
                    continue;
                }
                let (hi, lo) = if aa <= ab { (aa, ab) } else { (ab, aa) };
                let f = classify_loop(&[hi.1, lo.1])?;
                labels.push(((*ta).min(*tb), (*ta).max(*tb), f));
            }
        }
        labels.sort();
    }

    let mut factors: Vec<(u8, Symbol, Arg)> = diagram
        .slots
        .iter()
        .zip(choice)
        .map(|(s, t)| (s.level, t.symbol, s.arg))
        .collect();
    factors.sort();
    Ok(Some(Traced {
        class: TerminalClass { terminals, labels },
        factors: factors.into_iter().map(|(_, s, a)| (s, a)).collect(),
        fugacity,
    }))
}

fn cartesian<'a>(lists: &[&'a [PlaquetteTemplate]]) -> Vec<Vec<&'a PlaquetteTemplate>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t);
                    v
                })
            })
            .collect()
    })
}

/// All merged terms of one side, grouped by terminal class.
pub fn enumerate_side(
    diagram: &ReflectionDiagram,
    catalog: &Catalog,
) -> Result<BTreeMap<TerminalClass, Vec<DiagramTerm>>, ReflectError> {
    diagram.validate()?;
    catalog.validate()?;
    let mut order: Vec<usize> = diagram
        .slots
        .iter()
        .filter(|s| s.kind == PlaquetteKind::Boundary)
        .map(|s| usize::from(s.level))
        .collect();
    order.sort();

    let lists: Vec<&[PlaquetteTemplate]> = diagram
        .slots
        .iter()
        .map(|s| catalog.templates(s.kind))
        .collect();
    let mut merged: BTreeMap<TerminalClass, BTreeMap<TermKey, u32>> = BTreeMap::new();
    for choice in cartesian(&lists) {
        if let Some(t) = trace(diagram, &order, &choice, catalog.typed_anchors)? {
            *merged
                .entry(t.class)
                .or_default()
                .entry((t.factors, t.fugacity))
                .or_default() += 1;
        }
    }
    if merged.is_empty() {
        return Err(ReflectError::Catalog("no consistent assignment".into()));
    }
    Ok(merged
        .into_iter()
        .map(|(class, terms)| {
            let terms = terms
                .into_iter()
                .map(|((factors, fugacity), multiplicity)| DiagramTerm {
                    factors,
                    fugacity,
                    multiplicity,
                })
                .collect();
            (class, terms)
        })
        .collect())
}

/// Terms of one side for a single class; empty if the class does not occur.
pub fn enumerate_class(
    diagram: &ReflectionDiagram,
    class: &TerminalClass,
    catalog: &Catalog,
) -> Result<Vec<DiagramTerm>, ReflectError> {
    Ok(enumerate_side(diagram, catalog)?
        .remove(class)
        .unwrap_or_default())
}

/// Weights at the four slot arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotWeights {
    pub boundary_x: WeightSet,
    pub boundary_y: WeightSet,
    pub bulk_sum: WeightSet,
    pub bulk_diff: WeightSet,
}

impl SlotWeights {
    pub fn get(&self, sym: Symbol, arg: Arg) -> Result<f64, ReflectError> {
        let w = match arg {
            Arg::X => &self.boundary_x,
            Arg::Y => &self.boundary_y,
            Arg::XPlusY => &self.bulk_sum,
            Arg::XMinusY => &self.bulk_diff,
        };
        w.get(sym).ok_or(ReflectError::MissingWeight(sym, arg))
    }

    pub fn term(&self, t: &DiagramTerm, f: &Fugacities) -> Result<f64, ReflectError> {
        let mut v = f64::from(t.multiplicity) * t.fugacity.eval(f);
        for (s, a) in &t.factors {
            v *= self.get(*s, *a)?;
        }
        Ok(v)
    }

    /// Sum of a side and the sum of its term magnitudes.
    pub fn side(&self, terms: &[DiagramTerm], f: &Fugacities) -> Result<(f64, f64), ReflectError> {
        let mut total = 0.0;
        let mut mag = 0.0;
        for t in terms {
            let v = self.term(t, f)?;
            total += v;
            mag += v.abs();
        }
        Ok((total, mag))
    }
}

/// Both sides of every class, enumerated once and reusable across points.
#[derive(Debug, Clone)]
pub struct ReflectionSystem {
    pub catalog: Catalog,
    pub classes: BTreeMap<TerminalClass, (Vec<DiagramTerm>, Vec<DiagramTerm>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassResidual {
    pub class: TerminalClass,
    pub symmetric: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl ReflectionSystem {
    pub fn new(catalog: Catalog) -> Result<Self, ReflectError> {
        let mut left = enumerate_side(&ReflectionDiagram::left(), &catalog)?;
        let mut right = enumerate_side(&ReflectionDiagram::right(), &catalog)?;
        let keys: std::collections::BTreeSet<TerminalClass> =
            left.keys().chain(right.keys()).cloned().collect();
        let classes = keys
            .into_iter()
            .map(|k| {
                let l = left.remove(&k).unwrap_or_default();
                let r = right.remove(&k).unwrap_or_default();
                (k, (l, r))
            })
            .collect();
        Ok(Self { catalog, classes })
    }

    /// Classes that are not mirror-symmetric.
    pub fn nontrivial(&self) -> impl Iterator<Item = &TerminalClass> {
        self.classes.keys().filter(|c| !c.is_symmetric())
    }

    /// Relative residual `|L − R| / max(Σ|L terms|, Σ|R terms|, ε)` per class.
    ///
    /// Normalizing by term magnitudes rather than side totals keeps classes
    /// whose sides cancel internally from reporting rounding noise as failure.
    pub fn residuals(
        &self,
        w: &SlotWeights,
        f: &Fugacities,
    ) -> Result<Vec<ClassResidual>, ReflectError> {
        self.classes
            .iter()
            .map(|(class, (l, r))| {
                let (lv, lm) = w.side(l, f)?;
                let (rv, rm) = w.side(r, f)?;
                Ok(ClassResidual {
                    class: class.clone(),
                    symmetric: class.is_symmetric(),
                    lhs: lv,
                    rhs: rv,
                    residual: (lv - rv).abs() / lm.max(rm).max(RESIDUAL_EPS),
                })
            })
            .collect()
    }

    pub fn residual(
        &self,
        w: &SlotWeights,
        f: &Fugacities,
        class: &TerminalClass,
    ) -> Result<f64, ReflectError> {
        let (l, r) = self
            .classes
            .get(class)
            .ok_or_else(|| ReflectError::Catalog(format!("class {class} does not occur")))?;
        let (lv, lm) = w.side(l, f)?;
        let (rv, rm) = w.side(r, f)?;
        Ok((lv - rv).abs() / lm.max(rm).max(RESIDUAL_EPS))
    }

    pub fn max_residual(&self, w: &SlotWeights, f: &Fugacities) -> Result<f64, ReflectError> {
        Ok(self
            .residuals(w, f)?
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max))
    }
}

/// O(n) slot weights at the point `p` (spectral parameter x) and `y`.
pub fn on_slot_weights(p: &OnParams, y: f64, branch: Branch) -> SlotWeights {
    SlotWeights {
        boundary_x: on_boundary(p, branch),
        boundary_y: on_boundary(&p.with_x(y), branch),
        bulk_sum: on_bulk_at(p.lambda, p.x + y),
        bulk_diff: on_bulk_at(p.lambda, p.x - y),
    }
}

pub fn c2_slot_weights(p: &C2Params, y: f64, branch: Branch) -> SlotWeights {
    SlotWeights {
        boundary_x: c2_boundary(p, branch),
        boundary_y: c2_boundary(&p.with_x(y), branch),
        bulk_sum: c2_bulk_at(p.lambda, p.x + y),
        bulk_diff: c2_bulk_at(p.lambda, p.x - y),
    }
}

pub fn gen_slot_weights(g: &GenOnParams, y: f64) -> SlotWeights {
    SlotWeights {
        boundary_x: on_generalized_boundary(g),
        boundary_y: on_generalized_boundary(&g.with_x(y)),
        bulk_sum: on_bulk_at(g.lambda, g.x + y),
        bulk_diff: on_bulk_at(g.lambda, g.x - y),
    }
}

/// Per-class residuals of the O(n) printed boundary solution.
pub fn re_residuals_on(
    sys: &ReflectionSystem,
    p: &OnParams,
    y: f64,
    branch: Branch,
) -> Result<Vec<ClassResidual>, ReflectError> {
    sys.residuals(&on_slot_weights(p, y, branch), &p.into())
}

pub fn re_residuals_c2(
    sys: &ReflectionSystem,
    p: &C2Params,
    y: f64,
    branch: Branch,
) -> Result<Vec<ClassResidual>, ReflectError> {
    sys.residuals(&c2_slot_weights(p, y, branch), &p.into())
}

/// Per-class residuals of the generalized family with n₁ = n₂ = n₃.
pub fn re_residual_generalized(
    g: &GenOnParams,
    y: f64,
) -> Result<Vec<ClassResidual>, ReflectError> {
    ReflectionSystem::new(Catalog::on_generalized())?.residuals(&gen_slot_weights(g, y), &g.into())
}
