//! Plaquette templates: which edges carry a strand, how strands pair up
//! inside the plaquette, and where they attach to the boundary.

use serde::{Deserialize, Serialize};

use super::ReflectError;
use crate::weights::Symbol;

/// Local edge of a plaquette. Bulk rhombi use the four compass edges;
/// boundary triangles expose an upper and a lower bulk-facing edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Port {
    NW,
    NE,
    SE,
    SW,
    Up,
    Lo,
}

impl Port {
    fn is_bulk(self) -> bool {
        matches!(self, Port::NW | Port::NE | Port::SE | Port::SW)
    }
}

/// Boundary attachment point: top or bottom edge of a boundary plaquette.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorKind {
    Top,
    Bottom,
}

impl AnchorKind {
    pub fn flipped(self) -> Self {
        match self {
            AnchorKind::Top => AnchorKind::Bottom,
            AnchorKind::Bottom => AnchorKind::Top,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Port(Port),
    Anchor(AnchorKind),
}

/// Occupancy of one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeState {
    Empty,
    Occupied(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strand {
    pub ends: [Endpoint; 2],
    pub colour: u8,
}

impl Strand {
    pub const fn new(a: Endpoint, b: Endpoint, colour: u8) -> Self {
        Self {
            ends: [a, b],
            colour,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaquetteKind {
    Bulk,
    Boundary,
}

impl PlaquetteKind {
    pub fn ports(self) -> &'static [Port] {
        match self {
            PlaquetteKind::Bulk => &[Port::NW, Port::NE, Port::SE, Port::SW],
            PlaquetteKind::Boundary => &[Port::Up, Port::Lo],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaquetteTemplate {
    pub symbol: Symbol,
    pub kind: PlaquetteKind,
    pub strands: Vec<Strand>,
}

impl PlaquetteTemplate {
    pub fn new(symbol: Symbol, kind: PlaquetteKind, strands: &[Strand]) -> Self {
        Self {
            symbol,
            kind,
            strands: strands.to_vec(),
        }
    }

    /// State of a local edge: occupied by the colour of the strand ending there.
    pub fn state(&self, port: Port) -> EdgeState {
        self.strands
            .iter()
            .find(|s| s.ends.contains(&Endpoint::Port(port)))
            .map_or(EdgeState::Empty, |s| EdgeState::Occupied(s.colour))
    }

    fn validate(&self, colours: u8) -> Result<(), ReflectError> {
        let bad = |why: &str| Err(ReflectError::Catalog(format!("{}: {why}", self.symbol)));
        let mut seen: Vec<Endpoint> = Vec::new();
        for s in &self.strands {
            if s.colour >= colours {
                return bad("colour out of range");
            }
            if s.ends[0] == s.ends[1] {
                return bad("strand returns to its own endpoint");
            }
            for e in s.ends {
                match (self.kind, e) {
                    (PlaquetteKind::Bulk, Endpoint::Anchor(_)) => return bad("anchor in bulk"),
                    (PlaquetteKind::Bulk, Endpoint::Port(p)) if !p.is_bulk() => {
                        return bad("boundary port in bulk")
                    }
                    (PlaquetteKind::Boundary, Endpoint::Port(p)) if p.is_bulk() => {
                        return bad("bulk port on boundary")
                    }
                    _ => {}
                }
                if seen.contains(&e) {
                    return bad("endpoint used twice");
                }
                seen.push(e);
            }
        }
        // Two same-colour strands may not cross inside a rhombus.
        let diag = |a, b| {
            self.strands.iter().find(|s| {
                s.ends.contains(&Endpoint::Port(a)) && s.ends.contains(&Endpoint::Port(b))
            })
        };
        if let (Some(a), Some(b)) = (diag(Port::NW, Port::SE), diag(Port::NE, Port::SW)) {
            if a.colour == b.colour {
                return bad("same-colour crossing");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogModel {
    On,
    GenOn,
    C2,
}

/// All templates of one model. `typed_anchors` decides whether terminal
/// classes distinguish top from bottom attachments.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub model: CatalogModel,
    pub colours: u8,
    pub bulk: Vec<PlaquetteTemplate>,
    pub boundary: Vec<PlaquetteTemplate>,
    pub typed_anchors: bool,
}

const fn port(p: Port) -> Endpoint {
    Endpoint::Port(p)
}
const TOP: Endpoint = Endpoint::Anchor(AnchorKind::Top);
const BOTTOM: Endpoint = Endpoint::Anchor(AnchorKind::Bottom);
const NW: Endpoint = port(Port::NW);
const NE: Endpoint = port(Port::NE);
const SE: Endpoint = port(Port::SE);
const SW: Endpoint = port(Port::SW);
const UP: Endpoint = port(Port::Up);
const LO: Endpoint = port(Port::Lo);

fn bulk(symbol: Symbol, strands: &[Strand]) -> PlaquetteTemplate {
    PlaquetteTemplate::new(symbol, PlaquetteKind::Bulk, strands)
}

fn boundary(symbol: Symbol, strands: &[Strand]) -> PlaquetteTemplate {
    PlaquetteTemplate::new(symbol, PlaquetteKind::Boundary, strands)
}

fn on_bulk_templates() -> Vec<PlaquetteTemplate> {
    use Symbol::*;
    let s = |a, b| Strand::new(a, b, 0);
    vec![
        bulk(T, &[]),
        bulk(U1, &[s(NW, SW)]),
        bulk(U1, &[s(NE, SE)]),
        bulk(U2, &[s(NW, NE)]),
        bulk(U2, &[s(SW, SE)]),
        bulk(V, &[s(NW, SE)]),
        bulk(V, &[s(NE, SW)]),
        bulk(W1, &[s(NW, SW), s(NE, SE)]),
        bulk(W2, &[s(NW, NE), s(SW, SE)]),
    ]
}

fn on_boundary_templates() -> Vec<PlaquetteTemplate> {
    use Symbol::*;
    let s = |a, b| Strand::new(a, b, 0);
    vec![
        boundary(Beta1, &[]),
        boundary(Beta2, &[s(UP, LO)]),
        boundary(Beta3, &[s(UP, TOP), s(LO, BOTTOM)]),
    ]
}

impl Catalog {
    /// Dilute O(n) with the blobbed boundary.
    pub fn on() -> Self {
        Self {
            model: CatalogModel::On,
            colours: 1,
            bulk: on_bulk_templates(),
            boundary: on_boundary_templates(),
            typed_anchors: true,
        }
    }

    /// O(n) with single-anchor β₄ plaquettes in both orientations. With equal
    /// boundary fugacities the anchor type carries no information, so
    /// classes ignore it.
    pub fn on_generalized() -> Self {
        Self {
            model: CatalogModel::GenOn,
            typed_anchors: false,
            ..Self::on_extended_typed()
        }
    }

    /// The β₄-extended catalog keeping anchor types in the classes; used to
    /// probe unequal fugacities.
    pub fn on_extended_typed() -> Self {
        let mut boundary = on_boundary_templates();
        boundary.push(self::boundary(Symbol::Beta4, &[Strand::new(UP, TOP, 0)]));
        boundary.push(self::boundary(Symbol::Beta4, &[Strand::new(LO, BOTTOM, 0)]));
        Self {
            model: CatalogModel::GenOn,
            colours: 1,
            bulk: on_bulk_templates(),
            boundary,
            typed_anchors: true,
        }
    }

    /// Dense two-colour C₂⁽¹⁾ model. Colour 0 and colour 1 enter
    /// symmetrically in the bulk; at the boundary β₁/β₃ carry colour 0 and
    /// β₂/β₄ colour 1.
    pub fn c2() -> Self {
        use Symbol::*;
        let mut bulk_t = Vec::new();
        // identity-like and cup-cap pairings: equal colours give w, unequal u
        for (pairs, same, diff) in [
            ([(NW, SW), (NE, SE)], W1, U1),
            ([(NW, NE), (SW, SE)], W2, U2),
        ] {
            for c1 in 0..2u8 {
                for c2 in 0..2u8 {
                    let sym = if c1 == c2 { same } else { diff };
                    bulk_t.push(bulk(
                        sym,
                        &[
                            Strand::new(pairs[0].0, pairs[0].1, c1),
                            Strand::new(pairs[1].0, pairs[1].1, c2),
                        ],
                    ));
                }
            }
        }
        for (c1, c2) in [(0u8, 1u8), (1, 0)] {
            bulk_t.push(bulk(V, &[Strand::new(NW, SE, c1), Strand::new(NE, SW, c2)]));
        }
        let boundary_t = vec![
            boundary(Beta1, &[Strand::new(UP, LO, 0)]),
            boundary(Beta2, &[Strand::new(UP, LO, 1)]),
            boundary(
                Beta3,
                &[Strand::new(UP, TOP, 0), Strand::new(LO, BOTTOM, 0)],
            ),
            boundary(
                Beta4,
                &[Strand::new(UP, TOP, 1), Strand::new(LO, BOTTOM, 1)],
            ),
        ];
        Self {
            model: CatalogModel::C2,
            colours: 2,
            bulk: bulk_t,
            boundary: boundary_t,
            typed_anchors: true,
        }
    }

    pub fn templates(&self, kind: PlaquetteKind) -> &[PlaquetteTemplate] {
        match kind {
            PlaquetteKind::Bulk => &self.bulk,
            PlaquetteKind::Boundary => &self.boundary,
        }
    }

    pub fn validate(&self) -> Result<(), ReflectError> {
        if self.bulk.is_empty() || self.boundary.is_empty() {
            return Err(ReflectError::Catalog("empty template list".into()));
        }
        for t in &self.bulk {
            if t.kind != PlaquetteKind::Bulk || t.symbol.is_boundary() {
                return Err(ReflectError::Catalog(format!("{} is not bulk", t.symbol)));
            }
            t.validate(self.colours)?;
        }
        for t in &self.boundary {
            if t.kind != PlaquetteKind::Boundary || !t.symbol.is_boundary() {
                return Err(ReflectError::Catalog(format!(
                    "{} is not boundary",
                    t.symbol
                )));
            }
            t.validate(self.colours)?;
        }
        Ok(())
    }
}
