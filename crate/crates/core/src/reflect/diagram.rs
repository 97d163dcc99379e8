//! The double-row reflection diagram: four stacked slots glued along the
//! internal edges μ, μ′, ν, ν′ with external terminals α, β, γ, δ.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::catalog::{PlaquetteKind, Port};
use super::ReflectError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Terminal {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Terminal {
    pub const ALL: [Terminal; 4] = [
        Terminal::Alpha,
        Terminal::Beta,
        Terminal::Gamma,
        Terminal::Delta,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Top-bottom mirror: α ↔ γ, β ↔ δ.
    pub fn reflected(self) -> Self {
        match self {
            Terminal::Alpha => Terminal::Gamma,
            Terminal::Beta => Terminal::Delta,
            Terminal::Gamma => Terminal::Alpha,
            Terminal::Delta => Terminal::Beta,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Terminal::Alpha => "alpha",
            Terminal::Beta => "beta",
            Terminal::Gamma => "gamma",
            Terminal::Delta => "delta",
        }
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Edge {
    Terminal(Terminal),
    Mu,
    MuPrime,
    Nu,
    NuPrime,
}

impl Edge {
    pub const COUNT: usize = 8;

    pub fn index(self) -> usize {
        match self {
            Edge::Terminal(t) => t.index(),
            Edge::Mu => 4,
            Edge::MuPrime => 5,
            Edge::Nu => 6,
            Edge::NuPrime => 7,
        }
    }
}

/// Spectral argument of a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Arg {
    X,
    Y,
    XPlusY,
    XMinusY,
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arg::X => "x",
            Arg::Y => "y",
            Arg::XPlusY => "x+y",
            Arg::XMinusY => "x-y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One plaquette position. `level` is its height in the stack, 0 on top;
/// it fixes the top-to-bottom order of boundary anchors.
#[derive(Debug, Clone, PartialEq)]
pub struct Slot {
    pub kind: PlaquetteKind,
    pub arg: Arg,
    pub level: u8,
    pub ports: Vec<(Port, Edge)>,
}

impl Slot {
    pub fn edge(&self, port: Port) -> Option<Edge> {
        self.ports.iter().find(|(p, _)| *p == port).map(|(_, e)| *e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionDiagram {
    pub side: Side,
    pub slots: Vec<Slot>,
}

fn bdy(arg: Arg, level: u8, up: Edge, lo: Edge) -> Slot {
    Slot {
        kind: PlaquetteKind::Boundary,
        arg,
        level,
        ports: vec![(Port::Up, up), (Port::Lo, lo)],
    }
}

fn rhombus(arg: Arg, level: u8, nw: Edge, ne: Edge, se: Edge, sw: Edge) -> Slot {
    Slot {
        kind: PlaquetteKind::Bulk,
        arg,
        level,
        ports: vec![
            (Port::NW, nw),
            (Port::NE, ne),
            (Port::SE, se),
            (Port::SW, sw),
        ],
    }
}

use Edge::{Mu, MuPrime, Nu, NuPrime};
const ALPHA: Edge = Edge::Terminal(Terminal::Alpha);
const BETA: Edge = Edge::Terminal(Terminal::Beta);
const GAMMA: Edge = Edge::Terminal(Terminal::Gamma);
const DELTA: Edge = Edge::Terminal(Terminal::Delta);

impl ReflectionDiagram {
    /// Boundary(y), bulk(x+y), boundary(x), bulk(x−y), top to bottom.
    pub fn left() -> Self {
        Self {
            side: Side::Left,
            slots: vec![
                bdy(Arg::Y, 0, BETA, Nu),
                rhombus(Arg::XPlusY, 1, ALPHA, Nu, Mu, NuPrime),
                bdy(Arg::X, 2, Mu, MuPrime),
                rhombus(Arg::XMinusY, 3, NuPrime, MuPrime, DELTA, GAMMA),
            ],
        }
    }

    /// Bulk(x−y), boundary(x), bulk(x+y), boundary(y), top to bottom.
    pub fn right() -> Self {
        Self {
            side: Side::Right,
            slots: vec![
                rhombus(Arg::XMinusY, 0, ALPHA, BETA, Nu, NuPrime),
                bdy(Arg::X, 1, Nu, Mu),
                rhombus(Arg::XPlusY, 2, NuPrime, Mu, MuPrime, GAMMA),
                bdy(Arg::Y, 3, MuPrime, DELTA),
            ],
        }
    }

    pub fn for_side(side: Side) -> Self {
        match side {
            Side::Left => Self::left(),
            Side::Right => Self::right(),
        }
    }

    /// Every internal edge is shared by two slots, every terminal by one,
    /// and each slot exposes exactly the ports of its kind.
    pub fn validate(&self) -> Result<(), ReflectError> {
        let mut uses = [0usize; Edge::COUNT];
        let mut levels: Vec<u8> = Vec::new();
        for s in &self.slots {
            let mut ports: Vec<Port> = s.ports.iter().map(|(p, _)| *p).collect();
            ports.sort();
            if ports != s.kind.ports() {
                return Err(ReflectError::Diagram(format!(
                    "slot at level {} has ports {ports:?}",
                    s.level
                )));
            }
            for (_, e) in &s.ports {
                uses[e.index()] += 1;
            }
            levels.push(s.level);
        }
        levels.sort();
        levels.dedup();
        if levels.len() != self.slots.len() {
            return Err(ReflectError::Diagram("duplicate slot level".into()));
        }
        for (i, n) in uses.iter().enumerate() {
            let want = if i < 4 { 1 } else { 2 };
            if *n != want {
                return Err(ReflectError::Diagram(format!(
                    "edge {i} used {n} times, expected {want}"
                )));
            }
        }
        Ok(())
    }
}
