//! Closed-form integrable Boltzmann weights.
//!
//! Weights are returned unnormalized; comparisons elsewhere are projective.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::params::{C2Params, GenOnParams, OnParams};

/// Weight symbols, ordered bulk first then boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    T,
    U1,
    U2,
    V,
    W1,
    W2,
    Beta1,
    Beta2,
    Beta3,
    Beta4,
}

impl Symbol {
    pub const ALL: [Symbol; 10] = [
        Symbol::T,
        Symbol::U1,
        Symbol::U2,
        Symbol::V,
        Symbol::W1,
        Symbol::W2,
        Symbol::Beta1,
        Symbol::Beta2,
        Symbol::Beta3,
        Symbol::Beta4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Symbol::T => "t",
            Symbol::U1 => "u1",
            Symbol::U2 => "u2",
            Symbol::V => "v",
            Symbol::W1 => "w1",
            Symbol::W2 => "w2",
            Symbol::Beta1 => "beta1",
            Symbol::Beta2 => "beta2",
            Symbol::Beta3 => "beta3",
            Symbol::Beta4 => "beta4",
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(
            self,
            Symbol::Beta1 | Symbol::Beta2 | Symbol::Beta3 | Symbol::Beta4
        )
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Symbol {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Symbol::ALL
            .into_iter()
            .find(|sym| sym.name() == s)
            .ok_or_else(|| format!("unknown weight symbol `{s}`"))
    }
}

/// Which boundary flux condition a solution branch satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Vanishing real parts.
    Real,
    /// Vanishing imaginary parts.
    Imaginary,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Real, Branch::Imaginary];

    /// `+1` for the real-flux branch, `-1` otherwise.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Real => 1.0,
            Branch::Imaginary => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Real => "real",
            Branch::Imaginary => "imaginary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightModel {
    OnBulk,
    OnBoundary,
    C2Bulk,
    C2Boundary,
    GenOnBoundary,
}

impl WeightModel {
    fn admits(self, symbols: &[Symbol]) -> bool {
        use Symbol::*;
        match self {
            WeightModel::OnBulk => symbols == [T, U1, U2, V, W1, W2],
            WeightModel::C2Bulk => symbols == [U1, U2, V, W1, W2],
            WeightModel::OnBoundary => {
                symbols == [Beta1, Beta2] || symbols == [Beta1, Beta2, Beta3]
            }
            WeightModel::C2Boundary => {
                symbols == [Beta1, Beta2] || symbols == [Beta1, Beta2, Beta3, Beta4]
            }
            WeightModel::GenOnBoundary => symbols == [Beta1, Beta2, Beta3, Beta4],
        }
    }
}

/// A named set of real weights tagged with its model and branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    pub model: WeightModel,
    pub branch: Option<Branch>,
    entries: BTreeMap<Symbol, f64>,
}

impl WeightSet {
    /// Panics if the symbol set does not match the model; every caller in
    /// this crate passes a fixed literal list.
    pub fn new(model: WeightModel, branch: Option<Branch>, entries: &[(Symbol, f64)]) -> Self {
        let ws = Self {
            model,
            branch,
            entries: entries.iter().copied().collect(),
        };
        assert!(
            model.admits(&ws.symbols()),
            "symbol set {:?} does not fit {model:?}",
            ws.symbols()
        );
        ws
    }

    /// Builds from a symbol list and matching values, checking the model.
    pub fn from_values(
        model: WeightModel,
        branch: Option<Branch>,
        symbols: &[Symbol],
        values: &[f64],
    ) -> Option<Self> {
        if symbols.len() != values.len() || values.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let entries: BTreeMap<_, _> = symbols
            .iter()
            .copied()
            .zip(values.iter().copied())
            .collect();
        let keys: Vec<_> = entries.keys().copied().collect();
        model.admits(&keys).then_some(Self {
            model,
            branch,
            entries,
        })
    }

    pub fn get(&self, sym: Symbol) -> Option<f64> {
        self.entries.get(&sym).copied()
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.entries.keys().copied().collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.values().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, f64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `delta` to one existing entry. Returns false if the symbol is absent.
    pub fn perturb(&mut self, sym: Symbol, delta: f64) -> bool {
        match self.entries.get_mut(&sym) {
            Some(v) => {
                *v += delta;
                true
            }
            None => false,
        }
    }
}

/// O(n) bulk weights at crossing parameter `lambda` and spectral parameter `x`.
pub fn on_bulk_at(lambda: f64, x: f64) -> WeightSet {
    let (s2, s3) = ((2.0 * lambda).sin(), (3.0 * lambda).sin());
    let (sx, s3x) = (x.sin(), (3.0 * lambda - x).sin());
    WeightSet::new(
        WeightModel::OnBulk,
        None,
        &[
            (Symbol::T, sx * s3x + s2 * s3),
            (Symbol::U1, s2 * s3x),
            (Symbol::U2, s2 * sx),
            (Symbol::V, sx * s3x),
            (Symbol::W1, (2.0 * lambda - x).sin() * s3x),
            (Symbol::W2, -sx * (lambda - x).sin()),
        ],
    )
}

pub fn on_bulk(p: &OnParams) -> WeightSet {
    on_bulk_at(p.lambda, p.x)
}

/// O(n) non-diagonal boundary weights for explicit fugacities.
pub fn on_boundary_with(lambda: f64, x: f64, fugacities: [f64; 3], branch: Branch) -> WeightSet {
    let [n1, n2, n3] = fugacities;
    let sg = branch.sign();
    WeightSet::new(
        WeightModel::OnBoundary,
        Some(branch),
        &[
            (
                Symbol::Beta1,
                n1 + n2 * (4.0 * lambda).cos() + sg * n3 * (2.0 * x - lambda).cos(),
            ),
            (
                Symbol::Beta2,
                n1 * (2.0 * x).cos() + n2 * (2.0 * x - 4.0 * lambda).cos() + sg * n3 * lambda.cos(),
            ),
            (Symbol::Beta3, -2.0 * (4.0 * lambda).sin() * (2.0 * x).sin()),
        ],
    )
}

pub fn on_boundary(p: &OnParams, branch: Branch) -> WeightSet {
    on_boundary_with(p.lambda, p.x, [p.n1, p.n2, p.n3], branch)
}

/// Diagonal O(n) boundary: no strand attaches, so β₃ is absent.
pub fn on_boundary_diagonal(lambda: f64, x: f64, branch: Branch) -> WeightSet {
    let (a, b) = (1.5 * lambda + x, 1.5 * lambda - x);
    let (b1, b2) = match branch {
        Branch::Real => (a.sin(), b.sin()),
        Branch::Imaginary => (a.cos(), b.cos()),
    };
    WeightSet::new(
        WeightModel::OnBoundary,
        Some(branch),
        &[(Symbol::Beta1, b1), (Symbol::Beta2, b2)],
    )
}

/// Blobbed O(n) boundary weights. The upper sign belongs to the real branch.
pub fn on_blobbed(lambda: f64, lambda1: f64, x: f64, branch: Branch) -> WeightSet {
    let sg = branch.sign();
    let c = 4.0 * lambda + 4.0 * lambda1;
    WeightSet::new(
        WeightModel::OnBoundary,
        Some(branch),
        &[
            (
                Symbol::Beta1,
                0.5 * ((2.0 * x - lambda).cos() - sg * c.cos()),
            ),
            (
                Symbol::Beta2,
                0.5 * (lambda.cos() - sg * (2.0 * x - c).cos()),
            ),
            (Symbol::Beta3, sg * c.sin() * (2.0 * x).sin()),
        ],
    )
}

/// One-parameter boundary family of the generalized model, labelled by `k`.
pub fn on_generalized_boundary(g: &GenOnParams) -> WeightSet {
    let GenOnParams { lambda, x, k, n1 } = *g;
    let h = 0.5 * lambda;
    let k2 = k * k;
    let s2l2x = (2.0 * lambda).sin() * (2.0 * x).sin();
    WeightSet::new(
        WeightModel::GenOnBoundary,
        None,
        &[
            (
                Symbol::Beta1,
                2.0 * lambda.cos() * (3.0 * h + x).sin()
                    - k2 * n1 * (h + x).sin() * (h - x).sin() * (3.0 * h - x).sin(),
            ),
            (
                Symbol::Beta2,
                (3.0 * h - x).sin() * (2.0 * lambda.cos() - k2 * n1 * (h - x).sin().powi(2)),
            ),
            (Symbol::Beta3, -k2 * s2l2x * (h - x).sin()),
            (Symbol::Beta4, k * s2l2x),
        ],
    )
}

/// C₂⁽¹⁾ bulk weights at crossing parameter `lambda` and spectral parameter `x`.
///
/// `w1` carries an overall minus sign: with it, `u1 = w1` at `x = 0` and the
/// set is crossing-symmetric under `x -> 6λ - x`.
pub fn c2_bulk_at(lambda: f64, x: f64) -> WeightSet {
    let s2 = (2.0 * lambda).sin();
    let (sx, s6) = (x.sin(), (x - 6.0 * lambda).sin());
    WeightSet::new(
        WeightModel::C2Bulk,
        None,
        &[
            (Symbol::U1, s2 * s6),
            (Symbol::U2, -s2 * sx),
            (Symbol::V, -sx * s6),
            (Symbol::W1, -(x - 2.0 * lambda).sin() * s6),
            (Symbol::W2, -sx * (x - 4.0 * lambda).sin()),
        ],
    )
}

pub fn c2_bulk(p: &C2Params) -> WeightSet {
    c2_bulk_at(p.lambda, p.x)
}

/// C₂⁽¹⁾ non-diagonal boundary weights for both flux branches.
pub fn c2_boundary(p: &C2Params, branch: Branch) -> WeightSet {
    let arg = p.x - 4.0 * p.lambda - 4.0 * p.lambda1;
    let s4 = (4.0 * p.lambda1).sin();
    let (b1, b2, b3, b4) = match branch {
        Branch::Real => {
            let b = p.n1 * arg.cos();
            let c = 2.0 * s4 * p.x.sin();
            (b, b, c, c)
        }
        Branch::Imaginary => {
            let b = p.n1 * arg.sin();
            let c = -2.0 * s4 * p.x.cos();
            (b, -b, c, -c)
        }
    };
    WeightSet::new(
        WeightModel::C2Boundary,
        Some(branch),
        &[
            (Symbol::Beta1, b1),
            (Symbol::Beta2, b2),
            (Symbol::Beta3, b3),
            (Symbol::Beta4, b4),
        ],
    )
}

/// Diagonal C₂⁽¹⁾ boundary written on the full four-symbol support, β₃ = β₄ = 0.
pub fn c2_boundary_diagonal(branch: Branch) -> WeightSet {
    WeightSet::new(
        WeightModel::C2Boundary,
        Some(branch),
        &[
            (Symbol::Beta1, 1.0),
            (Symbol::Beta2, branch.sign()),
            (Symbol::Beta3, 0.0),
            (Symbol::Beta4, 0.0),
        ],
    )
}
