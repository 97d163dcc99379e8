//! Discrete-holomorphicity equations as structured linear forms.
//!
//! Each equation is a table of monomials `±ξ^{h/2} ζ^z f q₁^a q̄₁^b` per weight
//! symbol, transcribed from the printed contour sums. Boundary forms are the
//! real and imaginary parts of those sums.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{C2Params, OnParams, ParamError};
use crate::weights::{
    c2_boundary, on_boundary, on_bulk_at, Branch, Symbol, WeightModel, WeightSet,
};

/// Default relative rank threshold.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DhError {
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("expected a {expected}-dimensional nullspace, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("vectors have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("both vectors are zero")]
    ZeroVectors,
    #[error("weight set lacks symbol {0}")]
    MissingWeight(Symbol),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Loop fugacity factor of a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fugacity {
    One,
    N,
    N1,
    N2,
    N3,
}

/// Numerical constants a monomial is evaluated against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    /// arg ξ; half powers are taken from this real angle.
    pub xi_arg: f64,
    pub zeta: Complex64,
    pub n: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub q1: Complex64,
}

impl Couplings {
    pub fn fugacity(&self, f: Fugacity) -> f64 {
        match f {
            Fugacity::One => 1.0,
            Fugacity::N => self.n,
            Fugacity::N1 => self.n1,
            Fugacity::N2 => self.n2,
            Fugacity::N3 => self.n3,
        }
    }

    /// ξ^{h/2}.
    pub fn xi_half(&self, h: i32) -> Complex64 {
        Complex64::from_polar(1.0, 0.5 * f64::from(h) * self.xi_arg)
    }
}

impl From<&OnParams> for Couplings {
    fn from(p: &OnParams) -> Self {
        Self {
            xi_arg: p.xi_arg(),
            zeta: p.zeta,
            n: p.n,
            n1: p.n1,
            n2: p.n2,
            n3: p.n3,
            q1: p.q1,
        }
    }
}

impl From<&C2Params> for Couplings {
    fn from(p: &C2Params) -> Self {
        Self {
            xi_arg: p.xi_arg(),
            zeta: p.zeta,
            n: p.n,
            n1: p.n1,
            n2: p.n2,
            n3: p.n3,
            q1: p.q1,
        }
    }
}

/// `sign · ξ^{xi_half/2} · ζ^{zeta} · fugacity · q₁^{q1} · q̄₁^{q1bar}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub sign: i8,
    pub xi_half: i32,
    pub zeta: i32,
    pub fugacity: Fugacity,
    pub q1: u8,
    pub q1bar: u8,
}

impl Monomial {
    pub const PLUS: Monomial = Monomial {
        sign: 1,
        xi_half: 0,
        zeta: 0,
        fugacity: Fugacity::One,
        q1: 0,
        q1bar: 0,
    };
    pub const MINUS: Monomial = Monomial {
        sign: -1,
        ..Monomial::PLUS
    };

    /// Multiplies by ξ^p.
    pub const fn xi(self, p: i32) -> Self {
        Self {
            xi_half: self.xi_half + 2 * p,
            ..self
        }
    }

    /// Multiplies by ξ^{h/2}.
    pub const fn xi_half(self, h: i32) -> Self {
        Self {
            xi_half: self.xi_half + h,
            ..self
        }
    }

    pub const fn zeta(self, p: i32) -> Self {
        Self {
            zeta: self.zeta + p,
            ..self
        }
    }

    pub const fn fug(self, f: Fugacity) -> Self {
        Self {
            fugacity: f,
            ..self
        }
    }

    pub const fn q(self) -> Self {
        Self {
            q1: self.q1 + 1,
            ..self
        }
    }

    pub const fn qbar(self) -> Self {
        Self {
            q1bar: self.q1bar + 1,
            ..self
        }
    }

    pub fn eval(&self, c: &Couplings) -> Complex64 {
        let mut z = c.xi_half(self.xi_half) * c.zeta.powi(self.zeta);
        z *= f64::from(self.sign) * c.fugacity(self.fugacity);
        z *= c.q1.powu(u32::from(self.q1)) * c.q1.conj().powu(u32::from(self.q1bar));
        z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Complex,
    RealPart,
    ImagPart,
}

/// One equation: coefficient monomials per weight symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    pub name: String,
    pub kind: FormKind,
    pub terms: Vec<(Symbol, Vec<Monomial>)>,
}

impl LinearForm {
    pub fn new(name: &str, terms: &[(Symbol, &[Monomial])]) -> Self {
        Self {
            name: name.to_owned(),
            kind: FormKind::Complex,
            terms: terms.iter().map(|(s, m)| (*s, m.to_vec())).collect(),
        }
    }

    /// Projects to the real or imaginary part under a new name.
    pub fn part(&self, kind: FormKind, name: &str) -> Self {
        Self {
            name: name.to_owned(),
            kind,
            terms: self.terms.clone(),
        }
    }

    fn project(&self, z: Complex64) -> Complex64 {
        match self.kind {
            FormKind::Complex => z,
            FormKind::RealPart => Complex64::new(z.re, 0.0),
            FormKind::ImagPart => Complex64::new(z.im, 0.0),
        }
    }

    /// Coefficient of `sym` (zero if absent). Real for projected kinds.
    pub fn coefficient(&self, sym: Symbol, c: &Couplings) -> Complex64 {
        let z = self
            .terms
            .iter()
            .filter(|(s, _)| *s == sym)
            .flat_map(|(_, ms)| ms)
            .map(|m| m.eval(c))
            .sum();
        self.project(z)
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<_> = self.terms.iter().map(|(s, _)| *s).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Sum of monomial magnitudes for `sym`, before any cancellation.
    pub fn magnitude(&self, sym: Symbol, c: &Couplings) -> f64 {
        self.terms
            .iter()
            .filter(|(s, _)| *s == sym)
            .flat_map(|(_, ms)| ms)
            .map(|m| m.eval(c).norm())
            .sum()
    }

    /// Value of the form and its uncancelled scale `Σ |monomial|·|weight|`.
    pub fn evaluate(&self, w: &WeightSet, c: &Couplings) -> Result<(Complex64, f64), DhError> {
        let mut total = Complex64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for sym in self.symbols() {
            let wv = w.get(sym).ok_or(DhError::MissingWeight(sym))?;
            total += self.coefficient(sym, c) * wv;
            scale += self.magnitude(sym, c) * wv.abs();
        }
        Ok((total, scale))
    }

    /// |form| relative to its uncancelled scale; zero when every term vanishes.
    ///
    /// Measuring against monomial magnitudes rather than assembled
    /// coefficients keeps a coefficient that cancels to rounding noise from
    /// dominating the ratio.
    pub fn residual(&self, w: &WeightSet, c: &Couplings) -> Result<f64, DhError> {
        let (v, scale) = self.evaluate(w, c)?;
        Ok(if scale > 0.0 { v.norm() / scale } else { 0.0 })
    }
}

/// An ordered list of forms bound to one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSystem {
    pub forms: Vec<LinearForm>,
    pub unknowns: Vec<Symbol>,
    pub couplings: Couplings,
}

impl EquationSystem {
    pub fn new(forms: Vec<LinearForm>, unknowns: &[Symbol], couplings: Couplings) -> Self {
        debug_assert!(forms
            .iter()
            .all(|f| f.symbols().iter().all(|s| unknowns.contains(s))));
        Self {
            forms,
            unknowns: unknowns.to_vec(),
            couplings,
        }
    }

    /// Keeps the named forms, in the given order.
    pub fn select(&self, names: &[&str]) -> Self {
        let forms = names
            .iter()
            .filter_map(|n| self.forms.iter().find(|f| f.name == *n).cloned())
            .collect();
        Self {
            forms,
            unknowns: self.unknowns.clone(),
            couplings: self.couplings,
        }
    }

    /// Restricts to a subset of unknowns, dropping the other columns.
    pub fn restrict(&self, unknowns: &[Symbol]) -> Self {
        let forms = self
            .forms
            .iter()
            .map(|f| LinearForm {
                terms: f
                    .terms
                    .iter()
                    .filter(|(s, _)| unknowns.contains(s))
                    .cloned()
                    .collect(),
                ..f.clone()
            })
            .collect();
        Self {
            forms,
            unknowns: unknowns.to_vec(),
            couplings: self.couplings,
        }
    }

    pub fn complex_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.forms.len(), self.unknowns.len(), |i, j| {
            self.forms[i].coefficient(self.unknowns[j], &self.couplings)
        })
    }

    /// Real matrix; complex forms contribute a real row and an imaginary row.
    pub fn real_matrix(&self) -> DMatrix<f64> {
        let k = self.unknowns.len();
        let mut rows: Vec<f64> = Vec::new();
        let mut m = 0;
        for f in &self.forms {
            let coeffs: Vec<Complex64> = self
                .unknowns
                .iter()
                .map(|s| f.coefficient(*s, &self.couplings))
                .collect();
            rows.extend(coeffs.iter().map(|z| z.re));
            m += 1;
            if f.kind == FormKind::Complex {
                rows.extend(coeffs.iter().map(|z| z.im));
                m += 1;
            }
        }
        DMatrix::from_row_slice(m, k, &rows)
    }

    pub fn residuals(&self, w: &WeightSet) -> Result<Vec<f64>, DhError> {
        self.forms
            .iter()
            .map(|f| f.residual(w, &self.couplings))
            .collect()
    }

    pub fn max_residual(&self, w: &WeightSet) -> Result<f64, DhError> {
        Ok(self.residuals(w)?.into_iter().fold(0.0, f64::max))
    }

    pub fn rank(&self, rank_tol: f64) -> Result<usize, DhError> {
        Ok(nullspace(&self.real_matrix(), rank_tol)?.rank)
    }
}

use Fugacity::{N, N1, N2, N3};
use Symbol::{Beta1 as B1, Beta2 as B2, Beta3 as B3, Beta4 as B4, T, U1, U2, V, W1, W2};
const P: Monomial = Monomial::PLUS;
const M: Monomial = Monomial::MINUS;

const ON_BULK: [Symbol; 6] = [T, U1, U2, V, W1, W2];
const C2_BULK: [Symbol; 5] = [U1, U2, V, W1, W2];

fn on_bulk_forms() -> Vec<LinearForm> {
    vec![
        LinearForm::new(
            "E1",
            &[
                (U1, &[P.fug(N)]),
                (V, &[P.zeta(1).xi(2)]),
                (U2, &[M.xi(-1)]),
                (W2, &[M.zeta(1)]),
                (W1, &[M.zeta(1).fug(N)]),
            ],
        ),
        LinearForm::new(
            "E2",
            &[
                (U2, &[P.fug(N)]),
                (W2, &[P.zeta(1).xi(1).fug(N)]),
                (W1, &[P.zeta(1).xi(1)]),
                (U1, &[M.xi(1)]),
                (V, &[M.zeta(1).xi(-1)]),
            ],
        ),
        LinearForm::new(
            "E3",
            &[
                (V, &[P.fug(N)]),
                (U1, &[P.zeta(1).xi(2)]),
                (W1, &[M.xi(2)]),
                (W2, &[M.xi(-2)]),
                (U2, &[M.zeta(1).xi(-1)]),
            ],
        ),
        LinearForm::new(
            "E4",
            &[
                (T, &[P]),
                (U2, &[P.zeta(1).xi(1)]),
                (V, &[M]),
                (U1, &[M.zeta(1)]),
            ],
        ),
    ]
}

fn on_couplings_at(lambda: f64, x: f64, s: f64) -> Couplings {
    Couplings {
        xi_arg: s * std::f64::consts::PI,
        zeta: Complex64::from_polar(1.0, -x),
        n: -2.0 * (4.0 * lambda).cos(),
        n1: 0.0,
        n2: 0.0,
        n3: 0.0,
        q1: Complex64::new(0.0, 0.0),
    }
}

/// The four complex bulk O(n) equations at the couplings of `p`.
pub fn on_bulk_system(p: &OnParams) -> EquationSystem {
    EquationSystem::new(on_bulk_forms(), &ON_BULK, p.into())
}

/// Bulk O(n) equations at an arbitrary spin `s`, for criticality scans.
pub fn on_bulk_system_at(lambda: f64, x: f64, s: f64) -> EquationSystem {
    EquationSystem::new(on_bulk_forms(), &ON_BULK, on_couplings_at(lambda, x, s))
}

/// The two three-equation bulk sets with the defect attached to the boundary.
pub fn on_bulk_blob_systems(p: &OnParams) -> (EquationSystem, EquationSystem) {
    let first = vec![
        LinearForm::new(
            "F1",
            &[
                (U1, &[P.fug(N1)]),
                (V, &[P.qbar().zeta(1).xi(2)]),
                (U2, &[M.q().xi(-1)]),
                (W2, &[M.zeta(1).q()]),
                (W1, &[M.zeta(1).fug(N1)]),
            ],
        ),
        LinearForm::new(
            "F2",
            &[
                (U2, &[P.fug(N1)]),
                (W2, &[P.zeta(1).xi(1).fug(N1)]),
                (W1, &[P.zeta(1).xi(1).qbar()]),
                (U1, &[M.qbar().xi(1)]),
                (V, &[M.q().zeta(1).xi(-1)]),
            ],
        ),
        LinearForm::new(
            "F3",
            &[
                (V, &[P.fug(N1)]),
                (U1, &[P.qbar().zeta(1).xi(2)]),
                (W1, &[M.qbar().xi(2)]),
                (W2, &[M.q().xi(-2)]),
                (U2, &[M.q().zeta(1).xi(-1)]),
            ],
        ),
    ];
    let second = vec![
        LinearForm::new(
            "G1",
            &[
                (U1, &[P.q().fug(N1)]),
                (V, &[P.zeta(1).xi(2).qbar().fug(N3)]),
                (U2, &[M.xi(-1).q().fug(N2)]),
                (W2, &[M.zeta(1).q().fug(N2)]),
                (W1, &[M.zeta(1).q().fug(N1)]),
            ],
        ),
        LinearForm::new(
            "G2",
            &[
                (U2, &[P.q().fug(N1)]),
                (W2, &[P.zeta(1).xi(1).q().fug(N1)]),
                (W1, &[P.zeta(1).xi(1).qbar().fug(N3)]),
                (U1, &[M.xi(1).qbar().fug(N3)]),
                (V, &[M.zeta(1).xi(-1).q().fug(N2)]),
            ],
        ),
        LinearForm::new(
            "G3",
            &[
                (V, &[P.q().fug(N1)]),
                (U1, &[P.zeta(1).xi(2).qbar().fug(N3)]),
                (W1, &[M.xi(2).qbar().fug(N3)]),
                (W2, &[M.xi(-2).q().fug(N2)]),
                (U2, &[M.zeta(1).xi(-1).q().fug(N2)]),
            ],
        ),
    ];
    let c = p.into();
    (
        EquationSystem::new(first, &ON_BULK, c),
        EquationSystem::new(second, &ON_BULK, c),
    )
}

/// `e^{8iλ} q̄₁(n₃ − q₁) + q₁(n₂ − q₁)`.
pub fn n3_condition(p: &OnParams) -> Complex64 {
    n3_condition_with(p, p.n3)
}

/// The same scalar with `n3` overridden.
pub fn n3_condition_with(p: &OnParams, n3: f64) -> Complex64 {
    let q = p.q1;
    Complex64::from_polar(1.0, 8.0 * p.lambda) * q.conj() * (n3 - q) + q * (p.n2 - q)
}

fn split(forms: &[LinearForm]) -> Vec<LinearForm> {
    let mut out: Vec<_> = forms
        .iter()
        .map(|f| f.part(FormKind::RealPart, &format!("R{}", &f.name[1..])))
        .collect();
    out.extend(
        forms
            .iter()
            .map(|f| f.part(FormKind::ImagPart, &format!("I{}", &f.name[1..]))),
    );
    out
}

fn on_boundary_sums() -> Vec<LinearForm> {
    let h = |m: Monomial| m.xi_half(-1);
    vec![
        LinearForm::new(
            "S1",
            &[
                (B1, &[h(P).zeta(-1)]),
                (B2, &[h(M).zeta(1)]),
                (B3, &[h(M).zeta(1).q()]),
            ],
        ),
        LinearForm::new(
            "S2",
            &[
                (B1, &[h(P).q().zeta(-1)]),
                (B2, &[h(M).q().zeta(1)]),
                (B3, &[h(M).q().zeta(1).fug(N2)]),
            ],
        ),
        LinearForm::new(
            "S3",
            &[
                (B1, &[h(P).qbar().zeta(-1)]),
                (B2, &[h(M).qbar().zeta(1)]),
                (B3, &[h(M).q().zeta(1).fug(N3)]),
            ],
        ),
    ]
}

/// Six real boundary forms R1, R2, R3, I1, I2, I3 in (β₁, β₂, β₃).
pub fn on_boundary_forms(p: &OnParams) -> EquationSystem {
    EquationSystem::new(split(&on_boundary_sums()), &[B1, B2, B3], p.into())
}

fn branch_names(branch: Branch, count: usize) -> Vec<String> {
    let prefix = match branch {
        Branch::Real => 'R',
        Branch::Imaginary => 'I',
    };
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

fn select_branch(sys: &EquationSystem, branch: Branch, count: usize) -> EquationSystem {
    let names = branch_names(branch, count);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    sys.select(&refs)
}

/// The three forms whose vanishing defines a branch.
pub fn on_boundary_system(p: &OnParams, branch: Branch) -> EquationSystem {
    select_branch(&on_boundary_forms(p), branch, 3)
}

/// Diagonal O(n) boundary: the first form with β₃ removed.
pub fn on_diagonal_system(p: &OnParams, branch: Branch) -> EquationSystem {
    select_branch(&on_boundary_forms(p), branch, 1).restrict(&[B1, B2])
}

/// Nine complex bulk C₂⁽¹⁾ equations A1–A3, B1–B3, C1–C3.
pub fn c2_bulk_systems(p: &C2Params) -> EquationSystem {
    let forms = vec![
        LinearForm::new(
            "A1",
            &[
                (U1, &[P.fug(N)]),
                (V, &[P.xi(1).zeta(1)]),
                (U2, &[M.xi(-1)]),
                (W1, &[M.fug(N).zeta(1)]),
                (W2, &[M.zeta(1)]),
            ],
        ),
        LinearForm::new(
            "A2",
            &[
                (W2, &[P.fug(N).xi(-1)]),
                (W1, &[P.xi(-1)]),
                (U2, &[P.fug(N).zeta(1)]),
                (V, &[M]),
                (U1, &[M.xi(-1).zeta(1)]),
            ],
        ),
        LinearForm::new(
            "A3",
            &[
                (V, &[P.fug(N)]),
                (U1, &[P.xi(1).zeta(1)]),
                (W1, &[M.xi(1)]),
                (W2, &[M.xi(-1)]),
                (U2, &[M.zeta(1)]),
            ],
        ),
        LinearForm::new(
            "B1",
            &[
                (U1, &[P.fug(N1)]),
                (V, &[P.qbar().xi(1).zeta(1)]),
                (U2, &[M.q().xi(-1)]),
                (W1, &[M.fug(N1).zeta(1)]),
                (W2, &[M.q().zeta(1)]),
            ],
        ),
        LinearForm::new(
            "B2",
            &[
                (W2, &[P.fug(N1).xi(-1)]),
                (W1, &[P.q().xi(-1)]),
                (U2, &[P.fug(N1).zeta(1)]),
                (V, &[M.qbar()]),
                (U1, &[M.q().xi(-1).zeta(1)]),
            ],
        ),
        LinearForm::new(
            "B3",
            &[
                (V, &[P.fug(N1)]),
                (U1, &[P.qbar().xi(1).zeta(1)]),
                (W1, &[M.qbar().xi(1)]),
                (W2, &[M.q().xi(-1)]),
                (U2, &[M.q().zeta(1)]),
            ],
        ),
        LinearForm::new(
            "C1",
            &[
                (U1, &[P.fug(N1).q()]),
                (V, &[P.fug(N3).qbar().xi(1).zeta(1)]),
                (U2, &[M.fug(N2).q().xi(-1)]),
                (W1, &[M.fug(N1).q().zeta(1)]),
                (W2, &[M.fug(N2).q().zeta(1)]),
            ],
        ),
        LinearForm::new(
            "C2",
            &[
                (W2, &[P.fug(N1).q().xi(-1)]),
                (W1, &[P.fug(N2).q().xi(-1)]),
                (U2, &[P.fug(N1).q().zeta(1)]),
                (V, &[M.fug(N3).qbar()]),
                (U1, &[M.fug(N2).q().xi(-1).zeta(1)]),
            ],
        ),
        LinearForm::new(
            "C3",
            &[
                (V, &[P.fug(N1).q()]),
                (U1, &[P.fug(N3).qbar().xi(1).zeta(1)]),
                (W1, &[M.fug(N3).qbar().xi(1)]),
                (W2, &[M.fug(N2).q().xi(-1)]),
                (U2, &[M.fug(N2).q().zeta(1)]),
            ],
        ),
    ];
    EquationSystem::new(forms, &C2_BULK, p.into())
}

fn c2_boundary_sums() -> Vec<LinearForm> {
    vec![
        LinearForm::new(
            "S1",
            &[
                (B1, &[M.zeta(1)]),
                (B2, &[P.zeta(-1)]),
                (B3, &[M.q().zeta(1)]),
                (B4, &[P.qbar().zeta(-1)]),
            ],
        ),
        LinearForm::new(
            "S2",
            &[
                (B1, &[M.q().zeta(1)]),
                (B2, &[P.q().zeta(-1)]),
                (B3, &[M.q().fug(N2).zeta(1)]),
                (B4, &[P.q().qbar().zeta(-1)]),
            ],
        ),
        LinearForm::new(
            "S3",
            &[
                (B1, &[P.q().zeta(-1)]),
                (B2, &[M.q().zeta(1)]),
                (B3, &[P.q().qbar().zeta(-1)]),
                (B4, &[M.q().fug(N2).zeta(1)]),
            ],
        ),
        LinearForm::new(
            "S4",
            &[
                (B1, &[M.q().zeta(1)]),
                (B2, &[P.q().zeta(-1)]),
                (B3, &[M.q().q().zeta(1)]),
                (B4, &[P.qbar().fug(N3).zeta(-1)]),
            ],
        ),
        LinearForm::new(
            "S5",
            &[
                (B1, &[P.q().zeta(-1)]),
                (B2, &[M.q().zeta(1)]),
                (B3, &[P.qbar().fug(N3).zeta(-1)]),
                (B4, &[M.q().q().zeta(1)]),
            ],
        ),
    ]
}

/// Ten real boundary forms R1–R5, I1–I5 in (β₁ … β₄).
pub fn c2_boundary_forms(p: &C2Params) -> EquationSystem {
    EquationSystem::new(split(&c2_boundary_sums()), &[B1, B2, B3, B4], p.into())
}

pub fn c2_boundary_system(p: &C2Params, branch: Branch) -> EquationSystem {
    select_branch(&c2_boundary_forms(p), branch, 5)
}

/// Diagonal C₂⁽¹⁾ boundary: the defect-free form in (β₁, β₂).
pub fn c2_diagonal_system(p: &C2Params, branch: Branch) -> EquationSystem {
    select_branch(&c2_boundary_forms(p), branch, 1).restrict(&[B1, B2])
}

/// Numerical rank and a nullspace basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Nullspace {
    pub rank: usize,
    pub basis: Vec<DVector<f64>>,
    /// Singular values, largest first.
    pub singular_values: Vec<f64>,
}

/// SVD-based nullspace. Singular values below `rank_tol` times the largest
/// count as zero. Each basis vector is scaled so its largest entry is +1.
pub fn nullspace(a: &DMatrix<f64>, rank_tol: f64) -> Result<Nullspace, DhError> {
    let (m, k) = a.shape();
    if m == 0 || k == 0 {
        return Err(DhError::EmptyMatrix);
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(DhError::NonFinite);
    }
    // Pad short matrices so V is square and spans the full domain.
    let padded = if m < k {
        let mut p = DMatrix::zeros(k, k);
        p.view_mut((0, 0), (m, k)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = if top > 0.0 {
        sv.iter().filter(|&&s| s > rank_tol * top).count()
    } else {
        0
    };
    let basis = order[rank..]
        .iter()
        .map(|&i| normalize_max(v_t.row(i).transpose()))
        .collect();
    Ok(Nullspace {
        rank,
        basis,
        singular_values: sv.into_iter().take(m.min(k)).collect(),
    })
}

fn normalize_max(v: DVector<f64>) -> DVector<f64> {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot == 0.0 {
        v
    } else {
        v / pivot
    }
}

/// The unique nullspace direction, or an error if it is not one-dimensional.
pub fn nullspace_1d(a: &DMatrix<f64>, rank_tol: f64) -> Result<DVector<f64>, DhError> {
    let ns = nullspace(a, rank_tol)?;
    match ns.basis.len() {
        1 => Ok(ns.basis.into_iter().next().expect("one vector")),
        found => Err(DhError::RankDeficient { expected: 1, found }),
    }
}

/// max over i<j of |aᵢbⱼ − aⱼbᵢ| divided by max|a|·max|b|.
pub fn projective_deviation(a: &[f64], b: &[f64]) -> Result<f64, DhError> {
    if a.len() != b.len() {
        return Err(DhError::LengthMismatch(a.len(), b.len()));
    }
    let amax = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let bmax = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if amax == 0.0 && bmax == 0.0 {
        return Err(DhError::ZeroVectors);
    }
    if amax == 0.0 || bmax == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut worst = 0.0f64;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            worst = worst.max((a[i] * b[j] - a[j] * b[i]).abs());
        }
    }
    Ok(worst / (amax * bmax))
}

/// Equality up to one nonzero overall factor.
pub fn projective_match(a: &[f64], b: &[f64], tol: f64) -> Result<bool, DhError> {
    Ok(projective_deviation(a, b)? <= tol)
}

fn scaled_to(v: &DVector<f64>, reference: &[f64]) -> Vec<f64> {
    let dot: f64 = v.iter().zip(reference).map(|(a, b)| a * b).sum();
    let norm: f64 = v.iter().map(|a| a * a).sum();
    let s = if norm > 0.0 { dot / norm } else { 1.0 };
    v.iter().map(|a| a * s).collect()
}

fn weights_from(
    model: WeightModel,
    branch: Option<Branch>,
    symbols: &[Symbol],
    values: &[f64],
) -> WeightSet {
    WeightSet::from_values(model, branch, symbols, values)
        .expect("solver symbols always fit their model")
}

/// Solves the 8×6 real bulk system at the integrable spin. The result is
/// scaled so that `t` equals the closed-form value.
pub fn solve_on_bulk(lambda: f64, x: f64) -> Result<WeightSet, DhError> {
    let s = 3.0 * lambda / std::f64::consts::PI + 1.0;
    let sys = on_bulk_system_at(lambda, x, s);
    let v = nullspace_1d(&sys.real_matrix(), RANK_TOL)?;
    let t = on_bulk_at(lambda, x).get(T).expect("bulk has t");
    let scale = if v[0] != 0.0 { t / v[0] } else { 1.0 };
    let vals: Vec<f64> = v.iter().map(|a| a * scale).collect();
    Ok(weights_from(WeightModel::OnBulk, None, &ON_BULK, &vals))
}

fn solve_against(
    sys: &EquationSystem,
    reference: &WeightSet,
    model: WeightModel,
    branch: Branch,
) -> Result<WeightSet, DhError> {
    let v = nullspace_1d(&sys.real_matrix(), RANK_TOL)?;
    let r: Vec<f64> = sys
        .unknowns
        .iter()
        .map(|s| reference.get(*s).unwrap_or(0.0))
        .collect();
    Ok(weights_from(
        model,
        Some(branch),
        &sys.unknowns,
        &scaled_to(&v, &r),
    ))
}

/// Nullspace of the three branch forms in (β₁, β₂, β₃), scaled onto the closed form.
pub fn solve_on_boundary(p: &OnParams, branch: Branch) -> Result<WeightSet, DhError> {
    solve_against(
        &on_boundary_system(p, branch),
        &on_boundary(p, branch),
        WeightModel::OnBoundary,
        branch,
    )
}

pub fn solve_on_diagonal(p: &OnParams, branch: Branch) -> Result<WeightSet, DhError> {
    solve_against(
        &on_diagonal_system(p, branch),
        &crate::weights::on_boundary_diagonal(p.lambda, p.x, branch),
        WeightModel::OnBoundary,
        branch,
    )
}

/// Nullspace of the five branch forms in (β₁ … β₄), scaled onto the closed form.
pub fn solve_c2_boundary(p: &C2Params, branch: Branch) -> Result<WeightSet, DhError> {
    solve_against(
        &c2_boundary_system(p, branch),
        &c2_boundary(p, branch),
        WeightModel::C2Boundary,
        branch,
    )
}

/// Diagonal C₂⁽¹⁾ solution, normalized so β₁ = 1.
pub fn solve_c2_diagonal(p: &C2Params, branch: Branch) -> Result<WeightSet, DhError> {
    let sys = c2_diagonal_system(p, branch);
    let v = nullspace_1d(&sys.real_matrix(), RANK_TOL)?;
    let vals = if v[0] != 0.0 {
        vec![1.0, v[1] / v[0]]
    } else {
        v.iter().copied().collect()
    };
    Ok(weights_from(
        WeightModel::C2Boundary,
        Some(branch),
        &[B1, B2],
        &vals,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{c2_params, on_params};
    use crate::weights::{c2_bulk, on_bulk};
    use proptest::prelude::*;

    fn on_point() -> OnParams {
        on_params(0.3, 0.2, 0.5, 1.0).unwrap()
    }

    #[test]
    fn golden_coefficient_of_v_in_first_equation() {
        let p = on_point();
        let sys = on_bulk_system(&p);
        let want = p.zeta * p.xi * p.xi;
        assert!((sys.forms[0].coefficient(V, &sys.couplings) - want).norm() < 1e-15);
        // ζξ(n w₂ + w₁): two monomials on separate symbols
        let c = sys.forms[1].coefficient(W2, &sys.couplings);
        assert!((c - p.zeta * p.xi * p.n).norm() < 1e-15);
    }

    #[test]
    fn bulk_identity_and_perturbation() {
        let p = on_point();
        let sys = on_bulk_system(&p);
        let w = on_bulk(&p);
        assert!(sys.max_residual(&w).unwrap() < 1e-12);
        let mut bad = w.clone();
        bad.perturb(U1, 0.1);
        assert!(sys.max_residual(&bad).unwrap() > 1e-3);
        let zero = WeightSet::from_values(WeightModel::OnBulk, None, &ON_BULK, &[0.0; 6]).unwrap();
        assert_eq!(sys.max_residual(&zero).unwrap(), 0.0);
    }

    #[test]
    fn blob_sets_and_n3_binding() {
        let p = on_point();
        let w = on_bulk(&p);
        let (a, b) = on_bulk_blob_systems(&p);
        assert!(a.max_residual(&w).unwrap() < 1e-12);
        assert!(b.max_residual(&w).unwrap() < 1e-12);
        let mut shifted = p;
        shifted.n3 += 0.1;
        let (_, b2) = on_bulk_blob_systems(&shifted);
        assert!(b2.max_residual(&w).unwrap() > 1e-4);
    }

    #[test]
    fn n3_condition_cases() {
        let p = on_point();
        assert!(n3_condition(&p).norm() < 1e-12);
        assert!(n3_condition_with(&p, 0.0).norm() > 1e-3);
        let p0 = on_params(0.3, 0.0, 0.5, 1.0).unwrap();
        assert_eq!(n3_condition(&p0).norm(), 0.0);
    }

    #[test]
    fn nullspace_trivial_cases() {
        let id = nullspace(&DMatrix::identity(3, 3), RANK_TOL).unwrap();
        assert_eq!((id.rank, id.basis.len()), (3, 0));
        let z = nullspace(&DMatrix::zeros(2, 4), RANK_TOL).unwrap();
        assert_eq!((z.rank, z.basis.len()), (0, 4));
        assert_eq!(
            nullspace(&DMatrix::<f64>::zeros(0, 3), RANK_TOL),
            Err(DhError::EmptyMatrix)
        );
    }

    #[test]
    fn nullspace_short_wide() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = nullspace(&a, RANK_TOL).unwrap();
        assert_eq!(ns.rank, 1);
        assert_eq!(ns.basis.len(), 2);
        for b in &ns.basis {
            assert!((&a * b).norm() < 1e-14);
        }
    }

    #[test]
    fn bulk_rank_and_recovery() {
        let p = on_point();
        let sys = on_bulk_system(&p);
        let ns = nullspace(&sys.real_matrix(), RANK_TOL).unwrap();
        assert_eq!(ns.rank, 5);
        let solved = solve_on_bulk(0.3, 0.5).unwrap();
        assert!(projective_match(&solved.values(), &on_bulk(&p).values(), 1e-8).unwrap());
        let off = on_bulk_system_at(0.3, 0.5, p.s + 0.01);
        assert_eq!(
            nullspace(&off.real_matrix(), RANK_TOL).unwrap().basis.len(),
            0
        );
    }

    #[test]
    fn boundary_forms_vanish_on_branches() {
        let p = on_params(0.3, 0.2, 0.4, 1.0).unwrap();
        for br in Branch::BOTH {
            let sys = on_boundary_system(&p, br);
            assert!(sys.max_residual(&on_boundary(&p, br)).unwrap() < 1e-10);
            let s = solve_on_boundary(&p, br).unwrap();
            assert!(projective_match(&s.values(), &on_boundary(&p, br).values(), 1e-8).unwrap());
        }
        assert_eq!(
            on_boundary_system(&p, Branch::Real).rank(RANK_TOL).unwrap(),
            2
        );
    }

    #[test]
    fn c2_systems() {
        let p = c2_params(0.25, 0.15, 0.7, 1.0).unwrap();
        assert!(c2_bulk_systems(&p).max_residual(&c2_bulk(&p)).unwrap() < 1e-10);
        let mut swapped = c2_bulk(&p);
        let (w1, w2) = (swapped.get(W1).unwrap(), swapped.get(W2).unwrap());
        swapped.perturb(W1, w2 - w1);
        swapped.perturb(W2, w1 - w2);
        assert!(c2_bulk_systems(&p).max_residual(&swapped).unwrap() > 1e-3);

        let p = p.with_x(0.5);
        for br in Branch::BOTH {
            let sys = c2_boundary_system(&p, br);
            assert!(sys.max_residual(&c2_boundary(&p, br)).unwrap() < 1e-10);
            assert_eq!(sys.rank(RANK_TOL).unwrap(), 3);
            let s = solve_c2_boundary(&p, br).unwrap();
            assert!(projective_match(&s.values(), &c2_boundary(&p, br).values(), 1e-8).unwrap());
            let d = solve_c2_diagonal(&p, br).unwrap();
            assert!((d.get(B2).unwrap() - br.sign()).abs() < 1e-12);
        }
    }

    #[test]
    fn projective_match_examples() {
        let v = [1.0, -2.0, 0.5];
        let v2: Vec<f64> = v.iter().map(|a| 2.0 * a).collect();
        let vm: Vec<f64> = v.iter().map(|a| -a).collect();
        assert!(projective_match(&v, &v2, 1e-15).unwrap());
        assert!(projective_match(&v, &vm, 1e-15).unwrap());
        assert!(!projective_match(&[1.0, 0.0], &[1.0, 1e-3], 1e-6).unwrap());
        assert_eq!(
            projective_match(&[0.0, 0.0], &[0.0, 0.0], 1.0),
            Err(DhError::ZeroVectors)
        );
        assert!(projective_match(&[1.0], &[1.0, 2.0], 1.0).is_err());
    }

    proptest! {
        #[test]
        fn nullspace_row_permutation_invariant(seed in proptest::collection::vec(-1.0f64..1.0, 6), shift in 0usize..8) {
            let p = on_params(0.3, 0.2, 0.5, 1.0).unwrap();
            let a = on_bulk_system_at(p.lambda, 0.2 + seed[0].abs(), p.s).real_matrix();
            let m = a.nrows();
            let perm = DMatrix::from_fn(m, a.ncols(), |i, j| a[((i + shift) % m, j)]);
            let v1 = nullspace_1d(&a, RANK_TOL).unwrap();
            let v2 = nullspace_1d(&perm, RANK_TOL).unwrap();
            prop_assert!(projective_deviation(v1.as_slice(), v2.as_slice()).unwrap() < 1e-10);
        }

        #[test]
        fn projective_match_is_scale_invariant(v in proptest::collection::vec(-5.0f64..5.0, 2..6), c in 0.1f64..10.0, neg in any::<bool>()) {
            prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
            let c = if neg { -c } else { c };
            let w: Vec<f64> = v.iter().map(|x| c * x).collect();
            prop_assert!(projective_match(&v, &w, 1e-12).unwrap());
        }
    }
}
