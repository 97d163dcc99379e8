//! Scalar parameters of the dilute O(n), C₂⁽¹⁾ and generalized O(n) models.
//!
//! Every constructor is pure: the same inputs give bit-identical outputs.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

/// Denominators smaller than this reject a parameter point as singular.
pub const DENOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("degenerate denominator {name} = {value:e} (parameterization singular)")]
    Degenerate { name: &'static str, value: f64 },
    #[error("non-finite parameter {0}")]
    NonFinite(&'static str),
}

fn finite(name: &'static str, v: f64) -> Result<f64, ParamError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ParamError::NonFinite(name))
    }
}

fn denom(name: &'static str, v: f64) -> Result<f64, ParamError> {
    if v.abs() > DENOM_TOL {
        Ok(v)
    } else {
        Err(ParamError::Degenerate { name, value: v })
    }
}

/// The parafermionic phase `e^{-i s W}` for winding angle `w`.
pub fn phase(s: f64, w: f64) -> Complex64 {
    Complex64::from_polar(1.0, -s * w)
}

/// Parameters of the dilute O(n) model with a blobbed boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnParams {
    pub lambda: f64,
    pub lambda1: f64,
    pub x: f64,
    pub n2: f64,
    pub s: f64,
    pub xi: Complex64,
    pub zeta: Complex64,
    pub n: f64,
    pub n1: f64,
    pub n3: f64,
    pub rho: f64,
    pub q1: Complex64,
}

impl OnParams {
    pub fn new(lambda: f64, lambda1: f64, x: f64, n2: f64) -> Result<Self, ParamError> {
        let lambda = finite("lambda", lambda)?;
        let lambda1 = finite("lambda1", lambda1)?;
        let x = finite("x", x)?;
        let n2 = finite("n2", n2)?;
        let d = denom("sin(4λ+4λ₁)", (4.0 * lambda + 4.0 * lambda1).sin())?;

        let s = 3.0 * lambda / PI + 1.0;
        let rho = n2 * (2.0 * lambda1).sin() / d;
        Ok(Self {
            lambda,
            lambda1,
            x,
            n2,
            s,
            xi: Complex64::from_polar(1.0, s * PI),
            zeta: Complex64::from_polar(1.0, -x),
            n: -2.0 * (4.0 * lambda).cos(),
            n1: -2.0 * rho * (2.0 * lambda1).cos(),
            n3: -n2 * (4.0 * lambda).sin() / d,
            rho,
            q1: Complex64::from_polar(rho, 4.0 * lambda + 2.0 * lambda1),
        })
    }

    /// Same couplings at a different spectral parameter.
    pub fn with_x(&self, x: f64) -> Self {
        Self {
            x,
            zeta: Complex64::from_polar(1.0, -x),
            ..*self
        }
    }

    /// Rhombus angle, reported only.
    pub fn alpha(&self) -> f64 {
        self.x / (self.s - 1.0)
    }

    /// Argument of ξ, so that ξ^{k/2} = e^{i k arg/2} without branch ambiguity.
    pub fn xi_arg(&self) -> f64 {
        self.s * PI
    }
}

/// Free function form of [`OnParams::new`].
pub fn on_params(lambda: f64, lambda1: f64, x: f64, n2: f64) -> Result<OnParams, ParamError> {
    OnParams::new(lambda, lambda1, x, n2)
}

/// Parameters of the C₂⁽¹⁾ loop model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C2Params {
    pub lambda: f64,
    pub lambda1: f64,
    pub x: f64,
    pub n1: f64,
    pub s: f64,
    pub xi: Complex64,
    pub zeta: Complex64,
    pub q1: Complex64,
    pub n: f64,
    pub n2: f64,
    pub n3: f64,
    pub rho: f64,
}

impl C2Params {
    pub fn new(lambda: f64, lambda1: f64, x: f64, n1: f64) -> Result<Self, ParamError> {
        let lambda = finite("lambda", lambda)?;
        let lambda1 = finite("lambda1", lambda1)?;
        let x = finite("x", x)?;
        let n1 = finite("n1", n1)?;
        let s4 = denom("sin(4λ₁)", (4.0 * lambda1).sin())?;
        let c2 = denom("cos(2λ₁)", (2.0 * lambda1).cos())?;

        // The spin is linear in λ/π; it makes ξ = −e^{6iλ}.
        let s = 3.0 * lambda / PI - 0.5;
        let rho = -n1 / (2.0 * c2);
        Ok(Self {
            lambda,
            lambda1,
            x,
            n1,
            s,
            xi: Complex64::from_polar(1.0, 2.0 * PI * s),
            zeta: Complex64::from_polar(1.0, -x),
            q1: Complex64::from_polar(rho, 4.0 * lambda + 2.0 * lambda1),
            n: -2.0 * (4.0 * lambda).cos(),
            n2: -n1 * (4.0 * lambda + 4.0 * lambda1).sin() / s4,
            n3: n1 * (4.0 * lambda).sin() / s4,
            rho,
        })
    }

    pub fn with_x(&self, x: f64) -> Self {
        Self {
            x,
            zeta: Complex64::from_polar(1.0, -x),
            ..*self
        }
    }

    pub fn alpha(&self) -> f64 {
        self.x / (2.0 * self.s - 1.0)
    }

    pub fn xi_arg(&self) -> f64 {
        2.0 * PI * self.s
    }
}

pub fn c2_params(lambda: f64, lambda1: f64, x: f64, n1: f64) -> Result<C2Params, ParamError> {
    C2Params::new(lambda, lambda1, x, n1)
}

/// Generalized O(n) model with single-anchor boundary plaquettes.
/// All three boundary fugacities share the value `n1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenOnParams {
    pub lambda: f64,
    pub x: f64,
    pub k: f64,
    pub n1: f64,
}

impl GenOnParams {
    pub fn new(lambda: f64, x: f64, k: f64, n1: f64) -> Result<Self, ParamError> {
        Ok(Self {
            lambda: finite("lambda", lambda)?,
            x: finite("x", x)?,
            k: finite("k", k)?,
            n1: finite("n1", n1)?,
        })
    }

    pub fn with_x(&self, x: f64) -> Self {
        Self { x, ..*self }
    }

    pub fn n(&self) -> f64 {
        -2.0 * (4.0 * self.lambda).cos()
    }
}
