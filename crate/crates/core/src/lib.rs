//! Discrete-holomorphicity derivation and reflection-equation verification for
//! the dilute O(n) and C₂⁽¹⁾ boundary loop models.

pub mod cli;
pub mod dhsys;
pub mod params;
pub mod reflect;
pub mod weights;
