//! The mod-star congruence relation, its multiplicative group, Schick's
//! sequences, closed-form square roots, primitive-root density surveys and
//! the chord polynomial tower `S_k`, `P_m`, `Psi_n`.

pub mod arith;
pub mod chordpoly;
pub mod cli;
pub mod density;
pub mod error;
pub mod modstar;
pub mod poly;
pub mod quadratic;
pub mod sequences;

pub use error::{Error, ErrorCategory, Result};
pub use modstar::{GroupStarSummary, ModStarResidue};
pub use poly::IntPolynomial;
