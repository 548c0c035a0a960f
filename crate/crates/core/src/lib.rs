//! Berger-type conformal deformations `g^α = α(g + g(·,FV) ⊗ g(·,FV))` of
//! para-Kähler-Norden metrics on coordinate charts.
//!
//! The crate has two independent halves. [`berger`] and [`harmonic`] evaluate
//! closed-form expressions for the connection, curvatures, tension and
//! bitension fields of the deformed metric using base-metric data only.
//! [`oracle`] recomputes the same quantities from the definitions, by
//! differentiating the assembled metric components exactly ([`expr::Jet`]).
//! [`oracle::compare`] puts the two side by side over sampled points.

// Tensor code indexes several arrays with the same subscript.
#![allow(clippy::needless_range_loop)]

pub mod berger;
pub mod builtins;
pub mod chart;
pub mod cli;
pub mod error;
pub mod expr;
pub mod harmonic;
pub mod manifest;
pub mod map;
pub mod oracle;
pub mod para_norden;
pub mod sampling;

pub use error::{Error, Result};
