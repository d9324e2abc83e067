//! Grounding and reference evaluation for answer set programs with exact
//! rational terms.
//!
//! The pipeline is [`parser`] → [`grounder`] → either [`emitter`] (numeric
//! solver format) or [`evaluator`] (brute-force answer sets). All numbers are
//! [`rational::Rational`] values in standard form.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod aggregate;
pub mod ast;
pub mod builtins;
pub mod emitter;
pub mod evaluator;
pub mod grounder;
pub mod parser;
mod plan;
pub mod rational;
