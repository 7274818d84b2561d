//! Exact workbench for finite probability-measure-preserving actions of
//! free groups: Schreier graphings, invariant random subgroups, joinings,
//! approximate conjugacy witnesses and a small continuous-logic evaluator.

pub mod action;
pub mod canonical;
pub mod conjugacy;
pub mod error;
pub mod format;
pub mod gen;
pub mod graphing;
pub mod irs;
pub mod joining;
pub mod logic;
pub mod measure;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Q;
