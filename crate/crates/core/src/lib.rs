//! Computing with approximate subgroups of finite groups.
//!
//! The crate covers exact commuting probabilities `pr(X, Y)`, certificates
//! for `K`-approximate subgroups, the constructive pipelines that produce the
//! witness sets for the structure theorems relating the two, and a registry
//! of exactly checkable inequalities together with a seeded suite runner.

pub mod approx;
pub mod error;
pub mod family;
pub mod group;
pub mod named;
pub mod probability;
pub mod rational;
pub mod registry;
pub mod spec;
pub mod subset;
pub mod suite;
pub mod witness;

pub use error::{Error, Result};
pub use group::{ElementId, Group, QuotientMap};
pub use rational::Rational;
pub use subset::{Side, Subset};
