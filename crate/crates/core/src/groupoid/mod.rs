//! Finite groupoids, maps between them, homotopies, pairs and skeleta.

mod core;
mod group;
mod maps;

use thiserror::Error;

pub use self::core::FiniteGroupoid;
pub use group::GroupTable;
pub use maps::{
    check_relative_homotopy, connected_components, skeleton_retraction, Component, GroupoidMap,
    GroupoidPair, Homotopy, Retraction,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("associativity fails for ({a}, {b}, {c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("groupoid axiom violated: {0}")]
    Axiom(String),
    #[error("morphism {0} has no inverse")]
    MissingInverse(usize),
    #[error("action axiom violated: {0}")]
    ActionViolation(String),
    #[error("blow-up needs a nonempty object set")]
    EmptyObjectSet,
    #[error("not a subgroupoid: {0}")]
    NotSubgroupoid(String),
    #[error("not a groupoid map: {0}")]
    MapViolation(String),
    #[error("not a homotopy: {0}")]
    HomotopyViolation(String),
    #[error("inclusion of a pair must be injective")]
    NotInjective,
    #[error("invalid skeleton choice: {0}")]
    InvalidChoice(String),
}
