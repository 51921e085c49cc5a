use thiserror::Error;

/// Referential or shape errors raised while constructing model values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("empty identifier")]
    EmptyId,
    #[error("identifier '{0}' contains a reserved character")]
    ReservedChar(String),
    #[error("duplicate identifier '{0}'")]
    DuplicateId(String),
    #[error("unknown identifier '{0}'")]
    UnknownId(String),
    #[error("internal node '{0}' has fewer than two children")]
    TooFewChildren(String),
    #[error("species '{0}' is assigned to more than one leaf")]
    DuplicateSpecies(String),
    #[error("self-loop on '{0}'")]
    SelfLoop(String),
    #[error("{0}")]
    Shape(String),
}
