//! Finite generalized Boolean dynamical systems: the inverse semigroup, tight
//! filters, cutting and gluing, boundary paths, the path groupoid and its
//! Steinberg algebra, all computed exactly.

pub mod boolean;
pub mod checks;
pub mod cli;
pub mod filters;
pub mod fixtures;
pub mod format;
pub mod groupoid;
pub mod lasso;
pub mod paths;
pub mod semigroup;
pub mod steinberg;
pub mod surgery;

use thiserror::Error;

pub use boolean::{Atom, Gbds, Label, SetElem, SystemError, Word};
pub use filters::Filter;
pub use groupoid::GroupoidElem;
pub use semigroup::Triple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Semigroup(#[from] semigroup::SemigroupError),
    #[error(transparent)]
    Filter(#[from] filters::FilterError),
    #[error(transparent)]
    Surgery(#[from] surgery::SurgeryError),
    #[error(transparent)]
    Path(#[from] paths::PathError),
    #[error(transparent)]
    Groupoid(#[from] groupoid::GroupoidError),
    #[error(transparent)]
    Steinberg(#[from] steinberg::SteinbergError),
    #[error(transparent)]
    Parse(#[from] format::ParseError),
}
