//! Exact-arithmetic coherent lower previsions on finite possibility spaces.
//!
//! Everything in this crate works over [`Rational`] values: gambles, lower
//! bounds, probability masses and linear programs. There is no floating point
//! anywhere in the pipeline, so equalities between computed quantities can be
//! asserted exactly.
//!
//! The crate is `no_std` and only needs an allocator. File formats, reports
//! and the command-line front end live in the companion `imprecise` crate.
//!
//! Module map:
//!
//! - [`space`]: possibility spaces, gambles, events, transformations and the
//!   [`LowerPrevision`] functional interface.
//! - [`solver`]: exact simplex (Bland's rule), vertex enumeration and
//!   linear-fractional minimisation over the probability simplex.
//! - [`lowprev`]: assessments, avoiding sure loss, coherence, natural
//!   extension, credal sets, desirability cones and preference relations.
//! - [`transforms`]: transformation monoids, closure, classification and
//!   invariant atoms.
//! - [`invariance`]: weak and strong invariance, the strongly invariant
//!   natural extension, mixture lower previsions and finite-group
//!   representations.
//! - [`shift`]: shift-invariant functionals on structured sequence gambles.
//! - [`exchange`]: count vectors, urn previsions, exchangeability and
//!   predictive updating.
//! - [`choquet`]: set functions, n-monotonicity, inner extensions, Choquet
//!   integration and possibility measures.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod rational;

pub mod choquet;
pub mod exchange;
pub mod invariance;
pub mod lowprev;
pub mod shift;
pub mod solver;
pub mod space;
pub mod transforms;

pub use error::Error;
pub use rational::Rational;
pub use space::{Event, Gamble, LowerPrevision, Prevision, Space, Transformation};

pub type Result<T, E = Error> = core::result::Result<T, E>;
