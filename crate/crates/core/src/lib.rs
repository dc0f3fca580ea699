//! Finite quantum measure theory and coevents, computed exactly.
//!
//! The crate is organised bottom-up:
//!
//! * [`eventalg`]: sample spaces, events as bitmasks, filters.
//! * [`measure`]: exact classical and quantum measures, decoherence
//!   functionals, null sets and coarse graining.
//! * [`coevent`]: truth valuations `EA → Z2`, the `*` duality and the
//!   multiplicative scheme.
//! * [`beables`]: valuation events, the `τ` embedding, order comparison and
//!   the Heyting and Boolean completions.
//! * [`topos`]: varying sets over a finite poset, sieves, the subobject
//!   classifier and characteristic maps over the multiplicative coevents.
//! * [`theory`] and [`report`]: theory files and deterministic reports.

pub mod beables;
pub mod coevent;
pub mod error;
pub mod eventalg;
pub mod measure;
pub mod rational;
pub mod report;
pub mod theory;
pub mod topos;

pub use error::{Error, Result};
