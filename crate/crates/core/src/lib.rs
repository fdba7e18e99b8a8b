//! Finite posets, good chains and fixed points.
//!
//! The crate turns the good-chain construction into executable algorithms:
//!
//! * [`poset`]: finite posets, subsets, segments and bounds.
//! * [`good_chains`]: goodness for an expander, chain enumeration and the
//!   greatest good chain, computed both by brute force and by iteration.
//! * [`bounding`]: explicit choice functions, the chain-bounding falsifier,
//!   unbounded chains and maximal elements.
//! * [`fixpoint`]: Bourbaki–Witt iteration for inflationary maps and a
//!   reaching-definitions demo built on it.
//! * [`gen_io`]: seeded generators, JSON formats and DOT export.

pub mod bounding;
pub mod error;
pub mod fixpoint;
pub mod gen_io;
pub mod good_chains;
pub mod limits;
pub mod poset;

pub use bounding::{BoundingWitness, Selector, Strategy, Verdict};
pub use error::{Error, Result};
pub use fixpoint::{AbstractCpo, FinitePosetCpo, FixpointError, FixpointReport};
pub use good_chains::{Expander, GoodChainReport, Method, OrderExpander};
pub use limits::SizeLimit;
pub use poset::{ClosureMode, Element, Poset, SubsetBits};
