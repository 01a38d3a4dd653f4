//! Computer algebra for finite pointfree topology.
//!
//! Finite frames are finite distributive lattices. This crate builds them,
//! computes their congruences (as nuclei), assembles the congruence frame
//! `C L`, works with strictly zero-dimensional biframes, and relates frames to
//! finite topological spaces through the spectrum and the Skula topology.

pub mod assembly;
pub mod biframe;
pub mod catalog;
pub mod check;
pub mod congruence;
pub mod error;
pub mod format;
pub mod oracle;
pub mod order;
pub mod spatial;

pub use assembly::{assemble, Assembly};
pub use biframe::{Biframe, BiframeHom};
pub use congruence::{beazer_macnab_witness, Congruence, Quotient};
pub use error::{Error, Result};
pub use order::{Frame, FrameHom, MeetSemilattice, Poset};
pub use spatial::FiniteSpace;

/// Default cap on the number of elements of a constructed frame (assemblies
/// and down-set frames). Overridden on the command line by `--budget` or the
/// `FRAMECALC_BUDGET` environment variable.
pub const DEFAULT_BUDGET: u64 = 1024;
