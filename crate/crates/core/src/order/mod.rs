//! Finite posets, frames, homomorphisms and frame constructions.

mod construct;
mod frame;
mod hom;
pub mod iso;
mod poset;

pub use construct::{
    downset_frame, downset_frame_with_budget, free_frame_on_semilattice, free_meet_semilattice,
    MeetSemilattice,
};
pub use frame::Frame;
pub use hom::{enumerate_homs, enumerate_homs_filtered, validate as validate_hom, FrameHom};
pub use poset::Poset;
pub(crate) use hom::same as same_frame;
