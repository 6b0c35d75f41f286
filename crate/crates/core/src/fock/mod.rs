//! Sparse multimode Fock states, beam splitters and post-selection, with the
//! elimination circuit and the `|t_n>` teleporter resources built on top.
//!
//! States are generic over [`Amplitude`]: `Complex64` for general use and
//! [`Surd`] for exact arithmetic when every reflectivity is rational.

mod amplitude;
mod circuits;
mod dump;
mod state;

pub use amplitude::{Amplitude, Surd, PRUNE};
pub use circuits::{
    build_tn, elim_resource, tn_reference, EliminationRun, Rail, TnBuild, TnStep, TN_MAX_ORDER,
};
pub use dump::{dump, parse_dump};
pub use state::{
    fidelity, make_state, states_equal, BeamSplitterSpec, Conditioned, FockError, FockState,
    Occupation, Reflectivity,
};
