//! Quantum Hilbert-space structure derived from finite group actions on
//! spaces of conceptual variables.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: dense complex matrices, Hermitian spectra, unitary exponentials.
//! * [`groups`]: finite groups, actions, orbits, invariant measures.
//! * [`variables`]: variables on a space, permissibility, induced groups.
//! * [`coherent`]: unitary representations, coherent states, frame operators.
//! * [`quantize`]: operators, POVMs, density operators, spectral orbit structure.
//! * [`scenarios`] and [`report`]: end-to-end verification runs and their JSON reports.

pub mod algebra;
pub mod coherent;
pub mod groups;
pub mod quantize;
pub mod report;
pub mod scenarios;
pub mod variables;
