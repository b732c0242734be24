//! # gamowkit
//!
//! A toolkit for resonance physics built around the Gamow (decaying-state)
//! picture of unstable quantum systems.
//!
//! The crate provides:
//!
//! - [`quad`]: Gauss-Legendre quadrature over finite intervals, semi-infinite
//!   half-lines (via a rational change of variables with graded panels), and
//!   parameterized contours, plus residue extraction on circles.
//! - [`spectral`]: Breit-Wigner energy amplitudes and densities, normalized
//!   energy wavefunctions with simple-pole structure, and the dual
//!   reconstruction of a wavefunction over the real half-line versus over a
//!   deformed contour plus resonance-pole contributions.
//! - [`evolution`]: survival amplitudes for full-line and semibounded energy
//!   supports, pure exponential (semigroup) evolution of resonance weights,
//!   and the long-time comparison between the two.
//! - [`scattering`]: S-matrix models (rational pole models and the
//!   delta-shell potential), two-sheet evaluation, pole searches with winding
//!   numbers and Newton refinement, phase shifts, and cross sections.
//! - [`goldenrule`]: decay channels with form factors, normalized decay
//!   models, exponential decay laws and rates, the Fermi golden-rule point
//!   evaluation, and width/rate consistency checks.
//! - [`openquantum`]: density matrices, GKSL (Lindblad) generators, completely
//!   positive trace-preserving semigroup evolution, and unitary von Neumann
//!   evolution for comparison.
//!
//! Numerical conventions used throughout:
//!
//! - Energies are complex; decaying resonance poles sit in the lower half
//!   plane at `z = E_R - i*Gamma/2` with `E_R > 0`, `Gamma > 0`.
//! - `hbar = 1`, so rates and widths share units and `lifetime = 1/Gamma`.
//! - Forward time evolution of decaying states is a semigroup: operations
//!   restricted to `t >= 0` report [`error::ErrorKind::SemigroupDomain`] for
//!   negative times rather than extrapolating backwards.

// Validation guards are written in "reject unless provably valid" form,
// e.g. `!(radius > 0.0)`, so that NaN fails them; the positive
// comparisons clippy suggests instead would silently accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod energy;
pub mod error;
pub mod evolution;
pub mod goldenrule;
pub mod openquantum;
pub mod quad;
pub mod scattering;
pub mod spectral;

pub use energy::ComplexEnergy;
pub use error::{ErrorKind, Result, ToolkitError};
