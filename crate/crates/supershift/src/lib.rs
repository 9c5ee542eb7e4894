//! Schrödinger evolution on ℝ\{0} by rotated Fresnel contours, with superoscillating
//! and supershift initial data.
//!
//! The solution is
//!
//! ```text
//! Ψ(t, x) = ∫ G(t, x, y) F(y) dy
//! ```
//!
//! evaluated along a rotated contour on which the Gaussian factor of G decays. Kernels
//! are provided for the free particle, the centrifugal potential λ/x² and the family of
//! point interactions at the origin.
//!
//! Modules:
//!
//! - [`specfun`]: erf, Λ(z) = e^{z²}(1 − erf z), J_ν, Y_ν, H_ν^{(2)} for complex argument
//! - [`superosc`]: superoscillating sequences and plane-wave supershifts
//! - [`quadrature`]: rotated Fresnel integrals and their regularized real-line forms
//! - [`greens`]: the propagators, their decompositions and transmission conditions
//! - [`evolution`]: Ψ, boundary traces and the verification scans
//! - [`oracle`]: an independent Crank–Nicolson solver
//! - [`cli`]: configuration, CSV output and the `supershift` binary's subcommands

pub mod cli;
pub mod evolution;
pub mod greens;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod superosc;

pub use num_complex::Complex64 as C64;
