//! Simulation and analysis toolkit for plane-selective spectral addressing of
//! nuclear-spin qubits in three-dimensional optical tweezer arrays.
//!
//! The crate models a single alkaline-earth-like atom driven on a narrow
//! ground-to-metastable transition while trapped in a tweezer inside a magnetic
//! field gradient. It covers:
//!
//! - coherent spin-motion dynamics in a 1D harmonic trap ([`dynamics`]) with
//!   square and hyperbolic-secant (HS1) drive pulses and shot-to-shot detuning
//!   noise Monte-Carlo ([`montecarlo`]),
//! - steady-state sideband spectra, FWHM extraction and Gaussian convolution
//!   ([`lineshape`], [`voigt`]),
//! - anti-Helmholtz field geometry, Zeeman shifts and per-site detuning maps
//!   ([`fields`]),
//! - quadrature error budgets and the ionization loss law ([`budget`]),
//! - interplane crosstalk of spectral plane addressing ([`crosstalk`]),
//! - SLM hologram synthesis for 3D tweezer arrays and a scalar-diffraction
//!   verification oracle ([`hologram`]),
//! - measurement-correction algebra and fit models ([`inference`]).
//!
//! # Unit conventions
//!
//! Frequencies are stored as ordinary (non-angular) Hz throughout the public
//! API; quantities that are angular are explicitly named so. The single 2π
//! conversion to angular frequency happens where a Hamiltonian or oscillatory
//! model is assembled (see [`units::angular`]). Magnetic fields are in gauss,
//! gradients in gauss/cm, lengths in µm, trap depths in µK (mK where noted),
//! and times in seconds.

pub mod budget;
pub mod crosstalk;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod hologram;
pub mod inference;
pub mod io;
pub mod lineshape;
pub mod montecarlo;
pub mod pulse;
pub mod trap;
pub mod units;
pub mod voigt;

mod fit;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
