//! Unit conventions and the few conversions used throughout the crate.
//!
//! Frequencies are ordinary (non-angular) Hz unless a name says otherwise.
//! The 2π conversion to angular frequency is centralized in [`angular`] and is
//! applied only where an oscillatory model is assembled (Hamiltonians, fit
//! models), never in stored quantities.

use crate::{Error, Result};

/// 2√(2 ln 2), the ratio between the FWHM and σ of a Gaussian.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_4;

/// Convert an ordinary frequency in Hz to angular frequency in rad/s.
///
/// This is the crate's single 2π conversion point.
#[inline]
pub fn angular(hz: f64) -> f64 {
    std::f64::consts::TAU * hz
}

/// Gaussian FWHM (Hz) to standard deviation (Hz): σ = FWHM / (2√(2 ln 2)).
pub fn fwhm_to_sigma(fwhm: f64) -> Result<f64> {
    if fwhm < 0.0 || !fwhm.is_finite() {
        return Err(Error::Domain(format!("fwhm must be finite and >= 0, got {fwhm}")));
    }
    Ok(fwhm / FWHM_PER_SIGMA)
}

/// Gaussian standard deviation (Hz) to FWHM (Hz).
pub fn sigma_to_fwhm(sigma: f64) -> Result<f64> {
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(Error::Domain(format!("sigma must be finite and >= 0, got {sigma}")));
    }
    Ok(sigma * FWHM_PER_SIGMA)
}

/// Gauss/cm to gauss/µm.
#[inline]
pub fn gauss_per_cm_to_per_um(b: f64) -> f64 {
    b * 1e-4
}

/// Millimetres to micrometres.
#[inline]
pub fn mm_to_um(mm: f64) -> f64 {
    mm * 1e3
}
