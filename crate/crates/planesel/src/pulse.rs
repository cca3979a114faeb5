//! Drive pulse shapes and shot-to-shot detuning noise.

use crate::{Error, Result};

/// Default sech truncation parameter for HS1 pulses; the envelope edge
/// amplitude is sech(β) ≈ 1% of the peak.
pub const HS1_DEFAULT_TRUNCATION: f64 = 5.3;

/// A square drive pulse: constant Rabi frequency and detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquarePulse {
    /// Pulse duration in seconds.
    pub duration_s: f64,
    /// Rabi frequency Ω in Hz.
    pub rabi_hz: f64,
    /// Laser detuning Δ from resonance in Hz.
    pub detuning_hz: f64,
}

/// A hyperbolic-secant (HS1) adiabatic passage pulse.
///
/// The Rabi envelope is Ω(t) = Ω₀ sech(β(2t/T − 1)) and the detuning sweeps
/// as Δ(t) = center + half_range · tanh(β(2t/T − 1)) / tanh(β), so the sweep
/// spans exactly ±half_range over the pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hs1Pulse {
    /// Pulse duration T in seconds.
    pub duration_s: f64,
    /// Peak Rabi frequency Ω₀ in Hz.
    pub peak_rabi_hz: f64,
    /// Half range of the detuning sweep in Hz.
    pub sweep_half_range_hz: f64,
    /// Truncation parameter β.
    pub truncation: f64,
    /// Center detuning of the sweep in Hz.
    pub center_detuning_hz: f64,
}

impl Hs1Pulse {
    /// HS1 pulse with the default truncation β and zero center detuning.
    pub fn new(duration_s: f64, peak_rabi_hz: f64, sweep_half_range_hz: f64) -> Self {
        Self {
            duration_s,
            peak_rabi_hz,
            sweep_half_range_hz,
            truncation: HS1_DEFAULT_TRUNCATION,
            center_detuning_hz: 0.0,
        }
    }
}

/// A drive pulse, either square or HS1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    Square(SquarePulse),
    Hs1(Hs1Pulse),
}

impl PulseShape {
    pub fn square(duration_s: f64, rabi_hz: f64, detuning_hz: f64) -> Self {
        PulseShape::Square(SquarePulse { duration_s, rabi_hz, detuning_hz })
    }

    pub fn validate(&self) -> Result<()> {
        let (dur, rabi) = match self {
            PulseShape::Square(p) => (p.duration_s, p.rabi_hz),
            PulseShape::Hs1(p) => (p.duration_s, p.peak_rabi_hz),
        };
        if !(dur > 0.0) {
            return Err(Error::Domain("pulse duration must be > 0".into()));
        }
        if !(rabi >= 0.0) {
            return Err(Error::Domain("Rabi frequency must be >= 0".into()));
        }
        if let PulseShape::Hs1(p) = self {
            if !(p.truncation > 0.0) {
                return Err(Error::Domain("HS1 truncation must be > 0".into()));
            }
            if !(p.sweep_half_range_hz >= 0.0) {
                return Err(Error::Domain("HS1 sweep half range must be >= 0".into()));
            }
        }
        Ok(())
    }

    /// Pulse duration in seconds.
    pub fn duration_s(&self) -> f64 {
        match self {
            PulseShape::Square(p) => p.duration_s,
            PulseShape::Hs1(p) => p.duration_s,
        }
    }

    /// Instantaneous Rabi frequency Ω(t) in Hz.
    pub fn rabi_at(&self, t: f64) -> f64 {
        match self {
            PulseShape::Square(p) => p.rabi_hz,
            PulseShape::Hs1(p) => {
                let x = p.truncation * (2.0 * t / p.duration_s - 1.0);
                p.peak_rabi_hz / x.cosh()
            }
        }
    }

    /// Instantaneous detuning Δ(t) in Hz.
    pub fn detuning_at(&self, t: f64) -> f64 {
        match self {
            PulseShape::Square(p) => p.detuning_hz,
            PulseShape::Hs1(p) => {
                let x = p.truncation * (2.0 * t / p.duration_s - 1.0);
                p.center_detuning_hz
                    + p.sweep_half_range_hz * x.tanh() / p.truncation.tanh()
            }
        }
    }

    /// Largest |Δ(t)| over the pulse, in Hz.
    pub fn max_abs_detuning(&self) -> f64 {
        match self {
            PulseShape::Square(p) => p.detuning_hz.abs(),
            PulseShape::Hs1(p) => {
                (p.center_detuning_hz - p.sweep_half_range_hz)
                    .abs()
                    .max((p.center_detuning_hz + p.sweep_half_range_hz).abs())
            }
        }
    }

    /// Peak Rabi frequency over the pulse, in Hz.
    pub fn peak_rabi(&self) -> f64 {
        match self {
            PulseShape::Square(p) => p.rabi_hz,
            PulseShape::Hs1(p) => p.peak_rabi_hz,
        }
    }
}

/// Gaussian shot-to-shot detuning noise: a detuning offset is drawn once per
/// shot and held constant within the shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DetuningNoise {
    /// FWHM of the Gaussian detuning distribution, stored as integer mHz to
    /// keep the type hashable; see [`DetuningNoise::new`].
    fwhm_mhz_thousandths: u64,
    /// Master seed; per-sample streams are split deterministically from it.
    pub seed: u64,
    /// Number of Monte-Carlo samples.
    pub samples: usize,
}

impl DetuningNoise {
    pub fn new(fwhm_hz: f64, seed: u64, samples: usize) -> Result<Self> {
        if !(fwhm_hz >= 0.0) || !fwhm_hz.is_finite() {
            return Err(Error::Domain("noise FWHM must be finite and >= 0".into()));
        }
        if samples < 1 {
            return Err(Error::Domain("sample count must be >= 1".into()));
        }
        Ok(Self { fwhm_mhz_thousandths: (fwhm_hz * 1e3).round() as u64, seed, samples })
    }

    /// FWHM of the detuning distribution in Hz.
    #[inline]
    pub fn fwhm_hz(&self) -> f64 {
        self.fwhm_mhz_thousandths as f64 * 1e-3
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hs1_sweep_spans_exactly_half_range() {
        let p = PulseShape::Hs1(Hs1Pulse::new(1e-3, 10e3, 30e3));
        assert_relative_eq!(p.detuning_at(0.0), -30e3, max_relative = 1e-12);
        assert_relative_eq!(p.detuning_at(1e-3), 30e3, max_relative = 1e-12);
        assert_relative_eq!(p.detuning_at(0.5e-3), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn hs1_envelope_peak_and_edges() {
        let p = PulseShape::Hs1(Hs1Pulse::new(1e-3, 10e3, 30e3));
        assert_relative_eq!(p.rabi_at(0.5e-3), 10e3, max_relative = 1e-12);
        // sech(5.3) ~ 1% truncation at the edges
        assert!(p.rabi_at(0.0) < 0.011 * 10e3);
        assert_relative_eq!(p.rabi_at(0.0), p.rabi_at(1e-3), max_relative = 1e-12);
    }

    #[test]
    fn square_is_constant() {
        let p = PulseShape::square(1e-3, 5e3, -2e3);
        assert_eq!(p.rabi_at(0.3e-3), 5e3);
        assert_eq!(p.detuning_at(0.9e-3), -2e3);
        assert_eq!(p.max_abs_detuning(), 2e3);
    }

    #[test]
    fn noise_validation() {
        assert!(DetuningNoise::new(-1.0, 0, 10).is_err());
        assert!(DetuningNoise::new(1.0, 0, 0).is_err());
        let n = DetuningNoise::new(53.1e3, 42, 1000).unwrap();
        assert_relative_eq!(n.fwhm_hz(), 53.1e3, max_relative = 1e-9);
    }
}
