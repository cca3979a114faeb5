//! Trap parameters and thermal motional statistics.

use crate::{Error, Result};

/// Thermal weight at the highest kept Fock level above which a truncation
/// warning is attached to [`ThermalWeights`].
pub const TRUNCATION_WARN_THRESHOLD: f64 = 1e-3;

/// Parameters of the 1D harmonic trap seen by the driven atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapParams {
    /// Trap frequency ω_r in ordinary Hz.
    pub trap_frequency_hz: f64,
    /// Lamb-Dicke parameter η (dimensionless, ≥ 0).
    pub lamb_dicke: f64,
    /// Mean phonon occupation n̄ of the thermal motional state (≥ 0).
    pub mean_phonon: f64,
    /// Highest Fock level N′ kept in the truncated motional space; the
    /// motional dimension is N′ + 1.
    pub max_fock: usize,
    /// Trap depth U₀ in µK. Carried for bookkeeping (ionization-law inputs
    /// use mK explicitly).
    pub depth_uk: f64,
}

impl TrapParams {
    pub fn new(
        trap_frequency_hz: f64,
        lamb_dicke: f64,
        mean_phonon: f64,
        max_fock: usize,
        depth_uk: f64,
    ) -> Result<Self> {
        if !(trap_frequency_hz >= 0.0) {
            return Err(Error::Domain("trap frequency must be >= 0".into()));
        }
        if !(lamb_dicke >= 0.0) {
            return Err(Error::Domain("Lamb-Dicke parameter must be >= 0".into()));
        }
        if !(mean_phonon >= 0.0) {
            return Err(Error::Domain("mean phonon number must be >= 0".into()));
        }
        if max_fock < 1 {
            return Err(Error::Domain("max Fock level must be >= 1".into()));
        }
        Ok(Self { trap_frequency_hz, lamb_dicke, mean_phonon, max_fock, depth_uk })
    }

    /// Motional-space dimension N′ + 1.
    #[inline]
    pub fn fock_levels(&self) -> usize {
        self.max_fock + 1
    }

    /// Thermal occupation weights for this trap's n̄ and N′.
    pub fn thermal_weights(&self) -> ThermalWeights {
        thermal_weights(self.mean_phonon, self.max_fock)
            .expect("trap invariants already validated")
    }
}

/// Normalized thermal occupation probabilities over Fock levels 0..=N′.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalWeights {
    weights: Vec<f64>,
    truncation_warning: bool,
}

impl ThermalWeights {
    /// Probability of Fock level `n`.
    #[inline]
    pub fn weight(&self, n: usize) -> f64 {
        self.weights[n]
    }

    /// All weights, indexed by Fock level.
    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Number of levels kept (N′ + 1).
    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// True when the weight of the top level exceeds
    /// [`TRUNCATION_WARN_THRESHOLD`], i.e. the truncated ladder is too short
    /// for this temperature.
    #[inline]
    pub fn truncation_warning(&self) -> bool {
        self.truncation_warning
    }

    /// Mean phonon number implied by the truncated, renormalized weights.
    pub fn mean_phonon(&self) -> f64 {
        self.weights.iter().enumerate().map(|(n, w)| n as f64 * w).sum()
    }
}

/// Thermal occupation of a harmonic oscillator with mean phonon number `nbar`,
/// truncated at Fock level `max_fock` and renormalized.
///
/// The distribution is geometric with ratio n̄/(n̄+1), which is the Boltzmann
/// distribution at temperature T = ħω_r / (k_B ln(1 + 1/n̄)). Truncation mass
/// is redistributed by renormalization rather than discarded.
pub fn thermal_weights(nbar: f64, max_fock: usize) -> Result<ThermalWeights> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::Domain(format!("mean phonon number must be >= 0, got {nbar}")));
    }
    if max_fock < 1 {
        return Err(Error::Domain("max Fock level must be >= 1".into()));
    }
    let levels = max_fock + 1;
    let mut weights = vec![0.0; levels];
    if nbar == 0.0 {
        weights[0] = 1.0;
    } else {
        let ratio = nbar / (nbar + 1.0);
        let mut w = 1.0;
        for slot in weights.iter_mut() {
            *slot = w;
            w *= ratio;
        }
        let total: f64 = weights.iter().sum();
        for slot in weights.iter_mut() {
            *slot /= total;
        }
    }
    let truncation_warning = weights[levels - 1] >= TRUNCATION_WARN_THRESHOLD;
    Ok(ThermalWeights { weights, truncation_warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ground_state_only_for_zero_nbar() {
        let w = thermal_weights(0.0, 10).unwrap();
        assert_eq!(w.weight(0), 1.0);
        assert!(w.as_slice()[1..].iter().all(|&x| x == 0.0));
        assert!(!w.truncation_warning());
    }

    #[test]
    fn two_level_hand_value() {
        // nbar = 1: ratio 1/2, two levels [1, 0.5]/1.5 = [2/3, 1/3]
        let w = thermal_weights(1.0, 1).unwrap();
        assert_relative_eq!(w.weight(0), 2.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(w.weight(1), 1.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn normalized_and_non_increasing() {
        let w = thermal_weights(0.59, 10).unwrap();
        let sum: f64 = w.as_slice().iter().sum();
        assert_relative_eq!(sum, 1.0, epsilon = 1e-12);
        for pair in w.as_slice().windows(2) {
            assert!(pair[1] <= pair[0]);
        }
        assert!(w.as_slice().iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn mean_phonon_near_nbar_at_paper_truncation() {
        let w = thermal_weights(0.59, 10).unwrap();
        assert!((w.mean_phonon() - 0.59).abs() < 0.01);
    }

    #[test]
    fn mean_phonon_converges_monotonically() {
        let mut errs = Vec::new();
        for n in [10usize, 50, 200] {
            let w = thermal_weights(0.59, n).unwrap();
            errs.push((w.mean_phonon() - 0.59).abs());
        }
        assert!(errs[1] <= errs[0] && errs[2] <= errs[1]);
        assert!(errs[2] < 1e-9);
    }

    #[test]
    fn negative_nbar_rejected() {
        assert!(matches!(thermal_weights(-0.1, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn truncation_warning_fires_when_hot() {
        // nbar = 5 at N' = 3 leaves substantial weight on the top level
        let w = thermal_weights(5.0, 3).unwrap();
        assert!(w.truncation_warning());
        let w = thermal_weights(0.59, 10).unwrap();
        assert!(!w.truncation_warning());
    }
}
