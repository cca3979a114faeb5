//! Monte-Carlo excitation fidelities under shot-to-shot detuning noise.
//!
//! Each shot draws one detuning offset from a Gaussian of the configured FWHM
//! and holds it for the whole pulse. Per-shot RNG streams are split from the
//! master seed by a counter-based mix, so results are bit-identical for a
//! given (seed, samples) pair regardless of how many workers run the shots.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dynamics::{self, build_hamiltonian, max_step, STEP_RULE_CYCLES};
use crate::pulse::{DetuningNoise, Hs1Pulse, PulseShape};
use crate::trap::TrapParams;
use crate::units::fwhm_to_sigma;
use crate::{Error, Result};

/// Result of a Monte-Carlo fidelity estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// Estimated excitation fidelity (a probability).
    pub fidelity: f64,
    /// Standard error of the estimate over the Monte-Carlo samples.
    pub std_error: f64,
    /// Time at which the fidelity was read off (argmax of the averaged curve
    /// for π pulses, the final time for HS1 pulses).
    pub readout_time_s: f64,
    /// True when the trap's thermal weights carry a truncation warning.
    pub truncation_warning: bool,
}

/// SplitMix64-style mix of a master seed and a sample counter into an
/// independent per-sample seed.
pub fn split_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-sample RNG derived from the master seed and the sample index.
pub fn sample_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(split_seed(master, index))
}

/// The Gaussian detuning offsets for all shots of `noise`, in Hz.
pub fn sample_detunings(noise: &DetuningNoise) -> Result<Vec<f64>> {
    let sigma = fwhm_to_sigma(noise.fwhm_hz())?;
    Ok((0..noise.samples as u64)
        .map(|i| {
            if sigma == 0.0 {
                0.0
            } else {
                let draw: f64 = StandardNormal.sample(&mut sample_rng(noise.seed, i));
                sigma * draw
            }
        })
        .collect())
}

fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// π-pulse excitation fidelity under shot-to-shot detuning noise.
///
/// Every shot starts from the thermal motional mixture, evolves a resonant
/// square pulse of Rabi frequency `rabi_hz` shifted by the shot's detuning
/// draw, and records the excited population over a time window of
/// 1.5 / (Ω e^{−η²/2}). The fidelity is the maximum of the sample-averaged
/// population curve.
pub fn pi_pulse_fidelity_mc(
    trap: &TrapParams,
    rabi_hz: f64,
    noise: &DetuningNoise,
) -> Result<McEstimate> {
    if !(rabi_hz > 0.0) {
        return Err(Error::Domain("π-pulse Rabi frequency must be > 0".into()));
    }
    let weights = crate::trap::thermal_weights(trap.mean_phonon, trap.max_fock)?;
    let truncation_warning = weights.truncation_warning();

    let deltas = sample_detunings(noise)?;
    // identical shots collapse to a single evaluation
    let (unique, n_eff) = if deltas.iter().all(|&d| d == deltas[0]) {
        (vec![deltas[0]], 1usize)
    } else {
        (deltas, noise.samples)
    };

    let eta = trap.lamb_dicke;
    let carrier = rabi_hz * (-eta * eta / 2.0).exp();
    let t_max = 1.5 / carrier;
    let delta_max = unique.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let f_max = rabi_hz.max(trap.trap_frequency_hz).max(delta_max);
    let dt = 1.0 / (STEP_RULE_CYCLES * f_max);
    let n_times = (t_max / dt).ceil() as usize + 1;
    let times: Vec<f64> = (0..n_times).map(|k| k as f64 * dt).collect();

    let curves = map_indexed(unique.len(), |s| {
        square_population_curve(trap, rabi_hz, unique[s], weights.as_slice(), &times)
    });

    let mut mean = vec![0.0f64; n_times];
    let mut sumsq = vec![0.0f64; n_times];
    for curve in &curves {
        for (k, &p) in curve.iter().enumerate() {
            mean[k] += p;
            sumsq[k] += p * p;
        }
    }
    let nf = n_eff as f64;
    for m in mean.iter_mut() {
        *m /= curves.len() as f64;
    }
    let (k_max, &fidelity) = mean
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("nonempty curve");
    let std_error = if n_eff > 1 {
        let var = (sumsq[k_max] - nf * fidelity * fidelity) / (nf - 1.0);
        (var.max(0.0) / nf).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate { fidelity, std_error, readout_time_s: times[k_max], truncation_warning })
}

/// Thermally averaged excited population over a time grid for a square pulse
/// at detuning `delta_hz`, computed from one eigendecomposition.
fn square_population_curve(
    trap: &TrapParams,
    rabi_hz: f64,
    delta_hz: f64,
    weights: &[f64],
    times: &[f64],
) -> Vec<f64> {
    let levels = trap.fock_levels();
    let h = build_hamiltonian(delta_hz, rabi_hz, trap);
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors;
    let dim = 2 * levels;
    // column n holds V† |g,n⟩
    let mut coeff = DMatrix::<C64>::zeros(dim, levels);
    for n in 0..levels {
        for j in 0..dim {
            coeff[(j, n)] = v[(n, j)].conj();
        }
    }
    let v_exc = v.rows(levels, levels).clone_owned();
    let mut out = Vec::with_capacity(times.len());
    let mut modal = DMatrix::<C64>::zeros(dim, levels);
    for &t in times {
        for j in 0..dim {
            let phase = (-C64::i() * eig.eigenvalues[j] * t).exp();
            for n in 0..levels {
                modal[(j, n)] = coeff[(j, n)] * phase;
            }
        }
        let exc = &v_exc * &modal;
        let mut pop = 0.0;
        for (n, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            pop += w * exc.column(n).norm_squared();
        }
        out.push(pop);
    }
    out
}

/// HS1 excitation fidelity under shot-to-shot detuning noise.
///
/// Identical sampling to [`pi_pulse_fidelity_mc`], but each shot evolves the
/// swept pulse (shifted by the shot's detuning draw) and the fidelity is the
/// final-time excited population.
pub fn hs1_fidelity_mc(
    trap: &TrapParams,
    pulse: &Hs1Pulse,
    noise: &DetuningNoise,
) -> Result<McEstimate> {
    PulseShape::Hs1(*pulse).validate()?;
    let weights = crate::trap::thermal_weights(trap.mean_phonon, trap.max_fock)?;
    let truncation_warning = weights.truncation_warning();

    let deltas = sample_detunings(noise)?;
    let (unique, n_eff) = if deltas.iter().all(|&d| d == deltas[0]) {
        (vec![deltas[0]], 1usize)
    } else {
        (deltas, noise.samples)
    };

    let finals = map_indexed(unique.len(), |s| {
        let mut shifted = *pulse;
        shifted.center_detuning_hz += unique[s];
        hs1_final_population(trap, &shifted, weights.as_slice())
    });

    let nf = n_eff as f64;
    let mean = finals.iter().sum::<f64>() / finals.len() as f64;
    let std_error = if n_eff > 1 {
        let var = finals.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (nf - 1.0);
        (var / nf).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        fidelity: mean,
        std_error,
        readout_time_s: pulse.duration_s,
        truncation_warning,
    })
}

/// Thermally averaged final excited population after one HS1 pulse, stepping
/// all initial Fock states as one block.
fn hs1_final_population(trap: &TrapParams, pulse: &Hs1Pulse, weights: &[f64]) -> f64 {
    let shape = PulseShape::Hs1(*pulse);
    let levels = trap.fock_levels();
    let dim = 2 * levels;
    let dt = max_step(&shape, trap);
    let duration = pulse.duration_s;
    let n_steps = (duration / dt).ceil() as usize;

    let mut block = DMatrix::<C64>::zeros(dim, levels);
    for n in 0..levels {
        block[(n, n)] = C64::new(1.0, 0.0);
    }
    let coupling = dynamics::displacement_matrix(trap.lamb_dicke, levels);
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    let mut t0 = 0.0;
    for k in 0..n_steps {
        let t1 = ((k + 1) as f64 * dt).min(duration);
        let mid = 0.5 * (t0 + t1);
        dynamics::fill_hamiltonian(&mut h, shape.detuning_at(mid), shape.rabi_at(mid), trap, &coupling);
        block = dynamics::apply_exp_block(&h, t1 - t0, &block);
        t0 = t1;
    }
    let exc = block.rows(levels, levels);
    weights
        .iter()
        .enumerate()
        .map(|(n, &w)| w * exc.column(n).norm_squared())
        .sum()
}
