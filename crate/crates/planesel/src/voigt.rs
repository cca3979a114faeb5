//! Faddeeva function and Voigt profiles.
//!
//! The Voigt profile (Gaussian ⊛ Lorentzian) is evaluated through the
//! scaled complex error function w(z) = e^{−z²} erfc(−iz), computed with a
//! Weideman rational approximation in the bulk and the Gauss continued
//! fraction in the far wings. Used wherever a Lorentzian line is convolved
//! with Gaussian detuning noise without going through a sampled grid.

use num_complex::Complex64 as C64;
use std::sync::OnceLock;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const WEIDEMAN_N: usize = 32;

/// Coefficients of the degree-N Weideman rational approximation, computed
/// once by a direct discrete Fourier sum.
fn weideman_coeffs() -> &'static [f64; WEIDEMAN_N] {
    static COEFFS: OnceLock<[f64; WEIDEMAN_N]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let l = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        // sampled auxiliary function f(θ_k) = e^{−t²}(L² + t²), t = L tan(θ/2)
        let mut f = vec![0.0f64; 2 * m];
        for (i, k) in (-(m as i64 - 1)..=(m as i64 - 1)).enumerate() {
            let theta = k as f64 * std::f64::consts::PI / m as f64;
            let t = l * (theta / 2.0).tan();
            f[i + 1] = (-t * t).exp() * (l * l + t * t);
        }
        // real DFT coefficients a_j = (1/2M) Σ f(θ_k) e^{−ijθ_k}
        let mut a = [0.0f64; WEIDEMAN_N];
        for (j, aj) in a.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (i, k) in (-(m as i64)..=(m as i64 - 1)).enumerate() {
                let theta = k as f64 * std::f64::consts::PI / m as f64;
                acc += f[i] * ((j + 1) as f64 * theta).cos();
            }
            *aj = acc / (2.0 * m as f64);
        }
        a
    })
}

/// Scaled complex error function w(z) = e^{−z²} erfc(−iz) for Im(z) ≥ 0.
pub fn faddeeva(z: C64) -> C64 {
    debug_assert!(z.im >= 0.0, "faddeeva requires the upper half-plane");
    if z.norm_sqr() > 49.0 {
        // Gauss continued fraction, excellent in the far wings
        let mut cf = C64::new(0.0, 0.0);
        for k in (1..=12).rev() {
            cf = C64::new(k as f64 / 2.0, 0.0) / (z - cf);
        }
        return C64::i() / SQRT_PI / (z - cf);
    }
    let a = weideman_coeffs();
    let l = (WEIDEMAN_N as f64 / std::f64::consts::SQRT_2).sqrt();
    let iz = C64::i() * z;
    let denom = C64::new(l, 0.0) - iz;
    let ratio = (C64::new(l, 0.0) + iz) / denom;
    // Horner evaluation of Σ a_j ratio^j
    let mut poly = C64::new(0.0, 0.0);
    for &aj in a.iter().rev() {
        poly = poly * ratio + aj;
    }
    C64::new(2.0, 0.0) * poly / (denom * denom) + C64::new(1.0, 0.0) / (SQRT_PI * denom)
}

/// Unit-area Voigt profile at offset `delta` from line center: a Gaussian of
/// standard deviation `sigma` convolved with a Lorentzian of half width at
/// half maximum `gamma_hwhm`.
pub fn voigt_profile(delta: f64, sigma: f64, gamma_hwhm: f64) -> f64 {
    if sigma <= 0.0 && gamma_hwhm <= 0.0 {
        return 0.0;
    }
    if sigma <= 0.0 {
        // pure Lorentzian
        let g = gamma_hwhm;
        return g / std::f64::consts::PI / (delta * delta + g * g);
    }
    if gamma_hwhm <= 0.0 {
        // pure Gaussian
        let u = delta / sigma;
        return (-0.5 * u * u).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    }
    let rt2 = std::f64::consts::SQRT_2;
    let z = C64::new(delta, gamma_hwhm) / (sigma * rt2);
    faddeeva(z).re / (sigma * rt2 * SQRT_PI)
}

/// Value at `delta` of a unit-peak Lorentzian of half width `gamma_hwhm`
/// convolved with a Gaussian of standard deviation `sigma`.
///
/// The unconvolved profile is γ²/(δ² + γ²); its area is πγ, so the convolved
/// value is πγ × the unit-area Voigt profile.
pub fn lorentzian_peak_convolved(delta: f64, sigma: f64, gamma_hwhm: f64) -> f64 {
    if sigma <= 0.0 {
        let g2 = gamma_hwhm * gamma_hwhm;
        return g2 / (delta * delta + g2);
    }
    std::f64::consts::PI * gamma_hwhm * voigt_profile(delta, sigma, gamma_hwhm)
}
