use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::model::{coefficients_at, StateSpec};

/// Two-mode amplitude `⟨x̃, x | t⟩` in units of length⁻¹.
///
/// The global phase is the one fixed by the `exp(−Q/B − Q*/B*)` prefactor.
pub fn wavefunction(spec: &StateSpec, x: f64, x_tilde: f64, t: f64) -> Complex64 {
    let osc = spec.osc();
    let len = osc.length_scale();
    let (xi, xt) = (x / len, x_tilde / len);
    let c = coefficients_at(spec, t);
    let (ch, sh) = (c.total_angle.cosh(), c.total_angle.sinh());
    let atten = spec.angles().input_attenuation();

    let u = xi * ch - xt * sh;
    let ut = xt * ch - xi * sh;
    let qb = c.q / c.b;
    let exponent = -qb - qb.conj() - 0.5 * c.g1 * u * u + SQRT_2 * c.g2 * atten * u
        - 0.5 * c.g1.conj() * ut * ut
        + SQRT_2 * c.g2.conj() * atten * ut;

    let norm = 1.0 / (len * PI.sqrt() * (c.f1 * c.b).norm());
    exponent.exp() * norm
}

/// Reduced position density matrix `ρ_{x',x}(t) = ∫ψ(x, x̃)ψ*(x', x̃)dx̃`,
/// that is `⟨x|ρ|x'⟩`, with the tilde coordinate traced out.
pub fn rho_position(spec: &StateSpec, x_prime: f64, x: f64, t: f64) -> Complex64 {
    let osc = spec.osc();
    let len = osc.length_scale();
    let (xp, xi) = (x_prime / len, x / len);
    let c = coefficients_at(spec, t);
    let angles = spec.angles();
    let enlarge = angles.cosh_2total;
    let gain = angles.detector_gain;
    let width = (c.f1 * c.b).norm_sqr();

    let alpha = spec.alpha().as_complex();
    let drift = alpha / c.a + (alpha / c.a).conj();
    let skew = c.g2 - c.g2.conj();

    let sum = xi + xp - SQRT_2 * gain.sqrt() * drift;
    let diff = xi - xp - SQRT_2 * (width / enlarge) * gain.sqrt() * skew;
    let exponent = width / (2.0 * enlarge) * gain * skew * skew
        - sum * sum / (4.0 * width * enlarge)
        - enlarge / (4.0 * width) * diff * diff
        - 0.25 * (c.g1 - c.g1.conj()) * (xi * xi - xp * xp);

    let norm = 1.0 / (len * PI.sqrt() * width.sqrt() * enlarge.sqrt());
    exponent.exp() * norm
}

/// Density matrix of the displaced squeezed thermal state at `t = 0`.
///
/// Only the input noise of `spec` is used; the detector noise is ignored.
/// With zero detector noise this coincides with [`rho_position`] at `t = 0`.
pub fn rho_position_dsts(spec: &StateSpec, x_prime: f64, x: f64) -> Complex64 {
    let osc = spec.osc();
    let len = osc.length_scale();
    let (xp, xi) = (x_prime / len, x / len);
    let c = coefficients_at(spec, 0.0);
    let enlarge = (2.0 * spec.angles().input).cosh();
    let width = c.f1.norm_sqr();
    let alpha = spec.alpha();
    let skew = (c.f2 - c.f2.conj()) * alpha.re() + Complex64::new(0.0, 2.0 * alpha.im());

    let sum = xi + xp - SQRT_2 * 2.0 * alpha.re();
    let diff = xi - xp - SQRT_2 * (width / enlarge) * skew;
    let exponent = width / (2.0 * enlarge) * skew * skew
        - Complex64::from(sum * sum / (4.0 * width * enlarge))
        - 0.25 * (c.f2 - c.f2.conj()) * (xi * xi - xp * xp)
        - enlarge / (4.0 * width) * diff * diff;

    let norm = 1.0 / (len * PI.sqrt() * width.sqrt() * enlarge.sqrt());
    exponent.exp() * norm
}

/// Position probability density (length⁻¹).
pub fn prob_x(spec: &StateSpec, x: f64, t: f64) -> f64 {
    let osc = spec.osc();
    let len = osc.length_scale();
    let c = coefficients_at(spec, t);
    let angles = spec.angles();
    let enlarge = angles.cosh_2total;
    let width = (c.f1 * c.b).norm_sqr();
    let alpha = spec.alpha().as_complex();
    let drift = (alpha / c.a + (alpha / c.a).conj()).re;

    let centred = x / len - angles.detector_gain.sqrt() * drift / SQRT_2;
    let norm = 1.0 / (len * PI.sqrt() * width.sqrt() * enlarge.sqrt());
    norm * (-centred * centred / (width * enlarge)).exp()
}

/// Momentum probability density (momentum⁻¹), the Fourier diagonal of `ρ`.
pub fn prob_p(spec: &StateSpec, p: f64, t: f64) -> f64 {
    let osc = spec.osc();
    let scale = osc.momentum_scale();
    let c = coefficients_at(spec, t);
    let angles = spec.angles();
    let enlarge = angles.cosh_2total;
    let width = (c.f1 * c.b).norm_sqr();
    let half_skew = (c.g1 - c.g1.conj()) / 2.0;
    // half_skew is imaginary, so the bracket is real and ≥ 1
    let spread = (1.0 - width * width * half_skew * half_skew).re;

    let alpha = spec.alpha().as_complex();
    let i = Complex64::i();
    let shift = i * (angles.detector_gain / 2.0).sqrt() * (alpha / c.a - (alpha / c.a).conj());
    let centred = Complex64::from(p / scale) + shift;
    let exponent = -(width / (spread * enlarge)) * centred * centred;

    let norm = (width / spread).sqrt() / (scale * PI.sqrt() * enlarge.sqrt());
    norm * exponent.re.exp()
}
