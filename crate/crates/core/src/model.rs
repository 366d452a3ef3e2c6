//! Parameter types for the thermalized displaced squeezed thermal state.
//!
//! Everything here is an immutable value. [`StateSpec`] is the unit of work
//! consumed by [`crate::analytic`] and [`crate::oracle`]; constructing one
//! validates every component and resolves all temperatures into Bogoliubov
//! angles once.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Physical constants of the oscillator `H = p²/2m + mω²x²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    mass: f64,
    omega: f64,
    hbar: f64,
    kb: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, hbar: f64, kb: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar), ("kb", kb)] {
            ensure_finite(name, v)?;
            if v <= 0.0 {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { mass, omega, hbar, kb })
    }

    /// `m = ω = ħ = k_b = 1`.
    pub fn natural() -> Self {
        Self { mass: 1.0, omega: 1.0, hbar: 1.0, kb: 1.0 }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn kb(&self) -> f64 {
        self.kb
    }

    /// Ground-state length `√(ħ/mω)`.
    pub fn length_scale(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }

    /// Ground-state momentum `√(mħω)`.
    pub fn momentum_scale(&self) -> f64 {
        (self.mass * self.hbar * self.omega).sqrt()
    }

    /// Classical period `2π/ω`.
    pub fn period(&self) -> f64 {
        TAU / self.omega
    }
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self::natural()
    }
}

/// Coherent amplitude `α = α₁ + iα₂ = |α|e^{iγ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement {
    re: f64,
    im: f64,
}

impl Displacement {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        ensure_finite("alpha.re", re)?;
        ensure_finite("alpha.im", im)?;
        Ok(Self { re, im })
    }

    pub fn from_polar(modulus: f64, phase: f64) -> Result<Self> {
        ensure_finite("alpha.mod", modulus)?;
        ensure_finite("alpha.arg", phase)?;
        if modulus < 0.0 {
            return Err(Error::Domain(format!("alpha.mod must be non-negative, got {modulus}")));
        }
        Self::new(modulus * phase.cos(), modulus * phase.sin())
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Phase `γ = atan2(α₂, α₁)`.
    pub fn phase(&self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re, im: -self.im }
    }
}

impl From<Displacement> for Complex64 {
    fn from(d: Displacement) -> Self {
        d.as_complex()
    }
}

/// Squeeze parameter `z = r e^{iφ}` with `r ≥ 0` and `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeeze {
    r: f64,
    phi: f64,
}

impl Squeeze {
    pub const NONE: Self = Self { r: 0.0, phi: 0.0 };

    /// The phase is reduced modulo 2π.
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        ensure_finite("squeeze.r", r)?;
        ensure_finite("squeeze.phi", phi)?;
        if r < 0.0 {
            return Err(Error::Domain(format!("squeeze.r must be non-negative, got {r}")));
        }
        let phi = phi.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2π for tiny negative inputs
        let phi = if phi >= TAU { 0.0 } else { phi };
        Ok(Self { r, phi })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.phi)
    }

    /// `-z`, the inverse squeeze.
    pub fn inverse(&self) -> Self {
        Self::new(self.r, self.phi + PI).expect("valid squeeze stays valid")
    }
}

/// A noise temperature, either absolute or reduced (`τ = k_bT/ħω`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Absolute(f64),
    Reduced(f64),
}

impl Temperature {
    /// Reduced temperature whose thermal angle is `theta`.
    pub fn from_angle(theta: f64) -> Result<Self> {
        ensure_finite("theta", theta)?;
        if theta < 0.0 {
            return Err(Error::Domain(format!("thermal angle must be non-negative, got {theta}")));
        }
        if theta == 0.0 {
            return Ok(Self::Reduced(0.0));
        }
        // tanh θ = e^{-1/(2τ)}
        Ok(Self::Reduced(-0.5 / theta.tanh().ln()))
    }

    pub fn absolute(&self, osc: &OscillatorParams) -> f64 {
        match *self {
            Self::Absolute(t) => t,
            Self::Reduced(tau) => tau * osc.hbar() * osc.omega() / osc.kb(),
        }
    }

    pub fn angle(&self, osc: &OscillatorParams) -> Result<f64> {
        match *self {
            Self::Absolute(t) => thermal_angle(t, osc),
            Self::Reduced(tau) => reduced_thermal_angle(tau),
        }
    }
}

/// Input (before the displacement-squeeze device) and detector (after it)
/// noise temperatures. An empty list means zero temperature.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ThermalSpec {
    pub input: Vec<Temperature>,
    pub detector: Vec<Temperature>,
}

impl ThermalSpec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(input: Temperature, detector: Temperature) -> Self {
        Self { input: vec![input], detector: vec![detector] }
    }

    pub fn from_angles(input: f64, detector: f64) -> Result<Self> {
        Ok(Self::single(Temperature::from_angle(input)?, Temperature::from_angle(detector)?))
    }
}

/// Bogoliubov angles of the two noise stages and the derived factors every
/// observable depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalAngles {
    /// θ₁, summed over input noises.
    pub input: f64,
    /// θ₂, summed over detector noises.
    pub detector: f64,
    /// Θ = θ₁ + θ₂.
    pub total: f64,
    /// cosh 2Θ, the joint variance enlargement.
    pub cosh_2total: f64,
    /// e^{2θ₂}; equals coth(β₂ħω/4) for a single detector temperature.
    pub detector_gain: f64,
}

impl ThermalAngles {
    pub const ZERO: Self = Self {
        input: 0.0,
        detector: 0.0,
        total: 0.0,
        cosh_2total: 1.0,
        detector_gain: 1.0,
    };

    pub fn from_angles(input: f64, detector: f64) -> Result<Self> {
        for (name, v) in [("input angle", input), ("detector angle", detector)] {
            ensure_finite(name, v)?;
            if v < 0.0 {
                return Err(Error::Domain(format!("{name} must be non-negative, got {v}")));
            }
        }
        let total = input + detector;
        Ok(Self {
            input,
            detector,
            total,
            cosh_2total: (2.0 * total).cosh(),
            detector_gain: (2.0 * detector).exp(),
        })
    }

    /// e^{-θ₁} = cosh θ₁ − sinh θ₁.
    pub fn input_attenuation(&self) -> f64 {
        (-self.input).exp()
    }
}

/// `θ = artanh(e^{-ħω/(2k_bT)})`, exactly zero at `T = 0`.
pub fn thermal_angle(temperature: f64, osc: &OscillatorParams) -> Result<f64> {
    ensure_finite("temperature", temperature)?;
    if temperature < 0.0 {
        return Err(Error::Domain(format!("temperature must be non-negative, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(angle_from_beta_hw(osc.hbar() * osc.omega() / (osc.kb() * temperature)))
}

fn reduced_thermal_angle(tau: f64) -> Result<f64> {
    ensure_finite("tau", tau)?;
    if tau < 0.0 {
        return Err(Error::Domain(format!("reduced temperature must be non-negative, got {tau}")));
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    Ok(angle_from_beta_hw(1.0 / tau))
}

/// artanh(e^{-x/2}) written so that neither tail loses precision.
fn angle_from_beta_hw(beta_hw: f64) -> f64 {
    let half = 0.5 * beta_hw;
    let q = (-half).exp();
    if q == 0.0 {
        return 0.0;
    }
    0.5 * (q.ln_1p() - (-(-half).exp_m1()).ln())
}

pub fn thermal_angles(spec: &ThermalSpec, osc: &OscillatorParams) -> Result<ThermalAngles> {
    let sum = |temps: &[Temperature]| -> Result<f64> {
        temps.iter().try_fold(0.0, |acc, t| Ok(acc + t.angle(osc)?))
    };
    ThermalAngles::from_angles(sum(&spec.input)?, sum(&spec.detector)?)
}

/// Complete description of a state at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    osc: OscillatorParams,
    alpha: Displacement,
    squeeze: Squeeze,
    thermal: ThermalSpec,
    angles: ThermalAngles,
}

impl StateSpec {
    pub fn new(
        osc: OscillatorParams,
        alpha: Displacement,
        squeeze: Squeeze,
        thermal: ThermalSpec,
    ) -> Result<Self> {
        let angles = thermal_angles(&thermal, &osc)?;
        Ok(Self { osc, alpha, squeeze, thermal, angles })
    }

    /// Builds a state directly from the two Bogoliubov angles.
    pub fn from_angles(
        osc: OscillatorParams,
        alpha: Displacement,
        squeeze: Squeeze,
        input_angle: f64,
        detector_angle: f64,
    ) -> Result<Self> {
        let angles = ThermalAngles::from_angles(input_angle, detector_angle)?;
        let thermal = ThermalSpec::from_angles(input_angle, detector_angle)?;
        Ok(Self { osc, alpha, squeeze, thermal, angles })
    }

    /// Two-mode vacuum.
    pub fn vacuum(osc: OscillatorParams) -> Self {
        Self {
            osc,
            alpha: Displacement::ZERO,
            squeeze: Squeeze::NONE,
            thermal: ThermalSpec::zero(),
            angles: ThermalAngles::ZERO,
        }
    }

    pub fn osc(&self) -> &OscillatorParams {
        &self.osc
    }

    pub fn alpha(&self) -> Displacement {
        self.alpha
    }

    pub fn squeeze(&self) -> Squeeze {
        self.squeeze
    }

    pub fn thermal(&self) -> &ThermalSpec {
        &self.thermal
    }

    pub fn angles(&self) -> &ThermalAngles {
        &self.angles
    }

    pub fn with_alpha(&self, alpha: Displacement) -> Self {
        Self { alpha, ..self.clone() }
    }

    pub fn with_squeeze(&self, squeeze: Squeeze) -> Self {
        Self { squeeze, ..self.clone() }
    }

    pub fn with_thermal(&self, thermal: ThermalSpec) -> Result<Self> {
        Self::new(self.osc, self.alpha, self.squeeze, thermal)
    }

    pub fn with_angles(&self, input_angle: f64, detector_angle: f64) -> Result<Self> {
        Self::from_angles(self.osc, self.alpha, self.squeeze, input_angle, detector_angle)
    }
}

/// Time-dependent complex coefficients of the closed-form wavefunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    /// cosh r + sinh r e^{iφ}
    pub f1: Complex64,
    /// (1 − i sinh 2r sin φ) / (cosh 2r + sinh 2r cos φ)
    pub f2: Complex64,
    /// cos ωt + i F₂ sin ωt
    pub b: Complex64,
    /// (F₂ cos ωt + i sin ωt) / B
    pub g1: Complex64,
    /// (F₂ α₁ + i α₂) / B
    pub g2: Complex64,
    /// Normalising phase term of the wavefunction.
    pub q: Complex64,
    /// e^{iωt}
    pub a: Complex64,
    /// Θ = θ₁ + θ₂
    pub total_angle: f64,
}

pub fn coefficients(spec: &StateSpec, t: f64) -> Result<Coefficients> {
    ensure_finite("t", t)?;
    Ok(coefficients_at(spec, t))
}

pub(crate) fn coefficients_at(spec: &StateSpec, t: f64) -> Coefficients {
    let (r, phi) = (spec.squeeze.r, spec.squeeze.phi);
    let (a1, a2) = (spec.alpha.re, spec.alpha.im);
    let i = Complex64::i();
    let (s, c) = (spec.osc.omega * t).sin_cos();

    let f1 = Complex64::new(squeeze_spread(r, phi).0, r.sinh() * phi.sin());
    let f2 = Complex64::new(1.0, -(2.0 * r).sinh() * phi.sin()) / squeeze_spread(2.0 * r, phi).0;
    let b = c + i * f2 * s;
    let g1 = (f2 * c + i * s) / b;
    let g2 = (f2 * a1 + i * a2) / b;
    let atten = spec.angles.input_attenuation();
    let q = (f2 * c * a1 * a1 + 2.0 * f2 * s * a1 * a2 + i * s * a2 * a2) * (atten * atten);

    Coefficients {
        f1,
        f2,
        b,
        g1,
        g2,
        q,
        a: Complex64::new(c, s),
        total_angle: spec.angles.total,
    }
}

/// `(cosh u + sinh u cos a, cosh u − sinh u cos a)` written as
/// `e^{−u} + 2 sinh u cos²(a/2)` and its sine twin, which stay accurate when
/// the two terms nearly cancel.
pub(crate) fn squeeze_spread(u: f64, angle: f64) -> (f64, f64) {
    let (s, c) = (0.5 * angle).sin_cos();
    let (floor, lift) = ((-u).exp(), 2.0 * u.sinh());
    (floor + lift * c * c, floor + lift * s * s)
}

/// Displacement `α'` with `S(z)D(α) = D(α')S(z)`.
pub fn braid_displacement(alpha: Displacement, z: Squeeze) -> Displacement {
    let a = alpha.as_complex();
    let out = a * z.r.cosh() + a.conj() * Complex64::from_polar(z.r.sinh(), z.phi);
    Displacement { re: out.re, im: out.im }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> OscillatorParams {
        OscillatorParams::natural()
    }

    #[test]
    fn rejects_bad_oscillator() {
        assert!(OscillatorParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn polar_parts_round_trip() {
        let a = Displacement::new(-0.4, 1.3).unwrap();
        assert_relative_eq!(a.modulus() * a.phase().cos(), a.re(), epsilon = 1e-15);
        assert_relative_eq!(a.modulus() * a.phase().sin(), a.im(), epsilon = 1e-15);
        assert!(Displacement::from_polar(-1.0, 0.0).is_err());
    }

    #[test]
    fn squeeze_phase_is_reduced() {
        let z = Squeeze::new(0.3, -0.5).unwrap();
        assert_relative_eq!(z.phi(), TAU - 0.5, epsilon = 1e-15);
        assert!(Squeeze::new(-0.1, 0.0).is_err());
        let w = z.as_complex();
        assert_relative_eq!(w.re, 0.3 * (-0.5f64).cos(), epsilon = 1e-15);
    }

    #[test]
    fn zero_temperature_is_exactly_zero_angle() {
        assert_eq!(thermal_angle(0.0, &unit()).unwrap(), 0.0);
        assert_eq!(Temperature::Reduced(0.0).angle(&unit()).unwrap(), 0.0);
        // deep quantum regime underflows cleanly
        assert_eq!(thermal_angle(1e-300, &unit()).unwrap(), 0.0);
    }

    #[test]
    fn negative_or_nonfinite_temperature_is_domain_error() {
        assert!(matches!(thermal_angle(-1.0, &unit()), Err(Error::Domain(_))));
        assert!(matches!(thermal_angle(f64::INFINITY, &unit()), Err(Error::Domain(_))));
        assert!(matches!(thermal_angle(f64::NAN, &unit()), Err(Error::Domain(_))));
    }

    #[test]
    fn half_occupation_angle() {
        // ħω/k_bT = ln 4 gives e^{-βħω/2} = 1/2
        let t = 1.0 / 4f64.ln();
        assert_relative_eq!(thermal_angle(t, &unit()).unwrap(), 0.549_306_144_334_054_8, epsilon = 1e-15);
    }

    #[test]
    fn cosh_two_theta_is_coth_half_beta() {
        // coth(y/2) = (e^y + 1)/(e^y − 1) = 3 at y = ln 2
        let beta_hw = 2f64.ln();
        let theta = thermal_angle(1.0 / beta_hw, &unit()).unwrap();
        let coth = (beta_hw.exp() + 1.0) / (beta_hw.exp() - 1.0);
        assert_relative_eq!(coth, 3.0, epsilon = 1e-15);
        assert_relative_eq!((2.0 * theta).cosh(), coth, max_relative = 1e-14);
    }

    #[test]
    fn absolute_and_reduced_forms_agree() {
        let osc = OscillatorParams::new(2.0, 3.0, 0.5, 0.25).unwrap();
        let t = 7.0;
        let tau = osc.kb() * t / (osc.hbar() * osc.omega());
        let a = Temperature::Absolute(t).angle(&osc).unwrap();
        let b = Temperature::Reduced(tau).angle(&osc).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-14);
        assert_relative_eq!(Temperature::Reduced(tau).absolute(&osc), t, max_relative = 1e-15);
    }

    #[test]
    fn from_angle_inverts_angle() {
        for theta in [0.01, 0.3, 0.8, 1.7] {
            let back = Temperature::from_angle(theta).unwrap().angle(&unit()).unwrap();
            assert_relative_eq!(back, theta, max_relative = 1e-12);
        }
    }

    #[test]
    fn angles_sum_over_noise_lists() {
        let spec = ThermalSpec {
            input: vec![Temperature::Reduced(1.0), Temperature::Reduced(0.5)],
            detector: vec![],
        };
        let ang = thermal_angles(&spec, &unit()).unwrap();
        let a = Temperature::Reduced(1.0).angle(&unit()).unwrap();
        let b = Temperature::Reduced(0.5).angle(&unit()).unwrap();
        assert_relative_eq!(ang.input, a + b, epsilon = 1e-15);
        assert_eq!(ang.detector, 0.0);
        assert_eq!(ang.detector_gain, 1.0);
        // hyperbolic addition evaluated independently
        let addition = (2.0 * a).cosh() * (2.0 * b).cosh() + (2.0 * a).sinh() * (2.0 * b).sinh();
        assert_relative_eq!(ang.cosh_2total, addition, max_relative = 1e-13);
    }

    #[test]
    fn empty_lists_are_zero_temperature() {
        let ang = thermal_angles(&ThermalSpec::zero(), &unit()).unwrap();
        assert_eq!(ang, ThermalAngles::ZERO);
    }

    #[test]
    fn unsqueezed_coefficients_degenerate() {
        let spec = StateSpec::new(
            unit(),
            Displacement::new(0.4, -0.2).unwrap(),
            Squeeze::NONE,
            ThermalSpec::zero(),
        )
        .unwrap();
        let t = 0.37;
        let c = coefficients(&spec, t).unwrap();
        assert_relative_eq!(c.f1.re, 1.0);
        assert_relative_eq!(c.f2.re, 1.0);
        assert_eq!(c.f2.im, 0.0);
        assert_relative_eq!((c.b - Complex64::from_polar(1.0, t)).norm(), 0.0, epsilon = 1e-16);
        assert_relative_eq!((c.g1 - 1.0).norm(), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn coefficients_at_time_zero() {
        let spec = StateSpec::from_angles(
            unit(),
            Displacement::new(0.5, 0.3).unwrap(),
            Squeeze::new(0.7, PI / 3.0).unwrap(),
            0.3,
            0.2,
        )
        .unwrap();
        let c = coefficients(&spec, 0.0).unwrap();
        assert_eq!(c.b, Complex64::new(1.0, 0.0));
        assert_eq!(c.a, Complex64::new(1.0, 0.0));
        assert_eq!(c.g1, c.f2);
        assert_eq!(c.g2, c.f2 * 0.5 + Complex64::new(0.0, 0.3));
    }

    #[test]
    fn f2_matches_ratio_form() {
        let (r, phi) = (0.7, PI / 3.0);
        let spec = StateSpec::vacuum(unit()).with_squeeze(Squeeze::new(r, phi).unwrap());
        let c = coefficients(&spec, 0.9).unwrap();
        let e = Complex64::from_polar(r.sinh(), phi);
        let ratio = (r.cosh() - e) / (r.cosh() + e);
        assert_relative_eq!((c.f2 - ratio).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn nonfinite_time_rejected() {
        assert!(coefficients(&StateSpec::vacuum(unit()), f64::NAN).is_err());
    }

    #[test]
    fn braid_identity_squeeze() {
        let a = Displacement::new(0.5, 0.3).unwrap();
        assert_eq!(braid_displacement(a, Squeeze::NONE), a);
    }

    #[test]
    fn braid_real_alpha_zero_phase() {
        let a = Displacement::new(0.8, 0.0).unwrap();
        let b = braid_displacement(a, Squeeze::new(0.6, 0.0).unwrap());
        assert_relative_eq!(b.re(), 0.8 * 0.6f64.exp(), max_relative = 1e-15);
        assert_relative_eq!(b.im(), 0.0, epsilon = 1e-16);
    }
}
