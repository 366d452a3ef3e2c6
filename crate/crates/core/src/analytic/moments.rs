use std::f64::consts::{E, PI, SQRT_2};

use crate::model::{squeeze_spread, StateSpec};

/// First and second moments of position and momentum at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XPMoments {
    pub mean_x: f64,
    pub var_x: f64,
    pub mean_p: f64,
    pub var_p: f64,
    pub t: f64,
}

impl XPMoments {
    pub fn std_x(&self) -> f64 {
        self.var_x.sqrt()
    }

    pub fn std_p(&self) -> f64 {
        self.var_p.sqrt()
    }

    pub fn mean(&self, which: Quadrature) -> f64 {
        match which {
            Quadrature::Position => self.mean_x,
            Quadrature::Momentum => self.mean_p,
        }
    }

    pub fn variance(&self, which: Quadrature) -> f64 {
        match which {
            Quadrature::Position => self.var_x,
            Quadrature::Momentum => self.var_p,
        }
    }
}

/// Which canonical variable a moment or generating function refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    Position,
    Momentum,
}

/// `sinh² 2r · sin²(2ωt − φ)`; the squeeze excess over a minimum-uncertainty product.
fn squeeze_excess(spec: &StateSpec, t: f64) -> f64 {
    let z = spec.squeeze();
    let s = (2.0 * z.r()).sinh() * (2.0 * spec.osc().omega() * t - z.phi()).sin();
    s * s
}

pub fn xp_moments(spec: &StateSpec, t: f64) -> XPMoments {
    let osc = spec.osc();
    let angles = spec.angles();
    let z = spec.squeeze();
    let alpha = spec.alpha();
    let (len, mom) = (osc.length_scale(), osc.momentum_scale());
    let phase = osc.omega() * t - alpha.phase();
    let amplitude = SQRT_2 * angles.detector_gain.sqrt() * alpha.modulus();
    let (wide, narrow) = squeeze_spread(2.0 * z.r(), 2.0 * osc.omega() * t - z.phi());

    XPMoments {
        mean_x: len * amplitude * phase.cos(),
        var_x: 0.5 * len * len * wide * angles.cosh_2total,
        mean_p: -mom * amplitude * phase.sin(),
        var_p: 0.5 * mom * mom * narrow * angles.cosh_2total,
        t,
    }
}

/// `Δx·Δp`, bounded below by `(ħ/2) cosh 2Θ`.
pub fn uncertainty_product(spec: &StateSpec, t: f64) -> f64 {
    // cosh² 2r − sinh² 2r cos² = 1 + sinh² 2r sin², which avoids cancellation
    0.5 * spec.osc().hbar() * spec.angles().cosh_2total * (1.0 + squeeze_excess(spec, t)).sqrt()
}

/// Sum of the Shannon entropies of the position and momentum densities.
pub fn entropy_sum(spec: &StateSpec, t: f64) -> f64 {
    (PI * E * spec.osc().hbar()).ln()
        + spec.angles().cosh_2total.ln()
        + 0.5 * squeeze_excess(spec, t).ln_1p()
}

/// Variances of the rotated quadratures `Y₁`, `Y₂` at rotation angle `varphi`.
pub fn quadrature_variances(spec: &StateSpec, t: f64, varphi: f64) -> (f64, f64) {
    let z = spec.squeeze();
    let (y1, y2) = squeeze_spread(2.0 * z.r(), 2.0 * spec.osc().omega() * t + 2.0 * varphi - z.phi());
    let k = 0.25 * spec.angles().cosh_2total;
    (k * y1, k * y2)
}

/// Moment generating function `E[e^{λu}]` of the Gaussian marginal of `which`.
pub fn mgf(spec: &StateSpec, which: Quadrature, lambda: f64, t: f64) -> f64 {
    let m = xp_moments(spec, t);
    (lambda * m.mean(which) + 0.5 * lambda * lambda * m.variance(which)).exp()
}

/// Raw moment `E[uⁿ]`, the n-th derivative of [`mgf`] at zero.
pub fn nth_moment(spec: &StateSpec, which: Quadrature, n: u32, t: f64) -> f64 {
    let m = xp_moments(spec, t);
    gaussian_raw_moment(m.mean(which), m.variance(which), n)
}

/// `m_k = μ m_{k−1} + (k−1) σ² m_{k−2}`, the pairing recursion for Gaussian moments.
pub(crate) fn gaussian_raw_moment(mean: f64, var: f64, n: u32) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 1..=n {
        let next = mean * cur + f64::from(k - 1) * var * prev;
        prev = cur;
        cur = next;
    }
    cur
}
