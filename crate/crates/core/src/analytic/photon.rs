use std::fmt;

use crate::model::StateSpec;

/// Normalised second-order correlation `g²(0)`.
///
/// `Undefined` marks the exact vacuum, where `⟨n⟩ = 0` leaves the ratio
/// without a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coherence {
    Defined(f64),
    Undefined,
}

impl Coherence {
    /// `(⟨n²⟩ − ⟨n⟩)/⟨n⟩²` from the factorial moment and the mean.
    pub fn from_moments(factorial_second: f64, mean: f64) -> Self {
        if mean == 0.0 {
            Self::Undefined
        } else {
            Self::Defined(factorial_second / (mean * mean))
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            Self::Defined(v) => Some(v),
            Self::Undefined => None,
        }
    }
}

impl fmt::Display for Coherence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Defined(v) => write!(f, "{v}"),
            Self::Undefined => f.write_str("undefined"),
        }
    }
}

/// Photon-number statistics. These are time independent, so there is no time field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStats {
    pub mean_n: f64,
    pub var_n: f64,
    pub g2: Coherence,
}

pub fn photon_stats(spec: &StateSpec) -> PhotonStats {
    let angles = spec.angles();
    let z = spec.squeeze();
    let alpha = spec.alpha();
    let enlarge = angles.cosh_2total;
    let gain = angles.detector_gain;
    let a2 = alpha.modulus().powi(2);
    let (ch, sh) = ((2.0 * z.r()).cosh(), (2.0 * z.r()).sinh());
    let interference = (z.phi() - 2.0 * alpha.phase()).cos();

    let mean_n = 0.5 * enlarge * ch - 0.5 + gain * a2;
    let var_n = -0.25
        + 0.25 * enlarge * enlarge * (4.0 * z.r()).cosh()
        + enlarge * gain * a2 * (ch + sh * interference);
    let g2 = if mean_n == 0.0 {
        Coherence::Undefined
    } else {
        let excess = 0.25 * enlarge * enlarge * sh * sh - gain * gain * a2 * a2
            + enlarge * gain * a2 * sh * interference;
        Coherence::Defined(2.0 + excess / (mean_n * mean_n))
    };
    PhotonStats { mean_n, var_n, g2 }
}
