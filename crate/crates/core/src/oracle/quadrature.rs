use crate::error::{Error, Result};

/// Composite Simpson integral of `f` over `center ± halfwidth_sigmas·sigma`.
///
/// `points` must be odd and at least 101; the window must span at least 8σ
/// on each side.
pub fn quad_integrate<F>(f: F, center: f64, sigma: f64, halfwidth_sigmas: f64, points: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if points < 101 || points.is_multiple_of(2) {
        return Err(Error::Contract(format!("quadrature needs an odd point count ≥ 101, got {points}")));
    }
    if !(halfwidth_sigmas >= 8.0) || !halfwidth_sigmas.is_finite() {
        return Err(Error::Contract(format!(
            "quadrature half-width must be ≥ 8σ, got {halfwidth_sigmas}"
        )));
    }
    if !(sigma > 0.0) || !sigma.is_finite() || !center.is_finite() {
        return Err(Error::Domain(format!("invalid quadrature window: center {center}, sigma {sigma}")));
    }

    let lo = center - halfwidth_sigmas * sigma;
    let h = 2.0 * halfwidth_sigmas * sigma / (points - 1) as f64;
    let mut acc = 0.0;
    for k in 0..points {
        let x = lo + h * k as f64;
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::Integration { at: x });
        }
        let w = if k == 0 || k == points - 1 {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * v;
    }
    Ok(acc * h / 3.0)
}

/// Uniform grid of `points` nodes over `center ± halfwidth_sigmas·sigma`.
pub fn grid(center: f64, sigma: f64, halfwidth_sigmas: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![center];
    }
    let lo = center - halfwidth_sigmas * sigma;
    let h = 2.0 * halfwidth_sigmas * sigma / (points - 1) as f64;
    (0..points).map(|k| lo + h * k as f64).collect()
}
