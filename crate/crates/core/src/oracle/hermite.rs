use std::f64::consts::PI;

/// Normalised Hermite functions `φ_0(ξ) … φ_{n_max}(ξ)` of the dimensionless
/// coordinate `ξ = x√(mω/ħ)`, via the upward three-term recurrence
/// `φ_{n+1} = √(2/(n+1)) ξ φ_n − √(n/(n+1)) φ_{n−1}`.
pub fn hermite_functions(n_max: usize, xi: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(PI.powf(-0.25) * (-0.5 * xi * xi).exp());
    if n_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * xi * out[0]);
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * xi * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}
