//! Truncated Fock-space simulation of the thermofield circuit.
//!
//! Each gate is the exponential of a quadratic or linear generator in the
//! ladder operators, applied to the state vector by a scaled Taylor series;
//! no dense operator is ever formed. The circuit runs in a register padded
//! beyond the requested cutoff, and the weight that ends up above the cutoff
//! is reported as the norm deficit of the truncated state.

use num_complex::Complex64;

use super::hermite::hermite_functions;
use crate::analytic::{Coherence, PhotonStats};
use crate::error::{Error, Result};
use crate::model::{braid_displacement, Displacement, OscillatorParams, Squeeze, StateSpec};

/// Smallest cutoff accepted by the oracle.
pub const MIN_CUTOFF: usize = 8;
/// Default number of levels kept per mode.
pub const DEFAULT_CUTOFF: usize = 60;
/// Deficit above which a state is rejected outright.
pub const MAX_DEFICIT: f64 = 1e-6;
/// Deficit at or below which a state counts as converged.
pub const CONVERGED_DEFICIT: f64 = 1e-10;

const MAX_TERMS: usize = 200;
/// Largest generator norm per Taylor slice; partial sums then never exceed
/// e³ times the result, which costs about one digit.
const STEP_NORM: f64 = 3.0;

/// Extra levels simulated above the cutoff so that leakage can be measured.
fn padding(cutoff: usize) -> usize {
    (cutoff / 2).max(16)
}

/// Two-mode state truncated to levels `0..=cutoff` on each mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    cutoff: usize,
    amplitudes: Vec<Complex64>,
    norm_deficit: f64,
}

impl FockState {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Row-major amplitudes, physical level major: index `j·(cutoff+1) + k`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of `|j⟩|k̃⟩`.
    pub fn amplitude(&self, j: usize, k: usize) -> Complex64 {
        self.amplitudes[j * (self.cutoff + 1) + k]
    }

    /// `1 − Σ|amplitude|²`.
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    pub fn is_converged(&self) -> bool {
        self.norm_deficit <= CONVERGED_DEFICIT
    }
}

#[derive(Debug, Clone, Copy)]
enum Generator {
    /// `−θ(aã − a†ã†)`
    Thermal(f64),
    /// `−½(z* b² − z b†²)` on `mode`
    Squeeze { mode: usize, z: Complex64 },
    /// `α b† − α* b` on `mode`
    Displace { mode: usize, alpha: Complex64 },
}

/// Dense state vector of one or two truncated modes.
#[derive(Debug, Clone)]
struct Register {
    dims: [usize; 2],
    data: Vec<Complex64>,
    roots: Vec<f64>,
}

impl Register {
    fn vacuum(dims: [usize; 2]) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dims[0] * dims[1]];
        data[0] = Complex64::new(1.0, 0.0);
        let top = dims[0].max(dims[1]) + 2;
        let roots = (0..top).map(|n| (n as f64).sqrt()).collect();
        Self { dims, data, roots }
    }

    fn norm_bound(&self, gen: &Generator) -> f64 {
        let d = self.dims[0].max(self.dims[1]) as f64;
        match *gen {
            Generator::Thermal(theta) => 2.0 * theta.abs() * d,
            Generator::Squeeze { z, .. } => z.norm() * d,
            Generator::Displace { alpha, .. } => 2.0 * alpha.norm() * d.sqrt(),
        }
    }

    /// `out = G·src`.
    fn apply(&self, gen: &Generator, src: &[Complex64], out: &mut [Complex64]) {
        let [d0, d1] = self.dims;
        let rt = &self.roots;
        match *gen {
            Generator::Thermal(theta) => {
                for j in 0..d0 {
                    for k in 0..d1 {
                        let mut acc = Complex64::new(0.0, 0.0);
                        if j + 1 < d0 && k + 1 < d1 {
                            acc -= src[(j + 1) * d1 + k + 1] * (theta * rt[j + 1] * rt[k + 1]);
                        }
                        if j > 0 && k > 0 {
                            acc += src[(j - 1) * d1 + k - 1] * (theta * rt[j] * rt[k]);
                        }
                        out[j * d1 + k] = acc;
                    }
                }
            }
            Generator::Squeeze { mode, z } => {
                // (G v)_n = −½z*√((n+1)(n+2)) v_{n+2} + ½z√(n(n−1)) v_{n−2}
                let (lower, raise) = (-0.5 * z.conj(), 0.5 * z);
                self.ladder(mode, src, out, |n, dim, at| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    if n + 2 < dim {
                        acc += lower * at(n + 2) * (rt[n + 1] * rt[n + 2]);
                    }
                    if n >= 2 {
                        acc += raise * at(n - 2) * (rt[n] * rt[n - 1]);
                    }
                    acc
                });
            }
            Generator::Displace { mode, alpha } => {
                let lower = -alpha.conj();
                self.ladder(mode, src, out, |n, dim, at| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    if n > 0 {
                        acc += alpha * at(n - 1) * rt[n];
                    }
                    if n + 1 < dim {
                        acc += lower * at(n + 1) * rt[n + 1];
                    }
                    acc
                });
            }
        }
    }

    /// Applies a single-mode operator given as a row rule `(n, dim, v) ↦ (Gv)_n`.
    fn ladder<F>(&self, mode: usize, src: &[Complex64], out: &mut [Complex64], row: F)
    where
        F: Fn(usize, usize, &dyn Fn(usize) -> Complex64) -> Complex64,
    {
        let [d0, d1] = self.dims;
        if mode == 0 {
            for k in 0..d1 {
                let at = |m: usize| src[m * d1 + k];
                for j in 0..d0 {
                    out[j * d1 + k] = row(j, d0, &at);
                }
            }
        } else {
            for j in 0..d0 {
                let line = &src[j * d1..(j + 1) * d1];
                let at = |m: usize| line[m];
                for k in 0..d1 {
                    out[j * d1 + k] = row(k, d1, &at);
                }
            }
        }
    }

    /// `v ← exp(G)·v` by a Taylor series on `steps` slices with `‖G‖/steps ≤ STEP_NORM`.
    fn exponentiate(&mut self, gen: Generator) -> Result<()> {
        let bound = self.norm_bound(&gen);
        if bound == 0.0 {
            return Ok(());
        }
        let steps = (bound / STEP_NORM).ceil().max(1.0) as usize;
        let scale = 1.0 / steps as f64;
        let mut term = vec![Complex64::new(0.0, 0.0); self.data.len()];
        let mut next = term.clone();
        for _ in 0..steps {
            term.copy_from_slice(&self.data);
            let mut converged = false;
            for order in 1..=MAX_TERMS {
                self.apply(&gen, &term, &mut next);
                let factor = scale / order as f64;
                let mut term_norm = 0.0;
                for (t, n) in term.iter_mut().zip(&next) {
                    *t = n * factor;
                    term_norm += t.norm_sqr();
                }
                for (v, t) in self.data.iter_mut().zip(&term) {
                    *v += t;
                }
                if term_norm <= 1e-36 {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Series { terms: MAX_TERMS });
            }
        }
        Ok(())
    }

    /// `exp{−i(H − H̃)t/ħ}`: level `(j, k)` picks up `e^{−iωt(j−k)}`.
    fn evolve(&mut self, phase: f64) {
        let d1 = self.dims[1];
        for (i, v) in self.data.iter_mut().enumerate() {
            let (j, k) = (i / d1, i % d1);
            *v *= Complex64::from_polar(1.0, -phase * (j as f64 - k as f64));
        }
    }

    /// Keeps levels `0..=cutoff` per mode; returns the kept amplitudes and the lost weight.
    fn truncate(&self, cutoff: usize) -> (Vec<Complex64>, f64) {
        let [d0, d1] = self.dims;
        let keep1 = if d1 == 1 { 1 } else { cutoff + 1 };
        let mut kept = Vec::with_capacity((cutoff + 1) * keep1);
        for j in 0..=cutoff.min(d0 - 1) {
            for k in 0..keep1 {
                kept.push(self.data[j * d1 + k]);
            }
        }
        let total: f64 = self.data.iter().map(|v| v.norm_sqr()).sum();
        let inside: f64 = kept.iter().map(|v| v.norm_sqr()).sum();
        (kept, (total - inside).max(0.0) + (1.0 - total).abs())
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < MIN_CUTOFF {
        return Err(Error::Contract(format!("Fock cutoff must be at least {MIN_CUTOFF}, got {cutoff}")));
    }
    Ok(())
}

/// Runs the thermofield circuit on the two-mode vacuum and truncates the
/// result to `cutoff` levels per mode.
pub fn fock_tfd_state(spec: &StateSpec, t: f64, cutoff: usize) -> Result<FockState> {
    let mut states = fock_tfd_trajectory(spec, &[t], cutoff)?;
    Ok(states.remove(0))
}

/// [`fock_tfd_state`] at several times, sharing the time-independent gates.
pub fn fock_tfd_trajectory(spec: &StateSpec, times: &[f64], cutoff: usize) -> Result<Vec<FockState>> {
    check_cutoff(cutoff)?;
    let dim = cutoff + 1 + padding(cutoff);
    let angles = spec.angles();
    let z = spec.squeeze().as_complex();
    let alpha = spec.alpha().as_complex();

    let mut reg = Register::vacuum([dim, dim]);
    reg.exponentiate(Generator::Thermal(angles.input))?;
    reg.exponentiate(Generator::Squeeze { mode: 0, z })?;
    reg.exponentiate(Generator::Squeeze { mode: 1, z: z.conj() })?;
    reg.exponentiate(Generator::Displace { mode: 0, alpha })?;
    reg.exponentiate(Generator::Displace { mode: 1, alpha: alpha.conj() })?;
    reg.exponentiate(Generator::Thermal(angles.detector))?;

    // the evolution phase preserves each level's weight, so one check covers every time
    let (_, norm_deficit) = reg.truncate(cutoff);
    if norm_deficit > MAX_DEFICIT {
        return Err(Error::NonConvergence { cutoff, deficit: norm_deficit, limit: MAX_DEFICIT });
    }
    Ok(times
        .iter()
        .map(|&t| {
            let mut evolved = reg.clone();
            evolved.evolve(spec.osc().omega() * t);
            let (amplitudes, _) = evolved.truncate(cutoff);
            FockState { cutoff, amplitudes, norm_deficit }
        })
        .collect())
}

/// `|⟨S(z)D(α)0 | D(α')S(z)0⟩|` with `α'` from [`braid_displacement`],
/// evaluated on one truncated mode.
pub fn braid_overlap(alpha: Displacement, z: Squeeze, cutoff: usize) -> Result<f64> {
    ordering_overlap(alpha, z, braid_displacement(alpha, z), cutoff)
}

/// `|⟨S(z)D(α)0 | D(α')S(z)0⟩|` for an arbitrary candidate `α'`.
pub fn ordering_overlap(alpha: Displacement, z: Squeeze, alpha_prime: Displacement, cutoff: usize) -> Result<f64> {
    check_cutoff(cutoff)?;
    let dim = cutoff + 1 + padding(cutoff);
    let zc = z.as_complex();

    let mut lhs = Register::vacuum([dim, 1]);
    lhs.exponentiate(Generator::Displace { mode: 0, alpha: alpha.as_complex() })?;
    lhs.exponentiate(Generator::Squeeze { mode: 0, z: zc })?;

    let mut rhs = Register::vacuum([dim, 1]);
    rhs.exponentiate(Generator::Squeeze { mode: 0, z: zc })?;
    rhs.exponentiate(Generator::Displace { mode: 0, alpha: alpha_prime.as_complex() })?;

    let (l, dl) = lhs.truncate(cutoff);
    let (r, dr) = rhs.truncate(cutoff);
    let deficit = dl.max(dr);
    if deficit > MAX_DEFICIT {
        return Err(Error::NonConvergence { cutoff, deficit, limit: MAX_DEFICIT });
    }
    let overlap: Complex64 = l.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
    Ok(overlap.norm())
}

/// Physical-mode expectation values of a truncated two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockExpectations {
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
    pub mean_n: f64,
    pub mean_n2: f64,
}

impl FockExpectations {
    pub fn var_x(&self) -> f64 {
        self.mean_x2 - self.mean_x * self.mean_x
    }

    pub fn var_p(&self) -> f64 {
        self.mean_p2 - self.mean_p * self.mean_p
    }

    pub fn photon_stats(&self) -> PhotonStats {
        PhotonStats {
            mean_n: self.mean_n,
            var_n: self.mean_n2 - self.mean_n * self.mean_n,
            g2: Coherence::from_moments(self.mean_n2 - self.mean_n, self.mean_n),
        }
    }
}

/// Expectations of physical-mode operators with the tilde mode traced out.
pub fn fock_expectations(state: &FockState, osc: &OscillatorParams) -> FockExpectations {
    let d = state.cutoff + 1;
    let amp = &state.amplitudes;
    let mut lower = Complex64::new(0.0, 0.0);
    let mut lower2 = Complex64::new(0.0, 0.0);
    let (mut n1, mut n2) = (0.0, 0.0);
    for j in 0..d {
        let jf = j as f64;
        for k in 0..d {
            let v = amp[j * d + k];
            let w = v.norm_sqr();
            n1 += jf * w;
            n2 += jf * jf * w;
            if j + 1 < d {
                lower += v.conj() * amp[(j + 1) * d + k] * (jf + 1.0).sqrt();
            }
            if j + 2 < d {
                lower2 += v.conj() * amp[(j + 2) * d + k] * ((jf + 1.0) * (jf + 2.0)).sqrt();
            }
        }
    }
    let (l, p) = (osc.length_scale(), osc.momentum_scale());
    let root2 = std::f64::consts::SQRT_2;
    FockExpectations {
        mean_x: l * root2 * lower.re,
        mean_p: p * root2 * lower.im,
        mean_x2: 0.5 * l * l * (2.0 * lower2.re + 2.0 * n1 + 1.0),
        mean_p2: 0.5 * p * p * (-2.0 * lower2.re + 2.0 * n1 + 1.0),
        mean_n: n1,
        mean_n2: n2,
    }
}

/// Whether `|ξ| ≤ √(2·cutoff)`, inside which the truncated expansion is trustworthy.
pub fn reconstruction_reliable(cutoff: usize, xi: f64) -> bool {
    xi.abs() <= (2.0 * cutoff as f64).sqrt()
}

/// `Σ_{j,k} c_{jk} φ_j(x) φ_k(x̃)` in units of length⁻¹.
pub fn wavefunction_from_fock(state: &FockState, osc: &OscillatorParams, x: f64, x_tilde: f64) -> Complex64 {
    let len = osc.length_scale();
    let (xi, xt) = (x / len, x_tilde / len);
    let n = state.cutoff;
    if !reconstruction_reliable(n, xi) || !reconstruction_reliable(n, xt) {
        log::warn!(
            "Fock reconstruction at ({x}, {x_tilde}) lies in the classically forbidden tail of cutoff {n}; \
             truncation unreliable"
        );
    }
    let hx = hermite_functions(n, xi);
    let ht = hermite_functions(n, xt);
    let d = n + 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &fx) in hx.iter().enumerate() {
        let row: Complex64 = state.amplitudes[j * d..(j + 1) * d]
            .iter()
            .zip(&ht)
            .map(|(c, &ft)| c * ft)
            .sum();
        acc += row * fx;
    }
    acc / len
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{OscillatorParams, Squeeze};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit() -> OscillatorParams {
        OscillatorParams::natural()
    }

    #[test]
    fn vacuum_state() {
        let s = fock_tfd_state(&StateSpec::vacuum(unit()), 0.7, 10).unwrap();
        assert_eq!(s.amplitude(0, 0), Complex64::new(1.0, 0.0));
        assert!(s.amplitudes().iter().skip(1).all(|v| v.norm() == 0.0));
        assert_eq!(s.norm_deficit(), 0.0);
        assert!(s.is_converged());
    }

    #[test]
    fn cutoff_below_minimum_rejected() {
        let r = fock_tfd_state(&StateSpec::vacuum(unit()), 0.0, 7);
        assert!(matches!(r, Err(Error::Contract(_))));
    }

    #[test]
    fn squeezed_vacuum_has_even_parity() {
        let spec = StateSpec::vacuum(unit()).with_squeeze(Squeeze::new(0.5, 0.0).unwrap());
        let s = fock_tfd_state(&spec, 0.0, 30).unwrap();
        for j in 0..=30 {
            for k in 0..=30 {
                if j % 2 == 1 || k % 2 == 1 {
                    assert!(s.amplitude(j, k).norm() < 1e-15);
                }
            }
        }
        assert!(s.amplitude(2, 0).norm() > 0.1);
    }

    #[test]
    fn thermal_vacuum_distribution() {
        let theta: f64 = 0.5;
        let spec = StateSpec::vacuum(unit()).with_angles(theta, 0.0).unwrap();
        let s = fock_tfd_state(&spec, 0.0, 40).unwrap();
        for n in 0..6 {
            let expected = theta.tanh().powi(n as i32) / theta.cosh();
            assert_relative_eq!(s.amplitude(n, n).re, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn vacuum_and_coherent_expectations() {
        let vac = fock_tfd_state(&StateSpec::vacuum(unit()), 0.0, 10).unwrap();
        let e = fock_expectations(&vac, &unit());
        assert_eq!((e.mean_x, e.mean_p, e.mean_n, e.mean_n2), (0.0, 0.0, 0.0, 0.0));
        assert_relative_eq!(e.mean_x2, 0.5);
        assert_relative_eq!(e.mean_p2, 0.5);

        let spec = StateSpec::vacuum(unit()).with_alpha(Displacement::new(1.0, 0.0).unwrap());
        let coh = fock_tfd_state(&spec, 0.0, 40).unwrap();
        let e = fock_expectations(&coh, &unit());
        assert_relative_eq!(e.mean_n, 1.0, max_relative = 1e-12);
        assert_relative_eq!(e.mean_n2, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn convergence_error_names_cutoff() {
        let spec = StateSpec::vacuum(unit()).with_alpha(Displacement::new(4.0, 0.0).unwrap());
        match fock_tfd_state(&spec, 0.0, 8) {
            Err(Error::NonConvergence { cutoff, deficit, .. }) => {
                assert_eq!(cutoff, 8);
                assert!(deficit > MAX_DEFICIT);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn vacuum_reconstruction() {
        let osc = OscillatorParams::new(2.0, 1.5, 1.0, 1.0).unwrap();
        let s = fock_tfd_state(&StateSpec::vacuum(osc), 0.0, 8).unwrap();
        let v = wavefunction_from_fock(&s, &osc, 0.0, 0.0);
        // φ₀(0)² with the (mω/ħ)^{1/4} scaling on each coordinate
        assert_relative_eq!(v.re, (3.0f64).sqrt() / PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn braid_identity_holds_in_fock_space() {
        let o = braid_overlap(
            Displacement::new(0.5, 0.3).unwrap(),
            Squeeze::new(0.7, PI / 3.0).unwrap(),
            60,
        )
        .unwrap();
        assert!(o >= 1.0 - 1e-8, "overlap {o}");
    }

    #[test]
    fn wrong_braid_fails() {
        // without the braid the two orderings give different states
        let alpha = Displacement::new(0.5, 0.3).unwrap();
        let z = Squeeze::new(0.7, PI / 3.0).unwrap();
        let o = ordering_overlap(alpha, z, alpha, 60).unwrap();
        assert!(o < 0.99, "overlap {o}");
    }

    #[test]
    fn trajectory_matches_single_times() {
        let spec = StateSpec::from_angles(
            unit(),
            Displacement::new(0.4, -0.2).unwrap(),
            Squeeze::new(0.3, 1.0).unwrap(),
            0.2,
            0.1,
        )
        .unwrap();
        let traj = fock_tfd_trajectory(&spec, &[0.0, 0.8], 30).unwrap();
        let single = fock_tfd_state(&spec, 0.8, 30).unwrap();
        assert_eq!(traj[1], single);
        let n0 = fock_expectations(&traj[0], &unit()).mean_n;
        let n1 = fock_expectations(&traj[1], &unit()).mean_n;
        assert!((n0 - n1).abs() < 1e-12);
    }

    #[test]
    fn deficit_shrinks_with_cutoff() {
        let spec = StateSpec::vacuum(unit()).with_alpha(Displacement::new(2.5, 0.0).unwrap());
        let deficit = |n: usize| match fock_tfd_state(&spec, 0.0, n) {
            Ok(s) => s.norm_deficit(),
            Err(Error::NonConvergence { deficit, .. }) => deficit,
            Err(e) => panic!("{e}"),
        };
        let d: Vec<f64> = [8, 12, 16, 20, 24].into_iter().map(deficit).collect();
        assert!(d.windows(2).all(|w| w[0] > w[1]), "{d:?}");
        assert!(d[4] > 1e-12);
    }

    #[test]
    fn converged_mean_number_across_cutoffs() {
        let spec = StateSpec::from_angles(
            unit(),
            Displacement::new(0.5, 0.3).unwrap(),
            Squeeze::new(0.4, PI / 3.0).unwrap(),
            0.2,
            0.1,
        )
        .unwrap();
        let a = fock_expectations(&fock_tfd_state(&spec, 0.9, 40).unwrap(), &unit()).mean_n;
        let b = fock_expectations(&fock_tfd_state(&spec, 0.9, 60).unwrap(), &unit()).mean_n;
        assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    }
}
