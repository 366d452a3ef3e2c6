//! Symplectic simulation of the thermofield circuit on means and covariances.
//!
//! Gates act in the Heisenberg picture on the quadrature vector
//! `(X, P, X̃, P̃)` with `a = (X + iP)/√2` and `[X, P] = i`, the vacuum having
//! covariance `I/2`. The tilde momentum is the ordinary `−i∂/∂x̃`, so the tilde
//! mode carries the complex-conjugated gate parameters. Results are scaled to
//! physical units only when a [`GaussianMode`] is handed out.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, Vector4};

use crate::analytic::{Coherence, PhotonStats};
use crate::error::{Error, Result};
use crate::model::{OscillatorParams, StateSpec};

/// Mean vector and symmetrised covariance of one or two modes, ordered
/// `(x, p)` or `(x, p, x̃, p̃)`, in physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMode {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianMode {
    pub fn vacuum(modes: usize, osc: &OscillatorParams) -> Result<Self> {
        let two = Circuit::vacuum().into_physical(osc);
        match modes {
            1 => reduce_physical(&two),
            2 => Ok(two),
            n => Err(Error::Contract(format!("vacuum supports 1 or 2 modes, got {n}"))),
        }
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// Largest `|V_ij − V_ji|`.
    pub fn asymmetry(&self) -> f64 {
        (&self.cov - self.cov.transpose()).abs().max()
    }

    /// Symplectic eigenvalues in units of action, sorted ascending.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let dim = self.cov.nrows();
        // x → s·x, p → p/s per mode is symplectic; balancing the two
        // variances keeps the eigen-decomposition well conditioned
        let mut scale = DVector::zeros(dim);
        for m in 0..self.modes() {
            let s = (self.cov[(2 * m + 1, 2 * m + 1)] / self.cov[(2 * m, 2 * m)]).powf(0.25);
            scale[2 * m] = s;
            scale[2 * m + 1] = 1.0 / s;
        }
        let balanced = DMatrix::from_fn(dim, dim, |i, j| scale[i] * self.cov[(i, j)] * scale[j]);
        let eig = balanced.symmetric_eigen();
        if eig.eigenvalues.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Domain("covariance is not positive definite".into()));
        }
        let root = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
            * eig.eigenvectors.transpose();
        let mut omega = DMatrix::zeros(dim, dim);
        for m in 0..self.modes() {
            omega[(2 * m, 2 * m + 1)] = 1.0;
            omega[(2 * m + 1, 2 * m)] = -1.0;
        }
        // K = V^½ Ω V^½ is antisymmetric; −K² = KᵀK has each ν² twice.
        let k = &root * omega * &root;
        let kk = k.transpose() * &k;
        let mut sq: Vec<f64> = kk.symmetric_eigen().eigenvalues.iter().copied().collect();
        sq.sort_by(f64::total_cmp);
        Ok(sq.chunks(2).map(|p| (0.5 * (p[0] + p[1])).max(0.0).sqrt()).collect())
    }

    /// `cov + (iħ/2)Ω ⪰ 0`, checked through the symplectic spectrum.
    pub fn is_physical(&self, hbar: f64) -> bool {
        self.asymmetry() <= 1e-14 * self.cov.abs().max().max(1.0)
            && self
                .symplectic_eigenvalues()
                .map(|nu| nu.iter().all(|&v| v >= 0.5 * hbar - 1e-10 * hbar))
                .unwrap_or(false)
    }

    /// Free evolution of a single mode for phase `ωt`.
    pub fn rotate(&self, osc: &OscillatorParams, phase: f64) -> Result<Self> {
        if self.modes() != 1 {
            return Err(Error::Contract("rotation expects a one-mode state".into()));
        }
        let (s, c) = phase.sin_cos();
        let mw = osc.mass() * osc.omega();
        let m = DMatrix::from_row_slice(2, 2, &[c, s / mw, -mw * s, c]);
        Ok(Self { mean: &m * &self.mean, cov: &m * &self.cov * m.transpose() })
    }
}

/// Dimensionless two-mode state used while the circuit is applied.
#[derive(Debug, Clone, Copy)]
struct Circuit {
    mean: Vector4<f64>,
    cov: Matrix4<f64>,
}

impl Circuit {
    fn vacuum() -> Self {
        Self { mean: Vector4::zeros(), cov: Matrix4::identity() * 0.5 }
    }

    fn apply(&mut self, map: &Matrix4<f64>, shift: &Vector4<f64>) {
        self.mean = map * self.mean + shift;
        self.cov = map * self.cov * map.transpose();
    }

    fn linear(&mut self, map: &Matrix4<f64>) {
        self.apply(map, &Vector4::zeros());
    }

    fn into_physical(self, osc: &OscillatorParams) -> GaussianMode {
        let (l, p) = (osc.length_scale(), osc.momentum_scale());
        let scale = Vector4::new(l, p, l, p);
        let mean = self.mean.component_mul(&scale);
        let cov = Matrix4::from_fn(|i, j| self.cov[(i, j)] * scale[i] * scale[j]);
        GaussianMode {
            mean: DVector::from_column_slice(mean.as_slice()),
            cov: DMatrix::from_column_slice(4, 4, cov.as_slice()),
        }
    }
}

/// `a → a cosh θ + ã† sinh θ`, `ã → ã cosh θ + a† sinh θ`.
fn thermal_map(theta: f64) -> Matrix4<f64> {
    let (c, s) = (theta.cosh(), theta.sinh());
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, -s, //
        s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

/// `a → a cosh r + a† e^{iφ} sinh r` on one mode.
fn squeeze_block(r: f64, phi: f64) -> Matrix2<f64> {
    let (c, s) = (r.cosh(), r.sinh());
    let (sp, cp) = phi.sin_cos();
    Matrix2::new(c + s * cp, s * sp, s * sp, c - s * cp)
}

/// `a → a e^{−iωt}`, `ã → ã e^{+iωt}`.
fn evolution_map(phase: f64) -> Matrix4<f64> {
    let (s, c) = phase.sin_cos();
    Matrix4::new(
        c, s, 0.0, 0.0, //
        -s, c, 0.0, 0.0, //
        0.0, 0.0, c, -s, //
        0.0, 0.0, s, c,
    )
}

fn block_diag(a: Matrix2<f64>, b: Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&b);
    m
}

/// Two-mode (physical, tilde) state after the full circuit and time `t`.
pub fn gaussian_tfd_state(spec: &StateSpec, t: f64) -> GaussianMode {
    let angles = spec.angles();
    let z = spec.squeeze();
    let alpha = spec.alpha();
    let root2 = std::f64::consts::SQRT_2;

    let mut state = Circuit::vacuum();
    state.linear(&thermal_map(angles.input));
    state.linear(&block_diag(squeeze_block(z.r(), z.phi()), squeeze_block(z.r(), -z.phi())));
    let shift = Vector4::new(alpha.re(), alpha.im(), alpha.re(), -alpha.im()) * root2;
    state.apply(&Matrix4::identity(), &shift);
    state.linear(&thermal_map(angles.detector));
    state.linear(&evolution_map(spec.osc().omega() * t));
    state.into_physical(spec.osc())
}

/// Partial trace over the tilde mode.
pub fn reduce_physical(state: &GaussianMode) -> Result<GaussianMode> {
    if state.mean.len() != 4 || state.cov.shape() != (4, 4) {
        return Err(Error::Contract(format!(
            "reduce_physical expects a two-mode state, got mean of length {}",
            state.mean.len()
        )));
    }
    Ok(GaussianMode {
        mean: state.mean.rows(0, 2).into_owned(),
        cov: state.cov.view((0, 0), (2, 2)).into_owned(),
    })
}

/// Photon statistics of a one-mode Gaussian state by Wick's theorem.
///
/// With `b = a − ⟨a⟩`, `N = ⟨b†b⟩` and `M = ⟨bb⟩`:
/// `⟨a†²a²⟩ = |β|⁴ + 4|β|²N + 2Re(β*²M) + 2N² + |M|²`.
pub fn gaussian_photon_stats(mode: &GaussianMode, osc: &OscillatorParams) -> Result<PhotonStats> {
    if mode.modes() != 1 {
        return Err(Error::Contract("photon statistics expect a one-mode state".into()));
    }
    let (l, p) = (osc.length_scale(), osc.momentum_scale());
    let (mx, mp) = (mode.mean[0] / l, mode.mean[1] / p);
    let vxx = mode.cov[(0, 0)] / (l * l);
    let vpp = mode.cov[(1, 1)] / (p * p);
    let vxp = mode.cov[(0, 1)] / (l * p);

    let beta_re = mx / std::f64::consts::SQRT_2;
    let beta_im = mp / std::f64::consts::SQRT_2;
    let b2 = beta_re * beta_re + beta_im * beta_im;
    let n = 0.5 * (vxx + vpp - 1.0);
    let (m_re, m_im) = (0.5 * (vxx - vpp), vxp);
    // Re(β*² M) with β*² = (β_re² − β_im²) − 2iβ_reβ_im
    let cross = (beta_re * beta_re - beta_im * beta_im) * m_re + 2.0 * beta_re * beta_im * m_im;
    let factorial = b2 * b2 + 4.0 * b2 * n + 2.0 * cross + 2.0 * n * n + m_re * m_re + m_im * m_im;

    let mean_n = b2 + n;
    Ok(PhotonStats {
        mean_n,
        var_n: factorial + mean_n - mean_n * mean_n,
        g2: Coherence::from_moments(factorial, mean_n),
    })
}
