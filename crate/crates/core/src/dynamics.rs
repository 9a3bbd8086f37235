//! Covariance-matrix dynamics of two uncoupled damped modes in a common bath.
//!
//! The second moments obey the linear matrix ODE
//!
//! ```text
//! dσ/dt = Y σ + σ Yᵀ + 2D
//! ```
//!
//! whose solution is `σ(t) = M(t)(σ(0) - σ∞)M(t)ᵀ + σ∞` with `M(t) = exp(Yt)`
//! and `σ∞` the solution of the Lyapunov equation `Yσ∞ + σ∞Yᵀ = -2D`.
//! [`Evolution`] is the production path; [`evolve_rk4`] integrates the ODE
//! directly and is kept as an independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve_linear, Mat2, Mat4};
use crate::states::CovarianceMatrix;

const DIFFUSION_PSD_TOL: f64 = 1e-12;

/// Dissipation, oscillator and bath parameters (`ħ = k = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentParams {
    /// Dissipation constant λ.
    pub lambda: f64,
    pub mass: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// Bath temperature.
    pub temperature: f64,
}

impl Default for EnvironmentParams {
    fn default() -> Self {
        EnvironmentParams {
            lambda: 0.1,
            mass: 1.0,
            omega1: 1.0,
            omega2: 1.0,
            temperature: 0.0,
        }
    }
}

impl EnvironmentParams {
    pub fn new(lambda: f64, mass: f64, omega1: f64, omega2: f64, temperature: f64) -> Result<Self> {
        let p = EnvironmentParams {
            lambda,
            mass,
            omega1,
            omega2,
            temperature,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_temperature(self, temperature: f64) -> Self {
        EnvironmentParams {
            temperature,
            ..self
        }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        EnvironmentParams { lambda, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda", self.lambda),
            ("mass", self.mass),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} must be finite and positive"
                )));
            }
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "temperature = {} must be finite and non-negative",
                self.temperature
            )));
        }
        Ok(())
    }

    /// `coth(ω / 2T)`, equal to 1 at `T = 0`.
    pub fn thermal_factor(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            1.0
        } else {
            1.0 / (omega / (2.0 * self.temperature)).tanh()
        }
    }
}

/// Drift matrix `Y`, block diagonal with one damped-oscillator block per mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(Mat4);

impl DriftMatrix {
    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }
}

/// Symmetric positive semidefinite diffusion matrix `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(Mat4);

impl DiffusionMatrix {
    /// Accepts any symmetric positive semidefinite matrix.
    pub fn new(d: Mat4) -> Result<Self> {
        let scale = d.max_abs().max(1.0);
        if !d.is_finite() || d.asymmetry() > DIFFUSION_PSD_TOL * scale {
            return Err(Error::InvalidParams(
                "diffusion matrix must be finite and symmetric".into(),
            ));
        }
        let d = d.symmetrized();
        if !principal_minors_nonnegative(&d, scale) {
            return Err(Error::InvalidParams(
                "diffusion matrix must be positive semidefinite".into(),
            ));
        }
        Ok(DiffusionMatrix(d))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }
}

// Sylvester's criterion for semidefiniteness needs every principal minor,
// not only the leading ones.
fn principal_minors_nonnegative(m: &Mat4, scale: f64) -> bool {
    (1u32..16).all(|mask| {
        let idx: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
        let minor = match idx.len() {
            1 => m[(idx[0], idx[0])],
            2 => {
                m[(idx[0], idx[0])] * m[(idx[1], idx[1])]
                    - m[(idx[0], idx[1])] * m[(idx[1], idx[0])]
            }
            3 => {
                let mut sub = Mat4::identity();
                for (r, &i) in idx.iter().enumerate() {
                    for (c, &j) in idx.iter().enumerate() {
                        sub[(r, c)] = m[(i, j)];
                    }
                }
                sub.det()
            }
            _ => m.det(),
        };
        minor >= -DIFFUSION_PSD_TOL * scale.powi(idx.len() as i32)
    })
}

fn oscillator_block(p: &EnvironmentParams, omega: f64) -> Mat2 {
    Mat2::from_rows([
        [-p.lambda, 1.0 / p.mass],
        [-p.mass * omega * omega, -p.lambda],
    ])
}

pub fn drift_matrix(p: &EnvironmentParams) -> Result<DriftMatrix> {
    p.validate()?;
    Ok(DriftMatrix(Mat4::block_diagonal(
        &oscillator_block(p, p.omega1),
        &oscillator_block(p, p.omega2),
    )))
}

/// Diffusion coefficients for a bath whose fixed point is the Gibbs state
/// of the two oscillators at temperature `T`:
/// `mω D_xx = D_pp / (mω) = (λ/2) coth(ω/2T)` per mode, no cross terms.
pub fn thermal_diffusion(p: &EnvironmentParams) -> Result<DiffusionMatrix> {
    p.validate()?;
    let mode = |omega: f64| {
        let k = 0.5 * p.lambda * p.thermal_factor(omega);
        (k / (p.mass * omega), k * p.mass * omega)
    };
    let (dx, dpx) = mode(p.omega1);
    let (dy, dpy) = mode(p.omega2);
    Ok(DiffusionMatrix(Mat4::from_diagonal([dx, dpx, dy, dpy])))
}

fn oscillator_propagator(p: &EnvironmentParams, omega: f64, t: f64) -> Mat2 {
    let (s, c) = (omega * t).sin_cos();
    let mw = p.mass * omega;
    Mat2::from_rows([[c, s / mw], [-mw * s, c]]).scale((-p.lambda * t).exp())
}

/// `M(t) = exp(Yt)` from the closed form of each damped-oscillator block.
pub fn propagator(p: &EnvironmentParams, t: f64) -> Mat4 {
    Mat4::block_diagonal(
        &oscillator_propagator(p, p.omega1, t),
        &oscillator_propagator(p, p.omega2, t),
    )
}

/// Index pairs of the upper triangle of a symmetric 4×4 matrix.
const UPPER: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

fn symmetric_unit(k: usize) -> Mat4 {
    let (i, j) = UPPER[k];
    let mut e = Mat4::zeros();
    e[(i, j)] = 1.0;
    e[(j, i)] = 1.0;
    e
}

/// Solves `Y X + X Yᵀ = -2D` for symmetric `X`.
///
/// The ten independent entries of `X` are unknowns of a 10×10 linear system
/// built column by column from the action of `X ↦ YX + XYᵀ` on the
/// symmetric unit matrices.
pub fn solve_lyapunov(drift: &Mat4, diffusion: &Mat4) -> Result<Mat4> {
    let mut system = [[0.0; 10]; 10];
    for (col, _) in UPPER.iter().enumerate() {
        let e = symmetric_unit(col);
        let image = *drift * e + e * drift.transpose();
        for (row, &(i, j)) in UPPER.iter().enumerate() {
            system[row][col] = image[(i, j)];
        }
    }
    let mut rhs = [0.0; 10];
    for (row, &(i, j)) in UPPER.iter().enumerate() {
        rhs[row] = -2.0 * diffusion[(i, j)];
    }
    let x = solve_linear(&system, &rhs)?;
    let mut out = Mat4::zeros();
    for (k, &(i, j)) in UPPER.iter().enumerate() {
        out[(i, j)] = x[k];
        out[(j, i)] = x[k];
    }
    Ok(out)
}

/// `‖Yσ + σYᵀ + 2D‖_max`.
pub fn lyapunov_residual(drift: &Mat4, diffusion: &Mat4, sigma: &Mat4) -> f64 {
    (*drift * *sigma + *sigma * drift.transpose() + diffusion.scale(2.0)).max_abs()
}

/// Fixed point `σ∞` of the dynamics with thermal diffusion.
///
/// A non-positive dissipation constant makes the drift non-Hurwitz and is
/// reported as [`Error::SingularMatrix`].
pub fn asymptotic_covariance(p: &EnvironmentParams) -> Result<CovarianceMatrix> {
    if !(p.lambda > 0.0) {
        return Err(Error::SingularMatrix {
            column: 0,
            pivot: p.lambda,
        });
    }
    let drift = drift_matrix(p)?;
    let diffusion = thermal_diffusion(p)?;
    CovarianceMatrix::new(solve_lyapunov(drift.matrix(), diffusion.matrix())?)
}

/// Gibbs covariance of two independent oscillators at temperature `T`.
pub fn gibbs_covariance(p: &EnvironmentParams) -> Result<CovarianceMatrix> {
    p.validate()?;
    let mode = |omega: f64| {
        let k = 0.5 * p.thermal_factor(omega);
        (k / (p.mass * omega), k * p.mass * omega)
    };
    let (x, px) = mode(p.omega1);
    let (y, py) = mode(p.omega2);
    CovarianceMatrix::new(Mat4::from_diagonal([x, px, y, py]))
}

/// The affine covariance map of the bath, with drift, diffusion and fixed
/// point precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evolution {
    params: EnvironmentParams,
    drift: DriftMatrix,
    diffusion: DiffusionMatrix,
    asymptotic: Mat4,
}

impl Evolution {
    /// Dynamics with the thermal diffusion matrix.
    pub fn thermal(params: &EnvironmentParams) -> Result<Self> {
        Self::with_diffusion(params, thermal_diffusion(params)?)
    }

    /// Dynamics with an arbitrary symmetric positive semidefinite diffusion.
    pub fn with_diffusion(params: &EnvironmentParams, diffusion: DiffusionMatrix) -> Result<Self> {
        let drift = drift_matrix(params)?;
        let asymptotic = solve_lyapunov(drift.matrix(), diffusion.matrix())?;
        Ok(Evolution {
            params: *params,
            drift,
            diffusion,
            asymptotic,
        })
    }

    pub fn params(&self) -> &EnvironmentParams {
        &self.params
    }

    pub fn drift(&self) -> &DriftMatrix {
        &self.drift
    }

    pub fn diffusion(&self) -> &DiffusionMatrix {
        &self.diffusion
    }

    pub fn asymptotic(&self) -> Result<CovarianceMatrix> {
        CovarianceMatrix::new(self.asymptotic)
    }

    /// `σ(t) = M(t)(σ0 - σ∞)M(t)ᵀ + σ∞`.
    pub fn evolve(&self, s0: &CovarianceMatrix, t: f64) -> Result<CovarianceMatrix> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(*s0);
        }
        let m = propagator(&self.params, t);
        let excess = *s0.matrix() - self.asymptotic;
        CovarianceMatrix::new(m.congruence(&excess) + self.asymptotic)
    }

    /// Right-hand side `Yσ + σYᵀ + 2D` of the moment equation.
    pub fn rate(&self, sigma: &Mat4) -> Mat4 {
        let y = self.drift.matrix();
        *y * *sigma + *sigma * y.transpose() + self.diffusion.matrix().scale(2.0)
    }

    /// Integrates the moment equation with classical fourth-order Runge–Kutta.
    ///
    /// The step is shrunk so that a whole number of steps lands on `t`; the
    /// state is symmetrised after each step. Accuracy requires roughly
    /// `dt ≤ 0.01 / max(λ, ω1, ω2)`.
    pub fn evolve_rk4(&self, s0: &CovarianceMatrix, t: f64, dt: f64) -> Result<CovarianceMatrix> {
        check_time(t)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "step dt = {dt} must be positive"
            )));
        }
        let steps = (t / dt).ceil() as usize;
        if steps == 0 {
            return Ok(*s0);
        }
        let h = t / steps as f64;
        let mut sigma = *s0.matrix();
        for _ in 0..steps {
            let k1 = self.rate(&sigma);
            let k2 = self.rate(&(sigma + k1.scale(0.5 * h)));
            let k3 = self.rate(&(sigma + k2.scale(0.5 * h)));
            let k4 = self.rate(&(sigma + k3.scale(h)));
            sigma = sigma + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
            sigma = sigma.symmetrized();
        }
        CovarianceMatrix::new(sigma)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "time t = {t} must be finite and non-negative"
        )));
    }
    Ok(())
}

/// Closed-form evolution under the thermal bath.
pub fn evolve_closed(
    s0: &CovarianceMatrix,
    p: &EnvironmentParams,
    t: f64,
) -> Result<CovarianceMatrix> {
    Evolution::thermal(p)?.evolve(s0, t)
}

/// Runge–Kutta integration of the moment equation under the thermal bath.
pub fn evolve_rk4(
    s0: &CovarianceMatrix,
    p: &EnvironmentParams,
    t: f64,
    dt: f64,
) -> Result<CovarianceMatrix> {
    Evolution::thermal(p)?.evolve_rk4(s0, t, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm_generic;
    use crate::states::{build_squeezed_thermal, symplectic_spectrum, SqueezedThermalParams};
    use std::f64::consts::FRAC_PI_2;

    fn fig_params(t: f64) -> EnvironmentParams {
        EnvironmentParams::new(0.1, 1.0, 1.0, 1.0, t).unwrap()
    }

    fn reference_state() -> CovarianceMatrix {
        build_squeezed_thermal(&SqueezedThermalParams::new(1.0, 1.0, 2.0).unwrap()).unwrap()
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(EnvironmentParams::new(0.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(EnvironmentParams::new(0.1, -1.0, 1.0, 1.0, 0.0).is_err());
        assert!(EnvironmentParams::new(0.1, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(EnvironmentParams::new(0.1, 1.0, 1.0, 1.0, -0.5).is_err());
        let bad = EnvironmentParams {
            lambda: f64::NAN,
            ..Default::default()
        };
        assert!(matches!(drift_matrix(&bad), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn drift_for_default_parameters() {
        let y = drift_matrix(&fig_params(0.0)).unwrap();
        let block = Mat2::from_rows([[-0.1, 1.0], [-1.0, -0.1]]);
        assert_eq!(y.matrix(), &Mat4::block_diagonal(&block, &block));
        assert!((y.matrix().trace() + 0.4).abs() < 1e-15);
        assert_eq!(y.matrix().block(0, 1), Mat2::zeros());
    }

    #[test]
    fn drift_block_eigenvalues() {
        // Characteristic polynomial z² + 2λz + λ² + ω²: roots -λ ± iω.
        let p = EnvironmentParams::new(0.3, 2.0, 1.7, 0.4, 0.0).unwrap();
        let y = drift_matrix(&p).unwrap();
        for (b, omega) in [(0, p.omega1), (1, p.omega2)] {
            let blk = y.matrix().block(b, b);
            let tr = blk.trace();
            let det = crate::linalg::det2(&blk);
            assert!((tr + 2.0 * p.lambda).abs() < 1e-14);
            assert!((det - (p.lambda.powi(2) + omega * omega)).abs() < 1e-12);
        }
    }

    #[test]
    fn thermal_diffusion_limits() {
        let d = thermal_diffusion(&fig_params(0.0)).unwrap();
        assert_eq!(d.matrix()[(0, 0)], 0.05);
        assert_eq!(d.matrix()[(1, 1)], 0.05);
        assert_eq!(d.matrix()[(0, 0)], d.matrix()[(2, 2)]);
        assert_eq!(d.matrix()[(1, 1)], d.matrix()[(3, 3)]);
        assert_eq!(d.matrix().asymmetry(), 0.0);

        // High temperature: D_xx → λT/(mω²)
        let hot = thermal_diffusion(&fig_params(100.0)).unwrap();
        let classical = 0.1 * 100.0;
        assert!((hot.matrix()[(0, 0)] - classical).abs() < 0.01 * classical);
    }

    #[test]
    fn diffusion_validation() {
        assert!(DiffusionMatrix::new(Mat4::from_diagonal([1.0, 0.0, 2.0, 0.5])).is_ok());
        assert!(DiffusionMatrix::new(Mat4::from_diagonal([1.0, -0.1, 2.0, 0.5])).is_err());
        let mut indefinite = Mat4::from_diagonal([1.0, 1.0, 0.0, 0.0]);
        indefinite[(2, 3)] = 1.0;
        indefinite[(3, 2)] = 1.0;
        assert!(DiffusionMatrix::new(indefinite).is_err());
    }

    #[test]
    fn propagator_examples() {
        let p = fig_params(0.0);
        assert_eq!(propagator(&p, 0.0), Mat4::identity());

        let undamped = EnvironmentParams { lambda: 0.0, ..p };
        let m = propagator(&undamped, FRAC_PI_2);
        let quarter = Mat2::from_rows([[0.0, 1.0], [-1.0, 0.0]]);
        assert!((m - Mat4::block_diagonal(&quarter, &quarter)).max_abs() < 1e-15);

        let q = EnvironmentParams::new(0.2, 2.0, 0.5, 1.5, 0.0).unwrap();
        for t in [1.0, 10.0, 40.0] {
            let bound = (-q.lambda * t).exp()
                * [1.0, 1.0, 1.0, 3.0, 1.0 / 3.0]
                    .iter()
                    .cloned()
                    .fold(1.0, f64::max);
            assert!(propagator(&q, t).max_abs() <= bound + 1e-15);
        }
    }

    #[test]
    fn propagator_matches_generic_exponential() {
        let p = fig_params(0.0);
        let y = *drift_matrix(&p).unwrap().matrix();
        for k in 0..=50 {
            let t = k as f64;
            let diff = (propagator(&p, t) - expm_generic(&y.scale(t))).max_abs();
            assert!(diff < 1e-9, "t = {t}: {diff:e}");
        }
        // non-resonant, heavier mode
        let q = EnvironmentParams::new(0.05, 1.7, 0.8, 1.9, 0.0).unwrap();
        let y = *drift_matrix(&q).unwrap().matrix();
        for t in [0.3, 7.0, 25.0] {
            assert!((propagator(&q, t) - expm_generic(&y.scale(t))).max_abs() < 1e-9);
        }
    }

    #[test]
    fn expm_semigroup_and_determinant() {
        let y = *drift_matrix(&fig_params(0.0)).unwrap().matrix();
        for &(t, s) in &[(0.5, 1.5), (3.0, 7.0), (10.0, 12.5)] {
            let lhs = expm_generic(&y.scale(t)) * expm_generic(&y.scale(s));
            assert!((lhs - expm_generic(&y.scale(t + s))).max_abs() < 1e-9);
            let det = expm_generic(&y.scale(t)).det();
            let expected = (-0.4 * t).exp();
            assert!((det - expected).abs() < 1e-8 * expected);
        }
    }

    #[test]
    fn asymptotic_state_is_gibbs() {
        for temperature in [0.0, 0.5, 1.0, 2.0] {
            let p = fig_params(temperature);
            let s = asymptotic_covariance(&p).unwrap();
            let gibbs = gibbs_covariance(&p).unwrap();
            assert!((*s.matrix() - *gibbs.matrix()).max_abs() < 1e-10);
            let y = drift_matrix(&p).unwrap();
            let d = thermal_diffusion(&p).unwrap();
            assert!(lyapunov_residual(y.matrix(), d.matrix(), s.matrix()) < 1e-10);
        }
        let vac = asymptotic_covariance(&fig_params(0.0)).unwrap();
        assert!((*vac.matrix() - Mat4::from_diagonal([0.5; 4])).max_abs() < 1e-12);
        let warm = asymptotic_covariance(&fig_params(1.0)).unwrap();
        let half_coth = 0.5 / 0.5f64.tanh();
        assert!((warm.matrix()[(3, 3)] - half_coth).abs() < 1e-10);
        assert!((half_coth - 1.0820).abs() < 1e-4);
        let spec = symplectic_spectrum(&warm).unwrap();
        assert!((spec.nu_minus - half_coth).abs() < 1e-10);
    }

    #[test]
    fn asymptotic_state_with_unequal_modes() {
        let p = EnvironmentParams::new(0.3, 2.5, 0.7, 1.9, 1.3).unwrap();
        let s = asymptotic_covariance(&p).unwrap();
        assert!((*s.matrix() - *gibbs_covariance(&p).unwrap().matrix()).max_abs() < 1e-10);
    }

    #[test]
    fn lyapunov_with_cross_diffusion() {
        let p = EnvironmentParams::new(0.2, 1.0, 1.0, 1.3, 0.0).unwrap();
        let mut d = Mat4::from_diagonal([0.3, 0.2, 0.4, 0.25]);
        d[(0, 2)] = 0.1;
        d[(2, 0)] = 0.1;
        d[(1, 3)] = -0.05;
        d[(3, 1)] = -0.05;
        let evo = Evolution::with_diffusion(&p, DiffusionMatrix::new(d).unwrap()).unwrap();
        let s = evo.asymptotic().unwrap();
        assert!(lyapunov_residual(evo.drift().matrix(), &d, s.matrix()) < 1e-10);
        assert!(s.matrix()[(0, 2)].abs() > 1e-3);
    }

    #[test]
    fn non_hurwitz_drift_is_singular() {
        let p = EnvironmentParams {
            lambda: 0.0,
            ..fig_params(1.0)
        };
        assert!(matches!(
            asymptotic_covariance(&p),
            Err(Error::SingularMatrix { .. })
        ));
        let p = EnvironmentParams {
            lambda: -0.1,
            ..fig_params(1.0)
        };
        assert!(matches!(
            asymptotic_covariance(&p),
            Err(Error::SingularMatrix { .. })
        ));
        // The linear system itself is singular without damping.
        let y = Mat4::block_diagonal(
            &Mat2::from_rows([[0.0, 1.0], [-1.0, 0.0]]),
            &Mat2::from_rows([[0.0, 1.0], [-4.0, 0.0]]),
        );
        assert!(matches!(
            solve_lyapunov(&y, &Mat4::identity()),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn evolve_closed_examples() {
        let p = fig_params(1.0);
        let s0 = reference_state();
        assert_eq!(evolve_closed(&s0, &p, 0.0).unwrap(), s0);

        let inf = asymptotic_covariance(&p).unwrap();
        for t in [0.5, 3.0, 17.0] {
            let st = evolve_closed(&inf, &p, t).unwrap();
            assert!((*st.matrix() - *inf.matrix()).max_abs() < 1e-12);
        }

        let late = evolve_closed(&s0, &p, 100.0).unwrap();
        assert!((*late.matrix() - *inf.matrix()).max_abs() <= 1e-6);
        assert!(evolve_closed(&s0, &p, -1.0).is_err());
    }

    #[test]
    fn rk4_preserves_determinant_without_bath() {
        // λ = 0 and D = 0: a symplectic rotation of each mode.
        let p = EnvironmentParams {
            lambda: 0.0,
            ..fig_params(0.0)
        };
        let evo = Evolution {
            params: p,
            drift: DriftMatrix(Mat4::block_diagonal(
                &oscillator_block(&p, 1.0),
                &oscillator_block(&p, 1.0),
            )),
            diffusion: DiffusionMatrix(Mat4::zeros()),
            asymptotic: Mat4::zeros(),
        };
        let s0 =
            build_squeezed_thermal(&SqueezedThermalParams::new(0.5, 1.0, 0.7).unwrap()).unwrap();
        let st = evo.evolve_rk4(&s0, 10.0, 1e-3).unwrap();
        assert!((st.det() - s0.det()).abs() < 1e-8);
    }

    #[test]
    fn rk4_examples() {
        let p = fig_params(1.0);
        let s0 = reference_state();
        assert_eq!(evolve_rk4(&s0, &p, 0.0, 1e-3).unwrap(), s0);
        assert!(matches!(
            evolve_rk4(&s0, &p, 1.0, 0.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(evolve_rk4(&s0, &p, 1.0, -1e-3).is_err());
    }

    #[test]
    fn rk4_agrees_with_closed_form() {
        let s0 = reference_state();
        for temperature in [0.0, 1.0] {
            let p = fig_params(temperature);
            let evo = Evolution::thermal(&p).unwrap();
            let closed = evo.evolve(&s0, 20.0).unwrap();
            let rk = evo.evolve_rk4(&s0, 20.0, 1e-3).unwrap();
            let diff = (*closed.matrix() - *rk.matrix()).max_abs();
            assert!(diff <= 1e-6, "T = {temperature}: {diff:e}");
        }
    }
}
