//! Two-mode Gaussian states and their correlation measures.
//!
//! A state is represented by its 4×4 covariance matrix over the quadratures
//! `(x, p_x, y, p_y)` in units where the vacuum is `diag(½, ½, ½, ½)`.
//! Every measure here is computed in closed form from the local symplectic
//! invariants `det A`, `det B`, `det C` and `det σ`; no eigensolver is used.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{det2, Mat2, Mat4};

/// Tolerance on `2ν₋ ≥ 1` for a bona fide state.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Negative radicands down to this magnitude are treated as rounding noise.
pub const RADICAND_TOL: f64 = 1e-9;
/// Tolerance on the lower end of the entropy function's domain.
pub const ENTROPY_DOMAIN_TOL: f64 = 1e-9;

// Radicands that are differences of large invariants carry rounding noise
// proportional to the magnitude of the terms, not to the result. Values
// inside that noise floor are indistinguishable from zero.
const SPECTRUM_NOISE_FLOOR: f64 = 1e-10;
const DISCORD_NOISE_FLOOR: f64 = 1e-12;

const SYMMETRY_TOL: f64 = 1e-12;
const CONSTRUCTION_SYMMETRY_TOL: f64 = 1e-9;
const PURE_MODE_TOL: f64 = 1e-12;

/// Covariance matrix of a two-mode Gaussian state.
///
/// The stored matrix is always exactly symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Mat4);

impl CovarianceMatrix {
    /// Wraps a matrix, symmetrising away asymmetry at the rounding level.
    ///
    /// Matrices with non-finite entries, or whose asymmetry exceeds `1e-9`
    /// relative to the largest entry, are rejected.
    pub fn new(sigma: Mat4) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(Error::NonPhysical("non-finite covariance entry".into()));
        }
        let asym = sigma.asymmetry();
        if asym > CONSTRUCTION_SYMMETRY_TOL * sigma.max_abs().max(1.0) {
            return Err(Error::NonPhysical(format!(
                "covariance matrix is not symmetric (asymmetry {asym:.3e})"
            )));
        }
        Ok(CovarianceMatrix(sigma.symmetrized()))
    }

    /// Builds `[[A, C], [Cᵀ, B]]` from its blocks.
    pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2) -> Result<Self> {
        Self::new(Mat4::from_blocks(a, b, c))
    }

    /// The two-mode vacuum `diag(½, ½, ½, ½)`.
    pub fn vacuum() -> Self {
        CovarianceMatrix(Mat4::from_diagonal([0.5; 4]))
    }

    /// Product of thermal states with mean occupations `n1`, `n2`.
    pub fn thermal_product(n1: f64, n2: f64) -> Result<Self> {
        build_squeezed_thermal(&SqueezedThermalParams::new(n1, n2, 0.0)?)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn blocks(&self) -> (Mat2, Mat2, Mat2) {
        (self.0.block(0, 0), self.0.block(1, 1), self.0.block(0, 1))
    }

    /// `S σ Sᵀ` for a phase-space transformation `S`.
    pub fn transformed(&self, s: &Mat4) -> Result<Self> {
        Self::new(s.congruence(&self.0))
    }

    /// Partial transposition of mode 2, i.e. `p_y → -p_y`.
    pub fn partial_transpose(&self) -> Self {
        let mut m = self.0;
        for k in 0..4 {
            if k != 3 {
                m[(3, k)] = -m[(3, k)];
                m[(k, 3)] = -m[(k, 3)];
            }
        }
        CovarianceMatrix(m)
    }

    /// Exchanges the roles of the two modes.
    pub fn swap_modes(&self) -> Self {
        let (a, b, c) = self.blocks();
        CovarianceMatrix(Mat4::from_blocks(&b, &a, &c.transpose()))
    }

    pub fn det(&self) -> f64 {
        self.0.det()
    }

    /// `(det A, det B, det C, det σ)`.
    pub fn local_invariants(&self) -> (f64, f64, f64, f64) {
        let (a, b, c) = self.blocks();
        (det2(&a), det2(&b), det2(&c), self.det())
    }
}

impl AsRef<Mat4> for CovarianceMatrix {
    fn as_ref(&self) -> &Mat4 {
        &self.0
    }
}

/// `(A, B, C)` blocks of `σ = [[A, C], [Cᵀ, B]]`.
pub fn blocks(s: &CovarianceMatrix) -> (Mat2, Mat2, Mat2) {
    s.blocks()
}

/// Parameters of a two-mode squeezed thermal state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedThermalParams {
    /// Mean thermal photon number of mode 1.
    pub n1: f64,
    /// Mean thermal photon number of mode 2.
    pub n2: f64,
    /// Two-mode squeezing parameter.
    pub r: f64,
}

impl SqueezedThermalParams {
    pub fn new(n1: f64, n2: f64, r: f64) -> Result<Self> {
        let p = SqueezedThermalParams { n1, n2, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_occupations(self.n1, self.n2)?;
        if !self.r.is_finite() {
            return Err(Error::InvalidParams(format!(
                "squeezing r = {} must be finite",
                self.r
            )));
        }
        Ok(())
    }
}

fn check_occupations(n1: f64, n2: f64) -> Result<()> {
    for (name, n) in [("n1", n1), ("n2", n2)] {
        if !(n >= 0.0) || !n.is_finite() {
            return Err(Error::InvalidParams(format!(
                "{name} = {n} must be finite and non-negative"
            )));
        }
    }
    Ok(())
}

/// Covariance matrix of the two-mode squeezed thermal state.
///
/// The diagonal is `(a, a, b, b)` and the cross block is `diag(c, -c)` with
///
/// ```text
/// a = n1 cosh²r + n2 sinh²r + ½ cosh 2r
/// b = n1 sinh²r + n2 cosh²r + ½ cosh 2r
/// c = ½ (n1 + n2 + 1) sinh 2r
/// ```
///
/// in the convention where the vacuum has unit-free variances ½.
pub fn build_squeezed_thermal(p: &SqueezedThermalParams) -> Result<CovarianceMatrix> {
    p.validate()?;
    let SqueezedThermalParams { n1, n2, r } = *p;
    let (ch2, sh2) = (r.cosh().powi(2), r.sinh().powi(2));
    let half_cosh = 0.5 * (2.0 * r).cosh();
    let a = n1 * ch2 + n2 * sh2 + half_cosh;
    let b = n1 * sh2 + n2 * ch2 + half_cosh;
    let c = 0.5 * (n1 + n2 + 1.0) * (2.0 * r).sinh();
    let sigma = Mat4::from_rows([
        [a, 0.0, c, 0.0],
        [0.0, a, 0.0, -c],
        [c, 0.0, b, 0.0],
        [0.0, -c, 0.0, b],
    ]);
    CovarianceMatrix::new(sigma)
}

/// Squeezing above which a squeezed thermal state with occupations `n1`, `n2`
/// is entangled: `cosh² r_s = (n1 + 1)(n2 + 1) / (n1 + n2 + 1)`.
pub fn separability_threshold_r(n1: f64, n2: f64) -> Result<f64> {
    check_occupations(n1, n2)?;
    let cosh_sq = (n1 + 1.0) * (n2 + 1.0) / (n1 + n2 + 1.0);
    Ok(cosh_sq.sqrt().max(1.0).acosh())
}

/// Symplectic eigenvalues `ν₋ ≤ ν₊` (vacuum value ½).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub nu_minus: f64,
    pub nu_plus: f64,
}

/// Clamps a radicand, distinguishing rounding noise from a genuine violation.
///
/// `scale` is the magnitude of the terms whose difference forms the radicand.
fn clamp_radicand(value: f64, scale: f64, floor: f64, what: &str) -> Result<f64> {
    let noise = floor * scale.abs();
    if !value.is_finite() {
        return Err(Error::NonPhysical(format!("{what} radicand is not finite")));
    }
    if value < -RADICAND_TOL.max(noise) {
        return Err(Error::NonPhysical(format!(
            "{what} radicand {value:.6e} is negative"
        )));
    }
    Ok(if value <= noise { 0.0 } else { value })
}

/// Returns the two roots `(X - √(X² - P), X + √(X² - P))` of `z² - 2Xz + P`,
/// computing the small one without cancellation.
fn quadratic_roots(x: f64, product: f64, what: &str) -> Result<(f64, f64)> {
    let rad = clamp_radicand(x * x - product, x * x, SPECTRUM_NOISE_FLOOR, what)?;
    if rad == 0.0 && product >= 0.0 {
        let mid = product.sqrt();
        return Ok((mid, mid));
    }
    let big = x + rad.sqrt();
    let small = if big > 0.0 {
        product / big
    } else {
        x - rad.sqrt()
    };
    Ok((small, big))
}

/// Symplectic spectrum from `2ν∓² = Δ ∓ √(Δ² - 4 det σ)`,
/// `Δ = det A + det B + 2 det C`.
pub fn symplectic_spectrum(s: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    let (det_a, det_b, det_c, det_s) = s.local_invariants();
    let delta = det_a + det_b + 2.0 * det_c;
    let (minus_sq, plus_sq) = quadratic_roots(0.5 * delta, det_s, "symplectic spectrum")?;
    if minus_sq < 0.0 {
        return Err(Error::NonPhysical(format!(
            "negative squared symplectic eigenvalue {minus_sq:.6e}"
        )));
    }
    Ok(SymplecticSpectrum {
        nu_minus: minus_sq.sqrt(),
        nu_plus: plus_sq.sqrt(),
    })
}

/// Squared smallest symplectic eigenvalue of the partial transpose,
///
/// `g = ½(det A + det B) - det C - √([½(det A + det B) - det C]² - det σ)`.
pub fn ppt_g(s: &CovarianceMatrix) -> Result<f64> {
    let (det_a, det_b, det_c, det_s) = s.local_invariants();
    let x = 0.5 * (det_a + det_b) - det_c;
    let (g, _) = quadratic_roots(x, det_s, "partial transpose")?;
    Ok(g)
}

/// Logarithmic negativity `max{0, -½ log₂(4g)}` in bits.
pub fn log_negativity(s: &CovarianceMatrix) -> Result<f64> {
    let g = ppt_g(s)?;
    if !(g > 0.0) {
        return Err(Error::NonPhysical(format!(
            "partial-transpose invariant g = {g:.6e} is not positive"
        )));
    }
    Ok((-0.5 * (4.0 * g).log2()).max(0.0))
}

/// Whether `s` is a bona fide quantum state: symmetric, positive definite
/// and `2ν₋ ≥ 1` within `1e-9`.
pub fn is_physical(s: &CovarianceMatrix) -> bool {
    let m = s.matrix();
    m.is_finite()
        && m.asymmetry() <= SYMMETRY_TOL
        && is_positive_definite(m)
        && symplectic_spectrum(s)
            .map(|spec| 2.0 * spec.nu_minus >= 1.0 - PHYSICALITY_TOL)
            .unwrap_or(false)
}

fn is_positive_definite(m: &Mat4) -> bool {
    // Cholesky; fails exactly when some leading principal minor is not positive.
    let mut l = [[0.0f64; 4]; 4];
    for j in 0..4 {
        let diag = m[(j, j)] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if !(diag > 0.0) {
            return false;
        }
        l[j][j] = diag.sqrt();
        for i in (j + 1)..4 {
            let off = m[(i, j)] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            l[i][j] = off / l[j][j];
        }
    }
    true
}

/// `f(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2)`, the von Neumann
/// entropy (in nats) of a single-mode thermal state with `x = 2n + 1`.
pub fn f_entropy(x: f64) -> Result<f64> {
    if !(x >= 1.0 - ENTROPY_DOMAIN_TOL) || x.is_nan() {
        return Err(Error::DomainError(x));
    }
    if x <= 1.0 {
        return Ok(0.0);
    }
    let up = 0.5 * (x + 1.0);
    let down = 0.5 * (x - 1.0);
    Ok(up * up.ln() - down * down.ln())
}

/// Which mode the Gaussian measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum MeasuredMode {
    #[serde(alias = "mode1", alias = "1")]
    Mode1,
    #[default]
    #[serde(alias = "mode2", alias = "2")]
    Mode2,
}

/// Branch of the closed-form conditional determinant `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EpsilonBranch {
    /// `(δ - αβ)² ≤ (β + 1) γ² (α + δ)`.
    BranchOne,
    BranchTwo,
}

/// Invariants entering the Gaussian discord, after the mode swap implied by
/// the measured mode has been applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordInvariants {
    /// `4 det A`
    pub alpha: f64,
    /// `4 det B`
    pub beta: f64,
    /// `4 det C`
    pub gamma: f64,
    /// `16 det σ`
    pub delta: f64,
    /// Minimal conditional determinant over Gaussian measurements.
    pub epsilon: f64,
    pub branch: EpsilonBranch,
}

impl DiscordInvariants {
    pub fn compute(s: &CovarianceMatrix, mode: MeasuredMode) -> Result<Self> {
        let s = match mode {
            MeasuredMode::Mode2 => *s,
            MeasuredMode::Mode1 => s.swap_modes(),
        };
        let (det_a, det_b, det_c, det_s) = s.local_invariants();
        let alpha = 4.0 * det_a;
        let beta = 4.0 * det_b;
        let gamma = 4.0 * det_c;
        let delta = 16.0 * det_s;

        let gamma_sq = gamma * gamma;
        let lhs = (delta - alpha * beta).powi(2);
        let rhs = (beta + 1.0) * gamma_sq * (alpha + delta);

        let (epsilon, branch) = if lhs <= rhs {
            (
                epsilon_branch_one(alpha, beta, gamma, delta)?,
                EpsilonBranch::BranchOne,
            )
        } else {
            (
                epsilon_branch_two(alpha, beta, gamma, delta)?,
                EpsilonBranch::BranchTwo,
            )
        };
        Ok(DiscordInvariants {
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
            branch,
        })
    }
}

fn epsilon_branch_one(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<f64> {
    let bm1 = beta - 1.0;
    if bm1.abs() < PURE_MODE_TOL {
        // A pure measured mode carries no correlations; |γ| ≲ √(|β-1|·α).
        if gamma.abs() <= PURE_MODE_TOL.sqrt() * alpha.max(1.0) {
            return Ok(alpha);
        }
        return Err(Error::NonPhysical(format!(
            "measured mode is pure (beta = {beta}) but correlated (gamma = {gamma:.3e})"
        )));
    }
    let gamma_sq = gamma * gamma;
    let cross = bm1 * (delta - alpha);
    let q = clamp_radicand(
        gamma_sq + cross,
        gamma_sq.max(cross.abs()),
        DISCORD_NOISE_FLOOR,
        "discord (first branch)",
    )?;
    Ok((2.0 * gamma_sq + cross + 2.0 * gamma.abs() * q.sqrt()) / (bm1 * bm1))
}

fn epsilon_branch_two(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<f64> {
    let gamma_sq = gamma * gamma;
    let ab = alpha * beta;
    let t1 = gamma_sq * gamma_sq;
    let t2 = (delta - ab).powi(2);
    let t3 = 2.0 * gamma_sq * (delta + ab);
    let rad = clamp_radicand(
        t1 + t2 - t3,
        t1.max(t2).max(t3.abs()),
        DISCORD_NOISE_FLOOR,
        "discord (second branch)",
    )?;
    Ok((ab - gamma_sq + delta - rad.sqrt()) / (2.0 * beta))
}

/// Gaussian discord together with the invariants it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordReport {
    pub value: f64,
    pub invariants: DiscordInvariants,
    pub spectrum: SymplecticSpectrum,
}

/// Gaussian quantum discord with a Gaussian measurement on `mode`, in nats:
///
/// `D = f(√β) - f(2ν₋) - f(2ν₊) + f(√ε)`.
pub fn gaussian_discord(s: &CovarianceMatrix, mode: MeasuredMode) -> Result<f64> {
    gaussian_discord_report(s, mode).map(|r| r.value)
}

pub fn gaussian_discord_report(s: &CovarianceMatrix, mode: MeasuredMode) -> Result<DiscordReport> {
    if !is_physical(s) {
        return Err(Error::NonPhysical(
            "discord requires a bona fide quantum state".into(),
        ));
    }
    let spectrum = symplectic_spectrum(s)?;
    let inv = DiscordInvariants::compute(s, mode)?;
    let value = f_entropy(inv.beta.sqrt())?
        - f_entropy(2.0 * spectrum.nu_minus)?
        - f_entropy(2.0 * spectrum.nu_plus)?
        + f_entropy(inv.epsilon.sqrt())?;
    if value < -RADICAND_TOL {
        return Err(Error::NonPhysical(format!("negative discord {value:.6e}")));
    }
    Ok(DiscordReport {
        value: value.max(0.0),
        invariants: inv,
        spectrum,
    })
}
