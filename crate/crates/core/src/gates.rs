//! Symplectic transformations of the two-mode phase space `(x, p_x, y, p_y)`.
//!
//! A covariance matrix transforms as `σ → S σ Sᵀ` under a Gaussian unitary
//! with symplectic matrix `S`. These builders make it easy to assemble
//! arbitrary physical states from thermal ones.

use crate::linalg::{Mat2, Mat4};

/// The symplectic form `Ω = ω ⊕ ω`, `ω = [[0, 1], [-1, 0]]`.
pub fn symplectic_form() -> Mat4 {
    let w = Mat2::from_rows([[0.0, 1.0], [-1.0, 0.0]]);
    Mat4::block_diagonal(&w, &w)
}

/// Local phase-space rotations by `phi1` on mode 1 and `phi2` on mode 2.
pub fn phase_rotation(phi1: f64, phi2: f64) -> Mat4 {
    let rot = |phi: f64| {
        let (s, c) = phi.sin_cos();
        Mat2::from_rows([[c, s], [-s, c]])
    };
    Mat4::block_diagonal(&rot(phi1), &rot(phi2))
}

/// Local single-mode squeezers `diag(e^{-s}, e^{s})` on each mode.
pub fn single_mode_squeeze(s1: f64, s2: f64) -> Mat4 {
    Mat4::from_diagonal([(-s1).exp(), s1.exp(), (-s2).exp(), s2.exp()])
}

/// Beam splitter with transmissivity `cos²θ`.
pub fn beam_splitter(theta: f64) -> Mat4 {
    let (s, c) = theta.sin_cos();
    let ci = Mat2::from_diagonal([c, c]);
    let si = Mat2::from_diagonal([s, s]);
    let mut m = Mat4::block_diagonal(&ci, &ci);
    for i in 0..2 {
        m[(i, i + 2)] = si[(i, i)];
        m[(i + 2, i)] = -si[(i, i)];
    }
    m
}

/// Two-mode squeezer `[[cosh r·I, sinh r·Z], [sinh r·Z, cosh r·I]]`, `Z = diag(1, -1)`.
pub fn two_mode_squeeze(r: f64) -> Mat4 {
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut m = Mat4::from_diagonal([ch; 4]);
    m[(0, 2)] = sh;
    m[(2, 0)] = sh;
    m[(1, 3)] = -sh;
    m[(3, 1)] = -sh;
    m
}
