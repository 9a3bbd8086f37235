#![allow(dead_code)]

use rand::Rng;
use twomode::dynamics::EnvironmentParams;
use twomode::gates;
use twomode::linalg::Mat4;
use twomode::states::{build_squeezed_thermal, CovarianceMatrix, SqueezedThermalParams};

pub fn default_bath(temperature: f64) -> EnvironmentParams {
    EnvironmentParams::new(0.1, 1.0, 1.0, 1.0, temperature).unwrap()
}

pub fn squeezed_thermal(n1: f64, n2: f64, r: f64) -> CovarianceMatrix {
    build_squeezed_thermal(&SqueezedThermalParams::new(n1, n2, r).unwrap()).unwrap()
}

/// `(n + 1) ln(n + 1) - n ln n`, the thermal entropy written in occupations.
pub fn thermal_entropy(n: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        (n + 1.0) * (n + 1.0).ln() - n * n.ln()
    }
}

/// A random symplectic matrix built from a chain of elementary gates.
pub fn random_symplectic<R: Rng>(rng: &mut R, max_squeeze: f64) -> Mat4 {
    let mut s = Mat4::identity();
    for _ in 0..3 {
        s = gates::phase_rotation(rng.random_range(0.0..6.3), rng.random_range(0.0..6.3)) * s;
        s = gates::single_mode_squeeze(
            rng.random_range(-max_squeeze..max_squeeze),
            rng.random_range(-max_squeeze..max_squeeze),
        ) * s;
        s = gates::beam_splitter(rng.random_range(0.0..3.2)) * s;
        s = gates::two_mode_squeeze(rng.random_range(-max_squeeze..max_squeeze)) * s;
    }
    s
}

/// A random bona fide state `S diag(ν1, ν1, ν2, ν2) Sᵀ` with `ν ≥ ½`.
pub fn random_physical_state<R: Rng>(rng: &mut R, max_squeeze: f64) -> CovarianceMatrix {
    let nu1 = rng.random_range(0.5..3.0);
    let nu2 = rng.random_range(0.5..3.0);
    let williamson = CovarianceMatrix::new(Mat4::from_diagonal([nu1, nu1, nu2, nu2])).unwrap();
    williamson
        .transformed(&random_symplectic(rng, max_squeeze))
        .unwrap()
}
