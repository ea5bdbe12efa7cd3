//! Canonical two-qubit interaction `H = Σ_j α_j σ_j⊗σ_j` and the closed-form
//! maximality test for `U = e^{-iH}`.
//!
//! Because the three `σ_j⊗σ_j` commute, `e^{-iH} = Π_j (c_j I − i s_j σ_j⊗σ_j)`,
//! which expands to `Σ_f κ_f σ_f⊗σ_f` with complex coefficients
//! `κ_f = p_f − i·q_f`:
//!
//! ```text
//! κ_e = c_x c_y c_z − i s_x s_y s_z
//! κ_x = c_x s_y s_z − i s_x c_y c_z
//! κ_y = s_x c_y s_z − i c_x s_y c_z
//! κ_z = s_x s_y c_z − i c_x c_y s_z
//! ```
//!
//! The commonly quoted real form `k_f = p_f − q_f` drops the factor `i`; the
//! squared moduli `|κ_f|² = p_f² + q_f²` are what enter the normalization
//! conditions. [`PauliCoefficients`] keeps both parts.

use crate::decompose::BipartiteGate;
use crate::error::Result;
use crate::linalg::{expm_minus_i, tensor_product, C64, ComplexMatrix};
use crate::pauli::PauliGroup;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitAlphas {
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub alpha_z: f64,
}

impl TwoQubitAlphas {
    pub fn new(alpha_x: f64, alpha_y: f64, alpha_z: f64) -> Self {
        TwoQubitAlphas { alpha_x, alpha_y, alpha_z }
    }

    /// Each angle reduced to `[0, π)`. `e^{-iH}` changes by at most a global
    /// sign under this reduction.
    pub fn canonical(self) -> Self {
        let r = |a: f64| a.rem_euclid(std::f64::consts::PI);
        TwoQubitAlphas::new(r(self.alpha_x), r(self.alpha_y), r(self.alpha_z))
    }

    fn cos_sin(self) -> ([f64; 3], [f64; 3]) {
        let a = [self.alpha_x, self.alpha_y, self.alpha_z];
        (a.map(f64::cos), a.map(f64::sin))
    }
}

/// Coefficients of `e^{-iH}` on `I⊗I, X⊗X, Y⊗Y, Z⊗Z` (in that order),
/// split as `κ_f = real[f] − i·quad[f]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliCoefficients {
    pub real: [f64; 4],
    pub quad: [f64; 4],
}

impl PauliCoefficients {
    pub fn complex(&self) -> [C64; 4] {
        std::array::from_fn(|f| C64::new(self.real[f], -self.quad[f]))
    }

    /// The real combination `k_f = p_f − q_f`.
    pub fn real_form(&self) -> [f64; 4] {
        std::array::from_fn(|f| self.real[f] - self.quad[f])
    }

    /// `|κ_f|²`.
    pub fn weights(&self) -> [f64; 4] {
        std::array::from_fn(|f| self.real[f].powi(2) + self.quad[f].powi(2))
    }

    pub fn total_weight(&self) -> f64 {
        self.weights().iter().sum()
    }
}

fn sigma(k: usize) -> ComplexMatrix {
    let grp = PauliGroup::new(2).expect("d = 2");
    // flat order of the d=2 group: (0,0)=I, (0,1)=Z, (1,0)=X, (1,1)=Y
    let flat = [0, 2, 3, 1][k];
    grp.matrices()[flat].clone()
}

/// `σ_f ⊗ σ_f` for `f ∈ {e, x, y, z}`.
pub fn sigma_sigma(f: usize) -> ComplexMatrix {
    let s = sigma(f);
    tensor_product(&s, &s)
}

pub fn hamiltonian(a: TwoQubitAlphas) -> ComplexMatrix {
    sigma_sigma(1) * C64::new(a.alpha_x, 0.0)
        + sigma_sigma(2) * C64::new(a.alpha_y, 0.0)
        + sigma_sigma(3) * C64::new(a.alpha_z, 0.0)
}

/// `e^{-iH}` as a gate on 2⊗2.
pub fn gate(a: TwoQubitAlphas) -> Result<BipartiteGate> {
    BipartiteGate::new(2, 2, expm_minus_i(&hamiltonian(a))?)
}

pub fn coefficients(a: TwoQubitAlphas) -> PauliCoefficients {
    let ([cx, cy, cz], [sx, sy, sz]) = a.cos_sin();
    PauliCoefficients {
        real: [cx * cy * cz, cx * sy * sz, sx * cy * sz, sx * sy * cz],
        quad: [sx * sy * sz, sx * cy * cz, cx * sy * cz, cx * cy * sz],
    }
}

/// `Σ_f κ_f σ_f⊗σ_f`, equal to `e^{-iH}` exactly.
pub fn gate_from_coefficients(k: &PauliCoefficients) -> ComplexMatrix {
    k.complex()
        .iter()
        .enumerate()
        .fold(ComplexMatrix::zeros(4, 4), |acc, (f, &c)| acc + sigma_sigma(f) * c)
}

/// Left-hand sides of the four normalization equations (each should be 1/4).
pub fn normalization_lhs(a: TwoQubitAlphas) -> [f64; 4] {
    let ([cx, cy, cz], [sx, sy, sz]) = a.cos_sin();
    let sq = |v: f64| v * v;
    [
        sq(cx) * sq(cy) * sq(cz) + sq(sx) * sq(sy) * sq(sz),
        sq(cx) * sq(sy) * sq(sz) + sq(sx) * sq(cy) * sq(cz),
        sq(sx) * sq(cy) * sq(sz) + sq(cx) * sq(sy) * sq(cz),
        sq(sx) * sq(sy) * sq(cz) + sq(cx) * sq(cy) * sq(sz),
    ]
}

/// `lhs − 1/4` for each of the four equations.
pub fn normalization_residuals(a: TwoQubitAlphas) -> [f64; 4] {
    normalization_lhs(a).map(|v| v - 0.25)
}

pub fn check_normalizations(a: TwoQubitAlphas, tol: f64) -> bool {
    normalization_residuals(a).iter().all(|r| r.abs() <= tol)
}

/// At least two of `cos²α_x, cos²α_y, cos²α_z` equal 1/2.
pub fn closed_form_maximal(a: TwoQubitAlphas, tol: f64) -> bool {
    let ([cx, cy, cz], _) = a.cos_sin();
    [cx, cy, cz]
        .iter()
        .filter(|c| (c.powi(2) - 0.5).abs() <= tol)
        .count()
        >= 2
}
