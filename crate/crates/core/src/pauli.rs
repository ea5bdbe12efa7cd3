//! Generalized Pauli (Weyl–Heisenberg) operators `Γ(m,n) = e^{iθ_mn} X^m Z^n`
//! with `θ_mn = π·(mn mod d)/d`, `X|k⟩ = |k+1 mod d⟩` and `Z|k⟩ = ω^k|k⟩`.
//!
//! The phase `θ_mn` normalizes the factor system so that
//! `μ(e,g) = μ(g,e) = μ(g,g⁻¹) = 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix};

/// Group element `f = (m, n)` of `Z_d × Z_d`; the identity is `(0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliIndex {
    pub m: usize,
    pub n: usize,
}

impl PauliIndex {
    pub const IDENTITY: PauliIndex = PauliIndex { m: 0, n: 0 };

    pub fn new(m: usize, n: usize, d: usize) -> Self {
        PauliIndex { m: m % d, n: n % d }
    }

    /// Position in the canonical ordering `m·d + n`.
    pub fn flat(self, d: usize) -> usize {
        self.m * d + self.n
    }

    pub fn from_flat(k: usize, d: usize) -> Self {
        PauliIndex { m: k / d, n: k % d }
    }

    pub fn inverse(self, d: usize) -> Self {
        PauliIndex::new(d - self.m, d - self.n, d)
    }
}

impl std::fmt::Display for PauliIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// The `d²` generalized Pauli matrices of dimension `d`, built once.
#[derive(Clone, Debug)]
pub struct PauliGroup {
    d: usize,
    matrices: Vec<ComplexMatrix>,
}

impl PauliGroup {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(format!(
                "Pauli group needs d >= 2, got {d}"
            )));
        }
        let matrices = (0..d * d)
            .map(|k| build_gamma(PauliIndex::from_flat(k, d), d))
            .collect();
        Ok(PauliGroup { d, matrices })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `|G| = d²`.
    pub fn order(&self) -> usize {
        self.d * self.d
    }

    pub fn indices(&self) -> impl Iterator<Item = PauliIndex> + '_ {
        (0..self.order()).map(move |k| PauliIndex::from_flat(k, self.d))
    }

    pub fn gamma(&self, f: PauliIndex) -> &ComplexMatrix {
        &self.matrices[PauliIndex::new(f.m, f.n, self.d).flat(self.d)]
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn inverse(&self, f: PauliIndex) -> PauliIndex {
        f.inverse(self.d)
    }

    /// Returns `(fg, μ(f,g))` with `Γ(f)Γ(g) = μ(f,g)·Γ(fg)`.
    pub fn compose(&self, f: PauliIndex, g: PauliIndex) -> (PauliIndex, C64) {
        compose(f, g, self.d)
    }
}

fn theta_numerator(f: PauliIndex, d: usize) -> usize {
    (f.m * f.n) % d
}

/// `Γ(f)Γ(g) = μ(f,g)·Γ(fg)`. The phase is computed exactly as `e^{iπk/d}`
/// for an integer `k` reduced mod `2d`.
///
/// `Z^a X^b = ω^{ab} X^b Z^a`, so
/// `μ = exp(iπ[θ̂_f + θ̂_g − θ̂_fg + 2·n_f·m_g]/d)` with `θ̂ = mn mod d`.
pub fn compose(f: PauliIndex, g: PauliIndex, d: usize) -> (PauliIndex, C64) {
    let f = PauliIndex::new(f.m, f.n, d);
    let g = PauliIndex::new(g.m, g.n, d);
    let fg = PauliIndex::new(f.m + g.m, f.n + g.n, d);
    let two_d = 2 * d;
    let k = (theta_numerator(f, d) + theta_numerator(g, d) + 2 * f.n * g.m + two_d
        - theta_numerator(fg, d))
        % two_d;
    let mu = if k == 0 {
        C64::new(1.0, 0.0)
    } else {
        C64::from_polar(1.0, PI * k as f64 / d as f64)
    };
    (fg, mu)
}

fn build_gamma(f: PauliIndex, d: usize) -> ComplexMatrix {
    let phase = C64::from_polar(1.0, PI * theta_numerator(f, d) as f64 / d as f64);
    // (X^m Z^n)|k⟩ = ω^{nk} |k+m⟩
    let mut g = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        let omega_pow = (f.n * k) % d;
        let z = C64::from_polar(1.0, 2.0 * PI * omega_pow as f64 / d as f64);
        g[((k + f.m) % d, k)] = phase * z;
    }
    // Snap round-off so that e.g. e^{iπ/2} is exactly i.
    for z in g.iter_mut() {
        if z.re.abs() < 1e-15 {
            z.re = 0.0;
        }
        if z.im.abs() < 1e-15 {
            z.im = 0.0;
        }
    }
    g
}
