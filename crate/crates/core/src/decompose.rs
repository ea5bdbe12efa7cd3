//! Expansion of a bipartite gate as `U = Σ_f Γ(f) ⊗ W(f)` over the
//! generalized Pauli group on the smaller factor.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{identity, max_abs_diff, unitarity_deviation, C64, ComplexMatrix};
use crate::pauli::{PauliGroup, PauliIndex};

/// Unitarity tolerance for gates built in memory.
pub const GATE_UNITARY_TOL: f64 = 1e-10;
/// Relative singular-value cutoff for [`PauliDecomposition::operator_schmidt_rank`].
pub const SCHMIDT_RANK_TOL: f64 = 1e-8;

/// A unitary on `C^{d_A} ⊗ C^{d_B}` with `d_A ≤ d_B`; slot order A then B.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteGate {
    da: usize,
    db: usize,
    u: ComplexMatrix,
}

impl BipartiteGate {
    pub fn new(da: usize, db: usize, u: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(da, db, u, GATE_UNITARY_TOL)
    }

    /// Like [`BipartiteGate::new`] with an explicit unitarity tolerance.
    pub fn with_tolerance(da: usize, db: usize, u: ComplexMatrix, tol: f64) -> Result<Self> {
        if da < 2 {
            return Err(Error::InvalidDimension(format!("d_A must be >= 2, got {da}")));
        }
        if db < da {
            return Err(Error::InvalidDimension(format!(
                "d_A <= d_B required, got d_A={da}, d_B={db}"
            )));
        }
        let n = da * db;
        if u.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "gate on {da}x{db} must be {n}x{n}, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        if !crate::linalg::is_finite(&u) {
            return Err(Error::NonFinite);
        }
        let dev = unitarity_deviation(&u);
        if dev > tol {
            return Err(Error::NotUnitary(dev));
        }
        Ok(BipartiteGate { da, db, u })
    }

    pub fn da(&self) -> usize {
        self.da
    }

    pub fn db(&self) -> usize {
        self.db
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.u
    }

    pub fn adjoint(&self) -> BipartiteGate {
        BipartiteGate {
            da: self.da,
            db: self.db,
            u: self.u.adjoint(),
        }
    }

    /// Block `(i, j)` of `U`, i.e. `(⟨i|_A ⊗ I_B) U (|j⟩_A ⊗ I_B)`.
    fn block(&self, i: usize, j: usize) -> nalgebra::DMatrixView<'_, C64> {
        self.u.view((i * self.db, j * self.db), (self.db, self.db))
    }
}

/// The Bob-side operators `W(f)`, one per group element in flat order.
#[derive(Clone, Debug)]
pub struct PauliDecomposition {
    da: usize,
    db: usize,
    w: Vec<ComplexMatrix>,
}

impl PauliDecomposition {
    /// `W(f) = Tr_A[(Γ(f)† ⊗ I_B) U] / d_A`.
    pub fn extract(gate: &BipartiteGate) -> Result<Self> {
        let group = PauliGroup::new(gate.da)?;
        Ok(Self::extract_with(gate, &group))
    }

    pub(crate) fn extract_with(gate: &BipartiteGate, group: &PauliGroup) -> Self {
        let (da, db) = (gate.da, gate.db);
        let scale = 1.0 / da as f64;
        let w = group
            .matrices()
            .iter()
            .map(|gamma| {
                // Tr_A[(Γ†⊗I)U] = Σ_{ij} conj(Γ_ji) · U_block(j,i)
                let mut acc = ComplexMatrix::zeros(db, db);
                for j in 0..da {
                    for i in 0..da {
                        let c = gamma[(j, i)].conj();
                        if c.norm_sqr() == 0.0 {
                            continue;
                        }
                        acc += gate.block(j, i) * c;
                    }
                }
                acc * C64::new(scale, 0.0)
            })
            .collect();
        PauliDecomposition { da, db, w }
    }

    /// Builds a decomposition from explicit operators in flat group order.
    pub fn from_operators(da: usize, db: usize, w: Vec<ComplexMatrix>) -> Result<Self> {
        if da < 2 || db < da {
            return Err(Error::InvalidDimension(format!(
                "need 2 <= d_A <= d_B, got d_A={da}, d_B={db}"
            )));
        }
        if w.len() != da * da {
            return Err(Error::DimensionMismatch(format!(
                "expected {} operators, got {}",
                da * da,
                w.len()
            )));
        }
        if let Some(bad) = w.iter().find(|m| m.shape() != (db, db)) {
            return Err(Error::DimensionMismatch(format!(
                "W operators must be {db}x{db}, got {}x{}",
                bad.nrows(),
                bad.ncols()
            )));
        }
        Ok(PauliDecomposition { da, db, w })
    }

    pub fn da(&self) -> usize {
        self.da
    }

    pub fn db(&self) -> usize {
        self.db
    }

    pub fn w(&self, f: PauliIndex) -> &ComplexMatrix {
        &self.w[PauliIndex::new(f.m, f.n, self.da).flat(self.da)]
    }

    /// All `W(f)` in flat order `f = m·d_A + n`.
    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.w
    }

    /// `Σ_f Γ(f) ⊗ W(f)`, rejected unless unitary within 1e-8.
    pub fn reconstruct(&self) -> Result<BipartiteGate> {
        let group = PauliGroup::new(self.da)?;
        let u = self.resum(&group);
        BipartiteGate::with_tolerance(self.da, self.db, u, 1e-8)
    }

    pub(crate) fn resum(&self, group: &PauliGroup) -> ComplexMatrix {
        let n = self.da * self.db;
        let mut u = ComplexMatrix::zeros(n, n);
        for (gamma, w) in group.matrices().iter().zip(&self.w) {
            for i in 0..self.da {
                for j in 0..self.da {
                    let c = gamma[(i, j)];
                    if c.norm_sqr() == 0.0 {
                        continue;
                    }
                    let mut blk = u.view_mut((i * self.db, j * self.db), (self.db, self.db));
                    blk += w * c;
                }
            }
        }
        u
    }

    /// Number of singular values of the stacked, vectorized `W(f)` above
    /// `tol · σ_max`. Equals the operator Schmidt rank of `U` because the
    /// `Γ(f)` are orthogonal.
    pub fn operator_schmidt_rank(&self, tol: f64) -> usize {
        let rows = self.w.len();
        let cols = self.db * self.db;
        let stacked = DMatrix::from_fn(rows, cols, |f, k| self.w[f][(k / self.db, k % self.db)]);
        let sv = stacked.singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        if max == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > tol * max).count()
    }

    /// `Σ_f W(f)† W(f)`, which is `I_B` for a unitary gate.
    pub fn completeness(&self) -> ComplexMatrix {
        self.w
            .iter()
            .fold(ComplexMatrix::zeros(self.db, self.db), |acc, w| acc + w.adjoint() * w)
    }

    pub fn completeness_deviation(&self) -> f64 {
        max_abs_diff(&self.completeness(), &identity(self.db))
    }

    /// `Σ_f ‖W(f)‖_F²`.
    pub fn frobenius_mass(&self) -> f64 {
        self.w.iter().map(|w| w.norm_squared()).sum()
    }

    /// Decomposition with every `W(f)` replaced by `W(f)†`, which is the
    /// decomposition of `U†` up to relabelling `f → f⁻¹` (with unit phases).
    pub fn daggered(&self) -> PauliDecomposition {
        PauliDecomposition {
            da: self.da,
            db: self.db,
            w: self.w.iter().map(|w| w.adjoint()).collect(),
        }
    }
}
