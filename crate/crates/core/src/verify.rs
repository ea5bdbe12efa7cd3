//! State-vector check of a certificate: prepare the product input
//! `|Φ⟩_Aa ⊗ |Ψ⟩_Bb`, apply the gate to `A,B`, and measure the entanglement
//! across the `Aa | Bb` cut.
//!
//! Slot order is `(a, A, B, b)` throughout; the gate acts on the middle two.

use nalgebra::DVector;

use crate::certify::Certificate;
use crate::decompose::{BipartiteGate, PauliDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_deviation, identity, max_abs_diff, psd_sqrt, trace, von_neumann_entropy, C64,
    ComplexMatrix,
};
use crate::pauli::PauliGroup;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    /// `[d_a, d_A, d_B, d_b]`.
    pub dims: [usize; 4],
    pub amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// The state as a `(d_a d_A) × (d_B d_b)` matrix.
    fn cut_matrix(&self) -> ComplexMatrix {
        let rows = self.dims[0] * self.dims[1];
        let cols = self.dims[2] * self.dims[3];
        ComplexMatrix::from_row_slice(rows, cols, self.amplitudes.as_slice())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementReport {
    pub e_in: f64,
    pub e_out: f64,
    pub delta: f64,
    pub bjk_gram_deviation: f64,
    /// `2 log₂ d_A`.
    pub ceiling: f64,
}

impl EntanglementReport {
    pub fn reaches_ceiling(&self, tol: f64) -> bool {
        self.delta >= self.ceiling - tol
    }
}

fn validate_rho(rho: &ComplexMatrix, db: usize) -> Result<()> {
    if rho.shape() != (db, db) {
        return Err(Error::DimensionMismatch(format!(
            "rho must be {db}x{db}, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::TraceNotOne(tr.re));
    }
    Ok(())
}

/// `|Φ⟩_Aa ⊗ |Ψ⟩_Bb` with `|Φ⟩ = Σ_k |k⟩_a|k⟩_A/√d_A` and
/// `|Ψ⟩_Bb = Σ_mn M_mn |n⟩_b|m⟩_B`, `M = √ρ`.
pub fn optimal_input(rho: &ComplexMatrix, da: usize, db: usize) -> Result<StateVector> {
    validate_rho(rho, db)?;
    let m = psd_sqrt(rho)?;
    let dims = [da, da, db, db];
    let mut amps = DVector::zeros(da * da * db * db);
    let amp = 1.0 / (da as f64).sqrt();
    for k in 0..da {
        let base = (k * da + k) * db * db;
        for p in 0..db {
            for n in 0..db {
                amps[base + p * db + n] = m[(p, n)] * amp;
            }
        }
    }
    Ok(StateVector { dims, amplitudes: amps })
}

/// `(I_a ⊗ U ⊗ I_b)|ψ⟩`.
pub fn apply_gate(gate: &BipartiteGate, psi: &StateVector) -> Result<StateVector> {
    let (da, db) = (gate.da(), gate.db());
    if psi.dims != [da, da, db, db] || psi.amplitudes.len() != da * da * db * db {
        return Err(Error::DimensionMismatch(format!(
            "state dims {:?} do not match gate on {da}x{db}",
            psi.dims
        )));
    }
    let block = da * db * db;
    let mut out = DVector::zeros(psi.amplitudes.len());
    for a in 0..da {
        // rows (A,B), columns b
        let v = ComplexMatrix::from_row_slice(da * db, db, &psi.amplitudes.as_slice()[a * block..(a + 1) * block]);
        let w = gate.matrix() * v;
        for r in 0..da * db {
            for c in 0..db {
                out[a * block + r * db + c] = w[(r, c)];
            }
        }
    }
    Ok(StateVector { dims: psi.dims, amplitudes: out })
}

/// Entropy (bits) of the `aA` marginal.
pub fn entanglement_across_cut(psi: &StateVector) -> Result<f64> {
    let m = psi.cut_matrix();
    let rho = &m * m.adjoint();
    von_neumann_entropy(&rho)
}

/// The `d_A²` states `|b_jk⟩ = √d_A Σ_f Γ(f)_jk (I_b ⊗ W(f)) |Ψ⟩_Bb`, as
/// columns indexed `j·d_A + k` over `(B, b)`.
pub fn b_states(gate: &BipartiteGate, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (da, db) = (gate.da(), gate.db());
    validate_rho(rho, db)?;
    let m = psd_sqrt(rho)?;
    let group = PauliGroup::new(da)?;
    let dec = PauliDecomposition::extract_with(gate, &group);
    let wm: Vec<ComplexMatrix> = dec.operators().iter().map(|w| w * &m).collect();
    let scale = (da as f64).sqrt();
    let mut states = ComplexMatrix::zeros(db * db, da * da);
    for j in 0..da {
        for k in 0..da {
            let col = j * da + k;
            for (gamma, x) in group.matrices().iter().zip(&wm) {
                let g = gamma[(j, k)];
                if g.norm_sqr() == 0.0 {
                    continue;
                }
                for p in 0..db {
                    for n in 0..db {
                        states[(p * db + n, col)] += g * x[(p, n)] * scale;
                    }
                }
            }
        }
    }
    Ok(states)
}

/// `‖G − I‖_max` for the Gram matrix of the `|b_jk⟩`.
pub fn b_states_gram(gate: &BipartiteGate, rho: &ComplexMatrix) -> Result<f64> {
    let b = b_states(gate, rho)?;
    let gram = b.adjoint() * &b;
    Ok(max_abs_diff(&gram, &identity(gram.nrows())))
}

/// Simulates the certified input and reports the entanglement jump.
pub fn report(gate: &BipartiteGate, cert: &Certificate) -> Result<EntanglementReport> {
    if !cert.is_certified() {
        return Err(Error::NotCertified(cert.status.to_string()));
    }
    let rho = cert
        .rho
        .as_ref()
        .ok_or_else(|| Error::NotCertified("certificate carries no rho".into()))?;
    let herm = hermitian_deviation(rho);
    if herm > crate::linalg::HERMITIAN_TOL {
        return Err(Error::NotHermitian(herm));
    }
    simulate(gate, rho)
}

/// Entanglement jump produced by the input built from `rho`.
pub fn simulate(gate: &BipartiteGate, rho: &ComplexMatrix) -> Result<EntanglementReport> {
    let psi_in = optimal_input(rho, gate.da(), gate.db())?;
    let e_in = entanglement_across_cut(&psi_in)?;
    let psi_out = apply_gate(gate, &psi_in)?;
    let e_out = entanglement_across_cut(&psi_out)?;
    Ok(EntanglementReport {
        e_in,
        e_out,
        delta: e_out - e_in,
        bjk_gram_deviation: b_states_gram(gate, rho)?,
        ceiling: 2.0 * (gate.da() as f64).log2(),
    })
}
