//! Certification and synthesis of maximally entangling bipartite unitaries.
//!
//! A gate `U` on `C^{d_A} ⊗ C^{d_B}` (`d_A ≤ d_B`) can raise the entanglement
//! of an ancilla-assisted input by at most `2 log₂ d_A` ebits. Expanding
//! `U = Σ_f Γ(f) ⊗ W(f)` over the generalized Pauli group on A, the gate
//! reaches that ceiling exactly when some PSD `ρ` on B satisfies
//! `Tr[W(f) ρ W(g)†] = δ(f,g)/d_A²` for every pair of group elements.
//!
//! * [`pauli`]: the group, its matrices and factor system.
//! * [`decompose`]: `U ↔ {W(f)}` and the operator Schmidt rank.
//! * [`certify`]: the feasibility search for `ρ`.
//! * [`synthesize`]: constructions of maximal gates and random controls.
//! * [`hamiltonian2q`]: the two-qubit canonical family.
//! * [`verify`]: state-vector simulation of the entanglement jump.

pub mod certify;
pub mod decompose;
pub mod error;
pub mod hamiltonian2q;
pub mod linalg;
pub mod par;
pub mod pauli;
pub mod synthesize;
pub mod verify;

pub use certify::{certify, certify_adjoint, Certificate, FeasibilityOptions, Status};
pub use decompose::{BipartiteGate, PauliDecomposition};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use pauli::{PauliGroup, PauliIndex};
