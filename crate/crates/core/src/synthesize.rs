//! Gate constructors: the ancilla-free first-columns family, reference gates
//! and Haar-random negative controls.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::decompose::BipartiteGate;
use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix};
use crate::pauli::PauliGroup;

/// Designated B basis state of the first-columns construction.
pub const PRODUCT_STATE_INDEX: usize = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthesisSeed {
    pub rng_seed: u64,
    pub da: usize,
    pub db: usize,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-distributed `n×n` unitary: QR of a complex Ginibre matrix with the
/// phases of `diag(R)` moved into `Q`.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let z = gaussian_matrix(n, n, rng);
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q.column_mut(k).iter_mut().for_each(|x| *x *= phase);
    }
    q
}

/// Orthonormalizes `cols[k..]` against all earlier columns (two passes of
/// modified Gram–Schmidt). The first `k` columns must already be orthonormal.
fn complete_orthonormal(m: &mut ComplexMatrix, fixed: usize) {
    let n = m.ncols();
    for c in fixed..n {
        for _ in 0..2 {
            for p in 0..c {
                let proj = m.column(p).dotc(&m.column(c));
                let prev = m.column(p).into_owned();
                m.column_mut(c).axpy(-proj, &prev, C64::new(1.0, 0.0));
            }
        }
        let norm = m.column(c).norm();
        m.column_mut(c).unscale_mut(norm);
    }
}

pub fn haar_random_gate(da: usize, db: usize, rng_seed: u64) -> Result<BipartiteGate> {
    let mut rng = rng_for(rng_seed);
    BipartiteGate::new(da, db, haar_unitary(da * db, &mut rng))
}

/// The `d_A` columns of a first-columns gate acting on `|j⟩_A|0⟩_B`, built
/// from `d_A²` orthonormal vectors `v_f`: column `j` is
/// `Σ_f Γ(f)|j⟩ ⊗ v_f / d_A`.
pub fn first_columns(group: &PauliGroup, frame: &[nalgebra::DVector<C64>]) -> Vec<nalgebra::DVector<C64>> {
    let da = group.dim();
    let db = frame[0].len();
    let inv = C64::new(1.0 / da as f64, 0.0);
    (0..da)
        .map(|j| {
            let mut col = nalgebra::DVector::zeros(da * db);
            for (gamma, v) in group.matrices().iter().zip(frame) {
                for i in 0..da {
                    let g = gamma[(i, j)];
                    if g.norm_sqr() == 0.0 {
                        continue;
                    }
                    col.rows_mut(i * db, db).axpy(g * inv, v, C64::new(1.0, 0.0));
                }
            }
            col
        })
        .collect()
}

/// Ancilla-free maximally entangling gate: the first columns of the `W(f)`
/// are `v_f / d_A` for a random orthonormal frame `{v_f}`, so
/// `ρ = |0⟩⟨0|` satisfies the orthonormality conditions. Requires
/// `d_B ≥ d_A²`. The rest of the unitary is a seeded random completion.
pub fn first_columns_gate(seed: SynthesisSeed) -> Result<BipartiteGate> {
    let SynthesisSeed { rng_seed, da, db } = seed;
    if db < da * da {
        return Err(Error::InvalidDimension(format!(
            "first-columns construction needs d_B >= d_A^2, got d_A={da}, d_B={db}"
        )));
    }
    let group = PauliGroup::new(da)?;
    let mut rng = rng_for(rng_seed);
    let frame_u = haar_unitary(db, &mut rng);
    let frame: Vec<_> = (0..da * da).map(|f| frame_u.column(f).into_owned()).collect();
    let fixed = first_columns(&group, &frame);

    let n = da * db;
    // Fixed columns first, random fill after, then orthonormal completion.
    let mut work = gaussian_matrix(n, n, &mut rng);
    for (j, col) in fixed.iter().enumerate() {
        work.set_column(j, col);
    }
    complete_orthonormal(&mut work, da);

    // Fixed columns go to |j⟩_A|0⟩_B; the remaining ones fill the rest in order.
    let mut u = ComplexMatrix::zeros(n, n);
    let mut next = da;
    for c in 0..n {
        let (a, b) = (c / db, c % db);
        let src = if b == PRODUCT_STATE_INDEX {
            a
        } else {
            let s = next;
            next += 1;
            s
        };
        u.set_column(c, &work.column(src));
    }
    BipartiteGate::new(da, db, u)
}

/// Generalized SWAP on `C^d ⊗ C^d`: `|i⟩|j⟩ → |j⟩|i⟩`.
pub fn swap_gate(d: usize) -> Result<BipartiteGate> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("swap needs d >= 2, got {d}")));
    }
    let n = d * d;
    let mut u = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            u[(j * d + i, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    BipartiteGate::new(d, d, u)
}

/// `|a,b⟩ → |b, a⊕b⟩`: CNOT controlled on A followed by CNOT controlled on B.
pub fn double_cnot_gate() -> BipartiteGate {
    let mut u = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            u[(b * 2 + (a ^ b), a * 2 + b)] = C64::new(1.0, 0.0);
        }
    }
    BipartiteGate::new(2, 2, u).expect("permutation matrix")
}

/// CNOT with control on A.
pub fn cnot_gate() -> BipartiteGate {
    let mut u = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            u[(a * 2 + (a ^ b), a * 2 + b)] = C64::new(1.0, 0.0);
        }
    }
    BipartiteGate::new(2, 2, u).expect("permutation matrix")
}

pub fn identity_gate(da: usize, db: usize) -> Result<BipartiteGate> {
    BipartiteGate::new(da, db, crate::linalg::identity(da * db))
}
