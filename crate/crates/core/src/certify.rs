//! Feasibility search for the metric `ρ = MM†`.
//!
//! A gate is maximally entangling iff some PSD `ρ` on B satisfies
//! `Tr[W(f) ρ W(g)†] = δ(f,g)/d_A²` for all group elements `f, g`. The
//! conditions are affine in `ρ`, so the search is a semidefinite feasibility
//! problem: intersect an affine slice of Hermitian matrices with the PSD cone.
//!
//! * `d_A = d_B`: the only candidate is `ρ = I/d_B`, so a single evaluation
//!   decides the question.
//! * `d_A < d_B`: solve the affine system, then run Dykstra alternating
//!   projections from several seeded starting points inside the slice. Near a
//!   solution the iterate is refined by Gauss–Newton on a low-rank
//!   factorization `ρ = YY†`, which lands exactly on the boundary faces where
//!   alternating projections crawl.

use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::decompose::{BipartiteGate, PauliDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{
    coords_to_hermitian, hermitian_eig_unchecked, hermitian_to_coords, identity, max_abs_diff,
    trace, C64, ComplexMatrix, RealMatrix,
};
use crate::par;
use crate::pauli::PauliIndex;

/// Relative singular-value cutoff used to split the constraint matrix into
/// its range and nullspace.
const RANK_TOL: f64 = 1e-10;
/// Window (iterations) of the plateau test.
const PLATEAU_WINDOW: usize = 50;
/// A Dykstra iterate this close to the slice is handed to the polisher.
const POLISH_TRIGGER: f64 = 1e-3;
const POLISH_EVERY: usize = 25;
const POLISH_MAX_ITERS: usize = 40;
const POLISH_FLOOR: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityOptions {
    pub affine_tol: f64,
    pub psd_tol: f64,
    pub max_iters: usize,
    pub restarts: usize,
    pub rng_seed: u64,
}

impl Default for FeasibilityOptions {
    fn default() -> Self {
        FeasibilityOptions {
            affine_tol: 1e-9,
            psd_tol: 1e-9,
            max_iters: 5000,
            restarts: 16,
            rng_seed: 0,
        }
    }
}

impl FeasibilityOptions {
    pub fn validate(&self) -> Result<()> {
        let tols_ok = self.affine_tol > 0.0 && self.psd_tol > 0.0;
        if !tols_ok || !self.affine_tol.is_finite() || !self.psd_tol.is_finite() {
            return Err(Error::InvalidDimension(
                "tolerances must be positive and finite".into(),
            ));
        }
        if self.max_iters == 0 || self.restarts == 0 {
            return Err(Error::InvalidDimension(
                "iteration and restart budgets must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Certified,
    Infeasible,
    NotFound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Certified => "CERTIFIED",
            Status::Infeasible => "INFEASIBLE",
            Status::NotFound => "NOT_FOUND",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CERTIFIED" => Ok(Status::Certified),
            "INFEASIBLE" => Ok(Status::Infeasible),
            "NOT_FOUND" => Ok(Status::NotFound),
            other => Err(Error::NotCertified(format!("unknown status {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub status: Status,
    pub rho: Option<ComplexMatrix>,
    /// Largest violation of a single real constraint row.
    pub affine_residual: f64,
    pub min_eigenvalue: f64,
    /// `‖O − I/d_A²‖_max` for the reported `ρ` (or the best candidate).
    pub gram_deviation: f64,
    pub reason: Option<String>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    fn infeasible(reason: String, affine_residual: f64, gram_deviation: f64) -> Self {
        Certificate {
            status: Status::Infeasible,
            rho: None,
            affine_residual,
            min_eigenvalue: f64::NAN,
            gram_deviation,
            reason: Some(reason),
        }
    }
}

/// What a row of the constraint system encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    /// `Re Tr[W(f) ρ W(g)†] = 0` for `g < f`.
    OffDiagonalRe(PauliIndex, PauliIndex),
    /// `Im Tr[W(f) ρ W(g)†] = 0` for `g < f`.
    OffDiagonalIm(PauliIndex, PauliIndex),
    /// `Tr[W(f) ρ W(f)†] = 1/d_A²`.
    Normalization(PauliIndex),
}

/// Real affine system `A x = b` over the coordinates of Hermitian `ρ` in
/// [`crate::linalg::hermitian_basis`].
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub da: usize,
    pub db: usize,
    pub matrix: RealMatrix,
    pub rhs: DVector<f64>,
    pub rows: Vec<RowKind>,
}

impl ConstraintSystem {
    pub fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x - &self.rhs
    }

    pub fn residual_max(&self, x: &DVector<f64>) -> f64 {
        self.residual(x).amax()
    }

    /// `‖O − I/d_A²‖_max` read off the row residuals.
    pub fn gram_deviation(&self, x: &DVector<f64>) -> f64 {
        let r = self.residual(x);
        let mut dev: f64 = 0.0;
        let mut k = 0;
        while k < self.rows.len() {
            match self.rows[k] {
                RowKind::OffDiagonalRe(..) => {
                    dev = dev.max(r[k].hypot(r[k + 1]));
                    k += 2;
                }
                _ => {
                    dev = dev.max(r[k].abs());
                    k += 1;
                }
            }
        }
        dev
    }
}

/// `c_k = Tr[B_k Q]` for every element `B_k` of the Hermitian basis.
fn basis_traces(q: &ComplexMatrix) -> Vec<C64> {
    let d = q.nrows();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i_unit = C64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(q[(i, i)]);
    }
    for i in 0..d {
        for j in i + 1..d {
            out.push((q[(j, i)] + q[(i, j)]) * s);
            out.push((q[(i, j)] - q[(j, i)]) * i_unit * s);
        }
    }
    out
}

/// Assembles the conditions `Tr[W(f) ρ W(g)†] = δ(f,g)/d_A²`.
///
/// Off-diagonal conditions are taken once per unordered pair `g < f`; the
/// `(f, g)` condition is the complex conjugate of `(g, f)` for Hermitian `ρ`.
/// Row layout: for each pair a real-part and an imaginary-part row, followed
/// by the `d_A²` normalization rows.
pub fn build_constraints(dec: &PauliDecomposition) -> ConstraintSystem {
    let (da, db) = (dec.da(), dec.db());
    let order = da * da;
    let n_rows = order * (order - 1) + order;
    let n_cols = db * db;
    let ops = dec.operators();
    let mut matrix = RealMatrix::zeros(n_rows, n_cols);
    let mut rhs = DVector::zeros(n_rows);
    let mut rows = Vec::with_capacity(n_rows);
    let mut r = 0;
    for f in 0..order {
        for g in 0..f {
            // Tr[W(f) ρ W(g)†] = Tr[ρ W(g)† W(f)]
            let q = ops[g].adjoint() * &ops[f];
            let c = basis_traces(&q);
            for (k, z) in c.iter().enumerate() {
                matrix[(r, k)] = z.re;
                matrix[(r + 1, k)] = z.im;
            }
            let (pf, pg) = (PauliIndex::from_flat(f, da), PauliIndex::from_flat(g, da));
            rows.push(RowKind::OffDiagonalRe(pf, pg));
            rows.push(RowKind::OffDiagonalIm(pf, pg));
            r += 2;
        }
    }
    let target = 1.0 / (order as f64);
    for (f, w) in ops.iter().enumerate() {
        let q = w.adjoint() * w;
        for (k, z) in basis_traces(&q).iter().enumerate() {
            matrix[(r, k)] = z.re;
        }
        rhs[r] = target;
        rows.push(RowKind::Normalization(PauliIndex::from_flat(f, da)));
        r += 1;
    }
    debug_assert_eq!(r, n_rows);
    ConstraintSystem { da, db, matrix, rhs, rows }
}

/// `[O]_{gf} = Tr[W(f) ρ W(g)†]`.
pub fn gram_matrix(dec: &PauliDecomposition, rho: &ComplexMatrix) -> ComplexMatrix {
    let ops = dec.operators();
    let n = ops.len();
    let w_rho: Vec<ComplexMatrix> = ops.iter().map(|w| w * rho).collect();
    DMatrix::from_fn(n, n, |g, f| {
        // Tr[A B†] = Σ A_ij conj(B_ij)
        w_rho[f]
            .iter()
            .zip(ops[g].iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    })
}

/// `‖O − I/d_A²‖_max`.
pub fn gram_deviation(dec: &PauliDecomposition, rho: &ComplexMatrix) -> f64 {
    let o = gram_matrix(dec, rho);
    let n = o.nrows();
    max_abs_diff(&o, &identity(n).scale(1.0 / n as f64))
}

/// Exact decision for `d_A = d_B`, where `ρ = I/d_B` is the only candidate.
pub fn fast_path_equal_dims(dec: &PauliDecomposition, opts: &FeasibilityOptions) -> Result<Certificate> {
    if dec.da() != dec.db() {
        return Err(Error::DimensionMismatch(format!(
            "fast path requires d_A = d_B, got {} and {}",
            dec.da(),
            dec.db()
        )));
    }
    let d = dec.db();
    let rho = identity(d).scale(1.0 / d as f64);
    let dev = gram_deviation(dec, &rho);
    if dev <= opts.affine_tol {
        Ok(Certificate {
            status: Status::Certified,
            rho: Some(rho),
            affine_residual: dev,
            min_eigenvalue: 1.0 / d as f64,
            gram_deviation: dev,
            reason: None,
        })
    } else {
        Ok(Certificate::infeasible(
            format!("d_A = d_B and the unique candidate I/{d} violates the conditions by {dev:.3e}"),
            dev,
            dev,
        ))
    }
}

/// Affine slice `{x0 + N z}` of the constraint system.
struct AffineSlice {
    x0: DVector<f64>,
    /// Orthonormal columns spanning the nullspace of `A`.
    basis: RealMatrix,
}

impl AffineSlice {
    fn new(system: &ConstraintSystem) -> Self {
        let a = &system.matrix;
        let (rows, cols) = a.shape();
        let padded = if rows < cols {
            let mut p = RealMatrix::zeros(cols, cols);
            p.view_mut((0, 0), (rows, cols)).copy_from(a);
            p
        } else {
            a.clone()
        };
        let mut rhs = DVector::zeros(padded.nrows());
        rhs.rows_mut(0, rows).copy_from(&system.rhs);
        let svd = padded.svd(true, true);
        let u = svd.u.as_ref().expect("left singular vectors requested");
        let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
        let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let cutoff = RANK_TOL * sigma_max;
        let mut x0 = DVector::zeros(cols);
        let mut null_rows = Vec::new();
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > cutoff && s > 0.0 {
                let coef = u.column(k).dot(&rhs) / s;
                x0 += v_t.row(k).transpose() * coef;
            } else {
                null_rows.push(k);
            }
        }
        let mut basis = RealMatrix::zeros(cols, null_rows.len());
        for (c, &k) in null_rows.iter().enumerate() {
            basis.set_column(c, &v_t.row(k).transpose());
        }
        AffineSlice { x0, basis }
    }

    fn dim(&self) -> usize {
        self.basis.ncols()
    }

    fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        let delta = x - &self.x0;
        &self.x0 + &self.basis * (self.basis.transpose() * delta)
    }
}

/// Frobenius projection onto the PSD cone. Also returns the eigenvalues of the
/// input.
fn project_psd(x: &DVector<f64>, d: usize) -> (DVector<f64>, Vec<f64>) {
    let h = coords_to_hermitian(x, d);
    let eig = hermitian_eig_unchecked(&h);
    let p = eig.map_spectrum(|l| C64::new(l.max(0.0), 0.0));
    (hermitian_to_coords(&p), eig.eigenvalues)
}

fn min_eig(x: &DVector<f64>, d: usize) -> f64 {
    hermitian_eig_unchecked(&coords_to_hermitian(x, d)).min_eigenvalue()
}

/// Gauss–Newton on `F(Y) = A·coords(YY†) − b` with `Y` of shape `d × r`,
/// started from the dominant rank-`r` part of `guess`.
fn polish_rank(system: &ConstraintSystem, guess: &ComplexMatrix, rank: usize, tol: f64) -> Option<ComplexMatrix> {
    let d = system.db;
    let eig = hermitian_eig_unchecked(guess);
    let mut y = ComplexMatrix::zeros(d, rank);
    for c in 0..rank {
        let k = d - 1 - c;
        let scale = eig.eigenvalues[k].max(0.0).sqrt();
        y.set_column(c, &(eig.eigenvectors.column(k) * C64::new(scale, 0.0)));
    }
    let n_params = 2 * d * rank;
    let mut prev = f64::INFINITY;
    let mut best: Option<(f64, ComplexMatrix)> = None;
    for it in 0..POLISH_MAX_ITERS {
        let rho = &y * y.adjoint();
        let res = system.residual(&hermitian_to_coords(&rho));
        let err = res.amax();
        if !err.is_finite() {
            break;
        }
        if best.as_ref().is_none_or(|b| err < b.0) {
            best = Some((err, rho));
        }
        // Keep going past `tol` while the quadratic phase still pays off.
        if err <= POLISH_FLOOR || (it >= 8 && err > 0.9 * prev) {
            break;
        }
        prev = err;
        let mut jac = RealMatrix::zeros(system.matrix.nrows(), n_params);
        for p in 0..n_params {
            let (entry, imag) = (p / 2, p % 2 == 1);
            let (a, b) = (entry / rank, entry % rank);
            let dir = if imag { C64::new(0.0, 1.0) } else { C64::new(1.0, 0.0) };
            // d(YY†) = E Y† + Y E†, E = dir·|a⟩⟨b|
            let mut drho = ComplexMatrix::zeros(d, d);
            for j in 0..d {
                let v = dir * y[(j, b)].conj();
                drho[(a, j)] += v;
                drho[(j, a)] += v.conj();
            }
            jac.set_column(p, &(&system.matrix * hermitian_to_coords(&drho)));
        }
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let Ok(step) = svd.solve(&res, smax * 1e-12) else {
            break;
        };
        for p in 0..n_params {
            let (entry, imag) = (p / 2, p % 2 == 1);
            let (a, b) = (entry / rank, entry % rank);
            if imag {
                y[(a, b)].im -= step[p];
            } else {
                y[(a, b)].re -= step[p];
            }
        }
    }
    let rho = &y * y.adjoint();
    let err = system.residual_max(&hermitian_to_coords(&rho));
    if best.as_ref().is_none_or(|b| err < b.0) {
        best = Some((err, rho));
    }
    best.filter(|b| b.0 <= tol).map(|b| b.1)
}

/// Tries the polisher at the ranks suggested by the spectrum of `guess`, then
/// (when `all_ranks`) at every other rank. Dykstra approaches rank-deficient
/// boundary points sublinearly, so its spectrum can overstate the rank.
fn polish(system: &ConstraintSystem, guess: &DVector<f64>, tol: f64, all_ranks: bool) -> Option<ComplexMatrix> {
    let d = system.db;
    let h = coords_to_hermitian(guess, d);
    let eig = hermitian_eig_unchecked(&h);
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return None;
    }
    let mut ranks: Vec<usize> = [1e-3, 1e-6]
        .iter()
        .map(|rel| eig.eigenvalues.iter().filter(|&&l| l > rel * top).count().max(1))
        .collect();
    ranks.dedup();
    if all_ranks {
        ranks.extend((1..=d).filter(|r| !ranks.contains(r)).collect::<Vec<_>>());
    }
    ranks.into_iter().find_map(|r| polish_rank(system, &h, r, tol))
}

enum RestartOutcome {
    Found(ComplexMatrix),
    Failed { min_eigenvalue: f64, residual: f64, x: DVector<f64> },
    Aborted,
}

fn run_restart(
    system: &ConstraintSystem,
    slice: &AffineSlice,
    opts: &FeasibilityOptions,
    index: usize,
    found: &AtomicUsize,
) -> RestartOutcome {
    let d = system.db;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    rng.set_stream(index as u64);
    let scale = if index == 0 {
        0.0
    } else {
        slice.x0.norm().max(1.0 / d as f64) * 4.0 * 0.5f64.powi(index as i32 - 1)
    };
    let z = DVector::from_fn(slice.dim(), |_, _| {
        let g: f64 = StandardNormal.sample(&mut rng);
        g * scale
    });
    let mut x = &slice.x0 + &slice.basis * z;

    let n = x.len();
    let mut p = DVector::zeros(n);
    let mut q = DVector::zeros(n);
    let mut history: Vec<(f64, f64)> = Vec::with_capacity(opts.max_iters);
    let mut last_y = slice.project(&x);
    for it in 0..opts.max_iters {
        if it % POLISH_EVERY == 0 && found.load(Ordering::Relaxed) < index {
            return RestartOutcome::Aborted;
        }
        let y = slice.project(&(&x + &p));
        p = &x + &p - &y;
        let (x_next, _) = project_psd(&(&y + &q), d);
        q = &y + &q - &x_next;
        x = x_next;

        let residual = system.residual_max(&x);
        let lam = min_eig(&y, d);
        last_y = y;
        if residual <= opts.affine_tol && lam >= -opts.psd_tol {
            let rho = polish(system, &x, opts.affine_tol, false)
                .unwrap_or_else(|| coords_to_hermitian(&last_y, d));
            return RestartOutcome::Found(rho);
        }
        if it % POLISH_EVERY == POLISH_EVERY - 1 && residual < POLISH_TRIGGER {
            if let Some(rho) = polish(system, &x, opts.affine_tol, false) {
                return RestartOutcome::Found(rho);
            }
        }
        history.push((residual, lam));
        if history.len() > PLATEAU_WINDOW {
            let (r0, l0) = history[history.len() - 1 - PLATEAU_WINDOW];
            let stable_r = (residual - r0).abs() <= 1e-3 * r0.abs().max(1e-14);
            let stable_l = (lam - l0).abs() <= 1e-3 * l0.abs().max(1e-14);
            if stable_r && stable_l {
                break;
            }
        }
    }
    if let Some(rho) = polish(system, &x, opts.affine_tol, false) {
        return RestartOutcome::Found(rho);
    }
    RestartOutcome::Failed {
        min_eigenvalue: min_eig(&last_y, d),
        residual: system.residual_max(&x),
        x: last_y,
    }
}

fn certified(system: &ConstraintSystem, rho: ComplexMatrix) -> Certificate {
    let x = hermitian_to_coords(&rho);
    let lam = hermitian_eig_unchecked(&rho).min_eigenvalue();
    Certificate {
        status: Status::Certified,
        affine_residual: system.residual_max(&x),
        min_eigenvalue: lam,
        gram_deviation: system.gram_deviation(&x),
        rho: Some(rho),
        reason: None,
    }
}

/// Searches the PSD cone for a point of the affine slice of `system`.
pub fn find_feasible_psd(system: &ConstraintSystem, opts: &FeasibilityOptions) -> Certificate {
    let d = system.db;
    let slice = AffineSlice::new(system);
    let residual = system.residual_max(&slice.x0);
    let scale = system.matrix.norm().max(1.0);
    if residual > opts.affine_tol * scale {
        return Certificate::infeasible(
            format!("affine constraint system is inconsistent (least-squares residual {residual:.3e})"),
            residual,
            system.gram_deviation(&slice.x0),
        );
    }
    if slice.dim() == 0 {
        // The conditions pin ρ to a single Hermitian matrix.
        let lam = min_eig(&slice.x0, d);
        if lam >= -opts.psd_tol {
            let rho = polish(system, &slice.x0, opts.affine_tol, false)
                .unwrap_or_else(|| coords_to_hermitian(&slice.x0, d));
            return certified(system, rho);
        }
        return Certificate {
            min_eigenvalue: lam,
            ..Certificate::infeasible(
                format!("the unique Hermitian solution has eigenvalue {lam:.3e} < 0"),
                residual,
                system.gram_deviation(&slice.x0),
            )
        };
    }

    let found = AtomicUsize::new(usize::MAX);
    let outcomes = par::map_range(opts.restarts, |r| {
        let out = run_restart(system, &slice, opts, r, &found);
        if matches!(out, RestartOutcome::Found(_)) {
            found.fetch_min(r, Ordering::Relaxed);
        }
        out
    });
    let mut best: Option<(f64, f64, DVector<f64>)> = None;
    for out in outcomes {
        match out {
            RestartOutcome::Found(rho) => return certified(system, rho),
            RestartOutcome::Failed { min_eigenvalue, residual, x } => {
                if best.as_ref().is_none_or(|b| min_eigenvalue > b.0) {
                    best = Some((min_eigenvalue, residual, x));
                }
            }
            RestartOutcome::Aborted => {}
        }
    }
    let (lam, res, x) = best.expect("at least one restart completes when none succeed");
    if let Some(rho) = polish(system, &x, opts.affine_tol, true) {
        return certified(system, rho);
    }
    Certificate {
        status: Status::NotFound,
        rho: None,
        affine_residual: res,
        min_eigenvalue: lam,
        gram_deviation: system.gram_deviation(&x),
        reason: Some(format!(
            "no PSD point found in a {}-dimensional affine slice after {} restarts (best minimum eigenvalue {lam:.3e})",
            slice.dim(),
            opts.restarts
        )),
    }
}

/// Decides whether the decomposed gate is maximally entangling.
pub fn certify_decomposition(dec: &PauliDecomposition, opts: &FeasibilityOptions) -> Certificate {
    if dec.da() == dec.db() {
        fast_path_equal_dims(dec, opts).expect("dimensions checked")
    } else {
        find_feasible_psd(&build_constraints(dec), opts)
    }
}

pub fn certify(gate: &BipartiteGate, opts: &FeasibilityOptions) -> Result<Certificate> {
    opts.validate()?;
    let dec = PauliDecomposition::extract(gate)?;
    Ok(certify_decomposition(&dec, opts))
}

/// Certifies `U†`, i.e. whether the gate is maximally disentangling.
pub fn certify_adjoint(gate: &BipartiteGate, opts: &FeasibilityOptions) -> Result<Certificate> {
    certify(&gate.adjoint(), opts)
}

/// Checks the invariants of a CERTIFIED certificate against its gate.
pub fn check_certificate(dec: &PauliDecomposition, cert: &Certificate, opts: &FeasibilityOptions) -> Result<()> {
    if cert.status != Status::Certified {
        return Err(Error::NotCertified(cert.status.to_string()));
    }
    let rho = cert
        .rho
        .as_ref()
        .ok_or_else(|| Error::NotCertified("certificate carries no rho".into()))?;
    if rho.shape() != (dec.db(), dec.db()) {
        return Err(Error::DimensionMismatch(format!(
            "rho is {}x{} but d_B = {}",
            rho.nrows(),
            rho.ncols(),
            dec.db()
        )));
    }
    let herm = crate::linalg::hermitian_deviation(rho);
    if herm > crate::linalg::HERMITIAN_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > 1e-8 {
        return Err(Error::TraceNotOne(tr.re));
    }
    let lam = hermitian_eig_unchecked(rho).min_eigenvalue();
    if lam < -opts.psd_tol {
        return Err(Error::NegativeEigenvalue(lam));
    }
    let dev = gram_deviation(dec, rho);
    if dev > 10.0 * opts.affine_tol {
        return Err(Error::NotCertified(format!(
            "rho violates the orthonormality conditions by {dev:.3e}"
        )));
    }
    Ok(())
}
