//! Dense complex linear algebra shared by every other module.
//!
//! All composite indices follow one flattening convention: factors are listed
//! left to right and the rightmost factor varies fastest, so on `A ⊗ B` the
//! composite index is `i_A * d_B + i_B`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type RealMatrix = DMatrix<f64>;

/// Hermiticity tolerance accepted by the eigen-solvers.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above `-EIG_CLAMP` are treated as zero by `psd_sqrt` and
/// `von_neumann_entropy`.
pub const EIG_CLAMP: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct HermitianEigensystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigensystem {
    /// `V·diag(f(λ))·V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= w);
        }
        scaled * v.adjoint()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(m, &m.adjoint())
}

/// `‖U†U − I‖_max`, or infinity for a non-square input.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Kronecker product `A ⊗ B` with `(A⊗B)[i·rB+k, j·cB+l] = A[i,j]·B[k,l]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Traces out factor `traced_slot` of an operator on `⊗_k C^{dims[k]}`.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], traced_slot: usize) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.nrows() != total {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{} but factor dimensions {:?} multiply to {}",
            m.nrows(),
            m.ncols(),
            dims,
            total
        )));
    }
    if traced_slot >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "traced slot {traced_slot} out of range for {} factors",
            dims.len()
        )));
    }
    // View indices as (outer, traced, inner).
    let outer: usize = dims[..traced_slot].iter().product();
    let traced = dims[traced_slot];
    let inner: usize = dims[traced_slot + 1..].iter().product();
    let out_dim = outer * inner;
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for o1 in 0..outer {
        for i1 in 0..inner {
            let r = o1 * inner + i1;
            for o2 in 0..outer {
                for i2 in 0..inner {
                    let c = o2 * inner + i2;
                    let mut acc = C64::new(0.0, 0.0);
                    for t in 0..traced {
                        acc += m[((o1 * traced + t) * inner + i1, (o2 * traced + t) * inner + i2)];
                    }
                    out[(r, c)] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigensystem> {
    if !is_finite(h) {
        return Err(Error::NonFinite);
    }
    let dev = hermitian_deviation(h);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(hermitian_eig_unchecked(h))
}

/// Same as [`hermitian_eig`] but symmetrizes instead of validating.
pub(crate) fn hermitian_eig_unchecked(h: &ComplexMatrix) -> HermitianEigensystem {
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = order.len();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigensystem {
        eigenvalues: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        eigenvectors: vecs,
    }
}

/// `e^{-iH}` for Hermitian `H`.
pub fn expm_minus_i(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    Ok(eig.map_spectrum(|l| C64::from_polar(1.0, -l)))
}

/// The PSD square root `M` of `ρ`, so `MM† = ρ`. Eigenvalues in
/// `[-EIG_CLAMP, 0)` are clamped to zero.
pub fn psd_sqrt(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(rho)?;
    let min = eig.min_eigenvalue();
    if min < -EIG_CLAMP {
        return Err(Error::NegativeEigenvalue(min));
    }
    Ok(eig.map_spectrum(|l| C64::new(l.max(0.0).sqrt(), 0.0)))
}

/// Orthonormal basis of the numerical nullspace of `a`: right singular
/// vectors whose singular value is at most `tol · σ_max`.
pub fn nullspace_real(a: &RealMatrix, tol: f64) -> Vec<DVector<f64>> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the SVD yields a full set of right singular vectors.
    let padded = if rows < cols {
        let mut p = RealMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = tol * sigma_max;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect()
}

/// Von Neumann entropy in bits. Requires unit trace within 1e-8.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::TraceNotOne(tr.re));
    }
    let eig = hermitian_eig(rho)?;
    let min = eig.min_eigenvalue();
    if min < -EIG_CLAMP {
        return Err(Error::NegativeEigenvalue(min));
    }
    let s: f64 = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    // `+ 0.0` turns the `-0.0` of a pure state into `0.0`.
    Ok(s.clamp(0.0, (rho.nrows() as f64).log2()) + 0.0)
}

/// Orthonormal (Frobenius) basis of the real vector space of `d×d` Hermitian
/// matrices. Euclidean distance between coordinate vectors equals Frobenius
/// distance between the matrices.
///
/// Coordinate order: the `d` diagonal entries, then for each `i < j` the
/// symmetric part `(E_ij + E_ji)/√2` followed by the antisymmetric part
/// `i(E_ij − E_ji)/√2`.
pub fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut e = ComplexMatrix::zeros(d, d);
        e[(i, i)] = C64::new(1.0, 0.0);
        out.push(e);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(i, j)] = C64::new(s, 0.0);
            sym[(j, i)] = C64::new(s, 0.0);
            out.push(sym);
            let mut asym = ComplexMatrix::zeros(d, d);
            asym[(i, j)] = C64::new(0.0, -s);
            asym[(j, i)] = C64::new(0.0, s);
            out.push(asym);
        }
    }
    out
}

/// Coordinates of a Hermitian matrix in [`hermitian_basis`].
pub fn hermitian_to_coords(h: &ComplexMatrix) -> DVector<f64> {
    let d = h.nrows();
    let r2 = std::f64::consts::SQRT_2;
    let mut x = Vec::with_capacity(d * d);
    for i in 0..d {
        x.push(h[(i, i)].re);
    }
    for i in 0..d {
        for j in i + 1..d {
            // h_ij = (a - i b)/√2 for coordinates (a, b)
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            x.push(z.re * r2);
            x.push(-z.im * r2);
        }
    }
    DVector::from_vec(x)
}

/// Inverse of [`hermitian_to_coords`].
pub fn coords_to_hermitian(x: &DVector<f64>, d: usize) -> ComplexMatrix {
    debug_assert_eq!(x.len(), d * d);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = C64::new(x[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            let z = C64::new(x[k] * s, -x[k + 1] * s);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c64(1., 0.), c64(-1., 0.)]))
    }

    fn col(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_iterator(v.len(), 1, v.iter().map(|&x| c64(x, 0.)))
    }

    #[test]
    fn kron_identity_and_x() {
        assert_eq!(tensor_product(&identity(2), &identity(2)), identity(4));
        let xx = tensor_product(&pauli_x(), &pauli_x());
        for r in 0..4 {
            for c in 0..4 {
                let want = if r + c == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx[(r, c)], c64(want, 0.));
            }
        }
    }

    #[test]
    fn kron_column_order() {
        let k = tensor_product(&col(&[1., 2.]), &col(&[3., 4., 5.]));
        let want = [3., 4., 5., 6., 8., 10.];
        assert_eq!(k.shape(), (6, 1));
        for (i, w) in want.iter().enumerate() {
            assert_eq!(k[(i, 0)], c64(*w, 0.));
        }
    }

    #[test]
    fn partial_trace_examples() {
        let rho = ComplexMatrix::from_row_slice(2, 2, &[c64(0.7, 0.), c64(0.1, 0.2), c64(0.1, -0.2), c64(0.3, 0.)]);
        let out = partial_trace(&tensor_product(&identity(2), &rho), &[2, 2], 0).unwrap();
        assert!(max_abs_diff(&out, &rho.scale(2.0)) < 1e-15);

        // Bell state marginal.
        let phi = col(&[1., 0., 0., 1.]).scale(std::f64::consts::FRAC_1_SQRT_2);
        let proj = &phi * phi.adjoint();
        let marg = partial_trace(&proj, &[2, 2], 1).unwrap();
        assert!(max_abs_diff(&marg, &identity(2).scale(0.5)) < 1e-15);

        let a = ComplexMatrix::from_row_slice(2, 2, &[c64(1., 1.), c64(2., 0.), c64(0., 3.), c64(4., -1.)]);
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c64(i as f64 - j as f64, (i * j) as f64));
        let out = partial_trace(&tensor_product(&a, &b), &[2, 3], 0).unwrap();
        assert!(max_abs_diff(&out, &(b.clone() * trace(&a))) < 1e-13);
        let out = partial_trace(&tensor_product(&a, &b), &[2, 3], 1).unwrap();
        assert!(max_abs_diff(&out, &(a * trace(&b))) < 1e-13);
    }

    #[test]
    fn partial_trace_middle_slot() {
        let a = pauli_x();
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c64((i + 2 * j) as f64, 0.));
        let c = pauli_z() + identity(2);
        let abc = tensor_product(&tensor_product(&a, &b), &c);
        let out = partial_trace(&abc, &[2, 3, 2], 1).unwrap();
        let want = tensor_product(&a, &c) * trace(&b);
        assert!(max_abs_diff(&out, &want) < 1e-13);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        assert!(matches!(
            partial_trace(&identity(4), &[2, 3], 0),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(partial_trace(&identity(4), &[2, 2], 2).is_err());
    }

    #[test]
    fn eig_examples() {
        let e = hermitian_eig(&pauli_z()).unwrap();
        assert_eq!(e.eigenvalues.len(), 2);
        assert_abs_diff_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);

        let e = hermitian_eig(&pauli_x()).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Eigenvectors are defined up to phase: compare |⟨expected|v⟩|.
        let minus = col(&[s, -s]);
        let plus = col(&[s, s]);
        let v0 = e.eigenvectors.column(0).into_owned();
        let v1 = e.eigenvectors.column(1).into_owned();
        assert_abs_diff_eq!((minus.adjoint() * v0)[(0, 0)].norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!((plus.adjoint() * v1)[(0, 0)].norm(), 1.0, epsilon = 1e-12);

        let e = hermitian_eig(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(e.eigenvalues.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(0., 0.), c64(0., 0.)]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian(_))));
        assert!(expm_minus_i(&m).is_err());
    }

    #[test]
    fn expm_examples() {
        assert!(max_abs_diff(&expm_minus_i(&ComplexMatrix::zeros(2, 2)).unwrap(), &identity(2)) < 1e-15);
        let h = pauli_x().scale(std::f64::consts::FRAC_PI_2);
        let want = pauli_x() * c64(0., -1.);
        assert!(max_abs_diff(&expm_minus_i(&h).unwrap(), &want) < 1e-14);
        let h = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c64(0., 0.), c64(std::f64::consts::PI, 0.)]));
        let want = pauli_z();
        assert!(max_abs_diff(&expm_minus_i(&h).unwrap(), &want) < 1e-14);
    }

    #[test]
    fn sqrt_examples() {
        let half = identity(2).scale(0.5);
        assert!(max_abs_diff(&psd_sqrt(&half).unwrap(), &identity(2).scale(0.5f64.sqrt())) < 1e-15);
        let p0 = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c64(1., 0.), c64(0., 0.)]));
        assert!(max_abs_diff(&psd_sqrt(&p0).unwrap(), &p0) < 1e-15);
        let d41 = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c64(4., 0.), c64(1., 0.)]));
        let d21 = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c64(2., 0.), c64(1., 0.)]));
        assert!(max_abs_diff(&psd_sqrt(&d41).unwrap(), &d21) < 1e-14);
        assert!(matches!(psd_sqrt(&pauli_z()), Err(Error::NegativeEigenvalue(_))));
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace_real(&RealMatrix::identity(2, 2), 1e-12).is_empty());
        let ns = nullspace_real(&RealMatrix::from_row_slice(1, 2, &[1., 1.]), 1e-12);
        assert_eq!(ns.len(), 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Sign is arbitrary.
        assert_abs_diff_eq!((ns[0][0] * ns[0][1]), -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(ns[0][0].abs(), s, epsilon = 1e-14);
        let ns = nullspace_real(&RealMatrix::zeros(2, 2), 1e-12);
        assert_eq!(ns.len(), 2);
        assert_abs_diff_eq!(ns[0].dot(&ns[1]), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ns[0].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let p0 = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c64(1., 0.), c64(0., 0.)]));
        assert_abs_diff_eq!(von_neumann_entropy(&p0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(von_neumann_entropy(&identity(2).scale(0.5)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(von_neumann_entropy(&identity(4).scale(0.25)).unwrap(), 2.0, epsilon = 1e-14);
        assert!(matches!(von_neumann_entropy(&identity(2)), Err(Error::TraceNotOne(_))));
    }

    #[test]
    fn hermitian_coords_round_trip() {
        let h = ComplexMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c64(i as f64 + 0.5, 0.)
            } else if i < j {
                c64((i + j) as f64, (j as f64) - 0.3)
            } else {
                c64((i + j) as f64, -((i as f64) - 0.3))
            }
        });
        assert!(hermitian_deviation(&h) < 1e-15);
        let x = hermitian_to_coords(&h);
        assert!(max_abs_diff(&coords_to_hermitian(&x, 3), &h) < 1e-14);
        // Euclidean norm of coordinates equals Frobenius norm.
        let fro: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert_abs_diff_eq!(x.norm(), fro, epsilon = 1e-13);
        for (k, b) in hermitian_basis(3).iter().enumerate() {
            let xb = hermitian_to_coords(b);
            for (j, v) in xb.iter().enumerate() {
                assert_abs_diff_eq!(*v, if j == k { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
    }
}
