//! Dense density matrices over tensor products and the distance and
//! entanglement measures used throughout the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated as round-off.
pub const PSD_TOL: f64 = 1e-9;

/// Hermitian, unit trace, positive semidefinite, with subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&mat, &dims)?;
        let n = mat.nrows();
        let mut herm = 0.0_f64;
        for i in 0..n {
            for j in 0..=i {
                herm = herm.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
            }
        }
        if !(herm <= HERMITIAN_TOL) {
            return Err(Error::Numerical(format!("matrix is not Hermitian (deviation {herm:e})")));
        }
        let tr = mat.trace();
        if !((tr.re - 1.0).abs() <= TRACE_TOL) {
            return Err(Error::Numerical(format!("trace {} differs from 1", tr.re)));
        }
        let min = hermitian_eigenvalues(&mat).min();
        if min < -PSD_TOL {
            return Err(Error::Numerical(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { mat, dims })
    }

    /// Divides by the trace before validating.
    pub fn normalized(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let tr = mat.trace().re;
        if !(tr > 0.0) {
            return Err(Error::Numerical(format!("cannot normalize matrix with trace {tr}")));
        }
        Self::new(mat.unscale(tr), dims)
    }

    /// |ψ⟩⟨ψ| for a unit vector ψ.
    pub fn from_pure(psi: &CVector, dims: Vec<usize>) -> Result<Self> {
        let norm = psi.norm();
        if !((norm - 1.0).abs() <= 1e-10) {
            return Err(Error::Domain(format!("state vector has norm {norm}")));
        }
        Self::new(psi * psi.adjoint(), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        Self { mat: CMatrix::identity(n, n).unscale(n as f64), dims }
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = hermitian_eigenvalues(&self.mat).iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// ρ ⊗ σ
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { mat: self.mat.kronecker(&other.mat), dims }
    }

    /// U ρ U†
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Dimension(format!("unitary is {}x{}, state is {}", u.nrows(), u.ncols(), self.dim())));
        }
        Self::new(u * &self.mat * u.adjoint(), self.dims.clone())
    }
}

fn check_dims(mat: &CMatrix, dims: &[usize]) -> Result<()> {
    if mat.nrows() != mat.ncols() {
        return Err(Error::Dimension(format!("matrix is {}x{}", mat.nrows(), mat.ncols())));
    }
    let n: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || n != mat.nrows() {
        return Err(Error::Dimension(format!("dims {:?} do not factor size {}", dims, mat.nrows())));
    }
    Ok(())
}

/// Eigenvalues of the Hermitian part of `m`.
pub fn hermitian_eigenvalues(m: &CMatrix) -> DVector<f64> {
    let h = (m + m.adjoint()).unscale(2.0);
    h.symmetric_eigenvalues()
}

/// ½ Σ |eig(a − b)|
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dims != b.dims {
        return Err(Error::Dimension(format!("dims {:?} vs {:?}", a.dims, b.dims)));
    }
    let d = &a.mat - &b.mat;
    Ok(0.5 * hermitian_eigenvalues(&d).iter().map(|e| e.abs()).sum::<f64>())
}

/// Tr ρ²
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.mat.iter().map(|z| z.norm_sqr()).sum()
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn digit(i: usize, k: usize, dims: &[usize], strides: &[usize]) -> usize {
    (i / strides[k]) % dims[k]
}

/// ρ^{T_s}: transpose of subsystem `subsystem` only.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<CMatrix> {
    let dims = rho.dims();
    if subsystem >= dims.len() {
        return Err(Error::Domain(format!("subsystem {subsystem} out of range for dims {dims:?}")));
    }
    let st = strides(dims);
    let s = st[subsystem];
    let n = rho.dim();
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let di = digit(i, subsystem, dims, &st);
        let dj = digit(j, subsystem, dims, &st);
        rho.mat[(i - di * s + dj * s, j - dj * s + di * s)]
    }))
}

/// Sum of |negative eigenvalues| of the partial transpose, (‖ρ^{T_s}‖₁ − 1)/2.
pub fn negativity(rho: &DensityMatrix, subsystem: usize) -> Result<f64> {
    if rho.dims().len() < 2 {
        return Err(Error::Domain("negativity needs at least two subsystems".into()));
    }
    let pt = partial_transpose(rho, subsystem)?;
    Ok(hermitian_eigenvalues(&pt).iter().map(|&e| (-e).max(0.0)).sum())
}

/// Traces out every subsystem not listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Domain(format!("cannot keep {keep:?} of dims {dims:?}")));
    }
    let st = strides(dims);
    let out_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let out_st = strides(&out_dims);
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let m: usize = out_dims.iter().product();
    let n = rho.dim();
    let reduce = |i: usize| -> usize { keep.iter().zip(&out_st).map(|(&k, &s)| digit(i, k, dims, &st) * s).sum() };
    let mut out = CMatrix::zeros(m, m);
    for i in 0..n {
        for j in 0..n {
            if traced.iter().all(|&k| digit(i, k, dims, &st) == digit(j, k, dims, &st)) {
                out[(reduce(i), reduce(j))] += rho.mat[(i, j)];
            }
        }
    }
    DensityMatrix::new(out, out_dims)
}

/// ⟨ψ|ρ|ψ⟩
pub fn fidelity_to_pure(rho: &DensityMatrix, psi: &CVector) -> Result<f64> {
    if psi.len() != rho.dim() {
        return Err(Error::Dimension(format!("vector length {} vs state dimension {}", psi.len(), rho.dim())));
    }
    let norm = psi.norm();
    if !((norm - 1.0).abs() <= 1e-10) {
        return Err(Error::Domain(format!("target vector has norm {norm}")));
    }
    Ok((psi.adjoint() * &rho.mat * psi)[(0, 0)].re)
}

/// Maximally entangled (Σᵢ |ii⟩)/√d over the first `d` levels of a `dims`-sized pair.
pub fn bell_vector(d: usize, dims: [usize; 2]) -> CVector {
    let mut psi = CVector::zeros(dims[0] * dims[1]);
    let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        psi[i * dims[1] + i] = a;
    }
    psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pure(v: &[Complex64], dims: Vec<usize>) -> DensityMatrix {
        let psi = CVector::from_column_slice(v);
        let psi = psi.unscale(psi.norm());
        DensityMatrix::from_pure(&psi, dims).unwrap()
    }

    #[test]
    fn validation() {
        let bad = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.2), c(0.5)]);
        assert!(DensityMatrix::new(bad, vec![2]).is_err());
        let neg = CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(DensityMatrix::new(neg, vec![2]).is_err());
        let tr = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(tr, vec![2]).is_err());
        assert!(matches!(DensityMatrix::new(CMatrix::identity(4, 4).unscale(4.0), vec![3]), Err(Error::Dimension(_))));
    }

    #[test]
    fn trace_distance_examples() {
        let a = pure(&[c(1.0), c(0.0)], vec![2]);
        let b = pure(&[c(0.0), c(1.0)], vec![2]);
        assert_abs_diff_eq!(trace_distance(&a, &a).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_distance(&a, &b).unwrap(), 1.0, epsilon = 1e-15);
        let o = pure(&[c(0.6), c(0.8)], vec![2]);
        assert_abs_diff_eq!(trace_distance(&a, &o).unwrap(), 0.8, epsilon = 1e-14);
        let m = DensityMatrix::maximally_mixed(vec![4]);
        assert!(trace_distance(&a, &m).is_err());
    }

    #[test]
    fn purity_examples() {
        assert_abs_diff_eq!(purity(&pure(&[c(0.6), c(0.8)], vec![2])), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(purity(&DensityMatrix::maximally_mixed(vec![3, 3])), 1.0 / 9.0, epsilon = 1e-15);
        let half = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.5), c(0.5), c(0.0)]));
        assert_abs_diff_eq!(purity(&DensityMatrix::new(half, vec![3]).unwrap()), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn negativity_examples() {
        let bell = DensityMatrix::from_pure(&bell_vector(2, [2, 2]), vec![2, 2]).unwrap();
        assert_abs_diff_eq!(negativity(&bell, 0).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(negativity(&bell, 1).unwrap(), 0.5, epsilon = 1e-14);
        let prod = pure(&[c(0.6), c(0.8)], vec![2]).tensor(&pure(&[c(1.0), c(1.0)], vec![2]));
        assert_abs_diff_eq!(negativity(&prod, 0).unwrap(), 0.0, epsilon = 1e-14);
        assert!(negativity(&bell, 2).is_err());
        assert!(negativity(&DensityMatrix::maximally_mixed(vec![4]), 0).is_err());
    }

    #[test]
    fn negativity_of_noisy_bell_matches_closed_form() {
        // ρ = ½Φ⁺ + ½·I/4; partial transpose has eigenvalues 3/8 (x3) and −1/8
        let phi = bell_vector(2, [2, 2]);
        let mat = (&phi * phi.adjoint()).scale(0.5) + CMatrix::identity(4, 4).scale(0.125);
        let rho = DensityMatrix::new(mat, vec![2, 2]).unwrap();
        let pt = partial_transpose(&rho, 0).unwrap();
        let mut e: Vec<f64> = hermitian_eigenvalues(&pt).iter().copied().collect();
        e.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(e[0], -0.125, epsilon = 1e-14);
        assert_abs_diff_eq!(negativity(&rho, 0).unwrap(), 0.125, epsilon = 1e-14);
    }

    #[test]
    fn partial_trace_examples() {
        let a = pure(&[c(0.6), Complex64::new(0.0, 0.8)], vec![2]);
        let b = DensityMatrix::maximally_mixed(vec![3]);
        let ab = a.tensor(&b);
        let ra = partial_trace(&ab, &[0]).unwrap();
        assert!((ra.mat() - a.mat()).norm() < 1e-14);
        let rb = partial_trace(&ab, &[1]).unwrap();
        assert!((rb.mat() - b.mat()).norm() < 1e-14);

        let bell = DensityMatrix::from_pure(&bell_vector(2, [2, 2]), vec![2, 2]).unwrap();
        let r = partial_trace(&bell, &[1]).unwrap();
        assert!((r.mat() - DensityMatrix::maximally_mixed(vec![2]).mat()).norm() < 1e-14);

        let cs = [0.2_f64, 0.5, 0.7];
        let norm = cs.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut psi = CVector::zeros(9);
        for (i, x) in cs.iter().enumerate() {
            psi[i * 3 + i] = c(x / norm);
        }
        let r = partial_trace(&DensityMatrix::from_pure(&psi, vec![3, 3]).unwrap(), &[0]).unwrap();
        for (i, x) in cs.iter().enumerate() {
            assert_abs_diff_eq!(r.mat()[(i, i)].re, x * x / (norm * norm), epsilon = 1e-14);
        }
        assert!(partial_trace(&bell, &[]).is_err());
        assert!(partial_trace(&bell, &[5]).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let a = pure(&[c(0.6), c(0.8)], vec![2]);
        let psi = CVector::from_vec(vec![c(0.6), c(0.8)]);
        let perp = CVector::from_vec(vec![c(-0.8), c(0.6)]);
        assert_abs_diff_eq!(fidelity_to_pure(&a, &psi).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fidelity_to_pure(&a, &perp).unwrap(), 0.0, epsilon = 1e-14);
        let mix = (&psi * psi.adjoint() + &perp * perp.adjoint()).scale(0.5);
        let mix = DensityMatrix::new(mix, vec![2]).unwrap();
        assert_abs_diff_eq!(fidelity_to_pure(&mix, &psi).unwrap(), 0.5, epsilon = 1e-14);
        assert!(fidelity_to_pure(&mix, &CVector::zeros(3)).is_err());
    }
}
