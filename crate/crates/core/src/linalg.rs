//! Dense complex matrix helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn hadamard() -> CMatrix {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// Phase gate `diag(1, i)`.
pub fn phase_gate() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, I])
}

/// `diag(1, e^{i pi/4})`.
pub fn t_gate() -> CMatrix {
    let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, w])
}

/// Kronecker product of a list of factors, first factor most significant.
pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .fold(CMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// `Tr(A^* B)`.
pub fn trace_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).first().copied().unwrap_or(0.0)
}

pub fn rank(a: &CMatrix, tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    a.singular_values().iter().filter(|&&s| s > tol).count()
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    u.is_square() && max_abs_diff(&(u * u.adjoint()), &CMatrix::identity(u.nrows(), u.ncols())) <= tol
}

/// Unitary polar factor `U V^*` of `a = U S V^*`.
pub fn polar_unitary(a: &CMatrix) -> CMatrix {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^*");
    u * v_t
}

/// Rescales by a unit phase so the first entry (row-major) with modulus above
/// `tol` is positive real.
pub fn normalize_phase(a: &CMatrix, tol: f64) -> CMatrix {
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let v = a[(i, j)];
            if v.norm() > tol {
                let phase = v.conj() / v.norm();
                return a * phase;
            }
        }
    }
    a.clone()
}

/// `Some(c)` with `|c| = 1` and `a ~ c b` if the two matrices agree up to a unit phase.
pub fn phase_between(a: &CMatrix, b: &CMatrix, tol: f64) -> Option<Complex64> {
    if a.shape() != b.shape() {
        return None;
    }
    let inner = trace_inner(b, a);
    let nb = trace_inner(b, b).re;
    if nb <= tol {
        return None;
    }
    let c = inner / nb;
    if (c.norm() - 1.0).abs() > tol.sqrt().max(tol) {
        return None;
    }
    let c = c / c.norm();
    (max_abs_diff(a, &(b * c)) <= tol).then_some(c)
}

pub fn equal_mod_phase(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    phase_between(a, b, tol).is_some()
}
