//! Seeded random states, observables and test functions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMatrix;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Mixed state `A A^* / Tr(A A^*)` with Gaussian `A`.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let a = gaussian_matrix(dim, dim, rng);
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Normalized complex Gaussian vector.
pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `|psi><psi|` for a random unit vector.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let v = CMatrix::from_column_slice(dim, 1, &random_vector(dim, rng));
    &v * v.adjoint()
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let a = gaussian_matrix(dim, dim, rng);
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn random_function<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

/// Real antisymmetric matrix with standard normal entries above the diagonal.
pub fn random_antisymmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = rng.sample(StandardNormal);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}
