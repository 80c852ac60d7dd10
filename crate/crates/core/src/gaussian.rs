//! Fermionic Gaussian states: covariance matrices, Pfaffians and Wick moments.
//!
//! Conventions: `M_jk = (i/2) Tr(rho [c_j, c_k])`, so that for distinct
//! `j != k` we have `Tr(rho c_j c_k) = -i M_jk`, and in general
//! `Tr(rho c_{j_1} ... c_{j_2k}) = (-i)^k pf(M[J])` for distinct indices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::fourier::{self, PhaseFunction, StateMatrix};
use crate::group::GroupSpec;
use crate::linalg::{self, CMatrix, ONE};
use crate::weyl::WeylSystem;

/// Phase per index pair in the Wick formula, pinned by the one-mode dense oracle.
pub const WICK_PAIR_PHASE: Complex64 = Complex64::new(0.0, -1.0);

const ANTISYMMETRY_TOL: f64 = 1e-12;
const CONTRACTION_TOL: f64 = 1e-10;
const RECURSIVE_PFAFFIAN_MAX: usize = 8;

/// Real antisymmetric `2n x 2n` matrix with `M^T M <= I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct CovarianceMatrix {
    m: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || !m.nrows().is_multiple_of(2) {
            return Err(Error::InvalidCovariance(format!(
                "expected an even square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let dev = antisymmetry_deviation(&m);
        if dev > ANTISYMMETRY_TOL {
            return Err(Error::NotAntisymmetric(dev));
        }
        let top = if m.is_empty() { 0.0 } else { m.singular_values().max() };
        if top > 1.0 + CONTRACTION_TOL {
            return Err(Error::InvalidCovariance(format!(
                "largest singular value {top} exceeds 1"
            )));
        }
        Ok(CovarianceMatrix { m })
    }

    /// `(+)_j [[0, a_j], [-a_j, 0]]`.
    pub fn block_diagonal(a: &[f64]) -> Result<Self> {
        let n = a.len();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for (j, &v) in a.iter().enumerate() {
            m[(2 * j, 2 * j + 1)] = v;
            m[(2 * j + 1, 2 * j)] = -v;
        }
        Self::new(m)
    }

    pub fn zeros(n: usize) -> Self {
        CovarianceMatrix {
            m: DMatrix::zeros(2 * n, 2 * n),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn modes(&self) -> usize {
        self.m.nrows() / 2
    }

    /// `a_j` if the matrix is block diagonal in `2 x 2` blocks.
    pub fn block_coefficients(&self) -> Option<Vec<f64>> {
        let r = self.m.nrows();
        for i in 0..r {
            for j in 0..r {
                if i / 2 != j / 2 && self.m[(i, j)] != 0.0 {
                    return None;
                }
            }
        }
        Some((0..self.modes()).map(|j| self.m[(2 * j, 2 * j + 1)]).collect())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.m.iter().all(|v| v.abs() <= tol)
    }
}

impl TryFrom<Vec<Vec<f64>>> for CovarianceMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidCovariance("matrix must be square".into()));
        }
        Self::new(DMatrix::from_fn(r, r, |i, j| rows[i][j]))
    }
}

impl From<CovarianceMatrix> for Vec<Vec<f64>> {
    fn from(c: CovarianceMatrix) -> Self {
        (0..c.m.nrows()).map(|i| c.m.row(i).iter().copied().collect()).collect()
    }
}

fn antisymmetry_deviation(m: &DMatrix<f64>) -> f64 {
    (m + m.transpose()).iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Pfaffian of a real antisymmetric matrix. Zero for odd dimension.
pub fn pfaffian(a: &DMatrix<f64>) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotAntisymmetric(f64::INFINITY));
    }
    let scale = a.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let dev = antisymmetry_deviation(a);
    if dev > ANTISYMMETRY_TOL * scale {
        return Err(Error::NotAntisymmetric(dev));
    }
    let n = a.nrows();
    if n % 2 == 1 {
        return Ok(0.0);
    }
    if n <= RECURSIVE_PFAFFIAN_MAX {
        let idx: Vec<usize> = (0..n).collect();
        Ok(pfaffian_expansion(a, &idx))
    } else {
        Ok(pfaffian_ltl(a.clone()))
    }
}

/// Expansion along the first row: `pf(A) = sum_j (-1)^{j+1} a_{1j} pf(A_{1j})`.
fn pfaffian_expansion(a: &DMatrix<f64>, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let mut total = 0.0;
    for k in 1..idx.len() {
        let v = a[(first, idx[k])];
        if v == 0.0 {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|&(i, _)| i + 1 != k).map(|(_, &j)| j).collect();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * v * pfaffian_expansion(a, &rest);
    }
    total
}

/// Parlett-Reid tridiagonalization with partial pivoting.
fn pfaffian_ltl(mut a: DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        let (mut kp, mut best) = (k + 1, a[(k + 1, k)].abs());
        for r in k + 2..n {
            if a[(r, k)].abs() > best {
                kp = r;
                best = a[(r, k)].abs();
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == 0.0 {
            return 0.0;
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

fn validate_indices(indices: &[usize], max: usize) -> Result<()> {
    if indices.len() % 2 == 1 {
        return Err(Error::InvalidIndexSet(format!("odd number of indices ({})", indices.len())));
    }
    for (p, &j) in indices.iter().enumerate() {
        if j == 0 || j > max {
            return Err(Error::IndexOutOfRange { index: j, max });
        }
        if indices[..p].contains(&j) {
            return Err(Error::InvalidIndexSet(format!("index {j} repeated")));
        }
    }
    Ok(())
}

/// `Tr(rho c_{j_1} ... c_{j_2k})` for distinct one-based indices, in the given order.
pub fn wick_moment(cov: &CovarianceMatrix, indices: &[usize]) -> Result<Complex64> {
    validate_indices(indices, cov.m.nrows())?;
    let k = indices.len();
    let sub = DMatrix::from_fn(k, k, |a, b| cov.m[(indices[a] - 1, indices[b] - 1)]);
    Ok(WICK_PAIR_PHASE.powu((k / 2) as u32) * pfaffian(&sub)?)
}

/// Dense `Tr(rho c_{j_1} ... c_{j_m})`.
pub fn dense_moment(sys: &WeylSystem, rho: &CMatrix, indices: &[usize]) -> Result<Complex64> {
    let mut op = CMatrix::identity(sys.dim(), sys.dim());
    for &j in indices {
        op *= sys.majorana(j)?;
    }
    Ok((rho * op).trace())
}

fn require_fermionic(sys: &WeylSystem) -> Result<usize> {
    match sys.spec() {
        GroupSpec::Fermionic { n } => Ok(*n),
        other => Err(Error::Unsupported(format!("a fermionic system, got {}", other.label()))),
    }
}

/// `M_jk = (i/2) Tr(rho [c_j, c_k])`.
pub fn covariance_of(sys: &WeylSystem, rho: &CMatrix) -> Result<CovarianceMatrix> {
    let n = require_fermionic(sys)?;
    if rho.nrows() != sys.dim() || rho.ncols() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: rho.nrows(),
        });
    }
    let cs: Vec<CMatrix> = (1..=2 * n).map(|j| sys.majorana(j)).collect::<Result<_>>()?;
    let half_i = Complex64::new(0.0, 0.5);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..2 * n {
        for k in j + 1..2 * n {
            let comm = &cs[j] * &cs[k] - &cs[k] * &cs[j];
            let v = half_i * (rho * comm).trace();
            if v.im.abs() > CONTRACTION_TOL {
                return Err(Error::InvalidState(format!(
                    "covariance entry ({},{}) has imaginary part {:e}",
                    j + 1,
                    k + 1,
                    v.im
                )));
            }
            m[(j, k)] = v.re;
            m[(k, j)] = -v.re;
        }
    }
    CovarianceMatrix::new(m)
}

/// Characteristic function predicted by Wick's formula: zero on odd weight,
/// `conj(xi(x)) (-1)^{m(m-1)/2} (-i)^{m/2} pf(M[J])` on support `J` of even size `m`.
pub fn wick_characteristic(sys: &WeylSystem, cov: &CovarianceMatrix) -> Result<PhaseFunction> {
    let n = require_fermionic(sys)?;
    if cov.modes() != n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: cov.m.nrows(),
        });
    }
    let spec = sys.spec().clone();
    let cocycle: &Cocycle = sys.cocycle();
    let values = (0..spec.order())
        .map(|i| {
            let x = spec.from_index(i);
            let support: Vec<usize> = x.coords().iter().enumerate().filter(|(_, &c)| c == 1).map(|(j, _)| j + 1).collect();
            let m = support.len();
            if m % 2 == 1 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let reversal = if (m * (m.saturating_sub(1)) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(cocycle.xi(&x).conj().to_complex() * reversal * wick_moment(cov, &support)?)
        })
        .collect::<Result<Vec<_>>>()?;
    PhaseFunction::new(spec, values)
}

/// `2^{-n} prod_j (1 + i a_j c_{2j-1} c_{2j})`.
pub fn product_formula_state(sys: &WeylSystem, a: &[f64]) -> Result<CMatrix> {
    let n = require_fermionic(sys)?;
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.len() });
    }
    let dim = sys.dim();
    let mut rho = CMatrix::identity(dim, dim);
    for (j, &aj) in a.iter().enumerate() {
        let pair = sys.majorana(2 * j + 1)? * sys.majorana(2 * j + 2)?;
        rho *= CMatrix::identity(dim, dim) + pair * Complex64::new(0.0, aj);
    }
    Ok(rho / Complex64::new(dim as f64, 0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    pub cov: CovarianceMatrix,
    pub rho: StateMatrix,
}

/// Builds the Gaussian state with covariance `M` from its Wick moments.
///
/// Block-diagonal inputs are also built from the product formula and both
/// constructions must agree within `1e-9`.
pub fn gaussian_from_covariance(sys: &WeylSystem, cov: &CovarianceMatrix) -> Result<GaussianState> {
    let chi = wick_characteristic(sys, cov)?;
    let rho = fourier::twisted_fourier(sys, &chi)?;
    if let Some(a) = cov.block_coefficients() {
        let alt = product_formula_state(sys, &a)?;
        let diff = linalg::max_abs_diff(&rho, &alt);
        if diff > 1e-9 {
            return Err(Error::Degenerate(format!(
                "moment and product constructions differ by {diff:e}"
            )));
        }
    }
    let rho = StateMatrix::new(rho)?;
    Ok(GaussianState { cov: cov.clone(), rho })
}

/// Every characteristic value of `rho` matches the Wick prediction from its own covariance.
pub fn is_gaussian(sys: &WeylSystem, rho: &CMatrix, tol: f64) -> Result<bool> {
    let cov = match covariance_of(sys, rho) {
        Ok(c) => c,
        Err(Error::InvalidCovariance(_)) | Err(Error::InvalidState(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let predicted = wick_characteristic(sys, &cov)?;
    let actual = fourier::char_function(sys, rho)?;
    Ok(predicted.max_abs_diff(&actual) <= tol)
}

pub fn purity(rho: &CMatrix) -> f64 {
    (rho * rho).trace().re
}

/// `diag((1-a)/2, (1+a)/2)`, the one-mode Gaussian state with `M_12 = a`.
pub fn one_mode_diagonal(a: f64) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = ONE * ((1.0 - a) / 2.0);
    m[(1, 1)] = ONE * ((1.0 + a) / 2.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use proptest::prelude::*;

    fn fermion(n: usize, normalized: bool) -> WeylSystem {
        WeylSystem::new(GroupSpec::fermionic(n).unwrap(), normalized).unwrap()
    }

    #[test]
    fn wick_convention_matches_one_mode_oracle() {
        let sys = fermion(1, false);
        for a in [-1.0, -0.4, 0.0, 0.3, 1.0] {
            let rho = one_mode_diagonal(a);
            let cov = covariance_of(&sys, &rho).unwrap();
            assert!((cov.matrix()[(0, 1)] - a).abs() < 1e-15);
            let dense = dense_moment(&sys, &rho, &[1, 2]).unwrap();
            let wick = wick_moment(&cov, &[1, 2]).unwrap();
            assert!((dense - wick).norm() < 1e-15);
            assert!((dense - Complex64::new(0.0, -a)).norm() < 1e-15);
            let rev = wick_moment(&cov, &[2, 1]).unwrap();
            assert!((rev + wick).norm() < 1e-15);
        }
        assert_eq!(wick_moment(&CovarianceMatrix::zeros(1), &[]).unwrap(), ONE);
    }

    #[test]
    fn wick_rejects_bad_index_sets() {
        let cov = CovarianceMatrix::zeros(2);
        assert!(matches!(wick_moment(&cov, &[1, 1]), Err(Error::InvalidIndexSet(_))));
        assert!(matches!(wick_moment(&cov, &[1, 2, 3]), Err(Error::InvalidIndexSet(_))));
        assert!(matches!(wick_moment(&cov, &[1, 5]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn pfaffian_examples() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 0.7, -0.7, 0.0]);
        assert!((pfaffian(&a).unwrap() - 0.7).abs() < 1e-15);
        for n in 1..=6 {
            let mut j = DMatrix::zeros(2 * n, 2 * n);
            for i in 0..n {
                j[(i, n + i)] = 1.0;
                j[(n + i, i)] = -1.0;
            }
            // J = [[0, I], [-I, 0]] has pf = (-1)^{n(n-1)/2}; the block form (+)[[0,1],[-1,0]] has pf 1
            let expected = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((pfaffian(&j).unwrap() - expected).abs() < 1e-12);
            let blocks = CovarianceMatrix::block_diagonal(&vec![1.0; n]).unwrap();
            assert!((pfaffian(blocks.matrix()).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(pfaffian(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).is_err());
        assert_eq!(pfaffian(&DMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn pfaffian_methods_agree() {
        let mut rng = random::seeded(4);
        for n in [2usize, 4, 6, 8] {
            for _ in 0..10 {
                let a = random::random_antisymmetric(n, &mut rng);
                let idx: Vec<usize> = (0..n).collect();
                let e = pfaffian_expansion(&a, &idx);
                let l = pfaffian_ltl(a.clone());
                assert!((e - l).abs() <= 1e-10 * e.abs().max(1.0), "{e} vs {l}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pfaffian_squares_to_determinant(seed in any::<u64>(), half in 1usize..=6) {
            let n = 2 * half;
            let mut rng = random::seeded(seed);
            let a = random::random_antisymmetric(n, &mut rng);
            let pf = pfaffian(&a).unwrap();
            let det = a.clone().determinant();
            prop_assert!((pf * pf - det).abs() <= 1e-8 * det.abs().max(1.0));
            let b = DMatrix::from_fn(n, n, |i, j| a[(i, j)] * 0.3 + if i == j { 1.0 } else { 0.1 * (i as f64 - j as f64) });
            let bab = &b * &a * b.transpose();
            let lhs = pfaffian(&bab).unwrap();
            let rhs = b.determinant() * pf;
            prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs().max(1.0));
        }

        #[test]
        fn gaussian_round_trip(a1 in -1.0f64..=1.0, a2 in -1.0f64..=1.0) {
            let sys = fermion(2, false);
            let cov = CovarianceMatrix::block_diagonal(&[a1, a2]).unwrap();
            let g = gaussian_from_covariance(&sys, &cov).unwrap();
            let back = covariance_of(&sys, g.rho.matrix()).unwrap();
            prop_assert!((back.matrix() - cov.matrix()).amax() < 1e-9);
            prop_assert!(is_gaussian(&sys, g.rho.matrix(), 1e-8).unwrap());
        }
    }

    #[test]
    fn two_mode_product_display() {
        let sys = fermion(2, false);
        let (a1, a2) = (0.3, -0.6);
        let rho = product_formula_state(&sys, &[a1, a2]).unwrap();
        let c = |j| sys.majorana(j).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let id = CMatrix::identity(4, 4);
        let expected = (&id + c(1) * c(2) * (i * a1) + c(3) * c(4) * (i * a2) - c(1) * c(2) * c(3) * c(4) * (a1 * a2 * ONE)) / Complex64::new(4.0, 0.0);
        assert!(linalg::max_abs_diff(&rho, &expected) < 1e-15);
    }

    #[test]
    fn pure_iff_unit_blocks() {
        let sys = fermion(2, true);
        for a in [[1.0, 1.0], [1.0, -1.0], [0.5, 1.0], [0.0, 0.0]] {
            let g = gaussian_from_covariance(&sys, &CovarianceMatrix::block_diagonal(&a).unwrap()).unwrap();
            let pure = (purity(g.rho.matrix()) - 1.0).abs() < 1e-10;
            assert_eq!(pure, a.iter().all(|v| v.abs() == 1.0));
        }
        let g = gaussian_from_covariance(&fermion(1, false), &CovarianceMatrix::block_diagonal(&[1.0]).unwrap()).unwrap();
        assert!(linalg::max_abs_diff(g.rho.matrix(), &one_mode_diagonal(1.0)) < 1e-15);
    }

    #[test]
    fn general_covariance_via_moments() {
        // a rotated block-diagonal covariance is still a valid Gaussian state
        let sys = fermion(2, false);
        let (c, s) = (0.6f64, 0.8f64);
        let r = DMatrix::from_row_slice(4, 4, &[c, 0.0, s, 0.0, 0.0, 1.0, 0.0, 0.0, -s, 0.0, c, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let base = CovarianceMatrix::block_diagonal(&[0.9, 0.4]).unwrap();
        let cov = CovarianceMatrix::new(&r * base.matrix() * r.transpose()).unwrap();
        assert!(cov.block_coefficients().is_none());
        let g = gaussian_from_covariance(&sys, &cov).unwrap();
        let back = covariance_of(&sys, g.rho.matrix()).unwrap();
        assert!((back.matrix() - cov.matrix()).amax() < 1e-12);
        assert!(is_gaussian(&sys, g.rho.matrix(), 1e-8).unwrap());
    }

    #[test]
    fn non_gaussian_examples() {
        let sys = fermion(1, false);
        let plus = CMatrix::from_element(2, 2, ONE * 0.5);
        assert!(!is_gaussian(&sys, &plus, 1e-8).unwrap());
        assert!(is_gaussian(&sys, &CMatrix::identity(2, 2).scale(0.5), 1e-8).unwrap());
        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 1.5, -1.5, 0.0]);
        assert!(CovarianceMatrix::new(bad).is_err());
    }

    #[test]
    fn form_state_is_gaussian_only_when_trivial() {
        let sys = fermion(2, false);
        let c = |j| sys.majorana(j).unwrap();
        let a = [0.0, 0.0, 0.0, 0.0, 0.3];
        let rho = (CMatrix::identity(4, 4) + c(1) * c(2) * c(3) * c(4) * (a[4] * ONE)) / Complex64::new(4.0, 0.0);
        assert!(!is_gaussian(&sys, &rho, 1e-8).unwrap());
        let mm = CMatrix::identity(4, 4).scale(0.25);
        assert!(is_gaussian(&sys, &mm, 1e-8).unwrap());
        assert!(covariance_of(&sys, &mm).unwrap().is_zero(0.0));
    }
}
