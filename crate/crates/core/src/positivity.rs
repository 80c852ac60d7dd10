//! Closed-form Wigner positivity tests for low-mode fermionic states.
//!
//! The inequality checks are generic over the scalar type so that boundary
//! states can be decided exactly with rationals.

use num_complex::Complex64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{self, check_state, PhaseFunction};
use crate::gaussian::{self, CovarianceMatrix};
use crate::group::{GroupElement, GroupSpec};
use crate::linalg::{self, CMatrix, ONE};
use crate::weyl::WeylSystem;

/// Slack used for floating-point inequality checks.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classifier {
    OneModeUnnormalized,
    OneModeNormalized,
    TwoModeUnnormalized,
    GaussianUnnormalized,
    GaussianNormalizedSufficient,
    GaussianNormalizedDirect,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub nonneg: bool,
    /// A point where the Wigner value has negative real part or a nonzero
    /// imaginary part; present whenever `nonneg` is false.
    pub witness_point: Option<GroupElement>,
    pub classifier_used: Classifier,
    /// Two-mode test only: the state is not of the required matrix form.
    #[serde(default)]
    pub form_mismatch: bool,
    /// One-mode normalized test only: the state lies on the purity boundary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pure_boundary: Option<bool>,
}

impl PositivityVerdict {
    fn new(nonneg: bool, classifier_used: Classifier) -> Self {
        PositivityVerdict {
            nonneg,
            witness_point: None,
            classifier_used,
            form_mismatch: false,
            pure_boundary: None,
        }
    }
}

fn half<T: Signed + Copy>() -> T {
    T::one() / (T::one() + T::one())
}

/// `a = 1/2` and `|x +- y| <= 1/2` for `rho = [[a, x+iy], [x-iy, 1-a]]`.
pub fn one_mode_unnormalized_condition<T: Signed + Copy + PartialOrd>(a: T, x: T, y: T, slack: T) -> bool {
    let h = half::<T>();
    (a - h).abs() <= slack && (x + y).abs() <= h + slack && (x - y).abs() <= h + slack
}

/// `|x - y| <= a` and `|x + y| <= 1 - a`, together with the state condition
/// `x^2 + y^2 <= a(1-a)`.
pub fn one_mode_normalized_condition<T: Signed + Copy + PartialOrd>(a: T, x: T, y: T, slack: T) -> bool {
    let one = T::one();
    x * x + y * y <= a * (one - a) + slack && (x - y).abs() <= a + slack && (x + y).abs() <= one - a + slack
}

/// `x^2 + y^2 = a(1-a)`: the one-mode state is pure.
pub fn one_mode_pure<T: Signed + Copy + PartialOrd>(a: T, x: T, y: T, slack: T) -> bool {
    (x * x + y * y - a * (T::one() - a)).abs() <= slack
}

/// The eight two-mode inequalities on `(a_1, ..., a_5)`.
pub fn two_mode_condition<T: Signed + Copy + PartialOrd>(a: [T; 5], slack: T) -> bool {
    let one = T::one();
    let [a1, a2, a3, a4, a5] = a;
    let pairs = [
        (a1 + a2, a3 + a4, one + a5),
        (a1 - a2, a3 - a4, one + a5),
        (a1 + a2, a3 - a4, one - a5),
        (a1 - a2, a3 + a4, one - a5),
    ];
    pairs
        .iter()
        .all(|&(u, v, bound)| (u + v).abs() <= bound + slack && (u - v).abs() <= bound + slack)
}

fn one_mode_parameters(rho: &CMatrix) -> Result<(f64, f64, f64)> {
    if rho.nrows() != 2 || rho.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.nrows(),
        });
    }
    check_state(rho)?;
    let b = rho[(0, 1)];
    Ok((rho[(0, 0)].re, b.re, b.im))
}

/// Closed-form one-mode Wigner table in canonical order `00, 10, 01, 11`.
/// `diag_term` is the coefficient of `(-1)^{u_1+u_2}` inside the bracket.
fn one_mode_table(x: f64, y: f64, diag_term: Complex64) -> [Complex64; 4] {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (i, o) in out.iter_mut().enumerate() {
        let (u1, u2) = ((i & 1) as i32, ((i >> 1) & 1) as i32);
        let s = |e: i32| if e % 2 == 0 { 1.0 } else { -1.0 };
        *o = (ONE + ONE * (2.0 * x * s(u2)) - ONE * (2.0 * y * s(u1)) + diag_term * s(u1 + u2)) * 0.5;
    }
    out
}

fn witness_from_values(spec: &GroupSpec, values: &[Complex64], tol: f64) -> Option<GroupElement> {
    let idx = values.iter().position(|v| v.re < -tol || v.im.abs() > tol).or_else(|| {
        values
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.re - a.1.im.abs()).total_cmp(&(b.1.re - b.1.im.abs())))
            .map(|(i, _)| i)
    })?;
    Some(spec.from_index(idx))
}

fn one_mode_spec() -> GroupSpec {
    GroupSpec::fermionic(1).expect("one mode")
}

/// One-mode test under the unnormalized fermionic cocycle.
pub fn onemode_unnormalized(rho: &CMatrix) -> Result<PositivityVerdict> {
    let (a, x, y) = one_mode_parameters(rho)?;
    let nonneg = one_mode_unnormalized_condition(a, x, y, BOUNDARY_TOL);
    let mut v = PositivityVerdict::new(nonneg, Classifier::OneModeUnnormalized);
    if !nonneg {
        // chi(11) = i(d - a) contributes +-i(1-2a)/2
        let table = one_mode_table(x, y, Complex64::new(0.0, 1.0 - 2.0 * a));
        v.witness_point = witness_from_values(&one_mode_spec(), &table, BOUNDARY_TOL);
    }
    Ok(v)
}

/// One-mode test under the normalized fermionic cocycle.
pub fn onemode_normalized(rho: &CMatrix) -> Result<PositivityVerdict> {
    let (a, x, y) = one_mode_parameters(rho)?;
    let nonneg = one_mode_normalized_condition(a, x, y, BOUNDARY_TOL);
    let mut v = PositivityVerdict::new(nonneg, Classifier::OneModeNormalized);
    v.pure_boundary = Some(one_mode_pure(a, x, y, BOUNDARY_TOL));
    if !nonneg {
        let table = one_mode_table(x, y, Complex64::new(2.0 * a - 1.0, 0.0));
        v.witness_point = witness_from_values(&one_mode_spec(), &table, BOUNDARY_TOL);
    }
    Ok(v)
}

/// `(a_1, ..., a_5)` with `a_j = Tr(rho c_j)` and `a_5 = Tr(rho c_1 c_2 c_3 c_4)`,
/// if `rho = (1 + sum_j a_j c_j + a_5 c_1c_2c_3c_4) / 4` within `1e-10`.
pub fn two_mode_form(rho: &CMatrix) -> Result<Option<[f64; 5]>> {
    let sys = two_mode_system();
    let c: Vec<CMatrix> = (1..=4).map(|j| sys.majorana(j)).collect::<Result<_>>()?;
    let top = &c[0] * &c[1] * &c[2] * &c[3];
    let mut a = [0.0; 5];
    for j in 0..4 {
        a[j] = (rho * &c[j]).trace().re;
    }
    a[4] = (rho * &top).trace().re;
    let rebuilt = two_mode_state(&a);
    Ok((linalg::max_abs_diff(&rebuilt, rho) <= 1e-10).then_some(a))
}

fn two_mode_system() -> WeylSystem {
    WeylSystem::new(GroupSpec::fermionic(2).expect("two modes"), false).expect("small system")
}

/// `(1 + sum_j a_j c_j + a_5 c_1c_2c_3c_4) / 4`.
pub fn two_mode_state(a: &[f64; 5]) -> CMatrix {
    let sys = two_mode_system();
    let c: Vec<CMatrix> = (1..=4).map(|j| sys.majorana(j).expect("in range")).collect();
    let mut rho = CMatrix::identity(4, 4);
    for j in 0..4 {
        rho += &c[j] * (ONE * a[j]);
    }
    rho += &c[0] * &c[1] * &c[2] * &c[3] * (ONE * a[4]);
    rho / Complex64::new(4.0, 0.0)
}

/// `4 W(y) = 1 + sum_j (-1)^{|y| - y_j} a_j + (-1)^{|y|} a_5`.
pub fn two_mode_table(a: &[f64; 5]) -> [f64; 16] {
    let mut out = [0.0; 16];
    for (i, o) in out.iter_mut().enumerate() {
        let y: Vec<usize> = (0..4).map(|k| (i >> k) & 1).collect();
        let w: usize = y.iter().sum();
        let s = |e: usize| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut v = 1.0 + s(w) * a[4];
        for j in 0..4 {
            v += s(w - y[j]) * a[j];
        }
        *o = v / 4.0;
    }
    out
}

/// Two-mode test under the unnormalized fermionic cocycle.
pub fn twomode_unnormalized(rho: &CMatrix) -> Result<PositivityVerdict> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.nrows(),
        });
    }
    check_state(rho)?;
    let spec = GroupSpec::fermionic(2).expect("two modes");
    match two_mode_form(rho)? {
        None => {
            let mut v = PositivityVerdict::new(false, Classifier::TwoModeUnnormalized);
            v.form_mismatch = true;
            // outside the form some weight-2 or weight-3 characteristic value is nonzero
            let w = fourier::wigner(&two_mode_system(), rho)?;
            v.witness_point = witness_from_values(&spec, w.values(), BOUNDARY_TOL);
            Ok(v)
        }
        Some(a) => {
            let nonneg = two_mode_condition(a, BOUNDARY_TOL);
            let mut v = PositivityVerdict::new(nonneg, Classifier::TwoModeUnnormalized);
            if !nonneg {
                let table: Vec<Complex64> = two_mode_table(&a).iter().map(|&t| ONE * t).collect();
                v.witness_point = witness_from_values(&spec, &table, BOUNDARY_TOL);
            }
            Ok(v)
        }
    }
}

fn direct_verdict(sys: &WeylSystem, rho: &CMatrix, classifier: Classifier, tol: f64) -> Result<PositivityVerdict> {
    let w: PhaseFunction = fourier::wigner(sys, rho)?;
    let idx = w.first_violation(tol);
    let mut v = PositivityVerdict::new(idx.is_none(), classifier);
    v.witness_point = idx.map(|i| sys.element(i));
    Ok(v)
}

/// Gaussian states under the unnormalized cocycle: nonnegative iff `M = 0`.
pub fn gaussian_unnormalized(sys: &WeylSystem, cov: &CovarianceMatrix) -> Result<PositivityVerdict> {
    if sys.is_normalized() {
        return Err(Error::Unsupported("the unnormalized fermionic cocycle".into()));
    }
    let nonneg = cov.is_zero(BOUNDARY_TOL);
    let mut v = PositivityVerdict::new(nonneg, Classifier::GaussianUnnormalized);
    if !nonneg {
        let g = gaussian::gaussian_from_covariance(sys, cov)?;
        v.witness_point = direct_verdict(sys, g.rho.matrix(), Classifier::GaussianUnnormalized, BOUNDARY_TOL)?.witness_point;
    }
    Ok(v)
}

/// Block-diagonal Gaussian states under the normalized cocycle.
///
/// `prod_j (|a_j| + 1) <= 2` is sufficient for nonnegativity; otherwise the
/// verdict comes from the Wigner function itself.
pub fn gaussian_normalized(sys: &WeylSystem, a: &[f64]) -> Result<PositivityVerdict> {
    if !sys.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let product: f64 = a.iter().map(|v| v.abs() + 1.0).product();
    if product <= 2.0 + BOUNDARY_TOL {
        return Ok(PositivityVerdict::new(true, Classifier::GaussianNormalizedSufficient));
    }
    let g = gaussian::gaussian_from_covariance(sys, &CovarianceMatrix::block_diagonal(a)?)?;
    direct_verdict(sys, g.rho.matrix(), Classifier::GaussianNormalizedDirect, BOUNDARY_TOL)
}
