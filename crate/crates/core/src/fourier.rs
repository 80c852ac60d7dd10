//! Characteristic functions, twisted and symplectic Fourier transforms, and
//! Wigner functions.
//!
//! With point weight `mu = 1/dim` on `G` and on the dual:
//!
//! * `chi(x) = Tr(W(x)^* rho)`
//! * `F(f) = sum_x f(x) W(x) mu`
//! * `(f * g)(x) = sum_y f(y) g(x-y) sigma(y, x-y) mu`
//! * `f*(x) = conj(sigma(x,-x) f(-x))`
//! * `Fs(f)(x) = sum_y f(y) conj(Phi(x)(y)) mu`, inverse with kernel `Phi(x)(y)`
//! * `wigner = Fs(chi)`

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cocycle::TwoCocycle;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::linalg::{self, CMatrix, ZERO};
use crate::modmat::ModMatrix;
use crate::phase::RootOfUnity;
use crate::weyl::WeylSystem;

/// Tolerance for state validation.
pub const STATE_TOL: f64 = 1e-10;

/// A complex function on `G`, stored in canonical index order.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction {
    spec: GroupSpec,
    values: Vec<Complex64>,
}

impl PhaseFunction {
    pub fn new(spec: GroupSpec, values: Vec<Complex64>) -> Result<Self> {
        let order = spec.order();
        if values.len() != order {
            return Err(Error::DimensionMismatch {
                expected: order,
                got: values.len(),
            });
        }
        Ok(PhaseFunction { spec, values })
    }

    pub fn zeros(spec: GroupSpec) -> Self {
        let order = spec.order();
        PhaseFunction {
            spec,
            values: vec![ZERO; order],
        }
    }

    /// `scale * delta_x`.
    pub fn delta(spec: GroupSpec, idx: usize, scale: f64) -> Self {
        let mut f = Self::zeros(spec);
        f.values[idx] = Complex64::new(scale, 0.0);
        f
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, idx: usize) -> Complex64 {
        self.values[idx]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs_diff(&self, other: &PhaseFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn min_real(&self) -> f64 {
        self.values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }

    /// `sum_x f(x) mu`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.spec.haar().point_weight()
    }

    /// First index where `Re f < -tol` or `|Im f| > tol`.
    pub fn first_violation(&self, tol: f64) -> Option<usize> {
        self.values.iter().position(|v| v.re < -tol || v.im.abs() > tol)
    }

    pub fn to_json(&self) -> Value {
        let spec = &self.spec;
        let points: Vec<Value> = (0..self.len())
            .map(|i| {
                json!({
                    "coords": spec.from_index(i).coords(),
                    "value": [self.values[i].re, self.values[i].im],
                })
            })
            .collect();
        json!({ "spec": spec, "points": points })
    }

    /// CSV with columns `coords..., re, im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv_columns(out, &[("", self)])
    }
}

/// Coordinate column names: `x1..xn, p1..pn` for qudits, `x1..x2n` otherwise.
pub fn coordinate_names(spec: &GroupSpec) -> Vec<String> {
    match spec {
        GroupSpec::FiniteWeyl { n, .. } => (1..=*n)
            .map(|i| format!("x{i}"))
            .chain((1..=*n).map(|i| format!("p{i}")))
            .collect(),
        _ => (1..=spec.rank()).map(|i| format!("x{i}")).collect(),
    }
}

/// Several functions on the same group side by side; each contributes
/// `{name}_re, {name}_im` columns (plain `re, im` for an empty name).
pub fn write_csv_columns<W: Write>(out: W, columns: &[(&str, &PhaseFunction)]) -> Result<()> {
    let spec = columns
        .first()
        .map(|c| c.1.spec().clone())
        .ok_or_else(|| Error::InvalidState("no columns to export".into()))?;
    let io = |e: csv::Error| Error::InvalidState(format!("csv export failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    let mut header = coordinate_names(&spec);
    for (name, f) in columns {
        if f.spec() != &spec {
            return Err(Error::SpecMismatch("columns belong to different groups".into()));
        }
        if name.is_empty() {
            header.extend(["re".to_string(), "im".to_string()]);
        } else {
            header.extend([format!("{name}_re"), format!("{name}_im")]);
        }
    }
    w.write_record(&header).map_err(io)?;
    for i in 0..spec.order() {
        let mut row: Vec<String> = spec.from_index(i).coords().iter().map(|c| c.to_string()).collect();
        for (_, f) in columns {
            row.push(format!("{}", f.values[i].re));
            row.push(format!("{}", f.values[i].im));
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidState(format!("csv export failed: {e}")))?;
    Ok(())
}

/// A validated density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct StateMatrix {
    op: CMatrix,
}

impl StateMatrix {
    pub fn new(op: CMatrix) -> Result<Self> {
        check_state(&op)?;
        Ok(StateMatrix { op })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        StateMatrix {
            op: CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.op
    }

    pub fn into_matrix(self) -> CMatrix {
        self.op
    }
}

/// Hermitian, positive semidefinite and unit trace, each within `1e-10`.
pub fn check_state(op: &CMatrix) -> Result<()> {
    if !op.is_square() {
        return Err(Error::InvalidState(format!("matrix is {}x{}", op.nrows(), op.ncols())));
    }
    if op.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::InvalidState("non-finite entry".into()));
    }
    let dev = linalg::hermitian_deviation(op);
    if dev > STATE_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let tr = op.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace is {tr}")));
    }
    let min = linalg::min_eigenvalue(op);
    if min < -STATE_TOL {
        return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

fn check_dim(sys: &WeylSystem, op: &CMatrix) -> Result<()> {
    if op.nrows() != sys.dim() || op.ncols() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: op.nrows().max(op.ncols()),
        });
    }
    Ok(())
}

fn check_function(sys: &WeylSystem, f: &PhaseFunction) -> Result<()> {
    if f.spec() != sys.spec() {
        return Err(Error::SpecMismatch(format!(
            "function on {} used with system {}",
            f.spec().label(),
            sys.spec().label()
        )));
    }
    Ok(())
}

/// `chi(x) = Tr(W(x)^* rho)`.
pub fn char_function(sys: &WeylSystem, rho: &CMatrix) -> Result<PhaseFunction> {
    check_dim(sys, rho)?;
    let values = (0..sys.order())
        .into_par_iter()
        .map(|i| linalg::trace_inner(sys.weyl_idx(i), rho))
        .collect();
    PhaseFunction::new(sys.spec().clone(), values)
}

/// `F(f) = sum_x f(x) W(x) mu`.
pub fn twisted_fourier(sys: &WeylSystem, f: &PhaseFunction) -> Result<CMatrix> {
    check_function(sys, f)?;
    let dim = sys.dim();
    let mu = sys.spec().haar().point_weight();
    let mut acc = CMatrix::zeros(dim, dim);
    for (i, v) in f.values().iter().enumerate() {
        if *v != ZERO {
            acc += sys.weyl_idx(i) * (*v * mu);
        }
    }
    Ok(acc)
}

/// `(f * g)(x) = sum_y f(y) g(x-y) sigma(y, x-y) mu`.
pub fn twisted_convolve(sys: &WeylSystem, f: &PhaseFunction, g: &PhaseFunction) -> Result<PhaseFunction> {
    check_function(sys, f)?;
    check_function(sys, g)?;
    let spec = sys.spec();
    let mu = spec.haar().point_weight();
    let c = sys.cocycle();
    let elems = spec.enumerate()?;
    let values = (0..elems.len())
        .into_par_iter()
        .map(|x| {
            let mut s = ZERO;
            for (y, ye) in elems.iter().enumerate() {
                if f.values[y] == ZERO {
                    continue;
                }
                let xy = spec.sub_index(x, y);
                s += f.values[y] * g.values[xy] * c.sigma(ye, &elems[xy]).to_complex();
            }
            s * mu
        })
        .collect();
    PhaseFunction::new(spec.clone(), values)
}

/// `f*(x) = conj(sigma(x,-x) f(-x))`.
pub fn twisted_involution(sys: &WeylSystem, f: &PhaseFunction) -> Result<PhaseFunction> {
    check_function(sys, f)?;
    let spec = sys.spec();
    let c = sys.cocycle();
    let values = (0..spec.order())
        .map(|i| {
            let x = spec.from_index(i);
            (c.sigma(&x, &x.neg()).to_complex() * f.values[spec.neg_index(i)]).conj()
        })
        .collect();
    PhaseFunction::new(spec.clone(), values)
}

/// Dense evaluator for `Phi(x)(y) = omega^{x^T K y}`.
struct PhiKernel {
    form: ModMatrix,
    coords: Vec<Vec<u32>>,
    roots: Vec<Complex64>,
}

impl PhiKernel {
    fn new(sys: &WeylSystem) -> Result<Self> {
        let spec = sys.spec();
        let d = spec.base();
        Ok(PhiKernel {
            form: sys.cocycle().phi_form(),
            coords: spec.enumerate()?.into_iter().map(|x| x.coords().to_vec()).collect(),
            roots: (0..d).map(|k| RootOfUnity::omega_pow(k as i64, d as u64).to_complex()).collect(),
        })
    }

    fn value(&self, x: usize, y: usize) -> Complex64 {
        self.roots[self.form.bilinear(&self.coords[x], &self.coords[y]) as usize]
    }
}

fn symplectic_transform(sys: &WeylSystem, f: &PhaseFunction, weight: f64) -> Result<PhaseFunction> {
    check_function(sys, f)?;
    let kernel = PhiKernel::new(sys)?;
    let values = (0..f.len())
        .into_par_iter()
        .map(|x| {
            let mut s = ZERO;
            for (y, v) in f.values.iter().enumerate() {
                if *v != ZERO {
                    s += v * kernel.value(x, y).conj();
                }
            }
            s * weight
        })
        .collect();
    PhaseFunction::new(sys.spec().clone(), values)
}

/// `Fs(f)(x) = sum_y f(y) conj(Phi(x)(y)) mu`.
pub fn symplectic_fourier(sys: &WeylSystem, f: &PhaseFunction) -> Result<PhaseFunction> {
    symplectic_transform(sys, f, sys.spec().haar().point_weight())
}

/// `f(y) = sum_x F(x) Phi(x)(y) mu^`, the inverse of [`symplectic_fourier`].
///
/// Since `Phi(x)(y) = conj(Phi(y)(x))` this is the forward kernel again, with
/// the dual weight.
pub fn inverse_symplectic_fourier(sys: &WeylSystem, big_f: &PhaseFunction) -> Result<PhaseFunction> {
    symplectic_transform(sys, big_f, sys.spec().haar().dual_point_weight())
}

/// Wigner function: symplectic Fourier transform of the characteristic function.
pub fn wigner(sys: &WeylSystem, rho: &CMatrix) -> Result<PhaseFunction> {
    let chi = char_function(sys, rho)?;
    symplectic_fourier(sys, &chi)
}

/// `(Tr(rho A), sum_y W_rho(y) W_A(y) mu^)`; requires a normalized cocycle.
pub fn expectation_identity(sys: &WeylSystem, rho: &CMatrix, a: &CMatrix) -> Result<(f64, f64)> {
    if !sys.is_normalized() {
        return Err(Error::NotNormalized);
    }
    check_dim(sys, rho)?;
    check_dim(sys, a)?;
    let dev = linalg::hermitian_deviation(a);
    if dev > STATE_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let quantum = (rho * a).trace().re;
    let wr = wigner(sys, rho)?;
    let wa = wigner(sys, a)?;
    let mu = sys.spec().haar().dual_point_weight();
    let classical: Complex64 = wr.values.iter().zip(&wa.values).map(|(x, y)| x * y).sum::<Complex64>() * mu;
    Ok((quantum, classical.re))
}

/// Checks `F(lambda(x) f) = W(x) F(f)` for every `x` and every basis function `f`.
pub fn intertwiner_check(sys: &WeylSystem) -> bool {
    let spec = sys.spec();
    let Ok(elems) = spec.enumerate() else {
        return false;
    };
    let c = sys.cocycle();
    let mu = spec.haar().point_weight();
    (0..elems.len()).into_par_iter().all(|x| {
        let wx = sys.weyl_idx(x);
        (0..elems.len()).all(|z| {
            // lambda(x) delta_z = sigma(x, z) delta_{x+z}
            let target = spec.add_index(x, z);
            let lhs = sys.weyl_idx(target) * (c.sigma(&elems[x], &elems[z]).to_complex() * mu);
            let rhs = wx * sys.weyl_idx(z) * Complex64::new(mu, 0.0);
            linalg::max_abs_diff(&lhs, &rhs) <= 1e-10
        })
    })
}

/// `min Re W >= -tol` and `max |Im W| <= tol`.
pub fn is_wigner_nonneg(sys: &WeylSystem, rho: &CMatrix, tol: f64) -> Result<bool> {
    Ok(wigner(sys, rho)?.first_violation(tol).is_none())
}

/// Weighted inner product `sum_x f conj(g) mu`.
pub fn inner(sys: &WeylSystem, f: &PhaseFunction, g: &PhaseFunction) -> Complex64 {
    let mu = sys.spec().haar().point_weight();
    f.values.iter().zip(&g.values).map(|(a, b)| a * b.conj()).sum::<Complex64>() * mu
}
