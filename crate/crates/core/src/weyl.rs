//! Irreducible projective representations `W` as dense unitary matrices.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cocycle::{Cocycle, TwoCocycle};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::linalg::{self, CMatrix};

/// Caches are filled at construction when `|G| * dim^2` stays below this.
const EAGER_CACHE_ENTRIES: usize = 1 << 22;

/// Tolerance for identities between exactly representable operators.
pub const OPERATOR_TOL: f64 = 1e-12;

pub struct WeylSystem {
    cocycle: Cocycle,
    dim: usize,
    cache: Vec<OnceLock<CMatrix>>,
}

impl Clone for WeylSystem {
    fn clone(&self) -> Self {
        let cache = self
            .cache
            .iter()
            .map(|c| {
                let cell = OnceLock::new();
                if let Some(m) = c.get() {
                    let _ = cell.set(m.clone());
                }
                cell
            })
            .collect();
        WeylSystem {
            cocycle: self.cocycle.clone(),
            dim: self.dim,
            cache,
        }
    }
}

impl std::fmt::Debug for WeylSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeylSystem")
            .field("spec", self.spec())
            .field("kind", &self.cocycle.kind())
            .field("dim", &self.dim)
            .finish()
    }
}

impl WeylSystem {
    pub fn new(spec: GroupSpec, normalized: bool) -> Result<Self> {
        Self::from_cocycle(Cocycle::standard(spec, normalized))
    }

    pub fn from_cocycle(cocycle: Cocycle) -> Result<Self> {
        let spec = cocycle.spec().clone();
        let order = spec.order_u128();
        if order > crate::group::MAX_ENUMERATION {
            return Err(Error::TooLarge {
                order,
                limit: crate::group::MAX_ENUMERATION,
            });
        }
        let order = order as usize;
        let dim = spec.hilbert_dim();
        let sys = WeylSystem {
            cocycle,
            dim,
            cache: (0..order).map(|_| OnceLock::new()).collect(),
        };
        if order.saturating_mul(dim * dim) <= EAGER_CACHE_ENTRIES {
            sys.cache.par_iter().enumerate().for_each(|(i, cell)| {
                let _ = cell.set(sys.build(&spec.from_index(i)));
            });
        }
        Ok(sys)
    }

    pub fn spec(&self) -> &GroupSpec {
        self.cocycle.spec()
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn is_normalized(&self) -> bool {
        self.cocycle.is_normalized_kind()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.cache.len()
    }

    pub fn element(&self, idx: usize) -> GroupElement {
        self.spec().from_index(idx)
    }

    pub fn index_of(&self, x: &GroupElement) -> usize {
        self.spec().index_of(x)
    }

    /// Cached `W(x)` by canonical index.
    pub fn weyl_idx(&self, idx: usize) -> &CMatrix {
        self.cache[idx].get_or_init(|| self.build(&self.spec().from_index(idx)))
    }

    pub fn weyl(&self, x: &GroupElement) -> &CMatrix {
        self.weyl_idx(self.index_of(x))
    }

    /// Replaces a cached operator. Used to inject faults when testing verifiers.
    pub fn override_operator(&mut self, idx: usize, op: CMatrix) {
        let cell = OnceLock::new();
        let _ = cell.set(op);
        self.cache[idx] = cell;
    }

    /// Builds `W(x)` from scratch, bypassing the cache.
    pub fn build_weyl(&self, x: &GroupElement) -> Result<CMatrix> {
        self.spec().check(x)?;
        Ok(self.build(x))
    }

    fn build(&self, x: &GroupElement) -> CMatrix {
        let raw = match self.spec() {
            GroupSpec::FiniteWeyl { d, n } => clock_shift(*d, *n, x.coords()),
            GroupSpec::Fermionic { .. } | GroupSpec::MixedSpin { .. } => {
                let mut acc = CMatrix::identity(self.dim, self.dim);
                for (j, &e) in x.coords().iter().enumerate() {
                    if e == 1 {
                        acc *= self.majorana_unchecked(j);
                    }
                }
                acc
            }
        };
        if self.is_normalized() {
            raw * self.cocycle.xi(x).to_complex()
        } else {
            raw
        }
    }

    /// Majorana operator `c_j`, `1 <= j <= 2n`.
    pub fn majorana(&self, j: usize) -> Result<CMatrix> {
        let max = self.spec().rank();
        if matches!(self.spec(), GroupSpec::FiniteWeyl { .. }) {
            return Err(Error::Unsupported("a fermionic or mixed spin system".into()));
        }
        if j == 0 || j > max {
            return Err(Error::IndexOutOfRange { index: j, max });
        }
        Ok(self.majorana_unchecked(j - 1))
    }

    fn majorana_unchecked(&self, j0: usize) -> CMatrix {
        let n = self.spec().modes();
        let mode = j0 / 2;
        let factors: Vec<CMatrix> = (0..n)
            .map(|i| {
                if i < mode {
                    let z = match self.spec() {
                        GroupSpec::MixedSpin { eps, .. } => eps.get(i, mode) == -1,
                        _ => true,
                    };
                    if z {
                        linalg::pauli_z()
                    } else {
                        CMatrix::identity(2, 2)
                    }
                } else if i == mode {
                    if j0.is_multiple_of(2) {
                        linalg::pauli_x()
                    } else {
                        linalg::pauli_y()
                    }
                } else {
                    CMatrix::identity(2, 2)
                }
            })
            .collect();
        linalg::kron_all(&factors)
    }
}

/// `T_x M_p` on `(C^d)^{(x) n}`, first mode most significant.
fn clock_shift(d: u32, n: usize, coords: &[u32]) -> CMatrix {
    let du = d as usize;
    let factors: Vec<CMatrix> = (0..n)
        .map(|i| {
            let (x, p) = (coords[i] as usize, coords[n + i] as u64);
            let mut m = CMatrix::zeros(du, du);
            for v in 0..du {
                // (T_x M_p f)(u) = omega^{p (u - x)} f(u - x), with v = u - x
                let u = (v + x) % du;
                m[(u, v)] = crate::phase::RootOfUnity::omega_pow((p * v as u64) as i64, d as u64).to_complex();
            }
            m
        })
        .collect();
    linalg::kron_all(&factors)
}

/// Largest entrywise deviation of `W(x)W(y) - sigma(x,y)W(x+y)` over all pairs.
pub fn projective_rep_error(sys: &WeylSystem) -> f64 {
    let spec = sys.spec();
    let order = sys.order();
    (0..order)
        .into_par_iter()
        .map(|i| {
            let x = spec.from_index(i);
            let wx = sys.weyl_idx(i);
            let mut worst: f64 = 0.0;
            for j in 0..order {
                let y = spec.from_index(j);
                let lhs = wx * sys.weyl_idx(j);
                let rhs = sys.weyl_idx(spec.add_index(i, j)) * sys.cocycle().sigma(&x, &y).to_complex();
                worst = worst.max(linalg::max_abs_diff(&lhs, &rhs));
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Checks the projective relation exhaustively within `1e-10`, plus `W(0) = I`
/// and unitarity of every operator.
pub fn verify_projective_rep(sys: &WeylSystem) -> bool {
    let id = CMatrix::identity(sys.dim(), sys.dim());
    if linalg::max_abs_diff(sys.weyl_idx(0), &id) > 1e-10 {
        return false;
    }
    if !(0..sys.order()).into_par_iter().all(|i| linalg::is_unitary(sys.weyl_idx(i), 1e-10)) {
        return false;
    }
    projective_rep_error(sys) <= 1e-10
}

/// The operators `W(x)` are linearly independent (full rank when vectorized)
/// and pairwise trace-orthogonal with `Tr(W(x)^* W(y)) = dim * delta`.
pub fn verify_irreducible_basis(sys: &WeylSystem) -> bool {
    let order = sys.order();
    let dim = sys.dim();
    if order != dim * dim {
        return false;
    }
    let mut stacked = CMatrix::zeros(order, dim * dim);
    for i in 0..order {
        for (k, v) in sys.weyl_idx(i).iter().enumerate() {
            stacked[(i, k)] = *v;
        }
    }
    if linalg::rank(&stacked, 1e-8) != order {
        return false;
    }
    let gram = &stacked.conjugate() * stacked.transpose();
    let expected = CMatrix::identity(order, order) * Complex64::new(dim as f64, 0.0);
    linalg::max_abs_diff(&gram, &expected) <= 1e-10
}

/// Regular `sigma`-representation on `C^{|G|}`: `(lambda(x) f)(y) = sigma(x, y-x) f(y-x)`.
pub fn build_regular_rep(c: &dyn TwoCocycle, x: &GroupElement) -> Result<CMatrix> {
    let spec = c.spec();
    spec.check(x)?;
    let order = spec.order();
    let xi = spec.index_of(x);
    let mut m = CMatrix::zeros(order, order);
    for y in 0..order {
        let src = spec.sub_index(y, xi);
        m[(y, src)] = c.sigma(x, &spec.from_index(src)).to_complex();
    }
    Ok(m)
}

/// Largest deviation of `lambda(x)lambda(y) - sigma(x,y) lambda(x+y)`.
pub fn regular_rep_error(c: &dyn TwoCocycle) -> Result<f64> {
    let spec = c.spec();
    let elems = spec.enumerate()?;
    let reps: Vec<CMatrix> = elems.iter().map(|x| build_regular_rep(c, x)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate() {
            let lhs = &reps[i] * &reps[j];
            let rhs = &reps[spec.add_index(i, j)] * c.sigma(x, y).to_complex();
            worst = worst.max(linalg::max_abs_diff(&lhs, &rhs));
        }
    }
    Ok(worst)
}

/// Mode of a zero-based Majorana index.
fn mode_of(j0: usize) -> usize {
    j0 / 2
}

/// Exchange relations `c_a c_b - eps(a,b) c_b c_a = 2 delta_{ab} I` for all
/// Majorana pairs, where `eps` is read at the modes of `a` and `b`.
pub fn verify_exchange_relations(sys: &WeylSystem) -> Result<bool> {
    let r = sys.spec().rank();
    let ms: Vec<CMatrix> = (1..=r).map(|j| sys.majorana(j)).collect::<Result<_>>()?;
    let dim = sys.dim();
    let id = CMatrix::identity(dim, dim);
    for a in 0..r {
        for b in 0..r {
            let e = match sys.spec() {
                GroupSpec::MixedSpin { eps, .. } => eps.get(mode_of(a), mode_of(b)) as f64,
                _ => -1.0,
            };
            let lhs = &ms[a] * &ms[b] - &ms[b] * &ms[a] * Complex64::new(e, 0.0);
            let rhs = if a == b { &id * Complex64::new(2.0, 0.0) } else { CMatrix::zeros(dim, dim) };
            if linalg::max_abs_diff(&lhs, &rhs) > OPERATOR_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `W(y) W(x) W(y)^* = Phi(y)(x) W(x)` for all pairs.
pub fn verify_weyl_conjugation(sys: &WeylSystem) -> bool {
    let spec = sys.spec();
    let order = sys.order();
    (0..order).into_par_iter().all(|j| {
        let y = spec.from_index(j);
        let wy = sys.weyl_idx(j);
        (0..order).all(|i| {
            let x = spec.from_index(i);
            let lhs = wy * sys.weyl_idx(i) * wy.adjoint();
            let rhs = sys.weyl_idx(i) * sys.cocycle().phi(&y, &x).to_complex();
            linalg::max_abs_diff(&lhs, &rhs) <= 1e-10
        })
    })
}

/// Coefficients `Tr(W(x)^* A) / dim` of `A` in the Weyl basis.
pub fn weyl_expansion(sys: &WeylSystem, a: &CMatrix) -> Vec<Complex64> {
    let dim = sys.dim() as f64;
    (0..sys.order())
        .into_par_iter()
        .map(|i| linalg::trace_inner(sys.weyl_idx(i), a) / dim)
        .collect()
}
