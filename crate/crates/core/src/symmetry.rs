//! Symplectic groups, Clifford unitaries and generalized Clifford witnesses.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycle::{standard_symplectic_form, Cocycle, CocycleKind, TwoCocycle};
use crate::error::{Error, Result};
use crate::fourier;
use crate::group::{GroupElement, GroupSpec};
use crate::linalg::{self, CMatrix};
use crate::modmat::ModMatrix;
use crate::random;
use crate::weyl::WeylSystem;

/// Default cap on the number of candidate matrices in a brute-force search.
pub const DEFAULT_SEARCH_BUDGET: u128 = 1 << 24;
/// Environment variable overriding [`DEFAULT_SEARCH_BUDGET`].
pub const SEARCH_BUDGET_ENV: &str = "TW_MAX_SEARCH";

const COEFF_TOL: f64 = 1e-9;
const RELATION_TOL: f64 = 1e-9;
const INTERTWINER_RETRIES: u64 = 8;
const CLOSURE_BOUND: usize = 10_000;

pub fn search_budget() -> u128 {
    std::env::var(SEARCH_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SEARCH_BUDGET)
}

pub fn apply(s: &ModMatrix, x: &GroupElement, spec: &GroupSpec) -> GroupElement {
    let img = s.apply(x.coords());
    spec.element(&img.iter().map(|&v| v as i64).collect::<Vec<_>>())
        .expect("matrix has the group's rank")
}

fn check_shape(spec: &GroupSpec, s: &ModMatrix) -> Result<()> {
    if s.rows() != spec.rank() || s.cols() != spec.rank() || s.modulus() != spec.base() {
        return Err(Error::DimensionMismatch {
            expected: spec.rank(),
            got: s.rows(),
        });
    }
    Ok(())
}

/// `sigma(Sx, Sy) = sigma(x, y)` for all pairs, with `S` invertible.
pub fn is_symplectic(c: &dyn TwoCocycle, s: &ModMatrix) -> bool {
    let spec = c.spec();
    if check_shape(spec, s).is_err() || !s.is_invertible() {
        return false;
    }
    preserves(c, s)
}

fn preserves(c: &dyn TwoCocycle, s: &ModMatrix) -> bool {
    let spec = c.spec();
    let Ok(elems) = spec.enumerate() else {
        return false;
    };
    let images: Vec<GroupElement> = elems.iter().map(|x| apply(s, x, spec)).collect();
    (0..elems.len()).all(|i| {
        (0..elems.len()).all(|j| c.sigma(&images[i], &images[j]) == c.sigma(&elems[i], &elems[j]))
    })
}

/// Matrix form `B` with `S` symplectic iff `S^T B S = B`, when one is known.
pub fn criterion_form(c: &Cocycle) -> Option<ModMatrix> {
    let spec = c.spec();
    match c.kind() {
        CocycleKind::CanonicalFinite | CocycleKind::Fermionic | CocycleKind::MixedSpin => Some(c.form().clone()),
        CocycleKind::CanonicalNormalizedFinite if spec.base() % 2 == 1 => {
            Some(standard_symplectic_form(spec.base(), spec.modes()))
        }
        _ => None,
    }
}

pub fn satisfies_criterion(form: &ModMatrix, s: &ModMatrix) -> bool {
    &s.transpose().mul(form).mul(s) == form
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub form: ModMatrix,
    pub checked: u128,
    pub mismatches: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticEnumeration {
    /// Sorted lexicographically by row-major entries.
    pub maps: Vec<ModMatrix>,
    pub candidates: u128,
    pub criterion: Option<CriterionReport>,
}

impl SymplecticEnumeration {
    pub fn order(&self) -> usize {
        self.maps.len()
    }

    /// `Some(k)` if the group is cyclic of order `k`.
    pub fn cyclic_order(&self) -> Option<usize> {
        let k = self.maps.len();
        self.maps
            .iter()
            .any(|m| m.multiplicative_order(k as u32) == Some(k as u32))
            .then_some(k)
    }

    /// A generator if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<&ModMatrix> {
        let k = self.maps.len() as u32;
        self.maps.iter().find(|m| m.multiplicative_order(k) == Some(k))
    }
}

fn candidate(index: u128, d: u32, r: usize) -> ModMatrix {
    let mut data = Vec::with_capacity(r * r);
    let mut idx = index;
    for _ in 0..r * r {
        data.push((idx % d as u128) as u32);
        idx /= d as u128;
    }
    ModMatrix::from_flat(d, r, r, data)
}

/// All `sigma`-preserving automorphisms, by exhaustive search over `d^{(2n)^2}` matrices.
///
/// When a matrix criterion exists it is evaluated on every candidate and
/// compared with the direct check; mismatches are counted in the report.
pub fn enumerate_symplectic(c: &Cocycle) -> Result<SymplecticEnumeration> {
    enumerate_symplectic_with_budget(c, search_budget())
}

pub fn enumerate_symplectic_with_budget(c: &Cocycle, budget: u128) -> Result<SymplecticEnumeration> {
    let spec = c.spec();
    let d = spec.base();
    let r = spec.rank();
    let size = (d as u128).checked_pow((r * r) as u32).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::SearchSpaceTooLarge { size, budget });
    }
    let elems = spec.enumerate()?;
    let order = elems.len();
    let table: Vec<_> = elems
        .iter()
        .flat_map(|x| elems.iter().map(move |y| c.sigma(x, y)))
        .collect();
    let form = criterion_form(c);
    let results: Vec<(Option<ModMatrix>, bool)> = (0..size)
        .into_par_iter()
        .map(|k| {
            let s = candidate(k, d, r);
            let img: Vec<usize> = elems.iter().map(|x| spec.index_of(&apply(&s, x, spec))).collect();
            let direct = (0..order).all(|i| (0..order).all(|j| table[img[i] * order + img[j]] == table[i * order + j]));
            let mismatch = form.as_ref().is_some_and(|f| satisfies_criterion(f, &s) != direct);
            let keep = direct && s.is_invertible();
            (keep.then_some(s), mismatch)
        })
        .filter(|(s, m)| s.is_some() || *m)
        .collect();
    let mismatches = results.iter().filter(|(_, m)| *m).count() as u128;
    let mut maps: Vec<ModMatrix> = results.into_iter().filter_map(|(s, _)| s).collect();
    maps.sort();
    Ok(SymplecticEnumeration {
        maps,
        candidates: size,
        criterion: form.map(|form| CriterionReport {
            form,
            checked: size,
            mismatches,
        }),
    })
}

/// `xi(Sx) = xi(x)` for all `x`, where `xi` is the normalization of the
/// unnormalized cocycle of this system.
pub fn xi_invariant(c: &Cocycle, s: &ModMatrix) -> Result<bool> {
    let normalized = Cocycle::new(c.spec().clone(), c.kind().normalized())?;
    let spec = c.spec();
    Ok(spec.enumerate()?.iter().all(|x| normalized.xi(&apply(s, x, spec)) == normalized.xi(x)))
}

/// A Clifford unitary `W(y) U_S`, fixed up to phase by the normalization
/// that its first nonzero entry is positive real.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement {
    pub y: GroupElement,
    pub s: ModMatrix,
    pub unitary: CMatrix,
}

fn intertwine<F>(sys: &WeylSystem, target: F, seed: u64) -> Result<CMatrix>
where
    F: Fn(usize) -> CMatrix + Sync,
{
    let dim = sys.dim();
    for attempt in 0..INTERTWINER_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(attempt));
        let a = random::gaussian_matrix(dim, dim, &mut rng);
        let u0 = (0..sys.order())
            .into_par_iter()
            .map(|i| target(i) * &a * sys.weyl_idx(i).adjoint())
            .reduce(|| CMatrix::zeros(dim, dim), |x, y| x + y);
        let sv = u0.clone().singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if hi > 1e-8 && lo > 1e-6 * hi {
            return Ok(linalg::normalize_phase(&linalg::polar_unitary(&u0), 1e-9));
        }
    }
    Err(Error::Degenerate(format!(
        "averaged operator stayed singular after {INTERTWINER_RETRIES} attempts"
    )))
}

/// Unitary `U` with `U W(x) U^* = target(x)`; built from two independent
/// seeds that must agree up to phase.
fn intertwine_checked<F>(sys: &WeylSystem, target: F) -> Result<CMatrix>
where
    F: Fn(usize) -> CMatrix + Sync,
{
    let u = intertwine(sys, &target, 0)?;
    let v = intertwine(sys, &target, 1)?;
    if !linalg::equal_mod_phase(&u, &v, 1e-8) {
        return Err(Error::Degenerate("independent seeds gave different intertwiners".into()));
    }
    for i in 0..sys.order() {
        let lhs = &u * sys.weyl_idx(i) * u.adjoint();
        if linalg::max_abs_diff(&lhs, &target(i)) > RELATION_TOL {
            return Err(Error::Degenerate(format!(
                "no unitary implements the requested action (fails at {})",
                sys.element(i).label()
            )));
        }
    }
    Ok(u)
}

/// Realizes `W(y) U_S` with `U W(x) U^* = Phi(y)(Sx) W(Sx)`.
pub fn realize_clifford(sys: &WeylSystem, y: &GroupElement, s: &ModMatrix) -> Result<CliffordElement> {
    let spec = sys.spec();
    spec.check(y)?;
    check_shape(spec, s)?;
    if !is_symplectic(sys.cocycle(), s) {
        return Err(Error::NotSymplectic);
    }
    let images: Vec<usize> = (0..sys.order()).map(|i| spec.index_of(&apply(s, &sys.element(i), spec))).collect();
    let c = sys.cocycle();
    let target = |i: usize| {
        let sx = sys.element(images[i]);
        sys.weyl_idx(images[i]) * c.phi(y, &sx).to_complex()
    };
    let unitary = intertwine_checked(sys, target)?;
    Ok(CliffordElement {
        y: y.clone(),
        s: s.clone(),
        unitary,
    })
}

/// A map `S` and phases `xi` with `U W(x) U^* = xi(x) W(Sx)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedCliffordWitness {
    pub s: ModMatrix,
    /// `S` as a table of canonical indices.
    pub s_table: Vec<usize>,
    pub xi_table: Vec<(f64, f64)>,
}

impl GeneralizedCliffordWitness {
    pub fn xi(&self, idx: usize) -> Complex64 {
        let (re, im) = self.xi_table[idx];
        Complex64::new(re, im)
    }

    /// Same map and phases up to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.s_table == other.s_table
            && (0..self.xi_table.len()).all(|i| (self.xi(i) - other.xi(i)).norm() <= tol)
    }
}

/// Unitary realizing an arbitrary witness `(S, xi)` as `U W(x) U^* = xi(x) W(Sx)`.
pub fn realize_generalized(sys: &WeylSystem, s: &ModMatrix, xi: &[Complex64]) -> Result<CMatrix> {
    let spec = sys.spec();
    check_shape(spec, s)?;
    if xi.len() != sys.order() {
        return Err(Error::DimensionMismatch {
            expected: sys.order(),
            got: xi.len(),
        });
    }
    let images: Vec<usize> = (0..sys.order()).map(|i| spec.index_of(&apply(s, &sys.element(i), spec))).collect();
    intertwine_checked(sys, |i| sys.weyl_idx(images[i]) * xi[i])
}

/// Expands `U W(x) U^*` in the Weyl basis for every `x`; returns the witness
/// if each expansion has exactly one nonzero coefficient, of unit modulus,
/// and the resulting `(S, xi)` passes the automorphism and consistency checks.
pub fn detect_generalized_clifford(sys: &WeylSystem, u: &CMatrix) -> Option<GeneralizedCliffordWitness> {
    let dim = sys.dim();
    if u.nrows() != dim || u.ncols() != dim || !linalg::is_unitary(u, 1e-9) {
        return None;
    }
    let spec = sys.spec();
    let order = sys.order();
    let found: Option<Vec<(usize, Complex64)>> = (0..order)
        .into_par_iter()
        .map(|i| {
            let v = u * sys.weyl_idx(i) * u.adjoint();
            let mut hit = None;
            for z in 0..order {
                let coef = linalg::trace_inner(sys.weyl_idx(z), &v) / dim as f64;
                if coef.norm() > COEFF_TOL {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some((z, coef));
                }
            }
            hit.filter(|(_, c)| (c.norm() - 1.0).abs() <= COEFF_TOL)
        })
        .collect();
    let found = found?;
    let s_table: Vec<usize> = found.iter().map(|(z, _)| *z).collect();
    let xi: Vec<Complex64> = found.iter().map(|(_, c)| *c).collect();
    // automorphism: additive and bijective
    let mut seen = vec![false; order];
    for &z in &s_table {
        if std::mem::replace(&mut seen[z], true) {
            return None;
        }
    }
    for i in 0..order {
        for j in 0..order {
            if s_table[spec.add_index(i, j)] != spec.add_index(s_table[i], s_table[j]) {
                return None;
            }
        }
    }
    let r = spec.rank();
    let mut s = ModMatrix::zeros(spec.base(), r, r);
    for col in 0..r {
        let img = spec.from_index(s_table[spec.index_of(&spec.basis(col))]);
        for (row, &v) in img.coords().iter().enumerate() {
            s.set(row, col, v);
        }
    }
    let c = sys.cocycle();
    let elems: Vec<GroupElement> = (0..order).map(|i| spec.from_index(i)).collect();
    for i in 0..order {
        for j in 0..order {
            let (sx, sy) = (&elems[s_table[i]], &elems[s_table[j]]);
            let lhs = xi[i] * xi[j] * c.sigma(sx, sy).to_complex();
            let rhs = xi[spec.add_index(i, j)] * c.sigma(&elems[i], &elems[j]).to_complex();
            if (lhs - rhs).norm() > RELATION_TOL {
                return None;
            }
            if c.phi(sx, sy) != c.phi(&elems[i], &elems[j]) {
                return None;
            }
        }
    }
    Some(GeneralizedCliffordWitness {
        s,
        s_table,
        xi_table: xi.iter().map(|z| (z.re, z.im)).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CliffordClass {
    Plain,
    GeneralizedOnly,
}

/// `S` symplectic iff `xi` is a character; the two tests must agree.
pub fn classify_clifford(sys: &WeylSystem, w: &GeneralizedCliffordWitness) -> Result<CliffordClass> {
    let spec = sys.spec();
    let order = sys.order();
    if w.s_table.len() != order || w.xi_table.len() != order {
        return Err(Error::InconsistentWitness("tables do not cover the group".into()));
    }
    let symplectic = is_symplectic(sys.cocycle(), &w.s);
    let character = (0..order).all(|i| {
        (0..order).all(|j| (w.xi(spec.add_index(i, j)) - w.xi(i) * w.xi(j)).norm() <= RELATION_TOL)
    });
    match (symplectic, character) {
        (true, true) => Ok(CliffordClass::Plain),
        (false, false) => Ok(CliffordClass::GeneralizedOnly),
        _ => Err(Error::InconsistentWitness(format!(
            "symplectic test says {symplectic}, character test says {character}"
        ))),
    }
}

/// The translation `y` with `xi(x) = Phi(y)(Sx)`, if the witness is of that shape.
pub fn recover_translation(sys: &WeylSystem, w: &GeneralizedCliffordWitness) -> Option<GroupElement> {
    let spec = sys.spec();
    let c = sys.cocycle();
    (0..sys.order()).map(|k| spec.from_index(k)).find(|y| {
        (0..sys.order()).all(|i| (c.phi(y, &spec.from_index(w.s_table[i])).to_complex() - w.xi(i)).norm() <= RELATION_TOL)
    })
}

/// `W_rho(x) = W_{U rho U^*}(Sx + y)` for all `x`, with `U = W(y) U_S`.
pub fn covariance_check(sys: &WeylSystem, rho: &CMatrix, y: &GroupElement, s: &ModMatrix) -> Result<bool> {
    let el = realize_clifford(sys, y, s)?;
    covariance_check_with(sys, rho, &el)
}

/// [`covariance_check`] with an already realized unitary.
pub fn covariance_check_with(sys: &WeylSystem, rho: &CMatrix, el: &CliffordElement) -> Result<bool> {
    let spec = sys.spec();
    let w = fourier::wigner(sys, rho)?;
    let moved = &el.unitary * rho * el.unitary.adjoint();
    let w2 = fourier::wigner(sys, &moved)?;
    Ok((0..sys.order()).all(|i| {
        let target = apply(&el.s, &sys.element(i), spec).add(&el.y).expect("same group");
        (w.get(i) - w2.get(spec.index_of(&target))).norm() <= 1e-9
    }))
}

/// Group law `(y1, S1)(y2, S2) = (y1 + S1 y2, S1 S2)` on realized unitaries,
/// for `pairs` random pairs drawn from the enumerated symplectic group.
pub fn semidirect_check(sys: &WeylSystem, pairs: usize, seed: u64) -> Result<bool> {
    use rand::Rng;
    let sp = enumerate_symplectic(sys.cocycle())?;
    let spec = sys.spec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let s1 = &sp.maps[rng.random_range(0..sp.maps.len())];
        let s2 = &sp.maps[rng.random_range(0..sp.maps.len())];
        let y1 = spec.from_index(rng.random_range(0..sys.order()));
        let y2 = spec.from_index(rng.random_range(0..sys.order()));
        let u1 = realize_clifford(sys, &y1, s1)?;
        let u2 = realize_clifford(sys, &y2, s2)?;
        let y = y1.add(&apply(s1, &y2, spec))?;
        let u12 = realize_clifford(sys, &y, &s1.mul(s2))?;
        if !linalg::equal_mod_phase(&(&u1.unitary * &u2.unitary), &u12.unitary, 1e-8) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn phase_key(m: &CMatrix) -> Vec<(i64, i64)> {
    let n = linalg::normalize_phase(m, 1e-9);
    n.iter()
        .map(|z| ((z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64))
        .collect()
}

/// Closure of a set of unitaries under multiplication, modulo global phase.
pub fn closure_mod_phase(generators: &[CMatrix], bound: usize) -> Result<Vec<CMatrix>> {
    let Some(first) = generators.first() else {
        return Ok(Vec::new());
    };
    let dim = first.nrows();
    let id = CMatrix::identity(dim, dim);
    let mut seen: HashMap<Vec<(i64, i64)>, usize> = HashMap::new();
    let mut elements = vec![id.clone()];
    seen.insert(phase_key(&id), 0);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for h in generators {
            let p = linalg::normalize_phase(&(&g * h), 1e-9);
            let key = phase_key(&p);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                if elements.len() >= bound {
                    return Err(Error::Unsupported(format!("a closure smaller than {bound} elements")));
                }
                e.insert(elements.len());
                elements.push(p.clone());
                queue.push_back(p);
            }
        }
    }
    Ok(elements)
}

/// Single-qubit Clifford group modulo phase, generated by `H` and `diag(1, i)`.
pub fn single_qubit_clifford_group() -> Result<Vec<CMatrix>> {
    closure_mod_phase(&[linalg::hadamard(), linalg::phase_gate()], CLOSURE_BOUND)
}

/// Order of the one-qubit Clifford group; every element must be detected as a
/// generalized Clifford operation of `sys`.
pub fn clifford_group_order_qubit(sys: &WeylSystem) -> Result<usize> {
    if sys.dim() != 2 {
        return Err(Error::Unsupported("a single-qubit system".into()));
    }
    let group = single_qubit_clifford_group()?;
    for (k, u) in group.iter().enumerate() {
        if detect_generalized_clifford(sys, u).is_none() {
            return Err(Error::InconsistentWitness(format!("closure element {k} was not detected")));
        }
    }
    Ok(group.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hadamard, max_abs_diff, pauli_x, pauli_y, t_gate};

    fn sys(spec: GroupSpec, normalized: bool) -> WeylSystem {
        WeylSystem::new(spec, normalized).unwrap()
    }

    fn m(d: u32, rows: &[Vec<i64>]) -> ModMatrix {
        ModMatrix::from_rows(d, rows).unwrap()
    }

    #[test]
    fn small_symplectic_groups() {
        let f1 = Cocycle::standard(GroupSpec::fermionic(1).unwrap(), false);
        let e = enumerate_symplectic(&f1).unwrap();
        assert_eq!(e.maps, vec![ModMatrix::identity(2, 2)]);
        assert_eq!(e.criterion.as_ref().unwrap().mismatches, 0);
        let f1n = Cocycle::standard(GroupSpec::fermionic(1).unwrap(), true);
        let e = enumerate_symplectic(&f1n).unwrap();
        assert_eq!(e.order(), 3);
        assert_eq!(e.cyclic_order(), Some(3));
        let s = m(2, &[vec![0, 1], vec![1, 1]]);
        assert!(e.maps.contains(&s) && e.maps.contains(&s.mul(&s)));
        assert!(e.criterion.is_none());
        let q = Cocycle::standard(GroupSpec::finite_weyl(3, 1).unwrap(), true);
        let e = enumerate_symplectic(&q).unwrap();
        assert_eq!(e.order(), 24);
        assert_eq!(e.criterion.as_ref().unwrap().mismatches, 0);
        assert!(e.maps.iter().all(|s| s.det() == 1));
    }

    #[test]
    fn budget_refusal() {
        let c = Cocycle::standard(GroupSpec::fermionic(2).unwrap(), false);
        assert!(matches!(
            enumerate_symplectic_with_budget(&c, 1000),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn symplectic_membership() {
        let f1 = Cocycle::standard(GroupSpec::fermionic(1).unwrap(), false);
        assert!(is_symplectic(&f1, &ModMatrix::identity(2, 2)));
        assert!(!is_symplectic(&f1, &m(2, &[vec![0, 1], vec![1, 0]])));
        let q = Cocycle::standard(GroupSpec::finite_weyl(3, 1).unwrap(), true);
        assert!(is_symplectic(&q, &standard_symplectic_form(3, 1)));
    }

    #[test]
    fn realize_examples() {
        let s = sys(GroupSpec::finite_weyl(2, 1).unwrap(), false);
        let spec = s.spec().clone();
        let id = ModMatrix::identity(2, 2);
        let e = realize_clifford(&s, &spec.zero(), &id).unwrap();
        assert!(max_abs_diff(&e.unitary, &CMatrix::identity(2, 2)) < 1e-10);
        let e = realize_clifford(&s, &spec.element(&[1, 0]).unwrap(), &id).unwrap();
        assert!(max_abs_diff(&e.unitary, &pauli_x()) < 1e-10);
        let f = sys(GroupSpec::fermionic(1).unwrap(), true);
        let g = m(2, &[vec![0, 1], vec![1, 1]]);
        let e = realize_clifford(&f, &f.spec().zero(), &g).unwrap();
        let cube = &e.unitary * &e.unitary * &e.unitary;
        assert!(linalg::equal_mod_phase(&cube, &CMatrix::identity(2, 2), 1e-9));
        assert!(!linalg::equal_mod_phase(&e.unitary, &CMatrix::identity(2, 2), 1e-9));
        let w = detect_generalized_clifford(&f, &e.unitary).unwrap();
        assert_eq!(w.s, g);
        assert_eq!(classify_clifford(&f, &w).unwrap(), CliffordClass::Plain);
        let swap = m(2, &[vec![0, 1], vec![1, 0]]);
        assert!(matches!(realize_clifford(&f, &f.spec().zero(), &swap), Err(Error::NotSymplectic)));
    }

    #[test]
    fn detect_realize_round_trip() {
        let q = sys(GroupSpec::finite_weyl(3, 1).unwrap(), true);
        let sp = enumerate_symplectic(q.cocycle()).unwrap();
        for s in sp.maps.iter().step_by(5) {
            for yi in [0usize, 4, 7] {
                let y = q.element(yi);
                let e = realize_clifford(&q, &y, s).unwrap();
                let w = detect_generalized_clifford(&q, &e.unitary).unwrap();
                assert_eq!(&w.s, s);
                assert_eq!(recover_translation(&q, &w), Some(y.clone()));
                assert_eq!(classify_clifford(&q, &w).unwrap(), CliffordClass::Plain);
            }
        }
    }

    #[test]
    fn hadamard_and_t_gate() {
        let s = sys(GroupSpec::finite_weyl(2, 1).unwrap(), false);
        let w = detect_generalized_clifford(&s, &hadamard()).unwrap();
        assert_eq!(w.s, m(2, &[vec![0, 1], vec![1, 0]]));
        let expected = [1.0, 1.0, 1.0, -1.0];
        for (i, e) in expected.iter().enumerate() {
            assert!((w.xi(i) - Complex64::new(*e, 0.0)).norm() < 1e-12);
        }
        assert!(detect_generalized_clifford(&s, &t_gate()).is_none());
        let f = sys(GroupSpec::fermionic(1).unwrap(), false);
        let w = detect_generalized_clifford(&f, &hadamard()).unwrap();
        assert_eq!(classify_clifford(&f, &w).unwrap(), CliffordClass::GeneralizedOnly);
    }

    #[test]
    fn explicit_swap_witness() {
        for normalized in [false, true] {
            let f = sys(GroupSpec::fermionic(1).unwrap(), normalized);
            let swap = m(2, &[vec![0, 1], vec![1, 0]]);
            let one = Complex64::new(1.0, 0.0);
            let xi = if normalized {
                // same unitary, phases adjusted by the normalization
                let u = realize_generalized(&sys(GroupSpec::fermionic(1).unwrap(), false), &swap, &[one, one, one, -one]).unwrap();
                let w = detect_generalized_clifford(&f, &u).unwrap();
                (0..4).map(|i| w.xi(i)).collect::<Vec<_>>()
            } else {
                vec![one, one, one, -one]
            };
            let u = realize_generalized(&f, &swap, &xi).unwrap();
            let w = detect_generalized_clifford(&f, &u).unwrap();
            assert_eq!(w.s, swap);
            assert_eq!(classify_clifford(&f, &w).unwrap(), CliffordClass::GeneralizedOnly);
            let xy = (pauli_x() + pauli_y()) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            assert!(linalg::equal_mod_phase(&u, &xy, 1e-9));
        }
    }

    #[test]
    fn qubit_clifford_closure() {
        let group = single_qubit_clifford_group().unwrap();
        assert_eq!(group.len(), 24);
        let f = sys(GroupSpec::fermionic(1).unwrap(), false);
        let fn_ = sys(GroupSpec::fermionic(1).unwrap(), true);
        assert_eq!(clifford_group_order_qubit(&f).unwrap(), 24);
        assert_eq!(clifford_group_order_qubit(&fn_).unwrap(), 24);
        let detect = |s: &WeylSystem, u: &CMatrix| detect_generalized_clifford(s, u).is_some();
        assert!(!detect(&f, &t_gate()));
        assert!(!group.iter().any(|g| linalg::equal_mod_phase(g, &t_gate(), 1e-9)));
    }

    #[test]
    fn covariance_and_group_law() {
        let f = sys(GroupSpec::fermionic(1).unwrap(), true);
        let zero = CMatrix::from_row_slice(2, 2, &[linalg::ONE, linalg::ZERO, linalg::ZERO, linalg::ZERO]);
        let y = f.spec().element(&[1, 0]).unwrap();
        assert!(covariance_check(&f, &zero, &y, &ModMatrix::identity(2, 2)).unwrap());
        let q = sys(GroupSpec::finite_weyl(3, 1).unwrap(), true);
        let mut rng = random::seeded(2);
        let rho = random::random_state(3, &mut rng);
        let sp = enumerate_symplectic(q.cocycle()).unwrap();
        assert!(covariance_check(&q, &rho, &q.element(5), &sp.maps[7]).unwrap());
        assert!(semidirect_check(&q, 10, 0).unwrap());
        assert!(semidirect_check(&f, 10, 1).unwrap());
    }

    #[test]
    fn unnormalized_maps_fix_xi() {
        let c = Cocycle::standard(GroupSpec::fermionic(2).unwrap(), false);
        let sp = enumerate_symplectic(&c).unwrap();
        assert_eq!(sp.order(), 3);
        let cn = Cocycle::standard(GroupSpec::fermionic(2).unwrap(), true);
        for s in &sp.maps {
            if xi_invariant(&c, s).unwrap() {
                assert!(is_symplectic(&cn, s));
            }
        }
    }
}
