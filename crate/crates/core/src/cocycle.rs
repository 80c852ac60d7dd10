//! 2-cocycles on finite phase spaces.
//!
//! All unnormalized cocycles used here are bicharacters `omega^{x^T B y}` for
//! an integer matrix `B` over `Z_d`:
//!
//! * canonical: `B = L = [[0, 0], [I_n, 0]]`, i.e. `sigma((x,p),(x',p')) = omega^{p . x'}`;
//! * fermionic: `B = Delta`, strictly lower triangular with ones below the diagonal;
//! * mixed spin: `B = Delta_eps`, built from the exchange signs.
//!
//! Normalized variants multiply by the coboundary `xi(x) xi(y) / xi(x+y)` with
//! `xi(x) = conj(sqrt(sigma(x,-x)))`, using the principal square root, except
//! for odd `d` canonical systems where `xi(x,p) = omega^{2^{-1} x . p}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{EpsTable, GroupElement, GroupSpec};
use crate::modmat::ModMatrix;
use crate::phase::RootOfUnity;

/// Exhaustive triple checks are used up to this many triples.
const EXHAUSTIVE_TRIPLES: u128 = 1 << 24;
const SAMPLED_TRIPLES: usize = 100_000;

/// Anything that evaluates a phase `sigma(x, y)` on a finite phase space.
pub trait TwoCocycle: Sync {
    fn spec(&self) -> &GroupSpec;
    fn sigma(&self, x: &GroupElement, y: &GroupElement) -> RootOfUnity;

    /// `Phi(x)(y) = sigma(x,y) conj(sigma(y,x))`.
    fn phi(&self, x: &GroupElement, y: &GroupElement) -> RootOfUnity {
        self.sigma(x, y) / self.sigma(y, x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CocycleKind {
    CanonicalFinite,
    CanonicalNormalizedFinite,
    Fermionic,
    FermionicNormalized,
    MixedSpin,
    MixedSpinNormalized,
}

impl CocycleKind {
    pub fn is_normalized(self) -> bool {
        matches!(
            self,
            CocycleKind::CanonicalNormalizedFinite
                | CocycleKind::FermionicNormalized
                | CocycleKind::MixedSpinNormalized
        )
    }

    pub fn normalized(self) -> CocycleKind {
        match self {
            CocycleKind::CanonicalFinite | CocycleKind::CanonicalNormalizedFinite => {
                CocycleKind::CanonicalNormalizedFinite
            }
            CocycleKind::Fermionic | CocycleKind::FermionicNormalized => CocycleKind::FermionicNormalized,
            CocycleKind::MixedSpin | CocycleKind::MixedSpinNormalized => CocycleKind::MixedSpinNormalized,
        }
    }

    pub fn unnormalized(self) -> CocycleKind {
        match self {
            CocycleKind::CanonicalFinite | CocycleKind::CanonicalNormalizedFinite => CocycleKind::CanonicalFinite,
            CocycleKind::Fermionic | CocycleKind::FermionicNormalized => CocycleKind::Fermionic,
            CocycleKind::MixedSpin | CocycleKind::MixedSpinNormalized => CocycleKind::MixedSpin,
        }
    }
}

/// `Delta`: ones strictly below the diagonal, over `Z_2`.
pub fn delta_matrix(n: usize) -> ModMatrix {
    let mut m = ModMatrix::zeros(2, 2 * n, 2 * n);
    for k in 0..2 * n {
        for j in 0..k {
            m.set(k, j, 1);
        }
    }
    m
}

/// `Delta_eps`: the block pattern built from `eps~(i,j) = (1 - eps(i,j)) / 2`.
pub fn delta_eps_matrix(eps: &EpsTable) -> ModMatrix {
    let n = eps.modes();
    let mut m = ModMatrix::zeros(2, 2 * n, 2 * n);
    for j in 0..n {
        for i in 0..j {
            let t = eps.tilde(i, j);
            for r in [2 * j, 2 * j + 1] {
                for c in [2 * i, 2 * i + 1] {
                    m.set(r, c, t);
                }
            }
        }
        m.set(2 * j + 1, 2 * j, 1);
    }
    m
}

/// `L = [[0, 0], [I_n, 0]]` over `Z_d`.
pub fn canonical_form(d: u32, n: usize) -> ModMatrix {
    let mut m = ModMatrix::zeros(d, 2 * n, 2 * n);
    for i in 0..n {
        m.set(n + i, i, 1);
    }
    m
}

/// `J = [[0, I_n], [-I_n, 0]]` over `Z_d`.
pub fn standard_symplectic_form(d: u32, n: usize) -> ModMatrix {
    let mut m = ModMatrix::zeros(d, 2 * n, 2 * n);
    for i in 0..n {
        m.set(i, n + i, 1);
        m.set(n + i, i, d - 1);
    }
    m
}

/// Block upper-triangular `P` with `P^T (Delta_eps + Delta_eps^T) P = (+)_j Omega`.
pub fn mixed_spin_congruence(eps: &EpsTable) -> ModMatrix {
    let n = eps.modes();
    let mut p = ModMatrix::identity(2, 2 * n);
    for i in 0..n {
        for j in i + 1..n {
            let t = eps.tilde(i, j);
            for r in [2 * i, 2 * i + 1] {
                for c in [2 * j, 2 * j + 1] {
                    p.set(r, c, t);
                }
            }
        }
    }
    p
}

/// `(+)_j Omega` with `Omega = [[0,1],[1,0]]`.
pub fn block_omega(n: usize) -> ModMatrix {
    let mut m = ModMatrix::zeros(2, 2 * n, 2 * n);
    for j in 0..n {
        m.set(2 * j, 2 * j + 1, 1);
        m.set(2 * j + 1, 2 * j, 1);
    }
    m
}

/// One of the standard cocycles on a [`GroupSpec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    spec: GroupSpec,
    kind: CocycleKind,
    form: ModMatrix,
}

impl Cocycle {
    pub fn new(spec: GroupSpec, kind: CocycleKind) -> Result<Self> {
        let form = match (&spec, kind.unnormalized()) {
            (GroupSpec::FiniteWeyl { d, n }, CocycleKind::CanonicalFinite) => canonical_form(*d, *n),
            (GroupSpec::Fermionic { n }, CocycleKind::Fermionic) => delta_matrix(*n),
            (GroupSpec::MixedSpin { eps, .. }, CocycleKind::MixedSpin) => delta_eps_matrix(eps),
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "cocycle kind {kind:?} does not apply to {}",
                    spec.label()
                )))
            }
        };
        Ok(Cocycle { spec, kind, form })
    }

    /// The canonical (unnormalized) or canonically normalized cocycle for `spec`.
    pub fn standard(spec: GroupSpec, normalized: bool) -> Self {
        let kind = match &spec {
            GroupSpec::FiniteWeyl { .. } => CocycleKind::CanonicalFinite,
            GroupSpec::Fermionic { .. } => CocycleKind::Fermionic,
            GroupSpec::MixedSpin { .. } => CocycleKind::MixedSpin,
        };
        let kind = if normalized { kind.normalized() } else { kind };
        Cocycle::new(spec, kind).expect("standard kind always matches its spec")
    }

    pub fn kind(&self) -> CocycleKind {
        self.kind
    }

    pub fn is_normalized_kind(&self) -> bool {
        self.kind.is_normalized()
    }

    /// Bilinear form `B` of the underlying unnormalized cocycle.
    pub fn form(&self) -> &ModMatrix {
        &self.form
    }

    /// Matrix `B - B^T` of the bicharacter `Phi(x)(y) = omega^{x^T (B - B^T) y}`.
    pub fn phi_form(&self) -> ModMatrix {
        self.form.sub(&self.form.transpose())
    }

    fn base_sigma(&self, x: &GroupElement, y: &GroupElement) -> RootOfUnity {
        let e = self.form.bilinear(x.coords(), y.coords());
        RootOfUnity::omega_pow(e as i64, self.spec.base() as u64)
    }

    /// Normalization factor `xi(x)`; identically 1 for unnormalized kinds.
    pub fn xi(&self, x: &GroupElement) -> RootOfUnity {
        if !self.kind.is_normalized() {
            return RootOfUnity::ONE;
        }
        let d = self.spec.base();
        if self.kind == CocycleKind::CanonicalNormalizedFinite && d % 2 == 1 {
            let n = self.spec.modes();
            let c = x.coords();
            let dot: u64 = (0..n).map(|i| c[i] as u64 * c[n + i] as u64).sum();
            let half = (d as u64).div_ceil(2);
            return RootOfUnity::omega_pow((half * dot) as i64, d as u64);
        }
        self.base_sigma(x, &x.neg()).principal_sqrt().conj()
    }

    /// Checked evaluation.
    pub fn eval_sigma(&self, x: &GroupElement, y: &GroupElement) -> Result<RootOfUnity> {
        self.spec.check(x)?;
        self.spec.check(y)?;
        Ok(self.sigma(x, y))
    }

    /// Canonical normalization of this cocycle together with its `xi` table.
    ///
    /// Normalizing an already normalized cocycle returns it unchanged with `xi = 1`.
    pub fn normalize(&self) -> Result<(Cocycle, NormalizationXi)> {
        let elems = self.spec.enumerate()?;
        if self.kind.is_normalized() {
            return Ok((
                self.clone(),
                NormalizationXi {
                    spec: self.spec.clone(),
                    values: vec![RootOfUnity::ONE; elems.len()],
                },
            ));
        }
        let normalized = Cocycle::new(self.spec.clone(), self.kind.normalized())?;
        let values = elems.iter().map(|x| normalized.xi(x)).collect();
        Ok((
            normalized,
            NormalizationXi {
                spec: self.spec.clone(),
                values,
            },
        ))
    }

    /// The same system with the unnormalized cocycle.
    pub fn unnormalized(&self) -> Cocycle {
        Cocycle::new(self.spec.clone(), self.kind.unnormalized()).expect("same spec")
    }
}

impl TwoCocycle for Cocycle {
    fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn sigma(&self, x: &GroupElement, y: &GroupElement) -> RootOfUnity {
        let base = self.base_sigma(x, y);
        if !self.kind.is_normalized() {
            return base;
        }
        let xy = x.add(y).expect("same group");
        base * self.xi(x) * self.xi(y) / self.xi(&xy)
    }

    fn phi(&self, x: &GroupElement, y: &GroupElement) -> RootOfUnity {
        // the coboundary cancels in sigma(x,y)/sigma(y,x)
        self.base_sigma(x, y) / self.base_sigma(y, x)
    }
}

/// Table of `xi(x)` in canonical index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationXi {
    spec: GroupSpec,
    values: Vec<RootOfUnity>,
}

impl NormalizationXi {
    pub fn get(&self, x: &GroupElement) -> RootOfUnity {
        self.values[self.spec.index_of(x)]
    }

    pub fn values(&self) -> &[RootOfUnity] {
        &self.values
    }
}

/// A cocycle stored as a dense `|G| x |G|` table; used for perturbation
/// experiments and for cocycles that are not bicharacters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabulatedCocycle {
    spec: GroupSpec,
    order: usize,
    values: Vec<RootOfUnity>,
}

impl TabulatedCocycle {
    pub fn tabulate(c: &dyn TwoCocycle) -> Result<Self> {
        let spec = c.spec().clone();
        let elems = spec.enumerate()?;
        let order = elems.len();
        let mut values = Vec::with_capacity(order * order);
        for x in &elems {
            for y in &elems {
                values.push(c.sigma(x, y));
            }
        }
        Ok(TabulatedCocycle { spec, order, values })
    }

    /// The trivial cocycle `sigma = 1`.
    pub fn trivial(spec: GroupSpec) -> Self {
        let order = spec.order();
        TabulatedCocycle {
            spec,
            order,
            values: vec![RootOfUnity::ONE; order * order],
        }
    }

    pub fn set(&mut self, x: &GroupElement, y: &GroupElement, value: RootOfUnity) {
        let (i, j) = (self.spec.index_of(x), self.spec.index_of(y));
        self.values[i * self.order + j] = value;
    }
}

impl TwoCocycle for TabulatedCocycle {
    fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn sigma(&self, x: &GroupElement, y: &GroupElement) -> RootOfUnity {
        self.values[self.spec.index_of(x) * self.order + self.spec.index_of(y)]
    }
}

fn cocycle_identity_holds(c: &dyn TwoCocycle, x: &GroupElement, y: &GroupElement, z: &GroupElement) -> bool {
    let xy = x.add(y).unwrap();
    let yz = y.add(z).unwrap();
    c.sigma(x, y) * c.sigma(&xy, z) == c.sigma(x, &yz) * c.sigma(y, z)
}

/// Checks `sigma(x,y) sigma(x+y,z) = sigma(x,y+z) sigma(y,z)` and unitality.
///
/// Exhaustive when `|G|^3 <= 2^24`; otherwise a fixed-seed sample of triples.
pub fn verify_cocycle(c: &dyn TwoCocycle) -> bool {
    let spec = c.spec();
    let order = spec.order_u128();
    let zero = spec.zero();
    if order.pow(3) <= EXHAUSTIVE_TRIPLES {
        let elems = match spec.enumerate() {
            Ok(e) => e,
            Err(_) => return false,
        };
        for x in &elems {
            if !c.sigma(x, &zero).is_one() || !c.sigma(&zero, x).is_one() {
                return false;
            }
        }
        use rayon::prelude::*;
        return elems.par_iter().all(|x| {
            elems
                .iter()
                .all(|y| elems.iter().all(|z| cocycle_identity_holds(c, x, y, z)))
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let order = spec.order();
    let pick = |rng: &mut ChaCha8Rng| spec.from_index(rng.random_range(0..order));
    for _ in 0..SAMPLED_TRIPLES {
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        if !c.sigma(&x, &zero).is_one() || !c.sigma(&zero, &x).is_one() {
            return false;
        }
        if !cocycle_identity_holds(c, &x, &y, &z) {
            return false;
        }
    }
    true
}

/// True iff `sigma(x, -x) = 1` for every `x`.
pub fn is_normalized(c: &dyn TwoCocycle) -> bool {
    let spec = c.spec();
    match spec.enumerate() {
        Ok(elems) => elems.iter().all(|x| c.sigma(x, &x.neg()).is_one()),
        Err(_) => false,
    }
}

/// True iff `x -> Phi(x)` is an isomorphism `G -> G^`.
///
/// `Phi` is read off on basis vectors as a matrix over `Z_d`; the bicharacter
/// property is verified on all pairs (sampled for large groups) and the matrix
/// must be invertible mod `d`.
pub fn is_heisenberg(c: &dyn TwoCocycle) -> bool {
    let spec = c.spec();
    let d = spec.base() as u64;
    let r = spec.rank();
    let mut p = ModMatrix::zeros(spec.base(), r, r);
    for i in 0..r {
        for j in 0..r {
            let v = c.phi(&spec.basis(i), &spec.basis(j));
            if !d.is_multiple_of(v.order()) {
                return false;
            }
            p.set(i, j, (v.turns() * (d / v.order())) as u32);
        }
    }
    let matches = |x: &GroupElement, y: &GroupElement| {
        c.phi(x, y) == RootOfUnity::omega_pow(p.bilinear(x.coords(), y.coords()) as i64, d)
    };
    let order = spec.order_u128();
    if order * order <= EXHAUSTIVE_TRIPLES {
        let elems = spec.enumerate().expect("small group");
        if !elems.iter().all(|x| elems.iter().all(|y| matches(x, y))) {
            return false;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let order = spec.order();
        for _ in 0..SAMPLED_TRIPLES {
            let x = spec.from_index(rng.random_range(0..order));
            let y = spec.from_index(rng.random_range(0..order));
            if !matches(&x, &y) {
                return false;
            }
        }
    }
    p.is_invertible()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn el(spec: &GroupSpec, c: &[i64]) -> GroupElement {
        spec.element(c).unwrap()
    }

    #[test]
    fn canonical_values() {
        let spec = GroupSpec::finite_weyl(3, 1).unwrap();
        let c = Cocycle::standard(spec.clone(), false);
        let v = c.eval_sigma(&el(&spec, &[1, 1]), &el(&spec, &[1, 0])).unwrap();
        assert_eq!(v, RootOfUnity::omega_pow(1, 3));
        let expected = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((v.to_complex() - expected).norm() < 1e-15);
    }

    #[test]
    fn fermionic_values() {
        let spec = GroupSpec::fermionic(1).unwrap();
        let c = Cocycle::standard(spec.clone(), false);
        assert_eq!(c.sigma(&el(&spec, &[0, 1]), &el(&spec, &[1, 0])), RootOfUnity::sign(1));
        assert!(c.sigma(&el(&spec, &[1, 0]), &el(&spec, &[0, 1])).is_one());
        assert_eq!(
            c.phi(&el(&spec, &[1, 0]), &el(&spec, &[0, 1])),
            RootOfUnity::sign(1)
        );
    }

    #[test]
    fn unitality_for_all_kinds() {
        let specs = [
            GroupSpec::finite_weyl(3, 1).unwrap(),
            GroupSpec::finite_weyl(4, 1).unwrap(),
            GroupSpec::fermionic(2).unwrap(),
            GroupSpec::mixed_spin(2, EpsTable::hard_core(2)).unwrap(),
        ];
        for spec in specs {
            for normalized in [false, true] {
                let c = Cocycle::standard(spec.clone(), normalized);
                for x in spec.enumerate().unwrap() {
                    assert!(c.sigma(&x, &spec.zero()).is_one());
                    assert!(c.sigma(&spec.zero(), &x).is_one());
                    assert!(c.phi(&x, &x).is_one());
                    assert!(c.phi(&spec.zero(), &x).is_one());
                }
            }
        }
    }

    #[test]
    fn one_mode_fermionic_xi_table() {
        let spec = GroupSpec::fermionic(1).unwrap();
        let (_, xi) = Cocycle::standard(spec.clone(), false).normalize().unwrap();
        let i = RootOfUnity::new(1, 4);
        let table: Vec<_> = xi.values().to_vec();
        assert_eq!(table, vec![RootOfUnity::ONE, RootOfUnity::ONE, RootOfUnity::ONE, i.conj()]);
    }

    #[test]
    fn odd_d_normalized_closed_form() {
        for d in [3u32, 5, 7] {
            let spec = GroupSpec::finite_weyl(d, 1).unwrap();
            let c = Cocycle::standard(spec.clone(), true);
            let j = standard_symplectic_form(d, 1);
            let half = d.div_ceil(2) as i64;
            for x in spec.enumerate().unwrap() {
                for y in spec.enumerate().unwrap() {
                    let e = j.bilinear(x.coords(), y.coords()) as i64;
                    assert_eq!(c.sigma(&x, &y), RootOfUnity::omega_pow(-half * e, d as u64));
                }
            }
        }
    }

    #[test]
    fn normalization_is_coboundary_and_normalized() {
        for spec in [
            GroupSpec::finite_weyl(2, 2).unwrap(),
            GroupSpec::finite_weyl(5, 1).unwrap(),
            GroupSpec::finite_weyl(4, 1).unwrap(),
            GroupSpec::fermionic(2).unwrap(),
        ] {
            let c = Cocycle::standard(spec.clone(), false);
            let (ct, xi) = c.normalize().unwrap();
            assert!(xi.get(&spec.zero()).is_one());
            assert!(is_normalized(&ct));
            for x in spec.enumerate().unwrap() {
                for y in spec.enumerate().unwrap() {
                    let ratio = ct.sigma(&x, &y) / c.sigma(&x, &y);
                    let xy = x.add(&y).unwrap();
                    assert_eq!(ratio, xi.get(&x) * xi.get(&y) / xi.get(&xy));
                }
            }
            // normalizing again changes nothing
            let (again, xi2) = ct.normalize().unwrap();
            assert_eq!(again, ct);
            assert!(xi2.values().iter().all(|v| v.is_one()));
        }
    }

    #[test]
    fn unnormalized_canonical_is_not_normalized() {
        let c = Cocycle::standard(GroupSpec::finite_weyl(3, 1).unwrap(), false);
        assert!(!is_normalized(&c));
    }

    #[test]
    fn cocycle_identity_exhaustive() {
        let mut eps = EpsTable::fermionic(2).rows();
        eps[0][1] = 1;
        eps[1][0] = 1;
        let spec = GroupSpec::mixed_spin(2, EpsTable::new(eps).unwrap()).unwrap();
        assert!(verify_cocycle(&Cocycle::standard(spec.clone(), false)));
        assert!(verify_cocycle(&Cocycle::standard(spec, true)));
        let spec = GroupSpec::finite_weyl(5, 1).unwrap();
        assert!(verify_cocycle(&Cocycle::standard(spec, true)));
    }

    #[test]
    fn perturbed_cocycle_fails() {
        let spec = GroupSpec::fermionic(1).unwrap();
        let c = Cocycle::standard(spec.clone(), false);
        let mut t = TabulatedCocycle::tabulate(&c).unwrap();
        assert!(verify_cocycle(&t));
        t.set(&el(&spec, &[1, 0]), &el(&spec, &[1, 1]), RootOfUnity::new(1, 4));
        assert!(!verify_cocycle(&t));
    }

    #[test]
    fn heisenberg_multipliers() {
        for n in 1..=3 {
            let spec = GroupSpec::fermionic(n).unwrap();
            assert!(is_heisenberg(&Cocycle::standard(spec.clone(), false)));
            assert!(is_heisenberg(&Cocycle::standard(spec, true)));
        }
        let q = GroupSpec::finite_weyl(3, 1).unwrap();
        assert!(is_heisenberg(&Cocycle::standard(q.clone(), false)));
        assert!(is_heisenberg(&Cocycle::standard(q, true)));
        assert!(!is_heisenberg(&TabulatedCocycle::trivial(GroupSpec::fermionic(1).unwrap())));
    }

    #[test]
    fn delta_eps_congruence() {
        let tables = [
            EpsTable::fermionic(3),
            EpsTable::hard_core(3),
            EpsTable::new(vec![vec![-1, 1, -1], vec![1, -1, 1], vec![-1, 1, -1]]).unwrap(),
        ];
        for eps in tables {
            let d = delta_eps_matrix(&eps);
            let sym = d.add(&d.transpose());
            let p = mixed_spin_congruence(&eps);
            assert_eq!(p.transpose().mul(&sym).mul(&p), block_omega(3));
            assert!(sym.is_invertible());
        }
        // hard-core bosons: already block diagonal
        let d = delta_eps_matrix(&EpsTable::hard_core(3));
        assert_eq!(d.add(&d.transpose()), block_omega(3));
        // eps = -1 everywhere recovers Delta
        assert_eq!(delta_eps_matrix(&EpsTable::fermionic(3)), delta_matrix(3));
    }

    #[test]
    fn fermionic_phi_kernel() {
        let spec = GroupSpec::fermionic(2).unwrap();
        let c = Cocycle::standard(spec.clone(), false);
        let k = delta_matrix(2).add(&delta_matrix(2).transpose());
        for x in spec.enumerate().unwrap() {
            for y in spec.enumerate().unwrap() {
                assert_eq!(c.phi(&x, &y), RootOfUnity::sign(k.bilinear(x.coords(), y.coords()) as i64));
            }
        }
    }

    #[test]
    fn kind_spec_mismatch_rejected() {
        assert!(Cocycle::new(GroupSpec::fermionic(1).unwrap(), CocycleKind::CanonicalFinite).is_err());
        let spec = GroupSpec::fermionic(1).unwrap();
        let other = GroupSpec::finite_weyl(3, 1).unwrap();
        let c = Cocycle::standard(spec.clone(), false);
        assert!(c.eval_sigma(&other.zero(), &spec.zero()).is_err());
    }
}
