//! Finite phase-space groups `Z_d^{2n}` and their points.
//!
//! Elements are indexed canonically with the first coordinate varying
//! fastest, so for `Z_2^2` the order is `00, 10, 01, 11`. Every dense table
//! in the crate (phase functions, cocycle tables, Weyl caches) uses this index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::RootOfUnity;

/// Largest group order that [`GroupSpec::enumerate`] will materialize.
pub const MAX_ENUMERATION: u128 = 1 << 26;

/// Sign table `eps(i, j)` of a mixed spin system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i8>>", into = "Vec<Vec<i8>>")]
pub struct EpsTable {
    n: usize,
    signs: Vec<i8>,
}

impl EpsTable {
    pub fn new(rows: Vec<Vec<i8>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidSpec("eps table must have at least one mode".into()));
        }
        let mut signs = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSpec(format!("eps row {i} has length {}", row.len())));
            }
            for &s in row {
                if s != 1 && s != -1 {
                    return Err(Error::InvalidSpec(format!("eps entries must be +1 or -1, got {s}")));
                }
            }
            signs.extend_from_slice(row);
        }
        let table = EpsTable { n, signs };
        for i in 0..n {
            if table.get(i, i) != -1 {
                return Err(Error::InvalidSpec(format!("eps({0},{0}) must be -1", i + 1)));
            }
            for j in 0..n {
                if table.get(i, j) != table.get(j, i) {
                    return Err(Error::InvalidSpec(format!(
                        "eps must be symmetric, eps({},{}) != eps({},{})",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(table)
    }

    /// All signs `-1`: ordinary fermions.
    pub fn fermionic(n: usize) -> Self {
        EpsTable { n, signs: vec![-1; n * n] }
    }

    /// Hard-core bosons: `-1` on the diagonal, `+1` elsewhere.
    pub fn hard_core(n: usize) -> Self {
        let mut signs = vec![1; n * n];
        for i in 0..n {
            signs[i * n + i] = -1;
        }
        EpsTable { n, signs }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    /// `eps(i, j)` with zero-based mode indices.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.n + j]
    }

    /// `(1 - eps(i, j)) / 2` as an element of `Z_2`.
    pub fn tilde(&self, i: usize, j: usize) -> u32 {
        if self.get(i, j) == -1 {
            1
        } else {
            0
        }
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        self.signs.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

impl TryFrom<Vec<Vec<i8>>> for EpsTable {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i8>>) -> Result<Self> {
        EpsTable::new(rows)
    }
}

impl From<EpsTable> for Vec<Vec<i8>> {
    fn from(t: EpsTable) -> Self {
        t.rows()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawSpec {
    FiniteWeyl { d: u32, n: usize },
    Fermionic { n: usize },
    MixedSpin { n: usize, eps: EpsTable },
}

/// A finite phase space `Z_d^{2n}` together with the physical system it describes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub enum GroupSpec {
    /// `n` qudits of dimension `d`, phase space `Z_d^n x Z_d^n` (positions first).
    FiniteWeyl { d: u32, n: usize },
    /// `n` fermionic modes, phase space `Z_2^{2n}`.
    Fermionic { n: usize },
    /// `n` modes with mode-dependent exchange signs.
    MixedSpin { n: usize, eps: EpsTable },
}

impl TryFrom<RawSpec> for GroupSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        match raw {
            RawSpec::FiniteWeyl { d, n } => GroupSpec::finite_weyl(d, n),
            RawSpec::Fermionic { n } => GroupSpec::fermionic(n),
            RawSpec::MixedSpin { n, eps } => GroupSpec::mixed_spin(n, eps),
        }
    }
}

impl From<GroupSpec> for RawSpec {
    fn from(s: GroupSpec) -> Self {
        match s {
            GroupSpec::FiniteWeyl { d, n } => RawSpec::FiniteWeyl { d, n },
            GroupSpec::Fermionic { n } => RawSpec::Fermionic { n },
            GroupSpec::MixedSpin { n, eps } => RawSpec::MixedSpin { n, eps },
        }
    }
}

impl GroupSpec {
    pub fn finite_weyl(d: u32, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidSpec(format!("d must be >= 2, got {d}")));
        }
        if n == 0 {
            return Err(Error::InvalidSpec("n must be >= 1".into()));
        }
        Ok(GroupSpec::FiniteWeyl { d, n })
    }

    pub fn fermionic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be >= 1".into()));
        }
        Ok(GroupSpec::Fermionic { n })
    }

    pub fn mixed_spin(n: usize, eps: EpsTable) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be >= 1".into()));
        }
        if eps.modes() != n {
            return Err(Error::InvalidSpec(format!(
                "eps table has {} modes, expected {n}",
                eps.modes()
            )));
        }
        Ok(GroupSpec::MixedSpin { n, eps })
    }

    /// The modulus `d` of each coordinate (2 for fermions and mixed spins).
    pub fn base(&self) -> u32 {
        match self {
            GroupSpec::FiniteWeyl { d, .. } => *d,
            _ => 2,
        }
    }

    pub fn modes(&self) -> usize {
        match self {
            GroupSpec::FiniteWeyl { n, .. } | GroupSpec::Fermionic { n } | GroupSpec::MixedSpin { n, .. } => *n,
        }
    }

    /// Number of coordinates, `2n`.
    pub fn rank(&self) -> usize {
        2 * self.modes()
    }

    pub fn order_u128(&self) -> u128 {
        (self.base() as u128).pow(self.rank() as u32)
    }

    /// `|G|`. Panics if the order does not fit in `usize`.
    pub fn order(&self) -> usize {
        usize::try_from(self.order_u128()).expect("group order overflows usize")
    }

    /// Dimension of the Hilbert space of the irreducible representation, `d^n`.
    pub fn hilbert_dim(&self) -> usize {
        (self.base() as usize).pow(self.modes() as u32)
    }

    pub fn haar(&self) -> HaarMeasure {
        HaarMeasure {
            denominator: self.hilbert_dim() as u64,
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            base: self.base(),
            coords: vec![0; self.rank()],
        }
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::SpecMismatch(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        let d = self.base() as i64;
        Ok(GroupElement {
            base: self.base(),
            coords: coords.iter().map(|&c| c.rem_euclid(d) as u32).collect(),
        })
    }

    /// Unit vector `e_i` (zero-based).
    pub fn basis(&self, i: usize) -> GroupElement {
        let mut e = self.zero();
        e.coords[i] = 1;
        e
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.base == self.base() && x.coords.len() == self.rank()
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::SpecMismatch(format!(
                "element {:?} (mod {}) is not in Z_{}^{}",
                x.coords,
                x.base,
                self.base(),
                self.rank()
            )))
        }
    }

    pub fn index_of(&self, x: &GroupElement) -> usize {
        let d = self.base() as usize;
        x.coords.iter().rev().fold(0, |acc, &c| acc * d + c as usize)
    }

    pub fn from_index(&self, mut idx: usize) -> GroupElement {
        let d = self.base() as usize;
        let mut coords = vec![0; self.rank()];
        for c in coords.iter_mut() {
            *c = (idx % d) as u32;
            idx /= d;
        }
        GroupElement { base: self.base(), coords }
    }

    /// All elements in canonical order.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>> {
        let order = self.order_u128();
        if order > MAX_ENUMERATION {
            return Err(Error::TooLarge {
                order,
                limit: MAX_ENUMERATION,
            });
        }
        Ok((0..order as usize).map(|i| self.from_index(i)).collect())
    }

    pub fn add_index(&self, a: usize, b: usize) -> usize {
        let d = self.base() as usize;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.rank() {
            out += ((a % d + b % d) % d) * place;
            a /= d;
            b /= d;
            place *= d;
        }
        out
    }

    pub fn neg_index(&self, a: usize) -> usize {
        let d = self.base() as usize;
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.rank() {
            out += ((d - a % d) % d) * place;
            a /= d;
            place *= d;
        }
        out
    }

    pub fn sub_index(&self, a: usize, b: usize) -> usize {
        self.add_index(a, self.neg_index(b))
    }

    /// The character `gamma_p(x) = omega^{x . p}`.
    pub fn character(&self, p: &GroupElement, x: &GroupElement) -> Result<RootOfUnity> {
        self.check(p)?;
        self.check(x)?;
        let dot: u64 = p.coords.iter().zip(&x.coords).map(|(&a, &b)| a as u64 * b as u64).sum();
        Ok(RootOfUnity::omega_pow(dot as i64, self.base() as u64))
    }

    /// Short label used in CLI output, e.g. `fermion(n=2)`.
    pub fn label(&self) -> String {
        match self {
            GroupSpec::FiniteWeyl { d, n } => format!("weyl(d={d},n={n})"),
            GroupSpec::Fermionic { n } => format!("fermion(n={n})"),
            GroupSpec::MixedSpin { n, .. } => format!("mixed(n={n})"),
        }
    }
}

/// A point of `Z_d^{2n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    base: u32,
    coords: Vec<u32>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Hamming weight (number of non-zero coordinates).
    pub fn weight(&self) -> usize {
        self.coords.iter().filter(|&&c| c != 0).count()
    }

    fn same_group(&self, other: &GroupElement) -> Result<()> {
        if self.base != other.base || self.coords.len() != other.coords.len() {
            return Err(Error::SpecMismatch(format!(
                "cannot combine elements of Z_{}^{} and Z_{}^{}",
                self.base,
                self.coords.len(),
                other.base,
                other.coords.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.same_group(other)?;
        Ok(GroupElement {
            base: self.base,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| (a + b) % self.base)
                .collect(),
        })
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement {
            base: self.base,
            coords: self.coords.iter().map(|&a| (self.base - a) % self.base).collect(),
        }
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.add(&other.neg())
    }

    /// Coordinates concatenated as a string, `"01"` for `(0, 1)`.
    pub fn label(&self) -> String {
        if self.base <= 10 {
            self.coords.iter().map(|c| c.to_string()).collect()
        } else {
            self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

/// Point mass `1 / d^n` shared by the Haar measure and its dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HaarMeasure {
    denominator: u64,
}

impl HaarMeasure {
    pub fn point_weight(&self) -> f64 {
        1.0 / self.denominator as f64
    }

    pub fn dual_point_weight(&self) -> f64 {
        self.point_weight()
    }

    /// Rational point weight as `(numerator, denominator)`.
    pub fn point_weight_ratio(&self) -> (u64, u64) {
        (1, self.denominator)
    }
}
