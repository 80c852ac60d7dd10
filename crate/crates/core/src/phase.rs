//! Exact roots of unity.
//!
//! Every cocycle value on `Z_d^{2n}` is a root of unity whose order divides
//! `2d` (or `4` for the normalized fermionic cocycles), so phases are kept as
//! reduced fractions `k / order` of a full turn. Equality is structural, which
//! is what the brute-force symmetry searches rely on.

use std::fmt;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `exp(2 pi i * turns / order)` with `0 <= turns < order` and the fraction reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    turns: u64,
    order: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { turns: 0, order: 1 };

    pub fn new(turns: i64, order: u64) -> Self {
        assert!(order > 0, "root of unity with zero order");
        let t = turns.rem_euclid(order as i64) as u64;
        let g = gcd(t, order);
        RootOfUnity {
            turns: t / g,
            order: order / g,
        }
    }

    /// `omega^k` with `omega = exp(2 pi i / d)`.
    pub fn omega_pow(k: i64, d: u64) -> Self {
        Self::new(k, d)
    }

    /// `(-1)^k`.
    pub fn sign(k: i64) -> Self {
        Self::new(k, 2)
    }

    pub fn turns(&self) -> u64 {
        self.turns
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_one(&self) -> bool {
        self.turns == 0
    }

    pub fn conj(self) -> Self {
        Self::new(-(self.turns as i64), self.order)
    }

    pub fn pow(self, e: i64) -> Self {
        let t = (self.turns as i128 * e as i128).rem_euclid(self.order as i128) as i64;
        Self::new(t, self.order)
    }

    /// Principal square root: the argument of `self` is taken in `(-pi, pi]`
    /// and halved, so the result has argument in `(-pi/2, pi/2]`.
    pub fn principal_sqrt(self) -> Self {
        // angle = 2 pi t / N; in (-pi, pi] iff 2t <= N, otherwise shift by -2 pi.
        let n = self.order as i64;
        let t = self.turns as i64;
        if 2 * t <= n {
            Self::new(t, 2 * self.order)
        } else {
            Self::new(t - n, 2 * self.order)
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match (self.turns, self.order) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (t, n) => {
                let angle = 2.0 * std::f64::consts::PI * t as f64 / n as f64;
                Complex64::new(angle.cos(), angle.sin())
            }
        }
    }

    /// Real sign when the phase is `+1` or `-1`.
    pub fn as_sign(self) -> Option<f64> {
        match (self.turns, self.order) {
            (0, _) => Some(1.0),
            (1, 2) => Some(-1.0),
            _ => None,
        }
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let g = gcd(self.order, rhs.order);
        let l = self.order / g * rhs.order;
        let a = self.turns * (l / self.order);
        let b = rhs.turns * (l / rhs.order);
        RootOfUnity::new(((a + b) % l) as i64, l)
    }
}

impl Div for RootOfUnity {
    type Output = RootOfUnity;

    fn div(self, rhs: RootOfUnity) -> RootOfUnity {
        self * rhs.conj()
    }
}

impl fmt::Debug for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2pi i {}/{})", self.turns, self.order)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_identity() {
        assert_eq!(RootOfUnity::new(2, 4), RootOfUnity::sign(1));
        assert_eq!(RootOfUnity::new(6, 3), RootOfUnity::ONE);
        assert!(RootOfUnity::new(-5, 5).is_one());
    }

    #[test]
    fn principal_sqrt_branch() {
        // sqrt(-1) = i, so conj gives the -i entry of the one-mode table
        assert_eq!(RootOfUnity::sign(1).principal_sqrt(), RootOfUnity::new(1, 4));
        assert_eq!(RootOfUnity::ONE.principal_sqrt(), RootOfUnity::ONE);
        // exp(-2 pi i/3) -> exp(-pi i/3)
        let w = RootOfUnity::new(2, 3).principal_sqrt();
        assert_eq!(w, RootOfUnity::new(-1, 6));
        assert_eq!(w * w, RootOfUnity::new(2, 3));
    }

    #[test]
    fn mixed_order_products() {
        let a = RootOfUnity::new(1, 4);
        let b = RootOfUnity::new(1, 6);
        let c = a * b;
        assert_eq!(c, RootOfUnity::new(5, 12));
        assert!((c.to_complex() - a.to_complex() * b.to_complex()).norm() < 1e-15);
        assert!((a / a).is_one());
    }
}
