//! Band-limited angle-number system on `T x Z`.
//!
//! States are trigonometric polynomials `psi = sum_{|m| <= M} c_m e_m` with
//! `e_m(theta) = exp(2 pi i m theta)`, angles taken in `[0, 1)`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-10;
const PHASE_TOL: f64 = 1e-9;

fn e(m: i64, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (m as f64) * theta)
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// `int_0^1 exp(pi i k a) da`: `delta_{k,0}` for even `k`, `2i / (pi k)` for odd `k`.
fn half_angle_integral(k: i64) -> Complex64 {
    if k % 2 == 0 {
        if k == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    } else {
        Complex64::new(0.0, 2.0 / (PI * k as f64))
    }
}

/// A normalized trigonometric polynomial of band `M`, sampled on an `N`-point angle grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusState {
    band: usize,
    coeffs: Vec<Complex64>,
    grid: usize,
}

impl TorusState {
    /// `coeffs[j]` is the coefficient of `e_{j - M}`.
    pub fn new(band: usize, coeffs: Vec<Complex64>, grid: usize) -> Result<Self> {
        if coeffs.len() != 2 * band + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * band + 1,
                got: coeffs.len(),
            });
        }
        let needed = 4 * band + 4;
        if grid < needed || !grid.is_multiple_of(2) {
            return Err(Error::GridTooSmall { grid, band, needed });
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalizedState(norm));
        }
        Ok(Self { band, coeffs, grid })
    }

    /// Smallest admissible grid for a band.
    pub fn min_grid(band: usize) -> usize {
        4 * band + 4
    }

    /// The basis vector `e_m`.
    pub fn basis(m: i64, band: usize, grid: usize) -> Result<Self> {
        if m.unsigned_abs() as usize > band {
            return Err(Error::InvalidState(format!("mode {m} outside band {band}")));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * band + 1];
        coeffs[(m + band as i64) as usize] = Complex64::new(1.0, 0.0);
        Self::new(band, coeffs, grid)
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn with_grid(&self, grid: usize) -> Result<Self> {
        Self::new(self.band, self.coeffs.clone(), grid)
    }

    /// Coefficient of `e_m`, zero outside the band.
    pub fn coeff(&self, m: i64) -> Complex64 {
        let b = self.band as i64;
        if m.abs() > b {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(m + b) as usize]
        }
    }

    fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let b = self.band as i64;
        self.coeffs.iter().enumerate().map(move |(j, c)| (j as i64 - b, *c))
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.modes().map(|(m, c)| c * e(m, theta)).sum()
    }
}

/// Wigner function on the grid `theta_k = k / N` for `n` in `[-2M, 2M]`.
///
/// Values are complex: the half-angle kernel contributes `2i / (pi k)` for
/// odd `k = m + m' - 2n`, so the result need not be real.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleNumberWigner {
    band: usize,
    grid: usize,
    /// Row-major: one row of `grid` values per `n`, starting at `n = -2M`.
    values: Vec<Complex64>,
}

impl AngleNumberWigner {
    pub fn band(&self) -> usize {
        self.band
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn n_range(&self) -> std::ops::RangeInclusive<i64> {
        let b = 2 * self.band as i64;
        -b..=b
    }

    pub fn theta(&self, k: usize) -> f64 {
        k as f64 / self.grid as f64
    }

    pub fn get(&self, k: usize, n: i64) -> Complex64 {
        let row = (n + 2 * self.band as i64) as usize;
        self.values[row * self.grid + k]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// `sum_n int W(theta, n) d theta`, the angle integral by the grid rule
    /// (exact for trigonometric polynomials of degree below `N / 2`).
    pub fn normalization(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.grid as f64
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// CSV with columns `theta,n,re,im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidState(format!("csv output failed: {e}"));
        w.write_record(["theta", "n", "re", "im"]).map_err(io)?;
        for n in self.n_range() {
            for k in 0..self.grid {
                let v = self.get(k, n);
                w.write_record([
                    self.theta(k).to_string(),
                    n.to_string(),
                    v.re.to_string(),
                    v.im.to_string(),
                ])
                .map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::InvalidState(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

/// Wigner value at a single point, summed term by term over the rank-one expansion.
pub fn wigner_at(psi: &TorusState, theta: f64, n: i64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, cm) in psi.modes() {
        if cm == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (mp, cmp) in psi.modes() {
            let k = m + mp - 2 * n;
            let kernel = half_angle_integral(k);
            if kernel.norm() == 0.0 {
                continue;
            }
            acc += cm * cmp.conj() * e(m - mp, theta) * kernel;
        }
    }
    acc
}

/// Wigner function of `|psi><psi|` on the state's grid.
pub fn mukunda_wigner(psi: &TorusState) -> Result<AngleNumberWigner> {
    let band = psi.band();
    let grid = psi.grid();
    let b = 2 * band as i64;
    let values: Vec<Complex64> = (-b..=b)
        .into_par_iter()
        .flat_map_iter(|n| {
            (0..grid).map(move |k| wigner_at(psi, k as f64 / grid as f64, n))
        })
        .collect();
    Ok(AngleNumberWigner { band, grid, values })
}

/// `chi(theta, n) = sum_m c_m conj(c_{m-n}) e_m(theta)`.
pub fn char_function_anglenum(psi: &TorusState, theta: f64, n: i64) -> Complex64 {
    psi.modes().map(|(m, c)| c * psi.coeff(m - n).conj() * e(m, theta)).sum()
}

/// A point of `T x Z`, angle in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    pub theta: f64,
    pub n: i64,
}

impl TorusPoint {
    pub fn new(theta: f64, n: i64) -> Self {
        Self { theta: frac(theta), n }
    }

    pub fn plus(self, other: Self) -> Self {
        Self::new(self.theta + other.theta, self.n + other.n)
    }
}

/// `sigma((theta, n), (theta', n')) = exp(2 pi i n theta')`.
pub fn sigma_can(x: TorusPoint, y: TorusPoint) -> Complex64 {
    e(x.n, y.theta)
}

/// `xi(theta, n) = exp(pi i n {theta})`.
pub fn xi(x: TorusPoint) -> Complex64 {
    Complex64::from_polar(1.0, PI * x.n as f64 * frac(x.theta))
}

/// Coboundary-modified cocycle `sigma_can(x, y) xi(x) xi(y) / xi(x + y)`.
pub fn sigma_normalized(x: TorusPoint, y: TorusPoint) -> Complex64 {
    sigma_can(x, y) * xi(x) * xi(y) / xi(x.plus(y))
}

/// The automorphism `(theta, n) -> (m theta + n alpha, k n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusAutomorphism {
    pub alpha: f64,
    pub m: i64,
    pub k: i64,
}

impl TorusAutomorphism {
    pub fn new(alpha: f64, m: i64, k: i64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) || m.abs() != 1 || k.abs() != 1 {
            return Err(Error::InvalidSpec(format!(
                "automorphism needs alpha in [0,1) and m, k = +-1 (got {alpha}, {m}, {k})"
            )));
        }
        Ok(Self { alpha, m, k })
    }

    pub fn apply(&self, x: TorusPoint) -> TorusPoint {
        TorusPoint::new(self.m as f64 * x.theta + x.n as f64 * self.alpha, self.k * x.n)
    }
}

/// Sample points: `samples` equally spaced angles plus `1 - alpha`,
/// `(1 + alpha) / 2`, `(alpha - 1) / 2` and `alpha`, each with `n` in `-2..=2`.
pub fn sample_points(alpha: f64, samples: usize) -> Vec<TorusPoint> {
    let mut thetas: Vec<f64> = (0..samples.max(1)).map(|j| j as f64 / samples.max(1) as f64).collect();
    thetas.extend([1.0 - alpha, (1.0 + alpha) / 2.0, (alpha - 1.0) / 2.0, alpha]);
    let mut pts = Vec::new();
    for &t in &thetas {
        for n in -2..=2 {
            pts.push(TorusPoint::new(t, n));
        }
    }
    pts
}

/// Whether `S(alpha, m, k)` preserves `sigma_can` (or its normalization) on the sample grid.
pub fn check_toruszz_automorphism(alpha: f64, m: i64, k: i64, normalized: bool, samples: usize) -> Result<bool> {
    let s = TorusAutomorphism::new(alpha, m, k)?;
    let sigma: fn(TorusPoint, TorusPoint) -> Complex64 = if normalized { sigma_normalized } else { sigma_can };
    let pts = sample_points(alpha, samples);
    Ok(pts.par_iter().all(|&x| {
        pts.iter()
            .all(|&y| (sigma(s.apply(x), s.apply(y)) - sigma(x, y)).norm() <= PHASE_TOL)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(TorusState::basis(0, 2, 10), Err(Error::GridTooSmall { needed: 12, .. })));
        assert!(matches!(TorusState::basis(0, 2, 13), Err(Error::GridTooSmall { .. })));
        assert!(TorusState::basis(0, 2, 12).is_ok());
        assert!(matches!(
            TorusState::new(1, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], 8),
            Err(Error::NotNormalizedState(_))
        ));
        assert!(TorusState::basis(3, 2, 12).is_err());
    }

    #[test]
    fn basis_state_is_a_delta_in_n() {
        for m in -2..=2 {
            let w = mukunda_wigner(&TorusState::basis(m, 2, 12).unwrap()).unwrap();
            for n in w.n_range() {
                for k in 0..w.grid() {
                    let expected = if n == m { 1.0 } else { 0.0 };
                    assert_eq!(w.get(k, n), c(expected, 0.0));
                }
            }
        }
    }

    #[test]
    fn superposition_has_imaginary_interference() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = TorusState::new(1, vec![c(0.0, 0.0), c(r, 0.0), c(r, 0.0)], 8).unwrap();
        let w = mukunda_wigner(&psi).unwrap();
        assert!((w.normalization() - c(1.0, 0.0)).norm() < 1e-12);
        // diagonal part: 1/2 at n = 0 and n = 1
        // cross part: Re(e_1(theta)) * 2i/(pi (1 - 2n))
        for n in w.n_range() {
            for k in 0..w.grid() {
                let t = w.theta(k);
                let diag = if n == 0 || n == 1 { 0.5 } else { 0.0 };
                let cross = (2.0 * PI * t).cos() * 2.0 / (PI * (1 - 2 * n) as f64);
                assert!((w.get(k, n) - c(diag, cross)).norm() < 1e-12);
            }
        }
        assert!(w.max_imag() > 0.1);
    }

    #[test]
    fn char_function_examples() {
        let psi = TorusState::basis(0, 1, 8).unwrap();
        assert_eq!(char_function_anglenum(&psi, 0.3, 0), c(1.0, 0.0));
        assert_eq!(char_function_anglenum(&psi, 0.3, 1), c(0.0, 0.0));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = TorusState::new(1, vec![c(0.0, r), c(0.0, 0.0), c(r, 0.0)], 8).unwrap();
        assert!((char_function_anglenum(&psi, 0.0, 0) - c(1.0, 0.0)).norm() < 1e-14);
        // n = 2 pairs e_1 with e_{-1}
        let expected = c(r, 0.0) * c(0.0, r).conj() * e(1, 0.2);
        assert!((char_function_anglenum(&psi, 0.2, 2) - expected).norm() < 1e-14);
    }

    #[test]
    fn refining_the_grid_keeps_shared_points() {
        let r = 0.5;
        let psi = TorusState::new(1, vec![c(r, 0.0), c(0.0, r), c(r, r)], 8).unwrap();
        let coarse = mukunda_wigner(&psi).unwrap();
        let fine = mukunda_wigner(&psi.with_grid(16).unwrap()).unwrap();
        for n in coarse.n_range() {
            for k in 0..8 {
                assert!((coarse.get(k, n) - fine.get(2 * k, n)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn automorphism_verdicts() {
        assert!(check_toruszz_automorphism(0.0, 1, 1, false, 16).unwrap());
        assert!(check_toruszz_automorphism(0.0, 1, 1, true, 16).unwrap());
        assert!(check_toruszz_automorphism(0.0, -1, -1, false, 16).unwrap());
        assert!(!check_toruszz_automorphism(0.0, -1, -1, true, 16).unwrap());
        assert!(!check_toruszz_automorphism(0.5, 1, 1, false, 16).unwrap());
        assert!(!check_toruszz_automorphism(0.5, 1, 1, true, 16).unwrap());
        assert!(!check_toruszz_automorphism(0.0, 1, -1, false, 16).unwrap());
        assert!(check_toruszz_automorphism(1.5, 1, 1, false, 16).is_err());
    }

    #[test]
    fn normalized_cocycle_is_not_normalized() {
        let x = TorusPoint::new(0.25, 1);
        let minus = TorusPoint::new(-0.25, -1);
        assert!((sigma_normalized(x, minus) - c(-1.0, 0.0)).norm() < 1e-12);
    }
}
