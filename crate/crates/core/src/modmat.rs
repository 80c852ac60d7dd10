//! Small dense matrices over `Z_d`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModMatrix {
    modulus: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ModMatrix {
    pub fn zeros(modulus: u32, rows: usize, cols: usize) -> Self {
        ModMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: u32, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(modulus: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidSpec("ragged matrix rows".into()));
        }
        let m = modulus as i64;
        Ok(ModMatrix {
            modulus,
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&v| v.rem_euclid(m) as u32).collect(),
        })
    }

    /// Row-major entries, already reduced.
    pub fn from_flat(modulus: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        ModMatrix {
            modulus,
            rows,
            cols,
            data: data.into_iter().map(|v| v % modulus).collect(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus as u64;
        let mut out = Self::zeros(self.modulus, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: u64 = (0..self.cols)
                    .map(|k| self.get(i, k) as u64 * other.get(k, j) as u64)
                    .sum();
                out.data[i * other.cols + j] = (s % m) as u32;
            }
        }
        out
    }

    pub fn add(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ModMatrix {
            modulus: self.modulus,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| (a + b) % self.modulus)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ModMatrix {
            modulus: self.modulus,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| (a + self.modulus - b) % self.modulus)
                .collect(),
        }
    }

    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols);
        let m = self.modulus as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = (0..self.cols).map(|k| self.get(i, k) as u64 * x[k] as u64).sum();
                (s % m) as u32
            })
            .collect()
    }

    /// `x^T A y` reduced mod `d`.
    pub fn bilinear(&self, x: &[u32], y: &[u32]) -> u32 {
        let m = self.modulus as u64;
        let mut s = 0u64;
        for i in 0..self.rows {
            if x[i] == 0 {
                continue;
            }
            let row: u64 = (0..self.cols).map(|j| self.get(i, j) as u64 * y[j] as u64).sum();
            s += x[i] as u64 * (row % m);
        }
        (s % m) as u32
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant mod `d`, by Euclidean row reduction (valid for composite `d`).
    pub fn det(&self) -> u32 {
        assert!(self.is_square());
        let n = self.rows;
        let m = self.modulus as i64;
        let mut a: Vec<Vec<i64>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect();
        let mut det: i64 = 1;
        for col in 0..n {
            // Euclid on column entries until only the pivot row is nonzero.
            loop {
                let nonzero: Vec<usize> = (col..n).filter(|&r| a[r][col] % m != 0).collect();
                if nonzero.is_empty() {
                    return 0;
                }
                if nonzero.len() == 1 {
                    let r = nonzero[0];
                    if r != col {
                        a.swap(r, col);
                        det = -det;
                    }
                    break;
                }
                let pivot = *nonzero.iter().min_by_key(|&&r| a[r][col].rem_euclid(m)).unwrap();
                if pivot != col {
                    a.swap(pivot, col);
                    det = -det;
                }
                let p = a[col][col].rem_euclid(m);
                for r in col + 1..n {
                    let q = a[r][col].rem_euclid(m) / p;
                    if q != 0 {
                        for c in col..n {
                            a[r][c] = (a[r][c] - q * a[col][c]).rem_euclid(m);
                        }
                    }
                }
            }
            det = (det * a[col][col]).rem_euclid(m);
        }
        det.rem_euclid(m) as u32
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && gcd(self.det(), self.modulus) == 1
    }

    pub fn pow(&self, e: u32) -> ModMatrix {
        let mut out = Self::identity(self.modulus, self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Smallest `k >= 1` with `A^k = I`, if it exists below `limit`.
    pub fn multiplicative_order(&self, limit: u32) -> Option<u32> {
        let id = Self::identity(self.modulus, self.rows);
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc == id {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.to_rows(), self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_over_prime_and_composite_moduli() {
        let a = ModMatrix::from_rows(3, &[vec![0, 1], vec![2, 0]]).unwrap();
        assert_eq!(a.det(), 1); // -2 mod 3
        let b = ModMatrix::from_rows(4, &[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(b.det(), 2);
        assert!(!b.is_invertible());
        let c = ModMatrix::from_rows(6, &[vec![5, 2], vec![3, 5]]).unwrap();
        // 25 - 6 = 19 = 1 mod 6
        assert_eq!(c.det(), 1);
        assert!(c.is_invertible());
    }

    #[test]
    fn det_matches_integer_determinant_small() {
        // exhaustive over 2x2 matrices mod 4
        for bits in 0..256u32 {
            let e: Vec<i64> = (0..4).map(|k| ((bits >> (2 * k)) & 3) as i64).collect();
            let m = ModMatrix::from_rows(4, &[vec![e[0], e[1]], vec![e[2], e[3]]]).unwrap();
            assert_eq!(m.det() as i64, (e[0] * e[3] - e[1] * e[2]).rem_euclid(4));
        }
    }

    #[test]
    fn bilinear_and_apply() {
        let l = ModMatrix::from_rows(2, &[vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(l.bilinear(&[0, 1], &[1, 0]), 1);
        assert_eq!(l.bilinear(&[1, 0], &[0, 1]), 0);
        let s = ModMatrix::from_rows(2, &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(s.apply(&[1, 0]), vec![0, 1]);
        assert_eq!(s.multiplicative_order(10), Some(3));
    }
}
