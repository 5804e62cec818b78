//! Dense square matrices over a [`FieldModel`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, FieldModel, Result, Scalar};

/// An `n×n` matrix stored row-major. Arithmetic takes the field explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(n: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(Matrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix { n, entries })
    }

    pub fn from_ints(k: &FieldModel, n: usize, values: &[i64]) -> Result<Matrix> {
        Matrix::new(n, values.iter().map(|&v| k.from_int(v)).collect())
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Result<Matrix> {
        let n = cols.len();
        let mut m = Matrix {
            n,
            entries: Vec::with_capacity(n * n),
        };
        for i in 0..n {
            for col in cols {
                if col.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: col.len(),
                    });
                }
                m.entries.push(col[i].clone());
            }
        }
        Ok(m)
    }

    pub fn identity(k: &FieldModel, n: usize) -> Matrix {
        Matrix::diagonal(k, &vec![k.one(); n])
    }

    pub fn zero(k: &FieldModel, n: usize) -> Matrix {
        Matrix {
            n,
            entries: vec![k.zero(); n * n],
        }
    }

    pub fn diagonal(k: &FieldModel, diag: &[Scalar]) -> Matrix {
        let n = diag.len();
        let mut m = Matrix::zero(k, n);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}`.
    pub fn permutation(k: &FieldModel, perm: &[usize]) -> Matrix {
        let n = perm.len();
        let mut m = Matrix::zero(k, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, k.one());
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    fn check_dim(&self, other: &Matrix) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            })
        }
    }

    pub fn mul(&self, k: &FieldModel, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = k.zero();
                for l in 0..n {
                    let a = self.get(i, l);
                    if k.is_zero(a) {
                        continue;
                    }
                    acc = k.add(&acc, &k.mul(a, other.get(l, j)));
                }
                out.push(acc);
            }
        }
        Matrix { n, entries: out }
    }

    pub fn try_mul(&self, k: &FieldModel, other: &Matrix) -> Result<Matrix> {
        self.check_dim(other)?;
        Ok(self.mul(k, other))
    }

    pub fn apply(&self, k: &FieldModel, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, k: &FieldModel, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| k.add(a, b))
            .collect();
        Matrix { n: self.n, entries }
    }

    pub fn scale(&self, k: &FieldModel, s: &Scalar) -> Matrix {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|a| k.mul(a, s)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { n, entries }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, k: &FieldModel) -> Scalar {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = k.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !k.is_zero(&a[r * n + col])) else {
                return k.zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = k.neg(&det);
            }
            let p = a[col * n + col].clone();
            det = k.mul(&det, &p);
            let p_inv = k.inv(&p).expect("pivot is nonzero");
            for r in col + 1..n {
                let f = k.mul(&a[r * n + col], &p_inv);
                if k.is_zero(&f) {
                    continue;
                }
                for j in col..n {
                    let v = k.sub(&a[r * n + j], &k.mul(&f, &a[col * n + j]));
                    a[r * n + j] = v;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self, k: &FieldModel) -> Result<Matrix> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Matrix::identity(k, n).entries;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !k.is_zero(&a[r * n + col]))
                .ok_or(Error::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p_inv = k.inv(&a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = k.mul(&a[col * n + j], &p_inv);
                inv[col * n + j] = k.mul(&inv[col * n + j], &p_inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col].clone();
                if k.is_zero(&f) {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = k.sub(&a[r * n + j], &k.mul(&f, &a[col * n + j]));
                    inv[r * n + j] = k.sub(&inv[r * n + j], &k.mul(&f, &inv[col * n + j]));
                }
            }
        }
        Ok(Matrix { n, entries: inv })
    }

    pub fn is_diagonal(&self, k: &FieldModel) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || k.is_zero(self.get(i, j))))
    }

    /// `Some(c)` when the matrix is `c·I`.
    pub fn scalar_value(&self, k: &FieldModel) -> Option<Scalar> {
        let c = self.get(0, 0).clone();
        (self.is_diagonal(k) && (0..self.n).all(|i| *self.get(i, i) == c)).then_some(c)
    }

    /// For a monomial matrix, the permutation `σ` and coefficients `c` with
    /// `M e_j = c_j e_{σ(j)}`.
    pub fn monomial(&self, k: &FieldModel) -> Option<(Vec<usize>, Vec<Scalar>)> {
        let n = self.n;
        let mut perm = Vec::with_capacity(n);
        let mut coeffs = Vec::with_capacity(n);
        let mut used = vec![false; n];
        for j in 0..n {
            let mut rows = (0..n).filter(|&i| !k.is_zero(self.get(i, j)));
            let i = rows.next()?;
            if rows.next().is_some() || used[i] {
                return None;
            }
            used[i] = true;
            perm.push(i);
            coeffs.push(self.get(i, j).clone());
        }
        Some((perm, coeffs))
    }

    /// Entry indices for finite fields, usable as a compact hash key.
    pub fn finite_key(&self, k: &FieldModel) -> Option<Vec<u32>> {
        self.entries
            .iter()
            .map(|x| k.element_index(x).map(|v| v as u32))
            .collect()
    }

    pub fn format_rows(&self, k: &FieldModel) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|x| k.format(x)).collect())
            .collect()
    }

    pub fn format(&self, k: &FieldModel) -> String {
        let rows: Vec<String> = self
            .format_rows(k)
            .into_iter()
            .map(|r| format!("[{}]", r.join(",")))
            .collect();
        format!("[{}]", rows.join(","))
    }
}

/// Projective normal form of a vector: first nonzero coordinate scaled to 1.
pub fn normalize_line(k: &FieldModel, v: &[Scalar]) -> Option<Vec<Scalar>> {
    let lead = v.iter().find(|x| !k.is_zero(x))?;
    let inv = k.inv(lead).ok()?;
    Some(v.iter().map(|x| k.mul(x, &inv)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let k = FieldModel::Rational;
        let m = Matrix::from_ints(&k, 3, &[2, 1, 0, 0, 1, 3, 1, 0, 1]).unwrap();
        let inv = m.inverse(&k).unwrap();
        assert_eq!(m.mul(&k, &inv), Matrix::identity(&k, 3));
        assert_eq!(m.det(&k), Scalar::int(5));
        let s = Matrix::from_ints(&k, 2, &[1, 2, 2, 4]).unwrap();
        assert_eq!(s.inverse(&k), Err(Error::Singular));
        assert_eq!(s.det(&k), Scalar::int(0));
    }

    #[test]
    fn monomial_detection() {
        let k = FieldModel::finite(7).unwrap();
        let m = Matrix::from_ints(&k, 3, &[0, 0, 2, 3, 0, 0, 0, 5, 0]).unwrap();
        let (perm, coeffs) = m.monomial(&k).unwrap();
        assert_eq!(perm, vec![1, 2, 0]);
        assert_eq!(coeffs, vec![k.from_int(3), k.from_int(5), k.from_int(2)]);
        let p = Matrix::permutation(&k, &perm);
        assert!(p.monomial(&k).is_some());
        assert!(Matrix::from_ints(&k, 2, &[1, 1, 0, 1])
            .unwrap()
            .monomial(&k)
            .is_none());
    }
}
