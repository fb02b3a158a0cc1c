use std::fmt;

use super::scalar::Scalar;
use super::AlgebraError;

/// Dense square matrix over the Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixW {
    dim: usize,
    entries: Vec<Scalar>,
}

impl MatrixW {
    pub fn zero(dim: usize) -> Self {
        MatrixW {
            dim,
            entries: vec![Scalar::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Scalar::one())
    }

    /// `s` times the identity.
    pub fn scalar(dim: usize, s: Scalar) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = s.clone();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(AlgebraError::DimensionMismatch("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "row of length {} in a {dim}x{dim} matrix",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(MatrixW { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.dim {
            t += self.get(i, i);
        }
        t
    }

    fn check(&self, rhs: &MatrixW) {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
    }

    pub fn add(&self, rhs: &MatrixW) -> MatrixW {
        self.check(rhs);
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        MatrixW { dim: self.dim, entries }
    }

    pub fn sub(&self, rhs: &MatrixW) -> MatrixW {
        self.add(&rhs.neg())
    }

    pub fn add_assign(&mut self, rhs: &MatrixW) {
        self.check(rhs);
        for (a, b) in self.entries.iter_mut().zip(&rhs.entries) {
            *a += b;
        }
    }

    pub fn neg(&self) -> MatrixW {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> MatrixW {
        MatrixW {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, rhs: &MatrixW) -> MatrixW {
        self.check(rhs);
        let d = self.dim;
        if d == 1 {
            return MatrixW {
                dim: 1,
                entries: vec![&self.entries[0] * &rhs.entries[0]],
            };
        }
        let mut out = MatrixW::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * d + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> MatrixW {
        let d = self.dim;
        let mut out = MatrixW::zero(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<MatrixW, AlgebraError> {
        let d = self.dim;
        let mut a = self.clone();
        let mut inv = MatrixW::identity(d);
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(AlgebraError::Singular)?;
            if pivot != col {
                for j in 0..d {
                    a.entries.swap(pivot * d + j, col * d + j);
                    inv.entries.swap(pivot * d + j, col * d + j);
                }
            }
            let p = a.get(col, col).inv().ok_or(AlgebraError::Singular)?;
            for j in 0..d {
                a.entries[col * d + j] = &a.entries[col * d + j] * &p;
                inv.entries[col * d + j] = &inv.entries[col * d + j] * &p;
            }
            for r in 0..d {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..d {
                    let sa = &f * a.get(col, j);
                    let si = &f * inv.get(col, j);
                    a.entries[r * d + j] -= &sa;
                    inv.entries[r * d + j] -= &si;
                }
            }
        }
        Ok(inv)
    }

    /// Block-diagonal sum `self ⊕ rhs`.
    pub fn direct_sum(&self, rhs: &MatrixW) -> MatrixW {
        let d = self.dim + rhs.dim;
        let mut out = MatrixW::zero(d);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..rhs.dim {
            for j in 0..rhs.dim {
                out.set(self.dim + i, self.dim + j, rhs.get(i, j).clone());
            }
        }
        out
    }
}

impl fmt::Display for MatrixW {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|s| s.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> MatrixW {
        MatrixW::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[0, 2, 1], &[1, 1, 0], &[3, 0, 5]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), MatrixW::identity(3));
        assert_eq!(inv.mul(&a), MatrixW::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn trace_is_cyclic() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, -1], &[5, 2]]);
        assert_eq!(a.mul(&b).trace(), b.mul(&a).trace());
        assert_eq!(a.direct_sum(&b).trace(), &a.trace() + &b.trace());
    }
}
