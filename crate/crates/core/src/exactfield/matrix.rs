//! Dense row-major matrices over an exact field.

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Field;
use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    entries: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, entries: Vec<F>) -> Result<Self, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix of size {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>]) -> Result<Self, Error> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::InvalidInput("columns of unequal length".into()));
        }
        let entries = (0..r)
            .flat_map(|i| cols.iter().map(move |col| col[i].clone()))
            .collect();
        Matrix::new(r, c, entries)
    }

    pub fn identity_like(sample: &F, n: usize) -> Self {
        let zero = sample.zero_like();
        let one = sample.one_like();
        let entries = (0..n * n)
            .map(|i| {
                if i / n == i % n {
                    one.clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        Matrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: F) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| self.get(i, j).clone()))
            .collect();
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &Matrix<F>) -> Result<Matrix<F>, Error> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let zero = self.entries[0].zero_like();
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = zero.clone();
                for t in 0..self.cols {
                    acc = acc.add(&self.get(i, t).mul(other.get(t, j)));
                }
                entries.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, Error> {
        if v.len() != self.cols {
            return Err(Error::InvalidInput(
                "vector length does not match matrix".into(),
            ));
        }
        let zero = self.entries[0].zero_like();
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(zero.clone(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<F> {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<F, Error> {
        if !self.is_square() {
            return Err(Error::InvalidInput(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut sign_flip = false;
        let mut prev = self.entries[0].one_like();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(self.entries[0].zero_like()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = num.div(&prev).expect("Bareiss pivot is nonzero");
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if sign_flip { det.neg() } else { det })
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].inv().unwrap();
            for x in a[r].iter_mut() {
                *x = x.mul(&inv);
            }
            let pivot_row = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x = x.sub(&f.mul(p));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (Matrix::from_rows(a).unwrap(), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Matrix<F>, Error> {
        if !self.is_square() {
            return Err(Error::InvalidInput("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let id = Matrix::identity_like(&self.entries[0], n);
        let aug: Vec<Vec<F>> = (0..n)
            .map(|i| self.row(i).iter().chain(id.row(i)).cloned().collect())
            .collect();
        let (red, pivots) = Matrix::from_rows(aug)?.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let entries = (0..n).flat_map(|i| red.row(i)[n..].to_vec()).collect();
        Matrix::new(n, n, entries)
    }
}

/// Outcome of an exact linear solve.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<F> {
    Unique(Vec<F>),
    /// One particular solution, free variables set to zero.
    Underdetermined {
        solution: Vec<F>,
        rank: usize,
    },
    Inconsistent,
}

impl<F> LinearSolution<F> {
    pub fn solution(&self) -> Option<&[F]> {
        match self {
            LinearSolution::Unique(x) => Some(x),
            LinearSolution::Underdetermined { solution, .. } => Some(solution),
            LinearSolution::Inconsistent => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        !matches!(self, LinearSolution::Inconsistent)
    }
}

/// Solves `a x = b` exactly by Gauss-Jordan elimination.
pub fn solve_linear<F: Field>(a: &Matrix<F>, b: &[F]) -> Result<LinearSolution<F>, Error> {
    if a.rows() != b.len() {
        return Err(Error::InvalidInput(format!(
            "right-hand side has length {} but the matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    let aug: Vec<Vec<F>> = (0..a.rows())
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let (red, pivots) = Matrix::from_rows(aug)?.rref();
    if pivots.last() == Some(&n) {
        return Ok(LinearSolution::Inconsistent);
    }
    let zero = a.get(0, 0).zero_like();
    let mut x = vec![zero; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red.get(r, n).clone();
    }
    Ok(if pivots.len() == n {
        LinearSolution::Unique(x)
    } else {
        LinearSolution::Underdetermined {
            solution: x,
            rank: pivots.len(),
        }
    })
}

/// True iff every `s x s` minor of `m` is nonzero.
pub fn all_minors_nonzero<F: Field>(m: &Matrix<F>, s: usize) -> Result<bool, Error> {
    if s == 0 || s > m.rows().min(m.cols()) {
        return Err(Error::InvalidInput(format!(
            "minor size {s} out of range for a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    for rows in (0..m.rows()).combinations(s) {
        for cols in (0..m.cols()).combinations(s) {
            if m.submatrix(&rows, &cols).det()?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Scales `v` so that its first nonzero entry is one.
pub fn projective_normalize<F: Field>(v: &[F]) -> Result<Vec<F>, Error> {
    let lead = v
        .iter()
        .find(|x| !x.is_zero())
        .ok_or_else(|| Error::InvalidInput("the zero vector is not a projective point".into()))?;
    let inv = lead.inv().unwrap();
    Ok(v.iter().map(|x| x.mul(&inv)).collect())
}

impl<F: Field + Serialize> Serialize for Matrix<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de, F: Field + Deserialize<'de>> Deserialize<'de> for Matrix<F> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<F>>::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
