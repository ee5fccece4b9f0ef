//! Dense matrices over an exact field, with the handful of elimination
//! routines the homological code needs: rank, kernel and column-space bases.

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { F::one() } else { F::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c).clone() + a.clone() * b.clone();
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix/vector dimension mismatch");
        (0..self.rows).map(|r| (0..self.cols).fold(F::zero(), |acc, c| acc + self.get(r, c).clone() * v[c].clone())).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        F::rank(self)
    }

    /// A basis of the right kernel `{ v | self * v = 0 }`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (echelon, pivots) = rref(self);
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        (0..self.cols)
            .filter(|&c| pivot_of_col[c].is_none())
            .map(|free| {
                let mut v = vec![F::zero(); self.cols];
                v[free] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -echelon.get(row, free).clone();
                }
                v
            })
            .collect()
    }

    /// Indices of a maximal linearly independent subset of the columns
    /// (the pivot columns, leftmost first).
    pub fn pivot_columns(&self) -> Vec<usize> {
        rref(self).1
    }
}

/// Reduced row echelon form together with the pivot column of each nonzero row.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..a.cols {
                a.data.swap(p * a.cols + c, row * a.cols + c);
            }
        }
        let inv = a.get(row, col).inv().expect("nonzero pivot is invertible");
        for c in col..a.cols {
            let v = a.get(row, c).clone() * inv.clone();
            a.set(row, c, v);
        }
        for r in 0..a.rows {
            if r == row || a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col).clone();
            for c in col..a.cols {
                let v = a.get(r, c).clone() - factor.clone() * a.get(row, c).clone();
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Rank by plain Gaussian elimination.
pub fn gauss_rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..a.cols {
        if rank == a.rows {
            break;
        }
        let Some(p) = (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if p != rank {
            for c in 0..a.cols {
                a.data.swap(p * a.cols + c, rank * a.cols + c);
            }
        }
        let inv = a.get(rank, col).inv().expect("nonzero pivot is invertible");
        for r in rank + 1..a.rows {
            if a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col).clone() * inv.clone();
            for c in col..a.cols {
                let v = a.get(r, c).clone() - factor.clone() * a.get(rank, c).clone();
                a.set(r, c, v);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, F2};

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn kernel_is_annihilated_and_complements_rank() {
        let rows = [[1i64, 2, 0, -1], [0, 0, 1, 3], [1, 2, 1, 2]];
        let m = Matrix::from_fn(3, 4, |r, c| q(rows[r][c]));
        let ker = m.kernel();
        assert_eq!(ker.len() + m.rank(), 4);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(Field::is_zero));
        }
    }

    #[test]
    fn empty_shapes() {
        let m: Matrix<F2> = Matrix::zeros(0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel().len(), 3);
        let m: Matrix<F2> = Matrix::zeros(2, 0);
        assert_eq!(m.rank(), 0);
        assert!(m.kernel().is_empty());
    }

    #[test]
    fn pivot_columns_span() {
        let rows = [[1i64, 1, 2], [0, 0, 0], [1, 1, 2]];
        let m = Matrix::from_fn(3, 3, |r, c| F2::from_i64(rows[r][c]));
        assert_eq!(m.pivot_columns(), vec![0]);
    }
}
