use std::fmt;
use std::ops::{Index, IndexMut};

use super::matrix::Matrix;
use super::rational;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

/// `u · m · v = diag(d)` with `d₁ | d₂ | …`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: Vec<i64>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<i64>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                for j in 0..rhs.cols {
                    out[(i, j)] += self[(i, k)] * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum()).collect()
    }

    pub fn to_rational(&self) -> Matrix {
        Matrix::from_rows((0..self.rows).map(|i| (0..self.cols).map(|j| rational::int(self[(i, j)])).collect()).collect())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += k * v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += k * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)];
        }
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero |entry| in the trailing block, first in row-major order
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[(i, j)] != 0 && best.map_or(true, |(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            let q = a[(i, t)].div_euclid(a[(t, t)]);
            if q != 0 {
                a.add_row(i, t, -q);
                u.add_row(i, t, -q);
            }
            clean &= a[(i, t)] == 0;
        }
        for j in t + 1..cols {
            let q = a[(t, j)].div_euclid(a[(t, t)]);
            if q != 0 {
                a.add_col(j, t, -q);
                v.add_col(j, t, -q);
            }
            clean &= a[(t, j)] == 0;
        }
        if !clean {
            continue;
        }
        // divisibility: fold an offending row into row t and redo this pivot
        let p = a[(t, t)];
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[(i, j)] % p != 0)) {
            a.add_row(t, i, 1);
            u.add_row(t, i, 1);
            continue;
        }
        if p < 0 {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let d = (0..rows.min(cols)).map(|i| a[(i, i)]).collect();
    SmithForm { d, u, v }
}

/// Whether `x` lies in the ℤ-span of `generators`.
pub fn lattice_contains(generators: &[Vec<i64>], x: &[i64]) -> bool {
    if x.iter().all(|&c| c == 0) {
        return true;
    }
    if generators.is_empty() {
        return false;
    }
    let m = IntMatrix::from_columns(generators, x.len());
    let SmithForm { d, u, .. } = smith_normal_form(&m);
    let y = u.apply(x);
    y.iter().enumerate().all(|(i, &yi)| match d.get(i) {
        Some(&di) if di != 0 => yi % di == 0,
        _ => yi == 0,
    })
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[i64]> = (0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]).collect();
        write!(f, "{rows:?}")
    }
}
