//! Finite cochain complexes given degreewise by labelled bases and matrices.

use serde::Serialize;
use thiserror::Error;

use crate::qlinalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("D² ≠ 0 on degree {0}")]
    DSquaredNonzero(usize),
    #[error("differential {degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape { degree: usize, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("degree {0} is outside the stored range")]
    DegreeOutOfRange(usize),
}

/// Degrees `0..=top` with bases; `differentials[n]` maps degree `n` to `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    bases: Vec<Vec<String>>,
    differentials: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexSummary {
    pub dims: Vec<usize>,
    pub betti: Vec<usize>,
}

impl TwistedComplex {
    /// `differentials.len()` must be `bases.len() - 1`.
    pub fn new(bases: Vec<Vec<String>>, differentials: Vec<Matrix>) -> Result<Self, ComplexError> {
        assert_eq!(differentials.len() + 1, bases.len(), "need one differential per consecutive pair of degrees");
        for (n, d) in differentials.iter().enumerate() {
            let (er, ec) = (bases[n + 1].len(), bases[n].len());
            if d.rows() != er || d.cols() != ec {
                return Err(ComplexError::Shape { degree: n, rows: d.rows(), cols: d.cols(), expected_rows: er, expected_cols: ec });
            }
        }
        let c = TwistedComplex { bases, differentials };
        c.check_d_squared()?;
        Ok(c)
    }

    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, n: usize) -> &[String] {
        &self.bases[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.bases.get(n).map_or(0, Vec::len)
    }

    pub fn differential(&self, n: usize) -> &Matrix {
        &self.differentials[n]
    }

    pub fn check_d_squared(&self) -> Result<(), ComplexError> {
        for n in 0..self.differentials.len().saturating_sub(1) {
            if !(&self.differentials[n + 1] * &self.differentials[n]).is_zero() {
                return Err(ComplexError::DSquaredNonzero(n));
            }
        }
        Ok(())
    }

    /// `dim ker Dₙ − rank Dₙ₋₁`; requires `Dₙ` to be stored (so `n < top`).
    pub fn betti_at(&self, n: usize) -> Result<usize, ComplexError> {
        if n >= self.differentials.len() {
            return Err(ComplexError::DegreeOutOfRange(n));
        }
        let rank_out = self.differentials[n].rank();
        let rank_in = if n == 0 { 0 } else { self.differentials[n - 1].rank() };
        Ok(self.dim(n) - rank_out - rank_in)
    }

    pub fn betti(&self, degrees: std::ops::Range<usize>) -> Result<Vec<usize>, ComplexError> {
        degrees.map(|n| self.betti_at(n)).collect()
    }

    pub fn summary(&self, degrees: std::ops::Range<usize>) -> Result<ComplexSummary, ComplexError> {
        Ok(ComplexSummary { dims: degrees.clone().map(|n| self.dim(n)).collect(), betti: self.betti(degrees)? })
    }

    /// Alternating sum of dimensions over `0..=top`.
    pub fn euler_characteristic(&self) -> i64 {
        self.bases.iter().enumerate().map(|(n, b)| if n % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) }).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differential_betti() {
        let bases = vec![vec!["1".into()], vec!["s1".into(), "s2".into()], vec!["s1s2".into()], vec![]];
        let ds = vec![Matrix::zeros(2, 1), Matrix::zeros(1, 2), Matrix::zeros(0, 1)];
        let c = TwistedComplex::new(bases, ds).unwrap();
        assert_eq!(c.betti(0..3).unwrap(), vec![1, 2, 1]);
        assert_eq!(c.euler_characteristic(), 0);
        assert!(c.betti_at(3).is_err());
    }

    #[test]
    fn rejects_nonzero_square() {
        let bases = vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]];
        let ds = vec![Matrix::identity(1), Matrix::identity(1)];
        assert_eq!(TwistedComplex::new(bases, ds), Err(ComplexError::DSquaredNonzero(0)));
    }
}
