//! Exact linear algebra over the integers and over the integers localized
//! at a prime.
//!
//! Everything here is exact: elements of the discrete valuation ring are
//! stored as reduced rationals with denominators prime to `p`, and every
//! quantity of interest is a valuation. The Smith normal form over the
//! localized ring produces the invariant exponents of a pair of lattices.

mod localized;
mod snf;

pub use localized::{prime_power, rational_valuation, LocalizedRational, Valuation};
pub use snf::{invariant_exponents, snf_dvr, snf_integers, IntegerSnf, SnfResult};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("denominator of {value} is divisible by {prime}")]
    NonLocalDenominator { value: String, prime: u32 },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrices use different primes ({0} and {1})")]
    PrimeMismatch(u32, u32),
}

/// Square or rectangular matrix over `Z_(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvrMatrix {
    prime: u32,
    inner: Matrix<BigRational>,
}

impl DvrMatrix {
    pub fn from_entries(rows: Vec<Vec<LocalizedRational>>) -> Result<Self, LinearError> {
        let prime = rows
            .first()
            .and_then(|r| r.first())
            .map(LocalizedRational::prime)
            .ok_or_else(|| LinearError::DimensionMismatch("empty matrix".into()))?;
        if let Some(bad) = rows.iter().flatten().find(|x| x.prime() != prime) {
            return Err(LinearError::PrimeMismatch(prime, bad.prime()));
        }
        let values = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.as_rational().clone()).collect())
            .collect();
        let inner = Matrix::from_rows(values).ok_or_else(|| LinearError::DimensionMismatch("ragged rows".into()))?;
        Ok(DvrMatrix { prime, inner })
    }

    pub fn from_ints(rows: &[Vec<i64>], prime: u32) -> Result<Self, LinearError> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|&x| LocalizedRational::from_int(x, prime)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Self::from_entries(entries)
    }

    /// Parses the JSON interchange form: rows of `"num/den"` strings.
    pub fn from_string_rows(rows: &[Vec<String>], prime: u32) -> Result<Self, LinearError> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|s| LocalizedRational::parse(s, prime)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Self::from_entries(entries)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.entry(i, j).to_string()).collect())
            .collect()
    }

    pub fn identity(n: usize, prime: u32) -> Self {
        DvrMatrix { prime, inner: Matrix::identity(n) }
    }

    /// `diag(p^e_1, ..., p^e_n)` for nonnegative exponents.
    pub fn diagonal_powers(exponents: &[u32], prime: u32) -> Self {
        let diag: Vec<_> = exponents.iter().map(|&e| prime_power(prime, e as i64)).collect();
        DvrMatrix { prime, inner: Matrix::diagonal(&diag) }
    }

    pub(crate) fn from_matrix_unchecked(inner: Matrix<BigRational>, prime: u32) -> Self {
        DvrMatrix { prime, inner }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.inner.rows()
    }

    pub fn cols(&self) -> usize {
        self.inner.cols()
    }

    pub fn entry(&self, i: usize, j: usize) -> LocalizedRational {
        LocalizedRational::from_rational_unchecked(self.inner[(i, j)].clone(), self.prime)
    }

    pub fn as_matrix(&self) -> &Matrix<BigRational> {
        &self.inner
    }

    pub fn to_frac(&self) -> FracMatrix {
        FracMatrix { prime: self.prime, inner: self.inner.clone() }
    }

    pub fn mul(&self, rhs: &DvrMatrix) -> Result<DvrMatrix, LinearError> {
        if self.prime != rhs.prime {
            return Err(LinearError::PrimeMismatch(self.prime, rhs.prime));
        }
        if self.cols() != rhs.rows() {
            return Err(LinearError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(DvrMatrix { prime: self.prime, inner: self.inner.matmul(&rhs.inner) })
    }

    pub fn scale(&self, factor: &LocalizedRational) -> DvrMatrix {
        DvrMatrix {
            prime: self.prime,
            inner: self.inner.map(|x| x * factor.as_rational()),
        }
    }

    pub fn determinant(&self) -> Result<LocalizedRational, LinearError> {
        let det = self.to_frac().determinant()?;
        Ok(LocalizedRational::from_rational_unchecked(det, self.prime))
    }

    /// True iff the determinant is a unit of `Z_(p)`.
    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.is_unit()).unwrap_or(false)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows()).all(|i| (0..self.cols()).all(|j| i == j || self.inner[(i, j)].is_zero()))
    }
}

/// Matrix over the rationals, with valuations taken at a fixed prime.
///
/// Used wherever the fraction field is needed (inverses, conjugation of
/// orders by lattice bases).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracMatrix {
    prime: u32,
    inner: Matrix<BigRational>,
}

impl FracMatrix {
    pub fn new(inner: Matrix<BigRational>, prime: u32) -> Result<Self, LinearError> {
        if !localized::is_small_prime(prime) {
            return Err(LinearError::NotPrime(prime));
        }
        Ok(FracMatrix { prime, inner })
    }

    pub fn identity(n: usize, prime: u32) -> Self {
        FracMatrix { prime, inner: Matrix::identity(n) }
    }

    /// `diag(p^e_1, ..., p^e_n)`, exponents of either sign.
    pub fn diagonal_powers(exponents: &[i64], prime: u32) -> Self {
        let diag: Vec<_> = exponents.iter().map(|&e| prime_power(prime, e)).collect();
        FracMatrix { prime, inner: Matrix::diagonal(&diag) }
    }

    /// `p^e * E_{i,j}` in an `n x n` matrix ring.
    pub fn scaled_unit(n: usize, i: usize, j: usize, e: i64, prime: u32) -> Self {
        let mut inner = Matrix::zeros(n, n);
        inner[(i, j)] = prime_power(prime, e);
        FracMatrix { prime, inner }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.inner.rows()
    }

    pub fn cols(&self) -> usize {
        self.inner.cols()
    }

    pub fn as_matrix(&self) -> &Matrix<BigRational> {
        &self.inner
    }

    pub fn entry_valuation(&self, i: usize, j: usize) -> Valuation {
        rational_valuation(&self.inner[(i, j)], self.prime)
    }

    pub fn min_valuation(&self) -> Valuation {
        self.inner
            .iter()
            .map(|x| rational_valuation(x, self.prime))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// True iff every entry lies in `Z_(p)`.
    pub fn is_integral(&self) -> bool {
        self.min_valuation() >= Valuation::Finite(0)
    }

    pub fn mul(&self, rhs: &FracMatrix) -> Result<FracMatrix, LinearError> {
        if self.prime != rhs.prime {
            return Err(LinearError::PrimeMismatch(self.prime, rhs.prime));
        }
        if self.cols() != rhs.rows() {
            return Err(LinearError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(FracMatrix { prime: self.prime, inner: self.inner.matmul(&rhs.inner) })
    }

    pub fn scale_by_prime_power(&self, e: i64) -> FracMatrix {
        let f = prime_power(self.prime, e);
        FracMatrix { prime: self.prime, inner: self.inner.map(|x| x * &f) }
    }

    /// Gauss-Jordan inverse over the rationals.
    pub fn inverse(&self) -> Result<FracMatrix, LinearError> {
        if !self.inner.is_square() {
            return Err(LinearError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows();
        let mut a = self.inner.clone();
        let mut inv = Matrix::<BigRational>::identity(n);
        for k in 0..n {
            let pivot = (k..n).find(|&i| !a[(i, k)].is_zero()).ok_or(LinearError::SingularMatrix)?;
            a.swap_rows(k, pivot);
            inv.swap_rows(k, pivot);
            let scale = a[(k, k)].recip();
            a.scale_row(k, &scale);
            inv.scale_row(k, &scale);
            for i in 0..n {
                if i != k && !a[(i, k)].is_zero() {
                    let f = a[(i, k)].clone();
                    a.sub_row_multiple(i, k, &f);
                    inv.sub_row_multiple(i, k, &f);
                }
            }
        }
        Ok(FracMatrix { prime: self.prime, inner: inv })
    }

    pub fn determinant(&self) -> Result<BigRational, LinearError> {
        if !self.inner.is_square() {
            return Err(LinearError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows();
        let mut a = self.inner.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(pivot) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(BigRational::zero());
            };
            if pivot != k {
                a.swap_rows(k, pivot);
                det = -det;
            }
            det *= &a[(k, k)];
            for i in k + 1..n {
                if !a[(i, k)].is_zero() {
                    let f = &a[(i, k)] / &a[(k, k)];
                    a.sub_row_multiple(i, k, &f);
                }
            }
        }
        Ok(det)
    }

    /// Converts to a [`DvrMatrix`] if every entry is integral.
    pub fn to_dvr(&self) -> Option<DvrMatrix> {
        self.is_integral().then(|| DvrMatrix::from_matrix_unchecked(self.inner.clone(), self.prime))
    }
}

/// Integer matrix from machine integers.
pub fn int_matrix(rows: &[Vec<i64>]) -> Option<Matrix<BigInt>> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = DvrMatrix::from_ints(&[vec![2, 1], vec![1, 1]], 3).unwrap().to_frac();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FracMatrix::identity(2, 3));
    }

    #[test]
    fn singular_inverse_fails() {
        let m = DvrMatrix::from_ints(&[vec![2, 4], vec![1, 2]], 3).unwrap().to_frac();
        assert_eq!(m.inverse().unwrap_err(), LinearError::SingularMatrix);
        assert!(m.determinant().unwrap().is_zero());
    }

    #[test]
    fn string_rows_round_trip() {
        let rows = vec![vec!["1/3".to_string(), "4".to_string()], vec!["0".to_string(), "-7/5".to_string()]];
        let m = DvrMatrix::from_string_rows(&rows, 2).unwrap();
        let back = m.to_string_rows();
        assert_eq!(back, vec![vec!["1/3", "4/1"], vec!["0/1", "-7/5"]]);
        assert_eq!(DvrMatrix::from_string_rows(&back, 2).unwrap(), m);
        assert!(DvrMatrix::from_string_rows(&[vec!["1/2".to_string()]], 2).is_err());
    }

    #[test]
    fn mixed_primes_rejected() {
        let a = LocalizedRational::from_int(1, 2).unwrap();
        let b = LocalizedRational::from_int(1, 3).unwrap();
        assert!(matches!(
            DvrMatrix::from_entries(vec![vec![a, b]]),
            Err(LinearError::PrimeMismatch(2, 3))
        ));
    }
}
