use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{prime_power, rational_valuation, DvrMatrix, LinearError, Valuation};
use crate::matrix::Matrix;

/// Smith normal form over `Z_(p)`.
///
/// `left * original * right == diag(p^exponents[0], ..., p^exponents[f-1])`,
/// with both transforms invertible over `Z_(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub exponents: Vec<i64>,
    pub left: DvrMatrix,
    pub right: DvrMatrix,
}

/// Smith normal form over the integers: `left * original * right` is the
/// rectangular diagonal matrix with entries `diagonal`, where each entry
/// divides the next and all are nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSnf {
    pub diagonal: Vec<BigInt>,
    pub left: Matrix<BigInt>,
    pub right: Matrix<BigInt>,
}

impl IntegerSnf {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Smith normal form of a square invertible matrix over `Z_(p)`.
///
/// The pivot at every step is the entry of least valuation in the
/// remaining block, first in row-major order. Each pivot is rescaled to an
/// exact power of `p`, so the diagonal of the result is literally
/// `p^exponents`.
pub fn snf_dvr(m: &DvrMatrix) -> Result<SnfResult, LinearError> {
    if m.rows() != m.cols() {
        return Err(LinearError::DimensionMismatch(format!(
            "Smith form over Z_(p) needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let p = m.prime();
    let n = m.rows();
    let mut work = m.as_matrix().clone();
    let mut left = Matrix::<BigRational>::identity(n);
    let mut right = Matrix::<BigRational>::identity(n);
    let mut exponents = Vec::with_capacity(n);

    for k in 0..n {
        let mut best: Option<(usize, usize, Valuation)> = None;
        for i in k..n {
            for j in k..n {
                let v = rational_valuation(&work[(i, j)], p);
                if best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let (pi, pj, v) = best.expect("nonempty block");
        let Valuation::Finite(r) = v else {
            return Err(LinearError::SingularMatrix);
        };
        work.swap_rows(k, pi);
        left.swap_rows(k, pi);
        work.swap_cols(k, pj);
        right.swap_cols(k, pj);

        // pivot = p^r * unit; divide the row by the unit
        let unit_inv = prime_power(p, r) / &work[(k, k)];
        work.scale_row(k, &unit_inv);
        left.scale_row(k, &unit_inv);

        let pivot = work[(k, k)].clone();
        for i in k + 1..n {
            if !work[(i, k)].is_zero() {
                let f = &work[(i, k)] / &pivot;
                work.sub_row_multiple(i, k, &f);
                left.sub_row_multiple(i, k, &f);
            }
        }
        for j in k + 1..n {
            if !work[(k, j)].is_zero() {
                let f = &work[(k, j)] / &pivot;
                work.sub_col_multiple(j, k, &f);
                right.sub_col_multiple(j, k, &f);
            }
        }
        exponents.push(r);
    }

    debug_assert!(exponents.windows(2).all(|w| w[0] <= w[1]));
    Ok(SnfResult {
        exponents,
        left: DvrMatrix::from_matrix_unchecked(left, p),
        right: DvrMatrix::from_matrix_unchecked(right, p),
    })
}

/// Invariant exponents of the lattice pair spanned by the columns of
/// `basis_a` and `basis_b`: the valuations of the Smith form of
/// `basis_a^{-1} * basis_b`, sorted nondecreasingly. They may be negative.
pub fn invariant_exponents(basis_a: &DvrMatrix, basis_b: &DvrMatrix) -> Result<Vec<i64>, LinearError> {
    if basis_a.prime() != basis_b.prime() {
        return Err(LinearError::PrimeMismatch(basis_a.prime(), basis_b.prime()));
    }
    if !(basis_a.rows() == basis_a.cols()
        && basis_b.rows() == basis_b.cols()
        && basis_a.rows() == basis_b.rows())
    {
        return Err(LinearError::DimensionMismatch(format!(
            "bases of shape {}x{} and {}x{}",
            basis_a.rows(),
            basis_a.cols(),
            basis_b.rows(),
            basis_b.cols()
        )));
    }
    let _ = basis_b.to_frac().inverse()?;
    let quotient = basis_a.to_frac().inverse()?.mul(&basis_b.to_frac())?;
    let shift = quotient
        .min_valuation()
        .finite()
        .ok_or(LinearError::SingularMatrix)?;
    let integral = quotient
        .scale_by_prime_power(-shift)
        .to_dvr()
        .expect("scaled to integral entries");
    let snf = snf_dvr(&integral)?;
    Ok(snf.exponents.into_iter().map(|e| e + shift).collect())
}

/// Smith normal form of an arbitrary integer matrix.
pub fn snf_integers(m: &Matrix<BigInt>) -> IntegerSnf {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut left = Matrix::<BigInt>::identity(rows);
    let mut right = Matrix::<BigInt>::identity(cols);

    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero() && best.map_or(true, |(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        left.swap_rows(t, bi);
        a.swap_cols(t, bj);
        right.swap_cols(t, bj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() {
                    let q = a[(i, t)].div_floor(&a[(t, t)]);
                    a.sub_row_multiple(i, t, &q);
                    left.sub_row_multiple(i, t, &q);
                    clean &= a[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() {
                    let q = a[(t, j)].div_floor(&a[(t, t)]);
                    a.sub_col_multiple(j, t, &q);
                    right.sub_col_multiple(j, t, &q);
                    clean &= a[(t, j)].is_zero();
                }
            }
            if !clean {
                // a remainder is now smaller than the pivot: promote it
                let mut pos = (t, t);
                for i in t + 1..rows {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[pos].abs() {
                        pos = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[pos].abs() {
                        pos = (t, j);
                    }
                }
                if pos.0 != t {
                    a.swap_rows(t, pos.0);
                    left.swap_rows(t, pos.0);
                } else if pos.1 != t {
                    a.swap_cols(t, pos.1);
                    right.swap_cols(t, pos.1);
                }
                continue;
            }
            // divisibility of the rest of the block by the pivot
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&a[(t, t)]));
            match offender {
                Some((i, _)) => {
                    let minus_one = BigInt::from(-1);
                    a.sub_row_multiple(t, i, &minus_one);
                    left.sub_row_multiple(t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            let minus_one = BigInt::from(-1);
            a.scale_row(t, &minus_one);
            left.scale_row(t, &minus_one);
        }
    }

    let diagonal = (0..rows.min(cols)).map(|i| a[(i, i)].clone()).collect();
    IntegerSnf { diagonal, left, right }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linear::int_matrix;

    fn diag_of(rows: &[Vec<i64>]) -> Vec<i64> {
        let m = int_matrix(rows).unwrap();
        let snf = snf_integers(&m);
        let d = left_times_right(&snf, &m);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert!(d[(i, j)].is_zero());
                } else {
                    assert_eq!(d[(i, i)], snf.diagonal[i]);
                }
            }
        }
        snf.diagonal.iter().map(|x| x.try_into().unwrap()).collect()
    }

    fn left_times_right(snf: &IntegerSnf, m: &Matrix<BigInt>) -> Matrix<BigInt> {
        snf.left.matmul(m).matmul(&snf.right)
    }

    #[test]
    fn integer_examples() {
        assert_eq!(diag_of(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(diag_of(&[vec![1, 0], vec![0, 1]]), vec![1, 1]);
        assert_eq!(diag_of(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    }

    #[test]
    fn integer_rectangular_and_zero() {
        assert_eq!(diag_of(&[vec![0, 0, 0], vec![0, 0, 0]]), vec![0, 0]);
        assert_eq!(diag_of(&[vec![4, 6, 8]]), vec![2]);
        assert_eq!(diag_of(&[vec![2, 0], vec![0, 4], vec![0, 0]]), vec![2, 4]);
        assert_eq!(diag_of(&[vec![-3]]), vec![3]);
    }

    #[test]
    fn dvr_examples() {
        let id = DvrMatrix::identity(3, 2);
        assert_eq!(snf_dvr(&id).unwrap().exponents, vec![0, 0, 0]);
        let d = DvrMatrix::from_ints(&[vec![1, 0], vec![0, 2]], 2).unwrap();
        assert_eq!(snf_dvr(&d).unwrap().exponents, vec![0, 1]);
        let m = DvrMatrix::from_ints(&[vec![2, 1], vec![0, 2]], 2).unwrap();
        let snf = snf_dvr(&m).unwrap();
        assert_eq!(snf.exponents, vec![0, 2]);
        let prod = snf.left.mul(&m).unwrap().mul(&snf.right).unwrap();
        assert_eq!(prod, DvrMatrix::diagonal_powers(&[0, 2], 2));
        assert!(snf.left.is_unimodular() && snf.right.is_unimodular());
    }

    #[test]
    fn dvr_singular() {
        let m = DvrMatrix::from_ints(&[vec![2, 4], vec![1, 2]], 3).unwrap();
        assert_eq!(snf_dvr(&m).unwrap_err(), LinearError::SingularMatrix);
        let r = DvrMatrix::from_ints(&[vec![1, 2]], 3).unwrap();
        assert!(matches!(snf_dvr(&r), Err(LinearError::DimensionMismatch(_))));
    }

    #[test]
    fn invariant_exponent_examples() {
        let p = 3;
        let id = DvrMatrix::identity(3, p);
        let b = DvrMatrix::diagonal_powers(&[0, 1, 4], p);
        assert_eq!(invariant_exponents(&id, &b).unwrap(), vec![0, 1, 4]);
        assert_eq!(invariant_exponents(&b, &b).unwrap(), vec![0, 0, 0]);
        let scaled = id.scale(&crate::exact_linear::LocalizedRational::from_int(3, p).unwrap());
        assert_eq!(invariant_exponents(&id, &scaled).unwrap(), vec![1, 1, 1]);
        // negative exponents appear when the second lattice is not inside the first
        assert_eq!(invariant_exponents(&b, &id).unwrap(), vec![-4, -1, 0]);
    }

    #[test]
    fn invariant_exponents_rejects_bad_input() {
        let a = DvrMatrix::identity(2, 2);
        let b = DvrMatrix::identity(3, 2);
        assert!(matches!(invariant_exponents(&a, &b), Err(LinearError::DimensionMismatch(_))));
        let s = DvrMatrix::from_ints(&[vec![1, 1], vec![1, 1]], 2).unwrap();
        assert_eq!(invariant_exponents(&a, &s).unwrap_err(), LinearError::SingularMatrix);
        assert_eq!(invariant_exponents(&s, &a).unwrap_err(), LinearError::SingularMatrix);
        let c = DvrMatrix::identity(2, 3);
        assert!(matches!(invariant_exponents(&a, &c), Err(LinearError::PrimeMismatch(2, 3))));
    }
}
