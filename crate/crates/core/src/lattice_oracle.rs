//! Brute-force check of the block description in the split case.
//!
//! Orders are handled as explicit matrix rings `U M_n(Z_(p)) U^{-1}` and
//! containment is decided entrywise, with no Smith form shortcuts. The
//! vertex with lift `a` is the order of the lattice basis `diag(p^{a_i})`,
//! whose entry `(i, j)` ranges over `p^{a_i - a_j} Z_(p)`.

use serde::Serialize;
use thiserror::Error;

use crate::blocks::{geo_block, GeoType};
use crate::exact_linear::{invariant_exponents, DvrMatrix, FracMatrix, LinearError};
use crate::gamma::GammaClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

/// The order `U M_n(Z_(p)) U^{-1}` of a lattice basis `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOrder {
    basis: FracMatrix,
    basis_inv: FracMatrix,
}

impl MatrixOrder {
    pub fn from_basis(basis: FracMatrix) -> Result<Self, OracleError> {
        let basis_inv = basis.inverse()?;
        Ok(MatrixOrder { basis, basis_inv })
    }

    pub fn from_dvr_basis(basis: &DvrMatrix) -> Result<Self, OracleError> {
        Self::from_basis(basis.to_frac())
    }

    /// Apartment vertex with lift `a`; only differences of `a` matter.
    pub fn diagonal(a: &[i64], prime: u32) -> Self {
        let min = a.iter().copied().min().unwrap_or(0);
        let shifted: Vec<i64> = a.iter().map(|x| x - min).collect();
        Self::from_basis(FracMatrix::diagonal_powers(&shifted, prime)).expect("diagonal basis is invertible")
    }

    pub fn vertex(c: &GammaClass, prime: u32) -> Self {
        Self::diagonal(&c.canonical_lift(), prime)
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn prime(&self) -> u32 {
        self.basis.prime()
    }

    pub fn basis(&self) -> &FracMatrix {
        &self.basis
    }

    pub fn contains(&self, x: &FracMatrix) -> Result<bool, OracleError> {
        if x.rows() != self.rank() || x.cols() != self.rank() {
            return Err(OracleError::SizeMismatch(self.rank(), x.rows()));
        }
        Ok(self.basis_inv.mul(x)?.mul(&self.basis)?.is_integral())
    }

    /// `g D g^{-1}`
    pub fn conjugate(&self, g: &FracMatrix) -> Result<Self, OracleError> {
        Self::from_basis(g.mul(&self.basis)?)
    }
}

pub fn order_contains(order: &MatrixOrder, x: &DvrMatrix) -> Result<bool, OracleError> {
    order.contains(&x.to_frac())
}

/// Intersection of two apartment vertices, as a membership predicate.
#[derive(Clone, Debug)]
pub struct GeoOrder {
    lifts: [Vec<i64>; 2],
    orders: [MatrixOrder; 2],
}

impl GeoOrder {
    pub fn new(a: &[i64], a2: &[i64], prime: u32) -> Result<Self, OracleError> {
        if a.len() != a2.len() {
            return Err(OracleError::SizeMismatch(a.len(), a2.len()));
        }
        Ok(GeoOrder {
            lifts: [a.to_vec(), a2.to_vec()],
            orders: [MatrixOrder::diagonal(a, prime), MatrixOrder::diagonal(a2, prime)],
        })
    }

    /// `D_0 ∩ D_[b]`
    pub fn of_type(t: &GeoType, prime: u32) -> Self {
        let n = t.rank();
        Self::new(&vec![0; n], &t.class().canonical_lift(), prime).expect("same rank")
    }

    pub fn rank(&self) -> usize {
        self.lifts[0].len()
    }

    pub fn prime(&self) -> u32 {
        self.orders[0].prime()
    }

    pub fn contains(&self, x: &FracMatrix) -> Result<bool, OracleError> {
        Ok(self.orders[0].contains(x)? && self.orders[1].contains(x)?)
    }

    /// Minimal valuation allowed at entry `(i, j)`.
    pub fn profile(&self, i: usize, j: usize) -> i64 {
        let [a, b] = &self.lifts;
        (a[i] - a[j]).max(b[i] - b[j])
    }

    /// `p^{profile(i,j)} E_{i,j}`, which span the order as a module.
    pub fn generators(&self) -> Vec<FracMatrix> {
        let n = self.rank();
        let p = self.prime();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| FracMatrix::scaled_unit(n, i, j, self.profile(i, j), p))
            .collect()
    }
}

/// Bracket-coordinate box `lo_i <= c_i <= hi_i`.
pub type SearchBox = Vec<(i64, i64)>;

/// The grid bounds widened by one on each side.
pub fn default_box(t: &GeoType) -> SearchBox {
    t.class().brackets().iter().map(|&b| (-1, b + 1)).collect()
}

/// Every apartment vertex in the box whose order contains all generators
/// of `geo`, sorted.
pub fn maximal_orders_containing(geo: &GeoOrder, search_box: &[(i64, i64)]) -> Result<Vec<GammaClass>, OracleError> {
    if search_box.len() + 1 != geo.rank() {
        return Err(OracleError::SizeMismatch(geo.rank(), search_box.len() + 1));
    }
    let gens = geo.generators();
    let mut out = Vec::new();
    let mut cur: Vec<i64> = search_box.iter().map(|r| r.0).collect();
    'scan: loop {
        let c = GammaClass::new(cur.clone());
        let order = MatrixOrder::vertex(&c, geo.prime());
        let mut all = true;
        for g in &gens {
            if !order.contains(g)? {
                all = false;
                break;
            }
        }
        if all {
            out.push(c);
        }
        let mut k = cur.len();
        loop {
            if k == 0 {
                break 'scan;
            }
            k -= 1;
            if cur[k] < search_box[k].1 {
                cur[k] += 1;
                for (x, r) in cur[k + 1..].iter_mut().zip(&search_box[k + 1..]) {
                    *x = r.0;
                }
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Raw invariant exponents of the diagonal bases `p^a` and `p^{a2}`;
/// normalize by subtracting the minimum to compare with a type distance.
pub fn oracle_invariant_exponents(a: &[i64], a2: &[i64], prime: u32) -> Result<Vec<i64>, OracleError> {
    if a.len() != a2.len() {
        return Err(OracleError::SizeMismatch(a.len(), a2.len()));
    }
    let min = a.iter().chain(a2).copied().min().unwrap_or(0);
    let to_exp = |v: &[i64]| -> Vec<u32> { v.iter().map(|x| (x - min) as u32).collect() };
    Ok(invariant_exponents(
        &DvrMatrix::diagonal_powers(&to_exp(a), prime),
        &DvrMatrix::diagonal_powers(&to_exp(a2), prime),
    )?)
}

/// Outcome of comparing the brute-force scan with the grid description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub geo_type: GammaClass,
    pub prime: u32,
    pub oracle: Vec<GammaClass>,
    pub block: Vec<GammaClass>,
    pub missing_from_oracle: Vec<GammaClass>,
    pub extra_in_oracle: Vec<GammaClass>,
    pub agree: bool,
}

pub fn cross_check(t: &GeoType, prime: u32) -> Result<CrossCheck, OracleError> {
    let oracle = maximal_orders_containing(&GeoOrder::of_type(t, prime), &default_box(t))?;
    let block = geo_block(t).vertices();
    let missing: Vec<_> = block.iter().filter(|v| !oracle.contains(v)).cloned().collect();
    let extra: Vec<_> = oracle.iter().filter(|v| !block.contains(v)).cloned().collect();
    Ok(CrossCheck {
        geo_type: t.class().clone(),
        prime,
        agree: missing.is_empty() && extra.is_empty(),
        oracle,
        block,
        missing_from_oracle: missing,
        extra_in_oracle: extra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, i: usize, j: usize, e: i64, p: u32) -> DvrMatrix {
        FracMatrix::scaled_unit(n, i, j, e, p).to_dvr().unwrap()
    }

    #[test]
    fn membership_matches_displayed_profile() {
        let p = 3;
        let flat = MatrixOrder::diagonal(&[0, 0], p);
        assert!(order_contains(&flat, &DvrMatrix::identity(2, p)).unwrap());
        let d = MatrixOrder::diagonal(&[0, 1], p);
        // entry (1,2) ranges over p^{-1} Z_(p), entry (2,1) over p Z_(p)
        assert!(order_contains(&d, &unit(2, 0, 1, 0, p)).unwrap());
        assert!(!order_contains(&d, &unit(2, 1, 0, 0, p)).unwrap());
        assert!(order_contains(&d, &unit(2, 1, 0, 1, p)).unwrap());
        assert!(order_contains(&d, &DvrMatrix::from_ints(&[vec![0, 0], vec![0, 0]], p).unwrap()).unwrap());
        assert!(d.contains(&FracMatrix::scaled_unit(2, 0, 1, -1, p)).unwrap());
        assert!(!d.contains(&FracMatrix::scaled_unit(2, 0, 1, -2, p)).unwrap());
    }

    #[test]
    fn size_mismatch() {
        let d = MatrixOrder::diagonal(&[0, 1], 2);
        assert!(matches!(
            order_contains(&d, &DvrMatrix::identity(3, 2)),
            Err(OracleError::SizeMismatch(2, 3))
        ));
    }

    #[test]
    fn geo_generators_are_members() {
        let g = GeoOrder::new(&[0, 0, 0], &[0, 1, 2], 2).unwrap();
        for x in g.generators() {
            assert!(g.contains(&x).unwrap());
        }
        assert_eq!(g.profile(1, 0), 1);
        assert_eq!(g.profile(0, 1), 0);
        assert_eq!(g.profile(2, 0), 2);
    }

    #[test]
    fn scans_match_grids() {
        let t = GeoType::from_brackets(&[2, 1]).unwrap();
        let found = maximal_orders_containing(&GeoOrder::of_type(&t, 2), &default_box(&t)).unwrap();
        assert_eq!(found.len(), 6);
        assert_eq!(found, geo_block(&t).vertices());

        let t = GeoType::maximal(3);
        assert_eq!(maximal_orders_containing(&GeoOrder::of_type(&t, 3), &default_box(&t)).unwrap().len(), 1);

        let t = GeoType::from_brackets(&[1]).unwrap();
        assert_eq!(maximal_orders_containing(&GeoOrder::of_type(&t, 5), &default_box(&t)).unwrap().len(), 2);
        assert!(cross_check(&t, 5).unwrap().agree);
    }

    #[test]
    fn same_vertex_gives_itself() {
        let g = GeoOrder::new(&[0, 2, 3], &[0, 2, 3], 2).unwrap();
        let found = maximal_orders_containing(&g, &[(0, 4), (0, 4)]).unwrap();
        assert_eq!(found, vec![GammaClass::new(vec![2, 1])]);
    }

    #[test]
    fn invariant_exponents_of_diagonal_pairs() {
        assert_eq!(oracle_invariant_exponents(&[0, 0, 0], &[0, 1, 2], 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(oracle_invariant_exponents(&[0, 1], &[1, 0], 3).unwrap(), vec![-1, 1]);
    }

    #[test]
    fn conjugation_preserves_membership() {
        let p = 2;
        let d = MatrixOrder::diagonal(&[0, 1, 3], p);
        let g = DvrMatrix::from_ints(&[vec![1, 2, 0], vec![0, 3, 1], vec![4, 0, 1]], p).unwrap().to_frac();
        let gi = g.inverse().unwrap();
        let conj = d.conjugate(&g).unwrap();
        for (i, j, e) in [(0, 1, 0), (1, 0, 0), (1, 0, 1), (2, 0, 2), (2, 0, 3), (0, 2, -3)] {
            let x = FracMatrix::scaled_unit(3, i, j, e, p);
            let y = g.mul(&x).unwrap().mul(&gi).unwrap();
            assert_eq!(d.contains(&x).unwrap(), conj.contains(&y).unwrap());
        }
    }
}
