use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ClassFieldError;
use crate::exact_linear::snf_integers;
use crate::matrix::Matrix;

/// Finite abelian group `Z/d_1 x ... x Z/d_k` in a fixed presentation.
///
/// The cyclic orders need not divide one another; [`AbelianGroup::invariant_factors`]
/// gives the normalized form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct AbelianGroup {
    moduli: Vec<u64>,
}

impl TryFrom<Vec<u64>> for AbelianGroup {
    type Error = ClassFieldError;

    fn try_from(moduli: Vec<u64>) -> Result<Self, ClassFieldError> {
        AbelianGroup::new(moduli)
    }
}

impl From<AbelianGroup> for Vec<u64> {
    fn from(g: AbelianGroup) -> Vec<u64> {
        g.moduli
    }
}

impl AbelianGroup {
    pub fn new(moduli: Vec<u64>) -> Result<Self, ClassFieldError> {
        if moduli.contains(&0) {
            return Err(ClassFieldError::InvalidGroup("cyclic orders must be positive".into()));
        }
        Ok(AbelianGroup { moduli })
    }

    pub fn trivial() -> Self {
        AbelianGroup { moduli: Vec::new() }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn ngens(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1, |acc, d| acc.lcm(d))
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        quotient_by(self, &[]).expect("no generators").invariants
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.ngens()]
    }

    /// Reduces arbitrary integers into standard coordinates.
    pub fn reduce(&self, x: &[i64]) -> Result<Vec<u64>, ClassFieldError> {
        self.check_len(x.len())?;
        Ok(x.iter()
            .zip(&self.moduli)
            .map(|(&v, &d)| v.rem_euclid(d as i64) as u64)
            .collect())
    }

    /// Accepts only coordinates already in `[0, d_i)`.
    pub fn element(&self, x: &[i64]) -> Result<Vec<u64>, ClassFieldError> {
        self.check_len(x.len())?;
        if x.iter().zip(&self.moduli).any(|(&v, &d)| v < 0 || v as u64 >= d) {
            return Err(ClassFieldError::ElementOutOfRange(format!("{x:?} in {self}")));
        }
        Ok(x.iter().map(|&v| v as u64).collect())
    }

    fn check_len(&self, len: usize) -> Result<(), ClassFieldError> {
        if len != self.ngens() {
            return Err(ClassFieldError::ElementOutOfRange(format!(
                "element has {len} coordinates, group {self} has {}",
                self.ngens()
            )));
        }
        Ok(())
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.moduli).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.moduli).map(|(a, d)| (d - a) % d).collect()
    }

    pub fn scale(&self, x: &[u64], k: i64) -> Vec<u64> {
        x.iter()
            .zip(&self.moduli)
            .map(|(&a, &d)| ((a as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect()
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter().zip(&self.moduli).fold(1, |acc, (&a, &d)| acc.lcm(&(d / a.gcd(&d))))
    }

    /// Every element, lexicographically.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.moduli {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.moduli.iter().map(|d| format!("Z/{d}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// `G / <gens>` in invariant-factor form, with the projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    parent: AbelianGroup,
    kernel: Vec<Vec<u64>>,
    /// nontrivial invariant factors of the quotient
    invariants: Vec<u64>,
    /// parent coordinates times this matrix, restricted to `columns`, give quotient coordinates
    transform: Matrix<BigInt>,
    columns: Vec<usize>,
}

impl Quotient {
    pub fn parent(&self) -> &AbelianGroup {
        &self.parent
    }

    pub fn kernel_generators(&self) -> &[Vec<u64>] {
        &self.kernel
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn group(&self) -> AbelianGroup {
        AbelianGroup { moduli: self.invariants.clone() }
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    /// Image of a parent element, given by arbitrary integer coordinates.
    pub fn project(&self, x: &[i64]) -> Vec<u64> {
        assert_eq!(x.len(), self.parent.ngens(), "element of the wrong group");
        self.columns
            .iter()
            .zip(&self.invariants)
            .map(|(&c, &d)| {
                let v: BigInt = x
                    .iter()
                    .enumerate()
                    .map(|(i, &xi)| BigInt::from(xi) * &self.transform[(i, c)])
                    .sum();
                v.mod_floor(&BigInt::from(d)).to_u64().expect("reduced below modulus")
            })
            .collect()
    }

    pub fn project_element(&self, x: &[u64]) -> Vec<u64> {
        let signed: Vec<i64> = x.iter().map(|&v| v as i64).collect();
        self.project(&signed)
    }

    pub fn kills(&self, x: &[u64]) -> bool {
        self.project_element(x).iter().all(|&v| v == 0)
    }
}

/// Quotient of `g` by the subgroup generated by `gens`, via the Smith form
/// of the relation matrix (cyclic relations stacked over the generators).
pub fn quotient_by(g: &AbelianGroup, gens: &[Vec<u64>]) -> Result<Quotient, ClassFieldError> {
    for x in gens {
        let signed: Vec<i64> = x.iter().map(|&v| v as i64).collect();
        g.element(&signed)?;
    }
    let k = g.ngens();
    let rows = k + gens.len();
    let mut rel = Matrix::<BigInt>::zeros(rows, k);
    for (i, &d) in g.moduli.iter().enumerate() {
        rel[(i, i)] = BigInt::from(d);
    }
    for (r, x) in gens.iter().enumerate() {
        for (j, &v) in x.iter().enumerate() {
            rel[(k + r, j)] = BigInt::from(v);
        }
    }
    let snf = snf_integers(&rel);
    let mut invariants = Vec::new();
    let mut columns = Vec::new();
    for (c, d) in snf.diagonal.iter().enumerate() {
        debug_assert!(!d.is_zero(), "cyclic relations give full rank");
        let d = d.to_u64().expect("invariant factor fits in u64");
        if d != 1 {
            invariants.push(d);
            columns.push(c);
        }
    }
    Ok(Quotient {
        parent: g.clone(),
        kernel: gens.to_vec(),
        invariants,
        transform: snf.right,
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(m: &[u64]) -> AbelianGroup {
        AbelianGroup::new(m.to_vec()).unwrap()
    }

    #[test]
    fn small_quotients() {
        let q = quotient_by(&grp(&[2, 2]), &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(q.order(), 1);
        let q = quotient_by(&grp(&[6]), &[vec![3]]).unwrap();
        assert_eq!(q.invariants(), &[3]);
        let q = quotient_by(&grp(&[4, 2]), &[vec![2, 1]]).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.invariants(), &[4]);
        assert!(q.kills(&[2, 1]));
        assert!(!q.kills(&[2, 0]));
    }

    #[test]
    fn invariant_factor_normalization() {
        assert_eq!(grp(&[2, 3]).invariant_factors(), vec![6]);
        assert_eq!(grp(&[4, 6]).invariant_factors(), vec![2, 12]);
        assert_eq!(grp(&[1, 1]).invariant_factors(), Vec::<u64>::new());
        assert_eq!(AbelianGroup::trivial().order(), 1);
    }

    #[test]
    fn projection_is_a_homomorphism() {
        let g = grp(&[4, 6, 3]);
        let q = quotient_by(&g, &[vec![2, 3, 0], vec![0, 2, 1]]).unwrap();
        let els = g.elements();
        assert_eq!(els.len(), 72);
        let image: std::collections::BTreeSet<_> = els.iter().map(|x| q.project_element(x)).collect();
        assert_eq!(image.len() as u64, q.order());
        let qg = q.group();
        for x in els.iter().step_by(5) {
            for y in els.iter().step_by(7) {
                assert_eq!(q.project_element(&g.add(x, y)), qg.add(&q.project_element(x), &q.project_element(y)));
            }
        }
        let killed = els.iter().filter(|x| q.kills(x)).count() as u64;
        assert_eq!(killed * q.order(), g.order());
    }

    #[test]
    fn out_of_range_generators() {
        assert!(matches!(
            quotient_by(&grp(&[2]), &[vec![2]]),
            Err(ClassFieldError::ElementOutOfRange(_))
        ));
        assert!(matches!(
            quotient_by(&grp(&[2]), &[vec![1, 0]]),
            Err(ClassFieldError::ElementOutOfRange(_))
        ));
        assert!(AbelianGroup::new(vec![0]).is_err());
    }

    #[test]
    fn element_orders() {
        let g = grp(&[4, 6]);
        assert_eq!(g.element_order(&[2, 3]), 2);
        assert_eq!(g.element_order(&[1, 2]), 12);
        assert_eq!(g.element_order(&[0, 0]), 1);
        assert_eq!(g.exponent(), 12);
        assert_eq!(g.neg(&[1, 2]), vec![3, 4]);
        assert_eq!(g.scale(&[1, 2], -1), vec![3, 4]);
    }
}
