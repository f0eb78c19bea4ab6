//! Random instances for property checks and the acceptance runs.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::classfield::{AbelianGroup, ArchFlag, GenusInput, PlaceData};
use crate::exact_linear::{DvrMatrix, FracMatrix};
use crate::gamma::GammaClass;
use crate::matrix::Matrix;

/// Totally positive class of rank `n` with brackets in `0..=max_entry`.
pub fn totally_positive<R: Rng>(rng: &mut R, n: usize, max_entry: i64) -> GammaClass {
    GammaClass::new((1..n).map(|_| rng.gen_range(0..=max_entry)).collect())
}

/// Palindromic totally positive class.
pub fn symmetric<R: Rng>(rng: &mut R, n: usize, max_entry: i64) -> GammaClass {
    let mut b = vec![0; n - 1];
    for i in 0..(n / 2) {
        let v = rng.gen_range(0..=max_entry);
        b[i] = v;
        b[n - 2 - i] = v;
    }
    GammaClass::new(b)
}

/// Nonsingular matrix with integer entries, about a third of them
/// divisible by `p` so that nonzero exponents show up.
pub fn dvr_matrix<R: Rng>(rng: &mut R, n: usize, p: u32) -> DvrMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let x: i64 = rng.gen_range(-9..=9);
                        if rng.gen_bool(0.35) {
                            x * i64::from(p).pow(rng.gen_range(1..=2))
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        let m = DvrMatrix::from_ints(&rows, p).expect("prime checked by caller");
        if !m.determinant().expect("square").is_zero() {
            return m;
        }
    }
}

/// Product of unit diagonal, permutation and elementary matrices, with
/// occasional fractional entries whose denominators are prime to `p`.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize, p: u32) -> DvrMatrix {
    let unit = |rng: &mut R| -> i64 {
        loop {
            let x: i64 = rng.gen_range(-7..=7);
            if x != 0 && x % i64::from(p) != 0 {
                return x;
            }
        }
    };
    let mut m = Matrix::<BigRational>::identity(n);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    for (i, &j) in perm.iter().enumerate() {
        m[(i, i)] = BigRational::from_integer(0.into());
        m[(i, j)] = BigRational::from_integer(unit(rng).into());
    }
    for _ in 0..(2 * n) {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let f = BigRational::new(BigInt::from(rng.gen_range(-5..=5)), BigInt::from(unit(rng).abs()));
        m.sub_row_multiple(i, j, &f);
    }
    FracMatrix::new(m, p)
        .expect("prime checked by caller")
        .to_dvr()
        .expect("entries are local integers")
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Random genus of degree `n`: a group with up to three cyclic factors,
/// up to four places, and local types on some finite places, biased
/// towards symmetric ones.
pub fn genus_input<R: Rng>(rng: &mut R, n: u64) -> GenusInput {
    let moduli: Vec<u64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=12)).collect();
    let group = AbelianGroup::new(moduli.clone()).expect("positive moduli");
    let mut places = Vec::new();
    for k in 0..rng.gen_range(0..=4) {
        let frobenius: Vec<i64> = moduli.iter().map(|&d| rng.gen_range(0..d) as i64).collect();
        if rng.gen_bool(0.2) {
            let capacity = if n % 2 == 0 && rng.gen_bool(0.5) { n / 2 } else { n };
            places.push(PlaceData::real(&format!("r{k}"), frobenius, capacity));
            continue;
        }
        let capacity = *divisors(n).choose(rng).expect("n >= 1");
        let geo_type = if capacity >= 2 && rng.gen_bool(0.8) {
            Some(if rng.gen_bool(0.6) {
                symmetric(rng, capacity as usize, 3)
            } else {
                totally_positive(rng, capacity as usize, 3)
            })
        } else {
            None
        };
        places.push(PlaceData::finite(&format!("p{k}"), frobenius, capacity, geo_type));
    }
    let arch_flags = (0..rng.gen_range(0..=2))
        .map(|_| if rng.gen_bool(0.5) { ArchFlag::Ramified } else { ArchFlag::Unramified })
        .collect();
    GenusInput { n, group, places, arch_flags }
}
