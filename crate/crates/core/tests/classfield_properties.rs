use std::collections::{BTreeMap, BTreeSet};

use geo_spinor::classfield::{
    distance, distance0, label_complex, quotient_by, relative_exponent, representation_sets, same_spinor_genus,
    sigma, sigma0, sigma_index, AbelianGroup, GenusInput,
};
use geo_spinor::sampling;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_input(seed: u64, degrees: &[u64]) -> (GenusInput, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = degrees[rng.gen_range(0..degrees.len())];
    (sampling::genus_input(&mut rng, n), rng)
}

fn valuations(inp: &GenusInput, rng: &mut ChaCha8Rng) -> BTreeMap<String, i64> {
    inp.places.iter().map(|p| (p.id.clone(), rng.gen_range(-6..=6))).collect()
}

fn add(a: &BTreeMap<String, i64>, b: &BTreeMap<String, i64>) -> BTreeMap<String, i64> {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(k.clone()).or_insert(0) += v;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn odd_degree_genus_field_is_maximal_field(seed in any::<u64>()) {
        let (inp, _) = random_input(seed, &[1, 3, 5]);
        let (s, s0) = (sigma(&inp).unwrap(), sigma0(&inp).unwrap());
        prop_assert_eq!(s.invariants(), s0.invariants());
    }

    #[test]
    fn relative_group_has_exponent_two(seed in any::<u64>()) {
        let (inp, _) = random_input(seed, &[1, 2, 3, 4, 5, 6]);
        let idx = sigma_index(&inp).unwrap();
        prop_assert!(idx.is_power_of_two());
        prop_assert!(relative_exponent(&inp).unwrap() <= 2);
    }

    #[test]
    fn distance_is_additive(seed in any::<u64>()) {
        let (inp, mut rng) = random_input(seed, &[2, 3, 4, 6]);
        let v = valuations(&inp, &mut rng);
        let w = valuations(&inp, &mut rng);
        let g = sigma(&inp).unwrap().group();
        prop_assert_eq!(distance(&inp, &add(&v, &w)).unwrap(), g.add(&distance(&inp, &v).unwrap(), &distance(&inp, &w).unwrap()));
        let g0 = sigma0(&inp).unwrap().group();
        prop_assert_eq!(distance0(&inp, &add(&v, &w)).unwrap(), g0.add(&distance0(&inp, &v).unwrap(), &distance0(&inp, &w).unwrap()));
    }

    #[test]
    fn same_genus_is_an_equivalence(seed in any::<u64>()) {
        let (mut inp, mut rng) = random_input(seed, &[2, 3, 4, 6]);
        for p in &mut inp.places {
            if p.geo_type.as_ref().is_some_and(|t| !t.is_symmetric()) {
                p.geo_type = None;
            }
        }
        let xs: Vec<_> = (0..4).map(|_| valuations(&inp, &mut rng)).collect();
        for a in &xs {
            prop_assert!(same_spinor_genus(&inp, a, a).unwrap());
            for b in &xs {
                let ab = same_spinor_genus(&inp, a, b).unwrap();
                prop_assert_eq!(ab, same_spinor_genus(&inp, b, a).unwrap());
                for c in &xs {
                    if ab && same_spinor_genus(&inp, b, c).unwrap() {
                        prop_assert!(same_spinor_genus(&inp, a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn labels_differ_by_distances(seed in any::<u64>()) {
        let (inp, mut rng) = random_input(seed, &[2, 3, 4]);
        let base: Vec<i64> = inp.group.moduli().iter().map(|&d| rng.gen_range(0..d) as i64).collect();
        let lc = label_complex(&inp, &base).unwrap();
        let lc0 = label_complex(&inp, &vec![0; base.len()]).unwrap();
        let s0 = sigma0(&inp).unwrap();
        let g0 = s0.group();
        let shift = s0.project(&base);
        let first = &lc.vertices[0];
        for (v, v0) in lc.vertices.iter().zip(&lc0.vertices) {
            let diff: BTreeMap<String, i64> = lc
                .places
                .iter()
                .zip(v.weights.iter().zip(&first.weights))
                .map(|(id, (a, b))| (id.clone(), a - b))
                .collect();
            prop_assert_eq!(&v.element, &g0.add(&first.element, &distance0(&inp, &diff).unwrap()));
            prop_assert_eq!(&v.element, &g0.add(&v0.element, &shift));
        }
        let distinct: BTreeSet<_> = lc.vertices.iter().map(|v| &v.element).collect();
        prop_assert_eq!(distinct.len(), lc.distinct_labels());
    }

    #[test]
    fn quotient_order_times_subgroup_order(moduli in prop::collection::vec(1u64..=8, 1..=3), seed in any::<u64>()) {
        let g = AbelianGroup::new(moduli.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Vec<u64>> = (0..rng.gen_range(0..=3))
            .map(|_| moduli.iter().map(|&d| rng.gen_range(0..d)).collect())
            .collect();
        let q = quotient_by(&g, &gens).unwrap();
        let killed = g.elements().iter().filter(|x| q.kills(x)).count() as u64;
        prop_assert_eq!(killed * q.order(), g.order());
        for x in &gens {
            prop_assert!(q.kills(x));
        }
        prop_assert!(q.invariants().windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn stabilizer_lies_in_generated_subgroup(moduli in prop::collection::vec(1u64..=6, 1..=2), seed in any::<u64>()) {
        let g = AbelianGroup::new(moduli.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi: Vec<Vec<u64>> = (0..rng.gen_range(1..=4))
            .map(|_| moduli.iter().map(|&d| rng.gen_range(0..d)).collect())
            .collect();
        let r = representation_sets(&g, &phi).unwrap();
        for s in &r.stabilizer {
            prop_assert!(r.lower.kills(s));
        }
        prop_assert!(r.upper.order() >= r.lower.order());
        prop_assert_eq!(r.defined, r.upper.order() == r.lower.order());
    }
}
