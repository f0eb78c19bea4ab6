use std::collections::BTreeSet;

use geo_spinor::blocks::{
    comm_block, default_shift_bound, embeds, geo_block, placements, relative_spinor_image, CommAlgebraLocal, GeoType, HostBlock,
};
use geo_spinor::gamma::{type_distance, GammaClass, Permutation};
use geo_spinor::lattice_oracle::{cross_check, oracle_invariant_exponents};
use proptest::prelude::*;

fn tp(max_rank: usize, max_entry: i64) -> impl Strategy<Value = GeoType> {
    (2..=max_rank)
        .prop_flat_map(move |n| prop::collection::vec(0..=max_entry, n - 1))
        .prop_map(|b| GeoType::from_brackets(&b).unwrap())
}

fn class(n: usize, range: i64) -> impl Strategy<Value = GammaClass> {
    prop::collection::vec(-range..=range, n - 1).prop_map(GammaClass::new)
}

fn comm_algebra() -> impl Strategy<Value = CommAlgebraLocal> {
    prop::collection::vec((1u32..=2, 1u32..=2), 1..=3)
        .prop_filter("degree between 2 and 4", |c| {
            let n: u32 = c.iter().map(|(e, f)| e * f).sum();
            (2..=4).contains(&n)
        })
        .prop_map(|c| CommAlgebraLocal::from_pairs(&c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_a_left_action(b in class(4, 5), s in 0usize..24, t in 0usize..24) {
        let all = Permutation::all(4);
        let (s, t) = (&all[s], &all[t]);
        let lhs = b.act(&t.compose(s)).unwrap();
        let rhs = b.act(s).unwrap().act(t).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(b.act(&Permutation::reversal(4)).unwrap(), b.star());
    }

    #[test]
    fn minimal_length_pair(t in tp(5, 4)) {
        let b = t.class();
        let n = b.rank();
        let pair: BTreeSet<GammaClass> = [b.clone(), b.star()].into_iter().collect();
        for s in Permutation::all(n) {
            let x = b.act(&s).unwrap();
            prop_assert!(x.total_length() >= b.total_length());
            prop_assert_eq!(x.total_length() == b.total_length(), pair.contains(&x));
        }
    }

    #[test]
    fn type_distance_matches_lattice_invariants(c in class(3, 3), d in class(3, 3), p in prop_oneof![Just(2u32), Just(3)]) {
        let td = type_distance(&c, &d).unwrap();
        let raw = oracle_invariant_exponents(&c.canonical_lift(), &d.canonical_lift(), p).unwrap();
        let min = raw[0];
        let normalized: Vec<i64> = raw.iter().map(|x| x - min).collect();
        prop_assert_eq!(&normalized, &td.exponents);
        prop_assert_eq!(raw.iter().sum::<i64>().rem_euclid(3) as u64, td.total);
    }

    #[test]
    fn placements_match_brute_force(host_b in prop::collection::vec(0i64..=4, 2), guest_b in prop::collection::vec(0i64..=3, 2)) {
        let guest = GeoType::from_brackets(&guest_b).unwrap();
        let grid = geo_block(&GeoType::from_brackets(&host_b).unwrap());
        let verts = grid.vertices();
        let want = guest.class().canonical_lift();
        let mut brute = Vec::new();
        for c in &verts {
            for d in &verts {
                if type_distance(c, d).unwrap().exponents == want {
                    brute.push((c.clone(), d.clone()));
                }
            }
        }
        let got: Vec<_> = placements(&grid.into(), &guest, None).unwrap().into_iter().map(|p| (p.c, p.d)).collect();
        prop_assert_eq!(got, brute);
    }

    #[test]
    fn sub_grids_embed(host in tp(4, 3), frac in prop::collection::vec(0.0f64..=1.0, 3)) {
        let b = host.class().brackets();
        let c: Vec<i64> = b.iter().zip(&frac).map(|(&x, f)| (x as f64 * f).floor() as i64).collect();
        let guest = GeoType::from_brackets(&c).unwrap();
        prop_assert!(embeds(&geo_block(&host).into(), &guest, None).unwrap());
    }

    #[test]
    fn reversing_the_guest_reverses_placements(host in tp(3, 3), guest in tp(3, 2)) {
        prop_assume!(host.rank() == guest.rank());
        let reversed = GeoType::from_brackets(&guest.class().brackets().iter().rev().copied().collect::<Vec<_>>()).unwrap();
        let h: HostBlock = geo_block(&host).into();
        let fwd: BTreeSet<_> = placements(&h, &guest, None).unwrap().into_iter().map(|p| (p.c, p.d)).collect();
        let back: BTreeSet<_> = placements(&h, &reversed, None).unwrap().into_iter().map(|p| (p.d, p.c)).collect();
        prop_assert_eq!(fwd, back);
    }

    #[test]
    fn symmetric_guests_give_translation_closed_images(host in tp(4, 3), half in prop::collection::vec(0i64..=2, 2)) {
        let n = host.rank();
        let mut b = vec![0; n - 1];
        for i in 0..n / 2 {
            b[i] = half[i];
            b[n - 2 - i] = half[i];
        }
        let guest = GeoType::from_brackets(&b).unwrap();
        let img = relative_spinor_image(&geo_block(&host).into(), &guest, None).unwrap();
        prop_assert_eq!(img.translate(guest.total_distance()), img);
    }

    #[test]
    fn commutative_images_are_stable(l in comm_algebra(), guest_b in prop::collection::vec(0i64..=2, 3)) {
        let block = comm_block(&l);
        let n = block.rank();
        let guest = GeoType::from_brackets(&guest_b[..n - 1]).unwrap();
        let host: HostBlock = block.into();
        let img = relative_spinor_image(&host, &guest, None).unwrap();
        for c in l.components() {
            prop_assert_eq!(img.translate(u64::from(c.f)), img.clone());
        }
        let wider = relative_spinor_image(&host, &guest, Some(default_shift_bound(&guest) + 3)).unwrap();
        prop_assert_eq!(wider, img);
        for p in placements(&host, &guest, None).unwrap() {
            prop_assert!(p.image_block(&guest).iter().all(|v| host.contains(v)));
        }
    }
}

#[test]
fn grid_description_matches_brute_force() {
    let mut checked = 0;
    for p in [2, 3] {
        for b0 in 0..=3 {
            assert!(cross_check(&GeoType::from_brackets(&[b0]).unwrap(), p).unwrap().agree);
            for b1 in 0..=3 {
                assert!(cross_check(&GeoType::from_brackets(&[b0, b1]).unwrap(), p).unwrap().agree);
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 32);
}

#[test]
fn vertex_counts_and_extreme_pair() {
    for b in [vec![3, 1], vec![0, 0], vec![1, 1], vec![2, 0, 3]] {
        let t = GeoType::from_brackets(&b).unwrap();
        let grid = geo_block(&t);
        let expected: u64 = b.iter().map(|&x| x as u64 + 1).product();
        assert_eq!(grid.vertex_count(), expected);
        let zero = GammaClass::zero(t.rank());
        assert!(grid.is_extreme(&zero) && grid.is_extreme(t.class()));
        let far = type_distance(&zero, t.class()).unwrap().as_class().total_length();
        for c in grid.vertices() {
            for d in grid.vertices() {
                assert!(type_distance(&c, &d).unwrap().as_class().total_length() <= far);
            }
        }
    }
}
