//! Independent brute-force oracles checked against the library.

use num_bigint::BigInt;
use pfl_core::extremal::{p_exact, EdgeConvention, HittingInstance, SearchOptions, Uniqueness};
use pfl_core::predicates::{is_cross_partition_free, is_k_dependent, is_k_partition_free};
use pfl_core::setcore::serialize_family_text;
use pfl_core::{binom, parse_family, serialize_family, Family, GroundSet, Rational};
use proptest::prelude::*;

/// All ways to pick `k` distinct members of `sets` (by index), pairwise disjoint.
fn brute_disjoint(sets: &[u32], k: usize, full: Option<u32>) -> bool {
    fn go(sets: &[u32], start: usize, left: usize, used: u32, full: Option<u32>) -> bool {
        if left == 0 {
            return full.is_none_or(|f| used == f);
        }
        (start..sets.len()).any(|i| sets[i] & used == 0 && go(sets, i + 1, left - 1, used | sets[i], full))
    }
    go(sets, 0, k, 0, full)
}

fn family_from_code(g: GroundSet, code: u64) -> Family {
    let masks = (0..g.power_set_len() as u32).filter(|m| code >> m & 1 == 1);
    Family::from_masks(g, masks).unwrap()
}

#[test]
fn predicates_match_brute_force_up_to_three_points() {
    for n in 1..=3 {
        let g = GroundSet::new(n).unwrap();
        for code in 0..1u64 << g.power_set_len() {
            let f = family_from_code(g, code);
            let masks: Vec<u32> = f.sets().map(|s| s.mask()).collect();
            for k in 2..=4 {
                assert_eq!(is_k_partition_free(&f, k), !brute_disjoint(&masks, k, Some(g.full_mask())));
                assert_eq!(is_k_dependent(&f, k), !brute_disjoint(&masks, k, None));
            }
        }
    }
}

#[test]
fn complement_duality_on_four_points() {
    let inst = HittingInstance::enumerate(4, 3, EdgeConvention::WithEmptyBlock).unwrap();
    let g = inst.ground;
    for code in 0..1u64 << 16 {
        let f = family_from_code(g, code);
        assert_eq!(is_k_partition_free(&f, 3), inst.validate_hitter(&f.complement()).unwrap(), "{code:#x}");
    }
}

#[test]
fn cross_predicate_matches_brute_force() {
    let g = GroundSet::new(3).unwrap();
    // small sample of triples: every family drawn from a fixed list of codes
    let codes = [0u64, 0x01, 0x16, 0x2e, 0x81, 0xfe, 0xff, 0x68, 0x97];
    for &a in &codes {
        for &b in &codes {
            for &c in &codes {
                let fams = [family_from_code(g, a), family_from_code(g, b), family_from_code(g, c)];
                let mut hit = false;
                for x in fams[0].sets() {
                    for y in fams[1].sets() {
                        for z in fams[2].sets() {
                            let (x, y, z) = (x.mask(), y.mask(), z.mask());
                            let disjoint = x & y == 0 && x & z == 0 && y & z == 0;
                            // equal picks only allowed when the common set is empty
                            let distinct = (x != y || x == 0) && (x != z || x == 0) && (y != z || y == 0);
                            hit |= disjoint && distinct && x | y | z == g.full_mask();
                        }
                    }
                }
                let refs: Vec<&Family> = fams.iter().collect();
                assert_eq!(is_cross_partition_free(&refs).unwrap(), !hit);
            }
        }
    }
}

#[test]
fn largest_three_partition_free_family_on_three_points() {
    let g = GroundSet::new(3).unwrap();
    let mut best = 0;
    let mut optima = Vec::new();
    for code in 0..1u64 << 8 {
        let f = family_from_code(g, code);
        let masks: Vec<u32> = f.sets().map(|s| s.mask()).collect();
        if brute_disjoint(&masks, 3, Some(g.full_mask())) {
            continue;
        }
        if f.len() > best {
            best = f.len();
            optima.clear();
        }
        if f.len() == best {
            optima.push(f);
        }
    }
    let res = p_exact(3, 3, SearchOptions { prove_unique: true, ..Default::default() }).unwrap();
    assert_eq!(res.p as usize, best);
    assert_eq!(res.unique, if optima.len() == 1 { Uniqueness::Yes } else { Uniqueness::No });
    assert_eq!(res.optimal_families.len(), optima.len());
    for f in &res.optimal_families {
        assert!(optima.contains(f));
    }
}

#[test]
fn binomials_match_pascal() {
    let mut row = vec![BigInt::from(1)];
    for n in 1..=40u64 {
        let mut next = vec![BigInt::from(1); n as usize + 1];
        for j in 1..n as usize {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
        for (j, v) in row.iter().enumerate() {
            assert_eq!(BigInt::from(binom(n, j as i64)), *v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rational_ops_match_cross_multiplication(a in -500i64..500, b in 1i64..500, c in -500i64..500, d in 1i64..500) {
        let x = Rational::new(a, b);
        let y = Rational::new(c, d);
        // (a/b) op (c/d) compared by cross-multiplying, never via the library's normal form
        let same = |r: &Rational, num: i128, den: i128| {
            let rn: i128 = r.numer().try_into().unwrap();
            let rd: i128 = r.denom().try_into().unwrap();
            rn * den == num * rd
        };
        let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
        prop_assert!(same(&(&x + &y), a * d + c * b, b * d));
        prop_assert!(same(&(&x - &y), a * d - c * b, b * d));
        prop_assert!(same(&(&x * &y), a * c, b * d));
        if c != 0 {
            prop_assert!(same(&(&x / &y), a * d, b * c));
        }
        prop_assert_eq!(x < y, a * d < c * b);
        prop_assert_eq!(x == y, a * d == c * b);
    }

    #[test]
    fn serialization_round_trips(n in 1usize..=8, seed in any::<u64>()) {
        let g = GroundSet::new(n).unwrap();
        let f = pfl_core::random::random_family(g, 0.3, &mut pfl_core::random::rng_from_seed(seed));
        prop_assert_eq!(parse_family(&serialize_family(&f)).unwrap(), f.clone());
        prop_assert_eq!(parse_family(&serialize_family_text(&f)).unwrap(), f);
    }
}
