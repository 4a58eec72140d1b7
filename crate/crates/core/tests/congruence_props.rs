use num_integer::Integer;
use plurigenera::congruence::{
    check_all_u, check_condition_u, check_condition_u_bruteforce, divisibility_closure_r3,
    floor_sum, ConditionUInstance,
};
use plurigenera::FibrationNumericalType;
use proptest::prelude::*;

/// `(m, nu)` with `nu | m`, `2 <= m <= max_m`.
fn fibre_pair(max_m: u64) -> impl Strategy<Value = (u64, u64)> {
    (2..=max_m).prop_flat_map(|m| {
        let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
        proptest::sample::select(divisors).prop_map(move |nu| (m, nu))
    })
}

fn instance(max_m: u64, max_r: usize) -> impl Strategy<Value = ConditionUInstance> {
    proptest::collection::vec(fibre_pair(max_m), 1..=max_r).prop_flat_map(|pairs| {
        let r = pairs.len();
        (Just(pairs), 1..=r).prop_map(|(pairs, i)| {
            let (m, nu) = pairs.into_iter().unzip();
            ConditionUInstance::new(m, nu, i).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn gcd_criterion_matches_oracle(inst in instance(24, 4)) {
        prop_assert_eq!(check_condition_u_bruteforce(&inst, u128::MAX), Ok(check_condition_u(&inst)));
    }

    #[test]
    fn u_is_invariant_under_permuting_the_others(inst in instance(30, 5), seed in any::<u64>()) {
        let k = inst.i - 1;
        let mut others: Vec<(u64, u64)> = inst.m.iter().zip(&inst.nu)
            .enumerate().filter(|(j, _)| *j != k).map(|(_, (&m, &nu))| (m, nu)).collect();
        // Deterministic shuffle from the seed.
        let mut s = seed;
        for j in (1..others.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            others.swap(j, (s >> 33) as usize % (j + 1));
        }
        let mut m = vec![inst.m[k]];
        let mut nu = vec![inst.nu[k]];
        for (a, b) in others {
            m.push(a);
            nu.push(b);
        }
        let moved = ConditionUInstance::new(m, nu, 1).unwrap();
        prop_assert_eq!(check_condition_u(&inst), check_condition_u(&moved));
    }

    #[test]
    fn floor_sum_shifts_by_one_period(
        pairs in proptest::collection::vec((2u64..=30).prop_flat_map(|m| (0..m, Just(m))), 0..5),
        n in 0u64..500,
    ) {
        let period = pairs.iter().fold(1u64, |acc, &(_, m)| acc.lcm(&m));
        let per_period: u64 = pairs.iter().map(|&(a, m)| a * (period / m)).sum();
        prop_assert_eq!(floor_sum(n + period, &pairs), floor_sum(n, &pairs) + per_period);
    }
}

#[test]
fn tame_triples_u_iff_divisibility_closure() {
    for a in 2..=30u64 {
        for b in a..=30 {
            for c in b..=30 {
                let ty = FibrationNumericalType::tame_over_p1(&[a, b, c]).unwrap();
                assert_eq!(
                    check_all_u(&ty).unwrap(),
                    divisibility_closure_r3(a, b, c),
                    "({a},{b},{c})"
                );
            }
        }
    }
}
