use std::collections::BTreeSet;

use num_integer::Integer;
use plurigenera::verifier::{
    enumerate_types, find_sharp_cases, is_admissible, verify_all, verify_tail, EnumerationBounds,
};
use plurigenera::{Characteristic, FibrationNumericalType, FibreDatum};

/// Independent oracle for tame triples over P^1: slope by cross
/// multiplication, U by the divisibility closure written out by hand.
fn tame_triples_oracle(max_m: u64) -> BTreeSet<(u64, u64, u64)> {
    let mut out = BTreeSet::new();
    for a in 2..=max_m {
        for b in a..=max_m {
            for c in b..=max_m {
                let num = (a - 1) * b * c + (b - 1) * a * c + (c - 1) * a * b;
                let positive = num > 2 * a * b * c;
                let closed = (a * b / a.gcd(&b)) % c == 0
                    && (a * c / a.gcd(&c)) % b == 0
                    && (b * c / b.gcd(&c)) % a == 0;
                if positive && closed {
                    out.insert((a, b, c));
                }
            }
        }
    }
    out
}

#[test]
fn tame_triples_match_generate_and_filter() {
    let got: BTreeSet<(u64, u64, u64)> = enumerate_types(&EnumerationBounds::tame_case4(12, 3))
        .unwrap()
        .filter(|t| t.fibres.len() == 3)
        .map(|t| (t.fibres[0].m, t.fibres[1].m, t.fibres[2].m))
        .collect();
    assert_eq!(got, tame_triples_oracle(12));
}

#[test]
fn wild_slice_matches_generate_and_filter() {
    // p = 2, g = 0, chi = 1, one wild fibre with t = 1 plus up to one tame fibre.
    let bounds = EnumerationBounds {
        max_mult: 8,
        max_fibres: 2,
        max_chi_plus_t: 2,
        characteristics: vec![2],
        include_quasi_elliptic: false,
        max_genus: 0,
        prune_dominated: false,
        ..EnumerationBounds::default()
    };
    let got: BTreeSet<String> = enumerate_types(&bounds)
        .unwrap()
        .filter(|t| t.chi == 1 && t.torsion_length() == 1)
        .map(|t| t.label())
        .collect();
    let p = Characteristic::new(2).unwrap();
    let mut want = BTreeSet::new();
    let mut wild = Vec::new();
    for (nu, e) in [(1, 1), (2, 1), (3, 1), (4, 1), (1, 2), (2, 2), (1, 3)] {
        let m = nu * 2u64.pow(e);
        for a in 0..m {
            wild.push(FibreDatum { m, a, nu, e, t: 1 });
        }
    }
    for w in &wild {
        let mut fibre_sets = vec![vec![*w]];
        for m in 2..=8 {
            fibre_sets.push(vec![*w, FibreDatum::tame(m).unwrap()]);
        }
        for fibres in fibre_sets {
            let ty = FibrationNumericalType::new(p, 0, 1, false, fibres).unwrap();
            if is_admissible(&ty).admissible {
                want.insert(ty.label());
            }
        }
    }
    assert_eq!(got, want);
}

#[test]
fn enumeration_order_is_canonical() {
    let bounds = EnumerationBounds {
        max_mult: 6,
        max_fibres: 3,
        max_chi_plus_t: 2,
        characteristics: vec![3, 0, 2],
        max_genus: 1,
        ..EnumerationBounds::default()
    };
    let types: Vec<FibrationNumericalType> = enumerate_types(&bounds).unwrap().collect();
    let key = |t: &FibrationNumericalType| {
        (
            t.p,
            t.g,
            t.chi,
            t.torsion_length(),
            t.fibres.len(),
            t.fibres.clone(),
            t.quasi_elliptic,
        )
    };
    assert!(types.windows(2).all(|w| key(&w[0]) < key(&w[1])));
    assert!(types
        .iter()
        .all(|t| t.torsion_length() <= 2 || t.fibres.iter().all(|f| f.t <= 2)));
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let bounds = EnumerationBounds {
        max_mult: 10,
        max_fibres: 4,
        max_chi_plus_t: 2,
        characteristics: vec![0, 2, 3],
        max_genus: 1,
        ..EnumerationBounds::default()
    };
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| verify_all(&bounds).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn pruning_agrees_with_full_enumeration() {
    let full = EnumerationBounds {
        max_mult: 12,
        max_fibres: 4,
        max_chi_plus_t: 2,
        characteristics: vec![0, 2, 3],
        max_genus: 1,
        prune_dominated: false,
        ..EnumerationBounds::default()
    };
    let pruned = EnumerationBounds {
        prune_dominated: true,
        ..full.clone()
    };
    let a = verify_all(&full).unwrap();
    let b = verify_all(&pruned).unwrap();
    assert_eq!(
        a.visited_types,
        enumerate_types(&full).unwrap().count() as u64
    );
    assert!(b.visited_types < a.visited_types);
    assert_eq!(a.counterexamples, b.counterexamples);
    assert_eq!(
        (a.extremes.max_first_nonzero, a.extremes.max_first_ge2),
        (b.extremes.max_first_nonzero, b.extremes.max_first_ge2)
    );
    assert_eq!(a.extremes.p13_at_most_one, b.extremes.p13_at_most_one);
    assert!(a.extremes.exact && b.extremes.exact);
    for pred in ["p123-zero", "pn-le-1-through-7", "p13-equals-1"] {
        assert_eq!(
            find_sharp_cases(&full, pred).unwrap(),
            find_sharp_cases(&pruned, pred).unwrap()
        );
    }
}

#[test]
fn tail_decision_matches_direct_series() {
    let bounds = EnumerationBounds {
        max_mult: 9,
        max_fibres: 4,
        max_chi_plus_t: 2,
        characteristics: vec![0, 2, 3],
        max_genus: 0,
        prune_dominated: false,
        ..EnumerationBounds::default()
    };
    for ty in enumerate_types(&bounds).unwrap().step_by(7) {
        for threshold in [1u64, 5, 11, 13, 14] {
            for target in [1u64, 2, 3] {
                let horizon = threshold + 2 * ty.period();
                let direct = (threshold..=horizon).all(|n| ty.plurigenus(n).value >= target);
                assert_eq!(
                    verify_tail(&ty, threshold, target),
                    direct,
                    "{ty} {threshold} {target}"
                );
            }
        }
    }
}

#[test]
fn pn_le_one_through_seven_contains_2_5_10() {
    let found =
        find_sharp_cases(&EnumerationBounds::tame_case4(20, 4), "pn-le-1-through-7").unwrap();
    assert!(found.iter().any(|t| t.label() == "(2,5,10)"));
    assert!(found
        .iter()
        .all(|t| (1..=7).all(|n| t.plurigenus(n).value <= 1)));
}
