//! Invariant tests for the cooperative-game analysis layer.

mod common;

use itertools::Itertools;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sosi_core::coop::{
    in_core, is_monotone, is_supermodular, is_supermodular_pairs, marginal_vector, shapley,
    Allocation,
};
use sosi_core::engine::{greedy_value, per_player_savings, value_table, TableMethod, ValueTable};
use sosi_core::rational::{rat, Rational};
use sosi_core::sched::{Coalition, Order, PlayerId};

use common::{
    all_masks, monotone_supermodular_table, prefix_max_table, rand_instance, table_add,
    table_max, table_shift,
};

/// Game tables built by the greedy algorithm are supermodular (convexity
/// of the SoSi game), checked by both the marginal and the pairwise form.
#[test]
fn sosi_tables_are_supermodular() {
    for seed in 0..40 {
        let n = 2 + (seed as usize % 5); // 2..=6
        let inst = rand_instance(n, seed);
        let table = value_table(&inst, TableMethod::Greedy).unwrap();
        assert!(is_supermodular(&table).is_ok(), "seed {seed}");
        if n <= 5 {
            assert!(is_supermodular_pairs(&table).is_ok(), "seed {seed}");
        }
    }
}

/// For supermodular games every marginal vector lies in the core, and so
/// does the Shapley value.
#[test]
fn marginal_vectors_and_shapley_lie_in_core() {
    for seed in 0..20 {
        let n = 2 + (seed as usize % 4); // 2..=5
        let inst = rand_instance(n, seed);
        let table = value_table(&inst, TableMethod::Greedy).unwrap();
        for seq in (0..n).map(PlayerId).permutations(n) {
            let perm = Order::from_seq(seq).unwrap();
            let x = marginal_vector(&table, &perm);
            assert_eq!(x.total(), *table.grand_value());
            assert!(in_core(&table, &x).unwrap().is_ok(), "seed {seed}");
        }
        assert!(in_core(&table, &shapley(&table)).unwrap().is_ok());
    }
}

/// The Shapley value is the exact average of all n! marginal vectors.
#[test]
fn shapley_equals_average_of_marginal_vectors() {
    for seed in 0..12 {
        let n = 2 + (seed as usize % 5); // 2..=6
        let inst = rand_instance(n, seed);
        let table = value_table(&inst, TableMethod::Greedy).unwrap();
        let mut sums = vec![Rational::zero(); n];
        let mut count = 0u64;
        for seq in (0..n).map(PlayerId).permutations(n) {
            let x = marginal_vector(&table, &Order::from_seq(seq).unwrap());
            for (sum, xi) in sums.iter_mut().zip(&x.payoffs) {
                *sum += xi;
            }
            count += 1;
        }
        let avg: Vec<Rational> = sums.into_iter().map(|s| s / rat(count as i64)).collect();
        assert_eq!(shapley(&table).payoffs, avg, "seed {seed}");
    }
}

/// The per-move greedy saving of a fixed player, as a set function of the
/// coalition (zero when the player is absent), is itself supermodular.
/// This is an empirical check; a counterexample would fail loudly with
/// its witness.
#[test]
fn per_player_step_savings_are_supermodular() {
    for seed in 0..40 {
        let n = 2 + (seed as usize % 5); // 2..=6
        let inst = rand_instance(n, seed);
        for i in 0..n {
            let player = PlayerId(i);
            let values = all_masks(n)
                .map(|mask| {
                    let s = Coalition::from_mask(n, mask);
                    if !s.contains(player) {
                        return Rational::zero();
                    }
                    let out = greedy_value(&inst, &s);
                    per_player_savings(&out.trace)[&player].clone()
                })
                .collect();
            let table = ValueTable::from_values(n, values).unwrap();
            if let Err(violation) = is_supermodular(&table) {
                panic!("seed {seed}, player {}: {violation:?}", i + 1);
            }
        }
    }
}

/// Lovász: for supermodular f, g with f - g monotone, max{f, g} is
/// supermodular. The generated pairs have f crossing g, so the max is a
/// genuine mix.
#[test]
fn pointwise_max_of_crossing_supermodular_pair() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for trial in 0..100u64 {
        let n = 2 + (trial as usize % 4); // 2..=5
        let g = monotone_supermodular_table(n, trial * 2);
        let d = monotone_supermodular_table(n, trial * 2 + 1);
        let shift = rat(rng.gen_range(0..=20));
        let f = table_shift(&table_add(&g, &d), &shift);
        assert!(is_supermodular(&f).is_ok());
        assert!(is_supermodular(&g).is_ok());
        assert!(is_monotone(&table_shift(&d, &shift)).is_ok());
        let m = table_max(&f, &g);
        assert!(is_supermodular(&m).is_ok(), "trial {trial}");
    }
}

/// Prefix-max construction over monotone supermodular summands stays
/// supermodular.
#[test]
fn prefix_max_construction_is_supermodular() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for trial in 0..100u64 {
        let n = 2 + (trial as usize % 4); // 2..=5
        let k = rng.gen_range(2..=5);
        let gs: Vec<ValueTable> = (0..k)
            .map(|j| {
                let g = monotone_supermodular_table(n, trial * 10 + j);
                let shift = rat(rng.gen_range(0..=15));
                table_shift(&g, &shift)
            })
            .collect();
        for g in &gs {
            assert!(is_supermodular(g).is_ok());
            assert!(is_monotone(g).is_ok());
        }
        let f = prefix_max_table(&gs);
        assert!(is_supermodular(&f).is_ok(), "trial {trial}");
    }
}

/// Core rejection carries a usable witness: the reported inequality
/// recomputes as false.
#[test]
fn core_witness_recomputes() {
    let inst = common::ex1();
    let table = value_table(&inst, TableMethod::Greedy).unwrap();
    let x = Allocation {
        payoffs: vec![rat(12), rat(0), rat(0)],
    };
    match in_core(&table, &x).unwrap() {
        Err(sosi_core::coop::Violation::CoreCoalition { s, allocated, value }) => {
            let recomputed: Rational = s.iter().map(|p| x.payoffs[p.0].clone()).sum();
            assert_eq!(recomputed, allocated);
            assert_eq!(value, *table.value(&s));
            assert!(allocated < value);
        }
        other => panic!("expected core violation, got {other:?}"),
    }
}
