//! Shared helpers for the integration and acceptance suites.

#![allow(dead_code)]

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sosi_core::engine::ValueTable;
use sosi_core::io::{generate_instance, GenSpec};
use sosi_core::rational::{rat, Rational};
use sosi_core::sched::{Coalition, Instance, Order, PlayerId};

/// The worked example: p=(3,1,1), w=(1,1,3), identity initial queue.
pub fn ex1() -> Instance {
    Instance::new(
        vec![rat(3), rat(1), rat(1)],
        vec![rat(1), rat(1), rat(3)],
        Order::identity(3),
    )
    .unwrap()
}

/// Seeded instance with integer p in [1,10] and w in [0,10].
pub fn rand_instance(n: usize, seed: u64) -> Instance {
    generate_instance(&GenSpec {
        n,
        seed,
        p_range: (1, 10),
        w_range: (0, 10),
    })
    .unwrap()
}

pub fn coalition(n: usize, members: &[usize]) -> Coalition {
    Coalition::from_players(n, members.iter().map(|&i| PlayerId(i))).unwrap()
}

pub fn order(seq: &[usize]) -> Order {
    Order::from_seq(seq.iter().map(|&i| PlayerId(i)).collect()).unwrap()
}

pub fn all_masks(n: usize) -> impl Iterator<Item = u64> {
    0u64..1 << n
}

/// Monotone supermodular table with f(empty) = 0, built as the
/// supermodular reflection of a weighted coverage function: a pool of
/// weighted ground elements, each requiring a nonempty player subset, and
/// f(S) totals the weights of elements whose subset lies inside S.
pub fn monotone_supermodular_table(n: usize, seed: u64) -> ValueTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements: Vec<(u64, Rational)> = (0..n + 3)
        .map(|_| {
            let subset = rng.gen_range(1u64..1 << n);
            (subset, rat(rng.gen_range(0..=10)))
        })
        .collect();
    let values = all_masks(n)
        .map(|mask| {
            elements
                .iter()
                .filter(|(req, _)| req & !mask == 0)
                .map(|(_, wt)| wt.clone())
                .sum()
        })
        .collect();
    ValueTable::from_values(n, values).unwrap()
}

pub fn table_map(
    a: &ValueTable,
    f: impl Fn(u64, &Rational) -> Rational,
) -> ValueTable {
    let values = a.iter().map(|(m, v)| f(m, v)).collect();
    ValueTable::from_values(a.n(), values).unwrap()
}

pub fn table_add(a: &ValueTable, b: &ValueTable) -> ValueTable {
    table_map(a, |m, v| v + b.value_of_mask(m))
}

pub fn table_shift(a: &ValueTable, c: &Rational) -> ValueTable {
    table_map(a, |_, v| v - c)
}

pub fn table_max(a: &ValueTable, b: &ValueTable) -> ValueTable {
    table_map(a, |m, v| v.clone().max(b.value_of_mask(m).clone()))
}

/// f_k(S) = max over prefixes r <= k of sum_{j<=r} g_j(S).
pub fn prefix_max_table(gs: &[ValueTable]) -> ValueTable {
    let n = gs[0].n();
    let mut running = ValueTable::from_values(n, vec![Rational::zero(); 1 << n]).unwrap();
    let mut best: Option<ValueTable> = None;
    for g in gs {
        running = table_add(&running, g);
        best = Some(match best {
            None => running.clone(),
            Some(b) => table_max(&b, &running),
        });
    }
    best.unwrap()
}

/// Random nonempty-or-empty coalition drawn uniformly from all subsets.
pub fn rand_coalition(n: usize, rng: &mut ChaCha8Rng) -> Coalition {
    Coalition::from_mask(n, rng.gen_range(0..1u64 << n))
}

/// Rearranges sigma0 by independently shuffling the members inside each
/// component of `s`, leaving all other positions untouched.
pub fn shuffle_within_components(
    inst: &Instance,
    s: &Coalition,
    rng: &mut ChaCha8Rng,
) -> Order {
    use rand::seq::SliceRandom;
    let mut seq: Vec<PlayerId> = inst.sigma0().seq().to_vec();
    for comp in sosi_core::sched::components(inst, s, inst.sigma0()) {
        let positions: Vec<usize> = comp
            .members
            .iter()
            .map(|&j| inst.sigma0().position(j))
            .collect();
        let mut members = comp.members.clone();
        members.shuffle(rng);
        for (&pos, &m) in positions.iter().zip(&members) {
            seq[pos] = m;
        }
    }
    Order::from_seq(seq).unwrap()
}

/// Replaces the initial queue of an instance.
pub fn with_sigma0(inst: &Instance, sigma0: Order) -> Instance {
    Instance::new(
        inst.processing_times().to_vec(),
        inst.weights().to_vec(),
        sigma0,
    )
    .unwrap()
}
