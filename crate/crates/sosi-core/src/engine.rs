//! The Step out-Step in game proper: admissible orders, the greedy
//! coalition-value algorithm with a full per-move trace, a brute-force
//! oracle over all admissible orders, and characteristic-function tables.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sched::{coalition_cost, delta_pair, Coalition, Instance, Order, PlayerId};

/// Largest n for which the brute-force oracle will enumerate all n!
/// permutations by default.
pub const DEFAULT_ORACLE_BOUND: usize = 9;

/// Largest n for which complete 2^n value tables are built.
pub const TABLE_BOUND: usize = 20;

/// One greedy move record. Positions are 0-based queue indices.
#[derive(Clone, Debug)]
pub struct GreedyStep {
    pub player: PlayerId,
    pub original_position: usize,
    /// Earliest position attaining the maximum savings; equals
    /// `original_position` when no strictly improving move exists.
    pub chosen_position: usize,
    /// max(0, best candidate savings)
    pub savings: Rational,
    /// Savings for every candidate target position, in scan order.
    pub candidate_savings: Vec<(usize, Rational)>,
    pub order_before: Order,
    pub order_after: Order,
}

/// Complete record of a greedy run: members of the coalition from latest
/// to earliest under sigma0, one step each. The step savings sum to the
/// coalition value.
#[derive(Clone, Debug, Default)]
pub struct GreedyTrace {
    pub steps: Vec<GreedyStep>,
}

/// Result of the greedy algorithm on one coalition.
#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    pub value: Rational,
    pub final_order: Order,
    pub trace: GreedyTrace,
}

/// Result of the brute-force oracle on one coalition.
#[derive(Clone, Debug)]
pub struct BruteForceOutcome {
    pub value: Rational,
    /// Lexicographically least cost-minimizing admissible order.
    pub optimal_order: Order,
}

/// The characteristic function of an instance, materialized densely over
/// all 2^n coalitions and indexed by bit pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    n: usize,
    values: Vec<Rational>,
}

impl ValueTable {
    /// Builds a table from a per-coalition function, evaluated on every
    /// bit pattern in increasing order.
    pub fn build(n: usize, f: impl Fn(&Coalition) -> Rational + Sync) -> Result<Self> {
        if n > TABLE_BOUND {
            return Err(Error::SizeLimit {
                what: "value table",
                limit: TABLE_BOUND,
                actual: n,
            });
        }
        let values: Vec<Rational> = (0u64..1 << n)
            .into_par_iter()
            .map(|mask| f(&Coalition::from_mask(n, mask)))
            .collect();
        Ok(ValueTable { n, values })
    }

    pub fn from_values(n: usize, values: Vec<Rational>) -> Result<Self> {
        if n > TABLE_BOUND {
            return Err(Error::SizeLimit {
                what: "value table",
                limit: TABLE_BOUND,
                actual: n,
            });
        }
        assert_eq!(values.len(), 1 << n, "table must cover all 2^n coalitions");
        Ok(ValueTable { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value_of_mask(&self, mask: u64) -> &Rational {
        &self.values[mask as usize]
    }

    pub fn value(&self, s: &Coalition) -> &Rational {
        self.value_of_mask(s.mask())
    }

    pub fn grand_value(&self) -> &Rational {
        &self.values[self.values.len() - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.values.iter().enumerate().map(|(m, v)| (m as u64, v))
    }
}

/// How a value table is populated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMethod {
    Greedy,
    Brute { oracle_bound: usize },
}

/// True iff `ord` is admissible for coalition `s`: every non-member keeps
/// its precedence over all players initially behind it.
pub fn is_admissible(inst: &Instance, s: &Coalition, ord: &Order) -> bool {
    let sigma0 = inst.sigma0();
    for i in inst.players() {
        if s.contains(i) {
            continue;
        }
        for j in inst.players() {
            if sigma0.position(i) <= sigma0.position(j) && ord.position(i) > ord.position(j) {
                return false;
            }
        }
    }
    true
}

/// Yields every admissible order for `s`, each exactly once, in
/// lexicographic order of the queue sequence. Enumerates all n!
/// permutations, so n is capped by `oracle_bound`.
pub fn enumerate_admissible<'a>(
    inst: &'a Instance,
    s: &'a Coalition,
    oracle_bound: usize,
) -> Result<impl Iterator<Item = Order> + 'a> {
    let n = inst.n();
    if n > oracle_bound {
        return Err(Error::SizeLimit {
            what: "admissible-order enumeration",
            limit: oracle_bound,
            actual: n,
        });
    }
    Ok((0..n)
        .map(PlayerId)
        .permutations(n)
        .map(|seq| Order::from_seq(seq).expect("permutation"))
        .filter(move |ord| is_admissible(inst, s, ord)))
}

/// The greedy algorithm: considers the members of `s` from latest to
/// earliest under sigma0 and moves each to the later position with the
/// greatest strictly positive coalition savings, breaking ties toward the
/// earliest such position. Returns the total savings, the final order,
/// and the per-move trace.
pub fn greedy_value(inst: &Instance, s: &Coalition) -> GreedyOutcome {
    greedy_run(inst, s, true)
}

/// Same algorithm without per-move records; use for tables and large n.
pub fn greedy_value_untraced(inst: &Instance, s: &Coalition) -> (Rational, Order) {
    let out = greedy_run(inst, s, false);
    (out.value, out.final_order)
}

fn greedy_run(inst: &Instance, s: &Coalition, record: bool) -> GreedyOutcome {
    let n = inst.n();
    let mut order = inst.sigma0().clone();
    let mut trace = GreedyTrace::default();
    let mut value = Rational::zero();

    let mut members: Vec<PlayerId> = s.iter().collect();
    members.sort_by_key(|&j| std::cmp::Reverse(inst.sigma0().position(j)));

    for i in members {
        let pos = order.position(i);
        let order_before = record.then(|| order.clone());

        // cumulative savings of stepping past each successive suffix player
        let mut candidates = Vec::new();
        let mut running = Rational::zero();
        let mut best = Rational::zero();
        let mut best_pos = pos;
        for target in pos + 1..n {
            let k = order.player_at(target);
            running += delta_pair(inst, s, i, k).expect("i moved past itself");
            if running > best {
                best = running.clone();
                best_pos = target;
            }
            if record {
                candidates.push((target, running.clone()));
            }
        }

        if best_pos != pos {
            order.move_player(pos, best_pos);
        }
        value += &best;
        if let Some(order_before) = order_before {
            trace.steps.push(GreedyStep {
                player: i,
                original_position: pos,
                chosen_position: best_pos,
                savings: best,
                candidate_savings: candidates,
                order_before,
                order_after: order.clone(),
            });
        }
    }

    GreedyOutcome {
        value,
        final_order: order,
        trace,
    }
}

/// Oracle definition of the coalition value: initial coalition cost minus
/// the minimum over all admissible orders. Exponential; use for
/// verification only.
pub fn brute_force_value(
    inst: &Instance,
    s: &Coalition,
    oracle_bound: usize,
) -> Result<BruteForceOutcome> {
    let base = coalition_cost(inst, inst.sigma0(), s);
    let mut best: Option<(Rational, Order)> = None;
    for ord in enumerate_admissible(inst, s, oracle_bound)? {
        let cost = coalition_cost(inst, &ord, s);
        match &best {
            // lexicographic enumeration makes the first minimizer the
            // lexicographically least one
            Some((c, _)) if cost >= *c => {}
            _ => best = Some((cost, ord)),
        }
    }
    let (min_cost, optimal_order) = best.expect("sigma0 is always admissible");
    Ok(BruteForceOutcome {
        value: base - min_cost,
        optimal_order,
    })
}

/// Materializes v over all 2^n coalitions. Coalitions are evaluated in
/// parallel and merged by bit pattern, so the result is deterministic.
pub fn value_table(inst: &Instance, method: TableMethod) -> Result<ValueTable> {
    match method {
        TableMethod::Greedy => {
            ValueTable::build(inst.n(), |s| greedy_value_untraced(inst, s).0)
        }
        TableMethod::Brute { oracle_bound } => {
            if inst.n() > oracle_bound {
                return Err(Error::SizeLimit {
                    what: "brute-force value table",
                    limit: oracle_bound,
                    actual: inst.n(),
                });
            }
            ValueTable::build(inst.n(), |s| {
                brute_force_value(inst, s, oracle_bound)
                    .expect("bound checked above")
                    .value
            })
        }
    }
}

/// Cost saving obtained by each member's greedy move, keyed by player.
/// The savings sum to the coalition value.
pub fn per_player_savings(trace: &GreedyTrace) -> BTreeMap<PlayerId, Rational> {
    trace
        .steps
        .iter()
        .map(|step| (step.player, step.savings.clone()))
        .collect()
}
