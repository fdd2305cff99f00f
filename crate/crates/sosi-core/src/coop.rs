//! Cooperative-game analysis over value tables: supermodularity,
//! monotonicity and modularity checks with counterexample witnesses,
//! marginal vectors, the exact Shapley value, and core membership.

use num::bigint::BigInt;
use num::{One, Zero};

use crate::engine::ValueTable;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sched::{Coalition, Order, PlayerId};

/// A payoff vector over all players of a game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allocation {
    pub payoffs: Vec<Rational>,
}

impl Allocation {
    pub fn total(&self) -> Rational {
        self.payoffs.iter().sum()
    }
}

/// A concrete counterexample to one of the checked conditions, carrying
/// both sides of the failed inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// v(S+i+j) - v(S+j) < v(S+i) - v(S) for i,j outside S.
    Supermodularity {
        base: Coalition,
        i: PlayerId,
        j: PlayerId,
        lhs: Rational,
        rhs: Rational,
    },
    /// v(S u T) + v(S n T) < v(S) + v(T).
    SupermodularityPair {
        s: Coalition,
        t: Coalition,
        lhs: Rational,
        rhs: Rational,
    },
    /// v(S) > v(S+i).
    Monotonicity {
        base: Coalition,
        i: PlayerId,
        lower: Rational,
        higher: Rational,
    },
    /// Strict marginal inequality where modularity demands equality.
    Modularity {
        base: Coalition,
        i: PlayerId,
        j: PlayerId,
        lhs: Rational,
        rhs: Rational,
    },
    /// Allocation total differs from v(N).
    CoreEfficiency { total: Rational, grand: Rational },
    /// Some coalition receives less than its value.
    CoreCoalition {
        s: Coalition,
        allocated: Rational,
        value: Rational,
    },
}

/// Outcome of a verification check: `Ok(())` or the first violation, with
/// "first" meaning the smallest coalition bit pattern (then smallest
/// player indices).
pub type Verdict = std::result::Result<(), Violation>;

/// Checks supermodularity through the pairwise-marginal characterization:
/// v(S+i+j) - v(S+j) >= v(S+i) - v(S) for every S and distinct i,j not
/// in S. O(2^n n^2).
pub fn is_supermodular(f: &ValueTable) -> Verdict {
    let n = f.n();
    for mask in 0u64..1 << n {
        for i in 0..n {
            if mask >> i & 1 == 1 {
                continue;
            }
            for j in i + 1..n {
                if mask >> j & 1 == 1 {
                    continue;
                }
                let with_i = mask | 1 << i;
                let with_j = mask | 1 << j;
                let lhs = f.value_of_mask(with_i | with_j) - f.value_of_mask(with_j);
                let rhs = f.value_of_mask(with_i) - f.value_of_mask(mask);
                if lhs < rhs {
                    return Err(Violation::Supermodularity {
                        base: Coalition::from_mask(n, mask),
                        i: PlayerId(i),
                        j: PlayerId(j),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Direct check of v(S u T) + v(S n T) >= v(S) + v(T) over all 4^n
/// coalition pairs. Cross-check for small n only.
pub fn is_supermodular_pairs(f: &ValueTable) -> Verdict {
    let n = f.n();
    for s in 0u64..1 << n {
        for t in 0u64..1 << n {
            let lhs = f.value_of_mask(s | t) + f.value_of_mask(s & t);
            let rhs = f.value_of_mask(s) + f.value_of_mask(t);
            if lhs < rhs {
                return Err(Violation::SupermodularityPair {
                    s: Coalition::from_mask(n, s),
                    t: Coalition::from_mask(n, t),
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(())
}

/// Checks v(S) <= v(S+i) for every S and i outside S.
pub fn is_monotone(f: &ValueTable) -> Verdict {
    let n = f.n();
    for mask in 0u64..1 << n {
        for i in 0..n {
            if mask >> i & 1 == 1 {
                continue;
            }
            let lower = f.value_of_mask(mask);
            let higher = f.value_of_mask(mask | 1 << i);
            if lower > higher {
                return Err(Violation::Monotonicity {
                    base: Coalition::from_mask(n, mask),
                    i: PlayerId(i),
                    lower: lower.clone(),
                    higher: higher.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Checks that every pairwise marginal inequality holds with equality,
/// i.e. the table is additive up to a shift.
pub fn is_modular(f: &ValueTable) -> Verdict {
    let n = f.n();
    for mask in 0u64..1 << n {
        for i in 0..n {
            if mask >> i & 1 == 1 {
                continue;
            }
            for j in i + 1..n {
                if mask >> j & 1 == 1 {
                    continue;
                }
                let with_i = mask | 1 << i;
                let with_j = mask | 1 << j;
                let lhs = f.value_of_mask(with_i | with_j) - f.value_of_mask(with_j);
                let rhs = f.value_of_mask(with_i) - f.value_of_mask(mask);
                if lhs != rhs {
                    return Err(Violation::Modularity {
                        base: Coalition::from_mask(n, mask),
                        i: PlayerId(i),
                        j: PlayerId(j),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Marginal contribution of each player under the arrival order `perm`:
/// x_i = v(predecessors + i) - v(predecessors).
pub fn marginal_vector(f: &ValueTable, perm: &Order) -> Allocation {
    let n = f.n();
    assert_eq!(perm.len(), n, "permutation must cover all players");
    let mut payoffs = vec![Rational::zero(); n];
    let mut mask = 0u64;
    for &i in perm.seq() {
        let with_i = mask | 1 << i.0;
        payoffs[i.0] = f.value_of_mask(with_i) - f.value_of_mask(mask);
        mask = with_i;
    }
    Allocation { payoffs }
}

/// Exact Shapley value via the subset formula with big-integer factorial
/// weights: x_i = sum over S not containing i of
/// |S|! (n-|S|-1)! / n! * (v(S+i) - v(S)).
pub fn shapley(f: &ValueTable) -> Allocation {
    let n = f.n();
    let mut factorial = vec![BigInt::one(); n + 1];
    for k in 1..=n {
        factorial[k] = &factorial[k - 1] * BigInt::from(k);
    }
    let mut payoffs = vec![Rational::zero(); n];
    for mask in 0u64..1 << n {
        let size = mask.count_ones() as usize;
        for (i, payoff) in payoffs.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                continue;
            }
            let marginal = f.value_of_mask(mask | 1 << i) - f.value_of_mask(mask);
            let weight = Rational::new(
                &factorial[size] * &factorial[n - size - 1],
                factorial[n].clone(),
            );
            *payoff += marginal * weight;
        }
    }
    Allocation { payoffs }
}

/// Core membership: exact efficiency plus coalitional rationality
/// x(S) >= v(S) for all 2^n coalitions.
pub fn in_core(f: &ValueTable, x: &Allocation) -> Result<Verdict> {
    let n = f.n();
    if x.payoffs.len() != n {
        return Err(Error::LengthMismatch {
            field: "allocation",
            expected: n,
            actual: x.payoffs.len(),
        });
    }
    if x.total() != *f.grand_value() {
        return Ok(Err(Violation::CoreEfficiency {
            total: x.total(),
            grand: f.grand_value().clone(),
        }));
    }
    for mask in 0u64..1 << n {
        let allocated: Rational = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| x.payoffs[i].clone())
            .sum();
        let value = f.value_of_mask(mask);
        if allocated < *value {
            return Ok(Err(Violation::CoreCoalition {
                s: Coalition::from_mask(n, mask),
                allocated,
                value: value.clone(),
            }));
        }
    }
    Ok(Ok(()))
}
