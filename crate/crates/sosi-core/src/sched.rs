//! Scheduling primitives: instances, orders, coalitions, weighted
//! completion-time costs, urgencies and Smith's rule, the swap-saving
//! delta calculus, components, subgames, and order equivalence.
//!
//! Everything here is a pure function of immutable inputs and uses exact
//! rational arithmetic throughout.

use std::cmp::Ordering;

use num::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A player, identified by its 0-based index within an instance.
/// External interfaces (files, CLI) use 1-based indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PlayerId(pub usize);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A queue order: `seq[0]` is served first. Always a permutation of the
/// instance's players.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Order {
    seq: Vec<PlayerId>,
    pos: Vec<usize>,
}

impl Order {
    /// Builds an order from a queue sequence, validating that it is a
    /// permutation of `0..seq.len()`.
    pub fn from_seq(seq: Vec<PlayerId>) -> Result<Self> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &p) in seq.iter().enumerate() {
            if p.0 >= n {
                return Err(Error::PlayerOutOfRange { index: p.0, n });
            }
            if pos[p.0] != usize::MAX {
                return Err(Error::DuplicatePlayer { player: p.0 });
            }
            pos[p.0] = i;
        }
        Ok(Order { seq, pos })
    }

    pub fn identity(n: usize) -> Self {
        Order {
            seq: (0..n).map(PlayerId).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn seq(&self) -> &[PlayerId] {
        &self.seq
    }

    /// 0-based queue position of player `j`.
    pub fn position(&self, j: PlayerId) -> usize {
        self.pos[j.0]
    }

    pub fn player_at(&self, position: usize) -> PlayerId {
        self.seq[position]
    }

    /// Removes the player at `from` and reinserts it so that it ends up at
    /// position `to` (0-based), shifting the players in between.
    pub fn move_player(&mut self, from: usize, to: usize) {
        let p = self.seq.remove(from);
        self.seq.insert(to, p);
        for (i, &q) in self.seq.iter().enumerate() {
            self.pos[q.0] = i;
        }
    }
}

/// A coalition of players, stored as a bit-set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coalition {
    bits: Vec<u64>,
    n: usize,
}

impl Coalition {
    pub fn empty(n: usize) -> Self {
        Coalition {
            bits: vec![0; n.div_ceil(64).max(1)],
            n,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(PlayerId(i));
        }
        s
    }

    pub fn from_players(n: usize, players: impl IntoIterator<Item = PlayerId>) -> Result<Self> {
        let mut s = Self::empty(n);
        for p in players {
            if p.0 >= n {
                return Err(Error::PlayerOutOfRange { index: p.0, n });
            }
            if s.contains(p) {
                return Err(Error::DuplicatePlayer { player: p.0 });
            }
            s.insert(p);
        }
        Ok(s)
    }

    /// Decodes the low `n` bits of `mask` (bit `i` = player `i`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 64);
        let mut s = Self::empty(n);
        s.bits[0] = mask & mask_low(n);
        s
    }

    /// Bit-pattern encoding; only defined for n <= 64.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.n <= 64);
        self.bits[0]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, p: PlayerId) -> bool {
        self.bits[p.0 / 64] >> (p.0 % 64) & 1 == 1
    }

    pub fn insert(&mut self, p: PlayerId) {
        debug_assert!(p.0 < self.n);
        self.bits[p.0 / 64] |= 1 << (p.0 % 64);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = PlayerId> + '_ {
        (0..self.n).map(PlayerId).filter(|&p| self.contains(p))
    }

    pub fn is_subset_of(&self, other: &Coalition) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| a & !b == 0)
    }
}

fn mask_low(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A single-machine scheduling instance with an initial queue.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    p: Vec<Rational>,
    w: Vec<Rational>,
    sigma0: Order,
}

impl Instance {
    /// Validates `p > 0` and `w >= 0` entrywise and that `sigma0` is a
    /// permutation of the `p.len()` players.
    pub fn new(p: Vec<Rational>, w: Vec<Rational>, sigma0: Order) -> Result<Self> {
        use num::Signed;
        let n = p.len();
        if w.len() != n {
            return Err(Error::LengthMismatch {
                field: "w",
                expected: n,
                actual: w.len(),
            });
        }
        if sigma0.len() != n {
            return Err(Error::LengthMismatch {
                field: "sigma0",
                expected: n,
                actual: sigma0.len(),
            });
        }
        for (j, pj) in p.iter().enumerate() {
            if !pj.is_positive() {
                return Err(Error::NonPositiveProcessingTime {
                    player: j + 1,
                    value: crate::rational::format_rational(pj),
                });
            }
        }
        for (j, wj) in w.iter().enumerate() {
            if wj.is_negative() {
                return Err(Error::NegativeWeight {
                    player: j + 1,
                    value: crate::rational::format_rational(wj),
                });
            }
        }
        Ok(Instance { p, w, sigma0 })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.n()).map(PlayerId)
    }

    pub fn processing_time(&self, j: PlayerId) -> &Rational {
        &self.p[j.0]
    }

    pub fn weight(&self, j: PlayerId) -> &Rational {
        &self.w[j.0]
    }

    pub fn sigma0(&self) -> &Order {
        &self.sigma0
    }

    pub fn processing_times(&self) -> &[Rational] {
        &self.p
    }

    pub fn weights(&self) -> &[Rational] {
        &self.w
    }
}

/// A maximal set of coalition members occupying consecutive queue
/// positions under some reference order, listed in queue order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    pub members: Vec<PlayerId>,
}

/// Completion time of every player under `ord`: c_j is the sum of
/// processing times of all players served no later than j.
pub fn completion_times(inst: &Instance, ord: &Order) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); inst.n()];
    let mut elapsed = Rational::zero();
    for &j in ord.seq() {
        elapsed += inst.processing_time(j);
        c[j.0] = elapsed.clone();
    }
    c
}

/// Total weighted completion time of the members of `s` under `ord`.
pub fn coalition_cost(inst: &Instance, ord: &Order, s: &Coalition) -> Rational {
    let mut cost = Rational::zero();
    let mut elapsed = Rational::zero();
    for &j in ord.seq() {
        elapsed += inst.processing_time(j);
        if s.contains(j) {
            cost += inst.weight(j) * &elapsed;
        }
    }
    cost
}

/// Compares urgencies u_j = w_j/p_j and u_k = w_k/p_k exactly via
/// cross-multiplication.
pub fn urgency_cmp(inst: &Instance, j: PlayerId, k: PlayerId) -> Ordering {
    let lhs = inst.weight(j) * inst.processing_time(k);
    let rhs = inst.weight(k) * inst.processing_time(j);
    lhs.cmp(&rhs)
}

/// Order of decreasing urgency; ties keep their sigma0 relative order.
/// By Smith's rule this minimizes the total cost over all orders.
pub fn smith_order(inst: &Instance) -> Order {
    let mut seq: Vec<PlayerId> = inst.sigma0().seq().to_vec();
    seq.sort_by(|&a, &b| urgency_cmp(inst, b, a));
    Order::from_seq(seq).expect("permutation preserved by sort")
}

/// Cost decrease for coalition `s` from swapping adjacent players j
/// (directly before) and k: 1_S(k) p_j w_k - 1_S(j) p_k w_j.
pub fn delta_pair(inst: &Instance, s: &Coalition, j: PlayerId, k: PlayerId) -> Result<Rational> {
    if j == k {
        return Err(Error::DuplicatePlayer { player: j.0 });
    }
    let mut d = Rational::zero();
    if s.contains(k) {
        d += inst.processing_time(j) * inst.weight(k);
    }
    if s.contains(j) {
        d -= inst.processing_time(k) * inst.weight(j);
    }
    Ok(d)
}

/// Cost decrease for `s` from moving j from immediately before the
/// contiguous block `block` to immediately after it: the sum of the pair
/// deltas over the block. The reverse move decreases cost by the negation.
pub fn delta_block(
    inst: &Instance,
    s: &Coalition,
    j: PlayerId,
    block: &[PlayerId],
) -> Result<Rational> {
    if block.contains(&j) {
        return Err(Error::PlayerInBlock { player: j.0 });
    }
    let mut d = Rational::zero();
    for &k in block {
        d += delta_pair(inst, s, j, k)?;
    }
    Ok(d)
}

/// Partitions `s` into its maximal runs contiguous under `ord`, in queue
/// order.
pub fn components(inst: &Instance, s: &Coalition, ord: &Order) -> Vec<Component> {
    let _ = inst;
    let mut out = Vec::new();
    let mut current: Vec<PlayerId> = Vec::new();
    for &j in ord.seq() {
        if s.contains(j) {
            current.push(j);
        } else if !current.is_empty() {
            out.push(Component {
                members: std::mem::take(&mut current),
            });
        }
    }
    if !current.is_empty() {
        out.push(Component { members: current });
    }
    out
}

/// Restriction of the instance to the players of `t`, keeping their
/// processing times, weights, and relative initial order. Returns the new
/// instance together with the mapping from new player ids to original ones.
pub fn subgame(inst: &Instance, t: &Coalition) -> Result<(Instance, Vec<PlayerId>)> {
    if t.is_empty() {
        return Err(Error::EmptySubgame);
    }
    let old_ids: Vec<PlayerId> = t.iter().collect();
    let new_id = |old: PlayerId| PlayerId(old_ids.binary_search(&old).expect("member of t"));
    let p = old_ids
        .iter()
        .map(|&j| inst.processing_time(j).clone())
        .collect();
    let w = old_ids.iter().map(|&j| inst.weight(j).clone()).collect();
    let seq = inst
        .sigma0()
        .seq()
        .iter()
        .filter(|&&j| t.contains(j))
        .map(|&j| new_id(j))
        .collect();
    let sigma0 = Order::from_seq(seq)?;
    Ok((Instance::new(p, w, sigma0)?, old_ids))
}

/// True iff `b` is reachable from `a` by swapping adjacent members of `s`
/// with equal urgency. Decided structurally:
/// (i) every non-member occupies the same position in both orders,
/// (ii) every pair of members with unequal urgency keeps its relative order,
/// (iii) each maximal run of equal-urgency members occupying consecutive
///       positions holds the same player set in both orders.
pub fn orders_equivalent(inst: &Instance, s: &Coalition, a: &Order, b: &Order) -> bool {
    let n = inst.n();
    debug_assert_eq!(a.len(), n);
    debug_assert_eq!(b.len(), n);

    for j in inst.players() {
        if !s.contains(j) && a.position(j) != b.position(j) {
            return false;
        }
    }

    let members: Vec<PlayerId> = s.iter().collect();
    for (idx, &j) in members.iter().enumerate() {
        for &k in &members[idx + 1..] {
            if urgency_cmp(inst, j, k) != Ordering::Equal
                && (a.position(j) < a.position(k)) != (b.position(j) < b.position(k))
            {
                return false;
            }
        }
    }

    // maximal equal-urgency member runs of `a`, compared as sets against
    // the same position span in `b`
    let mut start = 0;
    while start < n {
        let first = a.player_at(start);
        if !s.contains(first) {
            start += 1;
            continue;
        }
        let mut end = start;
        while end + 1 < n {
            let next = a.player_at(end + 1);
            if s.contains(next) && urgency_cmp(inst, first, next) == Ordering::Equal {
                end += 1;
            } else {
                break;
            }
        }
        let mut span_a: Vec<PlayerId> = a.seq()[start..=end].to_vec();
        let mut span_b: Vec<PlayerId> = b.seq()[start..=end].to_vec();
        span_a.sort_unstable();
        span_b.sort_unstable();
        if span_a != span_b {
            return false;
        }
        start = end + 1;
    }
    true
}
