//! Run reports: one JSON object per command, with a human rendering that
//! shows exactly the same rational strings.

use std::time::Instant;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use sosi_core::coop::{Allocation, Violation};
use sosi_core::engine::{GreedyTrace, ValueTable};
use sosi_core::rational::{format_rational, rat};
use sosi_core::sched::{self, Coalition, Instance, Order, PlayerId};

pub struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Timer(Instant::now())
    }
}

/// Key-value report; keys render in sorted (canonical) order.
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, instance_digest: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), command.into());
        if !instance_digest.is_empty() {
            fields.insert("instance_digest".into(), instance_digest.into());
        }
        Report { fields }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    pub fn finish(&mut self, timer: Timer) {
        let ms = timer.0.elapsed().as_secs_f64() * 1e3;
        self.set("timing_ms", format!("{ms:.3}").into());
    }

    pub fn print(&self, json: bool) {
        if json {
            println!(
                "{}",
                serde_json::to_string(&Value::Object(self.fields.clone())).unwrap()
            );
        } else {
            for (key, value) in &self.fields {
                println!("{key}: {}", render(value));
            }
        }
    }
}

fn render(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(render).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(map) => {
            let parts: Vec<String> = map
                .iter()
                .map(|(k, v)| format!("{k}={}", render(v)))
                .collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

/// SHA-256 of the canonical instance text.
pub fn digest(canonical_text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical_text.as_bytes());
    format!("{:x}", hasher.finalize())
}

pub fn coalition_json(s: &Coalition) -> Value {
    Value::Array(s.iter().map(|p| (p.0 + 1).into()).collect())
}

pub fn order_json(ord: &Order) -> Value {
    Value::Array(ord.seq().iter().map(|p| (p.0 + 1).into()).collect())
}

pub fn allocation_json(x: &Allocation) -> Value {
    Value::Array(
        x.payoffs
            .iter()
            .map(|r| format_rational(r).into())
            .collect(),
    )
}

pub fn table_json(table: &ValueTable) -> Value {
    Value::Array(
        table
            .iter()
            .map(|(mask, v)| {
                let s = Coalition::from_mask(table.n(), mask);
                json!({
                    "coalition": coalition_json(&s),
                    "mask": mask,
                    "value": format_rational(v),
                })
            })
            .collect(),
    )
}

pub fn trace_json(trace: &GreedyTrace) -> Value {
    Value::Array(
        trace
            .steps
            .iter()
            .map(|step| {
                json!({
                    "player": step.player.0 + 1,
                    "from_position": step.original_position + 1,
                    "to_position": step.chosen_position + 1,
                    "savings": format_rational(&step.savings),
                    "candidates": step
                        .candidate_savings
                        .iter()
                        .map(|(pos, s)| json!({
                            "position": pos + 1,
                            "savings": format_rational(s),
                        }))
                        .collect::<Vec<_>>(),
                    "order_after": order_json(&step.order_after),
                })
            })
            .collect(),
    )
}

pub fn phase(name: &str, pass: bool, detail: Option<String>) -> Value {
    let mut obj = Map::new();
    obj.insert("phase".into(), name.into());
    obj.insert("pass".into(), pass.into());
    if let Some(d) = detail {
        obj.insert("detail".into(), d.into());
    }
    Value::Object(obj)
}

pub fn skipped_phase(name: &str, reason: String) -> Value {
    let mut obj = Map::new();
    obj.insert("phase".into(), name.into());
    obj.insert("skipped".into(), true.into());
    obj.insert("detail".into(), reason.into());
    Value::Object(obj)
}

fn players_text(ps: impl IntoIterator<Item = PlayerId>) -> String {
    let parts: Vec<String> = ps.into_iter().map(|p| (p.0 + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn violation_text(v: &Violation) -> String {
    match v {
        Violation::Supermodularity { base, i, j, lhs, rhs } => format!(
            "supermodularity fails at S={}, i={}, j={}: {} < {}",
            players_text(base.iter()),
            i.0 + 1,
            j.0 + 1,
            format_rational(lhs),
            format_rational(rhs)
        ),
        Violation::SupermodularityPair { s, t, lhs, rhs } => format!(
            "supermodularity fails at S={}, T={}: {} < {}",
            players_text(s.iter()),
            players_text(t.iter()),
            format_rational(lhs),
            format_rational(rhs)
        ),
        Violation::Monotonicity { base, i, lower, higher } => format!(
            "monotonicity fails at S={}, i={}: {} > {}",
            players_text(base.iter()),
            i.0 + 1,
            format_rational(lower),
            format_rational(higher)
        ),
        Violation::Modularity { base, i, j, lhs, rhs } => format!(
            "modularity fails at S={}, i={}, j={}: {} != {}",
            players_text(base.iter()),
            i.0 + 1,
            j.0 + 1,
            format_rational(lhs),
            format_rational(rhs)
        ),
        Violation::CoreEfficiency { total, grand } => format!(
            "allocation total {} differs from v(N) = {}",
            format_rational(total),
            format_rational(grand)
        ),
        Violation::CoreCoalition { s, allocated, value } => format!(
            "coalition {} receives {} but is worth {}",
            players_text(s.iter()),
            format_rational(allocated),
            format_rational(value)
        ),
    }
}

pub fn violation_json(v: &Violation) -> Value {
    match v {
        Violation::CoreEfficiency { total, grand } => json!({
            "kind": "efficiency",
            "total": format_rational(total),
            "grand_value": format_rational(grand),
        }),
        Violation::CoreCoalition { s, allocated, value } => json!({
            "kind": "coalition",
            "coalition": coalition_json(s),
            "allocated": format_rational(allocated),
            "value": format_rational(value),
        }),
        other => json!({
            "kind": "other",
            "detail": violation_text(other),
        }),
    }
}

/// Perturbs one entry so every downstream check has something to catch.
pub fn corrupt_table(table: &ValueTable) -> ValueTable {
    let mut values: Vec<_> = table.iter().map(|(_, v)| v.clone()).collect();
    let last = values.len() - 1;
    values[last] = &values[last] + rat(-1);
    ValueTable::from_values(table.n(), values).unwrap()
}

/// Distinct-urgency members of the same sigma0-component must appear in
/// decreasing urgency in the greedy output.
pub fn smith_within_components(inst: &Instance, s: &Coalition, out: &Order) -> Option<String> {
    for comp in sched::components(inst, s, inst.sigma0()) {
        for (idx, &j) in comp.members.iter().enumerate() {
            for &k in &comp.members[idx + 1..] {
                let cmp = sched::urgency_cmp(inst, j, k);
                if cmp == std::cmp::Ordering::Equal {
                    continue;
                }
                let (hi, lo) = if cmp == std::cmp::Ordering::Greater {
                    (j, k)
                } else {
                    (k, j)
                };
                if out.position(hi) > out.position(lo) {
                    return Some(format!(
                        "players {} and {} share a component but violate Smith's rule",
                        j.0 + 1,
                        k.0 + 1
                    ));
                }
            }
        }
    }
    None
}

/// Deterministic pseudo-random coalition for benchmarking (splitmix64
/// over the member bits).
pub fn random_coalition(n: usize, seed: u64) -> Coalition {
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let mut s = Coalition::empty(n);
    for i in 0..n {
        if next() & 1 == 1 {
            s.insert(PlayerId(i));
        }
    }
    s
}
