//! Instance files, validation, and seeded random generation.
//!
//! The on-disk format is a JSON object with keys `n` (integer), `p` and
//! `w` (arrays of rational strings matching `-?[0-9]+("/"[1-9][0-9]*)?`),
//! `sigma0` (array of 1-based player indices in queue order), and an
//! optional `name`. Rationals are kept as strings so no float ever
//! touches the data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, Rational};
use crate::sched::{Instance, Order, PlayerId};

/// The serialized form of an instance. Field order is the canonical
/// (alphabetical) key order of the file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: Vec<String>,
    pub sigma0: Vec<usize>,
    pub w: Vec<String>,
}

impl InstanceDocument {
    pub fn from_instance(inst: &Instance, name: Option<String>) -> Self {
        InstanceDocument {
            n: inst.n(),
            name,
            p: inst.processing_times().iter().map(format_rational).collect(),
            sigma0: inst.sigma0().seq().iter().map(|j| j.0 + 1).collect(),
            w: inst.weights().iter().map(format_rational).collect(),
        }
    }

    /// Validates all invariants and produces the in-memory instance.
    pub fn to_instance(&self) -> Result<Instance> {
        if self.p.len() != self.n {
            return Err(Error::LengthMismatch {
                field: "p",
                expected: self.n,
                actual: self.p.len(),
            });
        }
        if self.w.len() != self.n {
            return Err(Error::LengthMismatch {
                field: "w",
                expected: self.n,
                actual: self.w.len(),
            });
        }
        if self.sigma0.len() != self.n {
            return Err(Error::LengthMismatch {
                field: "sigma0",
                expected: self.n,
                actual: self.sigma0.len(),
            });
        }
        let p = self
            .p
            .iter()
            .map(|s| parse_rational("p", s))
            .collect::<Result<Vec<Rational>>>()?;
        let w = self
            .w
            .iter()
            .map(|s| parse_rational("w", s))
            .collect::<Result<Vec<Rational>>>()?;
        let seq = self
            .sigma0
            .iter()
            .map(|&i| {
                if i == 0 || i > self.n {
                    Err(Error::NotAPermutation {
                        field: "sigma0",
                        n: self.n,
                        reason: format!("index {i} out of range"),
                    })
                } else {
                    Ok(PlayerId(i - 1))
                }
            })
            .collect::<Result<Vec<PlayerId>>>()?;
        let sigma0 = Order::from_seq(seq).map_err(|e| match e {
            Error::DuplicatePlayer { player } => Error::NotAPermutation {
                field: "sigma0",
                n: self.n,
                reason: format!("index {} repeated", player + 1),
            },
            other => other,
        })?;
        Instance::new(p, w, sigma0)
    }
}

/// Parses and validates a JSON instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_document(text)?.to_instance()
}

pub fn parse_document(text: &str) -> Result<InstanceDocument> {
    Ok(serde_json::from_str(text)?)
}

/// Canonical serialization: fixed key order, lowest-terms rationals,
/// integers without a `/1` suffix. `parse_instance(write_instance(i)) == i`.
pub fn write_instance(inst: &Instance) -> String {
    write_document(&InstanceDocument::from_instance(inst, None))
}

pub fn write_document(doc: &InstanceDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
    text.push('\n');
    text
}

/// Parameters for seeded random instance generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub seed: u64,
    /// Inclusive bounds for integer processing times; lower bound >= 1.
    pub p_range: (i64, i64),
    /// Inclusive bounds for integer weights; lower bound >= 0.
    pub w_range: (i64, i64),
}

/// Draws integer processing times and weights uniformly from the spec's
/// ranges using ChaCha8 seeded with `spec.seed` (p first, then w, one
/// draw per player). sigma0 is the identity; callers who want a shuffled
/// initial queue apply their own permutation.
pub fn generate_instance(spec: &GenSpec) -> Result<Instance> {
    if spec.n < 1 {
        return Err(Error::InvalidGenSpec("n must be at least 1".into()));
    }
    let ((p_lo, p_hi), (w_lo, w_hi)) = (spec.p_range, spec.w_range);
    if p_lo < 1 || p_lo > p_hi {
        return Err(Error::InvalidGenSpec(format!(
            "processing-time range [{p_lo}, {p_hi}] must satisfy 1 <= lo <= hi"
        )));
    }
    if w_lo < 0 || w_lo > w_hi {
        return Err(Error::InvalidGenSpec(format!(
            "weight range [{w_lo}, {w_hi}] must satisfy 0 <= lo <= hi"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let p = (0..spec.n).map(|_| rat(rng.gen_range(p_lo..=p_hi))).collect();
    let w = (0..spec.n).map(|_| rat(rng.gen_range(w_lo..=w_hi))).collect();
    Instance::new(p, w, Order::identity(spec.n))
}
