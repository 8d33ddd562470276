//! Idealized quantum-time accounting.
//!
//! Searches execute classically; this module only decides what they would
//! cost. A [`Cost`] keeps its *square* exactly where it can, because variable
//! time search combines item costs as `√(Σ tᵢ²)`: squares add exactly, roots
//! do not. The root is materialized as `f64` for reporting.
//!
//! Two flavours exist for Grover-type costs:
//! - [`grover_cost`] / [`threshold_grover_cost`] return the integer iteration
//!   counts `⌈√N⌉·t` and `⌈√(ΔN)⌉`;
//! - [`grover_search_cost`] / [`threshold_search_cost`] return `√N·t` and
//!   `√(ΔN)` as exact-square costs. The triangle algorithms charge these, so
//!   that variable time search over colour triples telescopes exactly.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};

/// Default matrix-multiplication exponent charged by the model.
pub const OMEGA_DEFAULT: f64 = 2.3728;

#[derive(Clone, Debug, PartialEq)]
enum Square {
    Exact(BigRational),
    Approx(f64),
}

/// A nonnegative cost, held through its square.
#[derive(Clone, Debug, PartialEq)]
pub struct Cost {
    sq: Square,
}

fn rat(x: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl Cost {
    pub fn zero() -> Self {
        Self {
            sq: Square::Exact(BigRational::zero()),
        }
    }

    pub fn from_integer(x: u64) -> Self {
        Self::from_rational(&rat(x as u128))
    }

    /// Cost equal to `r` (`r >= 0`).
    pub fn from_rational(r: &BigRational) -> Self {
        Self {
            sq: Square::Exact(r * r),
        }
    }

    /// Cost equal to `√sq`, with `sq` kept exactly.
    pub fn sqrt_of(sq: BigRational) -> Self {
        Self {
            sq: Square::Exact(sq),
        }
    }

    /// Cost known only as a float (e.g. `s^ω` for non-integer `ω`).
    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0 && x.is_finite(), "cost must be finite and nonnegative");
        Self {
            sq: Square::Approx(x * x),
        }
    }

    pub fn value(&self) -> f64 {
        match &self.sq {
            Square::Exact(r) => r.to_f64().unwrap_or(f64::INFINITY).sqrt(),
            Square::Approx(x) => x.sqrt(),
        }
    }

    pub fn exact_square(&self) -> Option<&BigRational> {
        match &self.sq {
            Square::Exact(r) => Some(r),
            Square::Approx(_) => None,
        }
    }

    pub fn square_f64(&self) -> f64 {
        match &self.sq {
            Square::Exact(r) => r.to_f64().unwrap_or(f64::INFINITY),
            Square::Approx(x) => *x,
        }
    }

    /// `k · self` for an integer `k`.
    pub fn scaled(&self, k: u64) -> Cost {
        let k2 = rat(k as u128 * k as u128);
        Cost {
            sq: match &self.sq {
                Square::Exact(r) => Square::Exact(r * k2),
                Square::Approx(x) => Square::Approx(x * (k as f64) * (k as f64)),
            },
        }
    }
}

/// `⌈√x⌉` on integers.
pub fn ceil_sqrt(x: u128) -> u128 {
    let r = x.sqrt();
    if r * r == x {
        r
    } else {
        r + 1
    }
}

/// `⌈log₂ n⌉`, with `⌈log₂ 1⌉ = 0`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Plain Grover search over `n` items at `t_eval` per evaluation:
/// `⌈√n⌉ · t_eval`.
pub fn grover_cost(n: u64, t_eval: &BigRational) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    Ok(rat(ceil_sqrt(n as u128)) * t_eval)
}

/// `√n · t_eval`, exact in the square.
pub fn grover_search_cost(n: u64, t_eval: &BigRational) -> Result<Cost> {
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    Ok(Cost::sqrt_of(rat(n as u128) * t_eval * t_eval))
}

/// Threshold search ("at least `delta` of `n` marked"): `⌈√(delta·n)⌉`.
pub fn threshold_grover_cost(n: u64, delta: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    if delta == 0 {
        return Err(Error::InvalidDelta { delta, n: n as usize });
    }
    Ok(ceil_sqrt(delta as u128 * n as u128) as u64)
}

/// `√(delta·n)`, exact in the square. An empty candidate set costs nothing.
pub fn threshold_search_cost(n: u64, delta: u64) -> Result<Cost> {
    if delta == 0 {
        return Err(Error::InvalidDelta { delta, n: n as usize });
    }
    Ok(Cost::sqrt_of(rat(delta as u128 * n as u128)))
}

/// Variable time search charge: `√(Σ tᵢ²)`.
pub fn vtgs_cost(costs: &[Cost]) -> Result<Cost> {
    if costs.is_empty() {
        return Err(Error::EmptyDomain);
    }
    Ok(sum_squares(costs.iter()))
}

fn sum_squares<'a>(costs: impl Iterator<Item = &'a Cost>) -> Cost {
    let mut exact = BigRational::zero();
    let mut approx = 0.0;
    let mut all_exact = true;
    for c in costs {
        match &c.sq {
            Square::Exact(r) => exact += r,
            Square::Approx(x) => {
                all_exact = false;
                approx += x;
            }
        }
    }
    if all_exact {
        Cost {
            sq: Square::Exact(exact),
        }
    } else {
        Cost {
            sq: Square::Approx(exact.to_f64().unwrap_or(f64::INFINITY) + approx),
        }
    }
}

/// Result of a classically executed variable time search.
#[derive(Clone, Debug, PartialEq)]
pub struct VtgsOutcome {
    /// Smallest index whose predicate holds.
    pub witness: Option<usize>,
    /// `√(Σ tᵢ²)` over the whole domain.
    pub cost: Cost,
    pub item_costs: Vec<Cost>,
}

/// Evaluates every index of `[0, domain)`, returning the smallest witness and
/// the variable time search charge over all per-index costs. The charge does
/// not depend on where (or whether) a witness exists.
pub fn vtgs_execute<F>(domain: usize, mut evaluator: F) -> Result<VtgsOutcome>
where
    F: FnMut(usize) -> Result<(bool, Cost)>,
{
    if domain == 0 {
        return Err(Error::EmptyDomain);
    }
    let mut witness = None;
    let mut item_costs = Vec::with_capacity(domain);
    for i in 0..domain {
        let (hit, cost) = evaluator(i).map_err(|e| Error::Evaluator {
            index: i,
            source: Box::new(e),
        })?;
        if hit && witness.is_none() {
            witness = Some(i);
        }
        item_costs.push(cost);
    }
    Ok(VtgsOutcome {
        witness,
        cost: sum_squares(item_costs.iter()),
        item_costs,
    })
}

/// Model parameters shared by everything charged to a ledger.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostModel {
    pub omega_model: f64,
    /// Multiply every charge by [`boost_factor`] of the instance size.
    pub boost_enabled: bool,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            omega_model: OMEGA_DEFAULT,
            boost_enabled: false,
        }
    }
}

/// `⌈log₂ n⌉ · ⌈log₂ log₂ max(n, 4)⌉`, floored at 1.
pub fn boost_factor(n: u64) -> u64 {
    let m = n.max(4) as u128;
    // ⌈log₂ log₂ m⌉ = least k with 2^(2^k) >= m.
    let mut k = 0u32;
    while (1u128 << (1u32 << k).min(127)) < m {
        k += 1;
    }
    (ceil_log2(n) as u64 * k as u64).max(1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEvent {
    pub label: String,
    pub cost: Cost,
}

/// Accumulator of modelled time units.
///
/// The total is kept as the exact rational sum of the (float) event costs, so
/// it does not depend on the order in which events or merged ledgers arrive.
#[derive(Clone, Debug, PartialEq)]
pub struct CostLedger {
    model: CostModel,
    total: BigRational,
    events: Vec<LedgerEvent>,
}

impl CostLedger {
    pub fn new(model: CostModel) -> Self {
        Self {
            model,
            total: BigRational::zero(),
            events: Vec::new(),
        }
    }

    pub fn model(&self) -> CostModel {
        self.model
    }

    /// Records `cost` for a subroutine run on an instance of size `n`,
    /// applying the boost multiplier when enabled. Returns the charged cost.
    pub fn charge(&mut self, label: &str, cost: Cost, n: u64) -> Cost {
        let charged = if self.model.boost_enabled {
            cost.scaled(boost_factor(n))
        } else {
            cost
        };
        self.total += BigRational::from_float(charged.value()).unwrap_or_else(BigRational::zero);
        self.events.push(LedgerEvent {
            label: label.to_string(),
            cost: charged.clone(),
        });
        charged
    }

    pub fn total(&self) -> f64 {
        self.total.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn total_exact(&self) -> &BigRational {
        &self.total
    }

    pub fn events(&self) -> &[LedgerEvent] {
        &self.events
    }

    /// Sum of the costs of events carrying `label`.
    pub fn total_for(&self, label: &str) -> f64 {
        self.events
            .iter()
            .filter(|e| e.label == label)
            .map(|e| e.cost.value())
            .sum()
    }

    /// Exact `Σ cost²` over events, when every event has an exact square.
    pub fn total_sq_exact(&self) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for e in &self.events {
            acc += e.cost.exact_square()?;
        }
        Some(acc)
    }

    /// Concatenates event logs and adds totals.
    pub fn merge(&mut self, other: &CostLedger) {
        self.total += &other.total;
        self.events.extend(other.events.iter().cloned());
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "total": self.total(),
            "total_sq_exact": self
                .total_sq_exact()
                .map_or_else(|| "inexact".to_string(), |r| r.to_string()),
            "omega_model": self.model.omega_model,
            "boost": self.model.boost_enabled,
            "events": self
                .events
                .iter()
                .map(|e| json!([e.label, e.cost.value()]))
                .collect::<Vec<_>>(),
        })
    }
}

impl Default for CostLedger {
    fn default() -> Self {
        Self::new(CostModel::default())
    }
}

/// Shorthand for a unit rational.
pub fn unit() -> BigRational {
    BigRational::one()
}
