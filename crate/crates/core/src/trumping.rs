//! Trumping decision via the Klimesh–Turgut criterion: strict positivity of
//! every Rényi entropy gap (α ≠ 0) plus the Burg gap.
//!
//! The universal quantifier over α is checked on a finite grid with symbolic
//! limit tags plus an automatic bisection refinement around the minimal gap.
//! The verdict is honest about this being a semi-decision: `fails` is sound
//! (a single nonpositive gap refutes trumping), `holds` means every gap
//! cleared the margin, and `inconclusive` records a positive but sub-margin
//! minimum.

use crate::dist::Dist;
use crate::entropy::{entropy_gap_pmf, EntropyGap, Order};
use crate::error::{Error, Result};
use crate::real::Precision;
use crate::runs::Pmf;

/// The finite stand-in for "for all α ∈ ℝ \ {0}".
#[derive(Debug, Clone)]
pub struct AlphaGrid {
    /// Sorted, nonzero finite orders (1 is carried by `include_one`).
    pub finite_points: Vec<f64>,
    pub include_plus_inf: bool,
    pub include_minus_inf: bool,
    pub include_one: bool,
    pub include_zero_plus: bool,
    pub include_burg: bool,
    /// Margin (nats) below which a positive minimum is inconclusive.
    pub margin_tol: f64,
    /// Bisection passes around the minimal-gap α before giving up.
    pub refine_depth: u32,
}

impl Default for AlphaGrid {
    fn default() -> Self {
        let mut pts = Vec::new();
        for k in -20..=6 {
            let v = 2f64.powi(k);
            pts.push(v);
            pts.push(-v);
        }
        for j in 1..=20 {
            let v = 2f64.powi(-j);
            pts.push(1.0 + v);
            pts.push(1.0 - v);
        }
        pts.retain(|&a| a != 0.0 && a != 1.0);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        Self {
            finite_points: pts,
            include_plus_inf: true,
            include_minus_inf: true,
            include_one: true,
            include_zero_plus: true,
            include_burg: true,
            margin_tol: 1e-9,
            refine_depth: 30,
        }
    }
}

impl AlphaGrid {
    pub fn orders(&self) -> Vec<Order> {
        let mut orders = Vec::new();
        if self.include_minus_inf {
            orders.push(Order::MinusInfinity);
        }
        if self.include_zero_plus {
            orders.push(Order::ZeroPlus);
        }
        if self.include_one {
            orders.push(Order::One);
        }
        if self.include_plus_inf {
            orders.push(Order::PlusInfinity);
        }
        if self.include_burg {
            orders.push(Order::Burg);
        }
        for &a in &self.finite_points {
            if let Ok(o) = Order::finite(a) {
                orders.push(o);
            }
        }
        orders.sort_by(|a, b| a.sort_key().partial_cmp(&b.sort_key()).unwrap());
        orders
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrumpStatus {
    Holds,
    Fails,
    Inconclusive,
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct AlphaCheck {
    pub order: Order,
    pub gap: f64,
    pub degenerate: bool,
    /// Limit tags (±∞, 0+) enter the criterion non-strictly: a zero
    /// gap there does not refute, it is just excluded from the margin.
    pub strict: bool,
}

#[derive(Debug, Clone)]
pub struct TrumpingVerdict {
    pub status: TrumpStatus,
    pub witness_alpha: Option<Order>,
    /// Smallest positive gap over all strict checks (nats).
    pub min_margin: f64,
    pub checks: Vec<AlphaCheck>,
}

fn is_strict(ord: Order) -> bool {
    !matches!(ord, Order::PlusInfinity | Order::MinusInfinity | Order::ZeroPlus)
}

/// Gap check at one order with exact sign handling for the limit tags.
fn check_at(p: &Pmf, q: &Pmf, ord: Order, prec: Precision) -> AlphaCheck {
    // the symbolic tags admit exact sign decisions on the rationals
    let exact_sign: Option<std::cmp::Ordering> = match ord {
        Order::ZeroPlus => Some(q.rank().cmp(&p.rank())),
        Order::PlusInfinity => Some(p.max_value().cmp(q.max_value())),
        Order::MinusInfinity => Some(q.min_value().cmp(p.min_value())),
        _ => None,
    };
    let EntropyGap { value, degenerate } = entropy_gap_pmf(p, q, ord, prec);
    let mut gap = value.to_f64();
    if let Some(sign) = exact_sign {
        // snap tiny float noise to the exact sign
        match sign {
            std::cmp::Ordering::Equal => gap = 0.0,
            std::cmp::Ordering::Less if gap >= 0.0 => gap = -f64::EPSILON,
            std::cmp::Ordering::Greater if gap <= 0.0 => gap = f64::EPSILON,
            _ => {}
        }
    }
    let _ = value;
    AlphaCheck { order: ord, gap, degenerate, strict: is_strict(ord) }
}

fn fails_at(c: &AlphaCheck) -> bool {
    if c.strict {
        c.gap <= 0.0
    } else {
        c.gap < 0.0
    }
}

/// Decide `p ≻_T q` on the given grid.
///
/// Preconditions (Klimesh–Turgut hypotheses): equal dimension, `p↓ ≠ q↓`,
/// at least one of the two has full rank. Callers comparing rank-deficient
/// pairs route through `strip_common_zeros` first.
pub fn trumps(p: &Dist, q: &Dist, grid: &AlphaGrid, prec: Precision) -> Result<TrumpingVerdict> {
    if p.dim() != q.dim() {
        return Err(Error::DimMismatch(p.dim(), q.dim()));
    }
    if p.sort_desc() == q.sort_desc() {
        return Err(Error::IdenticalUpToPermutation);
    }
    if !p.is_full_rank() && !q.is_full_rank() {
        return Err(Error::NeitherFullRank);
    }
    trumps_pmf(&Pmf::from_dist(p), &Pmf::from_dist(q), grid, prec)
}

/// Run-encoded core of [`trumps`]; preconditions are the caller's burden.
pub fn trumps_pmf(p: &Pmf, q: &Pmf, grid: &AlphaGrid, prec: Precision) -> Result<TrumpingVerdict> {
    let mut checks: Vec<AlphaCheck> =
        grid.orders().iter().map(|&o| check_at(p, q, o, prec)).collect();

    // refinement: bisect around the strict minimal-gap α among the finite
    // points (including 1), hunting for a sign change the grid missed
    for _ in 0..grid.refine_depth {
        if checks.iter().any(fails_at) {
            break;
        }
        let mut finite: Vec<(f64, f64)> = checks
            .iter()
            .filter_map(|c| match c.order {
                Order::Finite(a) => Some((a, c.gap)),
                Order::One => Some((1.0, c.gap)),
                _ => None,
            })
            .collect();
        finite.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let Some(min_idx) = finite
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
            .map(|(i, _)| i)
        else {
            break;
        };
        if finite[min_idx].1 > grid.margin_tol {
            break;
        }
        let mut added = false;
        for nb in [min_idx.wrapping_sub(1), min_idx + 1] {
            if nb >= finite.len() {
                continue;
            }
            let mid = (finite[min_idx].0 + finite[nb].0) / 2.0;
            if mid == 0.0 || mid == 1.0 {
                continue;
            }
            if finite.iter().any(|(a, _)| *a == mid) {
                continue;
            }
            if let Ok(ord) = Order::finite(mid) {
                checks.push(check_at(p, q, ord, prec));
                added = true;
            }
        }
        if !added {
            break;
        }
    }

    checks.sort_by(|a, b| a.order.sort_key().partial_cmp(&b.order.sort_key()).unwrap());

    let min_margin = checks
        .iter()
        .filter(|c| c.gap > 0.0)
        .map(|c| c.gap)
        .fold(f64::INFINITY, f64::min);

    let failing: Vec<&AlphaCheck> = checks.iter().filter(|c| fails_at(c)).collect();
    if !failing.is_empty() {
        // deterministic witness: most negative gap, ties by smallest α
        let w = failing
            .iter()
            .min_by(|a, b| {
                (a.gap, a.order.sort_key())
                    .partial_cmp(&(b.gap, b.order.sort_key()))
                    .unwrap()
            })
            .unwrap();
        return Ok(TrumpingVerdict {
            status: TrumpStatus::Fails,
            witness_alpha: Some(w.order),
            min_margin,
            checks: checks.clone(),
        });
    }

    let status = if checks.iter().filter(|c| c.strict || c.gap > 0.0).all(|c| c.gap > grid.margin_tol)
    {
        TrumpStatus::Holds
    } else {
        TrumpStatus::Inconclusive
    };
    Ok(TrumpingVerdict { status, witness_alpha: None, min_margin, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(entries: &[&str]) -> Dist {
        Dist::parse(entries).unwrap()
    }

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn reference_pair_fails_below_one() {
        let p = d(&["91/100", "1/20", "1/25"]);
        let q = d(&["17/20", "7/50", "1/100"]);
        let v = trumps(&p, &q, &AlphaGrid::default(), prec()).unwrap();
        assert_eq!(v.status, TrumpStatus::Fails);
        let w = v.witness_alpha.unwrap();
        assert!(w.sort_key() < Order::One.sort_key(), "witness {w:?} should be below 1");
        // all gaps at α ≥ 1 are strictly positive
        for c in &v.checks {
            if c.order.sort_key() >= Order::One.sort_key() && c.order != Order::Burg {
                assert!(c.gap > 0.0, "α = {:?} gap {}", c.order, c.gap);
            }
        }
    }

    #[test]
    fn uniform_target_holds() {
        let p = d(&["91/100", "1/20", "1/25"]);
        let v = trumps(&p, &Dist::uniform(3), &AlphaGrid::default(), prec()).unwrap();
        assert_eq!(v.status, TrumpStatus::Holds);
        assert!(v.min_margin > 1e-9);
    }

    #[test]
    fn catalysis_pair_holds() {
        let p = d(&["1/2", "1/4", "1/4", "0"]);
        let q = d(&["2/5", "2/5", "1/10", "1/10"]);
        let v = trumps(&p, &q, &AlphaGrid::default(), prec()).unwrap();
        assert_eq!(v.status, TrumpStatus::Holds);
    }

    #[test]
    fn preconditions() {
        let p = d(&["1/2", "1/2", "0"]);
        assert!(matches!(
            trumps(&p, &d(&["0", "1/2", "1/2"]), &AlphaGrid::default(), prec()),
            Err(Error::IdenticalUpToPermutation)
        ));
        assert!(matches!(
            trumps(&p, &d(&["2/3", "1/3", "0"]), &AlphaGrid::default(), prec()),
            Err(Error::NeitherFullRank)
        ));
    }

    #[test]
    fn equal_rank_zero_plus_does_not_refute() {
        // both full rank: 0+ gap is exactly 0 but must not cause fails
        let p = d(&["3/4", "1/8", "1/8"]);
        let q = d(&["1/2", "1/4", "1/4"]);
        let v = trumps(&p, &q, &AlphaGrid::default(), prec()).unwrap();
        assert_ne!(
            v.checks
                .iter()
                .find(|c| c.order == Order::ZeroPlus)
                .map(|c| fails_at(c)),
            Some(true)
        );
    }
}
