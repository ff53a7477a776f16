//! The entropy family: Rényi H_α over the full extended order range, Shannon,
//! Hartley (0+), min/negative-min entropy (±∞) and Burg.
//!
//! All values are in nats. Finite orders are evaluated in high-precision
//! floating point from the exact rational entries; the symbolic tags use their
//! defining formulas directly (`0 log 0 := 0`, Hartley via exact rank).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::real::{Precision, Real};
use crate::runs::Pmf;

/// An entropy order: a finite nonzero α ≠ 1, or one of the symbolic tags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Finite(f64),
    One,
    ZeroPlus,
    PlusInfinity,
    MinusInfinity,
    Burg,
}

impl Order {
    /// Construct a finite order; α ∈ {0, 1} must use the dedicated tags.
    pub fn finite(alpha: f64) -> Result<Order> {
        if !alpha.is_finite() || alpha == 0.0 || alpha == 1.0 {
            return Err(Error::ReservedOrder(alpha));
        }
        Ok(Order::Finite(alpha))
    }

    /// Sort key used for deterministic aggregation: orders sort by their
    /// position on the extended real line, with Burg placed after +∞.
    pub fn sort_key(&self) -> (u8, f64) {
        match self {
            Order::MinusInfinity => (0, f64::NEG_INFINITY),
            Order::Finite(a) => (0, *a),
            Order::ZeroPlus => (0, 0.0),
            Order::One => (0, 1.0),
            Order::PlusInfinity => (0, f64::INFINITY),
            Order::Burg => (1, 0.0),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Order::Finite(a) => format!("{a}"),
            Order::One => "1".into(),
            Order::ZeroPlus => "0+".into(),
            Order::PlusInfinity => "+inf".into(),
            Order::MinusInfinity => "-inf".into(),
            Order::Burg => "burg".into(),
        }
    }
}

/// An entropy value: finite nats, or −∞ (zeros under Burg or negative order).
#[derive(Debug, Clone)]
pub enum EntropyValue {
    Finite(Real),
    NegInfinity,
}

impl EntropyValue {
    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, EntropyValue::NegInfinity)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            EntropyValue::Finite(r) => r.to_f64(),
            EntropyValue::NegInfinity => f64::NEG_INFINITY,
        }
    }

    pub fn as_finite(&self) -> Option<&Real> {
        match self {
            EntropyValue::Finite(r) => Some(r),
            EntropyValue::NegInfinity => None,
        }
    }
}

fn ln_rational(v: &BigRational, prec: Precision) -> Real {
    Real::from_rational(v, prec).ln()
}

fn ln_u128(n: u128, prec: Precision) -> Real {
    Real::from_rational(&BigRational::from(BigInt::from(n)), prec).ln()
}

fn count_real(c: u128, prec: Precision) -> Real {
    Real::from_rational(&BigRational::from(BigInt::from(c)), prec)
}

/// Rényi entropy of a run-encoded vector. `Order::Burg` routes to [`burg_pmf`].
pub fn renyi_pmf(p: &Pmf, ord: Order, prec: Precision) -> EntropyValue {
    match ord {
        Order::Burg => burg_pmf(p, prec),
        Order::ZeroPlus => EntropyValue::Finite(ln_u128(p.rank(), prec)),
        Order::PlusInfinity => EntropyValue::Finite(-ln_rational(p.max_value(), prec)),
        Order::MinusInfinity => {
            let min = p.min_value();
            if min.is_zero() {
                EntropyValue::NegInfinity
            } else {
                EntropyValue::Finite(ln_rational(min, prec))
            }
        }
        Order::One => {
            let mut acc = Real::zero(prec);
            for (v, c) in p.runs() {
                if v.is_zero() {
                    continue; // 0 log 0 := 0
                }
                let rv = Real::from_rational(v, prec);
                acc = acc + count_real(*c, prec) * &rv * rv.ln();
            }
            EntropyValue::Finite(-acc)
        }
        Order::Finite(alpha) => {
            debug_assert!(alpha != 0.0 && alpha != 1.0);
            if alpha < 0.0 && p.rank() < p.total() {
                // 0^α = +∞ for α < 0
                return EntropyValue::NegInfinity;
            }
            let a = Real::from_f64(alpha, prec);
            let mut sum = Real::zero(prec);
            for (v, c) in p.runs() {
                if v.is_zero() {
                    continue;
                }
                sum = sum + count_real(*c, prec) * Real::from_rational(v, prec).pow(&a);
            }
            let one_minus = Real::from_f64(1.0, prec) - Real::from_f64(alpha, prec);
            let sgn = if alpha > 0.0 { 1.0 } else { -1.0 };
            EntropyValue::Finite(Real::from_f64(sgn, prec) / one_minus * sum.ln())
        }
    }
}

/// Burg entropy `(1/m) Σ log p_i`; −∞ if any entry is zero.
pub fn burg_pmf(p: &Pmf, prec: Precision) -> EntropyValue {
    if p.rank() < p.total() {
        return EntropyValue::NegInfinity;
    }
    let mut acc = Real::zero(prec);
    for (v, c) in p.runs() {
        acc = acc + count_real(*c, prec) * ln_rational(v, prec);
    }
    EntropyValue::Finite(acc / count_real(p.total(), prec))
}

pub fn renyi(p: &Dist, ord: Order, prec: Precision) -> EntropyValue {
    renyi_pmf(&Pmf::from_dist(p), ord, prec)
}

pub fn burg(p: &Dist, prec: Precision) -> EntropyValue {
    burg_pmf(&Pmf::from_dist(p), prec)
}

/// Shannon entropy, the `Order::One` member of the family.
pub fn shannon(p: &Dist, prec: Precision) -> Real {
    match renyi(p, Order::One, prec) {
        EntropyValue::Finite(r) => r,
        EntropyValue::NegInfinity => unreachable!("Shannon entropy is finite"),
    }
}

/// An extended-real entropy gap H(q) − H(p).
#[derive(Debug, Clone)]
pub enum GapValue {
    Finite(Real),
    PlusInfinity,
    MinusInfinity,
}

impl GapValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            GapValue::Finite(r) => r.to_f64(),
            GapValue::PlusInfinity => f64::INFINITY,
            GapValue::MinusInfinity => f64::NEG_INFINITY,
        }
    }

    pub fn is_nonpositive(&self) -> bool {
        match self {
            GapValue::Finite(r) => !r.is_positive(),
            GapValue::PlusInfinity => false,
            GapValue::MinusInfinity => true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EntropyGap {
    pub value: GapValue,
    /// Both entropies were −∞ (coinciding zero patterns under a negative
    /// order); the gap is reported as 0 with this flag set instead of NaN.
    pub degenerate: bool,
}

/// `H_ord(q) − H_ord(p)` with extended-real subtraction.
pub fn entropy_gap(p: &Dist, q: &Dist, ord: Order, prec: Precision) -> EntropyGap {
    entropy_gap_pmf(&Pmf::from_dist(p), &Pmf::from_dist(q), ord, prec)
}

pub fn entropy_gap_pmf(p: &Pmf, q: &Pmf, ord: Order, prec: Precision) -> EntropyGap {
    let hp = renyi_pmf(p, ord, prec);
    let hq = renyi_pmf(q, ord, prec);
    match (hp, hq) {
        (EntropyValue::Finite(a), EntropyValue::Finite(b)) => {
            EntropyGap { value: GapValue::Finite(b - a), degenerate: false }
        }
        (EntropyValue::NegInfinity, EntropyValue::Finite(_)) => {
            EntropyGap { value: GapValue::PlusInfinity, degenerate: false }
        }
        (EntropyValue::Finite(_), EntropyValue::NegInfinity) => {
            EntropyGap { value: GapValue::MinusInfinity, degenerate: false }
        }
        (EntropyValue::NegInfinity, EntropyValue::NegInfinity) => {
            EntropyGap { value: GapValue::Finite(Real::zero(prec)), degenerate: true }
        }
    }
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
    fn uniform_attains_log_m() {
        let eta = Dist::uniform(5);
        let log5 = 5f64.ln();
        for ord in [
            Order::finite(0.5).unwrap(),
            Order::finite(2.0).unwrap(),
            Order::One,
            Order::ZeroPlus,
            Order::PlusInfinity,
        ] {
            let h = renyi(&eta, ord, prec()).to_f64();
            assert!((h - log5).abs() < 1e-12, "{ord:?}: {h}");
        }
        // negative orders attain the maximum −log m at the uniform
        let h = renyi(&eta, Order::finite(-2.0).unwrap(), prec()).to_f64();
        assert!((h + log5).abs() < 1e-12);
        assert!((burg(&eta, prec()).to_f64() + log5).abs() < 1e-12);
    }

    #[test]
    fn pure_state_shannon_zero() {
        let h = renyi(&d(&["1", "0", "0"]), Order::One, prec()).to_f64();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn reference_pair_shannon_values() {
        let hp = renyi(&d(&["91/100", "1/20", "1/25"]), Order::One, prec()).to_f64();
        let hq = renyi(&d(&["17/20", "7/50", "1/100"]), Order::One, prec()).to_f64();
        assert!((hp - 0.364365).abs() < 1e-6, "H(p) = {hp}");
        assert!((hq - 0.459449).abs() < 1e-6, "H(q) = {hq}");
    }

    #[test]
    fn burg_examples() {
        assert!(burg(&d(&["1", "0"]), prec()).is_neg_infinity());
        let b = burg(&d(&["1/4", "3/4"]), prec()).to_f64();
        let expect = (3f64 / 16f64).ln() / 2.0;
        assert!((b - expect).abs() < 1e-12, "{b} vs {expect}");
        assert!((b + 0.836988).abs() < 1e-6);
    }

    #[test]
    fn negative_order_with_zeros() {
        assert!(renyi(&d(&["1/2", "1/2", "0"]), Order::finite(-1.0).unwrap(), prec())
            .is_neg_infinity());
        assert!(renyi(&d(&["1/2", "1/2", "0"]), Order::MinusInfinity, prec()).is_neg_infinity());
        // positive orders stay finite
        let h = renyi(&d(&["1/2", "1/2", "0"]), Order::finite(2.0).unwrap(), prec()).to_f64();
        assert!((h - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn hartley_is_log_rank() {
        let h = renyi(&d(&["1/2", "1/2", "0"]), Order::ZeroPlus, prec()).to_f64();
        assert!((h - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gap_examples() {
        let p = d(&["91/100", "1/20", "1/25"]);
        let q = d(&["17/20", "7/50", "1/100"]);
        let g = entropy_gap(&p, &q, Order::One, prec());
        assert!((g.value.to_f64() - 0.095084).abs() < 1e-6);
        let g = entropy_gap(&p, &q, Order::MinusInfinity, prec());
        assert!((g.value.to_f64() + 4f64.ln()).abs() < 1e-12);
        let g = entropy_gap(&p, &p, Order::finite(3.0).unwrap(), prec());
        assert_eq!(g.value.to_f64(), 0.0);
    }

    #[test]
    fn degenerate_gap_flagged() {
        let p = d(&["1/2", "1/2", "0"]);
        let q = d(&["2/3", "1/3", "0"]);
        let g = entropy_gap(&p, &q, Order::Burg, prec());
        assert!(g.degenerate);
        assert_eq!(g.value.to_f64(), 0.0);
    }

    #[test]
    fn reserved_orders_rejected() {
        assert!(Order::finite(0.0).is_err());
        assert!(Order::finite(1.0).is_err());
        assert!(Order::finite(f64::INFINITY).is_err());
        assert!(Order::finite(2.0).is_ok());
    }

    #[test]
    fn pmf_and_dist_agree_on_products() {
        let p = d(&["91/100", "1/20", "1/25"]);
        let q = d(&["39/40", "1/40"]);
        let joint = p.kron(&q).flatten();
        let pmf = Pmf::from_dist(&p).kron(&Pmf::from_dist(&q));
        for ord in [Order::One, Order::finite(2.0).unwrap(), Order::Burg, Order::PlusInfinity] {
            let a = renyi(&joint, ord, prec()).to_f64();
            let b = renyi_pmf(&pmf, ord, prec()).to_f64();
            assert!((a - b).abs() < 1e-12, "{ord:?}");
        }
    }
}
