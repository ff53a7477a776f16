//! Closed-form evaluators for the entropy-difference quantities behind the
//! two extension families:
//!
//! * `gap_per_entry` — Δ_n^(α) = H_α(q_AB) − H_α(q_B) − H_α(p) for the
//!   per-entry extension `a_i = q_i − δ`, valid on α ∈ [1, +∞];
//! * `gap_uniform` — Δ̃_n^(α), the same difference for the uniform
//!   extension `a_i = a/m`, valid on the whole extended α line, plus the
//!   rescaled Δ̄_n^(α) that is continuous across α = 0 where its value is
//!   the Burg gap.
//!
//! The closed forms take a real tail length `n ≥ 1`, which the searches use
//! between integer points. They are cross-checked against direct entropy
//! evaluation on materialized extensions in the test suite.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::entropy::{renyi_pmf, EntropyValue, Order};
use crate::error::{Error, Result};
use crate::real::{Precision, Real};
use crate::runs::Pmf;

fn rr(x: &BigRational, prec: Precision) -> Real {
    Real::from_rational(x, prec)
}

fn count(c: u128, prec: Precision) -> Real {
    Real::from_rational(&BigRational::from(BigInt::from(c)), prec)
}

fn shannon_of(p: &Pmf, prec: Precision) -> Real {
    match renyi_pmf(p, Order::One, prec) {
        EntropyValue::Finite(r) => r,
        EntropyValue::NegInfinity => unreachable!(),
    }
}

fn finite_entropy(p: &Pmf, ord: Order, prec: Precision) -> Result<Real> {
    match renyi_pmf(p, ord, prec) {
        EntropyValue::Finite(r) => Ok(r),
        EntropyValue::NegInfinity => {
            Err(Error::Domain(format!("H_{} is −∞ for this distribution", ord.label())))
        }
    }
}

/// `Σ_i x_i^α` over the runs, where `x_i = v_i − shift`. Entries must be
/// positive after the shift unless `alpha > 0`, in which case zeros drop out.
fn power_sum(p: &Pmf, shift: &BigRational, alpha: f64, prec: Precision) -> Result<Real> {
    let a = Real::from_f64(alpha, prec);
    let mut sum = Real::zero(prec);
    for (v, c) in p.runs() {
        let x = v - shift;
        if x.is_zero() {
            if alpha > 0.0 {
                continue;
            }
            return Err(Error::Domain("zero base with nonpositive exponent".into()));
        }
        if x < BigRational::zero() {
            return Err(Error::Domain("negative base in power sum".into()));
        }
        sum = sum + count(*c, prec) * rr(&x, prec).pow(&a);
    }
    Ok(sum)
}

fn check_extension_base(q: &Pmf) -> Result<()> {
    if q.rank() != q.total() {
        return Err(Error::Domain("q must have full rank".into()));
    }
    if q.runs().len() == 1 {
        return Err(Error::Domain("q must not be the uniform distribution".into()));
    }
    Ok(())
}

fn check_n(n: f64) -> Result<()> {
    if !(n.is_finite() && n >= 1.0) {
        return Err(Error::Domain(format!("tail length n = {n} must be a real ≥ 1")));
    }
    Ok(())
}

/// Δ_n^(α) for the per-entry extension `a_i = q_i − δ`, α ∈ [1, +∞].
///
/// Accepted orders: `One`, `PlusInfinity`, `Finite(α)` with α > 1.
pub fn gap_per_entry(
    p: &Pmf,
    q: &Pmf,
    delta: &BigRational,
    n: f64,
    ord: Order,
    prec: Precision,
) -> Result<Real> {
    check_extension_base(q)?;
    check_n(n)?;
    if !(delta > &BigRational::zero() && delta < q.min_value()) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, min_i q_i)")));
    }
    if p.total() != q.total() {
        return Err(Error::DimMismatch(p.total() as usize, q.total() as usize));
    }
    let m = q.total();
    let m_real = count(m, prec);
    let m_delta = BigRational::from(BigInt::from(m)) * delta; // mδ = 1 − a
    let one = Real::from_u64(1, prec);

    match ord {
        Order::One => {
            // mδ log m − Σ (q_i − δ) log((q_i − δ)/(1 − mδ)) − H(p)
            let shifted_total =
                rr(&(BigRational::from(BigInt::from(1u32)) - &m_delta), prec);
            let mut s = Real::zero(prec);
            for (v, c) in q.runs() {
                let x = v - delta;
                let xr = rr(&x, prec);
                s = s + count(*c, prec) * &xr * (xr / &shifted_total).ln();
            }
            Ok(rr(&m_delta, prec) * m_real.ln() - s - shannon_of(p, prec))
        }
        Order::PlusInfinity => {
            // −log max(δ, max_i (q_i−δ)/n) + log max(mδ, (1−mδ)/n) + log max_i p_i
            let n_real = Real::from_f64(n, prec);
            let tail_ab = rr(&(q.max_value() - delta), prec) / &n_real;
            let head_ab = rr(delta, prec);
            let max_ab = if tail_ab > head_ab { tail_ab } else { head_ab };
            let a_total = BigRational::from(BigInt::from(1u32)) - &m_delta;
            let tail_b = rr(&a_total, prec) / &n_real;
            let head_b = rr(&m_delta, prec);
            let max_b = if tail_b > head_b { tail_b } else { head_b };
            Ok(-max_ab.ln() + max_b.ln() + rr(p.max_value(), prec).ln())
        }
        Order::Finite(alpha) if alpha > 1.0 => {
            let alpha_r = Real::from_f64(alpha, prec);
            let n_pow = (Real::from_f64(1.0 - alpha, prec) * Real::from_f64(n, prec).ln()).exp();
            let num = &m_real * rr(delta, prec).pow(&alpha_r)
                + &n_pow * power_sum(q, delta, alpha, prec)?;
            let p_sum = power_sum(p, &BigRational::zero(), alpha, prec)?;
            let den = p_sum
                * (m_real.pow(&alpha_r) * rr(delta, prec).pow(&alpha_r)
                    + rr(&(BigRational::from(BigInt::from(1u32)) - &m_delta), prec).pow(&alpha_r)
                        * n_pow);
            Ok((num / den).ln() / (one - Real::from_f64(alpha, prec)))
        }
        _ => Err(Error::Domain(format!(
            "gap_per_entry is defined for α ∈ [1, +∞], got {}",
            ord.label()
        ))),
    }
}

/// Δ̃_n^(α) for the uniform extension `a_i = a/m`, any extended order.
///
/// `Order::ZeroPlus` returns `log m − H_0(p)` (zero for full-rank `p`);
/// `Order::Burg` returns the Burg gap H_Burg(q_AB) − H_Burg(p ⊗ q_B), the
/// α = 0 member of the rescaled family Δ̄.
pub fn gap_uniform(
    p: &Pmf,
    q: &Pmf,
    a: &BigRational,
    n: f64,
    ord: Order,
    prec: Precision,
) -> Result<Real> {
    check_extension_base(q)?;
    check_n(n)?;
    let m = q.total();
    let bound = BigRational::from(BigInt::from(m)) * q.min_value();
    if !(a > &BigRational::zero() && a < &bound) {
        return Err(Error::Domain(format!("a = {a} outside (0, m·min_i q_i)")));
    }
    if p.total() != q.total() {
        return Err(Error::DimMismatch(p.total() as usize, q.total() as usize));
    }
    let share = a / BigRational::from(BigInt::from(m)); // a/m
    let one_minus_a = BigRational::from(BigInt::from(1u32)) - a;
    let m_real = count(m, prec);
    let n_real = Real::from_f64(n, prec);
    let one = Real::from_u64(1, prec);
    let p_full_rank = p.rank() == p.total();

    match ord {
        Order::ZeroPlus => {
            let rank_p = count(p.rank(), prec);
            Ok(m_real.ln() - rank_p.ln())
        }
        Order::One => {
            // eqShannon: −Σ (q_i − a/m) log(q_i − a/m) + a log m + (1−a) log(1−a) − H(p)
            let mut s = Real::zero(prec);
            for (v, c) in q.runs() {
                let x = v - &share;
                if x.is_zero() {
                    continue;
                }
                let xr = rr(&x, prec);
                s = s + count(*c, prec) * &xr * xr.ln();
            }
            Ok(-s + rr(a, prec) * m_real.ln() + rr(&one_minus_a, prec) * rr(&one_minus_a, prec).ln()
                - shannon_of(p, prec))
        }
        Order::PlusInfinity => {
            let head = rr(&(q.max_value() - &share), prec);
            let tail = rr(a, prec) / (&m_real * &n_real);
            let max_ab = if tail > head { tail } else { head };
            let head_b = rr(&one_minus_a, prec);
            let tail_b = rr(a, prec) / &n_real;
            let max_b = if tail_b > head_b { tail_b } else { head_b };
            Ok(-max_ab.ln() + max_b.ln() - finite_entropy(p, Order::PlusInfinity, prec)?)
        }
        Order::MinusInfinity => {
            let head = rr(&(q.min_value() - &share), prec);
            let tail = rr(a, prec) / (&m_real * &n_real);
            let min_ab = if tail < head { tail } else { head };
            let head_b = rr(&one_minus_a, prec);
            let tail_b = rr(a, prec) / &n_real;
            let min_b = if tail_b < head_b { tail_b } else { head_b };
            Ok(min_ab.ln() - min_b.ln() - finite_entropy(p, Order::MinusInfinity, prec)?)
        }
        Order::Burg => {
            // H_Burg(q_AB) − H_Burg(p ⊗ q_B) with the two displayed forms
            if !p_full_rank {
                return Err(Error::Domain("Burg gap requires full-rank p".into()));
            }
            let n_plus_1 = &n_real + &one;
            let mut s = Real::zero(prec);
            for (v, c) in q.runs() {
                s = s + count(*c, prec) * rr(&(v - &share), prec).ln();
            }
            let h_ab = s / (&m_real * &n_plus_1)
                + &n_real / &n_plus_1 * (rr(a, prec) / (&m_real * &n_real)).ln();
            let h_p = finite_entropy(p, Order::Burg, prec)?;
            let h_b = (rr(&one_minus_a, prec).ln() + &n_real * (rr(a, prec) / &n_real).ln())
                / &n_plus_1;
            Ok(h_ab - h_p - h_b)
        }
        Order::Finite(alpha) => {
            if alpha < 0.0 && !p_full_rank {
                return Err(Error::Domain(
                    "negative orders are skipped for rank-deficient p".into(),
                ));
            }
            let alpha_r = Real::from_f64(alpha, prec);
            let n_pow = (Real::from_f64(1.0 - alpha, prec) * n_real.ln()).exp();
            let m_pow = (Real::from_f64(1.0 - alpha, prec) * m_real.ln()).exp();
            let a_pow = rr(a, prec).pow(&alpha_r);
            let num = power_sum(q, &share, alpha, prec)? + &n_pow * &a_pow * m_pow;
            let p_sum = power_sum(p, &BigRational::zero(), alpha, prec)?;
            let den = p_sum * (rr(&one_minus_a, prec).pow(&alpha_r) + n_pow * a_pow);
            let sgn = Real::from_f64(alpha.signum(), prec);
            Ok(sgn / (one - Real::from_f64(alpha, prec)) * (num / den).ln())
        }
    }
}

/// Δ̄_n^(α): the rescaling `(1−α)/|α| · Δ̃_n^(α)` for α ≠ 0, continued across
/// zero by the Burg gap.
pub fn gap_uniform_scaled(
    p: &Pmf,
    q: &Pmf,
    a: &BigRational,
    n: f64,
    alpha: f64,
    prec: Precision,
) -> Result<Real> {
    if alpha == 0.0 {
        return gap_uniform(p, q, a, n, Order::Burg, prec);
    }
    let ord = if alpha == 1.0 { Order::One } else { Order::finite(alpha)? };
    let tilde = gap_uniform(p, q, a, n, ord, prec)?;
    let scale = Real::from_f64((1.0 - alpha) / alpha.abs(), prec);
    Ok(scale * tilde)
}
