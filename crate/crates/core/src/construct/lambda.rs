//! Maximal coin-count advantage: the largest `λ = i − j` such that
//! `p ⊗ η₂^⊗i` majorizes `q ⊗ η₂^⊗j` after padding with zeros, where `η₂`
//! is the fair coin. Appending pure states only pads with zeros, so they
//! never change the comparison.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::dist::Dist;
use crate::entropy::shannon;
use crate::error::{Error, Result};
use crate::real::Precision;
use crate::runs::Pmf;

/// `p ⊗ η₂^⊗i` as a run-encoded vector: values halve `i` times, counts
/// double.
fn with_coins(p: &Pmf, i: u64) -> Pmf {
    if i == 0 {
        return p.clone();
    }
    let scale = BigRational::new(BigInt::from(1), BigInt::from(1) << i as usize);
    Pmf::from_values(
        p.runs().iter().map(|(v, c)| (v * &scale, c << i)).collect::<Vec<_>>(),
    )
}

fn pad_to(p: &Pmf, total: u128) -> Pmf {
    let extra = total - p.total();
    if extra == 0 {
        p.clone()
    } else {
        Pmf::from_values(
            p.runs().iter().cloned().chain([(BigRational::zero(), extra)]).collect::<Vec<_>>(),
        )
    }
}

/// Does `p ⊗ η₂^⊗i ≽ q ⊗ η₂^⊗j` hold after zero-padding to a common
/// dimension?
pub fn coin_majorizes(p: &Pmf, q: &Pmf, i: u64, j: u64) -> bool {
    let lhs = with_coins(p, i);
    let rhs = with_coins(q, j);
    let total = lhs.total().max(rhs.total());
    pad_to(&lhs, total).majorizes(&pad_to(&rhs, total)).is_none()
}

#[derive(Debug, Clone)]
pub struct LambdaVerdict {
    /// The maximal advantage `i − j`.
    pub lambda: i64,
    /// A coin pair attaining it.
    pub i: u64,
    pub j: u64,
}

/// Maximal `λ = i − j` with `p ⊗ η₂^⊗i ≽ q ⊗ η₂^⊗j` (zero-padded), over
/// `i, j ≤ n_max` (clamped to 120 so outcome counts fit in `u128`).
///
/// Adding a coin to both sides preserves majorization, so for each
/// difference `d` it suffices to scan the base offset upward; entropy and
/// max-entry bounds cap `d` from above, and flattening `q` far enough
/// guarantees a finite answer from below.
pub fn lambda_max(p: &Dist, q: &Dist, n_max: u64, prec: Precision) -> Result<LambdaVerdict> {
    let n_max = n_max.min(120);
    let pp = Pmf::from_dist(p);
    let qp = Pmf::from_dist(q);
    let ln2 = 2f64.ln();
    // majorization is entropy-nonincreasing: H(p) + i ln 2 ≤ H(q) + j ln 2
    let h_bound = ((shannon(q, prec) - shannon(p, prec)).to_f64() / ln2).floor();
    // and top-entry-nonincreasing: max(p)/2^i ≥ max(q)/2^j
    let ratio = (pp.max_value() / qp.max_value()).to_f64().unwrap_or(f64::INFINITY);
    let m_bound = (ratio.ln() / ln2).floor();
    let hi = h_bound.min(m_bound);
    if !hi.is_finite() {
        return Err(Error::Domain("entropy bound is not finite".into()));
    }
    let hi = (hi as i64).min(n_max as i64);
    let lo = -(n_max as i64);
    for d in (lo..=hi).rev() {
        let j0 = (-d).max(0) as u64;
        for j in j0..=n_max {
            let i = (j as i64 + d) as u64;
            if i > n_max {
                break;
            }
            if coin_majorizes(&pp, &qp, i, j) {
                return Ok(LambdaVerdict { lambda: d, i, j });
            }
        }
    }
    Err(Error::NoNFound(n_max))
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
    fn pure_to_coin_gains_one() {
        let v = lambda_max(&d(&["1", "0"]), &d(&["1/2", "1/2"]), 16, prec()).unwrap();
        assert_eq!(v.lambda, 1);
    }

    #[test]
    fn coin_to_pure_costs_one() {
        let v = lambda_max(&d(&["1/2", "1/2"]), &d(&["1", "0"]), 16, prec()).unwrap();
        assert_eq!(v.lambda, -1);
    }

    #[test]
    fn identical_pair_is_zero() {
        let x = d(&["2/3", "1/3"]);
        let v = lambda_max(&x, &x, 16, prec()).unwrap();
        assert_eq!(v.lambda, 0);
    }

    #[test]
    fn four_level_uniform_is_two_coins() {
        let v = lambda_max(&d(&["1", "0", "0", "0"]), &Dist::uniform(4), 16, prec()).unwrap();
        assert_eq!(v.lambda, 2);
    }

    #[test]
    fn fractional_gap_rounds_down() {
        // H(q) − H(p) = ln 3 ≈ 1.585 ln 2: only one whole coin is extractable
        let v = lambda_max(&d(&["1", "0", "0"]), &Dist::uniform(3), 16, prec()).unwrap();
        assert_eq!(v.lambda, 1);
    }

    #[test]
    fn coin_invariance() {
        // adding a coin to both sides never changes the advantage
        let p = d(&["3/5", "1/5", "1/5", "0"]);
        let q = d(&["3/10", "3/10", "1/5", "1/5"]);
        let base = lambda_max(&p, &q, 12, prec()).unwrap().lambda;
        let eta = d(&["1/2", "1/2"]);
        let shifted = lambda_max(&p.kron(&eta).flatten(), &q.kron(&eta).flatten(), 12, prec())
            .unwrap()
            .lambda;
        assert_eq!(base, shifted);
    }
}
