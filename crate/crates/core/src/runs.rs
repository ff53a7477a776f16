//! Run-length-encoded sorted probability vectors.
//!
//! Product distributions arising in catalysis checks have huge dimension but
//! few distinct values (an extension with tail length `n` contributes the
//! same value `a_i/n` at `n` positions). Storing sorted `(value, count)` runs
//! makes exact partial-sum comparisons on such products cheap: the partial-sum
//! difference is piecewise linear in the prefix length, so it suffices to
//! examine run breakpoints.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dist::Dist;

/// Sorted (descending) run-length-encoded probability vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pmf {
    /// Strictly descending values with positive counts.
    runs: Vec<(BigRational, u128)>,
}

fn big(c: u128) -> BigRational {
    BigRational::from(BigInt::from(c))
}

impl Pmf {
    pub fn from_dist(d: &Dist) -> Self {
        Self::from_values(d.entries().iter().cloned().map(|v| (v, 1)))
    }

    /// Build from arbitrary (value, count) pairs; sorts and merges.
    pub fn from_values(it: impl IntoIterator<Item = (BigRational, u128)>) -> Self {
        let mut map: BTreeMap<BigRational, u128> = BTreeMap::new();
        for (v, c) in it {
            if c == 0 {
                continue;
            }
            *map.entry(v).or_insert(0) += c;
        }
        let runs = map.into_iter().rev().collect();
        Self { runs }
    }

    pub fn runs(&self) -> &[(BigRational, u128)] {
        &self.runs
    }

    /// Total number of outcomes (the dimension of the underlying vector).
    pub fn total(&self) -> u128 {
        self.runs.iter().map(|(_, c)| c).sum()
    }

    /// Number of outcomes with non-zero probability.
    pub fn rank(&self) -> u128 {
        self.runs.iter().filter(|(v, _)| !v.is_zero()).map(|(_, c)| c).sum()
    }

    pub fn sum(&self) -> BigRational {
        self.runs.iter().map(|(v, c)| v * big(*c)).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.sum().is_one()
    }

    pub fn max_value(&self) -> &BigRational {
        &self.runs.first().expect("nonempty").0
    }

    pub fn min_value(&self) -> &BigRational {
        &self.runs.last().expect("nonempty").0
    }

    /// Kronecker product; distinct values multiply pairwise.
    pub fn kron(&self, other: &Pmf) -> Pmf {
        let mut map: BTreeMap<BigRational, u128> = BTreeMap::new();
        for (v1, c1) in &self.runs {
            for (v2, c2) in &other.runs {
                *map.entry(v1 * v2).or_insert(0) += c1 * c2;
            }
        }
        Pmf { runs: map.into_iter().rev().collect() }
    }

    /// Materialize as a `Dist`. Only sensible for small totals.
    pub fn to_dist(&self) -> Dist {
        let mut entries = Vec::new();
        for (v, c) in &self.runs {
            for _ in 0..*c {
                entries.push(v.clone());
            }
        }
        Dist::new(entries).expect("normalized pmf")
    }

    /// Exact majorization check: does `self` majorize `other`?
    ///
    /// Returns the smallest prefix length at which the partial-sum
    /// inequality fails, or `None` if it holds everywhere. Totals must match.
    pub fn majorizes(&self, other: &Pmf) -> Option<u128> {
        debug_assert_eq!(self.total(), other.total());
        let (pr, qr) = (&self.runs, &other.runs);
        let (mut i, mut j) = (0usize, 0usize);
        let (mut ri, mut rj) = (pr[0].1, qr[0].1);
        let mut pa = BigRational::zero();
        let mut qa = BigRational::zero();
        let mut k: u128 = 0;
        loop {
            let vp = &pr[i].0;
            let vq = &qr[j].0;
            let step = ri.min(rj);
            let d0 = &pa - &qa;
            let d_end = &d0 + (vp - vq) * big(step);
            if d_end.is_negative() {
                // d0 >= 0 here, so the slope vp - vq must be negative; the
                // first violating prefix inside this segment solves
                // d0 + t (vp - vq) < 0 for the smallest integer t >= 1.
                let slope = vq - vp;
                let t = (&d0 / &slope).floor() + BigRational::one();
                let t: u128 = t.to_integer().try_into().expect("prefix fits u128");
                return Some(k + t.max(1));
            }
            pa += vp * big(step);
            qa += vq * big(step);
            k += step;
            ri -= step;
            rj -= step;
            if ri == 0 {
                i += 1;
                if i == pr.len() {
                    break;
                }
                ri = pr[i].1;
            }
            if rj == 0 {
                j += 1;
                if j == qr.len() {
                    // p runs exhausted later than q only if totals differ
                    break;
                }
                rj = qr[j].1;
            }
        }
        None
    }
}
