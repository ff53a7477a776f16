//! Exact majorization decision, bistochastic witness construction, and the
//! zero-handling helpers (padding, common-zero stripping) every higher
//! relation builds on.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::runs::Pmf;

/// Outcome of the partial-sum comparison of sorted prefixes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    /// Smallest prefix length at which the inequality fails, 1-based.
    pub failing_k: Option<usize>,
    pub partial_sums_p: Vec<String>,
    pub partial_sums_q: Vec<String>,
}

/// Does `p` majorize `q`? Exact verdict with both partial-sum lists.
pub fn majorizes(p: &Dist, q: &Dist) -> Result<MajorizationVerdict> {
    if p.dim() != q.dim() {
        return Err(Error::DimMismatch(p.dim(), q.dim()));
    }
    let ps = p.sort_desc();
    let qs = q.sort_desc();
    let mut pa = BigRational::zero();
    let mut qa = BigRational::zero();
    let mut partial_sums_p = Vec::with_capacity(p.dim());
    let mut partial_sums_q = Vec::with_capacity(p.dim());
    let mut failing_k = None;
    for k in 0..p.dim() {
        pa += &ps.entries()[k];
        qa += &qs.entries()[k];
        partial_sums_p.push(pa.to_string());
        partial_sums_q.push(qa.to_string());
        if failing_k.is_none() && pa < qa {
            failing_k = Some(k + 1);
        }
    }
    Ok(MajorizationVerdict { holds: failing_k.is_none(), failing_k, partial_sums_p, partial_sums_q })
}

/// Exact majorization on run-encoded vectors; used for large product spaces
/// where materializing partial-sum lists is not feasible.
pub fn majorizes_pmf(p: &Pmf, q: &Pmf) -> bool {
    p.majorizes(q).is_none()
}

/// Append exact zeros up to `target_dim`.
pub fn pad_zeros(p: &Dist, target_dim: usize) -> Result<Dist> {
    if target_dim < p.dim() {
        return Err(Error::PadBelowDim { target: target_dim, dim: p.dim() });
    }
    let mut entries = p.entries().to_vec();
    entries.resize(target_dim, BigRational::zero());
    Dist::new(entries)
}

/// Sort both vectors and truncate to the support of `q`.
///
/// Requires `rank(p) <= rank(q)`; otherwise the rank monotonicity condition
/// has already failed and the relation cannot hold.
pub fn strip_common_zeros(p: &Dist, q: &Dist) -> Result<(Dist, Dist)> {
    if p.dim() != q.dim() {
        return Err(Error::DimMismatch(p.dim(), q.dim()));
    }
    let (rp, rq) = (p.rank(), q.rank());
    if rp > rq {
        return Err(Error::RankExceeds { rank_p: rp, rank_q: rq });
    }
    let ps = p.sort_desc();
    let qs = q.sort_desc();
    let l = rq;
    let pt = Dist::new(ps.entries()[..l].to_vec())?;
    let qt = Dist::new(qs.entries()[..l].to_vec())?;
    Ok((pt, qt))
}

/// One T-transform: mix coordinates `i` and `j` with weight `t ∈ [0,1]`.
/// The transformed vector has `v'_i = t v_i + (1−t) v_j` and symmetrically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransferStep {
    pub i: usize,
    pub j: usize,
    #[serde(with = "rational_string")]
    pub t: BigRational,
}

mod rational_string {
    use super::*;
    pub fn serialize<S: serde::Serializer>(
        r: &BigRational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        crate::dist::parse_prob(&s).map_err(serde::de::Error::custom)
    }
}

/// A constructive certificate that `p ≻ q`: at most `dim − 1` T-transforms
/// carrying the sorted `p` to the sorted `q`, plus the permutation restoring
/// the original order of `q`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BistochasticWitness {
    pub steps: Vec<TransferStep>,
    /// `replayed[k] = transformed[permutation[k]]` reproduces `q` exactly.
    pub permutation: Vec<usize>,
}

impl BistochasticWitness {
    /// Replay the witness on `p`; the result must equal the target exactly.
    pub fn replay(&self, p: &Dist) -> Result<Dist> {
        let mut v = p.sort_desc().entries().to_vec();
        for s in &self.steps {
            if s.i >= v.len() || s.j >= v.len() || s.t < BigRational::zero() || s.t > BigRational::one()
            {
                return Err(Error::Domain("invalid witness step".into()));
            }
            let one_minus = BigRational::one() - &s.t;
            let vi = v[s.i].clone();
            let vj = v[s.j].clone();
            v[s.i] = &s.t * &vi + &one_minus * &vj;
            v[s.j] = one_minus * vi + &s.t * vj;
        }
        if self.permutation.len() != v.len() {
            return Err(Error::Domain("invalid witness permutation".into()));
        }
        let out: Vec<BigRational> = self.permutation.iter().map(|&k| v[k].clone()).collect();
        Dist::new(out)
    }
}

/// Construct a bistochastic witness for `p ≻ q` via T-transforms.
///
/// Classical Hardy–Littlewood–Pólya argument: at the first index where the
/// working vector still exceeds the target, transfer mass to the first later
/// index where it falls short; each step equalizes at least one coordinate.
pub fn witness(p: &Dist, q: &Dist) -> Result<BistochasticWitness> {
    let verdict = majorizes(p, q)?;
    if !verdict.holds {
        return Err(Error::NotMajorizing(Box::new(verdict)));
    }
    let mut v = p.sort_desc().entries().to_vec();
    let target = q.sort_desc();
    let w = target.entries();
    let mut steps = Vec::new();
    loop {
        let Some(i) = (0..v.len()).find(|&k| v[k] != w[k]) else { break };
        debug_assert!(v[i] > w[i], "prefix domination keeps the first difference positive");
        let j = (i + 1..v.len())
            .find(|&k| v[k] < w[k])
            .expect("mass conservation provides a deficit index");
        let d = (&v[i] - &w[i]).min(&w[j] - &v[j]);
        // t solves t v_i + (1−t) v_j = v_i − d
        let t = BigRational::one() - &d / (&v[i] - &v[j]);
        let one_minus = BigRational::one() - &t;
        let vi = v[i].clone();
        let vj = v[j].clone();
        v[i] = &t * &vi + &one_minus * &vj;
        v[j] = one_minus * vi + &t * vj;
        steps.push(TransferStep { i, j, t });
        debug_assert!(steps.len() < p.dim(), "at most dim − 1 transforms");
    }
    // permutation mapping sorted target back to q's original order
    let mut used = vec![false; w.len()];
    let mut permutation = Vec::with_capacity(w.len());
    for e in q.entries() {
        let k = (0..w.len()).find(|&k| !used[k] && &w[k] == e).expect("same multiset");
        used[k] = true;
        permutation.push(k);
    }
    Ok(BistochasticWitness { steps, permutation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(entries: &[&str]) -> Dist {
        Dist::parse(entries).unwrap()
    }

    #[test]
    fn reference_pair_fails_at_k2() {
        let p = d(&["91/100", "1/20", "1/25"]);
        let q = d(&["17/20", "7/50", "1/100"]);
        let v = majorizes(&p, &q).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_k, Some(2));
        assert_eq!(v.partial_sums_p[1], "24/25");
        assert_eq!(v.partial_sums_q[1], "99/100");
    }

    #[test]
    fn reflexive_and_uniform_minimal() {
        let p = d(&["91/100", "1/20", "1/25"]);
        assert!(majorizes(&p, &p).unwrap().holds);
        assert!(majorizes(&p, &Dist::uniform(3)).unwrap().holds);
    }

    #[test]
    fn catalysis_example_tensored() {
        // classical catalysis pair: p does not majorize q directly, but does
        // after tensoring both sides with r = (0.6, 0.4)
        let p = d(&["1/2", "1/4", "1/4", "0"]);
        let q = d(&["2/5", "2/5", "1/10", "1/10"]);
        let r = d(&["3/5", "2/5"]);
        assert!(!majorizes(&p, &q).unwrap().holds);
        let pr = p.kron(&r).flatten();
        let qr = q.kron(&r).flatten();
        assert!(majorizes(&pr, &qr).unwrap().holds);
    }

    #[test]
    fn dim_mismatch_is_an_error() {
        assert!(majorizes(&d(&["1/2", "1/2"]), &d(&["1/3", "1/3", "1/3"])).is_err());
    }

    #[test]
    fn pad_and_strip() {
        let p = pad_zeros(&d(&["1/2", "1/2"]), 4).unwrap();
        assert_eq!(p, d(&["1/2", "1/2", "0", "0"]));
        assert_eq!(pad_zeros(&d(&["1"]), 3).unwrap(), d(&["1", "0", "0"]));
        assert!(pad_zeros(&p, 2).is_err());

        let (pt, qt) = strip_common_zeros(&d(&["1/2", "1/2", "0"]), &d(&["2/3", "1/3", "0"])).unwrap();
        assert_eq!(pt, d(&["1/2", "1/2"]));
        assert_eq!(qt, d(&["2/3", "1/3"]));

        let (pt, qt) = strip_common_zeros(&d(&["1", "0", "0"]), &d(&["1/2", "1/2", "0"])).unwrap();
        assert_eq!(pt, d(&["1", "0"]));
        assert_eq!(qt, d(&["1/2", "1/2"]));

        assert!(strip_common_zeros(&d(&["1/3", "1/3", "1/3"]), &d(&["1/2", "1/2", "0"])).is_err());
    }

    #[test]
    fn witness_trivial_and_forced() {
        let p = d(&["1/2", "1/2"]);
        let w = witness(&p, &p).unwrap();
        assert!(w.steps.is_empty());
        assert_eq!(w.replay(&p).unwrap(), p);

        let w = witness(&d(&["1", "0"]), &d(&["1/2", "1/2"])).unwrap();
        assert_eq!(w.steps.len(), 1);
        assert_eq!(w.steps[0].t, BigRational::new(1.into(), 2.into()));
        assert_eq!(w.replay(&d(&["1", "0"])).unwrap(), d(&["1/2", "1/2"]));
    }

    #[test]
    fn witness_two_dim_mixing() {
        let p = d(&["3/4", "1/4"]);
        let q = d(&["1/2", "1/2"]);
        let w = witness(&p, &q).unwrap();
        assert_eq!(w.steps.len(), 1);
        assert_eq!(w.replay(&p).unwrap(), q);
    }

    #[test]
    fn witness_replay_exact_on_unsorted_target() {
        let p = d(&["1/20", "91/100", "1/25"]);
        let q = d(&["1/4", "1/2", "1/4"]);
        assert!(majorizes(&p, &q).unwrap().holds);
        let w = witness(&p, &q).unwrap();
        assert!(w.steps.len() <= 2);
        assert_eq!(w.replay(&p).unwrap(), q);
    }

    #[test]
    fn witness_precondition_error_carries_verdict() {
        let p = d(&["91/100", "1/20", "1/25"]);
        let q = d(&["17/20", "7/50", "1/100"]);
        match witness(&p, &q) {
            Err(Error::NotMajorizing(v)) => assert_eq!(v.failing_k, Some(2)),
            other => panic!("expected NotMajorizing, got {other:?}"),
        }
    }

    #[test]
    fn witness_serde_round_trip() {
        let p = d(&["1/20", "91/100", "1/25"]);
        let q = d(&["1/4", "1/2", "1/4"]);
        let w = witness(&p, &q).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: BistochasticWitness = serde_json::from_str(&json).unwrap();
        assert_eq!(back.replay(&p).unwrap(), q);
    }
}
