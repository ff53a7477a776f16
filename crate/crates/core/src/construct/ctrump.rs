//! Decision and constructive certification of convertibility with a bounded
//! number of injected auxiliary systems.
//!
//! The decision is cheap: the relation holds iff `rank(p) ≤ rank(q)` and
//! `H(p) < H(q)` (or the pair is a permutation). The certificate is built in
//! stages, stopping at the first that closes:
//!
//! 0. plain majorization — no auxiliary system at all;
//! 1. a direct catalyst `c` with `p ⊗ c ≻ q ⊗ c` — one auxiliary system;
//! 2. the full three-system construction: extend `q` with per-entry slack
//!    `δ` (opening the order-[1, ∞] gaps), extend the result uniformly by
//!    mass `a` (covering every remaining order), then search a catalyst for
//!    the extended pair. The three injected marginals are a fresh copy of
//!    `q`, the first extension's tail marginal, and the second extension's
//!    tail marginal tensored with the catalyst; the joint they must be
//!    steered into is the doubly extended distribution (with the copy and
//!    the original swapping roles) tensored with the catalyst.
//!
//! Stage 2's catalyst is guaranteed to exist but with no effective dimension
//! bound, so the bounded search may come back empty. In that case the
//! witness is emitted with `verified = false` together with the per-order
//! gap table certifying that the extended pair is catalytically convertible.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::construct::catalyst::search_catalyst;
use crate::construct::extension::{extend_pmf_per_entry, extend_pmf_uniform};
use crate::construct::search::{find_a, find_delta};
use crate::construct::SearchConfig;
use crate::dist::{Dist, JointDist};
use crate::entropy::shannon;
use crate::error::{Error, Result};
use crate::real::Precision;
use crate::runs::Pmf;
use crate::trumping::{trumps_pmf, AlphaCheck, AlphaGrid, TrumpStatus};

/// Hard cap on the number of tensor entries materialized for the joint
/// auxiliary distribution of a witness.
const MAX_JOINT_ENTRIES: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CtrumpStatus {
    Holds,
    Fails,
    /// |H(q) − H(p)| is below the margin and the pair is not a permutation:
    /// the float entropy comparison cannot settle the strict inequality.
    Boundary,
}

#[derive(Debug, Clone)]
pub struct CtrumpVerdict {
    pub status: CtrumpStatus,
    /// H(q) − H(p) in nats.
    pub shannon_gap: f64,
    pub rank_p: usize,
    pub rank_q: usize,
    /// The sorted vectors coincide; the relation holds with no injections.
    pub trivial: bool,
}

/// Decide whether `p` can reach `q` with finitely many injected systems.
pub fn decide_ctrump(
    p: &Dist,
    q: &Dist,
    margin_tol: f64,
    prec: Precision,
) -> Result<CtrumpVerdict> {
    if p.dim() != q.dim() {
        return Err(Error::DimMismatch(p.dim(), q.dim()));
    }
    let (rank_p, rank_q) = (p.rank(), q.rank());
    if p.sort_desc() == q.sort_desc() {
        return Ok(CtrumpVerdict {
            status: CtrumpStatus::Holds,
            shannon_gap: 0.0,
            rank_p,
            rank_q,
            trivial: true,
        });
    }
    if rank_p > rank_q {
        return Ok(CtrumpVerdict {
            status: CtrumpStatus::Fails,
            shannon_gap: (shannon(q, prec) - shannon(p, prec)).to_f64(),
            rank_p,
            rank_q,
            trivial: false,
        });
    }
    let shannon_gap = (shannon(q, prec) - shannon(p, prec)).to_f64();
    let status = if shannon_gap > margin_tol {
        CtrumpStatus::Holds
    } else if shannon_gap < -margin_tol {
        CtrumpStatus::Fails
    } else {
        CtrumpStatus::Boundary
    };
    Ok(CtrumpVerdict { status, shannon_gap, rank_p, rank_q, trivial: false })
}

/// A replayable certificate: the construction parameters, the injected
/// marginals they generate, and the correlated joint those marginals must be
/// steered into. `verify` rebuilds everything from the parameters and
/// re-runs the exact partial-sum check.
#[derive(Debug, Clone)]
pub struct CtrumpWitness {
    /// Injected auxiliary marginals (at most 3): in the full construction,
    /// a copy of the zero-stripped target, the first extension's tail
    /// marginal, and the second extension's tail marginal tensored with the
    /// catalyst.
    pub r_marginals: Vec<Dist>,
    /// The correlated joint on the auxiliary subsystems. Its per-subsystem
    /// marginals equal `r_marginals` exactly.
    pub r_joint: JointDist,
    /// Stage-δ slack; `None` unless the full construction ran.
    pub delta: Option<BigRational>,
    pub n1: u64,
    /// Stage-a uniform mass; `None` unless the full construction ran.
    pub a: Option<BigRational>,
    pub n2: u64,
    /// Interval-splitting parameters recorded by the two searches.
    pub epsilon1: Option<f64>,
    pub epsilon2: Option<f64>,
    /// Catalyst closing the final pair, when one was found.
    pub catalyst: Option<Dist>,
    /// Per-order gap table for the pair the catalyst must close. All strict
    /// gaps positive certifies that a closing catalyst exists even when the
    /// bounded search did not find one.
    pub checks: Vec<AlphaCheck>,
    /// The assembled relation passed the exact partial-sum check.
    pub verified: bool,
}

/// Drop injected systems that cannot affect any majorization relation:
/// point masses only pad with zeros, uniforms only smear both sides equally.
pub fn prune_useless(aux: Vec<Dist>) -> Vec<Dist> {
    aux.into_iter().filter(|d| !d.is_pure() && !d.is_uniform()).collect()
}

/// Restrict the sorted pair to the support of `q`. Requires
/// `rank(p) ≤ rank(q)`, so `p`'s truncated tail is all zeros.
fn restrict_to_support(p: &Dist, q: &Dist) -> Result<(Dist, Dist)> {
    let mt = q.rank();
    if p.rank() > mt {
        return Err(Error::RankExceeds { rank_p: p.rank(), rank_q: mt });
    }
    let ps = Dist::new(p.sort_desc().entries()[..mt].to_vec())?;
    let qs = Dist::new(q.sort_desc().entries()[..mt].to_vec())?;
    Ok((ps, qs))
}

/// The distribution `(1 − a, a/n, …, a/n)` on n+1 outcomes.
fn tail_marginal(a: &BigRational, n: u64) -> Result<Dist> {
    let n_rat = BigRational::from(BigInt::from(n));
    let mut entries = vec![BigRational::from(BigInt::from(1)) - a];
    entries.extend(std::iter::repeat(a / n_rat).take(n as usize));
    Dist::new(entries)
}

/// Total stage-δ injected mass `1 − mδ` for an m-dimensional target.
fn stage1_mass(m: usize, delta: &BigRational) -> BigRational {
    BigRational::from(BigInt::from(1)) - BigRational::from(BigInt::from(m)) * delta
}

fn one() -> BigRational {
    BigRational::from(BigInt::from(1))
}

/// A joint with a single trivial subsystem, used when nothing is injected.
fn trivial_joint() -> JointDist {
    JointDist::new(vec![one()], vec![1], vec!["T".into()]).expect("trivial joint is valid")
}

/// Joint for a single catalyst subsystem.
fn catalyst_joint(c: &Dist) -> JointDist {
    JointDist::new(c.entries().to_vec(), vec![c.dim()], vec!["D".into()])
        .expect("catalyst joint is valid")
}

/// Materialize the doubly extended target tensored with the catalyst as a
/// joint on three labeled subsystems `E`, `B`, `CD`.
fn assemble_joint(
    q: &Dist,
    delta: &BigRational,
    n1: u64,
    a: &BigRational,
    n2: u64,
    c: &Dist,
) -> Result<JointDist> {
    let m = q.dim();
    let big_m = BigRational::from(BigInt::from(m as u64 * (n1 + 1)));
    let entries_total =
        (m as u128) * (n1 as u128 + 1) * (n2 as u128 + 1) * c.dim() as u128;
    if entries_total > MAX_JOINT_ENTRIES {
        return Err(Error::BudgetExhausted(format!(
            "joint materialization ({entries_total} entries)"
        )));
    }
    let n1_rat = BigRational::from(BigInt::from(n1));
    let n2_rat = BigRational::from(BigInt::from(n2));
    let share = a / &big_m;
    let tail2 = &share / &n2_rat;
    let mut tensor = Vec::with_capacity(entries_total as usize);
    for qi in q.entries() {
        for j in 0..=n1 {
            let v = if j == 0 { delta.clone() } else { (qi - delta) / &n1_rat };
            for l in 0..=n2 {
                let w = if l == 0 { &v - &share } else { tail2.clone() };
                for cd in c.entries() {
                    tensor.push(&w * cd);
                }
            }
        }
    }
    JointDist::new(
        tensor,
        vec![m, n1 as usize + 1, (n2 as usize + 1) * c.dim()],
        vec!["E".into(), "B".into(), "CD".into()],
    )
}

/// Build a certificate for `p` reaching `q`. Errors if the relation fails or
/// sits on the entropy boundary; returns `verified = false` (with the gap
/// table certifying existence) when only the bounded catalyst search fell
/// short.
pub fn build_ctrump_witness(p: &Dist, q: &Dist, cfg: &SearchConfig) -> Result<CtrumpWitness> {
    let verdict = decide_ctrump(p, q, cfg.margin_tol, cfg.precision)?;
    match verdict.status {
        CtrumpStatus::Holds => {}
        CtrumpStatus::Fails => {
            return Err(Error::Domain(if verdict.rank_p > verdict.rank_q {
                format!(
                    "relation fails: rank(p) = {} exceeds rank(q) = {}",
                    verdict.rank_p, verdict.rank_q
                )
            } else {
                format!("relation fails: H(q) − H(p) = {} < 0", verdict.shannon_gap)
            }));
        }
        CtrumpStatus::Boundary => {
            return Err(Error::Domain(format!(
                "entropy gap {} within margin {}; boundary case",
                verdict.shannon_gap, cfg.margin_tol
            )));
        }
    }

    let empty = CtrumpWitness {
        r_marginals: Vec::new(),
        r_joint: trivial_joint(),
        delta: None,
        n1: 0,
        a: None,
        n2: 0,
        epsilon1: None,
        epsilon2: None,
        catalyst: None,
        checks: Vec::new(),
        verified: true,
    };
    if verdict.trivial {
        return Ok(empty);
    }

    let (ps, qs) = restrict_to_support(p, q)?;
    let psm = Pmf::from_dist(&ps);
    let qsm = Pmf::from_dist(&qs);
    if psm.majorizes(&qsm).is_none() {
        return Ok(empty);
    }

    // stage 1: if the pair is already catalytically convertible as it
    // stands, a single catalyst subsystem suffices
    let direct = trumps_pmf(&psm, &qsm, &AlphaGrid::default(), cfg.precision)?;
    if direct.status == TrumpStatus::Holds {
        if let Some(c) = search_catalyst(&psm, &qsm, cfg)? {
            if c.dim() > 1 {
                let cp = Pmf::from_dist(&c);
                let verified = psm.kron(&cp).majorizes(&qsm.kron(&cp)).is_none();
                if verified {
                    return Ok(CtrumpWitness {
                        r_marginals: vec![c.clone()],
                        r_joint: catalyst_joint(&c),
                        delta: None,
                        n1: 0,
                        a: None,
                        n2: 0,
                        epsilon1: None,
                        epsilon2: None,
                        catalyst: Some(c),
                        checks: direct.checks,
                        verified: true,
                    });
                }
            }
        }
    }

    // stage 2a: per-entry slack δ, opening the gaps on orders in [1, +∞]
    let dc = find_delta(&psm, &qsm, cfg)?;
    let q_ab1 = extend_pmf_per_entry(&qsm, &dc.delta, dc.n)?;
    let q_b = tail_marginal(&stage1_mass(qs.dim(), &dc.delta), dc.n)?;
    let p2 = psm.kron(&Pmf::from_dist(&q_b));

    // stage 2b: uniform mass a on the extended pair, covering all orders
    let ac = find_a(&p2, &q_ab1, cfg)?;
    let q3 = extend_pmf_uniform(&q_ab1, &ac.a, ac.n)?;
    let q_c = tail_marginal(&ac.a, ac.n)?;
    let p3 = p2.kron(&Pmf::from_dist(&q_c));

    // the gap table for the extended pair certifies that a closing catalyst
    // exists, whether or not the bounded search below finds one
    let checks = trumps_pmf(&p3, &q3, &AlphaGrid::default(), cfg.precision)?.checks;

    // stage 2c: bounded catalyst search for the extended pair
    let found = search_catalyst(&p3, &q3, cfg)?.filter(|c| c.dim() > 1);
    let c_or_trivial = found.clone().unwrap_or_else(|| Dist::pure(1));

    let r3_flat = q_c.kron(&c_or_trivial).flatten();
    let mut witness = CtrumpWitness {
        r_marginals: vec![qs.clone(), q_b, r3_flat],
        r_joint: assemble_joint(&qs, &dc.delta, dc.n, &ac.a, ac.n, &c_or_trivial)?,
        delta: Some(dc.delta),
        n1: dc.n,
        a: Some(ac.a),
        n2: ac.n,
        epsilon1: Some(dc.epsilon),
        epsilon2: Some(ac.epsilon),
        catalyst: found.clone(),
        checks,
        verified: false,
    };
    witness.verified = witness.verify(p, q)?;
    if found.is_some() && !witness.verified {
        return Err(Error::Domain("assembled relation failed exact verification".into()));
    }
    Ok(witness)
}

/// Replay a certificate from its bare parameters: rebuild the extensions and
/// products and re-run the exact partial-sum comparison of
/// `p ⊗ r_1 ⊗ … ⊗ r_k` against `q ⊗ r_joint`. `delta`/`a` absent means no
/// extension stage ran (plain majorization or a direct catalyst).
pub fn replay_ctrump(
    p: &Dist,
    q: &Dist,
    delta: Option<&BigRational>,
    n1: u64,
    a: Option<&BigRational>,
    n2: u64,
    catalyst: Option<&Dist>,
) -> Result<bool> {
    let (ps, qs) = restrict_to_support(p, q)?;
    let psm = Pmf::from_dist(&ps);
    let qsm = Pmf::from_dist(&qs);
    let (delta, a) = match (delta, a) {
        (Some(d), Some(a)) => (d, a),
        _ => {
            return Ok(match catalyst {
                None => psm.majorizes(&qsm).is_none(),
                Some(c) => {
                    let cp = Pmf::from_dist(c);
                    psm.kron(&cp).majorizes(&qsm.kron(&cp)).is_none()
                }
            });
        }
    };
    let q_ab1 = extend_pmf_per_entry(&qsm, delta, n1)?;
    let q_b = tail_marginal(&stage1_mass(qs.dim(), delta), n1)?;
    let q_c = tail_marginal(a, n2)?;
    // left side: p with each auxiliary marginal injected independently
    let mut lhs = psm
        .kron(&qsm)
        .kron(&Pmf::from_dist(&q_b))
        .kron(&Pmf::from_dist(&q_c));
    // right side: the target next to the correlated joint
    let mut rhs = qsm.kron(&extend_pmf_uniform(&q_ab1, a, n2)?);
    if let Some(c) = catalyst {
        let cp = Pmf::from_dist(c);
        lhs = lhs.kron(&cp);
        rhs = rhs.kron(&cp);
    }
    Ok(lhs.majorizes(&rhs).is_none())
}

impl CtrumpWitness {
    /// Replay the certificate against a pair via [`replay_ctrump`].
    pub fn verify(&self, p: &Dist, q: &Dist) -> Result<bool> {
        replay_ctrump(
            p,
            q,
            self.delta.as_ref(),
            self.n1,
            self.a.as_ref(),
            self.n2,
            self.catalyst.as_ref(),
        )
    }

    /// Check that the per-subsystem marginals of the correlated joint equal
    /// the injected marginals exactly.
    pub fn marginals_consistent(&self) -> Result<bool> {
        if self.r_marginals.is_empty() {
            return Ok(true);
        }
        let labels: Vec<String> = self.r_joint.labels().to_vec();
        if labels.len() != self.r_marginals.len() {
            return Ok(false);
        }
        for (label, want) in labels.iter().zip(&self.r_marginals) {
            if &self.r_joint.marginal_dist(label)? != want {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
