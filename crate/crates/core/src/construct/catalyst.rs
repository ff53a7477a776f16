//! Catalyst search: find a distribution `c` with `p ⊗ c ≻ q ⊗ c`.
//!
//! Candidates come from two sources: exact geometric profiles, and a seeded
//! Nelder–Mead run on a softmax parametrization scored by the worst
//! partial-sum margin in floating point. Float candidates are snapped to
//! nearby rationals and every returned catalyst is re-verified exactly, so
//! the floating-point stage can only miss catalysts, never fabricate one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::SearchConfig;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::runs::Pmf;

/// Largest denominator tried when snapping float catalysts to rationals.
const MAX_DENOM: u64 = 1_000_000;

/// Minimal float margin before a candidate is worth rationalizing.
const FLOAT_MARGIN: f64 = 1e-7;

const NM_ITERS: usize = 200;
const NM_RESTARTS: u64 = 24;

/// Worst partial-sum margin of `p ⊗ c` over `q ⊗ c` in floating point.
///
/// Uses the threshold form of majorization: `p ≻ q` iff
/// `Σ (p_i − t)₊ ≥ Σ (q_i − t)₊` for every threshold `t`; the minimum over
/// the kink points `t ∈ {entry values}` is the margin.
fn float_margin(pruns: &[(f64, f64)], qruns: &[(f64, f64)], c: &[f64]) -> f64 {
    let mut pts: Vec<(f64, f64, f64)> = Vec::with_capacity((pruns.len() + qruns.len()) * c.len());
    for ck in c {
        for (v, w) in pruns {
            pts.push((v * ck, *w, 0.0));
        }
        for (v, w) in qruns {
            pts.push((v * ck, 0.0, *w));
        }
    }
    pts.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    // prefix sums let Σ (x − t)₊ be read off at each kink
    let (mut sp, mut cp, mut sq, mut cq) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut margin = f64::INFINITY;
    for (v, wp, wq) in pts {
        sp += wp * v;
        cp += wp;
        sq += wq * v;
        cq += wq;
        let diff = (sp - cp * v) - (sq - cq * v);
        if diff < margin {
            margin = diff;
        }
    }
    margin
}

fn softmax(u: &[f64]) -> Vec<f64> {
    let mut z: Vec<f64> = u.to_vec();
    z.push(0.0);
    let m = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = z.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / s).collect()
}

/// Best rational approximation of `x ∈ (0, 1)` with denominator at most
/// `max_denom`, via continued fractions.
fn rationalize(x: f64, max_denom: u64) -> Option<BigRational> {
    if !(x > 0.0 && x < 1.0) {
        return None;
    }
    let (mut h0, mut k0, mut h1, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut frac = x;
    for _ in 0..40 {
        let a = frac.floor() as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_denom as i128 {
            break;
        }
        (h0, k0, h1, k1) = (h1, k1, h2, k2);
        let rem = frac - a as f64;
        if rem.abs() < 1e-15 {
            break;
        }
        frac = 1.0 / rem;
    }
    if k1 == 0 || h1 <= 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

fn exact_check(p: &Pmf, q: &Pmf, c: &Dist) -> bool {
    let cp = Pmf::from_dist(c);
    p.kron(&cp).majorizes(&q.kron(&cp)).is_none()
}

/// Snap a float catalyst to rationals at several denominator scales and
/// return the first exact hit.
fn snap_and_verify(p: &Pmf, q: &Pmf, c: &[f64]) -> Option<Dist> {
    for max_denom in [100u64, 1_000, 10_000, 100_000, MAX_DENOM] {
        let mut entries = Vec::with_capacity(c.len());
        let mut rest = BigRational::one();
        let mut ok = true;
        for x in &c[..c.len() - 1] {
            match rationalize(*x, max_denom) {
                Some(r) => {
                    rest -= &r;
                    entries.push(r);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || !rest.is_positive() {
            continue;
        }
        entries.push(rest);
        if let Ok(cand) = Dist::new(entries) {
            if exact_check(p, q, &cand) {
                return Some(cand);
            }
        }
    }
    None
}

/// Exact geometric profile `c_i ∝ x^i` of dimension `d`.
fn geometric(x: &BigRational, d: usize) -> Dist {
    let mut weights = Vec::with_capacity(d);
    let mut w = BigRational::one();
    for _ in 0..d {
        weights.push(w.clone());
        w *= x;
    }
    let total: BigRational = weights.iter().sum();
    Dist::new(weights.into_iter().map(|w| w / &total).collect()).expect("normalized by design")
}

/// Nelder–Mead maximization of the float margin over softmax parameters.
fn nelder_mead(
    pruns: &[(f64, f64)],
    qruns: &[(f64, f64)],
    dim: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, f64) {
    let score = |u: &[f64]| float_margin(pruns, qruns, &softmax(u));
    let mut simplex: Vec<Vec<f64>> = (0..=dim)
        .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let mut vals: Vec<f64> = simplex.iter().map(|u| score(u)).collect();
    for _ in 0..NM_ITERS {
        let mut idx: Vec<usize> = (0..simplex.len()).collect();
        idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap());
        let (best, worst) = (idx[0], idx[dim]);
        if vals[best] - vals[worst] < 1e-14 {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|k| {
                idx[..dim].iter().map(|&i| simplex[i][k]).sum::<f64>() / dim as f64
            })
            .collect();
        let at = |coef: f64| -> Vec<f64> {
            (0..dim)
                .map(|k| centroid[k] + coef * (centroid[k] - simplex[worst][k]))
                .collect()
        };
        let refl = at(1.0);
        let refl_v = score(&refl);
        if refl_v > vals[best] {
            let exp = at(2.0);
            let exp_v = score(&exp);
            if exp_v > refl_v {
                simplex[worst] = exp;
                vals[worst] = exp_v;
            } else {
                simplex[worst] = refl;
                vals[worst] = refl_v;
            }
        } else if refl_v > vals[idx[dim - 1]] {
            simplex[worst] = refl;
            vals[worst] = refl_v;
        } else {
            let con = at(-0.5);
            let con_v = score(&con);
            if con_v > vals[worst] {
                simplex[worst] = con;
                vals[worst] = con_v;
            } else {
                // shrink toward the best vertex
                for i in 0..simplex.len() {
                    if i == best {
                        continue;
                    }
                    for k in 0..dim {
                        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    }
                    vals[i] = score(&simplex[i]);
                }
            }
        }
    }
    let best = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    (softmax(&simplex[best]), vals[best])
}

/// Search for a catalyst making `p ⊗ c ≻ q ⊗ c`, trying dimensions
/// `1..=max_catalyst_dim`. Dimension 1 is the plain majorization check.
/// Returns `None` when the budget runs out without an exact hit.
pub fn search_catalyst(p: &Pmf, q: &Pmf, cfg: &SearchConfig) -> Result<Option<Dist>> {
    if p.total() != q.total() {
        return Err(Error::DimMismatch(p.total() as usize, q.total() as usize));
    }
    if p.majorizes(q).is_none() {
        return Ok(Some(Dist::new(vec![BigRational::one()]).expect("point mass")));
    }

    let to_f64 = |x: &Pmf| -> Vec<(f64, f64)> {
        x.runs().iter().map(|(v, c)| (v.to_f64().unwrap(), *c as f64)).collect()
    };
    let pruns = to_f64(p);
    let qruns = to_f64(q);

    let ratios: Vec<BigRational> = ["1/2", "1/3", "2/3", "1/4", "3/4", "2/5", "3/5", "4/5", "5/6", "9/10"]
        .iter()
        .map(|s| crate::dist::parse_prob(s).expect("literal ratio"))
        .collect();

    for d in 2..=cfg.max_catalyst_dim {
        for x in &ratios {
            let cand = geometric(x, d);
            if exact_check(p, q, &cand) {
                return Ok(Some(cand));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(d as u64));
        for _ in 0..NM_RESTARTS {
            let (c, margin) = nelder_mead(&pruns, &qruns, d - 1, &mut rng);
            if margin > FLOAT_MARGIN {
                if let Some(cand) = snap_and_verify(p, q, &c) {
                    return Ok(Some(cand));
                }
            }
        }
    }
    Ok(None)
}
