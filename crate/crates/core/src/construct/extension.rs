//! The one-column-plus-uniform-tail extension family: given a marginal
//! `q = (q_1, …, q_m)`, the extension is the m×(n+1) bipartite distribution
//! with rows `(q_i − a_i, a_i/n, …, a_i/n)` for any `a_i ∈ [0, q_i]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::dist::{Dist, JointDist};
use crate::error::{Error, Result};
use crate::runs::Pmf;

/// How the per-row masses `a_i` are chosen.
#[derive(Debug, Clone)]
pub enum ExtensionMode {
    /// `a_i = q_i − δ` with `δ ∈ (0, min_i q_i)`.
    PerEntryDelta(BigRational),
    /// `a_i = a/m` with `a ∈ (0, m · min_i q_i)`.
    UniformA(BigRational),
    /// Arbitrary `a_i ∈ [0, q_i]`.
    Explicit(Vec<BigRational>),
}

#[derive(Debug, Clone)]
pub struct ExtensionParams {
    pub mode: ExtensionMode,
    /// Tail length; the extension lives on m×(n+1).
    pub n: u64,
}

impl ExtensionParams {
    pub fn per_entry_delta(delta: BigRational, n: u64) -> Self {
        Self { mode: ExtensionMode::PerEntryDelta(delta), n }
    }

    pub fn uniform_a(a: BigRational, n: u64) -> Self {
        Self { mode: ExtensionMode::UniformA(a), n }
    }

    pub fn explicit(a_list: Vec<BigRational>, n: u64) -> Self {
        Self { mode: ExtensionMode::Explicit(a_list), n }
    }

    /// The derived `a_i` list for a given marginal.
    pub fn a_list(&self, q: &Dist) -> Result<Vec<BigRational>> {
        let m = q.dim();
        let list: Vec<BigRational> = match &self.mode {
            ExtensionMode::PerEntryDelta(delta) => {
                if !delta.is_positive() || delta >= q.min_entry() {
                    return Err(Error::Domain(format!(
                        "delta = {delta} outside (0, min_i q_i = {})",
                        q.min_entry()
                    )));
                }
                q.entries().iter().map(|qi| qi - delta).collect()
            }
            ExtensionMode::UniformA(a) => {
                let bound = BigRational::from(BigInt::from(m)) * q.min_entry();
                if !a.is_positive() || *a >= bound {
                    return Err(Error::Domain(format!(
                        "a = {a} outside (0, m·min_i q_i = {bound})"
                    )));
                }
                let share = a / BigRational::from(BigInt::from(m));
                vec![share; m]
            }
            ExtensionMode::Explicit(list) => {
                if list.len() != m {
                    return Err(Error::DimMismatch(list.len(), m));
                }
                list.clone()
            }
        };
        for (ai, qi) in list.iter().zip(q.entries()) {
            if ai.is_negative() || ai > qi {
                return Err(Error::Domain(format!("a_i = {ai} outside [0, q_i = {qi}]")));
            }
        }
        Ok(list)
    }
}

/// Build the extension of `q` as a bipartite joint with labels `A`, `B`.
///
/// The marginal on `A` is exactly `q`; the marginal on `B` is
/// `(1 − a, a/n, …, a/n)` with `a = Σ a_i`.
pub fn extend(q: &Dist, params: &ExtensionParams) -> Result<JointDist> {
    if !q.is_full_rank() {
        return Err(Error::Domain("extension marginal must have full rank".into()));
    }
    if params.n == 0 {
        return Err(Error::Domain("tail length n must be at least 1".into()));
    }
    let a_list = params.a_list(q)?;
    let n = params.n as usize;
    let n_rat = BigRational::from(BigInt::from(params.n));
    let mut tensor = Vec::with_capacity(q.dim() * (n + 1));
    for (qi, ai) in q.entries().iter().zip(&a_list) {
        tensor.push(qi - ai);
        let tail = ai / &n_rat;
        for _ in 0..n {
            tensor.push(tail.clone());
        }
    }
    JointDist::new(tensor, vec![q.dim(), n + 1], vec!["A".into(), "B".into()])
}

/// The `B`-marginal `(1 − a, a/n, …, a/n)` of the extension.
pub fn extension_b_marginal(q: &Dist, params: &ExtensionParams) -> Result<Dist> {
    let a: BigRational = params.a_list(q)?.iter().sum();
    let n_rat = BigRational::from(BigInt::from(params.n));
    let mut entries = vec![BigRational::from(BigInt::from(1)) - &a];
    let tail = &a / n_rat;
    entries.extend(std::iter::repeat(tail).take(params.n as usize));
    Dist::new(entries)
}

/// Run-encoded extension of a run-encoded marginal with uniform `a_i = a/M`,
/// where `M` is the total dimension. Used on product-space marginals whose
/// materialization would be too large.
pub fn extend_pmf_uniform(q: &Pmf, a: &BigRational, n: u64) -> Result<Pmf> {
    let m = q.total();
    let bound = BigRational::from(BigInt::from(m)) * q.min_value();
    if !a.is_positive() || *a >= bound {
        return Err(Error::Domain(format!("a = {a} outside (0, M·min = {bound})")));
    }
    let share = a / BigRational::from(BigInt::from(m));
    let n_rat = BigRational::from(BigInt::from(n));
    let mut values = Vec::new();
    for (v, c) in q.runs() {
        values.push((v - &share, *c));
        values.push((&share / &n_rat, c * n as u128));
    }
    Ok(Pmf::from_values(values))
}

/// Run-encoded extension with per-entry masses `a_i = q_i − δ`: every row
/// becomes `(δ, (q_i − δ)/n, …)`, so the result has at most one run more
/// than `q` regardless of `n`.
pub fn extend_pmf_per_entry(q: &Pmf, delta: &BigRational, n: u64) -> Result<Pmf> {
    if !delta.is_positive() || delta >= q.min_value() {
        return Err(Error::Domain(format!("delta = {delta} outside (0, min = {})", q.min_value())));
    }
    let n_rat = BigRational::from(BigInt::from(n));
    let mut values = vec![(delta.clone(), q.total())];
    for (v, c) in q.runs() {
        values.push(((v - delta) / &n_rat, c * n as u128));
    }
    Ok(Pmf::from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(entries: &[&str]) -> Dist {
        Dist::parse(entries).unwrap()
    }

    fn r(s: &str) -> BigRational {
        crate::dist::parse_prob(s).unwrap()
    }

    #[test]
    fn worked_example_matrix() {
        let q = d(&["17/20", "7/50", "1/100"]);
        let params = ExtensionParams::explicit(vec![r("1/120"); 3], 1);
        let j = extend(&q, &params).unwrap();
        assert_eq!(j.shape(), &[3, 2]);
        let expect = ["101/120", "1/120", "79/600", "1/120", "1/600", "1/120"];
        for (got, want) in j.tensor().iter().zip(expect) {
            assert_eq!(got, &r(want));
        }
        assert_eq!(j.marginal_dist("A").unwrap(), q);
        assert_eq!(j.marginal_dist("B").unwrap(), d(&["39/40", "1/40"]));
        assert_eq!(extension_b_marginal(&q, &params).unwrap(), d(&["39/40", "1/40"]));
    }

    #[test]
    fn degenerate_all_zero_masses() {
        let q = d(&["2/3", "1/3"]);
        let j = extend(&q, &ExtensionParams::explicit(vec![r("0"), r("0")], 3)).unwrap();
        let expect = q.kron(&d(&["1", "0", "0", "0"]));
        assert_eq!(j.tensor(), expect.tensor());
    }

    #[test]
    fn boundary_full_masses() {
        let q = d(&["2/3", "1/3"]);
        let j = extend(&q, &ExtensionParams::explicit(q.entries().to_vec(), 2)).unwrap();
        assert_eq!(j.tensor()[0], r("0"));
        assert_eq!(j.tensor()[1], r("1/3"));
        assert_eq!(extension_b_marginal(&q, &ExtensionParams::explicit(q.entries().to_vec(), 2)).unwrap(),
            d(&["0", "1/2", "1/2"]));
    }

    #[test]
    fn invalid_masses_rejected() {
        let q = d(&["2/3", "1/3"]);
        assert!(extend(&q, &ExtensionParams::explicit(vec![r("1/2"), r("1/2")], 1)).is_err());
        assert!(extend(&q, &ExtensionParams::per_entry_delta(r("1/2"), 1)).is_err());
        assert!(extend(&q, &ExtensionParams::uniform_a(r("1/2"), 1)).is_ok());
        assert!(extend(&q, &ExtensionParams::uniform_a(r("2/3"), 1)).is_err());
        assert!(extend(&d(&["1/2", "1/2", "0"]), &ExtensionParams::uniform_a(r("1/10"), 1)).is_err());
    }

    #[test]
    fn per_entry_pmf_extension_matches_dist_extension() {
        let q = d(&["17/20", "7/50", "1/100"]);
        let delta = r("1/250");
        let j = extend(&q, &ExtensionParams::per_entry_delta(delta.clone(), 5)).unwrap();
        let via_pmf = extend_pmf_per_entry(&Pmf::from_dist(&q), &delta, 5).unwrap();
        assert_eq!(Pmf::from_dist(&j.flatten()), via_pmf);
        assert!(via_pmf.runs().len() <= q.dim() + 1);
    }

    #[test]
    fn pmf_extension_matches_dist_extension() {
        let q = d(&["17/20", "7/50", "1/100"]);
        let a = r("1/40");
        let j = extend(&q, &ExtensionParams::uniform_a(a.clone(), 4)).unwrap();
        let via_pmf = extend_pmf_uniform(&Pmf::from_dist(&q), &a, 4).unwrap();
        assert_eq!(Pmf::from_dist(&j.flatten()), via_pmf);
        assert!(via_pmf.is_normalized());
    }
}
