//! Exact-arithmetic probability vectors and joint distributions.
//!
//! Every value is an arbitrary-precision rational and every structural
//! operation (sum, sort, Kronecker, marginal, rank) is exact. Verdicts that
//! depend on these operations never see float rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parse a probability entry: a rational string `"91/100"` or a decimal
/// string `"0.05"` (converted exactly to `1/20`).
pub fn parse_prob(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |m: &str| Error::InvalidProbability(s.to_string(), m.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
        let d: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int = if int.is_empty() { "0" } else { int };
        let i: BigInt = int.parse().map_err(|_| bad("bad integer part"))?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad fractional part"));
        }
        let f: BigInt = frac.parse().map_err(|_| bad("bad fractional part"))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let sign = if s.starts_with('-') { -BigInt::one() } else { BigInt::one() };
        return Ok(BigRational::new(i * &scale + sign * f, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad("not a rational or decimal"))?;
    Ok(BigRational::from(n))
}

fn check_entries(entries: &[BigRational]) -> Result<()> {
    if entries.is_empty() {
        return Err(Error::Empty);
    }
    for e in entries {
        if e.is_negative() {
            return Err(Error::NegativeEntry(e.to_string()));
        }
    }
    let sum: BigRational = entries.iter().sum();
    if !sum.is_one() {
        return Err(Error::NotNormalized(sum.to_string()));
    }
    Ok(())
}

/// A finite probability vector with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist {
    entries: Vec<BigRational>,
}

impl Dist {
    pub fn new(entries: Vec<BigRational>) -> Result<Self> {
        check_entries(&entries)?;
        Ok(Self { entries })
    }

    pub fn parse(entries: &[impl AsRef<str>]) -> Result<Self> {
        let v = entries.iter().map(|s| parse_prob(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    /// Uniform distribution on `m` outcomes.
    pub fn uniform(m: usize) -> Self {
        let e = BigRational::new(BigInt::one(), BigInt::from(m));
        Self { entries: vec![e; m] }
    }

    /// The pure distribution `(1, 0, ..., 0)` on `m` outcomes.
    pub fn pure(m: usize) -> Self {
        let mut entries = vec![BigRational::zero(); m];
        entries[0] = BigRational::one();
        Self { entries }
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Number of non-zero entries (exact zero test).
    pub fn rank(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim()
    }

    pub fn is_uniform(&self) -> bool {
        let first = &self.entries[0];
        self.entries.iter().all(|e| e == first)
    }

    /// True if the distribution contains only zeros and ones.
    pub fn is_pure(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero() || e.is_one())
    }

    pub fn min_entry(&self) -> &BigRational {
        self.entries.iter().min().expect("nonempty")
    }

    pub fn max_entry(&self) -> &BigRational {
        self.entries.iter().max().expect("nonempty")
    }

    /// Entries reordered in descending order.
    pub fn sort_desc(&self) -> Dist {
        let mut v = self.entries.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Dist { entries: v }
    }

    /// Kronecker product as a bipartite joint distribution with labels `A`, `B`.
    pub fn kron(&self, other: &Dist) -> JointDist {
        let mut tensor = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                tensor.push(a * b);
            }
        }
        JointDist {
            tensor,
            shape: vec![self.dim(), other.dim()],
            labels: vec!["A".into(), "B".into()],
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.to_string()).collect()
    }
}

impl Serialize for Dist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        Dist::parse(&v).map_err(serde::de::Error::custom)
    }
}

/// A multi-index probability tensor with named subsystems, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDist {
    tensor: Vec<BigRational>,
    shape: Vec<usize>,
    labels: Vec<String>,
}

impl JointDist {
    pub fn new(tensor: Vec<BigRational>, shape: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        let prod: usize = shape.iter().product();
        if prod != tensor.len() || shape.is_empty() {
            return Err(Error::ShapeMismatch { len: tensor.len(), prod });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if labels.len() != shape.len() {
            return Err(Error::ShapeMismatch { len: labels.len(), prod: shape.len() });
        }
        check_entries(&tensor)?;
        Ok(Self { tensor, shape, labels })
    }

    pub fn tensor(&self) -> &[BigRational] {
        &self.tensor
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.tensor.len()
    }

    /// Rename a subsystem. Swapping the roles of two systems is relabel plus
    /// [`JointDist::permute_subsystems`].
    pub fn relabel(&self, from: &str, to: &str) -> Result<JointDist> {
        let idx = self.label_index(from)?;
        if self.labels.iter().any(|l| l == to) {
            return Err(Error::DuplicateLabel(to.to_string()));
        }
        let mut labels = self.labels.clone();
        labels[idx] = to.to_string();
        Ok(JointDist { tensor: self.tensor.clone(), shape: self.shape.clone(), labels })
    }

    fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Reorder subsystems to the given label order.
    pub fn permute_subsystems(&self, order: &[&str]) -> Result<JointDist> {
        if order.len() != self.labels.len() {
            return Err(Error::ShapeMismatch { len: order.len(), prod: self.labels.len() });
        }
        let perm = order.iter().map(|l| self.label_index(l)).collect::<Result<Vec<_>>>()?;
        let new_shape: Vec<usize> = perm.iter().map(|&i| self.shape[i]).collect();
        let new_labels: Vec<String> = perm.iter().map(|&i| self.labels[i].clone()).collect();
        let strides = strides_of(&self.shape);
        let mut tensor = vec![BigRational::zero(); self.tensor.len()];
        let mut idx = vec![0usize; new_shape.len()];
        for t in tensor.iter_mut() {
            let mut src = 0;
            for (k, &i) in idx.iter().enumerate() {
                src += i * strides[perm[k]];
            }
            *t = self.tensor[src].clone();
            // row-major increment over the new shape
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < new_shape[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(JointDist { tensor, shape: new_shape, labels: new_labels })
    }

    /// Marginal on the kept subsystems, in their current relative order.
    pub fn marginal(&self, keep: &[&str]) -> Result<JointDist> {
        let keep_idx = keep.iter().map(|l| self.label_index(l)).collect::<Result<Vec<_>>>()?;
        let mut kept: Vec<usize> = keep_idx.clone();
        kept.sort_unstable();
        let new_shape: Vec<usize> = kept.iter().map(|&i| self.shape[i]).collect();
        let new_labels: Vec<String> = kept.iter().map(|&i| self.labels[i].clone()).collect();
        let strides = strides_of(&self.shape);
        let new_strides = strides_of(&new_shape);
        let mut tensor = vec![BigRational::zero(); new_shape.iter().product()];
        let mut idx = vec![0usize; self.shape.len()];
        for v in &self.tensor {
            let mut dst = 0;
            for (pos, &axis) in kept.iter().enumerate() {
                dst += idx[axis] * new_strides[pos];
            }
            tensor[dst] += v;
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < self.shape[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        let _ = strides;
        Ok(JointDist { tensor, shape: new_shape, labels: new_labels })
    }

    /// Marginal on a single subsystem, as a plain vector.
    pub fn marginal_dist(&self, label: &str) -> Result<Dist> {
        Ok(self.marginal(&[label])?.flatten())
    }

    /// Forget the subsystem structure; the multiset of entries is preserved.
    pub fn flatten(&self) -> Dist {
        Dist { entries: self.tensor.clone() }
    }
}

fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    strides
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(entries: &[&str]) -> Dist {
        Dist::parse(entries).unwrap()
    }

    #[test]
    fn parse_decimal_exact() {
        assert_eq!(parse_prob("0.05").unwrap(), BigRational::new(1.into(), 20.into()));
        assert_eq!(parse_prob("91/100").unwrap(), BigRational::new(91.into(), 100.into()));
        assert!(parse_prob("1/0").is_err());
        assert!(parse_prob("abc").is_err());
    }

    #[test]
    fn sum_must_be_one() {
        assert!(Dist::parse(&["1/2", "1/3"]).is_err());
        assert!(Dist::parse(&["1/2", "-1/2", "1"]).is_err());
        assert!(Dist::parse(&[] as &[&str]).is_err());
    }

    #[test]
    fn sort_desc_examples() {
        assert_eq!(
            d(&["1/20", "91/100", "1/25"]).sort_desc(),
            d(&["91/100", "1/20", "1/25"])
        );
        assert_eq!(d(&["1/2", "1/2"]).sort_desc(), d(&["1/2", "1/2"]));
        assert_eq!(d(&["0", "1/3", "2/3"]).sort_desc(), d(&["2/3", "1/3", "0"]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(d(&["1/2", "1/2", "0"]).rank(), 2);
        assert_eq!(d(&["91/100", "1/20", "1/25"]).rank(), 3);
        assert_eq!(d(&["1", "0", "0", "0"]).rank(), 1);
    }

    #[test]
    fn kron_examples() {
        let j = d(&["1", "0"]).kron(&d(&["1/2", "1/2"]));
        assert_eq!(j.tensor(), d(&["1/2", "1/2", "0", "0"]).entries());

        let u = Dist::uniform(2).kron(&Dist::uniform(2));
        assert!(u.tensor().iter().all(|e| *e == BigRational::new(1.into(), 4.into())));

        let j = d(&["91/100", "1/20", "1/25"]).kron(&d(&["39/40", "1/40"]));
        assert_eq!(j.shape(), &[3, 2]);
        assert_eq!(j.tensor()[0], BigRational::new(3549.into(), 4000.into()));
    }

    #[test]
    fn marginal_examples() {
        let p = d(&["91/100", "1/20", "1/25"]);
        let q = d(&["39/40", "1/40"]);
        let j = p.kron(&q);
        assert_eq!(j.marginal_dist("A").unwrap(), p);
        assert_eq!(j.marginal_dist("B").unwrap(), q);

        let diag = JointDist::new(
            vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::new(1.into(), 2.into()),
            ],
            vec![2, 2],
            vec!["A".into(), "B".into()],
        )
        .unwrap();
        assert_eq!(diag.marginal_dist("A").unwrap(), d(&["1/2", "1/2"]));
        assert_eq!(diag.marginal_dist("B").unwrap(), d(&["1/2", "1/2"]));
        assert!(diag.marginal(&["C"]).is_err());
    }

    #[test]
    fn flatten_preserves_entries() {
        let j = d(&["1/2", "1/2"]).kron(&d(&["2/3", "1/3"]));
        let f = j.flatten();
        assert_eq!(f.dim(), 4);
        let mut a = f.entries().to_vec();
        let mut b = j.tensor().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn permute_swaps_axes() {
        let p = d(&["2/3", "1/3"]);
        let q = d(&["3/4", "1/4"]);
        let j = p.kron(&q);
        let s = j.permute_subsystems(&["B", "A"]).unwrap();
        assert_eq!(s.marginal_dist("A").unwrap(), p);
        assert_eq!(s.marginal_dist("B").unwrap(), q);
        assert_eq!(s.shape(), &[2, 2]);
        assert_eq!(s.tensor()[1], &p.entries()[1] * &q.entries()[0]);
    }

    #[test]
    fn rank_multiplicative_under_kron() {
        let p = d(&["1/2", "1/2", "0"]);
        let q = d(&["1", "0"]);
        assert_eq!(p.kron(&q).flatten().rank(), p.rank() * q.rank());
    }
}
