//! Randomized structural invariants: exact-arithmetic laws that must hold
//! for every input, checked over seeded random instances.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctrump_core::construct::extension::{extend, extension_b_marginal, ExtensionParams};
use ctrump_core::majorization::{pad_zeros, strip_common_zeros};
use ctrump_core::{majorizes, renyi, witness, Dist, Order, Pmf, Precision};

fn prec() -> Precision {
    Precision::default()
}

fn rand_dist(rng: &mut ChaCha8Rng, dim: usize) -> Dist {
    let nums: Vec<u32> = (0..dim).map(|_| rng.gen_range(1..=40)).collect();
    let den: u32 = nums.iter().sum();
    let entries =
        nums.iter().map(|&n| BigRational::new(BigInt::from(n), BigInt::from(den))).collect();
    Dist::new(entries).unwrap()
}

/// Mix two coordinates bistochastically; the result is majorized by `p`.
fn t_transform(p: &Dist, rng: &mut ChaCha8Rng) -> Dist {
    let dim = p.dim();
    let i = rng.gen_range(0..dim);
    let j = (i + rng.gen_range(1..dim)) % dim;
    let t = BigRational::new(BigInt::from(rng.gen_range(1u32..=99)), BigInt::from(100u32));
    let one = BigRational::from(BigInt::from(1u32));
    let mut e = p.entries().to_vec();
    let (pi, pj) = (e[i].clone(), e[j].clone());
    e[i] = (&one - &t) * &pi + &t * &pj;
    e[j] = &t * pi + (one - t) * pj;
    Dist::new(e).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixing_chains_are_majorized_and_witnessed(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim_p = rng.gen_range(2..=5);
        let p = rand_dist(&mut rng, dim_p);
        let mut q = p.clone();
        for _ in 0..rng.gen_range(1..=4) {
            q = t_transform(&q, &mut rng);
        }
        let v = majorizes(&p, &q).unwrap();
        prop_assert!(v.holds);
        // the constructed two-coordinate mixing chain replays to q exactly
        let w = witness(&p, &q).unwrap();
        prop_assert_eq!(w.replay(&p).unwrap(), q);
    }

    #[test]
    fn majorization_is_reflexive_and_padding_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim_p = rng.gen_range(2..=5);
        let p = rand_dist(&mut rng, dim_p);
        let q = rand_dist(&mut rng, p.dim());
        prop_assert!(majorizes(&p, &p).unwrap().holds);
        let verdict = majorizes(&p, &q).unwrap().holds;
        let pad = rng.gen_range(1..=3);
        let pp = pad_zeros(&p, p.dim() + pad).unwrap();
        let qp = pad_zeros(&q, q.dim() + pad).unwrap();
        prop_assert_eq!(majorizes(&pp, &qp).unwrap().holds, verdict);
        let (ps, qs) = strip_common_zeros(&pp, &qp).unwrap();
        prop_assert_eq!(majorizes(&ps, &qs).unwrap().holds, verdict);
    }

    #[test]
    fn kron_is_exact_and_sorted(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim_p = rng.gen_range(2..=4);
        let p = rand_dist(&mut rng, dim_p);
        let dim_q = rng.gen_range(2..=4);
        let q = rand_dist(&mut rng, dim_q);
        let joint = p.kron(&q);
        // exact marginals in both factors
        prop_assert_eq!(joint.marginal_dist("A").unwrap(), p.clone());
        prop_assert_eq!(joint.marginal_dist("B").unwrap(), q.clone());
        // the run-length product agrees with the materialized product
        let flat = Pmf::from_dist(&joint.flatten());
        let rle = Pmf::from_dist(&p).kron(&Pmf::from_dist(&q));
        prop_assert_eq!(flat, rle);
    }

    #[test]
    fn extension_keeps_the_prescribed_marginal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim_q = rng.gen_range(2..=4);
        let q = rand_dist(&mut rng, dim_q);
        if q.is_uniform() {
            return Ok(());
        }
        let n = rng.gen_range(1..=6);
        let k = BigRational::from(BigInt::from(rng.gen_range(2u32..=9)));
        let params = if rng.gen_bool(0.5) {
            ExtensionParams::per_entry_delta(q.min_entry() / k, n)
        } else {
            let bound = q.min_entry() * BigRational::from(BigInt::from(q.dim()));
            ExtensionParams::uniform_a(bound / k, n)
        };
        let joint = extend(&q, &params).unwrap();
        prop_assert_eq!(joint.marginal_dist("A").unwrap(), q.clone());
        prop_assert_eq!(
            joint.marginal_dist("B").unwrap(),
            extension_b_marginal(&q, &params).unwrap()
        );
        // the extension never sorts above q, so q majorizes its own tail split
        prop_assert!(majorizes(
            &pad_zeros(&q, joint.dim()).unwrap(),
            &joint.flatten()
        )
        .unwrap()
        .holds);
    }

    #[test]
    fn entropies_never_drop_under_mixing(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim_p = rng.gen_range(2..=5);
        let p = rand_dist(&mut rng, dim_p);
        let q = t_transform(&p, &mut rng);
        for ord in [
            Order::ZeroPlus,
            Order::finite(0.5).unwrap(),
            Order::One,
            Order::finite(2.0).unwrap(),
            Order::PlusInfinity,
            Order::Burg,
        ] {
            let before = renyi(&p, ord, prec()).to_f64();
            let after = renyi(&q, ord, prec()).to_f64();
            prop_assert!(after >= before - 1e-12, "{}: {before} -> {after}", ord.label());
        }
    }
}
