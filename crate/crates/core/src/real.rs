//! Configurable-precision real arithmetic on top of [`astro_float`].
//!
//! All entropy-side computations go through [`Real`], which carries its
//! working precision in bits. Exact rationals are converted in without loss
//! (numerator and denominator separately, then one rounded division).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision, expressed in decimal digits (the CLI-facing dial).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Self { digits: digits.max(1) }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa bits, with guard bits on top of the decimal request.
    pub fn bits(&self) -> usize {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self { digits: 50 }
    }
}

/// A finite high-precision real number.
#[derive(Debug, Clone)]
pub struct Real {
    v: BigFloat,
    p: usize,
}

impl Real {
    pub fn zero(prec: Precision) -> Self {
        Self { v: BigFloat::from_i64(0, prec.bits()), p: prec.bits() }
    }

    pub fn from_u64(x: u64, prec: Precision) -> Self {
        Self { v: BigFloat::from_u64(x, prec.bits()), p: prec.bits() }
    }

    pub fn from_f64(x: f64, prec: Precision) -> Self {
        Self { v: BigFloat::from_f64(x, prec.bits()), p: prec.bits() }
    }

    fn from_bigint(x: &BigInt, p: usize) -> BigFloat {
        // Decimal digits of a BigInt are exact; parse at enough precision to
        // hold every bit of the integer plus the working precision.
        let need = p + x.bits() as usize + 8;
        with_consts(|cc| BigFloat::parse(&x.to_string(), Radix::Dec, need, RM, cc))
    }

    pub fn from_rational(x: &BigRational, prec: Precision) -> Self {
        let p = prec.bits();
        let num = Self::from_bigint(x.numer(), p);
        let den = Self::from_bigint(x.denom(), p);
        Self { v: num.div(&den, p, RM), p }
    }

    pub fn ln(&self) -> Self {
        let v = with_consts(|cc| self.v.ln(self.p, RM, cc));
        Self { v, p: self.p }
    }

    pub fn exp(&self) -> Self {
        let v = with_consts(|cc| self.v.exp(self.p, RM, cc));
        Self { v, p: self.p }
    }

    /// `self^e` for positive `self`, computed as `exp(e · ln self)` at the
    /// working precision. (The library's own power routine can escalate its
    /// internal precision unboundedly for fractional exponents.)
    pub fn pow(&self, e: &Real) -> Self {
        let p = self.p.max(e.p);
        let v = with_consts(|cc| {
            let ln = self.v.ln(p, RM, cc);
            ln.mul(&e.v, p, RM).exp(p, RM, cc)
        });
        Self { v, p }
    }

    pub fn abs(&self) -> Self {
        Self { v: self.v.abs(), p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.v.is_positive() && !self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.v.is_zero() {
            return 0.0;
        }
        let (words, _n, sign, e, _) = self.v.as_raw_parts().expect("finite value");
        // Mantissa words are little-endian; the value is 0.m * 2^e with the
        // top bit of the last word set.
        let len = words.len();
        let hi = words[len - 1] as u128;
        let lo = if len >= 2 { words[len - 2] as u128 } else { 0 };
        let m = (((hi << 64) | lo) as f64) * 2f64.powi(-128);
        let mag = m * 2f64.powi(e);
        if sign == astro_float::Sign::Neg {
            -mag
        } else {
            mag
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.partial_cmp(&other.v)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $bf_method:ident) => {
        impl $trait for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let p = self.p.max(rhs.p);
                Real { v: self.v.$bf_method(&rhs.v, p, RM), p }
            }
        }
        impl $trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { v: self.v.clone().neg(), p: self.p }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}
