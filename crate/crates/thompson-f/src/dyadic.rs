use num::bigint::BigInt;
use num::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An exact dyadic rational numerator / 2^exponent, kept canonical:
/// exponent = 0 or the numerator is odd.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(numerator: BigInt, exponent: u64) -> Dyadic {
        let mut d = Dyadic { numerator, exponent };
        d.normalize();
        d
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic { numerator: BigInt::from(n), exponent: 0 }
    }

    pub fn zero() -> Dyadic {
        Dyadic::from_int(0)
    }

    pub fn one() -> Dyadic {
        Dyadic::from_int(1)
    }

    /// k / 2^e.
    pub fn ratio(k: i64, e: u64) -> Dyadic {
        Dyadic::new(BigInt::from(k), e)
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        while self.exponent > 0 && (&self.numerator % 2u8).is_zero() {
            self.numerator /= 2;
            self.exponent -= 1;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    /// Multiply by 2^k (k may be negative).
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if k >= 0 {
            let mut n = self.numerator.clone();
            let mut e = self.exponent;
            let mut k = k as u64;
            // cancel against the exponent first to stay canonical cheaply
            let cancel = k.min(e);
            e -= cancel;
            k -= cancel;
            n <<= k;
            Dyadic { numerator: n, exponent: e }
        } else {
            Dyadic::new(self.numerator.clone(), self.exponent + (-k) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        // good enough for reporting; exact paths never use this
        let n = self.numerator.to_string().parse::<f64>().unwrap_or(f64::NAN);
        n / 2f64.powi(self.exponent as i32)
    }

    fn with_common_exponent(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, u64) {
        let e = a.exponent.max(b.exponent);
        let an = &a.numerator << (e - a.exponent);
        let bn = &b.numerator << (e - b.exponent);
        (an, bn, e)
    }

    pub fn min(a: Dyadic, b: Dyadic) -> Dyadic {
        if a <= b {
            a
        } else {
            b
        }
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (an, bn, e) = Dyadic::with_common_exponent(self, rhs);
        Dyadic::new(an + bn, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (an, bn, e) = Dyadic::with_common_exponent(self, rhs);
        Dyadic::new(an - bn, e)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { numerator: -&self.numerator, exponent: self.exponent }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (an, bn, _) = Dyadic::with_common_exponent(self, other);
        an.cmp(&bn)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    #[test]
    fn canonical_form() {
        let d = Dyadic::ratio(4, 3); // 4/8 = 1/2
        assert_eq!(d.numerator(), &BigInt::one());
        assert_eq!(d.exponent(), 1);
        assert_eq!(Dyadic::ratio(0, 7), Dyadic::zero());
    }

    #[test]
    fn arithmetic() {
        let half = Dyadic::ratio(1, 1);
        let quarter = Dyadic::ratio(1, 2);
        assert_eq!(&half + &quarter, Dyadic::ratio(3, 2));
        assert_eq!(&half - &quarter, quarter);
        assert_eq!(half.mul_pow2(1), Dyadic::one());
        assert_eq!(half.mul_pow2(-1), quarter);
        assert!(quarter < half && half < Dyadic::one());
    }
}
