//! Exact coefficient fields.
//!
//! A [`Field`] is a descriptor value that knows how to do arithmetic on its
//! element type. This keeps runtime moduli (`F_p` with `p` read from a file)
//! out of the element representation.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Parses an integer or `p/q` literal.
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn render(&self, a: &Self::Elem) -> String;
    /// Field descriptor as written in algebra files: `Q` or `Fp:<p>`.
    fn descriptor(&self) -> String;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `a += b * c`
    fn add_mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *a = self.add(a, &self.mul(b, c));
    }

    /// An integer vector spanning the same line as `v`, when the field is ℚ.
    fn clear_denominators(&self, _v: &[(usize, Self::Elem)]) -> Option<Vec<(usize, BigInt)>> {
        None
    }

    fn sign(&self, negative: bool) -> Self::Elem {
        if negative {
            self.neg(&self.one())
        } else {
            self.one()
        }
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn clear_denominators(&self, v: &[(usize, BigRational)]) -> Option<Vec<(usize, BigInt)>> {
        let l = denominator_lcm(v.iter().map(|(_, x)| x));
        Some(v.iter().map(|(i, x)| (*i, (x * &l).to_integer())).collect())
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::MalformedCoefficient(s.to_string());
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(p, q))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }

    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn descriptor(&self) -> String {
        "Q".to_string()
    }
}

/// The prime field `F_p`, elements stored as canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Rejects composite moduli and the characteristics 2 and 3, where the
    /// signs of the brace calculus degenerate.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::ModulusNotPrime(p));
        }
        if p <= 3 {
            return Err(Error::SmallCharacteristic(p));
        }
        if p >= 1 << 31 {
            return Err(Error::ModulusTooLarge(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        r.try_into().expect("residue fits in u64")
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn parse(&self, s: &str) -> Result<u64> {
        let q = Rationals.parse(s)?;
        let num = self.reduce_big(q.numer());
        let den = self.reduce_big(q.denom());
        let den_inv = self
            .inv(&den)
            .ok_or_else(|| Error::MalformedCoefficient(format!("{s} (denominator divisible by {})", self.p)))?;
        Ok(self.mul(&num, &den_inv))
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }

    fn descriptor(&self) -> String {
        format!("Fp:{}", self.p)
    }
}

/// A rational scalar rendered without the `Ratio` debug noise.
pub struct DisplayElem<'a, F: Field>(pub &'a F, pub &'a F::Elem);

impl<F: Field> Display for DisplayElem<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render(self.1))
    }
}

/// Least common multiple of the denominators, used to clear a rational row.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse() {
        let q = Rationals;
        assert_eq!(q.parse("3").unwrap(), q.from_i64(3));
        assert_eq!(q.parse("-2/4").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(matches!(q.parse("1/0"), Err(Error::MalformedCoefficient(_))));
        assert!(matches!(q.parse("x"), Err(Error::MalformedCoefficient(_))));
        assert_eq!(q.render(&q.parse("6/4").unwrap()), "3/2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.from_i64(-1), 100);
        assert_eq!(f.mul(&f.inv(&7).unwrap(), &7), 1);
        assert_eq!(f.parse("1/2").unwrap(), 51);
        assert!(f.parse("1/101").is_err());
    }

    #[test]
    fn prime_field_rejects() {
        assert!(matches!(PrimeField::new(6), Err(Error::ModulusNotPrime(6))));
        assert!(matches!(PrimeField::new(3), Err(Error::SmallCharacteristic(3))));
        assert!(matches!(PrimeField::new(1), Err(Error::ModulusNotPrime(1))));
    }
}
