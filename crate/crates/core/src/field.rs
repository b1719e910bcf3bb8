//! Prime field arithmetic GF(p) with a runtime modulus.
//!
//! [`PrimeField`] is a small `Copy` context carrying the modulus. The hot
//! polynomial loops work on raw `u64` residues through the context methods;
//! [`FieldElement`] is the checked scalar type exposed at API boundaries.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    /// Largest `k` with `2^k | p - 1`.
    two_adicity: u32,
    /// Primitive `2^two_adicity`-th root of unity (0 when `p == 2`).
    two_adic_root: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut field = PrimeField {
            p,
            two_adicity: 0,
            two_adic_root: 0,
        };
        if p > 2 {
            let order = p - 1;
            let factors = distinct_prime_factors(order);
            let generator = (2..p)
                .find(|&g| factors.iter().all(|&q| field.pow(g, order / q) != 1))
                .expect("multiplicative group of a prime field is cyclic");
            let k = order.trailing_zeros();
            field.two_adicity = k;
            field.two_adic_root = field.pow(generator, order >> k);
        }
        Ok(field)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn two_adicity(&self) -> u32 {
        self.two_adicity
    }

    /// Primitive `2^log_n`-th root of unity, if the field has one.
    pub fn root_of_unity(&self, log_n: u32) -> Option<u64> {
        if self.p == 2 || log_n > self.two_adicity {
            return None;
        }
        let mut r = self.two_adic_root;
        for _ in log_n..self.two_adicity {
            r = self.mul(r, r);
        }
        Some(r)
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i64) as u64)
    }

    /// Binomial coefficient `C(i, k)` reduced mod p, by Lucas' theorem.
    pub fn binom(&self, mut i: u64, mut k: u64) -> u64 {
        if k > i {
            return 0;
        }
        let mut acc = 1 % self.p;
        while k > 0 {
            let (ni, ki) = (i % self.p, k % self.p);
            if ki > ni {
                return 0;
            }
            acc = self.mul(acc, self.small_binom(ni, ki));
            i /= self.p;
            k /= self.p;
        }
        acc
    }

    // n < p, so every factor of k! is invertible.
    fn small_binom(&self, n: u64, k: u64) -> u64 {
        let k = k.min(n - k);
        let mut num = 1u64;
        let mut den = 1u64;
        for t in 0..k {
            num = self.mul(num, n - t);
            den = self.mul(den, t + 1);
        }
        self.mul(num, self.inv(den).expect("k! is a unit for k < p"))
    }

    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.p,
            field: *self,
        }
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.elem(v.rem_euclid(self.p as i64) as u64)
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }
}

/// A residue in `[0, p)` tagged with the field it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p, other.field.p));
        }
        Ok(())
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        self.check(&rhs)?;
        Ok(self.field.elem(self.field.add(self.value, rhs.value)))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.check(&rhs)?;
        Ok(self.field.elem(self.field.sub(self.value, rhs.value)))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        self.check(&rhs)?;
        Ok(self.field.elem(self.field.mul(self.value, rhs.value)))
    }

    pub fn inv(self) -> Result<Self> {
        self.field
            .inv(self.value)
            .map(|v| self.field.elem(v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(self, exp: u64) -> Self {
        self.field.elem(self.field.pow(self.value, exp))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Div for FieldElement {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inv().expect("division by zero");
        self.checked_mul(inv).expect("field mismatch")
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.field.elem(self.field.neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn exact_binom(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for t in 0..k {
            acc = acc * (n - t) as u128 / (t + 1) as u128;
        }
        acc
    }

    #[test]
    fn arithmetic_examples() {
        let f7 = gf(7);
        assert_eq!((f7.elem(3) + f7.elem(5)).value(), 1);
        assert_eq!((f7.elem(3) * f7.elem(5)).value(), 1);
        let f2 = gf(2);
        assert_eq!((f2.elem(1) + f2.elem(1)).value(), 0);
        assert_eq!((f7.elem(2) - f7.elem(5)).value(), 4);
        assert_eq!((-f7.elem(0)).value(), 0);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(gf(7).elem(3).inv().unwrap().value(), 5);
        assert_eq!(gf(13).elem(1).inv().unwrap().value(), 1);
        assert_eq!(gf(101).elem(2).inv().unwrap().value(), 51);
        assert_eq!(gf(101).elem(0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = gf(7).elem(3);
        let b = gf(11).elem(3);
        assert_eq!(a.checked_add(b), Err(Error::FieldMismatch(7, 11)));
        assert_eq!(a.checked_mul(b), Err(Error::FieldMismatch(7, 11)));
    }

    #[test]
    fn construction_checks_primality() {
        assert_eq!(PrimeField::new(15), Err(Error::NotPrime(15)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeField::new(0), Err(Error::NotPrime(0)));
        assert!(matches!(
            PrimeField::new(1 << 33),
            Err(Error::ModulusTooLarge(_))
        ));
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(998_244_353).is_ok());
    }

    #[test]
    fn inverse_exhaustive_small_primes() {
        for p in [2u64, 3, 5, 7, 11, 13, 101] {
            let f = gf(p);
            for a in 1..p {
                let e = f.elem(a);
                assert_eq!((e * e.inv().unwrap()).value(), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(gf(7).binom(2, 1), 2);
        assert_eq!(gf(2).binom(4, 2), 0);
        assert_eq!(gf(5).binom(5, 2), 0);
        assert_eq!(gf(7).binom(3, 5), 0);
        assert_eq!(gf(7).binom(0, 0), 1);
    }

    #[test]
    fn binomial_matches_exact_integers() {
        for p in [2u64, 3, 5] {
            let f = gf(p);
            for n in 0..=64u64 {
                for k in 0..=n + 1 {
                    let want = (exact_binom(n, k) % p as u128) as u64;
                    assert_eq!(f.binom(n, k), want, "p={p} C({n},{k})");
                }
            }
        }
    }

    #[test]
    fn pascal_identity() {
        for p in [2u64, 7, 101] {
            let f = gf(p);
            for i in 1..200u64 {
                for k in 1..=i {
                    assert_eq!(
                        f.binom(i, k),
                        f.add(f.binom(i - 1, k - 1), f.binom(i - 1, k))
                    );
                }
            }
        }
    }

    #[test]
    fn roots_of_unity() {
        let f = gf(998_244_353);
        assert_eq!(f.two_adicity(), 23);
        let w = f.root_of_unity(10).unwrap();
        assert_eq!(f.pow(w, 1 << 10), 1);
        assert_ne!(f.pow(w, 1 << 9), 1);
        assert!(gf(101).root_of_unity(3).is_none());
        assert!(gf(2).root_of_unity(0).is_none());
    }
}
