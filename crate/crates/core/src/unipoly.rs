//! Dense univariate polynomials over GF(p).
//!
//! Multiplication is tiered: schoolbook for short operands, Karatsuba above
//! [`KARATSUBA_THRESHOLD`], and an NTT when the modulus has enough 2-power
//! roots of unity and a rough cost model favours it. Division switches to
//! Newton iteration on the reversed divisor once both the divisor and the
//! quotient are long.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::ntt;

pub const KARATSUBA_THRESHOLD: usize = 32;
const NEWTON_THRESHOLD: usize = 64;

thread_local! {
    static SCALAR_MULS: Cell<u64> = const { Cell::new(0) };
}

pub(crate) fn count_scalar_muls(n: u64) {
    SCALAR_MULS.with(|c| c.set(c.get() + n));
}

/// Scalar multiplications performed by polynomial products on this thread.
pub fn scalar_mul_count() -> u64 {
    SCALAR_MULS.with(|c| c.get())
}

pub fn reset_scalar_mul_count() {
    SCALAR_MULS.with(|c| c.set(0));
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn schoolbook(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    count_scalar_muls((a.len() * b.len()) as u64);
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (slot, &y) in acc[i..].iter_mut().zip(b) {
            *slot += (x * y) as u128;
        }
    }
    let p = f.modulus() as u128;
    acc.into_iter().map(|v| (v % p) as u64).collect()
}

fn add_into(f: PrimeField, dst: &mut [u64], src: &[u64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.add(*d, s);
    }
}

fn sub_into(f: PrimeField, dst: &mut [u64], src: &[u64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.sub(*d, s);
    }
}

fn sum_slices(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    add_into(f, &mut out, short);
    out
}

pub(crate) fn karatsuba(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.is_empty() {
        return Vec::new();
    }
    let (n, m) = (a.len(), b.len());
    if m < KARATSUBA_THRESHOLD {
        return schoolbook(f, a, b);
    }
    let mut out = vec![0u64; n + m - 1];
    if n >= 2 * m {
        for (c, chunk) in a.chunks(m).enumerate() {
            let prod = karatsuba(f, chunk, b);
            add_into(f, &mut out[c * m..], &prod);
        }
        return out;
    }
    let half = n.div_ceil(2);
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half.min(m));
    let z0 = karatsuba(f, a0, b0);
    let z2 = karatsuba(f, a1, b1);
    let mut z1 = karatsuba(f, &sum_slices(f, a0, a1), &sum_slices(f, b0, b1));
    sub_into(f, &mut z1, &z0);
    sub_into(f, &mut z1, &z2);
    add_into(f, &mut out, &z0);
    add_into(f, &mut out[half..], &z1);
    if !z2.is_empty() {
        add_into(f, &mut out[2 * half..], &z2);
    }
    out
}

/// Product of raw coefficient slices, dispatching on size and field.
pub(crate) fn mul_slices(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let short = a.len().min(b.len());
    if short < KARATSUBA_THRESHOLD {
        return schoolbook(f, a, b);
    }
    if ntt::ntt_preferred(short, a.len().max(b.len())) {
        if let Some(out) = ntt::ntt_mul(f, a, b) {
            return out;
        }
    }
    karatsuba(f, a, b)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs)
    }
}

impl UniPoly {
    pub fn zero(field: PrimeField) -> Self {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// `x^k`.
    pub fn monomial(field: PrimeField, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1 % field.modulus();
        Self::from_coeffs(field, coeffs)
    }

    /// `x - c`.
    pub fn linear(field: PrimeField, c: u64) -> Self {
        Self::from_coeffs(field, vec![field.neg(field.reduce(c)), 1])
    }

    /// `(x - c)^e`, by binomial expansion.
    pub fn linear_power(field: PrimeField, c: u64, e: usize) -> Self {
        let neg_c = field.neg(field.reduce(c));
        let coeffs = (0..=e)
            .map(|i| {
                let b = field.binom(e as u64, i as u64);
                field.mul(b, field.pow(neg_c, (e - i) as u64))
            })
            .collect();
        Self::from_coeffs(field, coeffs)
    }

    /// Builds a polynomial from residues (reduced mod p, trailing zeros trimmed).
    pub fn from_coeffs(field: PrimeField, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        trim(&mut coeffs);
        UniPoly { field, coeffs }
    }

    pub fn from_elems(field: PrimeField, coeffs: &[FieldElement]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|c| c.value()).collect())
    }

    // Caller guarantees residues are already < p.
    pub(crate) fn from_raw(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        trim(&mut coeffs);
        UniPoly { field, coeffs }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.elem(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub(crate) fn coeff_raw(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, c: FieldElement) -> FieldElement {
        self.field.elem(self.eval_raw(c.value()))
    }

    pub(crate) fn eval_raw(&self, c: u64) -> u64 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &a| f.add(f.mul(acc, c), a))
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let c = f.reduce(c);
        if c == 0 {
            return Self::zero(f);
        }
        UniPoly {
            field: f,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `self -= c * other`.
    pub fn sub_scaled_assign(&mut self, other: &UniPoly, c: u64) {
        let f = self.field;
        if c == 0 || other.is_zero() {
            return;
        }
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0);
        }
        for (d, &s) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *d = f.sub(*d, f.mul(s, c));
        }
        trim(&mut self.coeffs);
    }

    /// `self *= (x - c)`.
    pub fn mul_linear_assign(&mut self, c: u64) {
        if self.is_zero() {
            return;
        }
        let f = self.field;
        self.coeffs.push(0);
        for i in (0..self.coeffs.len()).rev() {
            let lower = if i > 0 { self.coeffs[i - 1] } else { 0 };
            self.coeffs[i] = f.sub(lower, f.mul(self.coeffs[i], c));
        }
    }

    pub fn mul_x_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        UniPoly {
            field: self.field,
            coeffs,
        }
    }

    /// Largest `k` such that `x^k` divides `self` (0 for the zero polynomial).
    pub fn x_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|&&c| c == 0).count()
    }

    pub fn div_x_pow(&self, k: usize) -> Self {
        UniPoly::from_raw(self.field, self.coeffs.iter().skip(k).copied().collect())
    }

    pub fn truncate(&self, len: usize) -> Self {
        UniPoly::from_raw(self.field, self.coeffs.iter().take(len).copied().collect())
    }

    pub fn div_rem(&self, m: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        Divisor::new(m, self.len())?.div_rem(self)
    }

    pub fn rem(&self, m: &UniPoly) -> Result<UniPoly> {
        Ok(self.div_rem(m)?.1)
    }

    /// `self(x + c)`, by repeated synthetic division.
    pub fn taylor_shift(&self, c: FieldElement) -> UniPoly {
        self.taylor_shift_raw(c.value())
    }

    pub(crate) fn taylor_shift_raw(&self, c: u64) -> UniPoly {
        let f = self.field;
        let mut a = self.coeffs.clone();
        let n = a.len();
        if c == 0 || n < 2 {
            return self.clone();
        }
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                a[j] = f.add(a[j], f.mul(c, a[j + 1]));
            }
        }
        UniPoly::from_raw(f, a)
    }

    /// The `k`-th Hasse derivative at `c`, i.e. the coefficient of `x^k` in
    /// `self(x + c)`, computed with `k + 1` synthetic divisions by `x - c`.
    pub fn taylor_coeff(&self, c: u64, k: usize) -> u64 {
        let f = self.field;
        let mut cur = self.coeffs.clone();
        for _ in 0..k {
            if cur.is_empty() {
                return 0;
            }
            // quotient of cur by (x - c)
            let mut carry = 0u64;
            for v in cur.iter_mut().rev() {
                let next = f.add(*v, f.mul(carry, c));
                *v = carry;
                carry = next;
            }
            cur.pop();
        }
        cur.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, c), a))
    }
}

fn same_field(a: &UniPoly, b: &UniPoly) -> PrimeField {
    assert_eq!(a.field, b.field, "polynomials over different fields");
    a.field
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let f = same_field(self, rhs);
        UniPoly::from_raw(f, sum_slices(f, &self.coeffs, &rhs.coeffs))
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let f = same_field(self, rhs);
        let mut out = self.coeffs.clone();
        if out.len() < rhs.coeffs.len() {
            out.resize(rhs.coeffs.len(), 0);
        }
        sub_into(f, &mut out, &rhs.coeffs);
        UniPoly::from_raw(f, out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        let f = self.field;
        UniPoly::from_raw(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        let f = same_field(self, rhs);
        UniPoly::from_raw(f, mul_slices(f, &self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A divisor prepared for repeated remainders: holds the inverse of its
/// reversal modulo `x^k` for quotients of length up to `k`.
pub struct Divisor {
    m: UniPoly,
    lead_inv: u64,
    rev_inv: Option<Vec<u64>>,
}

impl Divisor {
    /// Prepares `m` for dividends of up to `max_len` coefficients.
    pub fn new(m: &UniPoly, max_len: usize) -> Result<Self> {
        let lead = m.leading_coeff().ok_or(Error::DivisionByZero)?;
        let f = m.field;
        let lead_inv = f.inv(lead).expect("nonzero leading coefficient");
        let quot_len = max_len.saturating_sub(m.len() - 1);
        let rev_inv = if m.len() >= NEWTON_THRESHOLD && quot_len >= NEWTON_THRESHOLD {
            Some(reversed_inverse(m, quot_len))
        } else {
            None
        };
        Ok(Divisor {
            m: m.clone(),
            lead_inv,
            rev_inv,
        })
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.m
    }

    pub fn rem(&self, a: &UniPoly) -> UniPoly {
        self.div_rem(a).expect("divisor is nonzero").1
    }

    pub fn div_rem(&self, a: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let f = self.m.field;
        assert_eq!(a.field, f, "polynomials over different fields");
        let dm = self.m.len() - 1;
        if a.len() <= dm {
            return Ok((UniPoly::zero(f), a.clone()));
        }
        let quot_len = a.len() - dm;
        match &self.rev_inv {
            Some(inv) if inv.len() >= quot_len => Ok(self.newton_div_rem(a, inv, quot_len)),
            _ if self.m.len() >= NEWTON_THRESHOLD && quot_len >= NEWTON_THRESHOLD => {
                let inv = reversed_inverse(&self.m, quot_len);
                Ok(self.newton_div_rem(a, &inv, quot_len))
            }
            _ => Ok(self.long_div_rem(a)),
        }
    }

    fn long_div_rem(&self, a: &UniPoly) -> (UniPoly, UniPoly) {
        let f = self.m.field;
        let m = &self.m.coeffs;
        let dm = m.len() - 1;
        let mut r = a.coeffs.clone();
        let mut q = vec![0u64; r.len() - dm];
        for i in (0..q.len()).rev() {
            let top = r[i + dm];
            if top == 0 {
                continue;
            }
            let c = f.mul(top, self.lead_inv);
            q[i] = c;
            for (k, &mk) in m.iter().enumerate() {
                r[i + k] = f.sub(r[i + k], f.mul(c, mk));
            }
        }
        count_scalar_muls((q.len() * m.len()) as u64);
        r.truncate(dm);
        (UniPoly::from_raw(f, q), UniPoly::from_raw(f, r))
    }

    fn newton_div_rem(&self, a: &UniPoly, inv: &[u64], quot_len: usize) -> (UniPoly, UniPoly) {
        let f = self.m.field;
        let dm = self.m.len() - 1;
        let rev_a: Vec<u64> = a.coeffs.iter().rev().take(quot_len).copied().collect();
        let mut q_rev = mul_slices(f, &rev_a, &inv[..quot_len]);
        q_rev.resize(quot_len, 0);
        q_rev.reverse();
        let q = UniPoly::from_raw(f, q_rev);
        let mut r: Vec<u64> = a.coeffs.iter().take(dm).copied().collect();
        r.resize(dm, 0);
        match self.low_product_wrapped(a, &q.coeffs) {
            Some(low) => sub_into(f, &mut r, &low),
            None => {
                let qm = mul_slices(f, &q.coeffs, &self.m.coeffs);
                sub_into(f, &mut r, &qm[..dm.min(qm.len())]);
            }
        }
        (q, UniPoly::from_raw(f, r))
    }

    /// Low `deg m` coefficients of `q * m` from a cyclic product of length
    /// `N >= deg m`: coefficients at `N` and above coincide with those of
    /// `a`, so the wrapped part can be subtracted back out.
    fn low_product_wrapped(&self, a: &UniPoly, q: &[u64]) -> Option<Vec<u64>> {
        let f = self.m.field;
        let dm = self.m.len() - 1;
        let full = q.len() + dm;
        let n = dm.max(full.div_ceil(2)).next_power_of_two();
        let (short, long) = (q.len().min(self.m.len()), q.len().max(self.m.len()));
        if short < KARATSUBA_THRESHOLD || !ntt::cyclic_preferred(n, short, long) {
            return None;
        }
        let plan = ntt::NttPlan::for_len(f, n)?;
        let fold = |v: &[u64]| {
            let mut out = vec![0u64; n];
            for (i, &c) in v.iter().enumerate() {
                out[i % n] = f.add(out[i % n], c);
            }
            plan.forward(&out)
        };
        let fq = fold(q);
        let fm = fold(&self.m.coeffs);
        let prod: Vec<u64> = fq.iter().zip(&fm).map(|(&x, &y)| f.mul(x, y)).collect();
        count_scalar_muls(n as u64);
        let mut cyc = plan.inverse(prod);
        for (i, c) in cyc.iter_mut().enumerate().take(dm) {
            *c = f.sub(*c, a.coeff_raw(i + n));
        }
        cyc.truncate(dm);
        Some(cyc)
    }
}

/// Inverse of `rev(m)` modulo `x^len`, by Newton iteration.
fn reversed_inverse(m: &UniPoly, len: usize) -> Vec<u64> {
    let f = m.field;
    let rev: Vec<u64> = m.coeffs.iter().rev().copied().collect();
    let mut g = vec![f.inv(rev[0]).expect("nonzero leading coefficient")];
    let mut prec = 1;
    while prec < len {
        prec = (2 * prec).min(len);
        let head = &rev[..prec.min(rev.len())];
        let mut e = mul_slices(f, head, &g);
        e.resize(prec, 0);
        // e <- 2 - rev*g
        for v in e.iter_mut() {
            *v = f.neg(*v);
        }
        e[0] = f.add(e[0], 2 % f.modulus());
        let mut next = mul_slices(f, &g, &e);
        next.resize(prec, 0);
        g = next;
    }
    g.truncate(len);
    g
}
