//! Number-theoretic transform over prime fields with large power-of-two
//! subgroups. Only used as an acceleration tier; every caller has a
//! Karatsuba fallback.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::field::PrimeField;
use crate::unipoly::count_scalar_muls;

thread_local! {
    static PLANS: RefCell<HashMap<(u64, u32), Rc<NttPlan>>> = RefCell::new(HashMap::new());
}

/// Precomputed twiddles for one transform length.
pub struct NttPlan {
    field: PrimeField,
    log_n: u32,
    /// `roots[i] = w^i` for `i < n/2`, `w` a primitive n-th root.
    roots: Vec<u64>,
    inv_roots: Vec<u64>,
    n_inv: u64,
}

impl NttPlan {
    /// Plan for the smallest power of two `>= len`, if the field supports
    /// it. Plans are cached per thread.
    pub fn for_len(field: PrimeField, len: usize) -> Option<Rc<Self>> {
        let log_n = len.max(1).next_power_of_two().trailing_zeros();
        let key = (field.modulus(), log_n);
        if let Some(plan) = PLANS.with(|c| c.borrow().get(&key).cloned()) {
            return Some(plan);
        }
        let plan = Rc::new(Self::build(field, log_n)?);
        PLANS.with(|c| c.borrow_mut().insert(key, plan.clone()));
        Some(plan)
    }

    fn build(field: PrimeField, log_n: u32) -> Option<Self> {
        let w = field.root_of_unity(log_n)?;
        let n = 1usize << log_n;
        let w_inv = field.inv(w)?;
        let half = n / 2;
        let mut roots = Vec::with_capacity(half);
        let mut inv_roots = Vec::with_capacity(half);
        let (mut r, mut ri) = (1u64, 1u64);
        for _ in 0..half {
            roots.push(r);
            inv_roots.push(ri);
            r = field.mul(r, w);
            ri = field.mul(ri, w_inv);
        }
        let n_inv = field.inv(n as u64 % field.modulus())?;
        Some(NttPlan {
            field,
            log_n,
            roots,
            inv_roots,
            n_inv,
        })
    }

    pub fn len(&self) -> usize {
        1 << self.log_n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Zero-pads `coeffs` to the plan length and transforms.
    pub fn forward(&self, coeffs: &[u64]) -> Vec<u64> {
        let mut v = vec![0u64; self.len()];
        v[..coeffs.len()].copy_from_slice(coeffs);
        self.transform(&mut v, &self.roots);
        v
    }

    /// Inverse transform; output still has plan length (caller trims).
    pub fn inverse(&self, mut values: Vec<u64>) -> Vec<u64> {
        self.transform(&mut values, &self.inv_roots);
        let f = self.field;
        for v in values.iter_mut() {
            *v = f.mul(*v, self.n_inv);
        }
        values
    }

    fn transform(&self, a: &mut [u64], roots: &[u64]) {
        let n = a.len();
        let f = self.field;
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let step = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let w = roots[k * step];
                    let u = a[start + k];
                    let v = f.mul(a[start + k + len / 2], w);
                    a[start + k] = f.add(u, v);
                    a[start + k + len / 2] = f.sub(u, v);
                }
            }
            len <<= 1;
        }
        count_scalar_muls((n as u64 / 2) * self.log_n as u64);
    }
}

// Cost model in microseconds, fitted on a 30-bit prime; only the ratio
// between the two matters.
const KARATSUBA_UNIT: f64 = 0.0046;
const TRANSFORM_UNIT: f64 = 0.0019;
const POINTWISE_UNIT: f64 = 0.002;

pub(crate) fn karatsuba_cost(short: usize, long: usize) -> f64 {
    long.div_ceil(short.max(1)) as f64 * (short as f64).powf(3f64.log2()) * KARATSUBA_UNIT
}

/// Cost of one transform of the padded length for `len` outputs.
pub(crate) fn transform_cost(len: usize) -> f64 {
    let n = len.max(1).next_power_of_two();
    TRANSFORM_UNIT * (n as f64) * (n.trailing_zeros().max(1) as f64)
}

pub(crate) fn pointwise_cost(len: usize) -> f64 {
    POINTWISE_UNIT * len.max(1).next_power_of_two() as f64
}

/// Whether a single product is expected to be cheaper by NTT than by
/// Karatsuba. Does not check that the field supports the length.
pub(crate) fn ntt_preferred(short: usize, long: usize) -> bool {
    cyclic_preferred(short + long - 1, short, long)
}

/// Whether a cyclic product of length `n` beats Karatsuba on the operands.
pub(crate) fn cyclic_preferred(n: usize, short: usize, long: usize) -> bool {
    3.0 * transform_cost(n) + pointwise_cost(n) < karatsuba_cost(short, long)
}

/// Product via NTT, or `None` when the field lacks a large enough 2-power
/// root of unity.
pub fn ntt_mul(field: PrimeField, a: &[u64], b: &[u64]) -> Option<Vec<u64>> {
    let out_len = a.len() + b.len() - 1;
    let plan = NttPlan::for_len(field, out_len)?;
    let fa = plan.forward(a);
    let fb = plan.forward(b);
    let prod: Vec<u64> = fa.iter().zip(&fb).map(|(&x, &y)| field.mul(x, y)).collect();
    count_scalar_muls(prod.len() as u64);
    let mut out = plan.inverse(prod);
    out.truncate(out_len);
    Some(out)
}
