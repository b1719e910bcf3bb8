//! Small dense matrices over `F[x]`.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::ntt::{self, NttPlan};
use crate::unipoly::{mul_slices, Divisor, UniPoly, KARATSUBA_THRESHOLD};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<UniPoly>,
}

impl PolyMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            field,
            rows,
            cols,
            entries: vec![UniPoly::zero(field); rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = UniPoly::one(field);
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: Vec<Vec<UniPoly>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(PolyMatrix {
            field,
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &UniPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: UniPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[UniPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [UniPoly] {
        &mut self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Largest entry degree; `None` if every entry is zero.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(UniPoly::degree).max()
    }

    fn max_len(&self) -> usize {
        self.entries.iter().map(UniPoly::len).max().unwrap_or(0)
    }

    /// `row_i -= c * row_k` (constant `c`).
    pub fn sub_scaled_row(&mut self, i: usize, k: usize, c: u64) {
        assert_ne!(i, k);
        let cols = self.cols;
        let (a, b) = if i < k {
            let (lo, hi) = self.entries.split_at_mut(k * cols);
            (&mut lo[i * cols..(i + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = self.entries.split_at_mut(i * cols);
            (&mut hi[..cols], &lo[k * cols..(k + 1) * cols])
        };
        for (d, s) in a.iter_mut().zip(b) {
            d.sub_scaled_assign(s, c);
        }
    }

    /// `row_i *= (x - c)`.
    pub fn mul_row_linear(&mut self, i: usize, c: u64) {
        for e in self.row_mut(i) {
            e.mul_linear_assign(c);
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        assert_eq!(self.field, other.field, "matrices over different fields");
        let (la, lb) = (self.max_len(), other.max_len());
        if la.min(lb) >= KARATSUBA_THRESHOLD && self.batch_preferred(other, la + lb - 1) {
            if let Some(plan) = NttPlan::for_len(self.field, la + lb - 1) {
                return Ok(self.mul_transformed(other, &plan));
            }
        }
        Ok(self.mul_entrywise(other))
    }

    // Transforming every entry once against multiplying entry pairs directly.
    fn batch_preferred(&self, other: &PolyMatrix, out_len: usize) -> bool {
        let (r, k, c) = (self.rows, self.cols, other.cols);
        let transforms = (r * k + k * c + r * c) as f64;
        let batched = transforms * ntt::transform_cost(out_len)
            + (r * k * c) as f64 * ntt::pointwise_cost(out_len);
        let mut direct = 0.0;
        for i in 0..r {
            for j in 0..c {
                for m in 0..k {
                    let (x, y) = (self.get(i, m).len(), other.get(m, j).len());
                    let (short, long) = (x.min(y), x.max(y));
                    if short >= KARATSUBA_THRESHOLD {
                        direct += if ntt::ntt_preferred(short, long) {
                            3.0 * ntt::transform_cost(short + long - 1)
                                + ntt::pointwise_cost(short + long - 1)
                        } else {
                            ntt::karatsuba_cost(short, long)
                        };
                    }
                }
            }
        }
        batched < direct
    }

    fn mul_entrywise(&self, other: &PolyMatrix) -> PolyMatrix {
        let f = self.field;
        let mut out = PolyMatrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Vec<u64> = Vec::new();
                for k in 0..self.cols {
                    let prod = mul_slices(f, self.get(i, k).coeffs(), other.get(k, j).coeffs());
                    if acc.len() < prod.len() {
                        acc.resize(prod.len(), 0);
                    }
                    for (a, p) in acc.iter_mut().zip(prod) {
                        *a = f.add(*a, p);
                    }
                }
                out.set(i, j, UniPoly::from_raw(f, acc));
            }
        }
        out
    }

    // Each entry is transformed once; products accumulate pointwise.
    fn mul_transformed(&self, other: &PolyMatrix, plan: &NttPlan) -> PolyMatrix {
        let f = self.field;
        let fwd = |m: &PolyMatrix| -> Vec<Option<Vec<u64>>> {
            m.entries
                .iter()
                .map(|e| (!e.is_zero()).then(|| plan.forward(e.coeffs())))
                .collect()
        };
        let ta = fwd(self);
        let tb = fwd(other);
        let n = plan.len();
        let mut out = PolyMatrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = vec![0u64; n];
                let mut any = false;
                for k in 0..self.cols {
                    if let (Some(a), Some(b)) = (&ta[i * self.cols + k], &tb[k * other.cols + j]) {
                        any = true;
                        for ((s, &x), &y) in acc.iter_mut().zip(a).zip(b) {
                            *s = f.add(*s, f.mul(x, y));
                        }
                    }
                }
                if any {
                    out.set(i, j, UniPoly::from_raw(f, plan.inverse(acc)));
                }
            }
        }
        out
    }

    pub fn reduce_with(&self, div: &Divisor) -> PolyMatrix {
        PolyMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| div.rem(e)).collect(),
        }
    }
}
