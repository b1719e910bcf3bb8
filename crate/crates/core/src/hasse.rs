//! Hasse derivatives of bivariate polynomials and the small matrices that
//! hold them for one interpolation point.

use crate::bipoly::BiPoly;
use crate::field::PrimeField;
use crate::unipoly::{Divisor, UniPoly};

/// A derivative order `(dx, dy)`; it belongs to `D_s` when `dx + dy < s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivOrder {
    pub dx: usize,
    pub dy: usize,
}

/// All orders with `dx + dy < s`, sorted lexicographically on `(dx, dy)`.
pub fn enumerate_ds(s: usize) -> Vec<DerivOrder> {
    let mut out = Vec::with_capacity(s * (s + 1) / 2);
    for dx in 0..s {
        for dy in 0..s - dx {
            out.push(DerivOrder { dx, dy });
        }
    }
    out
}

/// `s x s` matrix with `H[dx][dy]` the `(dx,dy)` Hasse derivative at a point.
/// Entries with `dx + dy >= s` are kept at zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseMatrix {
    field: PrimeField,
    s: usize,
    data: Vec<u64>,
}

impl HasseMatrix {
    pub fn zero(field: PrimeField, s: usize) -> Self {
        HasseMatrix {
            field,
            s,
            data: vec![0; s * s],
        }
    }

    /// Builds from a row-major `s x s` array; anti-triangle is cleared.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Self {
        let s = rows.len();
        let mut h = Self::zero(field, s);
        for (dx, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), s, "Hasse matrix must be square");
            for (dy, &v) in row.iter().enumerate() {
                if dx + dy < s {
                    h.data[dx * s + dy] = field.reduce(v);
                }
            }
        }
        h
    }

    /// Hasse matrix of `q` at `(x0, y0)`: reduce each row modulo
    /// `(x - x0)^s`, shift it to the origin, then recombine the rows for the
    /// shift in `y`.
    pub fn of(q: &BiPoly, x0: u64, y0: u64, s: usize) -> Self {
        let f = q.field();
        let modulus = UniPoly::linear_power(f, x0, s);
        let div = Divisor::new(&modulus, 0).expect("(x - x0)^s is nonzero");
        Self::of_reduced(&q.reduce_with(&div), x0, y0, s)
    }

    /// Same as [`HasseMatrix::of`] for a `q` whose rows already have degree `< s`.
    pub fn of_reduced(q: &BiPoly, x0: u64, y0: u64, s: usize) -> Self {
        let f = q.field();
        let mut h = Self::zero(f, s);
        let centered: Vec<UniPoly> = q.rows().iter().map(|r| r.taylor_shift_raw(x0)).collect();
        let y_pows: Vec<u64> = (0..centered.len()).map(|e| f.pow(y0, e as u64)).collect();
        for dy in 0..s.min(centered.len()) {
            for (j, row) in centered.iter().enumerate().skip(dy) {
                if row.is_zero() {
                    continue;
                }
                let k = f.mul(f.binom(j as u64, dy as u64), y_pows[j - dy]);
                if k == 0 {
                    continue;
                }
                for dx in 0..(s - dy).min(row.len()) {
                    let slot = &mut h.data[dx * s + dy];
                    *slot = f.add(*slot, f.mul(k, row.coeffs()[dx]));
                }
            }
        }
        h
    }

    /// A single entry computed straight from the full-degree polynomial,
    /// without any modular reduction.
    pub fn entry_of(q: &BiPoly, x0: u64, y0: u64, dx: usize, dy: usize) -> u64 {
        let f = q.field();
        let mut acc = 0;
        for (j, row) in q.rows().iter().enumerate().skip(dy) {
            if row.is_zero() {
                continue;
            }
            let k = f.mul(f.binom(j as u64, dy as u64), f.pow(y0, (j - dy) as u64));
            if k == 0 {
                continue;
            }
            acc = f.add(acc, f.mul(k, row.taylor_coeff(x0, dx)));
        }
        acc
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn get(&self, dx: usize, dy: usize) -> u64 {
        self.data[dx * self.s + dy]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// The matrix of `(x - x0) * q`: every row moves down by one, row 0
    /// becomes zero, and entries leaving the anti-triangle are dropped.
    pub fn shift_down(&self) -> HasseMatrix {
        let s = self.s;
        let mut out = Self::zero(self.field, s);
        for dx in 1..s {
            for dy in 0..s - dx {
                out.data[dx * s + dy] = self.data[(dx - 1) * s + dy];
            }
        }
        out
    }

    /// `self - c * other`, entrywise.
    pub fn combine(&self, other: &HasseMatrix, c: u64) -> HasseMatrix {
        assert_eq!(self.s, other.s, "Hasse matrices of different size");
        let f = self.field;
        HasseMatrix {
            field: f,
            s: self.s,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, f.mul(c, b)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Straight from the definition-level sum:
    /// `sum_{i>=dx, j>=dy} C(i,dx) C(j,dy) q_ij x0^(i-dx) y0^(j-dy)`.
    fn formula_entry(q: &BiPoly, x0: u64, y0: u64, dx: usize, dy: usize) -> u64 {
        let f = q.field();
        let mut acc = 0;
        for (i, j, c) in q.terms() {
            if i < dx || j < dy {
                continue;
            }
            let t = f.mul(
                f.mul(f.binom(i as u64, dx as u64), f.binom(j as u64, dy as u64)),
                f.mul(
                    c,
                    f.mul(f.pow(x0, (i - dx) as u64), f.pow(y0, (j - dy) as u64)),
                ),
            );
            acc = f.add(acc, t);
        }
        acc
    }

    fn random_bipoly(f: PrimeField, rng: &mut ChaCha8Rng, ell: usize, xdeg: usize) -> BiPoly {
        let terms: Vec<(usize, usize, i64)> = (0..(ell + 1) * (xdeg + 1))
            .map(|_| {
                (
                    rng.gen_range(0..=xdeg),
                    rng.gen_range(0..=ell),
                    rng.gen_range(0..f.modulus() as i64),
                )
            })
            .collect();
        BiPoly::from_terms(f, ell, &terms).unwrap()
    }

    #[test]
    fn enumerate_ds_examples() {
        let p = |v: &[(usize, usize)]| -> Vec<DerivOrder> {
            v.iter().map(|&(dx, dy)| DerivOrder { dx, dy }).collect()
        };
        assert_eq!(enumerate_ds(1), p(&[(0, 0)]));
        assert_eq!(enumerate_ds(2), p(&[(0, 0), (0, 1), (1, 0)]));
        assert_eq!(
            enumerate_ds(3),
            p(&[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)])
        );
        for s in 1..8 {
            let ds = enumerate_ds(s);
            assert_eq!(ds.len(), s * (s + 1) / 2);
            assert!(ds.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn hasse_examples() {
        let f = gf(7);
        let q = BiPoly::from_terms(f, 1, &[(2, 1, 1)]).unwrap();
        let h = q.hasse_matrix(f.elem(1), f.elem(1), 3);
        assert_eq!(h.get(1, 1), 2);

        let q = BiPoly::from_terms(f, 1, &[(0, 1, 1), (1, 0, -1)]).unwrap();
        let h = q.hasse_matrix(f.zero(), f.zero(), 2);
        assert_eq!((h.get(0, 0), h.get(1, 0), h.get(0, 1)), (0, 6, 1));

        let q = BiPoly::from_terms(f, 2, &[(0, 0, 4)]).unwrap();
        assert_eq!(q.hasse_matrix(f.elem(3), f.elem(5), 1).get(0, 0), 4);
    }

    #[test]
    fn hasse_matches_sum_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for p in [2u64, 3, 7, 101] {
            let f = gf(p);
            for _ in 0..40 {
                let ell = rng.gen_range(0..4);
                let xdeg = rng.gen_range(0..12);
                let q = random_bipoly(f, &mut rng, ell, xdeg);
                let (x0, y0) = (rng.gen_range(0..p), rng.gen_range(0..p));
                let s = rng.gen_range(1..5);
                let h = HasseMatrix::of(&q, x0, y0, s);
                for dx in 0..s {
                    for dy in 0..s {
                        let want = if dx + dy < s {
                            formula_entry(&q, x0, y0, dx, dy)
                        } else {
                            0
                        };
                        assert_eq!(h.get(dx, dy), want, "p={p} ({dx},{dy})");
                        if dx + dy < s {
                            assert_eq!(HasseMatrix::entry_of(&q, x0, y0, dx, dy), want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_preserves_hasse_derivatives() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let f = gf(101);
        for _ in 0..100 {
            let ell = rng.gen_range(0..=4);
            let xdeg = rng.gen_range(0..20);
            let q = random_bipoly(f, &mut rng, ell, xdeg);
            let (x0, y0) = (rng.gen_range(0..101), rng.gen_range(0..101));
            let s = rng.gen_range(1..=4);
            let m = UniPoly::linear_power(f, x0, s);
            let reduced = q.reduce_mod(&m).unwrap();
            assert_eq!(
                HasseMatrix::of_reduced(&reduced, x0, y0, s),
                HasseMatrix::of(&q, x0, y0, s)
            );
        }
    }

    #[test]
    fn shift_down_examples() {
        let f = gf(11);
        let h = HasseMatrix::from_rows(f, &[vec![3, 4], vec![5, 0]]);
        assert_eq!(
            h.shift_down(),
            HasseMatrix::from_rows(f, &[vec![0, 0], vec![3, 0]])
        );
        assert!(HasseMatrix::zero(f, 3).shift_down().is_zero());
        assert!(HasseMatrix::from_rows(f, &[vec![7]]).shift_down().is_zero());
    }

    #[test]
    fn shift_down_tracks_multiplication_by_linear_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f = gf(101);
        for _ in 0..30 {
            let q = random_bipoly(f, &mut rng, 3, 8);
            let (x0, y0) = (rng.gen_range(0..101), rng.gen_range(0..101));
            let s = rng.gen_range(1..=4);
            let mut shifted = q.clone();
            shifted.mul_linear_assign(x0);
            assert_eq!(
                HasseMatrix::of(&shifted, x0, y0, s),
                HasseMatrix::of(&q, x0, y0, s).shift_down()
            );
        }
    }

    #[test]
    fn combine_examples() {
        let f = gf(101);
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let rows = |rng: &mut ChaCha8Rng| -> Vec<Vec<u64>> {
            (0..3)
                .map(|_| (0..3).map(|_| rng.gen_range(0..101)).collect())
                .collect()
        };
        let a = HasseMatrix::from_rows(f, &rows(&mut rng));
        let b = HasseMatrix::from_rows(f, &rows(&mut rng));
        assert_eq!(a.combine(&b, 0), a);
        assert!(a.combine(&a, 1).is_zero());
        let c = 37;
        let got = a.combine(&b, c);
        for dx in 0..3 {
            for dy in 0..3 {
                assert_eq!(
                    got.get(dx, dy),
                    f.sub(a.get(dx, dy), f.mul(c, b.get(dx, dy)))
                );
            }
        }
    }
}
