//! Elements of `F[x,y]` with bounded y-degree, stored as one [`UniPoly`]
//! per power of `y`, plus the `(1,w)`-weighted module monomial order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::hasse::HasseMatrix;
use crate::unipoly::{Divisor, UniPoly};

/// A monomial `x^xdeg y^ydeg` under the `(1,w)`-weighted order.
///
/// Ties in weighted degree are broken toward the larger power of `x`: at
/// equal weight, the monomial with more `x` is the greater one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeightedMonomial {
    pub xdeg: usize,
    pub ydeg: usize,
    pub w: usize,
}

impl WeightedMonomial {
    pub fn new(xdeg: usize, ydeg: usize, w: usize) -> Self {
        WeightedMonomial { xdeg, ydeg, w }
    }

    pub fn weighted_degree(&self) -> usize {
        self.xdeg + self.w * self.ydeg
    }
}

pub fn monomial_cmp(a: &WeightedMonomial, b: &WeightedMonomial) -> Ordering {
    debug_assert_eq!(a.w, b.w);
    a.weighted_degree()
        .cmp(&b.weighted_degree())
        .then(a.xdeg.cmp(&b.xdeg))
}

impl PartialOrd for WeightedMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeightedMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        monomial_cmp(self, other)
    }
}

/// A polynomial `sum_j rows[j](x) y^j` with `j <= ell`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: PrimeField,
    rows: Vec<UniPoly>,
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rows.iter().map(|r| r.coeffs()))
            .finish()
    }
}

impl BiPoly {
    pub fn zero(field: PrimeField, ell: usize) -> Self {
        BiPoly {
            field,
            rows: vec![UniPoly::zero(field); ell + 1],
        }
    }

    /// `y^j` inside `F[x,y]_ell`.
    pub fn y_power(field: PrimeField, ell: usize, j: usize) -> Self {
        let mut q = Self::zero(field, ell);
        q.rows[j] = UniPoly::one(field);
        q
    }

    pub fn from_rows(field: PrimeField, rows: Vec<UniPoly>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Dimension(
                "a bivariate polynomial needs at least one row".into(),
            ));
        }
        if let Some(r) = rows.iter().find(|r| r.field() != field) {
            return Err(Error::FieldMismatch(field.modulus(), r.field().modulus()));
        }
        Ok(BiPoly { field, rows })
    }

    /// Builds from `(xdeg, ydeg, coefficient)` triples; repeated monomials add up.
    pub fn from_terms(
        field: PrimeField,
        ell: usize,
        terms: &[(usize, usize, i64)],
    ) -> Result<Self> {
        let mut rows: Vec<Vec<u64>> = vec![Vec::new(); ell + 1];
        for &(a, j, c) in terms {
            if j > ell {
                return Err(Error::Dimension(format!("y-degree {j} exceeds ell={ell}")));
            }
            let row = &mut rows[j];
            if row.len() <= a {
                row.resize(a + 1, 0);
            }
            row[a] = field.add(row[a], field.from_i64(c).value());
        }
        Ok(BiPoly {
            field,
            rows: rows
                .into_iter()
                .map(|r| UniPoly::from_raw(field, r))
                .collect(),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ell(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[UniPoly] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> &UniPoly {
        &self.rows[j]
    }

    pub fn rows_mut(&mut self) -> &mut [UniPoly] {
        &mut self.rows
    }

    pub fn into_rows(self) -> Vec<UniPoly> {
        self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(UniPoly::is_zero)
    }

    /// Coefficient of `x^a y^j`.
    pub fn coeff(&self, a: usize, j: usize) -> FieldElement {
        match self.rows.get(j) {
            Some(r) => r.coeff(a),
            None => self.field.zero(),
        }
    }

    /// Largest x-degree over all rows; `None` for zero.
    pub fn x_degree(&self) -> Option<usize> {
        self.rows.iter().filter_map(UniPoly::degree).max()
    }

    /// `(1,w)`-weighted degree; `None` for the zero polynomial.
    pub fn weighted_deg(&self, w: usize) -> Option<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(j, r)| r.degree().map(|d| d + w * j))
            .max()
    }

    pub fn leading_monomial(&self, w: usize) -> Result<WeightedMonomial> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(j, r)| r.degree().map(|d| WeightedMonomial::new(d, j, w)))
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Nonzero terms as `(xdeg, ydeg, coefficient)`, ascending in `y` then `x`.
    pub fn terms(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for (j, r) in self.rows.iter().enumerate() {
            for (a, &c) in r.coeffs().iter().enumerate() {
                if c != 0 {
                    out.push((a, j, c));
                }
            }
        }
        out
    }

    /// Each row reduced modulo `m`.
    pub fn reduce_mod(&self, m: &UniPoly) -> Result<BiPoly> {
        let max_len = self.rows.iter().map(UniPoly::len).max().unwrap_or(0);
        let div = Divisor::new(m, max_len)?;
        Ok(self.reduce_with(&div))
    }

    pub fn reduce_with(&self, div: &Divisor) -> BiPoly {
        BiPoly {
            field: self.field,
            rows: self.rows.iter().map(|r| div.rem(r)).collect(),
        }
    }

    pub fn mul_uni(&self, a: &UniPoly) -> BiPoly {
        BiPoly {
            field: self.field,
            rows: self.rows.iter().map(|r| r * a).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> BiPoly {
        BiPoly {
            field: self.field,
            rows: self.rows.iter().map(|r| r.scale(c)).collect(),
        }
    }

    /// `self -= c * other`.
    pub fn sub_scaled_assign(&mut self, other: &BiPoly, c: u64) {
        for (r, o) in self.rows.iter_mut().zip(&other.rows) {
            r.sub_scaled_assign(o, c);
        }
    }

    /// `self *= (x - c)`.
    pub fn mul_linear_assign(&mut self, c: u64) {
        for r in self.rows.iter_mut() {
            r.mul_linear_assign(c);
        }
    }

    /// Rows of `self(x, y + c)`: row `d` is `sum_{j>=d} C(j,d) c^(j-d) row_j`.
    pub fn y_shift(&self, c: u64) -> BiPoly {
        let f = self.field;
        let ell = self.ell();
        let mut rows = vec![UniPoly::zero(f); ell + 1];
        for (d, out) in rows.iter_mut().enumerate() {
            for j in d..=ell {
                let k = f.mul(f.binom(j as u64, d as u64), f.pow(c, (j - d) as u64));
                out.sub_scaled_assign(&self.rows[j], f.neg(k));
            }
        }
        BiPoly { field: f, rows }
    }

    /// `self(x, g(x))` as a univariate polynomial.
    pub fn substitute_y(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(self.field);
        for r in self.rows.iter().rev() {
            acc = &(&acc * g) + r;
        }
        acc
    }

    pub fn eval(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let f = self.field;
        let v = self.rows.iter().rev().fold(0, |acc, r| {
            f.add(f.mul(acc, y.value()), r.eval_raw(x.value()))
        });
        f.elem(v)
    }

    pub fn hasse_matrix(&self, x0: FieldElement, y0: FieldElement, s: usize) -> HasseMatrix {
        HasseMatrix::of(self, x0.value(), y0.value(), s)
    }

    /// True iff every Hasse derivative of order `dx + dy < s` vanishes at the point.
    pub fn has_multiplicity(&self, x0: FieldElement, y0: FieldElement, s: usize) -> bool {
        self.hasse_matrix(x0, y0, s).is_zero()
    }
}

impl fmt::Display for BiPoly {
    /// Sum of monomials, highest power of `y` first, then highest power of `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by_key(|t| std::cmp::Reverse((t.1, t.0)));
        for (i, (a, j, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut mono = String::new();
            match a {
                0 => {}
                1 => mono.push('x'),
                _ => mono.push_str(&format!("x^{a}")),
            }
            match j {
                0 => {}
                1 => mono.push('y'),
                _ => mono.push_str(&format!("y^{j}")),
            }
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c == 1 {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{c}{mono}")?;
            }
        }
        Ok(())
    }
}
