//! Brute-force reference solver: the multiplicity conditions are linear in
//! the coefficients of `Q`, so the minimal solution is the first monomial
//! column (in increasing `<=_w` order) that depends linearly on the
//! columns before it.

use crate::bipoly::{BiPoly, WeightedMonomial};
use crate::field::PrimeField;
use crate::hasse::enumerate_ds;
use crate::instance::InterpolationInstance;

/// Monomials `x^a y^j` with `j <= ell`, ascending in the `(1,w)` order.
pub fn monomials_ascending(ell: usize, w: usize) -> impl Iterator<Item = WeightedMonomial> {
    (0usize..).flat_map(move |d| {
        (0..=ell.min(d / w))
            .rev()
            .map(move |j| WeightedMonomial::new(d - j * w, j, w))
    })
}

/// One linear condition per `(point, (dx, dy))`; each column is the vector
/// of Hasse derivatives of a single monomial.
pub struct ConstraintSystem {
    field: PrimeField,
    /// `(x_i, y_i, dx, dy)` per row.
    rows: Vec<(u64, u64, usize, usize)>,
}

impl ConstraintSystem {
    pub fn new(inst: &InterpolationInstance) -> Self {
        let rows = inst
            .points()
            .iter()
            .zip(inst.mults())
            .flat_map(|(pt, &s)| {
                enumerate_ds(s)
                    .into_iter()
                    .map(move |o| (pt.x.value(), pt.y.value(), o.dx, o.dy))
            })
            .collect();
        ConstraintSystem {
            field: inst.field(),
            rows,
        }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Entries `C(a,dx) C(j,dy) x_i^(a-dx) y_i^(j-dy)` for the monomial `x^a y^j`.
    pub fn column(&self, a: usize, j: usize) -> Vec<u64> {
        let f = self.field;
        self.rows
            .iter()
            .map(|&(x, y, dx, dy)| {
                if a < dx || j < dy {
                    return 0;
                }
                let b = f.mul(f.binom(a as u64, dx as u64), f.binom(j as u64, dy as u64));
                f.mul(
                    b,
                    f.mul(f.pow(x, (a - dx) as u64), f.pow(y, (j - dy) as u64)),
                )
            })
            .collect()
    }
}

struct EchelonRow {
    pivot: usize,
    vector: Vec<u64>,
    /// Combination of the original columns producing `vector`.
    combo: Vec<u64>,
}

/// Returns a solution with the least possible leading monomial, and its
/// weighted degree.
pub fn oracle_min_solution(inst: &InterpolationInstance) -> (BiPoly, usize) {
    let f = inst.field();
    let system = ConstraintSystem::new(inst);
    let mut columns: Vec<WeightedMonomial> = Vec::new();
    let mut echelon: Vec<EchelonRow> = Vec::new();

    for mono in monomials_ascending(inst.ell(), inst.w()) {
        let idx = columns.len();
        columns.push(mono);
        let mut v = system.column(mono.xdeg, mono.ydeg);
        let mut combo = vec![0u64; idx + 1];
        combo[idx] = 1;
        for row in &echelon {
            let c = v[row.pivot];
            if c == 0 {
                continue;
            }
            for (a, &b) in v.iter_mut().zip(&row.vector) {
                *a = f.sub(*a, f.mul(c, b));
            }
            for (a, &b) in combo.iter_mut().zip(&row.combo) {
                *a = f.sub(*a, f.mul(c, b));
            }
        }
        match v.iter().position(|&e| e != 0) {
            Some(pivot) => {
                let inv = f.inv(v[pivot]).expect("nonzero pivot");
                for e in v.iter_mut().chain(combo.iter_mut()) {
                    *e = f.mul(*e, inv);
                }
                echelon.push(EchelonRow {
                    pivot,
                    vector: v,
                    combo,
                });
            }
            None => {
                let terms: Vec<(usize, usize, i64)> = combo
                    .iter()
                    .zip(&columns)
                    .filter(|(&c, _)| c != 0)
                    .map(|(&c, m)| (m.xdeg, m.ydeg, c as i64))
                    .collect();
                let q = BiPoly::from_terms(f, inst.ell(), &terms).expect("y-degrees within cap");
                return (q, mono.weighted_degree());
            }
        }
    }
    unreachable!("more columns than constraints always yields a dependency")
}
