//! Divide-and-conquer KNH interpolation.
//!
//! The basis is never updated in place. Per point, the pivot rounds are
//! driven purely by Hasse matrices of the basis reduced modulo
//! `(x - x_i)^{s_i}` and recorded in a transform matrix `T` over `F[x]`.
//! Points are split recursively at the midpoint; the left half's transform
//! is applied to the reduced basis before descending into the right half,
//! and the two transforms compose as `T_right * T_left`.

use std::ops::RangeInclusive;

use crate::bipoly::BiPoly;
use crate::classic::{min_by_order, TrackedBasis};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::hasse::{enumerate_ds, HasseMatrix};
use crate::instance::{InterpolationInstance, Point};
use crate::matrix::PolyMatrix;
use crate::unipoly::{Divisor, UniPoly};

/// `(ell+1) x (ell+1)` matrix over `F[x]` acting on a basis from the left.
pub type TransformMatrix = PolyMatrix;

/// Basis elements reduced modulo the current node's modulus, together with
/// the weighted degrees and leading positions of the unreduced elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedBasis {
    pub elems: Vec<BiPoly>,
    pub deltas: Vec<usize>,
    pub positions: Vec<usize>,
}

impl ReducedBasis {
    fn check(&self) -> Result<usize> {
        let k = self.elems.len();
        if k == 0 || self.deltas.len() != k || self.positions.len() != k {
            return Err(Error::Dimension(format!(
                "basis with {k} elements, {} degrees, {} positions",
                self.deltas.len(),
                self.positions.len()
            )));
        }
        if let Some(e) = self.elems.iter().find(|e| e.ell() + 1 != k) {
            return Err(Error::Dimension(format!(
                "basis of {k} elements needs y-degree cap {}, found {}",
                k - 1,
                e.ell()
            )));
        }
        Ok(k)
    }
}

/// Result of one interpolation step: transform plus updated bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutput {
    pub transform: TransformMatrix,
    pub deltas: Vec<usize>,
    pub positions: Vec<usize>,
    /// Number of pivot rounds that found a nonzero derivative.
    pub pivots: usize,
}

/// The single-round update `U`: identity, except column `t` holds
/// `-ratios[j]` off the diagonal and `x - xi` on it.
pub fn build_update_matrix(
    field: PrimeField,
    t: usize,
    ratios: &[u64],
    xi: u64,
) -> TransformMatrix {
    let n = ratios.len();
    let mut u = PolyMatrix::identity(field, n);
    for (j, &r) in ratios.iter().enumerate() {
        if j == t {
            u.set(t, t, UniPoly::linear(field, xi));
        } else {
            u.set(j, t, UniPoly::constant(field, field.neg(field.reduce(r))));
        }
    }
    u
}

/// Processes every derivative order of one point on a basis reduced modulo
/// `(x - x_i)^s`.
pub fn interpolate_point(point: Point, s: usize, reduced: &ReducedBasis) -> Result<StepOutput> {
    let k = reduced.check()?;
    let f = point.x.field();
    let (xi, yi) = (point.x.value(), point.y.value());
    let mut hasse: Vec<HasseMatrix> = reduced
        .elems
        .iter()
        .map(|b| HasseMatrix::of(b, xi, yi, s))
        .collect();
    let mut transform = PolyMatrix::identity(f, k);
    let mut deltas = reduced.deltas.clone();
    let positions = reduced.positions.clone();
    let mut pivots = 0;

    for order in enumerate_ds(s) {
        let values: Vec<u64> = hasse.iter().map(|h| h.get(order.dx, order.dy)).collect();
        let Some(t) = min_by_order(&deltas, &positions, |j| values[j] != 0) else {
            continue;
        };
        let inv = f.inv(values[t]).expect("pivot value is nonzero");
        // T <- U T, applied as row operations.
        for j in (0..k).filter(|&j| j != t && values[j] != 0) {
            let ratio = f.mul(values[j], inv);
            hasse[j] = hasse[j].combine(&hasse[t], ratio);
            transform.sub_scaled_row(j, t, ratio);
        }
        hasse[t] = hasse[t].shift_down();
        transform.mul_row_linear(t, xi);
        deltas[t] += 1;
        pivots += 1;
    }
    Ok(StepOutput {
        transform,
        deltas,
        positions,
        pivots,
    })
}

/// `T * basis`, each element reduced modulo `div` when given.
pub fn apply_transform(
    transform: &TransformMatrix,
    basis: &[BiPoly],
    div: Option<&Divisor>,
) -> Result<Vec<BiPoly>> {
    let f = transform.field();
    let Some(first) = basis.first() else {
        return Err(Error::Dimension("empty basis".into()));
    };
    let cols = first.ell() + 1;
    if basis.iter().any(|b| b.ell() + 1 != cols) {
        return Err(Error::Dimension(
            "basis elements with different y-degree caps".into(),
        ));
    }
    let stacked = PolyMatrix::from_rows(f, basis.iter().map(|b| b.rows().to_vec()).collect())?;
    let mut prod = transform.mul(&stacked)?;
    if let Some(d) = div {
        prod = prod.reduce_with(d);
    }
    (0..prod.nrows())
        .map(|i| BiPoly::from_rows(f, prod.row(i).to_vec()))
        .collect()
}

/// Moduli `prod (x - x_h)^{s_h}` for every node of the recursion, with
/// divisors prepared for the dividends that occur at that node.
struct ModuliTree {
    divisor: Divisor,
    children: Option<Box<(ModuliTree, ModuliTree)>>,
}

impl ModuliTree {
    fn build(
        points: &[Point],
        mults: &[usize],
        lo: usize,
        hi: usize,
        parent_len: usize,
    ) -> Result<Self> {
        let (modulus, children) = if lo == hi {
            let m = UniPoly::linear_power(points[lo].x.field(), points[lo].x.value(), mults[lo]);
            (m, None)
        } else {
            let mid = (lo + hi) / 2;
            let own_len: usize = mults[lo..=hi].iter().sum::<usize>() + 1;
            let left = Self::build(points, mults, lo, mid, own_len)?;
            let right = Self::build(points, mults, mid + 1, hi, own_len)?;
            let m = left.divisor.modulus() * right.divisor.modulus();
            (m, Some(Box::new((left, right))))
        };
        // Every dividend at a child is shorter than its parent's modulus.
        let divisor = Divisor::new(&modulus, parent_len)?;
        Ok(ModuliTree { divisor, children })
    }
}

fn tree_rec(
    points: &[Point],
    mults: &[usize],
    lo: usize,
    hi: usize,
    node: &ModuliTree,
    reduced: ReducedBasis,
) -> Result<StepOutput> {
    let Some(children) = &node.children else {
        return interpolate_point(points[lo], mults[lo], &reduced);
    };
    let (left, right) = (&children.0, &children.1);
    let mid = (lo + hi) / 2;
    let left_basis = ReducedBasis {
        elems: reduced
            .elems
            .iter()
            .map(|b| b.reduce_with(&left.divisor))
            .collect(),
        deltas: reduced.deltas,
        positions: reduced.positions,
    };
    let first = tree_rec(points, mults, lo, mid, left, left_basis)?;
    let right_elems: Vec<BiPoly> = reduced
        .elems
        .iter()
        .map(|b| b.reduce_with(&right.divisor))
        .collect();
    let right_basis = ReducedBasis {
        elems: apply_transform(&first.transform, &right_elems, Some(&right.divisor))?,
        deltas: first.deltas,
        positions: first.positions,
    };
    let second = tree_rec(points, mults, mid + 1, hi, right, right_basis)?;
    Ok(StepOutput {
        transform: second.transform.mul(&first.transform)?,
        deltas: second.deltas,
        positions: second.positions,
        pivots: first.pivots + second.pivots,
    })
}

/// Interpolates the points `range` of `inst` starting from `reduced`, which
/// must be a basis reduced modulo the product of the range's
/// `(x - x_h)^{s_h}`.
pub fn interpolate_tree(
    inst: &InterpolationInstance,
    range: RangeInclusive<usize>,
    reduced: ReducedBasis,
) -> Result<StepOutput> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi || hi >= inst.len() {
        return Err(Error::Dimension(format!(
            "point range {lo}..={hi} is empty or exceeds {} points",
            inst.len()
        )));
    }
    reduced.check()?;
    let max_len = reduced
        .elems
        .iter()
        .flat_map(|b| b.rows().iter().map(UniPoly::len))
        .max()
        .unwrap_or(0);
    let own_len = inst.mults()[lo..=hi].iter().sum::<usize>() + 1;
    let tree = ModuliTree::build(inst.points(), inst.mults(), lo, hi, max_len.max(own_len))?;
    tree_rec(inst.points(), inst.mults(), lo, hi, &tree, reduced)
}

#[derive(Clone, Debug)]
pub struct FastOutput {
    pub q: BiPoly,
    /// The final basis: element `j` is `sum_k T[j][k] y^k`.
    pub basis: TrackedBasis,
    pub transform: TransformMatrix,
    pub pivots: usize,
}

/// Full interpolation from the basis `{1, y, ..., y^ell}`.
pub fn solve(inst: &InterpolationInstance) -> Result<FastOutput> {
    let f = inst.field();
    let start = TrackedBasis::initial(f, inst.ell(), inst.w());
    let step = interpolate_tree(
        inst,
        0..=inst.len() - 1,
        ReducedBasis {
            elems: start.elems,
            deltas: start.deltas,
            positions: start.positions,
        },
    )?;
    let elems = (0..step.transform.nrows())
        .map(|i| BiPoly::from_rows(f, step.transform.row(i).to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let basis = TrackedBasis {
        elems,
        deltas: step.deltas,
        positions: step.positions,
    };
    let q = basis.elems[basis.min_index()].clone();
    Ok(FastOutput {
        q,
        basis,
        transform: step.transform,
        pivots: step.pivots,
    })
}
