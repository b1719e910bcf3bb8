use std::collections::HashSet;

use rand::Rng;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: FieldElement,
    pub y: FieldElement,
}

/// Points with pairwise distinct x-coordinates, a multiplicity per point,
/// the y-degree cap `ell` and the weight `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationInstance {
    field: PrimeField,
    points: Vec<Point>,
    mults: Vec<usize>,
    ell: usize,
    w: usize,
}

impl InterpolationInstance {
    pub fn new(
        field: PrimeField,
        points: Vec<Point>,
        mults: Vec<usize>,
        ell: usize,
        w: usize,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInstance("no interpolation points".into()));
        }
        if points.len() != mults.len() {
            return Err(Error::InvalidInstance(format!(
                "{} points but {} multiplicities",
                points.len(),
                mults.len()
            )));
        }
        if mults.contains(&0) {
            return Err(Error::InvalidInstance(
                "multiplicities must be positive".into(),
            ));
        }
        if w == 0 {
            return Err(Error::InvalidInstance("weight w must be positive".into()));
        }
        let mut seen = HashSet::new();
        for pt in &points {
            if pt.x.field() != field || pt.y.field() != field {
                return Err(Error::FieldMismatch(
                    field.modulus(),
                    pt.x.field().modulus(),
                ));
            }
            if !seen.insert(pt.x.value()) {
                return Err(Error::InvalidInstance(format!(
                    "x-coordinate {} appears twice",
                    pt.x
                )));
            }
        }
        Ok(InterpolationInstance {
            field,
            points,
            mults,
            ell,
            w,
        })
    }

    /// Convenience constructor from raw residues and one shared multiplicity.
    pub fn uniform(
        field: PrimeField,
        xy: &[(u64, u64)],
        s: usize,
        ell: usize,
        w: usize,
    ) -> Result<Self> {
        let points = xy
            .iter()
            .map(|&(x, y)| Point {
                x: field.elem(x),
                y: field.elem(y),
            })
            .collect();
        Self::new(field, points, vec![s; xy.len()], ell, w)
    }

    /// Random instance with `n` distinct x-coordinates; needs `n <= p`.
    pub fn random<R: Rng>(
        rng: &mut R,
        field: PrimeField,
        n: usize,
        mults: impl Fn(&mut R) -> usize,
        ell: usize,
        w: usize,
    ) -> Result<Self> {
        let p = field.modulus();
        if n as u64 > p {
            return Err(Error::InvalidInstance(format!(
                "cannot pick {n} distinct x-coordinates in GF({p})"
            )));
        }
        let mut xs = HashSet::new();
        let mut points = Vec::with_capacity(n);
        let mut ms = Vec::with_capacity(n);
        while points.len() < n {
            let x = rng.gen_range(0..p);
            if xs.insert(x) {
                let y = rng.gen_range(0..p);
                points.push(Point {
                    x: field.elem(x),
                    y: field.elem(y),
                });
                ms.push(mults(rng));
            }
        }
        Self::new(field, points, ms, ell, w)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn w(&self) -> usize {
        self.w
    }

    /// Total number of linear constraints, `sum s_i (s_i + 1) / 2`.
    pub fn constraint_count(&self) -> usize {
        self.mults.iter().map(|s| s * (s + 1) / 2).sum()
    }

    pub fn mult_sum(&self) -> usize {
        self.mults.iter().sum()
    }

    /// Whether `q` vanishes with the required multiplicity at every point.
    pub fn is_satisfied_by(&self, q: &BiPoly) -> bool {
        self.points
            .iter()
            .zip(&self.mults)
            .all(|(pt, &s)| q.has_multiplicity(pt.x, pt.y, s))
    }
}
