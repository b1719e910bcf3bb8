//! Reed–Solomon list decoding on top of the interpolation engine.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::fast;
use crate::field::{FieldElement, PrimeField};
use crate::instance::{InterpolationInstance, Point};
use crate::roots::y_roots;
use crate::unipoly::UniPoly;

pub const MAX_MULTIPLICITY: usize = 8;
pub const MAX_LIST_SIZE: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSCode {
    field: PrimeField,
    k: usize,
    evalpoints: Vec<FieldElement>,
}

impl RSCode {
    /// Code with evaluation points `1, 2, ..., n`.
    pub fn new(field: PrimeField, n: usize, k: usize) -> Result<Self> {
        if n as u64 >= field.modulus() {
            return Err(Error::InvalidInstance(format!(
                "default evaluation points 1..{n} need n < p = {}",
                field.modulus()
            )));
        }
        let pts = (1..=n as u64).map(|i| field.elem(i)).collect();
        Self::with_points(field, k, pts)
    }

    pub fn with_points(field: PrimeField, k: usize, evalpoints: Vec<FieldElement>) -> Result<Self> {
        let n = evalpoints.len();
        // w = k - 1 must be a positive weight
        if k < 2 || k > n {
            return Err(Error::InvalidInstance(format!(
                "need 2 <= k <= n, got k={k}, n={n}"
            )));
        }
        let mut seen = HashSet::new();
        for e in &evalpoints {
            if e.field() != field {
                return Err(Error::FieldMismatch(field.modulus(), e.field().modulus()));
            }
            if !seen.insert(e.value()) {
                return Err(Error::InvalidInstance(format!(
                    "evaluation point {e} repeated"
                )));
            }
        }
        Ok(RSCode {
            field,
            k,
            evalpoints,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.evalpoints.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn evalpoints(&self) -> &[FieldElement] {
        &self.evalpoints
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GSParams {
    pub s: usize,
    pub ell: usize,
    pub tau: usize,
    pub w: usize,
}

impl GSParams {
    /// Whether counting guarantees a solution of weighted degree below
    /// `s (n - tau)`.
    pub fn is_feasible(&self, n: usize) -> bool {
        if self.tau >= n {
            return false;
        }
        let target = self.s * (n - self.tau);
        let unknowns: usize = (0..=self.ell)
            .map(|j| target.saturating_sub(j * self.w))
            .sum();
        unknowns > n * self.s * (self.s + 1) / 2
    }
}

/// Smallest multiplicity, then smallest list size, that is feasible for `tau`.
pub fn gs_params(code: &RSCode, tau: usize) -> Result<GSParams> {
    let n = code.n();
    if tau >= n {
        return Err(Error::Infeasible(format!(
            "tau = {tau} must be below n = {n}"
        )));
    }
    let w = code.k() - 1;
    for s in 1..=MAX_MULTIPLICITY {
        for ell in 1..=MAX_LIST_SIZE {
            let params = GSParams { s, ell, tau, w };
            if params.is_feasible(n) {
                return Ok(params);
            }
        }
    }
    Err(Error::Infeasible(format!(
        "sum_{{j=0..ell}} max(0, s(n-tau) - j*w) > n*s(s+1)/2 fails for n={n}, k={}, tau={tau} \
         and every s <= {MAX_MULTIPLICITY}, ell <= {MAX_LIST_SIZE}",
        code.k()
    )))
}

pub fn encode_rs(code: &RSCode, message: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if message.len() != code.k() {
        return Err(Error::Dimension(format!(
            "message has {} symbols, code dimension is {}",
            message.len(),
            code.k()
        )));
    }
    let f = UniPoly::from_elems(code.field(), message);
    Ok(code.evalpoints().iter().map(|&x| f.eval(x)).collect())
}

pub fn hamming_distance(a: &[FieldElement], b: &[FieldElement]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Every message whose codeword lies within distance `params.tau` of
/// `received`, sorted by coefficients.
pub fn decode_list(
    code: &RSCode,
    received: &[FieldElement],
    params: &GSParams,
) -> Result<Vec<Vec<FieldElement>>> {
    let n = code.n();
    if received.len() != n {
        return Err(Error::Dimension(format!(
            "received word has {} symbols, code length is {n}",
            received.len()
        )));
    }
    if params.w != code.k() - 1 {
        return Err(Error::Infeasible(format!(
            "weight {} does not match k - 1 = {}",
            params.w,
            code.k() - 1
        )));
    }
    if !params.is_feasible(n) {
        return Err(Error::Infeasible(format!(
            "sum_{{j=0..{}}} max(0, {}*({n}-{}) - j*{}) > {n}*{}*{}/2 does not hold",
            params.ell,
            params.s,
            params.tau,
            params.w,
            params.s,
            params.s + 1
        )));
    }
    let points = code
        .evalpoints()
        .iter()
        .zip(received)
        .map(|(&x, &y)| Point { x, y })
        .collect();
    let inst = InterpolationInstance::new(
        code.field(),
        points,
        vec![params.s; n],
        params.ell,
        params.w,
    )?;
    let q = fast::solve(&inst)?.q;
    let mut out = Vec::new();
    for g in y_roots(&q, code.k()) {
        let msg: Vec<FieldElement> = (0..code.k()).map(|i| g.coeff(i)).collect();
        let cw = encode_rs(code, &msg)?;
        if hamming_distance(&cw, received) <= params.tau {
            out.push(msg);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn elems(f: PrimeField, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&c| f.elem(c)).collect()
    }

    /// All messages within distance `tau`, by enumerating every codeword.
    fn exhaustive_decode(
        code: &RSCode,
        received: &[FieldElement],
        tau: usize,
    ) -> Vec<Vec<FieldElement>> {
        let f = code.field();
        let p = f.modulus();
        let total = p.pow(code.k() as u32);
        (0..total)
            .map(|mut idx| {
                (0..code.k())
                    .map(|_| {
                        let d = idx % p;
                        idx /= p;
                        f.elem(d)
                    })
                    .collect::<Vec<_>>()
            })
            .filter(|m| hamming_distance(&encode_rs(code, m).unwrap(), received) <= tau)
            .collect()
    }

    fn sorted(mut v: Vec<Vec<FieldElement>>) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = v
            .drain(..)
            .map(|m| m.iter().map(|e| e.value()).collect())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn params_examples() {
        let f = gf(13);
        let code = RSCode::new(f, 12, 3).unwrap();
        let given = GSParams {
            s: 2,
            ell: 6,
            tau: 5,
            w: 2,
        };
        assert!(given.is_feasible(12));
        // 14 + 12 + ... + 2 = 56 > 36
        let chosen = gs_params(&code, 5).unwrap();
        assert_eq!((chosen.s, chosen.ell), (1, 2));
        assert!(chosen.is_feasible(12));

        for (n, k) in [(12, 3), (10, 2), (6, 5)] {
            let code = RSCode::new(f, n, k).unwrap();
            let p = gs_params(&code, 0).unwrap();
            assert_eq!((p.s, p.ell), (1, 1));
        }
        for tau in 10..12 {
            assert!(matches!(gs_params(&code, tau), Err(Error::Infeasible(_))));
        }
        assert!(matches!(gs_params(&code, 12), Err(Error::Infeasible(_))));
    }

    #[test]
    fn infeasible_at_caps_is_exhaustive() {
        let f = gf(13);
        let code = RSCode::new(f, 12, 3).unwrap();
        for tau in 0..12 {
            let any = (1..=MAX_MULTIPLICITY).any(|s| {
                (1..=MAX_LIST_SIZE).any(|ell| GSParams { s, ell, tau, w: 2 }.is_feasible(12))
            });
            assert_eq!(gs_params(&code, tau).is_ok(), any, "tau={tau}");
        }
    }

    #[test]
    fn bad_codes() {
        let f = gf(13);
        assert!(RSCode::new(f, 13, 3).is_err());
        assert!(RSCode::new(f, 5, 1).is_err());
        assert!(RSCode::new(f, 5, 6).is_err());
        assert!(RSCode::with_points(f, 2, elems(f, &[1, 2, 1])).is_err());
    }

    #[test]
    fn encode_examples() {
        let f = gf(13);
        let code = RSCode::new(f, 12, 3).unwrap();
        assert!(encode_rs(&code, &elems(f, &[0, 0, 0]))
            .unwrap()
            .iter()
            .all(|e| e.is_zero()));
        let cw = encode_rs(&code, &elems(f, &[4, 0, 0])).unwrap();
        assert!(cw.iter().all(|e| e.value() == 4));
        assert!(encode_rs(&code, &elems(f, &[1])).is_err());
    }

    #[test]
    fn any_k_positions_determine_message() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let f = gf(101);
        let code = RSCode::new(f, 20, 5).unwrap();
        for _ in 0..20 {
            let msg: Vec<FieldElement> = (0..5).map(|_| f.elem(rng.gen_range(0..101))).collect();
            let cw = encode_rs(&code, &msg).unwrap();
            let mut idx: Vec<usize> = (0..20).collect();
            for i in 0..5 {
                let j = rng.gen_range(i..20);
                idx.swap(i, j);
            }
            // Lagrange interpolation through the chosen positions
            let mut acc = UniPoly::zero(f);
            for &i in &idx[..5] {
                let xi = code.evalpoints()[i].value();
                let mut basis = UniPoly::constant(f, cw[i].value());
                for &j in &idx[..5] {
                    if j != i {
                        let xj = code.evalpoints()[j].value();
                        basis =
                            (&basis * &UniPoly::linear(f, xj)).scale(f.inv(f.sub(xi, xj)).unwrap());
                    }
                }
                acc = &acc + &basis;
            }
            assert_eq!(acc, UniPoly::from_elems(f, &msg));
        }
    }

    #[test]
    fn zero_errors_recovers_message() {
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        let f = gf(13);
        let code = RSCode::new(f, 12, 3).unwrap();
        for tau in [0, 2, 4] {
            let params = gs_params(&code, tau).unwrap();
            let msg: Vec<FieldElement> = (0..3).map(|_| f.elem(rng.gen_range(0..13))).collect();
            let cw = encode_rs(&code, &msg).unwrap();
            let out = decode_list(&code, &cw, &params).unwrap();
            assert!(out.contains(&msg));
        }
    }

    #[test]
    fn unique_decoding_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let f = gf(13);
        let code = RSCode::new(f, 12, 3).unwrap();
        let params = gs_params(&code, 4).unwrap();
        for _ in 0..10 {
            let msg: Vec<FieldElement> = (0..3).map(|_| f.elem(rng.gen_range(0..13))).collect();
            let mut r = encode_rs(&code, &msg).unwrap();
            for pos in 0..4 {
                r[pos * 3] = r[pos * 3] + f.elem(rng.gen_range(1..13));
            }
            assert_eq!(decode_list(&code, &r, &params).unwrap(), vec![msg]);
        }
    }

    #[test]
    fn matches_exhaustive_beyond_half_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(84);
        let f = gf(13);
        let code = RSCode::new(f, 12, 3).unwrap();
        let params = GSParams {
            s: 2,
            ell: 6,
            tau: 5,
            w: 2,
        };
        for trial in 0..6 {
            let r: Vec<FieldElement> = if trial % 2 == 0 {
                // far from everything with high probability
                (0..12).map(|_| f.elem(rng.gen_range(0..13))).collect()
            } else {
                let msg: Vec<FieldElement> = (0..3).map(|_| f.elem(rng.gen_range(0..13))).collect();
                let mut r = encode_rs(&code, &msg).unwrap();
                for pos in 0..5 {
                    r[pos * 2 + 1] = r[pos * 2 + 1] + f.elem(rng.gen_range(1..13));
                }
                r
            };
            let got = decode_list(&code, &r, &params).unwrap();
            assert_eq!(sorted(got), sorted(exhaustive_decode(&code, &r, 5)));
        }
    }

    #[test]
    fn mismatched_params_rejected() {
        let f = gf(13);
        let code = RSCode::new(f, 12, 3).unwrap();
        let r = elems(f, &[0; 12]);
        let bad = GSParams {
            s: 1,
            ell: 1,
            tau: 8,
            w: 2,
        };
        assert!(matches!(
            decode_list(&code, &r, &bad),
            Err(Error::Infeasible(_))
        ));
        assert!(decode_list(&code, &r[..5], &gs_params(&code, 2).unwrap()).is_err());
    }
}
