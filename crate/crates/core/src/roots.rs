//! Polynomial roots `y = f(x)` of a bivariate `Q`, by Roth–Ruckenstein
//! style coefficient-by-coefficient branching.

use crate::bipoly::BiPoly;
use crate::field::PrimeField;
use crate::unipoly::UniPoly;

/// Fields up to this size find univariate roots by trying every element.
const EXHAUSTIVE_ROOT_LIMIT: u64 = 1024;

fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b).expect("nonzero divisor");
        a = b;
        b = r;
    }
    match a.leading_coeff() {
        Some(l) => a.scale(a.field().inv(l).expect("nonzero")),
        None => a,
    }
}

fn pow_mod(base: &UniPoly, mut exp: u64, m: &UniPoly) -> UniPoly {
    let f = base.field();
    let mut acc = UniPoly::one(f).rem(m).expect("nonzero modulus");
    let mut b = base.rem(m).expect("nonzero modulus");
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (&acc * &b).rem(m).expect("nonzero modulus");
        }
        b = (&b * &b).rem(m).expect("nonzero modulus");
        exp >>= 1;
    }
    acc
}

/// Splits a squarefree product of distinct linear factors.
fn split_linear(g: &UniPoly, shift: &mut u64, out: &mut Vec<u64>) {
    let f = g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let c = g.coeffs();
            out.push(f.neg(f.mul(c[0], f.inv(c[1]).expect("monic"))));
        }
        Some(_) => loop {
            *shift += 1;
            // gcd(g, (x + a)^((p-1)/2) - 1) separates quadratic residues
            let base = UniPoly::from_coeffs(f, vec![*shift % f.modulus(), 1]);
            let h = &pow_mod(&base, (f.modulus() - 1) / 2, g) - &UniPoly::one(f);
            let d = gcd(g, &h);
            if d.degree().is_some_and(|k| k > 0 && Some(k) < g.degree()) {
                let (rest, _) = g.div_rem(&d).expect("nonzero");
                split_linear(&d, shift, out);
                split_linear(&rest, shift, out);
                return;
            }
        },
    }
}

/// Distinct roots of a nonzero univariate polynomial in GF(p).
pub fn univariate_roots(g: &UniPoly) -> Vec<u64> {
    let f = g.field();
    if g.degree().is_none_or(|d| d == 0) {
        return Vec::new();
    }
    let p = f.modulus();
    let mut out = if p <= EXHAUSTIVE_ROOT_LIMIT {
        (0..p).filter(|&c| g.eval_raw(c) == 0).collect()
    } else {
        // product of the distinct linear factors: gcd(g, x^p - x)
        let x = UniPoly::monomial(f, 1);
        let xp = pow_mod(&x, p, g);
        let lin = gcd(g, &(&xp - &x));
        let mut roots = Vec::new();
        split_linear(&lin, &mut 0, &mut roots);
        roots
    };
    out.sort_unstable();
    out
}

/// `Q(x, x*y + c)`.
fn substitute_step(q: &BiPoly, c: u64) -> BiPoly {
    let shifted = q.y_shift(c);
    let f = q.field();
    let rows = shifted
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| r.mul_x_pow(i))
        .collect();
    BiPoly::from_rows(f, rows).expect("same shape")
}

fn strip_x_power(q: &BiPoly) -> BiPoly {
    let v = q
        .rows()
        .iter()
        .filter(|r| !r.is_zero())
        .map(UniPoly::x_valuation)
        .min()
        .unwrap_or(0);
    if v == 0 {
        return q.clone();
    }
    let rows = q.rows().iter().map(|r| r.div_x_pow(v)).collect();
    BiPoly::from_rows(q.field(), rows).expect("same shape")
}

fn branch(q: &BiPoly, k: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    let q = strip_x_power(q);
    let f = q.field();
    let at_zero = UniPoly::from_raw(f, q.rows().iter().map(|r| r.coeff(0).value()).collect());
    for c in univariate_roots(&at_zero) {
        prefix.push(c);
        branch(&substitute_step(&q, c), k, prefix, out);
        prefix.pop();
    }
}

/// All `f` with `deg f < k` and `Q(x, f(x)) = 0`, sorted by coefficients.
pub fn y_roots(q: &BiPoly, k: usize) -> Vec<UniPoly> {
    let f: PrimeField = q.field();
    if q.is_zero() {
        return Vec::new();
    }
    let mut candidates = Vec::new();
    branch(q, k, &mut Vec::with_capacity(k), &mut candidates);
    let mut out: Vec<UniPoly> = candidates
        .into_iter()
        .map(|c| UniPoly::from_raw(f, c))
        .filter(|g| q.substitute_y(g).is_zero())
        .collect();
    out.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    out.dedup();
    out
}
