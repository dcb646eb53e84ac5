//! Independent oracles shared by the integration tests. None of them goes
//! through the evaluators they are used to check.
#![allow(dead_code)]

use framed_mw::algebra::{Elem, Field, Poly, Rat};
use framed_mw::gw::GwElem;
use framed_mw::quadform::DiagForm;
use num_traits::Zero;
use rand::Rng;

/// Hilbert symbol `(a, b)_p` by searching for a primitive solution of
/// `a x^2 + b y^2 = z^2` modulo a power of `p` large enough for Hensel lifting.
/// `p = None` is the real place.
pub fn hilbert_bruteforce(a: i64, b: i64, p: Option<u64>) -> i8 {
    let Some(p) = p else {
        return if a < 0 && b < 0 { -1 } else { 1 };
    };
    let p = p as i64;
    let strip = |mut v: i64| {
        while v % (p * p) == 0 {
            v /= p * p;
        }
        v
    };
    let (a, b) = (strip(a), strip(b));
    let va = (a % p == 0) as u32;
    let vb = (b % p == 0) as u32;
    let n = va + vb + if p == 2 { 6 } else { 3 };
    let m = p.pow(n);
    let mut squares = vec![false; m as usize];
    for z in 0..m {
        squares[((z * z) % m) as usize] = true;
    }
    let is_sq = |v: i64| squares[v.rem_euclid(m) as usize];
    // primitive vectors up to units: (1, y) or (x, 1) with p | x
    for y in 0..m {
        if is_sq(a + b * y * y) {
            return 1;
        }
    }
    let mut x = 0;
    while x < m {
        if is_sq(a * x * x + b) {
            return 1;
        }
        x += p;
    }
    -1
}

/// Trace `Tr_{L/Q}` of an element of a simple extension of the rationals,
/// read off the characteristic polynomial.
pub fn abs_trace(e: &Elem) -> Rat {
    let cp = e.charpoly();
    let n = cp.deg() as usize;
    -cp.coeff(n - 1).to_rat().unwrap()
}

/// `N_{L/Q}` from the constant term of the characteristic polynomial.
pub fn abs_norm(e: &Elem) -> Rat {
    let cp = e.charpoly();
    let n = cp.deg() as usize;
    let c = cp.coeff(0).to_rat().unwrap();
    if n % 2 == 0 {
        c
    } else {
        -c
    }
}

/// Diagonalizes a nondegenerate symmetric rational matrix by congruence.
pub fn diagonalize(mut m: Vec<Vec<Rat>>) -> Vec<Rat> {
    let n = m.len();
    let mut out = Vec::new();
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(k, j);
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // e_k <- e_k + e_j
                for i in 0..n {
                    let v = m[j][i].clone();
                    m[k][i] += v;
                }
                for i in 0..n {
                    let v = m[i][j].clone();
                    m[i][k] += v;
                }
            } else {
                panic!("degenerate form");
            }
        }
        let d = m[k][k].clone();
        for i in k + 1..n {
            let f = &m[i][k] / &d;
            for j in k..n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
            }
            for j in k..n {
                let v = &f * &m[j][k];
                m[j][i] -= v;
            }
        }
        out.push(d);
    }
    out
}

/// Scharlau transfer of `<beta>` along the trace: the form `(u, v) -> Tr(beta u v)`
/// on the power basis.
pub fn trace_form(beta: &Elem) -> GwElem {
    let l = beta.field();
    let n = l.degree();
    let a = l.generator();
    let gram: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| abs_trace(&beta.mul(&a.pow((i + j) as u64)))).collect())
        .collect();
    let d = diagonalize(gram);
    GwElem::from_form(&DiagForm::from_rats(&d).unwrap())
}

pub fn simple_field(coeffs: &[i64], name: &str) -> Field {
    let q = Field::rationals();
    Field::extension(&q, &Poly::from_ints(&q, coeffs), name).unwrap()
}

/// A random nonzero element of a simple extension with small integer coordinates.
pub fn random_elem(l: &Field, rng: &mut impl Rng, bound: i64) -> Elem {
    loop {
        let c: Vec<Elem> = (0..l.degree()).map(|_| l.base().from_int(rng.gen_range(-bound..=bound))).collect();
        let e = l.from_coeffs(&c);
        if !e.is_zero() {
            return e;
        }
    }
}

/// A random rational unit `p/q` with `|p|, q <= bound`.
pub fn random_rat(rng: &mut impl Rng, bound: i64) -> Rat {
    loop {
        let p = rng.gen_range(-bound..=bound);
        let q = rng.gen_range(1..=bound);
        if p != 0 {
            return Rat::new(p.into(), q.into());
        }
    }
}
