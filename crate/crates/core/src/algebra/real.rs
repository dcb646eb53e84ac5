//! Real root isolation with Sturm sequences, and signs at real embeddings.

use num_traits::{One, Signed, Zero};

use super::field::{Elem, Field};
use super::integer::Rat;
use super::poly::Poly;

/// An isolating interval: either an exact rational root (`lo == hi`), or an
/// open interval containing exactly one simple root with nonzero endpoint values
/// of opposite sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub lo: Rat,
    pub hi: Rat,
}

impl RealRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((&self.lo + &self.hi) / Rat::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

fn rat_poly(p: &Poly) -> Vec<Rat> {
    p.to_rats().expect("rational polynomial expected")
}

fn eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn sgn(q: &Rat) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of a squarefree rational polynomial.
pub fn sturm_chain(p: &Poly) -> Vec<Vec<Rat>> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain.iter().filter(|c| !c.is_zero()).map(rat_poly).collect()
}

fn variations(chain: &[Vec<Rat>], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for c in chain {
        let s = sgn(&eval(c, x));
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(chain: &[Vec<Rat>], a: &Rat, b: &Rat) -> usize {
    variations(chain, a) - variations(chain, b)
}

fn cauchy_bound(p: &[Rat]) -> Rat {
    let n = p.len() - 1;
    let lead = p[n].abs();
    let mut m = Rat::zero();
    for c in &p[..n] {
        let r = c.abs() / &lead;
        if r > m {
            m = r;
        }
    }
    m + Rat::one()
}

/// Isolating intervals for the real roots of a squarefree rational polynomial, in increasing order.
pub fn isolate_real_roots(p: &Poly) -> Vec<RealRoot> {
    let sp = p.squarefree_part();
    if sp.is_constant() {
        return vec![];
    }
    let pr = rat_poly(&sp);
    let chain = sturm_chain(&sp);
    let m = cauchy_bound(&pr);
    let mut out = Vec::new();
    let mut stack = vec![(-m.clone(), m)];
    while let Some((a, b)) = stack.pop() {
        let n = count_roots(&chain, &a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(RealRoot { lo: a, hi: b });
            continue;
        }
        let two = Rat::from_integer(2.into());
        let mut mid = (&a + &b) / &two;
        let mut k = 3i64;
        while eval(&pr, &mid).is_zero() {
            mid = &a + (&b - &a) / Rat::from_integer(k.into());
            k += 1;
        }
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Halves the interval, keeping the root inside.
pub fn refine(p: &[Rat], r: &mut RealRoot) {
    if r.is_exact() {
        return;
    }
    let two = Rat::from_integer(2.into());
    let mid = (&r.lo + &r.hi) / two;
    let vm = eval(p, &mid);
    if vm.is_zero() {
        r.lo = mid.clone();
        r.hi = mid;
        return;
    }
    if sgn(&vm) == sgn(&eval(p, &r.lo)) {
        r.lo = mid;
    } else {
        r.hi = mid;
    }
}

/// Sign of `e(root)` where `root` is a root of `p` and `e(root) != 0`.
pub fn sign_at_root(e: &Poly, p: &Poly, root: &RealRoot) -> i8 {
    let er = rat_poly(e);
    if root.is_exact() {
        return sgn(&eval(&er, &root.lo));
    }
    let pr = rat_poly(p);
    let echain = sturm_chain(&e.squarefree_part());
    let mut r = root.clone();
    loop {
        if r.is_exact() {
            return sgn(&eval(&er, &r.lo));
        }
        let vl = eval(&er, &r.lo);
        if !vl.is_zero() && (e.deg() < 1 || count_roots(&echain, &r.lo, &r.hi) == 0) {
            return sgn(&vl);
        }
        refine(&pr, &mut r);
    }
}

/// Real embeddings of a field, as isolating intervals for the primitive element.
pub fn real_embeddings(f: &Field) -> Vec<RealRoot> {
    let abs = f.absolute();
    if f.is_rationals() {
        return vec![RealRoot {
            lo: Rat::zero(),
            hi: Rat::zero(),
        }];
    }
    abs.real_roots
        .get_or_init(|| isolate_real_roots(&abs.field.minpoly()))
        .clone()
}

pub fn signs(e: &Elem) -> Vec<i8> {
    let f = e.field();
    if f.is_rationals() {
        return vec![sgn(&e.to_rat().unwrap())];
    }
    if e.is_zero() {
        return vec![0; real_embeddings(f).len()];
    }
    let abs = f.absolute();
    let a = abs.to_abs(e);
    let rep = a.rep_poly();
    let mp = abs.field.minpoly();
    real_embeddings(f)
        .iter()
        .map(|r| sign_at_root(&rep, &mp, r))
        .collect()
}
