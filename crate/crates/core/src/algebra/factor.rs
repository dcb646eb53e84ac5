//! Polynomial factoring: Zassenhaus over the rationals, Trager's norm method over extensions.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::absolute::poly_norm;
use super::field::{Elem, Field};
use super::integer::{mod_inverse, Rat};
use super::modp::{self, Fp};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Largest degree of a rational polynomial handed to the Zassenhaus routine.
pub const MAX_FACTOR_DEGREE: usize = 64;

type ZP = Vec<BigInt>;

fn ztrim(v: &mut ZP) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZP {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    ztrim(&mut v);
    v
}

fn zcontent(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
    }
    g
}

fn zprimitive(a: &[BigInt]) -> ZP {
    let g = zcontent(a);
    let mut v: ZP = a.iter().map(|c| c / &g).collect();
    if v.last().map(|c| c.is_negative()).unwrap_or(false) {
        v = v.into_iter().map(|c| -c).collect();
    }
    v
}

/// Exact division over the integers.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZP> {
    let mut r = a.to_vec();
    ztrim(&mut r);
    if r.len() < b.len() {
        return if r.is_empty() { Some(vec![]) } else { None };
    }
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let (c, rm) = r.last().unwrap().div_rem(lb);
        if !rm.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
        r.pop();
        ztrim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    if r.is_empty() {
        ztrim(&mut q);
        Some(q)
    } else {
        None
    }
}

fn to_fp(a: &[BigInt], p: u64) -> Fp {
    let bp = BigInt::from(p);
    let mut v: Fp = a
        .iter()
        .map(|c| c.mod_floor(&bp).to_u64().unwrap())
        .collect();
    modp::trim(&mut v);
    v
}

fn from_fp(a: &[u64]) -> ZP {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn zmod(a: &[BigInt], m: &BigInt) -> ZP {
    let mut v: ZP = a.iter().map(|c| c.mod_floor(m)).collect();
    ztrim(&mut v);
    v
}

fn zmod_sym(a: &[BigInt], m: &BigInt) -> ZP {
    let half = m >> 1;
    let mut v: ZP = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    ztrim(&mut v);
    v
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| {
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    })
}

/// Lifts `f = g h (mod p)` with `g` monic to a factorization modulo `p^k`.
fn hensel_pair(f: &[BigInt], g: &Fp, h: &Fp, p: u64, k: u32) -> (ZP, ZP) {
    let (one, s, t) = modp::xgcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let bp = BigInt::from(p);
    let mut gg = from_fp(g);
    let mut hh = from_fp(h);
    let top = hh.len() - 1;
    hh[top] = f.last().unwrap().clone();
    let mut pj = bp.clone();
    for _ in 1..k {
        let gh = zmul(&gg, &hh);
        let diff: ZP = (0..f.len().max(gh.len()))
            .map(|i| {
                f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default()
            })
            .collect();
        let e: ZP = diff.iter().map(|c| c / &pj).collect();
        let e = to_fp(&e, p);
        let te = modp::mul(&t, &e, p);
        let (q, a) = modp::divrem(&te, g, p);
        let b = modp::add(&modp::mul(&s, &e, p), &modp::mul(&q, h, p), p);
        for (i, c) in a.iter().enumerate() {
            gg[i] += &pj * BigInt::from(*c);
        }
        for (i, c) in b.iter().enumerate() {
            hh[i] += &pj * BigInt::from(*c);
        }
        pj *= &bp;
        gg = zmod(&gg, &pj);
        for c in hh.iter_mut().take(top) {
            *c = c.mod_floor(&pj);
        }
    }
    (gg, hh)
}

fn hensel_multi(f: &[BigInt], factors: &[Fp], p: u64, k: u32, pk: &BigInt) -> Vec<ZP> {
    if factors.len() == 1 {
        let li = mod_inverse(f.last().unwrap(), pk).unwrap();
        let v: ZP = f.iter().map(|c| (c * &li).mod_floor(pk)).collect();
        return vec![v];
    }
    let lc = to_fp(&[f.last().unwrap().clone()], p);
    let lc = lc.first().copied().unwrap();
    let mut h: Fp = vec![lc];
    for g in &factors[1..] {
        h = modp::mul(&h, g, p);
    }
    let (gg, hh) = hensel_pair(f, &factors[0], &h, p, k);
    let mut out = vec![zmod(&gg, pk)];
    out.extend(hensel_multi(&hh, &factors[1..], p, k, pk));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors of a primitive squarefree integer polynomial with positive leading coefficient.
fn zassenhaus(f: &[BigInt]) -> Vec<ZP> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    // choose a good prime with few modular factors
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = to_fp(f, p);
        if fp.len() != f.len() {
            continue;
        }
        let dfp = modp::derivative(&fp, p);
        if modp::gcd(&fp, &dfp, p).len() != 1 {
            continue;
        }
        let fs = modp::factor_squarefree(&modp::monic(&fp, p), p);
        if fs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().map(|b| fs.len() < b.1.len()).unwrap_or(true) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, fs) = best.unwrap();
    let norm2: BigInt = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = (BigInt::one() << n) * norm2 * lc.abs();
    let bp = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = bp.clone();
    while pk <= &bound * 2 {
        pk *= &bp;
        k += 1;
    }
    let lifted = hensel_multi(f, &fs, p, k, &pk);
    let mut remaining: Vec<ZP> = lifted;
    let mut fcur = f.to_vec();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        for comb in combinations(remaining.len(), s) {
            let lcur = fcur.last().unwrap().clone();
            let mut g: ZP = vec![lcur];
            for &i in &comb {
                g = zmod(&zmul(&g, &remaining[i]), &pk);
            }
            let g = zprimitive(&zmod_sym(&g, &pk));
            if let Some(q) = zdiv_exact(&fcur, &g) {
                found = Some((comb, g, q));
                break;
            }
        }
        match found {
            Some((comb, g, q)) => {
                out.push(g);
                fcur = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !comb.contains(i))
                    .map(|(_, v)| v)
                    .collect();
            }
            None => s += 1,
        }
    }
    out.push(zprimitive(&fcur));
    out
}

fn rat_to_primitive(p: &Poly) -> ZP {
    let c = p.to_rats().unwrap();
    let mut l = BigInt::one();
    for q in &c {
        l = l.lcm(q.denom());
    }
    let v: ZP = c.iter().map(|q| (q * Rat::from_integer(l.clone())).to_integer()).collect();
    zprimitive(&v)
}

fn zp_to_monic(f: &Field, v: &[BigInt]) -> Poly {
    let rs: Vec<Rat> = v.iter().map(|c| Rat::from_integer(c.clone())).collect();
    Poly::from_rats(f, &rs).monic()
}

/// Monic irreducible factors with multiplicities of a rational polynomial.
pub fn factor_rational(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    let q = Field::rationals();
    if let Some(d) = p.degree() {
        if d > MAX_FACTOR_DEGREE {
            return Err(Error::PolyDegreeBound(d, MAX_FACTOR_DEGREE));
        }
    }
    let mut out = Vec::new();
    for (a, i) in p.squarefree_decomposition() {
        let z = rat_to_primitive(&a);
        let z = if z.last().map(|c| c.sign() == Sign::Minus).unwrap_or(false) {
            z.into_iter().map(|c| -c).collect()
        } else {
            z
        };
        for g in zassenhaus_with_linear(&z) {
            out.push((zp_to_monic(&q, &g), i));
        }
    }
    out.sort();
    Ok(out)
}

/// Strips rational roots first (cheap), then runs Zassenhaus on the rest.
fn zassenhaus_with_linear(f: &[BigInt]) -> Vec<ZP> {
    let mut out = Vec::new();
    let mut cur = f.to_vec();
    // x = 0
    while cur.len() > 1 && cur[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        cur.remove(0);
    }
    if cur.len() > 2 {
        let lc = cur.last().unwrap().abs();
        let c0 = cur[0].abs();
        let small = |n: &BigInt| n.bits() <= 40;
        if small(&lc) && small(&c0) {
            let divs = |n: &BigInt| -> Vec<BigInt> {
                let m = n.to_u64().unwrap();
                let mut v = Vec::new();
                let mut d = 1u64;
                while d * d <= m {
                    if m % d == 0 {
                        v.push(BigInt::from(d));
                        if d * d != m {
                            v.push(BigInt::from(m / d));
                        }
                    }
                    d += 1;
                    if d > 100_000 {
                        break;
                    }
                }
                v
            };
            let (dl, dc) = (divs(&lc), divs(&c0));
            if dl.len() * dc.len() <= 4000 {
                'outer: for b in &dl {
                    for a in &dc {
                        for sgn in [1i32, -1] {
                            let a = if sgn == 1 { a.clone() } else { -a.clone() };
                            if a.gcd(b) != BigInt::one() {
                                continue;
                            }
                            // root a/b: factor b x - a
                            let lin = vec![-a.clone(), b.clone()];
                            while let Some(q) = zdiv_exact(&cur, &lin) {
                                out.push(lin.clone());
                                cur = q;
                                if cur.len() <= 2 {
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if cur.len() > 1 {
        out.extend(zassenhaus(&zprimitive(&cur)));
    }
    out
}

/// Irreducible factors of a monic squarefree polynomial over a simple extension of Q.
fn trager(g: &Poly) -> Result<Vec<Poly>> {
    let a = g.field().clone();
    if g.deg() <= 1 {
        return Ok(vec![g.monic()]);
    }
    let theta = a.generator();
    let d = g.degree().unwrap() * a.degree();
    if d > MAX_FACTOR_DEGREE {
        return Err(Error::PolyDegreeBound(d, MAX_FACTOR_DEGREE));
    }
    let mut s: i64 = 0;
    let (gs, n) = loop {
        let sub = Poly::new(&a, vec![theta.mul(&a.from_int(-s)), a.one()]);
        let gs = g.compose(&sub);
        let n = poly_norm(&gs);
        if n.is_squarefree() {
            break (gs, n);
        }
        s = if s > 0 { -s } else { -s + 1 };
    };
    let back = Poly::new(&a, vec![theta.mul(&a.from_int(s)), a.one()]);
    let mut out = Vec::new();
    for (ni, _) in factor_rational(&n)? {
        let h = gs.gcd(&ni.embed_into(&a));
        if h.deg() >= 1 {
            out.push(h.compose(&back).monic());
        }
    }
    Ok(out)
}

/// Monic irreducible factors with multiplicities, sorted deterministically.
pub fn factor(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    let f = p.field().clone();
    if f.is_rationals() {
        return factor_rational(p);
    }
    let abs = f.absolute();
    let pa = abs.to_abs_poly(p);
    let mut out = Vec::new();
    for (ai, i) in pa.squarefree_decomposition() {
        for g in trager(&ai)? {
            out.push((abs.from_abs_poly(&g, &f).monic(), i));
        }
    }
    out.sort();
    Ok(out)
}

pub fn is_irreducible(p: &Poly) -> Result<bool> {
    if p.deg() < 1 {
        return Ok(false);
    }
    let fs = factor(p)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

/// Roots in the coefficient field, with multiplicities.
pub fn roots(p: &Poly) -> Result<Vec<(Elem, usize)>> {
    Ok(factor(p)?
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, m)| (g.coeff(0).neg(), m))
        .collect())
}

/// Some root in the coefficient field, if one exists.
pub fn find_root(p: &Poly) -> Option<Elem> {
    roots(p).ok()?.into_iter().next().map(|(r, _)| r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn prod(fs: &[(Poly, usize)], f: &Field) -> Poly {
        fs.iter()
            .fold(Poly::one(f), |acc, (g, m)| acc.mul(&g.pow(*m as u32)))
    }

    #[test]
    fn factors_swinnerton_dyer_like() {
        // (x^2-2)(x^2-3)(x^4-10x^2+1)
        let a = Poly::from_ints(&q(), &[-2, 0, 1]);
        let b = Poly::from_ints(&q(), &[-3, 0, 1]);
        let c = Poly::from_ints(&q(), &[1, 0, -10, 0, 1]);
        let p = a.mul(&b).mul(&c);
        let fs = factor(&p).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(prod(&fs, &q()), p);
    }

    #[test]
    fn factors_with_multiplicity_and_rational_roots() {
        let p = Poly::from_ints(&q(), &[-1, 2])
            .pow(2)
            .mul(&Poly::from_ints(&q(), &[1, 1, 1]))
            .mul(&Poly::from_ints(&q(), &[0, 1]));
        let fs = factor(&p).unwrap();
        assert_eq!(prod(&fs, &q()).monic(), p.monic());
        assert!(fs.iter().any(|(g, m)| g.deg() == 1 && *m == 2));
    }

    #[test]
    fn degree_sixteen_product() {
        let mut p = Poly::one(&q());
        let parts = [
            Poly::from_ints(&q(), &[3, 1, 0, 0, 1]),
            Poly::from_ints(&q(), &[-5, 0, 2, 0, 1]),
            Poly::from_ints(&q(), &[7, -1, 1]),
            Poly::from_ints(&q(), &[1, 1, 1, 1, 1, 1]),
            Poly::from_ints(&q(), &[-11, 1]),
        ];
        for g in &parts {
            p = p.mul(g);
        }
        assert_eq!(p.degree(), Some(16));
        let fs = factor(&p).unwrap();
        // the quintic splits as (x + 1)(x^2 + x + 1)(x^2 - x + 1)
        assert_eq!(fs.len(), 7);
        assert_eq!(prod(&fs, &q()), p);
    }

    #[test]
    fn irreducible_high_degree() {
        let p = Poly::from_ints(&q(), &[-2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert!(is_irreducible(&p).unwrap());
    }

    #[test]
    fn factor_over_quadratic_field() {
        let k = Field::extension(&q(), &Poly::from_ints(&q(), &[-2, 0, 1]), "s").unwrap();
        let p = Poly::from_ints(&k, &[-2, 0, 1]);
        let fs = factor(&p).unwrap();
        assert_eq!(fs.len(), 2);
        let p = Poly::from_ints(&k, &[-3, 0, 1]);
        assert_eq!(factor(&p).unwrap().len(), 1);
        let p = Poly::from_ints(&k, &[4, 0, 0, 0, 1]);
        // x^4 + 4 = (x^2+2x+2)(x^2-2x+2), and over Q(sqrt2) nothing more
        assert_eq!(factor(&p).unwrap().len(), 2);
        let p = Poly::from_ints(&k, &[1, 0, 0, 0, 1]);
        // x^4+1 = (x^2 + s x + 1)(x^2 - s x + 1)
        assert_eq!(factor(&p).unwrap().len(), 2);
    }

    #[test]
    fn factor_over_tower() {
        let k = Field::extension(&q(), &Poly::from_ints(&q(), &[-2, 0, 1]), "s").unwrap();
        let l = Field::extension(&k, &Poly::from_ints(&k, &[-3, 0, 1]), "t").unwrap();
        let p = Poly::from_ints(&l, &[-6, 0, 1]);
        let fs = factor(&p).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(g, _)| g.deg() == 1));
        assert_eq!(prod(&fs, &l), p);
    }
}
