//! Transfers `Tr_{L/k}` of Milnor-Witt K-theory along finite extensions.
//!
//! For `L = k(g)` with minimal polynomial `P`, the element `<q(g) P'(g)>` is
//! the value of the level-one framing `q P` on a neighbourhood of `Z(P)`. Its
//! transfer is computed by cutting the full line (or `G_m`) into the supports
//! of `q` and `P` and running Euclid's algorithm on the pair.
//!
//! * On the full affine line, `(A^1, f)` has value `<lead f> (deg f)_eps`.
//! * On `G_m`, `(G_m, x^d p)` only depends on `d`, the leading coefficient `c`,
//!   the degree `M` and `p(0)`, and equals `<c t^d (t - 1)^(M - 1)> [t]` with
//!   `t = (-1)^M p(0) / c`, or 0 when `t = 1`.
//! * The value on the support `Z(b)` of a framing `a b` only depends on `a`
//!   modulo `b`.
//!
//! Higher degrees reduce to these through the projection formula: at most one
//! symbol slot may lie outside the base field.

use super::MwElem;
use crate::algebra::absolute::Absolute;
use crate::algebra::{Elem, Field, Poly};
use crate::error::{Error, Result};
use crate::gw::GwElem;

/// Largest absolute degree of a field a transfer starts from.
pub const MAX_TRANSFER_DEGREE: usize = 8;

/// Value of `(A^1, f)`.
fn line_value(f: &Poly) -> GwElem {
    GwElem::n_epsilon(f.field(), f.deg()).scale(&f.lead())
}

/// Value of `(G_m, f)` in degree 1.
pub(crate) fn gm_value(f: &Poly) -> MwElem {
    let k = f.field().clone();
    let d = f.x_valuation() as i64;
    let p = f.strip_x();
    let m = p.deg();
    let c = p.lead();
    let mut t = p.coeff(0).div(&c).unwrap();
    if m % 2 == 1 {
        t = t.neg();
    }
    if t.is_one() {
        return MwElem::zero(&k, 1);
    }
    let u = c
        .mul(&t.powi(d).unwrap())
        .mul(&t.sub(&k.one()).powi(m - 1).unwrap());
    MwElem::symbol(&k, &[t])
        .unwrap()
        .gw_mul(&GwElem::one_form(&u).unwrap())
}

/// Value of `(A^1 \ Z(a), a b)` for coprime `a`, `b`.
pub(crate) fn chain_line(a: &Poly, b: &Poly) -> Result<GwElem> {
    let k = a.field().clone();
    let mut acc = GwElem::zero(&k);
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign = 1;
    while !b.is_constant() {
        if a.is_zero() {
            return Err(Error::Invalid("framing factors are not coprime".into()));
        }
        let v = line_value(&a.mul(&b));
        acc = if sign > 0 { acc.add(&v) } else { acc.sub(&v) };
        if a.is_constant() {
            break;
        }
        let r = b.rem(&a);
        b = a;
        a = r;
        sign = -sign;
    }
    Ok(acc)
}

/// Value of `(G_m \ Z(a), a b)` for coprime `a`, `b`.
pub(crate) fn chain_gm(a: &Poly, b: &Poly) -> Result<MwElem> {
    let k = a.field().clone();
    let mut acc = MwElem::zero(&k, 1);
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign = 1;
    while !b.strip_x().is_constant() {
        if a.is_zero() {
            return Err(Error::Invalid("framing factors are not coprime".into()));
        }
        let v = gm_value(&a.mul(&b));
        acc = if sign > 0 { acc.add(&v)? } else { acc.sub(&v)? };
        if a.strip_x().is_constant() {
            break;
        }
        let r = b.rem(&a);
        b = a;
        a = r;
        sign = -sign;
    }
    Ok(acc)
}

/// Solves `sum c_j g^j = d` for `c` over the base field; `g` must generate.
fn power_coords(d: &Elem, g: &Elem) -> Result<Poly> {
    let l = d.field().clone();
    let k = l.base();
    let n = l.degree();
    if *g == l.generator() {
        return Ok(d.rep_poly());
    }
    // columns: coordinates of g^j
    let mut rows: Vec<Vec<Elem>> = vec![Vec::with_capacity(n + 1); n];
    let mut pw = l.one();
    for _ in 0..n {
        for (i, c) in pw.coeffs().into_iter().enumerate() {
            rows[i].push(c);
        }
        pw = pw.mul(g);
    }
    for (i, c) in d.coeffs().into_iter().enumerate() {
        rows[i].push(c);
    }
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or_else(|| Error::Invalid("element does not generate the field".into()))?;
        rows.swap(col, piv);
        let inv = rows[col][col].inv()?;
        for e in rows[col].iter_mut() {
            *e = e.mul(&inv);
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for j in 0..=n {
                    let v = rows[r][j].sub(&f.mul(&rows[col][j]));
                    rows[r][j] = v;
                }
            }
        }
    }
    let c: Vec<Elem> = rows.into_iter().map(|r| r[n].clone()).collect();
    Ok(Poly::new(&k, c))
}

/// `Tr_{L/k}(<b>)` for `L = k(g)` simple over `k`.
fn transfer_form(b: &Elem) -> Result<GwElem> {
    let l = b.field().clone();
    let g = l.generator();
    let p = l.minpoly();
    let dp = p.derivative().eval_embed(&g);
    let q = power_coords(&b.div(&dp)?, &g)?;
    chain_line(&q, &p)
}

/// `Tr_{L/k}(<b>[g])` for `g` generating `L` over `k`.
fn transfer_slot(b: &Elem, g: &Elem) -> Result<MwElem> {
    let p = g.minpoly_over_base();
    if p.deg() as usize != g.field().degree() {
        return Err(Error::UnsupportedTransferShape(format!(
            "symbol entry {} does not generate {}",
            g,
            g.field()
        )));
    }
    let dp = p.derivative().eval_embed(g);
    let q = power_coords(&b.div(&dp)?, g)?;
    chain_gm(&q, &p)
}

fn transfer_gw(g: &GwElem, k: &Field) -> Result<GwElem> {
    let mut acc = GwElem::zero(k);
    for (s, b) in g.terms() {
        let v = transfer_form(&b)?;
        acc = if s > 0 { acc.add(&v) } else { acc.sub(&v) };
    }
    Ok(acc)
}

/// One step of the tower: `Tr_{L/k}` with `k` the base field of `L`.
pub fn transfer_step(x: &MwElem) -> Result<MwElem> {
    let l = x.field().clone();
    if l.is_rationals() {
        return Ok(x.clone());
    }
    if l.abs_degree() > MAX_TRANSFER_DEGREE {
        return Err(Error::DegreeBound(l.abs_degree(), MAX_TRANSFER_DEGREE));
    }
    let k = l.base();
    let n = x.degree();
    let mut acc = MwElem::zero(&k, n);
    for t in x.terms() {
        let down: Vec<Option<Elem>> = t.symbol.iter().map(|a| a.in_base()).collect();
        let outside: Vec<usize> = (0..down.len()).filter(|&i| down[i].is_none()).collect();
        let v = match outside.len() {
            0 => {
                let g = transfer_gw(&t.coeff, &k)?;
                if n < 0 {
                    MwElem::eta_pow(&k, (-n) as u64).gw_mul(&g)
                } else {
                    let s: Vec<Elem> = down.into_iter().map(|a| a.unwrap()).collect();
                    MwElem::symbol(&k, &s)?.gw_mul(&g)
                }
            }
            1 => {
                let i = outside[0];
                let gamma = &t.symbol[i];
                let mut mid = MwElem::zero(&k, 1);
                for (s, b) in t.coeff.terms() {
                    let v = transfer_slot(&b, gamma)?;
                    mid = if s > 0 { mid.add(&v)? } else { mid.sub(&v)? };
                }
                let left: Vec<Elem> = down[..i].iter().map(|a| a.clone().unwrap()).collect();
                let right: Vec<Elem> = down[i + 1..].iter().map(|a| a.clone().unwrap()).collect();
                MwElem::symbol(&k, &left)?
                    .mul(&mid)?
                    .mul(&MwElem::symbol(&k, &right)?)?
            }
            _ => {
                return Err(Error::UnsupportedTransferShape(format!(
                    "term {}*[{}] has several entries outside {}",
                    t.coeff,
                    t.symbol.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", "),
                    k
                )))
            }
        };
        acc = acc.add(&v)?;
    }
    Ok(acc)
}

/// Rewrites an element over a tower as an element over its absolute field.
fn to_absolute(x: &MwElem) -> Result<MwElem> {
    let abs: std::sync::Arc<Absolute> = x.field().absolute();
    let f = abs.field.clone();
    let mut acc = MwElem::zero(&f, x.degree());
    for t in x.terms() {
        let mut g = GwElem::zero(&f);
        for (s, b) in t.coeff.terms() {
            let e = GwElem::one_form(&abs.to_abs(&b))?;
            g = if s > 0 { g.add(&e) } else { g.sub(&e) };
        }
        let sym: Vec<Elem> = t.symbol.iter().map(|a| abs.to_abs(a)).collect();
        let v = if x.degree() < 0 {
            MwElem::eta_pow(&f, (-x.degree()) as u64).gw_mul(&g)
        } else {
            MwElem::symbol(&f, &sym)?.gw_mul(&g)
        };
        acc = acc.add(&v)?;
    }
    Ok(acc)
}

/// `Tr_{L/Q}` computed in one step through a primitive element of `L`.
pub fn transfer_absolute(x: &MwElem) -> Result<MwElem> {
    if x.field().abs_degree() > MAX_TRANSFER_DEGREE {
        return Err(Error::DegreeBound(x.field().abs_degree(), MAX_TRANSFER_DEGREE));
    }
    if x.field().tower().len() <= 2 {
        return transfer_step(x);
    }
    transfer_step(&to_absolute(x)?)
}

/// `Tr_{L/k}` for `k` a field of the tower of `L`: step by step, falling back to
/// a primitive element when a step meets an unsupported shape and `k = Q`.
pub fn transfer(x: &MwElem, k: &Field) -> Result<MwElem> {
    let l = x.field().clone();
    if !l.tower().contains(k) {
        return Err(Error::NotASubfield(k.to_string(), l.to_string()));
    }
    if l.abs_degree() > MAX_TRANSFER_DEGREE {
        return Err(Error::DegreeBound(l.abs_degree(), MAX_TRANSFER_DEGREE));
    }
    let mut cur = x.clone();
    while cur.field() != k {
        match transfer_step(&cur) {
            Ok(v) => cur = v,
            Err(Error::UnsupportedTransferShape(m)) => {
                if k.is_rationals() && l.tower().len() > 2 {
                    return transfer_absolute(x).map_err(|_| Error::UnsupportedTransferShape(m));
                }
                return Err(Error::UnsupportedTransferShape(m));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(cur)
}

/// Base change of `Tr_{L/k}(x)` to an extension `f` of `k`, computed on the other
/// side of the square: `L (x)_k f` splits as a product of fields `f_i`, and the
/// result is the sum of the transfers `Tr_{f_i/f}` of the images of `x`.
pub fn extend_then_transfer(x: &MwElem, f: &Field) -> Result<MwElem> {
    let l = x.field().clone();
    let k = l.base();
    if !f.tower().contains(&k) {
        return Err(Error::NotASubfield(k.to_string(), f.to_string()));
    }
    let p = f.embed_poly(&l.minpoly())?;
    let mut acc = MwElem::zero(f, x.degree());
    for (g, _) in crate::algebra::factor(&p)? {
        let fi = if g.deg() == 1 {
            f.clone()
        } else {
            Field::extension(f, &g, "w")?
        };
        let root = if g.deg() == 1 {
            g.coeff(0).div(&g.lead())?.neg()
        } else {
            fi.generator()
        };
        let img = |e: &Elem| -> Result<Elem> {
            let r = fi.embed_poly(&f.embed_poly(&e.rep_poly())?)?;
            Ok(r.eval(&root))
        };
        let mut terms = Vec::new();
        for t in x.terms() {
            let mut c = GwElem::zero(&fi);
            for (s, b) in t.coeff.terms() {
                let e = GwElem::one_form(&img(&b)?)?;
                c = if s > 0 { c.add(&e) } else { c.sub(&e) };
            }
            let sym = t.symbol.iter().map(&img).collect::<Result<Vec<_>>>()?;
            terms.push(super::MwTerm { coeff: c, symbol: sym });
        }
        let y = MwElem::from_terms(&fi, x.degree(), terms)?;
        let v = if fi == *f { y } else { transfer_step(&y)? };
        acc = acc.add(&v)?;
    }
    Ok(acc)
}
