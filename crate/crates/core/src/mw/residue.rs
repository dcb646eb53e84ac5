//! Residue maps on Milnor-Witt symbols of a rational function field `K(t)`.

use std::fmt;

use super::{Expanded, MwElem};
use crate::algebra::{Elem, Field, Poly};
use crate::error::{Error, Result};
use crate::gw::GwElem;

/// A nonzero rational function `num / den` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: &Poly, den: &Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let lc = d.lead();
        let inv = lc.inv()?;
        Ok(RatFunc {
            num: n.scale(&inv),
            den: d.scale(&inv),
        })
    }

    pub fn from_poly(p: &Poly) -> RatFunc {
        RatFunc {
            num: p.clone(),
            den: Poly::one(p.field()),
        }
    }

    pub fn constant(c: &Elem) -> RatFunc {
        RatFunc::from_poly(&Poly::constant(c.field(), c))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num.mul(&o.num), &self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(&self.den, &self.num)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RatFunc::new(&n, &self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num.fmt_var("t"))
        } else {
            write!(f, "({})/({})", self.num.fmt_var("t"), self.den.fmt_var("t"))
        }
    }
}

/// A place of `K(t)` trivial on `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FnPlace {
    /// The zero locus of a monic irreducible polynomial, with uniformizer `P`.
    Finite(Poly),
    /// The place at infinity, with uniformizer `-1/t`.
    Infinity,
}

/// One term `n * <c> * [f_1, ..., f_k]` of a Milnor-Witt element over `K(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RfTerm {
    pub mult: i64,
    pub coeff: RatFunc,
    pub symbol: Vec<RatFunc>,
}

/// A Milnor-Witt element of degree `n >= 1` over `K(t)`, given by terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RfMwElem {
    pub field: Field,
    pub degree: usize,
    pub terms: Vec<RfTerm>,
}

impl RfMwElem {
    pub fn symbol(entries: Vec<RatFunc>) -> Result<RfMwElem> {
        let field = entries.first().ok_or(Error::Invalid("empty symbol".into()))?.field().clone();
        let one = RatFunc::constant(&field.one());
        RfMwElem::new(
            &field,
            entries.len(),
            vec![RfTerm {
                mult: 1,
                coeff: one,
                symbol: entries,
            }],
        )
    }

    pub fn new(field: &Field, degree: usize, terms: Vec<RfTerm>) -> Result<RfMwElem> {
        for t in &terms {
            if t.symbol.len() != degree {
                return Err(Error::DegreeMismatch(t.symbol.len() as i64, degree as i64));
            }
            if t.coeff.is_zero() || t.symbol.iter().any(|f| f.is_zero()) {
                return Err(Error::ZeroUnit);
            }
        }
        Ok(RfMwElem {
            field: field.clone(),
            degree,
            terms,
        })
    }

    pub fn add(&self, o: &RfMwElem) -> Result<RfMwElem> {
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch(self.degree as i64, o.degree as i64));
        }
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        RfMwElem::new(&self.field, self.degree, t)
    }

    pub fn scale(&self, mult: i64, coeff: &RatFunc) -> RfMwElem {
        RfMwElem {
            field: self.field.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|t| RfTerm {
                    mult: t.mult * mult,
                    coeff: t.coeff.mul(coeff),
                    symbol: t.symbol.clone(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for RfMwElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let (neg, m) = (t.mult < 0, t.mult.unsigned_abs());
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut parts = Vec::new();
            if m != 1 {
                parts.push(m.to_string());
            }
            let unit = t.coeff.den().is_one() && t.coeff.num().is_one();
            if !unit || t.symbol.is_empty() {
                parts.push(format!("<{}>", t.coeff));
            }
            if !t.symbol.is_empty() {
                let s: Vec<String> = t.symbol.iter().map(|g| g.to_string()).collect();
                parts.push(format!("[{}]", s.join(", ")));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// The residue field of a place: for linear `P` this is `K` itself.
pub fn residue_field(place: &FnPlace, field: &Field, name: &str) -> Result<Field> {
    match place {
        FnPlace::Infinity => Ok(field.clone()),
        FnPlace::Finite(p) => {
            if p.field() != field {
                return Err(Error::FieldMismatch(p.field().to_string(), field.to_string()));
            }
            if p.deg() < 1 || !p.is_monic() {
                return Err(Error::InvalidPlace(format!("{} is not monic of positive degree", p)));
            }
            if p.deg() == 1 {
                Ok(field.clone())
            } else {
                Field::extension(field, p, name).map_err(|e| match e {
                    Error::NotIrreducible(m) => Error::InvalidPlace(m),
                    e => e,
                })
            }
        }
    }
}

/// Valuation and reduced unit part of `f = pi^v u`.
fn split(f: &RatFunc, place: &FnPlace, kappa: &Field) -> Result<(i64, Elem)> {
    match place {
        FnPlace::Infinity => {
            let d = f.num.deg() - f.den.deg();
            // f ~ lc t^d and pi = -1/t, so u -> lc (-1)^d
            let mut u = f.num.lead().div(&f.den.lead())?;
            if d.rem_euclid(2) == 1 {
                u = u.neg();
            }
            Ok((-d, u))
        }
        FnPlace::Finite(p) => {
            let a = f.num.order_at(p);
            let b = f.den.order_at(p);
            let n = f.num.div_exact(&p.pow(a as u32)).unwrap();
            let d = f.den.div_exact(&p.pow(b as u32)).unwrap();
            let reduce = |q: &Poly| -> Elem {
                let r = q.rem(p);
                if p.deg() == 1 {
                    // evaluate at the root
                    let root = p.coeff(0).neg();
                    r.eval(&root)
                } else {
                    kappa.from_coeffs(&r.coeffs())
                }
            };
            let u = reduce(&n).div(&reduce(&d))?;
            Ok((a as i64 - b as i64, u))
        }
    }
}

#[derive(Clone)]
enum Slot {
    Pi,
    U(Elem),
}

struct Mono {
    coeff: GwElem,
    eta: u64,
    slots: Vec<Slot>,
}

/// Residue at `place`, with values in Milnor-Witt K-theory of the residue field.
/// Returns the residue field alongside the degree `n - 1` element.
pub fn residue(x: &RfMwElem, place: &FnPlace, name: &str) -> Result<(Field, MwElem)> {
    let kappa = residue_field(place, &x.field, name)?;
    let eps = GwElem::epsilon(&kappa);
    let mut out: Vec<Expanded> = Vec::new();
    for term in &x.terms {
        let (w, uc) = split(&term.coeff, place, &kappa)?;
        let c0 = GwElem::one_form(&uc)?.int_mul(term.mult);
        let mut monos = vec![Mono {
            coeff: c0.clone(),
            eta: 0,
            slots: vec![],
        }];
        // <pi^w u> = <u> (1 + eta [pi]) for odd w
        if w.rem_euclid(2) == 1 {
            monos.push(Mono {
                coeff: c0,
                eta: 1,
                slots: vec![Slot::Pi],
            });
        }
        for f in &term.symbol {
            let (v, u) = split(f, place, &kappa)?;
            // [pi^v u] = v_eps [pi] + [u] + (v odd) eta [pi][u]
            let mut next = Vec::new();
            for m in &monos {
                if v != 0 {
                    let mut s = m.slots.clone();
                    s.push(Slot::Pi);
                    next.push(Mono {
                        coeff: m.coeff.mul(&GwElem::n_epsilon(&kappa, v)),
                        eta: m.eta,
                        slots: s,
                    });
                }
                let mut s = m.slots.clone();
                s.push(Slot::U(u.clone()));
                next.push(Mono {
                    coeff: m.coeff.clone(),
                    eta: m.eta,
                    slots: s,
                });
                if v.rem_euclid(2) == 1 {
                    let mut s = m.slots.clone();
                    s.push(Slot::Pi);
                    s.push(Slot::U(u.clone()));
                    next.push(Mono {
                        coeff: m.coeff.clone(),
                        eta: m.eta + 1,
                        slots: s,
                    });
                }
            }
            monos = next;
        }
        for m in monos {
            if let Some(e) = residue_of_mono(m, &kappa, &eps) {
                out.push(e);
            }
        }
    }
    let deg = x.degree as i64 - 1;
    Ok((kappa.clone(), MwElem::from_expanded(&kappa, deg, out)))
}

/// Moves every `[pi]` to the front using `[u][pi] = eps [pi][u]` and
/// `[pi][pi] = [pi][-1]`, then applies `d([pi][u..]) = [u..]`, `d([u..]) = 0`.
fn residue_of_mono(mut m: Mono, kappa: &Field, eps: &GwElem) -> Option<Expanded> {
    let mut front: Option<()> = None;
    let mut rest: Vec<Elem> = Vec::new();
    let mut coeff = m.coeff.clone();
    for s in m.slots.drain(..) {
        match s {
            Slot::U(u) => rest.push(u),
            Slot::Pi => {
                // move past every unit slot already collected
                if rest.len() % 2 == 1 {
                    coeff = coeff.mul(eps);
                }
                if front.is_some() {
                    // [pi][pi] = [pi][-1]; the new [-1] sits right after [pi]
                    rest.insert(0, kappa.from_int(-1));
                } else {
                    front = Some(());
                }
            }
        }
    }
    front.map(|_| Expanded {
        coeff,
        eta: m.eta,
        slots: rest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mw::mw_equal;
    use crate::quadform::Decision;

    fn q() -> Field {
        Field::rationals()
    }

    fn poly(c: &[i64]) -> Poly {
        Poly::from_ints(&q(), c)
    }

    fn rf(c: &[i64]) -> RatFunc {
        RatFunc::from_poly(&poly(c))
    }

    #[test]
    fn residue_of_uniformizer() {
        let x = RfMwElem::symbol(vec![rf(&[0, 1])]).unwrap();
        let (k, r) = residue(&x, &FnPlace::Finite(poly(&[0, 1])), "u").unwrap();
        assert!(k.is_rationals());
        assert_eq!(mw_equal(&r, &MwElem::one(&k)).unwrap(), Decision::Equal);
    }

    #[test]
    fn residue_at_quadratic_place() {
        let p = poly(&[-2, 0, 1]);
        let x = RfMwElem::symbol(vec![RatFunc::from_poly(&p)]).unwrap();
        let (k, r) = residue(&x, &FnPlace::Finite(p), "r").unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(mw_equal(&r, &MwElem::one(&k)).unwrap(), Decision::Equal);
    }

    #[test]
    fn residue_of_unit_symbol_vanishes() {
        let x = RfMwElem::symbol(vec![rf(&[1, 1]), rf(&[3])]).unwrap();
        let (k, r) = residue(&x, &FnPlace::Finite(poly(&[0, 1])), "u").unwrap();
        assert_eq!(mw_equal(&r, &MwElem::zero(&k, 1)).unwrap(), Decision::Equal);
    }

    #[test]
    fn residue_at_infinity_of_power() {
        // -d_inf [(t - 2)^r * 3] = r_eps <3>
        for r in 1..=4u32 {
            let f = poly(&[-2, 1]).pow(r).scale(&q().from_int(3));
            let x = RfMwElem::symbol(vec![RatFunc::from_poly(&f)]).unwrap();
            let (k, d) = residue(&x, &FnPlace::Infinity, "u").unwrap();
            let want = GwElem::n_epsilon(&k, r as i64).scale(&k.from_int(3));
            let got = d.neg();
            assert_eq!(
                mw_equal(&got, &MwElem::from_gw(&want)).unwrap(),
                Decision::Equal,
                "r = {}",
                r
            );
        }
    }

    #[test]
    fn residue_of_two_slot_symbol() {
        // d_t([t][5]) = [5], d_t([5][t]) = eps [5]
        let x = RfMwElem::symbol(vec![rf(&[0, 1]), rf(&[5])]).unwrap();
        let (k, r) = residue(&x, &FnPlace::Finite(poly(&[0, 1])), "u").unwrap();
        let five = MwElem::symbol(&k, &[k.from_int(5)]).unwrap();
        assert_eq!(mw_equal(&r, &five).unwrap(), Decision::Equal);
        let y = RfMwElem::symbol(vec![rf(&[5]), rf(&[0, 1])]).unwrap();
        let (_, r) = residue(&y, &FnPlace::Finite(poly(&[0, 1])), "u").unwrap();
        let want = five.gw_mul(&GwElem::epsilon(&k));
        assert_eq!(mw_equal(&r, &want).unwrap(), Decision::Equal);
    }
}
