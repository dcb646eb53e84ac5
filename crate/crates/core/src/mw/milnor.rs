//! Milnor K-theory symbols and an equality test over the rationals.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::algebra::integer::{primes_of, reduce_mod, valuation, Rat};
use crate::algebra::{Elem, Field};
use crate::error::{Error, Result};
use crate::quadform::{hilbert_symbol, Decision, Place};

/// A formal integer combination of Milnor symbols `{a_1, ..., a_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorElem {
    field: Field,
    degree: i64,
    terms: Vec<(BigInt, Vec<Elem>)>,
}

impl MilnorElem {
    pub fn zero(field: &Field, degree: i64) -> MilnorElem {
        MilnorElem {
            field: field.clone(),
            degree,
            terms: vec![],
        }
    }

    pub fn new(field: &Field, degree: i64, terms: Vec<(i64, Vec<Elem>)>) -> MilnorElem {
        let mut out: Vec<(BigInt, Vec<Elem>)> = Vec::new();
        for (n, s) in terms {
            if n == 0 || s.iter().any(|a| a.is_one()) {
                continue;
            }
            if let Some(o) = out.iter_mut().find(|o| o.1 == s) {
                o.0 += n;
            } else {
                out.push((BigInt::from(n), s));
            }
        }
        out.retain(|t| !t.0.is_zero());
        out.sort_by(|a, b| a.1.cmp(&b.1));
        MilnorElem {
            field: field.clone(),
            degree,
            terms: out,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn terms(&self) -> &[(BigInt, Vec<Elem>)] {
        &self.terms
    }

    pub fn sub(&self, o: &MilnorElem) -> Result<MilnorElem> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field.to_string(), o.field.to_string()));
        }
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch(self.degree, o.degree));
        }
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().map(|(n, s)| (-n, s.clone())));
        let mut out: Vec<(BigInt, Vec<Elem>)> = Vec::new();
        for (n, s) in t {
            if let Some(x) = out.iter_mut().find(|x| x.1 == s) {
                x.0 += n;
            } else {
                out.push((n, s));
            }
        }
        out.retain(|t| !t.0.is_zero());
        out.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(MilnorElem {
            field: self.field.clone(),
            degree: self.degree,
            terms: out,
        })
    }
}

impl fmt::Display for MilnorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, s)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let body = s.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ");
            if n.is_one() {
                write!(f, "{{{}}}", body)?;
            } else {
                write!(f, "{}*{{{}}}", n, body)?;
            }
        }
        Ok(())
    }
}

pub fn milnor_equal(x: &MilnorElem, y: &MilnorElem) -> Result<Decision> {
    Ok(milnor_is_zero(&x.sub(y)?))
}

fn rat_entries(s: &[Elem]) -> Vec<Rat> {
    s.iter().map(|a| a.to_rat().unwrap()).collect()
}

fn pow_mod(a: &BigUint, n: &BigInt, p: &BigUint) -> BigUint {
    let e = n.magnitude() % (p - 1u32);
    let r = a.modpow(&e, p);
    if n.is_negative() {
        r.modpow(&(p - 2u32), p)
    } else {
        r
    }
}

/// Tame symbol of `{a, b}` at an odd prime, as a residue mod `p`.
fn tame(a: &Rat, b: &Rat, p: &BigUint) -> BigUint {
    let va = valuation(a, p);
    let vb = valuation(b, p);
    let pr = Rat::from_integer(BigInt::from(p.clone()));
    let ua = a / pow_rat(&pr, va);
    let ub = b / pow_rat(&pr, vb);
    // (-1)^{va vb} a^{vb} / b^{va}
    let mut v = pow_rat(&ua, vb) / pow_rat(&ub, va);
    if (va * vb) % 2 != 0 {
        v = -v;
    }
    reduce_mod(&v, p)
}

fn pow_rat(a: &Rat, n: i64) -> Rat {
    let r = num_traits::pow(a.clone(), n.unsigned_abs() as usize);
    if n < 0 {
        r.recip()
    } else {
        r
    }
}

/// Decides whether a Milnor element is zero. Complete over the rationals; over
/// other fields only degree 1 and the real-place obstruction are decided.
pub fn milnor_is_zero(m: &MilnorElem) -> Decision {
    if m.terms.is_empty() || m.degree < 0 {
        return Decision::Equal;
    }
    if m.degree == 0 {
        let s: BigInt = m.terms.iter().map(|t| t.0.clone()).sum();
        return Decision::from_bool(s.is_zero());
    }
    if m.degree == 1 {
        let mut acc = m.field.one();
        for (n, s) in &m.terms {
            let e = num_traits::ToPrimitive::to_i64(n).expect("coefficient too large");
            acc = acc.mul(&s[0].powi(e).unwrap());
        }
        return Decision::from_bool(acc.is_one());
    }
    // real places: the sign symbol
    let embeddings = m.field.one().signs().len();
    for idx in 0..embeddings {
        let mut parity = BigInt::zero();
        for (n, s) in &m.terms {
            if s.iter().all(|a| a.signs()[idx] < 0) {
                parity += n;
            }
        }
        if (parity % 2u32) != BigInt::zero() {
            return Decision::NotEqual;
        }
    }
    if !m.field.is_rationals() {
        return Decision::Unknown;
    }
    if m.degree >= 3 {
        return Decision::Equal;
    }
    let rows: Vec<(BigInt, Vec<Rat>)> = m.terms.iter().map(|(n, s)| (n.clone(), rat_entries(s))).collect();
    let mut primes: Vec<BigUint> = rows
        .iter()
        .flat_map(|(_, s)| s.iter().flat_map(primes_of))
        .collect();
    primes.sort();
    primes.dedup();
    for p in &primes {
        if *p == BigUint::from(2u32) {
            let mut sign = 1i8;
            for (n, s) in &rows {
                if (n % 2u32) != BigInt::zero() {
                    sign *= hilbert_symbol(&s[0], &s[1], &Place::two()).unwrap();
                }
            }
            if sign != 1 {
                return Decision::NotEqual;
            }
            continue;
        }
        let mut acc = BigUint::one();
        for (n, s) in &rows {
            acc = (acc * pow_mod(&tame(&s[0], &s[1], p), n, p)) % p;
        }
        if !acc.is_one() {
            return Decision::NotEqual;
        }
    }
    Decision::Equal
}
