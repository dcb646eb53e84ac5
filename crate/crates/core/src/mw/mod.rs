//! Milnor-Witt K-theory of number fields.
//!
//! An element of degree `n >= 0` is a sum of terms `g * [a_1, ..., a_n]` with
//! `g` in GW. An element of negative degree `-m` is `g * eta^m`, where only the
//! Witt class of `g` matters.
//!
//! Equality is decided through the two projections to Milnor K-theory and to
//! the Witt ring, which jointly detect elements.

pub mod milnor;
pub mod residue;
pub mod transfer;

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{Elem, Field};
use crate::error::{Error, Result};
use crate::gw::{gw_equal, GwElem};
use crate::quadform::{witt_trivial, Decision};

pub use milnor::{milnor_equal, milnor_is_zero, MilnorElem};
pub use residue::{residue, FnPlace, RatFunc, RfMwElem, RfTerm};
pub use transfer::{transfer, transfer_step, MAX_TRANSFER_DEGREE};

/// One term `coeff * [symbol]` (or `coeff * eta^m` in negative degree, with an empty symbol).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwTerm {
    pub coeff: GwElem,
    pub symbol: Vec<Elem>,
}

/// An element of `K^MW_n(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwElem {
    field: Field,
    degree: i64,
    terms: Vec<MwTerm>,
}

/// A term in expanded form: `coeff * eta^eta * [slots]`.
pub(crate) struct Expanded {
    pub coeff: GwElem,
    pub eta: u64,
    pub slots: Vec<Elem>,
}

impl MwElem {
    pub fn zero(field: &Field, degree: i64) -> MwElem {
        MwElem {
            field: field.clone(),
            degree,
            terms: vec![],
        }
    }

    /// Builds and normalizes an element from terms; every symbol must have length
    /// `max(degree, 0)`.
    pub fn from_terms(field: &Field, degree: i64, terms: Vec<MwTerm>) -> Result<MwElem> {
        let len = degree.max(0) as usize;
        for t in &terms {
            if t.symbol.len() != len {
                return Err(Error::DegreeMismatch(t.symbol.len() as i64, degree));
            }
            if t.coeff.field() != field {
                return Err(Error::FieldMismatch(t.coeff.field().to_string(), field.to_string()));
            }
            for a in &t.symbol {
                if a.is_zero() {
                    return Err(Error::ZeroUnit);
                }
                if a.field() != field {
                    return Err(Error::FieldMismatch(a.field().to_string(), field.to_string()));
                }
            }
        }
        Ok(MwElem {
            field: field.clone(),
            degree,
            terms,
        }
        .normalized())
    }

    pub fn from_gw(g: &GwElem) -> MwElem {
        MwElem {
            field: g.field().clone(),
            degree: 0,
            terms: vec![MwTerm {
                coeff: g.clone(),
                symbol: vec![],
            }],
        }
        .normalized()
    }

    pub fn one(field: &Field) -> MwElem {
        MwElem::from_gw(&GwElem::one(field))
    }

    /// `<a>` in degree 0.
    pub fn one_form(a: &Elem) -> Result<MwElem> {
        Ok(MwElem::from_gw(&GwElem::one_form(a)?))
    }

    /// The symbol `[a_1, ..., a_n]`.
    pub fn symbol(field: &Field, entries: &[Elem]) -> Result<MwElem> {
        MwElem::from_terms(
            field,
            entries.len() as i64,
            vec![MwTerm {
                coeff: GwElem::one(field),
                symbol: entries.to_vec(),
            }],
        )
    }

    pub fn eta(field: &Field) -> MwElem {
        MwElem::eta_pow(field, 1)
    }

    pub fn eta_pow(field: &Field, m: u64) -> MwElem {
        if m == 0 {
            return MwElem::one(field);
        }
        MwElem {
            field: field.clone(),
            degree: -(m as i64),
            terms: vec![MwTerm {
                coeff: GwElem::one(field),
                symbol: vec![],
            }],
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn terms(&self) -> &[MwTerm] {
        &self.terms
    }

    pub fn is_syntactic_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalized(mut self) -> MwElem {
        let mut out: Vec<MwTerm> = Vec::new();
        for t in self.terms.drain(..) {
            // [.., 1, ..] = 0
            if t.symbol.iter().any(|a| a.is_one()) || t.coeff.is_syntactic_zero() {
                continue;
            }
            if let Some(o) = out.iter_mut().find(|o| o.symbol == t.symbol) {
                o.coeff = o.coeff.add(&t.coeff);
            } else {
                out.push(t);
            }
        }
        out.retain(|t| !t.coeff.is_syntactic_zero());
        out.sort_by(|a, b| a.symbol.cmp(&b.symbol));
        self.terms = out;
        self
    }

    pub fn add(&self, o: &MwElem) -> Result<MwElem> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field.to_string(), o.field.to_string()));
        }
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch(self.degree, o.degree));
        }
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        Ok(MwElem {
            field: self.field.clone(),
            degree: self.degree,
            terms: t,
        }
        .normalized())
    }

    pub fn neg(&self) -> MwElem {
        MwElem {
            field: self.field.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|t| MwTerm {
                    coeff: t.coeff.neg(),
                    symbol: t.symbol.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, o: &MwElem) -> Result<MwElem> {
        self.add(&o.neg())
    }

    pub fn int_mul(&self, n: i64) -> MwElem {
        MwElem {
            field: self.field.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|t| MwTerm {
                    coeff: t.coeff.int_mul(n),
                    symbol: t.symbol.clone(),
                })
                .collect(),
        }
        .normalized()
    }

    /// Multiplication by a GW element.
    pub fn gw_mul(&self, g: &GwElem) -> MwElem {
        MwElem {
            field: self.field.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|t| MwTerm {
                    coeff: g.mul(&t.coeff),
                    symbol: t.symbol.clone(),
                })
                .collect(),
        }
        .normalized()
    }

    pub(crate) fn expanded(&self) -> Vec<Expanded> {
        self.terms
            .iter()
            .map(|t| Expanded {
                coeff: t.coeff.clone(),
                eta: if self.degree < 0 { (-self.degree) as u64 } else { 0 },
                slots: t.symbol.clone(),
            })
            .collect()
    }

    /// Reassembles expanded terms of a common degree, absorbing `eta [a] = <a> - 1`.
    pub(crate) fn from_expanded(field: &Field, degree: i64, parts: Vec<Expanded>) -> MwElem {
        let mut terms = Vec::new();
        for mut e in parts {
            debug_assert_eq!(e.slots.len() as i64 - e.eta as i64, degree);
            while e.eta > 0 && !e.slots.is_empty() {
                let a = e.slots.remove(0);
                let g = GwElem::one_form(&a).unwrap().sub(&GwElem::one(field));
                e.coeff = e.coeff.mul(&g);
                e.eta -= 1;
            }
            terms.push(MwTerm {
                coeff: e.coeff,
                symbol: e.slots,
            });
        }
        MwElem {
            field: field.clone(),
            degree,
            terms,
        }
        .normalized()
    }

    pub fn mul(&self, o: &MwElem) -> Result<MwElem> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field.to_string(), o.field.to_string()));
        }
        let mut parts = Vec::new();
        for a in self.expanded() {
            for b in o.expanded() {
                let mut slots = a.slots.clone();
                slots.extend(b.slots.iter().cloned());
                parts.push(Expanded {
                    coeff: a.coeff.mul(&b.coeff),
                    eta: a.eta + b.eta,
                    slots,
                });
            }
        }
        Ok(MwElem::from_expanded(&self.field, self.degree + o.degree, parts))
    }

    /// Base change to a field containing the field of `self`.
    pub fn extend_to(&self, f: &Field) -> Result<MwElem> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(MwTerm {
                    coeff: t.coeff.extend_to(f)?,
                    symbol: t
                        .symbol
                        .iter()
                        .map(|a| f.embed(a))
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MwElem::from_terms(f, self.degree, terms)
    }

    /// Image in Milnor K-theory (`eta` maps to 0, `<u>` to 1).
    pub fn to_milnor(&self) -> MilnorElem {
        if self.degree < 0 {
            return MilnorElem::zero(&self.field, self.degree);
        }
        MilnorElem::new(
            &self.field,
            self.degree,
            self.terms
                .iter()
                .map(|t| (t.coeff.rank(), t.symbol.clone()))
                .collect(),
        )
    }

    /// Image in the Witt ring: `[a_1..a_n]` maps to `prod (<a_i> - 1)` in `I^n`,
    /// `eta^m` to 1.
    pub fn to_witt(&self) -> GwElem {
        let mut acc = GwElem::zero(&self.field);
        let one = GwElem::one(&self.field);
        for t in &self.terms {
            let mut g = t.coeff.clone();
            for a in &t.symbol {
                g = g.mul(&GwElem::one_form(a).unwrap().sub(&one));
            }
            acc = acc.add(&g);
        }
        acc
    }

    /// The degree-0 part as a GW element.
    pub fn as_gw(&self) -> Result<GwElem> {
        if self.degree != 0 {
            return Err(Error::DegreeMismatch(self.degree, 0));
        }
        Ok(self
            .terms
            .iter()
            .fold(GwElem::zero(&self.field), |acc, t| acc.add(&t.coeff)))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|t| {
                json!({
                    "coeff": t.coeff.to_string(),
                    "symbol": t.symbol.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!(terms)
    }
}

fn needs_parens(g: &GwElem) -> bool {
    g.terms().len() > 1 || g.minus().len() == 1
}

impl fmt::Display for MwElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let eta = if self.degree < 0 {
            if self.degree == -1 {
                "eta".to_string()
            } else {
                format!("eta^{}", -self.degree)
            }
        } else {
            String::new()
        };
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let sym = if t.symbol.is_empty() {
                String::new()
            } else {
                format!(
                    "[{}]",
                    t.symbol
                        .iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            };
            let tail = format!("{}{}", eta, sym);
            let c = &t.coeff;
            let trivial = c.plus().len() == 1 && c.minus().is_empty() && c.plus()[0].is_one();
            if tail.is_empty() {
                if needs_parens(c) && self.terms.len() > 1 {
                    write!(f, "({})", c)?;
                } else {
                    write!(f, "{}", c)?;
                }
            } else if trivial {
                write!(f, "{}", tail)?;
            } else if needs_parens(c) {
                write!(f, "({})*{}", c, tail)?;
            } else {
                write!(f, "{}*{}", c, tail)?;
            }
        }
        Ok(())
    }
}

/// Equality in `K^MW_n`: equal images in Milnor K-theory and in the Witt ring.
pub fn mw_equal(x: &MwElem, y: &MwElem) -> Result<Decision> {
    let d = x.sub(y)?;
    Ok(mw_is_zero(&d))
}

pub fn mw_is_zero(d: &MwElem) -> Decision {
    if d.is_syntactic_zero() {
        return Decision::Equal;
    }
    if d.degree < 0 {
        return witt_trivial(&d.to_witt().witt_form());
    }
    if d.degree == 0 {
        return gw_equal(&d.as_gw().unwrap(), &GwElem::zero(&d.field)).unwrap();
    }
    let m = milnor_is_zero(&d.to_milnor());
    if m == Decision::NotEqual {
        return m;
    }
    m.and(witt_trivial(&d.to_witt().witt_form()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::integer::rat_frac;

    fn q() -> Field {
        Field::rationals()
    }

    fn s(a: &[i64]) -> MwElem {
        let v: Vec<Elem> = a.iter().map(|&x| q().from_int(x)).collect();
        MwElem::symbol(&q(), &v).unwrap()
    }

    fn eq(x: &MwElem, y: &MwElem) -> Decision {
        mw_equal(x, y).unwrap()
    }

    #[test]
    fn steinberg_relation() {
        for a in [2i64, 3, -1, 5, -7] {
            let x = s(&[a, 1 - a]);
            assert_eq!(eq(&x, &MwElem::zero(&q(), 2)), Decision::Equal, "a = {}", a);
        }
        let a = q().from_rat(&rat_frac(2, 3));
        let b = q().one().sub(&a);
        let x = MwElem::symbol(&q(), &[a, b]).unwrap();
        assert_eq!(eq(&x, &MwElem::zero(&q(), 2)), Decision::Equal);
    }

    #[test]
    fn symbol_of_one_vanishes() {
        assert!(s(&[1]).is_syntactic_zero());
    }

    #[test]
    fn four_is_h_times_two() {
        let h = GwElem::h(&q());
        assert_eq!(eq(&s(&[4]), &s(&[2]).gw_mul(&h)), Decision::Equal);
        assert_eq!(eq(&s(&[9]), &s(&[3]).gw_mul(&h)), Decision::Equal);
        // 2 is a sum of two squares, 3 is not
        assert_eq!(eq(&s(&[4]), &s(&[2]).int_mul(2)), Decision::Equal);
        assert_eq!(eq(&s(&[9]), &s(&[3]).int_mul(2)), Decision::NotEqual);
    }

    #[test]
    fn eta_relations() {
        let eta = MwElem::eta(&q());
        // eta [a] = <a> - 1
        let l = eta.mul(&s(&[3])).unwrap();
        let r = MwElem::one_form(&q().from_int(3)).unwrap().sub(&MwElem::one(&q())).unwrap();
        assert_eq!(eq(&l, &r), Decision::Equal);
        // eta h = 0
        let eh = eta.mul(&MwElem::from_gw(&GwElem::h(&q()))).unwrap();
        assert_eq!(eq(&eh, &MwElem::zero(&q(), -1)), Decision::Equal);
        // [ab] = [a] + [b] + eta[a][b]
        let l = s(&[6]);
        let r = s(&[2])
            .add(&s(&[3]))
            .unwrap()
            .add(&eta.mul(&s(&[2, 3])).unwrap())
            .unwrap();
        assert_eq!(eq(&l, &r), Decision::Equal);
        assert_eq!(eq(&s(&[6]), &s(&[2]).add(&s(&[3])).unwrap()), Decision::NotEqual);
    }

    #[test]
    fn graded_commutativity() {
        let eps = MwElem::from_gw(&GwElem::epsilon(&q()));
        let l = s(&[2, 3]);
        let r = eps.mul(&s(&[3, 2])).unwrap();
        assert_eq!(eq(&l, &r), Decision::Equal);
        assert_eq!(eq(&s(&[-2, 5, 7]), &MwElem::zero(&q(), 3)), Decision::Equal);
        assert_eq!(eq(&s(&[-1, -1, -1]), &MwElem::zero(&q(), 3)), Decision::NotEqual);
        // [a][-a] = 0
        assert_eq!(eq(&s(&[5, -5]), &MwElem::zero(&q(), 2)), Decision::Equal);
        // [a][a] = [a][-1]
        assert_eq!(eq(&s(&[5, 5]), &s(&[5, -1])), Decision::Equal);
    }

    #[test]
    fn display() {
        let x = s(&[2, 3]).add(&s(&[5, 7]).int_mul(2)).unwrap();
        assert_eq!(x.to_string(), "[2, 3] + (<1> + <1>)*[5, 7]");
        assert_eq!(MwElem::eta(&q()).to_string(), "eta");
    }
}
