//! The Grothendieck-Witt ring of a number field, as virtual diagonal forms.

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::integer::{square_class, Rat};
use crate::algebra::{Elem, Field};
use crate::error::{Error, Result};
use crate::quadform::{witt_trivial, DiagForm, Decision, Invariants};

/// A virtual form `sum <a_i> - sum <b_j>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwElem {
    field: Field,
    plus: Vec<Elem>,
    minus: Vec<Elem>,
}

fn canon_entry(e: &Elem) -> Elem {
    match e.to_rat() {
        Some(q) => e.field().from_rat(&Rat::from_integer(square_class(&q))),
        None => e.clone(),
    }
}

impl GwElem {
    fn build(field: &Field, plus: Vec<Elem>, minus: Vec<Elem>) -> GwElem {
        let mut p: Vec<Elem> = plus.iter().map(canon_entry).collect();
        let mut m: Vec<Elem> = minus.iter().map(canon_entry).collect();
        p.sort();
        m.sort();
        // cancel common entries
        let mut po = Vec::new();
        let mut i = 0;
        let mut j = 0;
        let mut mo = Vec::new();
        while i < p.len() && j < m.len() {
            match p[i].cmp(&m[j]) {
                std::cmp::Ordering::Less => {
                    po.push(p[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    mo.push(m[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        po.extend(p[i..].iter().cloned());
        mo.extend(m[j..].iter().cloned());
        GwElem {
            field: field.clone(),
            plus: po,
            minus: mo,
        }
    }

    pub fn zero(field: &Field) -> GwElem {
        GwElem::build(field, vec![], vec![])
    }

    pub fn one(field: &Field) -> GwElem {
        GwElem::build(field, vec![field.one()], vec![])
    }

    /// The one-dimensional form `<a>`.
    pub fn one_form(a: &Elem) -> Result<GwElem> {
        if a.is_zero() {
            return Err(Error::ZeroUnit);
        }
        Ok(GwElem::build(a.field(), vec![a.clone()], vec![]))
    }

    pub fn from_form(f: &DiagForm) -> GwElem {
        GwElem::build(f.field(), f.entries().to_vec(), vec![])
    }

    /// The hyperbolic plane `<1> + <-1>`.
    pub fn h(field: &Field) -> GwElem {
        GwElem::build(field, vec![field.one(), field.from_int(-1)], vec![])
    }

    /// `epsilon = -<-1>`.
    pub fn epsilon(field: &Field) -> GwElem {
        GwElem::build(field, vec![], vec![field.from_int(-1)])
    }

    /// `n_epsilon`: `<1> + <-1> + <1> + ...` with `n` terms; for negative `n`,
    /// `epsilon * (-n)_epsilon`.
    pub fn n_epsilon(field: &Field, n: i64) -> GwElem {
        let k = n.unsigned_abs();
        let entries: Vec<Elem> = (0..k)
            .map(|i| field.from_int(if i % 2 == 0 { 1 } else { -1 }))
            .collect();
        let pos = GwElem::build(field, entries, vec![]);
        if n >= 0 {
            pos
        } else {
            GwElem::epsilon(field).mul(&pos)
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn plus(&self) -> &[Elem] {
        &self.plus
    }

    pub fn minus(&self) -> &[Elem] {
        &self.minus
    }

    /// Signed one-dimensional terms.
    pub fn terms(&self) -> Vec<(i64, Elem)> {
        self.plus
            .iter()
            .map(|e| (1, e.clone()))
            .chain(self.minus.iter().map(|e| (-1, e.clone())))
            .collect()
    }

    pub fn rank(&self) -> i64 {
        self.plus.len() as i64 - self.minus.len() as i64
    }

    pub fn is_syntactic_zero(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }

    pub fn add(&self, o: &GwElem) -> GwElem {
        assert!(self.field == o.field, "field mismatch");
        let mut p = self.plus.clone();
        p.extend(o.plus.iter().cloned());
        let mut m = self.minus.clone();
        m.extend(o.minus.iter().cloned());
        GwElem::build(&self.field, p, m)
    }

    pub fn neg(&self) -> GwElem {
        GwElem::build(&self.field, self.minus.clone(), self.plus.clone())
    }

    pub fn sub(&self, o: &GwElem) -> GwElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &GwElem) -> GwElem {
        assert!(self.field == o.field, "field mismatch");
        let prod = |a: &[Elem], b: &[Elem]| -> Vec<Elem> {
            a.iter()
                .flat_map(|x| b.iter().map(move |y| x.mul(y)))
                .collect()
        };
        let mut p = prod(&self.plus, &o.plus);
        p.extend(prod(&self.minus, &o.minus));
        let mut m = prod(&self.plus, &o.minus);
        m.extend(prod(&self.minus, &o.plus));
        GwElem::build(&self.field, p, m)
    }

    pub fn int_mul(&self, n: i64) -> GwElem {
        let base = if n < 0 { self.neg() } else { self.clone() };
        let mut acc = GwElem::zero(&self.field);
        for _ in 0..n.unsigned_abs() {
            acc = acc.add(&base);
        }
        acc
    }

    /// `<a> * self`.
    pub fn scale(&self, a: &Elem) -> GwElem {
        GwElem::build(
            &self.field,
            self.plus.iter().map(|e| e.mul(a)).collect(),
            self.minus.iter().map(|e| e.mul(a)).collect(),
        )
    }

    /// The form `plus ⊥ -minus`, which represents the image in the Witt ring.
    pub fn witt_form(&self) -> DiagForm {
        let mut e = self.plus.clone();
        e.extend(self.minus.iter().map(|x| x.neg()));
        DiagForm::new(&self.field, e).unwrap()
    }

    /// Reinterprets the element over a field containing its field.
    pub fn extend_to(&self, f: &Field) -> Result<GwElem> {
        let emb = |v: &[Elem]| v.iter().map(|e| f.embed(e)).collect::<Result<Vec<_>>>();
        Ok(GwElem::build(f, emb(&self.plus)?, emb(&self.minus)?))
    }

    pub fn invariants(&self) -> Invariants {
        let mut inv = self.witt_form().invariants();
        inv.rank = self.rank();
        inv
    }

    pub fn to_json(&self) -> Value {
        let t: Vec<Value> = self
            .terms()
            .iter()
            .map(|(s, e)| json!({"sign": s, "entry": e.to_string()}))
            .collect();
        json!(t)
    }
}

impl fmt::Display for GwElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_syntactic_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, e) in self.terms() {
            if first {
                if s < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if s < 0 { "-" } else { "+" })?;
            }
            write!(f, "<{}>", e)?;
            first = false;
        }
        Ok(())
    }
}

/// Equality in GW: ranks agree and the Witt classes agree.
pub fn gw_equal(a: &GwElem, b: &GwElem) -> Result<Decision> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field.to_string(), b.field.to_string()));
    }
    if a.rank() != b.rank() {
        return Ok(Decision::NotEqual);
    }
    Ok(witt_equal_gw(a, b))
}

/// Equality of the images in the Witt ring.
pub fn witt_equal_gw(a: &GwElem, b: &GwElem) -> Decision {
    witt_trivial(&a.sub(b).witt_form())
}
