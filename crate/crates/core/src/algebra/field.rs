//! Number fields given as towers of simple extensions, and their elements.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use super::absolute::Absolute;
use super::integer::Rat;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Largest absolute degree accepted when building a field.
pub const MAX_ABS_DEGREE: usize = 8;

/// Internal element representation: a rational, or the coefficient list
/// (lowest degree first, trailing zeros trimmed) over the base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Repr {
    Q(Rat),
    E(Vec<Repr>),
}

pub(crate) struct ExtData {
    pub base: Field,
    pub minpoly: Vec<Repr>,
    pub name: String,
    pub degree: usize,
    pub abs_degree: usize,
    pub absolute: OnceLock<Arc<Absolute>>,
}

/// A number field: either the rationals or a simple extension `base[name]/(minpoly)`.
#[derive(Clone)]
pub struct Field(pub(crate) Option<Arc<ExtData>>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                Arc::ptr_eq(a, b)
                    || (a.name == b.name
                        && a.degree == b.degree
                        && a.minpoly == b.minpoly
                        && a.base == b.base)
            }
            _ => false,
        }
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            None => write!(f, "Q"),
            Some(d) => {
                let mp = Poly::from_reprs(&d.base, d.minpoly.clone());
                write!(f, "{}({}|{})", d.base, d.name, mp.fmt_var(&d.name))
            }
        }
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(None)
    }

    pub fn is_rationals(&self) -> bool {
        self.0.is_none()
    }

    /// Builds `base[name]/(minpoly)` after checking irreducibility.
    pub fn extension(base: &Field, minpoly: &Poly, name: &str) -> Result<Field> {
        if minpoly.field() != base {
            return Err(Error::FieldMismatch(
                minpoly.field().to_string(),
                base.to_string(),
            ));
        }
        let deg = minpoly
            .degree()
            .ok_or_else(|| Error::NotIrreducible("0".into()))?;
        if deg < 1 {
            return Err(Error::NotIrreducible(minpoly.to_string()));
        }
        let abs = base.abs_degree() * deg;
        if abs > MAX_ABS_DEGREE {
            return Err(Error::DegreeBound(abs, MAX_ABS_DEGREE));
        }
        if deg > 1 && !super::factor::is_irreducible(minpoly)? {
            return Err(Error::NotIrreducible(minpoly.to_string()));
        }
        Ok(Field::extension_unchecked(base, &minpoly.monic(), name))
    }

    /// Builds an extension without checking irreducibility. The polynomial is made monic.
    pub(crate) fn extension_unchecked(base: &Field, minpoly: &Poly, name: &str) -> Field {
        let m = minpoly.monic();
        let degree = m.degree().unwrap();
        Field(Some(Arc::new(ExtData {
            base: base.clone(),
            minpoly: m.reprs().to_vec(),
            name: name.to_string(),
            degree,
            abs_degree: base.abs_degree() * degree,
            absolute: OnceLock::new(),
        })))
    }

    pub(crate) fn ext(&self) -> &ExtData {
        self.0.as_ref().expect("field is the rationals")
    }

    /// Base field; the rationals are their own base.
    pub fn base(&self) -> Field {
        match &self.0 {
            None => Field(None),
            Some(d) => d.base.clone(),
        }
    }

    /// Degree over the base field.
    pub fn degree(&self) -> usize {
        match &self.0 {
            None => 1,
            Some(d) => d.degree,
        }
    }

    /// Degree over the rationals.
    pub fn abs_degree(&self) -> usize {
        match &self.0 {
            None => 1,
            Some(d) => d.abs_degree,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.0.as_ref().map(|d| d.name.as_str())
    }

    /// Generator names from the bottom of the tower upwards.
    pub fn generator_names(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .tower()
            .iter()
            .filter_map(|f| f.name().map(|s| s.to_string()))
            .collect();
        v.reverse();
        v
    }

    /// Defining polynomial over the base field.
    pub fn minpoly(&self) -> Poly {
        match &self.0 {
            None => Poly::x(self),
            Some(d) => Poly::from_reprs(&d.base, d.minpoly.clone()),
        }
    }

    /// The adjoined generator (for the rationals, 1).
    pub fn generator(&self) -> Elem {
        match &self.0 {
            None => self.one(),
            Some(d) => Elem::from_repr(self, Repr::E(vec![d.base.zero_r(), d.base.one_r()])),
        }
    }

    /// The fields of the tower, from `self` down to the rationals.
    pub fn tower(&self) -> Vec<Field> {
        let mut v = vec![self.clone()];
        let mut cur = self.clone();
        while !cur.is_rationals() {
            cur = cur.base();
            v.push(cur.clone());
        }
        v
    }

    /// Whether `self` occurs in the tower of `other`.
    pub fn is_subfield_of(&self, other: &Field) -> bool {
        other.tower().iter().any(|f| f == self)
    }

    /// Relative degree `[other : self]` for `self` in the tower of `other`.
    pub fn degree_in(&self, other: &Field) -> Result<usize> {
        if !self.is_subfield_of(other) {
            return Err(Error::NotASubfield(self.to_string(), other.to_string()));
        }
        Ok(other.abs_degree() / self.abs_degree())
    }

    /// Smallest field containing both, when one lies in the tower of the other.
    pub fn join(a: &Field, b: &Field) -> Result<Field> {
        if a.is_subfield_of(b) {
            Ok(b.clone())
        } else if b.is_subfield_of(a) {
            Ok(a.clone())
        } else {
            Err(Error::FieldMismatch(a.to_string(), b.to_string()))
        }
    }

    pub fn zero(&self) -> Elem {
        Elem::from_repr(self, self.zero_r())
    }

    pub fn one(&self) -> Elem {
        Elem::from_repr(self, self.one_r())
    }

    pub fn from_rat(&self, q: &Rat) -> Elem {
        Elem::from_repr(self, self.rat_r(q))
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_rat(&Rat::from_integer(n.into()))
    }

    /// Element with the given coefficients (lowest first) in the generator over the base.
    pub fn from_coeffs(&self, coeffs: &[Elem]) -> Elem {
        match &self.0 {
            None => {
                assert!(coeffs.len() <= 1);
                coeffs.first().cloned().unwrap_or_else(|| self.zero())
            }
            Some(d) => {
                let p = Poly::new(&d.base, coeffs.to_vec());
                let r = prem(&d.base, p.reprs(), &d.minpoly);
                Elem::from_repr(self, Repr::E(r))
            }
        }
    }

    /// Lifts an element of a subfield into `self`.
    pub fn embed(&self, e: &Elem) -> Result<Elem> {
        if e.field() == self {
            return Ok(e.clone());
        }
        let tower = self.tower();
        let pos = tower
            .iter()
            .position(|f| f == e.field())
            .ok_or_else(|| Error::NotASubfield(e.field().to_string(), self.to_string()))?;
        let mut r = e.r.clone();
        for f in tower[..pos].iter().rev() {
            r = if f.base().is_zero_r(&r) {
                Repr::E(vec![])
            } else {
                Repr::E(vec![r])
            };
        }
        Ok(Elem::from_repr(self, r))
    }

    /// Lifts a polynomial over a subfield into `self`.
    pub fn embed_poly(&self, p: &Poly) -> Result<Poly> {
        if p.field() == self {
            return Ok(p.clone());
        }
        let c = p
            .coeffs()
            .iter()
            .map(|c| self.embed(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(self, c))
    }

    pub(crate) fn absolute(&self) -> Arc<Absolute> {
        match &self.0 {
            None => Absolute::rationals(),
            Some(d) => d.absolute.get_or_init(|| Arc::new(Absolute::build(self))).clone(),
        }
    }

    // ---- representation arithmetic ----

    pub(crate) fn zero_r(&self) -> Repr {
        match &self.0 {
            None => Repr::Q(Rat::zero()),
            Some(_) => Repr::E(vec![]),
        }
    }

    pub(crate) fn one_r(&self) -> Repr {
        self.rat_r(&Rat::one())
    }

    pub(crate) fn rat_r(&self, q: &Rat) -> Repr {
        match &self.0 {
            None => Repr::Q(q.clone()),
            Some(d) => {
                if q.is_zero() {
                    Repr::E(vec![])
                } else {
                    Repr::E(vec![d.base.rat_r(q)])
                }
            }
        }
    }

    pub(crate) fn is_zero_r(&self, r: &Repr) -> bool {
        match r {
            Repr::Q(q) => q.is_zero(),
            Repr::E(v) => v.is_empty(),
        }
    }

    pub(crate) fn add_r(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Q(x), Repr::Q(y)) => Repr::Q(x + y),
            (Repr::E(x), Repr::E(y)) => Repr::E(padd(&self.ext().base, x, y)),
            _ => panic!("representation mismatch"),
        }
    }

    pub(crate) fn neg_r(&self, a: &Repr) -> Repr {
        match a {
            Repr::Q(x) => Repr::Q(-x),
            Repr::E(x) => Repr::E(pneg(&self.ext().base, x)),
        }
    }

    pub(crate) fn sub_r(&self, a: &Repr, b: &Repr) -> Repr {
        self.add_r(a, &self.neg_r(b))
    }

    pub(crate) fn mul_r(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Q(x), Repr::Q(y)) => Repr::Q(x * y),
            (Repr::E(x), Repr::E(y)) => {
                let d = self.ext();
                if x.is_empty() || y.is_empty() {
                    return Repr::E(vec![]);
                }
                let p = pmul(&d.base, x, y);
                Repr::E(prem(&d.base, &p, &d.minpoly))
            }
            _ => panic!("representation mismatch"),
        }
    }

    pub(crate) fn inv_r(&self, a: &Repr) -> Result<Repr> {
        match a {
            Repr::Q(x) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Repr::Q(x.recip()))
                }
            }
            Repr::E(x) => {
                if x.is_empty() {
                    return Err(Error::DivisionByZero);
                }
                let d = self.ext();
                let (g, s, _t) = pxgcd(&d.base, x, &d.minpoly);
                // g is monic; irreducible modulus forces g = 1
                debug_assert_eq!(g.len(), 1);
                let _ = g;
                Ok(Repr::E(prem(&d.base, &s, &d.minpoly)))
            }
        }
    }

    pub(crate) fn pow_r(&self, a: &Repr, mut e: u64) -> Repr {
        let mut base = a.clone();
        let mut acc = self.one_r();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_r(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_r(&base, &base);
            }
        }
        acc
    }

    /// The rational value of `r`, if it lies in the prime field.
    pub(crate) fn to_rat_r(&self, r: &Repr) -> Option<Rat> {
        match r {
            Repr::Q(q) => Some(q.clone()),
            Repr::E(v) => match v.len() {
                0 => Some(Rat::zero()),
                1 => self.ext().base.to_rat_r(&v[0]),
                _ => None,
            },
        }
    }

    pub(crate) fn fmt_repr(&self, r: &Repr) -> String {
        match (&self.0, r) {
            (None, Repr::Q(q)) => fmt_rat(q),
            (Some(d), Repr::E(v)) => {
                Poly::from_reprs(&d.base, v.clone()).fmt_var(&d.name)
            }
            _ => panic!("representation mismatch"),
        }
    }

    /// Whether a printed element is a sum of several terms, so that it needs
    /// parentheses when used as a factor.
    pub(crate) fn repr_is_compound(&self, r: &Repr) -> bool {
        match (&self.0, r) {
            (Some(d), Repr::E(v)) => {
                let nz: Vec<&Repr> = v.iter().filter(|c| !d.base.is_zero_r(c)).collect();
                nz.len() > 1 || (nz.len() == 1 && d.base.repr_is_compound(nz[0]))
            }
            _ => false,
        }
    }
}

pub(crate) fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

// ---- raw polynomial arithmetic over a field, coefficients lowest first ----

pub(crate) fn ptrim(f: &Field, v: &mut Vec<Repr>) {
    while let Some(l) = v.last() {
        if f.is_zero_r(l) {
            v.pop();
        } else {
            break;
        }
    }
}

pub(crate) fn padd(f: &Field, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    let n = a.len().max(b.len());
    let z = f.zero_r();
    let mut v: Vec<Repr> = (0..n)
        .map(|i| f.add_r(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    ptrim(f, &mut v);
    v
}

pub(crate) fn pneg(f: &Field, a: &[Repr]) -> Vec<Repr> {
    a.iter().map(|c| f.neg_r(c)).collect()
}

pub(crate) fn psub(f: &Field, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    padd(f, a, &pneg(f, b))
}

pub(crate) fn pscale(f: &Field, a: &[Repr], c: &Repr) -> Vec<Repr> {
    if f.is_zero_r(c) {
        return vec![];
    }
    let mut v: Vec<Repr> = a.iter().map(|x| f.mul_r(x, c)).collect();
    ptrim(f, &mut v);
    v
}

pub(crate) fn pmul(f: &Field, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![f.zero_r(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero_r(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if f.is_zero_r(y) {
                continue;
            }
            let t = f.mul_r(x, y);
            v[i + j] = f.add_r(&v[i + j], &t);
        }
    }
    ptrim(f, &mut v);
    v
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn pdivrem(f: &Field, a: &[Repr], b: &[Repr]) -> (Vec<Repr>, Vec<Repr>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    ptrim(f, &mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let monic = *lb == f.one_r();
    let linv = if monic { f.one_r() } else { f.inv_r(lb).unwrap() };
    let mut q = vec![f.zero_r(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = if monic {
            r.last().unwrap().clone()
        } else {
            f.mul_r(r.last().unwrap(), &linv)
        };
        for (j, bj) in b.iter().enumerate() {
            if f.is_zero_r(bj) {
                continue;
            }
            let t = f.mul_r(&c, bj);
            r[k + j] = f.sub_r(&r[k + j], &t);
        }
        q[k] = c;
        r.pop();
        ptrim(f, &mut r);
    }
    ptrim(f, &mut q);
    (q, r)
}

pub(crate) fn prem(f: &Field, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    if a.len() < b.len() {
        let mut v = a.to_vec();
        ptrim(f, &mut v);
        return v;
    }
    pdivrem(f, a, b).1
}

pub(crate) fn pmonic(f: &Field, a: &[Repr]) -> Vec<Repr> {
    match a.last() {
        None => vec![],
        Some(l) => {
            if *l == f.one_r() {
                a.to_vec()
            } else {
                let li = f.inv_r(l).unwrap();
                pscale(f, a, &li)
            }
        }
    }
}

/// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic (or zero).
pub(crate) fn pxgcd(f: &Field, a: &[Repr], b: &[Repr]) -> (Vec<Repr>, Vec<Repr>, Vec<Repr>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    ptrim(f, &mut r0);
    ptrim(f, &mut r1);
    let mut s0 = vec![f.one_r()];
    let mut s1: Vec<Repr> = vec![];
    let mut t0: Vec<Repr> = vec![];
    let mut t1 = vec![f.one_r()];
    while !r1.is_empty() {
        let (q, r) = pdivrem(f, &r0, &r1);
        let s2 = psub(f, &s0, &pmul(f, &q, &s1));
        let t2 = psub(f, &t0, &pmul(f, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let li = f.inv_r(r0.last().unwrap()).unwrap();
    (
        pscale(f, &r0, &li),
        pscale(f, &s0, &li),
        pscale(f, &t0, &li),
    )
}

/// An element of a number field.
#[derive(Clone)]
pub struct Elem {
    field: Field,
    pub(crate) r: Repr,
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.field == other.field
    }
}
impl Eq for Elem {}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.r.hash(state)
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.r.cmp(&other.r)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_repr(&self.r))
    }
}

impl Elem {
    pub(crate) fn from_repr(field: &Field, r: Repr) -> Elem {
        Elem {
            field: field.clone(),
            r,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero_r(&self.r)
    }

    pub fn is_one(&self) -> bool {
        self.r == self.field.one_r()
    }

    fn check(&self, other: &Elem) {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, o: &Elem) -> Elem {
        self.check(o);
        Elem::from_repr(&self.field, self.field.add_r(&self.r, &o.r))
    }

    pub fn sub(&self, o: &Elem) -> Elem {
        self.check(o);
        Elem::from_repr(&self.field, self.field.sub_r(&self.r, &o.r))
    }

    pub fn mul(&self, o: &Elem) -> Elem {
        self.check(o);
        Elem::from_repr(&self.field, self.field.mul_r(&self.r, &o.r))
    }

    pub fn neg(&self) -> Elem {
        Elem::from_repr(&self.field, self.field.neg_r(&self.r))
    }

    pub fn inv(&self) -> Result<Elem> {
        Ok(Elem::from_repr(&self.field, self.field.inv_r(&self.r)?))
    }

    pub fn div(&self, o: &Elem) -> Result<Elem> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u64) -> Elem {
        Elem::from_repr(&self.field, self.field.pow_r(&self.r, e))
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn mul_rat(&self, q: &Rat) -> Elem {
        self.mul(&self.field.from_rat(q))
    }

    /// The value as a rational, if the element lies in the prime field.
    pub fn to_rat(&self) -> Option<Rat> {
        self.field.to_rat_r(&self.r)
    }

    /// The element as an element of the base field, if it lies there.
    pub fn in_base(&self) -> Option<Elem> {
        match &self.r {
            Repr::Q(_) => Some(self.clone()),
            Repr::E(v) => {
                let b = self.field.base();
                match v.len() {
                    0 => Some(b.zero()),
                    1 => Some(Elem::from_repr(&b, v[0].clone())),
                    _ => None,
                }
            }
        }
    }

    /// Descends the element to the given subfield, if it lies there.
    pub fn descend(&self, to: &Field) -> Option<Elem> {
        let mut cur = self.clone();
        while cur.field() != to {
            if cur.field().is_rationals() {
                return None;
            }
            cur = cur.in_base()?;
        }
        Some(cur)
    }

    /// Coefficients over the base field in the generator basis (length = relative degree).
    pub fn coeffs(&self) -> Vec<Elem> {
        match &self.r {
            Repr::Q(_) => vec![self.clone()],
            Repr::E(v) => {
                let b = self.field.base();
                (0..self.field.degree())
                    .map(|i| Elem::from_repr(&b, v.get(i).cloned().unwrap_or_else(|| b.zero_r())))
                    .collect()
            }
        }
    }

    /// The representative polynomial in the generator, over the base field.
    pub fn rep_poly(&self) -> Poly {
        match &self.r {
            Repr::Q(_) => Poly::constant(&self.field, self),
            Repr::E(v) => Poly::from_reprs(&self.field.base(), v.clone()),
        }
    }

    /// Relative norm down to the base field.
    pub fn norm(&self) -> Elem {
        match &self.r {
            Repr::Q(_) => self.clone(),
            Repr::E(_) => {
                let m = self.field.minpoly();
                m.resultant(&self.rep_poly())
            }
        }
    }

    /// Norm down to a subfield in the tower.
    pub fn norm_to(&self, to: &Field) -> Result<Elem> {
        if !to.is_subfield_of(&self.field) {
            return Err(Error::NotASubfield(to.to_string(), self.field.to_string()));
        }
        let mut cur = self.clone();
        while cur.field() != to {
            cur = cur.norm();
        }
        Ok(cur)
    }

    /// Norm down to the rationals.
    pub fn abs_norm(&self) -> Rat {
        self.norm_to(&Field::rationals()).unwrap().to_rat().unwrap()
    }

    /// Characteristic polynomial of multiplication by the element, over the base field.
    pub fn charpoly(&self) -> Poly {
        super::absolute::charpoly_over_base(self)
    }

    /// Minimal polynomial over the base field.
    pub fn minpoly_over_base(&self) -> Poly {
        let c = self.charpoly();
        c.squarefree_part()
    }

    /// Whether the element generates its field over the base field.
    pub fn generates(&self) -> bool {
        self.charpoly().is_squarefree()
    }

    /// Square root, if one exists in the field.
    pub fn sqrt(&self) -> Option<Elem> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(q) = self.to_rat() {
            if let Some(s) = super::integer::rat_sqrt(&q) {
                return Some(self.field.from_rat(&s));
            }
            if self.field.is_rationals() {
                return None;
            }
        }
        if self.field.is_rationals() {
            return None;
        }
        let x = Poly::x(&self.field);
        let p = x.mul(&x).sub(&Poly::constant(&self.field, self));
        super::factor::find_root(&p)
    }

    pub fn is_square(&self) -> bool {
        !self.is_zero() && self.sqrt().is_some()
    }

    /// Signs at the real embeddings of the field (ordered by the value of the
    /// primitive element at each embedding).
    pub fn signs(&self) -> Vec<i8> {
        super::real::signs(self)
    }

    /// Whether the element is positive at every real embedding.
    pub fn totally_positive(&self) -> bool {
        self.signs().iter().all(|&s| s > 0)
    }

    /// Rough complexity measure used for deterministic tie-breaking.
    pub fn height(&self) -> usize {
        fn h(r: &Repr) -> usize {
            match r {
                Repr::Q(q) => (q.numer().bits() + q.denom().bits()) as usize,
                Repr::E(v) => v.iter().map(h).sum::<usize>() + v.len(),
            }
        }
        h(&self.r)
    }

    pub fn is_negative_rational(&self) -> bool {
        self.to_rat().map(|q| q.is_negative()).unwrap_or(false)
    }
}
