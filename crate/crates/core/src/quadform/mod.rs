//! Diagonal quadratic forms: Hilbert symbols, Hasse invariants, signatures and
//! Witt equivalence.
//!
//! Over the rationals Witt equivalence is decided completely through the local
//! invariants. Over an extension field the test is three-valued: it answers
//! `Unknown` rather than guess.

mod chain;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebra::integer::{
    factor_bigint, is_prime, legendre, reduce_mod, square_class, valuation, Rat,
};
use crate::algebra::{Elem, Field, Poly};
use crate::error::{Error, Result};

pub use chain::{chain_equivalence_search, ChainResult};

/// A place of the rationals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(BigUint),
}

impl Place {
    pub fn prime(p: u64) -> Result<Place> {
        let b = BigUint::from(p);
        if is_prime(&b) {
            Ok(Place::Prime(b))
        } else {
            Err(Error::InvalidPlace(p.to_string()))
        }
    }

    pub fn two() -> Place {
        Place::Prime(BigUint::from(2u32))
    }

    pub fn key(&self) -> String {
        match self {
            Place::Real => "real".into(),
            Place::Prime(p) => p.to_string(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// Outcome of an equality test that may be unable to decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Equal,
    NotEqual,
    Unknown,
}

impl Decision {
    pub fn and(self, o: Decision) -> Decision {
        match (self, o) {
            (Decision::NotEqual, _) | (_, Decision::NotEqual) => Decision::NotEqual,
            (Decision::Equal, Decision::Equal) => Decision::Equal,
            _ => Decision::Unknown,
        }
    }

    pub fn from_bool(b: bool) -> Decision {
        if b {
            Decision::Equal
        } else {
            Decision::NotEqual
        }
    }

    pub fn is_equal(self) -> bool {
        self == Decision::Equal
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Decision::Equal => "Equal",
            Decision::NotEqual => "NotEqual",
            Decision::Unknown => "Unknown",
        };
        write!(f, "{}", s)
    }
}

fn eps2(u: &BigInt) -> u32 {
    // (u - 1)/2 mod 2 for odd u
    if u.mod_floor(&BigInt::from(4)) == BigInt::one() {
        0
    } else {
        1
    }
}

fn omega2(u: &BigInt) -> u32 {
    // (u^2 - 1)/8 mod 2 for odd u
    let r = u.mod_floor(&BigInt::from(8)).to_u32().unwrap();
    if r == 1 || r == 7 {
        0
    } else {
        1
    }
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroUnit);
    }
    match v {
        Place::Real => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        Place::Prime(p) => {
            // square classes suffice
            let a = square_class(a);
            let b = square_class(b);
            let pi = BigInt::from(p.clone());
            let (alpha, u) = split_p(&a, &pi);
            let (beta, w) = split_p(&b, &pi);
            if *p == BigUint::from(2u32) {
                let e = eps2(&u) * eps2(&w) + alpha * omega2(&w) + beta * omega2(&u);
                Ok(if e % 2 == 0 { 1 } else { -1 })
            } else {
                let mut s: i8 = if (alpha * beta) % 2 == 1 && eps_p(p) == 1 {
                    -1
                } else {
                    1
                };
                if beta % 2 == 1 {
                    s *= legendre(&reduce_mod(&Rat::from_integer(u.clone()), p), p);
                }
                if alpha % 2 == 1 {
                    s *= legendre(&reduce_mod(&Rat::from_integer(w.clone()), p), p);
                }
                Ok(s)
            }
        }
    }
}

fn eps_p(p: &BigUint) -> u32 {
    eps2(&BigInt::from(p.clone()))
}

fn split_p(a: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut u = a.clone();
    let mut k = 0;
    while (&u % p).is_zero() {
        u /= p;
        k += 1;
    }
    (k, u)
}

/// A diagonal form `<a_1, ..., a_n>` over a number field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagForm {
    field: Field,
    entries: Vec<Elem>,
}

impl DiagForm {
    pub fn new(field: &Field, entries: Vec<Elem>) -> Result<DiagForm> {
        for e in &entries {
            if e.is_zero() {
                return Err(Error::ZeroUnit);
            }
            if e.field() != field {
                return Err(Error::FieldMismatch(e.field().to_string(), field.to_string()));
            }
        }
        Ok(DiagForm {
            field: field.clone(),
            entries,
        })
    }

    pub fn from_rats(entries: &[Rat]) -> Result<DiagForm> {
        let q = Field::rationals();
        DiagForm::new(&q, entries.iter().map(|r| q.from_rat(r)).collect())
    }

    pub fn from_ints(entries: &[i64]) -> Result<DiagForm> {
        let q = Field::rationals();
        DiagForm::new(&q, entries.iter().map(|&r| q.from_int(r)).collect())
    }

    /// `m` copies of the hyperbolic plane.
    pub fn hyperbolic(field: &Field, m: usize) -> DiagForm {
        let mut e = Vec::new();
        for _ in 0..m {
            e.push(field.one());
            e.push(field.from_int(-1));
        }
        DiagForm {
            field: field.clone(),
            entries: e,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn orth_sum(&self, o: &DiagForm) -> DiagForm {
        let mut e = self.entries.clone();
        e.extend(o.entries.iter().cloned());
        DiagForm {
            field: self.field.clone(),
            entries: e,
        }
    }

    pub fn neg(&self) -> DiagForm {
        DiagForm {
            field: self.field.clone(),
            entries: self.entries.iter().map(|e| e.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &Elem) -> DiagForm {
        DiagForm {
            field: self.field.clone(),
            entries: self.entries.iter().map(|e| e.mul(c)).collect(),
        }
    }

    pub fn determinant(&self) -> Elem {
        self.entries
            .iter()
            .fold(self.field.one(), |acc, e| acc.mul(e))
    }

    /// Signature at each real embedding of the field.
    pub fn signature(&self) -> Vec<i64> {
        let n = crate::algebra::real::real_embeddings(&self.field).len();
        let mut s = vec![0i64; n];
        for e in &self.entries {
            for (i, g) in e.signs().iter().enumerate() {
                s[i] += *g as i64;
            }
        }
        s
    }

    fn rat_entries(&self) -> Result<Vec<Rat>> {
        if !self.field.is_rationals() {
            return Err(Error::RationalsOnly);
        }
        Ok(self.entries.iter().map(|e| e.to_rat().unwrap()).collect())
    }

    /// Hasse invariant `prod_{i<j} (a_i, a_j)_v` (rational forms only).
    pub fn hasse_invariant(&self, v: &Place) -> Result<i8> {
        let r = self.rat_entries()?;
        hasse_of(&r, v)
    }

    /// Places where the Hasse invariant can be nontrivial: the real place, 2,
    /// and the odd primes dividing some entry.
    pub fn places(&self) -> Result<Vec<Place>> {
        let r = self.rat_entries()?;
        Ok(relevant_places(&r))
    }

    /// Rank, signature, discriminant and Hasse invariants.
    pub fn invariants(&self) -> Invariants {
        let sig = self.signature();
        let det = self.determinant();
        let (disc, hasse) = if self.field.is_rationals() {
            let r: Vec<Rat> = self.entries.iter().map(|e| e.to_rat().unwrap()).collect();
            let mut h = BTreeMap::new();
            for v in relevant_places(&r) {
                h.insert(v.clone(), hasse_of(&r, &v).unwrap());
            }
            let d = if r.is_empty() {
                BigInt::one()
            } else {
                square_class(&det.to_rat().unwrap())
            };
            (d.to_string(), h)
        } else {
            (det.to_string(), BTreeMap::new())
        };
        Invariants {
            rank: self.dim() as i64,
            signature: sig,
            disc,
            hasse,
        }
    }
}

fn hasse_of(r: &[Rat], v: &Place) -> Result<i8> {
    let mut h = 1i8;
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            h *= hilbert_symbol(&r[i], &r[j], v)?;
        }
    }
    Ok(h)
}

fn relevant_places(r: &[Rat]) -> Vec<Place> {
    let mut ps: Vec<BigUint> = vec![BigUint::from(2u32)];
    for q in r {
        for (p, _) in factor_bigint(&(q.numer() * q.denom())) {
            ps.push(p);
        }
    }
    ps.sort();
    ps.dedup();
    let mut v = vec![Place::Real];
    v.extend(ps.into_iter().map(Place::Prime));
    v
}

/// Classical invariants of a form or virtual form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub rank: i64,
    pub signature: Vec<i64>,
    pub disc: String,
    pub hasse: BTreeMap<Place, i8>,
}

impl Invariants {
    pub fn to_json(&self) -> Value {
        let hasse: serde_json::Map<String, Value> = self
            .hasse
            .iter()
            .map(|(k, v)| (k.key(), json!(v)))
            .collect();
        json!({"rank": self.rank, "sig": self.signature, "disc": self.disc, "hasse": hasse})
    }
}

/// Witt equivalence of two forms over the same field.
pub fn witt_equal(f: &DiagForm, g: &DiagForm) -> Result<Decision> {
    if f.field != g.field {
        return Err(Error::FieldMismatch(f.field.to_string(), g.field.to_string()));
    }
    let q = f.orth_sum(&g.neg());
    Ok(witt_trivial(&q))
}

/// Isometry: equal dimension and Witt equivalent.
pub fn isometric(f: &DiagForm, g: &DiagForm) -> Result<Decision> {
    if f.dim() != g.dim() {
        return Ok(Decision::NotEqual);
    }
    witt_equal(f, g)
}

/// Whether the form is Witt-equivalent to zero (hyperbolic, as its dimension is even).
pub fn witt_trivial(q: &DiagForm) -> Decision {
    if q.field.is_rationals() {
        let r: Vec<Rat> = q
            .entries
            .iter()
            .map(|e| Rat::from_integer(square_class(&e.to_rat().unwrap())))
            .collect();
        witt_trivial_rat(r)
    } else {
        witt_trivial_ext(q)
    }
}

fn cancel_opposites_rat(mut r: Vec<Rat>) -> Vec<Rat> {
    let mut out: Vec<Rat> = Vec::new();
    r.sort();
    for a in r {
        if let Some(i) = out.iter().position(|b| *b == -a.clone()) {
            out.remove(i);
        } else {
            out.push(a);
        }
    }
    out
}

fn witt_trivial_rat(r: Vec<Rat>) -> Decision {
    let r = cancel_opposites_rat(r);
    let n = r.len();
    if n == 0 {
        return Decision::Equal;
    }
    if n % 2 == 1 {
        return Decision::NotEqual;
    }
    let m = n / 2;
    let sig: i64 = r.iter().map(|a| if a.is_positive() { 1 } else { -1 }).sum();
    if sig != 0 {
        return Decision::NotEqual;
    }
    let det: Rat = r.iter().fold(Rat::one(), |acc, a| acc * a);
    let sign = if m % 2 == 0 { Rat::one() } else { -Rat::one() };
    if square_class(&(det * sign)) != BigInt::one() {
        return Decision::NotEqual;
    }
    let hyp: Vec<Rat> = (0..m)
        .flat_map(|_| [Rat::one(), -Rat::one()])
        .collect();
    for v in relevant_places(&r) {
        if v == Place::Real {
            continue;
        }
        if hasse_of(&r, &v).unwrap() != hasse_of(&hyp, &v).unwrap() {
            return Decision::NotEqual;
        }
    }
    Decision::Equal
}

/// Canonical representative: rational entries become squarefree integers.
fn canon_entry(e: &Elem) -> Elem {
    match e.to_rat() {
        Some(q) => e.field().from_rat(&Rat::from_integer(square_class(&q))),
        None => e.clone(),
    }
}

fn hyperbolic_pair(a: &Elem, b: &Elem) -> bool {
    a.mul(b).neg().is_square()
}

/// Removes hyperbolic pairs, trying exact opposites first.
fn cancel_hyperbolic(entries: Vec<Elem>) -> Vec<Elem> {
    let mut v: Vec<Elem> = entries.iter().map(canon_entry).collect();
    v.sort();
    let mut i = 0;
    while i < v.len() {
        let mut hit = None;
        for j in i + 1..v.len() {
            if v[j] == v[i].neg() {
                hit = Some(j);
                break;
            }
        }
        if hit.is_none() {
            for j in i + 1..v.len() {
                if hyperbolic_pair(&v[i], &v[j]) {
                    hit = Some(j);
                    break;
                }
            }
        }
        match hit {
            Some(j) => {
                v.remove(j);
                v.remove(i);
            }
            None => i += 1,
        }
    }
    v
}

fn witt_trivial_ext(q: &DiagForm) -> Decision {
    let f = q.field.clone();
    let mut v = cancel_hyperbolic(q.entries.clone());
    let n = v.len();
    if n == 0 {
        return Decision::Equal;
    }
    if n % 2 == 1 {
        return Decision::NotEqual;
    }
    let form = DiagForm {
        field: f.clone(),
        entries: v.clone(),
    };
    if form.signature().iter().any(|&s| s != 0) {
        return Decision::NotEqual;
    }
    let m = n / 2;
    let mut det = form.determinant();
    if m % 2 == 1 {
        det = det.neg();
    }
    if !det.is_square() {
        return Decision::NotEqual;
    }
    if n == 2 {
        return Decision::Equal;
    }
    // rewrite pairs <a> + <b> = <a+b> + <(a+b)ab> towards rational entries
    let mut changed = true;
    while changed {
        changed = false;
        let idx: Vec<usize> = (0..v.len()).filter(|&i| v[i].to_rat().is_none()).collect();
        'pairs: for (x, &i) in idx.iter().enumerate() {
            for &j in &idx[x + 1..] {
                let s = v[i].add(&v[j]);
                if s.is_zero() || s.to_rat().is_none() {
                    continue;
                }
                let d = s.mul(&v[i]).mul(&v[j]);
                if d.to_rat().is_none() {
                    continue;
                }
                v[i] = s;
                v[j] = d;
                changed = true;
                break 'pairs;
            }
        }
    }
    if v.iter().any(|e| e.to_rat().is_none()) {
        return Decision::Unknown;
    }
    let r: Vec<Rat> = v
        .iter()
        .map(|e| Rat::from_integer(square_class(&e.to_rat().unwrap())))
        .collect();
    let hyp: Vec<Rat> = (0..m).flat_map(|_| [Rat::one(), -Rat::one()]).collect();
    let mut result = Decision::Equal;
    for place in relevant_places(&r) {
        let p = match &place {
            Place::Real => continue,
            Place::Prime(p) => p.clone(),
        };
        if hasse_of(&r, &place).unwrap() == hasse_of(&hyp, &place).unwrap() {
            continue;
        }
        match odd_local_degree(&f, &p) {
            Some(true) => return Decision::NotEqual,
            Some(false) => {}
            None => result = Decision::Unknown,
        }
    }
    result
}

/// Whether some prime of `f` above `p` has odd local degree, when this can be
/// read off cheaply.
fn odd_local_degree(f: &Field, p: &BigUint) -> Option<bool> {
    let n = f.abs_degree();
    if n % 2 == 1 {
        return Some(true);
    }
    let abs = f.absolute();
    let m = abs.field.minpoly();
    let c = m.to_rats().unwrap();
    if n == 2 {
        let disc = &c[1] * &c[1] - Rat::from_integer(4.into()) * &c[0];
        let d = square_class(&disc);
        if *p == BigUint::from(2u32) {
            let r = d.mod_floor(&BigInt::from(8));
            return Some(r == BigInt::one());
        }
        let pi = BigInt::from(p.clone());
        if (&d % &pi).is_zero() {
            return Some(false);
        }
        return Some(legendre(&reduce_mod(&Rat::from_integer(d), p), p) == 1);
    }
    if *p == BigUint::from(2u32) {
        return None;
    }
    // integral monic model and Dedekind's criterion away from the discriminant
    let mut l = BigInt::one();
    for q in &c {
        l = l.lcm(q.denom());
    }
    let q = Field::rationals();
    let coeffs: Vec<Rat> = c
        .iter()
        .enumerate()
        .map(|(i, r)| r * Rat::from_integer(l.pow((n - i) as u32)))
        .collect();
    let mi = Poly::from_rats(&q, &coeffs);
    let disc = mi.resultant(&mi.derivative()).to_rat().unwrap();
    if valuation(&disc, p) != 0 {
        return None;
    }
    let pu = p.to_u64()?;
    let fp: Vec<u64> = coeffs
        .iter()
        .map(|r| {
            r.to_integer()
                .mod_floor(&BigInt::from(pu))
                .to_u64()
                .unwrap()
        })
        .collect();
    let degs = crate::algebra::modp::distinct_degree(&fp, pu);
    Some(degs.iter().any(|(_, d)| d % 2 == 1))
}
