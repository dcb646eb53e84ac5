//! Univariate polynomials over a number field.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;

use super::field::{
    padd, pdivrem, pmonic, pmul, pneg, prem, pscale, psub, ptrim, pxgcd, Elem, Field, Repr,
};
use super::integer::Rat;

/// A polynomial with coefficients in `field`, stored lowest degree first.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    c: Vec<Repr>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && self.field == o.field
    }
}
impl Eq for Poly {}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Poly {
    fn cmp(&self, o: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&o.c.len())
            .then_with(|| self.c.iter().rev().cmp(o.c.iter().rev()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("x"))
    }
}

impl Poly {
    pub(crate) fn from_reprs(field: &Field, mut c: Vec<Repr>) -> Poly {
        ptrim(field, &mut c);
        Poly {
            field: field.clone(),
            c,
        }
    }

    pub fn new(field: &Field, coeffs: Vec<Elem>) -> Poly {
        let c = coeffs
            .into_iter()
            .map(|e| {
                assert!(e.field() == field, "coefficient field mismatch");
                e.r
            })
            .collect();
        Poly::from_reprs(field, c)
    }

    pub fn from_rats(field: &Field, coeffs: &[Rat]) -> Poly {
        Poly::from_reprs(field, coeffs.iter().map(|q| field.rat_r(q)).collect())
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_reprs(
            field,
            coeffs
                .iter()
                .map(|&n| field.rat_r(&Rat::from_integer(n.into())))
                .collect(),
        )
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::from_reprs(field, vec![])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::from_reprs(field, vec![field.one_r()])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::from_reprs(field, vec![field.zero_r(), field.one_r()])
    }

    pub fn constant(field: &Field, c: &Elem) -> Poly {
        Poly::from_reprs(field, vec![c.r.clone()])
    }

    /// `c * x^k`.
    pub fn monomial(c: &Elem, k: usize) -> Poly {
        let f = c.field();
        let mut v = vec![f.zero_r(); k];
        v.push(c.r.clone());
        Poly::from_reprs(f, v)
    }

    /// `x - a`.
    pub fn linear(a: &Elem) -> Poly {
        let f = a.field();
        Poly::from_reprs(f, vec![f.neg_r(&a.r), f.one_r()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub(crate) fn reprs(&self) -> &[Repr] {
        &self.c
    }

    pub fn coeffs(&self) -> Vec<Elem> {
        self.c
            .iter()
            .map(|r| Elem::from_repr(&self.field, r.clone()))
            .collect()
    }

    pub fn coeff(&self, i: usize) -> Elem {
        match self.c.get(i) {
            Some(r) => Elem::from_repr(&self.field, r.clone()),
            None => self.field.zero(),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Degree with the convention `deg 0 = -1`.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lead(&self) -> Elem {
        match self.c.last() {
            Some(r) => Elem::from_repr(&self.field, r.clone()),
            None => self.field.zero(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().map(|l| *l == self.field.one_r()).unwrap_or(false)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        Poly::from_reprs(&self.field, padd(&self.field, &self.c, &o.c))
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        Poly::from_reprs(&self.field, psub(&self.field, &self.c, &o.c))
    }

    pub fn neg(&self) -> Poly {
        Poly::from_reprs(&self.field, pneg(&self.field, &self.c))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        Poly::from_reprs(&self.field, pmul(&self.field, &self.c, &o.c))
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        Poly::from_reprs(&self.field, pscale(&self.field, &self.c, &c.r))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; panics if `o` is zero.
    pub fn divrem(&self, o: &Poly) -> (Poly, Poly) {
        let (q, r) = pdivrem(&self.field, &self.c, &o.c);
        (
            Poly::from_reprs(&self.field, q),
            Poly::from_reprs(&self.field, r),
        )
    }

    pub fn rem(&self, o: &Poly) -> Poly {
        Poly::from_reprs(&self.field, prem(&self.field, &self.c, &o.c))
    }

    pub fn div_exact(&self, o: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(o);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, o: &Poly) -> bool {
        o.rem(self).is_zero()
    }

    pub fn monic(&self) -> Poly {
        Poly::from_reprs(&self.field, pmonic(&self.field, &self.c))
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (g, _, _) = pxgcd(&self.field, &self.c, &o.c);
        Poly::from_reprs(&self.field, g)
    }

    /// `(g, s, t)` with `s*self + t*o = g` monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let (g, s, t) = pxgcd(&self.field, &self.c, &o.c);
        (
            Poly::from_reprs(&self.field, g),
            Poly::from_reprs(&self.field, s),
            Poly::from_reprs(&self.field, t),
        )
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, r)| f.mul_r(r, &f.rat_r(&Rat::from_integer((i as i64).into()))))
            .collect();
        Poly::from_reprs(f, c)
    }

    pub fn eval(&self, a: &Elem) -> Elem {
        assert!(a.field() == &self.field, "evaluation point field mismatch");
        let f = &self.field;
        let mut acc = f.zero_r();
        for c in self.c.iter().rev() {
            acc = f.add_r(&f.mul_r(&acc, &a.r), c);
        }
        Elem::from_repr(f, acc)
    }

    /// Evaluates at a point of an extension of the coefficient field.
    pub fn eval_embed(&self, a: &Elem) -> Elem {
        let f = a.field();
        let mut acc = f.zero();
        for c in self.coeffs().iter().rev() {
            acc = acc.mul(a).add(&f.embed(c).expect("coefficient field not a subfield"));
        }
        acc
    }

    /// `self(o(x))`.
    pub fn compose(&self, o: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs().iter().rev() {
            acc = acc.mul(o).add(&Poly::constant(&self.field, c));
        }
        acc
    }

    /// Multiplicity of `x = 0` as a root.
    pub fn x_valuation(&self) -> usize {
        self.c.iter().take_while(|r| self.field.is_zero_r(r)).count()
    }

    /// Drops the factor `x^k` for `k = x_valuation()`.
    pub fn strip_x(&self) -> Poly {
        let k = self.x_valuation();
        Poly::from_reprs(&self.field, self.c[k..].to_vec())
    }

    /// Order of vanishing along the (nonconstant) polynomial `p`.
    pub fn order_at(&self, p: &Poly) -> usize {
        assert!(!self.is_zero());
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(p) {
            cur = q;
            k += 1;
        }
        k
    }

    /// Resultant `Res(self, o)`.
    pub fn resultant(&self, o: &Poly) -> Elem {
        let f = self.field.clone();
        if self.is_zero() || o.is_zero() {
            return f.zero();
        }
        let mut a = self.clone();
        let mut b = o.clone();
        let mut acc = f.one();
        loop {
            let m = a.degree().unwrap();
            let n = match b.degree() {
                None => return f.zero(),
                Some(n) => n,
            };
            if n == 0 {
                return acc.mul(&b.lead().pow(m as u64));
            }
            if m == 0 {
                return acc.mul(&a.lead().pow(n as u64));
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return f.zero();
            }
            let dr = r.degree().unwrap();
            let mut factor = b.lead().pow((m - dr) as u64);
            if (m * n) % 2 == 1 {
                factor = factor.neg();
            }
            acc = acc.mul(&factor);
            a = b;
            b = r;
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).unwrap().monic()
    }

    /// Yun's decomposition: monic squarefree, pairwise coprime `a_i` with
    /// `self = lead * prod a_i^i`; returns nonconstant `(a_i, i)`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.deg() < 1 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).unwrap();
        let c = df.div_exact(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            let bn = b.div_exact(&a).unwrap();
            let cn = d.div_exact(&a).unwrap();
            d = cn.sub(&bn.derivative());
            if !a.is_constant() {
                out.push((a.monic(), i));
            }
            b = bn;
            i += 1;
        }
        out
    }

    /// Reinterprets the coefficients in a field containing the coefficient field.
    pub fn embed_into(&self, f: &Field) -> Poly {
        f.embed_poly(self).expect("not a subfield")
    }

    /// Coefficients as rationals, if they all lie in the prime field.
    pub fn to_rats(&self) -> Option<Vec<Rat>> {
        self.coeffs().iter().map(|c| c.to_rat()).collect()
    }

    /// Renders the polynomial in the variable `var`.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.c.is_empty() {
            return "0".into();
        }
        let f = &self.field;
        let mut out = String::new();
        for i in (0..self.c.len()).rev() {
            let r = &self.c[i];
            if f.is_zero_r(r) {
                continue;
            }
            let (neg, mag) = coeff_parts(f, r);
            let mono = match i {
                0 => mag.clone(),
                _ => {
                    let v = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{}^{}", var, i)
                    };
                    if mag == "1" {
                        v
                    } else {
                        format!("{}*{}", mag, v)
                    }
                }
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&mono);
        }
        out
    }
}

fn coeff_parts(f: &Field, r: &Repr) -> (bool, String) {
    if let Some(q) = f.to_rat_r(r) {
        let s = super::field::fmt_rat(&q.abs());
        return (q.is_negative(), s);
    }
    let s = f.fmt_repr(r);
    if f.repr_is_compound(r) {
        (false, format!("({})", s))
    } else if let Some(rest) = s.strip_prefix('-') {
        (true, rest.to_string())
    } else {
        (false, s)
    }
}

impl Poly {
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == self.field.one_r()
    }

    /// Integer shift of the variable: `self(x + a)`.
    pub fn shift(&self, a: &Elem) -> Poly {
        self.compose(&Poly::linear(&a.neg()))
    }

    pub fn is_x(&self) -> bool {
        self.c.len() == 2 && self.field.is_zero_r(&self.c[0]) && self.c[1] == self.field.one_r()
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(0)
    }
}
