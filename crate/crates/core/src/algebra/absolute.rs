//! Primitive-element presentation of a field tower over the rationals.

use std::sync::{Arc, OnceLock};

use super::field::{Elem, Field, Repr};
use super::poly::Poly;
use super::real::RealRoot;

/// A tower `L` presented as `Q(theta)` with `theta = beta + s * theta_K`.
pub(crate) struct Absolute {
    pub field: Field,
    /// Image in `field` of the generator of each level of the tower, bottom first.
    gen_images: Vec<Elem>,
    /// The primitive element as an element of the top field.
    theta_in_top: Option<Elem>,
    pub(crate) real_roots: OnceLock<Vec<RealRoot>>,
}

static RATIONALS: OnceLock<Arc<Absolute>> = OnceLock::new();

impl Absolute {
    pub fn rationals() -> Arc<Absolute> {
        RATIONALS
            .get_or_init(|| {
                Arc::new(Absolute {
                    field: Field::rationals(),
                    gen_images: vec![],
                    theta_in_top: None,
                    real_roots: OnceLock::new(),
                })
            })
            .clone()
    }

    pub fn build(l: &Field) -> Absolute {
        let q = Field::rationals();
        let k = l.base();
        if k.is_rationals() {
            return Absolute {
                field: l.clone(),
                gen_images: vec![l.generator()],
                theta_in_top: Some(l.generator()),
                real_roots: OnceLock::new(),
            };
        }
        let ka = k.absolute();
        let ak = ka.field.clone();
        let theta_k = ak.generator();
        let m = l.minpoly();
        let mt = Poly::new(&ak, m.coeffs().iter().map(|c| ka.to_abs(c)).collect());
        let mut s: i64 = 1;
        let r = loop {
            let sub = Poly::new(&ak, vec![theta_k.mul(&ak.from_int(-s)), ak.one()]);
            let g = mt.compose(&sub);
            let r = poly_norm(&g);
            if r.is_squarefree() {
                break r;
            }
            s = if s > 0 { -s } else { -s + 1 };
        };
        let a = Field::extension_unchecked(&q, &r, "theta");
        let theta = a.generator();
        // Recover theta_K inside Q(theta) as the common root of its minimal
        // polynomial and m~(theta - s z).
        let g1 = ak.minpoly().embed_into(&a);
        let lin = Poly::new(&a, vec![theta.clone(), a.from_int(-s)]);
        let mut g2 = Poly::zero(&a);
        let mut pw = Poly::one(&a);
        for c in mt.coeffs() {
            let cz = c.rep_poly().embed_into(&a);
            g2 = g2.add(&cz.mul(&pw));
            pw = pw.mul(&lin);
        }
        let g = g1.gcd(&g2);
        assert_eq!(g.degree(), Some(1), "primitive element recovery failed");
        let w = g.coeff(0).neg();
        let mut gen_images: Vec<Elem> = ka
            .gen_images
            .iter()
            .map(|img| img.rep_poly().eval_embed(&w))
            .collect();
        gen_images.push(theta.sub(&w.mul(&a.from_int(s))));
        let tk_in_l = l.embed(ka.theta_in_top.as_ref().unwrap()).unwrap();
        let theta_in_top = l.generator().add(&tk_in_l.mul(&l.from_int(s)));
        Absolute {
            field: a,
            gen_images,
            theta_in_top: Some(theta_in_top),
            real_roots: OnceLock::new(),
        }
    }

    /// Maps an element of the top field into `Q(theta)`.
    pub fn to_abs(&self, e: &Elem) -> Elem {
        if self.gen_images.len() == 1 || e.field().is_rationals() {
            return match e.to_rat() {
                Some(q) if e.field().is_rationals() => self.field.from_rat(&q),
                _ => e.clone(),
            };
        }
        self.map_level(e.field(), &e.r, self.gen_images.len())
    }

    fn map_level(&self, f: &Field, r: &Repr, level: usize) -> Elem {
        match r {
            Repr::Q(q) => self.field.from_rat(q),
            Repr::E(v) => {
                let g = &self.gen_images[level - 1];
                let b = f.base();
                let mut acc = self.field.zero();
                for c in v.iter().rev() {
                    acc = acc.mul(g).add(&self.map_level(&b, c, level - 1));
                }
                acc
            }
        }
    }

    /// Maps an element of `Q(theta)` back into the top field `top`.
    pub fn from_abs(&self, a: &Elem, top: &Field) -> Elem {
        match &self.theta_in_top {
            None => a.clone(),
            Some(t) => {
                if self.gen_images.len() == 1 {
                    return a.clone();
                }
                debug_assert!(t.field() == top);
                a.rep_poly().eval_embed(t)
            }
        }
    }

    pub fn to_abs_poly(&self, p: &Poly) -> Poly {
        Poly::new(&self.field, p.coeffs().iter().map(|c| self.to_abs(c)).collect())
    }

    pub fn from_abs_poly(&self, p: &Poly, top: &Field) -> Poly {
        Poly::new(top, p.coeffs().iter().map(|c| self.from_abs(c, top)).collect())
    }
}

/// Norm of a polynomial over a simple extension `E/K`, as a polynomial over `K`.
pub(crate) fn poly_norm(g: &Poly) -> Poly {
    let e = g.field().clone();
    let k = e.base();
    if e.is_rationals() {
        return g.clone();
    }
    let d = g.degree().unwrap_or(0) * e.degree();
    let xs: Vec<Elem> = (0..=d as i64).map(|i| k.from_int(i)).collect();
    let ys: Vec<Elem> = (0..=d as i64)
        .map(|i| g.eval(&e.from_int(i)).norm())
        .collect();
    interpolate(&k, &xs, &ys)
}

/// Polynomial of degree < n through the n given points (Newton form).
pub(crate) fn interpolate(k: &Field, xs: &[Elem], ys: &[Elem]) -> Poly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = coef[i].sub(&coef[i - 1]);
            let den = xs[i].sub(&xs[i - j]);
            coef[i] = num.div(&den).unwrap();
        }
    }
    let mut p = Poly::constant(k, &coef[n - 1]);
    for i in (0..n - 1).rev() {
        p = p.mul(&Poly::linear(&xs[i])).add(&Poly::constant(k, &coef[i]));
    }
    p
}

/// Characteristic polynomial of `e` over the base of its field.
pub(crate) fn charpoly_over_base(e: &Elem) -> Poly {
    let f = e.field();
    if f.is_rationals() {
        return Poly::linear(e);
    }
    poly_norm(&Poly::linear(e))
}
