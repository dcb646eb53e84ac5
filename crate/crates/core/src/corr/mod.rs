//! Framed correspondences in standard form.
//!
//! A [`CorrTerm`] is a product of level-one axes over a defining field `L`,
//! read over a base field `k` contained in `L`. Each axis is an open subset
//! `A^1_L \ Z(excluded)` with a framing polynomial and a target: the point,
//! the coordinate of `G_m`, or a constant in `G_m`.

pub mod moves;

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{factor, Elem, Field, Poly};
use crate::error::{Error, Result};

/// Where an axis maps its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetRole {
    Point,
    Coordinate,
    Constant(Elem),
}

impl TargetRole {
    /// Whether the axis contributes a `G_m` factor to the target.
    pub fn is_graded(&self) -> bool {
        !matches!(self, TargetRole::Point)
    }
}

/// One axis `(A^1_L \ Z(excluded), framing, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisSpec {
    pub framing: Poly,
    pub excluded: Poly,
    pub target: TargetRole,
}

impl AxisSpec {
    pub fn new(framing: Poly, excluded: Poly, target: TargetRole) -> Result<AxisSpec> {
        if framing.is_zero() {
            return Err(Error::InvalidCorr("framing is identically zero".into()));
        }
        if excluded.is_zero() {
            return Err(Error::InvalidCorr("excluded polynomial is zero".into()));
        }
        if framing.field() != excluded.field() {
            return Err(Error::FieldMismatch(
                framing.field().to_string(),
                excluded.field().to_string(),
            ));
        }
        if let TargetRole::Constant(c) = &target {
            if c.is_zero() {
                return Err(Error::InvalidCorr("constant target must be a unit".into()));
            }
        }
        let ax = AxisSpec {
            framing,
            excluded,
            target,
        };
        if ax.target == TargetRole::Coordinate {
            for (g, _) in ax.support()? {
                if g.constant_term().is_zero() {
                    return Err(Error::InvalidCorr(
                        "coordinate target requires the origin outside the support".into(),
                    ));
                }
            }
        }
        Ok(ax)
    }

    /// Full-line axis with point target.
    pub fn point(framing: Poly) -> Result<AxisSpec> {
        let one = Poly::one(framing.field());
        AxisSpec::new(framing, one, TargetRole::Point)
    }

    /// Axis on `G_m` with coordinate target.
    pub fn coordinate(framing: Poly) -> Result<AxisSpec> {
        let x = Poly::x(framing.field());
        AxisSpec::new(framing, x, TargetRole::Coordinate)
    }

    pub fn field(&self) -> &Field {
        self.framing.field()
    }

    /// Irreducible monic factors of the framing not vanishing identically on the
    /// excluded locus, with multiplicities.
    pub fn support(&self) -> Result<Vec<(Poly, usize)>> {
        if self.framing.is_constant() {
            return Ok(vec![]);
        }
        Ok(factor(&self.framing)?
            .into_iter()
            .filter(|(g, _)| !g.divides(&self.excluded))
            .collect())
    }

    /// Size of the zero scheme over `L`.
    pub fn degree(&self) -> Result<usize> {
        Ok(self
            .support()?
            .iter()
            .map(|(g, r)| g.deg() as usize * r)
            .sum())
    }

    /// Reinterprets the axis over a larger field, through a field map given on
    /// coefficients.
    pub(crate) fn map_coeffs(&self, f: &Field, m: &dyn Fn(&Elem) -> Result<Elem>) -> Result<AxisSpec> {
        let mp = |p: &Poly| -> Result<Poly> {
            Ok(Poly::new(f, p.coeffs().iter().map(m).collect::<Result<Vec<_>>>()?))
        };
        let target = match &self.target {
            TargetRole::Constant(c) => TargetRole::Constant(m(c)?),
            t => t.clone(),
        };
        Ok(AxisSpec {
            framing: mp(&self.framing)?,
            excluded: mp(&self.excluded)?,
            target,
        })
    }

    pub fn to_json(&self) -> Value {
        let target = match &self.target {
            TargetRole::Point => json!("point"),
            TargetRole::Coordinate => json!("coord"),
            TargetRole::Constant(c) => json!({ "const": c.to_string() }),
        };
        json!({
            "framing": self.framing.fmt_var("x"),
            "excluded": self.excluded.fmt_var("x"),
            "target": target,
        })
    }
}

impl fmt::Display for AxisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axis({}", self.framing.fmt_var("x"))?;
        if !self.excluded.is_one() {
            write!(f, "; excl={}", self.excluded.fmt_var("x"))?;
        }
        match &self.target {
            TargetRole::Point => write!(f, "; target=point)"),
            TargetRole::Coordinate => write!(f, "; target=coord)"),
            TargetRole::Constant(c) => write!(f, "; target=const {})", c),
        }
    }
}

/// A product of axes over the defining field, read over the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrTerm {
    base: Field,
    field: Field,
    axes: Vec<AxisSpec>,
}

impl CorrTerm {
    pub fn new(base: &Field, field: &Field, axes: Vec<AxisSpec>) -> Result<CorrTerm> {
        if !field.tower().contains(base) {
            return Err(Error::NotASubfield(base.to_string(), field.to_string()));
        }
        for a in &axes {
            if a.field() != field {
                return Err(Error::FieldMismatch(a.field().to_string(), field.to_string()));
            }
        }
        Ok(CorrTerm {
            base: base.clone(),
            field: field.clone(),
            axes,
        })
    }

    /// The empty product over `k`, the unit for [`corr_product`].
    pub fn unit(k: &Field) -> CorrTerm {
        CorrTerm {
            base: k.clone(),
            field: k.clone(),
            axes: vec![],
        }
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn level(&self) -> usize {
        self.axes.len()
    }

    /// Number of `G_m` factors of the target.
    pub fn target_degree(&self) -> usize {
        self.axes.iter().filter(|a| a.target.is_graded()).count()
    }

    pub fn with_axes(&self, axes: Vec<AxisSpec>) -> Result<CorrTerm> {
        CorrTerm::new(&self.base, &self.field, axes)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.to_string(),
            "field": self.field.to_string(),
            "axes": self.axes.iter().map(|a| a.to_json()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for CorrTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "corr({}", self.field)?;
        if !self.base.is_rationals() {
            write!(f, "; over={}", self.base)?;
        }
        for (i, a) in self.axes.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { "; " } else { ", " }, a)?;
        }
        write!(f, ")")
    }
}

/// Per-axis support of a term.
pub fn corr_support(t: &CorrTerm) -> Result<Vec<Vec<(Poly, usize)>>> {
    t.axes.iter().map(|a| a.support()).collect()
}

/// `dim_k` of the zero scheme: `[L:k]` times the product of the axis degrees.
pub fn corr_degree(t: &CorrTerm) -> Result<usize> {
    let mut d = t.base.degree_in(&t.field)?;
    for a in &t.axes {
        d *= a.degree()?;
    }
    Ok(d)
}

/// A formal integer combination of terms sharing base field and target degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCorr {
    base: Field,
    target_degree: usize,
    terms: Vec<(i64, CorrTerm)>,
}

impl FormalCorr {
    pub fn zero(base: &Field, target_degree: usize) -> FormalCorr {
        FormalCorr {
            base: base.clone(),
            target_degree,
            terms: vec![],
        }
    }

    pub fn from_term(t: CorrTerm) -> FormalCorr {
        FormalCorr {
            base: t.base.clone(),
            target_degree: t.target_degree(),
            terms: vec![(1, t)],
        }
    }

    pub fn new(base: &Field, target_degree: usize, terms: Vec<(i64, CorrTerm)>) -> Result<FormalCorr> {
        let mut out = FormalCorr::zero(base, target_degree);
        for (n, t) in terms {
            out.push(n, t)?;
        }
        Ok(out)
    }

    pub fn push(&mut self, n: i64, t: CorrTerm) -> Result<()> {
        if t.base != self.base {
            return Err(Error::FieldMismatch(t.base.to_string(), self.base.to_string()));
        }
        if t.target_degree() != self.target_degree {
            return Err(Error::DegreeMismatch(
                t.target_degree() as i64,
                self.target_degree as i64,
            ));
        }
        if n == 0 {
            return Ok(());
        }
        if let Some(e) = self.terms.iter_mut().find(|e| e.1 == t) {
            e.0 += n;
        } else {
            self.terms.push((n, t));
        }
        self.terms.retain(|e| e.0 != 0);
        Ok(())
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn target_degree(&self) -> usize {
        self.target_degree
    }

    pub fn terms(&self) -> &[(i64, CorrTerm)] {
        &self.terms
    }

    pub fn add(&self, o: &FormalCorr) -> Result<FormalCorr> {
        let mut out = self.clone();
        for (n, t) in &o.terms {
            out.push(*n, t.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> FormalCorr {
        self.scale(-1)
    }

    pub fn sub(&self, o: &FormalCorr) -> Result<FormalCorr> {
        self.add(&o.neg())
    }

    pub fn scale(&self, n: i64) -> FormalCorr {
        let mut out = FormalCorr::zero(&self.base, self.target_degree);
        for (m, t) in &self.terms {
            out.push(n * m, t.clone()).unwrap();
        }
        out
    }

    /// Sum of the degrees of the terms, weighted by the absolute coefficients.
    pub fn degree(&self) -> Result<usize> {
        let mut d = 0;
        for (n, t) in &self.terms {
            d += n.unsigned_abs() as usize * corr_degree(t)?;
        }
        Ok(d)
    }

    /// Bilinear extension of [`corr_product`].
    pub fn mul(&self, o: &FormalCorr) -> Result<FormalCorr> {
        let mut out = FormalCorr::zero(&self.base, self.target_degree + o.target_degree);
        for (n, s) in &self.terms {
            for (m, t) in &o.terms {
                let p = corr_product(s, t)?;
                for (c, u) in p.terms {
                    out.push(n * m * c, u)?;
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.to_string(),
            "target_degree": self.target_degree,
            "terms": self
                .terms
                .iter()
                .map(|(n, t)| json!({"coeff": n, "term": t.to_json()}))
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for FormalCorr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, t)) in self.terms.iter().enumerate() {
            let (neg, m) = (*n < 0, n.unsigned_abs());
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m != 1 {
                write!(f, "{}*", m)?;
            }
            write!(f, "{}", t)?;
        }
        Ok(())
    }
}

/// A field `F_i` in the splitting of `A (x)_k B` together with the image of the
/// generator of `B` in it. `A` embeds into `F_i` as a subfield.
struct TensorFactor {
    field: Field,
    root: Elem,
}

fn split_tensor(a: &Field, b: &Field) -> Result<Vec<TensorFactor>> {
    let p = a.embed_poly(&b.minpoly())?;
    let mut out = Vec::new();
    for (g, _) in factor(&p)? {
        if g.deg() == 1 {
            out.push(TensorFactor {
                field: a.clone(),
                root: g.coeff(0).div(&g.lead())?.neg(),
            });
        } else {
            let name = format!("{}_", b.name().unwrap_or("y"));
            let f = Field::extension(a, &g, &name)?;
            out.push(TensorFactor {
                root: f.generator(),
                field: f,
            });
        }
    }
    Ok(out)
}

/// Image of an element of the simple extension `B` in a tensor factor.
fn map_simple(e: &Elem, tf: &TensorFactor) -> Result<Elem> {
    let r = tf.field.embed_poly(&e.rep_poly())?;
    Ok(r.eval(&tf.root))
}

/// The product `s x t`. When both defining fields are proper extensions of the
/// base, the fibre product of the supports splits over the factors of
/// `L_s (x)_k L_t`, and the result is the corresponding formal sum.
pub fn corr_product(s: &CorrTerm, t: &CorrTerm) -> Result<FormalCorr> {
    if s.base != t.base {
        return Err(Error::FieldMismatch(s.base.to_string(), t.base.to_string()));
    }
    let k = &s.base;
    let concat = |f: &Field, sa: Vec<AxisSpec>, ta: Vec<AxisSpec>| -> Result<FormalCorr> {
        let mut axes = sa;
        axes.extend(ta);
        Ok(FormalCorr::from_term(CorrTerm::new(k, f, axes)?))
    };
    let embed_all = |t: &CorrTerm, f: &Field| -> Result<Vec<AxisSpec>> {
        t.axes
            .iter()
            .map(|a| a.map_coeffs(f, &|e| f.embed(e)))
            .collect()
    };
    if t.field == *k {
        return concat(&s.field, s.axes.clone(), embed_all(t, &s.field)?);
    }
    if s.field == *k {
        return concat(&t.field, embed_all(s, &t.field)?, t.axes.clone());
    }
    // one side must be simple over k
    let (simple_is_t, a, b) = if t.field.base() == *k {
        (true, &s.field, &t.field)
    } else if s.field.base() == *k {
        (false, &t.field, &s.field)
    } else {
        return Err(Error::InvalidCorr(format!(
            "cannot form the compositum of {} and {} over {}",
            s.field, t.field, k
        )));
    };
    let mut out = FormalCorr::zero(k, s.target_degree() + t.target_degree());
    for tf in split_tensor(a, b)? {
        let f = tf.field.clone();
        let (big, small) = if simple_is_t { (s, t) } else { (t, s) };
        let big_axes = embed_all(big, &f)?;
        let small_axes = small
            .axes
            .iter()
            .map(|ax| ax.map_coeffs(&f, &|e| map_simple(e, &tf)))
            .collect::<Result<Vec<_>>>()?;
        let (sa, ta) = if simple_is_t {
            (big_axes, small_axes)
        } else {
            (small_axes, big_axes)
        };
        let mut axes = sa;
        axes.extend(ta);
        out.push(1, CorrTerm::new(k, &f, axes)?)?;
    }
    Ok(out)
}

/// Appends the stabilization axis `(A^1, x, point)`.
pub fn corr_stabilize(t: &CorrTerm) -> CorrTerm {
    let mut axes = t.axes.clone();
    axes.push(AxisSpec::point(Poly::x(&t.field)).unwrap());
    CorrTerm {
        base: t.base.clone(),
        field: t.field.clone(),
        axes,
    }
}

/// Composition with `c_{B/k}` for the base `B` of `t`, simple over `k = B.base()`:
/// prepends the axis `(x - b, point)` for the generator `b` of `B`.
pub fn corr_transfer(t: &CorrTerm) -> Result<CorrTerm> {
    let b = &t.base;
    if b.is_rationals() {
        return Err(Error::InvalidCorr("the base field has no proper subfield".into()));
    }
    let k = b.base();
    let g = t.field.embed(&b.generator())?;
    let mut axes = vec![AxisSpec::point(Poly::linear(&g))?];
    axes.extend(t.axes.iter().cloned());
    CorrTerm::new(&k, &t.field, axes)
}

/// Composition with `c_eta` on the first coordinate axis of each term, which
/// must be linear: `c_eta o (<l>[x - a]) = <l a>`. When `minus_projection` is
/// set, the composite with the projection is subtracted, which realizes
/// multiplication by `eta`.
pub fn corr_eta(c: &FormalCorr, minus_projection: bool) -> Result<FormalCorr> {
    if c.target_degree == 0 {
        return Err(Error::InvalidCorr("c_eta needs a target of degree at least 1".into()));
    }
    let mut out = FormalCorr::zero(&c.base, c.target_degree - 1);
    for (n, t) in &c.terms {
        let i = t
            .axes
            .iter()
            .position(|a| a.target == TargetRole::Coordinate)
            .ok_or_else(|| Error::InvalidCorr(format!("{} has no coordinate axis", t)))?;
        let ax = &t.axes[i];
        if ax.framing.deg() != 1 {
            return Err(Error::InvalidCorr(format!("{} is not linear", ax.framing)));
        }
        let l = ax.framing.lead();
        let a = ax.framing.coeff(0).div(&l)?.neg();
        if ax.excluded.eval(&a).is_zero() {
            return Err(Error::InvalidCorr(format!("{} has empty support", ax)));
        }
        let replace = |lam: &Elem| -> Result<CorrTerm> {
            let mut axes = t.axes.clone();
            axes[i] = AxisSpec::point(Poly::monomial(lam, 1))?;
            t.with_axes(axes)
        };
        out.push(*n, replace(&l.mul(&a))?)?;
        if minus_projection {
            out.push(-*n, replace(&l)?)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(&q(), c)
    }

    #[test]
    fn support_filters_excluded() {
        let a = AxisSpec::new(p(&[0, -1, 1]), p(&[0, 1]), TargetRole::Point).unwrap();
        assert_eq!(a.support().unwrap(), vec![(p(&[-1, 1]), 1)]);
        let f = p(&[-2, 0, 1]).pow(2).mul(&p(&[-3, 1]));
        let a = AxisSpec::new(f, p(&[-3, 1]), TargetRole::Point).unwrap();
        assert_eq!(a.support().unwrap(), vec![(p(&[-2, 0, 1]), 2)]);
    }

    #[test]
    fn degrees() {
        let t = CorrTerm::new(
            &q(),
            &q(),
            vec![
                AxisSpec::point(p(&[-2, 0, 1]).mul(&p(&[-1, 1]))).unwrap(),
                AxisSpec::point(p(&[-5, 1])).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(corr_degree(&t).unwrap(), 3);
        let l = Field::extension(&q(), &p(&[-2, 0, 0, 1]), "c").unwrap();
        let t = CorrTerm::new(&q(), &l, vec![AxisSpec::point(Poly::linear(&l.generator())).unwrap()]).unwrap();
        assert_eq!(corr_degree(&t).unwrap(), 3);
    }

    #[test]
    fn product_over_tensor_square() {
        let l = Field::extension(&q(), &p(&[-2, 0, 1]), "s").unwrap();
        let t = CorrTerm::new(&q(), &l, vec![AxisSpec::point(Poly::linear(&l.generator())).unwrap()]).unwrap();
        let sq = corr_product(&t, &t).unwrap();
        // Q(s) (x) Q(s) = Q(s) x Q(s)
        assert_eq!(sq.terms().len(), 2);
        assert_eq!(sq.degree().unwrap(), 4);
    }

    #[test]
    fn coordinate_target_rejects_origin() {
        let e = AxisSpec::new(p(&[0, 1]), p(&[1]), TargetRole::Coordinate).unwrap_err();
        assert_eq!(e.code(), "invalid_corr");
    }
}
