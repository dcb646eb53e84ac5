//! Equivalence moves on correspondence terms, each returning a trace of the
//! rewrite and of the side conditions it checked.

use serde_json::{json, Value};

use super::{corr_degree, AxisSpec, CorrTerm, FormalCorr, TargetRole};
use crate::algebra::{Elem, Poly};
use crate::bridge::{phi, phi_term};
use crate::error::{Error, Result};
use crate::mw::mw_equal;
use crate::quadform::Decision;

/// The lemma a move instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma {
    SameLeading,
    SplitRoots,
    DeformGm,
    UnitRescale,
    AddAxis,
    RemoveAxis,
    SwapAxes,
}

impl Lemma {
    pub fn tag(&self) -> &'static str {
        match self {
            Lemma::SameLeading => "ratroots.same_leading",
            Lemma::SplitRoots => "ratroots.split",
            Lemma::DeformGm => "deform.gm",
            Lemma::UnitRescale => "multiplication.rescale",
            Lemma::AddAxis => "addone.add",
            Lemma::RemoveAxis => "addone.remove",
            Lemma::SwapAxes => "swap.axes",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MoveTrace {
    pub lemma: Lemma,
    pub before: CorrTerm,
    pub after: FormalCorr,
    pub checks: Vec<(String, bool)>,
}

/// Outcome of re-checking a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub degree_preserved: bool,
    /// `None` when either side cannot be evaluated.
    pub phi_preserved: Option<Decision>,
}

impl MoveTrace {
    /// Recomputes the degree and, where possible, the value of both sides.
    pub fn certify(&self) -> Result<Certificate> {
        let degree_preserved = corr_degree(&self.before)? == self.after.degree()?;
        let phi_preserved = match (phi_term(&self.before), phi(&self.after)) {
            (Ok(a), Ok(b)) => Some(mw_equal(&a, &b)?),
            _ => None,
        };
        Ok(Certificate {
            degree_preserved,
            phi_preserved,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lemma": self.lemma.tag(),
            "before": self.before.to_json(),
            "after": self.after.to_json(),
            "checks": self
                .checks
                .iter()
                .map(|(l, ok)| json!({"label": l, "ok": ok}))
                .collect::<Vec<_>>(),
        })
    }
}

fn require(lemma: Lemma, checks: &mut Vec<(String, bool)>, label: &str, ok: bool) -> Result<()> {
    checks.push((label.to_string(), ok));
    if ok {
        Ok(())
    } else {
        Err(Error::MoveSideCondition(lemma.tag().into(), label.into()))
    }
}

fn axis(t: &CorrTerm, i: usize, lemma: Lemma) -> Result<&AxisSpec> {
    t.axes()
        .get(i)
        .ok_or_else(|| Error::MoveSideCondition(lemma.tag().into(), format!("no axis {}", i)))
}

fn replace_axis(t: &CorrTerm, i: usize, a: AxisSpec) -> Result<CorrTerm> {
    let mut axes = t.axes().to_vec();
    axes[i] = a;
    t.with_axes(axes)
}

fn trace(lemma: Lemma, before: &CorrTerm, after: FormalCorr, checks: Vec<(String, bool)>) -> MoveTrace {
    MoveTrace {
        lemma,
        before: before.clone(),
        after,
        checks,
    }
}

/// Replaces the framing of a full-line point axis by `q` of the same degree
/// and leading coefficient.
pub fn move_same_leading(t: &CorrTerm, i: usize, q: &Poly) -> Result<MoveTrace> {
    let lemma = Lemma::SameLeading;
    let a = axis(t, i, lemma)?;
    let mut c = Vec::new();
    require(lemma, &mut c, "point target", a.target == TargetRole::Point)?;
    require(lemma, &mut c, "full affine line", a.excluded.is_constant())?;
    require(lemma, &mut c, "same field", q.field() == a.field())?;
    require(lemma, &mut c, "same degree", q.deg() == a.framing.deg())?;
    require(lemma, &mut c, "same leading coefficient", q.lead() == a.framing.lead())?;
    let new = AxisSpec::new(q.clone(), a.excluded.clone(), TargetRole::Point)?;
    Ok(trace(lemma, t, FormalCorr::from_term(replace_axis(t, i, new)?), c))
}

/// Splits a point axis whose support consists of simple roots in the defining
/// field into the sum of the linear terms `<f'(a_j) x>`.
pub fn move_split_roots(t: &CorrTerm, i: usize) -> Result<MoveTrace> {
    let lemma = Lemma::SplitRoots;
    let a = axis(t, i, lemma)?;
    let mut c = Vec::new();
    require(lemma, &mut c, "point target", a.target == TargetRole::Point)?;
    let supp = a.support()?;
    require(lemma, &mut c, "roots in the defining field", supp.iter().all(|(g, _)| g.deg() == 1))?;
    require(lemma, &mut c, "simple roots", supp.iter().all(|(_, r)| *r == 1))?;
    let df = a.framing.derivative();
    let mut after = FormalCorr::zero(t.base(), t.target_degree());
    for (g, _) in &supp {
        let root = g.coeff(0).neg();
        let lam = df.eval(&root);
        let new = AxisSpec::point(Poly::monomial(&lam, 1))?;
        after.push(1, replace_axis(t, i, new)?)?;
    }
    Ok(trace(lemma, t, after, c))
}

/// On an axis over `G_m` with framing `x^d p`, replaces `p` by `q` of the same
/// degree, leading coefficient and constant term.
pub fn move_deform_gm(t: &CorrTerm, i: usize, q: &Poly) -> Result<MoveTrace> {
    let lemma = Lemma::DeformGm;
    let a = axis(t, i, lemma)?;
    let mut c = Vec::new();
    let d = a.framing.x_valuation();
    let p = a.framing.strip_x();
    let ex = &a.excluded;
    let on_gm = ex.x_valuation() >= 1 && ex.strip_x().is_constant();
    require(lemma, &mut c, "open set is G_m", on_gm)?;
    require(lemma, &mut c, "same field", q.field() == a.field())?;
    require(lemma, &mut c, "same degree", q.deg() == p.deg())?;
    require(lemma, &mut c, "same leading coefficient", q.lead() == p.lead())?;
    require(lemma, &mut c, "same constant term", q.constant_term() == p.constant_term())?;
    let framing = q.mul(&Poly::x(q.field()).pow(d as u32));
    let new = AxisSpec::new(framing, ex.clone(), a.target.clone())?;
    Ok(trace(lemma, t, FormalCorr::from_term(replace_axis(t, i, new)?), c))
}

/// Replaces the framing `f` by `g = f (1 + m)` with `m` vanishing on the
/// support; zeros of `g` away from the support are added to the excluded locus.
pub fn move_unit_rescale(t: &CorrTerm, i: usize, g: &Poly) -> Result<MoveTrace> {
    let lemma = Lemma::UnitRescale;
    let a = axis(t, i, lemma)?;
    let mut c = Vec::new();
    require(lemma, &mut c, "same field", g.field() == a.field())?;
    require(lemma, &mut c, "nonzero framing", !g.is_zero())?;
    let diff = g.sub(&a.framing);
    let supp = a.support()?;
    let mut cof = g.clone();
    for (pi, r) in &supp {
        let ok = diff.is_zero() || diff.order_at(pi) > *r;
        require(lemma, &mut c, &format!("g - f vanishes to order {} along {}", r + 1, pi), ok)?;
        cof = cof.div_exact(&pi.pow(*r as u32)).unwrap();
    }
    let excluded = if cof.is_constant() {
        a.excluded.clone()
    } else {
        a.excluded.mul(&cof.monic())
    };
    let new = AxisSpec::new(g.clone(), excluded, a.target.clone())?;
    Ok(trace(lemma, t, FormalCorr::from_term(replace_axis(t, i, new)?), c))
}

/// Appends the axis `(A^1, x - c, point)`.
pub fn move_add_axis(t: &CorrTerm, c: &Elem) -> Result<MoveTrace> {
    let lemma = Lemma::AddAxis;
    let mut checks = Vec::new();
    require(lemma, &mut checks, "constant in the defining field", c.field() == t.field())?;
    let mut axes = t.axes().to_vec();
    axes.push(AxisSpec::point(Poly::linear(c))?);
    Ok(trace(lemma, t, FormalCorr::from_term(t.with_axes(axes)?), checks))
}

/// Removes an axis of the form `(A^1, x - c, point)`.
pub fn move_remove_axis(t: &CorrTerm, i: usize) -> Result<MoveTrace> {
    let lemma = Lemma::RemoveAxis;
    let a = axis(t, i, lemma)?;
    let mut c = Vec::new();
    require(lemma, &mut c, "point target", a.target == TargetRole::Point)?;
    require(lemma, &mut c, "monic linear framing", a.framing.deg() == 1 && a.framing.is_monic())?;
    let root = a.framing.coeff(0).neg();
    require(lemma, &mut c, "support not excluded", !a.excluded.eval(&root).is_zero())?;
    let mut axes = t.axes().to_vec();
    axes.remove(i);
    Ok(trace(lemma, t, FormalCorr::from_term(t.with_axes(axes)?), c))
}

/// Exchanges two linear axes: `(l1 (x - m1), l2 (x - m2))` becomes
/// `(l2 (x + m2), l1 (x - m1))`. Targets stay with their positions, so only
/// point and constant targets are allowed.
pub fn move_swap_axes(t: &CorrTerm, i: usize, j: usize) -> Result<MoveTrace> {
    let lemma = Lemma::SwapAxes;
    let a = axis(t, i, lemma)?;
    let b = axis(t, j, lemma)?;
    let mut c = Vec::new();
    require(lemma, &mut c, "distinct axes", i != j)?;
    require(lemma, &mut c, "linear framings", a.framing.deg() == 1 && b.framing.deg() == 1)?;
    let fixed = |r: &TargetRole| !matches!(r, TargetRole::Coordinate);
    require(lemma, &mut c, "no coordinate targets", fixed(&a.target) && fixed(&b.target))?;
    let (l1, l2) = (a.framing.lead(), b.framing.lead());
    let m1 = a.framing.coeff(0).div(&l1)?.neg();
    let m2 = b.framing.coeff(0).div(&l2)?.neg();
    require(lemma, &mut c, "supports not excluded", {
        !a.excluded.eval(&m1).is_zero() && !b.excluded.eval(&m2).is_zero()
    })?;
    let f = t.field();
    let one = Poly::one(f);
    let na = AxisSpec::new(Poly::linear(&m2.neg()).scale(&l2), one.clone(), a.target.clone())?;
    let nb = AxisSpec::new(Poly::linear(&m1).scale(&l1), one, b.target.clone())?;
    let mut axes = t.axes().to_vec();
    axes[i] = na;
    axes[j] = nb;
    Ok(trace(lemma, t, FormalCorr::from_term(t.with_axes(axes)?), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn q() -> Field {
        Field::rationals()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(&q(), c)
    }

    fn single(a: AxisSpec) -> CorrTerm {
        CorrTerm::new(&q(), &q(), vec![a]).unwrap()
    }

    fn certified(m: &MoveTrace) {
        let c = m.certify().unwrap();
        assert!(c.degree_preserved, "{}", m.before);
        assert_eq!(c.phi_preserved, Some(Decision::Equal), "{}", m.before);
    }

    #[test]
    fn split_x_times_x_minus_one() {
        let t = single(AxisSpec::point(p(&[0, -1, 1])).unwrap());
        let m = move_split_roots(&t, 0).unwrap();
        assert_eq!(m.after.terms().len(), 2);
        certified(&m);
    }

    #[test]
    fn same_leading_on_square() {
        let t = single(AxisSpec::point(p(&[0, 0, 1])).unwrap());
        let m = move_same_leading(&t, 0, &p(&[-1, 0, 1])).unwrap();
        certified(&m);
        assert!(move_same_leading(&t, 0, &p(&[-1, 0, 2])).is_err());
    }

    #[test]
    fn deform_square_identity() {
        // [(x - 1)^2 (x - a^2 b)] = [(x - a)^2 (x - b)] with a = 2, b = 3
        let f = p(&[-1, 1]).pow(2).mul(&p(&[-12, 1]));
        let g = p(&[-2, 1]).pow(2).mul(&p(&[-3, 1]));
        let t = single(AxisSpec::coordinate(f).unwrap());
        let m = move_deform_gm(&t, 0, &g).unwrap();
        certified(&m);
    }

    #[test]
    fn rescale_and_axes() {
        let t = single(AxisSpec::point(p(&[-3, 2])).unwrap());
        // g = (2x - 3)(1 + (2x - 3)) vanishes to order 2 on the difference
        let g = p(&[-3, 2]).mul(&p(&[-2, 2]));
        let m = move_unit_rescale(&t, 0, &g).unwrap();
        certified(&m);
        assert!(move_unit_rescale(&t, 0, &p(&[-3, 4])).is_err());
        let m = move_add_axis(&t, &q().from_int(5)).unwrap();
        certified(&m);
        let t2 = m.after.terms()[0].1.clone();
        let back = move_remove_axis(&t2, 1).unwrap();
        assert_eq!(back.after.terms()[0].1, t);
        let s = move_swap_axes(&t2, 0, 1).unwrap();
        certified(&s);
    }
}
