//! The comparison maps between correspondences and Milnor-Witt K-theory.
//!
//! [`phi`] evaluates a formal sum of correspondences to an element of
//! `K^MW_n(k)`, and [`psi`] writes an element back as a sum of standard terms.

use crate::algebra::{Elem, Field, Poly};
use crate::corr::{AxisSpec, CorrTerm, FormalCorr, TargetRole};
use crate::error::{Error, Result};
use crate::gw::GwElem;
use crate::mw::{mw_equal, transfer, transfer_step, MwElem};
use crate::quadform::Decision;

fn shape(e: Error) -> Error {
    match e {
        Error::UnsupportedTransferShape(s) => Error::UnsupportedCorrShape(s),
        e => e,
    }
}

fn target_value(t: &TargetRole, at: &Elem) -> Result<MwElem> {
    let f = at.field();
    match t {
        TargetRole::Point => Ok(MwElem::one(f)),
        TargetRole::Coordinate => MwElem::symbol(f, &[at.clone()]),
        TargetRole::Constant(c) => MwElem::symbol(f, &[f.embed(c)?]),
    }
}

/// The value of one axis in `K^MW_*(L)`: the sum over supported zeros of the
/// framing of the local index times the target.
pub fn axis_value(a: &AxisSpec) -> Result<MwElem> {
    let l = a.field();
    let deg = if a.target.is_graded() { 1 } else { 0 };
    let mut out = MwElem::zero(l, deg);
    for (g, r) in a.support()? {
        let v = if g.deg() == 1 {
            let lam = g.coeff(0).neg();
            let u = a.framing.div_exact(&g.pow(r as u32)).expect("factor divides framing");
            let idx = GwElem::n_epsilon(l, r as i64).mul(&GwElem::one_form(&u.eval(&lam))?);
            target_value(&a.target, &lam)?.gw_mul(&idx)
        } else {
            if r > 1 {
                return Err(Error::UnsupportedCorrShape(format!(
                    "multiple zero of {} along {}",
                    a.framing, g
                )));
            }
            let m = Field::extension(l, &g, "z_")?;
            let z = m.generator();
            let df = m.embed_poly(&a.framing)?.derivative().eval(&z);
            let local = target_value(&a.target, &z)?.gw_mul(&GwElem::one_form(&df)?);
            transfer_step(&local).map_err(shape)?
        };
        out = out.add(&v)?;
    }
    Ok(out)
}

/// The value of a single term: the transfer to the base of the product of its
/// axis values.
pub fn phi_term(t: &CorrTerm) -> Result<MwElem> {
    let mut prod = MwElem::one(t.field());
    for a in t.axes() {
        prod = prod.mul(&axis_value(a)?)?;
    }
    if t.field() == t.base() {
        return Ok(prod);
    }
    transfer(&prod, t.base()).map_err(shape)
}

pub fn phi(c: &FormalCorr) -> Result<MwElem> {
    let mut out = MwElem::zero(c.base(), c.target_degree() as i64);
    for (n, t) in c.terms() {
        out = out.add(&phi_term(t)?.int_mul(*n))?;
    }
    Ok(out)
}

/// Standard form of an element of non-negative degree: `<a>[b_1, ..., b_n]`
/// becomes the term with axes `(a x; point)` and `(x - b_i; coord)`.
pub fn psi(x: &MwElem) -> Result<FormalCorr> {
    if x.degree() < 0 {
        return Err(Error::Invalid(format!(
            "psi is defined in degrees >= 0, got {}",
            x.degree()
        )));
    }
    let f = x.field();
    let mut out = FormalCorr::zero(f, x.degree() as usize);
    for term in x.terms() {
        for (n, a) in term.coeff.terms() {
            let mut axes = vec![AxisSpec::point(Poly::monomial(&a, 1))?];
            for b in &term.symbol {
                axes.push(AxisSpec::coordinate(Poly::linear(b))?);
            }
            out.push(n, CorrTerm::new(f, f, axes)?)?;
        }
    }
    Ok(out)
}

/// Decides `phi(psi(x)) = x`.
pub fn roundtrip_check(x: &MwElem) -> Result<Decision> {
    mw_equal(&phi(&psi(x)?)?, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn point_axis_values() {
        let k = q();
        let a = AxisSpec::point(Poly::from_ints(&k, &[0, 3])).unwrap();
        assert_eq!(axis_value(&a).unwrap(), MwElem::one_form(&k.from_int(3)).unwrap());
        // x^2 - 2 is irreducible: its value is the trace form twisted by 1/(2 sqrt 2)
        let b = AxisSpec::point(Poly::from_ints(&k, &[-2, 0, 1])).unwrap();
        let v = axis_value(&b).unwrap().as_gw().unwrap();
        assert_eq!(crate::gw::gw_equal(&v, &GwElem::h(&k)).unwrap(), Decision::Equal);
    }

    #[test]
    fn roundtrip_small() {
        let k = q();
        let x = MwElem::symbol(&k, &[k.from_int(2), k.from_int(-3)]).unwrap();
        let y = x.gw_mul(&GwElem::one_form(&k.from_int(5)).unwrap());
        assert_eq!(roundtrip_check(&x.add(&y).unwrap()).unwrap(), Decision::Equal);
    }

    #[test]
    fn degree_two_wrap_around_transfers() {
        let k = q();
        let s = Field::extension(&k, &Poly::from_ints(&k, &[-2, 0, 1]), "s").unwrap();
        let t = CorrTerm::new(
            &k,
            &s,
            vec![AxisSpec::coordinate(Poly::linear(&s.generator())).unwrap()],
        )
        .unwrap();
        let v = phi_term(&t).unwrap();
        let direct = transfer(&MwElem::symbol(&s, &[s.generator()]).unwrap(), &k).unwrap();
        assert_eq!(mw_equal(&v, &direct).unwrap(), Decision::Equal);
    }
}
