use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde_json::{json, Value as Json};

use super::ast::{AxisExpr, BinOp, Expr, Stmt, TargetExpr};
use super::parser::parse_stmt;
use super::LangError;
use crate::algebra::{Elem, Field, Poly, Rat};
use crate::bridge::{phi, psi, roundtrip_check};
use crate::corr::moves::{
    move_add_axis, move_deform_gm, move_remove_axis, move_same_leading, move_split_roots,
    move_swap_axes, move_unit_rescale, MoveTrace,
};
use crate::corr::{corr_eta, corr_stabilize, corr_transfer, AxisSpec, CorrTerm, FormalCorr, TargetRole};
use crate::error::Error;
use crate::gw::GwElem;
use crate::mw::{mw_equal, residue, transfer, FnPlace, MwElem, RatFunc, RfMwElem, RfTerm};
use crate::quadform::{chain_equivalence_search, ChainResult, Decision, DiagForm, Invariants};

type R<T> = Result<T, LangError>;

/// A runtime value of the expression language.
#[derive(Clone, Debug)]
pub enum Value {
    Scalar(Elem),
    /// Polynomial in the axis coordinate `x`.
    Poly(Poly),
    /// Rational function in the function-field variable `t`.
    Rf(RatFunc),
    Mw(MwElem),
    RfMw(RfMwElem),
    Corr(FormalCorr),
    Field(Field),
    Infinity,
    Decision(Decision),
    Int(i64),
    Invariants(Invariants),
    Chain(ChainResult),
    Trace(Box<MoveTrace>),
}

fn ty(msg: impl Into<String>) -> LangError {
    LangError::Type(msg.into())
}

fn ev(e: Error) -> LangError {
    LangError::Eval(e)
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Poly(_) => "poly",
            Value::Rf(_) => "ratfunc",
            Value::Mw(m) if m.degree() == 0 => "gw",
            Value::Mw(_) => "mw",
            Value::RfMw(_) => "rfmw",
            Value::Corr(_) => "corr",
            Value::Field(_) => "field",
            Value::Infinity => "place",
            Value::Decision(_) => "decision",
            Value::Int(_) => "int",
            Value::Invariants(_) => "invariants",
            Value::Chain(_) => "chain",
            Value::Trace(_) => "trace",
        }
    }

    pub fn field(&self) -> Option<Field> {
        Some(match self {
            Value::Scalar(e) => e.field().clone(),
            Value::Poly(p) => p.field().clone(),
            Value::Rf(r) => r.field().clone(),
            Value::Mw(m) => m.field().clone(),
            Value::RfMw(m) => m.field.clone(),
            Value::Corr(c) => c.base().clone(),
            Value::Field(f) => f.clone(),
            Value::Trace(t) => t.after.base().clone(),
            _ => return None,
        })
    }

    pub fn degree(&self) -> Option<i64> {
        match self {
            Value::Mw(m) => Some(m.degree()),
            Value::RfMw(m) => Some(m.degree as i64),
            Value::Corr(c) => Some(c.target_degree() as i64),
            Value::Trace(t) => Some(t.after.target_degree() as i64),
            _ => None,
        }
    }

    pub fn text(&self) -> String {
        match self {
            Value::Scalar(e) => e.to_string(),
            Value::Poly(p) => p.fmt_var("x"),
            Value::Rf(r) => r.to_string(),
            Value::Mw(m) => m.to_string(),
            Value::RfMw(m) => m.to_string(),
            Value::Corr(c) => c.to_string(),
            Value::Field(f) => f.to_string(),
            Value::Infinity => "inf".into(),
            Value::Decision(d) => d.to_string(),
            Value::Int(n) => n.to_string(),
            Value::Invariants(i) => i.to_json().to_string(),
            Value::Chain(ChainResult::NotFound) => "NotFound".into(),
            Value::Chain(ChainResult::Found(steps)) => {
                let forms: Vec<String> = steps
                    .iter()
                    .map(|v| {
                        let s: Vec<String> = v.iter().map(|a| a.to_string()).collect();
                        format!("<{}>", s.join(", "))
                    })
                    .collect();
                format!("Found: {}", forms.join(" -> "))
            }
            Value::Trace(t) => t.after.to_string(),
        }
    }

    fn value_json(&self) -> Json {
        match self {
            Value::Int(n) => json!(n),
            Value::Invariants(i) => i.to_json(),
            Value::Chain(ChainResult::NotFound) => json!({"found": false}),
            Value::Chain(ChainResult::Found(steps)) => json!({
                "found": true,
                "steps": steps
                    .iter()
                    .map(|v| v.iter().map(|a| a.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
            _ => json!(self.text()),
        }
    }
}

/// The result of one statement together with the move traces it produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: Value,
    pub provenance: Vec<MoveTrace>,
}

impl Outcome {
    pub fn to_json(&self) -> Json {
        json!({
            "kind": self.value.kind(),
            "degree": self.value.degree(),
            "field": self.value.field().map(|f| f.to_string()),
            "value": self.value.value_json(),
            "provenance": self.provenance.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = self.value.text();
        for t in &self.provenance {
            let failed: Vec<&str> = t.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
            s.push_str(&format!(
                "\n  by {} ({} checks{})",
                t.lemma.tag(),
                t.checks.len(),
                if failed.is_empty() { String::new() } else { format!(", failed: {}", failed.join("; ")) }
            ));
        }
        s
    }

    /// 5 when an equality test came back undecided, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.value {
            Value::Decision(Decision::Unknown) => 5,
            _ => 0,
        }
    }
}

const RESERVED: &[&str] = &[
    "x", "t", "eta", "h", "inf", "Q", "let", "corr", "axis", "over", "excl", "target", "point", "coord",
    "const",
];

/// Evaluation state: bindings from `let` and from field declarations.
pub struct Session {
    vars: BTreeMap<String, Value>,
    budget: usize,
    steps: usize,
    traces: Vec<MoveTrace>,
}

fn q() -> Field {
    Field::rationals()
}

fn as_int(e: &Elem) -> Option<i64> {
    let r = e.to_rat()?;
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

fn join(a: &Field, b: &Field) -> R<Field> {
    Field::join(a, b).map_err(ev)
}

fn embed_rf(r: &RatFunc, f: &Field) -> R<RatFunc> {
    RatFunc::new(&f.embed_poly(r.num()).map_err(ev)?, &f.embed_poly(r.den()).map_err(ev)?).map_err(ev)
}

fn embed_rfmw(m: &RfMwElem, f: &Field) -> R<RfMwElem> {
    let terms = m
        .terms
        .iter()
        .map(|t| {
            Ok(RfTerm {
                mult: t.mult,
                coeff: embed_rf(&t.coeff, f)?,
                symbol: t.symbol.iter().map(|g| embed_rf(g, f)).collect::<R<Vec<_>>>()?,
            })
        })
        .collect::<R<Vec<_>>>()?;
    RfMwElem::new(f, m.degree, terms).map_err(ev)
}

fn mw_to_rfmw(m: &MwElem) -> R<RfMwElem> {
    if m.degree() < 0 {
        return Err(ty("eta powers have no function-field lift here"));
    }
    let mut terms = Vec::new();
    for t in m.terms() {
        for (n, a) in t.coeff.terms() {
            terms.push(RfTerm {
                mult: n,
                coeff: RatFunc::constant(&a),
                symbol: t.symbol.iter().map(RatFunc::constant).collect(),
            });
        }
    }
    RfMwElem::new(m.field(), m.degree() as usize, terms).map_err(ev)
}

fn rfmw_mul(a: &RfMwElem, b: &RfMwElem) -> R<RfMwElem> {
    let mut terms = Vec::new();
    for s in &a.terms {
        for t in &b.terms {
            let mut symbol = s.symbol.clone();
            symbol.extend(t.symbol.iter().cloned());
            terms.push(RfTerm {
                mult: s.mult * t.mult,
                coeff: s.coeff.mul(&t.coeff),
                symbol,
            });
        }
    }
    RfMwElem::new(&a.field, a.degree + b.degree, terms).map_err(ev)
}

fn to_poly(v: &Value) -> Option<Poly> {
    match v {
        Value::Poly(p) => Some(p.clone()),
        Value::Scalar(e) => Some(Poly::constant(e.field(), e)),
        _ => None,
    }
}

fn to_rf(v: &Value) -> Option<RatFunc> {
    match v {
        Value::Rf(r) => Some(r.clone()),
        Value::Scalar(e) => Some(RatFunc::constant(e)),
        _ => None,
    }
}

fn to_rfmw(v: &Value) -> R<Option<RfMwElem>> {
    Ok(match v {
        Value::RfMw(m) => Some(m.clone()),
        Value::Mw(m) => Some(mw_to_rfmw(m)?),
        Value::Scalar(e) => match as_int(e) {
            Some(n) => Some(mw_to_rfmw(&MwElem::one(e.field()).int_mul(n))?),
            None => None,
        },
        _ => None,
    })
}

fn same_poly(a: &Poly, b: &Poly) -> R<(Poly, Poly)> {
    let f = join(a.field(), b.field())?;
    Ok((f.embed_poly(a).map_err(ev)?, f.embed_poly(b).map_err(ev)?))
}

fn same_rf(a: &RatFunc, b: &RatFunc) -> R<(RatFunc, RatFunc)> {
    let f = join(a.field(), b.field())?;
    Ok((embed_rf(a, &f)?, embed_rf(b, &f)?))
}

fn same_mw(a: &MwElem, b: &MwElem) -> R<(MwElem, MwElem)> {
    let f = join(a.field(), b.field())?;
    Ok((a.extend_to(&f).map_err(ev)?, b.extend_to(&f).map_err(ev)?))
}

fn same_rfmw(a: &RfMwElem, b: &RfMwElem) -> R<(RfMwElem, RfMwElem)> {
    let f = join(&a.field, &b.field)?;
    Ok((embed_rfmw(a, &f)?, embed_rfmw(b, &f)?))
}

fn same_elem(a: &Elem, b: &Elem) -> R<(Elem, Elem)> {
    let f = join(a.field(), b.field())?;
    Ok((f.embed(a).map_err(ev)?, f.embed(b).map_err(ev)?))
}

/// A scalar read as an element of `K^MW_deg`: zero in any degree, integers in degree 0.
fn scalar_as_mw(e: &Elem, deg: i64) -> R<MwElem> {
    if e.is_zero() {
        return Ok(MwElem::zero(e.field(), deg));
    }
    match as_int(e) {
        Some(n) if deg == 0 => Ok(MwElem::one(e.field()).int_mul(n)),
        _ => Err(ty(format!("cannot read {} as an element of degree {}", e, deg))),
    }
}

fn is_t_or_x(v: &Value) -> bool {
    matches!(v, Value::Poly(_) | Value::Rf(_))
}

fn add(a: &Value, b: &Value) -> R<Value> {
    use Value::*;
    Ok(match (a, b) {
        (Scalar(x), Scalar(y)) => {
            let (x, y) = same_elem(x, y)?;
            Scalar(x.add(&y))
        }
        (Poly(_), Rf(_)) | (Rf(_), Poly(_)) => return Err(ty("x and t cannot be mixed")),
        (Poly(_), Scalar(_)) | (Scalar(_), Poly(_)) | (Poly(_), Poly(_)) => {
            let (x, y) = same_poly(&to_poly(a).unwrap(), &to_poly(b).unwrap())?;
            Poly(x.add(&y))
        }
        (Rf(_), Scalar(_)) | (Scalar(_), Rf(_)) | (Rf(_), Rf(_)) => {
            let (x, y) = same_rf(&to_rf(a).unwrap(), &to_rf(b).unwrap())?;
            Rf(x.add(&y))
        }
        (Mw(x), Mw(y)) => {
            let (x, y) = same_mw(x, y)?;
            Mw(x.add(&y).map_err(ev)?)
        }
        (Mw(x), Scalar(e)) | (Scalar(e), Mw(x)) => {
            let (x, y) = same_mw(x, &scalar_as_mw(e, x.degree())?)?;
            Mw(x.add(&y).map_err(ev)?)
        }
        (RfMw(_), _) | (_, RfMw(_)) => match (to_rfmw(a)?, to_rfmw(b)?) {
            (Some(x), Some(y)) => {
                let (x, y) = same_rfmw(&x, &y)?;
                RfMw(x.add(&y).map_err(ev)?)
            }
            _ => return Err(ty(format!("cannot add {} and {}", a.kind(), b.kind()))),
        },
        (Corr(x), Corr(y)) => Corr(x.add(y).map_err(ev)?),
        (Corr(x), Scalar(e)) | (Scalar(e), Corr(x)) if e.is_zero() => Corr(x.clone()),
        (Trace(t), _) => add(&Corr(t.after.clone()), b)?,
        (_, Trace(t)) => add(a, &Corr(t.after.clone()))?,
        _ => return Err(ty(format!("cannot add {} and {}", a.kind(), b.kind()))),
    })
}

fn neg(a: &Value) -> R<Value> {
    use Value::*;
    Ok(match a {
        Scalar(x) => Scalar(x.neg()),
        Poly(p) => Poly(p.neg()),
        Rf(r) => Rf(r.neg()),
        Mw(m) => Mw(m.neg()),
        RfMw(m) => RfMw(m.scale(-1, &RatFunc::constant(&m.field.one()))),
        Corr(c) => Corr(c.neg()),
        Trace(t) => Corr(t.after.neg()),
        _ => return Err(ty(format!("cannot negate {}", a.kind()))),
    })
}

fn mul(a: &Value, b: &Value) -> R<Value> {
    use Value::*;
    let int_of = |v: &Value| match v {
        Scalar(e) => as_int(e),
        _ => None,
    };
    Ok(match (a, b) {
        (Scalar(x), Scalar(y)) => {
            let (x, y) = same_elem(x, y)?;
            Scalar(x.mul(&y))
        }
        (Poly(_), Rf(_)) | (Rf(_), Poly(_)) => return Err(ty("x and t cannot be mixed")),
        (Poly(_), Scalar(_)) | (Scalar(_), Poly(_)) | (Poly(_), Poly(_)) => {
            let (x, y) = same_poly(&to_poly(a).unwrap(), &to_poly(b).unwrap())?;
            Poly(x.mul(&y))
        }
        (Rf(_), Scalar(_)) | (Scalar(_), Rf(_)) | (Rf(_), Rf(_)) => {
            let (x, y) = same_rf(&to_rf(a).unwrap(), &to_rf(b).unwrap())?;
            Rf(x.mul(&y))
        }
        (Mw(x), Mw(y)) => {
            let (x, y) = same_mw(x, y)?;
            Mw(x.mul(&y).map_err(ev)?)
        }
        (Mw(m), Scalar(_)) | (Scalar(_), Mw(m)) => {
            let (n, e) = if let Scalar(e) = a { (int_of(a), e) } else if let Scalar(e) = b { (int_of(b), e) } else { unreachable!() };
            match n {
                Some(n) => {
                    let (m, _) = same_mw(m, &MwElem::one(e.field()))?;
                    Mw(m.int_mul(n))
                }
                None => return Err(ty(format!("{} is not an integer; write <{}> for the form", e, e))),
            }
        }
        (RfMw(_), _) | (_, RfMw(_)) => match (to_rfmw(a)?, to_rfmw(b)?) {
            (Some(x), Some(y)) => {
                let (x, y) = same_rfmw(&x, &y)?;
                RfMw(rfmw_mul(&x, &y)?)
            }
            _ => return Err(ty(format!("cannot multiply {} and {}", a.kind(), b.kind()))),
        },
        (Corr(x), Corr(y)) => Corr(x.mul(y).map_err(ev)?),
        (Corr(c), Scalar(_)) | (Scalar(_), Corr(c)) => match int_of(a).or(int_of(b)) {
            Some(n) => Corr(c.scale(n)),
            None => return Err(ty("correspondences are scaled by integers")),
        },
        (Trace(t), _) => mul(&Corr(t.after.clone()), b)?,
        (_, Trace(t)) => mul(a, &Corr(t.after.clone()))?,
        _ => return Err(ty(format!("cannot multiply {} and {}", a.kind(), b.kind()))),
    })
}

fn div(a: &Value, b: &Value) -> R<Value> {
    use Value::*;
    Ok(match (a, b) {
        (Scalar(x), Scalar(y)) => {
            let (x, y) = same_elem(x, y)?;
            Scalar(x.div(&y).map_err(ev)?)
        }
        (Poly(p), Scalar(e)) => {
            let (p, c) = same_poly(p, &crate::algebra::Poly::constant(e.field(), e))?;
            Poly(p.scale(&c.coeff(0).inv().map_err(ev)?))
        }
        (Poly(x), Poly(y)) => {
            let (x, y) = same_poly(x, y)?;
            Poly(x.div_exact(&y).ok_or_else(|| ty(format!("{} does not divide {}", y.fmt_var("x"), x.fmt_var("x"))))?)
        }
        (Rf(_), Scalar(_)) | (Scalar(_), Rf(_)) | (Rf(_), Rf(_)) => {
            let (x, y) = same_rf(&to_rf(a).unwrap(), &to_rf(b).unwrap())?;
            Rf(x.mul(&y.inv().map_err(ev)?))
        }
        _ => return Err(ty(format!("cannot divide {} by {}", a.kind(), b.kind()))),
    })
}

fn pow(a: &Value, k: i64) -> R<Value> {
    use Value::*;
    let repeat = |one: Value, k: i64| -> R<Value> {
        if k < 0 {
            return Err(ty(format!("negative power of {}", a.kind())));
        }
        let mut acc = one;
        for _ in 0..k {
            acc = mul(&acc, a)?;
        }
        Ok(acc)
    };
    match a {
        Scalar(e) => Ok(Scalar(e.powi(k).map_err(ev)?)),
        Poly(p) => {
            if k < 0 {
                return Err(ty("negative power of a polynomial in x"));
            }
            Ok(Poly(p.pow(k as u32)))
        }
        Rf(r) => {
            let base = if k < 0 { r.inv().map_err(ev)? } else { r.clone() };
            let mut acc = RatFunc::constant(&r.field().one());
            for _ in 0..k.unsigned_abs() {
                acc = acc.mul(&base);
            }
            Ok(Rf(acc))
        }
        Mw(m) => repeat(Mw(MwElem::one(m.field())), k),
        Corr(_) | Trace(_) if k >= 1 => {
            let mut acc = a.clone();
            for _ in 1..k {
                acc = mul(&acc, a)?;
            }
            Ok(acc)
        }
        _ => Err(ty(format!("cannot raise {} to a power", a.kind()))),
    }
}

fn want_field(v: &Value) -> R<Field> {
    match v {
        Value::Field(f) => Ok(f.clone()),
        _ => Err(ty(format!("expected a field, found {}", v.kind()))),
    }
}

fn want_mw(v: &Value) -> R<MwElem> {
    match v {
        Value::Mw(m) => Ok(m.clone()),
        Value::Scalar(e) => scalar_as_mw(e, 0),
        _ => Err(ty(format!("expected a Milnor-Witt element, found {}", v.kind()))),
    }
}

fn want_corr(v: &Value) -> R<FormalCorr> {
    match v {
        Value::Corr(c) => Ok(c.clone()),
        Value::Trace(t) => Ok(t.after.clone()),
        _ => Err(ty(format!("expected a correspondence, found {}", v.kind()))),
    }
}

fn want_index(v: &Value) -> R<usize> {
    match v {
        Value::Scalar(e) => as_int(e)
            .and_then(|n| usize::try_from(n).ok())
            .ok_or_else(|| ty(format!("expected an axis index, found {}", e))),
        _ => Err(ty(format!("expected an axis index, found {}", v.kind()))),
    }
}

fn want_poly_in(v: &Value, f: &Field) -> R<Poly> {
    let p = to_poly(v).ok_or_else(|| ty(format!("expected a polynomial in x, found {}", v.kind())))?;
    if f.is_subfield_of(p.field()) && f != p.field() {
        // coefficients written with a larger field's generators may still lie in f
        if let Some(c) = p.coeffs().iter().map(|e| e.descend(f)).collect::<Option<Vec<_>>>() {
            return Ok(Poly::new(f, c));
        }
    }
    f.embed_poly(&p).map_err(ev)
}

fn want_diag(v: &Value) -> R<DiagForm> {
    let m = want_mw(v)?;
    let g = m.as_gw().map_err(ev)?;
    if !g.minus().is_empty() {
        return Err(ty(format!("{} is a virtual form", g)));
    }
    DiagForm::new(g.field(), g.plus().to_vec()).map_err(ev)
}

fn arity(name: &str, args: &[Value], n: &[usize]) -> R<()> {
    if n.contains(&args.len()) {
        Ok(())
    } else {
        Err(ty(format!("{} takes {:?} arguments, got {}", name, n, args.len())))
    }
}

fn map_terms(c: &FormalCorr, f: impl Fn(&CorrTerm) -> crate::error::Result<CorrTerm>) -> R<FormalCorr> {
    let mut out: Option<FormalCorr> = None;
    for (n, t) in c.terms() {
        let u = FormalCorr::from_term(f(t).map_err(ev)?).scale(*n);
        out = Some(match out {
            None => u,
            Some(o) => o.add(&u).map_err(ev)?,
        });
    }
    out.ok_or_else(|| ty("empty correspondence"))
}

fn known(b: bool) -> Decision {
    Decision::from_bool(b)
}

fn equal(a: &Value, b: &Value) -> R<Decision> {
    use Value::*;
    Ok(match (a, b) {
        (Scalar(x), Scalar(y)) => {
            let (x, y) = same_elem(x, y)?;
            known(x == y)
        }
        (Poly(_), _) | (_, Poly(_)) => match (to_poly(a), to_poly(b)) {
            (Some(x), Some(y)) => {
                let (x, y) = same_poly(&x, &y)?;
                known(x == y)
            }
            _ => return Err(ty(format!("cannot compare {} and {}", a.kind(), b.kind()))),
        },
        (Rf(_), _) | (_, Rf(_)) => match (to_rf(a), to_rf(b)) {
            (Some(x), Some(y)) => {
                let (x, y) = same_rf(&x, &y)?;
                known(x == y)
            }
            _ => return Err(ty(format!("cannot compare {} and {}", a.kind(), b.kind()))),
        },
        (Field(x), Field(y)) => known(x == y),
        (Decision(x), Decision(y)) => known(x == y),
        (Corr(_) | Trace(_), _) => equal(&Mw(phi(&want_corr(a)?).map_err(ev)?), b)?,
        (_, Corr(_) | Trace(_)) => equal(a, &Mw(phi(&want_corr(b)?).map_err(ev)?))?,
        (Mw(x), Mw(y)) => {
            let (x, y) = same_mw(x, y)?;
            mw_equal(&x, &y).map_err(ev)?
        }
        (Mw(x), Scalar(e)) | (Scalar(e), Mw(x)) => {
            let (x, y) = same_mw(x, &scalar_as_mw(e, x.degree())?)?;
            mw_equal(&x, &y).map_err(ev)?
        }
        _ => return Err(ty(format!("cannot compare {} and {}", a.kind(), b.kind()))),
    })
}

impl Session {
    pub fn new(budget: usize) -> Session {
        Session {
            vars: BTreeMap::new(),
            budget,
            steps: 0,
            traces: vec![],
        }
    }

    /// Parses and evaluates one line; `None` for blank and comment lines.
    pub fn run(&mut self, line: &str) -> R<Option<Outcome>> {
        match parse_stmt(line)? {
            None => Ok(None),
            Some(s) => self.exec(&s).map(Some),
        }
    }

    pub fn exec(&mut self, s: &Stmt) -> R<Outcome> {
        self.steps = 0;
        self.traces.clear();
        let value = match s {
            Stmt::Let(name, e) => {
                if RESERVED.contains(&name.as_str()) {
                    return Err(ty(format!("'{}' is reserved", name)));
                }
                let v = self.eval(e)?;
                self.vars.insert(name.clone(), v.clone());
                v
            }
            Stmt::Expr(e) => self.eval(e)?,
        };
        Ok(Outcome {
            value,
            provenance: std::mem::take(&mut self.traces),
        })
    }

    fn tick(&mut self) -> R<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(ev(Error::BudgetExhausted));
        }
        Ok(())
    }

    pub fn eval(&mut self, e: &Expr) -> R<Value> {
        self.tick()?;
        match e {
            Expr::Int(n) => Ok(Value::Scalar(q().from_rat(&Rat::from_integer(n.clone())))),
            Expr::Var(name) => self.var(name),
            Expr::Form(inner) => match self.eval(inner)? {
                Value::Scalar(a) => Ok(Value::Mw(MwElem::one_form(&a).map_err(ev)?)),
                Value::Rf(r) => {
                    let f = r.field().clone();
                    let term = RfTerm {
                        mult: 1,
                        coeff: r,
                        symbol: vec![],
                    };
                    Ok(Value::RfMw(RfMwElem::new(&f, 0, vec![term]).map_err(ev)?))
                }
                v => Err(ty(format!("<...> takes a unit, found {}", v.kind()))),
            },
            Expr::Symbol(es) => {
                let vals = es.iter().map(|e| self.eval(e)).collect::<R<Vec<_>>>()?;
                if vals.iter().all(|v| matches!(v, Value::Scalar(_))) {
                    let mut f = q();
                    for v in &vals {
                        f = join(&f, v.field().as_ref().unwrap())?;
                    }
                    let entries = vals
                        .iter()
                        .map(|v| match v {
                            Value::Scalar(a) => f.embed(a).map_err(ev),
                            _ => unreachable!(),
                        })
                        .collect::<R<Vec<_>>>()?;
                    return Ok(Value::Mw(MwElem::symbol(&f, &entries).map_err(ev)?));
                }
                let rfs = vals
                    .iter()
                    .map(|v| to_rf(v).ok_or_else(|| ty(format!("symbol entries are units, found {}", v.kind()))))
                    .collect::<R<Vec<_>>>()?;
                let mut f = q();
                for r in &rfs {
                    f = join(&f, r.field())?;
                }
                let rfs = rfs.iter().map(|r| embed_rf(r, &f)).collect::<R<Vec<_>>>()?;
                Ok(Value::RfMw(RfMwElem::symbol(rfs).map_err(ev)?))
            }
            Expr::Neg(a) => {
                let v = self.eval(a)?;
                neg(&v)
            }
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add => add(&x, &y),
                    BinOp::Sub => add(&x, &neg(&y)?),
                    BinOp::Mul => mul(&x, &y),
                    BinOp::Div => div(&x, &y),
                }
            }
            Expr::Pow(b, k) => {
                let v = self.eval(b)?;
                pow(&v, *k)
            }
            Expr::Field(gens) => self.field(gens),
            Expr::Corr { field, over, axes } => self.corr(field, over.as_deref(), axes),
            Expr::Call(name, args) => self.call(name, args),
        }
    }

    fn var(&self, name: &str) -> R<Value> {
        Ok(match name {
            "x" => Value::Poly(Poly::x(&q())),
            "t" => Value::Rf(RatFunc::from_poly(&Poly::x(&q()))),
            "eta" => Value::Mw(MwElem::eta(&q())),
            "h" => Value::Mw(MwElem::from_gw(&GwElem::h(&q()))),
            "inf" => Value::Infinity,
            _ => self
                .vars
                .get(name)
                .cloned()
                .ok_or_else(|| ty(format!("unbound name '{}'", name)))?,
        })
    }

    fn field(&mut self, gens: &[(String, Expr)]) -> R<Value> {
        let mut f = q();
        for (g, p) in gens {
            if RESERVED.contains(&g.as_str()) {
                return Err(ty(format!("'{}' is reserved", g)));
            }
            // the defining polynomial is read with the generator as the variable
            let saved = self.vars.insert(g.clone(), Value::Poly(Poly::x(&f)));
            let mp = self.eval(p);
            match saved {
                Some(v) => self.vars.insert(g.clone(), v),
                None => self.vars.remove(g),
            };
            let mp = match mp? {
                Value::Poly(m) => f.embed_poly(&m).map_err(ev)?,
                v => return Err(ty(format!("defining polynomial of {} is a {}", g, v.kind()))),
            };
            f = Field::extension(&f, &mp, g).map_err(ev)?;
        }
        // generators become visible to later expressions
        for k in f.tower() {
            if let Some(n) = k.name() {
                self.vars.insert(n.to_string(), Value::Scalar(f.embed(&k.generator()).map_err(ev)?));
            }
        }
        Ok(Value::Field(f))
    }

    fn corr(&mut self, field: &Expr, over: Option<&Expr>, axes: &[AxisExpr]) -> R<Value> {
        let l = want_field(&self.eval(field)?)?;
        let k = match over {
            Some(e) => want_field(&self.eval(e)?)?,
            None => q(),
        };
        let mut specs = Vec::new();
        for a in axes {
            let framing = want_poly_in(&self.eval(&a.framing)?, &l)?;
            let target = match &a.target {
                None | Some(TargetExpr::Point) => TargetRole::Point,
                Some(TargetExpr::Coord) => TargetRole::Coordinate,
                Some(TargetExpr::Const(c)) => match self.eval(c)? {
                    Value::Scalar(c) => TargetRole::Constant(l.embed(&c).map_err(ev)?),
                    v => return Err(ty(format!("constant target must be a unit, found {}", v.kind()))),
                },
            };
            let excluded = match &a.excl {
                Some(e) => want_poly_in(&self.eval(e)?, &l)?,
                None if target == TargetRole::Coordinate => Poly::x(&l),
                None => Poly::one(&l),
            };
            specs.push(AxisSpec::new(framing, excluded, target).map_err(ev)?);
        }
        let t = CorrTerm::new(&k, &l, specs).map_err(ev)?;
        Ok(Value::Corr(FormalCorr::from_term(t)))
    }

    fn call(&mut self, name: &str, args: &[Expr]) -> R<Value> {
        if name == "moves.apply" {
            return self.apply_move(args);
        }
        let vals = args.iter().map(|a| self.eval(a)).collect::<R<Vec<_>>>()?;
        let v = &vals;
        match name {
            "n_eps" => {
                arity(name, v, &[1])?;
                let n = match &v[0] {
                    Value::Scalar(e) => as_int(e),
                    _ => None,
                }
                .ok_or_else(|| ty("n_eps takes an integer"))?;
                Ok(Value::Mw(MwElem::from_gw(&GwElem::n_epsilon(&q(), n))))
            }
            "tr" => match v.len() {
                1 => {
                    let c = want_corr(&v[0])?;
                    Ok(Value::Corr(map_terms(&c, corr_transfer)?))
                }
                2 | 3 => {
                    let l = want_field(&v[0])?;
                    let k = if v.len() == 3 { want_field(&v[1])? } else { l.base() };
                    let x = want_mw(v.last().unwrap())?.extend_to(&l).map_err(ev)?;
                    Ok(Value::Mw(transfer(&x, &k).map_err(ev)?))
                }
                _ => arity(name, v, &[1, 2, 3]).map(|_| unreachable!()),
            },
            "phi" => {
                arity(name, v, &[1])?;
                Ok(Value::Mw(phi(&want_corr(&v[0])?).map_err(ev)?))
            }
            "psi" => {
                arity(name, v, &[1])?;
                Ok(Value::Corr(psi(&want_mw(&v[0])?).map_err(ev)?))
            }
            "roundtrip" => {
                arity(name, v, &[1])?;
                Ok(Value::Decision(roundtrip_check(&want_mw(&v[0])?).map_err(ev)?))
            }
            "residue" => {
                arity(name, v, &[2])?;
                let x = to_rfmw(&v[1])?.ok_or_else(|| ty(format!("cannot take a residue of {}", v[1].kind())))?;
                let (place, x) = match &v[0] {
                    Value::Infinity => (FnPlace::Infinity, x),
                    p if is_t_or_x(p) || matches!(p, Value::Scalar(_)) => {
                        let r = to_rf(p).ok_or_else(|| ty("places are written as polynomials in t"))?;
                        if !r.den().is_one() {
                            return Err(ty("places are written as polynomials in t"));
                        }
                        let f = join(r.field(), &x.field)?;
                        let pl = f.embed_poly(r.num()).map_err(ev)?;
                        (FnPlace::Finite(pl.monic()), embed_rfmw(&x, &f)?)
                    }
                    p => return Err(ty(format!("expected a place, found {}", p.kind()))),
                };
                let (_, m) = residue(&x, &place, "r").map_err(ev)?;
                Ok(Value::Mw(m))
            }
            "equal" => {
                arity(name, v, &[2])?;
                Ok(Value::Decision(equal(&v[0], &v[1])?))
            }
            "invariants" => {
                arity(name, v, &[1])?;
                let m = want_mw(&v[0])?;
                Ok(Value::Invariants(m.as_gw().map_err(ev)?.invariants()))
            }
            "degree" => {
                arity(name, v, &[1])?;
                Ok(Value::Int(match &v[0] {
                    Value::Corr(_) | Value::Trace(_) => want_corr(&v[0])?.degree().map_err(ev)? as i64,
                    Value::Field(f) => f.abs_degree() as i64,
                    Value::Mw(m) => m.degree(),
                    Value::Poly(p) => p.deg(),
                    o => return Err(ty(format!("{} has no degree", o.kind()))),
                }))
            }
            "normalize" => {
                arity(name, v, &[1])?;
                Ok(match &v[0] {
                    Value::Trace(t) => Value::Corr(t.after.clone()),
                    o => o.clone(),
                })
            }
            "stabilize" => {
                arity(name, v, &[1])?;
                Ok(Value::Corr(map_terms(&want_corr(&v[0])?, |t| Ok(corr_stabilize(t)))?))
            }
            "ceta" => {
                arity(name, v, &[1])?;
                Ok(Value::Corr(corr_eta(&want_corr(&v[0])?, true).map_err(ev)?))
            }
            "chain" => {
                arity(name, v, &[2])?;
                let (f, g) = (want_diag(&v[0])?, want_diag(&v[1])?);
                Ok(Value::Chain(chain_equivalence_search(&f, &g, self.budget).map_err(ev)?))
            }
            "certify" => {
                arity(name, v, &[1])?;
                match &v[0] {
                    Value::Trace(t) => {
                        let c = t.certify().map_err(ev)?;
                        let d = Decision::from_bool(c.degree_preserved).and(c.phi_preserved.unwrap_or(Decision::Unknown));
                        Ok(Value::Decision(d))
                    }
                    o => Err(ty(format!("certify takes a move trace, found {}", o.kind()))),
                }
            }
            _ => Err(ty(format!("unknown function '{}'", name))),
        }
    }

    fn apply_move(&mut self, args: &[Expr]) -> R<Value> {
        let name = match args.first() {
            Some(Expr::Var(n)) => n.clone(),
            _ => return Err(ty("moves.apply takes a move name first")),
        };
        let vals = args[1..].iter().map(|a| self.eval(a)).collect::<R<Vec<_>>>()?;
        let c = want_corr(vals.first().ok_or_else(|| ty("moves.apply needs a correspondence"))?)?;
        let tr = apply_named_move(&name, &c, &vals[1..])?;
        let out = Value::Trace(Box::new(tr.clone()));
        self.traces.push(tr);
        Ok(out)
    }
}

pub(crate) fn apply_named_move(name: &str, c: &FormalCorr, rest: &[Value]) -> R<MoveTrace> {
    let t = match c.terms() {
        [(1, t)] => t,
        _ => return Err(ty("moves apply to a single term with coefficient 1")),
    };
    let f = t.field().clone();
    let need = |n: usize| -> R<()> {
        if rest.len() == n {
            Ok(())
        } else {
            Err(ty(format!("{} takes {} arguments after the correspondence", name, n)))
        }
    };
    Ok(match name {
        "same_leading" => {
            need(2)?;
            move_same_leading(t, want_index(&rest[0])?, &want_poly_in(&rest[1], &f)?)
        }
        "split_roots" => {
            need(1)?;
            move_split_roots(t, want_index(&rest[0])?)
        }
        "deform_gm" => {
            need(2)?;
            move_deform_gm(t, want_index(&rest[0])?, &want_poly_in(&rest[1], &f)?)
        }
        "unit_rescale" => {
            need(2)?;
            move_unit_rescale(t, want_index(&rest[0])?, &want_poly_in(&rest[1], &f)?)
        }
        "add_axis" => {
            need(1)?;
            let c = match &rest[0] {
                Value::Scalar(e) => f.embed(e).map_err(ev)?,
                o => return Err(ty(format!("add_axis takes a constant, found {}", o.kind()))),
            };
            move_add_axis(t, &c)
        }
        "remove_axis" => {
            need(1)?;
            move_remove_axis(t, want_index(&rest[0])?)
        }
        "swap_axes" => {
            need(2)?;
            move_swap_axes(t, want_index(&rest[0])?, want_index(&rest[1])?)
        }
        _ => return Err(ty(format!("unknown move '{}'", name))),
    }
    .map_err(ev)?)
}
