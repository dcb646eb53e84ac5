use std::fmt;

use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    fn sym(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetExpr {
    Point,
    Coord,
    Const(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisExpr {
    pub framing: Expr,
    pub excl: Option<Expr>,
    pub target: Option<TargetExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Form(Box<Expr>),
    Symbol(Vec<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(String, Vec<Expr>),
    /// `Q(a|p)(b|q)...`: a tower of simple extensions of the rationals.
    Field(Vec<(String, Expr)>),
    Corr {
        field: Box<Expr>,
        over: Option<Box<Expr>>,
        axes: Vec<AxisExpr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Let(String, Expr),
    Expr(Expr),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Bin(op, _, _) => op.prec(),
            Expr::Neg(_) => 3,
            Expr::Pow(_, _) => 4,
            _ => 5,
        }
    }
}

fn wrap(e: &Expr, paren: bool) -> String {
    if paren {
        format!("({})", e)
    } else {
        e.to_string()
    }
}

fn list(es: &[Expr]) -> String {
    es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for AxisExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axis({}", self.framing)?;
        if let Some(q) = &self.excl {
            write!(f, "; excl={}", q)?;
        }
        match &self.target {
            None => {}
            Some(TargetExpr::Point) => write!(f, "; target=point")?,
            Some(TargetExpr::Coord) => write!(f, "; target=coord")?,
            Some(TargetExpr::Const(c)) => write!(f, "; target=const {}", c)?,
        }
        write!(f, ")")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{}", n),
            Expr::Var(s) => write!(f, "{}", s),
            Expr::Form(e) => write!(f, "<{}>", e),
            Expr::Symbol(es) => write!(f, "[{}]", list(es)),
            Expr::Neg(e) => write!(f, "-{}", wrap(e, e.prec() < 3)),
            Expr::Bin(op, a, b) => {
                let p = op.prec();
                write!(f, "{}{}{}", wrap(a, a.prec() < p), op.sym(), wrap(b, b.prec() <= p))
            }
            Expr::Pow(b, k) => write!(f, "{}^{}", wrap(b, b.prec() < 5), k),
            Expr::Call(name, args) => write!(f, "{}({})", name, list(args)),
            Expr::Field(gens) => {
                write!(f, "Q")?;
                for (g, p) in gens {
                    write!(f, "({}|{})", g, p)?;
                }
                Ok(())
            }
            Expr::Corr { field, over, axes } => {
                write!(f, "corr({}", field)?;
                if let Some(k) = over {
                    write!(f, "; over={}", k)?;
                }
                if !axes.is_empty() {
                    let s: Vec<String> = axes.iter().map(|a| a.to_string()).collect();
                    write!(f, "; {}", s.join(", "))?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Let(n, e) => write!(f, "let {} = {}", n, e),
            Stmt::Expr(e) => write!(f, "{}", e),
        }
    }
}
